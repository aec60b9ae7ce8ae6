//! Lazily enumerated countable labelled graphs: walks, loops through the
//! root, return counts and entropy estimates.

mod families;

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::seqcore::Symbol;

pub use families::{
    chain_index, u_id, v_id, FiniteGraph, GammaBeta, GammaDoublePrime, GammaEnt, GammaPrime, GammaS,
};

pub type Vertex = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub target: Vertex,
    pub label: Symbol,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    GammaS,
    GammaBeta,
    GammaPrime,
    GammaDoublePrime,
    GammaEnt,
    FiniteSft,
    Custom,
}

/// A labelled graph given by its out-edge function.
///
/// Vertex 0 is the root unless `root` says otherwise. Out-edge lists are
/// deterministic and finite; vertices far from the root are only touched
/// when a walk reaches them.
pub trait LabelledGraph: Send + Sync {
    fn family(&self) -> Family;

    fn root(&self) -> Vertex {
        0
    }

    fn out_edges(&self, v: Vertex) -> Vec<Edge>;

    /// Start vertices that suffice to read every word of length `len` in
    /// the presented language.
    fn start_candidates(&self, len: usize) -> Vec<Vertex>;

    /// Lower bound on the length of a path from `v` back to the root,
    /// `None` when no such path exists.
    fn min_return_len(&self, v: Vertex) -> Option<usize>;

    /// Number of vertices for finite graphs.
    fn vertex_bound(&self) -> Option<usize> {
        None
    }
}

/// Terminal vertices of all paths from `start` labelled `w`.
pub fn word_walk(g: &dyn LabelledGraph, start: Vertex, w: &[Symbol]) -> BTreeSet<Vertex> {
    walk_from(g, BTreeSet::from([start]), w)
}

fn walk_from(g: &dyn LabelledGraph, mut cur: BTreeSet<Vertex>, w: &[Symbol]) -> BTreeSet<Vertex> {
    for &s in w {
        if cur.is_empty() {
            break;
        }
        let mut next = BTreeSet::new();
        for &v in &cur {
            for e in g.out_edges(v) {
                if e.label == s {
                    next.insert(e.target);
                }
            }
        }
        cur = next;
    }
    cur
}

/// Whether `w` labels some path of the graph.
pub fn readable(g: &dyn LabelledGraph, w: &[Symbol]) -> bool {
    let starts: BTreeSet<Vertex> = g.start_candidates(w.len()).into_iter().collect();
    !walk_from(g, starts, w).is_empty()
}

pub fn right_resolving_check(g: &dyn LabelledGraph, vertex_bound: u64) -> bool {
    let bound = match g.vertex_bound() {
        Some(n) => vertex_bound.min(n.saturating_sub(1) as u64),
        None => vertex_bound,
    };
    (0..=bound).all(|v| {
        let mut labels: Vec<Symbol> = g.out_edges(v).iter().map(|e| e.label).collect();
        let n = labels.len();
        labels.sort_unstable();
        labels.dedup();
        labels.len() == n
    })
}

pub const MAX_LOOP_LEN: usize = 64;
pub const MAX_LOOP_LABELS: usize = 1 << 20;

/// Distinct labels of closed paths at the root of length `1..=max_len`,
/// shortest first.
pub fn loops_through(g: &dyn LabelledGraph, max_len: usize) -> Result<Vec<Vec<Symbol>>> {
    if max_len > MAX_LOOP_LEN {
        return Err(Error::LimitExceeded(format!(
            "loop length {max_len} above the guard {MAX_LOOP_LEN}"
        )));
    }
    let root = g.root();
    let mut out = BTreeSet::new();
    let mut label = Vec::with_capacity(max_len);
    let mut steps = 0usize;
    loops_dfs(g, root, root, max_len, &mut label, &mut out, &mut steps)?;
    let mut v: Vec<Vec<Symbol>> = out.into_iter().collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(v)
}

fn loops_dfs(
    g: &dyn LabelledGraph,
    root: Vertex,
    v: Vertex,
    max_len: usize,
    label: &mut Vec<Symbol>,
    out: &mut BTreeSet<Vec<Symbol>>,
    steps: &mut usize,
) -> Result<()> {
    *steps += 1;
    if *steps > 64 * MAX_LOOP_LABELS {
        return Err(Error::LimitExceeded("loop enumeration step budget".into()));
    }
    if v == root && !label.is_empty() {
        out.insert(label.clone());
        if out.len() > MAX_LOOP_LABELS {
            return Err(Error::LimitExceeded("too many loop labels".into()));
        }
    }
    if label.len() == max_len {
        return Ok(());
    }
    let mut edges = g.out_edges(v);
    edges.sort_by_key(|e| (e.label, e.target));
    edges.dedup();
    for e in edges {
        let remaining = max_len - label.len() - 1;
        match g.min_return_len(e.target) {
            Some(d) if d <= remaining => {}
            _ => continue,
        }
        label.push(e.label);
        loops_dfs(g, root, e.target, max_len, label, out, steps)?;
        label.pop();
    }
    Ok(())
}

/// Return counts at the root and the derived entropy estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyCounts {
    /// `r_0..=r_N`: closed paths at the root.
    pub r: Vec<BigUint>,
    /// `l_0..=l_N`: first-return paths (`l_0 = 0`).
    pub l: Vec<BigUint>,
    /// `(1/n) ln r_n` for `n >= 1` (index 0 unused), `None` when `r_n = 0`.
    pub est_r: Vec<Option<f64>>,
    pub est_l: Vec<Option<f64>>,
    /// Terminal `est_r` minus `max_n (1/n) ln l_n` over `n` with `l_n > 0`.
    pub spr_margin: Option<f64>,
}

pub const MAX_RETURN_N: usize = 200;

/// Natural logarithm of a big integer.
pub fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift as usize).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn return_counts(g: &dyn LabelledGraph, n_max: usize) -> Result<EntropyCounts> {
    if n_max > MAX_RETURN_N {
        return Err(Error::LimitExceeded(format!(
            "nMax {n_max} above {MAX_RETURN_N}"
        )));
    }
    let root = g.root();
    let mut r = vec![BigUint::one()];
    let mut l = vec![BigUint::zero()];
    let mut all: HashMap<Vertex, BigUint> = HashMap::from([(root, BigUint::one())]);
    // First-return paths: mass never re-leaves the root after step 0.
    let mut first: HashMap<Vertex, BigUint> = HashMap::from([(root, BigUint::one())]);
    let mut edges_cache: HashMap<Vertex, Vec<Edge>> = HashMap::new();
    for step in 1..=n_max {
        let mut next_all: HashMap<Vertex, BigUint> = HashMap::new();
        let mut next_first: HashMap<Vertex, BigUint> = HashMap::new();
        for (v, c) in &all {
            let es = edges_cache.entry(*v).or_insert_with(|| g.out_edges(*v));
            for e in es.iter() {
                if g.min_return_len(e.target)
                    .is_some_and(|d| step + d <= n_max)
                {
                    *next_all.entry(e.target).or_default() += c;
                }
            }
        }
        for (v, c) in &first {
            if *v == root && step > 1 {
                continue;
            }
            let es = edges_cache.entry(*v).or_insert_with(|| g.out_edges(*v));
            for e in es.iter() {
                if g.min_return_len(e.target)
                    .is_some_and(|d| step + d <= n_max)
                {
                    *next_first.entry(e.target).or_default() += c;
                }
            }
        }
        r.push(next_all.get(&root).cloned().unwrap_or_default());
        l.push(next_first.get(&root).cloned().unwrap_or_default());
        next_first.retain(|v, _| *v != root);
        all = next_all;
        first = next_first;
    }
    let est = |xs: &[BigUint]| -> Vec<Option<f64>> {
        xs.iter()
            .enumerate()
            .map(|(n, x)| (n > 0 && !x.is_zero()).then(|| big_ln(x) / n as f64))
            .collect()
    };
    let est_r = est(&r);
    let est_l = est(&l);
    let spr_margin = match est_r.last().copied().flatten() {
        Some(t) if n_max > 0 => {
            let m = est_l
                .iter()
                .flatten()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            m.is_finite().then_some(t - m)
        }
        _ => None,
    };
    Ok(EntropyCounts {
        r,
        l,
        est_r,
        est_l,
        spr_margin,
    })
}
