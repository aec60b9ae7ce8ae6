use std::collections::VecDeque;

use super::{Edge, Family, LabelledGraph, Vertex};
use crate::error::{Error, Result};
use crate::seqcore::Symbol;
use crate::systems::{BetaHat, GapSet, Substitution};

/// Vertex id of `v_i` in the two-chain graphs.
pub fn v_id(i: u64) -> Vertex {
    2 * i
}

/// Vertex id of `u_i` (`i >= 1`) in the two-chain graphs.
pub fn u_id(i: u64) -> Vertex {
    2 * i - 1
}

/// Chain index and whether the id is a `u` vertex.
pub fn chain_index(v: Vertex) -> (u64, bool) {
    if v.is_multiple_of(2) {
        (v / 2, false)
    } else {
        (v.div_ceil(2), true)
    }
}

/// `Γ_S`: `v_i → v_{i+1}` labelled 0 and `v_i → v_0` labelled 1 for `i ∈ S`.
#[derive(Clone, Debug)]
pub struct GammaS {
    pub s: GapSet,
}

impl LabelledGraph for GammaS {
    fn family(&self) -> Family {
        Family::GammaS
    }

    fn out_edges(&self, v: Vertex) -> Vec<Edge> {
        let mut e = vec![Edge {
            target: v + 1,
            label: 0,
        }];
        if self.s.contains(v) {
            e.push(Edge {
                target: 0,
                label: 1,
            });
        }
        e
    }

    fn start_candidates(&self, len: usize) -> Vec<Vertex> {
        (0..=len as u64).collect()
    }

    fn min_return_len(&self, v: Vertex) -> Option<usize> {
        if v == 0 {
            return Some(0);
        }
        self.s.next_at_least(v).map(|n| (n - v + 1) as usize)
    }
}

/// `Γ_β` built on `d̂_β`.
#[derive(Clone, Debug)]
pub struct GammaBeta {
    pub hat: BetaHat,
}

impl LabelledGraph for GammaBeta {
    fn family(&self) -> Family {
        Family::GammaBeta
    }

    /// Past a truncated `d̂_β` the graph is unknown and reported edgeless.
    fn out_edges(&self, v: Vertex) -> Vec<Edge> {
        let Some(d) = self.hat.digit(v as usize) else {
            return Vec::new();
        };
        let mut e = Vec::with_capacity(d as usize + 1);
        e.push(Edge {
            target: v + 1,
            label: d,
        });
        for label in 0..d {
            e.push(Edge { target: 0, label });
        }
        e
    }

    fn start_candidates(&self, _len: usize) -> Vec<Vertex> {
        vec![0]
    }

    fn min_return_len(&self, v: Vertex) -> Option<usize> {
        if v == 0 {
            return Some(0);
        }
        let horizon = match &self.hat {
            BetaHat::Periodic(x) => v as usize + x.preperiod().len() + x.period_len() + 1,
            BetaHat::Truncated(d) => d.len(),
        };
        for j in v as usize..horizon {
            match self.hat.digit(j) {
                Some(d) if d > 0 => return Some(j - v as usize + 1),
                Some(_) => {}
                None => return Some(1),
            }
        }
        match self.hat {
            BetaHat::Truncated(_) => Some(1),
            BetaHat::Periodic(_) => None,
        }
    }
}

/// `Γ'` (with the loop at `v_0`) or `Γ''` (without it).
///
/// `Γ'` labels an edge into `u_i` by `ω_i` and every other edge by 2;
/// `Γ''` labels forward edges 0 and backward and skew edges 1.
#[derive(Clone, Debug)]
pub struct GammaPrime {
    pub omega: Substitution,
}

#[derive(Clone, Debug, Default)]
pub struct GammaDoublePrime;

fn two_chain_edges(
    v: Vertex,
    fwd: impl Fn(u64) -> Symbol,
    back: Symbol,
    loop_label: Option<Symbol>,
) -> Vec<Edge> {
    let (i, is_u) = chain_index(v);
    let mut e = Vec::new();
    if is_u {
        e.push(Edge {
            target: u_id(i + 1),
            label: fwd(i + 1),
        });
        e.push(Edge {
            target: v_id(i - 1),
            label: back,
        });
    } else if i == 0 {
        if let Some(l) = loop_label {
            e.push(Edge {
                target: v_id(0),
                label: l,
            });
        }
        e.push(Edge {
            target: u_id(1),
            label: fwd(1),
        });
    } else {
        e.push(Edge {
            target: v_id(i - 1),
            label: back,
        });
    }
    e
}

fn two_chain_return(v: Vertex) -> usize {
    // v_i needs i backward steps; u_i a skew step to v_{i-1} then i-1 more.
    chain_index(v).0 as usize
}

impl LabelledGraph for GammaPrime {
    fn family(&self) -> Family {
        Family::GammaPrime
    }

    fn out_edges(&self, v: Vertex) -> Vec<Edge> {
        two_chain_edges(v, |i| self.omega.symbol(i as usize), 2, Some(2))
    }

    fn start_candidates(&self, len: usize) -> Vec<Vertex> {
        let n = len as u64;
        let w = self.omega.factor_window(len.max(1)) as u64 + n + 1;
        let mut c: Vec<Vertex> = (0..=n).map(v_id).collect();
        c.extend((1..=w).map(u_id));
        c
    }

    fn min_return_len(&self, v: Vertex) -> Option<usize> {
        Some(two_chain_return(v))
    }
}

impl LabelledGraph for GammaDoublePrime {
    fn family(&self) -> Family {
        Family::GammaDoublePrime
    }

    fn out_edges(&self, v: Vertex) -> Vec<Edge> {
        two_chain_edges(v, |_| 0, 1, None)
    }

    /// Starting deeper than `|w| + 1` never reaches `v_0` within `|w|` steps
    /// and reads the same words as depth `|w| + 1`.
    fn start_candidates(&self, len: usize) -> Vec<Vertex> {
        let n = len as u64 + 1;
        let mut c: Vec<Vertex> = (0..=n).map(v_id).collect();
        c.extend((1..=n).map(u_id));
        c
    }

    fn min_return_len(&self, v: Vertex) -> Option<usize> {
        Some(two_chain_return(v))
    }
}

/// Entropy-gap graph: `v_{i-1} → v_i` labelled `ω_i`, `v_i → v_0` labelled 2.
#[derive(Clone, Debug)]
pub struct GammaEnt {
    pub omega: Substitution,
}

impl LabelledGraph for GammaEnt {
    fn family(&self) -> Family {
        Family::GammaEnt
    }

    fn out_edges(&self, v: Vertex) -> Vec<Edge> {
        let mut e = vec![Edge {
            target: v + 1,
            label: self.omega.symbol(v as usize + 1),
        }];
        if v > 0 {
            e.push(Edge {
                target: 0,
                label: 2,
            });
        }
        e
    }

    fn start_candidates(&self, len: usize) -> Vec<Vertex> {
        (0..=(self.omega.factor_window(len.max(1)) + len) as u64).collect()
    }

    fn min_return_len(&self, v: Vertex) -> Option<usize> {
        Some(if v == 0 { 0 } else { 1 })
    }
}

/// Finite labelled graph with adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGraph {
    family: Family,
    root: Vertex,
    adj: Vec<Vec<Edge>>,
    /// Shortest distance to the root.
    to_root: Vec<Option<usize>>,
    /// Names of the vertices (the blocks, for SFT graphs).
    names: Vec<Vec<Symbol>>,
}

impl FiniteGraph {
    pub fn new(family: Family, root: Vertex, adj: Vec<Vec<Edge>>) -> Result<Self> {
        let n = adj.len();
        if root as usize >= n || adj.iter().flatten().any(|e| e.target as usize >= n) {
            return Err(Error::InvalidInput(
                "edge or root outside the vertex set".into(),
            ));
        }
        let names = (0..n).map(|i| vec![i as Symbol]).collect();
        let mut g = FiniteGraph {
            family,
            root,
            adj,
            to_root: Vec::new(),
            names,
        };
        g.to_root = g.distances_to(root);
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn name(&self, v: Vertex) -> &[Symbol] {
        &self.names[v as usize]
    }

    pub fn with_root(mut self, root: Vertex) -> Self {
        self.root = root;
        self.to_root = self.distances_to(root);
        self
    }

    /// Reverse BFS distances from every vertex to `target`.
    fn distances_to(&self, target: Vertex) -> Vec<Option<usize>> {
        let n = self.adj.len();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (s, es) in self.adj.iter().enumerate() {
            for e in es {
                rev[e.target as usize].push(s);
            }
        }
        let mut dist = vec![None; n];
        dist[target as usize] = Some(0);
        let mut q = VecDeque::from([target as usize]);
        while let Some(x) = q.pop_front() {
            let d = dist[x].expect("queued vertices have distances");
            for &p in &rev[x] {
                if dist[p].is_none() {
                    dist[p] = Some(d + 1);
                    q.push_back(p);
                }
            }
        }
        dist
    }

    /// Shortest path from `from` to `to` as its label, BFS with edges tried
    /// in stored order.
    pub fn shortest_path_label(&self, from: Vertex, to: Vertex) -> Option<Vec<Symbol>> {
        let n = self.adj.len();
        let mut prev: Vec<Option<(usize, Symbol)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[from as usize] = true;
        let mut q = VecDeque::from([from as usize]);
        while let Some(x) = q.pop_front() {
            if x == to as usize {
                break;
            }
            for e in &self.adj[x] {
                let t = e.target as usize;
                if !seen[t] {
                    seen[t] = true;
                    prev[t] = Some((x, e.label));
                    q.push_back(t);
                }
            }
        }
        if !seen[to as usize] {
            return None;
        }
        let mut label = Vec::new();
        let mut cur = to as usize;
        while cur != from as usize {
            let (p, l) = prev[cur].expect("BFS tree edge");
            label.push(l);
            cur = p;
        }
        label.reverse();
        Some(label)
    }

    /// Block graph of a shift of finite type: vertices are the allowed
    /// `m`-blocks (`m` = longest forbidden word minus one, at least 1), and
    /// `b → b[1..]s` is labelled `s` when `bs` avoids every forbidden word.
    pub fn from_sft(alphabet: Symbol, forbidden: &[Vec<Symbol>]) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidInput("empty alphabet".into()));
        }
        let m = forbidden
            .iter()
            .map(|f| f.len())
            .max()
            .unwrap_or(1)
            .saturating_sub(1)
            .max(1);
        let avoids = |w: &[Symbol]| {
            !forbidden.iter().any(|f| {
                !f.is_empty() && f.len() <= w.len() && w.windows(f.len()).any(|x| x == f.as_slice())
            })
        };
        let total = (alphabet as u64)
            .checked_pow(m as u32)
            .filter(|&t| t <= 1 << 16)
            .ok_or_else(|| {
                Error::LimitExceeded("SFT block graph larger than 65536 vertices".into())
            })?;
        let mut blocks: Vec<Vec<Symbol>> = Vec::new();
        for code in 0..total {
            let mut b = vec![0; m];
            let mut c = code;
            for slot in b.iter_mut().rev() {
                *slot = (c % alphabet as u64) as Symbol;
                c /= alphabet as u64;
            }
            if avoids(&b) {
                blocks.push(b);
            }
        }
        if blocks.is_empty() {
            return Err(Error::InvalidInput("SFT has no allowed blocks".into()));
        }
        let index: std::collections::HashMap<Vec<Symbol>, usize> = blocks
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, b)| (b, i))
            .collect();
        let mut adj = vec![Vec::new(); blocks.len()];
        for (i, b) in blocks.iter().enumerate() {
            for s in 0..alphabet {
                let mut ext = b.clone();
                ext.push(s);
                if !avoids(&ext) {
                    continue;
                }
                if let Some(&t) = index.get(&ext[1..]) {
                    adj[i].push(Edge {
                        target: t as Vertex,
                        label: s,
                    });
                }
            }
        }
        let mut g = FiniteGraph::new(Family::FiniteSft, 0, adj)?;
        g.names = blocks;
        Ok(g)
    }
}

impl LabelledGraph for FiniteGraph {
    fn family(&self) -> Family {
        self.family
    }

    fn root(&self) -> Vertex {
        self.root
    }

    fn out_edges(&self, v: Vertex) -> Vec<Edge> {
        self.adj.get(v as usize).cloned().unwrap_or_default()
    }

    fn start_candidates(&self, _len: usize) -> Vec<Vertex> {
        (0..self.adj.len() as Vertex).collect()
    }

    fn min_return_len(&self, v: Vertex) -> Option<usize> {
        self.to_root.get(v as usize).copied().flatten()
    }

    fn vertex_bound(&self) -> Option<usize> {
        Some(self.adj.len())
    }
}
