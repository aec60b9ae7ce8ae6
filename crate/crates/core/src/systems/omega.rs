use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::seqcore::Symbol;

/// A growing substitution and its fixed point started from `seed`.
///
/// Used as the label stream ω of the counterexample graphs and as the
/// minimal system Y of the two-ergodic construction.
#[derive(Clone, Debug)]
pub struct Substitution {
    images: Vec<Vec<Symbol>>,
    seed: Symbol,
    cache: Arc<Mutex<Cache>>,
}

#[derive(Debug, Default)]
struct Cache {
    prefix: Vec<Symbol>,
    windows: HashMap<usize, usize>,
}

impl PartialEq for Substitution {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images && self.seed == other.seed
    }
}

impl Eq for Substitution {}

impl Substitution {
    pub fn new(images: Vec<Vec<Symbol>>, seed: Symbol) -> Result<Self> {
        let img = images
            .get(seed as usize)
            .ok_or_else(|| Error::InvalidInput("seed has no image".into()))?;
        if img.len() < 2 || img[0] != seed {
            return Err(Error::InvalidInput(
                "image of the seed must start with the seed and have length >= 2".into(),
            ));
        }
        if images
            .iter()
            .any(|im| im.is_empty() || im.iter().any(|&s| s as usize >= images.len()))
        {
            return Err(Error::InvalidInput(
                "substitution images must be nonempty words over its alphabet".into(),
            ));
        }
        Ok(Substitution {
            images,
            seed,
            cache: Arc::new(Mutex::new(Cache::default())),
        })
    }

    /// 0 → 01, 1 → 0.
    pub fn fibonacci() -> Self {
        Self::new(vec![vec![0, 1], vec![0]], 0).expect("valid substitution")
    }

    pub fn images(&self) -> &[Vec<Symbol>] {
        &self.images
    }

    pub fn seed(&self) -> Symbol {
        self.seed
    }

    /// First `n` symbols of the fixed point.
    pub fn prefix(&self, n: usize) -> Vec<Symbol> {
        let mut cache = self.cache.lock().expect("substitution cache");
        if cache.prefix.len() < n {
            let mut w = if cache.prefix.is_empty() {
                vec![self.seed]
            } else {
                cache.prefix.clone()
            };
            while w.len() < n {
                w = w
                    .iter()
                    .flat_map(|&s| self.images[s as usize].iter().copied())
                    .collect();
            }
            cache.prefix = w;
        }
        cache.prefix[..n].to_vec()
    }

    /// 1-based ω_i.
    pub fn symbol(&self, i: usize) -> Symbol {
        debug_assert!(i >= 1);
        let mut cache = self.cache.lock().expect("substitution cache");
        if cache.prefix.len() < i {
            drop(cache);
            self.prefix(i.max(64) * 2);
            cache = self.cache.lock().expect("substitution cache");
        }
        cache.prefix[i - 1]
    }

    /// A bound `W` such that every factor of length `n` seen in a long
    /// prefix already starts at some index `< W`.
    ///
    /// Measured on a prefix of length `64n + 256`, which exceeds the
    /// recurrence function of the substitutions used here.
    pub fn factor_window(&self, n: usize) -> usize {
        if n == 0 {
            return 1;
        }
        if let Some(&w) = self
            .cache
            .lock()
            .expect("substitution cache")
            .windows
            .get(&n)
        {
            return w;
        }
        let p = self.prefix(64 * n + 256);
        let mut seen = HashSet::new();
        let mut last_new = 0;
        for (i, f) in p.windows(n).enumerate() {
            if seen.insert(f) {
                last_new = i;
            }
        }
        let w = last_new + 1;
        self.cache
            .lock()
            .expect("substitution cache")
            .windows
            .insert(n, w);
        w
    }

    /// Whether `w` is a factor of the fixed point, decided on the measured
    /// window.
    pub fn is_factor(&self, w: &[Symbol]) -> bool {
        if w.is_empty() {
            return true;
        }
        let p = self.prefix(self.factor_window(w.len()) + w.len());
        p.windows(w.len()).any(|f| f == w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_prefix() {
        let f = Substitution::fibonacci();
        assert_eq!(f.prefix(13), vec![0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(f.symbol(2), 1);
        assert!(f.is_factor(&[0, 0, 1, 0]));
        assert!(!f.is_factor(&[1, 1]));
        assert!(!f.is_factor(&[0, 0, 0]));
    }

    #[test]
    fn fibonacci_has_n_plus_one_factors() {
        let f = Substitution::fibonacci();
        let p = f.prefix(5000);
        for n in 1..30 {
            let set: HashSet<&[Symbol]> = p.windows(n).collect();
            assert_eq!(set.len(), n + 1, "sturmian complexity at {n}");
            assert!(f.factor_window(n) <= 10 * n + 32);
        }
    }

    #[test]
    fn rejects_bad_rules() {
        assert!(Substitution::new(vec![vec![1], vec![0]], 0).is_err());
        assert!(Substitution::new(vec![vec![0, 2]], 0).is_err());
    }
}
