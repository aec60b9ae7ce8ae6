use crate::error::{Error, Result};

/// Set of admissible gap lengths: a finite sorted set plus an optional
/// arithmetic tail `{first + k·step}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapSet {
    explicit: Vec<u64>,
    tail: Option<(u64, u64)>,
}

impl GapSet {
    pub fn new(mut explicit: Vec<u64>, tail: Option<(u64, u64)>) -> Result<Self> {
        if let Some((_, step)) = tail {
            if step == 0 {
                return Err(Error::InvalidInput("gap tail step must be positive".into()));
            }
        }
        explicit.sort_unstable();
        explicit.dedup();
        let mut g = GapSet { explicit, tail };
        if tail.is_some() {
            // Keep the explicit part disjoint from the tail.
            let in_tail: Vec<bool> = g.explicit.iter().map(|&n| g.in_tail(n)).collect();
            let mut it = in_tail.into_iter();
            g.explicit.retain(|_| !it.next().unwrap_or(false));
        }
        Ok(g)
    }

    pub fn finite(explicit: &[u64]) -> Self {
        Self::new(explicit.to_vec(), None).expect("finite gap set")
    }

    pub fn explicit(&self) -> &[u64] {
        &self.explicit
    }

    pub fn tail(&self) -> Option<(u64, u64)> {
        self.tail
    }

    pub fn is_infinite(&self) -> bool {
        self.tail.is_some()
    }

    pub fn is_empty(&self) -> bool {
        self.explicit.is_empty() && self.tail.is_none()
    }

    fn in_tail(&self, n: u64) -> bool {
        matches!(self.tail, Some((first, step)) if n >= first && (n - first).is_multiple_of(step))
    }

    pub fn contains(&self, n: u64) -> bool {
        self.explicit.binary_search(&n).is_ok() || self.in_tail(n)
    }

    /// Least element `>= n`.
    pub fn next_at_least(&self, n: u64) -> Option<u64> {
        let e = match self.explicit.binary_search(&n) {
            Ok(i) => Some(self.explicit[i]),
            Err(i) => self.explicit.get(i).copied(),
        };
        let t = self.tail.map(|(first, step)| {
            if n <= first {
                first
            } else {
                first + (n - first).div_ceil(step) * step
            }
        });
        match (e, t) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Elements `<= bound` in increasing order.
    pub fn elements_up_to(&self, bound: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut n = 0;
        while let Some(x) = self.next_at_least(n) {
            if x > bound {
                break;
            }
            out.push(x);
            n = x + 1;
        }
        out
    }
}
