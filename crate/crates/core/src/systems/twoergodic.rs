use super::omega::Substitution;
use crate::seqcore::Symbol;

/// Mixing system with two ergodic measures built from a minimal binary
/// system `Y` (here a substitution shift) and the gluing constant `K`.
///
/// A word is allowed when one of the rules holds:
/// 1. it is `0^j`, `j > 0`;
/// 2. it lies in `L(Y)`;
/// 3. it is `0^a u 0^b` with `u` allowed;
/// 4. it is `v 0^k w` with `v`, `w` allowed, `k >= K` and at most
///    `log₂(|v| + k + |w|)` ones in `v` and `w`.
///
/// The rules are evaluated literally by interval dynamic programming. Note
/// that the resulting set is not closed under taking subwords: `01010001`
/// is allowed through rule 4 while its suffix `1010001` is not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoErgodic {
    y: Substitution,
    k: usize,
}

impl TwoErgodic {
    pub fn new(y: Substitution, k: usize) -> Self {
        TwoErgodic { y, k: k.max(1) }
    }

    /// `Y` the Fibonacci shift, `K = 3` (`000` is its shortest absent 0-run).
    pub fn fibonacci() -> Self {
        Self::new(Substitution::fibonacci(), 3)
    }

    pub fn y(&self) -> &Substitution {
        &self.y
    }

    pub fn gluing_constant(&self) -> usize {
        self.k
    }

    pub fn contains(&self, w: &[Symbol]) -> bool {
        if w.iter().any(|&s| s > 1) {
            return false;
        }
        let n = w.len();
        if n == 0 {
            return true;
        }
        // zeros_from[i]: length of the 0-run starting at i.
        let mut zeros_from = vec![0usize; n + 1];
        for i in (0..n).rev() {
            zeros_from[i] = if w[i] == 0 { zeros_from[i + 1] + 1 } else { 0 };
        }
        let mut ones_prefix = vec![0usize; n + 1];
        for i in 0..n {
            ones_prefix[i + 1] = ones_prefix[i] + (w[i] == 1) as usize;
        }
        // ok[i][len] for the subword w[i..i+len].
        let mut ok = vec![vec![false; n + 1]; n + 1];
        for i in 0..=n {
            ok[i][0] = true;
        }
        for len in 1..=n {
            for i in 0..=n - len {
                ok[i][len] = self.allowed(w, i, len, &ok, &zeros_from, &ones_prefix);
            }
        }
        ok[0][n]
    }

    fn allowed(
        &self,
        w: &[Symbol],
        i: usize,
        len: usize,
        ok: &[Vec<bool>],
        zeros_from: &[usize],
        ones_prefix: &[usize],
    ) -> bool {
        let j = i + len;
        let lead = zeros_from[i].min(len);
        if lead == len {
            return true;
        }
        if self.y.is_factor(&w[i..j]) {
            return true;
        }
        let trail = (i..j).rev().take_while(|&t| w[t] == 0).count();
        for a in 0..=lead {
            for b in 0..=trail {
                if a + b > 0 && a + b < len && ok[i + a][len - a - b] {
                    return true;
                }
            }
        }
        let ones = ones_prefix[j] - ones_prefix[i];
        // 2^ones <= len  <=>  ones <= log2(len)
        if ones >= usize::BITS as usize || (1usize << ones) > len {
            return false;
        }
        let mut s = i;
        while s < j {
            let run = zeros_from[s].min(j - s);
            if run == 0 {
                s += 1;
                continue;
            }
            if run >= self.k {
                for x in 0..=run - self.k {
                    for k in self.k..=run - x {
                        let v_len = s + x - i;
                        let w_start = s + x + k;
                        if ok[i][v_len] && ok[w_start][j - w_start] {
                            return true;
                        }
                    }
                }
            }
            s += run;
        }
        false
    }
}
