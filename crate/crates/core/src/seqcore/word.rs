use std::cmp::Ordering;
use std::fmt;

/// Alphabet index. Countable alphabets use unbounded values.
pub type Symbol = u32;

/// A finite word. Stored 0-based; the metric and Bowen-ball code speak
/// about 1-based positions and convert at the call site.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from decimal digits, e.g. `Word::digits("0110")`.
    ///
    /// Panics on non-digit characters; use [`Word::parse`] for untrusted text.
    pub fn digits(s: &str) -> Self {
        Word(
            s.chars()
                .map(|c| c.to_digit(10).expect("digit word"))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.0.iter().copied()
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn count(&self, s: Symbol) -> usize {
        self.0.iter().filter(|&&x| x == s).count()
    }

    pub fn max_symbol(&self) -> Option<Symbol> {
        self.0.iter().copied().max()
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

impl std::ops::Index<usize> for Word {
    type Output = Symbol;
    fn index(&self, i: usize) -> &Symbol {
        &self.0[i]
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::render_symbols(&self.0))
    }
}

/// Splits `w` as `root^multiplicity` with `root` primitive and shortest.
///
/// Uses the prefix-function period: the smallest period `p` of `w` gives the
/// root iff `p` divides `|w|`.
pub fn primitive_root(w: &[Symbol]) -> (Vec<Symbol>, usize) {
    let n = w.len();
    if n == 0 {
        return (Vec::new(), 0);
    }
    let fail = prefix_function(w);
    let p = n - fail[n - 1];
    if n.is_multiple_of(p) {
        (w[..p].to_vec(), n / p)
    } else {
        (w.to_vec(), 1)
    }
}

fn prefix_function(w: &[Symbol]) -> Vec<usize> {
    let mut pi = vec![0usize; w.len()];
    for i in 1..w.len() {
        let mut k = pi[i - 1];
        while k > 0 && w[i] != w[k] {
            k = pi[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        pi[i] = k;
    }
    pi
}

/// Lexicographic comparison of finite words under prefix order: a proper
/// prefix is smaller.
pub fn lex_compare_words(a: &[Symbol], b: &[Symbol]) -> Ordering {
    a.cmp(b)
}

/// Index of the lexicographically least rotation (two-pointer scan).
pub(crate) fn least_rotation(s: &[Symbol]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(&[0, 1, 0, 1]), (vec![0, 1], 2));
        assert_eq!(primitive_root(&[0, 1, 1]), (vec![0, 1, 1], 1));
        assert_eq!(
            primitive_root(&[0, 0, 1, 0, 0, 1, 0, 0, 1]),
            (vec![0, 0, 1], 3)
        );
        assert_eq!(primitive_root(&[7]), (vec![7], 1));
        assert_eq!(primitive_root(&[2, 2, 2]), (vec![2], 3));
    }

    #[test]
    fn least_rotation_matches_brute_force() {
        let cases: Vec<Vec<Symbol>> = vec![
            vec![1, 0],
            vec![0, 1, 0, 0, 1],
            vec![2, 1, 2, 1, 1],
            vec![3],
            vec![1, 1, 0, 1, 1, 0, 0],
        ];
        for s in cases {
            let k = least_rotation(&s);
            let rot =
                |r: usize| -> Vec<Symbol> { (0..s.len()).map(|i| s[(r + i) % s.len()]).collect() };
            let best = (0..s.len()).map(rot).min().unwrap();
            assert_eq!(rot(k), best, "{s:?}");
        }
    }

    #[test]
    fn prefix_order() {
        // 101 vs 1001: third symbols 1 > 0.
        assert_eq!(
            lex_compare_words(&[1, 0, 1], &[1, 0, 0, 1]),
            Ordering::Greater
        );
        assert_eq!(lex_compare_words(&[1, 0], &[1, 0, 0]), Ordering::Less);
    }
}
