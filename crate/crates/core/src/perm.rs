//! Symmetric-group combinatorics: inversion length, canonical reduced words,
//! and enumeration of the whole group or of its shuffles.
//!
//! Permutations act on `1..=p` and compose as functions:
//! `(u * v)(x) = u(v(x))`. A word `[i_1, ..., i_l]` stands for the product
//! `s_{i_1} * ... * s_{i_l}` of adjacent transpositions `s_i = (i, i+1)`.

use std::fmt;

use thiserror::Error;

/// Largest group order enumerated unless the caller raises it (7! = 5040).
pub const DEFAULT_ENUMERATION_BOUND: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("not a permutation of 1..={0}: {1:?}")]
    NotAPermutation(usize, Vec<usize>),
    #[error("letter s_{letter} out of range for a permutation of size {size}")]
    LetterOutOfRange { letter: usize, size: usize },
    #[error("group size {p} exceeds the enumeration bound {bound}")]
    BoundExceeded { p: usize, bound: usize },
}

/// A permutation `w` of `1..=p`, stored as its image sequence `(w(1), ..., w(p))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

/// A word in the adjacent transpositions; letter `i` is `s_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    pub letters: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self, PermError> {
        let p = images.len();
        let mut seen = vec![false; p];
        for &x in &images {
            if x == 0 || x > p || seen[x - 1] {
                return Err(PermError::NotAPermutation(p, images));
            }
            seen[x - 1] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(p: usize) -> Self {
        Perm { images: (1..=p).collect() }
    }

    /// The product `s_{i_1} * ... * s_{i_l}` acting on `1..=p`.
    pub fn from_word(p: usize, letters: &[usize]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (1..=p).collect();
        for &i in letters {
            if i == 0 || i >= p {
                return Err(PermError::LetterOutOfRange { letter: i, size: p });
            }
            // right multiplication by s_i swaps the images at i and i+1
            images.swap(i - 1, i);
        }
        Ok(Perm { images })
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `w(x)` for `x` in `1..=p`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &x)| x == k + 1)
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.size(), other.size());
        Perm { images: other.images.iter().map(|&x| self.apply(x)).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.size()];
        for (k, &x) in self.images.iter().enumerate() {
            inv[x - 1] = k + 1;
        }
        Perm { images: inv }
    }

    /// Number of inversions, the Coxeter length.
    pub fn length(&self) -> usize {
        inversions(&self.images)
    }

    /// Canonical reduced word, obtained by insertion-sorting the image
    /// sequence and reading the recorded swaps backwards.
    pub fn reduced_word(&self) -> ReducedWord {
        let mut a = self.images.clone();
        let mut swaps = Vec::new();
        for i in 1..a.len() {
            let mut j = i;
            while j > 0 && a[j - 1] > a[j] {
                a.swap(j - 1, j);
                swaps.push(j);
                j -= 1;
            }
        }
        swaps.reverse();
        ReducedWord { letters: swaps }
    }

    /// True when `w(1) < ... < w(i)` and `w(i+1) < ... < w(p)`.
    pub fn is_shuffle(&self, i: usize) -> bool {
        let (head, tail) = self.images.split_at(i.min(self.size()));
        head.windows(2).all(|w| w[0] < w[1]) && tail.windows(2).all(|w| w[0] < w[1])
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl ReducedWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Number of pairs `s < t` with `seq[s] > seq[t]`.
pub fn inversions<T: Ord>(seq: &[T]) -> usize {
    let mut n = 0;
    for s in 0..seq.len() {
        for t in s + 1..seq.len() {
            if seq[s] > seq[t] {
                n += 1;
            }
        }
    }
    n
}

/// All of the symmetric group on `1..=p`, lexicographic in the images.
pub fn enumerate_group(p: usize) -> Result<Vec<Perm>, PermError> {
    enumerate_group_bounded(p, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_group_bounded(p: usize, bound: usize) -> Result<Vec<Perm>, PermError> {
    if p > bound {
        return Err(PermError::BoundExceeded { p, bound });
    }
    let mut out = Vec::new();
    let mut a: Vec<usize> = (1..=p).collect();
    loop {
        out.push(Perm { images: a.clone() });
        if !next_permutation(&mut a) {
            return Ok(out);
        }
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// All `(i, j)`-shuffles in the symmetric group on `1..=i+j`, lexicographic.
pub fn enumerate_shuffles(i: usize, j: usize) -> Vec<Perm> {
    let p = i + j;
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = (1..=i).collect();
    loop {
        let mut images = chosen.clone();
        images.extend((1..=p).filter(|x| !chosen.contains(x)));
        out.push(Perm { images });
        // advance to the next i-subset in lexicographic order
        let mut k = i;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if chosen[k] < p - (i - 1 - k) {
                chosen[k] += 1;
                for m in k + 1..i {
                    chosen[m] = chosen[m - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_binomial, q_factorial, Scalar};

    fn perm(v: &[usize]) -> Perm {
        Perm::new(v.to_vec()).unwrap()
    }

    fn poincare(perms: &[Perm]) -> Scalar {
        perms.iter().map(|w| Scalar::q_pow(w.length() as i32)).sum()
    }

    #[test]
    fn lengths() {
        assert_eq!(Perm::identity(4).length(), 0);
        assert_eq!(perm(&[2, 1]).length(), 1);
        assert_eq!(perm(&[3, 1, 2]).length(), 2);
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Perm::new(vec![1, 1]).is_err());
        assert!(Perm::new(vec![0, 1]).is_err());
        assert!(Perm::new(vec![1, 3]).is_err());
    }

    #[test]
    fn reduced_words_small() {
        assert!(Perm::identity(3).reduced_word().is_empty());
        assert_eq!(perm(&[2, 1]).reduced_word().letters, vec![1]);
        let w = perm(&[3, 1, 2]);
        let word = w.reduced_word();
        assert_eq!(word.len(), 2);
        assert_eq!(Perm::from_word(3, &word.letters).unwrap(), w);
    }

    #[test]
    fn reduced_words_reconstruct_all_small_perms() {
        for p in 0..=6 {
            for w in enumerate_group(p).unwrap() {
                let word = w.reduced_word();
                assert_eq!(word.len(), w.length());
                assert_eq!(Perm::from_word(p, &word.letters).unwrap(), w);
            }
        }
    }

    #[test]
    fn group_enumeration() {
        assert_eq!(enumerate_group(1).unwrap(), vec![Perm::identity(1)]);
        assert_eq!(enumerate_group(3).unwrap().len(), 6);
        let g = enumerate_group(4).unwrap();
        assert_eq!(g.len(), 24);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(
            enumerate_group(8),
            Err(PermError::BoundExceeded { p: 8, bound: DEFAULT_ENUMERATION_BOUND })
        );
        assert_eq!(enumerate_group_bounded(8, 8).unwrap().len(), 40320);
    }

    #[test]
    fn poincare_polynomial_of_group() {
        let q = Scalar::q();
        for p in 0..=6 {
            assert_eq!(poincare(&enumerate_group(p).unwrap()), q_factorial(p as u32, &q), "p={p}");
        }
    }

    #[test]
    fn shuffles() {
        assert_eq!(enumerate_shuffles(1, 1), vec![Perm::identity(2), perm(&[2, 1])]);
        assert_eq!(enumerate_shuffles(2, 0), vec![Perm::identity(2)]);
        assert_eq!(enumerate_shuffles(0, 3), vec![Perm::identity(3)]);
        let q = Scalar::q();
        for i in 0..=8usize {
            for j in 0..=8 - i {
                let sh = enumerate_shuffles(i, j);
                assert_eq!(sh.len() as i64, binom((i + j) as i64, i as i64));
                assert!(sh.iter().all(|w| w.is_shuffle(i)));
                assert!(sh.windows(2).all(|w| w[0] < w[1]));
                assert_eq!(poincare(&sh), q_binomial((i + j) as i64, i as i64, &q), "i={i} j={j}");
            }
        }
    }

    #[test]
    fn shuffles_are_a_subset_of_the_group() {
        for (i, j) in [(1, 2), (2, 2), (3, 1)] {
            let group = enumerate_group(i + j).unwrap();
            for w in enumerate_shuffles(i, j) {
                assert!(group.contains(&w));
            }
            let expected = group.iter().filter(|w| w.is_shuffle(i)).count();
            assert_eq!(expected, enumerate_shuffles(i, j).len());
        }
    }

    fn binom(n: i64, k: i64) -> i64 {
        (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
    }
}
