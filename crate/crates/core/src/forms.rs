//! Indexing of the invariant one-forms `Θ^a_b` and `Π^a`.

use core::fmt;

/// `Theta(a, b)` is `Θ^a_b`, `Pi(a)` is `Π^a`. All `Theta` come first in
/// lexicographic order, then all `Pi`; `D = N² + N`.
///
/// The generator paired with `Theta(a, b)` is `L^b_a` (transposed), and
/// the one paired with `Pi(a)` is `L_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormIndex {
    Theta(usize, usize),
    Pi(usize),
}

impl FormIndex {
    pub fn index(self, n: usize) -> usize {
        match self {
            FormIndex::Theta(a, b) => a * n + b,
            FormIndex::Pi(a) => n * n + a,
        }
    }

    pub fn from_index(i: usize, n: usize) -> Self {
        if i < n * n {
            FormIndex::Theta(i / n, i % n)
        } else {
            FormIndex::Pi(i - n * n)
        }
    }

    pub fn count(n: usize) -> usize {
        n * n + n
    }

    pub fn all(n: usize) -> impl Iterator<Item = FormIndex> {
        (0..Self::count(n)).map(move |i| Self::from_index(i, n))
    }

    pub fn is_pi(self) -> bool {
        matches!(self, FormIndex::Pi(_))
    }
}

impl fmt::Display for FormIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormIndex::Theta(a, b) => write!(f, "Theta[{a},{b}]"),
            FormIndex::Pi(a) => write!(f, "Pi[{a}]"),
        }
    }
}
