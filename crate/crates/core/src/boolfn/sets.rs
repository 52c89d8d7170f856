//! Subsets of argument positions encoded as bitmasks (bit `i` is position `i`).

use std::cmp::Ordering;

/// A subset of `{0, .., 31}`.
pub type PositionSet = u32;

pub fn from_positions(positions: &[usize]) -> PositionSet {
    positions.iter().fold(0, |acc, &p| acc | (1 << p))
}

pub fn positions(set: PositionSet) -> Vec<usize> {
    (0..32).filter(|&i| set >> i & 1 == 1).collect()
}

pub fn full(k: usize) -> PositionSet {
    if k >= 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

pub fn min_element(set: PositionSet) -> Option<usize> {
    (set != 0).then(|| set.trailing_zeros() as usize)
}

/// Cardinality first, then lexicographic on the sorted element lists.
pub fn canonical_cmp(a: PositionSet, b: PositionSet) -> Ordering {
    a.count_ones()
        .cmp(&b.count_ones())
        .then_with(|| positions(a).cmp(&positions(b)))
}

/// Lexicographic order on sorted element lists, ignoring cardinality.
pub fn lex_cmp(a: PositionSet, b: PositionSet) -> Ordering {
    positions(a).cmp(&positions(b))
}

/// All subsets of `{0, .., k-1}` in canonical order.
pub fn all_subsets(k: usize) -> Vec<PositionSet> {
    let mut v: Vec<PositionSet> = (0..=full(k)).collect();
    v.sort_by(|&a, &b| canonical_cmp(a, b));
    v
}

/// Smallest set in canonical order among `sets`.
pub fn canonical_min(sets: impl IntoIterator<Item = PositionSet>) -> Option<PositionSet> {
    sets.into_iter().min_by(|&a, &b| canonical_cmp(a, b))
}
