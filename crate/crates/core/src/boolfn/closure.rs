//! Closure-based predicates: affine, IM2, self-duality, semi-triviality, EASY(k).

use super::sets::{self, PositionSet};
use super::{arg_bit, bits_of, index_of_set, BooleanFunction};
use crate::error::{Error, Result};
use crate::gf2::{orthogonal_complement, BitRow, Gf2System};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Linear system `A x = b` over GF(2) whose solutions form a relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineSystem {
    pub arity: usize,
    pub rows: Vec<Vec<bool>>,
    pub rhs: Vec<bool>,
}

impl AffineSystem {
    pub fn rank(&self) -> usize {
        let mut sys = Gf2System::new(self.arity);
        for (r, &b) in self.rows.iter().zip(&self.rhs) {
            sys.push(BitRow::from_bits(r), b);
        }
        match sys.eliminate() {
            crate::gf2::Elimination::Consistent { rank } => rank,
            crate::gf2::Elimination::Inconsistent => self.arity + 1,
        }
    }

    pub fn satisfies(&self, x: &[bool]) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(row, &b)| {
            row.iter().zip(x).fold(false, |acc, (&a, &xi)| acc ^ (a & xi)) == b
        })
    }
}

/// Which of the two semi-trivial patterns a function matches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemiTrivialKind {
    /// Support is every superset of the witness set.
    UpSet,
    /// Support is every subset of the witness set.
    DownSet,
}

/// Witness that `Omega_f` is an interval above or below a set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SemiTrivial {
    pub set: PositionSet,
    pub kind: SemiTrivialKind,
}

/// The seven symmetric affine functions of a given arity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EasyTag {
    Zero,
    One,
    AllZero,
    AllOne,
    Equality,
    Even,
    Odd,
}

impl EasyTag {
    /// Lookup order; for arity 2 equality and even coincide and `Equality` wins.
    pub const ALL: [EasyTag; 7] = [
        EasyTag::Zero,
        EasyTag::One,
        EasyTag::AllZero,
        EasyTag::AllOne,
        EasyTag::Equality,
        EasyTag::Even,
        EasyTag::Odd,
    ];

    pub fn function(self, k: usize) -> BooleanFunction {
        match self {
            EasyTag::Zero => BooleanFunction::zero(k),
            EasyTag::One => BooleanFunction::one(k),
            EasyTag::AllZero => BooleanFunction::all_zero(k),
            EasyTag::AllOne => BooleanFunction::all_one(k),
            EasyTag::Equality => BooleanFunction::equality(k),
            EasyTag::Even => BooleanFunction::even(k),
            EasyTag::Odd => BooleanFunction::odd(k),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EasyTag::Zero => "zero",
            EasyTag::One => "one",
            EasyTag::AllZero => "allzero",
            EasyTag::AllOne => "allone",
            EasyTag::Equality => "EQ",
            EasyTag::Even => "even",
            EasyTag::Odd => "odd",
        }
    }
}

impl fmt::Display for EasyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn row_of_index(idx: usize, k: usize) -> BitRow {
    BitRow::from_bits(&bits_of(idx, k))
}

impl BooleanFunction {
    /// True iff the relation is empty or an affine subspace coset.
    ///
    /// Computed as `|R| = 2^dim span{r + a}` for a fixed `a` in `R`.
    pub fn is_affine(&self) -> bool {
        let rel = self.relation();
        let Some(&a) = rel.first() else {
            return true;
        };
        if !rel.len().is_power_of_two() {
            return false;
        }
        // Echelon basis with distinct leading bits, kept in descending order.
        let mut basis: Vec<usize> = Vec::new();
        for &r in &rel {
            let mut v = r ^ a;
            for &b in &basis {
                v = v.min(v ^ b);
            }
            if v != 0 {
                basis.push(v);
                basis.sort_unstable_by(|x, y| y.cmp(x));
            }
        }
        rel.len() == 1 << basis.len()
    }

    /// The GF(2) system cutting out the relation.
    pub fn affine_system(&self) -> Result<AffineSystem> {
        let rel = self.relation();
        let Some(&a) = rel.first() else {
            return Err(Error::EmptyRelation);
        };
        if !self.is_affine() {
            return Err(Error::NotAffine);
        }
        let k = self.arity();
        let diffs: Vec<BitRow> = rel.iter().map(|&r| row_of_index(r ^ a, k)).collect();
        let checks = orthogonal_complement(&diffs, k);
        let a_row = row_of_index(a, k);
        Ok(AffineSystem {
            arity: k,
            rhs: checks.iter().map(|h| h.dot(&a_row)).collect(),
            rows: checks.iter().map(BitRow::to_bits).collect(),
        })
    }

    /// True iff the relation is expressible with unary literals and implications.
    ///
    /// Builds the strongest such conjunction implied by `R` and checks it has no
    /// extra solutions.
    pub fn is_in_im2(&self) -> bool {
        let k = self.arity();
        let rel = self.relation();
        let mut forced_one = vec![true; k];
        let mut forced_zero = vec![true; k];
        let mut implies = vec![vec![true; k]; k];
        for &r in &rel {
            for i in 0..k {
                let xi = arg_bit(r, k, i);
                forced_one[i] &= xi;
                forced_zero[i] &= !xi;
                if xi {
                    for j in 0..k {
                        if !arg_bit(r, k, j) {
                            implies[i][j] = false;
                        }
                    }
                }
            }
        }
        (0..1usize << k).all(|x| {
            let sat = (0..k).all(|i| {
                let xi = arg_bit(x, k, i);
                !(forced_one[i] && !xi)
                    && !(forced_zero[i] && xi)
                    && (!xi || (0..k).all(|j| !implies[i][j] || arg_bit(x, k, j)))
            });
            sat == self.value(x)
        })
    }

    pub fn is_self_dual(&self) -> bool {
        let last = self.table().len() - 1;
        (0..=last).all(|i| self.value(i) == self.value(last ^ i))
    }

    pub fn is_symmetric(&self) -> bool {
        let k = self.arity();
        let mut by_weight: Vec<Option<bool>> = vec![None; k + 1];
        (0..self.table().len()).all(|i| {
            let w = i.count_ones() as usize;
            match by_weight[w] {
                Some(v) => v == self.value(i),
                None => {
                    by_weight[w] = Some(self.value(i));
                    true
                }
            }
        })
    }

    /// Up-set or down-set witness, trying every candidate set in canonical order.
    pub fn semi_trivial(&self) -> Option<SemiTrivial> {
        let k = self.arity();
        let full = sets::full(k);
        let omega = self.relation_size();
        for s in sets::all_subsets(k) {
            let up = 1usize << (k - s.count_ones() as usize);
            if omega == up && (0..=full).filter(|t| t & s == s).all(|t| self.contains_set(t)) {
                return Some(SemiTrivial {
                    set: s,
                    kind: SemiTrivialKind::UpSet,
                });
            }
            let down = 1usize << s.count_ones();
            if omega == down && (0..=full).filter(|t| t & !s == 0).all(|t| self.contains_set(t)) {
                return Some(SemiTrivial {
                    set: s,
                    kind: SemiTrivialKind::DownSet,
                });
            }
        }
        None
    }

    pub fn is_semi_trivial(&self) -> bool {
        self.semi_trivial().is_some()
    }

    /// Which member of EASY(k) this function equals, if any.
    pub fn easy_member(&self) -> Option<EasyTag> {
        let k = self.arity();
        EasyTag::ALL.into_iter().find(|t| t.function(k) == *self)
    }

    /// Up-closure test on `Omega_f`: every superset of `set` is in `Omega_f`.
    pub fn upward_closed_above(&self, set: PositionSet) -> bool {
        let full = sets::full(self.arity());
        (0..=full)
            .filter(|t| t & set == set)
            .all(|t| self.value(index_of_set(t, self.arity())))
    }
}
