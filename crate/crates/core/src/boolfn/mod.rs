//! Truth tables, Boolean functions and the structural predicates on them.
//!
//! Assignment `x = (x_1, .., x_k)` has index `sum x_i 2^(k-i)`: the first
//! argument is the most significant bit.

mod binary;
mod closure;
pub mod sets;
mod transform;

pub use binary::{is_hard, BinaryWeights};
pub use closure::{AffineSystem, EasyTag, SemiTrivial, SemiTrivialKind};
pub use sets::PositionSet;
pub use transform::DEFAULT_SYMMETRISE_CAP;

use crate::error::{Error, Result};
use crate::weight::Weight;
use serde::{Deserialize, Serialize};
use std::borrow::Cow;
use std::fmt;

/// Largest arity for which tables are materialised.
pub const MAX_TABLE_ARITY: usize = 16;

/// Reads bit `i` (0-based argument position) of assignment index `idx` of an arity-`k` table.
#[inline]
pub fn arg_bit(idx: usize, k: usize, i: usize) -> bool {
    (idx >> (k - 1 - i)) & 1 == 1
}

/// Index of the assignment listed in `bits`.
pub fn index_of(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Assignment with index `idx` for arity `k`.
pub fn bits_of(idx: usize, k: usize) -> Vec<bool> {
    (0..k).map(|i| arg_bit(idx, k, i)).collect()
}

/// Index of the characteristic vector of a position set.
pub fn index_of_set(set: PositionSet, k: usize) -> usize {
    (0..k).filter(|&i| set >> i & 1 == 1).fold(0, |acc, i| acc | 1 << (k - 1 - i))
}

/// Position set whose characteristic vector has index `idx`.
pub fn set_of_index(idx: usize, k: usize) -> PositionSet {
    (0..k).filter(|&i| arg_bit(idx, k, i)).fold(0, |acc, i| acc | 1 << i)
}

fn check_arity(arity: usize) -> Result<()> {
    if arity > MAX_TABLE_ARITY {
        Err(Error::ResourceCap(format!(
            "arity {arity} exceeds table cap {MAX_TABLE_ARITY}"
        )))
    } else {
        Ok(())
    }
}

/// A function `{0,1}^k -> W` stored as a full table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable<W> {
    arity: usize,
    values: Vec<W>,
}

impl<W: Weight> TruthTable<W> {
    pub fn new(arity: usize, values: Vec<W>) -> Result<Self> {
        check_arity(arity)?;
        if values.len() != 1 << arity {
            return Err(Error::Domain(format!(
                "table of arity {arity} needs {} entries, found {}",
                1usize << arity,
                values.len()
            )));
        }
        if values.iter().any(|v| *v < W::zero()) {
            return Err(Error::Domain("negative table entry".into()));
        }
        Ok(TruthTable { arity, values })
    }

    pub fn from_fn(arity: usize, mut f: impl FnMut(&[bool]) -> W) -> Result<Self> {
        check_arity(arity)?;
        let values = (0..1usize << arity).map(|idx| f(&bits_of(idx, arity))).collect();
        Ok(TruthTable { arity, values })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[W] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> &W {
        &self.values[idx]
    }

    pub fn eval(&self, x: &[bool]) -> &W {
        &self.values[index_of(x)]
    }

    pub fn is_boolean(&self) -> bool {
        self.values.iter().all(Weight::is_bit)
    }

    pub fn map<V: Weight>(&self, f: impl Fn(&W) -> V) -> TruthTable<V> {
        TruthTable {
            arity: self.arity,
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Exact rational copy of the table.
    pub fn to_rational(&self) -> TruthTable<num_rational::BigRational> {
        self.map(Weight::to_rational)
    }

    /// The Boolean function with the same table, or a domain error.
    pub fn to_boolean(&self) -> Result<BooleanFunction> {
        BooleanFunction::try_from(self)
    }

    /// Sum of all entries.
    pub fn total(&self) -> W {
        self.values.iter().cloned().fold(W::zero(), |a, b| a + b)
    }
}

/// Anything that can act as the weight function of a constraint.
pub trait Weighted {
    type W: Weight;
    fn arity(&self) -> usize;
    fn weights(&self) -> Cow<'_, [Self::W]>;
}

impl<W: Weight> Weighted for TruthTable<W> {
    type W = W;
    fn arity(&self) -> usize {
        self.arity
    }
    fn weights(&self) -> Cow<'_, [W]> {
        Cow::Borrowed(&self.values)
    }
}

impl Weighted for BooleanFunction {
    type W = u64;
    fn arity(&self) -> usize {
        self.arity
    }
    fn weights(&self) -> Cow<'_, [u64]> {
        Cow::Owned(self.table.iter().map(|&b| b as u64).collect())
    }
}

/// A function `{0,1}^k -> {0,1}`; serialised as its table bitstring.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BooleanFunction {
    arity: usize,
    table: Vec<bool>,
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction({}; {})", self.arity, self.to_bitstring())
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

impl<W: Weight> TryFrom<&TruthTable<W>> for BooleanFunction {
    type Error = Error;
    fn try_from(t: &TruthTable<W>) -> Result<Self> {
        if !t.is_boolean() {
            return Err(Error::Domain("table has values outside {0,1}".into()));
        }
        Ok(BooleanFunction {
            arity: t.arity,
            table: t.values.iter().map(|v| !v.is_zero()).collect(),
        })
    }
}

impl BooleanFunction {
    pub fn new(arity: usize, table: Vec<bool>) -> Result<Self> {
        check_arity(arity)?;
        if table.len() != 1 << arity {
            return Err(Error::Domain(format!(
                "table of arity {arity} needs {} entries, found {}",
                1usize << arity,
                table.len()
            )));
        }
        Ok(BooleanFunction { arity, table })
    }

    /// Parses a string of `0`/`1` characters; arity is inferred from its length.
    pub fn from_bitstring(bits: &str) -> Result<Self> {
        let table = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Domain(format!("invalid table character {other:?}"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        let len = table.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Domain(format!(
                "table length {len} is not a power of two >= 2"
            )));
        }
        BooleanFunction::new(len.trailing_zeros() as usize, table)
    }

    pub fn from_relation(arity: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_arity(arity)?;
        let mut table = vec![false; 1 << arity];
        for m in members {
            if m >= table.len() {
                return Err(Error::Domain(format!("assignment index {m} out of range")));
            }
            table[m] = true;
        }
        Ok(BooleanFunction { arity, table })
    }

    /// Builds a function from a predicate on assignments. Panics above the table cap.
    pub fn from_predicate(arity: usize, mut p: impl FnMut(&[bool]) -> bool) -> Self {
        check_arity(arity).expect("arity within table cap");
        let table = (0..1usize << arity).map(|idx| p(&bits_of(idx, arity))).collect();
        BooleanFunction { arity, table }
    }

    /// Symmetric function whose value on inputs of Hamming weight `w` is `by_weight[w]`.
    pub fn symmetric(by_weight: &[bool]) -> Self {
        let k = by_weight.len() - 1;
        Self::from_predicate(k, |x| by_weight[x.iter().filter(|&&b| b).count()])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn value(&self, idx: usize) -> bool {
        self.table[idx]
    }

    pub fn eval(&self, x: &[bool]) -> bool {
        self.table[index_of(x)]
    }

    /// Indices of the satisfying assignments (the relation `R_f`).
    pub fn relation(&self) -> Vec<usize> {
        (0..self.table.len()).filter(|&i| self.table[i]).collect()
    }

    pub fn relation_size(&self) -> usize {
        self.table.iter().filter(|&&b| b).count()
    }

    /// The position sets whose characteristic vectors satisfy the function.
    pub fn omega(&self) -> Vec<PositionSet> {
        self.relation()
            .into_iter()
            .map(|i| set_of_index(i, self.arity))
            .collect()
    }

    pub fn contains_set(&self, set: PositionSet) -> bool {
        self.table[index_of_set(set, self.arity)]
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|&b| !b)
    }

    pub fn to_bitstring(&self) -> String {
        self.table.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn to_table<W: Weight>(&self) -> TruthTable<W> {
        TruthTable {
            arity: self.arity,
            values: self
                .table
                .iter()
                .map(|&b| if b { W::one() } else { W::zero() })
                .collect(),
        }
    }

    pub fn zero(k: usize) -> Self {
        Self::from_predicate(k, |_| false)
    }

    pub fn one(k: usize) -> Self {
        Self::from_predicate(k, |_| true)
    }

    pub fn all_zero(k: usize) -> Self {
        Self::from_predicate(k, |x| x.iter().all(|&b| !b))
    }

    pub fn all_one(k: usize) -> Self {
        Self::from_predicate(k, |x| x.iter().all(|&b| b))
    }

    pub fn equality(k: usize) -> Self {
        Self::from_predicate(k, |x| x.iter().all(|&b| b == x[0]))
    }

    pub fn even(k: usize) -> Self {
        Self::from_predicate(k, |x| x.iter().filter(|&&b| b).count() % 2 == 0)
    }

    pub fn odd(k: usize) -> Self {
        Self::from_predicate(k, |x| x.iter().filter(|&&b| b).count() % 2 == 1)
    }

    pub fn not_all_equal(k: usize) -> Self {
        Self::from_predicate(k, |x| x.iter().any(|&b| b != x[0]))
    }

    pub fn or() -> Self {
        Self::from_predicate(2, |x| x[0] || x[1])
    }

    pub fn nand() -> Self {
        Self::from_predicate(2, |x| !(x[0] && x[1]))
    }

    pub fn implies() -> Self {
        Self::from_predicate(2, |x| !x[0] || x[1])
    }

    pub fn xor() -> Self {
        Self::from_predicate(2, |x| x[0] != x[1])
    }

    pub fn delta0() -> Self {
        Self::from_predicate(1, |x| !x[0])
    }

    pub fn delta1() -> Self {
        Self::from_predicate(1, |x| x[0])
    }

    /// Looks up a function by conventional name (`or`, `implies`, `nae3`, `eq4`, ...).
    pub fn named(name: &str) -> Option<Self> {
        let lower = name.to_ascii_lowercase();
        match lower.as_str() {
            "delta0" => return Some(Self::delta0()),
            "delta1" => return Some(Self::delta1()),
            _ => {}
        }
        let (stem, k) = match lower.find(|c: char| c.is_ascii_digit()) {
            Some(p) => (&lower[..p], lower[p..].parse::<usize>().ok()?),
            None => (lower.as_str(), 2),
        };
        if k == 0 || k > MAX_TABLE_ARITY {
            return None;
        }
        let f = match stem {
            "or" if k == 2 => Self::or(),
            "nand" if k == 2 => Self::nand(),
            "implies" if k == 2 => Self::implies(),
            "xor" if k == 2 => Self::xor(),
            "eq" => Self::equality(k),
            "nae" => Self::not_all_equal(k),
            "even" => Self::even(k),
            "odd" => Self::odd(k),
            "zero" => Self::zero(k),
            "one" => Self::one(k),
            "allzero" => Self::all_zero(k),
            "allone" => Self::all_one(k),
            _ => return None,
        };
        Some(f)
    }
}

impl<W: Weight> From<&BooleanFunction> for TruthTable<W> {
    fn from(f: &BooleanFunction) -> Self {
        f.to_table()
    }
}

/// `1` if the weight is nonzero (useful when collapsing weights to support).
pub fn support<W: Weight>(t: &TruthTable<W>) -> BooleanFunction {
    BooleanFunction {
        arity: t.arity,
        table: t.values.iter().map(|v| !v.is_zero()).collect(),
    }
}

impl From<BooleanFunction> for String {
    fn from(f: BooleanFunction) -> String {
        f.to_bitstring()
    }
}

impl TryFrom<String> for BooleanFunction {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        BooleanFunction::from_bitstring(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::One;

    #[test]
    fn index_convention() {
        assert_eq!(index_of(&[true, false, false]), 4);
        assert_eq!(bits_of(1, 3), vec![false, false, true]);
        assert_eq!(index_of_set(0b001, 3), 4);
        assert_eq!(set_of_index(4, 3), 0b001);
    }

    #[test]
    fn named_tables() {
        assert_eq!(BooleanFunction::implies().to_bitstring(), "1101");
        assert_eq!(BooleanFunction::or().to_bitstring(), "0111");
        assert_eq!(BooleanFunction::nand().to_bitstring(), "1110");
        assert_eq!(BooleanFunction::not_all_equal(3).to_bitstring(), "01111110");
        assert_eq!(BooleanFunction::named("NAE3"), Some(BooleanFunction::not_all_equal(3)));
        assert_eq!(BooleanFunction::named("delta0"), Some(BooleanFunction::delta0()));
        assert_eq!(BooleanFunction::named("bogus"), None);
    }

    #[test]
    fn table_length_checked() {
        assert!(BooleanFunction::from_bitstring("011").is_err());
        assert!(TruthTable::<u64>::new(2, vec![1, 2, 3]).is_err());
    }

    #[test]
    fn non_boolean_table_is_domain_error() {
        let t = TruthTable::new(1, vec![BigRational::new(1.into(), 2.into()), BigRational::one()]).unwrap();
        assert!(matches!(t.to_boolean(), Err(Error::Domain(_))));
    }

    #[test]
    fn omega_of_or() {
        let mut om = BooleanFunction::or().omega();
        om.sort();
        assert_eq!(om, vec![0b01, 0b10, 0b11]);
    }
}

