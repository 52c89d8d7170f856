//! Table transforms: symmetrisation, pinning, products, complement and shifts.

use super::sets::PositionSet;
use super::{arg_bit, BooleanFunction, MAX_TABLE_ARITY};
use crate::error::{Error, Result};
use crate::perm::permutations;

/// Default arity cap for symmetrisation (6! permutation products).
pub const DEFAULT_SYMMETRISE_CAP: usize = 6;

impl BooleanFunction {
    /// `f*(x) = AND over permutations pi of f(x_pi)` with the default arity cap.
    pub fn symmetrise(&self) -> Result<BooleanFunction> {
        self.symmetrise_capped(DEFAULT_SYMMETRISE_CAP)
    }

    pub fn symmetrise_capped(&self, cap: usize) -> Result<BooleanFunction> {
        let k = self.arity();
        if k > cap {
            return Err(Error::ResourceCap(format!(
                "symmetrisation of arity {k} exceeds cap {cap}"
            )));
        }
        let perms = permutations(k);
        Ok(BooleanFunction::from_predicate(k, |x| {
            perms.iter().all(|p| {
                let permuted: Vec<bool> = p.iter().map(|&i| x[i]).collect();
                self.eval(&permuted)
            })
        }))
    }

    /// `f` with its arguments listed in the order `order` (`g(y) = f(y_order)`
    /// reading `order[i]` as the argument of `g` feeding position `i` of `f`).
    pub fn permute_args(&self, order: &[usize]) -> BooleanFunction {
        BooleanFunction::from_predicate(self.arity(), |y| {
            let x: Vec<bool> = order.iter().map(|&i| y[i]).collect();
            self.eval(&x)
        })
    }

    /// Pins positions in `zeros` to 0 and `ones` to 1; remaining positions keep their order.
    pub fn pin(&self, zeros: &[usize], ones: &[usize]) -> Result<BooleanFunction> {
        let k = self.arity();
        let mut fixed: Vec<Option<bool>> = vec![None; k];
        for (set, value) in [(zeros, false), (ones, true)] {
            for &p in set {
                if p >= k {
                    return Err(Error::Domain(format!("position {p} out of range for arity {k}")));
                }
                if fixed[p].is_some_and(|v| v != value) {
                    return Err(Error::OverlappingSets(p));
                }
                fixed[p] = Some(value);
            }
        }
        let free: Vec<usize> = (0..k).filter(|&i| fixed[i].is_none()).collect();
        if free.is_empty() {
            return Err(Error::Domain("pinning every argument leaves arity 0".into()));
        }
        Ok(BooleanFunction::from_predicate(free.len(), |y| {
            let mut x: Vec<bool> = fixed.iter().map(|v| v.unwrap_or(false)).collect();
            for (slot, &p) in free.iter().enumerate() {
                x[p] = y[slot];
            }
            self.eval(&x)
        }))
    }

    /// Pinning with position sets given as bitmasks.
    pub fn pin_sets(&self, zeros: PositionSet, ones: PositionSet) -> Result<BooleanFunction> {
        self.pin(&super::sets::positions(zeros), &super::sets::positions(ones))
    }

    /// `f(x, y) = f1(x) f2(y)`.
    pub fn product_concat(&self, other: &BooleanFunction) -> Result<BooleanFunction> {
        let (k1, k2) = (self.arity(), other.arity());
        if k1 + k2 > MAX_TABLE_ARITY {
            return Err(Error::ResourceCap(format!(
                "combined arity {} exceeds table cap {MAX_TABLE_ARITY}",
                k1 + k2
            )));
        }
        Ok(BooleanFunction::from_predicate(k1 + k2, |x| {
            self.eval(&x[..k1]) && other.eval(&x[k1..])
        }))
    }

    /// `g(x) = f(not x)`.
    pub fn complement(&self) -> BooleanFunction {
        let last = self.table().len() - 1;
        BooleanFunction::from_predicate(self.arity(), |x| self.value(last ^ super::index_of(x)))
    }

    /// `g(x) = f(x xor t)` where `t` is an assignment index.
    pub fn shift(&self, t: usize) -> BooleanFunction {
        BooleanFunction::from_predicate(self.arity(), |x| self.value(super::index_of(x) ^ t))
    }

    /// Values of a symmetric function by Hamming weight, or `None` if not symmetric.
    pub fn weight_profile(&self) -> Option<Vec<bool>> {
        if !self.is_symmetric() {
            return None;
        }
        let k = self.arity();
        Some((0..=k).map(|w| self.value((1usize << w) - 1)).collect())
    }

    /// Number of satisfying assignments with position `i` equal to `s` and `j` equal to `t`.
    pub fn pair_counts(&self, i: usize, j: usize) -> [u64; 4] {
        let k = self.arity();
        let mut c = [0u64; 4];
        for r in self.relation() {
            c[(arg_bit(r, k, i) as usize) << 1 | arg_bit(r, k, j) as usize] += 1;
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrise_examples() {
        assert_eq!(BooleanFunction::implies().symmetrise().unwrap(), BooleanFunction::equality(2));
        let ten = BooleanFunction::from_relation(2, [0b10]).unwrap();
        assert_eq!(ten.symmetrise().unwrap(), BooleanFunction::zero(2));
        let nae = BooleanFunction::not_all_equal(3);
        assert_eq!(nae.symmetrise().unwrap(), nae);
        assert!(BooleanFunction::one(7).symmetrise().is_err());
        assert!(BooleanFunction::one(7).symmetrise_capped(7).is_ok());
    }

    #[test]
    fn pin_examples() {
        let imp = BooleanFunction::implies();
        assert_eq!(imp.pin(&[], &[0]).unwrap(), BooleanFunction::delta1());
        assert_eq!(imp.pin(&[1], &[]).unwrap(), BooleanFunction::delta0());
        assert_eq!(
            BooleanFunction::not_all_equal(3).pin(&[0], &[]).unwrap(),
            BooleanFunction::or()
        );
        assert_eq!(imp.pin(&[0], &[0]), Err(Error::OverlappingSets(0)));
    }

    #[test]
    fn product_examples() {
        let f = BooleanFunction::or().product_concat(&BooleanFunction::nand()).unwrap();
        assert_eq!(f.arity(), 4);
        assert!(!f.is_affine());
        assert!(!f.is_in_im2());
        let g = BooleanFunction::implies();
        let rep = BooleanFunction::one(1).product_concat(&g).unwrap();
        assert_eq!(rep.to_bitstring(), "11011101");
        assert!(BooleanFunction::zero(1).product_concat(&g).unwrap().is_zero());
    }

    #[test]
    fn complement_and_shift() {
        let imp = BooleanFunction::implies();
        assert_eq!(imp.complement().to_bitstring(), "1011");
        assert_eq!(imp.shift(0b11), imp.complement());
        assert_eq!(BooleanFunction::or().pair_counts(0, 1), [0, 1, 1, 1]);
        assert_eq!(BooleanFunction::equality(3).pair_counts(0, 2), [1, 0, 0, 1]);
    }

    #[test]
    fn weight_profile() {
        assert_eq!(
            BooleanFunction::not_all_equal(3).weight_profile(),
            Some(vec![false, true, true, false])
        );
        assert_eq!(BooleanFunction::implies().weight_profile(), None);
    }
}
