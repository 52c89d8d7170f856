//! Binary weighted functions and the hardness test.

use crate::weight::Weight;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// `g : {0,1}^2 -> W`, stored in index order `(g00, g01, g10, g11)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryWeights<W> {
    pub g00: W,
    pub g01: W,
    pub g10: W,
    pub g11: W,
}

impl<W: Weight> BinaryWeights<W> {
    pub fn new(g00: W, g01: W, g10: W, g11: W) -> Self {
        BinaryWeights { g00, g01, g10, g11 }
    }

    pub fn from_array([g00, g01, g10, g11]: [W; 4]) -> Self {
        BinaryWeights { g00, g01, g10, g11 }
    }

    pub fn to_array(&self) -> [W; 4] {
        [self.g00.clone(), self.g01.clone(), self.g10.clone(), self.g11.clone()]
    }

    pub fn get(&self, s: bool, t: bool) -> &W {
        match (s, t) {
            (false, false) => &self.g00,
            (false, true) => &self.g01,
            (true, false) => &self.g10,
            (true, true) => &self.g11,
        }
    }

    pub fn total(&self) -> W {
        self.g00.clone() + self.g01.clone() + self.g10.clone() + self.g11.clone()
    }

    pub fn is_all_zero(&self) -> bool {
        self.total().is_zero()
    }

    /// Exact normalised distribution, or `None` for the all-zero function.
    pub fn normalized(&self) -> Option<[BigRational; 4]> {
        let z = self.total().to_rational();
        if z.is_zero() {
            return None;
        }
        Some(self.to_array().map(|v| v.to_rational() / &z))
    }

    /// `g'(s, t) = g(1 - s, 1 - t)`.
    pub fn complement(&self) -> Self {
        BinaryWeights::new(self.g11.clone(), self.g10.clone(), self.g01.clone(), self.g00.clone())
    }

    /// `g'(s, t) = g(t, s)`.
    pub fn transpose(&self) -> Self {
        BinaryWeights::new(self.g00.clone(), self.g10.clone(), self.g01.clone(), self.g11.clone())
    }

    pub fn to_rational(&self) -> BinaryWeights<BigRational> {
        BinaryWeights::from_array(self.to_array().map(|v| v.to_rational()))
    }
}

/// Hardness: `g00 + g11 > 0`, `min(g00, g11)^2 < g01 g10`, `max(g00, g11)^2 <= g01 g10`.
///
/// Compares squares, so no square roots are taken.
pub fn is_hard<W: Weight>(g: &BinaryWeights<W>) -> bool {
    let (lo, hi) = if g.g00 <= g.g11 {
        (g.g00.clone(), g.g11.clone())
    } else {
        (g.g11.clone(), g.g00.clone())
    };
    let cross = g.g01.clone() * g.g10.clone();
    !(g.g00.clone() + g.g11.clone()).is_zero() && lo.clone() * lo < cross && hi.clone() * hi <= cross
}
