use crate::format::{rational_to_string, serde_rational_vec};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Exact joint distribution of a tuple of vertices.
///
/// `probs[i]` is the probability of the spin tuple with index `i`, first vertex
/// most significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginalTable {
    vertices: Vec<usize>,
    #[serde(with = "serde_rational_vec")]
    probs: Vec<BigRational>,
}

impl MarginalTable {
    pub fn new(vertices: Vec<usize>, probs: Vec<BigRational>) -> Self {
        assert_eq!(probs.len(), 1 << vertices.len(), "one probability per spin tuple");
        MarginalTable { vertices, probs }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn prob(&self, spins: &[bool]) -> BigRational {
        self.probs[crate::boolfn::index_of(spins)].clone()
    }

    /// Probability that the `i`-th listed vertex has spin `s`.
    pub fn single(&self, i: usize, s: bool) -> BigRational {
        let t = self.vertices.len();
        self.probs
            .iter()
            .enumerate()
            .filter(|(idx, _)| crate::boolfn::arg_bit(*idx, t, i) == s)
            .fold(BigRational::zero(), |a, (_, p)| a + p)
    }

    pub fn total(&self) -> BigRational {
        self.probs.iter().fold(BigRational::zero(), |a, p| a + p)
    }

    /// One `p(s_1...s_t)=num/den` line per spin tuple.
    pub fn to_text(&self) -> String {
        let t = self.vertices.len();
        let mut out = String::new();
        for (idx, p) in self.probs.iter().enumerate() {
            let spins: String = (0..t)
                .map(|i| if crate::boolfn::arg_bit(idx, t, i) { '1' } else { '0' })
                .collect();
            let frac = if p.is_integer() {
                format!("{}/1", p.numer())
            } else {
                rational_to_string(p)
            };
            out.push_str(&format!("p({spins})={frac}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn text_and_single() {
        let half = BigRational::new(1.into(), 2.into());
        let m = MarginalTable::new(vec![3, 5], vec![half.clone(), BigRational::zero(), BigRational::zero(), half.clone()]);
        assert_eq!(m.to_text(), "p(00)=1/2\np(01)=0/1\np(10)=0/1\np(11)=1/2\n");
        assert_eq!(m.single(0, true), half);
        assert_eq!(m.total(), BigRational::one());
    }
}
