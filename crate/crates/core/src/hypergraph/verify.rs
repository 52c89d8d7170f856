//! Exact verification of pinning/equality realisations and simulations.

use super::conditioning::Conditioning;
use super::engine::Engine;
use super::TupleHypergraph;
use crate::boolfn::{BinaryWeights, TruthTable, Weighted};
use crate::error::{Error, Result};
use crate::weight::Weight;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// What a gadget is claimed to realise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealisationKind {
    /// Some vertex has `mu(sigma_v = spin) >= 1 - epsilon`.
    Pinning { spin: bool, epsilon: BigRational },
    /// Some pair has `mu(sigma_x = sigma_y = s) >= (1 - epsilon) / 2` for both `s`.
    Equality { epsilon: BigRational },
}

impl RealisationKind {
    pub fn perfect_pinning(spin: bool) -> Self {
        RealisationKind::Pinning { spin, epsilon: BigRational::zero() }
    }

    pub fn perfect_equality() -> Self {
        RealisationKind::Equality { epsilon: BigRational::zero() }
    }
}

/// Outcome of [`verify_realisation`], reporting the best candidate found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealisationReport {
    pub holds: bool,
    /// Best vertex (pinning) or pair (equality); first in id order among ties.
    pub vertices: Vec<usize>,
    /// Achieved bound minus required bound at the best candidate.
    pub slack: BigRational,
}

fn single_marginals<F: Weighted>(f: &F, h: &TupleHypergraph, engine: &Engine) -> Result<Vec<[BigRational; 2]>> {
    (0..h.vertex_count())
        .map(|v| {
            let m = engine.marginals(f, h, &[v])?;
            Ok([m.probs()[0].clone(), m.probs()[1].clone()])
        })
        .collect()
}

/// Searches every vertex (or vertex pair) of `h` for one meeting the realisation bound.
pub fn verify_realisation<F: Weighted>(f: &F, h: &TupleHypergraph, kind: &RealisationKind) -> Result<RealisationReport> {
    verify_realisation_with(f, h, kind, &Engine::default())
}

pub fn verify_realisation_with<F: Weighted>(f: &F, h: &TupleHypergraph, kind: &RealisationKind, engine: &Engine) -> Result<RealisationReport> {
    let one = BigRational::one();
    let mut best: Option<(Vec<usize>, BigRational)> = None;
    let mut consider = |vs: Vec<usize>, slack: BigRational| {
        if best.as_ref().is_none_or(|(_, b)| slack > *b) {
            best = Some((vs, slack));
        }
    };
    match kind {
        RealisationKind::Pinning { spin, epsilon } => {
            let need = &one - epsilon;
            for (v, p) in single_marginals(f, h, engine)?.into_iter().enumerate() {
                consider(vec![v], &p[*spin as usize] - &need);
            }
        }
        RealisationKind::Equality { epsilon } => {
            let need = (&one - epsilon) / BigRational::from_integer(2.into());
            let n = h.vertex_count();
            if engine.partition_function(f, h)?.is_zero() {
                return Err(Error::Unsatisfiable);
            }
            for x in 0..n {
                for y in x + 1..n {
                    let m = engine.marginals(f, h, &[x, y])?;
                    let lo = m.probs()[0].clone().min(m.probs()[3].clone());
                    consider(vec![x, y], lo - &need);
                }
            }
        }
    }
    let (vertices, slack) = best.unwrap_or((Vec::new(), -one));
    Ok(RealisationReport {
        holds: slack >= BigRational::zero(),
        vertices,
        slack,
    })
}

/// True iff the pair marginal at `(u, v)` is exactly `(1/2, 0, 0, 1/2)`.
pub fn pair_is_perfect_equality<F: Weighted>(f: &F, h: &TupleHypergraph, u: usize, v: usize, engine: &Engine) -> Result<bool> {
    if u == v {
        return Ok(false);
    }
    let w = engine.hypergraph_sums(f, h, None, &[u, v])?;
    if w.iter().all(|x| x.is_zero()) {
        return Err(Error::Unsatisfiable);
    }
    Ok(w[1].is_zero() && w[2].is_zero() && w[0] == w[3])
}

/// True iff the conditional marginal at `(u, v)` equals `g` normalised.
pub fn verify_simulation<F: Weighted, W: Weight>(f: &F, h: &TupleHypergraph, cond: &Conditioning, pair: (usize, usize), g: &BinaryWeights<W>) -> Result<bool> {
    let table = TruthTable::new(2, g.to_array().to_vec())?;
    verify_simulation_tuple(f, h, cond, &[pair.0, pair.1], &table, &Engine::default())
}

/// Tuple form: conditional marginal at `terminals` equals `target` normalised.
pub fn verify_simulation_tuple<F: Weighted, W: Weight>(f: &F, h: &TupleHypergraph, cond: &Conditioning, terminals: &[usize], target: &TruthTable<W>, engine: &Engine) -> Result<bool> {
    if target.arity() != terminals.len() {
        return Err(Error::ArityMismatch {
            expected: terminals.len(),
            found: target.arity(),
        });
    }
    let total = target.total().to_rational();
    if total.is_zero() {
        return Err(Error::ZeroTarget);
    }
    if (1..terminals.len()).any(|i| terminals[..i].contains(&terminals[i])) {
        return Ok(false);
    }
    cond.validate(h.vertex_count())?;
    let m = engine.cond_marginals(f, h, cond, terminals)?;
    Ok(m
        .probs()
        .iter()
        .zip(target.values())
        .all(|(p, t)| *p == t.to_rational() / &total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::BooleanFunction;

    fn arc2() -> TupleHypergraph {
        TupleHypergraph::with_arcs(2, 2, vec![vec![0, 1]]).unwrap()
    }

    fn parity_xor() -> TupleHypergraph {
        TupleHypergraph::with_arcs(3, 2, vec![vec![0, 1], vec![1, 0], vec![1, 2], vec![2, 1]]).unwrap()
    }

    #[test]
    fn realisation_examples() {
        let all_one = BooleanFunction::all_one(2);
        let star = TupleHypergraph::with_arcs(2, 2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(verify_realisation(&all_one, &star, &RealisationKind::perfect_pinning(true)).unwrap().holds);
        let imp = BooleanFunction::implies();
        let r = verify_realisation(&imp, &star, &RealisationKind::perfect_equality()).unwrap();
        assert!(r.holds);
        assert_eq!(r.vertices, vec![0, 1]);
        let r = verify_realisation(&BooleanFunction::or(), &arc2(), &RealisationKind::perfect_equality()).unwrap();
        assert!(!r.holds);
        assert_eq!(r.slack, BigRational::new((-1).into(), 2.into()));
        let loose = RealisationKind::Pinning { spin: false, epsilon: BigRational::new(1.into(), 3.into()) };
        assert!(verify_realisation(&imp, &arc2(), &loose).unwrap().holds);
    }

    #[test]
    fn simulation_examples() {
        let e = Conditioning::empty();
        assert!(verify_simulation(&BooleanFunction::or(), &arc2(), &e, (0, 1), &BinaryWeights::new(0u64, 1, 1, 1)).unwrap());
        assert!(verify_simulation(&BooleanFunction::xor(), &parity_xor(), &e, (0, 2), &BinaryWeights::new(1u64, 0, 0, 1)).unwrap());
        assert!(!verify_simulation(&BooleanFunction::implies(), &arc2(), &e, (0, 1), &BinaryWeights::new(1u64, 2, 2, 1)).unwrap());
        assert_eq!(
            verify_simulation(&BooleanFunction::or(), &arc2(), &e, (0, 1), &BinaryWeights::new(0u64, 0, 0, 0)),
            Err(Error::ZeroTarget)
        );
    }

    #[test]
    fn perfect_equality_pair() {
        let e = Engine::default();
        assert!(pair_is_perfect_equality(&BooleanFunction::xor(), &parity_xor(), 0, 2, &e).unwrap());
        assert!(!pair_is_perfect_equality(&BooleanFunction::xor(), &parity_xor(), 0, 1, &e).unwrap());
    }
}
