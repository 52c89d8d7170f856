//! Exact enumeration of weighted assignments with zero-weight pruning.
//!
//! Vertices are assigned in id order; a factor is multiplied in as soon as its
//! largest variable is assigned, so partial assignments of weight zero are cut.

use super::conditioning::Conditioning;
use super::marginal::MarginalTable;
use super::TupleHypergraph;
use crate::boolfn::Weighted;
use crate::error::{Error, Result};
use crate::weight::Weight;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::borrow::Cow;

/// Default cap on enumerated vertices (2^24 assignments before pruning).
pub const DEFAULT_MAX_VERTICES: usize = 24;

/// Values a vertex may take during enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Free,
    Fixed(bool),
    /// Copies the spin of an earlier vertex.
    Same(usize),
}

/// One weighted constraint over (possibly repeated) variables.
#[derive(Clone, Debug)]
pub struct Factor<'a, W: Clone> {
    pub table: Cow<'a, [W]>,
    pub vars: Cow<'a, [usize]>,
}

/// Enumeration limits and parallelism threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Engine {
    pub max_vertices: usize,
    /// Vertex count from which enumeration is split across threads.
    pub parallel_from: usize,
}

impl Default for Engine {
    fn default() -> Self {
        Engine {
            max_vertices: DEFAULT_MAX_VERTICES,
            parallel_from: 16,
        }
    }
}

struct Plan<'a, W: Clone> {
    n: usize,
    factors: &'a [Factor<'a, W>],
    at_depth: Vec<Vec<usize>>,
    domains: &'a [Domain],
    watched: &'a [usize],
}

impl<W: Weight> Plan<'_, W> {
    fn factor_value(&self, f: usize, spins: &[bool]) -> W {
        let fac = &self.factors[f];
        let idx = fac.vars.iter().fold(0usize, |acc, &v| (acc << 1) | spins[v] as usize);
        fac.table[idx].clone()
    }

    fn choices(&self, depth: usize, spins: &[bool]) -> &'static [bool] {
        let pick = |s: bool| if s { &[true][..] } else { &[false][..] };
        match self.domains[depth] {
            Domain::Free => &[false, true],
            Domain::Fixed(s) => pick(s),
            Domain::Same(r) => pick(spins[r]),
        }
    }

    fn step(&self, depth: usize, spins: &[bool], weight: &W) -> W {
        let mut w = weight.clone();
        for &f in &self.at_depth[depth] {
            if w.is_zero() {
                break;
            }
            w = w * self.factor_value(f, spins);
        }
        w
    }

    fn dfs(&self, depth: usize, spins: &mut Vec<bool>, weight: W, acc: &mut [W]) {
        if depth == self.n {
            let bucket = self.watched.iter().fold(0usize, |b, &v| (b << 1) | spins[v] as usize);
            acc[bucket] = acc[bucket].clone() + weight;
            return;
        }
        for &s in self.choices(depth, spins) {
            spins[depth] = s;
            let w = self.step(depth, spins, &weight);
            if !w.is_zero() {
                self.dfs(depth + 1, spins, w, acc);
            }
        }
    }

    fn prefixes(&self, depth: usize, spins: &mut Vec<bool>, weight: W, out: &mut Vec<(Vec<bool>, W)>, until: usize) {
        if depth == until {
            out.push((spins.clone(), weight));
            return;
        }
        for &s in self.choices(depth, spins) {
            spins[depth] = s;
            let w = self.step(depth, spins, &weight);
            if !w.is_zero() {
                self.prefixes(depth + 1, spins, w, out, until);
            }
        }
    }
}

impl Engine {
    pub fn with_max_vertices(max_vertices: usize) -> Self {
        Engine {
            max_vertices,
            ..Engine::default()
        }
    }

    /// Sums of assignment weights bucketed by the spins of `watched`
    /// (first watched vertex is the most significant bucket bit).
    pub fn sums<W: Weight>(&self, n: usize, factors: &[Factor<'_, W>], domains: &[Domain], watched: &[usize]) -> Result<Vec<W>> {
        if n > self.max_vertices {
            return Err(Error::ResourceCap(format!(
                "{n} vertices exceed enumeration cap {}",
                self.max_vertices
            )));
        }
        if let Some(&v) = watched.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        assert_eq!(domains.len(), n, "one domain per vertex");
        let mut at_depth = vec![Vec::new(); n.max(1)];
        let mut constant = W::one();
        for (i, f) in factors.iter().enumerate() {
            if f.table.len() != 1 << f.vars.len() {
                return Err(Error::ArityMismatch {
                    expected: f.table.len().trailing_zeros() as usize,
                    found: f.vars.len(),
                });
            }
            match f.vars.iter().max() {
                Some(&m) if m >= n => return Err(Error::VertexOutOfRange { vertex: m, n }),
                Some(&m) => at_depth[m].push(i),
                None => constant = constant * f.table[0].clone(),
            }
        }
        let plan = Plan {
            n,
            factors,
            at_depth,
            domains,
            watched,
        };
        let buckets = 1usize << watched.len();
        let zero_acc = || vec![W::zero(); buckets];
        let mut spins = vec![false; n];
        let acc = if n >= self.parallel_from {
            let split = (n / 2).min(12);
            let mut roots = Vec::new();
            plan.prefixes(0, &mut spins, constant, &mut roots, split);
            roots
                .into_par_iter()
                .map(|(mut s, w)| {
                    let mut acc = zero_acc();
                    plan.dfs(split, &mut s, w, &mut acc);
                    acc
                })
                .reduce(zero_acc, |a, b| a.into_iter().zip(b).map(|(x, y)| x + y).collect())
        } else {
            let mut acc = zero_acc();
            if !constant.is_zero() {
                plan.dfs(0, &mut spins, constant, &mut acc);
            }
            acc
        };
        Ok(acc)
    }

    /// Hypergraph specialisation of [`sums`](Self::sums).
    pub fn hypergraph_sums<F: Weighted>(&self, f: &F, h: &TupleHypergraph, cond: Option<&Conditioning>, watched: &[usize]) -> Result<Vec<F::W>> {
        if f.arity() != h.arity() {
            return Err(Error::ArityMismatch {
                expected: h.arity(),
                found: f.arity(),
            });
        }
        let n = h.vertex_count();
        let domains = match cond {
            Some(c) => c.domains(n)?,
            None => vec![Domain::Free; n],
        };
        let weights = f.weights();
        let factors: Vec<Factor<'_, F::W>> = h
            .arcs()
            .iter()
            .map(|arc| Factor {
                table: Cow::Borrowed(&weights[..]),
                vars: Cow::Borrowed(&arc[..]),
            })
            .collect();
        self.sums(n, &factors, &domains, watched)
    }

    pub fn partition_function<F: Weighted>(&self, f: &F, h: &TupleHypergraph) -> Result<F::W> {
        Ok(self.hypergraph_sums(f, h, None, &[])?.swap_remove(0))
    }

    pub fn cond_marginals<F: Weighted>(&self, f: &F, h: &TupleHypergraph, cond: &Conditioning, vertices: &[usize]) -> Result<MarginalTable> {
        let sums = self.hypergraph_sums(f, h, Some(cond), vertices)?;
        let z = sums.iter().cloned().fold(F::W::zero(), |a, b| a + b);
        if z.is_zero() {
            let unconditioned = self.partition_function(f, h)?;
            return Err(if unconditioned.is_zero() {
                Error::Unsatisfiable
            } else {
                Error::ZeroProbabilityCondition
            });
        }
        let z = z.to_rational();
        let probs: Vec<BigRational> = sums.iter().map(|w| w.to_rational() / &z).collect();
        Ok(MarginalTable::new(vertices.to_vec(), probs))
    }

    pub fn marginals<F: Weighted>(&self, f: &F, h: &TupleHypergraph, vertices: &[usize]) -> Result<MarginalTable> {
        self.cond_marginals(f, h, &Conditioning::empty(), vertices)
    }
}

/// `Z_{f;H}` with the default engine.
pub fn partition_function<F: Weighted>(f: &F, h: &TupleHypergraph) -> Result<F::W> {
    Engine::default().partition_function(f, h)
}

/// Joint Gibbs marginal of `vertices` with the default engine.
pub fn marginals<F: Weighted>(f: &F, h: &TupleHypergraph, vertices: &[usize]) -> Result<MarginalTable> {
    Engine::default().marginals(f, h, vertices)
}

/// Conditional joint marginal of `vertices` with the default engine.
pub fn cond_marginals<F: Weighted>(f: &F, h: &TupleHypergraph, cond: &Conditioning, vertices: &[usize]) -> Result<MarginalTable> {
    Engine::default().cond_marginals(f, h, cond, vertices)
}

/// Unnormalised weight sums bucketed by `vertices` with the default engine.
pub fn weight_sums<F: Weighted>(f: &F, h: &TupleHypergraph, cond: Option<&Conditioning>, vertices: &[usize]) -> Result<Vec<F::W>> {
    Engine::default().hypergraph_sums(f, h, cond, vertices)
}

/// `w_{f;H}(sigma)` for one full assignment.
pub fn weight_of<F: Weighted>(f: &F, h: &TupleHypergraph, sigma: &[bool]) -> F::W {
    let weights = f.weights();
    h.arcs().iter().fold(F::W::one(), |acc, arc| {
        let idx = arc.iter().fold(0usize, |b, &v| (b << 1) | sigma[v] as usize);
        acc * weights[idx].clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{BooleanFunction, TruthTable};

    fn naive_sums(f: &BooleanFunction, h: &TupleHypergraph, watched: &[usize]) -> Vec<u64> {
        let n = h.vertex_count();
        let mut acc = vec![0u64; 1 << watched.len()];
        for a in 0..1usize << n {
            let sigma: Vec<bool> = (0..n).map(|v| a >> v & 1 == 1).collect();
            let w = weight_of(f, h, &sigma);
            let b = watched.iter().fold(0, |b, &v| (b << 1) | sigma[v] as usize);
            acc[b] += w;
        }
        acc
    }

    fn intro_gadget() -> TupleHypergraph {
        TupleHypergraph::with_arcs(4, 3, vec![vec![0, 2, 3], vec![1, 2, 3]]).unwrap()
    }

    #[test]
    fn intro_counts() {
        let nae = BooleanFunction::not_all_equal(3);
        let h = intro_gadget();
        assert_eq!(partition_function(&nae, &h).unwrap(), 10);
        assert_eq!(weight_sums(&nae, &h, None, &[0, 1]).unwrap(), vec![3, 2, 2, 3]);
    }

    #[test]
    fn isolated_and_single_arc() {
        let h = TupleHypergraph::new(3, 2);
        assert_eq!(partition_function(&BooleanFunction::or(), &h).unwrap(), 8);
        let arc = TupleHypergraph::with_arcs(2, 2, vec![vec![0, 1]]).unwrap();
        assert_eq!(partition_function(&BooleanFunction::implies(), &arc).unwrap(), 3);
    }

    #[test]
    fn matches_naive_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..60 {
            let k = rng.gen_range(1..=3);
            let n = rng.gen_range(k..=8);
            let f = BooleanFunction::from_predicate(k, |_| rng.gen_bool(0.6));
            let mut h = TupleHypergraph::new(n, k);
            for _ in 0..rng.gen_range(0..6) {
                let mut arc: Vec<usize> = Vec::new();
                while arc.len() < k {
                    let v = rng.gen_range(0..n);
                    if !arc.contains(&v) {
                        arc.push(v);
                    }
                }
                h.add_arc(arc).unwrap();
            }
            let watched = [0, n - 1];
            let watched = if n > 1 { &watched[..] } else { &watched[..1] };
            assert_eq!(weight_sums(&f, &h, None, watched).unwrap(), naive_sums(&f, &h, watched));
        }
    }

    #[test]
    fn parallel_split_is_identical() {
        let f = BooleanFunction::or();
        let arcs: Vec<Vec<usize>> = (0..17).map(|i| vec![i, i + 1]).collect();
        let h = TupleHypergraph::with_arcs(18, 2, arcs).unwrap();
        let serial = Engine { max_vertices: 24, parallel_from: 100 };
        let parallel = Engine { max_vertices: 24, parallel_from: 2 };
        assert_eq!(
            serial.hypergraph_sums(&f, &h, None, &[0, 17]).unwrap(),
            parallel.hypergraph_sums(&f, &h, None, &[0, 17]).unwrap()
        );
    }

    #[test]
    fn cap_and_errors() {
        let h = TupleHypergraph::new(30, 2);
        assert!(matches!(partition_function(&BooleanFunction::or(), &h), Err(Error::ResourceCap(_))));
        let arc = TupleHypergraph::with_arcs(3, 3, vec![vec![0, 1, 2]]).unwrap();
        assert!(matches!(
            partition_function(&BooleanFunction::or(), &arc),
            Err(Error::ArityMismatch { .. })
        ));
        let zero = BooleanFunction::zero(3);
        assert_eq!(marginals(&zero, &arc, &[0]), Err(Error::Unsatisfiable));
    }

    #[test]
    fn conditioning_examples() {
        let arc = TupleHypergraph::with_arcs(2, 2, vec![vec![0, 1]]).unwrap();
        let imp = BooleanFunction::implies();
        let m = cond_marginals(&imp, &arc, &Conditioning::pins(vec![1], vec![]), &[0]).unwrap();
        assert_eq!(m.prob(&[false]), BigRational::one());
        let or = BooleanFunction::or();
        let eq = Conditioning { pin0: vec![], pin1: vec![], eq: vec![vec![0, 1]] };
        let m = cond_marginals(&or, &arc, &eq, &[0, 1]).unwrap();
        assert_eq!(m.probs()[3], BigRational::one());
        assert!(m.probs()[..3].iter().all(|p| p.is_zero()));
        let both0 = Conditioning::pins(vec![0, 1], vec![]);
        assert_eq!(cond_marginals(&or, &arc, &both0, &[0]), Err(Error::ZeroProbabilityCondition));
        let empty = cond_marginals(&or, &arc, &Conditioning::empty(), &[0, 1]).unwrap();
        assert_eq!(empty, marginals(&or, &arc, &[0, 1]).unwrap());
    }

    #[test]
    fn weighted_tables() {
        let t = TruthTable::new(2, vec![BigRational::one(), BigRational::new(1.into(), 2.into()), BigRational::zero(), BigRational::one()]).unwrap();
        let arc = TupleHypergraph::with_arcs(2, 2, vec![vec![0, 1]]).unwrap();
        assert_eq!(partition_function(&t, &arc).unwrap(), BigRational::new(5.into(), 2.into()));
        let f = TruthTable::new(2, vec![1.0f64, 0.5, 0.0, 1.0]).unwrap();
        assert_eq!(partition_function(&f, &arc).unwrap(), 2.5);
    }
}
