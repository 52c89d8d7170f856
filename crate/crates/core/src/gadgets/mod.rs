//! Constructive witnesses: gadget builders, the main classification recursion,
//! bounded searches and the transitivity constructions.

mod catalog;
mod classify;
mod fallback;
mod implement;
mod lift;
mod pipeline;
mod record;
mod selfdual;
mod star;
mod transfer;

pub use catalog::canonical_hypergraphs;
pub use classify::{classify_function, single_hyperarc_pair_witness, Synthesizer};
pub use fallback::{perfect_equality_search, symmetric_fallback_search};
pub use implement::{implement_search, ImplementationCertificate, SearchOutcome};
pub use lift::{lift_arcs, lift_gadget, PinSupply};
pub use pipeline::perfect_implies_gadget;
pub use record::{WitnessKind, WitnessRecord};
pub use selfdual::{sd_hard_witness, sd_xor_gadget};
pub use star::{equality_gadget_star, pin_gadget_star, zero_star_witness, ZeroStar};
pub use transfer::{
    csp_to_gadget, csp_to_simulation, delta_pins_from_implies, pinning_transfer, realise_conditioning,
    DeltaSimulations, PinningTransfer, TupleSimulation,
};

use crate::boolfn::{is_hard, BinaryWeights, BooleanFunction};
use crate::error::{Error, Result};
use crate::hypergraph::{
    pair_is_perfect_equality, verify_simulation_tuple, Conditioning, Engine, SupportCertificate, SupportFlags,
    TupleHypergraph,
};
use crate::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Bounds for the search-based fallbacks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    /// Largest candidate gadget (vertices).
    pub max_vertices: usize,
    /// Largest candidate gadget (hyperarcs).
    pub max_arcs: usize,
    /// Largest candidate gadget that is also tried with conditionings.
    pub conditioned_max_vertices: usize,
    /// Auxiliary variables allowed in implementation search.
    pub max_aux: usize,
    /// Constraints allowed in implementation search.
    pub max_constraints: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_vertices: 6,
            max_arcs: 6,
            conditioned_max_vertices: 5,
            max_aux: 3,
            max_constraints: 4,
        }
    }
}

/// A gadget with one distinguished vertex whose spin it forces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinGadget {
    pub graph: TupleHypergraph,
    pub vertex: usize,
    pub spin: bool,
}

impl PinGadget {
    /// `mu(sigma_vertex = spin) = 1` exactly.
    pub fn verify(&self, f: &BooleanFunction, engine: &Engine) -> Result<bool> {
        let w = engine.hypergraph_sums(f, &self.graph, None, &[self.vertex])?;
        if w[0] + w[1] == 0 {
            return Err(Error::Unsatisfiable);
        }
        Ok(w[!self.spin as usize] == 0)
    }

    /// The same gadget as a support certificate.
    pub fn certificate(&self) -> SupportCertificate {
        SupportCertificate {
            kind: if self.spin {
                crate::hypergraph::SupportKind::Pin1
            } else {
                crate::hypergraph::SupportKind::Pin0
            },
            graph: self.graph.clone(),
            vertices: vec![self.vertex],
        }
    }
}

/// A gadget whose pair marginal is exactly `(1/2, 0, 0, 1/2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityGadget {
    pub graph: TupleHypergraph,
    pub pair: (usize, usize),
}

impl EqualityGadget {
    pub fn verify(&self, f: &BooleanFunction, engine: &Engine) -> Result<bool> {
        pair_is_perfect_equality(f, &self.graph, self.pair.0, self.pair.1, engine)
    }
}

/// A (possibly conditioned) simulation of a hard binary function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardSimulation {
    pub graph: TupleHypergraph,
    pub conditioning: Conditioning,
    pub pair: (usize, usize),
    /// Target weights, reduced to coprime integers.
    #[serde(with = "crate::format::serde_rational_binary")]
    pub target: BinaryWeights<Rational>,
    /// Support certificates backing every primitive the conditioning uses.
    pub support: Vec<SupportCertificate>,
}

impl HardSimulation {
    pub fn verify(&self, f: &BooleanFunction, engine: &Engine) -> Result<bool> {
        if !self.conditioning.is_empty() {
            let have = SupportFlags::from_certificates(&self.support);
            if !have.covers(&self.conditioning.requirements()) {
                return Ok(false);
            }
        }
        for c in &self.support {
            if !c.verify(f, engine)? {
                return Ok(false);
            }
        }
        let table = crate::TruthTable::new(2, self.target.to_array().to_vec())?;
        Ok(is_hard(&self.target)
            && verify_simulation_tuple(f, &self.graph, &self.conditioning, &[self.pair.0, self.pair.1], &table, engine)?)
    }

    pub fn is_perfect(&self) -> bool {
        self.conditioning.is_empty()
    }
}

/// Outcome of the constructive classification of one function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassificationWitness {
    Affine,
    PerfectEquality(EqualityGadget),
    HardSimulation(HardSimulation),
    Inconclusive { trace: Vec<String> },
}

impl ClassificationWitness {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, ClassificationWitness::Inconclusive { .. })
    }

    /// Replays the witness against `f` with exact arithmetic.
    pub fn verify(&self, f: &BooleanFunction, engine: &Engine) -> Result<bool> {
        match self {
            ClassificationWitness::Affine => Ok(f.is_affine()),
            ClassificationWitness::PerfectEquality(g) => g.verify(f, engine),
            ClassificationWitness::HardSimulation(s) => s.verify(f, engine),
            ClassificationWitness::Inconclusive { .. } => Ok(false),
        }
    }

    pub fn graph(&self) -> Option<&TupleHypergraph> {
        match self {
            ClassificationWitness::PerfectEquality(g) => Some(&g.graph),
            ClassificationWitness::HardSimulation(s) => Some(&s.graph),
            _ => None,
        }
    }

    /// Degree of the witness gadget (0 when there is none).
    pub fn degree(&self) -> usize {
        self.graph().map_or(0, TupleHypergraph::degree)
    }

    /// The same witness read under the spin flip `x -> not x`.
    pub fn complement(&self) -> Self {
        match self {
            ClassificationWitness::HardSimulation(s) => ClassificationWitness::HardSimulation(HardSimulation {
                graph: s.graph.clone(),
                conditioning: s.conditioning.complement(),
                pair: s.pair,
                target: s.target.complement(),
                support: s.support.iter().map(SupportCertificate::complement).collect(),
            }),
            other => other.clone(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ClassificationWitness::Affine => "affine",
            ClassificationWitness::PerfectEquality(_) => "perfect_equality",
            ClassificationWitness::HardSimulation(_) => "hard_simulation",
            ClassificationWitness::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// Divides integer weights by their gcd.
pub(crate) fn reduced_target(counts: [u64; 4]) -> BinaryWeights<Rational> {
    let g = counts.iter().fold(0u64, |a, &b| a.gcd(&b)).max(1);
    BinaryWeights::from_array(counts.map(|c| Rational::from_integer(BigInt::from(c / g))))
}

/// Hard simulation on a single hyperarc with empty conditioning.
pub(crate) fn single_arc_simulation(f: &BooleanFunction, i: usize, j: usize) -> HardSimulation {
    let k = f.arity();
    HardSimulation {
        graph: TupleHypergraph::with_arcs(k, k, vec![(0..k).collect()]).expect("valid arc"),
        conditioning: Conditioning::empty(),
        pair: (i, j),
        target: reduced_target(f.pair_counts(i, j)),
        support: Vec::new(),
    }
}
