//! Self-contained witness records, replayable without any synthesis logic.

use super::{ClassificationWitness, EqualityGadget, HardSimulation};
use crate::boolfn::{BinaryWeights, BooleanFunction};
use crate::error::{Error, Result};
use crate::format::{parse_rational, rational_to_string};
use crate::hypergraph::{Conditioning, Engine, SupportCertificate, TupleHypergraph};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Affine,
    PerfectEquality,
    HardSimulation,
    Inconclusive,
}

/// Function table, gadget, conditioning, terminals, claimed pair function and the
/// exact marginals at the terminals, all as plain data. Rationals are `"n/d"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub function: String,
    pub arity: usize,
    pub kind: WitnessKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<TupleHypergraph>,
    #[serde(default)]
    pub conditioning: Conditioning,
    #[serde(default)]
    pub vertices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<String>>,
    /// Exact (conditional) marginal at `vertices`, indexed by the spin pair.
    #[serde(default)]
    pub marginals: Vec<String>,
    #[serde(default)]
    pub support: Vec<SupportCertificate>,
    pub degree: usize,
    #[serde(default)]
    pub trace: Vec<String>,
}

impl WitnessRecord {
    /// Captures `w` for `f`, computing the terminal marginals exactly.
    pub fn from_witness(f: &BooleanFunction, w: &ClassificationWitness, engine: &Engine) -> Result<Self> {
        let mut rec = WitnessRecord {
            function: f.to_bitstring(),
            arity: f.arity(),
            kind: WitnessKind::Affine,
            graph: w.graph().cloned(),
            conditioning: Conditioning::empty(),
            vertices: Vec::new(),
            target: None,
            marginals: Vec::new(),
            support: Vec::new(),
            degree: w.degree(),
            trace: Vec::new(),
        };
        match w {
            ClassificationWitness::Affine => {}
            ClassificationWitness::Inconclusive { trace } => {
                rec.kind = WitnessKind::Inconclusive;
                rec.trace = trace.clone();
            }
            ClassificationWitness::PerfectEquality(g) => {
                rec.kind = WitnessKind::PerfectEquality;
                rec.vertices = vec![g.pair.0, g.pair.1];
            }
            ClassificationWitness::HardSimulation(s) => {
                rec.kind = WitnessKind::HardSimulation;
                rec.conditioning = s.conditioning.clone();
                rec.vertices = vec![s.pair.0, s.pair.1];
                rec.target = Some(s.target.to_array().iter().map(rational_to_string).collect());
                rec.support = s.support.clone();
            }
        }
        rec.marginals = rec.measure(f, engine)?;
        Ok(rec)
    }

    fn measure(&self, f: &BooleanFunction, engine: &Engine) -> Result<Vec<String>> {
        match &self.graph {
            Some(g) if !self.vertices.is_empty() => Ok(engine
                .cond_marginals(f, g, &self.conditioning, &self.vertices)?
                .probs()
                .iter()
                .map(rational_to_string)
                .collect()),
            _ => Ok(Vec::new()),
        }
    }

    pub fn function(&self) -> Result<BooleanFunction> {
        let f = BooleanFunction::from_bitstring(&self.function)?;
        if f.arity() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: f.arity() });
        }
        Ok(f)
    }

    /// Rebuilds the witness from the record's data.
    pub fn to_witness(&self) -> Result<ClassificationWitness> {
        let graph = || {
            self.graph
                .clone()
                .ok_or_else(|| Error::Verification("record has no hypergraph".into()))
        };
        let pair = || match self.vertices[..] {
            [u, v] => Ok((u, v)),
            _ => Err(Error::Verification("record needs exactly two vertices".into())),
        };
        Ok(match self.kind {
            WitnessKind::Affine => ClassificationWitness::Affine,
            WitnessKind::Inconclusive => ClassificationWitness::Inconclusive { trace: self.trace.clone() },
            WitnessKind::PerfectEquality => ClassificationWitness::PerfectEquality(EqualityGadget { graph: graph()?, pair: pair()? }),
            WitnessKind::HardSimulation => {
                let t = self
                    .target
                    .as_ref()
                    .ok_or_else(|| Error::Verification("record has no target".into()))?;
                let [a, b, c, d] = &t[..] else {
                    return Err(Error::Verification("target needs four entries".into()));
                };
                ClassificationWitness::HardSimulation(HardSimulation {
                    graph: graph()?,
                    conditioning: self.conditioning.clone(),
                    pair: pair()?,
                    target: BinaryWeights::new(parse_rational(a)?, parse_rational(b)?, parse_rational(c)?, parse_rational(d)?),
                    support: self.support.clone(),
                })
            }
        })
    }

    /// Replays the witness and checks the recorded marginals and degree against fresh enumeration.
    pub fn verify(&self, engine: &Engine) -> Result<bool> {
        let f = self.function()?;
        let w = self.to_witness()?;
        if w.is_inconclusive() || !w.verify(&f, engine)? || w.degree() != self.degree {
            return Ok(false);
        }
        Ok(self.measure(&f, engine)? == self.marginals)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialise")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
    }
}
