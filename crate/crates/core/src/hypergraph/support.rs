//! Certificates that a function supports pinning or equality.

use super::engine::Engine;
use super::TupleHypergraph;
use crate::boolfn::Weighted;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportKind {
    Pin0,
    Pin1,
    Equality,
}

/// Which conditioning primitives are available.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportFlags {
    pub pin0: bool,
    pub pin1: bool,
    pub equality: bool,
}

impl SupportFlags {
    /// True when every primitive required by `needed` is available.
    pub fn covers(&self, needed: &SupportFlags) -> bool {
        (!needed.pin0 || self.pin0) && (!needed.pin1 || self.pin1) && (!needed.equality || self.equality)
    }

    pub fn from_certificates(certs: &[SupportCertificate]) -> Self {
        let has = |k| certs.iter().any(|c| c.kind == k);
        SupportFlags {
            pin0: has(SupportKind::Pin0),
            pin1: has(SupportKind::Pin1),
            equality: has(SupportKind::Equality),
        }
    }
}

/// A gadget whose unconditioned marginals witness support for one primitive.
///
/// Pin-0: `mu(v = 0) > mu(v = 1)`. Pin-1: the reverse. Equality: on `(x, y)`,
/// `mu(00) = mu(11)` and `mu(x = y) > mu(x != y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportCertificate {
    pub kind: SupportKind,
    pub graph: TupleHypergraph,
    pub vertices: Vec<usize>,
}

impl SupportCertificate {
    pub fn verify<F: Weighted>(&self, f: &F, engine: &Engine) -> Result<bool> {
        let expected = match self.kind {
            SupportKind::Pin0 | SupportKind::Pin1 => 1,
            SupportKind::Equality => 2,
        };
        if self.vertices.len() != expected {
            return Err(Error::Verification(format!(
                "{:?} certificate needs {expected} vertices",
                self.kind
            )));
        }
        let m = engine.marginals(f, &self.graph, &self.vertices)?;
        let p = m.probs();
        Ok(match self.kind {
            SupportKind::Pin0 => p[0] > p[1],
            SupportKind::Pin1 => p[1] > p[0],
            SupportKind::Equality => {
                self.vertices[0] != self.vertices[1] && p[0] == p[3] && &p[0] + &p[3] > &p[1] + &p[2]
            }
        })
    }

    /// Same gadget read under the spin flip.
    pub fn complement(&self) -> Self {
        let kind = match self.kind {
            SupportKind::Pin0 => SupportKind::Pin1,
            SupportKind::Pin1 => SupportKind::Pin0,
            SupportKind::Equality => SupportKind::Equality,
        };
        SupportCertificate { kind, ..self.clone() }
    }
}
