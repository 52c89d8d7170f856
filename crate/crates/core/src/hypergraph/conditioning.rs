use super::engine::Domain;
use super::support::SupportFlags;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Pin-to-0 set, pin-to-1 set and equality blocks, all pairwise disjoint.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Conditioning {
    pub pin0: Vec<usize>,
    pub pin1: Vec<usize>,
    pub eq: Vec<Vec<usize>>,
}

impl Conditioning {
    pub fn empty() -> Self {
        Conditioning::default()
    }

    pub fn pins(pin0: Vec<usize>, pin1: Vec<usize>) -> Self {
        Conditioning { pin0, pin1, eq: Vec::new() }.normalized()
    }

    /// True when no vertex is constrained (singleton equality blocks are no-ops).
    pub fn is_empty(&self) -> bool {
        self.pin0.is_empty() && self.pin1.is_empty() && self.eq.iter().all(|b| b.len() <= 1)
    }

    /// Sorted, deduplicated copy with singleton equality blocks dropped.
    pub fn normalized(&self) -> Self {
        let sorted = |v: &[usize]| {
            let mut v = v.to_vec();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut eq: Vec<Vec<usize>> = self.eq.iter().map(|b| sorted(b)).filter(|b| b.len() > 1).collect();
        eq.sort();
        Conditioning {
            pin0: sorted(&self.pin0),
            pin1: sorted(&self.pin1),
            eq,
        }
    }

    /// Checks ranges and the disjointness conditions.
    pub fn validate(&self, n: usize) -> Result<()> {
        let mut owner: Vec<Option<usize>> = vec![None; n];
        let groups = std::iter::once(&self.pin0)
            .chain(std::iter::once(&self.pin1))
            .chain(self.eq.iter());
        for (g, group) in groups.enumerate() {
            for &v in group {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                match owner[v] {
                    Some(o) if o != g => {
                        return Err(Error::InvalidConditioning(format!(
                            "vertex {v} appears in two conditioning sets"
                        )))
                    }
                    _ => owner[v] = Some(g),
                }
            }
        }
        Ok(())
    }

    /// Primitives the base function must support for this conditioning to be admissible.
    pub fn requirements(&self) -> SupportFlags {
        SupportFlags {
            pin0: !self.pin0.is_empty(),
            pin1: !self.pin1.is_empty(),
            equality: self.eq.iter().any(|b| b.len() > 1),
        }
    }

    /// Per-vertex enumeration domains realising the conditioning.
    pub fn domains(&self, n: usize) -> Result<Vec<Domain>> {
        self.validate(n)?;
        let mut d = vec![Domain::Free; n];
        for &v in &self.pin0 {
            d[v] = Domain::Fixed(false);
        }
        for &v in &self.pin1 {
            d[v] = Domain::Fixed(true);
        }
        for block in &self.eq {
            if let Some(&rep) = block.iter().min() {
                for &v in block {
                    if v != rep {
                        d[v] = Domain::Same(rep);
                    }
                }
            }
        }
        Ok(d)
    }

    /// Spin-flipped conditioning (pins exchanged).
    pub fn complement(&self) -> Self {
        Conditioning {
            pin0: self.pin1.clone(),
            pin1: self.pin0.clone(),
            eq: self.eq.clone(),
        }
    }

    /// Renames vertices through `image`.
    pub fn remap(&self, image: &[usize]) -> Self {
        let m = |v: &Vec<usize>| v.iter().map(|&x| image[x]).collect::<Vec<_>>();
        Conditioning {
            pin0: m(&self.pin0),
            pin1: m(&self.pin1),
            eq: self.eq.iter().map(m).collect(),
        }
        .normalized()
    }

    /// Union of two conditionings on disjoint vertex sets.
    pub fn union(&self, other: &Conditioning) -> Self {
        Conditioning {
            pin0: [self.pin0.clone(), other.pin0.clone()].concat(),
            pin1: [self.pin1.clone(), other.pin1.clone()].concat(),
            eq: [self.eq.clone(), other.eq.clone()].concat(),
        }
        .normalized()
    }

    /// Adds the requirement that every vertex of `block` takes one common spin,
    /// absorbing into pin sets or merging with intersecting blocks.
    pub fn merge_block(&mut self, block: &[usize]) -> Result<()> {
        let hits0 = block.iter().any(|v| self.pin0.contains(v));
        let hits1 = block.iter().any(|v| self.pin1.contains(v));
        let touching: Vec<usize> = (0..self.eq.len())
            .filter(|&i| self.eq[i].iter().any(|v| block.contains(v)))
            .collect();
        let mut merged: Vec<usize> = block.to_vec();
        for &i in touching.iter().rev() {
            merged.extend(self.eq.remove(i));
        }
        match (hits0, hits1) {
            (true, true) => {
                return Err(Error::InstanceUnsatisfiable(
                    "an occurrence set meets both pin sets".into(),
                ))
            }
            (true, false) => self.pin0.extend(merged),
            (false, true) => self.pin1.extend(merged),
            (false, false) => self.eq.push(merged),
        }
        *self = self.normalized();
        Ok(())
    }
}
