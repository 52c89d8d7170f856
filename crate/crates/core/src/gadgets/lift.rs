//! Transfer of gadgets from a pinned subfunction back to the full function.

use super::{ClassificationWitness, EqualityGadget, HardSimulation, PinGadget};
use crate::error::{Error, Result};
use crate::hypergraph::{SupportCertificate, TupleHypergraph};

/// Perfect pinning gadgets available for the host function.
#[derive(Clone, Debug, Default)]
pub struct PinSupply {
    pub pin0: Option<PinGadget>,
    pub pin1: Option<PinGadget>,
}

impl PinSupply {
    pub fn new(pin0: Option<PinGadget>, pin1: Option<PinGadget>) -> Self {
        PinSupply { pin0, pin1 }
    }

    fn get(&self, spin: bool) -> Option<&PinGadget> {
        if spin {
            self.pin1.as_ref()
        } else {
            self.pin0.as_ref()
        }
    }
}

/// Lifts the arcs of `h_graph` (over `f` pinned at `zeros`/`ones`) to arity `k`.
///
/// Original vertex ids are kept; each pinned position gets one fresh vertex shared
/// by all arcs. Returns the graph and `(fresh vertex, spin)` per pinned position.
pub fn lift_arcs(h_graph: &TupleHypergraph, k: usize, zeros: &[usize], ones: &[usize]) -> Result<(TupleHypergraph, Vec<(usize, bool)>)> {
    let mut spin_at: Vec<Option<bool>> = vec![None; k];
    for (&p, s) in zeros.iter().map(|p| (p, false)).chain(ones.iter().map(|p| (p, true))) {
        if p >= k {
            return Err(Error::VertexOutOfRange { vertex: p, n: k });
        }
        if spin_at[p].replace(s).is_some() {
            return Err(Error::OverlappingSets(p));
        }
    }
    let free: Vec<usize> = (0..k).filter(|&p| spin_at[p].is_none()).collect();
    if free.len() != h_graph.arity() {
        return Err(Error::ArityMismatch {
            expected: free.len(),
            found: h_graph.arity(),
        });
    }
    let mut g = TupleHypergraph::new(h_graph.vertex_count(), k);
    let mut fresh: Vec<usize> = vec![usize::MAX; k];
    let mut pinned = Vec::new();
    for p in 0..k {
        if let Some(s) = spin_at[p] {
            fresh[p] = g.add_vertex();
            pinned.push((fresh[p], s));
        }
    }
    for arc in h_graph.arcs() {
        let mut lifted = fresh.clone();
        for (slot, &v) in free.iter().zip(arc) {
            lifted[*slot] = v;
        }
        g.add_arc(lifted)?;
    }
    Ok((g, pinned))
}

/// [`lift_arcs`] followed by one pin-gadget copy per fresh vertex.
pub fn lift_gadget(h_graph: &TupleHypergraph, k: usize, zeros: &[usize], ones: &[usize], pins: &PinSupply) -> Result<TupleHypergraph> {
    let (mut g, pinned) = lift_arcs(h_graph, k, zeros, ones)?;
    for (v, s) in pinned {
        let pin = pins
            .get(s)
            .ok_or_else(|| Error::Precondition(format!("no perfect pin-{} gadget supplied", s as u8)))?;
        g.splice_in(&pin.graph, &[(pin.vertex, v)])?;
    }
    Ok(g)
}

/// Lifts every gadget inside a witness; vertex ids of the original graph are unchanged.
pub(crate) fn lift_witness(w: ClassificationWitness, k: usize, zeros: &[usize], ones: &[usize], pins: &PinSupply) -> Result<ClassificationWitness> {
    if zeros.is_empty() && ones.is_empty() {
        return Ok(w);
    }
    let lift = |g: &TupleHypergraph| lift_gadget(g, k, zeros, ones, pins);
    Ok(match w {
        ClassificationWitness::PerfectEquality(e) => ClassificationWitness::PerfectEquality(EqualityGadget {
            graph: lift(&e.graph)?,
            pair: e.pair,
        }),
        ClassificationWitness::HardSimulation(s) => ClassificationWitness::HardSimulation(HardSimulation {
            graph: lift(&s.graph)?,
            conditioning: s.conditioning,
            pair: s.pair,
            target: s.target,
            support: s
                .support
                .iter()
                .map(|c| {
                    Ok(SupportCertificate {
                        kind: c.kind,
                        graph: lift(&c.graph)?,
                        vertices: c.vertices.clone(),
                    })
                })
                .collect::<Result<_>>()?,
        }),
        other => other,
    })
}
