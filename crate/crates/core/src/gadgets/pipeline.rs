//! Locating a perfect Implies gadget, the input of the bipartite independent-set reduction.

use super::transfer::TupleSimulation;
use super::{csp_to_gadget, equality_gadget_star, implement_search, perfect_equality_search, SearchBounds};
use crate::boolfn::{BooleanFunction, EasyTag};
use crate::error::{Error, Result};
use crate::hypergraph::{Conditioning, Engine, TupleHypergraph};

/// A single hyperarc whose slot pair carries Implies, else an implementation of
/// Implies over `{f}` glued with a perfect equality gadget. `None` when neither
/// exists within `bounds`.
pub fn perfect_implies_gadget(f: &BooleanFunction, bounds: &SearchBounds, engine: &Engine) -> Result<Option<TupleSimulation>> {
    let k = f.arity();
    let implies = BooleanFunction::implies().to_table::<u64>();
    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            let [c00, c01, c10, c11] = f.pair_counts(i, j);
            if c10 == 0 && c00 > 0 && c00 == c01 && c01 == c11 {
                return Ok(Some(TupleSimulation {
                    graph: TupleHypergraph::with_arcs(k, k, vec![(0..k).collect()])?,
                    conditioning: Conditioning::empty(),
                    terminals: vec![i, j],
                    target: implies,
                    support: Vec::new(),
                }));
            }
        }
    }
    let star = match f.symmetrise() {
        Ok(s) if matches!(s.easy_member(), Some(EasyTag::Equality | EasyTag::Even | EasyTag::Odd)) => {
            Some(equality_gadget_star(f)?)
        }
        Ok(_) | Err(Error::ResourceCap(_)) => None,
        Err(e) => return Err(e),
    };
    let eq = match star {
        Some(eq) => eq,
        None => match perfect_equality_search(f, bounds)? {
            Some(eq) => eq,
            None => return Ok(None),
        },
    };
    let Some(cert) = implement_search(std::slice::from_ref(f), &implies, bounds).found else {
        return Ok(None);
    };
    csp_to_gadget(f, &eq, &cert, &[TupleSimulation::single_arc(f)], engine).map(Some)
}
