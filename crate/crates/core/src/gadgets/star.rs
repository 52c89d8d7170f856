//! Gadgets built from all orderings of one vertex tuple.

use super::{EqualityGadget, PinGadget};
use crate::boolfn::{BooleanFunction, EasyTag, DEFAULT_SYMMETRISE_CAP};
use crate::error::{Error, Result};
use crate::hypergraph::{Engine, TupleHypergraph};
use crate::perm::permutations;

/// Hyperarcs `(v_{pi(1)}, .., v_{pi(k)})` for every permutation, over `vertices`.
fn all_orderings(vertices: &[usize]) -> Vec<Vec<usize>> {
    permutations(vertices.len())
        .into_iter()
        .map(|p| p.into_iter().map(|i| vertices[i]).collect())
        .collect()
}

fn star_tag(f: &BooleanFunction) -> Result<Option<EasyTag>> {
    if f.arity() > DEFAULT_SYMMETRISE_CAP {
        return Err(Error::ResourceCap(format!(
            "star gadgets need arity <= {DEFAULT_SYMMETRISE_CAP}, got {}",
            f.arity()
        )));
    }
    Ok(f.symmetrise()?.easy_member())
}

/// Perfect pinning to `spin` when `f*` is allone (spin 1) or allzero (spin 0).
pub fn pin_gadget_star(f: &BooleanFunction, spin: bool) -> Result<PinGadget> {
    let want = if spin { EasyTag::AllOne } else { EasyTag::AllZero };
    if star_tag(f)? != Some(want) {
        return Err(Error::Precondition(format!(
            "pinning to {} from the star needs f* = {}",
            spin as u8,
            want.name()
        )));
    }
    let k = f.arity();
    let verts: Vec<usize> = (0..k).collect();
    Ok(PinGadget {
        graph: TupleHypergraph::with_arcs(k, k, all_orderings(&verts))?,
        vertex: 0,
        spin,
    })
}

/// Perfect equality when `f*` is EQ (star on `k` vertices) or a parity function
/// (two overlapping stars on `k + 1` vertices).
pub fn equality_gadget_star(f: &BooleanFunction) -> Result<EqualityGadget> {
    let k = f.arity();
    match star_tag(f)? {
        Some(EasyTag::Equality) => {
            let verts: Vec<usize> = (0..k).collect();
            Ok(EqualityGadget {
                graph: TupleHypergraph::with_arcs(k, k, all_orderings(&verts))?,
                pair: (0, 1),
            })
        }
        Some(EasyTag::Even | EasyTag::Odd) => {
            let first: Vec<usize> = (0..k).collect();
            let second: Vec<usize> = (1..=k).collect();
            let mut arcs = all_orderings(&first);
            arcs.extend(all_orderings(&second));
            Ok(EqualityGadget {
                graph: TupleHypergraph::with_arcs(k + 1, k, arcs)?,
                pair: (0, k),
            })
        }
        _ => Err(Error::Precondition(
            "equality from the star needs f* in {EQ, even, odd}".into(),
        )),
    }
}

/// Result of the construction for functions whose symmetrisation is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroStar {
    Pins { pin0: PinGadget, pin1: PinGadget },
    Equality(EqualityGadget),
}

/// `f_T` for a set of permutations: the product of `f` over the reordered arguments.
fn product_is_zero(f: &BooleanFunction, perms: &[&Vec<usize>]) -> bool {
    let k = f.arity();
    (0..1usize << k).all(|idx| {
        perms.iter().any(|p| {
            let x: Vec<bool> = p.iter().map(|&i| crate::boolfn::arg_bit(idx, k, i)).collect();
            !f.eval(&x)
        })
    })
}

/// Pinning pair or equality gadget for `f != zero` with `f* = zero`.
pub fn zero_star_witness(f: &BooleanFunction) -> Result<ZeroStar> {
    let k = f.arity();
    if f.is_zero() || star_tag(f)? != Some(EasyTag::Zero) {
        return Err(Error::Precondition("needs f != zero and f* = zero".into()));
    }
    let all = permutations(k);
    // One removal pass in lexicographic order leaves a set where every single
    // removal makes the product nonzero (removal only enlarges the support).
    let mut keep: Vec<bool> = vec![true; all.len()];
    for i in 0..all.len() {
        keep[i] = false;
        let rest: Vec<&Vec<usize>> = all.iter().zip(&keep).filter(|(_, &k)| k).map(|(p, _)| p).collect();
        if !product_is_zero(f, &rest) {
            keep[i] = true;
        }
    }
    let t: Vec<&Vec<usize>> = all.iter().zip(&keep).filter(|(_, &k)| k).map(|(p, _)| p).collect();
    debug_assert!(t.len() > 1);
    let tau = t[0].clone();

    // Vertex x_i is i; y_{i+1}..y_k are appended after the x's.
    let h = |i: usize| -> Result<(TupleHypergraph, usize, usize)> {
        let mut g = TupleHypergraph::new(k, k);
        for p in &t[1..] {
            g.add_arc(p.to_vec())?;
        }
        let ys = g.add_vertices(k - i);
        let mut arc: Vec<usize> = tau[..i].to_vec();
        arc.extend(ys.clone());
        g.add_arc(arc)?;
        Ok((g, tau.get(i).copied().unwrap_or(0), ys.start))
    };
    let engine = Engine::default();
    let z = |g: &TupleHypergraph| -> Result<u64> { engine.partition_function(f, g) };
    let mut found = None;
    for j in 0..k {
        let (hj, x, y) = h(j)?;
        let (hj1, _, _) = h(j + 1)?;
        if z(&hj)? > 0 && z(&hj1)? == 0 {
            found = Some((hj, x, y));
            break;
        }
    }
    let (hj, x, y) = found.ok_or_else(|| Error::Verification("no switching index in the zero-star chain".into()))?;
    let w = engine.hypergraph_sums(f, &hj, None, &[x, y])?;
    let (z01, z10) = (w[1], w[2]);
    debug_assert!(w[0] == 0 && w[3] == 0);
    if z10 == 0 || z01 == 0 {
        // x is constant; y carries the opposite spin.
        let x_spin = z01 == 0;
        return Ok(ZeroStar::Pins {
            pin0: PinGadget {
                graph: hj.clone(),
                vertex: if x_spin { y } else { x },
                spin: false,
            },
            pin1: PinGadget {
                graph: hj,
                vertex: if x_spin { x } else { y },
                spin: true,
            },
        });
    }
    let mut glued = hj.clone();
    let image = glued.splice_in(&hj, &[(x, y)])?;
    Ok(ZeroStar::Equality(EqualityGadget {
        graph: glued,
        pair: (x, image[y]),
    }))
}
