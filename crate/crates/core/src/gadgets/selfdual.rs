//! Self-dual functions: XOR from one hyperarc and equality splices, and the
//! variable-collapse case analysis that yields a hard pair function.

use super::transfer::TupleSimulation;
use super::{csp_to_gadget, reduced_target, ClassificationWitness, EqualityGadget, HardSimulation, ImplementationCertificate};
use crate::boolfn::{arg_bit, BooleanFunction, TruthTable};
use crate::csp::CspInstance;
use crate::error::{Error, Result};
use crate::hypergraph::{Conditioning, Engine, TupleHypergraph};

const W: usize = 0;
const X: usize = 1;
const Y: usize = 2;
const Z: usize = 3;

/// One hyperarc on a satisfying `x` outside `{0, 1}`, with the 0-slots and the
/// 1-slots of `x` tied by equality copies; the terminals carry exact XOR.
pub fn sd_xor_gadget(f: &BooleanFunction, eq: &EqualityGadget, engine: &Engine) -> Result<TupleSimulation> {
    let k = f.arity();
    if !f.is_self_dual() || f.is_zero() || f.value(0) {
        return Err(Error::Precondition("needs a self-dual, nonzero function vanishing at all-zeros".into()));
    }
    let x = f.relation()[0];
    let mut h = TupleHypergraph::with_arcs(k, k, vec![(0..k).collect()])?;
    let block = |s: bool| (0..k).filter(|&i| arg_bit(x, k, i) == s).collect::<Vec<_>>();
    let (u0, u1) = (block(false), block(true));
    for u in [&u0, &u1] {
        for &v in &u[1..] {
            h.splice_in(&eq.graph, &[(eq.pair.0, u[0]), (eq.pair.1, v)])?;
        }
    }
    let sim = TupleSimulation {
        graph: h,
        conditioning: Conditioning::empty(),
        terminals: vec![u0[0], u1[0]],
        target: BooleanFunction::xor().to_table(),
        support: Vec::new(),
    };
    if !sim.verify(f, engine)? {
        return Err(Error::Verification("XOR gadget does not reproduce XOR".into()));
    }
    Ok(sim)
}

/// The collapse of a self-dual non-affine `f` with `f(0) = 1` to a pair function.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Collapse {
    pub case: &'static str,
    /// One constraint over `{f}`; variables 0 and 1 are the terminals.
    pub certificate: ImplementationCertificate,
}

/// Letters `w, x, y, z` by the bit pair `(b_i, c_i)`; returns the case label, the
/// letter each letter is identified with, the two terminal letters and the claimed counts.
fn choose_case(f: &BooleanFunction, class: &[usize]) -> Option<(&'static str, [usize; 4], [usize; 2], [u64; 4])> {
    let present = |l: usize| class.contains(&l);
    let v: Vec<usize> = (0..4).filter(|&l| present(l)).collect();
    let id = [W, X, Y, Z];
    let hard = [1, 2, 2, 1];
    match v.as_slice() {
        [X, Y, Z] => return Some(("1", id, [X, Y], hard)),
        [W, X, Y] => return Some(("2", id, [X, Y], hard)),
        [W, X, Z] => return Some(("3", id, [W, Z], hard)),
        [W, Y, Z] => return Some(("4", id, [W, Z], hard)),
        [W, X, Y, Z] => {}
        _ => return None,
    }
    let k = class.len();
    let h0 = |x: bool, y: bool, z: bool| {
        let idx = (0..k).fold(0usize, |acc, i| {
            let bit = match class[i] {
                W => false,
                X => x,
                Y => y,
                _ => z,
            };
            (acc << 1) | bit as usize
        });
        f.value(idx)
    };
    let (s001, s010, s100, s111) = (h0(false, false, true), h0(false, true, false), h0(true, false, false), h0(true, true, true));
    Some(if s010 && !s111 {
        ("5a", [W, X, Y, X], [X, Y], hard)
    } else if s111 && !s010 {
        ("5b", [W, X, Y, X], [W, X], hard)
    } else if s100 && !s111 {
        ("5c", [W, X, Y, Y], [X, Y], hard)
    } else if s111 && !s100 {
        ("5d", [W, X, Y, Y], [W, Y], hard)
    } else if s010 && s100 {
        ("5e", [W, X, Y, W], [X, Y], hard)
    } else if !s001 {
        ("5f", id, [X, Y], hard)
    } else {
        ("5g", id, [W, Z], [1, 3, 3, 1])
    })
}

pub(crate) fn collapse(f: &BooleanFunction, engine: &Engine) -> Result<Option<Collapse>> {
    if !f.is_self_dual() || f.is_affine() || !f.value(0) {
        return Err(Error::Precondition("needs a self-dual, non-affine function with f(0) = 1".into()));
    }
    let Some((b, c)) = collapse_pairs(f).next() else {
        return Ok(None);
    };
    collapse_at(f, b, c, engine)
}

/// Ordered pairs `b != c` in the relation with `b xor c` outside it, in index order.
fn collapse_pairs(f: &BooleanFunction) -> impl Iterator<Item = (usize, usize)> + '_ {
    let r = f.relation();
    let r2 = r.clone();
    r.into_iter()
        .flat_map(move |b| r2.clone().into_iter().map(move |c| (b, c)))
        .filter(move |&(b, c)| b != c && !f.value(b ^ c))
}

fn collapse_at(f: &BooleanFunction, b: usize, c: usize, engine: &Engine) -> Result<Option<Collapse>> {
    let k = f.arity();
    let class: Vec<usize> = (0..k).map(|i| 2 * arg_bit(b, k, i) as usize + arg_bit(c, k, i) as usize).collect();
    let Some((case, rep, terminals, claimed)) = choose_case(f, &class) else {
        return Ok(None);
    };
    // Terminals first, then the remaining representatives in letter order.
    let mut order: Vec<usize> = terminals.to_vec();
    for l in 0..4 {
        if class.contains(&l) && !order.contains(&rep[l]) {
            order.push(rep[l]);
        }
    }
    let var_of = |l: usize| order.iter().position(|&o| o == rep[l]).expect("letter is represented");
    let mut inst = CspInstance::new(order.len());
    let fid = inst.add_function("f", f.to_table())?;
    inst.add_constraint(fid, class.iter().map(|&l| var_of(l)).collect())?;
    let counts = inst.weight_sums(&[0, 1], engine)?;
    if counts.as_slice() != claimed {
        return Ok(None);
    }
    Ok(Some(Collapse {
        case,
        certificate: ImplementationCertificate {
            instance: inst,
            distinguished: vec![0, 1],
            target: TruthTable::new(2, counts)?,
        },
    }))
}

/// Rewrites a one-constraint certificate over the shifted function `f(. xor t)`
/// as a certificate over `{f, XOR}`, one XOR per set bit of `t`.
fn unshift(f: &BooleanFunction, t: usize, cert: &ImplementationCertificate) -> Result<ImplementationCertificate> {
    let k = f.arity();
    let scope = &cert.instance.constraints()[0].scope;
    let mut inst = CspInstance::new(cert.instance.variables());
    let fid = inst.add_function("f", f.to_table())?;
    let xid = inst.add_function("xor", BooleanFunction::xor().to_table())?;
    let mut lifted = scope.clone();
    for i in (0..k).filter(|&i| arg_bit(t, k, i)) {
        let u = inst.add_variable();
        lifted[i] = u;
        inst.add_constraint(xid, vec![u, scope[i]])?;
    }
    inst.add_constraint(fid, lifted)?;
    Ok(ImplementationCertificate {
        instance: inst,
        distinguished: cert.distinguished.clone(),
        target: cert.target.clone(),
    })
}

/// Hard simulation for a self-dual, non-affine `f` supporting perfect equality.
///
/// With `f(0) = 1` the collapse is realised directly; otherwise `f` is shifted by
/// its first satisfying assignment and the shift is paid for with XOR gadgets.
pub fn sd_hard_witness(f: &BooleanFunction, eq: &EqualityGadget, engine: &Engine) -> Result<ClassificationWitness> {
    if !f.is_self_dual() || f.is_affine() {
        return Err(Error::Precondition("needs a self-dual, non-affine function".into()));
    }
    if !eq.verify(f, engine)? {
        return Err(Error::Precondition("the equality gadget does not verify".into()));
    }
    let shifted = !f.value(0);
    let t = if shifted { f.relation()[0] } else { 0 };
    let base = if shifted { f.shift(t) } else { f.clone() };
    let Some(col) = collapse(&base, engine)? else {
        debug_assert!(false, "no collapse case applies");
        return Ok(ClassificationWitness::Inconclusive {
            trace: vec!["self-dual collapse: no case applies".into()],
        });
    };
    let (cert, gadgets) = if shifted {
        let xor = sd_xor_gadget(f, eq, engine)?;
        (unshift(f, t, &col.certificate)?, vec![TupleSimulation::single_arc(f), xor])
    } else {
        (col.certificate.clone(), vec![TupleSimulation::single_arc(f)])
    };
    let sim = csp_to_gadget(f, eq, &cert, &gadgets, engine)?;
    let v = sim.target.values();
    let out = HardSimulation {
        graph: sim.graph,
        conditioning: Conditioning::empty(),
        pair: (sim.terminals[0], sim.terminals[1]),
        target: reduced_target([v[0], v[1], v[2], v[3]]),
        support: Vec::new(),
    };
    if !out.verify(f, engine)? {
        return Err(Error::Verification(format!("self-dual case {} failed to verify", col.case)));
    }
    Ok(ClassificationWitness::HardSimulation(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::is_hard;
    use crate::gadgets::{perfect_equality_search, SearchBounds};

    fn e() -> Engine {
        Engine::default()
    }

    fn self_dual_nonaffine(k: usize) -> impl Iterator<Item = BooleanFunction> {
        let half = 1usize << (k - 1);
        let last = (1usize << k) - 1;
        (0u64..1 << half).filter_map(move |bits| {
            let mut table = vec![false; 1 << k];
            for i in 0..half {
                let v = bits >> i & 1 == 1;
                table[i] = v;
                table[last ^ i] = v;
            }
            let f = BooleanFunction::new(k, table).unwrap();
            (!f.is_affine()).then_some(f)
        })
    }

    #[test]
    fn xor_from_single_arc() {
        let xor = BooleanFunction::xor();
        let eq = EqualityGadget { graph: TupleHypergraph::with_arcs(3, 2, vec![vec![0, 1], vec![1, 0], vec![1, 2], vec![2, 1]]).unwrap(), pair: (0, 2) };
        let sim = sd_xor_gadget(&xor, &eq, &e()).unwrap();
        assert_eq!(sim.graph.arc_count(), 1);
    }

    #[test]
    fn xor_from_nae() {
        let nae = BooleanFunction::not_all_equal(3);
        let eq = perfect_equality_search(&nae, &SearchBounds::default()).unwrap().unwrap();
        let sim = sd_xor_gadget(&nae, &eq, &e()).unwrap();
        assert!(sim.verify(&nae, &e()).unwrap());
        assert!(sd_xor_gadget(&BooleanFunction::or(), &eq, &e()).is_err());
    }

    #[test]
    fn every_collapse_matches_its_case() {
        // For every self-dual non-affine function of arity 3 and 4 with f(0) = 1 (and the
        // shift of every one with f(0) = 0) and every admissible (b, c), some case
        // applies and its pair function has the claimed counts.
        let mut seen = std::collections::BTreeSet::new();
        for k in 3..=4 {
            for f in self_dual_nonaffine(k) {
                let base = if f.value(0) { f.clone() } else { f.shift(f.relation()[0]) };
                assert!(collapse(&base, &e()).unwrap().is_some());
                for (b, c) in collapse_pairs(&base) {
                    let col = collapse_at(&base, b, c, &e()).unwrap().expect("a case applies");
                    let v = col.certificate.target.values();
                    assert!(is_hard(&crate::boolfn::BinaryWeights::new(v[0], v[1], v[2], v[3])));
                    assert!(col.certificate.verify(&e()).unwrap());
                    seen.insert(col.case);
                }
            }
        }
        let all = ["1", "2", "3", "4", "5a", "5b", "5c", "5d", "5e", "5f", "5g"];
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), all);
    }

    #[test]
    fn nae_end_to_end() {
        let nae = BooleanFunction::not_all_equal(3);
        let eq = perfect_equality_search(&nae, &SearchBounds::default()).unwrap().unwrap();
        let w = sd_hard_witness(&nae, &eq, &e()).unwrap();
        assert!(matches!(w, ClassificationWitness::HardSimulation(_)));
        assert!(w.verify(&nae, &e()).unwrap());
    }

    #[test]
    fn arity_three_with_equality() {
        for f in self_dual_nonaffine(3) {
            if let Some(eq) = perfect_equality_search(&f, &SearchBounds::default()).unwrap() {
                let w = sd_hard_witness(&f, &eq, &e()).unwrap();
                assert!(w.verify(&f, &e()).unwrap(), "{}", f.to_bitstring());
            }
        }
    }

    #[test]
    fn rejects_affine() {
        let xor = BooleanFunction::xor();
        let eq = EqualityGadget { graph: TupleHypergraph::with_arcs(3, 2, vec![vec![0, 1], vec![1, 0], vec![1, 2], vec![2, 1]]).unwrap(), pair: (0, 2) };
        assert!(sd_hard_witness(&xor, &eq, &e()).is_err());
    }
}
