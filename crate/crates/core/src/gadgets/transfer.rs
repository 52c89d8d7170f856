//! Turning implementations and conditioned simulations into gadgets over the host function.

use super::{EqualityGadget, ImplementationCertificate, PinSupply};
use crate::boolfn::{BooleanFunction, TruthTable};
use crate::error::{Error, Result};
use crate::hypergraph::{
    verify_simulation_tuple, Conditioning, Engine, SupportCertificate, SupportFlags, SupportKind, TupleHypergraph,
};
use crate::Rational;
use num_traits::{One, Zero};

/// A gadget whose conditional marginal at `terminals` is `target` normalised.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleSimulation {
    pub graph: TupleHypergraph,
    pub conditioning: Conditioning,
    pub terminals: Vec<usize>,
    pub target: TruthTable<u64>,
    /// Certificates for every primitive the conditioning uses.
    pub support: Vec<SupportCertificate>,
}

impl TupleSimulation {
    /// The host function simulating itself on one hyperarc.
    pub fn single_arc(f: &BooleanFunction) -> Self {
        let k = f.arity();
        TupleSimulation {
            graph: TupleHypergraph::with_arcs(k, k, vec![(0..k).collect()]).expect("identity arc"),
            conditioning: Conditioning::empty(),
            terminals: (0..k).collect(),
            target: f.to_table(),
            support: Vec::new(),
        }
    }

    pub fn is_perfect(&self) -> bool {
        self.conditioning.is_empty()
    }

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
        verify_simulation_tuple(f, &self.graph, &self.conditioning, &self.terminals, &self.target, engine)
    }

    fn checked(self, f: &BooleanFunction, engine: &Engine) -> Result<Self> {
        if self.verify(f, engine)? {
            Ok(self)
        } else {
            Err(Error::Verification("constructed simulation does not reproduce its target".into()))
        }
    }
}

/// Disjoint union of the per-constraint gadgets; returns the graph, the merged
/// conditioning and the occurrence vertices of every variable.
fn union_of_constraints(f: &BooleanFunction, cert: &ImplementationCertificate, gadgets: &[TupleSimulation]) -> Result<(TupleHypergraph, Conditioning, Vec<Vec<usize>>)> {
    let inst = &cert.instance;
    if gadgets.len() < inst.functions().len() {
        return Err(Error::Precondition(format!(
            "{} constraint gadgets supplied for {} functions",
            gadgets.len(),
            inst.functions().len()
        )));
    }
    if cert.target.values().iter().all(|&v| v == 0) {
        return Err(Error::InstanceUnsatisfiable("the implemented target is identically zero".into()));
    }
    let mut h = TupleHypergraph::new(0, f.arity());
    let mut cond = Conditioning::empty();
    let mut occurrences = vec![Vec::new(); inst.variables()];
    for c in inst.constraints() {
        let g = &gadgets[c.function];
        if g.terminals.len() != c.scope.len() || g.target.values() != inst.functions()[c.function].values() {
            return Err(Error::Precondition(format!(
                "gadget for {:?} does not simulate that function",
                inst.function_name(c.function)
            )));
        }
        let (next, offset) = h.disjoint_union(&g.graph)?;
        h = next;
        let shift: Vec<usize> = (0..g.graph.vertex_count()).map(|v| v + offset).collect();
        cond = cond.union(&g.conditioning.remap(&shift));
        for (&var, &term) in c.scope.iter().zip(&g.terminals) {
            occurrences[var].push(term + offset);
        }
    }
    for occ in occurrences.iter_mut().filter(|o| o.is_empty()) {
        occ.push(h.add_vertex());
    }
    Ok((h, cond, occurrences))
}

fn collect_support(gadgets: &[TupleSimulation], extra: Option<SupportCertificate>) -> Vec<SupportCertificate> {
    let mut out: Vec<SupportCertificate> = Vec::new();
    for c in gadgets.iter().flat_map(|g| g.support.iter()).chain(extra.iter()) {
        if !out.iter().any(|o| o.kind == c.kind) {
            out.push(c.clone());
        }
    }
    out
}

/// Perfect simulation of the certificate's target: constraint gadgets side by side,
/// with every variable's occurrences tied together by equality-gadget copies.
pub fn csp_to_gadget(f: &BooleanFunction, eq: &EqualityGadget, cert: &ImplementationCertificate, gadgets: &[TupleSimulation], engine: &Engine) -> Result<TupleSimulation> {
    if let Some(g) = gadgets.iter().find(|g| !g.is_perfect()) {
        return Err(Error::Precondition(format!(
            "constraint gadget on terminals {:?} is conditioned",
            g.terminals
        )));
    }
    let (mut h, _, occurrences) = union_of_constraints(f, cert, gadgets)?;
    for occ in &occurrences {
        for &v in &occ[1..] {
            h.splice_in(&eq.graph, &[(eq.pair.0, occ[0]), (eq.pair.1, v)])?;
        }
    }
    TupleSimulation {
        graph: h,
        conditioning: Conditioning::empty(),
        terminals: cert.distinguished.iter().map(|&x| occurrences[x][0]).collect(),
        target: cert.target.clone(),
        support: Vec::new(),
    }
    .checked(f, engine)
}

/// Conditioned simulation of the certificate's target: occurrence sets become
/// equality blocks, merged with earlier blocks and absorbed into pin sets they meet.
pub fn csp_to_simulation(f: &BooleanFunction, equality: &SupportCertificate, cert: &ImplementationCertificate, gadgets: &[TupleSimulation], engine: &Engine) -> Result<TupleSimulation> {
    if equality.kind != SupportKind::Equality {
        return Err(Error::Precondition("an equality support certificate is required".into()));
    }
    let (h, mut cond, occurrences) = union_of_constraints(f, cert, gadgets)?;
    for occ in &occurrences {
        cond.merge_block(occ)?;
    }
    let support = collect_support(gadgets, cond.requirements().equality.then(|| equality.clone()));
    TupleSimulation {
        graph: h,
        conditioning: cond,
        terminals: cert.distinguished.iter().map(|&x| occurrences[x][0]).collect(),
        target: cert.target.clone(),
        support,
    }
    .checked(f, engine)
}

/// Replaces the conditioning of `sim` by perfect pin and equality gadgets.
pub fn realise_conditioning(f: &BooleanFunction, sim: &TupleSimulation, pins: &PinSupply, eq: Option<&EqualityGadget>, engine: &Engine) -> Result<TupleSimulation> {
    let mut h = sim.graph.clone();
    for (spin, set) in [(false, &sim.conditioning.pin0), (true, &sim.conditioning.pin1)] {
        if set.is_empty() {
            continue;
        }
        let pin = if spin { pins.pin1.as_ref() } else { pins.pin0.as_ref() }
            .ok_or_else(|| Error::Precondition(format!("no perfect pin-{} gadget supplied", spin as u8)))?;
        for &v in set {
            h.splice_in(&pin.graph, &[(pin.vertex, v)])?;
        }
    }
    for block in sim.conditioning.eq.iter().filter(|b| b.len() > 1) {
        let eq = eq.ok_or_else(|| Error::Precondition("no perfect equality gadget supplied".into()))?;
        for &v in &block[1..] {
            h.splice_in(&eq.graph, &[(eq.pair.0, block[0]), (eq.pair.1, v)])?;
        }
    }
    TupleSimulation {
        graph: h,
        conditioning: Conditioning::empty(),
        terminals: sim.terminals.clone(),
        target: sim.target.clone(),
        support: Vec::new(),
    }
    .checked(f, engine)
}

/// Exact report of a pinning carried from a host-level amplifier to `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinningTransfer {
    pub graph: TupleHypergraph,
    pub conditioning: Conditioning,
    pub vertex: usize,
    pub spin: bool,
    /// `mu(sigma_vertex = spin)` of the amplifier under the intended function.
    pub source_marginal: Rational,
    /// Largest pointwise gap between the simulated and the intended normalised function.
    pub simulation_error: Rational,
    /// `mu(sigma_vertex = spin)` of the transferred gadget under `f`.
    pub marginal: Rational,
}

/// Replaces every hyperarc of `amplifier` (over `g`) by a copy of `sim`. The
/// amplifier must pin `vertex` to `spin` with probability at least 9/10 under `g`;
/// the transferred gadget must exceed 1/2 or an error reports the measured slack.
pub fn pinning_transfer(f: &BooleanFunction, sim: &TupleSimulation, g: &BooleanFunction, amplifier: &TupleHypergraph, vertex: usize, spin: bool, engine: &Engine) -> Result<PinningTransfer> {
    if g.is_zero() {
        return Err(Error::Precondition("the intended function is identically zero".into()));
    }
    if sim.terminals.len() != g.arity() || amplifier.arity() != g.arity() {
        return Err(Error::ArityMismatch { expected: g.arity(), found: sim.terminals.len() });
    }
    if !sim.verify(f, engine)? {
        return Err(Error::Precondition("the supplied simulation does not verify".into()));
    }
    let source = engine.marginals(g, amplifier, &[vertex])?.probs()[spin as usize].clone();
    if source < Rational::new(9.into(), 10.into()) {
        return Err(Error::Precondition(format!("amplifier marginal {source} is below 9/10")));
    }
    let simulated_total = Rational::from_integer(sim.target.total().into());
    let intended_total = Rational::from_integer((g.relation_size() as u64).into());
    let simulation_error = sim
        .target
        .values()
        .iter()
        .zip(g.table())
        .map(|(&s, &b)| {
            let d = Rational::from_integer(s.into()) / &simulated_total - Rational::from_integer((b as u64).into()) / &intended_total;
            if d < Rational::zero() { -d } else { d }
        })
        .max()
        .unwrap_or_else(Rational::zero);
    let mut h = TupleHypergraph::new(amplifier.vertex_count(), f.arity());
    let mut cond = Conditioning::empty();
    for arc in amplifier.arcs() {
        let ident: Vec<(usize, usize)> = sim.terminals.iter().copied().zip(arc.iter().copied()).collect();
        let image = h.splice_in(&sim.graph, &ident)?;
        cond = cond.union(&sim.conditioning.remap(&image));
    }
    let marginal = engine.cond_marginals(f, &h, &cond, &[vertex])?.probs()[spin as usize].clone();
    let half = Rational::one() / Rational::from_integer(2.into());
    if marginal <= half {
        return Err(Error::Verification(format!(
            "transferred marginal {marginal} misses 1/2 by {}",
            &half - &marginal
        )));
    }
    Ok(PinningTransfer { graph: h, conditioning: cond, vertex, spin, source_marginal: source, simulation_error, marginal })
}

/// Conditioned simulations of both constant functions derived from a perfect Implies gadget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSimulations {
    /// Tail pinned to 0 forces the head to 0.
    pub delta0: TupleSimulation,
    /// Head pinned to 1 forces the tail to 1.
    pub delta1: TupleSimulation,
}

/// Pin-0 support from the head marginal (2/3), pin-1 support from the tail
/// marginal (2/3), then the two conditionings.
pub fn delta_pins_from_implies(f: &BooleanFunction, implies: &TupleSimulation, engine: &Engine) -> Result<DeltaSimulations> {
    if !implies.is_perfect()
        || implies.target.values() != BooleanFunction::implies().to_table::<u64>().values()
        || !implies.verify(f, engine)?
    {
        return Err(Error::Precondition("a verified perfect Implies simulation is required".into()));
    }
    let (head, tail) = (implies.terminals[0], implies.terminals[1]);
    let pin0 = SupportCertificate { kind: SupportKind::Pin0, graph: implies.graph.clone(), vertices: vec![head] };
    let pin1 = SupportCertificate { kind: SupportKind::Pin1, graph: implies.graph.clone(), vertices: vec![tail] };
    let delta0 = TupleSimulation {
        graph: implies.graph.clone(),
        conditioning: Conditioning::pins(vec![tail], vec![]),
        terminals: vec![head],
        target: BooleanFunction::delta0().to_table(),
        support: vec![pin0],
    }
    .checked(f, engine)?;
    let delta1 = TupleSimulation {
        graph: implies.graph.clone(),
        conditioning: Conditioning::pins(vec![], vec![head]),
        terminals: vec![tail],
        target: BooleanFunction::delta1().to_table(),
        support: vec![pin1],
    }
    .checked(f, engine)?;
    Ok(DeltaSimulations { delta0, delta1 })
}
