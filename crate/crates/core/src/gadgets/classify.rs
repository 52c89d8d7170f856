//! The constructive classification recursion: every non-affine function gets a
//! perfect-equality gadget or a hard simulation, built step by step.

use super::fallback::symmetric_fallback_search;
use super::lift::{lift_witness, PinSupply};
use super::star::{equality_gadget_star, pin_gadget_star, zero_star_witness, ZeroStar};
use super::{single_arc_simulation, ClassificationWitness, EqualityGadget, SearchBounds};
use crate::boolfn::sets::{canonical_cmp, canonical_min, full, lex_cmp, min_element, positions, PositionSet};
use crate::boolfn::{is_hard, BinaryWeights, BooleanFunction, EasyTag};
use crate::error::{Error, Result};
use crate::hypergraph::{Engine, TupleHypergraph};
use std::collections::HashMap;

/// Induced pair weights of a single hyperarc: `g(s, t) = #{x in R_f : x_i = s, x_j = t}`.
///
/// Positions are zero-based.
pub fn single_hyperarc_pair_witness(f: &BooleanFunction, i: usize, j: usize) -> BinaryWeights<u64> {
    BinaryWeights::from_array(f.pair_counts(i, j))
}

/// Classifies `f` with default bounds and engine.
pub fn classify_function(f: &BooleanFunction) -> Result<ClassificationWitness> {
    Synthesizer::new(SearchBounds::default()).classify(f)
}

enum AlloneOutcome {
    SemiTrivial,
    /// `f` with this position pinned to 1 is not affine.
    PinOne(usize),
    Witness(ClassificationWitness),
}

enum ZeroOutcome {
    SemiTrivial,
    /// `f` pinned this way is not affine.
    Pin { zeros: Vec<usize>, ones: Vec<usize> },
    Witness(ClassificationWitness),
}

/// Runs the recursion with memoisation of subfunction results and a step trace.
pub struct Synthesizer {
    bounds: SearchBounds,
    engine: Engine,
    memo: HashMap<BooleanFunction, ClassificationWitness>,
    trace: Vec<String>,
}

impl Synthesizer {
    pub fn new(bounds: SearchBounds) -> Self {
        Self::with_engine(bounds, Engine::default())
    }

    pub fn with_engine(bounds: SearchBounds, engine: Engine) -> Self {
        Synthesizer {
            bounds,
            engine,
            memo: HashMap::new(),
            trace: Vec::new(),
        }
    }

    pub fn bounds(&self) -> &SearchBounds {
        &self.bounds
    }

    /// Steps taken so far, outermost first.
    pub fn trace(&self) -> &[String] {
        &self.trace
    }

    fn note(&mut self, step: impl Into<String>) {
        self.trace.push(step.into());
    }

    fn inconclusive(&self) -> ClassificationWitness {
        ClassificationWitness::Inconclusive {
            trace: self.trace.clone(),
        }
    }

    /// A branch the case analysis rules out; reaching it is a bug.
    fn contradiction(&mut self, what: &str) -> ClassificationWitness {
        self.note(format!("unexpected case: {what}"));
        debug_assert!(false, "unexpected case: {what}");
        self.inconclusive()
    }

    /// Affine, or a verified equality/hard witness, or Inconclusive when caps bite.
    pub fn classify(&mut self, f: &BooleanFunction) -> Result<ClassificationWitness> {
        if f.is_affine() {
            return Ok(ClassificationWitness::Affine);
        }
        if let Some(w) = self.memo.get(f) {
            return Ok(w.clone());
        }
        self.note(format!("classify {} (arity {})", f.to_bitstring(), f.arity()));
        let w = match self.dispatch(f) {
            Ok(w) => w,
            Err(Error::ResourceCap(msg)) => {
                self.note(format!("resource cap: {msg}"));
                self.inconclusive()
            }
            Err(e) => return Err(e),
        };
        let w = self.checked(f, w)?;
        self.memo.insert(f.clone(), w.clone());
        Ok(w)
    }

    fn checked(&mut self, f: &BooleanFunction, w: ClassificationWitness) -> Result<ClassificationWitness> {
        if w.is_inconclusive() {
            return Ok(w);
        }
        match w.verify(f, &self.engine) {
            Ok(true) => Ok(w),
            Ok(false) => Ok(self.contradiction(&format!("witness for {} failed verification", f.to_bitstring()))),
            Err(Error::ResourceCap(msg)) => {
                self.note(format!("verification exceeded caps: {msg}"));
                Ok(self.inconclusive())
            }
            Err(e) => Err(e),
        }
    }

    fn dispatch(&mut self, f: &BooleanFunction) -> Result<ClassificationWitness> {
        let k = f.arity();
        if k < 2 {
            return Ok(self.contradiction("non-affine unary function"));
        }
        if k == 2 {
            if !f.value(0b00) || !f.value(0b11) {
                self.note("arity 2 with a constant missing: single hyperarc");
                return Ok(ClassificationWitness::HardSimulation(single_arc_simulation(f, 0, 1)));
            }
            self.note("arity 2, f* = EQ: star equality");
            return Ok(ClassificationWitness::PerfectEquality(equality_gadget_star(f)?));
        }
        let star = f.symmetrise()?;
        match star.easy_member() {
            None => {
                self.note("f* outside EASY: bounded search");
                let w = symmetric_fallback_search(f, &self.bounds)?;
                if let ClassificationWitness::Inconclusive { trace } = &w {
                    self.trace.extend(trace.iter().cloned());
                    return Ok(self.inconclusive());
                }
                Ok(w)
            }
            Some(EasyTag::Equality | EasyTag::Even | EasyTag::Odd) => {
                self.note(format!("f* = {}: star equality", star.easy_member().unwrap().name()));
                Ok(ClassificationWitness::PerfectEquality(equality_gadget_star(f)?))
            }
            Some(EasyTag::AllOne) => {
                self.note("f* = allone");
                self.allone_case(f)
            }
            Some(EasyTag::AllZero) => {
                self.note("f* = allzero: complement and use the allone case");
                Ok(self.allone_case(&f.complement())?.complement())
            }
            Some(EasyTag::Zero) => {
                self.note("f* = zero");
                self.zero_case(f)
            }
            Some(EasyTag::One) => Ok(self.contradiction("f* = one for a non-affine f")),
        }
    }

    /// Classifies the pinned subfunction and lifts its witness back to `f`.
    fn classify_pinned(&mut self, f: &BooleanFunction, zeros: &[usize], ones: &[usize], pins: &PinSupply) -> Result<ClassificationWitness> {
        self.note(format!("recurse with {zeros:?} -> 0, {ones:?} -> 1"));
        let sub = f.pin(zeros, ones)?;
        let w = self.classify(&sub)?;
        if w == ClassificationWitness::Affine {
            return Ok(self.contradiction("pinned subfunction is affine"));
        }
        lift_witness(w, f.arity(), zeros, ones, pins)
    }

    fn allone_case(&mut self, f: &BooleanFunction) -> Result<ClassificationWitness> {
        let pins = PinSupply::new(None, Some(pin_gadget_star(f, true)?));
        match self.allone_step(f)? {
            AlloneOutcome::SemiTrivial => Ok(self.contradiction("semi-trivial yet non-affine")),
            AlloneOutcome::PinOne(t) => self.classify_pinned(f, &[], &[t], &pins),
            AlloneOutcome::Witness(w) => Ok(w),
        }
    }

    /// Either every superset of `s` is accepted (`None`), or a witness for `f`.
    fn upclose(&mut self, f: &BooleanFunction, s: PositionSet, pins: &PinSupply) -> Result<Option<ClassificationWitness>> {
        let k = f.arity();
        let ones = positions(s);
        if k - ones.len() < 2 {
            return Ok(None);
        }
        let h = f.pin(&[], &ones)?;
        let h_star = h.symmetrise()?;
        let w = match h_star.easy_member() {
            Some(EasyTag::One) => return Ok(None),
            None => {
                self.note(format!("upward closure above {ones:?}: bounded search on the pinned function"));
                symmetric_fallback_search(&h, &self.bounds)?
            }
            Some(EasyTag::Even | EasyTag::Equality) => {
                self.note(format!("upward closure above {ones:?}: star equality on the pinned function"));
                ClassificationWitness::PerfectEquality(equality_gadget_star(&h)?)
            }
            Some(_) => return Ok(Some(self.contradiction("pinned function star has a rejected constant"))),
        };
        Ok(Some(lift_witness(w, k, &[], &ones, pins)?))
    }

    fn allone_step(&mut self, f: &BooleanFunction) -> Result<AlloneOutcome> {
        let k = f.arity();
        if k == 2 {
            return Ok(AlloneOutcome::SemiTrivial);
        }
        let mut omega = f.omega();
        omega.sort_by(|&a, &b| canonical_cmp(a, b));
        if omega.iter().all(|s| s.count_ones() as usize + 1 >= k) {
            let big: Vec<PositionSet> = omega.iter().copied().filter(|s| s.count_ones() as usize + 1 == k).collect();
            if big.len() < 2 {
                return Ok(AlloneOutcome::SemiTrivial);
            }
            let t = min_element(big[0] & big[1]).expect("two (k-1)-sets meet when k >= 3");
            self.note(format!("allone case 1: pin position {t} to 1"));
            return Ok(AlloneOutcome::PinOne(t));
        }
        let pins = PinSupply::new(None, Some(pin_gadget_star(f, true)?));
        let s = canonical_min(omega.iter().copied()).expect("nonempty relation");
        if let Some(w) = self.upclose(f, s, &pins)? {
            return Ok(AlloneOutcome::Witness(w));
        }
        let Some(t) = canonical_min(omega.iter().copied().filter(|w| s & !w != 0)) else {
            return Ok(AlloneOutcome::SemiTrivial);
        };
        if let Some(w) = self.upclose(f, t, &pins)? {
            return Ok(AlloneOutcome::Witness(w));
        }
        if t.count_ones() == 1 {
            let (i, j) = (min_element(s).unwrap(), min_element(t).unwrap());
            self.note(format!("allone case 2a: single hyperarc on positions {i}, {j}"));
            let sim = single_arc_simulation(f, i, j);
            if !is_hard(&sim.target) {
                return Ok(AlloneOutcome::Witness(self.contradiction("allone case 2a pair is not hard")));
            }
            return Ok(AlloneOutcome::Witness(ClassificationWitness::HardSimulation(sim)));
        }
        let r = if s & t != 0 { min_element(s & t) } else { min_element(t & !s) }.unwrap();
        self.note(format!("allone case 2b/2c: pin position {r} to 1"));
        Ok(AlloneOutcome::PinOne(r))
    }

    fn zero_case(&mut self, f: &BooleanFunction) -> Result<ClassificationWitness> {
        match zero_star_witness(f)? {
            ZeroStar::Equality(e) => {
                self.note("zero star: glued copies give equality");
                Ok(ClassificationWitness::PerfectEquality(e))
            }
            ZeroStar::Pins { pin0, pin1 } => {
                self.note("zero star: perfect pins to 0 and 1");
                let pins = PinSupply::new(Some(pin0), Some(pin1));
                match self.zero_step(f, &pins)? {
                    ZeroOutcome::Witness(w) => Ok(w),
                    ZeroOutcome::Pin { zeros, ones } => self.classify_pinned(f, &zeros, &ones, &pins),
                    ZeroOutcome::SemiTrivial => Ok(self.contradiction("zero step found no witness")),
                }
            }
        }
    }

    /// Inspects `f` with every position outside `s` pinned to 0.
    fn zero_reduction(&mut self, f: &BooleanFunction, s: PositionSet, pins: &PinSupply) -> Result<ZeroOutcome> {
        let k = f.arity();
        let q = s.count_ones() as usize;
        if q <= 1 {
            return Ok(ZeroOutcome::SemiTrivial);
        }
        let zeros = positions(full(k) & !s);
        let kept = positions(s);
        let h = f.pin(&zeros, &[])?;
        if h.is_semi_trivial() {
            return Ok(ZeroOutcome::SemiTrivial);
        }
        let lift = |w| lift_witness(w, k, &zeros, &[], pins);
        match h.symmetrise()?.easy_member() {
            None if q == 2 => {
                self.note(format!("zero reduction on {kept:?}: pinned function is OR"));
                let sim = single_arc_simulation(&h, 0, 1);
                Ok(ZeroOutcome::Witness(lift(ClassificationWitness::HardSimulation(sim))?))
            }
            None => {
                self.note(format!("zero reduction on {kept:?}: bounded search"));
                let w = symmetric_fallback_search(&h, &self.bounds)?;
                Ok(ZeroOutcome::Witness(lift(w)?))
            }
            Some(EasyTag::Odd) => {
                self.note(format!("zero reduction on {kept:?}: parity equality"));
                let e = equality_gadget_star(&h)?;
                Ok(ZeroOutcome::Witness(lift(ClassificationWitness::PerfectEquality(e))?))
            }
            Some(EasyTag::AllOne) => {
                self.note(format!("zero reduction on {kept:?}: allone step on the pinned function"));
                Ok(match self.allone_step(&h)? {
                    AlloneOutcome::SemiTrivial => ZeroOutcome::SemiTrivial,
                    AlloneOutcome::PinOne(t) => ZeroOutcome::Pin {
                        zeros,
                        ones: vec![kept[t]],
                    },
                    AlloneOutcome::Witness(w) => ZeroOutcome::Witness(lift(w)?),
                })
            }
            Some(_) => Ok(ZeroOutcome::Witness(self.contradiction("zero reduction star outside {odd, allone}"))),
        }
    }

    fn zero_step(&mut self, f: &BooleanFunction, pins: &PinSupply) -> Result<ZeroOutcome> {
        let k = f.arity();
        let mut omega = f.omega();
        omega.sort_by(|&a, &b| canonical_cmp(a, b));
        for &w in &omega {
            match self.zero_reduction(f, w, pins)? {
                ZeroOutcome::SemiTrivial => {}
                other => return Ok(other),
            }
        }
        let max = omega.iter().map(|s| s.count_ones()).max().expect("f is not zero");
        let s = omega
            .iter()
            .copied()
            .filter(|x| x.count_ones() == max)
            .min_by(|&a, &b| lex_cmp(a, b))
            .unwrap();
        let below: Vec<PositionSet> = omega.iter().copied().filter(|u| u & !s == 0).collect();
        let t = below.iter().fold(s, |acc, u| acc & u);
        if t == 0 || below.len() != 1 << (s.count_ones() - t.count_ones()) {
            return Ok(ZeroOutcome::Witness(self.contradiction("pinned function is not an interval")));
        }
        if omega.iter().all(|x| t & !x == 0) {
            let i = min_element(t).unwrap();
            self.note(format!("zero step case 1: pin position {i} to 1"));
            return Ok(ZeroOutcome::Pin { zeros: vec![], ones: vec![i] });
        }
        let psi: Vec<PositionSet> = omega.iter().copied().filter(|x| t & !x != 0 && x & !s != 0).collect();
        let Some(a) = psi.iter().map(|x| (t & !x).count_ones()).min() else {
            return Ok(ZeroOutcome::Witness(self.contradiction("zero step case 2 without a candidate")));
        };
        let b = psi
            .iter()
            .filter(|x| (t & !*x).count_ones() == a)
            .map(|x| (x & !s).count_ones())
            .min()
            .unwrap();
        let r = canonical_min(psi.iter().copied().filter(|x| (t & !x).count_ones() == a && (x & !s).count_ones() == b)).unwrap();
        let all = full(k);
        let set_a = s & t & !r;
        let set_b = s & t & r;
        let set_c = s & !t & !r;
        let set_d = s & !t & r;
        let set_e = all & !s & !t & !r;
        let set_f = !s & !t & r & all;
        let free = set_a | set_f;
        let omega_g: Vec<PositionSet> = omega
            .iter()
            .filter(|x| *x & (set_c | set_e) == 0 && *x & (set_b | set_d) == set_b | set_d)
            .map(|x| x & free)
            .collect();
        let two_a = omega_g.len() == 2 && omega_g.contains(&set_a) && omega_g.contains(&set_f);
        if two_a {
            self.note("zero step case 2a: two hyperarcs sharing all but one position");
            return Ok(ZeroOutcome::Witness(ClassificationWitness::PerfectEquality(self.case_2a(
                k,
                set_a,
                set_b | set_d,
                set_c | set_e,
                pins,
            )?)));
        }
        let t0 = min_element(set_a).unwrap();
        self.note(format!("zero step case 2b: pin position {t0} to 1"));
        Ok(ZeroOutcome::Pin { zeros: vec![], ones: vec![t0] })
    }

    fn case_2a(&self, k: usize, a: PositionSet, ones: PositionSet, zeros: PositionSet, pins: &PinSupply) -> Result<EqualityGadget> {
        let p = min_element(a).unwrap();
        let mut g = TupleHypergraph::new(k + 1, k);
        let mut first: Vec<usize> = (0..k).collect();
        first[p] = k;
        g.add_arc(first)?;
        g.add_arc((0..k).collect())?;
        for (set, pin) in [(zeros, &pins.pin0), (ones, &pins.pin1)] {
            let pin = pin.as_ref().ok_or_else(|| Error::Precondition("zero step needs both pins".into()))?;
            for i in positions(set) {
                g.splice_in(&pin.graph, &[(pin.vertex, i)])?;
            }
        }
        Ok(EqualityGadget { graph: g, pair: (k, p) })
    }
}
