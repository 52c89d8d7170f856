//! Bounded searches over canonical gadgets for the symmetrisation of `f`.

use super::catalog::canonical_hypergraphs;
use super::{reduced_target, ClassificationWitness, EqualityGadget, HardSimulation, SearchBounds};
use crate::boolfn::{is_hard, BinaryWeights, BooleanFunction};
use crate::error::Result;
use crate::hypergraph::{Conditioning, SupportCertificate, SupportKind, TupleHypergraph};
use rayon::prelude::*;

/// Support indicator of every assignment of a star-gadget (all weights are 0/1).
fn support(profile: &[bool], g: &TupleHypergraph) -> Vec<bool> {
    let masks: Vec<u32> = g.arcs().iter().map(|a| a.iter().fold(0u32, |m, &v| m | 1 << v)).collect();
    (0u32..1 << g.vertex_count())
        .map(|code| masks.iter().all(|&m| profile[(code & m).count_ones() as usize]))
        .collect()
}

fn pair_counts(dist: &[bool], u: usize, v: usize) -> [u64; 4] {
    let mut c = [0u64; 4];
    for (code, _) in dist.iter().enumerate().filter(|(_, &w)| w) {
        c[(code >> u & 1) << 1 | (code >> v & 1)] += 1;
    }
    c
}

/// Per-vertex label in a conditioning candidate.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Label {
    Free,
    Pin0,
    Pin1,
    Block,
}

/// Candidates with fewer constrained vertices come first.
fn label_vectors(n: usize) -> Vec<Vec<Label>> {
    const ALL: [Label; 4] = [Label::Free, Label::Pin0, Label::Pin1, Label::Block];
    let mut out: Vec<Vec<Label>> = (0..4usize.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let l = ALL[code % 4];
                    code /= 4;
                    l
                })
                .collect()
        })
        .filter(|ls: &Vec<Label>| {
            let block = ls.iter().filter(|&&l| l == Label::Block).count();
            block != 1 && ls.iter().any(|&l| l != Label::Free)
        })
        .collect();
    out.sort_by_key(|ls| ls.iter().filter(|&&l| l != Label::Free).count());
    out
}

struct Certificates {
    pin0: Option<SupportCertificate>,
    pin1: Option<SupportCertificate>,
    equality: Option<SupportCertificate>,
}

impl Certificates {
    fn allows(&self, l: Label) -> bool {
        match l {
            Label::Free => true,
            Label::Pin0 => self.pin0.is_some(),
            Label::Pin1 => self.pin1.is_some(),
            Label::Block => self.equality.is_some(),
        }
    }
}

struct Search<'a> {
    f: &'a BooleanFunction,
    profile: Vec<bool>,
    symmetric: bool,
    bounds: SearchBounds,
}

impl Search<'_> {
    fn new(f: &BooleanFunction, bounds: SearchBounds) -> Result<Search<'_>> {
        let star = f.symmetrise()?;
        let profile = star.weight_profile().expect("symmetrisation is symmetric");
        Ok(Search {
            f,
            profile,
            symmetric: star == *f,
            bounds,
        })
    }

    /// The `f`-gadget with the same weights as the star-gadget `g`.
    fn realise(&self, g: &TupleHypergraph) -> TupleHypergraph {
        if self.symmetric {
            g.clone()
        } else {
            g.expand_orderings()
        }
    }

    fn levels(&self, max_vertices: usize) -> Vec<(usize, usize)> {
        let k = self.f.arity();
        let mut out = Vec::new();
        for n in k..=max_vertices {
            for m in 1..=self.bounds.max_arcs {
                out.push((n, m));
            }
        }
        out
    }

    fn certificates(&self) -> Certificates {
        let mut c = Certificates {
            pin0: None,
            pin1: None,
            equality: None,
        };
        for (n, m) in self.levels(self.bounds.conditioned_max_vertices.min(self.bounds.max_vertices)) {
            for g in canonical_hypergraphs(self.f.arity(), n, m).iter() {
                let dist = support(&self.profile, g);
                if !dist.iter().any(|&w| w) {
                    continue;
                }
                for u in 0..n {
                    let ones = dist.iter().enumerate().filter(|(code, &w)| w && code >> u & 1 == 1).count();
                    let zeros = dist.iter().filter(|&&w| w).count() - ones;
                    let cert = |kind| SupportCertificate {
                        kind,
                        graph: self.realise(g),
                        vertices: vec![u],
                    };
                    if zeros > ones && c.pin0.is_none() {
                        c.pin0 = Some(cert(SupportKind::Pin0));
                    }
                    if ones > zeros && c.pin1.is_none() {
                        c.pin1 = Some(cert(SupportKind::Pin1));
                    }
                    for v in u + 1..n {
                        let p = pair_counts(&dist, u, v);
                        if c.equality.is_none() && p[0] == p[3] && p[0] + p[3] > p[1] + p[2] {
                            c.equality = Some(SupportCertificate {
                                kind: SupportKind::Equality,
                                graph: self.realise(g),
                                vertices: vec![u, v],
                            });
                        }
                    }
                }
                if c.pin0.is_some() && c.pin1.is_some() && c.equality.is_some() {
                    return c;
                }
            }
        }
        c
    }

    fn unconditioned(&self, g: &TupleHypergraph, want_hard: bool) -> Option<ClassificationWitness> {
        let dist = support(&self.profile, g);
        if !dist.iter().any(|&w| w) {
            return None;
        }
        let n = g.vertex_count();
        let pairs = || (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        for (u, v) in pairs() {
            let c = pair_counts(&dist, u, v);
            if c[1] == 0 && c[2] == 0 && c[0] == c[3] {
                return Some(ClassificationWitness::PerfectEquality(EqualityGadget {
                    graph: self.realise(g),
                    pair: (u, v),
                }));
            }
        }
        if !want_hard {
            return None;
        }
        pairs().find_map(|(u, v)| {
            let c = pair_counts(&dist, u, v);
            is_hard(&BinaryWeights::from_array(c)).then(|| {
                ClassificationWitness::HardSimulation(HardSimulation {
                    graph: self.realise(g),
                    conditioning: Conditioning::empty(),
                    pair: (u, v),
                    target: reduced_target(c),
                    support: Vec::new(),
                })
            })
        })
    }

    fn conditioned(&self, g: &TupleHypergraph, certs: &Certificates, labels: &[Vec<Label>]) -> Option<ClassificationWitness> {
        let dist = support(&self.profile, g);
        if !dist.iter().any(|&w| w) {
            return None;
        }
        let n = g.vertex_count();
        for u in 0..n {
            for v in u + 1..n {
                for ls in labels {
                    let terminal_ok = |l: Label| l == Label::Free || l == Label::Block;
                    if !terminal_ok(ls[u]) || !terminal_ok(ls[v]) || (ls[u] == Label::Block && ls[v] == Label::Block) {
                        continue;
                    }
                    if !ls.iter().all(|&l| certs.allows(l)) {
                        continue;
                    }
                    let mut c = [0u64; 4];
                    for (code, _) in dist.iter().enumerate().filter(|(_, &w)| w) {
                        let bit = |x: usize| code >> x & 1 == 1;
                        let mut block_spin = None;
                        let ok = ls.iter().enumerate().all(|(x, &l)| match l {
                            Label::Free => true,
                            Label::Pin0 => !bit(x),
                            Label::Pin1 => bit(x),
                            Label::Block => *block_spin.get_or_insert(bit(x)) == bit(x),
                        });
                        if ok {
                            c[(code >> u & 1) << 1 | (code >> v & 1)] += 1;
                        }
                    }
                    if !is_hard(&BinaryWeights::from_array(c)) {
                        continue;
                    }
                    let pick = |l: Label| (0..n).filter(|&x| ls[x] == l).collect::<Vec<_>>();
                    let block = pick(Label::Block);
                    let conditioning = Conditioning {
                        pin0: pick(Label::Pin0),
                        pin1: pick(Label::Pin1),
                        eq: if block.is_empty() { vec![] } else { vec![block] },
                    };
                    let need = conditioning.requirements();
                    let support = [
                        (need.pin0, &certs.pin0),
                        (need.pin1, &certs.pin1),
                        (need.equality, &certs.equality),
                    ]
                    .into_iter()
                    .filter(|(needed, _)| *needed)
                    .filter_map(|(_, c)| c.clone())
                    .collect();
                    return Some(ClassificationWitness::HardSimulation(HardSimulation {
                        graph: self.realise(g),
                        conditioning,
                        pair: (u, v),
                        target: reduced_target(c),
                        support,
                    }));
                }
            }
        }
        None
    }
}

/// Searches canonical gadgets for `f*` (expanded to `f`-gadgets) for a perfect
/// equality pair or a hard pair marginal, then for hard conditioned marginals.
pub fn symmetric_fallback_search(f: &BooleanFunction, bounds: &SearchBounds) -> Result<ClassificationWitness> {
    let search = Search::new(f, *bounds)?;
    let k = f.arity();
    let cond_max = bounds.conditioned_max_vertices.min(bounds.max_vertices);
    let mut certs: Option<Certificates> = None;
    for (n, m) in search.levels(bounds.max_vertices) {
        let cat = canonical_hypergraphs(k, n, m);
        if let Some(w) = cat.par_iter().find_map_first(|g| search.unconditioned(g, true)) {
            return Ok(w);
        }
        if n <= cond_max {
            let certs = certs.get_or_insert_with(|| search.certificates());
            if certs.pin0.is_none() && certs.pin1.is_none() && certs.equality.is_none() {
                continue;
            }
            let labels = label_vectors(n);
            if let Some(w) = cat.par_iter().find_map_first(|g| search.conditioned(g, certs, &labels)) {
                return Ok(w);
            }
        }
    }
    Ok(ClassificationWitness::Inconclusive {
        trace: vec![format!(
            "fallback search exhausted: arity {k}, <= {} vertices, <= {} hyperarcs, conditioned up to {} vertices",
            bounds.max_vertices, bounds.max_arcs, cond_max
        )],
    })
}

/// First canonical gadget (expanded to `f`) with a perfect equality pair.
pub fn perfect_equality_search(f: &BooleanFunction, bounds: &SearchBounds) -> Result<Option<EqualityGadget>> {
    let search = Search::new(f, *bounds)?;
    for (n, m) in search.levels(bounds.max_vertices) {
        let cat = canonical_hypergraphs(f.arity(), n, m);
        if let Some(ClassificationWitness::PerfectEquality(e)) = cat.par_iter().find_map_first(|g| search.unconditioned(g, false)) {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Engine;

    #[test]
    fn or_is_found_on_one_arc() {
        let w = symmetric_fallback_search(&BooleanFunction::or(), &SearchBounds::default()).unwrap();
        let ClassificationWitness::HardSimulation(s) = &w else { panic!("{w:?}") };
        assert_eq!(s.graph.arc_count(), 1);
        assert_eq!(s.target, reduced_target([0, 1, 1, 1]));
        assert!(w.verify(&BooleanFunction::or(), &Engine::default()).unwrap());
    }

    #[test]
    fn nae3_perfect_equality() {
        let f = BooleanFunction::not_all_equal(3);
        let e = perfect_equality_search(&f, &SearchBounds::default()).unwrap().unwrap();
        assert!(e.verify(&f, &Engine::default()).unwrap());
        assert_eq!(e.graph.vertex_count(), 5);
    }

    #[test]
    fn symmetric_arity3_with_both_constants() {
        // 000 and 111 accepted, weight-1 accepted, weight-2 rejected: not in EASY.
        let f = BooleanFunction::symmetric(&[true, true, false, true]);
        assert!(f.easy_member().is_none());
        let w = symmetric_fallback_search(&f, &SearchBounds::default()).unwrap();
        assert!(!w.is_inconclusive());
        assert!(w.verify(&f, &Engine::default()).unwrap());
    }

    #[test]
    fn eq_block_profile_arity4() {
        let f = BooleanFunction::symmetric(&[true, true, false, true, true]);
        let w = symmetric_fallback_search(&f, &SearchBounds::default()).unwrap();
        assert!(!w.is_inconclusive(), "{w:?}");
        assert!(w.verify(&f, &Engine::default()).unwrap());
    }

    #[test]
    fn tiny_bounds_are_inconclusive() {
        let f = BooleanFunction::symmetric(&[true, true, false, true, true]);
        let bounds = SearchBounds {
            max_vertices: 4,
            max_arcs: 1,
            conditioned_max_vertices: 0,
            ..SearchBounds::default()
        };
        assert!(symmetric_fallback_search(&f, &bounds).unwrap().is_inconclusive());
    }
}
