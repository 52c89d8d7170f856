//! k-tuple hypergraphs, conditionings and the exact enumeration engine.

mod conditioning;
mod engine;
mod marginal;
mod support;
mod verify;

pub use conditioning::Conditioning;
pub use engine::{
    cond_marginals, marginals, partition_function, weight_of, weight_sums, Domain, Engine, Factor,
    DEFAULT_MAX_VERTICES,
};
pub use marginal::MarginalTable;
pub use support::{SupportCertificate, SupportFlags, SupportKind};
pub use verify::{
    pair_is_perfect_equality, verify_realisation, verify_simulation, verify_simulation_tuple,
    RealisationKind, RealisationReport,
};

use crate::error::{Error, Result};
use crate::perm::permutations;
use serde::{Deserialize, Serialize};

/// Vertices `0..n` and ordered hyperarcs of `k` distinct vertices each.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TupleHypergraph {
    #[serde(rename = "n")]
    vertices: usize,
    #[serde(rename = "k")]
    arity: usize,
    arcs: Vec<Vec<usize>>,
}

impl TupleHypergraph {
    pub fn new(vertices: usize, arity: usize) -> Self {
        TupleHypergraph {
            vertices,
            arity,
            arcs: Vec::new(),
        }
    }

    pub fn with_arcs(vertices: usize, arity: usize, arcs: Vec<Vec<usize>>) -> Result<Self> {
        let mut h = TupleHypergraph::new(vertices, arity);
        for arc in arcs {
            h.add_arc(arc)?;
        }
        Ok(h)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn arcs(&self) -> &[Vec<usize>] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.vertices += 1;
        self.vertices - 1
    }

    pub fn add_vertices(&mut self, count: usize) -> std::ops::Range<usize> {
        let start = self.vertices;
        self.vertices += count;
        start..self.vertices
    }

    pub fn add_arc(&mut self, arc: Vec<usize>) -> Result<()> {
        if arc.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: arc.len(),
            });
        }
        if let Some(&v) = arc.iter().find(|&&v| v >= self.vertices) {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.vertices,
            });
        }
        if (1..arc.len()).any(|i| arc[..i].contains(&arc[i])) {
            return Err(Error::RepeatedVertex(self.arcs.len()));
        }
        self.arcs.push(arc);
        Ok(())
    }

    /// Number of hyperarc slots occupied by `v`.
    pub fn vertex_degree(&self, v: usize) -> usize {
        self.arcs.iter().flatten().filter(|&&u| u == v).count()
    }

    /// Maximum vertex degree.
    pub fn degree(&self) -> usize {
        let mut d = vec![0usize; self.vertices];
        for &v in self.arcs.iter().flatten() {
            d[v] += 1;
        }
        d.into_iter().max().unwrap_or(0)
    }

    /// Adds a copy of `gadget`; gadget vertex `g` listed in `identify` as `(g, host)`
    /// becomes `host`, every other gadget vertex becomes a fresh vertex.
    ///
    /// Returns the image of every gadget vertex.
    pub fn splice_in(&mut self, gadget: &TupleHypergraph, identify: &[(usize, usize)]) -> Result<Vec<usize>> {
        if gadget.arity != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: gadget.arity,
            });
        }
        let mut image: Vec<Option<usize>> = vec![None; gadget.vertices];
        for &(g, host) in identify {
            if g >= gadget.vertices {
                return Err(Error::VertexOutOfRange {
                    vertex: g,
                    n: gadget.vertices,
                });
            }
            if host >= self.vertices {
                return Err(Error::VertexOutOfRange {
                    vertex: host,
                    n: self.vertices,
                });
            }
            if image.contains(&Some(host)) {
                return Err(Error::Domain(format!(
                    "identification maps two gadget vertices onto host vertex {host}"
                )));
            }
            image[g] = Some(host);
        }
        let image: Vec<usize> = image
            .into_iter()
            .map(|x| x.unwrap_or_else(|| self.add_vertex()))
            .collect();
        for arc in &gadget.arcs {
            self.add_arc(arc.iter().map(|&v| image[v]).collect())?;
        }
        Ok(image)
    }

    /// Functional form of [`splice_in`](Self::splice_in).
    pub fn splice(&self, gadget: &TupleHypergraph, identify: &[(usize, usize)]) -> Result<(TupleHypergraph, Vec<usize>)> {
        let mut h = self.clone();
        let image = h.splice_in(gadget, identify)?;
        Ok((h, image))
    }

    /// Disjoint union; returns the offset added to `other`'s vertex ids.
    pub fn disjoint_union(&self, other: &TupleHypergraph) -> Result<(TupleHypergraph, usize)> {
        let offset = self.vertices;
        let (h, _) = self.splice(other, &[])?;
        Ok((h, offset))
    }

    /// Every hyperarc replaced by all `k!` orderings of its vertices.
    pub fn expand_orderings(&self) -> TupleHypergraph {
        let perms = permutations(self.arity);
        let arcs = self
            .arcs
            .iter()
            .flat_map(|arc| perms.iter().map(move |p| p.iter().map(|&i| arc[i]).collect()))
            .collect();
        TupleHypergraph {
            vertices: self.vertices,
            arity: self.arity,
            arcs,
        }
    }

    /// Text form: `hypergraph n=<n> k=<k>` followed by `arc v_1 .. v_k` lines.
    pub fn to_text(&self) -> String {
        let mut s = format!("hypergraph n={} k={}\n", self.vertices, self.arity);
        for arc in &self.arcs {
            s.push_str("arc");
            for v in arc {
                s.push_str(&format!(" {v}"));
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<TupleHypergraph> {
        let mut graph: Option<TupleHypergraph> = None;
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = crate::format::strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            match (words.next(), graph.as_mut()) {
                (Some("hypergraph"), None) => {
                    let kv = crate::format::key_values(words, line_no)?;
                    let n = crate::format::required_usize(&kv, "n", line_no)?;
                    let k = crate::format::required_usize(&kv, "k", line_no)?;
                    graph = Some(TupleHypergraph::new(n, k));
                }
                (Some("arc"), Some(h)) => {
                    let arc = words
                        .map(|w| w.parse::<usize>().map_err(|_| Error::parse(line_no, format!("bad vertex id {w:?}"))))
                        .collect::<Result<Vec<_>>>()?;
                    h.add_arc(arc).map_err(|e| Error::parse(line_no, e.to_string()))?;
                }
                (Some("hypergraph"), Some(_)) => return Err(Error::parse(line_no, "duplicate header")),
                (Some(_), None) => return Err(Error::parse(line_no, "expected `hypergraph n=.. k=..` header")),
                (Some(other), Some(_)) => return Err(Error::parse(line_no, format!("unknown directive {other:?}"))),
                (None, _) => {}
            }
        }
        graph.ok_or_else(|| Error::parse(0, "missing hypergraph header"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_repeated_vertices() {
        let mut h = TupleHypergraph::new(3, 3);
        assert_eq!(h.add_arc(vec![0, 1, 0]), Err(Error::RepeatedVertex(0)));
        assert!(h.add_arc(vec![0, 1, 3]).is_err());
        assert!(h.add_arc(vec![0, 1]).is_err());
        assert!(h.add_arc(vec![2, 1, 0]).is_ok());
    }

    #[test]
    fn degrees() {
        let h = TupleHypergraph::with_arcs(3, 3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(h.degree(), 1);
        let p = TupleHypergraph::with_arcs(3, 2, vec![vec![0, 1], vec![1, 0], vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(p.degree(), 4);
        let mut two = h.clone();
        two.splice_in(&h, &[(0, 0)]).unwrap();
        assert_eq!(two.vertex_degree(0), 2);
        assert_eq!(two.vertex_count(), 5);
    }

    #[test]
    fn splice_detects_collapsed_arc() {
        let host = TupleHypergraph::new(2, 2);
        let arc = TupleHypergraph::with_arcs(2, 2, vec![vec![0, 1]]).unwrap();
        assert!(host.splice(&arc, &[(0, 0), (1, 0)]).is_err());
        let (h, image) = host.splice(&arc, &[(1, 0)]).unwrap();
        assert_eq!(image, vec![2, 0]);
        assert_eq!(h.arcs(), &[vec![2, 0]]);
    }

    #[test]
    fn text_round_trip() {
        let h = TupleHypergraph::with_arcs(4, 3, vec![vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
        let back = TupleHypergraph::parse(&h.to_text()).unwrap();
        assert_eq!(back, h);
        assert!(matches!(
            TupleHypergraph::parse("hypergraph n=2 k=2\narc 0 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn expansion_counts() {
        let h = TupleHypergraph::with_arcs(3, 3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(h.expand_orderings().arc_count(), 6);
    }
}
