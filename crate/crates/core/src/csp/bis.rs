//! Bipartite graphs, their independent sets, and the reduction that encodes
//! independent sets with copies of a perfect Implies gadget.

use crate::boolfn::{BooleanFunction, TruthTable};
use crate::error::{Error, Result};
use crate::format::{key_values, required_usize, strip_comment};
use crate::hypergraph::{verify_simulation_tuple, Conditioning, Engine, TupleHypergraph};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Bipartite graph with left vertices `0..left` and right vertices `0..right`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteGraph {
    pub left: usize,
    pub right: usize,
    /// `(l, r)` pairs, `l < left`, `r < right`.
    pub edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(l, r) in &edges {
            if l >= left {
                return Err(Error::VertexOutOfRange { vertex: l, n: left });
            }
            if r >= right {
                return Err(Error::VertexOutOfRange { vertex: r, n: right });
            }
        }
        Ok(BipartiteGraph { left, right, edges })
    }

    /// Two-colours an undirected graph on `0..n`; errors when an odd cycle exists.
    ///
    /// Returns the graph and, per original vertex, `(is_left, index in its side)`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<(Self, Vec<(bool, usize)>)> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut colour: Vec<Option<bool>> = vec![None; n];
        for s in 0..n {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(true);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let c = colour[u].unwrap();
                for &w in &adj[u] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            stack.push(w);
                        }
                        Some(d) if d == c => return Err(Error::Domain("graph is not bipartite".into())),
                        _ => {}
                    }
                }
            }
        }
        let mut place = Vec::with_capacity(n);
        let (mut nl, mut nr) = (0, 0);
        for c in &colour {
            if c.unwrap() {
                place.push((true, nl));
                nl += 1;
            } else {
                place.push((false, nr));
                nr += 1;
            }
        }
        let bip = edges
            .iter()
            .map(|&(u, v)| if place[u].0 { (place[u].1, place[v].1) } else { (place[v].1, place[u].1) })
            .collect();
        Ok((BipartiteGraph::new(nl, nr, bip)?, place))
    }

    /// Text form: `bipartite nL=<a> nR=<b>` then `edge l r` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("bipartite") => {
                    let kv = key_values(words, line_no)?;
                    header = Some((required_usize(&kv, "nL", line_no)?, required_usize(&kv, "nR", line_no)?));
                }
                Some("edge") => {
                    let (nl, nr) = header.ok_or_else(|| Error::parse(line_no, "edge before bipartite header"))?;
                    let nums: Vec<usize> = words
                        .map(|w| w.parse().map_err(|_| Error::parse(line_no, format!("bad vertex {w:?}"))))
                        .collect::<Result<_>>()?;
                    let [l, r] = nums[..] else {
                        return Err(Error::parse(line_no, "edge needs two vertices"));
                    };
                    if l >= nl || r >= nr {
                        return Err(Error::parse(line_no, "edge endpoint out of range"));
                    }
                    edges.push((l, r));
                }
                Some(other) => return Err(Error::parse(line_no, format!("unknown record {other:?}"))),
                None => {}
            }
        }
        let (left, right) = header.ok_or_else(|| Error::parse(1, "missing `bipartite nL= nR=` header"))?;
        BipartiteGraph::new(left, right, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("bipartite nL={} nR={}\n", self.left, self.right);
        for (l, r) in &self.edges {
            s.push_str(&format!("edge {l} {r}\n"));
        }
        s
    }

    pub fn vertex_count(&self) -> usize {
        self.left + self.right
    }

    /// Largest vertex degree (parallel edges counted).
    pub fn max_degree(&self) -> usize {
        let mut d = vec![0usize; self.vertex_count()];
        for &(l, r) in &self.edges {
            d[l] += 1;
            d[self.left + r] += 1;
        }
        d.into_iter().max().unwrap_or(0)
    }

    /// `|I_G|` by enumerating left subsets; each right vertex without a chosen
    /// neighbour doubles the count.
    pub fn count_independent_sets(&self, max_left: usize) -> Result<BigUint> {
        if self.left > max_left {
            return Err(Error::ResourceCap(format!(
                "{} left vertices exceed the enumeration cap {max_left}",
                self.left
            )));
        }
        let mut nbrs = vec![0u64; self.right];
        for &(l, r) in &self.edges {
            nbrs[r] |= 1 << l;
        }
        let mut total = BigUint::zero();
        for chosen in 0u64..1 << self.left {
            let free = nbrs.iter().filter(|&&m| m & chosen == 0).count();
            total += BigUint::one() << free;
        }
        Ok(total)
    }
}

/// Output of the reduction: the hypergraph and, at small scale, the exact identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisReduction {
    pub graph: TupleHypergraph,
    /// Max G-degree times the gadget degree at its terminals.
    pub degree: usize,
    pub gadget_partition_function: u64,
    pub independent_sets: Option<BigUint>,
    pub partition_function: Option<u64>,
    /// `Z_H * 3^|E| == |I_G| * Z_{H'}^|E|`, when checked.
    pub identity_holds: Option<bool>,
    pub warnings: Vec<String>,
}

/// One copy of the Implies gadget `(gadget, x, y)` per edge, `x` on the left
/// endpoint and `y` on the right one. Left vertex `l` is `l`, right `r` is `left + r`.
pub fn bis_reduction(g: &BipartiteGraph, f: &BooleanFunction, gadget: &TupleHypergraph, x: usize, y: usize, engine: &Engine) -> Result<BisReduction> {
    let implies: TruthTable<u64> = BooleanFunction::implies().to_table();
    if !verify_simulation_tuple(f, gadget, &Conditioning::empty(), &[x, y], &implies, engine)? {
        return Err(Error::Precondition("gadget is not a perfect Implies simulation".into()));
    }
    let z_gadget = engine.partition_function(f, gadget)?;
    let mut h = TupleHypergraph::new(g.vertex_count(), f.arity());
    for &(l, r) in &g.edges {
        h.splice_in(gadget, &[(x, l), (y, g.left + r)])?;
    }
    let terminal_degree = gadget.vertex_degree(x).max(gadget.vertex_degree(y));
    let mut out = BisReduction {
        degree: g.max_degree() * terminal_degree,
        graph: h,
        gadget_partition_function: z_gadget,
        independent_sets: None,
        partition_function: None,
        identity_holds: None,
        warnings: Vec::new(),
    };
    if out.graph.vertex_count() > engine.max_vertices || g.left > 24 {
        out.warnings.push(format!(
            "identity check skipped: {} vertices exceed the enumeration cap {}",
            out.graph.vertex_count(),
            engine.max_vertices
        ));
        return Ok(out);
    }
    let z = engine.partition_function(f, &out.graph)?;
    let count = g.count_independent_sets(24)?;
    let e = g.edges.len() as u32;
    let lhs = BigUint::from(z) * BigUint::from(3u32).pow(e);
    let rhs = &count * BigUint::from(z_gadget).pow(e);
    out.identity_holds = Some(lhs == rhs);
    out.independent_sets = Some(count);
    out.partition_function = Some(z);
    Ok(out)
}
