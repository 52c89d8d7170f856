//! Canonical enumeration of small simple k-uniform hypergraphs.

use crate::boolfn::sets::positions;
use crate::hypergraph::TupleHypergraph;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

type Key = (usize, usize, usize);

fn cache() -> &'static Mutex<HashMap<Key, Arc<Vec<TupleHypergraph>>>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Vec<TupleHypergraph>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Simple `k`-uniform hypergraphs on exactly `vertices` covered vertices with
/// `arcs` distinct hyperarcs, one representative per isomorphism-reduced class.
///
/// Arcs are sorted vertex sets. A graph is kept when vertex degrees are
/// nonincreasing and its sorted arc list is minimal among relabellings that
/// permute vertices of equal degree. Results are cached.
pub fn canonical_hypergraphs(k: usize, vertices: usize, arcs: usize) -> Arc<Vec<TupleHypergraph>> {
    let key = (k, vertices, arcs);
    if let Some(hit) = cache().lock().expect("catalog cache").get(&key) {
        return hit.clone();
    }
    let built = Arc::new(build(k, vertices, arcs));
    cache().lock().expect("catalog cache").insert(key, built.clone());
    built
}

fn build(k: usize, n: usize, m: usize) -> Vec<TupleHypergraph> {
    if k == 0 || n < k || m == 0 || n > 16 {
        return Vec::new();
    }
    let subsets: Vec<u32> = (0u32..1 << n).filter(|s| s.count_ones() as usize == k).collect();
    if m > subsets.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut choice: Vec<usize> = (0..m).collect();
    loop {
        let masks: Vec<u32> = choice.iter().map(|&i| subsets[i]).collect();
        if let Some(g) = accept(&masks, n, k) {
            out.push(g);
        }
        // Next m-combination of subset indices.
        let mut i = m;
        while i > 0 && choice[i - 1] == subsets.len() - m + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        choice[i - 1] += 1;
        for j in i..m {
            choice[j] = choice[j - 1] + 1;
        }
    }
    out
}

fn accept(masks: &[u32], n: usize, k: usize) -> Option<TupleHypergraph> {
    let deg: Vec<u32> = (0..n).map(|v| masks.iter().filter(|&&a| a >> v & 1 == 1).count() as u32).collect();
    if deg.contains(&0) || deg.windows(2).any(|w| w[0] < w[1]) {
        return None;
    }
    let mut sorted = masks.to_vec();
    sorted.sort_unstable();
    // Blocks of equal degree are contiguous; permute within each block.
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for v in 1..=n {
        if v == n || deg[v] != deg[start] {
            blocks.push((start, v));
            start = v;
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    if !minimal_under(&blocks, 0, &mut perm, &sorted) {
        return None;
    }
    let arcs = sorted.iter().map(|&a| positions(a)).collect();
    TupleHypergraph::with_arcs(n, k, arcs).ok()
}

/// False as soon as some block-preserving relabelling gives a smaller arc list.
fn minimal_under(blocks: &[(usize, usize)], b: usize, perm: &mut Vec<usize>, sorted: &[u32]) -> bool {
    if b == blocks.len() {
        let mut image: Vec<u32> = sorted
            .iter()
            .map(|&a| (0..perm.len()).filter(|&v| a >> v & 1 == 1).fold(0u32, |m, v| m | 1 << perm[v]))
            .collect();
        image.sort_unstable();
        return image.as_slice() >= sorted;
    }
    let (lo, hi) = blocks[b];
    permute_range(perm, lo, lo, hi, &mut |p| minimal_under(blocks, b + 1, p, sorted))
}

/// Heap-free recursive permutation of `perm[lo..hi]`, stopping early on `false`.
fn permute_range(perm: &mut Vec<usize>, lo: usize, i: usize, hi: usize, visit: &mut dyn FnMut(&mut Vec<usize>) -> bool) -> bool {
    if hi - lo <= 1 || i + 1 >= hi {
        return visit(perm);
    }
    for j in i..hi {
        perm.swap(i, j);
        let ok = permute_range(perm, lo, i + 1, hi, visit);
        perm.swap(i, j);
        if !ok {
            return false;
        }
    }
    true
}
