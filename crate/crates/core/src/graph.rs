//! Bicoloured multigraphs `Sigma` whose vertices are the orbits of `sigma_R`
//! and whose edges are the transpositions of `sigma_S`, plus isomorph-free
//! generation of all of them by canonical augmentation.
//!
//! Black vertices stand for three-cycles (degree at most 3, a loop counts
//! twice), white vertices for fixed points (degree at most 1).

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(u32),
    #[error("loop on white vertex {0}")]
    WhiteLoop(u32),
    #[error("vertex {0} exceeds its degree bound")]
    DegreeExceeded(u32),
}

const BLACK: u8 = 0;
const WHITE: u8 = 1;

fn capacity(color: u8) -> u32 {
    if color == BLACK {
        3
    } else {
        1
    }
}

/// Vertices `0..black` are black, `black..black+white` are white.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BicoloredMultigraph {
    black: usize,
    white: usize,
    /// Symmetric multiplicity matrix, loops on the diagonal.
    mult: Vec<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GraphAutomorphismInfo {
    pub aut_order: u64,
}

impl BicoloredMultigraph {
    /// Build from 0-based edges, repeated for multiplicity.
    pub fn new(black: usize, white: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let n = black + white;
        let mut g = BicoloredMultigraph {
            black,
            white,
            mult: vec![0; n * n],
        };
        for &(u, v) in edges {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(GraphError::VertexOutOfRange(x));
                }
            }
            if u == v && !g.is_black(u) {
                return Err(GraphError::WhiteLoop(u));
            }
            g.mult[u as usize * n + v as usize] += 1;
            if u != v {
                g.mult[v as usize * n + u as usize] += 1;
            }
        }
        for v in 0..n as u32 {
            if g.degree(v) > g.capacity_of(v) {
                return Err(GraphError::DegreeExceeded(v));
            }
        }
        Ok(g)
    }

    pub fn black(&self) -> usize {
        self.black
    }

    pub fn white(&self) -> usize {
        self.white
    }

    pub fn vertex_count(&self) -> usize {
        self.black + self.white
    }

    pub fn is_black(&self, v: u32) -> bool {
        (v as usize) < self.black
    }

    fn capacity_of(&self, v: u32) -> u32 {
        if self.is_black(v) {
            3
        } else {
            1
        }
    }

    pub fn multiplicity(&self, u: u32, v: u32) -> u8 {
        self.mult[u as usize * self.vertex_count() + v as usize]
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: u32) -> u32 {
        let n = self.vertex_count();
        (0..n as u32)
            .map(|w| {
                let m = self.multiplicity(v, w) as u32;
                if w == v {
                    2 * m
                } else {
                    m
                }
            })
            .sum()
    }

    /// Edges `(u, v)` with `u <= v`, sorted, repeated for multiplicity.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let n = self.vertex_count() as u32;
        let mut out = Vec::new();
        for u in 0..n {
            for v in u..n {
                for _ in 0..self.multiplicity(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        n <= 1 || reachable_count(n, &self.mult) == n
    }

    pub fn automorphism_order(&self) -> GraphAutomorphismInfo {
        let c = canonize(&self.as_work());
        GraphAutomorphismInfo {
            aut_order: c.auts.len() as u64,
        }
    }

    /// Isomorphic copy in canonical labelling; equal for isomorphic inputs.
    pub fn canonical_form(&self) -> BicoloredMultigraph {
        let w = self.as_work();
        let c = canonize(&w);
        w.relabel(&c.lab).into_graph()
    }

    /// All colour-preserving automorphisms as vertex maps.
    pub fn automorphisms(&self) -> Vec<Vec<u32>> {
        canonize(&self.as_work()).auts
    }

    fn as_work(&self) -> Work {
        let n = self.vertex_count();
        let mut color = vec![BLACK; self.black];
        color.resize(n, WHITE);
        Work {
            color,
            mult: self.mult.clone(),
        }
    }
}

fn reachable_count(n: usize, mult: &[u8]) -> usize {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0usize];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for w in 0..n {
            if !seen[w] && mult[u * n + w] > 0 {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count
}

impl fmt::Display for BicoloredMultigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{} W{} ;", self.black, self.white)?;
        for (u, v) in self.edges() {
            write!(f, " ({},{})", u + 1, v + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for BicoloredMultigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The quotient graph of a pair. Black vertices are the three-cycles of
/// `sigma_R` ordered by smallest point, then the fixed points in order.
/// Also returns the vertex of each point.
pub fn quotient_graph(s: &Permutation, r: &Permutation) -> (BicoloredMultigraph, Vec<u32>) {
    let n = r.degree();
    let cycles = r.cycles();
    let black: Vec<&Vec<u32>> = cycles.iter().filter(|c| c.len() == 3).collect();
    let white: Vec<&Vec<u32>> = cycles.iter().filter(|c| c.len() == 1).collect();
    let mut vertex = vec![u32::MAX; n];
    for (i, c) in black.iter().chain(white.iter()).enumerate() {
        for &p in c.iter() {
            vertex[p as usize] = i as u32;
        }
    }
    let mut edges = Vec::new();
    for p in 0..n as u32 {
        let q = s.image(p);
        if p < q {
            edges.push((vertex[p as usize], vertex[q as usize]));
        }
    }
    let g = BicoloredMultigraph::new(black.len(), white.len(), &edges)
        .expect("orbit capacities bound the degrees");
    (g, vertex)
}

/// Working graph for the generator, with vertices in any colour order.
#[derive(Clone)]
struct Work {
    color: Vec<u8>,
    mult: Vec<u8>,
}

impl Work {
    fn n(&self) -> usize {
        self.color.len()
    }

    fn m(&self, u: usize, v: usize) -> u8 {
        self.mult[u * self.n() + v]
    }

    fn degree(&self, v: usize) -> u32 {
        (0..self.n())
            .map(|w| {
                let m = self.m(v, w) as u32;
                if w == v {
                    2 * m
                } else {
                    m
                }
            })
            .sum()
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        let n = self.n();
        self.mult[u * n + v] += 1;
        if u != v {
            self.mult[v * n + u] += 1;
        }
    }

    fn remove_edge(&mut self, u: usize, v: usize) {
        let n = self.n();
        self.mult[u * n + v] -= 1;
        if u != v {
            self.mult[v * n + u] -= 1;
        }
    }

    fn add_vertex(&mut self, color: u8) -> usize {
        let n = self.n();
        let mut mult = vec![0; (n + 1) * (n + 1)];
        for u in 0..n {
            mult[u * (n + 1)..u * (n + 1) + n].copy_from_slice(&self.mult[u * n..u * n + n]);
        }
        self.mult = mult;
        self.color.push(color);
        n
    }

    fn count(&self, color: u8) -> usize {
        self.color.iter().filter(|&&c| c == color).count()
    }

    fn is_bridge(&self, u: usize, v: usize) -> bool {
        if u == v || self.m(u, v) > 1 {
            return false;
        }
        let mut g = self.clone();
        g.remove_edge(u, v);
        reachable_count(g.n(), &g.mult) < g.n()
    }

    /// Vertex `v` moves to position `lab[v]`.
    fn relabel(&self, lab: &[u32]) -> Work {
        let n = self.n();
        let mut color = vec![0; n];
        let mut mult = vec![0; n * n];
        for u in 0..n {
            color[lab[u] as usize] = self.color[u];
            for v in 0..n {
                mult[lab[u] as usize * n + lab[v] as usize] = self.m(u, v);
            }
        }
        Work { color, mult }
    }

    /// Requires black vertices first.
    fn into_graph(self) -> BicoloredMultigraph {
        let black = self.count(BLACK);
        debug_assert!(self.color[..black].iter().all(|&c| c == BLACK));
        BicoloredMultigraph {
            black,
            white: self.n() - black,
            mult: self.mult,
        }
    }
}

struct Canon {
    /// Canonical position of each vertex.
    lab: Vec<u32>,
    /// All automorphisms.
    auts: Vec<Vec<u32>>,
}

fn rerank<K: Ord + Clone>(keys: &[K]) -> (Vec<u32>, usize) {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    let cells = keys
        .iter()
        .map(|k| sorted.binary_search(k).unwrap() as u32)
        .collect();
    (cells, sorted.len())
}

fn refine(g: &Work, cells: &mut Vec<u32>) {
    let n = g.n();
    let mut count = {
        let mut c = cells.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    loop {
        let keys: Vec<(u32, Vec<(u32, u8, u8)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(u32, u8, u8)> = (0..n)
                    .filter(|&w| g.m(v, w) > 0)
                    .map(|w| (cells[w], (w == v) as u8, g.m(v, w)))
                    .collect();
                nb.sort_unstable();
                (cells[v], nb)
            })
            .collect();
        let (next, k) = rerank(&keys);
        *cells = next;
        if k == count {
            return;
        }
        count = k;
    }
}

fn leaf_code(g: &Work, cells: &[u32]) -> Vec<u8> {
    let n = g.n();
    let mut inv = vec![0usize; n];
    for v in 0..n {
        inv[cells[v] as usize] = v;
    }
    let mut code: Vec<u8> = inv.iter().map(|&v| g.color[v]).collect();
    for i in 0..n {
        for j in i..n {
            code.push(g.m(inv[i], inv[j]));
        }
    }
    code
}

fn canonize(g: &Work) -> Canon {
    let n = g.n();
    let init: Vec<(u8, u32)> = (0..n).map(|v| (g.color[v], g.degree(v))).collect();
    let (cells, _) = rerank(&init);
    let mut best: Option<(Vec<u8>, Vec<u32>)> = None;
    let mut leaves: Vec<Vec<u32>> = Vec::new();
    search(g, cells, &mut best, &mut leaves);
    let (_, lab) = best.expect("search reaches a leaf");
    let mut inv = vec![0u32; n];
    for v in 0..n {
        inv[lab[v] as usize] = v as u32;
    }
    let auts = leaves
        .iter()
        .map(|l| (0..n).map(|v| inv[l[v] as usize]).collect())
        .collect();
    Canon { lab, auts }
}

fn search(
    g: &Work,
    mut cells: Vec<u32>,
    best: &mut Option<(Vec<u8>, Vec<u32>)>,
    leaves: &mut Vec<Vec<u32>>,
) {
    refine(g, &mut cells);
    let n = g.n();
    let mut size = vec![0usize; n];
    for &c in &cells {
        size[c as usize] += 1;
    }
    let Some(target) = (0..n).find(|&c| size[c] > 1) else {
        let code = leaf_code(g, &cells);
        match best {
            Some((b, _)) if *b > code => {}
            Some((b, _)) if *b == code => leaves.push(cells),
            _ => {
                *best = Some((code, cells.clone()));
                leaves.clear();
                leaves.push(cells);
            }
        }
        return;
    };
    for v in 0..n {
        if cells[v] as usize != target {
            continue;
        }
        let split: Vec<(u32, u8)> = (0..n)
            .map(|u| (cells[u], (cells[u] as usize == target && u != v) as u8))
            .collect();
        let (next, _) = rerank(&split);
        search(g, next, best, leaves);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Aug {
    Edge(u32, u32),
    Vertex(u8, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Del {
    Edge(u32, u32),
    Leaf(u32),
}

fn map_aug(a: Aug, phi: &[u32]) -> Aug {
    match a {
        Aug::Edge(u, v) => {
            let (x, y) = (phi[u as usize], phi[v as usize]);
            Aug::Edge(x.min(y), x.max(y))
        }
        Aug::Vertex(c, u) => Aug::Vertex(c, phi[u as usize]),
    }
}

fn map_del(d: Del, phi: &[u32]) -> Del {
    match d {
        Del::Edge(u, v) => {
            let (x, y) = (phi[u as usize], phi[v as usize]);
            Del::Edge(x.min(y), x.max(y))
        }
        Del::Leaf(x) => Del::Leaf(phi[x as usize]),
    }
}

fn canonical_deletion(g: &Work, lab: &[u32]) -> Del {
    let n = g.n();
    let mut best: Option<((u8, u32, u32), Del)> = None;
    let mut consider = |key: (u8, u32, u32), d: Del| {
        if best.is_none_or(|(k, _)| key > k) {
            best = Some((key, d));
        }
    };
    for u in 0..n {
        for v in u..n {
            if g.m(u, v) > 0 && !g.is_bridge(u, v) {
                let (a, b) = (lab[u], lab[v]);
                consider((1, a.max(b), a.min(b)), Del::Edge(u as u32, v as u32));
            }
        }
        if n > 1 && g.degree(u) == 1 {
            consider((0, lab[u], 0), Del::Leaf(u as u32));
        }
    }
    best.expect("graphs with two or more elements have a deletion").1
}

struct Generator<'a, F: FnMut(BicoloredMultigraph)> {
    black: usize,
    white: usize,
    emit: &'a mut F,
}

impl<F: FnMut(BicoloredMultigraph)> Generator<'_, F> {
    fn visit(&mut self, g: &Work, canon: &Canon) {
        if g.count(BLACK) == self.black && g.count(WHITE) == self.white {
            (self.emit)(g.relabel(&canon.lab).into_graph());
        }
        let n = g.n();
        let mut augs = Vec::new();
        for u in 0..n {
            let du = g.degree(u);
            let cu = capacity(g.color[u]);
            if g.color[u] == BLACK && du + 2 <= cu {
                augs.push(Aug::Edge(u as u32, u as u32));
            }
            for v in u + 1..n {
                if du < cu && g.degree(v) < capacity(g.color[v]) {
                    augs.push(Aug::Edge(u as u32, v as u32));
                }
            }
            if du < cu {
                if g.count(BLACK) < self.black {
                    augs.push(Aug::Vertex(BLACK, u as u32));
                }
                if g.count(WHITE) < self.white {
                    augs.push(Aug::Vertex(WHITE, u as u32));
                }
            }
        }
        for a in augs {
            if canon.auts.iter().any(|phi| map_aug(a, phi) < a) {
                continue;
            }
            let mut child = g.clone();
            let inverse = match a {
                Aug::Edge(u, v) => {
                    child.add_edge(u as usize, v as usize);
                    Del::Edge(u, v)
                }
                Aug::Vertex(c, u) => {
                    let x = child.add_vertex(c);
                    child.add_edge(u as usize, x);
                    Del::Leaf(x as u32)
                }
            };
            let cc = canonize(&child);
            let target = canonical_deletion(&child, &cc.lab);
            if cc.auts.iter().any(|phi| map_del(inverse, phi) == target) {
                self.visit(&child, &cc);
            }
        }
    }
}

/// Calls `emit` once per isomorphism class of connected graphs with the
/// given vertex counts, in canonical labelling. The order is deterministic.
pub fn for_each_graph<F: FnMut(BicoloredMultigraph)>(black: usize, white: usize, mut emit: F) {
    let mut gen = Generator {
        black,
        white,
        emit: &mut emit,
    };
    for (color, have) in [(BLACK, black), (WHITE, white)] {
        if have == 0 {
            continue;
        }
        let root = Work {
            color: vec![color],
            mult: vec![0],
        };
        let canon = canonize(&root);
        gen.visit(&root, &canon);
    }
}

/// One representative per isomorphism class of connected graphs with
/// `black` black and `white` white vertices.
pub fn generate_graphs(black: usize, white: usize) -> Vec<BicoloredMultigraph> {
    let mut out = Vec::new();
    for_each_graph(black, white, |g| out.push(g));
    out
}

pub fn automorphism_order(g: &BicoloredMultigraph) -> GraphAutomorphismInfo {
    g.automorphism_order()
}

/// Canonical forms of a list of graphs, for duplicate checks.
pub fn distinct_forms(graphs: &[BicoloredMultigraph]) -> HashSet<BicoloredMultigraph> {
    graphs.iter().map(BicoloredMultigraph::canonical_form).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(black: usize, white: usize, edges: &[(u32, u32)]) -> BicoloredMultigraph {
        BicoloredMultigraph::new(black, white, edges).unwrap()
    }

    #[test]
    fn small_generation_counts() {
        assert_eq!(generate_graphs(1, 0).len(), 2);
        assert_eq!(generate_graphs(0, 1).len(), 1);
        assert_eq!(generate_graphs(1, 1).len(), 2);
        let ww = generate_graphs(0, 2);
        assert_eq!(ww.len(), 1);
        assert_eq!(ww[0].edges(), vec![(0, 1)]);
        assert!(generate_graphs(0, 3).is_empty());
    }

    #[test]
    fn automorphism_orders() {
        assert_eq!(g(1, 1, &[(0, 1)]).automorphism_order().aut_order, 1);
        assert_eq!(g(3, 0, &[(0, 1), (1, 2), (0, 2)]).automorphism_order().aut_order, 6);
        assert_eq!(g(2, 0, &[(0, 1), (0, 1), (0, 1)]).automorphism_order().aut_order, 2);
    }

    #[test]
    fn degrees_and_connectivity() {
        assert!(g(1, 0, &[]).is_connected());
        assert!(!g(2, 0, &[]).is_connected());
        assert_eq!(g(1, 0, &[(0, 0)]).degree(0), 2);
        assert_eq!(
            BicoloredMultigraph::new(1, 0, &[(0, 0), (0, 0)]),
            Err(GraphError::DegreeExceeded(0))
        );
        assert_eq!(
            BicoloredMultigraph::new(0, 1, &[(0, 0)]),
            Err(GraphError::WhiteLoop(0))
        );
    }

    #[test]
    fn display_format() {
        assert_eq!(g(2, 1, &[(0, 0), (0, 2)]).to_string(), "B2 W1 ; (1,1) (1,3)");
    }

    #[test]
    fn canonical_form_is_invariant() {
        let a = g(3, 1, &[(0, 1), (1, 2), (2, 3), (0, 0)]);
        let b = g(3, 1, &[(2, 1), (1, 0), (0, 3), (2, 2)]);
        assert_eq!(a.canonical_form(), b.canonical_form());
        let c = g(3, 1, &[(0, 1), (1, 2), (1, 3), (0, 0)]);
        assert_ne!(a.canonical_form(), c.canonical_form());
    }

    #[test]
    fn quotient_of_example_pair() {
        let s = Permutation::parse("(2 5)(3 7)(4 8)(6 9)", Some(9)).unwrap();
        let r = Permutation::parse("(1 2 6)(3 8 5)(4 9 7)", Some(9)).unwrap();
        let (q, vertex) = quotient_graph(&s, &r);
        assert_eq!((q.black(), q.white()), (3, 0));
        assert!(q.is_connected());
        assert_eq!(q.edge_count(), 4);
        assert_eq!(vertex[0], 0);
    }
}
