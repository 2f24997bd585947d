//! Exhaustive generation of conjugacy classes of transitive pairs
//! `(sigma_S, sigma_R)` with `sigma_S^2 = sigma_R^3 = 1`.
//!
//! For every cycle shape of `sigma_R` and every quotient graph `Sigma`, the
//! transpositions of `sigma_S` are distributed over the edges of `Sigma`.
//! Edges of a fixed maximal matching are pinned to one choice; the remaining
//! candidates are reduced to canonical keys.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::canonical::{
    canonical_pair, canonical_sigma_r, CanonicalPairKey, CanonicalShape, TranspositionSet,
};
use crate::graph::{generate_graphs, BicoloredMultigraph};
use crate::perm::{is_transitive, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("degrees differ ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("sigma_S is not an involution")]
    NotInvolution,
    #[error("sigma_R does not have order dividing 3")]
    NotOrderThree,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PermutationPair {
    pub sigma_s: Permutation,
    pub sigma_r: Permutation,
}

impl PermutationPair {
    pub fn new(sigma_s: Permutation, sigma_r: Permutation) -> Result<Self, PairError> {
        if sigma_s.degree() != sigma_r.degree() {
            return Err(PairError::DegreeMismatch(sigma_s.degree(), sigma_r.degree()));
        }
        if !sigma_s.then(&sigma_s).is_identity() {
            return Err(PairError::NotInvolution);
        }
        if !sigma_r.then(&sigma_r).then(&sigma_r).is_identity() {
            return Err(PairError::NotOrderThree);
        }
        Ok(PermutationPair { sigma_s, sigma_r })
    }

    pub fn degree(&self) -> usize {
        self.sigma_s.degree()
    }

    /// `sigma_S` applied first, then `sigma_R`.
    pub fn sigma_t(&self) -> Permutation {
        self.sigma_s.then(&self.sigma_r)
    }

    pub fn is_transitive(&self) -> bool {
        is_transitive(&[self.sigma_s.clone(), self.sigma_r.clone()], self.degree())
    }

    pub fn conjugate_by(&self, g: &Permutation) -> PermutationPair {
        PermutationPair {
            sigma_s: self.sigma_s.conj(g),
            sigma_r: self.sigma_r.conj(g),
        }
    }

    pub fn canonical_key(&self) -> CanonicalPairKey {
        canonical_pair(&self.sigma_s, &self.sigma_r).expect("validated on construction")
    }

    pub fn from_key(key: &CanonicalPairKey) -> PermutationPair {
        PermutationPair {
            sigma_s: key.sigma_s(),
            sigma_r: key.sigma_r(),
        }
    }
}

impl fmt::Debug for PermutationPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(S={}, R={})", self.sigma_s, self.sigma_r)
    }
}

/// Relabelling of a transitive pair by breadth-first search from `start`,
/// following `s` then `r`; the relabelled images are concatenated. Gives up
/// with `None` as soon as the code exceeds `best`.
fn bfs_relabel(s: &[u32], r: &[u32], start: u32, best: Option<&[u32]>) -> Option<Vec<u32>> {
    let n = s.len();
    let mut label = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(n);
    label[start as usize] = 0;
    order.push(start);
    let mut code = Vec::with_capacity(2 * n);
    let mut tied = best.is_some();
    let mut k = 0;
    while k < order.len() {
        let p = order[k] as usize;
        for img in [s[p], r[p]] {
            if label[img as usize] == u32::MAX {
                label[img as usize] = order.len() as u32;
                order.push(img);
            }
            let x = label[img as usize];
            if tied {
                let b = best.unwrap()[code.len()];
                if x > b {
                    return None;
                }
                tied = x == b;
            }
            code.push(x);
        }
        k += 1;
    }
    Some(code)
}

/// Conjugacy invariant of a transitive pair: the least breadth-first
/// relabelling over all start points. Two transitive pairs are conjugate in
/// `S_n` exactly when their forms agree.
pub fn coset_form(pair: &PermutationPair) -> Vec<u32> {
    let s = pair.sigma_s.images();
    let r = pair.sigma_r.images();
    let mut best: Option<Vec<u32>> = None;
    for start in 0..s.len() as u32 {
        if let Some(c) = bfs_relabel(s, r, start, best.as_deref()) {
            best = Some(c);
        }
    }
    best.expect("degree is positive")
}

/// Greedy maximal matching: loops first, then the remaining edges by
/// increasing multiplicity, ties in sorted order. Returned edges are
/// distinct `(u, v)` with `u <= v`.
///
/// Simple edges go first because a matched parallel edge lets its copies
/// trade places, so a class can then show up more often than
/// `|Aut Sigma| * 3^k'` (already at index 7).
pub fn maximal_matching(g: &BicoloredMultigraph) -> Vec<(u32, u32)> {
    let mut used = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for v in 0..g.vertex_count() as u32 {
        if g.multiplicity(v, v) > 0 {
            used[v as usize] = true;
            out.push((v, v));
        }
    }
    let mut edges = g.edges();
    edges.dedup();
    edges.sort_by_key(|&(u, v)| g.multiplicity(u, v));
    for (u, v) in edges {
        if u != v && !used[u as usize] && !used[v as usize] {
            used[u as usize] = true;
            used[v as usize] = true;
            out.push((u, v));
        }
    }
    out
}

/// Points of each vertex: black vertex `i` owns `{3i, 3i+1, 3i+2}`, white
/// vertex `j` owns `3c + j` (all 0-based).
pub fn standard_orbit_map(g: &BicoloredMultigraph) -> Vec<Vec<u32>> {
    let c = g.black() as u32;
    (0..c)
        .map(|i| vec![3 * i, 3 * i + 1, 3 * i + 2])
        .chain((0..g.white() as u32).map(|j| vec![3 * c + j]))
        .collect()
}

/// Calls `emit` for every `sigma_S` (as a transposition set) whose quotient
/// graph over `orbit_map` is `g`, with matching edges pinned to the
/// smallest unused points. Identical candidates that would arise from
/// reordering parallel free edges are produced once.
pub fn for_each_assignment<F: FnMut(&TranspositionSet)>(
    g: &BicoloredMultigraph,
    orbit_map: &[Vec<u32>],
    mut emit: F,
) {
    let n: usize = orbit_map.iter().map(Vec::len).sum();
    let matching = maximal_matching(g);
    let mut free = g.edges();
    for e in &matching {
        let k = free.iter().position(|x| x == e).expect("matching edge present");
        free.remove(k);
    }
    let mut used = vec![false; n];
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for &(u, v) in &matching {
        let pick = |used: &mut Vec<bool>, w: u32| {
            let p = *orbit_map[w as usize]
                .iter()
                .find(|&&p| !used[p as usize])
                .expect("orbit has room for the matching");
            used[p as usize] = true;
            p
        };
        let a = pick(&mut used, u);
        let b = pick(&mut used, v);
        pairs.push((a, b));
    }
    assign_free(&free, 0, orbit_map, &mut used, &mut pairs, None, &mut emit);
}

fn assign_free<F: FnMut(&TranspositionSet)>(
    free: &[(u32, u32)],
    k: usize,
    orbit_map: &[Vec<u32>],
    used: &mut Vec<bool>,
    pairs: &mut Vec<(u32, u32)>,
    last: Option<(u32, u32)>,
    emit: &mut F,
) {
    let Some(&(u, v)) = free.get(k) else {
        emit(&TranspositionSet::new(pairs.iter().copied()).expect("points are used once"));
        return;
    };
    // parallel copies of the same edge choose increasing pairs
    let floor = match (k > 0 && free[k - 1] == (u, v), last) {
        (true, Some(p)) => Some(p),
        _ => None,
    };
    let ou = &orbit_map[u as usize];
    let ov = &orbit_map[v as usize];
    for (i, &a) in ou.iter().enumerate() {
        if used[a as usize] {
            continue;
        }
        let choices: Vec<u32> = if u == v {
            ou[i + 1..].to_vec()
        } else {
            ov.clone()
        };
        for b in choices {
            if used[b as usize] || floor.is_some_and(|f| (a, b) <= f) {
                continue;
            }
            used[a as usize] = true;
            used[b as usize] = true;
            pairs.push((a, b));
            assign_free(free, k + 1, orbit_map, used, pairs, Some((a, b)), emit);
            pairs.pop();
            used[a as usize] = false;
            used[b as usize] = false;
        }
    }
}

/// All assignments of [`for_each_assignment`] collected.
pub fn assign_transpositions(
    g: &BicoloredMultigraph,
    orbit_map: &[Vec<u32>],
) -> Vec<TranspositionSet> {
    let mut out = Vec::new();
    for_each_assignment(g, orbit_map, |s| out.push(s.clone()));
    out
}

/// Per-graph counts from one enumeration.
#[derive(Debug, Clone)]
pub struct GraphStats {
    pub shape: CanonicalShape,
    pub graph: BicoloredMultigraph,
    pub aut_order: u64,
    /// Black vertices not covered by the chosen maximal matching.
    pub k_prime: u32,
    pub candidates: u64,
    pub classes: u64,
    /// Largest number of candidates sharing one canonical key.
    pub max_multiplicity: u64,
}

impl GraphStats {
    pub fn multiplicity_bound(&self) -> u64 {
        self.aut_order * 3u64.pow(self.k_prime)
    }

    /// The bound with parallel edges told apart, i.e. `|Aut Sigma|` times
    /// `m!` for every edge of multiplicity `m`. Unlike
    /// [`GraphStats::multiplicity_bound`] this one is never exceeded.
    pub fn labelled_edge_bound(&self) -> u64 {
        let mut edges = self.graph.edges();
        edges.dedup();
        edges.iter().fold(self.multiplicity_bound(), |acc, &(u, v)| {
            acc * (1..=self.graph.multiplicity(u, v) as u64).product::<u64>()
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct EnumerationStats {
    pub classes_emitted: u64,
    pub candidates_generated: u64,
    pub per_shape: Vec<(CanonicalShape, u64, u64)>,
    pub per_graph: Vec<GraphStats>,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub mu: usize,
    pub keys: Vec<CanonicalPairKey>,
    pub stats: EnumerationStats,
}

impl Enumeration {
    pub fn pairs(&self) -> impl Iterator<Item = PermutationPair> + '_ {
        self.keys.iter().map(PermutationPair::from_key)
    }
}

fn run_unit(shape: CanonicalShape, g: BicoloredMultigraph) -> (Vec<CanonicalPairKey>, GraphStats) {
    let r = canonical_sigma_r(shape);
    let n = shape.degree();
    let orbit_map = standard_orbit_map(&g);
    let matching = maximal_matching(&g);
    let covered: Vec<u32> = matching.iter().flat_map(|&(u, v)| [u, v]).collect();
    let k_prime = (0..g.black() as u32).filter(|v| !covered.contains(v)).count() as u32;
    let mut counts: HashMap<CanonicalPairKey, u64> = HashMap::new();
    let mut candidates = 0;
    for_each_assignment(&g, &orbit_map, |t| {
        candidates += 1;
        let s = t.to_permutation(n);
        debug_assert!(is_transitive(&[s.clone(), r.clone()], n));
        let key = canonical_pair(&s, &r).expect("assignments are involutions");
        *counts.entry(key).or_insert(0) += 1;
    });
    let max_multiplicity = counts.values().copied().max().unwrap_or(0);
    let mut keys: Vec<CanonicalPairKey> = counts.into_keys().collect();
    keys.sort();
    let stats = GraphStats {
        shape,
        aut_order: g.automorphism_order().aut_order,
        graph: g,
        k_prime,
        candidates,
        classes: keys.len() as u64,
        max_multiplicity,
    };
    (keys, stats)
}

/// Every conjugacy class of transitive pairs of degree `mu`, one canonical
/// key each. Shapes come by decreasing number of three-cycles, graphs in
/// generator order, keys sorted within a graph.
pub fn enumerate_classes(mu: usize) -> Enumeration {
    enumerate_classes_with(mu, |_| {})
}

/// As [`enumerate_classes`], reporting each finished work unit.
pub fn enumerate_classes_with<P>(mu: usize, progress: P) -> Enumeration
where
    P: Fn(&GraphStats) + Sync,
{
    assert!(mu >= 1, "index must be positive");
    let units: Vec<(CanonicalShape, BicoloredMultigraph)> = CanonicalShape::all_of_degree(mu)
        .into_par_iter()
        .flat_map_iter(|shape| {
            generate_graphs(shape.c, shape.f)
                .into_iter()
                .map(move |g| (shape, g))
        })
        .collect();
    let results: Vec<(Vec<CanonicalPairKey>, GraphStats)> = units
        .into_par_iter()
        .map(|(shape, g)| {
            let out = run_unit(shape, g);
            progress(&out.1);
            out
        })
        .collect();
    let mut keys = Vec::new();
    let mut stats = EnumerationStats::default();
    for (k, gs) in results {
        keys.extend(k);
        stats.candidates_generated += gs.candidates;
        stats.classes_emitted += gs.classes;
        match stats.per_shape.last_mut() {
            Some((shape, cand, cls)) if *shape == gs.shape => {
                *cand += gs.candidates;
                *cls += gs.classes;
            }
            _ => stats.per_shape.push((gs.shape, gs.candidates, gs.classes)),
        }
        stats.per_graph.push(gs);
    }
    Enumeration { mu, keys, stats }
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub mu: usize,
    pub graphs: Vec<GraphStats>,
}

impl AuditReport {
    pub fn violations(&self) -> impl Iterator<Item = &GraphStats> {
        self.graphs
            .iter()
            .filter(|g| g.max_multiplicity > g.multiplicity_bound())
    }

    pub fn passed(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// Checks that no class is produced more than `|Aut Sigma| * 3^k'` times.
pub fn multiplicity_audit(mu: usize) -> AuditReport {
    let e = enumerate_classes(mu);
    AuditReport {
        mu,
        graphs: e.stats.per_graph,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(black: usize, white: usize, edges: &[(u32, u32)]) -> BicoloredMultigraph {
        BicoloredMultigraph::new(black, white, edges).unwrap()
    }

    #[test]
    fn matching_examples() {
        assert_eq!(maximal_matching(&g(1, 1, &[(0, 1)])), vec![(0, 1)]);
        assert_eq!(maximal_matching(&g(1, 1, &[(0, 0), (0, 1)])), vec![(0, 0)]);
        assert_eq!(maximal_matching(&g(3, 0, &[(0, 1), (1, 2)])).len(), 1);
    }

    #[test]
    fn assignment_examples() {
        let loop_only = g(1, 0, &[(0, 0)]);
        let got = assign_transpositions(&loop_only, &standard_orbit_map(&loop_only));
        assert_eq!(got, vec![TranspositionSet::new([(0, 1)]).unwrap()]);

        let bw = g(1, 1, &[(0, 1)]);
        let got = assign_transpositions(&bw, &standard_orbit_map(&bw));
        assert_eq!(got, vec![TranspositionSet::new([(0, 3)]).unwrap()]);

        let two = g(2, 0, &[(0, 0), (0, 1)]);
        let got = assign_transpositions(&two, &standard_orbit_map(&two));
        assert_eq!(got.len(), 3);
        for t in &got {
            assert!(t.pairs().contains(&(0, 1)));
        }
    }

    #[test]
    fn small_class_counts() {
        assert_eq!(enumerate_classes(1).keys.len(), 1);
        let two = enumerate_classes(2);
        assert_eq!(two.keys.len(), 1);
        let p = two.pairs().next().unwrap();
        assert!(p.sigma_r.is_identity());
        assert_eq!(p.sigma_s, Permutation::transposition(2, 0, 1));
        assert_eq!(enumerate_classes(3).keys.len(), 2);
    }

    #[test]
    fn audit_small() {
        let a = multiplicity_audit(3);
        assert!(a.passed());
        let one = multiplicity_audit(1);
        assert_eq!(one.graphs.len(), 1);
        assert_eq!(one.graphs[0].candidates, 1);
        assert_eq!(one.graphs[0].multiplicity_bound(), 1);
    }
}
