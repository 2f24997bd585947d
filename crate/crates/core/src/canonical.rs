//! Canonical representatives of pairs `(sigma_S, sigma_R)` up to
//! simultaneous conjugation in the symmetric group.
//!
//! `sigma_R` is first relabelled to `(1 2 3)(4 5 6)...` with its fixed points
//! last. The remaining freedom is the centralizer of that permutation, and
//! `sigma_S` (viewed as a set of transpositions) is replaced by the
//! lexicographically least set in its orbit under the centralizer.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::bsgs::Bsgs;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("sigma_S and sigma_R have different degrees ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("sigma_S is not an involution")]
    NotInvolution,
    #[error("sigma_R does not have order dividing 3")]
    NotOrderThree,
}

/// Cycle type of `sigma_R`: `c` three-cycles and `f` fixed points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalShape {
    pub c: usize,
    pub f: usize,
}

impl CanonicalShape {
    pub fn degree(&self) -> usize {
        3 * self.c + self.f
    }

    /// All shapes of the given degree, by decreasing number of three-cycles.
    pub fn all_of_degree(n: usize) -> Vec<CanonicalShape> {
        (0..=n / 3)
            .rev()
            .map(|c| CanonicalShape { c, f: n - 3 * c })
            .collect()
    }
}

/// Rank of the 0-based pair `i < j` in lexicographic order of pairs.
#[inline]
pub(crate) fn pair_index(n: usize, i: u32, j: u32) -> u32 {
    debug_assert!(i < j && (j as usize) < n);
    let (i, j, n) = (i as usize, j as usize, n);
    (i * (2 * n - i - 1) / 2 + (j - i - 1)) as u32
}

fn pair_table(n: usize) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            out.push((i, j));
        }
    }
    out
}

/// A set of pairwise disjoint transpositions (0-based), kept sorted.
///
/// Sets are ordered by comparing their sorted pair sequences
/// lexicographically, pairs being ordered as `(min, max)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TranspositionSet {
    pairs: Vec<(u32, u32)>,
}

impl TranspositionSet {
    /// Build from 0-based pairs. Returns `None` if the pairs are not disjoint.
    pub fn new(pairs: impl IntoIterator<Item = (u32, u32)>) -> Option<Self> {
        let mut v: Vec<(u32, u32)> = pairs
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        v.sort_unstable();
        let mut used = HashSet::new();
        for &(a, b) in &v {
            if a == b || !used.insert(a) || !used.insert(b) {
                return None;
            }
        }
        Some(TranspositionSet { pairs: v })
    }

    pub fn empty() -> Self {
        TranspositionSet { pairs: Vec::new() }
    }

    /// The 2-cycles of an involution.
    pub fn from_involution(s: &Permutation) -> Self {
        let pairs = (0..s.degree() as u32)
            .filter_map(|i| {
                let j = s.image(i);
                (i < j).then_some((i, j))
            })
            .collect();
        TranspositionSet { pairs }
    }

    pub fn to_permutation(&self, n: usize) -> Permutation {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for &(a, b) in &self.pairs {
            images[a as usize] = b;
            images[b as usize] = a;
        }
        Permutation::from_images_unchecked(images)
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Image under a point permutation.
    pub fn image(&self, g: &Permutation) -> Self {
        TranspositionSet::new(self.pairs.iter().map(|&(a, b)| (g.image(a), g.image(b))))
            .expect("images of disjoint pairs are disjoint")
    }
}

impl fmt::Display for TranspositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "{{}}");
        }
        for (a, b) in &self.pairs {
            write!(f, "({},{})", a + 1, b + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for TranspositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TranspositionSet{self}")
    }
}

/// Canonical representative of a pair modulo conjugation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalPairKey {
    pub shape: CanonicalShape,
    pub s_min: TranspositionSet,
}

impl CanonicalPairKey {
    pub fn degree(&self) -> usize {
        self.shape.degree()
    }

    pub fn sigma_s(&self) -> Permutation {
        self.s_min.to_permutation(self.degree())
    }

    pub fn sigma_r(&self) -> Permutation {
        canonical_sigma_r(self.shape)
    }
}

impl fmt::Display for CanonicalPairKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}f{}:{}", self.shape.c, self.shape.f, self.s_min)
    }
}

/// `(1 2 3)(4 5 6)...(3c-2 3c-1 3c)` with the last `f` points fixed.
pub fn canonical_sigma_r(shape: CanonicalShape) -> Permutation {
    let n = shape.degree();
    let mut images: Vec<u32> = (0..n as u32).collect();
    for b in 0..shape.c as u32 {
        images[(3 * b) as usize] = 3 * b + 1;
        images[(3 * b + 1) as usize] = 3 * b + 2;
        images[(3 * b + 2) as usize] = 3 * b;
    }
    Permutation::from_images_unchecked(images)
}

/// Generators of the centralizer of [`canonical_sigma_r`] in `S_n`:
/// the three-cycles, swaps of adjacent blocks and adjacent transpositions
/// of the fixed points. The group has order `3^c * c! * f!`.
pub fn centralizer_generators(shape: CanonicalShape) -> Vec<Permutation> {
    let n = shape.degree();
    let mut gens = Vec::new();
    for b in 0..shape.c as u32 {
        let mut images: Vec<u32> = (0..n as u32).collect();
        images[(3 * b) as usize] = 3 * b + 1;
        images[(3 * b + 1) as usize] = 3 * b + 2;
        images[(3 * b + 2) as usize] = 3 * b;
        gens.push(Permutation::from_images_unchecked(images));
    }
    for b in 1..shape.c as u32 {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for k in 0..3 {
            images.swap((3 * (b - 1) + k) as usize, (3 * b + k) as usize);
        }
        gens.push(Permutation::from_images_unchecked(images));
    }
    let first_fixed = 3 * shape.c as u32;
    for k in 1..shape.f as u32 {
        gens.push(Permutation::transposition(
            n,
            first_fixed + k - 1,
            first_fixed + k,
        ));
    }
    gens
}

/// Orbit data of the pointwise stabilizer of a prefix of pair-points.
struct StabLevel {
    gens: Vec<Permutation>,
    inv_gens: Vec<Permutation>,
    /// Smallest pair index in the orbit of each pair index.
    orbit_min: Vec<u32>,
    /// Schreier vector: `(predecessor, generator)`; `u32::MAX` at orbit roots.
    parent: Vec<(u32, u32)>,
}

/// Minimal-image search for sets of transpositions under a fixed group.
///
/// The group acts on the combined domain `points ++ pairs` so that elements
/// found on the pair level still carry their point action. Stabilizer data
/// for each visited prefix of the image is cached, so repeated calls with
/// the same group get cheaper.
pub struct MinImageSearch {
    n: usize,
    pairs: Vec<(u32, u32)>,
    root_gens: Vec<Permutation>,
    memo: HashMap<Vec<u32>, Rc<StabLevel>>,
}

impl MinImageSearch {
    pub fn new(gens: &[Permutation], n: usize) -> Self {
        let pairs = pair_table(n);
        let root_gens = gens
            .iter()
            .filter(|g| !g.is_identity())
            .map(|g| induce(g, n, &pairs))
            .collect();
        MinImageSearch {
            n,
            pairs,
            root_gens,
            memo: HashMap::new(),
        }
    }

    fn npairs(&self) -> usize {
        self.pairs.len()
    }

    fn level(&mut self, prefix: &[u32]) -> Rc<StabLevel> {
        if let Some(l) = self.memo.get(prefix) {
            return Rc::clone(l);
        }
        let gens = match prefix.split_last() {
            None => self.root_gens.clone(),
            Some((&m, rest)) => {
                let parent = self.level(rest);
                if parent.gens.is_empty() {
                    Vec::new()
                } else {
                    let degree = self.n + self.npairs();
                    let chain = Bsgs::new(&parent.gens, degree, &[self.n as u32 + m]);
                    chain.stabilizer_generators(1)
                }
            }
        };
        let level = Rc::new(self.build_level(gens));
        self.memo.insert(prefix.to_vec(), Rc::clone(&level));
        level
    }

    fn build_level(&self, gens: Vec<Permutation>) -> StabLevel {
        let np = self.npairs();
        let off = self.n as u32;
        let mut orbit_min = vec![u32::MAX; np];
        let mut parent = vec![(u32::MAX, u32::MAX); np];
        for root in 0..np as u32 {
            if orbit_min[root as usize] != u32::MAX {
                continue;
            }
            orbit_min[root as usize] = root;
            let mut queue = vec![root];
            let mut k = 0;
            while k < queue.len() {
                let x = queue[k];
                for (gi, g) in gens.iter().enumerate() {
                    let y = g.image(off + x) - off;
                    if orbit_min[y as usize] == u32::MAX {
                        orbit_min[y as usize] = root;
                        parent[y as usize] = (x, gi as u32);
                        queue.push(y);
                    }
                }
                k += 1;
            }
        }
        let inv_gens = gens.iter().map(Permutation::inverse).collect();
        StabLevel {
            gens,
            inv_gens,
            orbit_min,
            parent,
        }
    }

    /// Smallest image of `s`, optionally with a group element realising it.
    pub fn smallest_image(
        &mut self,
        s: &TranspositionSet,
        want_witness: bool,
    ) -> (TranspositionSet, Option<Permutation>) {
        let n = self.n;
        let off = n as u32;
        let degree = n + self.npairs();
        let start: Vec<u32> = s
            .pairs()
            .iter()
            .map(|&(a, b)| pair_index(n, a, b))
            .collect();
        let mut cands: Vec<(Vec<u32>, Option<Permutation>)> =
            vec![(start, want_witness.then(|| Permutation::identity(degree)))];
        let mut prefix: Vec<u32> = Vec::with_capacity(s.len());
        for _ in 0..s.len() {
            let lvl = self.level(&prefix);
            let mut m = u32::MAX;
            for (set, _) in &cands {
                for &x in set {
                    if !prefix.contains(&x) {
                        m = m.min(lvl.orbit_min[x as usize]);
                    }
                }
            }
            let mut seen: HashSet<Vec<u32>> = HashSet::new();
            let mut next = Vec::new();
            for (set, wit) in &cands {
                for &x in set {
                    if prefix.contains(&x) || lvl.orbit_min[x as usize] != m {
                        continue;
                    }
                    let mut img = set.clone();
                    let mut w = wit.clone();
                    let mut y = x;
                    while y != m {
                        let (pred, gi) = lvl.parent[y as usize];
                        let ginv = &lvl.inv_gens[gi as usize];
                        for z in img.iter_mut() {
                            *z = ginv.image(off + *z) - off;
                        }
                        if let Some(w) = w.as_mut() {
                            *w = w.then(ginv);
                        }
                        y = pred;
                    }
                    let mut key = img.clone();
                    key.sort_unstable();
                    if seen.insert(key) {
                        next.push((img, w));
                    }
                }
            }
            cands = next;
            prefix.push(m);
        }
        let result = TranspositionSet {
            pairs: prefix.iter().map(|&k| self.pairs[k as usize]).collect(),
        };
        let witness = cands.into_iter().next().and_then(|(_, w)| w).map(|w| {
            Permutation::from_images_unchecked(w.images()[..n].to_vec())
        });
        (result, witness)
    }

    /// Number of cached stabilizer levels.
    pub fn cached_levels(&self) -> usize {
        self.memo.len()
    }
}

/// Action of a point permutation on points followed by pairs.
fn induce(g: &Permutation, n: usize, pairs: &[(u32, u32)]) -> Permutation {
    let mut images: Vec<u32> = g.images().to_vec();
    images.reserve(pairs.len());
    for &(a, b) in pairs {
        let (x, y) = (g.image(a), g.image(b));
        images.push(n as u32 + pair_index(n, x.min(y), x.max(y)));
    }
    Permutation::from_images_unchecked(images)
}

/// Lexicographically smallest set in the orbit of `s` under `<gens>`.
pub fn smallest_image_set(s: &TranspositionSet, gens: &[Permutation], n: usize) -> TranspositionSet {
    MinImageSearch::new(gens, n).smallest_image(s, false).0
}

/// As [`smallest_image_set`], also returning `g` with `s^g` minimal.
pub fn smallest_image_set_with_witness(
    s: &TranspositionSet,
    gens: &[Permutation],
    n: usize,
) -> (TranspositionSet, Permutation) {
    let (img, w) = MinImageSearch::new(gens, n).smallest_image(s, true);
    (img, w.unwrap_or_else(|| Permutation::identity(n)))
}

thread_local! {
    static SEARCHERS: RefCell<HashMap<CanonicalShape, MinImageSearch>> = RefCell::new(HashMap::new());
}

const MEMO_LIMIT: usize = 1 << 16;

/// Conjugation putting `sigma_R` into canonical form: `r.conj(g)` is
/// [`canonical_sigma_r`] of the returned shape.
pub fn sigma_r_normalizer(r: &Permutation) -> (CanonicalShape, Permutation) {
    let n = r.degree();
    let fixed = r.fixed_points().len();
    let shape = CanonicalShape {
        c: (n - fixed) / 3,
        f: fixed,
    };
    let mut images = vec![u32::MAX; n];
    let mut next_block = 0u32;
    let mut next_fixed = 3 * shape.c as u32;
    for p in 0..n as u32 {
        if images[p as usize] != u32::MAX {
            continue;
        }
        if r.image(p) == p {
            images[p as usize] = next_fixed;
            next_fixed += 1;
        } else {
            let q = r.image(p);
            images[p as usize] = next_block;
            images[q as usize] = next_block + 1;
            images[r.image(q) as usize] = next_block + 2;
            next_block += 3;
        }
    }
    (shape, Permutation::from_images_unchecked(images))
}

fn check_pair(s: &Permutation, r: &Permutation) -> Result<(), CanonError> {
    if s.degree() != r.degree() {
        return Err(CanonError::DegreeMismatch(s.degree(), r.degree()));
    }
    if !s.then(s).is_identity() {
        return Err(CanonError::NotInvolution);
    }
    if !r.then(r).then(r).is_identity() {
        return Err(CanonError::NotOrderThree);
    }
    Ok(())
}

/// Canonical key of the conjugacy class of `(sigma_S, sigma_R)`.
pub fn canonical_pair(s: &Permutation, r: &Permutation) -> Result<CanonicalPairKey, CanonError> {
    canonical_pair_with_witness(s, r).map(|(k, _)| k)
}

/// Canonical key together with `g` such that conjugating the pair by `g`
/// gives `(key.sigma_s(), key.sigma_r())`.
pub fn canonical_pair_with_witness(
    s: &Permutation,
    r: &Permutation,
) -> Result<(CanonicalPairKey, Permutation), CanonError> {
    check_pair(s, r)?;
    let (shape, g) = sigma_r_normalizer(r);
    let t = TranspositionSet::from_involution(&s.conj(&g));
    let (s_min, h) = SEARCHERS.with(|cell| {
        let mut map = cell.borrow_mut();
        let searcher = map.entry(shape).or_insert_with(|| {
            MinImageSearch::new(&centralizer_generators(shape), shape.degree())
        });
        if searcher.cached_levels() > MEMO_LIMIT {
            searcher.memo.clear();
        }
        searcher.smallest_image(&t, true)
    });
    let h = h.unwrap_or_else(|| Permutation::identity(s.degree()));
    Ok((CanonicalPairKey { shape, s_min }, g.then(&h)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, Some(n)).unwrap()
    }

    fn ts(pairs: &[(u32, u32)]) -> TranspositionSet {
        TranspositionSet::new(pairs.iter().map(|&(a, b)| (a - 1, b - 1))).unwrap()
    }

    #[test]
    fn canonical_sigma_r_shapes() {
        assert_eq!(canonical_sigma_r(CanonicalShape { c: 1, f: 0 }), p("(1 2 3)", 3));
        assert!(canonical_sigma_r(CanonicalShape { c: 0, f: 4 }).is_identity());
        assert_eq!(
            canonical_sigma_r(CanonicalShape { c: 3, f: 0 }),
            p("(1 2 3)(4 5 6)(7 8 9)", 9)
        );
    }

    #[test]
    fn centralizer_orders() {
        for (c, f, order) in [(1, 0, 3u32), (2, 1, 18), (0, 3, 6), (3, 2, 324), (0, 1, 1)] {
            let shape = CanonicalShape { c, f };
            let gens = centralizer_generators(shape);
            let r = canonical_sigma_r(shape);
            for g in &gens {
                assert_eq!(r.conj(g), r);
            }
            let chain = Bsgs::new(&gens, shape.degree(), &[]);
            assert_eq!(chain.order(), BigUint::from(order), "shape {c},{f}");
        }
    }

    #[test]
    fn smallest_image_under_three_cycle() {
        let gens = [p("(1 2 3)", 3)];
        assert_eq!(smallest_image_set(&ts(&[(2, 3)]), &gens, 3), ts(&[(1, 2)]));
        assert_eq!(
            smallest_image_set(&TranspositionSet::empty(), &gens, 3),
            TranspositionSet::empty()
        );
    }

    #[test]
    fn pair_index_is_lexicographic() {
        let n = 7;
        let mut last = None;
        for (k, &(i, j)) in pair_table(n).iter().enumerate() {
            assert_eq!(pair_index(n, i, j) as usize, k);
            assert!(last < Some((i, j)));
            last = Some((i, j));
        }
    }

    #[test]
    fn conjugate_small_pairs_share_key() {
        let r = p("(1 2 3)", 3);
        let a = canonical_pair(&p("(1 2)", 3), &r).unwrap();
        let b = canonical_pair(&p("(2 3)", 3), &r).unwrap();
        assert_eq!(a, b);
        let id = Permutation::identity(1);
        let k = canonical_pair(&id, &id).unwrap();
        assert_eq!(k.shape, CanonicalShape { c: 0, f: 1 });
        assert!(k.s_min.is_empty());
    }

    #[test]
    fn rejects_invalid_pairs() {
        let r = p("(1 2 3)", 3);
        assert_eq!(
            canonical_pair(&p("(1 2 3)", 3), &r),
            Err(CanonError::NotInvolution)
        );
        assert_eq!(
            canonical_pair(&p("(1 2)", 4), &p("(1 2 3 4)", 4)),
            Err(CanonError::NotOrderThree)
        );
        assert_eq!(
            canonical_pair(&p("(1 2)", 4), &r),
            Err(CanonError::DegreeMismatch(4, 3))
        );
    }

    #[test]
    fn witness_maps_pair_to_key() {
        let s = p("(1)(2 5)(3 7)(4 8)(6 9)", 9);
        let r = p("(1 2 6)(3 8 5)(4 9 7)", 9);
        let (key, g) = canonical_pair_with_witness(&s, &r).unwrap();
        assert_eq!(s.conj(&g), key.sigma_s());
        assert_eq!(r.conj(&g), key.sigma_r());
    }
}
