//! Conjugacy of permutation groups inside `S_n`, and the grouping of
//! subgroup records into passports.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::analysis::{Signature, SubgroupRecord};
use crate::bsgs::Bsgs;
use crate::canonical::CanonicalPairKey;
use crate::pairs::{coset_form, PermutationPair};
use crate::perm::{group_orbits, CycleType, Permutation};

const ELEMENT_SCAN_LIMIT: u64 = 100_000;
/// Largest group whose elements are listed when looking for generator
/// images.
const GENERATOR_SEARCH_LIMIT: u64 = 500_000;

/// Colouring of ordered triples of points by their orbit under a group.
struct TripleColoring {
    n: usize,
    color: Vec<u32>,
    class_size: Vec<u32>,
}

impl TripleColoring {
    fn new(gens: &[Permutation], n: usize) -> Self {
        let total = n * n * n;
        let mut parent: Vec<u32> = (0..total as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for g in gens {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let t = ((a * n + b) * n + c) as u32;
                        let (x, y, z) = (
                            g.image(a as u32) as usize,
                            g.image(b as u32) as usize,
                            g.image(c as u32) as usize,
                        );
                        let u = ((x * n + y) * n + z) as u32;
                        let (ra, rb) = (find(&mut parent, t), find(&mut parent, u));
                        if ra != rb {
                            parent[ra.max(rb) as usize] = ra.min(rb);
                        }
                    }
                }
            }
        }
        let mut ids: HashMap<u32, u32> = HashMap::new();
        let mut color = vec![0; total];
        let mut class_size = Vec::new();
        for t in 0..total as u32 {
            let root = find(&mut parent, t);
            let next = ids.len() as u32;
            let id = *ids.entry(root).or_insert(next);
            if id as usize == class_size.len() {
                class_size.push(0);
            }
            class_size[id as usize] += 1;
            color[t as usize] = id;
        }
        TripleColoring {
            n,
            color,
            class_size,
        }
    }

    fn get(&self, a: u32, b: u32, c: u32) -> u32 {
        let n = self.n;
        self.color[(a as usize * n + b as usize) * n + c as usize]
    }

    fn sizes(&self) -> Vec<u32> {
        let mut s = self.class_size.clone();
        s.sort_unstable();
        s
    }
}

/// Conjugacy invariants of a permutation group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupInvariants {
    pub order: BigUint,
    pub orbit_sizes: Vec<usize>,
    pub triple_orbit_sizes: Vec<u32>,
    /// Number of elements of each cycle type, for small groups only.
    pub element_types: Option<Vec<(CycleType, u64)>>,
}

pub fn group_invariants(gens: &[Permutation], n: usize) -> GroupInvariants {
    let chain = Bsgs::new(gens, n, &[]);
    let mut orbit_sizes: Vec<usize> = group_orbits(gens, n).iter().map(Vec::len).collect();
    orbit_sizes.sort_unstable();
    let order = chain.order();
    let element_types = order
        .to_u64()
        .filter(|&o| o <= ELEMENT_SCAN_LIMIT)
        .map(|_| {
            let mut counts: BTreeMap<CycleType, u64> = BTreeMap::new();
            for g in chain.elements() {
                *counts.entry(g.cycle_type()).or_insert(0) += 1;
            }
            counts.into_iter().collect()
        });
    GroupInvariants {
        order,
        orbit_sizes,
        triple_orbit_sizes: TripleColoring::new(gens, n).sizes(),
        element_types,
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

struct Search<'a> {
    n: usize,
    points: Vec<u32>,
    col1: TripleColoring,
    col2: TripleColoring,
    target: &'a Bsgs,
    gens1: &'a [Permutation],
    image: Vec<u32>,
    used: Vec<bool>,
    map12: HashMap<u32, u32>,
    map21: HashMap<u32, u32>,
}

impl Search<'_> {
    /// Extends the colour bijection with the triples through `points[k]`.
    /// Returns the colours newly bound, or `None` on a clash.
    fn bind(&mut self, k: usize) -> Option<Vec<u32>> {
        let mut added = Vec::new();
        let pk = self.points[k];
        let xk = self.image[pk as usize];
        let mut ok = true;
        'outer: for i in 0..=k {
            for j in 0..=k {
                let (pi, pj) = (self.points[i], self.points[j]);
                let (xi, xj) = (self.image[pi as usize], self.image[pj as usize]);
                for (a, b) in [
                    (self.col1.get(pi, pj, pk), self.col2.get(xi, xj, xk)),
                    (self.col1.get(pi, pk, pj), self.col2.get(xi, xk, xj)),
                    (self.col1.get(pk, pi, pj), self.col2.get(xk, xi, xj)),
                ] {
                    match (self.map12.get(&a), self.map21.get(&b)) {
                        (Some(&y), _) if y != b => ok = false,
                        (None, Some(_)) => ok = false,
                        (None, None) => {
                            if self.col1.class_size[a as usize] != self.col2.class_size[b as usize]
                            {
                                ok = false;
                            } else {
                                self.map12.insert(a, b);
                                self.map21.insert(b, a);
                                added.push(a);
                            }
                        }
                        _ => {}
                    }
                    if !ok {
                        break 'outer;
                    }
                }
            }
        }
        if ok {
            Some(added)
        } else {
            self.unbind(&added);
            None
        }
    }

    fn unbind(&mut self, added: &[u32]) {
        for a in added {
            let b = self.map12.remove(a).unwrap();
            self.map21.remove(&b);
        }
    }

    fn run(&mut self, k: usize, stab: &[Permutation]) -> Option<Permutation> {
        if k == self.n {
            let g = Permutation::from_images(self.image.clone()).expect("bijection");
            return self
                .gens1
                .iter()
                .all(|x| self.target.contains(&x.conj(&g)))
                .then_some(g);
        }
        let pk = self.points[k];
        let mut seen = vec![false; self.n];
        for x in 0..self.n as u32 {
            if self.used[x as usize] || seen[x as usize] {
                continue;
            }
            let orbit = crate::perm::orbit_of(x, stab, self.n);
            for &y in &orbit {
                seen[y as usize] = true;
            }
            self.image[pk as usize] = x;
            self.used[x as usize] = true;
            if let Some(added) = self.bind(k) {
                let next = if stab.is_empty() {
                    Vec::new()
                } else {
                    Bsgs::new(stab, self.n, &[x]).stabilizer_generators(1)
                };
                let found = self.run(k + 1, &next);
                self.unbind(&added);
                if found.is_some() {
                    return found;
                }
            }
            self.used[x as usize] = false;
            self.image[pk as usize] = u32::MAX;
        }
        None
    }
}

/// Some `g` with `<gens1>^g = <gens2>`, if one exists.
pub fn find_conjugator(
    gens1: &[Permutation],
    gens2: &[Permutation],
    n: usize,
) -> Option<Permutation> {
    let g1 = Bsgs::new(gens1, n, &[]);
    let g2 = Bsgs::new(gens2, n, &[]);
    if g1.order() != g2.order() {
        return None;
    }
    let col1 = TripleColoring::new(gens1, n);
    let col2 = TripleColoring::new(gens2, n);
    if col1.sizes() != col2.sizes() {
        return None;
    }
    let mut points = g1.base();
    for p in 0..n as u32 {
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let mut search = Search {
        n,
        points,
        col1,
        col2,
        target: &g2,
        gens1,
        image: vec![u32::MAX; n],
        used: vec![false; n],
        map12: HashMap::new(),
        map21: HashMap::new(),
    };
    let stab: Vec<Permutation> = g2.strong_generators().to_vec();
    search.run(0, &stab)
}

fn is_transitive_group(gens: &[Permutation], n: usize) -> bool {
    group_orbits(gens, n).len() == 1
}

/// Whether the monodromy groups of two pairs are conjugate in `S_n`.
pub fn groups_conjugate_in_smu(p1: &PermutationPair, p2: &PermutationPair) -> bool {
    let n = p1.degree();
    if n != p2.degree() {
        return false;
    }
    let g1 = [p1.sigma_s.clone(), p1.sigma_r.clone()];
    let g2 = [p2.sigma_s.clone(), p2.sigma_r.clone()];
    let o1 = Bsgs::new(&g1, n, &[]).order();
    if o1 != Bsgs::new(&g2, n, &[]).order() {
        return false;
    }
    let full = factorial(n);
    if is_transitive_group(&g1, n)
        && is_transitive_group(&g2, n)
        && (o1 == full || o1.clone() * BigUint::from(2u32) == full)
    {
        return true;
    }
    if is_transitive_group(&g1, n) && o1.to_u64().is_some_and(|o| o <= GENERATOR_SEARCH_LIMIT) {
        return generator_images_exist(p1, &g2);
    }
    find_conjugator(&g1, &g2, n).is_some()
}

/// For transitive `<s1, r1>` of the same order as `G2`: the groups are
/// conjugate iff some `(x, y)` in `G2` is simultaneously conjugate to
/// `(s1, r1)`. `x` only needs to run over `G2`-classes.
fn generator_images_exist(p1: &PermutationPair, g2: &[Permutation]) -> bool {
    let n = p1.degree();
    let chain = Bsgs::new(g2, n, &[]);
    let elements = chain.elements();
    let (ts, tr, tt) = (
        p1.sigma_s.cycle_type(),
        p1.sigma_r.cycle_type(),
        p1.sigma_t().cycle_type(),
    );
    let xs: Vec<&Permutation> = elements.iter().filter(|e| e.cycle_type() == ts).collect();
    let ys: Vec<&Permutation> = elements.iter().filter(|e| e.cycle_type() == tr).collect();
    let index: HashMap<&Permutation, usize> = xs.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    let mut rep = vec![false; xs.len()];
    let mut seen = vec![false; xs.len()];
    for i in 0..xs.len() {
        if seen[i] {
            continue;
        }
        rep[i] = true;
        seen[i] = true;
        let mut stack = vec![i];
        while let Some(j) = stack.pop() {
            for h in g2 {
                let k = index[&xs[j].conj(h)];
                if !seen[k] {
                    seen[k] = true;
                    stack.push(k);
                }
            }
        }
    }
    let target = coset_form(p1);
    xs.iter()
        .zip(&rep)
        .filter(|(_, &r)| r)
        .any(|(x, _)| {
            ys.iter().any(|y| {
                if x.then(y).cycle_type() != tt {
                    return false;
                }
                let q = PermutationPair {
                    sigma_s: (*x).clone(),
                    sigma_r: (*y).clone(),
                };
                q.is_transitive() && coset_form(&q) == target
            })
        })
}

/// Records with equal signature and cusp widths whose monodromy groups are
/// conjugate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Passport {
    pub signature: Signature,
    pub id: u32,
    /// Indices into the input slice, ordered by canonical key.
    pub members: Vec<usize>,
}

/// Partitions records into passports, numbered within each signature by
/// the smallest canonical key of their members, and fills in
/// `passport_id` and `passport_size`.
pub fn group_into_passports(records: &mut [SubgroupRecord]) -> Vec<Passport> {
    let keys: Vec<CanonicalPairKey> = records
        .par_iter()
        .map(|r| r.pair.canonical_key())
        .collect();
    let mut by_sig: BTreeMap<Signature, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        by_sig.entry(r.signature).or_default().push(i);
    }
    let groups: Vec<(Signature, Vec<usize>)> = by_sig.into_iter().collect();
    let recs: &[SubgroupRecord] = records;
    let invariants: Vec<GroupInvariants> = recs
        .par_iter()
        .map(|r| {
            group_invariants(
                &[r.pair.sigma_s.clone(), r.pair.sigma_r.clone()],
                r.pair.degree(),
            )
        })
        .collect();
    let per_sig: Vec<Vec<Passport>> = groups
        .into_par_iter()
        .map(|(signature, mut idx)| {
            idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
            let mut passports: Vec<Passport> = Vec::new();
            for i in idx {
                let home = passports.iter_mut().find(|p| {
                    let rep = p.members[0];
                    recs[rep].cusp_widths == recs[i].cusp_widths
                        && invariants[rep] == invariants[i]
                        && groups_conjugate_in_smu(&recs[rep].pair, &recs[i].pair)
                });
                match home {
                    Some(p) => p.members.push(i),
                    None => passports.push(Passport {
                        signature,
                        id: passports.len() as u32,
                        members: vec![i],
                    }),
                }
            }
            passports
        })
        .collect();
    let passports: Vec<Passport> = per_sig.into_iter().flatten().collect();
    for p in &passports {
        for &m in &p.members {
            records[m].passport_id = Some(p.id);
            records[m].passport_size = Some(p.members.len() as u32);
        }
    }
    passports
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, Some(n)).unwrap()
    }

    #[test]
    fn conjugate_cyclic_groups() {
        let a = [p("(1 2 3)(4 5 6)", 6)];
        let b = [p("(1 4 2)(3 6 5)", 6)];
        let g = find_conjugator(&a, &b, 6).unwrap();
        assert!(Bsgs::new(&b, 6, &[]).contains(&a[0].conj(&g)));
        let c = [p("(1 2 3)", 6)];
        assert!(find_conjugator(&a, &c, 6).is_none());
    }

    #[test]
    fn equal_order_but_not_conjugate() {
        // <(1 2)(3 4), (1 3)(2 4)> is regular on 4 points; <(1 2), (3 4)> is not
        let v = [p("(1 2)(3 4)", 4), p("(1 3)(2 4)", 4)];
        let w = [p("(1 2)", 4), p("(3 4)", 4)];
        assert!(find_conjugator(&v, &w, 4).is_none());
    }

    #[test]
    fn examples_with_different_orders() {
        let p9 = PermutationPair::new(
            p("(2 5)(3 7)(4 8)(6 9)", 9),
            p("(1 2 6)(3 8 5)(4 9 7)", 9),
        )
        .unwrap();
        assert!(groups_conjugate_in_smu(&p9, &p9));
        let g = p("(1 5 9 2)(3 4)", 9);
        assert!(groups_conjugate_in_smu(&p9, &p9.conjugate_by(&g)));
    }
}
