//! Brute-force reference computations, independent of the generator and of
//! the minimal-image code. Used by `audit` and by the test suites.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rayon::prelude::*;

use crate::matrix::MatrixPSL2;
use crate::pairs::{coset_form, PermutationPair};
use crate::perm::{is_transitive, Permutation};

/// All permutations of degree `n` with `x^2 = 1`.
pub fn involutions(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut images: Vec<u32> = (0..n as u32).collect();
    let mut done = vec![false; n];
    fn rec(images: &mut Vec<u32>, done: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        let Some(p) = done.iter().position(|&d| !d) else {
            out.push(Permutation::from_images(images.clone()).unwrap());
            return;
        };
        done[p] = true;
        rec(images, done, out);
        for q in p + 1..images.len() {
            if done[q] {
                continue;
            }
            done[q] = true;
            images[p] = q as u32;
            images[q] = p as u32;
            rec(images, done, out);
            images[p] = p as u32;
            images[q] = q as u32;
            done[q] = false;
        }
        done[p] = false;
    }
    rec(&mut images, &mut done, &mut out);
    out
}

/// All permutations of degree `n` with `x^3 = 1`.
pub fn order_three_elements(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut images: Vec<u32> = (0..n as u32).collect();
    let mut done = vec![false; n];
    fn rec(images: &mut Vec<u32>, done: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        let Some(p) = done.iter().position(|&d| !d) else {
            out.push(Permutation::from_images(images.clone()).unwrap());
            return;
        };
        let n = images.len();
        done[p] = true;
        rec(images, done, out);
        for q in p + 1..n {
            for r in p + 1..n {
                if q == r || done[q] || done[r] {
                    continue;
                }
                done[q] = true;
                done[r] = true;
                images[p] = q as u32;
                images[q] = r as u32;
                images[r] = p as u32;
                rec(images, done, out);
                images[p] = p as u32;
                images[q] = q as u32;
                images[r] = r as u32;
                done[q] = false;
                done[r] = false;
            }
        }
        done[p] = false;
    }
    rec(&mut images, &mut done, &mut out);
    out
}

/// One representative per conjugacy class of transitive pairs of degree
/// `mu`, keyed by [`coset_form`]. Enumerates every pair in `S_mu`.
pub fn brute_force_classes(mu: usize) -> BTreeMap<Vec<u32>, PermutationPair> {
    let invs = involutions(mu);
    let threes = order_three_elements(mu);
    threes
        .par_iter()
        .map(|r| {
            let mut local = BTreeMap::new();
            for s in &invs {
                if !is_transitive(&[s.clone(), r.clone()], mu) {
                    continue;
                }
                let pair = PermutationPair {
                    sigma_s: s.clone(),
                    sigma_r: r.clone(),
                };
                local.entry(coset_form(&pair)).or_insert(pair);
            }
            local
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                a.entry(k).or_insert(v);
            }
            a
        })
}

fn reduce_mod(m: &MatrixPSL2, n: i64) -> [i64; 4] {
    let e = [m.a, m.b, m.c, m.d].map(|x| x.rem_euclid(n));
    let neg = e.map(|x| (n - x) % n);
    e.min(neg)
}

/// Decides congruence from the definition: the action on cosets factors
/// through `PSL_2(Z/N)` for `N` the generalized level. Explores all of
/// `PSL_2(Z/N)` and is only meant for small levels.
pub fn congruence_by_definition(pair: &PermutationPair) -> bool {
    let n = pair.sigma_t().order() as i64;
    if n == 1 {
        return pair.degree() == 1;
    }
    let gens = [
        (MatrixPSL2::s(), &pair.sigma_s),
        (MatrixPSL2::r(), &pair.sigma_r),
    ];
    let mut seen: HashMap<[i64; 4], Permutation> = HashMap::new();
    let id = MatrixPSL2::identity();
    let start = (reduce_mod(&id, n), Permutation::identity(pair.degree()));
    seen.insert(start.0, start.1.clone());
    let mut queue = VecDeque::from([start]);
    while let Some((m, p)) = queue.pop_front() {
        let cur = MatrixPSL2::from_entries_unchecked(m);
        for (g, gp) in &gens {
            let next = reduce_mod(&cur.mul(g), n);
            let np = p.then(gp);
            match seen.get(&next) {
                Some(q) if *q != np => return false,
                Some(_) => {}
                None => {
                    seen.insert(next, np.clone());
                    queue.push_back((next, np));
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_counts() {
        // involutions in S_n: 1, 2, 4, 10, 26, 76
        let inv: Vec<usize> = (1..=6).map(|n| involutions(n).len()).collect();
        assert_eq!(inv, vec![1, 2, 4, 10, 26, 76]);
        // solutions of x^3 = 1 in S_n: 1, 1, 3, 9, 21, 81
        let thr: Vec<usize> = (1..=6).map(|n| order_three_elements(n).len()).collect();
        assert_eq!(thr, vec![1, 1, 3, 9, 21, 81]);
    }

    #[test]
    fn small_class_counts() {
        assert_eq!(brute_force_classes(1).len(), 1);
        assert_eq!(brute_force_classes(2).len(), 1);
        assert_eq!(brute_force_classes(3).len(), 2);
    }

    #[test]
    fn coset_form_is_conjugation_invariant() {
        let s = Permutation::parse("(2 5)(3 7)(4 8)(6 9)", Some(9)).unwrap();
        let r = Permutation::parse("(1 2 6)(3 8 5)(4 9 7)", Some(9)).unwrap();
        let p = PermutationPair::new(s, r).unwrap();
        let g = Permutation::parse("(1 4 7 2)(3 9)", Some(9)).unwrap();
        assert_eq!(coset_form(&p), coset_form(&p.conjugate_by(&g)));
    }
}
