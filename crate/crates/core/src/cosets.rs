//! Coset representatives, matrix generators and cusp normalizers of the
//! subgroup fixing the first point.

use std::collections::VecDeque;

use crate::matrix::MatrixPSL2;
use crate::pairs::PermutationPair;
use crate::perm::Permutation;

/// Right coset representatives: `reps[i]` sends the first point to `i`.
pub fn coset_representatives(pair: &PermutationPair) -> Vec<MatrixPSL2> {
    let n = pair.degree();
    let mut reps: Vec<Option<MatrixPSL2>> = vec![None; n];
    reps[0] = Some(MatrixPSL2::identity());
    let gens = [
        (MatrixPSL2::s(), &pair.sigma_s),
        (MatrixPSL2::r(), &pair.sigma_r),
    ];
    let mut queue = VecDeque::from([0u32]);
    while let Some(p) = queue.pop_front() {
        let m = reps[p as usize].unwrap();
        for (x, sigma) in &gens {
            let q = sigma.image(p);
            if reps[q as usize].is_none() {
                reps[q as usize] = Some(m.mul(x));
                queue.push_back(q);
            }
        }
    }
    reps.into_iter()
        .map(|r| r.expect("pair is transitive"))
        .collect()
}

/// Matrix generators and coset representatives.
#[derive(Debug, Clone)]
pub struct MatrixGenerators {
    pub generators: Vec<MatrixPSL2>,
    pub coset_reps: Vec<MatrixPSL2>,
}

/// Schreier generators `rep[i] X rep[i X]^-1` for `X` in `{S, R}`, with
/// the identity and repeats dropped.
pub fn matrix_generators(pair: &PermutationPair) -> MatrixGenerators {
    let reps = coset_representatives(pair);
    let mut generators = Vec::new();
    for (x, sigma) in [
        (MatrixPSL2::s(), &pair.sigma_s),
        (MatrixPSL2::r(), &pair.sigma_r),
    ] {
        for (i, rep) in reps.iter().enumerate() {
            let j = sigma.image(i as u32) as usize;
            let g = rep.mul(&x).mul(&reps[j].inverse());
            if !g.is_identity() && !generators.contains(&g) {
                generators.push(g);
            }
        }
    }
    MatrixGenerators {
        generators,
        coset_reps: reps,
    }
}

/// A cusp of the subgroup with its normalizer `A` (so the cusp is `A(inf)`)
/// and width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspNormalizer {
    pub index: usize,
    pub normalizer: MatrixPSL2,
    pub width: u32,
    /// 0-based point of the `sigma_T` cycle whose coset gives `normalizer`.
    pub point: u32,
}

/// One entry per cycle of `sigma_T`, ordered by smallest point; the first
/// is the cusp at infinity with the identity normalizer.
pub fn cusp_normalizers(pair: &PermutationPair) -> Vec<CuspNormalizer> {
    let reps = coset_representatives(pair);
    pair.sigma_t()
        .cycles()
        .into_iter()
        .enumerate()
        .map(|(index, cycle)| CuspNormalizer {
            index,
            normalizer: reps[cycle[0] as usize],
            width: cycle.len() as u32,
            point: cycle[0],
        })
        .collect()
}

/// Height of the best base point for `gamma`: the largest `1/(c_p h_p)`
/// over cusps, where `c_p` is the lower-left entry of `A_p^-1 gamma A_p`.
/// `None` when `gamma` is parabolic at some cusp.
pub fn base_point_height(gamma: &MatrixPSL2, cusps: &[CuspNormalizer]) -> Option<f64> {
    let mut best: Option<i64> = None;
    for cp in cusps {
        let g = cp.normalizer.inverse().mul(gamma).mul(&cp.normalizer);
        if g.c == 0 {
            return None;
        }
        let v = g.c * cp.width as i64;
        best = Some(best.map_or(v, |b| b.min(v)));
    }
    best.map(|v| 1.0 / v as f64)
}

fn quality(pair: &PermutationPair) -> f64 {
    let gens = matrix_generators(pair).generators;
    let cusps = cusp_normalizers(pair);
    gens.iter()
        .filter_map(|g| base_point_height(g, &cusps))
        .fold(f64::INFINITY, f64::min)
}

/// Among the pair and its conjugates by the transpositions `(1 j)`, the one
/// whose worst generator has the highest base point. Returns the pair and
/// the 1-based `j` used (`None` for the pair itself).
pub fn best_height_conjugate(pair: &PermutationPair) -> (PermutationPair, Option<u32>) {
    let n = pair.degree();
    let mut best = (quality(pair), pair.clone(), None);
    for j in 1..n as u32 {
        let c = pair.conjugate_by(&Permutation::transposition(n, 0, j));
        let q = quality(&c);
        if q > best.0 {
            best = (q, c, Some(j + 1));
        }
    }
    (best.1, best.2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(s: &str, r: &str, n: usize) -> PermutationPair {
        PermutationPair::new(
            Permutation::parse(s, Some(n)).unwrap(),
            Permutation::parse(r, Some(n)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn full_group_generators() {
        let id = Permutation::identity(1);
        let p = PermutationPair::new(id.clone(), id).unwrap();
        let g = matrix_generators(&p).generators;
        assert_eq!(g, vec![MatrixPSL2::s(), MatrixPSL2::r()]);
        let (c, j) = best_height_conjugate(&p);
        assert_eq!(c, p);
        assert_eq!(j, None);
    }

    #[test]
    fn generators_fix_first_point() {
        let p = pair("(1)(2 5)(3 7)(4 8)(6 9)", "(1 2 6)(3 8 5)(4 9 7)", 9);
        let t = p.sigma_t();
        let mg = matrix_generators(&p);
        for g in &mg.generators {
            assert_eq!(g.to_permutation(&p.sigma_s, &t).image(0), 0, "{g}");
        }
        for (i, r) in mg.coset_reps.iter().enumerate() {
            assert_eq!(r.to_permutation(&p.sigma_s, &t).image(0), i as u32);
        }
    }

    #[test]
    fn index_two() {
        let p = pair("(1 2)", "()", 2);
        let t = p.sigma_t();
        for g in matrix_generators(&p).generators {
            assert_eq!(g.to_permutation(&p.sigma_s, &t).image(0), 0);
        }
        let cusps = cusp_normalizers(&p);
        assert_eq!(cusps.len(), 1);
        assert_eq!(cusps[0].width, 2);
        assert!(cusps[0].normalizer.is_identity());
    }

    #[test]
    fn width_power_is_parabolic_after_conjugation() {
        let p = pair(
            "(1 15)(2 12)(3 7)(4 9)(5 13)(6 10)(8 14)",
            "(1 11 12)(2 13 6)(3 8 15)(4 10 7)(5 14 9)",
            15,
        );
        let t = p.sigma_t();
        for c in cusp_normalizers(&p) {
            let a = c.normalizer;
            let gamma = a.mul(&MatrixPSL2::t().pow(c.width as i64)).mul(&a.inverse());
            assert_eq!(gamma.to_permutation(&p.sigma_s, &t).image(0), 0);
            let back = a.inverse().mul(&gamma).mul(&a);
            assert_eq!(back.c, 0);
            assert_eq!(back, MatrixPSL2::t().pow(c.width as i64));
        }
    }
}
