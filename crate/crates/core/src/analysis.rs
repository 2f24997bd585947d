//! Invariants of the subgroup attached to a pair: signature, cusps,
//! congruence and the monodromy group.

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bsgs::Bsgs;
use crate::pairs::PermutationPair;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("genus formula gives a non-integer for {0:?}")]
    NonIntegralGenus(PermutationPair),
    #[error("genus formula gives a negative value for {0:?}")]
    NegativeGenus(PermutationPair),
    #[error("pair is not transitive: {0:?}")]
    NotTransitive(PermutationPair),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub mu: u32,
    pub genus: u32,
    pub n_cusps: u32,
    pub n_e2: u32,
    pub n_e3: u32,
}

impl Signature {
    pub fn as_tuple(&self) -> (u32, u32, u32, u32, u32) {
        (self.mu, self.genus, self.n_cusps, self.n_e2, self.n_e3)
    }
}

pub fn sigma_t_of(pair: &PermutationPair) -> Permutation {
    pair.sigma_t()
}

/// `12 (g - 1) = mu - 3 e2 - 4 e3 - 6 c`.
pub fn signature_of(pair: &PermutationPair) -> Result<Signature, AnalysisError> {
    let mu = pair.degree() as i64;
    let e2 = pair.sigma_s.fixed_points().len() as i64;
    let e3 = pair.sigma_r.fixed_points().len() as i64;
    let c = pair.sigma_t().cycles().len() as i64;
    let num = mu - 3 * e2 - 4 * e3 - 6 * c;
    if num.rem_euclid(12) != 0 {
        return Err(AnalysisError::NonIntegralGenus(pair.clone()));
    }
    let genus = 1 + num / 12;
    if genus < 0 {
        return Err(AnalysisError::NegativeGenus(pair.clone()));
    }
    Ok(Signature {
        mu: mu as u32,
        genus: genus as u32,
        n_cusps: c as u32,
        n_e2: e2 as u32,
        n_e3: e3 as u32,
    })
}

/// A cycle of `sigma_T` (0-based points, starting at its smallest point).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cusp {
    pub cycle: Vec<u32>,
    pub width: u32,
}

/// Cusps ordered by smallest point, so the cusp at infinity (the cycle
/// through the first point) comes first.
pub fn cusp_data(pair: &PermutationPair) -> Vec<Cusp> {
    pair.sigma_t()
        .cycles()
        .into_iter()
        .map(|cycle| Cusp {
            width: cycle.len() as u32,
            cycle,
        })
        .collect()
}

/// Cusp widths in decreasing order.
pub fn cusp_widths(pair: &PermutationPair) -> Vec<u32> {
    let mut w: Vec<u32> = cusp_data(pair).iter().map(|c| c.width).collect();
    w.sort_unstable_by(|a, b| b.cmp(a));
    w
}

pub fn generalized_level(widths: &[u32]) -> u64 {
    widths.iter().fold(1u64, |acc, &w| acc.lcm(&(w as u64)))
}

pub fn monodromy_group(pair: &PermutationPair) -> Bsgs {
    Bsgs::new(
        &[pair.sigma_s.clone(), pair.sigma_r.clone()],
        pair.degree(),
        &[],
    )
}

pub fn monodromy_order(pair: &PermutationPair) -> BigUint {
    monodromy_group(pair).order()
}

fn inv_mod(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let e = a.extended_gcd(&m);
    assert_eq!(e.gcd, 1, "{a} is not invertible mod {m}");
    e.x.rem_euclid(m)
}

/// Product of powers, leftmost factor applied first.
fn word(parts: &[(&Permutation, i64)]) -> Permutation {
    let n = parts[0].0.degree();
    parts
        .iter()
        .fold(Permutation::identity(n), |acc, (p, e)| acc.then(&p.pow(*e)))
}

fn two_power_relations(l: &Permutation, r: &Permutation, e: i64) -> bool {
    let s = word(&[(l, 20), (r, inv_mod(5, e)), (l, -4), (r, -1)]);
    let lrl = word(&[(l, 1), (r, -1), (l, 1)]);
    word(&[(&lrl, -1), (&s, 1), (&lrl, 1), (&s, 1)]).is_identity()
        && word(&[(&s, -1), (r, 1), (&s, 1), (r, -25)]).is_identity()
        && word(&[
            (&lrl, 2),
            (&word(&[(&s, 1), (r, 5), (&lrl, 1)]), -3),
        ])
        .is_identity()
}

fn odd_relation(l: &Permutation, r: &Permutation, m: i64) -> bool {
    word(&[(&word(&[(r, 2), (l, -inv_mod(2, m))]), 3)]).is_identity()
}

/// Hsu's criterion on the action of `L = T` and `R = [[1,0],[1,1]]`.
pub fn is_congruence(pair: &PermutationPair) -> bool {
    if pair.degree() == 1 {
        return true;
    }
    let l = pair.sigma_t();
    let r = word(&[(&pair.sigma_s, 1), (&l, -1), (&pair.sigma_s, 1)]);
    let n = l.order() as i64;
    let e = 1i64 << n.trailing_zeros();
    let m = n / e;
    if e == 1 {
        return odd_relation(&l, &r, m);
    }
    if m == 1 {
        return two_power_relations(&l, &r, e);
    }
    let c = e * inv_mod(e, m);
    let d = m * inv_mod(m, e);
    let (a, b) = (l.pow(c), r.pow(c));
    let (l2, r2) = (l.pow(d), r.pow(d));
    let aba = word(&[(&a, 1), (&b, -1), (&a, 1)]);
    word(&[(&a, -1), (&r2, -1), (&a, 1), (&r2, 1)]).is_identity()
        && aba.pow(4).is_identity()
        && word(&[(&aba, 2), (&a, -1), (&b, 1), (&a, -1), (&b, 1), (&a, -1), (&b, 1)])
            .is_identity()
        && word(&[
            (&aba, 2),
            (&word(&[(&b, 2), (&a, -inv_mod(2, m))]), -3),
        ])
        .is_identity()
        && two_power_relations(&l2, &r2, e)
}

/// Everything derived from one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupRecord {
    pub pair: PermutationPair,
    pub sigma_t: Permutation,
    pub signature: Signature,
    pub cusp_widths: Vec<u32>,
    pub generalized_level: u64,
    pub is_congruence: bool,
    pub monodromy_order: BigUint,
    pub passport_id: Option<u32>,
    pub passport_size: Option<u32>,
    pub label: Option<String>,
}

pub fn analyze(pair: &PermutationPair) -> Result<SubgroupRecord, AnalysisError> {
    if !pair.is_transitive() {
        return Err(AnalysisError::NotTransitive(pair.clone()));
    }
    let signature = signature_of(pair)?;
    let cusp_widths = cusp_widths(pair);
    Ok(SubgroupRecord {
        pair: pair.clone(),
        sigma_t: pair.sigma_t(),
        signature,
        generalized_level: generalized_level(&cusp_widths),
        cusp_widths,
        is_congruence: is_congruence(pair),
        monodromy_order: monodromy_order(pair),
        passport_id: None,
        passport_size: None,
        label: None,
    })
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

    fn example_nine() -> PermutationPair {
        pair("(1)(2 5)(3 7)(4 8)(6 9)", "(1 2 6)(3 8 5)(4 9 7)", 9)
    }

    fn example_fifteen() -> PermutationPair {
        pair(
            "(1 15)(2 12)(3 7)(4 9)(5 13)(6 10)(8 14)",
            "(1 11 12)(2 13 6)(3 8 15)(4 10 7)(5 14 9)",
            15,
        )
    }

    #[test]
    fn worked_examples() {
        let p9 = example_nine();
        assert_eq!(signature_of(&p9).unwrap().as_tuple(), (9, 1, 1, 1, 0));
        assert_eq!(cusp_widths(&p9), vec![9]);
        assert_eq!(monodromy_order(&p9), BigUint::from(504u32));
        assert!(!is_congruence(&p9));

        let p15 = example_fifteen();
        assert_eq!(
            p15.sigma_t().to_string(),
            "(1 3 4 5 6 7 8 9 10 2)(11 12 13 14 15)"
        );
        assert_eq!(signature_of(&p15).unwrap().as_tuple(), (15, 1, 2, 1, 0));
        assert_eq!(cusp_widths(&p15), vec![10, 5]);
        assert_eq!(generalized_level(&cusp_widths(&p15)), 10);
        assert_eq!(monodromy_order(&p15), BigUint::from(9720u32));
    }

    #[test]
    fn full_modular_group() {
        let id = Permutation::identity(1);
        let p = PermutationPair::new(id.clone(), id).unwrap();
        assert_eq!(signature_of(&p).unwrap().as_tuple(), (1, 0, 1, 1, 1));
        assert_eq!(cusp_widths(&p), vec![1]);
        assert!(is_congruence(&p));
        assert!(p.sigma_t().is_identity());
    }

    #[test]
    fn cusp_at_infinity_first() {
        let c = cusp_data(&example_fifteen());
        assert_eq!(c[0].width, 10);
        assert_eq!(c[0].cycle[0], 0);
    }

    #[test]
    fn monodromy_of_three_cycle() {
        let g = Bsgs::new(&[Permutation::parse("(1 2 3)", Some(3)).unwrap()], 3, &[]);
        assert_eq!(g.order(), BigUint::from(3u32));
    }
}
