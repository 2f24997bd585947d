//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --release -p noncong-cli --test acceptance`.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Float, Rational};

use noncong_core::analysis::{
    analyze, cusp_widths, generalized_level, is_congruence, monodromy_order, signature_of,
    SubgroupRecord,
};
use noncong_core::bsgs::Bsgs;
use noncong_core::canonical::{canonical_pair, smallest_image_set, TranspositionSet};
use noncong_core::conjugacy::group_into_passports;
use noncong_core::cosets::matrix_generators;
use noncong_core::matrix::MatrixPSL2;
use noncong_core::oracle::brute_force_classes;
use noncong_core::pairs::{enumerate_classes, multiplicity_audit, PermutationPair};
use noncong_core::Permutation;
use noncong_periods::complex::{bits_for_digits, ten_pow_neg};
use noncong_periods::expansion::{period_of, period_via};
use noncong_periods::lattice::mobius;
use noncong_periods::level11::{gamma0_11_expansions, gamma0_11_pair};
use noncong_periods::modular::j_invariant;
use noncong_periods::pipeline;
use noncong_periods::recognize::{j_from_weierstrass, recognize_algebraic};
use noncong_periods::BigComplex;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn pair(s: &str, r: &str, n: usize) -> PermutationPair {
    PermutationPair::new(
        Permutation::parse(s, Some(n)).unwrap(),
        Permutation::parse(r, Some(n)).unwrap(),
    )
    .unwrap()
}

fn small_index_exactness() -> Outcome {
    let mut notes = Vec::new();
    for mu in 1..=9 {
        let start = Instant::now();
        let oracle: BTreeSet<_> = brute_force_classes(mu)
            .values()
            .map(|p| canonical_pair(&p.sigma_s, &p.sigma_r).unwrap())
            .collect();
        let e = enumerate_classes(mu);
        let ours: BTreeSet<_> = e.keys.iter().cloned().collect();
        let secs = start.elapsed().as_secs_f64();
        if ours != oracle || ours.len() != e.keys.len() {
            return outcome(false, format!("key sets differ at index {mu}"));
        }
        let limit = if mu <= 7 { 10.0 } else { 600.0 };
        if secs > limit {
            return outcome(false, format!("index {mu} took {secs:.1}s"));
        }
        notes.push(format!("{mu}:{}", ours.len()));
    }
    outcome(true, format!("classes {}", notes.join(" ")))
}

fn noncongruence_records(mu: usize) -> Vec<SubgroupRecord> {
    let pairs: Vec<PermutationPair> = enumerate_classes(mu).pairs().collect();
    let mut records: Vec<SubgroupRecord> = pairs
        .par_iter()
        .map(|p| analyze(p).unwrap())
        .filter(|r| !r.is_congruence)
        .collect();
    group_into_passports(&mut records);
    records
}

fn passport_counts(records: &[SubgroupRecord]) -> BTreeMap<u32, usize> {
    let ids: BTreeSet<_> = records
        .iter()
        .map(|r| (r.signature, r.passport_id.unwrap()))
        .collect();
    let mut m = BTreeMap::new();
    for (sig, _) in ids {
        *m.entry(sig.genus).or_insert(0) += 1;
    }
    m
}

fn table_one() -> Outcome {
    let expected: BTreeMap<(usize, u32), usize> = [
        ((7, 0), 3),
        ((8, 0), 1),
        ((9, 0), 9),
        ((9, 1), 1),
        ((10, 0), 9),
        ((10, 1), 1),
        ((11, 0), 6),
        ((12, 0), 27),
        ((12, 1), 3),
        ((13, 0), 23),
        ((13, 1), 1),
        ((14, 0), 29),
        ((14, 1), 2),
        ((15, 0), 62),
        ((15, 1), 9),
        ((16, 0), 65),
        ((16, 1), 9),
        ((17, 0), 35),
        ((17, 1), 2),
    ]
    .into_iter()
    .collect();
    let start = Instant::now();
    let mut got = BTreeMap::new();
    for mu in 7..=17 {
        for (g, c) in passport_counts(&noncongruence_records(mu)) {
            got.insert((mu, g), c);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let g0: usize = got.iter().filter(|((_, g), _)| *g == 0).map(|(_, c)| c).sum();
    let g1: usize = got.iter().filter(|((_, g), _)| *g == 1).map(|(_, c)| c).sum();
    if got != expected {
        let diff: Vec<String> = expected
            .keys()
            .chain(got.keys())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .filter(|k| expected.get(k) != got.get(k))
            .map(|k| format!("{k:?}: want {:?} got {:?}", expected.get(k), got.get(k)))
            .collect();
        return outcome(false, diff.join("; "));
    }
    outcome(
        g0 == 269 && g1 == 28,
        format!("{g0} genus-0 and {g1} genus-1 passports, none of higher genus, {secs:.1}s"),
    )
}

fn worked_examples() -> Outcome {
    let p9 = pair("(1)(2 5)(3 7)(4 8)(6 9)", "(1 2 6)(3 8 5)(4 9 7)", 9);
    let p15 = pair(
        "(1 15)(2 12)(3 7)(4 9)(5 13)(6 10)(8 14)",
        "(1 11 12)(2 13 6)(3 8 15)(4 10 7)(5 14 9)",
        15,
    );
    let ok9 = signature_of(&p9).unwrap().as_tuple() == (9, 1, 1, 1, 0)
        && monodromy_order(&p9) == 504u32.into()
        && !is_congruence(&p9);
    let w15 = cusp_widths(&p15);
    let ok15 = signature_of(&p15).unwrap().as_tuple() == (15, 1, 2, 1, 0)
        && p15.sigma_t().to_string() == "(1 3 4 5 6 7 8 9 10 2)(11 12 13 14 15)"
        && w15 == vec![10, 5]
        && generalized_level(&w15) == 10
        && monodromy_order(&p15) == 9720u32.into();
    outcome(
        ok9 && ok15,
        format!(
            "index 9: {}, index 15: {}",
            if ok9 { "ok" } else { "mismatch" },
            if ok15 { "ok" } else { "mismatch" }
        ),
    )
}

/// Graphs where the vertex-automorphism bound `|Aut| 3^k'` is exceeded.
/// Each has a doubled edge inside the maximal matching; see README.
const KNOWN_VIOLATIONS: [&str; 4] = [
    "B3 W0 ; (1,2) (1,2) (2,3) (3,3)",
    "B4 W0 ; (1,2) (2,4) (3,4) (3,4)",
    "B4 W0 ; (1,2) (2,3) (2,4) (3,4) (3,4)",
    "B4 W0 ; (1,2) (1,3) (2,4) (3,4) (3,4)",
];

/// Returns (criterion outcome, whether the failure is exactly the known one).
fn multiplicity_bound() -> (Outcome, bool) {
    let mut vertex = BTreeSet::new();
    let mut labelled = 0;
    for mu in 1..=12 {
        let report = multiplicity_audit(mu);
        for g in report.violations() {
            vertex.insert(g.graph.to_string());
        }
        labelled += report
            .graphs
            .iter()
            .filter(|g| g.max_multiplicity > g.labelled_edge_bound())
            .count();
    }
    let known: BTreeSet<String> = KNOWN_VIOLATIONS.iter().map(|s| s.to_string()).collect();
    let detail = format!(
        "{} graph(s) exceed |Aut|*3^k' [{}]; with edge-labelled automorphisms: {labelled} violation(s)",
        vertex.len(),
        vertex.iter().cloned().collect::<Vec<_>>().join(" | ")
    );
    (outcome(vertex.is_empty(), detail), vertex == known && labelled == 0)
}

fn index_eighteen() -> Outcome {
    let start = Instant::now();
    let e = enumerate_classes(18);
    let t_enum = start.elapsed().as_secs_f64();
    let records = noncongruence_records(18);
    let total = start.elapsed().as_secs_f64();
    let counts = passport_counts(&records);
    outcome(
        e.keys.len() == 2176,
        format!(
            "{} classes in {t_enum:.2}s; with analysis and passports {total:.1}s; noncongruence passports by genus {counts:?}",
            e.keys.len()
        ),
    )
}

fn q(n: i64) -> Rational {
    Rational::from(n)
}

fn numerics_end_to_end() -> Outcome {
    let digits = 300;
    let prec = bits_for_digits(digits);
    let (exps, cusps) = gamma0_11_expansions(400, prec);
    let gens = matrix_generators(&gamma0_11_pair()).generators;
    let result = match pipeline::run(&gens, &exps, &cusps, digits, Some(1)) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let want = j_from_weierstrass(&q(0), &q(-1), &q(1), &q(-10), &q(-20)).unwrap();
    let got = result.recognition.as_ref().and_then(|r| r.rational().cloned());
    // tau invariance of j along the way
    let tol = ten_pow_neg(100.0, 64);
    let tau = &result.lattice.tau;
    let base = j_invariant(tau).unwrap();
    let mut worst = Float::with_val(64, 0);
    for m in [
        MatrixPSL2::t(),
        MatrixPSL2::s(),
        MatrixPSL2::r(),
        MatrixPSL2::new(2, 1, 5, 3).unwrap(),
        MatrixPSL2::new(7, -3, 12, -5).unwrap(),
    ] {
        let d = Float::with_val(64, (&j_invariant(&mobius(&m, tau)).unwrap() - &base).abs());
        worst = worst.max(&d);
    }
    let margin = result.recognition.as_ref().and_then(|r| r.margin()).unwrap_or(0.0);
    outcome(
        got.as_ref() == Some(&want) && worst < tol,
        format!(
            "j = {} (expected {want}), {} trusted digits, LLL margin {margin:.2e}, worst |j(tau) - j(M tau)| = {:.2e}",
            got.map_or("unrecognized".to_string(), |g| g.to_string()),
            result.j_digits,
            worst.to_f64()
        ),
    )
}

fn numerics_via_cli() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_noncong");
    let gen = Command::new(bin)
        .args(["example-data", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    if !gen.status.success() {
        return outcome(false, "example-data failed");
    }
    let run = Command::new(bin)
        .arg("periods")
        .arg("--expansions")
        .arg(dir.path().join("expansions.json"))
        .arg("--generators")
        .arg(dir.path().join("generators.json"))
        .args(["--prec", "300", "--emit-j", "--recognize-degree", "1"])
        .output()
        .unwrap();
    let out: serde_json::Value = match serde_json::from_slice(&run.stdout) {
        Ok(v) => v,
        Err(_) => return outcome(false, "periods printed no JSON"),
    };
    let value = out["recognized"]["value"].as_str().unwrap_or("");
    outcome(
        run.status.success() && value == "-122023936/161051",
        format!("noncong periods recognized {value}"),
    )
}

fn analytic_anchors() -> Outcome {
    let digits = 300u32;
    let prec = bits_for_digits(digits);
    let tol = ten_pow_neg((digits - 10) as f64, 64);
    let j_i = j_invariant(&BigComplex::from_f64(0.0, 1.0, prec)).unwrap();
    let e_i = (&j_i - &BigComplex::from_f64(1728.0, 0.0, prec)).abs();
    let rho = BigComplex::new(Float::with_val(prec, 0.5), Float::with_val(prec, 3).sqrt() / 2u32);
    let e_rho = j_invariant(&rho).unwrap().abs();
    let target = Rational::from((-1159088625i64, 2097152));
    let tau = BigComplex::parse("0.332234", "0.744371", prec).unwrap();
    let j = j_invariant(&tau).unwrap();
    let t = Float::with_val(prec, &target);
    let rel = Float::with_val(64, (&j - &BigComplex::new(t.clone(), Float::with_val(prec, 0))).abs()) / t.abs();
    let curve = j_from_weierstrass(&q(1), &q(-1), &q(1), &q(-95), &q(-697)).unwrap();
    let ok = e_i < tol && e_rho < tol && rel < 1e-4 && curve == target;
    outcome(
        ok,
        format!(
            "|j(i) - 1728| = {:.1e}, |j(rho)| = {:.1e}, relative error at the index-9 tau {:.1e}, curve j = {curve}",
            e_i.to_f64(),
            e_rho.to_f64(),
            rel.to_f64()
        ),
    )
}

fn random_involution_like(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let cycles = rng.gen_range(0..=n / k);
    let mut pts: Vec<u32> = (1..=n as u32).collect();
    pts.shuffle(rng);
    let cs: Vec<Vec<u32>> = pts.chunks(k).take(cycles).map(<[u32]>::to_vec).collect();
    Permutation::from_cycles(n, &cs).unwrap()
}

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut v: Vec<u32> = (0..n as u32).collect();
    v.shuffle(rng);
    Permutation::from_images(v).unwrap()
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = Vec::new();

    let mut bad = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=9);
        let s = random_involution_like(n, 2, &mut rng);
        let r = random_involution_like(n, 3, &mut rng);
        let g = random_perm(n, &mut rng);
        let key = canonical_pair(&s, &r).unwrap();
        if canonical_pair(&s.conj(&g), &r.conj(&g)).unwrap() != key {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(format!("canonical invariance: {bad}/500"));
    }

    let mut bad = 0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=8);
        let gens: Vec<Permutation> = loop {
            let gens: Vec<Permutation> = (0..rng.gen_range(1..=3))
                .map(|_| {
                    let k = rng.gen_range(2..=n.min(4));
                    let mut pts: Vec<u32> = (1..=n as u32).collect();
                    pts.shuffle(&mut rng);
                    Permutation::from_cycles(n, &[pts[..k].to_vec()]).unwrap()
                })
                .collect();
            if Bsgs::new(&gens, n, &[]).order_u128().unwrap() <= 10_000 {
                break gens;
            }
        };
        let s = TranspositionSet::from_involution(&random_involution_like(n, 2, &mut rng));
        let oracle = Bsgs::new(&gens, n, &[])
            .elements()
            .iter()
            .map(|g| s.image(g))
            .min()
            .unwrap();
        if smallest_image_set(&s, &gens, n) != oracle {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(format!("smallest image: {bad}/200"));
    }

    let prec = bits_for_digits(120);
    let (exps, cusps) = gamma0_11_expansions(400, prec);
    let gens = matrix_generators(&gamma0_11_pair()).generators;
    let word = |rng: &mut ChaCha8Rng| {
        (0..rng.gen_range(1..=4)).fold(MatrixPSL2::identity(), |m, _| {
            let g = gens[rng.gen_range(0..gens.len())];
            m.mul(&if rng.gen_bool(0.5) { g } else { g.inverse() })
        })
    };
    let mut bad = 0;
    for _ in 0..30 {
        let (a, b) = (word(&mut rng), word(&mut rng));
        let pa = period_of(&a, &exps, &cusps, prec).unwrap();
        let pb = period_of(&b, &exps, &cusps, prec).unwrap();
        let pab = period_of(&a.mul(&b), &exps, &cusps, prec).unwrap();
        let diff = (&pab.value - &pa.add(&pb).value).abs();
        if diff > Float::with_val(64, &pab.error + &pa.error) + &pb.error {
            bad += 1;
        }
        let at: Vec<_> = cusps
            .iter()
            .filter_map(|c| period_via(&a, &exps, c, prec).ok())
            .collect();
        if let [x, y] = &at[..] {
            if (&x.value - &y.value).abs() > Float::with_val(64, &x.error + &y.error) {
                bad += 1;
            }
        }
    }
    if bad > 0 {
        failures.push(format!("period map: {bad} failures"));
    }

    let digits = 300;
    let p = bits_for_digits(digits);
    let mut bad = 0;
    for _ in 0..25 {
        let big = |rng: &mut ChaCha8Rng| {
            (0..rng.gen_range(0..60)).fold(rug::Integer::from(rng.gen_range(1..10)), |acc, _| {
                acc * 10u32 + rng.gen_range(0..10u32)
            })
        };
        let value = Rational::from((big(&mut rng), big(&mut rng)));
        let printed = Float::with_val(p, &value).to_string_radix(10, Some(digits as usize));
        let x = BigComplex::parse(&printed, "0", p).unwrap();
        let back = recognize_algebraic(&x, 1, 210, digits).ok();
        if back.as_ref().and_then(|r| r.rational()) != Some(&value) {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(format!("recognition round trips: {bad}/25"));
    }

    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "500 canonical, 200 smallest-image, 30 period-map, 25 recognition trials".to_string()
        } else {
            failures.join("; ")
        },
    )
}

fn main() {
    let mut unexpected = Vec::new();
    let mut report = |name: &str, o: Outcome| {
        println!("{} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        if !o.passed {
            unexpected.push(name.to_string());
        }
    };
    report("small-index exactness (1..9)", small_index_exactness());
    report("Table 1 passport counts (7..17)", table_one());
    report("worked-example invariants", worked_examples());
    let (mult, as_known) = multiplicity_bound();
    println!(
        "{} multiplicity bound (index <= 12): {}",
        if mult.passed { "PASS" } else { "FAIL" },
        mult.detail
    );
    if !mult.passed {
        println!("     expected failure: the violating graphs are exactly the known set: {as_known}");
    }
    report("index-18 enumeration (soft)", index_eighteen());
    report("numerics end to end (Gamma_0(11))", numerics_end_to_end());
    report("numerics through the CLI", numerics_via_cli());
    report("analytic anchors", analytic_anchors());
    report("property suites", property_suites());
    if !as_known {
        unexpected.push("multiplicity bound (violations changed)".into());
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {}", unexpected.join(", "));
        std::process::exit(1);
    }
}
