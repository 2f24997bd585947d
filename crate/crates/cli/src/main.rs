use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use noncong_core::analysis::{analyze, SubgroupRecord};
use noncong_core::canonical::canonical_pair;
use noncong_core::conjugacy::group_into_passports;
use noncong_core::cosets::matrix_generators;
use noncong_core::database::{
    assign_labels, export_records, import_records, normalize_sigma_t, records_to_json, render_label,
    RecordJson,
};
use noncong_core::oracle::brute_force_classes;
use noncong_core::pairs::{enumerate_classes, multiplicity_audit, PermutationPair};
use noncong_core::perm::Permutation;
use noncong_periods::complex::bits_for_digits;
use noncong_periods::files::{read_expansions, read_generators, write_expansions, write_generators};
use noncong_periods::level11::gamma0_11_expansions;
use noncong_periods::pipeline;
use noncong_periods::{BigComplex, Recognition};

const USAGE: u8 = 1;
const INVARIANT: u8 = 2;
const IO: u8 = 3;

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure {
        code,
        msg: msg.into(),
    }
}

type Outcome = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "noncong", version, about = "Finite index subgroups of the modular group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate conjugacy classes of index-N subgroups as labelled records.
    Enumerate {
        #[arg(long)]
        index: usize,
        #[arg(long)]
        noncongruence_only: bool,
        #[arg(long)]
        genus: Option<u32>,
        /// Write JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Print counts and timings to stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Print the record of one pair, e.g. --sigma-s "(1 2)(3 4)".
    Analyze {
        #[arg(long, allow_hyphen_values = true)]
        sigma_s: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma_r: String,
    },
    /// Regroup a record file into passports and relabel it.
    Passports {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// JSON object mapping a label to 1-based images of a relabeling
        /// applied to every record carrying it.
        #[arg(long)]
        relabel: Option<PathBuf>,
        /// JSON list of {"sigma_s", "sigma_r", "letter"}; matching records
        /// get the letter appended to their label.
        #[arg(long)]
        orbits: Option<PathBuf>,
    },
    /// Check the multiplicity bound and, for N <= 9, the brute-force oracle.
    Audit {
        #[arg(long)]
        index: usize,
    },
    /// Period lattice and j-invariant from Fourier expansions.
    Periods {
        #[arg(long)]
        expansions: PathBuf,
        #[arg(long)]
        generators: PathBuf,
        /// Working precision in decimal digits.
        #[arg(long, default_value_t = 300)]
        prec: u32,
        #[arg(long)]
        emit_lattice: bool,
        #[arg(long)]
        emit_j: bool,
        #[arg(long)]
        recognize_degree: Option<usize>,
    },
    /// Write expansion and generator files for Gamma_0(11) and
    /// eta(tau)^2 eta(11 tau)^2.
    ExampleData {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 400)]
        terms: usize,
        #[arg(long, default_value_t = 300)]
        prec: u32,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Enumerate {
            index,
            noncongruence_only,
            genus,
            out,
            jobs,
            stats,
        } => enumerate(index, noncongruence_only, genus, out.as_deref(), jobs, stats),
        Command::Analyze { sigma_s, sigma_r } => analyze_one(&sigma_s, &sigma_r),
        Command::Passports {
            input,
            out,
            relabel,
            orbits,
        } => passports(&input, &out, relabel.as_deref(), orbits.as_deref()),
        Command::Audit { index } => audit(index),
        Command::Periods {
            expansions,
            generators,
            prec,
            emit_lattice,
            emit_j,
            recognize_degree,
        } => periods(&expansions, &generators, prec, emit_lattice, emit_j, recognize_degree),
        Command::ExampleData {
            out_dir,
            terms,
            prec,
        } => example_data(&out_dir, terms, prec),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn write_text(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| fail(IO, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail(IO, format!("{}: {e}", path.display())))
}

/// Passports, labels and normalized `sigma_T`, sorted by label then key.
fn finish_records(records: &mut Vec<SubgroupRecord>) {
    group_into_passports(records);
    assign_labels(records);
    let mut normalized: Vec<(SubgroupRecord, _)> = records
        .par_iter()
        .map(|r| (normalize_sigma_t(r), r.pair.canonical_key()))
        .collect();
    normalized.sort_by(|(a, ka), (b, kb)| {
        (a.signature, a.passport_id, ka).cmp(&(b.signature, b.passport_id, kb))
    });
    *records = normalized.into_iter().map(|(r, _)| r).collect();
}

fn enumerate(
    index: usize,
    noncongruence_only: bool,
    genus: Option<u32>,
    out: Option<&Path>,
    jobs: Option<usize>,
    stats: bool,
) -> Outcome {
    if index == 0 {
        return Err(fail(USAGE, "--index must be at least 1"));
    }
    if let Some(k) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global()
            .map_err(|e| fail(USAGE, e.to_string()))?;
    }
    let start = Instant::now();
    let e = enumerate_classes(index);
    let t_enum = start.elapsed();
    let analyzed: Result<Vec<SubgroupRecord>, _> = e.pairs().collect::<Vec<_>>().par_iter().map(analyze).collect();
    let mut records: Vec<SubgroupRecord> = analyzed
        .map_err(|err| fail(INVARIANT, err.to_string()))?
        .into_iter()
        .filter(|r| !(noncongruence_only && r.is_congruence))
        .filter(|r| genus.is_none_or(|g| r.signature.genus == g))
        .collect();
    finish_records(&mut records);
    if stats {
        let n_passports: BTreeMap<u32, std::collections::BTreeSet<String>> =
            records.iter().fold(BTreeMap::new(), |mut m, r| {
                m.entry(r.signature.genus)
                    .or_default()
                    .insert(r.label.clone().unwrap_or_default());
                m
            });
        eprintln!("index {index}: {} classes, {} candidates", e.stats.classes_emitted, e.stats.candidates_generated);
        eprintln!("kept {} records", records.len());
        for (g, labels) in &n_passports {
            eprintln!("genus {g}: {} passports", labels.len());
        }
        eprintln!(
            "enumeration {:.2}s, total {:.2}s",
            t_enum.as_secs_f64(),
            start.elapsed().as_secs_f64()
        );
    }
    write_text(out, &records_to_json(&records))
}

fn parse_perm(name: &str, s: &str, n: Option<usize>) -> Result<Permutation, Failure> {
    Permutation::parse(s, n).map_err(|e| fail(USAGE, format!("{name}: {e}")))
}

fn analyze_one(sigma_s: &str, sigma_r: &str) -> Outcome {
    let s = parse_perm("--sigma-s", sigma_s, None)?;
    let r = parse_perm("--sigma-r", sigma_r, None)?;
    let n = s.degree().max(r.degree());
    let s = parse_perm("--sigma-s", sigma_s, Some(n))?;
    let r = parse_perm("--sigma-r", sigma_r, Some(n))?;
    let pair = PermutationPair::new(s, r).map_err(|e| fail(INVARIANT, e.to_string()))?;
    let record = analyze(&pair).map_err(|e| fail(INVARIANT, e.to_string()))?;
    let json = serde_json::to_string_pretty(&RecordJson::from(&record)).expect("serializable");
    println!("{json}");
    Ok(())
}

fn passports(input: &Path, out: &Path, relabel: Option<&Path>, orbits: Option<&Path>) -> Outcome {
    let db_fail = |e: noncong_core::database::DbError| {
        let code = if e.is_io() { IO } else { INVARIANT };
        fail(code, e.to_string())
    };
    let mut records = import_records(input).map_err(db_fail)?;
    for r in records.iter_mut() {
        r.passport_id = None;
        r.passport_size = None;
        r.label = None;
    }
    finish_records(&mut records);
    if let Some(path) = relabel {
        let map: BTreeMap<String, Vec<u32>> = serde_json::from_str(&read_text(path)?)
            .map_err(|e| fail(INVARIANT, format!("{}: {e}", path.display())))?;
        for r in records.iter_mut() {
            let Some(images) = r.label.as_ref().and_then(|l| map.get(l)) else {
                continue;
            };
            let g = Permutation::from_one_based(images)
                .ok()
                .filter(|g| g.degree() == r.pair.degree())
                .ok_or_else(|| fail(INVARIANT, format!("bad relabeling for {}", r.label.as_ref().unwrap())))?;
            r.pair = r.pair.conjugate_by(&g);
            r.sigma_t = r.pair.sigma_t();
        }
    }
    if let Some(path) = orbits {
        let rows: Vec<Value> = serde_json::from_str(&read_text(path)?)
            .map_err(|e| fail(INVARIANT, format!("{}: {e}", path.display())))?;
        let mut letters = BTreeMap::new();
        for row in rows {
            let bad = || fail(INVARIANT, format!("{}: malformed orbit entry", path.display()));
            let images = |k: &str| -> Result<Permutation, Failure> {
                let v: Vec<u32> = serde_json::from_value(row.get(k).cloned().ok_or_else(bad)?)
                    .map_err(|_| bad())?;
                Permutation::from_one_based(&v).map_err(|_| bad())
            };
            let key = canonical_pair(&images("sigma_s")?, &images("sigma_r")?).map_err(|_| bad())?;
            let letter = row.get("letter").and_then(Value::as_str).ok_or_else(bad)?;
            if !letter.chars().all(|c| c.is_ascii_lowercase()) || letter.is_empty() {
                return Err(bad());
            }
            letters.insert(key, letter.to_string());
        }
        for r in records.iter_mut() {
            if let (Some(letter), Some(id)) = (letters.get(&r.pair.canonical_key()), r.passport_id) {
                r.label = Some(render_label(r.signature, id, Some(letter)));
            }
        }
    }
    export_records(&records, out).map_err(db_fail)
}

fn audit(index: usize) -> Outcome {
    if index == 0 {
        return Err(fail(USAGE, "--index must be at least 1"));
    }
    let report = multiplicity_audit(index);
    let mut ok = true;
    let labelled_bad: Vec<_> = report
        .graphs
        .iter()
        .filter(|g| g.max_multiplicity > g.labelled_edge_bound())
        .collect();
    let vertex_bad: Vec<_> = report.violations().collect();
    println!("graphs: {}", report.graphs.len());
    println!(
        "multiplicity <= |Aut| * 3^k' (vertex automorphisms): {} violation(s)",
        vertex_bad.len()
    );
    for g in &vertex_bad {
        println!(
            "  {}  |Aut| = {}, k' = {}, bound {}, observed {}",
            g.graph,
            g.aut_order,
            g.k_prime,
            g.multiplicity_bound(),
            g.max_multiplicity
        );
    }
    println!(
        "multiplicity <= |Aut| * 3^k' * prod m! (edge-labelled automorphisms): {} violation(s)",
        labelled_bad.len()
    );
    ok &= vertex_bad.is_empty() && labelled_bad.is_empty();
    if index <= 9 {
        let oracle: std::collections::BTreeSet<_> = brute_force_classes(index)
            .values()
            .map(|p| canonical_pair(&p.sigma_s, &p.sigma_r).expect("oracle pairs are valid"))
            .collect();
        let ours: std::collections::BTreeSet<_> = enumerate_classes(index).keys.into_iter().collect();
        let same = ours == oracle;
        println!(
            "brute-force oracle: {} classes, enumeration: {} classes, key sets {}",
            oracle.len(),
            ours.len(),
            if same { "equal" } else { "DIFFER" }
        );
        ok &= same;
    }
    if ok {
        Ok(())
    } else {
        Err(fail(INVARIANT, "audit found violations"))
    }
}

fn complex_json(z: &BigComplex, digits: u32) -> Value {
    let (re, im) = z.to_strings(digits as usize);
    json!([re, im])
}

fn periods(
    expansions: &Path,
    generators: &Path,
    prec: u32,
    emit_lattice: bool,
    emit_j: bool,
    recognize_degree: Option<usize>,
) -> Outcome {
    let file_fail = |e: noncong_periods::files::FileError| {
        fail(if e.is_io() { IO } else { INVARIANT }, e.to_string())
    };
    if prec < 10 {
        return Err(fail(USAGE, "--prec must be at least 10 digits"));
    }
    let bits = bits_for_digits(prec);
    let (exps, cusps, _) = read_expansions(expansions, bits).map_err(file_fail)?;
    let gens = read_generators(generators).map_err(file_fail)?;
    let result = pipeline::run(&gens, &exps, &cusps, prec, recognize_degree)
        .map_err(|e| fail(INVARIANT, e.to_string()))?;
    if result.periods.iter().any(|p| p.warning) {
        eprintln!("warning: some period tail bounds exceed the working precision");
    }
    let shown = result.j_digits.max(10);
    let mut out = serde_json::Map::new();
    out.insert(
        "periods".into(),
        result
            .periods
            .iter()
            .zip(&gens)
            .map(|(p, g)| {
                json!({
                    "generator": g.entries(),
                    "value": complex_json(&p.value, shown),
                    "error": format!("{:e}", p.error.to_f64()),
                })
            })
            .collect(),
    );
    if emit_lattice {
        out.insert(
            "lattice".into(),
            json!({
                "w1": complex_json(&result.lattice.w1, shown),
                "w2": complex_json(&result.lattice.w2, shown),
                "tau": complex_json(&result.lattice.tau, shown),
            }),
        );
    }
    if emit_j {
        out.insert("j".into(), complex_json(&result.j, shown));
        out.insert("j_digits".into(), json!(result.j_digits));
    }
    if let Some(r) = &result.recognition {
        let v = match r {
            Recognition::Rational { value, margin } => {
                json!({"kind": "rational", "value": value.to_string(), "margin": format!("{margin:e}")})
            }
            Recognition::Polynomial {
                coefficients,
                margin,
            } => json!({
                "kind": "polynomial",
                "coefficients": coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "margin": format!("{margin:e}"),
            }),
            Recognition::Unrecognized => json!({"kind": "unrecognized"}),
        };
        out.insert("recognized".into(), v);
    }
    println!("{}", serde_json::to_string_pretty(&Value::Object(out)).expect("serializable"));
    Ok(())
}

fn example_data(dir: &Path, terms: usize, prec: u32) -> Outcome {
    if terms == 0 {
        return Err(fail(USAGE, "--terms must be positive"));
    }
    std::fs::create_dir_all(dir).map_err(|e| fail(IO, format!("{}: {e}", dir.display())))?;
    let (exps, cusps) = gamma0_11_expansions(terms, bits_for_digits(prec));
    let gens = matrix_generators(&noncong_periods::level11::gamma0_11_pair()).generators;
    let io = |e: noncong_periods::files::FileError| fail(IO, e.to_string());
    write_expansions(&dir.join("expansions.json"), &exps, &cusps, prec).map_err(io)?;
    write_generators(&dir.join("generators.json"), &gens).map_err(io)?;
    println!("wrote {0}/expansions.json and {0}/generators.json", dir.display());
    Ok(())
}
