//! Labels, normalization of `sigma_T` and JSON storage of subgroup records.

use std::fmt;
use std::fs;
use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{generalized_level, Signature, SubgroupRecord};
use crate::pairs::PermutationPair;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad label at byte {pos}: {msg}")]
pub struct LabelError {
    pub pos: usize,
    pub msg: String,
}

/// `MU_G_NC_NE2_NE3_ID[_LETTER]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Label {
    pub signature: Signature,
    pub passport_id: u32,
    pub letter: Option<String>,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.signature;
        write!(
            f,
            "{}_{}_{}_{}_{}_{}",
            s.mu, s.genus, s.n_cusps, s.n_e2, s.n_e3, self.passport_id
        )?;
        if let Some(l) = &self.letter {
            write!(f, "_{l}")?;
        }
        Ok(())
    }
}

pub fn render_label(signature: Signature, passport_id: u32, letter: Option<&str>) -> String {
    Label {
        signature,
        passport_id,
        letter: letter.map(str::to_owned),
    }
    .to_string()
}

pub fn parse_label(s: &str) -> Result<Label, LabelError> {
    let mut nums = Vec::with_capacity(6);
    let mut pos = 0;
    let mut letter = None;
    for (i, part) in s.split('_').enumerate() {
        let err = |msg: &str| LabelError {
            pos,
            msg: msg.to_owned(),
        };
        if i < 6 {
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err("expected a non-negative integer"));
            }
            nums.push(part.parse::<u32>().map_err(|_| err("integer too large"))?);
        } else if i == 6 {
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_lowercase()) {
                return Err(err("expected a lowercase letter code"));
            }
            letter = Some(part.to_owned());
        } else {
            return Err(err("trailing component"));
        }
        pos += part.len() + 1;
    }
    if nums.len() < 6 {
        return Err(LabelError {
            pos: s.len(),
            msg: format!("expected 6 numeric components, found {}", nums.len()),
        });
    }
    Ok(Label {
        signature: Signature {
            mu: nums[0],
            genus: nums[1],
            n_cusps: nums[2],
            n_e2: nums[3],
            n_e3: nums[4],
        },
        passport_id: nums[5],
        letter,
    })
}

/// Cycles of `sigma_T` in label order: the cusp at infinity first, then by
/// decreasing width and smallest label.
fn cusp_order(t: &Permutation) -> Vec<Vec<u32>> {
    let mut cycles = t.cycles();
    let count = |w: usize| cycles.iter().filter(|c| c.len() == w).count();
    let unique: Vec<usize> = cycles
        .iter()
        .map(Vec::len)
        .filter(|&w| count(w) == 1)
        .collect();
    let max_w = cycles.iter().map(Vec::len).max().unwrap_or(0);
    let inf_width = if unique.contains(&1) {
        1
    } else if count(max_w) == 1 {
        max_w
    } else {
        unique.iter().copied().max().unwrap_or(max_w)
    };
    // cycles() is ordered by smallest point, so the first hit has the
    // smallest label
    let k = cycles.iter().position(|c| c.len() == inf_width).unwrap();
    let inf = cycles.remove(k);
    cycles.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    cycles.insert(0, inf);
    cycles
}

/// Relabels the points so every cusp occupies a consecutive block of
/// labels: the cusp at infinity first (the largest width, or the largest
/// unique width when the largest is shared, or a unique cusp of width 1),
/// then by decreasing width. A `sigma_T` already in block form is kept as
/// it is; otherwise each cycle is numbered from its smallest label onward.
pub fn normalize_sigma_t(record: &SubgroupRecord) -> SubgroupRecord {
    let t = &record.sigma_t;
    let order = cusp_order(t);
    let mut next = 0u32;
    let mut blocked = true;
    for c in &order {
        let lo = next;
        next += c.len() as u32;
        if !c.iter().all(|&p| p >= lo && p < next) {
            blocked = false;
        }
    }
    if blocked {
        return record.clone();
    }
    let mut images = vec![0u32; t.degree()];
    let mut next = 0u32;
    for c in &order {
        for &p in c {
            images[p as usize] = next;
            next += 1;
        }
    }
    let g = Permutation::from_images(images).expect("cycles partition the points");
    let pair = record.pair.conjugate_by(&g);
    SubgroupRecord {
        sigma_t: pair.sigma_t(),
        pair,
        ..record.clone()
    }
}

/// Sets each record's label from its signature and passport id.
pub fn assign_labels(records: &mut [SubgroupRecord]) {
    for r in records {
        r.label = r
            .passport_id
            .map(|id| render_label(r.signature, id, None));
    }
}

#[derive(Debug, Error)]
pub enum DbError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("record {index}: {msg}")]
    Schema { index: usize, msg: String },
}

impl DbError {
    pub fn is_io(&self) -> bool {
        matches!(self, DbError::Io { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordJson {
    pub label: Option<String>,
    pub mu: u32,
    pub genus: u32,
    pub n_cusps: u32,
    pub n_e2: u32,
    pub n_e3: u32,
    pub sigma_s: Vec<u32>,
    pub sigma_r: Vec<u32>,
    pub sigma_t: Vec<u32>,
    pub cusp_widths: Vec<u32>,
    pub generalized_level: u64,
    pub is_congruence: bool,
    pub monodromy_order: String,
    pub passport_id: Option<u32>,
    pub passport_size: Option<u32>,
}

impl From<&SubgroupRecord> for RecordJson {
    fn from(r: &SubgroupRecord) -> Self {
        RecordJson {
            label: r.label.clone(),
            mu: r.signature.mu,
            genus: r.signature.genus,
            n_cusps: r.signature.n_cusps,
            n_e2: r.signature.n_e2,
            n_e3: r.signature.n_e3,
            sigma_s: r.pair.sigma_s.to_one_based(),
            sigma_r: r.pair.sigma_r.to_one_based(),
            sigma_t: r.sigma_t.to_one_based(),
            cusp_widths: r.cusp_widths.clone(),
            generalized_level: r.generalized_level,
            is_congruence: r.is_congruence,
            monodromy_order: r.monodromy_order.to_string(),
            passport_id: r.passport_id,
            passport_size: r.passport_size,
        }
    }
}

impl RecordJson {
    pub fn into_record(self, index: usize) -> Result<SubgroupRecord, DbError> {
        let bad = |msg: String| DbError::Schema { index, msg };
        let perm = |name: &str, v: &[u32]| {
            if v.len() != self.mu as usize {
                return Err(bad(format!("{name} has {} entries, mu is {}", v.len(), self.mu)));
            }
            Permutation::from_one_based(v).map_err(|e| bad(format!("{name}: {e}")))
        };
        let s = perm("sigma_s", &self.sigma_s)?;
        let r = perm("sigma_r", &self.sigma_r)?;
        let t = perm("sigma_t", &self.sigma_t)?;
        let pair = PermutationPair::new(s, r).map_err(|e| bad(e.to_string()))?;
        if pair.sigma_t() != t {
            return Err(bad("sigma_t is not sigma_s then sigma_r".into()));
        }
        let total: u32 = self.cusp_widths.iter().sum();
        if total != self.mu {
            return Err(bad(format!("cusp widths sum to {total}, mu is {}", self.mu)));
        }
        if self.cusp_widths.len() != self.n_cusps as usize {
            return Err(bad("number of cusp widths differs from n_cusps".into()));
        }
        if generalized_level(&self.cusp_widths) != self.generalized_level {
            return Err(bad("generalized_level is not the lcm of the widths".into()));
        }
        let monodromy_order: BigUint = self
            .monodromy_order
            .parse()
            .map_err(|_| bad("monodromy_order is not a decimal integer".into()))?;
        let signature = Signature {
            mu: self.mu,
            genus: self.genus,
            n_cusps: self.n_cusps,
            n_e2: self.n_e2,
            n_e3: self.n_e3,
        };
        if let Some(l) = &self.label {
            let parsed = parse_label(l).map_err(|e| bad(e.to_string()))?;
            if parsed.signature != signature || Some(parsed.passport_id) != self.passport_id {
                return Err(bad(format!("label {l} disagrees with the record")));
            }
        }
        Ok(SubgroupRecord {
            pair,
            sigma_t: t,
            signature,
            cusp_widths: self.cusp_widths,
            generalized_level: self.generalized_level,
            is_congruence: self.is_congruence,
            monodromy_order,
            passport_id: self.passport_id,
            passport_size: self.passport_size,
            label: self.label,
        })
    }
}

pub fn records_to_json(records: &[SubgroupRecord]) -> String {
    let rows: Vec<RecordJson> = records.iter().map(RecordJson::from).collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("records serialize");
    s.push('\n');
    s
}

pub fn records_from_json(text: &str) -> Result<Vec<SubgroupRecord>, DbError> {
    let rows: Vec<RecordJson> = serde_json::from_str(text)?;
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| r.into_record(i))
        .collect()
}

pub fn export_records(records: &[SubgroupRecord], path: &Path) -> Result<(), DbError> {
    fs::write(path, records_to_json(records)).map_err(|source| DbError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn import_records(path: &Path) -> Result<Vec<SubgroupRecord>, DbError> {
    let text = fs::read_to_string(path).map_err(|source| DbError::Io {
        path: path.display().to_string(),
        source,
    })?;
    records_from_json(&text)
}
