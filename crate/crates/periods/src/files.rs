//! Expansion and generator files.
//!
//! Expansions: `{"cusps": [{"cusp_index", "width", "coefficients":
//! [["re", "im"], ...], "digits", "normalizer": [a, b, c, d]}]}`. The
//! normalizer `A_p` may be omitted only for cusp 0, where it defaults to
//! the identity. Generators: a JSON list of `[a, b, c, d]`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use noncong_core::cosets::CuspNormalizer;
use noncong_core::matrix::MatrixPSL2;

use crate::complex::BigComplex;
use crate::expansion::FourierExpansion;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cusp {cusp}: coefficient {n} is not a decimal number")]
    Coefficient { cusp: usize, n: usize },
    #[error("cusp {0}: a normalizer matrix is required")]
    MissingNormalizer(usize),
    #[error("cusp {0}: width must be positive and coefficients non-empty")]
    BadCusp(usize),
    #[error("matrix {0:?} does not have determinant 1")]
    Determinant([i64; 4]),
}

impl FileError {
    pub fn is_io(&self) -> bool {
        matches!(self, FileError::Io { .. })
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CuspEntry {
    cusp_index: usize,
    width: u32,
    coefficients: Vec<[String; 2]>,
    digits: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    normalizer: Option<[i64; 4]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ExpansionFile {
    cusps: Vec<CuspEntry>,
}

fn read(path: &Path) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), FileError> {
    std::fs::write(path, text).map_err(|source| FileError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn matrix(e: [i64; 4]) -> Result<MatrixPSL2, FileError> {
    MatrixPSL2::new(e[0], e[1], e[2], e[3]).map_err(|_| FileError::Determinant(e))
}

/// Parses expansions at `prec` bits, with the smallest `digits` field.
pub fn parse_expansions(
    text: &str,
    prec: u32,
) -> Result<(Vec<FourierExpansion>, Vec<CuspNormalizer>, u32), FileError> {
    let file: ExpansionFile = serde_json::from_str(text)?;
    let mut exps = Vec::new();
    let mut cusps = Vec::new();
    let mut digits = u32::MAX;
    for entry in file.cusps {
        let idx = entry.cusp_index;
        let coefficients = entry
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, [re, im])| {
                BigComplex::parse(re, im, prec).ok_or(FileError::Coefficient { cusp: idx, n: n + 1 })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let normalizer = match entry.normalizer {
            Some(e) => matrix(e)?,
            None if idx == 0 => MatrixPSL2::identity(),
            None => return Err(FileError::MissingNormalizer(idx)),
        };
        exps.push(
            FourierExpansion::new(idx, entry.width, coefficients)
                .map_err(|_| FileError::BadCusp(idx))?,
        );
        cusps.push(CuspNormalizer {
            index: idx,
            normalizer,
            width: entry.width,
            point: 0,
        });
        digits = digits.min(entry.digits);
    }
    Ok((exps, cusps, digits))
}

pub fn read_expansions(
    path: &Path,
    prec: u32,
) -> Result<(Vec<FourierExpansion>, Vec<CuspNormalizer>, u32), FileError> {
    parse_expansions(&read(path)?, prec)
}

pub fn expansions_to_json(exps: &[FourierExpansion], cusps: &[CuspNormalizer], digits: u32) -> String {
    let file = ExpansionFile {
        cusps: exps
            .iter()
            .map(|e| {
                let normalizer = cusps
                    .iter()
                    .find(|c| c.index == e.cusp_index)
                    .map(|c| c.normalizer.entries());
                CuspEntry {
                    cusp_index: e.cusp_index,
                    width: e.width,
                    coefficients: e
                        .coefficients
                        .iter()
                        .map(|a| {
                            let (re, im) = a.to_strings(digits as usize + 5);
                            [re, im]
                        })
                        .collect(),
                    digits,
                    normalizer,
                }
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable") + "\n"
}

pub fn write_expansions(
    path: &Path,
    exps: &[FourierExpansion],
    cusps: &[CuspNormalizer],
    digits: u32,
) -> Result<(), FileError> {
    write(path, &expansions_to_json(exps, cusps, digits))
}

pub fn parse_generators(text: &str) -> Result<Vec<MatrixPSL2>, FileError> {
    let rows: Vec<[i64; 4]> = serde_json::from_str(text)?;
    rows.into_iter().map(matrix).collect()
}

pub fn read_generators(path: &Path) -> Result<Vec<MatrixPSL2>, FileError> {
    parse_generators(&read(path)?)
}

pub fn write_generators(path: &Path, gens: &[MatrixPSL2]) -> Result<(), FileError> {
    let rows: Vec<[i64; 4]> = gens.iter().map(|g| g.entries()).collect();
    write(path, &(serde_json::to_string(&rows).expect("serializable") + "\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_text_round_trip() {
        let p = 200;
        let e = FourierExpansion::new(
            1,
            3,
            vec![
                BigComplex::from_f64(1.0, -0.5, p),
                BigComplex::from_f64(0.25, 2.0, p),
            ],
        )
        .unwrap();
        let cusps = [CuspNormalizer {
            index: 1,
            normalizer: MatrixPSL2::s(),
            width: 3,
            point: 2,
        }];
        let text = expansions_to_json(std::slice::from_ref(&e), &cusps, 50);
        let (back, c, digits) = parse_expansions(&text, p).unwrap();
        assert_eq!(digits, 50);
        assert_eq!(c[0].normalizer, MatrixPSL2::s());
        assert_eq!(back[0].coefficients, e.coefficients);
    }

    #[test]
    fn rejects_bad_input() {
        let missing = r#"{"cusps":[{"cusp_index":2,"width":1,"coefficients":[["1","0"]],"digits":10}]}"#;
        assert!(matches!(
            parse_expansions(missing, 64),
            Err(FileError::MissingNormalizer(2))
        ));
        let garbage = r#"{"cusps":[{"cusp_index":0,"width":1,"coefficients":[["x","0"]],"digits":10}]}"#;
        assert!(matches!(
            parse_expansions(garbage, 64),
            Err(FileError::Coefficient { cusp: 0, n: 1 })
        ));
        assert!(matches!(
            parse_generators("[[1,2,3,4]]"),
            Err(FileError::Determinant(_))
        ));
        assert_eq!(parse_generators("[[1,1,0,1]]").unwrap(), vec![MatrixPSL2::t()]);
    }
}
