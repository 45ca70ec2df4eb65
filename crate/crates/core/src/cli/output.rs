use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tempfile::NamedTempFile;

use super::CliError;
use crate::cake::Fraction;
use crate::engine::Rule;
use crate::equilibrium::{payoff_curve, CurvePoint, Grid};
use crate::error::Result;
use crate::metrics::{self, PoAReport};

const DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fig1Row {
    pub n: usize,
    pub gini_exact: String,
    pub gini_asymptotic: String,
    pub gini_limit: String,
    pub gini_exact_decimal: String,
    pub gini_asymptotic_decimal: String,
    pub gini_limit_decimal: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fig2Row {
    pub epsilon_num: String,
    pub epsilon_den: String,
    pub payoff_norm_num: String,
    pub payoff_norm_den: String,
    pub n: usize,
    pub epsilon_decimal: String,
    pub payoff_norm_decimal: String,
}

impl Fig2Row {
    pub fn new(n: usize, p: &CurvePoint) -> Self {
        Self {
            epsilon_num: p.epsilon.numer().to_string(),
            epsilon_den: p.epsilon.denom().to_string(),
            payoff_norm_num: p.payoff_norm.numer().to_string(),
            payoff_norm_den: p.payoff_norm.denom().to_string(),
            n,
            epsilon_decimal: p.epsilon.to_decimal(DIGITS),
            payoff_norm_decimal: p.payoff_norm.to_decimal(DIGITS),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fig3Row {
    pub n: usize,
    pub poa_exact: String,
    pub poa_asymptote: String,
    pub poa_exact_decimal: String,
    pub poa_asymptote_decimal: String,
    pub poa_bp: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PoaRow {
    pub n: usize,
    pub poa_exact: String,
    pub poa_asymptote: String,
    pub optimal_welfare: String,
    pub equilibrium_welfare: String,
    pub poa_exact_decimal: String,
}

impl From<&PoAReport> for PoaRow {
    fn from(r: &PoAReport) -> Self {
        Self {
            n: r.n,
            poa_exact: r.poa.to_string(),
            poa_asymptote: r.asymptote.to_string(),
            optimal_welfare: r.optimal_welfare.to_string(),
            equilibrium_welfare: r.equilibrium_welfare.to_string(),
            poa_exact_decimal: r.poa.to_decimal(DIGITS),
        }
    }
}

fn pair(x: &Fraction) -> (String, String) {
    (x.to_string(), x.to_decimal(DIGITS))
}

pub fn fig1_rows(n_max: usize) -> Result<Vec<Fig1Row>> {
    (2..=n_max)
        .map(|n| {
            let (gini_exact, gini_exact_decimal) = pair(&metrics::gini_vanilla_exact(n)?);
            let (gini_asymptotic, gini_asymptotic_decimal) = pair(&metrics::gini_asymptotic(n)?);
            let (gini_limit, gini_limit_decimal) = pair(&metrics::gini_limit(n)?);
            Ok(Fig1Row {
                n,
                gini_exact,
                gini_asymptotic,
                gini_limit,
                gini_exact_decimal,
                gini_asymptotic_decimal,
                gini_limit_decimal,
            })
        })
        .collect()
}

pub fn fig2_rows(ns: &[usize], grid: Grid) -> Result<Vec<Fig2Row>> {
    let mut rows = Vec::new();
    for &n in ns {
        rows.extend(payoff_curve(n, grid)?.iter().map(|p| Fig2Row::new(n, p)));
    }
    Ok(rows)
}

pub fn fig3_rows(n_max: usize) -> Result<Vec<Fig3Row>> {
    (2..=n_max)
        .map(|n| {
            let vanilla = metrics::poa(n, Rule::Vanilla)?;
            let bp = metrics::poa(n, Rule::BiggestPlayer)?;
            Ok(Fig3Row {
                n,
                poa_exact: vanilla.poa.to_string(),
                poa_asymptote: vanilla.asymptote.to_string(),
                poa_exact_decimal: vanilla.poa.to_decimal(DIGITS),
                poa_asymptote_decimal: vanilla.asymptote.to_decimal(DIGITS),
                poa_bp: bp.poa.to_string(),
            })
        })
        .collect()
}

pub(super) fn to_csv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Internal(e.to_string()))
}

pub(super) fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut data = serde_json::to_vec_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    data.push(b'\n');
    Ok(data)
}

fn staged(path: &Path, data: &[u8]) -> Result<NamedTempFile, CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(data).map_err(io)?;
    tmp.flush().map_err(io)?;
    Ok(tmp)
}

/// Writes `data` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, data: &[u8]) -> Result<(), CliError> {
    write_all_atomic(&[(path.to_path_buf(), data.to_vec())])
}

/// Stages every file before renaming any of them.
pub(super) fn write_all_atomic(files: &[(PathBuf, Vec<u8>)]) -> Result<(), CliError> {
    let staged: Vec<(NamedTempFile, &PathBuf)> = files
        .iter()
        .map(|(path, data)| Ok((staged(path, data)?, path)))
        .collect::<Result<_, CliError>>()?;
    for (tmp, path) in staged {
        tmp.persist(path)
            .map_err(|e| CliError::Io(format!("{}: {}", path.display(), e.error)))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig1_row_six() {
        let rows = fig1_rows(6).unwrap();
        let r = rows.iter().find(|r| r.n == 6).unwrap();
        assert_eq!(r.gini_exact, "49/96");
        assert_eq!(r.gini_asymptotic, "17/32");
        assert_eq!(r.gini_limit, "1/2");
        assert_eq!(r.gini_exact_decimal, "0.510416666667");
    }

    #[test]
    fn fig3_bp_is_one() {
        assert!(fig3_rows(12).unwrap().iter().all(|r| r.poa_bp == "1"));
        assert_eq!(fig3_rows(6).unwrap()[4].poa_exact, "96/47");
    }

    #[test]
    fn fig2_symmetric_for_two() {
        let rows = fig2_rows(&[2], Grid::new(20).unwrap()).unwrap();
        let at = |num: &str| {
            rows.iter()
                .find(|r| r.epsilon_num == num && r.epsilon_den == "10")
                .map(|r| (r.payoff_norm_num.clone(), r.payoff_norm_den.clone()))
                .unwrap()
        };
        assert_eq!(at("1"), at("-1"));
    }

    #[test]
    fn csv_headers_lead_with_schema() {
        let text = String::from_utf8(to_csv(&fig3_rows(3).unwrap()).unwrap()).unwrap();
        assert!(text.starts_with("n,poa_exact,poa_asymptote,"));
    }

    #[test]
    fn atomic_write_into_missing_dir_fails_cleanly() {
        let dir = tempfile::tempdir().unwrap();
        let ok = dir.path().join("a.txt");
        let bad = dir.path().join("missing").join("b.txt");
        let err = write_all_atomic(&[(ok.clone(), b"x".to_vec()), (bad, b"y".to_vec())]).unwrap_err();
        assert!(matches!(err, CliError::Io(_)));
        assert!(!ok.exists());
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
    }
}
