//! Experiment configuration, config hashing, and the CSV/JSON writers used
//! by the command-line front end. Every CSV starts with a comment line
//! carrying the config hash so outputs are traceable to their inputs.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::burgers::BranchSet;
use crate::error::{Error, Result};
use crate::fourier::TorusFunction;
use crate::properties::PropertyReport;
use crate::raney::LemmaRow;
use crate::spectral::SweepRow;

/// Everything that determines an experiment's numbers; the output location
/// is deliberately excluded so moving results does not change the hash.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub datum: TorusFunction,
    pub times: Vec<f64>,
    pub order: usize,
    pub k_max: usize,
    pub grid_n: usize,
    pub n_quad: usize,
    pub epsilons: Vec<f64>,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        let mut out = String::with_capacity(64);
        for byte in digest {
            write!(out, "{byte:02x}").unwrap();
        }
        out
    }
}

pub fn load_datum(path: &Path) -> Result<TorusFunction> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidArgument(format!("bad datum {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::InvalidArgument(format!("cannot create {}: {e}", dir.display())))?;
    }
    std::fs::write(path, contents)
        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

fn csv_header(hash: &str, columns: &str) -> String {
    format!("# config={hash}\n{columns}\n")
}

/// `x,value` rows at 17 significant digits.
pub fn write_profile_csv(path: &Path, hash: &str, rows: &[(f64, f64)]) -> Result<()> {
    let mut out = csv_header(hash, "x,value");
    for (x, v) in rows {
        writeln!(out, "{x:.16e},{v:.16e}").unwrap();
    }
    write_file(path, &out)
}

/// `epsilon,k_max,max_abs_error` rows.
pub fn write_sweep_csv(path: &Path, hash: &str, rows: &[SweepRow]) -> Result<()> {
    let mut out = csv_header(hash, "epsilon,k_max,max_abs_error");
    for r in rows {
        writeln!(out, "{:.16e},{},{:.16e}", r.epsilon, r.k_max, r.max_abs_error).unwrap();
    }
    write_file(path, &out)
}

/// `n,l1_error` rows for the Trotter convergence ladder.
pub fn write_trotter_csv(path: &Path, hash: &str, rows: &[(usize, f64)]) -> Result<()> {
    let mut out = csv_header(hash, "n,l1_error");
    for (n, e) in rows {
        writeln!(out, "{n},{e:.16e}").unwrap();
    }
    write_file(path, &out)
}

/// Ragged branch dump: `t,x,n_roots,caustic,y0,…` with one row per point.
pub fn write_branches_csv(path: &Path, hash: &str, rows: &[BranchSet]) -> Result<()> {
    let mut out = csv_header(hash, "t,x,n_roots,caustic,y0,...");
    for b in rows {
        write!(out, "{:.16e},{:.16e},{},{}", b.t, b.x, b.roots.len(), b.caustic as u8).unwrap();
        for y in &b.roots {
            write!(out, ",{y:.16e}").unwrap();
        }
        out.push('\n');
    }
    write_file(path, &out)
}

/// `epsilon,k,re,im` rows of dispersive coefficients.
pub fn write_coefficients_csv(
    path: &Path,
    hash: &str,
    rows: &[(f64, usize, f64, f64)],
) -> Result<()> {
    let mut out = csv_header(hash, "epsilon,k,re,im");
    for (eps, k, re, im) in rows {
        writeln!(out, "{eps:.16e},{k},{re:.16e},{im:.16e}").unwrap();
    }
    write_file(path, &out)
}

/// `k,d,M,words_checked,failures` verification table.
pub fn write_lemma_csv(path: &Path, hash: &str, rows: &[LemmaRow]) -> Result<()> {
    let mut out = csv_header(hash, "k,d,M,words_checked,failures");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.k, r.d, r.m_bound, r.words_checked, r.failures
        )
        .unwrap();
    }
    write_file(path, &out)
}

/// The property-suite report as a JSON array.
pub fn write_report_json(path: &Path, reports: &[PropertyReport]) -> Result<()> {
    let json = serde_json::to_string_pretty(reports).expect("reports serialize");
    write_file(path, &json)
}
