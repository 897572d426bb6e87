//! Seeded verification suites and their reports.

pub mod checks;
pub mod gen;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::norm::NormKind;
use checks::Outcome;
use gen::CaseRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Lipschitz,
    Mcshane,
    Cone,
    Algebra,
    Freespace,
    PhIsometry,
    Duality,
    Annihilator,
    ThetaPhi,
    QBound,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Lipschitz,
        Suite::Mcshane,
        Suite::Cone,
        Suite::Algebra,
        Suite::Freespace,
        Suite::PhIsometry,
        Suite::Duality,
        Suite::Annihilator,
        Suite::ThetaPhi,
        Suite::QBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lipschitz => "lipschitz",
            Suite::Mcshane => "mcshane",
            Suite::Cone => "cone",
            Suite::Algebra => "algebra",
            Suite::Freespace => "freespace",
            Suite::PhIsometry => "ph-isometry",
            Suite::Duality => "duality",
            Suite::Annihilator => "annihilator",
            Suite::ThetaPhi => "theta-phi",
            Suite::QBound => "q-bound",
        }
    }

    /// Case `index` of this suite, drawn from `rng`. Suites with several
    /// checks cycle through them by index.
    pub fn case(self, index: usize, rng: &mut CaseRng) -> Outcome {
        use checks::*;
        fn pick(list: &[fn(&mut CaseRng) -> Outcome], index: usize, rng: &mut CaseRng) -> Outcome {
            list[index % list.len()](rng)
        }
        match self {
            Suite::Lipschitz => pick(
                &[lip_homogeneity, lip_subadditivity, lip_restriction, lip_cache_identity],
                index,
                rng,
            ),
            Suite::Mcshane => pick(
                &[
                    mcshane_preserves_lip,
                    mcshane_order,
                    mcshane_lp_sandwich,
                    mcshane_exact_lip,
                    mcshane_monotone,
                ],
                index,
                rng,
            ),
            Suite::Cone => pick(
                &[
                    cone_real_line,
                    cone_lambda_sandwich,
                    cone_lambda_roundtrip,
                    cone_ph_extension,
                    cone_two_step_extension,
                    cone_radial_bound,
                    cone_ball_projection,
                    cone_sample_domination,
                ],
                index,
                rng,
            ),
            Suite::Algebra => pick(
                &[algebra_odot, algebra_pushforward_isometry, algebra_pairing_bilinear],
                index,
                rng,
            ),
            Suite::Freespace => pick(
                &[
                    freespace_routes,
                    freespace_homogeneity,
                    freespace_triangle,
                    freespace_molecule,
                ],
                index,
                rng,
            ),
            Suite::PhIsometry => ph_isometry(rng, NormKind::ALL[index % 3]),
            Suite::Duality => {
                // Exact and ph-sampled cases are interleaved sparsely.
                match index % 10 {
                    3 => duality_quotient_exact(rng),
                    6 => duality_barycenter(rng),
                    9 => duality_ph_quotient(rng),
                    _ => duality_quotient(rng),
                }
            }
            Suite::Annihilator => {
                if index % 4 == 3 {
                    annihilator_pairing(rng)
                } else {
                    annihilator_ph_norm(rng, index)
                }
            }
            Suite::ThetaPhi => pick(&[theta_phi_bounds, theta_phi_roundtrip], index, rng),
            Suite::QBound => q_bound(rng),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown suite {s:?}")))
    }
}

/// A suite name or `all`.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    if s == "all" {
        Ok(Suite::ALL.to_vec())
    } else {
        Ok(vec![s.parse()?])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseRecord {
    pub suite: String,
    pub index: usize,
    pub operation: String,
    pub relation: String,
    pub inputs_digest: String,
    pub measured: std::collections::BTreeMap<String, f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// The full instance, kept for failing cases only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub seed: u64,
    pub version: String,
    pub case_count: usize,
    pub passed: usize,
    pub failed: usize,
    pub records: Vec<CaseRecord>,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    fn from_records(suite: String, seed: u64, records: Vec<CaseRecord>) -> Self {
        let passed = records.iter().filter(|r| r.pass).count();
        RunReport {
            suite,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            case_count: records.len(),
            passed,
            failed: records.len() - passed,
            records,
        }
    }
}

/// Hex SHA-256 of the compact JSON encoding of `v`.
pub fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(v.to_string().as_bytes()))
}

fn record(suite: Suite, seed: u64, index: usize, o: Outcome) -> CaseRecord {
    let pass = o.passed();
    let inputs_digest = digest(&o.instance);
    let counterexample = (!pass).then(|| {
        serde_json::json!({
            "suite": suite.name(),
            "seed": seed,
            "index": index,
            "operation": o.operation,
            "relation": o.property,
            "instance": o.instance,
        })
    });
    CaseRecord {
        suite: suite.name().to_string(),
        index,
        operation: o.operation.to_string(),
        relation: o.property.to_string(),
        inputs_digest,
        measured: o.measured,
        residual: o.residual,
        tolerance: o.tolerance,
        pass,
        error: o.error,
        counterexample,
    }
}

/// Runs one case; regenerates exactly the instance a full run would draw.
pub fn run_case(suite: Suite, seed: u64, index: usize) -> CaseRecord {
    let mut rng = gen::case_rng(seed, suite.name(), index);
    record(suite, seed, index, suite.case(index, &mut rng))
}

/// Runs `cases` cases of every suite in `suites`, in parallel; records are
/// ordered by suite, then case index.
pub fn run_suites(suites: &[Suite], cases: usize, seed: u64) -> RunReport {
    let name = if suites.len() == Suite::ALL.len() {
        "all".to_string()
    } else {
        suites.iter().map(|s| s.name()).collect::<Vec<_>>().join(",")
    };
    let jobs: Vec<(Suite, usize)> = suites
        .iter()
        .flat_map(|&s| (0..cases).map(move |i| (s, i)))
        .collect();
    let records = jobs
        .into_par_iter()
        .map(|(s, i)| run_case(s, seed, i))
        .collect();
    RunReport::from_records(name, seed, records)
}

pub fn run_suite(suite: Suite, cases: usize, seed: u64) -> RunReport {
    run_suites(&[suite], cases, seed)
}

/// The CSV summary that accompanies a report at `path`.
pub fn csv_path(path: &Path) -> PathBuf {
    path.with_extension("csv")
}

/// Writes the JSON report to `path` and a one-row-per-case CSV next to it.
/// Returns the CSV path.
pub fn emit_report(report: &RunReport, path: &Path) -> Result<PathBuf> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut json = serde_json::to_string_pretty(report).expect("serializable");
    json.push('\n');
    std::fs::write(path, json).map_err(io)?;

    let csv_file = csv_path(path);
    let csv_err = |e: csv::Error| Error::Io(format!("{}: {e}", csv_file.display()));
    let mut w = csv::Writer::from_path(&csv_file).map_err(csv_err)?;
    w.write_record([
        "suite",
        "index",
        "operation",
        "inputs_digest",
        "pass",
        "residual",
        "tolerance",
    ])
    .map_err(csv_err)?;
    for r in &report.records {
        w.write_record([
            r.suite.clone(),
            r.index.to_string(),
            r.operation.clone(),
            r.inputs_digest.clone(),
            r.pass.to_string(),
            format!("{:.16e}", r.residual),
            format!("{:.16e}", r.tolerance),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Io(format!("{}: {e}", csv_file.display())))?;
    Ok(csv_file)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("conelip-verify-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(parse_suites("all").unwrap().len(), 10);
        assert!(parse_suites("nope").is_err());
    }

    #[test]
    fn empty_suite_has_valid_schema() {
        let r = run_suite(Suite::Cone, 0, 1);
        assert_eq!(r.case_count, 0);
        let p = tmp("empty.json");
        emit_report(&r, &p).unwrap();
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert_eq!(v["records"].as_array().unwrap().len(), 0);
        let csv = std::fs::read_to_string(csv_path(&p)).unwrap();
        assert_eq!(csv.lines().count(), 1);
    }

    #[test]
    fn single_case_records_a_residual() {
        let r = run_suite(Suite::Lipschitz, 1, 1);
        let v = serde_json::to_value(&r).unwrap();
        assert!(v["records"][0]["residual"].is_number());
        assert!(r.all_passed());
    }

    #[test]
    fn reports_are_byte_identical_across_runs() {
        let a = tmp("a.json");
        let b = tmp("b.json");
        emit_report(&run_suite(Suite::Freespace, 12, 5), &a).unwrap();
        emit_report(&run_suite(Suite::Freespace, 12, 5), &b).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert_eq!(
            std::fs::read(csv_path(&a)).unwrap(),
            std::fs::read(csv_path(&b)).unwrap()
        );
    }

    #[test]
    fn single_case_replay_matches_the_full_run() {
        let full = run_suite(Suite::Duality, 8, 3);
        assert_eq!(run_case(Suite::Duality, 3, 5), full.records[5]);
    }
}
