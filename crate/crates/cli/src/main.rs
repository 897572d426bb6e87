use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use conelip::cone::{
    cone_lip, odot_scaled, ph_mcshane_extend, RayFile, ODOT_FACTOR,
};
use conelip::elements::{FreeElement, FreeElementFile, PhFreeElement};
use conelip::freespace::{
    kr_norm_with, ph_norm, phi, q_functional, quotient_dist_dual, quotient_dist_primal, theta,
    KrMethod, PH_NORM_TOL,
};
use conelip::mcshane::{mcshane, partial_lip, PartialField, Side};
use conelip::metric::{lip_const, PointedSpace, ScalarField, SpaceSpec};
use conelip::numeric::Arithmetic;
use conelip::verify::{self, digest, parse_suites, CaseRecord, RunReport};
use conelip::Error;

const EXIT_INVALID: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_SOLVER: u8 = 3;

/// Lipschitz constants, extensions and free-space norms on finite instances.
#[derive(Parser)]
#[command(name = "conelip", version)]
struct Cli {
    /// Print a JSON record {op, inputs-hash, value, witness, tolerance,
    /// certificate} instead of plain values.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Sup,
    Inf,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Sup => Side::Sup,
            SideArg::Inf => Side::Inf,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Lp,
    Flow,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Lipschitz constant of a field.
    Lip { space: PathBuf, field: PathBuf },
    /// McShane extension of a partial field.
    Extend {
        space: PathBuf,
        partial: PathBuf,
        #[arg(long, value_enum, default_value = "sup")]
        method: SideArg,
        /// Use this constant instead of the data's own (must not be smaller).
        #[arg(long)]
        lip: Option<f64>,
    },
    /// Extend a ph field from the listed rays to all rays of the file.
    PhExtend {
        rays: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        sub: Vec<usize>,
        #[arg(long, value_enum, default_value = "sup")]
        method: SideArg,
    },
    /// Lipschitz constant of a ph field on the cone over its rays.
    ConeLip { rays: PathBuf },
    /// The ⊙ product of two ph fields on the same rays.
    Odot {
        f: PathBuf,
        g: PathBuf,
        /// Plain direction-wise product without the 1/5 factor.
        #[arg(long)]
        raw: bool,
    },
    /// Free-space norm of a finitely supported element.
    KrNorm {
        space: PathBuf,
        element: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
    },
    /// Norm of a ph free element, by cutting planes.
    PhNorm {
        element: PathBuf,
        #[arg(long, default_value_t = PH_NORM_TOL)]
        tol: f64,
    },
    /// Distance from a field to the span of generators, and its dual.
    Quotient {
        space: PathBuf,
        field: PathBuf,
        #[arg(long, num_args = 0.., value_delimiter = ',')]
        generators: Vec<PathBuf>,
    },
    /// Sphere-sample element to ph free element.
    Theta { space: PathBuf, element: PathBuf },
    /// Ph free element with unit support to a sphere-sample element.
    Phi { element: PathBuf },
    /// Sum of coefficients, with the free norm it is bounded by.
    Q { space: PathBuf, element: PathBuf },
    /// Run seeded verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON report path; a CSV summary is written next to it.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Run only this case index (to replay a counterexample).
        #[arg(long)]
        case: Option<usize>,
    },
}

#[derive(Serialize)]
struct Record {
    op: &'static str,
    #[serde(rename = "inputs-hash")]
    inputs_hash: String,
    value: Value,
    witness: Value,
    tolerance: f64,
    certificate: Value,
}

struct Output {
    text: String,
    record: Record,
}

fn read<T: DeserializeOwned>(path: &Path, inputs: &mut Vec<Value>) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let raw: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    let parsed = serde_json::from_value(raw.clone())
        .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    inputs.push(raw);
    Ok(parsed)
}

fn read_space(path: &Path, inputs: &mut Vec<Value>) -> Result<PointedSpace, Error> {
    PointedSpace::from_spec(read::<SpaceSpec>(path, inputs)?)
}

fn read_field(path: &Path, inputs: &mut Vec<Value>) -> Result<ScalarField, Error> {
    let f: ScalarField = read(path, inputs)?;
    ScalarField::new(f.values().to_vec())
}

fn read_element(path: &Path, inputs: &mut Vec<Value>) -> Result<FreeElement, Error> {
    FreeElement::from_file(&read::<FreeElementFile>(path, inputs)?)
}

fn read_ph(path: &Path, inputs: &mut Vec<Value>) -> Result<PhFreeElement, Error> {
    let e: PhFreeElement = read(path, inputs)?;
    PhFreeElement::new(e.norm, e.dim, e.terms)
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(" ")
}

fn output(
    op: &'static str,
    inputs: Vec<Value>,
    options: Value,
    text: String,
    value: Value,
    witness: Value,
    tolerance: f64,
    certificate: Value,
) -> Output {
    Output {
        text,
        record: Record {
            op,
            inputs_hash: digest(&json!({"inputs": inputs, "options": options})),
            value,
            witness,
            tolerance,
            certificate,
        },
    }
}

fn execute(cmd: &Command) -> Result<Output, Error> {
    let mut inputs = Vec::new();
    let arithmetic = Arithmetic::from_env();
    match cmd {
        Command::Lip { space, field } => {
            let s = read_space(space, &mut inputs)?;
            let f = read_field(field, &mut inputs)?;
            let l = lip_const(&s, &f)?;
            Ok(output(
                "lip",
                inputs,
                Value::Null,
                num(l.value),
                json!(l.value),
                json!(l.pair),
                0.0,
                Value::Null,
            ))
        }
        Command::Extend {
            space,
            partial,
            method,
            lip,
        } => {
            let s = read_space(space, &mut inputs)?;
            let pf: PartialField = read(partial, &mut inputs)?;
            pf.validate()?;
            let side = Side::from(*method);
            let e = mcshane(&s, &pf, side, *lip)?;
            let l = partial_lip(&s, &pf)?;
            let le = lip_const(&s, &e)?.value;
            Ok(output(
                "extend",
                inputs,
                json!({"method": side, "lip": lip}),
                list(e.values()),
                json!(e.values()),
                Value::Null,
                conelip::mcshane::EXTENSION_TOL,
                json!({"lip_data": l, "lip_extension": le}),
            ))
        }
        Command::PhExtend { rays, sub, method } => {
            let (r, f) = read::<RayFile>(rays, &mut inputs)?.into_parts()?;
            let data = sub
                .iter()
                .map(|&i| f.values().get(i).copied().ok_or(Error::IndexOutOfRange(i)))
                .collect::<Result<Vec<_>, _>>()?;
            let side = Side::from(*method);
            let out = ph_mcshane_extend(&r, sub, &data, side)?;
            let l = cone_lip(&r.subsystem(sub)?, &conelip::cone::PhField::new(data)?)?;
            let lo = cone_lip(&r, &out)?;
            Ok(output(
                "ph-extend",
                inputs,
                json!({"sub": sub, "method": side}),
                list(out.values()),
                json!(out.values()),
                Value::Null,
                1e-9,
                json!({"lip_sub": l, "lip_extended": lo}),
            ))
        }
        Command::ConeLip { rays } => {
            let (r, f) = read::<RayFile>(rays, &mut inputs)?.into_parts()?;
            let c = cone_lip(&r, &f)?;
            Ok(output(
                "cone-lip",
                inputs,
                Value::Null,
                num(c),
                json!(c),
                Value::Null,
                conelip::search::REFINE_WIDTH,
                Value::Null,
            ))
        }
        Command::Odot { f, g, raw } => {
            let (rf, vf) = read::<RayFile>(f, &mut inputs)?.into_parts()?;
            let (rg, vg) = read::<RayFile>(g, &mut inputs)?.into_parts()?;
            if rf != rg {
                return Err(Error::RaySystemMismatch);
            }
            let factor = if *raw { 1.0 } else { ODOT_FACTOR };
            let p = odot_scaled(&rf, &vf, &vg, factor)?;
            let cert = json!({
                "lip_f": cone_lip(&rf, &vf)?,
                "lip_g": cone_lip(&rf, &vg)?,
                "lip_product": cone_lip(&rf, &p)?,
            });
            Ok(output(
                "odot",
                inputs,
                json!({"factor": factor}),
                list(p.values()),
                json!(p.values()),
                Value::Null,
                0.0,
                cert,
            ))
        }
        Command::KrNorm {
            space,
            element,
            method,
        } => {
            let s = read_space(space, &mut inputs)?;
            let mu = read_element(element, &mut inputs)?;
            let m = match method {
                MethodArg::Lp => KrMethod::Lp,
                MethodArg::Flow => KrMethod::Flow,
                MethodArg::Both => KrMethod::Both,
            };
            let r = kr_norm_with(&s, &mu, m, arithmetic)?;
            let witness = json!({
                "field": r.witness.as_ref().map(|w| w.values().to_vec()),
                "transport": r.transport,
            });
            Ok(output(
                "kr-norm",
                inputs,
                json!({"method": format!("{m:?}").to_lowercase()}),
                num(r.value),
                json!(r.value),
                witness,
                conelip::freespace::ROUTE_TOL,
                json!({"lp": r.lp_value, "flow": r.flow_value, "lp_gap": r.lp_gap}),
            ))
        }
        Command::PhNorm { element, tol } => {
            let mu = read_ph(element, &mut inputs)?;
            let r = ph_norm(&mu, *tol)?;
            Ok(output(
                "ph-norm",
                inputs,
                json!({"tol": tol}),
                num(r.value),
                json!(r.value),
                json!({"directions": r.directions, "values": r.witness}),
                *tol,
                json!({
                    "violation": r.violation,
                    "lower_bound": r.lower_bound,
                    "rounds": r.rounds,
                    "cuts": r.cuts,
                }),
            ))
        }
        Command::Quotient {
            space,
            field,
            generators,
        } => {
            let s = read_space(space, &mut inputs)?;
            let g = read_field(field, &mut inputs)?;
            let gens = generators
                .iter()
                .map(|p| read_field(p, &mut inputs))
                .collect::<Result<Vec<_>, _>>()?;
            let p = quotient_dist_primal(&s, &g, &gens, arithmetic)?;
            let d = quotient_dist_dual(&s, &g, &gens, arithmetic)?;
            let gap = (p.dist - d.value).abs();
            let text = format!(
                "primal {}\ndual {}\ngap {}\ncoefficients {}\nmu {}",
                num(p.dist),
                num(d.value),
                num(gap),
                list(&p.coeffs),
                serde_json::to_string(&d.mu.to_file()).expect("serializable"),
            );
            let exact = match (&p.exact, &d.exact) {
                (Some(a), Some(b)) => json!({"primal": a.to_string(), "dual": b.to_string()}),
                _ => Value::Null,
            };
            Ok(output(
                "quotient",
                inputs,
                Value::Null,
                text,
                json!({"primal": p.dist, "dual": d.value, "gap": gap}),
                json!({"coefficients": p.coeffs, "mu": d.mu.to_file()}),
                1e-7,
                json!({
                    "primal_lp_gap": p.lp.gap,
                    "dual_lp_gap": d.lp.gap,
                    "exact": exact,
                }),
            ))
        }
        Command::Theta { space, element } => {
            let s = read_space(space, &mut inputs)?;
            let mu = read_element(element, &mut inputs)?;
            let t = theta(&s, &mu)?;
            let v = serde_json::to_value(&t).expect("serializable");
            Ok(output(
                "theta",
                inputs,
                Value::Null,
                v.to_string(),
                v,
                Value::Null,
                0.0,
                Value::Null,
            ))
        }
        Command::Phi { element } => {
            let mu = read_ph(element, &mut inputs)?;
            let (s, e) = phi(&mu)?;
            let v = json!({"space": s.to_spec(), "element": e.to_file()});
            Ok(output(
                "phi",
                inputs,
                Value::Null,
                v.to_string(),
                v,
                Value::Null,
                0.0,
                Value::Null,
            ))
        }
        Command::Q { space, element } => {
            let s = read_space(space, &mut inputs)?;
            let mu = read_element(element, &mut inputs)?;
            let q = q_functional(&s, &mu)?;
            let kr = kr_norm_with(&s, &mu, KrMethod::Both, arithmetic)?.value;
            Ok(output(
                "q",
                inputs,
                Value::Null,
                num(q),
                json!(q),
                Value::Null,
                0.0,
                json!({"kr_norm": kr}),
            ))
        }
        Command::Verify { .. } => unreachable!("handled separately"),
    }
}

fn exit_for(e: &Error) -> u8 {
    if e.is_solver_failure() {
        EXIT_SOLVER
    } else {
        EXIT_INVALID
    }
}

fn dump_counterexample(r: &CaseRecord, report: Option<&Path>) -> Result<PathBuf, Error> {
    let name = format!("counterexample-{}-{}.json", r.suite, r.index);
    let path = match report {
        Some(p) => {
            let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
            p.with_file_name(format!("{stem}.{name}"))
        }
        None => PathBuf::from(format!("conelip-{name}")),
    };
    let body = serde_json::to_string_pretty(&r.counterexample).expect("serializable");
    std::fs::write(&path, body + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn summarize(report: &RunReport) {
    let mut names: Vec<&str> = report.records.iter().map(|r| r.suite.as_str()).collect();
    names.dedup();
    for name in names {
        let recs: Vec<&CaseRecord> = report.records.iter().filter(|r| r.suite == name).collect();
        let passed = recs.iter().filter(|r| r.pass).count();
        let status = if passed == recs.len() { "PASS" } else { "FAIL" };
        println!("{status} {name}: {passed}/{} cases", recs.len());
    }
    for r in report.records.iter().filter(|r| !r.pass) {
        let why = match &r.error {
            Some(e) => format!("error: {e}"),
            None => format!("residual {:e} > tolerance {:e}", r.residual, r.tolerance),
        };
        eprintln!("failed {} #{}: {} ({why})", r.suite, r.index, r.relation);
    }
}

fn run_verify(
    suite: &str,
    cases: usize,
    seed: u64,
    report_path: Option<&Path>,
    case: Option<usize>,
    json_out: bool,
) -> Result<u8, Error> {
    let suites = parse_suites(suite)?;
    let start = Instant::now();
    let report = match case {
        Some(i) => {
            let records: Vec<CaseRecord> =
                suites.iter().map(|&s| verify::run_case(s, seed, i)).collect();
            let passed = records.iter().filter(|r| r.pass).count();
            RunReport {
                suite: suite.to_string(),
                seed,
                version: env!("CARGO_PKG_VERSION").to_string(),
                case_count: records.len(),
                passed,
                failed: records.len() - passed,
                records,
            }
        }
        None => verify::run_suites(&suites, cases, seed),
    };
    let elapsed = start.elapsed();
    if let Some(p) = report_path {
        let csv = verify::emit_report(&report, p)?;
        eprintln!("report: {} and {}", p.display(), csv.display());
    }
    if json_out {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        summarize(&report);
    }
    for r in report.records.iter().filter(|r| !r.pass) {
        let p = dump_counterexample(r, report_path)?;
        eprintln!("counterexample: {}", p.display());
    }
    eprintln!("wall time: {:.3} s", elapsed.as_secs_f64());
    Ok(if report.all_passed() { 0 } else { EXIT_VERIFY })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    let code = match &cli.command {
        Command::Verify {
            suite,
            cases,
            seed,
            report,
            case,
        } => run_verify(suite, *cases, *seed, report.as_deref(), *case, cli.json)
            .unwrap_or_else(|e| {
                eprintln!("error: {e}");
                exit_for(&e)
            }),
        cmd => match execute(cmd) {
            Ok(out) => {
                if cli.json {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&out.record).expect("serializable")
                    );
                } else {
                    println!("{}", out.text);
                }
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit_for(&e)
            }
        },
    };
    ExitCode::from(code)
}
