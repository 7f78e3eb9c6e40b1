//! `bilin`: command-line front end for framed modules, bilinear points and
//! small tensors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use bilin_core::bilin::{
    bilin_dims, bilin_tangent, factor_membership, hom_triple_space_dim, validate_bilin, BilinPoint,
};
use bilin_core::cases222::{classify_point_222, enumerate_222, named_tensor, verify_limit, Named, NAMES};
use bilin_core::exactalg::{Field, Scalar};
use bilin_core::modcore::{validate_framed, FramedModule};
use bilin_core::quot::{degenerate_grassmannian_check, hom_km_univariate, quot2_limit_family, quot_tangent};
use bilin_core::tensorlab::{
    brute_force_rank_fq, classify_2x2x2, classify_2x2x2_checked, conciseness, secant_dimension, Tensor3,
};
use bilin_core::Error;

#[derive(Parser, Debug)]
#[command(name = "bilin", version, about = "Framed modules, bilinear points and small tensors")]
struct Cli {
    #[command(flatten)]
    cfg: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Field for generated data: "Q" or "F:<p>".
    #[arg(long, global = true, default_value = "Q")]
    field: Field,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file for the JSON report; tables also get a `.csv` sibling.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Upper bound on the size of exhaustive enumerations.
    #[arg(long, global = true, default_value_t = 1 << 24)]
    cap: u128,
    /// Run the extra consistency checks.
    #[arg(long, global = true)]
    check: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a framed module or bilinear point file.
    Validate {
        #[arg(long)]
        point: PathBuf,
    },
    /// Tangent space at a point.
    Tangent {
        #[command(subcommand)]
        kind: TangentKind,
    },
    /// Factorization test for a framed target through M1 (x)_S M2.
    Member {
        #[arg(long)]
        m1: PathBuf,
        #[arg(long)]
        m2: PathBuf,
        #[arg(long)]
        m3: PathBuf,
    },
    /// Dimension table over a grid, e.g. `--grid n=1..2 d=2..3 r=2..4`.
    Dims {
        #[arg(long, num_args = 1.., default_values_t = ["n=1..2".to_string(), "d=2..3".to_string(), "r=2..4".to_string()])]
        grid: Vec<String>,
    },
    /// Dimension report and secant witness for one (n, d, r1, r2).
    Reducibility {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r1: usize,
        #[arg(long)]
        r2: usize,
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
    /// Secant variety dimension of the Segre of three copies of P^{d-1}.
    SecantDim {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
    /// Classify a 2x2x2 tensor, a named tensor, or enumerate all points (`--enumerate q=2`).
    Classify222 {
        #[arg(long)]
        tensor: Option<PathBuf>,
        #[arg(long)]
        named: Option<String>,
        #[arg(long)]
        point: Option<PathBuf>,
        #[arg(long)]
        enumerate: Option<String>,
    },
    /// Limit checks for the named tensor families and, with `--point`, the
    /// degeneration family of a length-2 framed module.
    Limits {
        #[arg(long, value_delimiter = ',', default_values_t = [1i64, 2, 3])]
        samples: Vec<i64>,
        #[arg(long)]
        point: Option<PathBuf>,
    },
    /// Count points of the degenerate locus over F_q against the Gaussian binomial.
    Grcount {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        q: u64,
    },
    /// Exhaustive rank over the finite field given by `--field`.
    BruteforceRank {
        #[arg(long)]
        tensor: Option<PathBuf>,
        #[arg(long)]
        named: Option<String>,
        #[arg(long, default_value_t = 4)]
        rmax: usize,
    },
}

#[derive(Subcommand, Debug)]
enum TangentKind {
    Quot {
        #[arg(long)]
        point: PathBuf,
    },
    Bilin {
        #[arg(long)]
        point: PathBuf,
    },
}

enum Failure {
    /// Exit 1.
    Invalid(String),
    /// Exit 2.
    Cap(String),
    /// Exit 3.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            Error::Parse(_) | Error::Shape(_) | Error::InvalidField(_) | Error::MixedField(..) => {
                Failure::Input(e.to_string())
            }
            Error::InvalidArgument(_) => Failure::Input(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type Outcome = Result<Report, Failure>;

/// What a command produced: a JSON document, optionally a CSV table, and
/// whether the inputs passed validation.
struct Report {
    json: Value,
    csv: Option<String>,
    ok: bool,
}

impl Report {
    fn new(v: impl Serialize) -> Self {
        Report { json: serde_json::to_value(v).expect("serializable"), csv: None, ok: true }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: cannot read: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_tensor(cfg: &RunConfig, file: &Option<PathBuf>, named: &Option<String>) -> Result<Tensor3, Failure> {
    match (file, named) {
        (Some(p), None) => read_json(p),
        (None, Some(name)) => match named_tensor(cfg.field, name)? {
            Named::Fixed(t) => Ok(t),
            Named::Family(_) => Err(Failure::Input(format!("{name} is a family; use `limits`"))),
        },
        _ => Err(Failure::Input("give exactly one of --tensor or --named".into())),
    }
}

fn run(cfg: &RunConfig, cmd: &Command) -> Outcome {
    match cmd {
        Command::Validate { point } => {
            let raw: Value = read_json(point)?;
            if raw.get("M1").is_some() {
                let b: BilinPoint = read_json(point)?;
                let v = validate_bilin(&b);
                Ok(Report { ok: v.is_valid(), ..Report::new(json!({"kind": "bilin", "valid": v.is_valid(), "report": v})) })
            } else {
                let m: FramedModule = read_json(point)?;
                let v = validate_framed(&m);
                Ok(Report { ok: v.is_valid(), ..Report::new(json!({"kind": "framed", "valid": v.is_valid(), "report": v})) })
            }
        }
        Command::Tangent { kind: TangentKind::Quot { point } } => {
            let m: FramedModule = read_json(point)?;
            let t = quot_tangent(&m)?;
            let mut v = serde_json::to_value(&t).unwrap();
            if cfg.check && m.n() == 1 {
                v["hom_dim"] = json!(hom_km_univariate(&m)?.dim);
            }
            Ok(Report { json: v, csv: None, ok: true })
        }
        Command::Tangent { kind: TangentKind::Bilin { point } } => {
            let b: BilinPoint = read_json(point)?;
            let t = bilin_tangent(&b)?;
            let mut v = serde_json::to_value(&t).unwrap();
            if cfg.check && b.n() == 1 {
                v["hom_triple_dim"] = json!(hom_triple_space_dim(&b)?);
            }
            Ok(Report { json: v, csv: None, ok: true })
        }
        Command::Member { m1, m2, m3 } => {
            let (a, b, c): (FramedModule, FramedModule, FramedModule) = (read_json(m1)?, read_json(m2)?, read_json(m3)?);
            let mem = factor_membership(&a, &b, &c)?;
            Ok(Report::new(json!({"member": mem.is_member(), "result": mem})))
        }
        Command::Dims { grid } => dims_table(grid),
        Command::Reducibility { n, d, r1, r2, trials } => {
            let rep = bilin_dims(*n, *d, *r1, *r2)?;
            let secant = secant_dimension(cfg.field, *d, *d, *trials, cfg.seed)?;
            Ok(Report::new(json!({"dimensions": rep, "secant_witness": secant})))
        }
        Command::SecantDim { d, r, trials } => Ok(Report::new(secant_dimension(cfg.field, *d, *r, *trials, cfg.seed)?)),
        Command::Classify222 { tensor, named, point, enumerate } => {
            if let Some(arg) = enumerate {
                let q: u64 = arg
                    .strip_prefix("q=")
                    .unwrap_or(arg)
                    .parse()
                    .map_err(|_| Failure::Input(format!("--enumerate: expected q=<prime>, got {arg:?}")))?;
                let census = enumerate_222(q, cfg.cap)?;
                let csv = census.to_csv();
                let ok = census.violations.is_empty() && census.border_rank_3 == 0;
                return Ok(Report { csv: Some(csv), ok, ..Report::new(census) });
            }
            if let Some(p) = point {
                let b: BilinPoint = read_json(p)?;
                return Ok(Report::new(classify_point_222(&b)?));
            }
            let t = load_tensor(cfg, tensor, named)?;
            let class = if cfg.check { classify_2x2x2_checked(&t)? } else { classify_2x2x2(&t)? };
            Ok(Report::new(json!({"classification": class, "concise": conciseness(&t)})))
        }
        Command::Limits { samples, point } => limits(cfg, samples, point),
        Command::Grcount { d, r, q } => {
            let rep = degenerate_grassmannian_check(*d, *r, *q, cfg.cap)?;
            Ok(Report { ok: rep.matches, ..Report::new(rep) })
        }
        Command::BruteforceRank { tensor, named, rmax } => {
            let t = load_tensor(cfg, tensor, named)?;
            let rank = brute_force_rank_fq(&t, *rmax, cfg.cap)?;
            let geometric = (t.dims() == [2, 2, 2]).then(|| classify_2x2x2(&t)).transpose()?;
            Ok(Report::new(json!({"field": t.field().to_string(), "field_rank": rank, "geometric": geometric})))
        }
    }
}

fn parse_range(arg: &str) -> Result<(String, Vec<usize>), Failure> {
    let bad = || Failure::Input(format!("--grid: expected name=a..b or name=a, got {arg:?}"));
    let (name, range) = arg.split_once('=').ok_or_else(bad)?;
    let (lo, hi) = match range.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v: usize = range.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((name.trim().to_string(), (lo..=hi).collect()))
}

fn dims_table(grid: &[String]) -> Outcome {
    let (mut ns, mut ds, mut r1s, mut r2s) = (vec![1], vec![2], vec![2], vec![2]);
    for arg in grid.iter().flat_map(|g| g.split_whitespace()) {
        let (name, vals) = parse_range(arg)?;
        match name.as_str() {
            "n" => ns = vals,
            "d" => ds = vals,
            "r" => {
                r1s = vals.clone();
                r2s = vals;
            }
            "r1" => r1s = vals,
            "r2" => r2s = vals,
            other => return Err(Failure::Input(format!("--grid: unknown parameter {other:?}"))),
        }
    }
    let mut rows = Vec::new();
    let mut csv = String::from("n,d,r1,r2,main_dim,degenerate_dim,reducible_by_count,reducible_by_secant,irreducible\n");
    for &n in &ns {
        for &d in &ds {
            for &r1 in &r1s {
                for &r2 in &r2s {
                    let rep = bilin_dims(n, d, r1, r2)?;
                    csv.push_str(&format!(
                        "{n},{d},{r1},{r2},{},{},{},{},{}\n",
                        rep.main_dim,
                        rep.degenerate_dim.map_or(String::new(), |v| v.to_string()),
                        rep.reducible_by_count,
                        rep.reducible_by_secant,
                        rep.irreducible
                    ));
                    rows.push(rep);
                }
            }
        }
    }
    Ok(Report { csv: Some(csv), ..Report::new(json!({"cells": rows})) })
}

fn limits(cfg: &RunConfig, samples: &[i64], point: &Option<PathBuf>) -> Outcome {
    let field = cfg.field;
    let ts: Vec<Scalar> = samples.iter().map(|&t| field.from_i64(t)).collect();
    if ts.iter().any(Scalar::is_zero) {
        return Err(Failure::Input("--samples: every sample must be nonzero in the field".into()));
    }
    let mut ok = true;
    let mut out = json!({});
    if let Some(p) = point {
        let m: FramedModule = read_json(p)?;
        let fam = quot2_limit_family(&m)?;
        let recovers = fam.at(&field.zero())? == m;
        let mut at = Vec::new();
        for t in &ts {
            let mt = fam.at(t)?;
            let valid = validate_framed(&mt).is_valid();
            let distinct = mt.actions().iter().any(|x| bilin_core::exactalg::charpoly(x).roots().0.len() == 2);
            ok &= valid && distinct;
            at.push(json!({"t": t, "valid": valid, "two_points": distinct, "module": mt}));
        }
        ok &= recovers;
        out["quot2"] = json!({"branch": fam.branch, "recovers_base": recovers, "samples": at});
    } else {
        let mut fams = serde_json::Map::new();
        for (fam, base) in [("mu2_t", "mu2"), ("mu3_t", "mu3"), ("mu4_t", "mu4")] {
            let (Named::Family(f), Named::Fixed(target)) = (named_tensor(field, fam)?, named_tensor(field, base)?) else {
                unreachable!("fixed names")
            };
            let rep = verify_limit(&f, &target, &ts)?;
            ok &= rep.limit_matches && rep.samples.iter().all(|s| s.class.rank == 2);
            fams.insert(fam.to_string(), serde_json::to_value(rep).unwrap());
        }
        out["families"] = Value::Object(fams);
        out["names"] = json!(NAMES);
    }
    Ok(Report { json: out, csv: None, ok })
}

fn emit(cfg: &RunConfig, report: &Report) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(&report.json).expect("serializable") + "\n";
    let io = |p: &Path, e: std::io::Error| Failure::Input(format!("{}: cannot write: {e}", p.display()));
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| io(path, e))?;
            if let Some(csv) = &report.csv {
                let csv_path = path.with_extension("csv");
                std::fs::write(&csv_path, csv).map_err(|e| io(&csv_path, e))?;
            }
        }
        None => match &report.csv {
            Some(csv) => print!("{csv}"),
            None => print!("{text}"),
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let cfg = cli.cfg;
    let result = match cfg.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(|| run(&cfg, &cli.command)),
            Err(e) => Err(Failure::Input(format!("--workers: {e}"))),
        },
        None => run(&cfg, &cli.command),
    };
    let result = result.and_then(|r| emit(&cfg, &r).map(|_| r.ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
