//! Command-line front end. `run` parses arguments, executes one subcommand,
//! writes its artifacts, and returns the process exit code: 0 on success, 1
//! when the run completed with anomalies or failed checks, 2 on usage errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::archimedean::{constant_cfin, constant_cinf, volume_all, VolumeEstimate};
use crate::census::{census, cross_check_direct, CensusConfig, CensusReport};
use crate::error::{Error, Result};
use crate::exactmath::{format_rational, Integers, Interval, Rationals, Ring, RingTag, ZMod};
use crate::local::{
    euler_factor_identity, jacobian_verify, local_lambda_integral, orbit_route_integral, FamilySpec, LocalFactorJson,
};
use crate::reduction::{canonical_form_z, reduce_over_field, ReductionJson};
use crate::rep::{ReducibleMatrix, SymJson, SymMatrix};

#[derive(Parser, Debug)]
#[command(name = "redorb", version, about = "Reducible orbit counts for the split orthogonal group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// C_n^fin, the volumes V^(r)(1), and C_{n,r}^inf.
    Constants(ConstantsArgs),
    /// The lambda-density factor of a family at one prime.
    LocalDensity(LocalDensityArgs),
    /// Reduce a matrix to its section form (fields) or canonical form (Z).
    Reduce(ReduceArgs),
    /// Global orbit census over a height sweep.
    Census(CensusArgs),
    /// Exact identity checks.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Args, Debug)]
struct ConstantsArgs {
    #[arg(long)]
    n: usize,
    /// Restrict to one real-root count.
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    precision: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LocalDensityArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: u64,
    /// JSON family file; the full family when omitted.
    #[arg(long)]
    family: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    jmax: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    /// JSON matrix `{n, ring, entries: [[i, j, "v"], ...]}`.
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[arg(long)]
    n: usize,
    /// Heights, comma separated; the report covers every value.
    #[arg(long, value_delimiter = ',', required = true)]
    x: Vec<u64>,
    /// Real-root count to report; all strata when omitted.
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    family: Option<PathBuf>,
    #[arg(long, default_value_t = 4_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Also run the direct enumeration (n = 3, small X) and compare.
    #[arg(long)]
    cross_check: bool,
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Euler factor identity at every prime up to `pmax`.
    Euler {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        pmax: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Recompute |J|_p from point counts.
    Jacobian {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsJson {
    #[serde(rename = "Cfin")]
    pub cfin: [String; 2],
    #[serde(rename = "Vr")]
    pub vr: BTreeMap<String, VolumeEstimate>,
    #[serde(rename = "Cinf")]
    pub cinf: BTreeMap<String, [String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalDensityJson {
    pub n: usize,
    pub lambda: LocalFactorJson,
    pub orbit_route: Option<LocalFactorJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReduceOutput {
    Section(ReductionJson),
    Canonical { canonical: SymJson },
}

fn interval_strings(i: &Interval) -> [String; 2] {
    [format!("{:.15e}", i.lo), format!("{:.15e}", i.hi)]
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, body)?,
        None => println!("{body}"),
    }
    Ok(())
}

fn read_family(path: &Option<PathBuf>, n: usize) -> Result<FamilySpec> {
    let fam = match path {
        Some(p) => serde_json::from_str(&fs::read_to_string(p)?).map_err(|e| Error::Parse(e.to_string()))?,
        None => FamilySpec::full(n),
    };
    if fam.n != n {
        return Err(Error::Usage(format!("family is for n = {}, not {n}", fam.n)));
    }
    fam.validate()?;
    Ok(fam)
}

fn reduce_field<R: Ring>(ring: R, j: &SymJson) -> Result<ReduceOutput> {
    let b = ReducibleMatrix::new(SymMatrix::from_json(ring, j)?)?;
    Ok(ReduceOutput::Section(reduce_over_field(&b)?.to_json()))
}

fn reduce(j: &SymJson) -> Result<ReduceOutput> {
    match j.ring {
        RingTag::Rationals => reduce_field(Rationals, j),
        RingTag::IntegersMod(m) => reduce_field(ZMod::new(m)?, j),
        RingTag::Integers => {
            let b = ReducibleMatrix::new(SymMatrix::from_json(Integers, j)?)?;
            Ok(ReduceOutput::Canonical { canonical: canonical_form_z(&b)?.matrix().as_sym().to_json() })
        }
        ref t => Err(Error::Usage(format!("reduce does not support ring {t}"))),
    }
}

/// CSV rows of a census sweep.
pub fn census_csv(rows: &[CensusReport], w: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["X", "r", "empirical", "predicted_lo", "predicted_hi", "ratio", "anomalies"]).map_err(io)?;
    for r in rows {
        w.write_record([
            r.x.to_string(),
            r.r.map_or("all".into(), |v| v.to_string()),
            r.empirical.to_string(),
            format!("{:.6}", r.predicted.lo),
            format!("{:.6}", r.predicted.hi),
            format!("{:.6}", r.ratio),
            r.anomalies.len().to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

fn run_command(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Constants(a) => {
            let cfin = constant_cfin(a.n, a.precision);
            let vols = volume_all(a.n, a.samples, a.seed)?;
            if let Some(r) = a.r {
                crate::archimedean::check_parity(a.n, r)?;
            }
            let mut vr = BTreeMap::new();
            let mut cinf = BTreeMap::new();
            for v in vols.into_iter().filter(|v| a.r.is_none_or(|r| r == v.r)) {
                cinf.insert(v.r.to_string(), interval_strings(&constant_cinf(a.n, v.r, &v)?));
                vr.insert(v.r.to_string(), v);
            }
            let j = ConstantsJson { cfin: interval_strings(&cfin), vr, cinf };
            emit(&a.out, &serde_json::to_string_pretty(&j).expect("serializes"))?;
            eprintln!("C_{}^fin in {cfin}", a.n);
            Ok(0)
        }
        Command::LocalDensity(a) => {
            let fam = read_family(&a.family, a.n)?;
            let lambda = local_lambda_integral(a.n, a.p, &fam, a.jmax)?;
            let orbit = orbit_route_integral(a.n, a.p, &fam).ok().map(|f| f.to_json());
            let j = LocalDensityJson { n: a.n, lambda: lambda.to_json(), orbit_route: orbit };
            emit(&a.out, &serde_json::to_string_pretty(&j).expect("serializes"))?;
            Ok(0)
        }
        Command::Reduce(a) => {
            let j: SymJson =
                serde_json::from_str(&fs::read_to_string(&a.matrix)?).map_err(|e| Error::Parse(e.to_string()))?;
            let out = reduce(&j)?;
            emit(&a.out, &serde_json::to_string_pretty(&out).expect("serializes"))?;
            Ok(0)
        }
        Command::Census(a) => {
            if let Some(r) = a.r {
                crate::archimedean::check_parity(a.n, r)?;
            }
            let mut cfg = CensusConfig::new(a.n, a.x.clone());
            cfg.family = read_family(&a.family, a.n)?;
            cfg.samples = a.samples;
            cfg.seed = a.seed;
            let rows: Vec<CensusReport> = census(&cfg)?.into_iter().filter(|row| a.r.is_none() || row.r == a.r).collect();
            emit(&a.out, &serde_json::to_string_pretty(&rows).expect("serializes"))?;
            if let Some(p) = &a.csv {
                census_csv(&rows, fs::File::create(p)?)?;
            }
            eprintln!("{:>4} {:>5} {:>12} {:>26} {:>8}", "X", "r", "empirical", "predicted", "ratio");
            for r in &rows {
                let rs = r.r.map_or("all".into(), |v| v.to_string());
                eprintln!("{:>4} {:>5} {:>12} {:>26} {:>8.4}", r.x, rs, r.empirical, r.predicted.to_string(), r.ratio);
            }
            let mut code = i32::from(rows.iter().any(|r| !r.anomalies.is_empty()));
            if a.cross_check {
                for &x in &a.x {
                    let (m2, direct) = cross_check_direct(a.n, x)?;
                    eprintln!("X = {x}: method II {m2}, direct {direct}");
                    if m2 != direct {
                        code = 1;
                    }
                }
            }
            Ok(code)
        }
        Command::Verify(VerifyCommand::Euler { n, pmax, csv: path }) => {
            let mut buf = Vec::new();
            let mut all = true;
            {
                let mut w = csv::Writer::from_writer(&mut buf);
                let io = |e: csv::Error| Error::Io(e.to_string());
                w.write_record(["p", "lhs", "rhs", "equal"]).map_err(io)?;
                for p in (2..=pmax).filter(|&p| crate::exactmath::is_prime(p)) {
                    let (l, r, eq) = euler_factor_identity(n, p);
                    all &= eq;
                    w.write_record([p.to_string(), format_rational(&l), format_rational(&r), eq.to_string()])
                        .map_err(io)?;
                }
                w.flush()?;
            }
            let body = String::from_utf8(buf).expect("utf8");
            match path {
                Some(p) => fs::write(p, &body)?,
                None => print!("{body}"),
            }
            Ok(i32::from(!all))
        }
        Command::Verify(VerifyCommand::Jacobian { n, p, m }) => {
            let r = jacobian_verify(n, p, m)?;
            println!(
                "{}",
                serde_json::json!({
                    "n": r.n, "p": r.p, "m": r.m, "sigma": r.sigma_count, "group": r.group_order,
                    "orbits": r.orbits, "measured": format_rational(&r.measured),
                    "expected": format_rational(&r.expected),
                })
            );
            Ok(i32::from(r.measured != r.expected))
        }
    }
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_command(cli.command) {
        Ok(c) => c,
        Err(e @ (Error::Usage(_) | Error::Parse(_) | Error::InvalidParity { .. } | Error::Io(_))) => {
            eprintln!("error: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Whether `path` parses as a census JSON report list.
pub fn read_census_json(path: &Path) -> Result<Vec<CensusReport>> {
    serde_json::from_str(&fs::read_to_string(path)?).map_err(|e| Error::Parse(e.to_string()))
}
