//! `crepant`, a batch driver for the curve-neighbourhood calculus: glue
//! data goes in as a config file, exact reports come out. Every
//! subcommand has a `--json` twin output; exit code 0 means all
//! requested checks passed, 1 means a verification failed, 2 means the
//! arguments or config were unusable.

mod config;

use clap::{Parser, Subcommand};
use crepant_core::cech_dg::verify_identity_catalogue;
use crepant_core::corpus::corpus;
use crepant_core::geometry::{
    check_overlap_identities, classify_normal_bundle, invariants, Chart, LambdaTable, NormalBundle,
};
use crepant_core::jacobi::{
    comm_quotient_dims, finiteness_probe, nc_quotient_dims, oracle, FinitenessVerdict,
    TruncatedAlgebraReport,
};
use crepant_core::kadeishvili::{check_stasheff, minimal_model};
use crepant_core::matrix::Mat;
use crepant_core::necklace::{commutative_potential, enumerate_orbits, necklace_poly, potential};
use crepant_core::resolution::{build_resolution, check_gluing};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum Failure {
    /// Bad arguments, unreadable or invalid config: exit code 2.
    Config(String),
    /// A verification that should hold failed: exit code 1.
    Check(String),
}

#[derive(Parser)]
#[command(
    name = "crepant",
    version,
    about = "Exact calculus for curve neighbourhood glue data"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the normal bundle from the quadratic glue coefficients
    Classify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print a necklace polynomial with its orbit decomposition
    Necklace {
        #[arg(long)]
        j: u32,
        #[arg(long)]
        k: u32,
    },
    /// Print the superpotential and its commutative shadow
    Potential {
        #[arg(long)]
        config: PathBuf,
    },
    /// Graded dimensions of the truncated Jacobi algebra
    #[command(name = "jacobi-dim")]
    JacobiDim {
        #[arg(long)]
        config: PathBuf,
        /// Truncation degree (default: limits.truncate)
        #[arg(long)]
        truncate: Option<u32>,
        /// Use the commutative Jacobi algebra instead
        #[arg(long)]
        abelian: bool,
    },
    /// Gather finite-dimensionality evidence for the Jacobi algebra
    Probe {
        #[arg(long)]
        config: PathBuf,
        /// Largest truncation degree examined (default: limits.truncate)
        #[arg(long)]
        dmax: Option<u32>,
    },
    /// Build the locally free resolution and verify complex + gluing
    Resolution {
        #[arg(long)]
        config: PathBuf,
    },
    /// Verify the DG-algebra axioms and the named identity catalogue
    #[command(name = "verify-dg")]
    VerifyDg {
        #[arg(long)]
        config: PathBuf,
        /// Largest homotopy index exercised (default: limits.max_index)
        #[arg(long)]
        max_index: Option<i64>,
    },
    /// Compute the A-infinity minimal model and cross-check it
    Ainfty {
        #[arg(long)]
        config: PathBuf,
        /// Largest operation arity computed (default: limits.max_arity)
        #[arg(long)]
        max_arity: Option<usize>,
    },
    /// Run the whole verification suite over the built-in corpus
    Selftest {
        /// Optional extra table to include in every stage
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Classify { config } => cmd_classify(&config, cli.json),
        Cmd::Necklace { j, k } => cmd_necklace(j, k, cli.json),
        Cmd::Potential { config } => cmd_potential(&config, cli.json),
        Cmd::JacobiDim {
            config,
            truncate,
            abelian,
        } => cmd_jacobi_dim(&config, truncate, abelian, cli.json),
        Cmd::Probe { config, dmax } => cmd_probe(&config, dmax, cli.json),
        Cmd::Resolution { config } => cmd_resolution(&config, cli.json),
        Cmd::VerifyDg { config, max_index } => cmd_verify_dg(&config, max_index, cli.json),
        Cmd::Ainfty { config, max_arity } => cmd_ainfty(&config, max_arity, cli.json),
        Cmd::Selftest { config } => cmd_selftest(config.as_deref(), cli.json),
    }
}

/// The commands that need a full `(-3,1)` table reject anything else up
/// front, as a config problem rather than a failed check.
fn require_minus3_1(table: &LambdaTable) -> Result<(), Failure> {
    let violations = table.validate(true);
    if violations.is_empty() {
        return Ok(());
    }
    let msg: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
    Err(Failure::Config(format!(
        "not a valid (-3,1) table: {}",
        msg.join("; ")
    )))
}

fn emit(json_mode: bool, value: Value, text: impl FnOnce()) {
    if json_mode {
        println!(
            "{}",
            serde_json::to_string_pretty(&value).expect("serializable report")
        );
    } else {
        text();
    }
}

fn cmd_classify(path: &std::path::Path, json_mode: bool) -> Result<(), Failure> {
    let cfg = config::load(path)?;
    let bundle = classify_normal_bundle(&cfg.table).map_err(|e| Failure::Config(e.to_string()))?;
    let trs = if bundle == NormalBundle::Minus3Plus1 && cfg.table.validate(true).is_empty() {
        let inv = invariants(&cfg.table).map_err(|e| Failure::Config(e.to_string()))?;
        Some((inv.t, inv.r, inv.s))
    } else {
        None
    };
    let mut value = json!({ "normal_bundle": bundle.to_string() });
    if let Some((t, r, s)) = trs {
        value["t"] = json!(t);
        value["r"] = json!(r);
        value["s"] = json!(s);
    }
    emit(json_mode, value, || {
        println!("normal bundle: {bundle}");
        if let Some((t, r, s)) = trs {
            println!("(t, r, s) = ({t}, {r}, {s})");
        }
    });
    Ok(())
}

fn cmd_necklace(j: u32, k: u32, json_mode: bool) -> Result<(), Failure> {
    let orbits = enumerate_orbits(j, k).map_err(|e| Failure::Config(e.to_string()))?;
    let poly = necklace_poly(j, k).expect("same index check");
    let ab = poly.abelianize();
    let orbit_rows: Vec<Value> = orbits
        .orbits
        .iter()
        .map(|o| json!({ "representative": o.rep.to_string(), "size": o.orbit_size }))
        .collect();
    let value = json!({
        "j": j,
        "k": k,
        "word_count": orbits.word_count(),
        "orbit_count": orbits.orbits.len(),
        "orbits": orbit_rows,
        "necklace": poly.to_json(),
        "abelianized": ab.to_json(),
    });
    emit(json_mode, value, || {
        println!("N_{{{j},{k}}} = {poly}");
        println!("abelianized: {ab}");
        println!(
            "{} words with {j} x's and {k} y's in {} rotation orbits:",
            orbits.word_count(),
            orbits.orbits.len()
        );
        for o in &orbits.orbits {
            println!("  size {:>2}: {}", o.orbit_size, o.rep);
        }
    });
    Ok(())
}

fn cmd_potential(path: &std::path::Path, json_mode: bool) -> Result<(), Failure> {
    let cfg = config::load(path)?;
    let w = potential(&cfg.table).map_err(|e| Failure::Config(e.to_string()))?;
    let v = commutative_potential(&cfg.table).expect("same validity check");
    let value = json!({
        "superpotential": w.to_json(),
        "commutative": v.to_json(),
    });
    emit(json_mode, value, || {
        println!("W = {w}");
        println!("V = {v}");
    });
    Ok(())
}

fn report_value(report: &TruncatedAlgebraReport) -> Value {
    json!({
        "truncation_degree": report.truncation_degree,
        "per_degree_dims": report.per_degree_dims,
        "cumulative_dim": report.cumulative_dim,
        "stabilized": report.stabilized,
    })
}

fn print_report(report: &TruncatedAlgebraReport) {
    let dims: Vec<String> = report
        .per_degree_dims
        .iter()
        .map(|d| d.to_string())
        .collect();
    println!("truncation degree: {}", report.truncation_degree);
    println!("per-degree dims: {}", dims.join(" "));
    println!("cumulative: {}", report.cumulative_dim);
    println!(
        "stabilized: {}",
        if report.stabilized { "yes" } else { "no" }
    );
}

fn cmd_jacobi_dim(
    path: &std::path::Path,
    truncate: Option<u32>,
    abelian: bool,
    json_mode: bool,
) -> Result<(), Failure> {
    let cfg = config::load(path)?;
    let d = truncate.unwrap_or(cfg.limits.truncate);
    let report = if abelian {
        comm_quotient_dims(&cfg.table, d)
    } else {
        nc_quotient_dims(&cfg.table, d)
    }
    .map_err(|e| Failure::Config(e.to_string()))?;
    let mut value = report_value(&report);
    value["abelian"] = json!(abelian);
    emit(json_mode, value, || {
        println!(
            "{} Jacobi algebra",
            if abelian {
                "commutative"
            } else {
                "noncommutative"
            }
        );
        print_report(&report);
    });
    Ok(())
}

fn cmd_probe(path: &std::path::Path, dmax: Option<u32>, json_mode: bool) -> Result<(), Failure> {
    let cfg = config::load(path)?;
    let d = dmax.unwrap_or(cfg.limits.truncate);
    let (report, verdict) =
        finiteness_probe(&cfg.table, d).map_err(|e| Failure::Config(e.to_string()))?;
    let tag = match verdict {
        FinitenessVerdict::EvidenceFinite { .. } => "evidence-finite",
        FinitenessVerdict::EvidenceInfinite => "evidence-infinite",
        FinitenessVerdict::Inconclusive => "inconclusive",
    };
    let mut value = report_value(&report);
    value["verdict"] = json!(tag);
    value["note"] = json!("truncation evidence, not a proof");
    emit(json_mode, value, || {
        print_report(&report);
        println!("verdict: {verdict}");
    });
    Ok(())
}

fn twist_line(twists: &[i64]) -> String {
    let parts: Vec<String> = twists
        .iter()
        .map(|&n| {
            if n == 0 {
                "O".into()
            } else {
                format!("O({n})")
            }
        })
        .collect();
    parts.join(" + ")
}

fn mat_strings(m: &Mat, chart: Chart) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m[(i, j)].display_with(chart.var_names()))
                .collect()
        })
        .collect()
}

fn cmd_resolution(path: &std::path::Path, json_mode: bool) -> Result<(), Failure> {
    let cfg = config::load(path)?;
    require_minus3_1(&cfg.table)?;
    let res = build_resolution(&cfg.table).map_err(|e| Failure::Config(e.to_string()))?;

    let d1 = res.differential(1);
    let d2 = res.differential(2);
    let d3 = res.differential(3);
    for (outer, inner) in [(d1, d2), (d2, d3)] {
        let composite = outer
            .compose(inner)
            .map_err(|e| Failure::Check(e.to_string()))?;
        if !composite.is_zero() {
            return Err(Failure::Check(format!("{} is not zero", composite.label)));
        }
    }
    for d in [d1, d2, d3] {
        check_gluing(d, &cfg.table).map_err(|e| Failure::Check(e.to_string()))?;
    }

    let diff_rows: Vec<Value> = [d1, d2, d3]
        .iter()
        .map(|d| {
            json!({
                "name": d.label,
                "u1": mat_strings(&d.mat_u1, Chart::U1),
                "u2": mat_strings(&d.mat_u2, Chart::U2),
            })
        })
        .collect();
    let value = json!({
        "twists": res.twists.iter().map(|t| t.0.clone()).collect::<Vec<_>>(),
        "differentials": diff_rows,
        "complex_ok": true,
        "gluing_ok": true,
    });
    emit(json_mode, value, || {
        for (n, t) in res.twists.iter().enumerate() {
            println!("E_{n}: {}", twist_line(&t.0));
        }
        println!("complex (d.d = 0): ok");
        println!("chart gluing: ok");
    });
    Ok(())
}

fn cmd_verify_dg(
    path: &std::path::Path,
    max_index: Option<i64>,
    json_mode: bool,
) -> Result<(), Failure> {
    let cfg = config::load(path)?;
    require_minus3_1(&cfg.table)?;
    let max_index = max_index.unwrap_or(cfg.limits.max_index);
    let report =
        verify_identity_catalogue(&cfg.table, max_index).map_err(|e| Failure::Check(e.to_string()))?;
    let families: Vec<Value> = report
        .families
        .iter()
        .map(|(name, n)| json!({ "name": name, "checks": n }))
        .collect();
    let value = json!({
        "max_index": max_index,
        "families": families,
        "total": report.total(),
    });
    emit(json_mode, value, || {
        for (name, n) in &report.families {
            println!("{name}: {n} ok");
        }
        println!("total: {} identity instances verified", report.total());
    });
    Ok(())
}

fn cmd_ainfty(
    path: &std::path::Path,
    max_arity: Option<usize>,
    json_mode: bool,
) -> Result<(), Failure> {
    let cfg = config::load(path)?;
    require_minus3_1(&cfg.table)?;
    let max_arity = max_arity.unwrap_or(cfg.limits.max_arity);
    let state = minimal_model(&cfg.table, max_arity).map_err(|e| Failure::Check(e.to_string()))?;
    let comparisons = state
        .verify_closed_formula()
        .map_err(|e| Failure::Check(e.to_string()))?;
    let table = state.table();
    let stasheff_tuples =
        check_stasheff(&table, max_arity).map_err(|e| Failure::Check(e.to_string()))?;

    let mut product_rows = Vec::new();
    for arity in 2..=max_arity {
        for (args, value) in table.products_of_arity(arity) {
            let syms: Vec<&str> = args.iter().map(|b| b.symbol()).collect();
            product_rows.push((arity, syms, value.to_string()));
        }
    }
    let products_json: Vec<Value> = product_rows
        .iter()
        .map(|(arity, args, value)| json!({ "arity": arity, "args": args, "value": value }))
        .collect();
    let value = json!({
        "max_arity": max_arity,
        "products": products_json,
        "closed_formula_comparisons": comparisons,
        "stasheff_tuples": stasheff_tuples,
    });
    emit(json_mode, value, || {
        if product_rows.is_empty() {
            println!("no nonzero operations up to arity {max_arity}");
        }
        for (arity, args, value) in &product_rows {
            println!("m_{arity}({}) = {value}", args.join(", "));
        }
        println!("closed-formula check: ok ({comparisons} comparisons)");
        println!("A-infinity relations: ok ({stasheff_tuples} tuples)");
    });
    Ok(())
}

fn cmd_selftest(config_path: Option<&std::path::Path>, json_mode: bool) -> Result<(), Failure> {
    let started = std::time::Instant::now();
    let (mut tables, limits) = match config_path {
        Some(path) => {
            let cfg = config::load(path)?;
            require_minus3_1(&cfg.table)?;
            (vec![cfg.table], cfg.limits)
        }
        None => (Vec::new(), config::LimitsFile::default().resolve()?),
    };
    tables.extend(corpus());

    let check = |e: String| Failure::Check(e);
    let mut stages: Vec<(&'static str, String)> = Vec::new();
    let stage = |name: &'static str,
                 detail: Result<String, Failure>,
                 stages: &mut Vec<(&'static str, String)>|
     -> Result<(), Failure> {
        let detail = detail?;
        if !json_mode {
            println!("[{}/6] {name}: ok ({detail})", stages.len() + 1);
        }
        stages.push((name, detail));
        Ok(())
    };

    stage(
        "necklace calibration",
        (|| {
            let n = necklace_poly(4, 2).expect("nonempty index");
            if n.to_string() != "x^4*y^2 + x^3*y*x*y + 1/2*x^2*y*x^2*y" {
                return Err(check(format!("N_{{4,2}} drifted: {n}")));
            }
            if n.abelianize().to_string() != "5/2*x^4*y^2" {
                return Err(check("abelianized N_{4,2} drifted".into()));
            }
            Ok("2 golden values".to_string())
        })(),
        &mut stages,
    )?;

    stage(
        "overlap identities",
        (|| {
            for t in &tables {
                check_overlap_identities(t).map_err(|e| check(format!("{}: {e}", t.describe())))?;
            }
            Ok(format!("{} tables", tables.len()))
        })(),
        &mut stages,
    )?;

    stage(
        "resolution",
        (|| {
            for t in &tables {
                let res = build_resolution(t).map_err(|e| check(e.to_string()))?;
                for (outer, inner) in [(1, 2), (2, 3)] {
                    let c = res
                        .differential(outer)
                        .compose(res.differential(inner))
                        .map_err(|e| check(e.to_string()))?;
                    if !c.is_zero() {
                        return Err(check(format!("{}: d.d != 0", t.describe())));
                    }
                }
                for n in 1..=3 {
                    check_gluing(res.differential(n), t)
                        .map_err(|e| check(format!("{}: {e}", t.describe())))?;
                }
            }
            Ok(format!("{} tables", tables.len()))
        })(),
        &mut stages,
    )?;

    stage(
        "DG identity catalogue",
        (|| {
            let mut total = 0;
            for t in &tables {
                let report = verify_identity_catalogue(t, limits.max_index)
                    .map_err(|e| check(format!("{}: {e}", t.describe())))?;
                total += report.total();
            }
            Ok(format!(
                "{} tables, {total} identity instances",
                tables.len()
            ))
        })(),
        &mut stages,
    )?;

    stage(
        "minimal model",
        (|| {
            for t in &tables {
                let state = minimal_model(t, limits.max_arity)
                    .map_err(|e| check(format!("{}: {e}", t.describe())))?;
                state
                    .verify_closed_formula()
                    .map_err(|e| check(format!("{}: {e}", t.describe())))?;
                check_stasheff(&state.table(), limits.max_arity)
                    .map_err(|e| check(format!("{}: {e}", t.describe())))?;
            }
            Ok(format!(
                "{} tables, arity <= {}",
                tables.len(),
                limits.max_arity
            ))
        })(),
        &mut stages,
    )?;

    stage(
        "Jacobi dimensions",
        (|| {
            let empty = LambdaTable::empty();
            let free = nc_quotient_dims(&empty, 4).map_err(|e| check(e.to_string()))?;
            if free.cumulative_dim != 31 {
                return Err(check(format!(
                    "free algebra dim drifted: {}",
                    free.cumulative_dim
                )));
            }
            let cubic = LambdaTable::from_entries([(3, 0, crepant_core::rational::q_int(3))])
                .expect("valid");
            let r = nc_quotient_dims(&cubic, 4).map_err(|e| check(e.to_string()))?;
            if r.cumulative_dim != 19 {
                return Err(check(format!(
                    "single-cubic dim drifted: {}",
                    r.cumulative_dim
                )));
            }
            let mut oracle_tables = 0;
            for t in tables.iter().take(3) {
                let nc = nc_quotient_dims(t, 5).map_err(|e| check(e.to_string()))?;
                let dense = oracle::nc_dims_dense(t, 5).map_err(|e| check(e.to_string()))?;
                if nc.per_degree_dims != dense {
                    return Err(check(format!("{}: sparse/dense mismatch", t.describe())));
                }
                oracle_tables += 1;
            }
            Ok(format!("2 golden values, {oracle_tables} oracle tables"))
        })(),
        &mut stages,
    )?;

    let elapsed = started.elapsed();
    if json_mode {
        let rows: Vec<Value> = stages
            .iter()
            .map(|(name, detail)| json!({ "name": name, "detail": detail }))
            .collect();
        let value = json!({
            "ok": true,
            "stages": rows,
            "seconds": elapsed.as_secs_f64(),
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&value).expect("serializable report")
        );
    } else {
        println!(
            "selftest: all checks passed ({:.1}s)",
            elapsed.as_secs_f64()
        );
    }
    Ok(())
}
