//! Command-line front end: exact bounds, reference constructions, randomized
//! lemma trial suites, and exhaustive verification with re-checkable
//! certificate files.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 mathematical
//! mismatch (a verification or check failed), 3 size-cap violation.

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::PathBuf;

use xfam_core::compress::{
    extent_report, family_extent, generating_family, minus_decomposition, seq_symmetric_extent,
    shift, shift_closure,
};
use xfam_core::family::{Family, FamilySeq, GroundSize};
use xfam_core::formulas;
use xfam_core::gen::{
    random_boundary_clear_instance, random_cross_seq, random_monotone_shifted_cross_seq,
    random_monotone_shifted_family, random_push_pull_instance, rng_for,
};
use xfam_core::lemma::{
    le1_transform, le22_rewrite, le2_check, le32_le33_check, le34_check, le3_check,
    le5_pushing_pulling, Le3Part, ReplacementSpec,
};
use xfam_core::oracle::{brute_multi, verify_theorem};
use xfam_core::par::with_workers;
use xfam_core::Error;

#[derive(Parser)]
#[command(
    name = "xfam",
    version,
    about = "Exact bounds and exhaustive verification for pairwise cross t-intersecting set families"
)]
struct Cli {
    /// Seed for all randomized instance generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for the search pool (at least 1).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output format for stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Directory for result files (default: $XFAM_RESULTS_DIR, then ./results).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Lift the default size caps; large cells may take a very long time.
    #[arg(long = "i-know", global = true)]
    i_know: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the exact maximum total size of m pairwise cross t-intersecting
    /// families over [n], with both branch components.
    Bound(BoundArgs),
    /// Exhaustively verify the bound over an (n, t, m) grid and write one
    /// certificate file per cell plus a sweep table.
    Verify(VerifyArgs),
    /// Run a seeded randomized trial suite for one named lemma check or
    /// transform.
    Lemma(LemmaArgs),
    /// Print a named reference construction.
    Family(FamilyArgs),
}

#[derive(clap::Args)]
struct BoundArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    t: u32,
    #[arg(long)]
    m: u32,
    /// Uniform layer size for the k-dependent comparison bounds.
    #[arg(long)]
    k: Option<u32>,
    /// Also print the classical comparison bounds.
    #[arg(long)]
    all: bool,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Ground-set sizes: a single value or an inclusive range a..b.
    #[arg(long)]
    n: String,
    /// Intersection thresholds: a single value or an inclusive range a..b.
    #[arg(long)]
    t: String,
    /// Family counts: a single value or an inclusive range a..b.
    #[arg(long)]
    m: String,
}

#[derive(clap::Args)]
struct LemmaArgs {
    /// One of: shift-preserves, le1, le2, le22, le3-1 .. le3-5, le32, le33,
    /// le5, le34.
    #[arg(long)]
    name: String,
    #[arg(long)]
    n: Option<u8>,
    #[arg(long)]
    t: Option<u8>,
    #[arg(long)]
    m: Option<u8>,
    /// Number of randomized trials.
    #[arg(long, default_value_t = 1000)]
    trials: u32,
}

#[derive(clap::Args)]
struct FamilyArgs {
    #[command(subcommand)]
    which: FamilyCmd,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// The maximum t-intersecting family over [n] (size-threshold family,
    /// plus one middle layer avoiding element n when n+t is odd).
    Katona {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        t: u8,
        /// Verify the intersecting predicate and the closed-form size.
        #[arg(long)]
        check: bool,
    },
    /// The threshold pair: members meeting [l] in at least t elements, and
    /// supersets of [l].
    Rs {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        l: u8,
        #[arg(long)]
        t: u8,
        /// Verify the cross-intersecting predicate and the closed-form sizes.
        #[arg(long)]
        check: bool,
    },
    /// The r-th uniform frame family: k-subsets meeting [t+2r] in at least
    /// t+r elements.
    Frankl {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        k: u8,
        #[arg(long)]
        t: u8,
        #[arg(long)]
        r: u8,
        /// Verify the intersecting predicate and the closed-form size.
        #[arg(long)]
        check: bool,
    },
}

fn main() {
    // Die quietly on a closed pipe (e.g. `xfam ... | head`) instead of
    // panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Some(w) = cli.workers {
        if w < 1 {
            eprintln!("error: --workers must be at least 1");
            std::process::exit(1);
        }
    }
    let code = with_workers(cli.workers, || run(&cli));
    std::process::exit(code);
}

fn run(cli: &Cli) -> i32 {
    match &cli.cmd {
        Cmd::Bound(args) => cmd_bound(cli, args),
        Cmd::Verify(args) => cmd_verify(cli, args),
        Cmd::Lemma(args) => cmd_lemma(cli, args),
        Cmd::Family(args) => cmd_family(cli, &args.which),
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::CapExceeded(_) | Error::CanonicalizationCap { .. } | Error::BadGroundSize { .. } => {
            3
        }
        Error::ClaimViolated { .. } | Error::Certificate(_) => 2,
        _ => 1,
    }
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    exit_code_for(e)
}

fn results_dir(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var_os("XFAM_RESULTS_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"))
}

/// The csv format renders sweep tables only.
fn reject_csv(cli: &Cli, what: &str) -> Option<i32> {
    if cli.format == Format::Csv {
        eprintln!("error: csv output applies to verify sweeps, not {what}; use text or json");
        Some(1)
    } else {
        None
    }
}

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("serializable value")
    );
}

// ---------------------------------------------------------------------------
// bound
// ---------------------------------------------------------------------------

fn cmd_bound(cli: &Cli, args: &BoundArgs) -> i32 {
    if let Some(code) = reject_csv(cli, "bound") {
        return code;
    }
    let report = match formulas::main_bound(args.n, args.t, args.m) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    // Name -> Ok(value) | Err(why it does not apply here).
    let mut comparisons: Vec<(&'static str, Result<u128, Error>)> = Vec::new();
    if args.all {
        comparisons.push(("katona_M", formulas::katona_m(args.n, args.t)));
        for (name, res) in formulas::classical_bounds(args.n, args.t, args.m, args.k) {
            comparisons.push((name, res));
        }
        if let Some(k) = args.k {
            comparisons.push(("ak_M", formulas::ak_m(args.n, k, args.t)));
        }
    }
    match cli.format {
        Format::Text => {
            println!(
                "bound(n={}, t={}, m={}) = {}",
                report.n, report.t, report.m, report.value
            );
            println!("branch = {}", report.branch.as_str());
            println!("tie = {}", report.tie);
            for (name, value) in &report.components {
                println!("  {name} = {value}");
            }
            if !comparisons.is_empty() {
                println!("comparisons:");
                for (name, res) in &comparisons {
                    match res {
                        Ok(v) => println!("  {name} = {v}"),
                        Err(e) => println!("  {name}: not applicable ({e})"),
                    }
                }
            }
        }
        Format::Json => {
            let mut v = report.to_json();
            if args.all {
                let map: serde_json::Map<String, Value> = comparisons
                    .iter()
                    .map(|(name, res)| {
                        let val = match res {
                            Ok(v) => Value::String(v.to_string()),
                            Err(_) => Value::Null,
                        };
                        (name.to_string(), val)
                    })
                    .collect();
                v["comparisons"] = Value::Object(map);
            }
            print_json(&v);
        }
        Format::Csv => unreachable!("rejected above"),
    }
    0
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn parse_grid(spec: &str, what: &str) -> Result<Vec<u8>, String> {
    let one = |s: &str| -> Result<u8, String> {
        s.trim()
            .parse::<u8>()
            .map_err(|_| format!("bad {what} value {:?} (expected a small integer)", s.trim()))
    };
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo = one(lo)?;
        let hi = one(hi)?;
        if lo > hi {
            return Err(format!("empty {what} range {spec:?}"));
        }
        Ok((lo..=hi).collect())
    } else {
        Ok(vec![one(spec)?])
    }
}

struct SweepRow {
    n: u8,
    t: u8,
    m: u8,
    bound: u128,
    branch: &'static str,
    optimum: u64,
    matched: bool,
    classes_match: bool,
    classes: String,
    file: String,
}

fn class_census(cert: &xfam_core::cert::Certificate) -> String {
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    for w in &cert.witnesses {
        *counts.entry(w.class.as_str()).or_insert(0) += 1;
    }
    counts
        .iter()
        .map(|(label, count)| format!("{label}:{count}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> i32 {
    let parsed = [
        parse_grid(&args.n, "n"),
        parse_grid(&args.t, "t"),
        parse_grid(&args.m, "m"),
    ];
    if let Some(msg) = parsed.iter().find_map(|g| g.as_ref().err()) {
        eprintln!("error: {msg}");
        return 1;
    }
    let [ns, ts, ms] = parsed.map(|g| g.expect("errors handled above"));

    let dir = results_dir(cli);
    let mut rows: Vec<SweepRow> = Vec::new();
    let mut skipped: Vec<String> = Vec::new();
    let mut first_mismatch: Option<(String, PathBuf)> = None;

    for &n in &ns {
        for &t in &ts {
            for &m in &ms {
                if t < 1 || t > n {
                    skipped.push(format!("n={n} t={t} m={m}: skipped (needs 1 <= t <= n)"));
                    continue;
                }
                if m < 2 {
                    skipped.push(format!("n={n} t={t} m={m}: skipped (needs m >= 2)"));
                    continue;
                }
                let cert = match verify_theorem(n, t, m, cli.seed, cli.i_know) {
                    Ok(c) => c,
                    Err(e) => return fail(&e),
                };
                let path = match cert.save(&dir) {
                    Ok(p) => p,
                    Err(e) => return fail(&e),
                };
                let cell_ok = cert.matched && cert.classes_match;
                if !cell_ok && first_mismatch.is_none() {
                    first_mismatch = Some((format!("n={n} t={t} m={m}"), path.clone()));
                }
                rows.push(SweepRow {
                    n,
                    t,
                    m,
                    bound: cert.formula_value,
                    branch: cert.branch.as_str(),
                    optimum: cert.optimum,
                    matched: cert.matched,
                    classes_match: cert.classes_match,
                    classes: class_census(&cert),
                    file: cert.file_name(),
                });
            }
        }
    }

    let mut csv = String::from("n,t,m,bound,branch,optimum,match,classes\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.n, r.t, r.m, r.bound, r.branch, r.optimum, r.matched, r.classes
        ));
    }
    let sweep_name = format!(
        "sweep_n{}_t{}_m{}.csv",
        args.n.replace("..", "-"),
        args.t.replace("..", "-"),
        args.m.replace("..", "-")
    );
    if let Err(e) = std::fs::create_dir_all(&dir)
        .and_then(|()| std::fs::write(dir.join(&sweep_name), &csv))
    {
        eprintln!("error: cannot write sweep table: {e}");
        return 1;
    }

    match cli.format {
        Format::Text => {
            for note in &skipped {
                println!("note: {note}");
            }
            for r in &rows {
                println!(
                    "n={} t={} m={}: bound={} optimum={} branch={} match={} classes={} classes_match={} cert={}",
                    r.n,
                    r.t,
                    r.m,
                    r.bound,
                    r.optimum,
                    r.branch,
                    r.matched,
                    r.classes,
                    r.classes_match,
                    r.file
                );
            }
            println!(
                "wrote {} certificates and {} to {}",
                rows.len(),
                sweep_name,
                dir.display()
            );
        }
        Format::Json => {
            let results: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "t": r.t,
                        "m": r.m,
                        "bound": r.bound.to_string(),
                        "branch": r.branch,
                        "optimum": r.optimum.to_string(),
                        "match": r.matched,
                        "classes_match": r.classes_match,
                        "classes": r.classes,
                        "certificate": r.file,
                    })
                })
                .collect();
            print_json(&json!({
                "results": results,
                "skipped": skipped,
                "all_match": first_mismatch.is_none(),
                "sweep_csv": sweep_name,
            }));
        }
        Format::Csv => {
            for note in &skipped {
                eprintln!("note: {note}");
            }
            print!("{csv}");
        }
    }

    if let Some((cell, path)) = first_mismatch {
        eprintln!("MISMATCH at {cell}: counterexample certificate {}", path.display());
        return 2;
    }
    0
}

// ---------------------------------------------------------------------------
// lemma
// ---------------------------------------------------------------------------

#[derive(Copy, Clone, PartialEq, Eq)]
enum LemmaName {
    ShiftPreserves,
    Le1,
    Le2,
    Le22,
    Le3(Le3Part),
    Le32,
    Le33,
    Le5,
    Le34,
}

impl LemmaName {
    fn parse(s: &str) -> Option<LemmaName> {
        Some(match s {
            "shift-preserves" => LemmaName::ShiftPreserves,
            "le1" => LemmaName::Le1,
            "le2" => LemmaName::Le2,
            "le22" => LemmaName::Le22,
            "le3-1" => LemmaName::Le3(Le3Part::P1),
            "le3-2" => LemmaName::Le3(Le3Part::P2),
            "le3-3" => LemmaName::Le3(Le3Part::P3),
            "le3-4" => LemmaName::Le3(Le3Part::P4),
            "le3-5" => LemmaName::Le3(Le3Part::P5),
            "le32" => LemmaName::Le32,
            "le33" => LemmaName::Le33,
            "le5" => LemmaName::Le5,
            "le34" => LemmaName::Le34,
            _ => return None,
        })
    }

    fn needs_t_at_least_2(self) -> bool {
        matches!(
            self,
            LemmaName::Le32 | LemmaName::Le33 | LemmaName::Le5 | LemmaName::Le34
        )
    }
}

enum Outcome {
    Pass,
    Fail(Value),
    NoInstance,
}

fn cmd_lemma(cli: &Cli, args: &LemmaArgs) -> i32 {
    if let Some(code) = reject_csv(cli, "lemma") {
        return code;
    }
    let Some(name) = LemmaName::parse(&args.name) else {
        eprintln!(
            "error: unknown lemma {:?}; expected one of shift-preserves, le1, le2, le22, \
             le3-1 .. le3-5, le32, le33, le5, le34",
            args.name
        );
        return 1;
    };
    let n = args.n.unwrap_or(if name == LemmaName::Le34 { 4 } else { 5 });
    let t = args.t.unwrap_or(2);
    let m = args.m.unwrap_or(2);
    if args.trials < 1 {
        eprintln!("error: --trials must be at least 1");
        return 1;
    }
    if n < 2 || t < 1 || t > n || m < 2 {
        eprintln!("error: need n >= 2, 1 <= t <= n, m >= 2; got n={n} t={t} m={m}");
        return 1;
    }
    if name.needs_t_at_least_2() && t < 2 {
        eprintln!("error: lemma {} requires t >= 2", args.name);
        return 1;
    }
    let ground = match GroundSize::new(n) {
        Ok(g) => g,
        Err(e) => return fail(&e),
    };

    // The maximality-constraint suite checks shifted optimal tuples, so the
    // pool of instances comes from one exhaustive search up front.
    let le34_pool: Option<Vec<FamilySeq>> = if name == LemmaName::Le34 {
        match brute_multi(ground, t, m, cli.i_know) {
            Ok(out) => Some(out.witnesses.into_iter().map(|w| w.seq).collect()),
            Err(e) => return fail(&e),
        }
    } else {
        None
    };

    let mut passes: u64 = 0;
    let mut instances: u64 = 0;
    let mut failures: Vec<(u64, Value)> = Vec::new();
    for trial in 0..args.trials as u64 {
        let outcome = run_trial(name, ground, t, m, cli.seed, trial, le34_pool.as_deref());
        match outcome {
            Outcome::Pass => {
                instances += 1;
                passes += 1;
            }
            Outcome::Fail(detail) => {
                instances += 1;
                failures.push((trial, detail));
            }
            Outcome::NoInstance => {}
        }
    }

    let shown = failures.len().min(25);
    match cli.format {
        Format::Text => {
            for (trial, detail) in failures.iter().take(shown) {
                println!("failure at trial {trial}: {detail}");
            }
            if failures.len() > shown {
                println!("... {} further failures suppressed", failures.len() - shown);
            }
            println!(
                "lemma {}: trials={} instances={} passes={} failures={}",
                args.name,
                args.trials,
                instances,
                passes,
                failures.len()
            );
        }
        Format::Json => {
            let failing: Vec<Value> = failures
                .iter()
                .take(shown)
                .map(|(trial, detail)| json!({ "trial": trial, "detail": detail }))
                .collect();
            print_json(&json!({
                "lemma": args.name,
                "n": n,
                "t": t,
                "m": m,
                "seed": cli.seed.to_string(),
                "trials": args.trials,
                "instances": instances,
                "passes": passes,
                "failures": failures.len(),
                "failing": failing,
                "failing_truncated": failures.len() > shown,
            }));
        }
        Format::Csv => unreachable!("rejected above"),
    }

    if instances == 0 {
        eprintln!(
            "error: no admissible instance found in {} trials (0 instances)",
            args.trials
        );
        return 1;
    }
    if failures.is_empty() {
        0
    } else {
        2
    }
}

fn run_trial(
    name: LemmaName,
    n: GroundSize,
    t: u8,
    m: u8,
    seed: u64,
    trial: u64,
    le34_pool: Option<&[FamilySeq]>,
) -> Outcome {
    let mut rng = rng_for(seed, trial);
    match name {
        LemmaName::ShiftPreserves => {
            let Ok(seq) = random_cross_seq(&mut rng, n, t, m, 30) else {
                return Outcome::NoInstance;
            };
            let i = rng.gen_range(1..n.get());
            let j = rng.gen_range(i + 1..=n.get());
            let shifted: Result<Vec<Family>, Error> =
                seq.families().iter().map(|f| shift(f, i, j)).collect();
            let out = match shifted.and_then(|fams| seq.with_families(fams)) {
                Ok(s) => s,
                Err(e) => return Outcome::Fail(json!({ "error": e.to_string() })),
            };
            if out.is_pairwise_cross_t_intersecting() && out.norm() == seq.norm() {
                Outcome::Pass
            } else {
                Outcome::Fail(json!({
                    "i": i,
                    "j": j,
                    "still_cross": out.is_pairwise_cross_t_intersecting(),
                    "norm_before": seq.norm(),
                    "norm_after": out.norm(),
                }))
            }
        }
        LemmaName::Le1 => {
            let Ok(f) = random_monotone_shifted_family(&mut rng, n) else {
                return Outcome::NoInstance;
            };
            let l = match family_extent(&f) {
                Ok(l) => l,
                Err(_) => return Outcome::NoInstance,
            };
            if l < 2 {
                return Outcome::NoInstance;
            }
            let gens = match generating_family(&f) {
                Ok(g) => g,
                Err(_) => return Outcome::NoInstance,
            };
            let report = extent_report(&gens);
            let u = rng.gen_range(1..=l);
            let mut v = rng.gen_range(1..=l);
            if v == u {
                v = if u == 1 { 2 } else { u - 1 };
            }
            let mut pick = |size: u8| -> Family {
                let members = report.per_size.get(&size).map_or_else(Vec::new, |class| {
                    class
                        .members()
                        .iter()
                        .copied()
                        .filter(|_| rng.gen_bool(0.5))
                        .collect()
                });
                Family::new(n, members).expect("subset of a valid family")
            };
            let b = pick(u);
            let c = pick(v);
            match le1_transform(&f, &ReplacementSpec { b, c, u, v }) {
                Ok(_) => Outcome::Pass,
                Err(e) => Outcome::Fail(json!({ "u": u, "v": v, "error": e.to_string() })),
            }
        }
        LemmaName::Le2 => {
            let Ok(seq) = random_monotone_shifted_cross_seq(&mut rng, n, t, m, 30) else {
                return Outcome::NoInstance;
            };
            match le2_check(&seq) {
                Ok(true) => Outcome::Pass,
                Ok(false) => Outcome::Fail(json!({ "verdict": false })),
                Err(_) => Outcome::NoInstance,
            }
        }
        LemmaName::Le22 => {
            let Ok(seq) = random_boundary_clear_instance(&mut rng, n, t, m, 40) else {
                return Outcome::NoInstance;
            };
            match le22_rewrite(&seq) {
                Ok((out, _trace)) => {
                    if out.is_pairwise_cross_t_intersecting() && out.norm() >= seq.norm() {
                        Outcome::Pass
                    } else {
                        Outcome::Fail(json!({
                            "still_cross": out.is_pairwise_cross_t_intersecting(),
                            "norm_before": seq.norm(),
                            "norm_after": out.norm(),
                        }))
                    }
                }
                Err(Error::Hypothesis { .. }) => Outcome::NoInstance,
                Err(e) => Outcome::Fail(json!({ "error": e.to_string() })),
            }
        }
        LemmaName::Le3(part) => {
            let Ok(seq) = random_monotone_shifted_cross_seq(&mut rng, n, t, m, 30) else {
                return Outcome::NoInstance;
            };
            match le3_check(&seq, part, None) {
                Ok(true) => Outcome::Pass,
                Ok(false) => Outcome::Fail(json!({ "verdict": false })),
                Err(Error::Hypothesis { .. }) => Outcome::NoInstance,
                Err(e) => Outcome::Fail(json!({ "error": e.to_string() })),
            }
        }
        LemmaName::Le32 | LemmaName::Le33 => {
            // Both statements are verified by the combined per-class balance
            // check over every populated minus class.
            let Ok(seq) = random_push_pull_instance(&mut rng, n, t, m, 40) else {
                return Outcome::NoInstance;
            };
            let s = seq_symmetric_extent(&seq);
            let mut verdicts = 0;
            for i in 1..=s {
                let populated = seq.families().iter().any(|f| {
                    minus_decomposition(f, s)
                        .ok()
                        .and_then(|d| d.projections.get(&i).map(|p| !p.is_empty()))
                        .unwrap_or(false)
                });
                if !populated {
                    continue;
                }
                match le32_le33_check(&seq, i) {
                    Ok(true) => verdicts += 1,
                    Ok(false) => {
                        return Outcome::Fail(json!({ "class": i, "verdict": false }));
                    }
                    Err(Error::Hypothesis { .. }) => continue,
                    Err(e) => {
                        return Outcome::Fail(json!({ "class": i, "error": e.to_string() }));
                    }
                }
            }
            if verdicts == 0 {
                Outcome::NoInstance
            } else {
                Outcome::Pass
            }
        }
        LemmaName::Le5 => {
            let Ok(seq) = random_push_pull_instance(&mut rng, n, t, m, 40) else {
                return Outcome::NoInstance;
            };
            match le5_pushing_pulling(&seq) {
                Ok((out, _trace)) => {
                    if out.norm() > seq.norm() && out.is_pairwise_cross_t_intersecting() {
                        Outcome::Pass
                    } else {
                        Outcome::Fail(json!({
                            "still_cross": out.is_pairwise_cross_t_intersecting(),
                            "norm_before": seq.norm(),
                            "norm_after": out.norm(),
                        }))
                    }
                }
                Err(Error::Hypothesis { .. }) => Outcome::NoInstance,
                Err(e) => Outcome::Fail(json!({ "error": e.to_string() })),
            }
        }
        LemmaName::Le34 => {
            let pool = le34_pool.expect("pool computed for le34");
            if pool.is_empty() {
                return Outcome::NoInstance;
            }
            let witness = &pool[(trial as usize) % pool.len()];
            let shifted = match shift_closure(witness) {
                Ok(s) => s,
                Err(e) => return Outcome::Fail(json!({ "error": e.to_string() })),
            };
            if shifted.norm() != witness.norm() {
                return Outcome::Fail(json!({
                    "norm_before": witness.norm(),
                    "norm_after_closure": shifted.norm(),
                }));
            }
            match le34_check(&shifted, true) {
                Ok(true) => Outcome::Pass,
                Ok(false) => Outcome::Fail(json!({ "verdict": false })),
                Err(e) => Outcome::Fail(json!({ "error": e.to_string() })),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// family
// ---------------------------------------------------------------------------

struct CheckReport {
    label: String,
    intersecting: bool,
    sizes_ok: bool,
}

impl CheckReport {
    fn ok(&self) -> bool {
        self.intersecting && self.sizes_ok
    }
}

fn cmd_family(cli: &Cli, which: &FamilyCmd) -> i32 {
    if let Some(code) = reject_csv(cli, "family") {
        return code;
    }
    match which {
        FamilyCmd::Katona { n, t, check } => {
            let ground = match GroundSize::new(*n) {
                Ok(g) => g,
                Err(e) => return fail(&e),
            };
            let (fam, extra) = match formulas::katona_families(ground, *t) {
                Ok(p) => p,
                Err(e) => return fail(&e),
            };
            let closed = match formulas::katona_m(*n as u32, *t as u32) {
                Ok(v) => v,
                Err(e) => return fail(&e),
            };
            let report = check.then(|| CheckReport {
                label: format!("{t}-intersecting"),
                intersecting: fam.is_t_intersecting(*t),
                sizes_ok: fam.len() as u128 == closed,
            });
            match cli.format {
                Format::Text => {
                    println!("katona family (n={n}, t={t}): size {}", fam.len());
                    if let Some(extra) = &extra {
                        println!(
                            "includes {} middle-layer sets avoiding element {n}",
                            extra.len()
                        );
                    }
                    print!("{}", fam.to_text());
                    if let Some(r) = &report {
                        print_check_text(r, fam.len(), closed);
                    }
                }
                Format::Json => {
                    let mut v = json!({
                        "construction": "katona",
                        "n": n,
                        "t": t,
                        "size": fam.len(),
                        "closed_form": closed.to_string(),
                        "members": fam.hex_members(),
                    });
                    if let Some(extra) = &extra {
                        v["middle_layer_size"] = json!(extra.len());
                    }
                    attach_check_json(&mut v, report.as_ref());
                    print_json(&v);
                }
                Format::Csv => unreachable!("rejected above"),
            }
            check_exit(report.as_ref())
        }
        FamilyCmd::Rs { n, l, t, check } => {
            let ground = match GroundSize::new(*n) {
                Ok(g) => g,
                Err(e) => return fail(&e),
            };
            let (r_fam, s_fam) = match formulas::rs_families(ground, *l, *t) {
                Ok(p) => p,
                Err(e) => return fail(&e),
            };
            let closed_r = formulas::binom_sum(*l as u32, *t as u32, *l as u32)
                .and_then(|s| {
                    s.checked_mul(1u128 << (*n - *l) as u32)
                        .ok_or(Error::Overflow("rs size"))
                });
            let closed_r = match closed_r {
                Ok(v) => v,
                Err(e) => return fail(&e),
            };
            let closed_s = 1u128 << (*n - *l) as u32;
            let report = check.then(|| {
                let cross = FamilySeq::new(ground, *t, vec![r_fam.clone(), s_fam.clone()])
                    .map(|seq| seq.is_pairwise_cross_t_intersecting())
                    .unwrap_or(false);
                CheckReport {
                    label: format!("cross {t}-intersecting"),
                    intersecting: cross,
                    sizes_ok: r_fam.len() as u128 == closed_r && s_fam.len() as u128 == closed_s,
                }
            });
            match cli.format {
                Format::Text => {
                    println!(
                        "threshold pair (n={n}, l={l}, t={t}): sizes {} and {}",
                        r_fam.len(),
                        s_fam.len()
                    );
                    println!("members meeting [{l}] in at least {t} elements:");
                    print!("{}", r_fam.to_text());
                    println!("supersets of [{l}]:");
                    print!("{}", s_fam.to_text());
                    if let Some(r) = &report {
                        println!(
                            "check: {} = {}; sizes ({}, {}) vs closed forms ({}, {}) -> {}",
                            r.label,
                            r.intersecting,
                            r_fam.len(),
                            s_fam.len(),
                            closed_r,
                            closed_s,
                            if r.ok() { "ok" } else { "MISMATCH" }
                        );
                    }
                }
                Format::Json => {
                    let mut v = json!({
                        "construction": "rs",
                        "n": n,
                        "l": l,
                        "t": t,
                        "r_family": {
                            "size": r_fam.len(),
                            "closed_form": closed_r.to_string(),
                            "members": r_fam.hex_members(),
                        },
                        "s_family": {
                            "size": s_fam.len(),
                            "closed_form": closed_s.to_string(),
                            "members": s_fam.hex_members(),
                        },
                    });
                    attach_check_json(&mut v, report.as_ref());
                    print_json(&v);
                }
                Format::Csv => unreachable!("rejected above"),
            }
            check_exit(report.as_ref())
        }
        FamilyCmd::Frankl { n, k, t, r, check } => {
            let ground = match GroundSize::new(*n) {
                Ok(g) => g,
                Err(e) => return fail(&e),
            };
            let fam = match formulas::ak_frame_family(ground, *k, *t, *r) {
                Ok(f) => f,
                Err(e) => return fail(&e),
            };
            let closed =
                match formulas::ak_r_size(*n as u32, *k as u32, *t as u32, *r as u32) {
                    Ok(v) => v,
                    Err(e) => return fail(&e),
                };
            let report = check.then(|| CheckReport {
                label: format!("{t}-intersecting"),
                intersecting: fam.is_t_intersecting(*t),
                sizes_ok: fam.len() as u128 == closed,
            });
            match cli.format {
                Format::Text => {
                    println!("frame family (n={n}, k={k}, t={t}, r={r}): size {}", fam.len());
                    print!("{}", fam.to_text());
                    if let Some(rep) = &report {
                        print_check_text(rep, fam.len(), closed);
                    }
                }
                Format::Json => {
                    let mut v = json!({
                        "construction": "frankl",
                        "n": n,
                        "k": k,
                        "t": t,
                        "r": r,
                        "size": fam.len(),
                        "closed_form": closed.to_string(),
                        "members": fam.hex_members(),
                    });
                    attach_check_json(&mut v, report.as_ref());
                    print_json(&v);
                }
                Format::Csv => unreachable!("rejected above"),
            }
            check_exit(report.as_ref())
        }
    }
}

fn print_check_text(r: &CheckReport, size: usize, closed: u128) {
    println!(
        "check: {} = {}; size {} vs closed form {} -> {}",
        r.label,
        r.intersecting,
        size,
        closed,
        if r.ok() { "ok" } else { "MISMATCH" }
    );
}

fn attach_check_json(v: &mut Value, report: Option<&CheckReport>) {
    if let Some(r) = report {
        v["check"] = json!({
            "predicate": r.label,
            "intersecting": r.intersecting,
            "sizes_ok": r.sizes_ok,
            "ok": r.ok(),
        });
    }
}

fn check_exit(report: Option<&CheckReport>) -> i32 {
    match report {
        Some(r) if !r.ok() => {
            eprintln!("error: check failed");
            2
        }
        _ => 0,
    }
}
