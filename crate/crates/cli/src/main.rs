//! `vortex`: enumerate, check, render and solve from the command line.
//!
//! Exit codes: 0 success, 1 negative domain result (invalid or excluded
//! diagram, non-empty diff, no convergence), 2 usage or internal error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use vortex_core::atlas::{
    analyze, diff, enumerate, load_catalog, render, EntryStatus, EnumerateOptions, EnumerationReport, Format, Stage,
};
use vortex_core::diagram::Diagram;
use vortex_core::exactpoly::{groebner_basis, normal_form, quadrilateral, Budget, MonomialOrder, OrderKind, VarId};
use vortex_core::numeric::{check_identities, load_samples, probe, solve, NumericError, SolveOptions};
use vortex_core::vorticity::{DecideOptions, VerdictKind};

const DIAGRAM_SCHEMA: &str = r#"expected a diagram as JSON:
  {"n":5,"z_strokes":[[1,2],[3,4]],"w_strokes":[[2,3],[1,4]],"z_circles":[1,2,3,4],"w_circles":[1,2,3,4]}
vertices are 1-based; each color's strokes must form disjoint cliques to pass the rule check"#;

const SAMPLE_SCHEMA: &str = r#"expected JSON lines, one sample per line, epsilon strictly decreasing:
  {"epsilon":0.0625,"z":[[re,im],...],"w":[[re,im],...]}"#;

#[derive(Parser)]
#[command(name = "vortex", version, about = "Two-colored diagrams for five-vortex central configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate every diagram on n vertices and run the exclusion pipeline.
    Enumerate {
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u8).range(3..=6))]
        n: u8,
        /// Worker threads (0 = one per core).
        #[arg(long, env = "VORTEX_WORKERS", default_value_t = 0)]
        workers: usize,
        /// Write the full JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the JSON report instead of the summary.
        #[arg(long)]
        json: bool,
    },
    /// Rule check, lemma findings and ledger verdict for one diagram.
    Check {
        diagram: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List the catalog, or compare it with an enumeration report.
    Catalog {
        #[arg(long, value_name = "REPORT")]
        diff: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Draw a diagram as DOT, SVG or TikZ.
    Render {
        diagram: PathBuf,
        #[arg(long, default_value = "svg")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve for a real normalized central configuration.
    Solve {
        /// Comma-separated vorticities, e.g. 1,1,1,-2,0.5
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
        gamma: Vec<f64>,
        /// Λ as `re` or `re,im`; must have modulus 1.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        attempts: usize,
        #[arg(long, env = "VORTEX_WORKERS", default_value_t = 0)]
        workers: usize,
    },
    /// Read a diagram off a sampled singular sequence.
    Probe {
        samples: PathBuf,
        #[arg(long, default_value_t = 0.15)]
        tol: f64,
    },
    /// Check the quadrilateral ideal-membership identity.
    VerifyGroebner,
}

/// Failure that maps to an exit code.
enum Fail {
    Domain(String),
    Usage(String),
}

type Outcome = Result<(), Fail>;

fn read(path: &PathBuf) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn read_diagram(path: &PathBuf) -> Result<Diagram, Fail> {
    serde_json::from_str(&read(path)?).map_err(|e| Fail::Usage(format!("{}: {e}\n{DIAGRAM_SCHEMA}", path.display())))
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Fail::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T, Fail> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(|e| Fail::Usage(e.to_string()))?;
    Ok(pool.install(f))
}

fn histogram_line(r: &EnumerationReport) -> String {
    let parts: Vec<String> = r.histogram.iter().map(|(c, k)| format!("{c}:{k}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn cmd_enumerate(n: u8, workers: usize, out: Option<PathBuf>, json: bool) -> Outcome {
    let opts = EnumerateOptions { workers, ..Default::default() };
    let report = enumerate(n as usize, &opts).map_err(|e| Fail::Usage(e.to_string()))?;
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    if let Some(p) = &out {
        fs::write(p, &text).map_err(|e| Fail::Usage(format!("{}: {e}", p.display())))?;
    }
    if json {
        print!("{text}");
        return Ok(());
    }
    let s = &report.stages;
    println!("n = {}", report.n);
    println!("raw candidates     {}", s.raw_candidates);
    println!("valid candidates   {}", s.valid_candidates);
    println!("valid classes      {}", s.valid_classes);
    println!("after lemmas       {}", s.after_lemmas);
    println!("survivors          {}", s.survivors);
    let fails: Vec<String> = report.validation_failures.iter().map(|(k, v)| format!("{k}={v}")).collect();
    println!("rule failures      {}", fails.join(" "));
    println!("histogram {}", histogram_line(&report));
    println!("total {}", report.total());
    for r in &report.rejected {
        println!("rejected C={} {} [{}] {}", r.c_class, r.diagram, r.reason, r.detail);
    }
    Ok(())
}

fn cmd_check(path: PathBuf, json: bool) -> Outcome {
    let d = read_diagram(&path)?;
    let a = analyze(&d, &DecideOptions::default()).map_err(|e| Fail::Usage(e.to_string()))?;
    if json {
        println!("{}", serde_json::to_string_pretty(&a).expect("analysis serializes"));
    } else {
        println!("diagram   {d}");
        println!("key       {}", d.canonical_key());
        println!("C         {}", a.c_class);
        let failures = a.rules.failures();
        println!("rules     {}", if failures.is_empty() { "all pass".to_string() } else { failures.join(", ") });
        for f in &a.findings {
            println!("finding   {}", f.comparable());
        }
        if let Some(v) = &a.verdict {
            let kind = match v.verdict {
                VerdictKind::Feasible => "feasible",
                VerdictKind::Infeasible => "infeasible",
                VerdictKind::Unknown => "unknown",
            };
            println!("ledger    {kind}");
        }
        for b in &a.branches {
            println!("branch    Λ {} -> {:?}", b.tag.lambda_class, b.verdict.verdict);
        }
    }
    match &a.exclusion {
        None => {
            if !json {
                println!("status    possible");
            }
            Ok(())
        }
        Some(e) if e.stage == Stage::Validate => Err(Fail::Domain(format!("invalid: {}", e.detail))),
        Some(e) => {
            let stage = format!("{:?}", e.stage).to_lowercase();
            Err(Fail::Domain(format!("excluded at {stage} stage ({}): {}", e.reason, e.detail)))
        }
    }
}

fn cmd_catalog(report: Option<PathBuf>, json: bool) -> Outcome {
    let cat = load_catalog().map_err(|e| Fail::Usage(e.to_string()))?;
    let Some(path) = report else {
        if json {
            for e in &cat {
                println!("{}", serde_json::to_string(e).expect("entry serializes"));
            }
            return Ok(());
        }
        for e in &cat {
            let status = match e.status {
                EntryStatus::Possible => "possible".to_string(),
                EntryStatus::Excluded => {
                    format!("excluded ({})", e.excluding_lemma.expect("excluded entries carry a reason"))
                }
            };
            println!("{:<14} C={} {:<28} {}", e.figure_ref, e.c_class, status, e.diagram);
        }
        let possible = cat.iter().filter(|e| e.status == EntryStatus::Possible).count();
        println!("{} entries, {} possible, {} excluded", cat.len(), possible, cat.len() - possible);
        return Ok(());
    };
    let report: EnumerationReport =
        serde_json::from_str(&read(&path)?).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    let d = diff(&report, &cat);
    if json {
        println!("{}", serde_json::to_string_pretty(&d).expect("diff serializes"));
    } else {
        for (k, f) in &d.missing {
            println!("missing   {f} {k}");
        }
        for k in &d.extra {
            println!("extra     {k}");
        }
        for (k, f) in &d.not_rejected {
            println!("kept      {f} {k}");
        }
        for (f, want, got) in &d.reason_mismatches {
            println!("reason    {f}: expected {want}, got {got}");
        }
    }
    if d.is_empty() {
        if !json {
            println!("no differences");
        }
        Ok(())
    } else {
        Err(Fail::Domain("catalog and report differ".into()))
    }
}

fn cmd_render(path: PathBuf, format: String, out: Option<PathBuf>) -> Outcome {
    let f: Format = format.parse().map_err(|e: vortex_core::atlas::RenderError| Fail::Usage(e.to_string()))?;
    let d = read_diagram(&path)?;
    write_or_print(&out, &render(&d, f))
}

fn parse_lambda(s: &str) -> Result<Complex64, Fail> {
    let bad = || Fail::Usage(format!("--lambda {s:?}: expected `re` or `re,im`"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(bad()),
    }
}

fn cmd_solve(gamma: Vec<f64>, lambda: String, seed: u64, attempts: usize, workers: usize) -> Outcome {
    let lambda = parse_lambda(&lambda)?;
    let opts = SolveOptions { seed, attempts, ..Default::default() };
    let result = with_pool(workers, || solve(&gamma, lambda, &opts))?;
    match result {
        Ok(sol) => {
            let ids = check_identities(&sol.config);
            let out = serde_json::json!({
                "configuration": sol.config,
                "attempt": sol.attempt,
                "identities": ids,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("solution serializes"));
            Ok(())
        }
        Err(e @ NumericError::NoConvergence { .. }) => Err(Fail::Domain(e.to_string())),
        Err(e) => Err(Fail::Usage(e.to_string())),
    }
}

fn cmd_probe(path: PathBuf, tol: f64) -> Outcome {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Fail::Usage(format!("--tol {tol}: expected a value in (0, 1)")));
    }
    let samples = load_samples(&read(&path)?).map_err(|e| Fail::Usage(format!("{e}\n{SAMPLE_SCHEMA}")))?;
    match probe(&samples, tol) {
        Ok(out) => {
            let j = serde_json::json!({
                "diagram": out.diagram,
                "key": out.diagram.canonical_key(),
                "rules": out.rules,
                "exponents": out.exponents,
            });
            println!("{}", serde_json::to_string_pretty(&j).expect("probe serializes"));
            if out.rules.valid() {
                Ok(())
            } else {
                Err(Fail::Domain(format!("probed diagram fails {}", out.rules.failures().join(", "))))
            }
        }
        Err(e @ NumericError::Ambiguous { .. }) => Err(Fail::Domain(e.to_string())),
        Err(e) => Err(Fail::Usage(format!("{e}\n{SAMPLE_SCHEMA}"))),
    }
}

fn cmd_verify_groebner() -> Outcome {
    let gens = quadrilateral::generators();
    let target = quadrilateral::target();
    println!("target    {target}");
    let mut reversed = gens.clone();
    reversed.reverse();
    let flipped = MonomialOrder::with_priority(
        OrderKind::GrevLex,
        &[VarId::gamma(4), VarId::gamma(3), VarId::gamma(1), VarId::B, VarId::A],
    );
    let mut all = true;
    for (name, order, g) in [
        ("grevlex a>b>Γ1>Γ3>Γ4", MonomialOrder::grevlex(), &gens),
        ("grevlex Γ4>Γ3>Γ1>b>a, reversed input", flipped, &reversed),
    ] {
        let t = Instant::now();
        let basis = groebner_basis(g, &order, Budget::default()).map_err(|e| Fail::Usage(e.to_string()))?;
        let nf = normal_form(&target, &basis, &order);
        let ok = nf.is_zero();
        all &= ok;
        println!(
            "{name}: basis of {} elements, normal form {} ({:.2?})",
            basis.len(),
            if ok { "0".to_string() } else { nf.to_string() },
            t.elapsed()
        );
    }
    if all {
        println!("member    yes");
        Ok(())
    } else {
        Err(Fail::Domain("target not in the ideal".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Enumerate { n, workers, out, json } => cmd_enumerate(n, workers, out, json),
        Command::Check { diagram, json } => cmd_check(diagram, json),
        Command::Catalog { diff, json } => cmd_catalog(diff, json),
        Command::Render { diagram, format, out } => cmd_render(diagram, format, out),
        Command::Solve { gamma, lambda, seed, attempts, workers } => cmd_solve(gamma, lambda, seed, attempts, workers),
        Command::Probe { samples, tol } => cmd_probe(samples, tol),
        Command::VerifyGroebner => cmd_verify_groebner(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Domain(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
