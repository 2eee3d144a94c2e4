//! Command-line interface: purity evaluation, XY-chain scans, theorem
//! equivalence checks, convex-roof optimization, and GLOCC monotonicity
//! audits, all emitting CSV with deterministic, seed-reproducible content.
//!
//! Exit codes: 0 success, 1 numeric failure (flagged violations or a
//! solver that did not converge), 2 configuration error.
//!
//! Every subcommand accepts `--config <file>` holding `key = value` lines
//! (keys are the long flag names); explicit flags override file values.

mod output;
mod specs;

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand};

use hpurity::{
    ground_state_check, h_purity, is_unentangled, local_qubit_algebra, purity_scan,
    roof_purity_deficit, run_glocc_audit, theorem_equivalence_suite, AuditOptions, CoreError,
    RoofOptions, XyParams,
};

use output::{csv_field, fmt_f, OutputTarget};
use specs::{build_algebra, build_rho, build_state, merged, read_config, SpecParams};

#[derive(Parser)]
#[command(
    name = "hpurity",
    version,
    about = "Generalized entanglement relative to distinguished observable algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Purity of a named state relative to an algebra (one CSV row).
    Purity(PurityArgs),
    /// Disorder-parameter scan of the periodic XY chain.
    ScanXy(ScanArgs),
    /// Maximal-purity vs unique-ground-state equivalence suite.
    TheoremCheck(TheoremArgs),
    /// Convex-roof purity deficit of a mixed state.
    Roof(RoofArgs),
    /// Sample group-unitary GLOCC maps and audit roof monotonicity.
    GloccCheck(GloccArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Config file with `key = value` lines; flags override.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct AlgebraArgs {
    /// Algebra name: local-qubits | bipartite | spin | collective-spin |
    /// fermion-u | fermion-so.
    #[arg(long)]
    algebra: Option<String>,
    /// Qubit / mode count (local-qubits, fermion-u, fermion-so; also ghz/w).
    #[arg(long)]
    n: Option<usize>,
    /// First factor dimension (bipartite).
    #[arg(long)]
    m: Option<usize>,
    /// Second factor dimension (bipartite).
    #[arg(long)]
    nb: Option<usize>,
    /// Spin quantum number (spin, collective-spin, coherent states).
    #[arg(long)]
    j: Option<f64>,
    /// Collective copies (collective-spin).
    #[arg(long)]
    copies: Option<usize>,
}

impl AlgebraArgs {
    fn resolve(&self, cfg: &HashMap<String, String>) -> Result<(String, SpecParams)> {
        let name = merged(self.algebra.clone(), cfg, "algebra")?
            .ok_or_else(|| anyhow!("--algebra is required"))?;
        let params = SpecParams {
            n: merged(self.n, cfg, "n")?,
            m: merged(self.m, cfg, "m")?,
            nb: merged(self.nb, cfg, "nb")?,
            j: merged(self.j, cfg, "j")?,
            copies: merged(self.copies, cfg, "copies")?,
        };
        Ok((name, params))
    }
}

#[derive(Args, Clone)]
struct PurityArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    algebra: AlgebraArgs,
    /// State spec: ghz | w | up | basis:<i> | haar:<seed> |
    /// coherent:<theta>,<phi> | product:<theta>,<phi>;... | csv:<path>.
    #[arg(long)]
    state: Option<String>,
    /// Purity tolerance for the unentangled classification.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Clone)]
struct ScanArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Chain length (even).
    #[arg(long)]
    n: Option<usize>,
    /// Anisotropy in [0, 1].
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    gmin: Option<f64>,
    #[arg(long)]
    gmax: Option<f64>,
    /// Number of grid rows (endpoints included).
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Args, Clone)]
struct TheoremArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    algebra: AlgebraArgs,
    /// Group-orbit states of the reference to test.
    #[arg(long)]
    orbit: Option<usize>,
    /// Haar-random states to test.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Clone)]
struct RoofArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    algebra: AlgebraArgs,
    /// Density matrix spec: werner:<p> | maxmixed | pure:<state> |
    /// rank2:<seed> | csv:<path>.
    #[arg(long)]
    rho: Option<String>,
    /// Optimizer restarts.
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Ensemble size cap (default rank^2).
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args, Clone)]
struct GloccArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of qubits (factors).
    #[arg(long)]
    n: Option<usize>,
    /// Conditional-composition depth.
    #[arg(long)]
    depth: Option<usize>,
    /// Audit trials.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Roof optimizer restarts per trial.
    #[arg(long)]
    restarts: Option<usize>,
    /// Probability that a sampled stage measures.
    #[arg(long)]
    measure_prob: Option<f64>,
    /// Restart multiplier for re-checking apparent violations.
    #[arg(long)]
    rerun_factor: Option<usize>,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("HPURITY_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
    }
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Purity(a) => run_purity(a),
        Cmd::ScanXy(a) => run_scan(a),
        Cmd::TheoremCheck(a) => run_theorem(a),
        Cmd::Roof(a) => run_roof(a),
        Cmd::GloccCheck(a) => run_glocc(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn load_config(common: &CommonArgs) -> Result<HashMap<String, String>> {
    match &common.config {
        Some(path) => read_config(path),
        None => Ok(HashMap::new()),
    }
}

fn run_purity(args: PurityArgs) -> Result<u8> {
    let cfg = load_config(&args.common)?;
    let (name, params) = args.algebra.resolve(&cfg)?;
    let alg = build_algebra(&name, &params)?;
    let state_spec = merged(args.state.clone(), &cfg, "state")?
        .ok_or_else(|| anyhow!("--state is required"))?;
    let psi = build_state(&state_spec, alg.dim(), &params)?;
    let tol = merged(args.tol, &cfg, "tol")?.unwrap_or(hpurity::tol::PURITY_TOL);

    let mut out = OutputTarget::open(&args.common.out)?;
    out.line("# label,purity,classification,gap")?;
    let purity = match h_purity(&psi, &alg) {
        Ok(p) => p,
        Err(e) => return numeric_failure(e),
    };
    let class = if is_unentangled(&psi, &alg, tol)? {
        "unentangled"
    } else {
        "entangled"
    };
    let gap = match ground_state_check(&psi, &alg) {
        Ok(check) => fmt_f(check.gap),
        Err(CoreError::TooLarge { .. }) => String::new(),
        Err(e) => return numeric_failure(e),
    };
    out.line(&format!(
        "{},{},{class},{gap}",
        csv_field(&state_spec),
        fmt_f(purity)
    ))?;
    out.finish()?;
    Ok(0)
}

fn run_scan(args: ScanArgs) -> Result<u8> {
    let cfg = load_config(&args.common)?;
    let n = merged(args.n, &cfg, "n")?.ok_or_else(|| anyhow!("--n is required"))?;
    let eta = merged(args.eta, &cfg, "eta")?.ok_or_else(|| anyhow!("--eta is required"))?;
    let gmin = merged(args.gmin, &cfg, "gmin")?.unwrap_or(0.0);
    let gmax = merged(args.gmax, &cfg, "gmax")?.unwrap_or(2.0);
    let steps = merged(args.steps, &cfg, "steps")?.unwrap_or(201);
    if steps < 2 || gmax <= gmin {
        return Err(anyhow!(
            "--steps must be >= 2 and --gmax greater than --gmin"
        ));
    }
    XyParams::new(n, gmin.max(0.0), eta)?; // validate early for exit 2

    let grid: Vec<f64> = (0..steps)
        .map(|i| gmin + (gmax - gmin) * i as f64 / (steps - 1) as f64)
        .collect();
    let scan = match purity_scan(&grid, eta, n) {
        Ok(s) => s,
        Err(e) => return numeric_failure(e),
    };

    let mut out = OutputTarget::open(&args.common.out)?;
    out.line("# g,purity,min_gap")?;
    for p in &scan.points {
        out.line(&format!(
            "{},{},{}",
            fmt_f(p.g),
            fmt_f(p.purity),
            fmt_f(p.min_gap)
        ))?;
    }
    out.finish()?;

    // Plain two-column companion for plotting tools.
    if let Some(path) = &args.common.out {
        let dat = path.with_extension("dat");
        let mut dat_out = OutputTarget::open(&Some(dat))?;
        for p in &scan.points {
            dat_out.line(&format!("{} {}", fmt_f(p.g), fmt_f(p.purity)))?;
        }
        dat_out.finish()?;
    }
    Ok(0)
}

fn run_theorem(args: TheoremArgs) -> Result<u8> {
    let cfg = load_config(&args.common)?;
    let (name, params) = args.algebra.resolve(&cfg)?;
    let alg = build_algebra(&name, &params)?;
    let orbit = merged(args.orbit, &cfg, "orbit")?.unwrap_or(100);
    let random = merged(args.random, &cfg, "random")?.unwrap_or(100);
    let seed = merged(args.seed, &cfg, "seed")?.unwrap_or(1);
    if !alg.is_irreducible() {
        return Err(anyhow!(
            "--algebra {name}: equivalence assertions need an irreducible representation"
        ));
    }

    let report = match theorem_equivalence_suite(&alg, orbit, random, seed) {
        Ok(r) => r,
        Err(e) => return numeric_failure(e),
    };
    let mut out = OutputTarget::open(&args.common.out)?;
    out.line("# label,purity,unique_ground,gap")?;
    for case in &report.cases {
        out.line(&format!(
            "{},{},{},{}",
            case.label,
            fmt_f(case.purity),
            case.unique_ground,
            fmt_f(case.gap)
        ))?;
    }
    out.line(&format!(
        "# summary: algebra={} cases={} counterexamples={}",
        report.algebra,
        report.cases.len(),
        report.counterexamples
    ))?;
    out.finish()?;
    Ok(if report.counterexamples == 0 { 0 } else { 1 })
}

fn run_roof(args: RoofArgs) -> Result<u8> {
    let cfg = load_config(&args.common)?;
    let (name, params) = args.algebra.resolve(&cfg)?;
    let alg = build_algebra(&name, &params)?;
    let rho_spec =
        merged(args.rho.clone(), &cfg, "rho")?.ok_or_else(|| anyhow!("--rho is required"))?;
    let rho = build_rho(&rho_spec, alg.dim(), &params)?;
    let opts = RoofOptions {
        restarts: merged(args.restarts, &cfg, "restarts")?.unwrap_or(hpurity::tol::ROOF_RESTARTS),
        seed: merged(args.seed, &cfg, "seed")?.unwrap_or(0x700f),
        ensemble_cap: merged(args.cap, &cfg, "cap")?,
        ..RoofOptions::default()
    };

    let res = match roof_purity_deficit(&rho, &alg, &opts) {
        Ok(r) => r,
        Err(e) => return numeric_failure(e),
    };
    let mut out = OutputTarget::open(&args.common.out)?;
    out.line("# roof purity deficit; member rows: member,index,weight,re0,im0,re1,im1,...")?;
    out.line(&format!("value,{}", fmt_f(res.value)))?;
    out.line(&format!("baseline,{}", fmt_f(res.baseline)))?;
    for (i, (w, psi)) in res
        .ensemble
        .weights
        .iter()
        .zip(res.ensemble.states.iter())
        .enumerate()
    {
        let amps: Vec<String> = psi
            .as_slice()
            .iter()
            .flat_map(|z| [fmt_f(z.re), fmt_f(z.im)])
            .collect();
        out.line(&format!("member,{i},{},{}", fmt_f(*w), amps.join(",")))?;
    }
    out.finish()?;
    Ok(0)
}

fn run_glocc(args: GloccArgs) -> Result<u8> {
    let cfg = load_config(&args.common)?;
    let n = merged(args.n, &cfg, "n")?.unwrap_or(2);
    let depth = merged(args.depth, &cfg, "depth")?.unwrap_or(2);
    let trials = merged(args.trials, &cfg, "trials")?.unwrap_or(200);
    let seed = merged(args.seed, &cfg, "seed")?.unwrap_or(0xa0d17);
    let restarts =
        merged(args.restarts, &cfg, "restarts")?.unwrap_or(hpurity::tol::ROOF_RESTARTS);
    let measure_prob = merged(args.measure_prob, &cfg, "measure-prob")?.unwrap_or(0.5);
    let rerun_factor = merged(args.rerun_factor, &cfg, "rerun-factor")?.unwrap_or(4);

    let alg = local_qubit_algebra(n)?;
    let factor = local_qubit_algebra(1)?;
    let factors: Vec<&hpurity::ObservableAlgebra> = (0..n).map(|_| &factor).collect();
    let opts = AuditOptions {
        trials,
        depth,
        seed,
        measure_prob,
        roof: RoofOptions {
            restarts,
            ..RoofOptions::default()
        },
        rerun_factor,
    };
    let report = match run_glocc_audit(&alg, &factors, &opts) {
        Ok(r) => r,
        Err(e) => return numeric_failure(e),
    };

    let mut out = OutputTarget::open(&args.common.out)?;
    out.line("# trial,before,after,excess,reran")?;
    for row in &report.rows {
        out.line(&format!(
            "{},{},{},{},{}",
            row.trial,
            fmt_f(row.before),
            fmt_f(row.after),
            fmt_f(row.excess),
            row.reran
        ))?;
    }
    out.line(&format!(
        "# summary: trials={} violations={} max_excess={} tolerance={}",
        report.rows.len(),
        report.violations,
        fmt_f(report.max_excess),
        fmt_f(report.tolerance)
    ))?;
    out.finish()?;
    Ok(if report.violations == 0 { 0 } else { 1 })
}

/// Numeric failures exit 1; the message still lands on stderr.
fn numeric_failure(err: CoreError) -> Result<u8> {
    eprintln!("numeric failure: {err}");
    Ok(1)
}
