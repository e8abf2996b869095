//! Command-line front end for the interval-dynamics analyzer.
//!
//! Exit codes: 0 = run completed (whatever the verdicts), 1 = usage or
//! parse error, 2 = internal consistency failure (decided Devaney routes
//! disagree, or a core failed its invariance re-check).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use devaney::{
    analyze, builtin, check_indecomposable, check_strong_indecomposable, check_transitivity,
    cycle_decomposition, forward_hull, parse_plm, periodic_density_check, periodic_points,
    render_cobweb, render_sets, sensitivity_sufficient, weak_indecomposability_check,
    AnalyzeParams, Budget, ClosedInterval, DecompositionOutcome, HullError, IntervalSet, MapModel,
    Rational, Verdict,
};

#[derive(Parser)]
#[command(
    name = "devaney",
    version,
    about = "Exact analysis of interval dynamical systems: transitivity, indecomposability, periodic density, Devaney chaos",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Dyadic resolution k (pairwise checks default to 6, single-set to 8)
    #[arg(long)]
    resolution: Option<u32>,
    /// Highest period enumerated
    #[arg(long, default_value_t = 10)]
    max_period: u32,
    /// Hull iteration limit per seed
    #[arg(long)]
    hull_iters: Option<usize>,
    /// Component cap for hull iteration
    #[arg(long)]
    components: Option<usize>,
    /// Depth of the shrinking-family scan
    #[arg(long)]
    family_depth: Option<u32>,
}

impl CommonOpts {
    fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(n) = self.hull_iters {
            b.hull_iters = n;
        }
        if let Some(c) = self.components {
            b.component_cap = c;
        }
        if let Some(t) = self.family_depth {
            b.family_depth = t;
        }
        b
    }

    fn params(&self) -> AnalyzeParams {
        let mut p = AnalyzeParams { budget: self.budget(), ..AnalyzeParams::default() };
        p.resolution = self.resolution;
        p.max_period = self.max_period;
        p
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the map at one point
    Eval {
        /// Path to a .plm file, or `builtin:NAME` / `builtin:constant:C`
        map: String,
        /// Point to evaluate, as a rational p/q
        #[arg(long)]
        at: String,
    },
    /// Print an exact orbit
    Orbit {
        map: String,
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Forward hull of a seed interval set
    Hull {
        map: String,
        /// Seed components, e.g. "1/3:4/9" or "0:1/3,2/3:1"
        #[arg(long)]
        seed: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Enumerate periodic points up to --max-period
    Periodic {
        map: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run one property check: transitivity | indecomposable |
    /// strong-indecomposable | weak-indecomposable | periodic-density |
    /// sensitivity | devaney
    Check {
        property: String,
        map: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Extract the transitive core and its cycle decomposition
    Decompose {
        map: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run the full verdict suite
    Analyze {
        map: String,
        #[command(flatten)]
        common: CommonOpts,
        /// Write the JSON report here (atomically)
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write an SVG of core/decomposition rows here (atomically)
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Render an SVG: a cobweb diagram (default) or labeled set rows (--sets)
    Render {
        map: String,
        #[arg(long)]
        svg: PathBuf,
        /// Cobweb seed (defaults to 1/3 scaled into the domain)
        #[arg(long)]
        seed: Option<String>,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Render core/decomposition set rows instead of a cobweb
        #[arg(long, default_value_t = false)]
        sets: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
}

enum CliError {
    Usage(String),
    Consistency(String),
}

impl CliError {
    fn code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(1),
            CliError::Consistency(_) => ExitCode::from(2),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Consistency(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

impl From<devaney::MapError> for CliError {
    fn from(e: devaney::MapError) -> Self {
        usage(e)
    }
}

impl From<HullError> for CliError {
    fn from(e: HullError) -> Self {
        match e {
            HullError::CoreNotInvariant { .. } => CliError::Consistency(e.to_string()),
            other => usage(other),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are successful outputs, everything else is usage
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("devaney: {}", e.message());
            e.code()
        }
    }
}

fn load_map(spec: &str) -> Result<MapModel, CliError> {
    if let Some(rest) = spec.strip_prefix("builtin:") {
        let (name, param) = match rest.split_once(':') {
            Some((n, p)) => {
                let q: Rational = p.parse().map_err(usage)?;
                (n, Some(q))
            }
            None => (rest, None),
        };
        let m = builtin(name, param)?;
        m.validate()?;
        Ok(m)
    } else {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| usage(format!("cannot read {spec}: {e}")))?;
        let name = Path::new(spec)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| spec.to_string());
        let m = parse_plm(&text, &name).map_err(usage)?;
        m.validate()?;
        Ok(m)
    }
}

fn parse_rational(s: &str) -> Result<Rational, CliError> {
    s.parse().map_err(usage)
}

/// Seed grammar: comma-separated components, each `lo:hi` or a single point.
fn parse_seed_set(s: &str) -> Result<IntervalSet, CliError> {
    let mut pairs = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(usage("empty seed component"));
        }
        let (lo, hi) = match part.split_once(':') {
            Some((a, b)) => (parse_rational(a)?, parse_rational(b)?),
            None => {
                let x = parse_rational(part)?;
                (x.clone(), x)
            }
        };
        pairs.push((lo, hi));
    }
    IntervalSet::from_endpoints(pairs).map_err(usage)
}

fn write_atomic(path: &Path, content: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp-{}",
            path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
            std::process::id()
        )),
        None => PathBuf::from(format!(".devaney-tmp-{}", std::process::id())),
    };
    std::fs::write(&tmp, content)
        .map_err(|e| usage(format!("cannot write {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        usage(format!("cannot write {}: {e}", path.display()))
    })
}

fn print_verdict(v: &Verdict) {
    let cert = if v.certified { " (certified)" } else { "" };
    let res = v.resolution.map(|k| format!(" at resolution {k}")).unwrap_or_default();
    println!("{}: {}{}{}", v.property, v.status, cert, res);
    for note in &v.notes {
        println!("  note: {note}");
    }
    if let Some(w) = &v.witness {
        let js = serde_json::to_string(w).expect("witness serializes");
        println!("  witness: {js}");
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eval { map, at } => {
            let m = load_map(&map)?;
            let x = parse_rational(&at)?;
            let y = m.eval(&x)?;
            println!("{y}");
            Ok(())
        }
        Command::Orbit { map, seed, steps } => {
            let m = load_map(&map)?;
            let x0 = parse_rational(&seed)?;
            let budget = Budget::default();
            let rec = devaney::orbit(&m, &x0, steps, budget.orbit_denom_bits)?;
            for (i, p) in rec.points.iter().enumerate() {
                println!("{i}\t{p}");
            }
            if rec.truncated {
                println!("# truncated: denominator budget reached");
            }
            Ok(())
        }
        Command::Hull { map, seed, common } => {
            let m = load_map(&map)?;
            let seed = parse_seed_set(&seed)?;
            let h = forward_hull(&m, &seed, &common.budget())?;
            println!("seed: {}", h.seed);
            println!("hull: {}", h.hull);
            println!(
                "converged: {} after {} iteration(s)",
                if h.converged { "yes" } else { "no" },
                h.iterations
            );
            Ok(())
        }
        Command::Periodic { map, common } => {
            let m = load_map(&map)?;
            let scan = periodic_points(&m, common.max_period, &common.budget())?;
            for f in &scan.findings {
                let kind = match f.kind {
                    devaney::FindingKind::Point => "point",
                    devaney::FindingKind::Segment => "segment",
                };
                println!("{kind}\t{}\tperiod {}", f.location, f.least_period);
            }
            let completeness = match scan.completeness {
                devaney::Completeness::BoundedPeriods => "bounded periods".to_string(),
                devaney::Completeness::StaircaseGap => {
                    "exact (staircase gap certificate)".to_string()
                }
                devaney::Completeness::ConstantRange => "exact (constant range)".to_string(),
            };
            println!(
                "# periods enumerated through {} of {}; completeness: {completeness}",
                scan.complete_through, scan.requested
            );
            Ok(())
        }
        Command::Check { property, map, common } => {
            let m = load_map(&map)?;
            let budget = common.budget();
            let params = common.params();
            let k_single = params.single_set_resolution();
            let k_pair = params.pairwise_resolution();
            match property.as_str() {
                "transitivity" => print_verdict(&check_transitivity(&m, k_single, &budget)?),
                "indecomposable" | "indecomposability" => {
                    print_verdict(&check_indecomposable(&m, k_pair, &budget)?)
                }
                "strong-indecomposable" | "strong-indecomposability" => {
                    let (v, core) = check_strong_indecomposable(&m, k_single, &budget)?;
                    print_verdict(&v);
                    if let Some(core) = core {
                        println!("core candidate E = {}", core.set);
                    }
                }
                "weak-indecomposable" | "weak-indecomposability" => {
                    let k = common.resolution.unwrap_or(params.weak_resolution);
                    print_verdict(&weak_indecomposability_check(
                        &m,
                        params.weak_samples,
                        k,
                        params.weak_burn_in,
                        params.weak_tail,
                        &budget,
                    )?)
                }
                "periodic-density" => print_verdict(&periodic_density_check(
                    &m,
                    k_single,
                    common.max_period,
                    &budget,
                )?),
                "sensitivity" => print_verdict(&sensitivity_sufficient(&m)),
                "devaney" => {
                    let d = devaney::check_devaney(&m, k_pair, common.max_period, &budget)?;
                    for r in &d.routes {
                        print_verdict(r);
                    }
                    print_verdict(&d.overall);
                    if d.contradiction {
                        return Err(CliError::Consistency(
                            "decided Devaney routes disagree".into(),
                        ));
                    }
                }
                other => {
                    return Err(usage(format!(
                        "unknown property {other:?}; expected transitivity, indecomposable, \
                         strong-indecomposable, weak-indecomposable, periodic-density, \
                         sensitivity or devaney"
                    )))
                }
            }
            Ok(())
        }
        Command::Decompose { map, common } => {
            let m = load_map(&map)?;
            let budget = common.budget();
            let k = common.params().single_set_resolution();
            let (strong, core) = check_strong_indecomposable(&m, k, &budget)?;
            print_verdict(&strong);
            let Some(core) = core else {
                println!("no transitive core: strong indecomposability did not hold");
                return Ok(());
            };
            // exact invariance re-check before decomposition
            let image = m.image_set(&core.set)?;
            if !core.set.contains(&image) {
                return Err(HullError::CoreNotInvariant { core: core.set, image }.into());
            }
            println!("core E = {}", core.set);
            match cycle_decomposition(&m, &core, &budget)? {
                DecompositionOutcome::Decomposed(d) => {
                    println!("n = {}", d.n);
                    for (i, j) in d.intervals.iter().enumerate() {
                        println!("J_{i} = {j}");
                    }
                }
                DecompositionOutcome::Inconclusive { reason } => {
                    println!("decomposition inconclusive: {reason}");
                }
            }
            Ok(())
        }
        Command::Analyze { map, common, report, svg } => {
            let m = load_map(&map)?;
            let params = common.params();
            let r = analyze(&m, &params)?;
            print!("{}", r.text_summary());
            if let Some(path) = report {
                write_atomic(&path, &r.to_json())?;
                println!("report written to {}", path.display());
            }
            if let Some(path) = svg {
                let rows = decomposition_rows(&r);
                write_atomic(&path, &render_sets(&m.domain(), &rows))?;
                println!("svg written to {}", path.display());
            }
            if r.devaney.contradiction {
                return Err(CliError::Consistency("decided Devaney routes disagree".into()));
            }
            Ok(())
        }
        Command::Render { map, svg, seed, steps, sets, common } => {
            let m = load_map(&map)?;
            if sets {
                let params = common.params();
                let r = analyze(&m, &params)?;
                let rows = decomposition_rows(&r);
                write_atomic(&svg, &render_sets(&m.domain(), &rows))?;
            } else {
                let x0 = match seed {
                    Some(s) => parse_rational(&s)?,
                    None => {
                        let d = m.domain();
                        d.lo() + (d.hi() - d.lo()) * Rational::new(1, 3)
                    }
                };
                let content = render_cobweb(&m, &x0, steps, &common.budget())?;
                write_atomic(&svg, &content)?;
            }
            println!("svg written to {}", svg.display());
            Ok(())
        }
    }
}

/// Rows for the set-row rendering: the core, its cycle intervals, and a
/// sample hull when no core exists.
fn decomposition_rows(r: &devaney::AnalysisReport) -> Vec<(String, IntervalSet)> {
    let mut rows = Vec::new();
    if let Some(core) = &r.core {
        rows.push(("E".to_string(), core.set.clone()));
    }
    if let Some(d) = &r.decomposition {
        for (i, j) in d.intervals.iter().enumerate() {
            rows.push((format!("J{i}"), IntervalSet::singleton(j.clone())));
        }
    }
    if rows.is_empty() {
        // fall back on the transitivity witness when there is no core
        if let Some(devaney::Witness::ProperInvariantHull { seed, hull }) = &r.transitivity.witness
        {
            rows.push(("witness seed".to_string(), seed.clone()));
            rows.push(("witness hull".to_string(), hull.clone()));
        }
    }
    if rows.is_empty() {
        rows.push((
            "domain".to_string(),
            IntervalSet::singleton(ClosedInterval::new(
                r.map.domain.lo().clone(),
                r.map.domain.hi().clone(),
            ).expect("valid domain")),
        ));
    }
    rows
}
