//! Command implementations. Configuration problems (bad files, bad
//! parameters) and runtime failures map to distinct exit codes; the bench
//! command reserves a third one for bound violations.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use serde::Serialize;

use tbrw_core::chain;
use tbrw_core::cover::{build_random_cover, build_sqrtlog_cover, validate_cover};
use tbrw_core::explore::{self, build_plan, choose_power_exponent, run_global};
use tbrw_core::generators;
use tbrw_core::strategies::{
    BiasStrategy, ClosestUncoveredBias, NaiveTowardBias, SpanningWalkBias, TowardSetBias,
    UniformBias,
};
use tbrw_core::walk::{estimate_cover_time, estimate_hitting_time, SimOptions};
use tbrw_core::weights::weight_field;
use tbrw_core::{EstimatorReport, Graph, VertexSet, WeightedGraph};

use crate::args::*;
use crate::artifacts::{emit_json, Meta};
use crate::bench::bench_suite;
use crate::formats;

/// How a completed command should exit.
pub enum Outcome {
    Success,
    /// bench found failing rows
    BoundViolations(usize),
}

/// Failures the CLI distinguishes by exit code: 2 for configuration
/// problems, 1 for runtime failures.
pub enum CliError {
    Config(anyhow::Error),
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Config(e) | CliError::Runtime(e) => format!("{e:#}"),
        }
    }
}

fn config<T>(r: Result<T>) -> std::result::Result<T, CliError> {
    r.map_err(CliError::Config)
}

fn runtime<T>(r: Result<T>) -> std::result::Result<T, CliError> {
    r.map_err(CliError::Runtime)
}

pub fn execute(cli: Cli) -> std::result::Result<Outcome, CliError> {
    match &cli.command {
        Command::Generate(args) => generate(args),
        Command::Cover(args) => cover_cmd(args, &cli),
        Command::Analyze(args) => analyze(args, &cli),
        Command::Simulate(args) => simulate(args, &cli),
        Command::Explore(args) => explore_cmd(args, &cli),
        Command::Bench(args) => bench_cmd(args, &cli),
    }
}

#[derive(Serialize)]
struct Sidecar {
    meta: Meta,
    family: String,
    labels: serde_json::Value,
}

fn generate(args: &GenerateArgs) -> std::result::Result<Outcome, CliError> {
    let (graph, family, labels): (Graph, String, serde_json::Value) = config(match &args.family {
        Family::Path { n } => generators::path(*n)
            .map(|g| (g, "path".into(), serde_json::Value::Null))
            .map_err(Into::into),
        Family::Cycle { n } => generators::cycle(*n)
            .map(|g| (g, "cycle".into(), serde_json::Value::Null))
            .map_err(Into::into),
        Family::Grid { rows, cols } => generators::grid(*rows, *cols)
            .map(|g| (g, "grid".into(), serde_json::Value::Null))
            .map_err(Into::into),
        Family::Complete { n } => generators::complete(*n)
            .map(|g| (g, "complete".into(), serde_json::Value::Null))
            .map_err(Into::into),
        Family::BinaryTree { n } => generators::binary_tree(*n)
            .map(|g| (g, "binary-tree".into(), serde_json::Value::Null))
            .map_err(Into::into),
        Family::RandomRegular {
            n,
            degree,
            seed,
            connected,
        } => {
            let mut rng = tbrw_core::rng::stream(*seed, 0);
            let build = if *connected {
                generators::random_regular_connected(*n, *degree, &mut rng)
            } else {
                generators::random_regular(*n, *degree, &mut rng)
            };
            build
                .map(|g| (g, "random-regular".into(), serde_json::Value::Null))
                .map_err(Into::into)
        }
        Family::Layered { n } => generators::layered(*n)
            .map(|(g, layers)| {
                (
                    g,
                    "layered".into(),
                    serde_json::json!({ "layer_of": layers }),
                )
            })
            .map_err(Into::into),
        Family::Cayley2 { p } => generators::affine_cayley_radius2(*p)
            .map(|c| {
                let parts: Vec<&str> = c
                    .part_of
                    .iter()
                    .map(|p| match p {
                        generators::Part::X => "X",
                        generators::Part::Y => "Y",
                    })
                    .collect();
                (
                    c.graph,
                    "cayley2".into(),
                    serde_json::json!({ "part_of": parts, "elements": c.element_labels }),
                )
            })
            .map_err(Into::into),
        Family::Cayley3 { p } => generators::affine_cayley_radius3(*p)
            .map(|c| {
                let parts: Vec<&str> = c
                    .part_of
                    .iter()
                    .map(|p| match p {
                        generators::Part::X => "X",
                        generators::Part::Y => "Y",
                    })
                    .collect();
                (
                    c.graph,
                    "cayley3".into(),
                    serde_json::json!({ "part_of": parts, "elements": c.element_labels }),
                )
            })
            .map_err(Into::into),
    })?;

    let text = graph.to_text();
    match &args.out {
        Some(path) => runtime(std::fs::write(path, &text).map_err(Into::into))?,
        None => print!("{text}"),
    }
    if let Some(path) = &args.sidecar {
        let sidecar = Sidecar {
            meta: Meta::new(&family, 0),
            family,
            labels,
        };
        runtime(emit_json(&sidecar, Some(path)))?;
    }
    eprintln!(
        "generated graph: {} vertices, {} edges",
        graph.vertex_count(),
        graph.edge_count()
    );
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct CoverArtifact {
    meta: Meta,
    #[serde(flatten)]
    cover: formats::CoverFile,
    valid: bool,
    set_count: usize,
}

fn cover_cmd(args: &CoverArgs, cli: &Cli) -> std::result::Result<Outcome, CliError> {
    let graph = config(formats::load_graph(&args.graph))?;
    let built = runtime(
        match args.levels {
            Some(levels) => build_random_cover(&graph, levels, args.seed, args.retries),
            None => build_sqrtlog_cover(&graph, args.seed, args.retries),
        }
        .map_err(|e| anyhow!(e)),
    )?;
    let report = validate_cover(&graph, &built);
    let artifact = CoverArtifact {
        meta: Meta::new(cli, args.seed),
        cover: formats::CoverFile::from_cover(&built, report.overlap),
        valid: report.is_valid(),
        set_count: built.sets.len(),
    };
    runtime(emit_json(&artifact, args.out.as_deref()))?;
    eprintln!(
        "cover: {} sets, radius certificate {}, overlap {:.3}",
        built.sets.len(),
        built.radius,
        report.overlap
    );
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct AnalyzeArtifact {
    meta: Meta,
    stationary: Vec<f64>,
    hitting_target: Vec<u32>,
    hitting: Vec<f64>,
    hitting_residual: f64,
    resistance_pairs: Vec<ResistancePair>,
    matthews_set_size: Option<usize>,
    matthews_bound: Option<f64>,
}

#[derive(Serialize)]
struct ResistancePair {
    u: u32,
    v: u32,
    resistance: f64,
}

fn analyze(args: &AnalyzeArgs, cli: &Cli) -> std::result::Result<Outcome, CliError> {
    let graph = config(formats::load_graph(&args.graph))?;
    let n = graph.vertex_count();
    let (wg, default_target): (WeightedGraph, Option<VertexSet>) = config(
        match (&args.weights, &args.anchor, args.eps) {
            (Some(wpath), None, None) => {
                formats::read_weights(wpath, &graph).map(|wg| (wg, None))
            }
            (None, Some(apath), Some(eps)) => (|| {
                let anchor = formats::read_vertex_set(apath, n)?;
                let wg = weight_field(&graph, &anchor, eps).context("building weight field")?;
                Ok((wg, Some(anchor)))
            })(),
            _ => Err(anyhow!(
                "provide either --weights FILE or both --anchor FILE and --eps"
            )),
        },
    )?;
    let target = match &args.target {
        Some(path) => config(formats::read_vertex_set(path, n))?,
        None => config(default_target.ok_or_else(|| {
            anyhow!("explicit weights need --target for hitting times")
        }))?,
    };

    let stationary = runtime(chain::stationary(&wg).map_err(Into::into))?;
    let hitting = runtime(chain::hitting_times(&wg, &target).map_err(Into::into))?;
    let solver = runtime(chain::ResistanceSolver::new(&wg).map_err(Into::into))?;
    let mut pairs = Vec::new();
    let mut rng = tbrw_core::rng::stream(args.seed, 0);
    use rand::Rng;
    for _ in 0..args.pairs {
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        if u == v {
            continue;
        }
        let (r, _) = runtime(solver.resistance(u, v).map_err(Into::into))?;
        pairs.push(ResistancePair {
            u,
            v,
            resistance: r,
        });
    }
    let matthews_set = match &args.matthews_set {
        Some(path) => Some(config(formats::read_vertex_set(path, n))?),
        None if n <= 64 => Some(VertexSet::full(n)),
        None => None,
    };
    let matthews = match &matthews_set {
        Some(set) => Some(runtime(
            chain::matthews_bound(&wg, set).map_err(Into::into),
        )?),
        None => None,
    };

    let artifact = AnalyzeArtifact {
        meta: Meta::new(cli, args.seed),
        stationary,
        hitting_target: target.iter().collect(),
        hitting: hitting.values,
        hitting_residual: hitting.residual,
        resistance_pairs: pairs,
        matthews_set_size: matthews_set.as_ref().map(|s| s.len()),
        matthews_bound: matthews,
    };
    runtime(emit_json(&artifact, args.out.as_deref()))?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct SimulateArtifact {
    meta: Meta,
    graph_vertices: usize,
    graph_edges: usize,
    eps: f64,
    strategy: String,
    start: u32,
    goal: String,
    estimator: EstimatorReport,
}

fn simulate(args: &SimulateArgs, cli: &Cli) -> std::result::Result<Outcome, CliError> {
    let graph = config(formats::load_graph(&args.graph))?;
    let n = graph.vertex_count();
    if args.start as usize >= n {
        return Err(CliError::Config(anyhow!(
            "start vertex {} out of range",
            args.start
        )));
    }
    if !(0.0..=1.0).contains(&args.eps) {
        return Err(CliError::Config(anyhow!("eps must lie in [0,1]")));
    }
    let anchor = match &args.anchor {
        Some(path) => Some(config(formats::read_vertex_set(path, n))?),
        None => None,
    };
    let strategy: Box<dyn BiasStrategy> = config(match args.strategy {
        StrategyKind::Uniform => Ok(Box::new(UniformBias) as Box<dyn BiasStrategy>),
        StrategyKind::Toward => anchor
            .as_ref()
            .map(|a| Box::new(TowardSetBias::new(&graph, a, args.eps)) as Box<dyn BiasStrategy>)
            .ok_or_else(|| anyhow!("--strategy toward needs --anchor")),
        StrategyKind::Naive => anchor
            .as_ref()
            .map(|a| Box::new(NaiveTowardBias::new(&graph, a)) as Box<dyn BiasStrategy>)
            .ok_or_else(|| anyhow!("--strategy naive needs --anchor")),
        StrategyKind::Spanning => Ok(Box::new(SpanningWalkBias::new(
            &graph, args.eps, args.start,
        )) as Box<dyn BiasStrategy>),
        StrategyKind::ClosestUncovered => {
            Ok(Box::new(ClosestUncoveredBias::new(&graph)) as Box<dyn BiasStrategy>)
        }
    })?;

    let cap = (args.cap_multiplier * (n as f64).powi(3)).max(65536.0) as u64;
    let opts = SimOptions::new(args.trials, args.seed, n).with_cap(cap);
    let (goal_name, report) = match args.until {
        SimGoal::Cover => (
            "cover",
            runtime(
                estimate_cover_time(&graph, args.eps, strategy.as_ref(), args.start, opts)
                    .map_err(Into::into),
            )?,
        ),
        SimGoal::Hit => {
            let target = match &args.target {
                Some(path) => config(formats::read_vertex_set(path, n))?,
                None => config(
                    anchor
                        .clone()
                        .ok_or_else(|| anyhow!("--until hit needs --target or --anchor")),
                )?,
            };
            (
                "hit",
                runtime(
                    estimate_hitting_time(
                        &graph,
                        args.eps,
                        strategy.as_ref(),
                        args.start,
                        &target,
                        opts,
                    )
                    .map_err(Into::into),
                )?,
            )
        }
    };

    if let Some(csv) = &args.csv {
        runtime(write_trial_csv(csv, &report.per_trial))?;
    }
    let artifact = SimulateArtifact {
        meta: Meta::new(cli, args.seed),
        graph_vertices: n,
        graph_edges: graph.edge_count(),
        eps: args.eps,
        strategy: format!("{:?}", args.strategy).to_lowercase(),
        start: args.start,
        goal: goal_name.into(),
        estimator: report,
    };
    runtime(emit_json(&artifact, args.out.as_deref()))?;
    Ok(Outcome::Success)
}

fn write_trial_csv(path: &Path, per_trial: &[Option<f64>]) -> Result<()> {
    let mut out = String::from("trial,outcome,value\n");
    for (i, v) in per_trial.iter().enumerate() {
        match v {
            Some(v) => writeln!(out, "{i},ok,{v}").unwrap(),
            None => writeln!(out, "{i},capped,").unwrap(),
        }
    }
    std::fs::write(path, out).context("writing per-trial csv")
}

#[derive(Serialize)]
struct BoundTableRow {
    name: String,
    region: Option<usize>,
    observed: f64,
    requirement: f64,
    pass: bool,
}

#[derive(Serialize)]
struct ExploreArtifact {
    meta: Meta,
    power_exponent: usize,
    regions: usize,
    cover_radius: u32,
    overlap: f64,
    global_bound: f64,
    cover_time: EstimatorReport,
    mean_total_steps: f64,
    mean_active_steps: Vec<f64>,
    decomposition_ok: bool,
    bound_table: Vec<BoundTableRow>,
}

fn explore_cmd(args: &ExploreArgs, cli: &Cli) -> std::result::Result<Outcome, CliError> {
    let graph = config(formats::load_graph(&args.graph))?;
    let n = graph.vertex_count();
    if args.start as usize >= n {
        return Err(CliError::Config(anyhow!(
            "start vertex {} out of range",
            args.start
        )));
    }
    let k = config(choose_power_exponent(args.eps, n).map_err(|e| anyhow!(e)))?;
    let cover = match &args.cover {
        Some(path) => config(formats::read_cover(path))?,
        None => {
            let power = runtime(graph.power(k as i64).map_err(Into::into))?;
            runtime(
                match args.levels {
                    Some(levels) => build_random_cover(&power, levels, args.seed, 100),
                    None => build_sqrtlog_cover(&power, args.seed, 100),
                }
                .map_err(|e| anyhow!(e)),
            )?
        }
    };
    let plan = config(build_plan(&graph, args.eps, args.start, &cover).map_err(|e| anyhow!(e)))?;
    let bound = plan.global_bound(n);
    let cap = (bound * args.cap_multiplier).max(65536.0) as u64;
    let report = runtime(
        run_global(&plan, &graph, args.trials, args.seed, cap).map_err(|e| anyhow!(e)),
    )?;

    let mut table = Vec::new();
    for i in 0..plan.set_count() {
        let (lhs, rhs) = explore::weight_sum_bound(&plan, &graph, i);
        table.push(BoundTableRow {
            name: "region-weight-sum".into(),
            region: Some(i),
            observed: lhs,
            requirement: rhs,
            pass: lhs <= rhs + 1e-9,
        });
    }
    let reff_bound = explore::resistance_bound(&plan);
    let mut rng = tbrw_core::rng::stream(args.seed, 101);
    for i in 0..plan.set_count() {
        let rs = runtime(
            explore::sample_region_resistances(&plan, &graph, i, args.pairs, &mut rng)
                .map_err(|e| anyhow!(e)),
        )?;
        let worst = rs.into_iter().fold(0.0f64, f64::max);
        table.push(BoundTableRow {
            name: "region-resistance".into(),
            region: Some(i),
            observed: worst,
            requirement: reff_bound,
            pass: worst <= reff_bound * (1.0 + 1e-8),
        });
    }
    table.push(BoundTableRow {
        name: "mean-cover-vs-global-bound".into(),
        region: None,
        observed: report.cover_time.mean,
        requirement: bound,
        pass: report.cover_time.mean <= bound,
    });

    if let Some(csv) = &args.csv {
        let rows: Vec<Option<f64>> = report
            .per_run
            .iter()
            .map(|r| r.map(|(c, _)| c as f64))
            .collect();
        runtime(write_trial_csv(csv, &rows))?;
    }
    let artifact = ExploreArtifact {
        meta: Meta::new(cli, args.seed),
        power_exponent: plan.power_exponent,
        regions: plan.set_count(),
        cover_radius: plan.cover_radius,
        overlap: plan.overlap,
        global_bound: bound,
        cover_time: report.cover_time.clone(),
        mean_total_steps: report.mean_total_steps,
        mean_active_steps: report.mean_active_steps.clone(),
        decomposition_ok: report.decomposition_ok,
        bound_table: table,
    };
    runtime(emit_json(&artifact, args.out.as_deref()))?;
    Ok(Outcome::Success)
}

fn bench_cmd(args: &BenchArgs, cli: &Cli) -> std::result::Result<Outcome, CliError> {
    if args.suite != "paper-bounds" {
        return Err(CliError::Config(anyhow!(
            "unknown suite {:?}; only `paper-bounds` exists",
            args.suite
        )));
    }
    let meta = Meta::new(cli, args.seed);
    let report = runtime(bench_suite(args.seed, meta))?;
    for row in &report.rows {
        println!(
            "{} {:<26} observed {:>12.6e}  requirement {:>12.6e}",
            if row.pass { "PASS" } else { "FAIL" },
            row.id,
            row.observed,
            row.requirement
        );
    }
    runtime(emit_json(&report, args.out.as_deref()))?;
    let failing = report.rows.iter().filter(|r| !r.pass).count();
    if failing > 0 {
        Ok(Outcome::BoundViolations(failing))
    } else {
        Ok(Outcome::Success)
    }
}

impl From<tbrw_core::GraphError> for CliError {
    fn from(e: tbrw_core::GraphError) -> Self {
        CliError::Config(anyhow!(e))
    }
}
