//! Command-line surface for the physeval library: scene evaluation, pose
//! refinement, generator training, corpus generation, reporting, and plots.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use physeval::corpus::CorpusConfig;
use physeval::evaluator::{self, EvaluatorConfig, PhysicsReport};
use physeval::grpo::{self, GrpoConfig, SceneTemplate};
use physeval::navigation;
use physeval::priors::PriorRegistry;
use physeval::scene::{load_scene, save_scene, to_canonical_json, Scene};
use physeval::tto::{self, TtoConfig};

const ENV_PREFIX: &str = "PHYSEVAL_";

/// Exit code for input/validation problems (bad scene files, bad config).
const EXIT_INPUT: u8 = 2;
/// Exit code for internal failures (I/O while writing outputs, etc.).
const EXIT_INTERNAL: u8 = 1;

#[derive(Parser)]
#[command(name = "physeval", version, about = "Physical plausibility tooling for indoor scene layouts")]
struct Cli {
    /// TOML config file; keys mirror the library config structs.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Extra category priors JSON merged over the built-in registry.
    #[arg(long, global = true)]
    priors: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score scenes and write per-scene reports plus an aggregate CSV.
    Evaluate(EvaluateArgs),
    /// Refine scenes with test-time pose optimization.
    Optimize(OptimizeArgs),
    /// Train the toy layout generator with group-relative rewards.
    GrpoTrain(GrpoTrainArgs),
    /// Generate a labeled synthetic corpus.
    GenCorpus(GenCorpusArgs),
    /// Render a top-down SVG plot of a scene.
    Plot(PlotArgs),
    /// Re-aggregate existing per-scene report JSONs into a CSV.
    Report(ReportArgs),
}

#[derive(Args)]
struct EvaluateArgs {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Scene files or directories of scene files.
    paths: Vec<PathBuf>,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long)]
    out: PathBuf,
    /// Gradient steps (overrides config).
    #[arg(long)]
    steps: Option<usize>,
    paths: Vec<PathBuf>,
}

#[derive(Args)]
struct GrpoTrainArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    group_size: Option<usize>,
    /// Groups used for the proxy-validation summary.
    #[arg(long, default_value_t = 100)]
    proxy_groups: usize,
}

#[derive(Args)]
struct GenCorpusArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    num_scenes: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    scene: PathBuf,
    /// Optional physics report JSON used to color footprints.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Overlay the occupancy grid and failed reachability pairs.
    #[arg(long)]
    occupancy: bool,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    out: PathBuf,
    /// Report files or directories of `*.report.json` files.
    paths: Vec<PathBuf>,
}

/// Fully resolved configuration, serialized next to every output.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
struct RunConfig {
    evaluator: EvaluatorConfig,
    tto: TtoConfig,
    grpo: GrpoConfig,
    corpus: CorpusConfig,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match resolve_config(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e:#}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let priors = match load_priors(cli.priors.as_deref()) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("priors error: {e:#}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let result = match &cli.command {
        Command::Evaluate(args) => cmd_evaluate(args, &config, &priors),
        Command::Optimize(args) => cmd_optimize(args, &config, &priors),
        Command::GrpoTrain(args) => cmd_grpo_train(args, &config, &priors),
        Command::GenCorpus(args) => cmd_gen_corpus(args, &config, &priors),
        Command::Plot(args) => cmd_plot(args, &config, &priors),
        Command::Report(args) => cmd_report(args, &config),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

// ---------------------------------------------------------------------------
// Configuration plumbing: defaults <- TOML file <- env vars <- flags.

fn resolve_config(path: Option<&Path>) -> Result<RunConfig> {
    let defaults = toml::Table::try_from(RunConfig::default())?;
    let mut merged = defaults;
    if let Some(path) = path {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let file: toml::Table = text
            .parse()
            .with_context(|| format!("parsing config {}", path.display()))?;
        merge_tables(&mut merged, file);
    }
    for (key, value) in std::env::vars() {
        if let Some(rest) = key.strip_prefix(ENV_PREFIX) {
            // Double underscore separates nesting levels, e.g.
            // PHYSEVAL_EVALUATOR__TAU_ORIENT=0.2
            let segments: Vec<String> = rest.split("__").map(|s| s.to_lowercase()).collect();
            if segments.iter().any(|s| s.is_empty()) {
                continue;
            }
            set_path(&mut merged, &segments, parse_scalar(&value));
        }
    }
    RunConfig::deserialize(toml::Value::Table(merged)).context("merged config is invalid")
}

fn merge_tables(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge_tables(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn set_path(table: &mut toml::Table, path: &[String], value: toml::Value) {
    if path.len() == 1 {
        table.insert(path[0].clone(), value);
        return;
    }
    let entry = table
        .entry(path[0].clone())
        .or_insert_with(|| toml::Value::Table(Default::default()));
    if let toml::Value::Table(t) = entry {
        set_path(t, &path[1..], value);
    }
}

fn parse_scalar(s: &str) -> toml::Value {
    if let Ok(v) = s.parse::<i64>() {
        return toml::Value::Integer(v);
    }
    if let Ok(v) = s.parse::<f64>() {
        return toml::Value::Float(v);
    }
    if let Ok(v) = s.parse::<bool>() {
        return toml::Value::Boolean(v);
    }
    toml::Value::String(s.to_string())
}

fn load_priors(path: Option<&Path>) -> Result<PriorRegistry> {
    let mut priors = PriorRegistry::default_indoor();
    if let Some(path) = path {
        priors
            .merge_file(path)
            .with_context(|| format!("loading priors {}", path.display()))?;
    }
    Ok(priors)
}

fn write_resolved_config(dir: &Path, config: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let text = toml::to_string_pretty(config)?;
    std::fs::write(dir.join("run_config.toml"), text)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Input collection.

/// Expand files and directories into a sorted, deduplicated scene list.
fn collect_scene_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(p)
                .with_context(|| format!("reading {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| {
                    let name = f.file_name().and_then(|n| n.to_str()).unwrap_or("");
                    name.ends_with(".json")
                        && !name.ends_with(".labels.json")
                        && !name.ends_with(".report.json")
                        && name != "manifest.json"
                })
                .collect();
            entries.sort();
            out.extend(entries);
        } else {
            out.push(p.clone());
        }
    }
    out.sort();
    out.dedup();
    if out.is_empty() {
        bail!("no input scenes given");
    }
    Ok(out)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("scene")
        .to_string()
}

// ---------------------------------------------------------------------------
// evaluate

fn cmd_evaluate(args: &EvaluateArgs, config: &RunConfig, priors: &PriorRegistry) -> Result<u8> {
    let files = collect_scene_files(&args.paths)?;
    write_resolved_config(&args.out, config)?;
    let mut rows: BTreeMap<String, PhysicsReport> = BTreeMap::new();
    let mut had_input_error = false;
    for file in &files {
        let scene = match load_scene(file) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("skipping {}: {e}", file.display());
                had_input_error = true;
                continue;
            }
        };
        let report = evaluator::evaluate(&scene, priors, &config.evaluator);
        let out = args.out.join(format!("{}.report.json", stem(file)));
        std::fs::write(&out, to_canonical_json(&report))?;
        rows.insert(stem(file), report);
    }
    write_aggregate(&args.out, &rows)?;
    Ok(if had_input_error { EXIT_INPUT } else { 0 })
}

/// Per-scene CSV plus the column-mean aggregate row.
fn write_aggregate(dir: &Path, rows: &BTreeMap<String, PhysicsReport>) -> Result<()> {
    let mut per_scene = format!("scene,{}\n", PhysicsReport::csv_header());
    for (name, report) in rows {
        per_scene.push_str(&format!("{name},{}\n", report.csv_row()));
    }
    std::fs::write(dir.join("per_scene.csv"), per_scene)?;
    let mut agg = format!("{}\n", PhysicsReport::csv_header());
    agg.push_str(&format!("{}\n", aggregate_csv_row(rows.values())));
    std::fs::write(dir.join("aggregate.csv"), agg)?;
    Ok(())
}

fn aggregate_csv_row<'a>(reports: impl Iterator<Item = &'a PhysicsReport>) -> String {
    let mut sums = vec![0.0f64; 11];
    let mut n = 0usize;
    for r in reports {
        for (i, v) in csv_values(r).into_iter().enumerate() {
            sums[i] += v;
        }
        n += 1;
    }
    let n = n.max(1) as f64;
    sums.iter()
        .map(|v| format!("{:.4}", v / n))
        .collect::<Vec<_>>()
        .join(",")
}

fn csv_values(r: &PhysicsReport) -> Vec<f64> {
    r.csv_row()
        .split(',')
        .map(|v| v.parse::<f64>().unwrap_or(f64::NAN))
        .collect()
}

// ---------------------------------------------------------------------------
// optimize

fn cmd_optimize(args: &OptimizeArgs, config: &RunConfig, priors: &PriorRegistry) -> Result<u8> {
    let files = collect_scene_files(&args.paths)?;
    let mut run = config.clone();
    if let Some(steps) = args.steps {
        run.tto.steps = steps;
    }
    write_resolved_config(&args.out, &run)?;
    let mut before: BTreeMap<String, PhysicsReport> = BTreeMap::new();
    let mut after: BTreeMap<String, PhysicsReport> = BTreeMap::new();
    let mut deltas_csv = String::from("scene,object,dt_x,dt_y,dt_z,dyaw,dlog_s_x,dlog_s_y,dlog_s_z\n");
    let mut had_input_error = false;
    for file in &files {
        let scene = match load_scene(file) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("skipping {}: {e}", file.display());
                had_input_error = true;
                continue;
            }
        };
        let name = stem(file);
        let pre = evaluator::evaluate(&scene, priors, &run.evaluator);
        let result = tto::optimize(&scene, priors, &run.tto);
        let refined = tto::apply_deltas(&scene, &result.deltas);
        let post = evaluator::evaluate(&refined, priors, &run.evaluator);
        save_scene(&refined, args.out.join(format!("{name}.refined.json")))?;
        std::fs::write(
            args.out.join(format!("{name}.before.report.json")),
            to_canonical_json(&pre),
        )?;
        std::fs::write(
            args.out.join(format!("{name}.after.report.json")),
            to_canonical_json(&post),
        )?;
        let mut energy = String::from("step,energy\n");
        for (i, e) in result.energy_history.iter().enumerate() {
            energy.push_str(&format!("{i},{e:.9e}\n"));
        }
        std::fs::write(args.out.join(format!("{name}.energy.csv")), energy)?;
        for (obj, d) in scene.objects.iter().zip(&result.deltas) {
            deltas_csv.push_str(&format!(
                "{name},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
                obj.id, d.t.x, d.t.y, d.t.z, d.yaw, d.log_s.x, d.log_s.y, d.log_s.z
            ));
        }
        before.insert(name.clone(), pre);
        after.insert(name, post);
    }
    std::fs::write(args.out.join("deltas.csv"), deltas_csv)?;
    let mut delta_table = format!("phase,{}\n", PhysicsReport::csv_header());
    delta_table.push_str(&format!("before,{}\n", aggregate_csv_row(before.values())));
    delta_table.push_str(&format!("after,{}\n", aggregate_csv_row(after.values())));
    std::fs::write(args.out.join("before_after.csv"), delta_table)?;
    Ok(if had_input_error { EXIT_INPUT } else { 0 })
}

// ---------------------------------------------------------------------------
// grpo-train

fn cmd_grpo_train(args: &GrpoTrainArgs, config: &RunConfig, priors: &PriorRegistry) -> Result<u8> {
    let mut run = config.clone();
    if let Some(steps) = args.steps {
        run.grpo.steps = steps;
    }
    if let Some(seed) = args.seed {
        run.grpo.seed = seed;
    }
    if let Some(k) = args.group_size {
        run.grpo.group_size = k;
    }
    write_resolved_config(&args.out, &run)?;
    let template = SceneTemplate::three_object();
    let (net, history) = grpo::train(&template, priors, &run.grpo);
    let mut csv = String::from("step,mean_reward,loss\n");
    for (i, (r, l)) in history.rewards.iter().zip(&history.losses).enumerate() {
        csv.push_str(&format!("{i},{r:.9e},{l:.9e}\n"));
    }
    std::fs::write(args.out.join("history.csv"), csv)?;
    std::fs::write(args.out.join("generator.json"), to_canonical_json(&net))?;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(run.grpo.seed ^ 0x5151_5151);
    let proxy = grpo::proxy_validation(
        &net,
        &net,
        template.dim(),
        &run.grpo,
        args.proxy_groups,
        16,
        1024,
        &mut rng,
    );
    std::fs::write(args.out.join("proxy_validation.json"), to_canonical_json(&proxy))?;
    println!(
        "trained {} steps; final reward {:.4}; proxy spearman {:.3} kendall {:.3}",
        history.rewards.len(),
        history.rewards.last().copied().unwrap_or(f64::NAN),
        proxy.mean_spearman,
        proxy.mean_kendall
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// gen-corpus

fn cmd_gen_corpus(args: &GenCorpusArgs, config: &RunConfig, priors: &PriorRegistry) -> Result<u8> {
    let mut run = config.clone();
    if let Some(n) = args.num_scenes {
        run.corpus.num_scenes = n;
    }
    if let Some(seed) = args.seed {
        run.corpus.seed = seed;
    }
    write_resolved_config(&args.out, &run)?;
    match physeval::corpus::write_corpus(&run.corpus, priors, &args.out) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("corpus generation failed: {e}");
            return Ok(EXIT_INPUT);
        }
    }
    let manifest = serde_json::json!({
        "seed": run.corpus.seed,
        "num_scenes": run.corpus.num_scenes,
        "cells_min": run.corpus.cells_min,
        "cells_max": run.corpus.cells_max,
    });
    std::fs::write(args.out.join("manifest.json"), to_canonical_json(&manifest))?;
    println!("wrote {} scenes (seed {})", run.corpus.num_scenes, run.corpus.seed);
    Ok(0)
}

// ---------------------------------------------------------------------------
// plot

const COLOR_OK: &str = "#7cb342";

fn violation_color(report: Option<&PhysicsReport>, id: &str) -> &'static str {
    use physeval::evaluator::Constraint::*;
    let Some(report) = report else {
        return COLOR_OK;
    };
    let Some(obj) = report.objects.iter().find(|o| o.id == id) else {
        return COLOR_OK;
    };
    // Worst violation wins; contact problems outrank prior problems.
    let priority = [
        (Collision, "#e53935"),
        (Ground, "#1e88e5"),
        (Support, "#3949ab"),
        (Static, "#d81b60"),
        (Dynamic, "#6d4c41"),
        (Anchor, "#8e24aa"),
        (Orient, "#fb8c00"),
        (Scale, "#f9a825"),
    ];
    for (c, color) in priority {
        if obj.violations.iter().any(|v| v.constraint == c) {
            return color;
        }
    }
    COLOR_OK
}

fn cmd_plot(args: &PlotArgs, config: &RunConfig, priors: &PriorRegistry) -> Result<u8> {
    let _ = priors;
    let scene = match load_scene(&args.scene) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("cannot load {}: {e}", args.scene.display());
            return Ok(EXIT_INPUT);
        }
    };
    let report: Option<PhysicsReport> = match &args.report {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            match serde_json::from_str(&text) {
                Ok(r) => Some(r),
                Err(e) => {
                    eprintln!("cannot parse report {}: {e}", path.display());
                    return Ok(EXIT_INPUT);
                }
            }
        }
        None => None,
    };
    let svg = render_svg(&scene, report.as_ref(), args.occupancy, config);
    if let Some(dir) = args.out.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(&args.out, svg)?;
    Ok(0)
}

fn render_svg(scene: &Scene, report: Option<&PhysicsReport>, occupancy: bool, config: &RunConfig) -> String {
    let (min_x, max_x) = scene
        .room
        .bounds
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p.x), hi.max(p.x)));
    let (min_z, max_z) = scene
        .room
        .bounds
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p.y), hi.max(p.y)));
    let margin = 0.3;
    let scale = 80.0;
    let w = ((max_x - min_x) + 2.0 * margin) * scale;
    let h = ((max_z - min_z) + 2.0 * margin) * scale;
    let tx = |x: f64| (x - min_x + margin) * scale;
    let tz = |z: f64| (z - min_z + margin) * scale;
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.2} {h:.2}\">\n"
    ));
    s.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"#fafafa\"/>\n"
    ));
    // Room outline.
    let pts: Vec<String> = scene
        .room
        .bounds
        .iter()
        .map(|p| format!("{:.2},{:.2}", tx(p.x), tz(p.y)))
        .collect();
    s.push_str(&format!(
        "<polygon points=\"{}\" fill=\"#ffffff\" stroke=\"#37474f\" stroke-width=\"3\"/>\n",
        pts.join(" ")
    ));
    // Occupancy underlay and failed pairs.
    if occupancy {
        let cfg = &config.evaluator.reach;
        let map = navigation::rasterize(scene, cfg.cell_size, cfg.inflation_radius, cfg.agent_height);
        for ix in 0..map.dims[0] {
            for iz in 0..map.dims[1] {
                if map.blocked(ix as i64, iz as i64) {
                    let c = map.cell_center(ix, iz);
                    s.push_str(&format!(
                        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#b0bec5\" fill-opacity=\"0.5\"/>\n",
                        tx(c.x - map.cell_size / 2.0),
                        tz(c.y - map.cell_size / 2.0),
                        map.cell_size * scale / scale * scale,
                        map.cell_size * scale
                    ));
                }
            }
        }
        let reach = navigation::reachability_on_map(&map, cfg);
        for pair in reach.pairs.iter().filter(|p| !p.reachable) {
            let a = map.cell_center(pair.start[0], pair.start[1]);
            let b = map.cell_center(pair.goal[0], pair.goal[1]);
            s.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#d32f2f\" stroke-width=\"2\" stroke-dasharray=\"6,4\"/>\n",
                tx(a.x), tz(a.y), tx(b.x), tz(b.y)
            ));
        }
    }
    // Object footprints.
    for obj in &scene.objects {
        let fp = physeval::geometry::footprint(obj);
        let pts: Vec<String> = fp
            .iter()
            .map(|p| format!("{:.2},{:.2}", tx(p.x), tz(p.y)))
            .collect();
        let color = violation_color(report, &obj.id);
        s.push_str(&format!(
            "<polygon points=\"{}\" fill=\"{color}\" fill-opacity=\"0.65\" stroke=\"#263238\" stroke-width=\"1\"/>\n",
            pts.join(" ")
        ));
        let c = obj.pose.t;
        s.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" font-family=\"monospace\" text-anchor=\"middle\" fill=\"#212121\">{}</text>\n",
            tx(c.x),
            tz(c.z),
            obj.id
        ));
    }
    s.push_str("</svg>\n");
    s
}

// ---------------------------------------------------------------------------
// report

fn cmd_report(args: &ReportArgs, config: &RunConfig) -> Result<u8> {
    let mut files = Vec::new();
    for p in &args.paths {
        if p.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(p)
                .with_context(|| format!("reading {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| {
                    f.file_name()
                        .and_then(|n| n.to_str())
                        .map(|n| n.ends_with(".report.json"))
                        .unwrap_or(false)
                })
                .collect();
            entries.sort();
            files.extend(entries);
        } else {
            files.push(p.clone());
        }
    }
    files.sort();
    files.dedup();
    if files.is_empty() {
        eprintln!("no report files given");
        return Ok(EXIT_INPUT);
    }
    write_resolved_config(&args.out, config)?;
    let mut rows: BTreeMap<String, PhysicsReport> = BTreeMap::new();
    let mut had_input_error = false;
    for file in &files {
        let text = match std::fs::read_to_string(file) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("skipping {}: {e}", file.display());
                had_input_error = true;
                continue;
            }
        };
        match serde_json::from_str::<PhysicsReport>(&text) {
            Ok(r) => {
                let name = stem(file).trim_end_matches(".report").to_string();
                rows.insert(name, r);
            }
            Err(e) => {
                eprintln!("skipping {}: {e}", file.display());
                had_input_error = true;
            }
        }
    }
    write_aggregate(&args.out, &rows)?;
    Ok(if had_input_error { EXIT_INPUT } else { 0 })
}
