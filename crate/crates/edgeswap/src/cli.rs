//! The `solve`, `bench`, and `render` subcommands behind the `edgeswap`
//! binary.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bench::{
    csv_summary, parse_manifest, resolve_manifest_paths, BenchOutcome, ManifestError,
};
use crate::ga::{run, ConfigError, GaConfig, RunReport, StrategyKind};
use crate::instance::{parse_tsplib, Instance, TsplibError};
use crate::render::{rings_svg, tour_svg};
use crate::tour::{parse_tour_file, write_tour_file, Tour, TourFileError, TourViolation};

#[derive(Debug, Parser)]
#[command(name = "edgeswap", version, about = "Two-stage genetic TSP solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one TSPLIB instance and report the best tour found.
    Solve(SolveArgs),
    /// Run a seeded benchmark batch from a manifest file.
    Bench(BenchArgs),
    /// Draw a tour, or the merged rings of two tours, as SVG.
    Render(RenderArgs),
}

/// First-stage crossover strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LocalStrategyArg {
    Single,
    Random,
}

/// Second-stage crossover strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GlobalStrategyArg {
    #[value(name = "kmultiple", alias = "k-multiple")]
    KMultiple,
    Block,
}

/// Algorithm knobs shared by `solve` and `bench`.
#[derive(Debug, Args)]
pub struct GaOpts {
    /// Base RNG seed.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Population size.
    #[arg(long, default_value_t = 200)]
    pub npop: usize,
    /// Children per parent pair and generation.
    #[arg(long, default_value_t = 20)]
    pub nch: usize,
    /// Stagnant generations that end a stage.
    #[arg(long, default_value_t = 30)]
    pub g: usize,
    /// Ring count for the k-multiple and block strategies.
    #[arg(long, default_value_t = 6)]
    pub k: usize,
    /// Crossover strategy of the first stage.
    #[arg(long, value_enum, default_value_t = LocalStrategyArg::Random)]
    pub strategy_local: LocalStrategyArg,
    /// Crossover strategy of the second stage.
    #[arg(long, value_enum, default_value_t = GlobalStrategyArg::Block)]
    pub strategy_global: GlobalStrategyArg,
    /// Neighbor-list length for 2-opt and loop reconnection.
    #[arg(long, default_value_t = 10)]
    pub neighbor_k: usize,
    /// Wall-clock cap per run, in seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
}

impl GaOpts {
    pub fn to_config(&self) -> GaConfig {
        GaConfig {
            n_pop: self.npop,
            n_ch: self.nch,
            g_stagnation: self.g,
            k_multiple: self.k,
            local_strategy: match self.strategy_local {
                LocalStrategyArg::Single => StrategyKind::Single,
                LocalStrategyArg::Random => StrategyKind::Random,
            },
            global_strategy: match self.strategy_global {
                GlobalStrategyArg::KMultiple => StrategyKind::KMultiple,
                GlobalStrategyArg::Block => StrategyKind::Block,
            },
            neighbor_k: self.neighbor_k,
            seed: self.seed,
            time_limit: self.time_limit,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// TSPLIB instance file.
    pub instance: PathBuf,
    #[command(flatten)]
    pub ga: GaOpts,
    /// Known optimum; when given, the error percentage is reported.
    #[arg(long)]
    pub optimum: Option<i64>,
    /// Directory for the `.tour` and `.json` outputs.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Manifest with one `path optimum` line per instance.
    pub manifest: PathBuf,
    #[command(flatten)]
    pub ga: GaOpts,
    /// Runs per instance; run `r` uses seed `seed + r`.
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    /// Worker threads for the batch.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Directory for the summary CSV and per-run JSON reports.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// TSPLIB instance file.
    pub instance: PathBuf,
    /// Tour file to draw.
    pub tour: PathBuf,
    /// Second tour; with `--show-rings`, the merged rings of both tours are
    /// drawn instead of the first tour alone.
    pub second_tour: Option<PathBuf>,
    /// Partition the two tours' merged graph into rings and color them.
    #[arg(long)]
    pub show_rings: bool,
    /// Seed for the randomized ring partition.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output SVG path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Instance {
        path: PathBuf,
        #[source]
        source: TsplibError,
    },
    #[error("{}: {source}", path.display())]
    TourFile {
        path: PathBuf,
        #[source]
        source: TourFileError,
    },
    #[error("{}: {source}", path.display())]
    Manifest {
        path: PathBuf,
        #[source]
        source: ManifestError,
    },
    #[error("{}: not a tour of this instance: {source}", path.display())]
    BadTour {
        path: PathBuf,
        #[source]
        source: TourViolation,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{failed} of {total} instances failed")]
    BenchFailures { failed: usize, total: usize },
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::Render(args) => cmd_render(&args),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    parse_tsplib(&read_file(path)?)
        .map_err(|source| CliError::Instance { path: path.to_path_buf(), source })
}

fn load_tour(path: &Path, inst: &Instance) -> Result<Tour, CliError> {
    let tour = parse_tour_file(&read_file(path)?)
        .map_err(|source| CliError::TourFile { path: path.to_path_buf(), source })?;
    tour.validate(inst.n())
        .map_err(|source| CliError::BadTour { path: path.to_path_buf(), source })?;
    Ok(tour)
}

fn ensure_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path)
        .map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn cmd_solve(args: &SolveArgs) -> Result<(), CliError> {
    let inst = load_instance(&args.instance)?;
    let cfg = args.ga.to_config();
    let report = run(&inst, &cfg)?;

    println!("instance: {} (n={})", inst.name(), inst.n());
    println!("best length: {}", report.best_length);
    if let Some(optimum) = args.optimum {
        let err = 100.0 * (report.best_length - optimum) as f64 / optimum as f64;
        println!("err: {err:.4}% (optimum {optimum})");
    }
    match report.stage_switch_generation {
        Some(g) => println!(
            "generations: {} (second stage from generation {g})",
            report.generations
        ),
        None => println!("generations: {} (first stage only)", report.generations),
    }
    println!("time: {:.2}s", report.wall_seconds);

    if let Some(dir) = &args.out {
        ensure_dir(dir)?;
        write_outputs(dir, &inst, &report)?;
    }
    Ok(())
}

fn write_outputs(dir: &Path, inst: &Instance, report: &RunReport) -> Result<(), CliError> {
    let tour_path = dir.join(format!("{}.tour", inst.name()));
    let json_path = dir.join(format!("{}.json", inst.name()));
    write_file(&tour_path, &write_tour_file(inst.name(), &report.best_tour()))?;
    write_file(&json_path, &report.to_json())?;
    println!("wrote {} and {}", tour_path.display(), json_path.display());
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let text = read_file(&args.manifest)?;
    let mut entries = parse_manifest(&text)
        .map_err(|source| CliError::Manifest { path: args.manifest.clone(), source })?;
    let base = args.manifest.parent().unwrap_or(Path::new("."));
    resolve_manifest_paths(&mut entries, base);

    let cfg = args.ga.to_config();
    cfg.validate()?;
    let outcomes = crate::bench::run_benchmark(&entries, &cfg, args.runs, args.jobs);

    let csv = csv_summary(&outcomes);
    print!("{csv}");
    let mut failed = 0;
    for outcome in &outcomes {
        if let BenchOutcome::Failed { path, error } = outcome {
            eprintln!("failed: {}: {error}", path.display());
            failed += 1;
        }
    }

    if let Some(dir) = &args.out {
        ensure_dir(dir)?;
        write_file(&dir.join("summary.csv"), &csv)?;
        for outcome in &outcomes {
            if let BenchOutcome::Done(res) = outcome {
                for report in &res.reports {
                    let name = format!("{}-seed{}.json", res.name, report.seed);
                    write_file(&dir.join(name), &report.to_json())?;
                }
            }
        }
        println!("wrote reports to {}", dir.display());
    }

    if failed > 0 {
        return Err(CliError::BenchFailures { failed, total: outcomes.len() });
    }
    Ok(())
}

fn cmd_render(args: &RenderArgs) -> Result<(), CliError> {
    let inst = load_instance(&args.instance)?;
    let tour = load_tour(&args.tour, &inst)?;

    let svg = match (&args.second_tour, args.show_rings) {
        (Some(second), true) => {
            let other = load_tour(second, &inst)?;
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            rings_svg(&inst, &tour, &other, &mut rng)
                .expect("both tours were validated against the instance")
        }
        (None, false) => tour_svg(&inst, &tour),
        (Some(_), false) => {
            return Err(CliError::Usage(
                "a second tour only makes sense with --show-rings".into(),
            ))
        }
        (None, true) => {
            return Err(CliError::Usage(
                "--show-rings needs a second tour to merge with".into(),
            ))
        }
    };

    match &args.out {
        Some(path) => write_file(path, &svg)?,
        None => print!("{svg}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_file(dir: &Path) -> PathBuf {
        let path = dir.join("square.tsp");
        std::fs::write(
            &path,
            "NAME : square\nTYPE : TSP\nDIMENSION : 4\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 10 0\n3 10 10\n4 0 10\nEOF\n",
        )
        .unwrap();
        path
    }

    fn fast_flags() -> Vec<&'static str> {
        vec!["--npop", "8", "--nch", "4", "--g", "3"]
    }

    #[test]
    fn solve_writes_tour_and_report() {
        let dir = tempfile::tempdir().unwrap();
        let inst = square_file(dir.path());
        let out = dir.path().join("out");
        let mut argv = vec![
            "edgeswap".to_string(),
            "solve".to_string(),
            inst.display().to_string(),
            "--optimum".to_string(),
            "40".to_string(),
            "--out".to_string(),
            out.display().to_string(),
        ];
        argv.extend(fast_flags().into_iter().map(String::from));
        let cli = Cli::try_parse_from(argv).unwrap();
        execute(cli).unwrap();

        let tour = parse_tour_file(&std::fs::read_to_string(out.join("square.tour")).unwrap())
            .unwrap();
        assert!(tour.validate(4).is_ok());
        let report =
            RunReport::from_json(&std::fs::read_to_string(out.join("square.json")).unwrap())
                .unwrap();
        assert_eq!(report.best_length, 40);
        assert_eq!(report.instance, "square");

        // The emitted tour file reproduces the reported length.
        let square = parse_tsplib(&std::fs::read_to_string(&inst).unwrap()).unwrap();
        assert_eq!(tour.length(&square), report.best_length);
    }

    #[test]
    fn bench_csv_errs_recompute_from_the_reports() {
        let dir = tempfile::tempdir().unwrap();
        square_file(dir.path());
        let manifest = dir.path().join("batch.txt");
        std::fs::write(&manifest, "square.tsp 40\n").unwrap();
        let out = dir.path().join("out");
        let mut argv = vec![
            "edgeswap".to_string(),
            "bench".to_string(),
            manifest.display().to_string(),
            "--runs".to_string(),
            "3".to_string(),
            "--out".to_string(),
            out.display().to_string(),
        ];
        argv.extend(fast_flags().into_iter().map(String::from));
        execute(Cli::try_parse_from(argv).unwrap()).unwrap();

        let csv = std::fs::read_to_string(out.join("summary.csv")).unwrap();
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        let mean: f64 = (1..=3)
            .map(|seed| {
                let text = std::fs::read_to_string(out.join(format!("square-seed{seed}.json")))
                    .unwrap();
                let report = RunReport::from_json(&text).unwrap();
                100.0 * (report.best_length - 40) as f64 / 40.0
            })
            .sum::<f64>()
            / 3.0;
        assert_eq!(row[3], format!("{mean:.2}"));
    }

    #[test]
    fn bench_reports_failures_in_exit_status() {
        let dir = tempfile::tempdir().unwrap();
        square_file(dir.path());
        let manifest = dir.path().join("batch.txt");
        std::fs::write(&manifest, "square.tsp 40\nmissing.tsp 1\n").unwrap();
        let mut argv = vec![
            "edgeswap".to_string(),
            "bench".to_string(),
            manifest.display().to_string(),
            "--runs".to_string(),
            "2".to_string(),
        ];
        argv.extend(fast_flags().into_iter().map(String::from));
        let cli = Cli::try_parse_from(argv).unwrap();
        match execute(cli) {
            Err(CliError::BenchFailures { failed: 1, total: 2 }) => {}
            other => panic!("expected one failure, got {other:?}"),
        }
    }

    #[test]
    fn render_validates_argument_combinations() {
        let dir = tempfile::tempdir().unwrap();
        let inst = square_file(dir.path());
        let tour_path = dir.path().join("a.tour");
        std::fs::write(&tour_path, write_tour_file("a", &Tour::new(vec![0, 1, 2, 3]))).unwrap();

        let svg_path = dir.path().join("tour.svg");
        let cli = Cli::try_parse_from([
            "edgeswap",
            "render",
            inst.to_str().unwrap(),
            tour_path.to_str().unwrap(),
            "--out",
            svg_path.to_str().unwrap(),
        ])
        .unwrap();
        execute(cli).unwrap();
        assert!(std::fs::read_to_string(&svg_path).unwrap().starts_with("<svg "));

        let cli = Cli::try_parse_from([
            "edgeswap",
            "render",
            inst.to_str().unwrap(),
            tour_path.to_str().unwrap(),
            "--show-rings",
        ])
        .unwrap();
        assert!(matches!(execute(cli), Err(CliError::Usage(_))));
    }

    #[test]
    fn render_rejects_foreign_tours() {
        let dir = tempfile::tempdir().unwrap();
        let inst = square_file(dir.path());
        let bad = dir.path().join("bad.tour");
        std::fs::write(&bad, "TOUR_SECTION\n1 2 3\n-1\n").unwrap();
        let cli = Cli::try_parse_from([
            "edgeswap",
            "render",
            inst.to_str().unwrap(),
            bad.to_str().unwrap(),
        ])
        .unwrap();
        assert!(matches!(execute(cli), Err(CliError::BadTour { .. })));
    }

    #[test]
    fn ga_flags_map_onto_the_config() {
        let cli = Cli::try_parse_from([
            "edgeswap",
            "solve",
            "x.tsp",
            "--seed",
            "9",
            "--npop",
            "50",
            "--nch",
            "7",
            "--g",
            "12",
            "--k",
            "4",
            "--strategy-local",
            "single",
            "--strategy-global",
            "kmultiple",
            "--neighbor-k",
            "8",
            "--time-limit",
            "2.5",
        ])
        .unwrap();
        let Command::Solve(args) = cli.command else {
            panic!("expected solve");
        };
        let cfg = args.ga.to_config();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.n_pop, 50);
        assert_eq!(cfg.n_ch, 7);
        assert_eq!(cfg.g_stagnation, 12);
        assert_eq!(cfg.k_multiple, 4);
        assert_eq!(cfg.local_strategy, StrategyKind::Single);
        assert_eq!(cfg.global_strategy, StrategyKind::KMultiple);
        assert_eq!(cfg.neighbor_k, 8);
        assert_eq!(cfg.time_limit, Some(2.5));

        let cli = Cli::try_parse_from(["edgeswap", "solve", "x.tsp", "--strategy-global", "k-multiple"]).unwrap();
        let Command::Solve(args) = cli.command else {
            panic!("expected solve");
        };
        assert_eq!(args.ga.to_config().global_strategy, StrategyKind::KMultiple);
    }
}
