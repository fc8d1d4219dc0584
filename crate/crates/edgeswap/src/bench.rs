//! Seeded benchmark batches over manifests of TSPLIB instances.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ga::{run, GaConfig, RunReport};
use crate::instance::parse_tsplib;

/// One manifest line: an instance file and its known optimal length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub optimum: i64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ManifestError {
    #[error("line {line}: expected `path optimum`, got `{content}`")]
    BadLine { line: usize, content: String },
    #[error("manifest lists no instances")]
    Empty,
}

/// Parses a manifest: one `path optimum` pair per line, `#` comments and
/// blank lines ignored.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>, ManifestError> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(path), Some(opt), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(ManifestError::BadLine { line: idx + 1, content: line.to_string() });
        };
        let Ok(optimum) = opt.parse::<i64>() else {
            return Err(ManifestError::BadLine { line: idx + 1, content: line.to_string() });
        };
        entries.push(ManifestEntry { path: PathBuf::from(path), optimum });
    }
    if entries.is_empty() {
        return Err(ManifestError::Empty);
    }
    Ok(entries)
}

/// Makes relative manifest paths absolute against the manifest's directory.
pub fn resolve_manifest_paths(entries: &mut [ManifestEntry], base: &Path) {
    for entry in entries {
        if entry.path.is_relative() {
            entry.path = base.join(&entry.path);
        }
    }
}

/// Aggregated outcome of all runs on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub name: String,
    pub n: usize,
    pub optimum: i64,
    /// Runs whose best length hit the optimum exactly.
    pub successes: usize,
    /// Mean of `100 * (best - optimum) / optimum` over runs.
    pub mean_err: f64,
    pub mean_seconds: f64,
    pub reports: Vec<RunReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BenchOutcome {
    Done(InstanceResult),
    /// The instance could not be read or solved; the batch continues.
    Failed { path: PathBuf, error: String },
}

/// Runs the algorithm `runs` times per manifest entry, seeding run `r` with
/// `cfg.seed + r`. With `jobs > 1` the runs spread over that many threads;
/// results do not depend on the thread count.
pub fn run_benchmark(
    entries: &[ManifestEntry],
    cfg: &GaConfig,
    runs: usize,
    jobs: usize,
) -> Vec<BenchOutcome> {
    let parsed: Vec<Result<crate::instance::Instance, String>> = entries
        .iter()
        .map(|entry| {
            let text = std::fs::read_to_string(&entry.path).map_err(|e| e.to_string())?;
            parse_tsplib(&text).map_err(|e| e.to_string())
        })
        .collect();

    // One task per (instance, run) pair, independently seeded.
    let mut tasks = Vec::new();
    for (ei, parsed_inst) in parsed.iter().enumerate() {
        if parsed_inst.is_ok() {
            for r in 0..runs {
                tasks.push((ei, r));
            }
        }
    }
    let run_one = |&(ei, r): &(usize, usize)| -> (usize, RunReport) {
        let inst = parsed[ei].as_ref().expect("tasks only cover parsed instances");
        let mut run_cfg = cfg.clone();
        run_cfg.seed = cfg.seed + r as u64;
        let report = run(inst, &run_cfg).expect("config was validated before the batch");
        (ei, report)
    };
    let results: Vec<(usize, RunReport)> = if jobs > 1 {
        use rayon::prelude::*;

        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool construction");
        pool.install(|| tasks.par_iter().map(run_one).collect())
    } else {
        tasks.iter().map(run_one).collect()
    };

    let mut outcomes = Vec::with_capacity(entries.len());
    for (ei, entry) in entries.iter().enumerate() {
        match &parsed[ei] {
            Err(error) => {
                outcomes.push(BenchOutcome::Failed {
                    path: entry.path.clone(),
                    error: error.clone(),
                });
            }
            Ok(inst) => {
                let reports: Vec<RunReport> = results
                    .iter()
                    .filter(|(i, _)| *i == ei)
                    .map(|(_, rep)| rep.clone())
                    .collect();
                let successes =
                    reports.iter().filter(|r| r.best_length == entry.optimum).count();
                let mean_err = reports
                    .iter()
                    .map(|r| 100.0 * (r.best_length - entry.optimum) as f64 / entry.optimum as f64)
                    .sum::<f64>()
                    / reports.len() as f64;
                let mean_seconds =
                    reports.iter().map(|r| r.wall_seconds).sum::<f64>() / reports.len() as f64;
                outcomes.push(BenchOutcome::Done(InstanceResult {
                    name: inst.name().to_string(),
                    n: inst.n(),
                    optimum: entry.optimum,
                    successes,
                    mean_err,
                    mean_seconds,
                    reports,
                }));
            }
        }
    }
    outcomes
}

/// Summary CSV, one row per instance; failed instances report an error
/// marker instead of numbers.
pub fn csv_summary(outcomes: &[BenchOutcome]) -> String {
    use std::fmt::Write;

    let mut out = String::from("Instance,Optimum,Success,Err,Time\n");
    for outcome in outcomes {
        match outcome {
            BenchOutcome::Done(res) => {
                writeln!(
                    out,
                    "{},{},{},{:.2},{:.2}",
                    res.name, res.optimum, res.successes, res.mean_err, res.mean_seconds
                )
                .unwrap();
            }
            BenchOutcome::Failed { path, .. } => {
                writeln!(out, "{},error,,,", path.display()).unwrap();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga::StrategyKind;

    fn tiny_cfg() -> GaConfig {
        GaConfig {
            n_pop: 8,
            n_ch: 4,
            g_stagnation: 3,
            k_multiple: 3,
            local_strategy: StrategyKind::Random,
            global_strategy: StrategyKind::Block,
            neighbor_k: 6,
            seed: 1,
            time_limit: None,
        }
    }

    #[test]
    fn manifest_parses_paths_comments_and_blanks() {
        let text = "# instances\nberlin52.tsp 7542\n\ndata/st70.tsp 675\n";
        let entries = parse_manifest(text).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].path, PathBuf::from("berlin52.tsp"));
        assert_eq!(entries[0].optimum, 7542);
        assert_eq!(entries[1].path, PathBuf::from("data/st70.tsp"));
    }

    #[test]
    fn manifest_rejects_malformed_lines() {
        assert_eq!(
            parse_manifest("ok.tsp notanumber"),
            Err(ManifestError::BadLine { line: 1, content: "ok.tsp notanumber".into() })
        );
        assert_eq!(parse_manifest("# only comments\n"), Err(ManifestError::Empty));
    }

    #[test]
    fn relative_paths_resolve_against_the_manifest_directory() {
        let mut entries = vec![
            ManifestEntry { path: PathBuf::from("a.tsp"), optimum: 1 },
            ManifestEntry { path: PathBuf::from("/abs/b.tsp"), optimum: 2 },
        ];
        resolve_manifest_paths(&mut entries, Path::new("/data"));
        assert_eq!(entries[0].path, PathBuf::from("/data/a.tsp"));
        assert_eq!(entries[1].path, PathBuf::from("/abs/b.tsp"));
    }

    #[test]
    fn batch_solves_instances_and_survives_bad_files() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("square.tsp");
        std::fs::write(
            &good,
            "NAME : square\nTYPE : TSP\nDIMENSION : 4\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 10 0\n3 10 10\n4 0 10\nEOF\n",
        )
        .unwrap();
        let missing = dir.path().join("absent.tsp");

        let entries = vec![
            ManifestEntry { path: good, optimum: 40 },
            ManifestEntry { path: missing.clone(), optimum: 1 },
        ];
        let outcomes = run_benchmark(&entries, &tiny_cfg(), 3, 1);
        assert_eq!(outcomes.len(), 2);
        match &outcomes[0] {
            BenchOutcome::Done(res) => {
                assert_eq!(res.name, "square");
                assert_eq!(res.reports.len(), 3);
                assert_eq!(res.successes, 3, "2-opt alone solves the square");
                assert_eq!(res.mean_err, 0.0);
                // Seeds advance per run.
                assert_eq!(res.reports[0].seed, 1);
                assert_eq!(res.reports[2].seed, 3);
            }
            other => panic!("expected success, got {other:?}"),
        }
        assert!(matches!(&outcomes[1], BenchOutcome::Failed { path, .. } if *path == missing));

        let csv = csv_summary(&outcomes);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "Instance,Optimum,Success,Err,Time");
        assert!(lines.next().unwrap().starts_with("square,40,3,0.00,"));
        assert!(lines.next().unwrap().ends_with(",error,,,"));
    }

    #[test]
    fn parallel_and_serial_batches_agree() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ring.tsp");
        let mut text = String::from(
            "NAME : ring\nTYPE : TSP\nDIMENSION : 16\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n",
        );
        for i in 0..16 {
            let a = i as f64 * std::f64::consts::TAU / 16.0;
            text.push_str(&format!("{} {:.3} {:.3}\n", i + 1, 500.0 * a.cos(), 500.0 * a.sin()));
        }
        text.push_str("EOF\n");
        std::fs::write(&path, text).unwrap();

        let entries = vec![ManifestEntry { path, optimum: 0 }];
        let serial = run_benchmark(&entries, &tiny_cfg(), 4, 1);
        let parallel = run_benchmark(&entries, &tiny_cfg(), 4, 3);
        let strip = |o: &BenchOutcome| match o {
            BenchOutcome::Done(res) => {
                let mut res = res.clone();
                res.mean_seconds = 0.0;
                for rep in &mut res.reports {
                    rep.wall_seconds = 0.0;
                }
                res
            }
            BenchOutcome::Failed { .. } => panic!("unexpected failure"),
        };
        assert_eq!(strip(&serial[0]), strip(&parallel[0]));
    }
}
