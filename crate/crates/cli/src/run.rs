//! Batch runs and their on-disk records.
//!
//! Layout: `<out>/<config-hash>/{config.txt,instance.txt,summary.csv}` and
//! `<out>/<config-hash>/run-<seed>/{trace.txt,hops.csv,hist.csv,record.csv}`.

use std::fs;
use std::path::{Path, PathBuf};

use hoplab_core::hops::{hop_report, HopReport};
use hoplab_core::optimizers::{
    fihc_restart_run, ils_sll_run, ltgomea_run, IlsConfig, LinkageBackend, LtGomeaConfig, RunResult,
};
use hoplab_core::EvaluationBudget;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{ConfigInfo, ExperimentConfig, OptimizerKind, ResolvedProblem};
use crate::error::{io_err, CliError, CliResult};

pub const SUMMARY_COLUMNS: [&str; 11] = [
    "seed",
    "best_fitness",
    "ffe_used",
    "ffe_to_optimum",
    "modifications",
    "not_applicable",
    "avg_hops",
    "max_hops",
    "analysis_ffe",
    "trace",
    "hops",
];

/// Written in `ffe_to_optimum` when the known optimum was not reached or
/// the problem has none.
pub const NOT_FOUND: &str = "not_found";

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub seed: u64,
    /// Native-orientation fitness of the best solution.
    pub best_fitness: f64,
    pub ffe_used: u64,
    pub ffe_to_optimum: Option<u64>,
    /// Relative to the config directory.
    pub trace_path: PathBuf,
    pub hops_path: PathBuf,
    pub hops: HopReport,
}

impl RunRecord {
    fn csv_row(&self) -> String {
        let h = &self.hops;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            self.seed,
            self.best_fitness,
            self.ffe_used,
            self.ffe_to_optimum.map_or(NOT_FOUND.to_string(), |f| f.to_string()),
            h.modifications(),
            h.not_applicable_count(),
            h.average_hops(),
            h.max_hops(),
            h.total_analysis_ffe(),
            self.trace_path.display(),
            self.hops_path.display(),
        )
    }
}

fn header() -> String {
    SUMMARY_COLUMNS.join(",") + "\n"
}

/// Runs one optimizer per seed, in parallel, and writes every artifact.
/// Records come back sorted by seed; `summary.csv` covers every run found
/// in the config directory, including earlier invocations.
pub fn run_experiment(cfg: &ExperimentConfig) -> CliResult<Vec<RunRecord>> {
    let problem = cfg.resolve()?;
    let dir = cfg.config_dir(&problem);
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    write(&dir.join("config.txt"), &cfg.describe(&problem))?;
    if let Some(text) = &problem.instance_text {
        write(&dir.join("instance.txt"), text)?;
    }
    let mut seeds = cfg.seeds.clone();
    seeds.sort_unstable();
    let records = seeds
        .par_iter()
        .map(|&seed| run_seed(cfg, &problem, &dir, seed))
        .collect::<CliResult<Vec<_>>>()?;
    write_summary(&dir)?;
    Ok(records)
}

/// Runs the configured optimizer once; no files are touched.
pub fn run_once(cfg: &ExperimentConfig, problem: &ResolvedProblem, seed: u64) -> CliResult<RunResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = EvaluationBudget::new(cfg.ffe_limit, cfg.time_limit);
    let p = problem.as_dyn();
    Ok(match cfg.optimizer {
        OptimizerKind::LtGomeaSll => ltgomea_run(p, budget, &LtGomeaConfig::new(LinkageBackend::Sll), &mut rng)?,
        OptimizerKind::LtGomeaDled => ltgomea_run(p, budget, &LtGomeaConfig::new(LinkageBackend::Dled), &mut rng)?,
        OptimizerKind::IlsSll => ils_sll_run(p, budget, &IlsConfig::default(), &mut rng),
        OptimizerKind::FihcRestart => fihc_restart_run(p, budget, &mut rng),
    })
}

fn run_seed(cfg: &ExperimentConfig, problem: &ResolvedProblem, dir: &Path, seed: u64) -> CliResult<RunRecord> {
    let result = run_once(cfg, problem, seed)?;
    let hops = if result.trace.len() < 2 {
        HopReport::from_parts(Vec::new(), Vec::new(), Vec::new())?
    } else {
        hop_report(&result.trace, problem.as_dyn())?
    };
    let run = PathBuf::from(format!("run-{seed}"));
    fs::create_dir_all(dir.join(&run)).map_err(io_err(dir.join(&run)))?;
    let record = RunRecord {
        seed,
        best_fitness: result.best_fitness,
        ffe_used: result.ffe_used,
        ffe_to_optimum: result.ffe_to_optimum,
        trace_path: run.join("trace.txt"),
        hops_path: run.join("hops.csv"),
        hops,
    };
    write(&dir.join(&record.trace_path), &result.trace.to_text())?;
    write(&dir.join(&record.hops_path), &record.hops.to_csv())?;
    write(&dir.join(&run).join("hist.csv"), &record.hops.histogram_csv())?;
    write(&dir.join(&run).join("record.csv"), &(header() + &record.csv_row()))?;
    Ok(record)
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(io_err(path))
}

fn run_dirs(dir: &Path) -> CliResult<Vec<(u64, PathBuf)>> {
    let mut runs = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        let seed = path
            .file_name()
            .and_then(|n| n.to_str())
            .and_then(|n| n.strip_prefix("run-"))
            .and_then(|s| s.parse::<u64>().ok());
        if let (Some(seed), true) = (seed, path.join("record.csv").is_file()) {
            runs.push((seed, path));
        }
    }
    runs.sort();
    Ok(runs)
}

fn write_summary(dir: &Path) -> CliResult<()> {
    let mut out = header();
    for (_, run) in run_dirs(dir)? {
        let path = run.join("record.csv");
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        let row = text.lines().nth(1).ok_or_else(|| CliError::Malformed {
            path: path.clone(),
            msg: "missing record row".into(),
        })?;
        out.push_str(row);
        out.push('\n');
    }
    write(&dir.join("summary.csv"), &out)
}

/// Runs of one configuration, as read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigRecords {
    pub dir: PathBuf,
    pub info: ConfigInfo,
    pub records: Vec<RunRecord>,
}

/// Reads `summary.csv` and every referenced hop report of one config
/// directory.
pub fn load_config(dir: &Path) -> CliResult<ConfigRecords> {
    let info = ConfigInfo::read(dir)?;
    let path = dir.join("summary.csv");
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    let malformed = |line: usize, msg: &str| CliError::Malformed {
        path: path.clone(),
        msg: format!("line {line}: {msg}"),
    };
    let mut lines = text.lines();
    if lines.next() != Some(header().trim_end()) {
        return Err(malformed(1, "unexpected header"));
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let lno = i + 2;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != SUMMARY_COLUMNS.len() {
            return Err(malformed(lno, "wrong column count"));
        }
        let hops_path = PathBuf::from(f[10]);
        let hops_file = dir.join(&hops_path);
        let hops_text = fs::read_to_string(&hops_file).map_err(io_err(&hops_file))?;
        records.push(RunRecord {
            seed: f[0].parse().map_err(|_| malformed(lno, "bad seed"))?,
            best_fitness: f[1].parse().map_err(|_| malformed(lno, "bad best_fitness"))?,
            ffe_used: f[2].parse().map_err(|_| malformed(lno, "bad ffe_used"))?,
            ffe_to_optimum: match f[3] {
                NOT_FOUND => None,
                v => Some(v.parse().map_err(|_| malformed(lno, "bad ffe_to_optimum"))?),
            },
            trace_path: PathBuf::from(f[9]),
            hops: HopReport::parse_csv(&hops_text).map_err(|e| CliError::Malformed {
                path: hops_file.clone(),
                msg: e.to_string(),
            })?,
            hops_path,
        });
    }
    Ok(ConfigRecords {
        dir: dir.to_path_buf(),
        info,
        records,
    })
}

/// Loads `dir` itself when it is a config directory, otherwise every config
/// directory directly below it, in name order.
pub fn load_all(dir: &Path) -> CliResult<Vec<ConfigRecords>> {
    if dir.join("config.txt").is_file() {
        return Ok(vec![load_config(dir)?]);
    }
    let mut dirs = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        if path.join("config.txt").is_file() {
            dirs.push(path);
        }
    }
    dirs.sort();
    dirs.iter().map(|d| load_config(d)).collect()
}
