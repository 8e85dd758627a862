//! Experiment configuration, problem sources and the config hash.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use hoplab_core::benchmarks::Benchmark;
use hoplab_core::spec::KeyValues;
use hoplab_core::wpflf::{generate_instance, parse_instance, serialize_instance, GeneratorConfig, Group, WpLflProblem};
use hoplab_core::Problem;
use sha2::{Digest, Sha256};

use crate::error::{io_err, CliError, CliResult};

/// Version of the on-disk layout and CSV column sets.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSource {
    /// Benchmark `key=value` spec, e.g. `problem=concat fn=deceptive n=400 k=8`.
    Benchmark(String),
    /// WP_LFL instance file.
    InstanceFile(PathBuf),
    /// Generated WP_LFL instance.
    Generated(GeneratorConfig),
}

impl ProblemSource {
    /// `problem=wpflf ...` specs become generator configs, other specs
    /// containing `=` are benchmarks, anything else is an instance path.
    pub fn parse(text: &str) -> CliResult<Self> {
        if !text.contains('=') {
            return Ok(Self::InstanceFile(PathBuf::from(text)));
        }
        let kv = KeyValues::parse(text)?;
        if kv.get("problem") == Some("wpflf") {
            return Ok(Self::Generated(generator_from_spec(&kv)?));
        }
        Benchmark::from_spec(text)?;
        Ok(Self::Benchmark(text.to_string()))
    }
}

/// Keys: `preset=mini-c|default`, `group`, `nodes`, `arcs`, `grid=RxC`,
/// `demands`, `routes`, `headroom`, `seed`. Explicit keys override the preset.
fn generator_from_spec(kv: &KeyValues) -> CliResult<GeneratorConfig> {
    kv.only(&["problem", "preset", "group", "nodes", "arcs", "grid", "demands", "routes", "headroom", "seed"])?;
    let seed = kv.or("seed", 0u64)?;
    let group: Group = kv.or("group", Group::C)?;
    let mut cfg = match kv.get("preset") {
        None | Some("mini-c") => GeneratorConfig::mini_c(seed),
        Some("default") => GeneratorConfig::default_preset(group, 60, 4, seed),
        Some(other) => return Err(CliError::Config(format!("unknown generator preset {other:?}"))),
    };
    cfg.group = group;
    cfg.nodes = kv.or("nodes", cfg.nodes)?;
    cfg.arcs = kv.or("arcs", cfg.arcs)?;
    cfg.demands = kv.or("demands", cfg.demands)?;
    cfg.routes = kv.or("routes", cfg.routes)?;
    cfg.headroom = kv.or("headroom", cfg.headroom)?;
    if let Some(g) = kv.get("grid") {
        let (r, c) = g
            .split_once('x')
            .and_then(|(r, c)| Some((r.parse().ok()?, c.parse().ok()?)))
            .ok_or_else(|| CliError::Config(format!("grid must look like 6x6, got {g:?}")))?;
        cfg = GeneratorConfig { headroom: cfg.headroom, ..GeneratorConfig::grid(group, r, c, cfg.demands, cfg.routes, seed) };
    }
    Ok(cfg)
}

fn generator_string(cfg: &GeneratorConfig) -> String {
    let grid = cfg.grid.map_or("none".to_string(), |(r, c)| format!("{r}x{c}"));
    format!(
        "problem=wpflf group={:?} nodes={} arcs={} grid={grid} demands={} routes={} volume={} volumes={}..{} headroom={} spread={}..{} seed={}",
        cfg.group,
        cfg.nodes,
        cfg.arcs,
        cfg.demands,
        cfg.routes,
        cfg.volume,
        cfg.volume_range.0,
        cfg.volume_range.1,
        cfg.headroom,
        cfg.capacity_spread.0,
        cfg.capacity_spread.1,
        cfg.seed
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizerKind {
    LtGomeaSll,
    LtGomeaDled,
    IlsSll,
    FihcRestart,
}

impl OptimizerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::LtGomeaSll => "ltgomea-sll",
            Self::LtGomeaDled => "ltgomea-dled",
            Self::IlsSll => "ils-sll",
            Self::FihcRestart => "fihc-restart",
        }
    }

    pub fn needs_binary(self) -> bool {
        matches!(self, Self::LtGomeaSll | Self::LtGomeaDled)
    }
}

impl FromStr for OptimizerKind {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "ltgomea-sll" => Ok(Self::LtGomeaSll),
            "ltgomea-dled" => Ok(Self::LtGomeaDled),
            "ils-sll" => Ok(Self::IlsSll),
            "fihc-restart" => Ok(Self::FihcRestart),
            _ => Err(CliError::Config(format!(
                "unknown optimizer {s:?} (expected ltgomea-sll, ltgomea-dled, ils-sll or fihc-restart)"
            ))),
        }
    }
}

/// Parses `a..b` (inclusive), single seeds and comma-separated mixes such
/// as `0..4,10`.
pub fn parse_seeds(text: &str) -> CliResult<Vec<u64>> {
    let bad = || CliError::Config(format!("bad seed list {text:?}"));
    let mut seeds = Vec::new();
    for part in text.split(',').map(str::trim) {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                seeds.extend(a..=b);
            }
            None => seeds.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(seeds)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemSource,
    pub optimizer: OptimizerKind,
    pub ffe_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    pub seeds: Vec<u64>,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn new(
        problem: ProblemSource,
        optimizer: OptimizerKind,
        ffe_limit: Option<u64>,
        time_limit: Option<Duration>,
        seeds: Vec<u64>,
        out_dir: impl Into<PathBuf>,
    ) -> CliResult<Self> {
        let cfg = Self {
            problem,
            optimizer,
            ffe_limit,
            time_limit,
            seeds,
            out_dir: out_dir.into(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.ffe_limit.is_none() && self.time_limit.is_none() {
            return Err(CliError::Config("set an FFE limit, a time limit or both".into()));
        }
        if self.seeds.is_empty() {
            return Err(CliError::Config("seed list is empty".into()));
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(CliError::Config("seed list has duplicates".into()));
        }
        Ok(())
    }

    /// Loads or generates the problem and fixes its canonical description.
    pub fn resolve(&self) -> CliResult<ResolvedProblem> {
        self.validate()?;
        let resolved = match &self.problem {
            ProblemSource::Benchmark(spec) => {
                let b = Benchmark::from_spec(spec)?;
                ResolvedProblem {
                    description: b.spec_string(),
                    instance_text: None,
                    problem: LoadedProblem::Benchmark(b),
                }
            }
            ProblemSource::InstanceFile(path) => {
                let text = std::fs::read_to_string(path).map_err(io_err(path))?;
                let inst = parse_instance(&text).map_err(|e| CliError::Malformed {
                    path: path.clone(),
                    msg: e.to_string(),
                })?;
                let name = path.file_name().map_or("instance".into(), |n| n.to_string_lossy().into_owned());
                let canonical = serialize_instance(&inst);
                ResolvedProblem {
                    description: format!("problem=wpflf file={name} sha256={}", hex(&Sha256::digest(&canonical))),
                    problem: LoadedProblem::Network(WpLflProblem::labeled(inst, name)),
                    instance_text: Some(canonical),
                }
            }
            ProblemSource::Generated(g) => {
                let inst = generate_instance(g)?;
                let description = generator_string(g);
                ResolvedProblem {
                    instance_text: Some(serialize_instance(&inst)),
                    problem: LoadedProblem::Network(WpLflProblem::labeled(inst, description.clone())),
                    description,
                }
            }
        };
        if self.optimizer.needs_binary() && !resolved.as_dyn().is_binary() {
            return Err(CliError::Config(format!("{} needs a binary problem", self.optimizer.as_str())));
        }
        Ok(resolved)
    }

    /// `config.txt` contents; seeds and the output directory are excluded so
    /// that runs of one configuration share a directory.
    pub fn describe(&self, problem: &ResolvedProblem) -> String {
        let mut out = String::new();
        writeln!(out, "schema={SCHEMA_VERSION}").unwrap();
        writeln!(out, "problem={}", problem.description).unwrap();
        writeln!(out, "n={}", problem.as_dyn().len()).unwrap();
        writeln!(out, "optimizer={}", self.optimizer.as_str()).unwrap();
        writeln!(out, "ffe={}", self.ffe_limit.map_or("none".into(), |f| f.to_string())).unwrap();
        writeln!(out, "time={}", self.time_limit.map_or("none".into(), |t| t.as_secs_f64().to_string())).unwrap();
        out
    }

    /// First 16 hex digits of the SHA-256 of [`Self::describe`].
    pub fn hash(&self, problem: &ResolvedProblem) -> String {
        hex(&Sha256::digest(self.describe(problem)))[..16].to_string()
    }

    pub fn config_dir(&self, problem: &ResolvedProblem) -> PathBuf {
        self.out_dir.join(self.hash(problem))
    }
}

#[derive(Debug, Clone)]
pub enum LoadedProblem {
    Benchmark(Benchmark),
    Network(WpLflProblem),
}

#[derive(Debug, Clone)]
pub struct ResolvedProblem {
    pub problem: LoadedProblem,
    pub description: String,
    /// Serialized WP_LFL instance, written next to the runs.
    pub instance_text: Option<String>,
}

impl ResolvedProblem {
    pub fn as_dyn(&self) -> &dyn Problem {
        match &self.problem {
            LoadedProblem::Benchmark(b) => b,
            LoadedProblem::Network(w) => w,
        }
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(2 * bytes.len()), |mut s, b| {
        write!(s, "{b:02x}").unwrap();
        s
    })
}

/// Parsed `config.txt`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigInfo {
    pub problem: String,
    pub n: usize,
    pub optimizer: String,
}

impl ConfigInfo {
    pub fn read(dir: &Path) -> CliResult<Self> {
        let path = dir.join("config.txt");
        let text = std::fs::read_to_string(&path).map_err(io_err(&path))?;
        let malformed = |msg: String| CliError::Malformed { path: path.clone(), msg };
        let field = |key: &str| {
            text.lines()
                .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
                .ok_or_else(|| malformed(format!("missing {key}")))
        };
        let schema = field("schema")?;
        if schema != SCHEMA_VERSION.to_string() {
            return Err(malformed(format!("schema {schema} is not {SCHEMA_VERSION}")));
        }
        Ok(Self {
            problem: field("problem")?.to_string(),
            n: field("n")?.parse().map_err(|_| malformed("bad n".into()))?,
            optimizer: field("optimizer")?.to_string(),
        })
    }
}
