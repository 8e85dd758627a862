//! Closed-form binary benchmarks.

mod concat;
mod lbp;
mod leading;
mod maxsat;
mod unitation;

use std::sync::Arc;

pub use concat::{concat_eval, ConcatSpec};
pub use lbp::{enable_flags, lbp_eval, LeadingBlocksSpec, Variant};
pub use leading::{block_leading_ones, leading_blocks_royal, leading_ones};
pub use maxsat::{max3sat_eval, max3sat_generate, Literal, Max3SatInstance, DEFAULT_CLAUSE_RATIO};
pub use unitation::{bim_trap, deceptive_trap, no_opt_bimodal, BlockFunction};

use crate::error::{Error, Result};
use crate::problem::{binary_alphabet, Problem};
use crate::spec::{parse_bool, KeyValues};

#[derive(Debug, Clone, PartialEq)]
pub enum BenchmarkKind {
    OneMax { n: usize },
    LeadingOnes { n: usize },
    BlockLeadingOnes { n: usize, l: usize },
    RoyalStaircase { n: usize, b: usize },
    Concat(ConcatSpec),
    LeadingBlocks(LeadingBlocksSpec),
    Max3Sat(Max3SatInstance),
}

/// A benchmark instance usable as a [`Problem`].
#[derive(Debug, Clone)]
pub struct Benchmark {
    kind: BenchmarkKind,
    alphabet: Arc<[u32]>,
}

impl Benchmark {
    pub fn new(kind: BenchmarkKind) -> Result<Self> {
        let n = match &kind {
            BenchmarkKind::OneMax { n } | BenchmarkKind::LeadingOnes { n } => *n,
            BenchmarkKind::BlockLeadingOnes { n, l } => {
                if *l == 0 {
                    return Err(Error::InvalidSpec("block length l must be positive".into()));
                }
                *n
            }
            BenchmarkKind::RoyalStaircase { n, b } => {
                if *b == 0 || n % b != 0 {
                    return Err(Error::InvalidSpec(format!("b = {b} does not divide n = {n}")));
                }
                *n
            }
            BenchmarkKind::Concat(c) => c.n(),
            BenchmarkKind::LeadingBlocks(s) => s.n(),
            BenchmarkKind::Max3Sat(m) => m.n(),
        };
        if n == 0 {
            return Err(Error::InvalidSpec("n must be positive".into()));
        }
        Ok(Self {
            kind,
            alphabet: binary_alphabet(n),
        })
    }

    pub fn kind(&self) -> &BenchmarkKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.alphabet.len()
    }

    /// Parses a `key=value` spec such as `problem=concat fn=deceptive n=400 k=8`.
    pub fn from_spec(text: &str) -> Result<Self> {
        let kv = KeyValues::parse(text)?;
        let n: usize = kv.required("n")?;
        let func = |default: BlockFunction| -> Result<BlockFunction> {
            match kv.get("fn") {
                None => Ok(default),
                Some(v) => BlockFunction::parse(v)
                    .ok_or_else(|| Error::InvalidSpec(format!("unknown block function {v:?}"))),
            }
        };
        let kind = match kv.require("problem")? {
            "onemax" => {
                kv.only(&["problem", "n"])?;
                BenchmarkKind::OneMax { n }
            }
            "leadingones" => {
                kv.only(&["problem", "n"])?;
                BenchmarkKind::LeadingOnes { n }
            }
            "blo" => {
                kv.only(&["problem", "n", "l"])?;
                BenchmarkKind::BlockLeadingOnes { n, l: kv.required("l")? }
            }
            "royal" => {
                kv.only(&["problem", "n", "b"])?;
                BenchmarkKind::RoyalStaircase { n, b: kv.required("b")? }
            }
            "concat" => {
                kv.only(&["problem", "n", "k", "o", "cyclic", "chains", "fn"])?;
                let cyclic = kv.get("cyclic").map(parse_bool).transpose()?.unwrap_or(false);
                BenchmarkKind::Concat(ConcatSpec::new(
                    n,
                    kv.required("k")?,
                    kv.or("o", 0)?,
                    cyclic,
                    kv.or("chains", 1)?,
                    func(BlockFunction::BimodalTrap)?,
                )?)
            }
            "lbp" => {
                kv.only(&["problem", "n", "k", "R", "alpha", "variant", "fn"])?;
                let variant = match kv.get("variant") {
                    None => Variant::RestOff,
                    Some(v) => Variant::parse(v)
                        .ok_or_else(|| Error::InvalidSpec(format!("unknown LBP variant {v:?}")))?,
                };
                BenchmarkKind::LeadingBlocks(LeadingBlocksSpec::contiguous(
                    n,
                    kv.required("k")?,
                    kv.or("R", 1)?,
                    func(BlockFunction::BimodalTrap)?,
                    variant,
                    kv.or("alpha", 0.1)?,
                )?)
            }
            "max3sat" => {
                kv.only(&["problem", "n", "m", "ratio", "seed"])?;
                let m = match kv.parsed::<usize>("m")? {
                    Some(m) => m,
                    None => (kv.or("ratio", DEFAULT_CLAUSE_RATIO)? * n as f64).round() as usize,
                };
                BenchmarkKind::Max3Sat(max3sat_generate(n, m, kv.or("seed", 0)?)?)
            }
            other => return Err(Error::InvalidSpec(format!("unknown benchmark {other:?}"))),
        };
        Self::new(kind)
    }

    /// Canonical `key=value` form; parsing it yields an equal benchmark.
    pub fn spec_string(&self) -> String {
        match &self.kind {
            BenchmarkKind::OneMax { n } => format!("problem=onemax n={n}"),
            BenchmarkKind::LeadingOnes { n } => format!("problem=leadingones n={n}"),
            BenchmarkKind::BlockLeadingOnes { n, l } => format!("problem=blo n={n} l={l}"),
            BenchmarkKind::RoyalStaircase { n, b } => format!("problem=royal n={n} b={b}"),
            BenchmarkKind::Concat(c) => format!(
                "problem=concat fn={} n={} k={} o={} cyclic={} chains={}",
                c.function().as_str(),
                c.n(),
                c.k(),
                c.overlap(),
                c.cyclic(),
                c.chains()
            ),
            BenchmarkKind::LeadingBlocks(s) => format!(
                "problem=lbp variant={} fn={} n={} k={} R={} alpha={}",
                s.variant().as_str(),
                s.function().as_str(),
                s.n(),
                s.blocks()[0].len(),
                s.reach(),
                s.alpha()
            ),
            BenchmarkKind::Max3Sat(m) => format!(
                "problem=max3sat n={} m={} seed={}",
                m.n(),
                m.clauses().len(),
                m.seed()
            ),
        }
    }

    /// Global optimum, used as an early stop condition.
    pub fn known_optimum(&self) -> Result<f64> {
        Ok(match &self.kind {
            BenchmarkKind::OneMax { n } | BenchmarkKind::LeadingOnes { n } => *n as f64,
            BenchmarkKind::BlockLeadingOnes { n, l } => (n / l) as f64,
            BenchmarkKind::RoyalStaircase { n, b } => (n / b) as f64,
            BenchmarkKind::Concat(c) => c.optimum()?,
            BenchmarkKind::LeadingBlocks(s) => s.optimum(),
            BenchmarkKind::Max3Sat(_) => {
                return Err(Error::Unsupported("Max3Sat optimum is not known in closed form".into()))
            }
        })
    }
}

impl Problem for Benchmark {
    fn alphabet(&self) -> Arc<[u32]> {
        self.alphabet.clone()
    }

    fn fitness(&self, genes: &[u32]) -> f64 {
        match &self.kind {
            BenchmarkKind::OneMax { .. } => genes.iter().filter(|&&g| g != 0).count() as f64,
            BenchmarkKind::LeadingOnes { .. } => leading::leading_ones_raw(genes) as f64,
            BenchmarkKind::BlockLeadingOnes { l, .. } => (leading::leading_ones_raw(genes) / l) as f64,
            BenchmarkKind::RoyalStaircase { b, .. } => leading::royal_raw(genes, *b) as f64,
            BenchmarkKind::Concat(c) => c.eval_raw(genes),
            BenchmarkKind::LeadingBlocks(s) => s.eval_raw(genes),
            BenchmarkKind::Max3Sat(m) => m.eval_raw(genes),
        }
    }

    fn known_optimum(&self) -> Option<f64> {
        Benchmark::known_optimum(self).ok()
    }

    fn name(&self) -> String {
        self.spec_string()
    }
}
