//! The Leading Blocks Problem.
//!
//! Blocks contribute only while *enabled*: the first `reach` blocks always
//! are, and any later block is enabled when one of the `reach` blocks before
//! it is both enabled and at its optimum. Genes of disabled blocks feed the
//! variant-specific term `f_d`.

use crate::benchmarks::unitation::{no_opt_bimodal_unchecked, BlockFunction};
use crate::error::{Error, Result};
use crate::problem::Genotype;

/// How genes of disabled blocks contribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Disabled blocks contribute nothing.
    RestOff,
    /// A single bimodal-like term over all disabled genes, peaking at half ones.
    HalfOnHalf,
    /// Each disabled block scores with the bimodal function stripped of its optima.
    Alter,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::RestOff => "restoff",
            Variant::HalfOnHalf => "halfonhalf",
            Variant::Alter => "alter",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "restoff" => Some(Variant::RestOff),
            "halfonhalf" => Some(Variant::HalfOnHalf),
            "alter" => Some(Variant::Alter),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeadingBlocksSpec {
    n: usize,
    blocks: Vec<Vec<usize>>,
    reach: usize,
    function: BlockFunction,
    variant: Variant,
    alpha: f64,
    per_block_optimum: Vec<f64>,
}

impl LeadingBlocksSpec {
    pub fn new(
        n: usize,
        blocks: Vec<Vec<usize>>,
        reach: usize,
        function: BlockFunction,
        variant: Variant,
        alpha: f64,
    ) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidSpec("at least one block is required".into()));
        }
        if reach == 0 {
            return Err(Error::InvalidSpec("reach R must be at least 1".into()));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidSpec(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        let mut seen = vec![false; n];
        for (s, b) in blocks.iter().enumerate() {
            function.validate_order(b.len())?;
            for &i in b {
                if i >= n {
                    return Err(Error::InvalidSpec(format!("block {s} references gene {i} >= n = {n}")));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidSpec(format!("gene {i} appears in two blocks")));
                }
            }
        }
        let per_block_optimum = blocks
            .iter()
            .map(|b| function.block_optimum(b.len()))
            .collect();
        Ok(Self {
            n,
            blocks,
            reach,
            function,
            variant,
            alpha,
            per_block_optimum,
        })
    }

    /// Contiguous layout `I_s = {k·s, …, k·s + k - 1}`.
    pub fn contiguous(
        n: usize,
        k: usize,
        reach: usize,
        function: BlockFunction,
        variant: Variant,
        alpha: f64,
    ) -> Result<Self> {
        if k == 0 || !n.is_multiple_of(k) {
            return Err(Error::InvalidSpec(format!("k = {k} does not divide n = {n}")));
        }
        let blocks = (0..n / k).map(|s| (s * k..s * k + k).collect()).collect();
        Self::new(n, blocks, reach, function, variant, alpha)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
    pub fn reach(&self) -> usize {
        self.reach
    }
    pub fn function(&self) -> BlockFunction {
        self.function
    }
    pub fn variant(&self) -> Variant {
        self.variant
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn per_block_optimum(&self) -> &[f64] {
        &self.per_block_optimum
    }

    /// All blocks enabled and optimal.
    pub fn optimum(&self) -> f64 {
        self.per_block_optimum.iter().sum()
    }

    fn unitations(&self, genes: &[u32]) -> Vec<usize> {
        self.blocks
            .iter()
            .map(|b| b.iter().filter(|&&i| genes[i] != 0).count())
            .collect()
    }

    fn flags_from(&self, values: &[f64]) -> Vec<bool> {
        let mut flags = vec![false; values.len()];
        for s in 0..values.len() {
            flags[s] = s < self.reach
                || (s - self.reach..s).any(|i| flags[i] && values[i] == self.per_block_optimum[i]);
        }
        flags
    }

    pub(crate) fn enable_flags_raw(&self, genes: &[u32]) -> Vec<bool> {
        let values: Vec<f64> = self
            .unitations(genes)
            .iter()
            .zip(&self.blocks)
            .map(|(&u, b)| self.function.value(u, b.len()))
            .collect();
        self.flags_from(&values)
    }

    pub(crate) fn eval_raw(&self, genes: &[u32]) -> f64 {
        let units = self.unitations(genes);
        let values: Vec<f64> = units
            .iter()
            .zip(&self.blocks)
            .map(|(&u, b)| self.function.value(u, b.len()))
            .collect();
        let flags = self.flags_from(&values);
        let enabled: f64 = values
            .iter()
            .zip(&flags)
            .filter(|(_, &on)| on)
            .map(|(v, _)| v)
            .sum();
        let disabled = || (0..self.blocks.len()).filter(|&s| !flags[s]);
        let fd = match self.variant {
            Variant::RestOff => 0.0,
            Variant::HalfOnHalf => {
                let size_d: usize = disabled().map(|s| self.blocks[s].len()).sum();
                if size_d == 0 {
                    0.0
                } else {
                    let fd_max: f64 = disabled().map(|s| self.per_block_optimum[s]).sum();
                    let u_d: usize = disabled().map(|s| units[s]).sum();
                    let half = size_d as f64 / 2.0;
                    fd_max * self.alpha * (1.0 - (u_d as f64 - half).abs() / half)
                }
            }
            Variant::Alter => disabled()
                .map(|s| no_opt_bimodal_unchecked(units[s], self.blocks[s].len()) as f64)
                .sum(),
        };
        enabled + fd
    }

    fn check(&self, x: &Genotype) -> Result<()> {
        if x.len() != self.n || !x.is_binary() {
            return Err(Error::ShapeMismatch(format!(
                "Leading Blocks instance expects {} binary genes, got {}",
                self.n,
                x.len()
            )));
        }
        Ok(())
    }
}

/// Per-block enabled flags, computed left to right in one pass.
pub fn enable_flags(x: &Genotype, spec: &LeadingBlocksSpec) -> Result<Vec<u8>> {
    spec.check(x)?;
    Ok(spec
        .enable_flags_raw(x.genes())
        .into_iter()
        .map(u8::from)
        .collect())
}

/// Leading Blocks fitness: enabled block values plus the variant's `f_d`.
pub fn lbp_eval(x: &Genotype, spec: &LeadingBlocksSpec) -> Result<f64> {
    spec.check(x)?;
    Ok(spec.eval_raw(x.genes()))
}
