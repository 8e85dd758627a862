//! Concatenations of block subfunctions: disjoint, overlapping and cyclic.

use crate::benchmarks::unitation::BlockFunction;
use crate::error::{Error, Result};
use crate::problem::Genotype;

/// Layout of a concatenated benchmark.
///
/// Each of `chains` equal segments of the genotype holds a chain of blocks of
/// order `k`; consecutive blocks share `overlap` genes. In a cyclic chain the
/// last block wraps around and shares `overlap` genes with the first one.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcatSpec {
    n: usize,
    k: usize,
    overlap: usize,
    cyclic: bool,
    chains: usize,
    function: BlockFunction,
    blocks: Vec<Vec<usize>>,
}

impl ConcatSpec {
    pub fn new(
        n: usize,
        k: usize,
        overlap: usize,
        cyclic: bool,
        chains: usize,
        function: BlockFunction,
    ) -> Result<Self> {
        function.validate_order(k)?;
        if overlap >= k {
            return Err(Error::InvalidSpec(format!("overlap {overlap} must be below k = {k}")));
        }
        if chains == 0 || !n.is_multiple_of(chains) {
            return Err(Error::InvalidSpec(format!("{chains} chains do not divide n = {n}")));
        }
        let len = n / chains;
        let step = k - overlap;
        let per_chain = if cyclic {
            if !len.is_multiple_of(step) {
                return Err(Error::InvalidSpec(format!(
                    "cyclic chain of {len} genes is not a multiple of k - o = {step}"
                )));
            }
            let s = len / step;
            if len < k || (overlap > 0 && s < 2) {
                return Err(Error::InvalidSpec("cyclic chain needs at least two blocks".into()));
            }
            s
        } else {
            if len < k || !(len - overlap).is_multiple_of(step) {
                return Err(Error::InvalidSpec(format!(
                    "chain of {len} genes cannot be tiled by blocks of {k} with overlap {overlap}"
                )));
            }
            (len - overlap) / step
        };
        let mut blocks = Vec::with_capacity(per_chain * chains);
        for c in 0..chains {
            let base = c * len;
            for s in 0..per_chain {
                blocks.push(
                    (0..k)
                        .map(|j| base + (s * step + j) % len)
                        .collect::<Vec<_>>(),
                );
            }
        }
        Ok(Self {
            n,
            k,
            overlap,
            cyclic,
            chains,
            function,
            blocks,
        })
    }

    /// Disjoint concatenation of `n / k` blocks.
    pub fn disjoint(n: usize, k: usize, function: BlockFunction) -> Result<Self> {
        if k == 0 || !n.is_multiple_of(k) {
            return Err(Error::InvalidSpec(format!("k = {k} does not divide n = {n}")));
        }
        Self::new(n, k, 0, false, 1, function)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn overlap(&self) -> usize {
        self.overlap
    }
    pub fn cyclic(&self) -> bool {
        self.cyclic
    }
    pub fn chains(&self) -> usize {
        self.chains
    }
    pub fn function(&self) -> BlockFunction {
        self.function
    }
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub(crate) fn eval_raw(&self, genes: &[u32]) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let u = b.iter().filter(|&&i| genes[i] != 0).count();
                self.function.value(u, self.k)
            })
            .sum()
    }

    /// Global optimum.
    ///
    /// Disjoint layouts sum the per-block optimum. Overlapping chains use a
    /// dynamic program over the shared genes when `2·o <= k`, otherwise an
    /// exhaustive search for `n <= 24`.
    pub fn optimum(&self) -> Result<f64> {
        if self.overlap == 0 {
            return Ok(self.blocks.len() as f64 * self.function.block_optimum(self.k));
        }
        if 2 * self.overlap <= self.k && self.k <= 20 {
            let per_chain = self.blocks.len() / self.chains;
            let chain = if self.cyclic {
                self.cyclic_chain_optimum(per_chain)
            } else {
                self.open_chain_optimum(per_chain, None)
            };
            return Ok(chain * self.chains as f64);
        }
        if self.n <= 24 {
            return Ok(exhaustive_max(self.n, |g| self.eval_raw(g)));
        }
        Err(Error::Unsupported(format!(
            "optimum of overlapping chain with k = {}, o = {}, n = {}",
            self.k, self.overlap, self.n
        )))
    }

    // Block assignments are bitmasks over positions 0..k of the block; the
    // DP state is the mask of the last `o` genes shared with the next block.
    fn open_chain_optimum(&self, blocks: usize, fixed_head: Option<u32>) -> f64 {
        let (k, o) = (self.k, self.overlap);
        let states = 1usize << o;
        let head_mask = (1u32 << o) - 1;
        let value: Vec<f64> = (0u32..(1 << k))
            .map(|a| self.function.value(a.count_ones() as usize, k))
            .collect();
        let mut best = vec![f64::NEG_INFINITY; states];
        for a in 0u32..(1 << k) {
            if fixed_head.is_some_and(|h| a & head_mask != h) {
                continue;
            }
            let tail = (a >> (k - o)) as usize;
            best[tail] = best[tail].max(value[a as usize]);
        }
        for _ in 1..blocks {
            let mut next = vec![f64::NEG_INFINITY; states];
            for a in 0u32..(1 << k) {
                let prev = best[(a & head_mask) as usize];
                if prev == f64::NEG_INFINITY {
                    continue;
                }
                let tail = (a >> (k - o)) as usize;
                next[tail] = next[tail].max(prev + value[a as usize]);
            }
            best = next;
        }
        match fixed_head {
            // cyclic closure: the last block's tail is the first block's head
            Some(h) => best[h as usize],
            None => best.into_iter().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    fn cyclic_chain_optimum(&self, blocks: usize) -> f64 {
        (0u32..(1 << self.overlap))
            .map(|h| self.open_chain_optimum(blocks, Some(h)))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Sum of subfunction values over all blocks of `spec`.
pub fn concat_eval(x: &Genotype, spec: &ConcatSpec) -> Result<f64> {
    if x.len() != spec.n || !x.is_binary() {
        return Err(Error::ShapeMismatch(format!(
            "concatenation expects {} binary genes, got {}",
            spec.n,
            x.len()
        )));
    }
    Ok(spec.eval_raw(x.genes()))
}

pub(crate) fn exhaustive_max(n: usize, f: impl Fn(&[u32]) -> f64) -> f64 {
    let mut genes = vec![0u32; n];
    let mut best = f64::NEG_INFINITY;
    for mask in 0u64..(1u64 << n) {
        for (i, g) in genes.iter_mut().enumerate() {
            *g = ((mask >> i) & 1) as u32;
        }
        best = best.max(f(&genes));
    }
    best
}
