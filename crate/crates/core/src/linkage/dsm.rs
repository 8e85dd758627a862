use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::problem::Genotype;

/// Symmetric gene-pair dependency strengths with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DependencyMatrix {
    n: usize,
    strength: Vec<f64>,
}

impl DependencyMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            strength: vec![0.0; n * n],
        }
    }

    /// Builds a matrix from `f(i, j)` evaluated for `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, f(i, j))?;
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.strength[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        if i == j {
            return Err(Error::InvalidSpec("the diagonal of a dependency matrix is fixed at 0".into()));
        }
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidSpec(format!("dependency strength must be finite and >= 0, got {value}")));
        }
        self.strength[i * self.n + j] = value;
        self.strength[j * self.n + i] = value;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    out.push(',');
                }
                write!(out, "{}", self.get(i, j)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Pairwise mutual information (bits) of a binary population, from plug-in
/// frequencies; zero-probability cells contribute nothing.
pub fn mutual_information_dsm(population: &[Genotype]) -> Result<DependencyMatrix> {
    let first = population.first().ok_or(Error::EmptyPopulation)?;
    let n = first.len();
    if let Some(bad) = population.iter().find(|g| g.len() != n || !g.is_binary()) {
        return Err(Error::ShapeMismatch(format!(
            "mutual information needs binary genotypes of length {n}, got {:?}",
            bad
        )));
    }
    let count = population.len();
    let words = count.div_ceil(64);
    // column bitsets: bit m of column g is member m's gene g
    let mut columns = vec![0u64; n * words];
    for (m, g) in population.iter().enumerate() {
        for (i, &v) in g.genes().iter().enumerate() {
            if v != 0 {
                columns[i * words + m / 64] |= 1 << (m % 64);
            }
        }
    }
    let col = |i: usize| &columns[i * words..(i + 1) * words];
    let ones: Vec<usize> = (0..n)
        .map(|i| col(i).iter().map(|w| w.count_ones() as usize).sum())
        .collect();
    // MI = H(a) + H(b) - H(a,b), with entropies from c*log2(c) of counts
    let clog: Vec<f64> = (0..=count)
        .map(|c| if c == 0 { 0.0 } else { c as f64 * (c as f64).log2() })
        .collect();
    let total = count as f64;
    let log_total = total.log2();
    let mut dsm = DependencyMatrix::zeros(n);
    for i in 0..n {
        let hi = clog[ones[i]] + clog[count - ones[i]];
        for j in i + 1..n {
            let n11: usize = col(i)
                .iter()
                .zip(col(j))
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum();
            let n10 = ones[i] - n11;
            let n01 = ones[j] - n11;
            let n00 = count + n11 - ones[i] - ones[j];
            let hj = clog[ones[j]] + clog[count - ones[j]];
            let joint = clog[n00] + clog[n01] + clog[n10] + clog[n11];
            let mi = (joint - hi - hj) / total + log_total;
            // plug-in MI is >= 0; rounding can leave tiny negatives
            dsm.set(i, j, if mi > 1e-12 { mi } else { 0.0 })?;
        }
    }
    Ok(dsm)
}
