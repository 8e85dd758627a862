//! The Leading Ones family.

use crate::error::{Error, Result};
use crate::problem::Genotype;

fn require_binary(x: &Genotype) -> Result<()> {
    if x.is_binary() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch("Leading Ones family needs a binary genotype".into()))
    }
}

pub(crate) fn leading_ones_raw(genes: &[u32]) -> usize {
    genes.iter().take_while(|&&g| g == 1).count()
}

/// Length of the maximal all-ones prefix.
pub fn leading_ones(x: &Genotype) -> Result<usize> {
    require_binary(x)?;
    Ok(leading_ones_raw(x.genes()))
}

/// `floor(leading_ones(x) / l)`.
pub fn block_leading_ones(x: &Genotype, l: usize) -> Result<usize> {
    require_binary(x)?;
    if l == 0 {
        return Err(Error::InvalidSpec("block length must be positive".into()));
    }
    Ok(leading_ones_raw(x.genes()) / l)
}

/// Royal Staircase: number of complete all-ones blocks of size `b` at the
/// start of the genotype.
pub fn leading_blocks_royal(x: &Genotype, b: usize) -> Result<usize> {
    require_binary(x)?;
    if b == 0 || !x.len().is_multiple_of(b) {
        return Err(Error::InvalidSpec(format!(
            "block size {b} does not divide n = {}",
            x.len()
        )));
    }
    Ok(royal_raw(x.genes(), b))
}

pub(crate) fn royal_raw(genes: &[u32], b: usize) -> usize {
    genes
        .chunks(b)
        .take_while(|c| c.iter().all(|&g| g == 1))
        .count()
}
