//! Functions of unitation used as block subfunctions.

use crate::error::{Error, Result};

fn check(u: usize, k: usize) -> Result<()> {
    if u > k {
        Err(Error::UnitationOutOfRange { u, k })
    } else {
        Ok(())
    }
}

/// Bimodal deceptive trap of even order `k`: optima `k/2` at `u = 0` and
/// `u = k`, deceptive slope towards `u = k/2` everywhere else.
pub fn bim_trap(u: usize, k: usize) -> Result<i64> {
    check(u, k)?;
    if !k.is_multiple_of(2) {
        return Err(Error::InvalidSpec(format!("bimodal trap order must be even, got {k}")));
    }
    Ok(bim_trap_unchecked(u, k))
}

/// Bimodal function with its two optima removed; `-1` at `u ∈ {0, k}`.
pub fn no_opt_bimodal(u: usize, k: usize) -> Result<i64> {
    check(u, k)?;
    Ok(no_opt_bimodal_unchecked(u, k))
}

/// Standard deceptive trap: `k` at `u = k`, otherwise `k - 1 - u`.
pub fn deceptive_trap(u: usize, k: usize) -> Result<i64> {
    check(u, k)?;
    Ok(deceptive_trap_unchecked(u, k))
}

#[inline]
pub(crate) fn bim_trap_unchecked(u: usize, k: usize) -> i64 {
    if u == 0 || u == k {
        (k / 2) as i64
    } else {
        no_opt_bimodal_unchecked(u, k)
    }
}

// k/2 - |u - k/2| - 1 == min(u, k - u) - 1, exact for odd k as well.
#[inline]
pub(crate) fn no_opt_bimodal_unchecked(u: usize, k: usize) -> i64 {
    u.min(k - u) as i64 - 1
}

#[inline]
pub(crate) fn deceptive_trap_unchecked(u: usize, k: usize) -> i64 {
    if u == k {
        k as i64
    } else {
        k as i64 - 1 - u as i64
    }
}

/// Block subfunction identifier. All of them depend on the block's
/// unitation only; the order is the block length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockFunction {
    BimodalTrap,
    DeceptiveTrap,
    OneMax,
    /// Bimodal function without optima (the Alter replacement function).
    NoOptBimodal,
}

impl BlockFunction {
    pub fn value(self, u: usize, k: usize) -> f64 {
        debug_assert!(u <= k);
        (match self {
            BlockFunction::BimodalTrap => bim_trap_unchecked(u, k),
            BlockFunction::DeceptiveTrap => deceptive_trap_unchecked(u, k),
            BlockFunction::OneMax => u as i64,
            BlockFunction::NoOptBimodal => no_opt_bimodal_unchecked(u, k),
        }) as f64
    }

    pub fn validate_order(self, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::InvalidSpec("block order must be positive".into()));
        }
        if self == BlockFunction::BimodalTrap && !k.is_multiple_of(2) {
            return Err(Error::InvalidSpec(format!("bimodal trap order must be even, got {k}")));
        }
        Ok(())
    }

    /// Maximum of the function over all `2^k` assignments of one block.
    ///
    /// Enumerates assignments for `k <= 20`, and unitation classes beyond that.
    pub fn block_optimum(self, k: usize) -> f64 {
        if k <= 20 {
            (0u32..(1u32 << k))
                .map(|a| self.value(a.count_ones() as usize, k))
                .fold(f64::NEG_INFINITY, f64::max)
        } else {
            (0..=k)
                .map(|u| self.value(u, k))
                .fold(f64::NEG_INFINITY, f64::max)
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BlockFunction::BimodalTrap => "bimodal",
            BlockFunction::DeceptiveTrap => "deceptive",
            BlockFunction::OneMax => "onemax",
            BlockFunction::NoOptBimodal => "nooptbimodal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bimodal" | "bimtrap" | "bim" => Some(BlockFunction::BimodalTrap),
            "deceptive" | "dec" | "trap" => Some(BlockFunction::DeceptiveTrap),
            "onemax" => Some(BlockFunction::OneMax),
            "nooptbimodal" => Some(BlockFunction::NoOptBimodal),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bim_trap_order_four() {
        // bimTrap_4(u(1011)) = 0, bimTrap_4(u(0101)) = 1
        assert_eq!(bim_trap(3, 4).unwrap(), 0);
        assert_eq!(bim_trap(1, 4).unwrap(), 0);
        assert_eq!(bim_trap(2, 4).unwrap(), 1);
        assert_eq!(bim_trap(0, 4).unwrap(), 2);
        assert_eq!(bim_trap(4, 4).unwrap(), 2);
    }

    #[test]
    fn bim_trap_rejects_bad_input() {
        assert_eq!(bim_trap(5, 4), Err(Error::UnitationOutOfRange { u: 5, k: 4 }));
        assert!(matches!(bim_trap(1, 5), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn no_opt_bimodal_values() {
        assert_eq!(no_opt_bimodal(0, 10).unwrap(), -1);
        assert_eq!(no_opt_bimodal(5, 10).unwrap(), 4);
        assert_eq!(no_opt_bimodal(10, 10).unwrap(), -1);
        assert!(no_opt_bimodal(11, 10).is_err());
    }

    #[test]
    fn deceptive_trap_values() {
        assert_eq!(deceptive_trap(8, 8).unwrap(), 8);
        assert_eq!(deceptive_trap(0, 8).unwrap(), 7);
        assert_eq!(deceptive_trap(7, 8).unwrap(), 0);
        assert!(deceptive_trap(9, 8).is_err());
    }

    #[test]
    fn block_optima() {
        assert_eq!(BlockFunction::BimodalTrap.block_optimum(4), 2.0);
        assert_eq!(BlockFunction::BimodalTrap.block_optimum(10), 5.0);
        assert_eq!(BlockFunction::DeceptiveTrap.block_optimum(8), 8.0);
        assert_eq!(BlockFunction::OneMax.block_optimum(1), 1.0);
        assert_eq!(BlockFunction::NoOptBimodal.block_optimum(10), 4.0);
        assert_eq!(BlockFunction::OneMax.block_optimum(24), 24.0);
    }
}
