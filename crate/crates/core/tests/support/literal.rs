//! Per-definition transcriptions of the benchmark formulas, written without
//! reusing any library code. Shared with the acceptance suite.
#![allow(dead_code)]

pub fn f_lo(x: &[u32]) -> f64 {
    (0..x.len()).map(|i| (0..=i).map(|j| x[j] as f64).product::<f64>()).sum()
}

pub fn f_blo(x: &[u32], l: usize) -> f64 {
    (f_lo(x) / l as f64).floor()
}

/// Leading complete blocks of ones (product bound b*(i+1)-1).
pub fn f_lob(x: &[u32], b: usize) -> f64 {
    (0..x.len() / b)
        .map(|i| (0..b * (i + 1)).map(|j| x[j] as f64).product::<f64>())
        .sum()
}

pub fn unitation(x: &[u32], idx: &[usize]) -> f64 {
    idx.iter().map(|&i| x[i] as f64).sum()
}

pub fn bim_trap(u: f64, k: f64) -> f64 {
    if u != k && u != 0.0 {
        k / 2.0 - (u - k / 2.0).abs() - 1.0
    } else {
        k / 2.0
    }
}

pub fn no_opt_bimodal(u: f64, k: f64) -> f64 {
    k / 2.0 - (u - k / 2.0).abs() - 1.0
}

pub fn dec_trap(u: f64, k: f64) -> f64 {
    if u == k {
        k
    } else {
        k - 1.0 - u
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Fd {
    RestOff,
    HalfOnHalf,
    Alter,
}

pub struct Lbp {
    pub blocks: Vec<Vec<usize>>,
    pub r: usize,
    pub f: fn(f64, f64) -> f64,
    pub f_opt: f64,
    pub fd: Fd,
    pub alpha: f64,
}

impl Lbp {
    pub fn contiguous(n: usize, k: usize, r: usize, fd: Fd, alpha: f64) -> Self {
        Self {
            blocks: (0..n / k).map(|s| (k * s..k * s + k).collect()).collect(),
            r,
            f: bim_trap,
            f_opt: k as f64 / 2.0,
            fd,
            alpha,
        }
    }

    fn f_s(&self, x: &[u32], s: usize) -> f64 {
        (self.f)(unitation(x, &self.blocks[s]), self.blocks[s].len() as f64)
    }

    /// Enable function, evaluated recursively as written.
    pub fn e(&self, s: usize, x: &[u32]) -> f64 {
        if s < self.r {
            return 1.0;
        }
        let any = (s - self.r..s).any(|i| self.e(i, x) == 1.0 && self.f_s(x, i) == self.f_opt);
        if any {
            1.0
        } else {
            0.0
        }
    }

    pub fn eval(&self, x: &[u32]) -> f64 {
        let big_s = self.blocks.len();
        let enabled: f64 = (0..big_s).map(|s| self.e(s, x) * self.f_s(x, s)).sum();
        let fd = match self.fd {
            Fd::RestOff => 0.0,
            Fd::HalfOnHalf => {
                let fdmax: f64 = (0..big_s).map(|s| (1.0 - self.e(s, x)) * self.f_opt).sum();
                let size_d: f64 = (0..big_s)
                    .map(|s| (1.0 - self.e(s, x)) * self.blocks[s].len() as f64)
                    .sum();
                let u_d: f64 = (0..big_s)
                    .map(|s| (1.0 - self.e(s, x)) * unitation(x, &self.blocks[s]))
                    .sum();
                if size_d == 0.0 {
                    0.0
                } else {
                    (fdmax * self.alpha) * (1.0 - (u_d - size_d / 2.0).abs() / (size_d / 2.0))
                }
            }
            Fd::Alter => (0..big_s)
                .map(|s| {
                    (1.0 - self.e(s, x))
                        * no_opt_bimodal(unitation(x, &self.blocks[s]), self.blocks[s].len() as f64)
                })
                .sum(),
        };
        enabled + fd
    }
}

/// Single-chain concatenation; block s covers genes (s*(k-o)+j) mod n.
pub fn f_con(x: &[u32], k: usize, o: usize, cyclic: bool, f: fn(f64, f64) -> f64) -> f64 {
    let n = x.len();
    let step = k - o;
    let blocks = if cyclic { n / step } else { (n - o) / step };
    (0..blocks)
        .map(|s| {
            let idx: Vec<usize> = (0..k).map(|j| (s * step + j) % n).collect();
            f(unitation(x, &idx), k as f64)
        })
        .sum()
}

pub fn bits(v: u64, n: usize) -> Vec<u32> {
    (0..n).map(|i| ((v >> i) & 1) as u32).collect()
}
