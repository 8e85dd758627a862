use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linkage::dsm::DependencyMatrix;
use crate::problem::{Evaluator, Genotype, Problem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dependency {
    Dependent,
    NotDetected,
}

/// The four-point test on scores `f(x)`, `f(x^g)`, `f(x^h)`, `f(x^{g,h})`.
pub fn dled_condition(fx: f64, fg: f64, fh: f64, fgh: f64) -> Dependency {
    if (fx < fg && fh >= fgh) || (fx >= fg && fh < fgh) {
        Dependency::Dependent
    } else {
        Dependency::NotDetected
    }
}

/// Tests genes `g` and `h` for a direct dependency around `x` (4 FFE).
pub fn dled_check<P: Problem + ?Sized>(
    x: &Genotype,
    g: usize,
    h: usize,
    eval: &mut Evaluator<'_, P>,
) -> Result<Dependency> {
    check_pair(x, g, h)?;
    let fx = eval.score(x)?;
    let xg = x.flipped(g);
    let fg = eval.score(&xg)?;
    let fh = eval.score(&x.flipped(h))?;
    let fgh = eval.score(&xg.flipped(h))?;
    Ok(dled_condition(fx, fg, fh, fgh))
}

fn check_pair(x: &Genotype, g: usize, h: usize) -> Result<()> {
    let n = x.len();
    for i in [g, h] {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
    }
    if g == h {
        return Err(Error::InvalidSpec(format!("DLED needs two distinct genes, got {g} twice")));
    }
    if !x.is_binary() {
        return Err(Error::Unsupported("DLED is defined for binary genotypes".into()));
    }
    Ok(())
}

/// Gene pairs confirmed dependent, plus the round-robin probing cursor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyLedger {
    n: usize,
    verified: Vec<bool>,
    count: usize,
    checks_done: u64,
    cursor: usize,
}

impl DependencyLedger {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            verified: vec![false; n * n],
            count: 0,
            checks_done: 0,
            cursor: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_verified(&self, g: usize, h: usize) -> bool {
        self.verified[g * self.n + h]
    }

    pub fn verified_count(&self) -> usize {
        self.count
    }

    pub fn checks_done(&self) -> u64 {
        self.checks_done
    }

    /// Verified pairs as `(low, high)` in lexicographic order.
    pub fn verified_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|g| (g + 1..self.n).map(move |h| (g, h)))
            .filter(|&(g, h)| self.is_verified(g, h))
            .collect()
    }

    fn mark(&mut self, g: usize, h: usize) {
        if !self.verified[g * self.n + h] {
            self.verified[g * self.n + h] = true;
            self.verified[h * self.n + g] = true;
            self.count += 1;
        }
    }

    /// 0/1 matrix of verified pairs.
    pub fn to_matrix(&self) -> DependencyMatrix {
        let mut m = DependencyMatrix::zeros(self.n);
        for (g, h) in self.verified_pairs() {
            m.set(g, h, 1.0).expect("off-diagonal unit entry");
        }
        m
    }
}

fn pair_at(n: usize, mut idx: usize) -> (usize, usize) {
    let mut g = 0;
    while idx >= n - 1 - g {
        idx -= n - 1 - g;
        g += 1;
    }
    (g, g + 1 + idx)
}

/// Probes unverified pairs round-robin, continuing where the previous call
/// stopped, until every pair was visited once or `max_checks` checks ran.
///
/// A pair is checked against each probe until one reveals a dependency. The
/// ledger keeps everything found so far even when the budget runs out.
pub fn dled_dsm<P: Problem + ?Sized>(
    ledger: &mut DependencyLedger,
    probes: &[Genotype],
    eval: &mut Evaluator<'_, P>,
    max_checks: Option<u64>,
) -> Result<DependencyMatrix> {
    let n = ledger.n;
    if let Some(p) = probes.iter().find(|p| p.len() != n || !p.is_binary()) {
        return Err(Error::ShapeMismatch(format!("DLED probe {p:?} does not match {n} binary genes")));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    if pairs == 0 || probes.is_empty() {
        return Ok(ledger.to_matrix());
    }
    let mut base: Vec<Option<f64>> = vec![None; probes.len()];
    let mut single: HashMap<(usize, usize), f64> = HashMap::new();
    let mut checks = 0u64;
    for _ in 0..pairs {
        if max_checks.is_some_and(|m| checks >= m) {
            break;
        }
        let (g, h) = pair_at(n, ledger.cursor);
        ledger.cursor = (ledger.cursor + 1) % pairs;
        if ledger.is_verified(g, h) {
            continue;
        }
        for (p, x) in probes.iter().enumerate() {
            if max_checks.is_some_and(|m| checks >= m) {
                break;
            }
            let fx = match base[p] {
                Some(v) => v,
                None => *base[p].insert(eval.score(x)?),
            };
            let mut flip = |gene: usize, eval: &mut Evaluator<'_, P>| -> Result<f64> {
                if let Some(&v) = single.get(&(p, gene)) {
                    return Ok(v);
                }
                let v = eval.score(&x.flipped(gene))?;
                single.insert((p, gene), v);
                Ok(v)
            };
            let fg = flip(g, eval)?;
            let fh = flip(h, eval)?;
            let mut xgh = x.flipped(g);
            xgh.flip(h);
            let fgh = eval.score(&xgh)?;
            checks += 1;
            ledger.checks_done += 1;
            if dled_condition(fx, fg, fh, fgh) == Dependency::Dependent {
                ledger.mark(g, h);
                break;
            }
        }
    }
    Ok(ledger.to_matrix())
}
