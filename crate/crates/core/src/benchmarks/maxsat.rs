//! Random Max3Sat instances.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::Genotype;

/// Clause/variable ratio used when only `n` is given.
pub const DEFAULT_CLAUSE_RATIO: f64 = 4.27;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    fn satisfied(self, genes: &[u32]) -> bool {
        (genes[self.var as usize] != 0) != self.negated
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Max3SatInstance {
    n: usize,
    clauses: Vec<[Literal; 3]>,
    seed: u64,
}

impl Max3SatInstance {
    pub fn new(n: usize, clauses: Vec<[Literal; 3]>, seed: u64) -> Result<Self> {
        for (c, clause) in clauses.iter().enumerate() {
            for (j, lit) in clause.iter().enumerate() {
                if lit.var as usize >= n {
                    return Err(Error::InvalidSpec(format!(
                        "clause {c} references variable {} >= n = {n}",
                        lit.var
                    )));
                }
                if clause[..j].iter().any(|o| o.var == lit.var) {
                    return Err(Error::InvalidSpec(format!(
                        "clause {c} repeats variable {}",
                        lit.var
                    )));
                }
            }
        }
        Ok(Self { n, clauses, seed })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub(crate) fn eval_raw(&self, genes: &[u32]) -> f64 {
        self.clauses
            .iter()
            .filter(|c| c.iter().any(|l| l.satisfied(genes)))
            .count() as f64
    }

    /// DIMACS CNF text; variables are written 1-based.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("c max3sat seed={}\np cnf {} {}\n", self.seed, self.n, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let v = l.var as i64 + 1;
                out.push_str(&format!("{} ", if l.negated { -v } else { v }));
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut seed = 0;
        let mut clauses = Vec::new();
        let mut pending: Vec<i64> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let lno = i + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('c') {
                if let Some(s) = rest.split_whitespace().find_map(|w| w.strip_prefix("seed=")) {
                    seed = s.parse().unwrap_or(0);
                }
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let f: Vec<&str> = rest.split_whitespace().collect();
                match f.as_slice() {
                    ["cnf", n, m] => {
                        let n = n.parse().map_err(|_| Error::parse(lno, "bad variable count"))?;
                        let m = m.parse().map_err(|_| Error::parse(lno, "bad clause count"))?;
                        header = Some((n, m));
                    }
                    _ => return Err(Error::parse(lno, "expected `p cnf <vars> <clauses>`")),
                }
                continue;
            }
            let (n, _) = header.ok_or_else(|| Error::parse(lno, "clause before header"))?;
            for tok in line.split_whitespace() {
                let v: i64 = tok
                    .parse()
                    .map_err(|_| Error::parse(lno, format!("bad literal {tok:?}")))?;
                if v == 0 {
                    if pending.len() != 3 {
                        return Err(Error::parse(lno, format!("clause has {} literals, expected 3", pending.len())));
                    }
                    let mut lits = [Literal { var: 0, negated: false }; 3];
                    for (slot, &p) in lits.iter_mut().zip(&pending) {
                        let var = p.unsigned_abs() - 1;
                        if var as usize >= n {
                            return Err(Error::parse(lno, format!("literal {p} exceeds {n} variables")));
                        }
                        *slot = Literal {
                            var: var as u32,
                            negated: p < 0,
                        };
                    }
                    clauses.push(lits);
                    pending.clear();
                } else {
                    pending.push(v);
                }
            }
        }
        let (n, m) = header.ok_or_else(|| Error::parse(1, "missing `p cnf` header"))?;
        if !pending.is_empty() {
            return Err(Error::parse(text.lines().count(), "unterminated clause"));
        }
        if clauses.len() != m {
            return Err(Error::parse(1, format!("header announces {m} clauses, found {}", clauses.len())));
        }
        Self::new(n, clauses, seed).map_err(|e| Error::parse(1, e.to_string()))
    }
}

/// `m` clauses over 3 distinct uniformly chosen variables with uniform signs.
pub fn max3sat_generate(n: usize, m: usize, seed: u64) -> Result<Max3SatInstance> {
    if n < 3 {
        return Err(Error::InvalidSpec(format!("Max3Sat needs at least 3 variables, got {n}")));
    }
    if m == 0 {
        return Err(Error::InvalidSpec("Max3Sat needs at least one clause".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..m)
        .map(|_| {
            let vars = sample(&mut rng, n, 3);
            let mut c = [Literal { var: 0, negated: false }; 3];
            for (slot, v) in c.iter_mut().zip(vars.iter()) {
                *slot = Literal {
                    var: v as u32,
                    negated: rng.gen_bool(0.5),
                };
            }
            c
        })
        .collect();
    Max3SatInstance::new(n, clauses, seed)
}

/// Number of satisfied clauses.
pub fn max3sat_eval(x: &Genotype, inst: &Max3SatInstance) -> Result<f64> {
    if x.len() != inst.n || !x.is_binary() {
        return Err(Error::ShapeMismatch(format!(
            "Max3Sat instance expects {} binary genes, got {}",
            inst.n,
            x.len()
        )));
    }
    Ok(inst.eval_raw(x.genes()))
}
