//! Hop analysis of improvement traces.
//!
//! A modification is the set of genes by which a best-so-far solution differs
//! from its predecessor. The hop number of a modification estimates how many
//! improving steps, taken from the trace history, must precede it before it
//! improves fitness when starting from the initial solution.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::problem::{Genotype, Orientation, Problem};
use crate::trace::ImprovementTrace;

/// Gene overwrites taken from the later of two genotypes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Modification {
    positions: Vec<usize>,
    values: Vec<u32>,
}

impl Modification {
    /// `positions` must be strictly increasing and match `values` in length.
    pub fn new(positions: Vec<usize>, values: Vec<u32>) -> Result<Self> {
        if positions.len() != values.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} positions but {} values",
                positions.len(),
                values.len()
            )));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec("modification positions must be strictly increasing".into()));
        }
        Ok(Self { positions, values })
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// `*`-masked rendering over `n` genes, e.g. `**01**`.
    pub fn render(&self, n: usize) -> String {
        let mut out = vec!['*'; n];
        for (&p, &v) in self.positions.iter().zip(&self.values) {
            out[p] = char::from_digit(v, 36).unwrap_or('?');
        }
        out.into_iter().collect()
    }
}

/// The genes where `cur` differs from `prev`, with `cur`'s alleles.
pub fn get_mod(cur: &Genotype, prev: &Genotype) -> Result<Modification> {
    if !cur.same_shape(prev) {
        return Err(Error::ShapeMismatch(format!(
            "genotypes of length {} and {}",
            cur.len(),
            prev.len()
        )));
    }
    let positions: Vec<usize> = (0..cur.len()).filter(|&i| cur.get(i) != prev.get(i)).collect();
    if positions.is_empty() {
        return Err(Error::IdenticalGenotypes);
    }
    let values = positions.iter().map(|&i| cur.get(i)).collect();
    Ok(Modification { positions, values })
}

/// Copy of `x` with the modification's genes overwritten.
pub fn apply_mod(x: &Genotype, m: &Modification) -> Result<Genotype> {
    let mut y = x.clone();
    for (&p, &v) in m.positions.iter().zip(&m.values) {
        if p >= x.len() {
            return Err(Error::IndexOutOfRange { index: p, len: x.len() });
        }
        if v >= x.alphabet()[p] {
            return Err(Error::ShapeMismatch(format!(
                "value {v} at gene {p} outside alphabet {}",
                x.alphabet()[p]
            )));
        }
        y.set(p, v);
    }
    Ok(y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HopEstimate {
    pub hops: usize,
    /// Fitness evaluations spent by the analysis.
    pub probes: u64,
}

/// Re-evaluates trace entries under a problem with a shared probe counter.
struct Analyzer<'a, P: ?Sized> {
    trace: &'a ImprovementTrace,
    problem: &'a P,
    orientation: Orientation,
    entry_fitness: Vec<Option<f64>>,
    probes: u64,
}

impl<'a, P: Problem + ?Sized> Analyzer<'a, P> {
    fn new(trace: &'a ImprovementTrace, problem: &'a P) -> Result<Self> {
        let alphabet = problem.alphabet();
        if let Some(e) = trace.entries().iter().find(|e| e.genotype.alphabet()[..] != alphabet[..]) {
            return Err(Error::ShapeMismatch(format!(
                "trace genotype of length {} does not match problem {}",
                e.genotype.len(),
                problem.name()
            )));
        }
        Ok(Self {
            trace,
            problem,
            orientation: problem.orientation(),
            entry_fitness: vec![None; trace.len()],
            probes: 0,
        })
    }

    fn fitness(&mut self, x: &Genotype) -> f64 {
        self.probes += 1;
        self.problem.fitness(x.genes())
    }

    fn entry(&mut self, i: usize) -> f64 {
        if let Some(f) = self.entry_fitness[i] {
            return f;
        }
        let f = self.fitness(&self.trace.entries()[i].genotype);
        self.entry_fitness[i] = Some(f);
        f
    }

    fn modification(&self, i: usize) -> Result<Modification> {
        let e = self.trace.entries();
        get_mod(&e[i].genotype, &e[i - 1].genotype)
    }

    /// Whether `m` strictly improves entry `i`.
    fn improves(&mut self, m: &Modification, i: usize) -> Result<bool> {
        let base = self.entry(i);
        let y = apply_mod(&self.trace.entries()[i].genotype, m)?;
        let f = self.fitness(&y);
        Ok(self.orientation.improves(f, base))
    }

    fn hops(&mut self, upto: usize) -> Result<usize> {
        if upto == 0 || upto >= self.trace.len() {
            return Err(Error::IndexOutOfRange {
                index: upto,
                len: self.trace.len(),
            });
        }
        let mut hops = 0;
        let mut cur = upto;
        while cur > 0 {
            let m = self.modification(cur)?;
            let mut last = cur - 1;
            while last > 0 && self.improves(&m, last - 1)? {
                last -= 1;
            }
            hops += 1;
            cur = last;
        }
        Ok(hops)
    }
}

/// Upper bound on the hop number of modification `upto` (1-based entry
/// index), walking the trace backwards.
///
/// From the current entry, the walk moves back while the current
/// modification still strictly improves the preceding entry; where it stops
/// a hop is counted and the walk continues with that entry's modification.
pub fn estimate_hops<P: Problem + ?Sized>(
    trace: &ImprovementTrace,
    problem: &P,
    upto: usize,
) -> Result<HopEstimate> {
    let mut a = Analyzer::new(trace, problem)?;
    let hops = a.hops(upto)?;
    Ok(HopEstimate { hops, probes: a.probes })
}

/// Number of histogram bins: hop values 1..=19 and one 20+ bucket.
pub const HISTOGRAM_BINS: usize = 20;

/// Per-modification hop counts and applicability to the initial solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopReport {
    hops: Vec<usize>,
    applicable: Vec<bool>,
    probes: Vec<u64>,
}

impl HopReport {
    pub fn from_parts(hops: Vec<usize>, applicable: Vec<bool>, probes: Vec<u64>) -> Result<Self> {
        if hops.len() != applicable.len() || hops.len() != probes.len() {
            return Err(Error::ShapeMismatch("hop report columns differ in length".into()));
        }
        if hops.contains(&0) {
            return Err(Error::InvalidSpec("hop counts start at 1".into()));
        }
        Ok(Self { hops, applicable, probes })
    }

    /// Hop counts for trace entries 1..=b.
    pub fn per_modification_hops(&self) -> &[usize] {
        &self.hops
    }

    pub fn applicable_to_initial(&self) -> &[bool] {
        &self.applicable
    }

    /// Analysis evaluations spent on each modification.
    pub fn analysis_ffe(&self) -> &[u64] {
        &self.probes
    }

    pub fn total_analysis_ffe(&self) -> u64 {
        self.probes.iter().sum()
    }

    pub fn modifications(&self) -> usize {
        self.hops.len()
    }

    pub fn not_applicable_count(&self) -> usize {
        self.applicable.iter().filter(|a| !**a).count()
    }

    pub fn not_applicable_pct(&self) -> f64 {
        if self.hops.is_empty() {
            return 0.0;
        }
        self.not_applicable_count() as f64 / self.hops.len() as f64 * 100.0
    }

    pub fn average_hops(&self) -> f64 {
        if self.hops.is_empty() {
            return 0.0;
        }
        self.hops.iter().sum::<usize>() as f64 / self.hops.len() as f64
    }

    pub fn max_hops(&self) -> usize {
        self.hops.iter().copied().max().unwrap_or(0)
    }

    /// Counts for hop values 1..=19 in slots 0..=18 and 20+ in slot 19.
    pub fn histogram(&self) -> [usize; HISTOGRAM_BINS] {
        let mut h = [0; HISTOGRAM_BINS];
        for &v in &self.hops {
            h[v.min(HISTOGRAM_BINS) - 1] += 1;
        }
        h
    }

    /// `index,hops,applicable_to_initial,analysis_ffe` rows followed by a
    /// `total` row holding the hop sum, the applicable count and the total
    /// analysis FFE.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,hops,applicable_to_initial,analysis_ffe\n");
        for (i, ((h, a), p)) in self.hops.iter().zip(&self.applicable).zip(&self.probes).enumerate() {
            writeln!(out, "{},{h},{a},{p}", i + 1).unwrap();
        }
        writeln!(
            out,
            "total,{},{},{}",
            self.hops.iter().sum::<usize>(),
            self.hops.len() - self.not_applicable_count(),
            self.total_analysis_ffe()
        )
        .unwrap();
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "index,hops,applicable_to_initial,analysis_ffe")) => {}
            _ => return Err(Error::parse(1, "missing hop report header")),
        }
        let (mut hops, mut applicable, mut probes) = (Vec::new(), Vec::new(), Vec::new());
        for (i, line) in lines {
            let lno = i + 1;
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(Error::parse(lno, "expected 4 columns"));
            }
            if f[0] == "total" {
                let report = Self::from_parts(hops, applicable, probes).map_err(|e| Error::parse(lno, e.to_string()))?;
                let sum: usize = f[1].parse().map_err(|_| Error::parse(lno, "bad hop sum"))?;
                if sum != report.hops.iter().sum::<usize>() {
                    return Err(Error::parse(lno, "hop sum does not match rows"));
                }
                return Ok(report);
            }
            if f[0].parse::<usize>().ok() != Some(hops.len() + 1) {
                return Err(Error::parse(lno, format!("expected index {}", hops.len() + 1)));
            }
            hops.push(f[1].parse().map_err(|_| Error::parse(lno, "bad hop count"))?);
            applicable.push(f[2].parse().map_err(|_| Error::parse(lno, "bad applicability flag"))?);
            probes.push(f[3].parse().map_err(|_| Error::parse(lno, "bad analysis ffe"))?);
        }
        Err(Error::parse(text.lines().count(), "missing total row"))
    }

    /// `bin,count` rows for bins `1`..`19` and `20+`.
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("bin,count\n");
        for (i, c) in self.histogram().iter().enumerate() {
            if i + 1 == HISTOGRAM_BINS {
                writeln!(out, "{HISTOGRAM_BINS}+,{c}").unwrap();
            } else {
                writeln!(out, "{},{c}", i + 1).unwrap();
            }
        }
        out
    }
}

/// Hop counts for every modification of `trace`, plus whether each
/// modification strictly improves the initial solution.
pub fn hop_report<P: Problem + ?Sized>(trace: &ImprovementTrace, problem: &P) -> Result<HopReport> {
    if trace.len() < 2 {
        return Err(Error::TraceTooShort(trace.len()));
    }
    let mut a = Analyzer::new(trace, problem)?;
    let b = trace.len() - 1;
    let (mut hops, mut applicable, mut probes) = (Vec::with_capacity(b), Vec::with_capacity(b), Vec::with_capacity(b));
    for i in 1..=b {
        let before = a.probes;
        hops.push(a.hops(i)?);
        let m = a.modification(i)?;
        applicable.push(a.improves(&m, 0)?);
        probes.push(a.probes - before);
    }
    HopReport::from_parts(hops, applicable, probes)
}
