//! Improvement traces: the ordered best-so-far history of one optimizer run.
//!
//! Text format, one record per line:
//!
//! ```text
//! n=<n> orientation=<max|min>
//! <ffe> <fitness> <gene_0> <gene_1> ... <gene_{n-1}>
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::problem::{FitnessValue, Genotype, Orientation};

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub genotype: Genotype,
    pub fitness: f64,
    pub ffe: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImprovementTrace {
    problem_id: String,
    orientation: Orientation,
    entries: Vec<TraceEntry>,
}

impl ImprovementTrace {
    pub fn new(problem_id: impl Into<String>, orientation: Orientation) -> Self {
        Self {
            problem_id: problem_id.into(),
            orientation,
            entries: Vec::new(),
        }
    }

    /// Builds a trace from an ordered genotype sequence, checking every
    /// invariant on the way.
    pub fn from_entries(
        problem_id: impl Into<String>,
        orientation: Orientation,
        entries: impl IntoIterator<Item = (Genotype, f64, u64)>,
    ) -> Result<Self> {
        let mut trace = Self::new(problem_id, orientation);
        for (g, f, ffe) in entries {
            trace.record_improvement(g, FitnessValue::new(f, orientation), ffe)?;
        }
        Ok(trace)
    }

    pub fn problem_id(&self) -> &str {
        &self.problem_id
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn entries(&self) -> &[TraceEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn last(&self) -> Option<&TraceEntry> {
        self.entries.last()
    }

    /// Number of modifications, i.e. entries after the initial one.
    pub fn modifications(&self) -> usize {
        self.entries.len().saturating_sub(1)
    }

    /// Appends `x`; the first append is the initial solution, every later one
    /// must strictly improve on the last entry.
    pub fn record_improvement(&mut self, x: Genotype, f: FitnessValue, ffe: u64) -> Result<()> {
        if f.orientation != self.orientation {
            return Err(Error::ShapeMismatch("fitness orientation differs from trace".into()));
        }
        if let Some(last) = self.entries.last() {
            if !last.genotype.same_shape(&x) {
                return Err(Error::ShapeMismatch(format!(
                    "genotype of length {} appended to trace of length {}",
                    x.len(),
                    last.genotype.len()
                )));
            }
            if !self.orientation.improves(f.value, last.fitness) {
                return Err(Error::NonImproving {
                    last: last.fitness,
                    new: f.value,
                });
            }
        }
        self.entries.push(TraceEntry {
            genotype: x,
            fitness: f.value,
            ffe,
        });
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let n = self.entries.first().map_or(0, |e| e.genotype.len());
        let mut out = format!("n={n} orientation={}\n", self.orientation.as_str());
        for e in &self.entries {
            write!(out, "{} {}", e.ffe, e.fitness).unwrap();
            for g in e.genotype.genes() {
                write!(out, " {g}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text format. Gene values are validated against `alphabet`.
    pub fn parse(
        text: &str,
        problem_id: impl Into<String>,
        alphabet: Arc<[u32]>,
    ) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let mut n = None;
        let mut orientation = None;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("n", v)) => {
                    n = Some(v.parse::<usize>().map_err(|e| Error::parse(hline, e.to_string()))?)
                }
                Some(("orientation", v)) => {
                    orientation = Some(
                        Orientation::parse(v)
                            .ok_or_else(|| Error::parse(hline, format!("bad orientation {v:?}")))?,
                    )
                }
                _ => return Err(Error::parse(hline, format!("unexpected header field {field:?}"))),
            }
        }
        let n = n.ok_or_else(|| Error::parse(hline, "header lacks n="))?;
        let orientation = orientation.ok_or_else(|| Error::parse(hline, "header lacks orientation="))?;
        // n=0 is written for an empty trace
        if n != 0 && n != alphabet.len() {
            return Err(Error::parse(
                hline,
                format!("trace has n={n}, problem has {} genes", alphabet.len()),
            ));
        }
        let mut trace = Self::new(problem_id, orientation);
        for (lno, line) in lines {
            let mut fields = line.split_whitespace();
            let ffe: u64 = fields
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::parse(lno, "bad ffe field"))?;
            let fitness: f64 = fields
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::parse(lno, "bad fitness field"))?;
            let genes = fields
                .map(|s| s.parse::<u32>().map_err(|e| Error::parse(lno, e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            let g = Genotype::new(genes, alphabet.clone()).map_err(|e| Error::parse(lno, e.to_string()))?;
            trace
                .record_improvement(g, FitnessValue::new(fitness, orientation), ffe)
                .map_err(|e| Error::parse(lno, e.to_string()))?;
        }
        Ok(trace)
    }
}
