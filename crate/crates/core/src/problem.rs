//! Problem abstraction shared by every optimizer and analysis.
//!
//! A [`Problem`] maps a [`Genotype`] to a real fitness in its native
//! orientation. Optimizers never look at the orientation directly: they work
//! on *scores*, which are fitness values flipped so that larger is always
//! better (see [`Orientation::to_score`]).

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use crate::error::{Error, Result};

/// Fixed-length vector of gene values over per-position finite alphabets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Genotype {
    genes: Vec<u32>,
    alphabet: Arc<[u32]>,
}

impl Genotype {
    pub fn new(genes: Vec<u32>, alphabet: Arc<[u32]>) -> Result<Self> {
        if genes.len() != alphabet.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} genes for {} alphabet positions",
                genes.len(),
                alphabet.len()
            )));
        }
        if let Some(i) = (0..genes.len()).find(|&i| genes[i] >= alphabet[i]) {
            return Err(Error::ShapeMismatch(format!(
                "gene {i} has value {} but alphabet size {}",
                genes[i], alphabet[i]
            )));
        }
        Ok(Self { genes, alphabet })
    }

    /// Binary genotype from 0/1 values.
    pub fn binary(bits: &[u32]) -> Result<Self> {
        Self::new(bits.to_vec(), binary_alphabet(bits.len()))
    }

    /// Binary genotype from a string of `0`/`1` characters; whitespace is ignored.
    pub fn from_bitstring(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::ShapeMismatch(format!("not a bit: {other:?}"))),
            })
            .collect::<Result<Vec<u32>>>()?;
        Self::binary(&bits)
    }

    pub fn zeros(alphabet: Arc<[u32]>) -> Self {
        Self {
            genes: vec![0; alphabet.len()],
            alphabet,
        }
    }

    pub fn random<R: Rng + ?Sized>(alphabet: Arc<[u32]>, rng: &mut R) -> Self {
        let genes = alphabet.iter().map(|&a| rng.gen_range(0..a)).collect();
        Self { genes, alphabet }
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn genes(&self) -> &[u32] {
        &self.genes
    }

    pub fn alphabet(&self) -> &Arc<[u32]> {
        &self.alphabet
    }

    pub fn get(&self, i: usize) -> u32 {
        self.genes[i]
    }

    /// Overwrites gene `i`.
    ///
    /// Panics if `value` is outside the alphabet of position `i`.
    pub fn set(&mut self, i: usize, value: u32) {
        assert!(
            value < self.alphabet[i],
            "gene {i}: value {value} outside alphabet {}",
            self.alphabet[i]
        );
        self.genes[i] = value;
    }

    /// Flips a binary gene.
    pub fn flip(&mut self, i: usize) {
        debug_assert_eq!(self.alphabet[i], 2);
        self.genes[i] ^= 1;
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut g = self.clone();
        g.flip(i);
        g
    }

    pub fn is_binary(&self) -> bool {
        self.alphabet.iter().all(|&a| a == 2)
    }

    pub fn unitation(&self) -> usize {
        self.genes.iter().filter(|&&g| g != 0).count()
    }

    pub fn same_shape(&self, other: &Genotype) -> bool {
        Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet
    }
}

impl fmt::Debug for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_binary() {
            let s: String = self.genes.iter().map(|&g| if g == 0 { '0' } else { '1' }).collect();
            write!(f, "Genotype({s})")
        } else {
            write!(f, "Genotype({:?})", self.genes)
        }
    }
}

pub fn binary_alphabet(n: usize) -> Arc<[u32]> {
    vec![2u32; n].into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Maximize,
    Minimize,
}

impl Orientation {
    /// Strict improvement of `candidate` over `incumbent`.
    pub fn improves(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Orientation::Maximize => candidate > incumbent,
            Orientation::Minimize => candidate < incumbent,
        }
    }

    /// Maps a native fitness onto the larger-is-better score scale.
    pub fn to_score(self, value: f64) -> f64 {
        match self {
            Orientation::Maximize => value,
            Orientation::Minimize => -value,
        }
    }

    pub fn from_score(self, score: f64) -> f64 {
        self.to_score(score)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Maximize => "max",
            Orientation::Minimize => "min",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "max" => Some(Orientation::Maximize),
            "min" => Some(Orientation::Minimize),
            _ => None,
        }
    }
}

/// A fitness value tagged with its orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitnessValue {
    pub value: f64,
    pub orientation: Orientation,
}

impl FitnessValue {
    pub fn new(value: f64, orientation: Orientation) -> Self {
        Self { value, orientation }
    }

    pub fn improves_on(&self, other: &FitnessValue) -> bool {
        debug_assert_eq!(self.orientation, other.orientation);
        self.orientation.improves(self.value, other.value)
    }

    pub fn score(&self) -> f64 {
        self.orientation.to_score(self.value)
    }
}

/// A fitness landscape over genotypes with a fixed alphabet layout.
///
/// Implementations must be pure: the same genes always give the same value.
pub trait Problem: Send + Sync {
    /// Per-position alphabet sizes.
    fn alphabet(&self) -> Arc<[u32]>;

    /// Fitness of `genes` in the problem's native orientation.
    ///
    /// Callers guarantee `genes` matches [`Problem::alphabet`]; use
    /// [`evaluate`] for checked, budgeted access.
    fn fitness(&self, genes: &[u32]) -> f64;

    fn orientation(&self) -> Orientation {
        Orientation::Maximize
    }

    /// Global optimum in native orientation, when known.
    fn known_optimum(&self) -> Option<f64> {
        None
    }

    fn name(&self) -> String;

    fn len(&self) -> usize {
        self.alphabet().len()
    }

    fn is_binary(&self) -> bool {
        self.alphabet().iter().all(|&a| a == 2)
    }
}

impl<P: Problem + ?Sized> Problem for &P {
    fn alphabet(&self) -> Arc<[u32]> {
        (**self).alphabet()
    }
    fn fitness(&self, genes: &[u32]) -> f64 {
        (**self).fitness(genes)
    }
    fn orientation(&self) -> Orientation {
        (**self).orientation()
    }
    fn known_optimum(&self) -> Option<f64> {
        (**self).known_optimum()
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

impl<P: Problem + ?Sized> Problem for Box<P> {
    fn alphabet(&self) -> Arc<[u32]> {
        (**self).alphabet()
    }
    fn fitness(&self, genes: &[u32]) -> f64 {
        (**self).fitness(genes)
    }
    fn orientation(&self) -> Orientation {
        (**self).orientation()
    }
    fn known_optimum(&self) -> Option<f64> {
        (**self).known_optimum()
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

/// Counts fitness evaluations and enforces optional FFE / wall-clock limits.
#[derive(Debug, Clone)]
pub struct EvaluationBudget {
    used: u64,
    ffe_limit: Option<u64>,
    wall_clock_limit: Option<Duration>,
    started: Instant,
}

impl EvaluationBudget {
    pub fn new(ffe_limit: Option<u64>, wall_clock_limit: Option<Duration>) -> Self {
        Self {
            used: 0,
            ffe_limit,
            wall_clock_limit,
            started: Instant::now(),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(None, None)
    }

    pub fn with_ffe(limit: u64) -> Self {
        Self::new(Some(limit), None)
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn ffe_limit(&self) -> Option<u64> {
        self.ffe_limit
    }

    pub fn remaining(&self) -> Option<u64> {
        self.ffe_limit.map(|l| l.saturating_sub(self.used))
    }

    pub fn is_exhausted(&self) -> bool {
        if self.ffe_limit.is_some_and(|l| self.used >= l) {
            return true;
        }
        self.wall_clock_limit
            .is_some_and(|limit| self.started.elapsed() >= limit)
    }

    /// Reserves one evaluation. Limits are only checked here, between
    /// evaluations.
    pub fn consume(&mut self) -> Result<()> {
        if self.is_exhausted() {
            return Err(Error::BudgetExhausted);
        }
        self.used += 1;
        Ok(())
    }
}

/// Checked, budgeted evaluation of `x`.
pub fn evaluate<P: Problem + ?Sized>(
    problem: &P,
    x: &Genotype,
    budget: &mut EvaluationBudget,
) -> Result<FitnessValue> {
    let alphabet = problem.alphabet();
    if x.alphabet()[..] != alphabet[..] {
        return Err(Error::ShapeMismatch(format!(
            "genotype of length {} does not match problem {} of length {}",
            x.len(),
            problem.name(),
            alphabet.len()
        )));
    }
    budget.consume()?;
    Ok(FitnessValue::new(problem.fitness(x.genes()), problem.orientation()))
}

/// Budgeted scoring front-end used inside optimizers.
///
/// Scores are larger-is-better regardless of the problem's orientation.
pub struct Evaluator<'p, P: ?Sized> {
    problem: &'p P,
    budget: EvaluationBudget,
    orientation: Orientation,
}

impl<'p, P: Problem + ?Sized> Evaluator<'p, P> {
    pub fn new(problem: &'p P, budget: EvaluationBudget) -> Self {
        let orientation = problem.orientation();
        Self {
            problem,
            budget,
            orientation,
        }
    }

    pub fn problem(&self) -> &'p P {
        self.problem
    }

    pub fn score(&mut self, x: &Genotype) -> Result<f64> {
        debug_assert_eq!(x.len(), self.problem.len());
        self.budget.consume()?;
        Ok(self.orientation.to_score(self.problem.fitness(x.genes())))
    }

    pub fn budget(&self) -> &EvaluationBudget {
        &self.budget
    }

    pub fn used(&self) -> u64 {
        self.budget.used()
    }

    pub fn is_exhausted(&self) -> bool {
        self.budget.is_exhausted()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Score of the known optimum, if any.
    pub fn target_score(&self) -> Option<f64> {
        self.problem
            .known_optimum()
            .map(|v| self.orientation.to_score(v))
    }

    pub fn into_budget(self) -> EvaluationBudget {
        self.budget
    }
}
