//! Optimizers producing improvement traces: FIHC, LT-GOMEA and ILS-SLL.
//!
//! All optimizers work on scores (larger is better) through an
//! [`Evaluator`]; traces store native fitness values.

mod fihc;
mod gomea;
mod ils;

use rand::Rng;

pub use fihc::{fihc, fihc_from, fihc_restart_run};
pub use gomea::{
    gom_generation, ltgomea_run, ltgomea_run_with, optimal_mixing, LinkageBackend, LtGomeaConfig, Population,
    PopulationSchedule, ScheduleSlot, DEFAULT_BASE_SIZE, DEFAULT_GENERATION_RATIO,
};
pub use ils::{ils_sll_run, IlsConfig};

use crate::problem::{Evaluator, FitnessValue, Genotype, Orientation, Problem};
use crate::trace::ImprovementTrace;

/// Outcome of one optimizer run.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub best: Genotype,
    /// Native-orientation fitness of `best`.
    pub best_fitness: f64,
    pub trace: ImprovementTrace,
    pub ffe_used: u64,
    /// FFE count at which the known optimum was first reached.
    pub ffe_to_optimum: Option<u64>,
}

/// Keeps the best-so-far solution and its improvement trace.
#[derive(Debug, Clone)]
pub struct Tracker {
    orientation: Orientation,
    best: Option<(Genotype, f64)>,
    trace: ImprovementTrace,
    target: Option<f64>,
    hit: Option<u64>,
}

impl Tracker {
    pub fn new<P: Problem + ?Sized>(eval: &Evaluator<'_, P>) -> Self {
        let orientation = eval.orientation();
        Self {
            orientation,
            best: None,
            trace: ImprovementTrace::new(eval.problem().name(), orientation),
            target: eval.target_score(),
            hit: None,
        }
    }

    /// Records `x` if its score strictly beats the best so far.
    pub fn offer(&mut self, x: &Genotype, score: f64, ffe: u64) -> bool {
        if self.best.as_ref().is_some_and(|(_, b)| score <= *b) {
            return false;
        }
        self.best = Some((x.clone(), score));
        self.trace
            .record_improvement(
                x.clone(),
                FitnessValue::new(self.orientation.from_score(score), self.orientation),
                ffe,
            )
            .expect("strictly improving entry");
        if self.hit.is_none() && self.target.is_some_and(|t| score >= t) {
            self.hit = Some(ffe);
        }
        true
    }

    pub fn best_score(&self) -> Option<f64> {
        self.best.as_ref().map(|(_, s)| *s)
    }

    pub fn reached_target(&self) -> bool {
        self.hit.is_some()
    }

    /// Finishes the run. Without any evaluation the trace holds one random
    /// genotype scored outside the budget, with ffe 0.
    pub fn finish<P: Problem + ?Sized, R: Rng + ?Sized>(
        mut self,
        eval: &Evaluator<'_, P>,
        rng: &mut R,
    ) -> RunResult {
        if self.best.is_none() {
            let problem = eval.problem();
            let x = Genotype::random(problem.alphabet(), rng);
            let score = self.orientation.to_score(problem.fitness(x.genes()));
            self.offer(&x, score, 0);
        }
        let (best, score) = self.best.expect("initialized above");
        RunResult {
            best,
            best_fitness: self.orientation.from_score(score),
            trace: self.trace,
            ffe_used: eval.used(),
            ffe_to_optimum: self.hit,
        }
    }
}
