//! Shared fixtures for the criterion benches.

use hoplab_core::benchmarks::Benchmark;
use hoplab_core::optimizers::{ils_sll_run, IlsConfig};
use hoplab_core::problem::binary_alphabet;
use hoplab_core::{EvaluationBudget, Genotype, ImprovementTrace, Problem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn benchmark(spec: &str) -> Benchmark {
    Benchmark::from_spec(spec).expect("valid benchmark spec")
}

/// `size` uniformly random binary genotypes of length `n`.
pub fn population(n: usize, size: usize, seed: u64) -> Vec<Genotype> {
    let mut r = rng(seed);
    (0..size).map(|_| Genotype::random(binary_alphabet(n), &mut r)).collect()
}

/// An ILS trace on `problem`, long enough to exercise hop analysis.
pub fn ils_trace<P: Problem>(problem: &P, ffe: u64, seed: u64) -> ImprovementTrace {
    ils_sll_run(problem, EvaluationBudget::with_ffe(ffe), &IlsConfig::default(), &mut rng(seed)).trace
}
