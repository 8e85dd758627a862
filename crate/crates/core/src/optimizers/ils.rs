use std::collections::VecDeque;

use rand::seq::index::sample;
use rand::Rng;

use crate::linkage::{build_linkage_tree, mutual_information_dsm};
use crate::optimizers::fihc::fihc_from;
use crate::optimizers::{RunResult, Tracker};
use crate::problem::{EvaluationBudget, Evaluator, Genotype, Problem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlsConfig {
    /// Local optima kept for linkage learning; the oldest is evicted first.
    pub archive_cap: usize,
    /// Largest random mask used when linkage learning is unavailable
    /// (non-binary problems); mask sizes are uniform in `1..=max`.
    pub random_mask_max: usize,
}

impl Default for IlsConfig {
    fn default() -> Self {
        Self {
            archive_cap: 4096,
            random_mask_max: 4,
        }
    }
}

/// Iterated local search with linkage-tree perturbation masks.
///
/// Each iteration climbs a fresh random genotype into the archive, learns a
/// linkage tree from the archived local optima, then overwrites one tree
/// cluster of the incumbent with random alleles and climbs again, keeping
/// the result only on strict improvement. The incumbent is the best local
/// optimum seen; the trace follows it, starting with the single-gene steps
/// of the first climb. Non-binary problems perturb random gene sets.
pub fn ils_sll_run<P: Problem + ?Sized, R: Rng + ?Sized>(
    problem: &P,
    budget: EvaluationBudget,
    config: &IlsConfig,
    rng: &mut R,
) -> RunResult {
    let mut eval = Evaluator::new(problem, budget);
    let mut tracker = Tracker::new(&eval);
    let alphabet = problem.alphabet();
    let n = alphabet.len();
    let binary = problem.is_binary();
    let mut archive: VecDeque<Genotype> = VecDeque::new();
    let mut incumbent: Option<(Genotype, f64)> = None;

    while !eval.is_exhausted() && !tracker.reached_target() && n > 0 {
        let x = Genotype::random(alphabet.clone(), rng);
        let Ok(s) = eval.score(&x) else { break };
        let first = incumbent.is_none();
        if first {
            tracker.offer(&x, s, eval.used());
        }
        let (y, s) = fihc_from(x, s, &mut eval, rng, |y, s, ffe| {
            first && tracker.offer(y, s, ffe) && tracker.reached_target()
        });
        if eval.is_exhausted() || tracker.reached_target() {
            break;
        }
        if archive.len() == config.archive_cap.max(1) {
            archive.pop_front();
        }
        archive.push_back(y.clone());
        match &incumbent {
            Some((_, best)) if s <= *best => {}
            _ => {
                tracker.offer(&y, s, eval.used());
                incumbent = Some((y, s));
            }
        }

        let (base, base_score) = incumbent.clone().expect("set above");
        let mask = perturbation_mask(archive.make_contiguous(), binary, n, config, rng);
        let mut z = base;
        for &i in &mask {
            z.set(i, rng.gen_range(0..alphabet[i]));
        }
        let Ok(zs) = eval.score(&z) else { break };
        let (z, zs) = fihc_from(z, zs, &mut eval, rng, |_, _, _| false);
        if zs > base_score {
            tracker.offer(&z, zs, eval.used());
            incumbent = Some((z, zs));
        }
    }
    tracker.finish(&eval, rng)
}

fn perturbation_mask<R: Rng + ?Sized>(
    archive: &[Genotype],
    binary: bool,
    n: usize,
    config: &IlsConfig,
    rng: &mut R,
) -> Vec<usize> {
    if !binary {
        let size = rng.gen_range(1..=config.random_mask_max.clamp(1, n));
        return sample(rng, n, size).into_vec();
    }
    if archive.len() >= 2 {
        let dsm = mutual_information_dsm(archive).expect("archive of equal binary genotypes");
        let tree = build_linkage_tree(&dsm, rng);
        let internal = tree.internal_masks();
        if !internal.is_empty() {
            return internal[rng.gen_range(0..internal.len())].clone();
        }
    }
    vec![rng.gen_range(0..n)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::Benchmark;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bench(s: &str) -> Benchmark {
        Benchmark::from_spec(s).unwrap()
    }

    #[test]
    fn onemax_trace_follows_first_climb() {
        let p = bench("problem=onemax n=12");
        let r = ils_sll_run(&p, EvaluationBudget::with_ffe(1_000), &IlsConfig::default(), &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(r.best_fitness, 12.0);
        let e = r.trace.entries();
        assert!(e.windows(2).all(|w| w[1].fitness > w[0].fitness));
        // every step of the first climb is a single flip
        assert!(e.windows(2).all(|w| {
            w[0].genotype.genes().iter().zip(w[1].genotype.genes()).filter(|(a, b)| a != b).count() == 1
        }));
    }

    #[test]
    fn solves_small_trap_concatenation() {
        let p = bench("problem=concat fn=deceptive n=24 k=4");
        let r = ils_sll_run(&p, EvaluationBudget::with_ffe(400_000), &IlsConfig::default(), &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(r.best_fitness, 24.0);
    }

    #[test]
    fn deterministic_and_budgeted() {
        let p = bench("problem=concat fn=deceptive n=40 k=8");
        let run = || ils_sll_run(&p, EvaluationBudget::with_ffe(5_000), &IlsConfig::default(), &mut ChaCha8Rng::seed_from_u64(8));
        let (a, b) = (run(), run());
        assert_eq!(a.trace, b.trace);
        assert!(a.ffe_used <= 5_000);
    }

    #[test]
    fn tiny_archive_falls_back_to_single_gene() {
        let archive = [Genotype::from_bitstring("0101").unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let m = perturbation_mask(&archive, true, 4, &IlsConfig::default(), &mut rng);
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn zero_budget() {
        let p = bench("problem=onemax n=5");
        let r = ils_sll_run(&p, EvaluationBudget::with_ffe(0), &IlsConfig::default(), &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.ffe_used, 0);
    }
}
