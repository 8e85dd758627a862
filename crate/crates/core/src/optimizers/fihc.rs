use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::optimizers::{RunResult, Tracker};
use crate::problem::{EvaluationBudget, Evaluator, Genotype, Problem};

/// First-improvement hillclimber from `x`, whose score is already known.
///
/// Sweeps genes in a fresh random order; each gene tries its alternative
/// alleles in random order and keeps the first strict improvement. Stops
/// after a sweep without improvement, when the budget runs out, or when
/// `observe` (called on every improvement) returns `true`.
pub fn fihc_from<P, R, F>(
    mut x: Genotype,
    mut score: f64,
    eval: &mut Evaluator<'_, P>,
    rng: &mut R,
    mut observe: F,
) -> (Genotype, f64)
where
    P: Problem + ?Sized,
    R: Rng + ?Sized,
    F: FnMut(&Genotype, f64, u64) -> bool,
{
    let alphabet = x.alphabet().clone();
    let mut order: Vec<usize> = (0..x.len()).collect();
    let mut alts: Vec<u32> = Vec::new();
    loop {
        order.shuffle(rng);
        let mut improved = false;
        for &i in &order {
            let orig = x.get(i);
            alts.clear();
            alts.extend((0..alphabet[i]).filter(|&v| v != orig));
            if alts.len() > 1 {
                alts.shuffle(rng);
            }
            for &v in &alts {
                x.set(i, v);
                match eval.score(&x) {
                    Ok(s) if s > score => {
                        score = s;
                        improved = true;
                        if observe(&x, s, eval.used()) {
                            return (x, score);
                        }
                        break;
                    }
                    Ok(_) => x.set(i, orig),
                    Err(_) => {
                        x.set(i, orig);
                        return (x, score);
                    }
                }
            }
        }
        if !improved {
            return (x, score);
        }
    }
}

/// Evaluates `x` and climbs to a 1-gene local optimum.
///
/// Fails only when the budget cannot pay for evaluating `x` itself; later
/// exhaustion returns the best genotype reached.
pub fn fihc<P: Problem + ?Sized, R: Rng + ?Sized>(
    x: &Genotype,
    eval: &mut Evaluator<'_, P>,
    rng: &mut R,
) -> Result<(Genotype, f64)> {
    let score = eval.score(x)?;
    Ok(fihc_from(x.clone(), score, eval, rng, |_, _, _| false))
}

/// Restarts FIHC from uniformly random genotypes until the budget is spent
/// or the known optimum is found.
pub fn fihc_restart_run<P: Problem + ?Sized, R: Rng + ?Sized>(
    problem: &P,
    budget: EvaluationBudget,
    rng: &mut R,
) -> RunResult {
    let mut eval = Evaluator::new(problem, budget);
    let mut tracker = Tracker::new(&eval);
    while !eval.is_exhausted() && !tracker.reached_target() {
        let x = Genotype::random(problem.alphabet(), rng);
        let Ok(score) = eval.score(&x) else { break };
        tracker.offer(&x, score, eval.used());
        fihc_from(x, score, &mut eval, rng, |y, s, ffe| {
            tracker.offer(y, s, ffe);
            tracker.reached_target()
        });
    }
    tracker.finish(&eval, rng)
}
