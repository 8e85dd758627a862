use rand::seq::{index::sample, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linkage::{build_linkage_tree, dled_dsm, mutual_information_dsm, DependencyLedger, DependencyMatrix, LinkageTree};
use crate::optimizers::fihc::fihc_from;
use crate::optimizers::{RunResult, Tracker};
use crate::problem::{EvaluationBudget, Evaluator, Genotype, Problem};

pub const DEFAULT_BASE_SIZE: usize = 16;
pub const DEFAULT_GENERATION_RATIO: u64 = 4;

/// Genotypes with their current scores (larger is better).
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    members: Vec<Genotype>,
    scores: Vec<f64>,
}

impl Population {
    pub fn new(members: Vec<Genotype>, scores: Vec<f64>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyPopulation);
        }
        if members.len() != scores.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} members but {} scores",
                members.len(),
                scores.len()
            )));
        }
        Ok(Self { members, scores })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Genotype] {
        &self.members
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn best_index(&self) -> usize {
        (0..self.len())
            .reduce(|b, i| if self.scores[i] > self.scores[b] { i } else { b })
            .expect("non-empty")
    }

    pub fn average(&self) -> f64 {
        self.scores.iter().sum::<f64>() / self.len() as f64
    }

    pub fn all_identical(&self) -> bool {
        self.members.iter().all(|m| m == &self.members[0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduleSlot {
    pub size: usize,
    pub generations: u64,
    pub alive: bool,
}

/// Interleaved multistart over doubling population sizes.
///
/// On tick `t` every population `i` with `t % ratio^i == 0` runs one
/// generation, smallest first, so population `i + 1` runs once per `ratio`
/// generations of population `i`. A population is created the first time
/// it is due.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopulationSchedule {
    base_size: usize,
    generation_ratio: u64,
    slots: Vec<ScheduleSlot>,
    tick: u64,
}

impl PopulationSchedule {
    pub fn new(base_size: usize, generation_ratio: u64) -> Result<Self> {
        if base_size == 0 || generation_ratio < 2 {
            return Err(Error::InvalidSpec(format!(
                "population schedule needs base >= 1 and ratio >= 2, got {base_size} and {generation_ratio}"
            )));
        }
        Ok(Self {
            base_size,
            generation_ratio,
            slots: Vec::new(),
            tick: 0,
        })
    }

    pub fn slots(&self) -> &[ScheduleSlot] {
        &self.slots
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn generation_ratio(&self) -> u64 {
        self.generation_ratio
    }

    fn period(&self, i: usize) -> u64 {
        self.generation_ratio.saturating_pow(i as u32)
    }

    /// Populations due on the next tick with a pending generation, creating
    /// a slot for a newly due size. Ticks where nothing alive is due are
    /// skipped.
    pub fn next_due(&mut self) -> Vec<usize> {
        let first_live = (0..self.slots.len())
            .find(|&i| self.slots[i].alive)
            .unwrap_or(self.slots.len());
        let step = self.period(first_live);
        self.tick = (self.tick / step + 1) * step;
        let mut due = Vec::new();
        let mut i = 0;
        while self.tick.is_multiple_of(self.period(i)) {
            if i == self.slots.len() {
                self.slots.push(ScheduleSlot {
                    size: self.base_size << i,
                    generations: 0,
                    alive: true,
                });
                due.push(i);
                break;
            }
            if self.slots[i].alive {
                due.push(i);
            }
            i += 1;
        }
        due
    }

    pub fn record_generation(&mut self, i: usize) {
        self.slots[i].generations += 1;
    }

    /// Terminates population `i`; a dead population never runs again.
    pub fn kill(&mut self, i: usize) {
        self.slots[i].alive = false;
    }
}

/// Copies `mask` genes from `donor` into `source` and keeps the change iff
/// the score did not decrease. Costs one FFE, or none when the masked genes
/// already agree. Returns whether `source` changed.
pub fn optimal_mixing<P: Problem + ?Sized>(
    source: &mut Genotype,
    score: &mut f64,
    donor: &Genotype,
    mask: &[usize],
    eval: &mut Evaluator<'_, P>,
) -> Result<bool> {
    if mask.is_empty() {
        return Err(Error::InvalidSpec("empty mixing mask".into()));
    }
    if !source.same_shape(donor) {
        return Err(Error::ShapeMismatch("source and donor differ in shape".into()));
    }
    if mask.iter().all(|&i| source.get(i) == donor.get(i)) {
        return Ok(false);
    }
    let backup: Vec<u32> = mask.iter().map(|&i| source.get(i)).collect();
    for &i in mask {
        source.set(i, donor.get(i));
    }
    match eval.score(source) {
        Ok(s) if s >= *score => {
            *score = s;
            Ok(true)
        }
        outcome => {
            for (&i, &v) in mask.iter().zip(&backup) {
                source.set(i, v);
            }
            outcome.map(|_| false)
        }
    }
}

/// One generation of gene-pool Optimal Mixing.
///
/// Every member in turn mixes with donors drawn uniformly from the other
/// members of the population as it was when the generation started; mixing
/// masks are the tree's clusters except the root, in a fresh random order
/// per member. `observe` sees every kept change and stops the generation by
/// returning `true`. On budget exhaustion the partial generation is kept
/// and the error is returned.
pub fn gom_generation<P, R, F>(
    pop: &mut Population,
    tree: &LinkageTree,
    eval: &mut Evaluator<'_, P>,
    rng: &mut R,
    mut observe: F,
) -> Result<()>
where
    P: Problem + ?Sized,
    R: Rng + ?Sized,
    F: FnMut(&Genotype, f64, u64) -> bool,
{
    let size = pop.len();
    if size < 2 {
        return Ok(());
    }
    let snapshot = pop.members.clone();
    let masks = tree.mixing_masks();
    let mut order: Vec<usize> = (0..masks.len()).collect();
    for i in 0..size {
        order.shuffle(rng);
        for &m in &order {
            let mut d = rng.gen_range(0..size - 1);
            if d >= i {
                d += 1;
            }
            let Population { members, scores } = pop;
            let kept = optimal_mixing(&mut members[i], &mut scores[i], &snapshot[d], &masks[m], eval)?;
            if kept && observe(&members[i], scores[i], eval.used()) {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Source of the per-generation dependency matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkageBackend {
    /// Mutual information of the population.
    Sll,
    /// DLED-verified pairs as a 0/1 matrix.
    Dled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtGomeaConfig {
    pub backend: LinkageBackend,
    pub base_size: usize,
    pub generation_ratio: u64,
    /// Climb every initial member with FIHC.
    pub local_search_init: bool,
}

impl LtGomeaConfig {
    pub fn new(backend: LinkageBackend) -> Self {
        Self {
            backend,
            base_size: DEFAULT_BASE_SIZE,
            generation_ratio: DEFAULT_GENERATION_RATIO,
            local_search_init: false,
        }
    }
}

/// LT-GOMEA with interleaved multistart population sizing.
///
/// Runs until the budget is spent or the known optimum is found; with an
/// unlimited budget and no known optimum it does not return.
pub fn ltgomea_run<P: Problem + ?Sized, R: Rng + ?Sized>(
    problem: &P,
    budget: EvaluationBudget,
    config: &LtGomeaConfig,
    rng: &mut R,
) -> Result<RunResult> {
    let n = problem.len();
    match config.backend {
        LinkageBackend::Sll => ltgomea_run_with(problem, budget, config, rng, |pop, _, _| {
            mutual_information_dsm(pop.members())
        }),
        LinkageBackend::Dled => {
            let mut ledger = DependencyLedger::new(n);
            ltgomea_run_with(problem, budget, config, rng, move |pop, eval, rng| {
                let best = pop.best_index();
                let others: Vec<usize> = (0..pop.len()).filter(|&i| i != best).collect();
                let mut probes = vec![pop.members()[best].clone()];
                for j in sample(rng, others.len(), others.len().min(3)).iter() {
                    probes.push(pop.members()[others[j]].clone());
                }
                dled_dsm(&mut ledger, &probes, eval, Some(2 * n as u64))
            })
        }
    }
}

/// LT-GOMEA with a caller-supplied dependency matrix per generation;
/// `config.backend` is ignored.
///
/// `model` receives the population about to run a generation; evaluations
/// it spends count against the run budget.
pub fn ltgomea_run_with<P, R, M>(
    problem: &P,
    budget: EvaluationBudget,
    config: &LtGomeaConfig,
    rng: &mut R,
    mut model: M,
) -> Result<RunResult>
where
    P: Problem + ?Sized,
    R: Rng + ?Sized,
    M: FnMut(&Population, &mut Evaluator<'_, P>, &mut R) -> Result<DependencyMatrix>,
{
    if !problem.is_binary() {
        return Err(Error::Unsupported("LT-GOMEA needs a binary problem".into()));
    }
    let mut eval = Evaluator::new(problem, budget);
    let mut tracker = Tracker::new(&eval);
    let mut schedule = PopulationSchedule::new(config.base_size, config.generation_ratio)?;
    let mut pops: Vec<Population> = Vec::new();

    'run: while !eval.is_exhausted() && !tracker.reached_target() {
        for i in schedule.next_due() {
            if i == pops.len() {
                let size = schedule.slots()[i].size;
                match init_population(size, config.local_search_init, &mut eval, rng, &mut tracker) {
                    Some(p) => pops.push(p),
                    None => break 'run,
                }
            }
            let dsm = match model(&pops[i], &mut eval, rng) {
                Ok(d) => d,
                Err(Error::BudgetExhausted) => break 'run,
                Err(e) => return Err(e),
            };
            let tree = build_linkage_tree(&dsm, rng);
            let mixed = gom_generation(&mut pops[i], &tree, &mut eval, rng, |x, s, ffe| {
                tracker.offer(x, s, ffe);
                tracker.reached_target()
            });
            match mixed {
                Ok(()) => {}
                Err(Error::BudgetExhausted) => break 'run,
                Err(e) => return Err(e),
            }
            if tracker.reached_target() {
                break 'run;
            }
            schedule.record_generation(i);
            terminate_populations(&mut schedule, &pops);
        }
    }
    Ok(tracker.finish(&eval, rng))
}

fn init_population<P: Problem + ?Sized, R: Rng + ?Sized>(
    size: usize,
    local_search: bool,
    eval: &mut Evaluator<'_, P>,
    rng: &mut R,
    tracker: &mut Tracker,
) -> Option<Population> {
    let alphabet = eval.problem().alphabet();
    let mut members = Vec::with_capacity(size);
    let mut scores = Vec::with_capacity(size);
    for _ in 0..size {
        let mut x = Genotype::random(alphabet.clone(), rng);
        let mut s = eval.score(&x).ok()?;
        tracker.offer(&x, s, eval.used());
        if local_search {
            (x, s) = fihc_from(x, s, eval, rng, |y, s, ffe| {
                tracker.offer(y, s, ffe);
                tracker.reached_target()
            });
        }
        if eval.is_exhausted() || tracker.reached_target() {
            return None;
        }
        members.push(x);
        scores.push(s);
    }
    Some(Population { members, scores })
}

/// Kills populations outperformed on average by a larger live population
/// and populations whose members all share one fitness value.
fn terminate_populations(schedule: &mut PopulationSchedule, pops: &[Population]) {
    for (i, p) in pops.iter().enumerate() {
        if !schedule.slots()[i].alive {
            continue;
        }
        let outperformed = (i + 1..pops.len())
            .any(|j| schedule.slots()[j].alive && pops[j].average() > p.average());
        if outperformed || p.scores().iter().all(|&s| s == p.scores()[0]) {
            schedule.kill(i);
        }
    }
}
