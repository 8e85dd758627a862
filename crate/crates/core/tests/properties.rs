use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use hoplab_core::benchmarks::{
    concat_eval, enable_flags, lbp_eval, Benchmark, BlockFunction, ConcatSpec, LeadingBlocksSpec, Variant,
};
use hoplab_core::hops::{apply_mod, estimate_hops, get_mod, hop_report};
use hoplab_core::linkage::{build_linkage_tree, dled_check, mutual_information_dsm, Dependency};
use hoplab_core::optimizers::{
    fihc_restart_run, ils_sll_run, ltgomea_run, optimal_mixing, IlsConfig, LinkageBackend, LtGomeaConfig,
};
use hoplab_core::wpflf::{
    flow_from_solution, generate_instance, is_feasible, lfl, ln_in, ln_out, Demand, FlowVector, GeneratorConfig,
    Link, NetworkInstance, WpLflProblem, WpLflSolution,
};
use hoplab_core::{EvaluationBudget, Evaluator, Genotype, ImprovementTrace, Orientation, Problem};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn genotype(bits: &[bool]) -> Genotype {
    Genotype::binary(&bits.iter().map(|&b| b as u32).collect::<Vec<_>>()).unwrap()
}

/// Counts every fitness call.
struct Counting<P> {
    inner: P,
    calls: AtomicU64,
}

impl<P: Problem> Problem for Counting<P> {
    fn alphabet(&self) -> Arc<[u32]> {
        self.inner.alphabet()
    }
    fn fitness(&self, genes: &[u32]) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.fitness(genes)
    }
    fn orientation(&self) -> Orientation {
        self.inner.orientation()
    }
    fn known_optimum(&self) -> Option<f64> {
        self.inner.known_optimum()
    }
    fn name(&self) -> String {
        self.inner.name()
    }
}

fn strictly_improving(t: &ImprovementTrace) -> bool {
    t.entries().windows(2).all(|w| t.orientation().improves(w[1].fitness, w[0].fitness))
}

fn lbp(k: usize, r: usize, variant: Variant) -> LeadingBlocksSpec {
    LeadingBlocksSpec::contiguous(4 * k, k, r, BlockFunction::BimodalTrap, variant, 0.1).unwrap()
}

/// Random strictly improving walk of at most `len` entries.
fn random_trace<P: Problem>(p: &P, len: usize, rng: &mut ChaCha8Rng) -> ImprovementTrace {
    let mut x = Genotype::random(p.alphabet(), rng);
    let mut entries = vec![(x.clone(), p.fitness(x.genes()), 0)];
    for _ in 0..2_000 {
        if entries.len() == len {
            break;
        }
        let mut y = x.clone();
        for _ in 0..rng.gen_range(1..=3) {
            let i = rng.gen_range(0..y.len());
            y.set(i, rng.gen_range(0..p.alphabet()[i]));
        }
        let f = p.fitness(y.genes());
        if p.orientation().improves(f, entries.last().unwrap().1) {
            entries.push((y.clone(), f, 0));
            x = y;
        }
    }
    ImprovementTrace::from_entries(p.name(), p.orientation(), entries).unwrap()
}

/// Smallest improving subsequence ending at modification `b`, by exhaustive
/// search over subsets of the earlier modifications.
fn exact_hops<P: Problem>(p: &P, t: &ImprovementTrace, b: usize) -> usize {
    let e = t.entries();
    let mods: Vec<_> = (1..=b).map(|i| get_mod(&e[i].genotype, &e[i - 1].genotype).unwrap()).collect();
    let better = |a: f64, c: f64| p.orientation().improves(a, c);
    let mut best = usize::MAX;
    for subset in 0u32..1 << (b - 1) {
        let chain: Vec<usize> = (0..b - 1).filter(|i| subset >> i & 1 == 1).chain([b - 1]).collect();
        if chain.len() >= best {
            continue;
        }
        let mut x = e[0].genotype.clone();
        let mut f = p.fitness(x.genes());
        let ok = chain.iter().all(|&m| {
            let y = apply_mod(&x, &mods[m]).unwrap();
            let fy = p.fitness(y.genes());
            let step = better(fy, f);
            (x, f) = (y, fy);
            step
        });
        if ok {
            best = chain.len();
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lbp_equals_concat_when_all_blocks_enabled(bits in prop::collection::vec(any::<bool>(), 16), r in 1usize..4) {
        let x = genotype(&bits);
        let spec = lbp(4, r, Variant::RestOff);
        let c = ConcatSpec::disjoint(16, 4, BlockFunction::BimodalTrap).unwrap();
        if enable_flags(&x, &spec).unwrap().iter().all(|&f| f == 1) {
            prop_assert_eq!(lbp_eval(&x, &spec).unwrap(), concat_eval(&x, &c).unwrap());
        }
        prop_assert!(lbp_eval(&x, &spec).unwrap() <= concat_eval(&x, &c).unwrap());
    }

    #[test]
    fn disabled_genes_never_change_flags(bits in prop::collection::vec(any::<bool>(), 16), r in 1usize..4, flips in prop::collection::vec(0usize..16, 1..6)) {
        let x = genotype(&bits);
        let spec = lbp(4, r, Variant::Alter);
        let flags = enable_flags(&x, &spec).unwrap();
        let mut y = x.clone();
        for g in flips {
            if flags[g / 4] == 0 {
                y.flip(g);
            }
        }
        prop_assert_eq!(enable_flags(&y, &spec).unwrap(), flags);
    }

    #[test]
    fn halfonhalf_boundaries(bits in prop::collection::vec(any::<bool>(), 16)) {
        // first block suboptimal keeps blocks 1..3 disabled under R = 1
        let spec = lbp(4, 1, Variant::HalfOnHalf);
        let mut x = genotype(&bits);
        x.set(0, 1);
        x.set(1, 0);
        let first = lbp_eval(&x, &lbp(4, 1, Variant::RestOff)).unwrap();
        let u_d: usize = (4..16).filter(|&i| x.get(i) == 1).count();
        let fd = lbp_eval(&x, &spec).unwrap() - first;
        match u_d {
            0 | 12 => prop_assert_eq!(fd, 0.0),
            6 => prop_assert!((fd - 0.1 * 6.0).abs() < 1e-12),
            _ => prop_assert!(fd > 0.0 && fd < 0.6),
        }
    }

    #[test]
    fn dsm_is_symmetric_and_non_negative(rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 10), 2..40)) {
        let pop: Vec<Genotype> = rows.iter().map(|r| genotype(r)).collect();
        let d = mutual_information_dsm(&pop).unwrap();
        for i in 0..10 {
            prop_assert_eq!(d.get(i, i), 0.0);
            for j in 0..10 {
                prop_assert!(d.get(i, j) >= 0.0);
                prop_assert_eq!(d.get(i, j), d.get(j, i));
            }
        }
    }

    #[test]
    fn linkage_tree_structure(rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 9), 2..30), seed in any::<u64>()) {
        let pop: Vec<Genotype> = rows.iter().map(|r| genotype(r)).collect();
        let d = mutual_information_dsm(&pop).unwrap();
        let t = build_linkage_tree(&d, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(t.clusters().len(), 17);
        for c in 9..17 {
            let (l, r) = t.children(c).unwrap();
            let mut u: Vec<usize> = t.clusters()[l].iter().chain(&t.clusters()[r]).copied().collect();
            u.sort();
            let len = u.len();
            u.dedup();
            prop_assert_eq!(u.len(), len);
            prop_assert_eq!(&u, &t.clusters()[c]);
        }
        prop_assert_eq!(&t.clusters()[t.root()], &(0..9).collect::<Vec<_>>());
    }

    #[test]
    fn dled_never_links_separate_blocks(bits in prop::collection::vec(any::<bool>(), 12), g in 0usize..12, h in 0usize..12) {
        prop_assume!(g / 4 != h / 4);
        for spec in ["problem=concat fn=bimodal n=12 k=4", "problem=concat fn=deceptive n=12 k=4"] {
            let p = Benchmark::from_spec(spec).unwrap();
            let mut eval = Evaluator::new(&p, EvaluationBudget::unlimited());
            prop_assert_eq!(dled_check(&genotype(&bits), g, h, &mut eval).unwrap(), Dependency::NotDetected);
        }
    }

    #[test]
    fn dled_invariant_under_flipping_h(bits in prop::collection::vec(any::<bool>(), 8), g in 0usize..8, h in 0usize..8) {
        prop_assume!(g != h);
        let p = Benchmark::from_spec("problem=lbp variant=alter n=8 k=4 R=1").unwrap();
        let mut eval = Evaluator::new(&p, EvaluationBudget::unlimited());
        let x = genotype(&bits);
        prop_assert_eq!(
            dled_check(&x, g, h, &mut eval).unwrap(),
            dled_check(&x.flipped(h), g, h, &mut eval).unwrap()
        );
    }

    #[test]
    fn optimal_mixing_never_worsens(a in prop::collection::vec(any::<bool>(), 16), b in prop::collection::vec(any::<bool>(), 16), mask in prop::collection::btree_set(0usize..16, 1..8)) {
        let p = Benchmark::from_spec("problem=lbp variant=halfonhalf n=16 k=4 R=2").unwrap();
        let mut eval = Evaluator::new(&p, EvaluationBudget::unlimited());
        let mut src = genotype(&a);
        let mut score = eval.score(&src).unwrap();
        let before = score;
        let mask: Vec<usize> = mask.into_iter().collect();
        optimal_mixing(&mut src, &mut score, &genotype(&b), &mask, &mut eval).unwrap();
        prop_assert!(score >= before);
        prop_assert_eq!(score, p.fitness(src.genes()));
    }

    #[test]
    fn hop_estimate_bounds(seed in any::<u64>(), spec_idx in 0usize..3) {
        let spec = ["problem=lbp variant=restoff n=8 k=2 R=1", "problem=concat fn=bimodal n=8 k=4", "problem=lbp variant=alter n=9 k=3 R=2 fn=deceptive"][spec_idx];
        let p = Benchmark::from_spec(spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_trace(&p, 8, &mut rng);
        let snapshot = t.clone();
        for i in 1..t.len() {
            let est = estimate_hops(&t, &p, i).unwrap().hops;
            prop_assert!(est >= 1 && est <= i);
        }
        prop_assert_eq!(t, snapshot);
    }

    #[test]
    fn lfl_non_negative_and_monotone(seed in any::<u64>(), arc in 0usize..36, extra in 0.0f64..50.0) {
        let inst = generate_instance(&GeneratorConfig::mini_c(seed % 8)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let flows: Vec<f64> = (0..36).map(|_| rng.gen_range(0.0..80.0)).collect();
        let f = FlowVector::new(flows.clone()).unwrap();
        prop_assert!(lfl(&inst, &f) >= 0.0);
        let mut more = flows;
        more[arc] += extra;
        let g = FlowVector::new(more).unwrap();
        let a = inst.arcs()[arc];
        prop_assert!(ln_out(&inst, &g, a.origin) >= ln_out(&inst, &f, a.origin));
        prop_assert!(ln_in(&inst, &g, a.dest) >= ln_in(&inst, &f, a.dest));
    }

    #[test]
    fn lfl_scale_covariance(seed in any::<u64>(), lambda in 0.01f64..100.0) {
        let inst = generate_instance(&GeneratorConfig::mini_c(seed % 8)).unwrap();
        let scaled = inst.scaled(lambda).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let genes: Vec<u32> = inst.alphabet().iter().map(|&a| rng.gen_range(0..a)).collect();
        let f = flow_from_solution(&inst, &WpLflSolution::new(&inst, genes.clone()).unwrap()).unwrap();
        let fs = flow_from_solution(&scaled, &WpLflSolution::new(&scaled, genes).unwrap()).unwrap();
        let (a, b) = (lfl(&inst, &f), lfl(&scaled, &fs));
        prop_assert!((b - lambda * a).abs() <= 1e-9 * (1.0 + b.abs()));
    }
}

#[test]
fn capacity_boundary_is_feasible_and_unpenalized() {
    // one two-hop route filling both arcs exactly
    let arcs = vec![
        Link { origin: 0, dest: 1, capacity: 6.0 },
        Link { origin: 1, dest: 2, capacity: 6.0 },
    ];
    let demands = vec![Demand { volume: 6.0, routes: vec![vec![0, 1]] }];
    let inst = NetworkInstance::new(3, arcs, demands).unwrap();
    let sol = WpLflSolution::new(&inst, vec![0]).unwrap();
    let f = flow_from_solution(&inst, &sol).unwrap();
    assert!(is_feasible(&inst, &f));
    let p = WpLflProblem::new(inst.clone());
    assert_eq!(p.fitness(&[0]), lfl(&inst, &f));
    assert!(p.fitness(&[0]) <= p.penalty_base());
}

#[test]
fn budget_exactness_and_monotone_traces() {
    let counting = |spec: &str| Counting {
        inner: Benchmark::from_spec(spec).unwrap(),
        calls: AtomicU64::new(0),
    };
    for seed in 0..4u64 {
        let p = counting("problem=lbp variant=alter n=20 k=4 R=1");
        let r = ltgomea_run(&p, EvaluationBudget::with_ffe(3_000), &LtGomeaConfig::new(LinkageBackend::Sll), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        assert_eq!(r.ffe_used, p.calls.load(Ordering::Relaxed));
        assert!(r.ffe_used <= 3_000 && strictly_improving(&r.trace));

        let p = counting("problem=lbp variant=halfonhalf n=20 k=4 R=1");
        let r = ltgomea_run(&p, EvaluationBudget::with_ffe(3_000), &LtGomeaConfig::new(LinkageBackend::Dled), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        assert_eq!(r.ffe_used, p.calls.load(Ordering::Relaxed));
        assert!(strictly_improving(&r.trace));

        let p = counting("problem=concat fn=deceptive n=24 k=6");
        let r = ils_sll_run(&p, EvaluationBudget::with_ffe(3_000), &IlsConfig::default(), &mut ChaCha8Rng::seed_from_u64(seed));
        assert_eq!(r.ffe_used, p.calls.load(Ordering::Relaxed));
        assert!(strictly_improving(&r.trace));

        let p = counting("problem=leadingones n=30");
        let r = fihc_restart_run(&p, EvaluationBudget::with_ffe(3_000), &mut ChaCha8Rng::seed_from_u64(seed));
        assert_eq!(r.ffe_used, p.calls.load(Ordering::Relaxed));
        assert!(strictly_improving(&r.trace));
    }
    let w = WpLflProblem::new(generate_instance(&GeneratorConfig::mini_c(1)).unwrap());
    let r = ils_sll_run(&w, EvaluationBudget::with_ffe(5_000), &IlsConfig::default(), &mut ChaCha8Rng::seed_from_u64(1));
    assert!(strictly_improving(&r.trace));
    assert_eq!(r.trace.orientation(), Orientation::Minimize);
}

#[test]
fn all_ones_reaches_the_optimum_for_every_variant() {
    for v in ["restoff", "halfonhalf", "alter"] {
        for r in 1..4 {
            let p = Benchmark::from_spec(&format!("problem=lbp variant={v} n=20 k=4 R={r}")).unwrap();
            assert_eq!(p.fitness(&[1; 20]), p.known_optimum().unwrap());
        }
    }
}

#[test]
fn hop_analysis_counts_its_own_evaluations() {
    let p = Counting {
        inner: Benchmark::from_spec("problem=concat fn=bimodal n=12 k=4").unwrap(),
        calls: AtomicU64::new(0),
    };
    let t = random_trace(&p, 8, &mut ChaCha8Rng::seed_from_u64(2));
    let before = p.calls.load(Ordering::Relaxed);
    let report = hop_report(&t, &p).unwrap();
    assert_eq!(report.total_analysis_ffe(), p.calls.load(Ordering::Relaxed) - before);
}

fn trace_of(p: &Benchmark, rows: &[&str]) -> ImprovementTrace {
    let entries = rows.iter().map(|r| {
        let g = Genotype::from_bitstring(&r.replace(' ', "")).unwrap();
        let f = p.fitness(g.genes());
        (g, f, 0)
    });
    ImprovementTrace::from_entries(p.name(), p.orientation(), entries).unwrap()
}

#[test]
fn exact_hops_agree_with_worked_examples() {
    let rows = [
        "1011 1010 0100 0111",
        "0101 1010 0100 0111",
        "1111 1010 0100 0111",
        "1111 1111 0100 0111",
        "1111 1111 0101 0111",
        "1111 1111 1111 0111",
        "1111 1111 1111 1111",
    ];
    for (spec, want) in [
        ("problem=lbp n=16 k=4 R=1", [1, 2, 3, 4, 5, 6]),
        ("problem=concat fn=bimodal n=16 k=4", [1, 2, 1, 1, 2, 1]),
    ] {
        let p = Benchmark::from_spec(spec).unwrap();
        let t = trace_of(&p, &rows);
        let exact: Vec<usize> = (1..=6).map(|b| exact_hops(&p, &t, b)).collect();
        assert_eq!(exact, want, "{spec}");
    }
    let p = Benchmark::from_spec("problem=concat fn=bimodal n=12 k=4 o=1 cyclic=true").unwrap();
    let t = trace_of(&p, &["101101010011", "111101010011", "111111110011", "111111110001", "111111111111"]);
    assert!((1..=4).all(|b| exact_hops(&p, &t, b) == 1));
}

#[test]
fn estimate_is_at_least_exact_hops_on_leading_ones_problems() {
    for spec in [
        "problem=leadingones n=8",
        "problem=royal n=8 b=2",
        "problem=lbp variant=restoff n=8 k=2 R=1",
    ] {
        let p = Benchmark::from_spec(spec).unwrap();
        for seed in 0..200 {
            let t = random_trace(&p, 8, &mut ChaCha8Rng::seed_from_u64(seed));
            for b in 1..t.len() {
                let exact = exact_hops(&p, &t, b);
                let est = estimate_hops(&t, &p, b).unwrap().hops;
                assert!(exact >= 1 && exact <= b);
                assert!(est >= exact, "{spec} seed {seed} mod {b}: estimate {est} < exact {exact}");
            }
        }
    }
}

/// The backward walk tests each modification against recorded entries, not
/// against the states its own chain produces, so it can undercut the exact
/// minimum once modifications span several blocks.
#[test]
fn estimate_can_undercut_exact_hops() {
    let p = Benchmark::from_spec("problem=concat fn=bimodal n=12 k=4 o=1 cyclic=true").unwrap();
    let t = random_trace(&p, 8, &mut ChaCha8Rng::seed_from_u64(5));
    assert_eq!(estimate_hops(&t, &p, 6).unwrap().hops, 3);
    assert_eq!(exact_hops(&p, &t, 6), 5);
    let p = Benchmark::from_spec("problem=concat fn=deceptive n=9 k=3").unwrap();
    let t = random_trace(&p, 8, &mut ChaCha8Rng::seed_from_u64(29));
    assert_eq!(estimate_hops(&t, &p, 3).unwrap().hops, 2);
    assert_eq!(exact_hops(&p, &t, 3), 3);
}
