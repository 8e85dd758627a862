use std::sync::Arc;

use crate::error::{Error, Result};
use crate::problem::{evaluate, EvaluationBudget, FitnessValue, Genotype, Orientation, Problem};

/// Directed link with a positive capacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub origin: usize,
    pub dest: usize,
    pub capacity: f64,
}

/// A volume to ship along exactly one of its candidate routes.
///
/// Routes are arc-index sequences in path order.
#[derive(Debug, Clone, PartialEq)]
pub struct Demand {
    pub volume: f64,
    pub routes: Vec<Vec<usize>>,
}

/// Validated network topology with demands and candidate routes.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkInstance {
    node_count: usize,
    arcs: Vec<Link>,
    demands: Vec<Demand>,
}

impl NetworkInstance {
    /// Checks endpoints, capacities, volumes and that every route is a
    /// simple directed path shared by all routes of its demand.
    pub fn new(node_count: usize, arcs: Vec<Link>, demands: Vec<Demand>) -> Result<Self> {
        for (i, a) in arcs.iter().enumerate() {
            if a.origin >= node_count || a.dest >= node_count {
                return Err(Error::InvalidSpec(format!("arc {i} references a node outside 0..{node_count}")));
            }
            if a.origin == a.dest {
                return Err(Error::InvalidSpec(format!("arc {i} is a self-loop")));
            }
            if !(a.capacity.is_finite() && a.capacity > 0.0) {
                return Err(Error::InvalidSpec(format!("arc {i} has non-positive capacity {}", a.capacity)));
            }
        }
        for (p, d) in demands.iter().enumerate() {
            if !(d.volume.is_finite() && d.volume >= 0.0) {
                return Err(Error::InvalidSpec(format!("demand {p} has invalid volume {}", d.volume)));
            }
            if d.routes.is_empty() {
                return Err(Error::InvalidSpec(format!("demand {p} has no candidate route")));
            }
            let ends = route_endpoints(&arcs, node_count, &d.routes[0])
                .map_err(|m| Error::InvalidSpec(format!("demand {p} route 0: {m}")))?;
            for (k, r) in d.routes.iter().enumerate().skip(1) {
                let e = route_endpoints(&arcs, node_count, r)
                    .map_err(|m| Error::InvalidSpec(format!("demand {p} route {k}: {m}")))?;
                if e != ends {
                    return Err(Error::InvalidSpec(format!("demand {p} route {k} connects different nodes")));
                }
            }
        }
        Ok(Self {
            node_count,
            arcs,
            demands,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arcs(&self) -> &[Link] {
        &self.arcs
    }

    pub fn demands(&self) -> &[Demand] {
        &self.demands
    }

    /// Start and end node of demand `p`.
    pub fn endpoints(&self, p: usize) -> (usize, usize) {
        let r = &self.demands[p].routes[0];
        (self.arcs[r[0]].origin, self.arcs[r[r.len() - 1]].dest)
    }

    /// Route counts per demand, usable as a genotype alphabet.
    pub fn alphabet(&self) -> Arc<[u32]> {
        self.demands.iter().map(|d| d.routes.len() as u32).collect()
    }

    /// Copy with every capacity and volume multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let arcs = self
            .arcs
            .iter()
            .map(|a| Link {
                capacity: a.capacity * factor,
                ..*a
            })
            .collect();
        let demands = self
            .demands
            .iter()
            .map(|d| Demand {
                volume: d.volume * factor,
                routes: d.routes.clone(),
            })
            .collect();
        Self::new(self.node_count, arcs, demands)
    }
}

pub(crate) fn route_endpoints(
    arcs: &[Link],
    node_count: usize,
    route: &[usize],
) -> std::result::Result<(usize, usize), String> {
    let Some(&first) = route.first() else {
        return Err("empty route".into());
    };
    let mut seen = vec![false; node_count];
    let mut cur = arcs.get(first).ok_or(format!("unknown arc {first}"))?.origin;
    seen[cur] = true;
    for &a in route {
        let link = arcs.get(a).ok_or(format!("unknown arc {a}"))?;
        if link.origin != cur {
            return Err(format!("arc {a} does not continue the path"));
        }
        cur = link.dest;
        if std::mem::replace(&mut seen[cur], true) {
            return Err(format!("node {cur} visited twice"));
        }
    }
    Ok((arcs[first].origin, cur))
}

/// Per-arc flows.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowVector {
    flows: Vec<f64>,
}

impl FlowVector {
    pub fn new(flows: Vec<f64>) -> Result<Self> {
        if let Some(i) = flows.iter().position(|f| !(f.is_finite() && *f >= 0.0)) {
            return Err(Error::InvalidSpec(format!("flow {i} is negative or not finite")));
        }
        Ok(Self { flows })
    }

    pub fn zeros(m: usize) -> Self {
        Self { flows: vec![0.0; m] }
    }

    pub fn flows(&self) -> &[f64] {
        &self.flows
    }

    pub fn get(&self, a: usize) -> f64 {
        self.flows[a]
    }

    pub fn len(&self) -> usize {
        self.flows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flows.is_empty()
    }
}

/// One route index per demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WpLflSolution {
    route_choice: Genotype,
}

impl WpLflSolution {
    pub fn new(inst: &NetworkInstance, route_choice: Vec<u32>) -> Result<Self> {
        Ok(Self {
            route_choice: Genotype::new(route_choice, inst.alphabet())?,
        })
    }

    pub fn from_genotype(inst: &NetworkInstance, g: Genotype) -> Result<Self> {
        Self::new(inst, g.genes().to_vec())
    }

    pub fn genotype(&self) -> &Genotype {
        &self.route_choice
    }
}

/// Arc flows induced by routing every demand over its chosen route.
pub fn flow_from_solution(inst: &NetworkInstance, sol: &WpLflSolution) -> Result<FlowVector> {
    let genes = sol.route_choice.genes();
    if genes.len() != inst.demands.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} route choices for {} demands",
            genes.len(),
            inst.demands.len()
        )));
    }
    for (p, (&k, d)) in genes.iter().zip(&inst.demands).enumerate() {
        if k as usize >= d.routes.len() {
            return Err(Error::InvalidSpec(format!("demand {p} has no route {k}")));
        }
    }
    Ok(FlowVector {
        flows: raw_flows(inst, genes),
    })
}

fn raw_flows(inst: &NetworkInstance, genes: &[u32]) -> Vec<f64> {
    let mut flows = vec![0.0; inst.arcs.len()];
    for (&k, d) in genes.iter().zip(&inst.demands) {
        for &a in &d.routes[k as usize] {
            flows[a] += d.volume;
        }
    }
    flows
}

pub fn is_feasible(inst: &NetworkInstance, f: &FlowVector) -> bool {
    inst.arcs.iter().zip(&f.flows).all(|(a, &fa)| fa <= a.capacity)
}

/// Total flow above capacity.
pub fn overflow(inst: &NetworkInstance, f: &FlowVector) -> f64 {
    inst.arcs.iter().zip(&f.flows).map(|(a, &fa)| (fa - a.capacity).max(0.0)).sum()
}

fn eps(x: f64) -> f64 {
    x.max(0.0)
}

/// Flow lost when arc `b` fails and its origin reroutes over sibling arcs.
pub fn la_out(inst: &NetworkInstance, f: &FlowVector, b: usize) -> f64 {
    let v = inst.arcs[b].origin;
    let (g, e) = node_sums(inst, f, |a| a.origin == v);
    eps(g - (e - inst.arcs[b].capacity))
}

/// Mirror of [`la_out`] on the incoming side of the destination of `b`.
pub fn la_in(inst: &NetworkInstance, f: &FlowVector, b: usize) -> f64 {
    let v = inst.arcs[b].dest;
    let (g, e) = node_sums(inst, f, |a| a.dest == v);
    eps(g - (e - inst.arcs[b].capacity))
}

pub fn ln_out(inst: &NetworkInstance, f: &FlowVector, v: usize) -> f64 {
    let (g, e) = node_sums(inst, f, |a| a.origin == v);
    inst.arcs.iter().filter(|a| a.origin == v).map(|a| eps(g - (e - a.capacity))).sum()
}

pub fn ln_in(inst: &NetworkInstance, f: &FlowVector, v: usize) -> f64 {
    let (g, e) = node_sums(inst, f, |a| a.dest == v);
    inst.arcs.iter().filter(|a| a.dest == v).map(|a| eps(g - (e - a.capacity))).sum()
}

fn node_sums(inst: &NetworkInstance, f: &FlowVector, at: impl Fn(&Link) -> bool) -> (f64, f64) {
    inst.arcs
        .iter()
        .zip(&f.flows)
        .filter(|(a, _)| at(a))
        .fold((0.0, 0.0), |(g, e), (a, &fa)| (g + fa, e + a.capacity))
}

/// Lost Flow in Link: half the sum of outgoing and incoming losses over all
/// nodes.
pub fn lfl(inst: &NetworkInstance, f: &FlowVector) -> f64 {
    lfl_raw(inst, &f.flows)
}

fn lfl_raw(inst: &NetworkInstance, flows: &[f64]) -> f64 {
    let n = inst.node_count;
    let (mut g_out, mut e_out, mut g_in, mut e_in) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for (a, &fa) in inst.arcs.iter().zip(flows) {
        g_out[a.origin] += fa;
        e_out[a.origin] += a.capacity;
        g_in[a.dest] += fa;
        e_in[a.dest] += a.capacity;
    }
    let total: f64 = inst
        .arcs
        .iter()
        .map(|a| eps(g_out[a.origin] - (e_out[a.origin] - a.capacity)) + eps(g_in[a.dest] - (e_in[a.dest] - a.capacity)))
        .sum();
    total / 2.0
}

/// WP_LFL as a minimization [`Problem`] over route choices.
///
/// Feasible solutions score their LFL. Infeasible ones score
/// `penalty_base + overflow`, where `penalty_base` is the sum over demands of
/// volume times longest candidate route length. That base bounds the total
/// arc flow and so every feasible LFL.
#[derive(Debug, Clone)]
pub struct WpLflProblem {
    inst: Arc<NetworkInstance>,
    alphabet: Arc<[u32]>,
    penalty_base: f64,
    label: String,
}

impl WpLflProblem {
    pub fn new(inst: NetworkInstance) -> Self {
        Self::labeled(inst, "wplfl")
    }

    pub fn labeled(inst: NetworkInstance, label: impl Into<String>) -> Self {
        let penalty_base = inst
            .demands
            .iter()
            .map(|d| d.volume * d.routes.iter().map(Vec::len).max().unwrap_or(0) as f64)
            .sum();
        Self {
            alphabet: inst.alphabet(),
            inst: Arc::new(inst),
            penalty_base,
            label: label.into(),
        }
    }

    pub fn instance(&self) -> &NetworkInstance {
        &self.inst
    }

    pub fn penalty_base(&self) -> f64 {
        self.penalty_base
    }
}

impl Problem for WpLflProblem {
    fn alphabet(&self) -> Arc<[u32]> {
        self.alphabet.clone()
    }

    fn fitness(&self, genes: &[u32]) -> f64 {
        let flows = raw_flows(&self.inst, genes);
        let over: f64 = self
            .inst
            .arcs
            .iter()
            .zip(&flows)
            .map(|(a, &fa)| (fa - a.capacity).max(0.0))
            .sum();
        if over > 0.0 {
            self.penalty_base + over
        } else {
            lfl_raw(&self.inst, &flows)
        }
    }

    fn orientation(&self) -> Orientation {
        Orientation::Minimize
    }

    fn known_optimum(&self) -> Option<f64> {
        None
    }

    fn name(&self) -> String {
        self.label.clone()
    }
}

/// Budgeted fitness of `sol`; consumes one FFE.
pub fn wpflf_fitness(problem: &WpLflProblem, sol: &WpLflSolution, budget: &mut EvaluationBudget) -> Result<FitnessValue> {
    evaluate(problem, sol.genotype(), budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn link(origin: usize, dest: usize, capacity: f64) -> Link {
        Link { origin, dest, capacity }
    }

    // u=0, v=1, w=2
    fn three_node() -> (NetworkInstance, FlowVector) {
        let inst = NetworkInstance::new(3, vec![link(0, 1, 10.0), link(0, 2, 5.0)], vec![]).unwrap();
        (inst, FlowVector::new(vec![10.0, 0.0]).unwrap())
    }

    #[test]
    fn three_node_losses() {
        let (inst, f) = three_node();
        assert_eq!(la_out(&inst, &f, 0), 5.0);
        assert_eq!(la_out(&inst, &f, 1), 0.0);
        assert_eq!(ln_out(&inst, &f, 0), 5.0);
        // single incoming arcs lose their whole flow
        assert_eq!(ln_in(&inst, &f, 1), 10.0);
        assert_eq!(ln_in(&inst, &f, 2), 0.0);
        assert_eq!(lfl(&inst, &f), 7.5);
        assert_eq!(lfl(&inst, &FlowVector::zeros(2)), 0.0);
    }

    fn diamond() -> NetworkInstance {
        // 0->1->3, 0->2->3, plus a direct 0->3
        let arcs = vec![
            link(0, 1, 10.0),
            link(1, 3, 10.0),
            link(0, 2, 10.0),
            link(2, 3, 10.0),
            link(0, 3, 4.0),
        ];
        let demands = vec![
            Demand {
                volume: 3.0,
                routes: vec![vec![4], vec![0, 1], vec![2, 3]],
            },
            Demand {
                volume: 4.0,
                routes: vec![vec![0, 1], vec![2, 3]],
            },
        ];
        NetworkInstance::new(4, arcs, demands).unwrap()
    }

    #[test]
    fn flows_add_up() {
        let inst = diamond();
        let f = flow_from_solution(&inst, &WpLflSolution::new(&inst, vec![1, 0]).unwrap()).unwrap();
        assert_eq!(f.flows(), &[7.0, 7.0, 0.0, 0.0, 0.0]);
        let f = flow_from_solution(&inst, &WpLflSolution::new(&inst, vec![0, 1]).unwrap()).unwrap();
        assert_eq!(f.flows(), &[0.0, 0.0, 4.0, 4.0, 3.0]);
        assert!(WpLflSolution::new(&inst, vec![2, 2]).is_err());
    }

    #[test]
    fn feasibility_is_non_strict() {
        let inst = NetworkInstance::new(2, vec![link(0, 1, 5.0)], vec![]).unwrap();
        assert!(is_feasible(&inst, &FlowVector::new(vec![5.0]).unwrap()));
        assert!(!is_feasible(&inst, &FlowVector::new(vec![6.0]).unwrap()));
        assert_eq!(overflow(&inst, &FlowVector::new(vec![6.0]).unwrap()), 1.0);
    }

    #[test]
    fn lfl_matches_per_node_sums() {
        let inst = diamond();
        for choice in [vec![0, 0], vec![1, 1], vec![2, 0], vec![0, 1]] {
            let f = flow_from_solution(&inst, &WpLflSolution::new(&inst, choice).unwrap()).unwrap();
            let by_node: f64 = (0..4).map(|v| ln_in(&inst, &f, v) + ln_out(&inst, &f, v)).sum::<f64>() / 2.0;
            let by_arc: f64 = (0..5).map(|b| la_out(&inst, &f, b) + la_in(&inst, &f, b)).sum::<f64>() / 2.0;
            assert_abs_diff_eq!(lfl(&inst, &f), by_node, epsilon = 1e-9);
            assert_abs_diff_eq!(lfl(&inst, &f), by_arc, epsilon = 1e-9);
        }
    }

    #[test]
    fn infeasible_scores_worse_than_feasible() {
        let mut inst = diamond();
        inst.arcs[0].capacity = 5.0;
        let p = WpLflProblem::new(inst.clone());
        let mut feasible = Vec::new();
        let mut infeasible = Vec::new();
        for a in 0..3 {
            for b in 0..2 {
                let genes = [a, b];
                let f = FlowVector::new(raw_flows(&inst, &genes)).unwrap();
                if is_feasible(&inst, &f) {
                    assert_eq!(p.fitness(&genes), lfl(&inst, &f));
                    feasible.push(p.fitness(&genes));
                } else {
                    infeasible.push(p.fitness(&genes));
                }
            }
        }
        assert!(!feasible.is_empty() && !infeasible.is_empty());
        let worst_feasible = feasible.iter().copied().fold(f64::MIN, f64::max);
        assert!(infeasible.iter().all(|&x| x > worst_feasible));
        assert!(worst_feasible <= p.penalty_base());
    }

    #[test]
    fn fitness_consumes_one_evaluation() {
        let inst = diamond();
        let p = WpLflProblem::new(inst.clone());
        let sol = WpLflSolution::new(&inst, vec![0, 0]).unwrap();
        let mut budget = EvaluationBudget::with_ffe(1);
        let v = wpflf_fitness(&p, &sol, &mut budget).unwrap();
        assert_eq!(v.orientation, Orientation::Minimize);
        assert_eq!(budget.used(), 1);
        assert!(wpflf_fitness(&p, &sol, &mut budget).is_err());
    }

    #[test]
    fn empty_demand_list_scores_zero() {
        let inst = NetworkInstance::new(2, vec![link(0, 1, 1.0)], vec![]).unwrap();
        let p = WpLflProblem::new(inst);
        assert_eq!(p.fitness(&[]), 0.0);
    }

    #[test]
    fn rejects_bad_routes() {
        let arcs = vec![link(0, 1, 1.0), link(1, 0, 1.0), link(1, 2, 1.0)];
        let bad = |routes: Vec<Vec<usize>>| NetworkInstance::new(3, arcs.clone(), vec![Demand { volume: 1.0, routes }]);
        assert!(bad(vec![]).is_err());
        assert!(bad(vec![vec![]]).is_err());
        assert!(bad(vec![vec![0, 2, 2]]).is_err());
        assert!(bad(vec![vec![2, 0]]).is_err());
        assert!(bad(vec![vec![0, 1]]).is_err(), "cycle revisits node 0");
        assert!(bad(vec![vec![0], vec![0, 2]]).is_err(), "routes disagree on endpoints");
        assert!(bad(vec![vec![7]]).is_err());
        assert!(bad(vec![vec![0, 2]]).is_ok());
        assert!(NetworkInstance::new(2, vec![link(0, 1, 0.0)], vec![]).is_err());
        assert!(NetworkInstance::new(2, vec![link(0, 2, 1.0)], vec![]).is_err());
    }
}
