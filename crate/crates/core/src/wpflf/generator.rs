use std::collections::BTreeSet;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::wpflf::network::{Demand, Link, NetworkInstance};
use crate::wpflf::routes::k_shortest_routes;

/// Experiment group of a generated instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    /// One demand per ordered node pair, equal volumes, equal capacities.
    A,
    /// Random demands and volumes, equal capacities.
    B,
    /// As B with per-arc capacities spread around the base value.
    C,
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Group::A),
            "B" | "b" => Ok(Group::B),
            "C" | "c" => Ok(Group::C),
            _ => Err(Error::InvalidSpec(format!("unknown group {s:?}"))),
        }
    }
}

/// Parameters of [`generate_instance`].
///
/// Links are bidirectional, so `arcs` must be even. Capacities are set
/// relative to the heaviest arc load when every demand takes its first
/// route: `base = ceil(load * headroom)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub group: Group,
    pub nodes: usize,
    pub arcs: usize,
    /// `rows x cols` grid topology; overrides `nodes` and `arcs`.
    pub grid: Option<(usize, usize)>,
    /// Demand count for groups B and C.
    pub demands: usize,
    pub routes: usize,
    /// Group A volume.
    pub volume: f64,
    /// Inclusive integer volume range for groups B and C.
    pub volume_range: (u32, u32),
    pub headroom: f64,
    /// Group C capacity multipliers, drawn uniformly.
    pub capacity_spread: (f64, f64),
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(group: Group, nodes: usize, arcs: usize, demands: usize, routes: usize, seed: u64) -> Self {
        Self {
            group,
            nodes,
            arcs,
            grid: None,
            demands,
            routes,
            volume: 1.0,
            volume_range: (1, 10),
            headroom: 1.0,
            capacity_spread: (0.7, 1.3),
            seed,
        }
    }

    /// 36 nodes and 104 arcs.
    pub fn default_preset(group: Group, demands: usize, routes: usize, seed: u64) -> Self {
        Self::new(group, 36, 104, demands, routes, seed)
    }

    /// Bidirectional `rows x cols` grid.
    pub fn grid(group: Group, rows: usize, cols: usize, demands: usize, routes: usize, seed: u64) -> Self {
        let links = rows * cols.saturating_sub(1) + cols * rows.saturating_sub(1);
        Self {
            grid: Some((rows, cols)),
            ..Self::new(group, rows * cols, 2 * links, demands, routes, seed)
        }
    }

    /// Desk-scale group C: 12 nodes, 36 arcs, 60 demands, 4 routes.
    pub fn mini_c(seed: u64) -> Self {
        Self::new(Group::C, 12, 36, 60, 4, seed)
    }
}

/// Random instance per `cfg`; deterministic in `cfg.seed`.
///
/// The topology is a random spanning tree of bidirectional links, then links
/// that give leaves a second neighbor, then random extra links. It is always
/// strongly connected.
pub fn generate_instance(cfg: &GeneratorConfig) -> Result<NetworkInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (n, pairs) = match cfg.grid {
        Some((rows, cols)) => {
            if rows * cols < 2 {
                return Err(Error::InvalidSpec("grid needs at least two nodes".into()));
            }
            (rows * cols, grid_links(rows, cols))
        }
        None => (cfg.nodes, random_links(cfg.nodes, cfg.arcs, &mut rng)?),
    };
    if cfg.routes == 0 {
        return Err(Error::InvalidSpec("route count must be positive".into()));
    }
    if !(cfg.headroom.is_finite() && cfg.headroom > 0.0) {
        return Err(Error::InvalidSpec("headroom must be positive".into()));
    }
    let (lo, hi) = cfg.capacity_spread;
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(Error::InvalidSpec("capacity spread must satisfy 0 < lo <= hi".into()));
    }
    let mut arcs: Vec<Link> = Vec::with_capacity(2 * pairs.len());
    for &(u, v) in &pairs {
        arcs.push(Link { origin: u, dest: v, capacity: 1.0 });
        arcs.push(Link { origin: v, dest: u, capacity: 1.0 });
    }

    let ends: Vec<(usize, usize, f64)> = match cfg.group {
        Group::A => (0..n)
            .flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| (s, t, cfg.volume)))
            .collect(),
        Group::B | Group::C => {
            let (vlo, vhi) = cfg.volume_range;
            if vlo > vhi {
                return Err(Error::InvalidSpec("empty volume range".into()));
            }
            (0..cfg.demands)
                .map(|_| {
                    let s = rng.gen_range(0..n);
                    let t = (s + rng.gen_range(1..n)) % n;
                    (s, t, f64::from(rng.gen_range(vlo..=vhi)))
                })
                .collect()
        }
    };
    let demands: Vec<Demand> = ends
        .iter()
        .map(|&(s, t, volume)| Demand {
            volume,
            routes: k_shortest_routes(n, &arcs, s, t, cfg.routes),
        })
        .collect();

    let mut load = vec![0.0; arcs.len()];
    for d in &demands {
        for &a in &d.routes[0] {
            load[a] += d.volume;
        }
    }
    let base = (load.iter().copied().fold(0.0, f64::max) * cfg.headroom).ceil().max(1.0);
    for a in &mut arcs {
        a.capacity = match cfg.group {
            Group::C => (base * rng.gen_range(lo..=hi)).ceil().max(1.0),
            _ => base,
        };
    }
    NetworkInstance::new(n, arcs, demands)
}

fn grid_links(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut links = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                links.push((v, v + 1));
            }
            if r + 1 < rows {
                links.push((v, v + cols));
            }
        }
    }
    links
}

fn random_links<R: Rng>(n: usize, arcs: usize, rng: &mut R) -> Result<Vec<(usize, usize)>> {
    if n < 2 {
        return Err(Error::InvalidSpec("at least two nodes are required".into()));
    }
    if !arcs.is_multiple_of(2) {
        return Err(Error::InvalidSpec(format!("arc count {arcs} must be even (links are bidirectional)")));
    }
    let links = arcs / 2;
    if links < n - 1 || links > n * (n - 1) / 2 {
        return Err(Error::InvalidSpec(format!(
            "{arcs} arcs cannot form a connected simple topology on {n} nodes"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut chosen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut out = Vec::with_capacity(links);
    let key = |u: usize, v: usize| (u.min(v), u.max(v));
    for i in 1..n {
        let (u, v) = (order[rng.gen_range(0..i)], order[i]);
        chosen.insert(key(u, v));
        out.push((u, v));
    }
    // give every leaf a second link while links remain
    let mut degree = vec![0usize; n];
    for &(u, v) in &out {
        degree[u] += 1;
        degree[v] += 1;
    }
    for &v in &order {
        if out.len() == links || degree[v] >= 2 {
            continue;
        }
        let options: Vec<usize> = (0..n).filter(|&u| u != v && !chosen.contains(&key(u, v))).collect();
        let Some(&u) = options.iter().filter(|&&u| degree[u] < 2).min_by_key(|_| rng.gen::<u32>()).or_else(|| options.choose(rng)) else {
            continue;
        };
        chosen.insert(key(u, v));
        out.push((u, v));
        degree[u] += 1;
        degree[v] += 1;
    }
    let mut free: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|p| !chosen.contains(p))
        .collect();
    free.shuffle(rng);
    let missing = links - out.len();
    out.extend(free.into_iter().take(missing));
    Ok(out)
}
