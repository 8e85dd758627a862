//! WP_LFL: route one flow per demand so that the network loses as little
//! flow as possible under single-link failures, subject to arc capacities.

mod generator;
mod io;
mod network;
mod routes;

pub use generator::{generate_instance, GeneratorConfig, Group};
pub use io::{parse_instance, serialize_instance};
pub use network::{
    flow_from_solution, is_feasible, la_in, la_out, lfl, ln_in, ln_out, overflow, wpflf_fitness, Demand,
    FlowVector, Link, NetworkInstance, WpLflProblem, WpLflSolution,
};
pub use routes::k_shortest_routes;
