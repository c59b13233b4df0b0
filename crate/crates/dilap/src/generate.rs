//! Deterministic random digraphs, DAGs, networks, and test functions for
//! randomized verification. All generators draw from a caller-provided
//! ChaCha stream so that a base seed reproduces an entire corpus.

use num_complex::Complex64;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::flows::CapacityNetwork;
use crate::functions::{ArcFunction, VertexFunction};
use crate::graph::WeightedDigraph;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-case seed derived from a base seed, stable across runs and
/// independent of iteration order.
pub fn derived_seed(base: u64, index: u64) -> u64 {
    splitmix64(base.wrapping_add(splitmix64(index)))
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct DigraphConfig {
    pub max_order: usize,
    /// Upper bound for the per-pair arc probability; the probability itself
    /// is drawn uniformly from [0, max_density] per graph.
    pub max_density: f64,
    /// Log-uniform weight range for vertices and arcs.
    pub weight_range: (f64, f64),
    pub loop_probability: f64,
    pub parallel_probability: f64,
    /// All weights one when set.
    pub combinatorial: bool,
}

impl Default for DigraphConfig {
    fn default() -> Self {
        DigraphConfig {
            max_order: 12,
            max_density: 0.5,
            weight_range: (0.1, 10.0),
            loop_probability: 0.1,
            parallel_probability: 0.1,
            combinatorial: false,
        }
    }
}

impl DigraphConfig {
    pub fn combinatorial() -> Self {
        DigraphConfig { combinatorial: true, ..DigraphConfig::default() }
    }
}

fn log_uniform<R: Rng>(rng: &mut R, range: (f64, f64)) -> f64 {
    (rng.random_range(range.0.ln()..=range.1.ln())).exp()
}

fn weight<R: Rng>(rng: &mut R, config: &DigraphConfig) -> f64 {
    if config.combinatorial { 1.0 } else { log_uniform(rng, config.weight_range) }
}

/// Random weighted multidigraph with loops and parallel arcs.
pub fn random_digraph<R: Rng>(rng: &mut R, config: &DigraphConfig) -> WeightedDigraph {
    let n = rng.random_range(1..=config.max_order.max(1));
    let density = rng.random_range(0.0..=config.max_density);
    let vertices: Vec<(String, f64)> =
        (1..=n).map(|i| (format!("v{i}"), weight(rng, config))).collect();
    let mut arcs = Vec::new();
    let push = |rng: &mut R, arcs: &mut Vec<_>, tail: usize, head: usize| {
        let id = format!("a{}", arcs.len() + 1);
        arcs.push((id, format!("v{}", tail + 1), format!("v{}", head + 1), weight(rng, config)));
    };
    for tail in 0..n {
        for head in 0..n {
            if tail == head {
                continue;
            }
            if rng.random_bool(density) {
                push(rng, &mut arcs, tail, head);
                if rng.random_bool(config.parallel_probability) {
                    push(rng, &mut arcs, tail, head);
                }
            }
        }
    }
    for v in 0..n {
        if rng.random_bool(config.loop_probability) {
            push(rng, &mut arcs, v, v);
        }
    }
    WeightedDigraph::new(vertices, arcs).expect("generated digraph is valid")
}

fn shuffled<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    order
}

/// Random combinatorial DAG: arcs follow a hidden random topological order,
/// with parallel arcs possible and no loops.
pub fn random_dag<R: Rng>(rng: &mut R, max_order: usize) -> WeightedDigraph {
    let n = rng.random_range(1..=max_order.max(1));
    let density = rng.random_range(0.0..=0.5);
    let rank = shuffled(rng, n);
    let vertices: Vec<(String, f64)> = (1..=n).map(|i| (format!("v{i}"), 1.0)).collect();
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(density) {
                let copies = if rng.random_bool(0.1) { 2 } else { 1 };
                for _ in 0..copies {
                    arcs.push((
                        format!("a{}", arcs.len() + 1),
                        format!("v{}", rank[i] + 1),
                        format!("v{}", rank[j] + 1),
                        1.0,
                    ));
                }
            }
        }
    }
    WeightedDigraph::new(vertices, arcs).expect("generated dag is valid")
}

/// Random classical network: one source `x` with no entering arcs, one
/// sink `y` with no leaving arcs, arc weight one, capacities log-uniform
/// in [0.5, 20].
pub fn random_network<R: Rng>(rng: &mut R, max_order: usize) -> Result<CapacityNetwork> {
    let n = rng.random_range(3..=max_order.max(3));
    let x = 0;
    let y = n - 1;
    let mut ids: Vec<String> = vec!["x".into()];
    ids.extend((1..=n - 2).map(|i| format!("v{i}")));
    ids.push("y".into());

    let density = rng.random_range(0.15..=0.5);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    pairs.push((x, rng.random_range(1..n)));
    pairs.push((rng.random_range(0..n - 1), y));
    for tail in 0..n {
        for head in 0..n {
            if tail == head || head == x || tail == y {
                continue;
            }
            if rng.random_bool(density) {
                pairs.push((tail, head));
            }
        }
    }
    let arcs: Vec<(String, String, String, f64, f64)> = pairs
        .into_iter()
        .enumerate()
        .map(|(k, (tail, head))| {
            (
                format!("a{}", k + 1),
                ids[tail].clone(),
                ids[head].clone(),
                1.0,
                log_uniform(rng, (0.5, 20.0)),
            )
        })
        .collect();
    CapacityNetwork::from_parts(ids, arcs, ["x".to_string()], ["y".to_string()])
}

pub fn random_vertex_function<R: Rng>(rng: &mut R, g: &WeightedDigraph) -> VertexFunction {
    let values = (0..g.order())
        .map(|_| Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
        .collect();
    VertexFunction::new(g, values).expect("value count matches order")
}

pub fn random_arc_function<R: Rng>(rng: &mut R, g: &WeightedDigraph) -> ArcFunction {
    let values = (0..g.size())
        .map(|_| Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
        .collect();
    ArcFunction::new(g, values).expect("value count matches size")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{acyclic_labeling, Labeling};

    #[test]
    fn same_seed_reproduces_the_graph() {
        let config = DigraphConfig::default();
        let a = random_digraph(&mut rng_for(7), &config);
        let b = random_digraph(&mut rng_for(7), &config);
        assert_eq!(a, b);
        assert_ne!(a, random_digraph(&mut rng_for(8), &config));
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: Vec<u64> = (0..100).map(|i| derived_seed(42, i)).collect();
        let mut unique = seeds.clone();
        unique.sort_unstable();
        unique.dedup();
        assert_eq!(unique.len(), seeds.len());
    }

    #[test]
    fn dags_admit_monotone_labelings() {
        for i in 0..50 {
            let g = random_dag(&mut rng_for(derived_seed(3, i)), 10);
            assert!(matches!(acyclic_labeling(&g), Labeling::Monotone(_)));
        }
    }

    #[test]
    fn networks_have_classical_terminals() {
        for i in 0..50 {
            let net = random_network(&mut rng_for(derived_seed(9, i)), 10).unwrap();
            let g = net.graph();
            let x = g.vertex_index("x").unwrap();
            let y = g.vertex_index("y").unwrap();
            assert!(g.arcs().iter().all(|a| a.head != x && a.tail != y));
            assert!(!g.arcs_at(x, crate::graph::Orientation::Out).is_empty());
            assert!(net.capacities().iter().all(|&c| (0.5..=20.0).contains(&c)));
        }
    }
}
