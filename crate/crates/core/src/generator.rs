//! Seeded Erdős–Rényi instances on a square grid, and the all-pairs
//! topology statistics used to characterise them.
//!
//! Randomness comes from ChaCha8 seeded with `seed`, with one independent
//! stream per field:
//!
//! | stream | draws                                          |
//! |--------|------------------------------------------------|
//! | 0      | node coordinates, `x` then `y`, node order     |
//! | 1      | edge coin flips, pairs `(i, j)`, `i < j`       |
//! | 2      | edge delays, in edge order                     |
//! | 3      | node costs, node order                         |
//! | 4      | node delays, node order                        |
//!
//! A disconnected draw is discarded and the streams simply continue, so the
//! output depends only on the configuration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{distances_from, Cost, Delay, EdgeRecord, Network, Node};

pub const MAX_RETRIES: usize = 1000;

const STREAM_COORDS: u64 = 0;
const STREAM_EDGES: u64 = 1;
const STREAM_EDGE_DELAY: u64 = 2;
const STREAM_NODE_COST: u64 = 3;
const STREAM_NODE_DELAY: u64 = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    pub n: usize,
    /// Edge probability; `None` selects [`default_p`].
    pub p: Option<f64>,
    pub seed: u64,
    pub grid: f64,
    pub edge_delay_range: (Delay, Delay),
    pub node_cost_range: (Cost, Cost),
    pub node_delay_range: (Delay, Delay),
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n: 20,
            p: None,
            seed: 0,
            grid: 20.0,
            edge_delay_range: (1, 5),
            node_cost_range: (4.0, 8.0),
            node_delay_range: (1, 3),
        }
    }
}

/// Default edge probability for `n` nodes: `0.8 ln n / n`, capped at 1.
/// Slightly below the connectivity threshold, so the conditioned graphs
/// are sparse and their mean path weights stay flat as `n` grows.
pub fn default_p(n: usize) -> f64 {
    if n <= 2 {
        1.0
    } else {
        (0.8 * (n as f64).ln() / n as f64).min(1.0)
    }
}

impl GenConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        GenConfig {
            n,
            seed,
            ..GenConfig::default()
        }
    }

    pub fn edge_probability(&self) -> f64 {
        self.p.unwrap_or_else(|| default_p(self.n))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        let p = self.edge_probability();
        if !(p > 0.0 && p <= 1.0) {
            return bad("p must lie in (0, 1]");
        }
        if !(self.grid > 0.0 && self.grid.is_finite()) {
            return bad("grid must be positive");
        }
        if self.edge_delay_range.0 < 1 || self.edge_delay_range.0 > self.edge_delay_range.1 {
            return bad("edge_delay_range must be a nonempty interval with lower end ≥ 1");
        }
        let (lo, hi) = self.node_cost_range;
        if !(lo >= 0.0 && lo <= hi && hi.is_finite()) {
            return bad("node_cost_range must be a nonempty nonnegative interval");
        }
        if self.node_delay_range.0 > self.node_delay_range.1 {
            return bad("node_delay_range must be a nonempty interval");
        }
        Ok(())
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Draws a connected random network.
pub fn generate(cfg: &GenConfig) -> Result<Network> {
    cfg.validate()?;
    let p = cfg.edge_probability();
    let mut coords_rng = stream(cfg.seed, STREAM_COORDS);
    let mut edges_rng = stream(cfg.seed, STREAM_EDGES);
    let mut edge_delay_rng = stream(cfg.seed, STREAM_EDGE_DELAY);
    let mut node_cost_rng = stream(cfg.seed, STREAM_NODE_COST);
    let mut node_delay_rng = stream(cfg.seed, STREAM_NODE_DELAY);

    for _ in 0..MAX_RETRIES {
        let coords: Vec<(f64, f64)> = (0..cfg.n)
            .map(|_| {
                let x = coords_rng.gen_range(0.0..=cfg.grid);
                let y = coords_rng.gen_range(0.0..=cfg.grid);
                (x, y)
            })
            .collect();

        let mut edges = Vec::new();
        for i in 0..cfg.n {
            for j in i + 1..cfg.n {
                if edges_rng.gen_bool(p) {
                    let (xi, yi) = coords[i];
                    let (xj, yj) = coords[j];
                    let cost = (xi - xj).hypot(yi - yj);
                    let delay =
                        edge_delay_rng.gen_range(cfg.edge_delay_range.0..=cfg.edge_delay_range.1);
                    edges.push(EdgeRecord::new(i as u32, j as u32, cost, delay));
                }
            }
        }

        let (cost_lo, cost_hi) = cfg.node_cost_range;
        let nodes: Vec<Node> = coords
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| {
                let cost = if cost_lo == cost_hi {
                    cost_lo
                } else {
                    node_cost_rng.gen_range(cost_lo..cost_hi)
                };
                let delay =
                    node_delay_rng.gen_range(cfg.node_delay_range.0..=cfg.node_delay_range.1);
                Node {
                    id: i as u32,
                    cost,
                    delay,
                    x: Some(x),
                    y: Some(y),
                }
            })
            .collect();

        let net = Network::new(nodes, edges)?;
        if net.is_connected() {
            return Ok(net);
        }
    }
    Err(Error::GenerationFailed {
        retries: MAX_RETRIES,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TopologyStats {
    /// Mean over ordered pairs of the minimum-cost path cost.
    pub mscp: f64,
    /// Mean over ordered pairs of the minimum-delay path delay.
    pub msdp: f64,
}

/// Mean min-cost and min-delay path weights over all ordered node pairs.
pub fn topology_stats(net: &Network) -> Result<TopologyStats> {
    if !net.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = net.node_count();
    if n < 2 {
        return Ok(TopologyStats {
            mscp: 0.0,
            msdp: 0.0,
        });
    }
    let per_source: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|u| {
            let cost: f64 = distances_from(net, u, |e| net.edges()[e].cost).iter().sum();
            let delay: f64 = distances_from(net, u, |e| net.edges()[e].delay as f64)
                .iter()
                .sum();
            (cost, delay)
        })
        .collect();
    // Summed in source order so the result does not depend on scheduling.
    let (cost_sum, delay_sum) = per_source
        .iter()
        .fold((0.0, 0.0), |acc, &(c, d)| (acc.0 + c, acc.1 + d));
    let pairs = (n * (n - 1)) as f64;
    Ok(TopologyStats {
        mscp: cost_sum / pairs,
        msdp: delay_sum / pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_nodes_full_probability() {
        let cfg = GenConfig {
            p: Some(1.0),
            ..GenConfig::new(2, 7)
        };
        let net = generate(&cfg).unwrap();
        assert_eq!(net.edge_count(), 1);
        let (a, b) = (net.node(0), net.node(1));
        let dist = (a.x.unwrap() - b.x.unwrap()).hypot(a.y.unwrap() - b.y.unwrap());
        assert_eq!(net.edges()[0].cost, dist);

        let stats = topology_stats(&net).unwrap();
        assert_eq!(stats.mscp, dist);
        assert_eq!(stats.msdp, net.edges()[0].delay as f64);
    }

    #[test]
    fn same_config_same_network() {
        let cfg = GenConfig::new(30, 99);
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        assert_eq!(a.to_document(), b.to_document());
        let c = generate(&GenConfig::new(30, 100)).unwrap();
        assert_ne!(a.to_document(), c.to_document());
    }

    #[test]
    fn values_within_ranges() {
        let net = generate(&GenConfig::new(40, 3)).unwrap();
        assert!(net.is_connected());
        for node in net.nodes() {
            assert!((4.0..8.0).contains(&node.cost));
            assert!((1..=3).contains(&node.delay));
            assert!((0.0..=20.0).contains(&node.x.unwrap()));
            assert!((0.0..=20.0).contains(&node.y.unwrap()));
        }
        for e in net.edges() {
            assert!((1..=5).contains(&e.delay));
        }
    }

    #[test]
    fn coordinates_ignore_later_fields() {
        // Changing the node delay range must not move any node or edge.
        let a = generate(&GenConfig {
            p: Some(1.0),
            ..GenConfig::new(8, 5)
        })
        .unwrap();
        let b = generate(&GenConfig {
            p: Some(1.0),
            node_delay_range: (2, 9),
            ..GenConfig::new(8, 5)
        })
        .unwrap();
        for (x, y) in a.nodes().iter().zip(b.nodes()) {
            assert_eq!((x.x, x.y, x.cost), (y.x, y.y, y.cost));
        }
        assert_eq!(a.to_document().edges, b.to_document().edges);
    }

    #[test]
    fn invalid_configs_rejected() {
        for cfg in [
            GenConfig {
                p: Some(0.0),
                ..GenConfig::default()
            },
            GenConfig {
                p: Some(1.5),
                ..GenConfig::default()
            },
            GenConfig {
                grid: 0.0,
                ..GenConfig::default()
            },
            GenConfig {
                edge_delay_range: (0, 5),
                ..GenConfig::default()
            },
            GenConfig {
                edge_delay_range: (5, 1),
                ..GenConfig::default()
            },
            GenConfig {
                node_cost_range: (8.0, 4.0),
                ..GenConfig::default()
            },
        ] {
            assert!(
                matches!(generate(&cfg), Err(Error::InvalidConfig(_))),
                "{cfg:?}"
            );
        }
    }

    #[test]
    fn hopeless_probability_gives_up() {
        let cfg = GenConfig {
            p: Some(1e-9),
            ..GenConfig::new(10, 1)
        };
        assert!(matches!(
            generate(&cfg),
            Err(Error::GenerationFailed {
                retries: MAX_RETRIES
            })
        ));
    }

    #[test]
    fn disconnected_stats_rejected() {
        let net = Network::new(vec![Node::new(0, 1.0, 1), Node::new(1, 1.0, 1)], vec![]).unwrap();
        assert!(matches!(topology_stats(&net), Err(Error::Disconnected)));
    }

    #[test]
    fn mean_edge_delay_near_three() {
        let mut sum = 0.0;
        let mut count = 0.0;
        for seed in 0..20 {
            let net = generate(&GenConfig {
                p: Some(0.4),
                ..GenConfig::new(20, seed)
            })
            .unwrap();
            sum += net.edges().iter().map(|e| e.delay as f64).sum::<f64>();
            count += net.edge_count() as f64;
        }
        let mean = sum / count;
        assert!((2.7..=3.3).contains(&mean), "{mean}");
    }

    #[test]
    fn config_file_keys() {
        let cfg: GenConfig = serde_json::from_str(r#"{"n": 12, "p": 0.3, "seed": 4}"#).unwrap();
        assert_eq!(cfg.n, 12);
        assert_eq!(cfg.edge_probability(), 0.3);
        assert_eq!(cfg.grid, 20.0);
    }
}
