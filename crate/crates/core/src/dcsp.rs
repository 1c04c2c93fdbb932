//! All-pairs delay-guaranteed shortest paths.
//!
//! `gamma[u][v][d]` is the minimum cost of a `u -> v` walk whose edge
//! delays sum to exactly `d`:
//!
//! ```text
//! gamma[u][u][0] = 0
//! gamma[u][v][d] = min over edges (w, v) with delay(w, v) <= d of
//!                  gamma[u][w][d - delay(w, v)] + cost(w, v)
//! ```
//!
//! Every edge delay is at least one, so each entry depends only on entries
//! with a strictly smaller `d` and a single pass over `d = 1..=budget`
//! suffices. The per-pair answer is the cheapest entry over `d <= budget`,
//! taking the smallest `d` among equal costs.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::network::{Cost, Delay, Network, NodeId};

const NO_PRED: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct DcspTables {
    n: usize,
    budget: Delay,
    ids: Vec<NodeId>,
    /// Row-major `[u][v][d]`; `f64::INFINITY` marks "no such walk".
    gamma: Vec<Cost>,
    /// Edge index of the last hop of the walk stored in `gamma`.
    pred: Vec<u32>,
    psi_cost: Vec<Cost>,
    psi_delay: Vec<Delay>,
}

impl DcspTables {
    pub fn budget(&self) -> Delay {
        self.budget
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    fn depth(&self) -> usize {
        self.budget as usize + 1
    }

    fn slot(&self, u: usize, v: usize, d: Delay) -> usize {
        (u * self.n + v) * self.depth() + d as usize
    }

    /// Minimum cost of a walk with edge delay exactly `d`, if any.
    pub fn gamma(&self, u: usize, v: usize, d: Delay) -> Option<Cost> {
        if d > self.budget {
            return None;
        }
        finite(self.gamma[self.slot(u, v, d)])
    }

    /// Cost of the delay-guaranteed shortest path from `u` to `v`.
    pub fn psi_cost(&self, u: usize, v: usize) -> Option<Cost> {
        finite(self.psi_cost[u * self.n + v])
    }

    /// Delay of the delay-guaranteed shortest path from `u` to `v`.
    pub fn psi_delay(&self, u: usize, v: usize) -> Option<Delay> {
        self.psi_cost(u, v).map(|_| self.psi_delay[u * self.n + v])
    }

    /// One optimal walk `u -> v` as node indices, with edge cost and delay
    /// summing to exactly `psi_cost(u, v)` and `psi_delay(u, v)`.
    pub fn extract_path(&self, net: &Network, u: usize, v: usize) -> Result<Vec<usize>> {
        let Some(delay) = self.psi_delay(u, v) else {
            return Err(Error::NoFeasiblePath {
                from: self.ids[u],
                to: self.ids[v],
            });
        };
        let mut walk = vec![v];
        let (mut node, mut d) = (v, delay);
        while d > 0 {
            let edge = &net.edges()[self.pred[self.slot(u, node, d)] as usize];
            d -= edge.delay;
            node = edge.other(node);
            walk.push(node);
        }
        debug_assert_eq!(node, u);
        walk.reverse();
        Ok(walk)
    }
}

fn finite(c: Cost) -> Option<Cost> {
    c.is_finite().then_some(c)
}

/// Fills the tables for every ordered pair with per-pair delay budget
/// `budget`. Rows for different sources are independent and are computed in
/// parallel.
pub fn build_tables(net: &Network, budget: Delay) -> DcspTables {
    let n = net.node_count();
    let depth = budget as usize + 1;
    let row_len = n * depth;
    let mut gamma = vec![f64::INFINITY; n * row_len];
    let mut pred = vec![NO_PRED; n * row_len];

    if row_len > 0 {
        gamma
            .par_chunks_mut(row_len)
            .zip(pred.par_chunks_mut(row_len))
            .enumerate()
            .for_each(|(u, (g, p))| fill_row(net, u, depth, g, p));
    }

    let mut psi_cost = vec![f64::INFINITY; n * n];
    let mut psi_delay = vec![0; n * n];
    for pair in 0..n * n {
        let entries = &gamma[pair * depth..(pair + 1) * depth];
        for (d, &c) in entries.iter().enumerate() {
            if c < psi_cost[pair] {
                psi_cost[pair] = c;
                psi_delay[pair] = d as Delay;
            }
        }
    }

    DcspTables {
        n,
        budget,
        ids: net.nodes().iter().map(|node| node.id).collect(),
        gamma,
        pred,
        psi_cost,
        psi_delay,
    }
}

fn fill_row(net: &Network, u: usize, depth: usize, gamma: &mut [Cost], pred: &mut [u32]) {
    gamma[u * depth] = 0.0;
    for d in 1..depth {
        for v in 0..net.node_count() {
            let mut best = f64::INFINITY;
            let mut best_edge = NO_PRED;
            let mut best_from = NodeId::MAX;
            for &(w, e) in net.neighbors(v) {
                let edge = &net.edges()[e];
                let hop = edge.delay as usize;
                if hop > d {
                    continue;
                }
                let cand = gamma[w * depth + d - hop] + edge.cost;
                let from = net.id(w);
                if cand < best || (cand == best && cand.is_finite() && from < best_from) {
                    best = cand;
                    best_edge = e as u32;
                    best_from = from;
                }
            }
            gamma[v * depth + d] = best;
            pred[v * depth + d] = best_edge;
        }
    }
}
