//! Shared fixtures and brute-force oracles for the integration tests.
#![allow(dead_code)]

use dmcs_core::network::{Cost, Delay, EdgeRecord, Node};
use dmcs_core::Network;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Connected random graph: a random spanning tree plus extra edges with
/// probability `p`. Node ids are `0..n`.
pub fn random_connected(
    seed: u64,
    n: usize,
    p: f64,
    edge_delay: (Delay, Delay),
    node_delay: (Delay, Delay),
) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = (0..n as u32)
        .map(|i| {
            let cost = (rng.gen_range(0..=80) as f64) / 10.0;
            Node::new(i, cost, rng.gen_range(node_delay.0..=node_delay.1))
        })
        .collect();
    let mut edges = Vec::new();
    // Random spanning tree: parent[v] < v.
    let parent: Vec<usize> = (0..n)
        .map(|v| if v == 0 { 0 } else { rng.gen_range(0..v) })
        .collect();
    for u in 0..n {
        for (v, &pv) in parent.iter().enumerate().skip(u + 1) {
            if pv == u || rng.gen_bool(p) {
                // Quarter-unit costs keep many exact ties in play.
                let cost = rng.gen_range(0..=40) as f64 / 4.0;
                let delay = rng.gen_range(edge_delay.0..=edge_delay.1);
                edges.push(EdgeRecord::new(u as u32, v as u32, cost, delay));
            }
        }
    }
    Network::new(nodes, edges).unwrap()
}

/// Minimum cost over simple u-v paths with edge delay at most `budget`, and
/// the least delay among those of that cost. `None` when no path fits.
pub fn brute_force_dcsp(net: &Network, u: usize, v: usize, budget: Delay) -> Option<(Cost, Delay)> {
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        net: &Network,
        at: usize,
        v: usize,
        cost: Cost,
        delay: Delay,
        budget: Delay,
        seen: &mut Vec<bool>,
        best: &mut Option<(Cost, Delay)>,
    ) {
        if delay > budget {
            return;
        }
        if at == v {
            let better = match *best {
                None => true,
                Some((c, d)) => cost < c || (cost == c && delay < d),
            };
            if better {
                *best = Some((cost, delay));
            }
            return;
        }
        for &(w, e) in net.neighbors(at) {
            if !seen[w] {
                let edge = net.edges()[e];
                seen[w] = true;
                dfs(
                    net,
                    w,
                    v,
                    cost + edge.cost,
                    delay + edge.delay,
                    budget,
                    seen,
                    best,
                );
                seen[w] = false;
            }
        }
    }
    let mut seen = vec![false; net.node_count()];
    seen[u] = true;
    let mut best = None;
    dfs(net, u, v, 0.0, 0, budget, &mut seen, &mut best);
    best
}

/// Optimum embedding cost over walks, computed independently of the crate's
/// solvers: every ordered tuple of distinct hosts, joined by minimum-cost
/// walks of each exact delay, then a knapsack over the segment delays.
pub fn brute_force_walk_optimum(
    net: &Network,
    s: usize,
    t: usize,
    l: usize,
    bound: Delay,
) -> Option<Cost> {
    let n = net.node_count();
    let b = bound as usize;
    // walk[u][d][v]: cheapest walk u -> v with edge delay exactly d.
    let walk: Vec<Vec<Vec<Cost>>> = (0..n)
        .map(|u| {
            let mut table = vec![vec![f64::INFINITY; n]; b + 1];
            table[0][u] = 0.0;
            for d in 1..=b {
                for v in 0..n {
                    for &(w, e) in net.neighbors(v) {
                        let edge = net.edges()[e];
                        let dd = edge.delay as usize;
                        if dd <= d {
                            let c = table[d - dd][w] + edge.cost;
                            if c < table[d][v] {
                                table[d][v] = c;
                            }
                        }
                    }
                }
            }
            table
        })
        .collect();

    let candidates: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut best: Option<Cost> = None;
    let mut tuple = Vec::new();
    let mut used = vec![false; n];
    enumerate(&candidates, l, &mut tuple, &mut used, &mut |hosts| {
        let mut stops = vec![s];
        stops.extend_from_slice(hosts);
        stops.push(t);
        let host_delay: usize = hosts.iter().map(|&h| net.node(h).delay as usize).sum();
        if host_delay > b {
            return;
        }
        let host_cost: Cost = hosts.iter().map(|&h| net.node(h).cost).sum();
        let budget = b - host_delay;
        // acc[d]: cheapest chain so far using edge delay exactly d.
        let mut acc = vec![f64::INFINITY; budget + 1];
        acc[0] = 0.0;
        for pair in stops.windows(2) {
            let mut next = vec![f64::INFINITY; budget + 1];
            for d0 in 0..=budget {
                if acc[d0].is_finite() {
                    for d1 in 0..=budget - d0 {
                        let c = acc[d0] + walk[pair[0]][d1][pair[1]];
                        if c < next[d0 + d1] {
                            next[d0 + d1] = c;
                        }
                    }
                }
            }
            acc = next;
        }
        let edge_cost = acc.iter().copied().fold(f64::INFINITY, f64::min);
        if edge_cost.is_finite() {
            let total = edge_cost + host_cost;
            if best.is_none_or(|c| total < c) {
                best = Some(total);
            }
        }
    });
    best
}

fn enumerate(
    candidates: &[usize],
    l: usize,
    tuple: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut impl FnMut(&[usize]),
) {
    if tuple.len() == l {
        visit(tuple);
        return;
    }
    for &c in candidates {
        if !used[c] {
            used[c] = true;
            tuple.push(c);
            enumerate(candidates, l, tuple, used, visit);
            tuple.pop();
            used[c] = false;
        }
    }
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
