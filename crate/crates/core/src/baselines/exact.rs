//! Exact optima for small instances.
//!
//! [`solve_exact`] optimises over walks: relays may repeat, hosts are
//! distinct. This is the solution space the greedy solver searches, so its
//! optimum bounds every heuristic. It is a bicriteria label-setting search
//! over `(node, host set)` states ordered by cost, keeping per state only
//! labels that improve on the smallest delay settled so far.
//!
//! [`solve_exact_simple`] restricts to simple paths. Depth-first enumeration of simple paths with branch-and-bound; every path
//! reaching the target gets an optimal host selection. Bounds use the
//! unconstrained min-delay and min-cost distances to the target plus the
//! `l` smallest node delays / costs among candidates, all of which are
//! lower bounds on what any completion must still pay.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::baselines::hosts::select_hosts;
use crate::error::{Error, Result};
use crate::network::{distances_from, Cost, Delay, Embedding, Network, NodeId, Request};

pub const ALGORITHM: &str = "exact";
pub const ALGORITHM_SIMPLE: &str = "exact-simple";
pub const DEFAULT_NODE_LIMIT: usize = 15;

struct Search<'a> {
    net: &'a Network,
    req: &'a Request,
    target: usize,
    delay_to_target: Vec<f64>,
    cost_to_target: Vec<f64>,
    min_host_delay: Delay,
    min_host_cost: Cost,
    path: Vec<usize>,
    on_path: Vec<bool>,
    best: Option<Incumbent>,
}

struct Incumbent {
    cost: Cost,
    delay: Delay,
    ids: Vec<NodeId>,
    walk: Vec<usize>,
    positions: Vec<usize>,
}

impl Search<'_> {
    fn dfs(&mut self, u: usize, cost: Cost, delay: Delay) {
        if delay as f64 + self.delay_to_target[u] + self.min_host_delay as f64
            > self.req.delay_bound as f64
        {
            return;
        }
        if let Some(b) = &self.best {
            // Slack keeps summation-order rounding from pruning an optimum.
            let bound = cost + self.cost_to_target[u] + self.min_host_cost;
            if bound - b.cost > 1e-9 * b.cost.abs().max(1.0) {
                return;
            }
        }
        if u == self.target {
            self.evaluate(delay);
            return;
        }
        for i in 0..self.net.neighbors(u).len() {
            let (v, e) = self.net.neighbors(u)[i];
            if self.on_path[v] {
                continue;
            }
            let edge = self.net.edges()[e];
            self.on_path[v] = true;
            self.path.push(v);
            self.dfs(v, cost + edge.cost, delay + edge.delay);
            self.path.pop();
            self.on_path[v] = false;
        }
    }

    fn evaluate(&mut self, path_delay: Delay) {
        let interior = &self.path[1..self.path.len() - 1];
        let Ok(sel) = select_hosts(
            self.net,
            interior,
            self.req.chain_length,
            self.req.delay_bound - path_delay,
        ) else {
            return;
        };
        let hosts: Vec<usize> = sel.hosts.clone();
        let (cost, delay) = self
            .net
            .embedding_totals(&self.path, &hosts)
            .expect("search follows edges");
        let ids: Vec<NodeId> = self.path.iter().map(|&v| self.net.id(v)).collect();
        let improves = self.best.as_ref().is_none_or(|b| {
            cost.total_cmp(&b.cost)
                .then(delay.cmp(&b.delay))
                .then_with(|| ids.cmp(&b.ids))
                .is_lt()
        });
        if improves {
            self.best = Some(Incumbent {
                cost,
                delay,
                ids,
                walk: self.path.clone(),
                positions: sel.positions.iter().map(|p| p + 1).collect(),
            });
        }
    }
}

/// Minimum-cost embedding restricted to simple paths. Refuses networks with
/// more than `node_limit` nodes.
pub fn solve_exact_simple(net: &Network, req: &Request, node_limit: usize) -> Result<Embedding> {
    if net.node_count() > node_limit {
        return Err(Error::InstanceTooLarge {
            nodes: net.node_count(),
            limit: node_limit,
        });
    }
    let (s, t) = req.resolve(net)?;
    let l = req.chain_length;

    let mut host_delays: Vec<Delay> = (0..net.node_count())
        .filter(|&v| v != s && v != t)
        .map(|v| net.node(v).delay)
        .collect();
    host_delays.sort_unstable();
    let mut host_costs: Vec<Cost> = (0..net.node_count())
        .filter(|&v| v != s && v != t)
        .map(|v| net.node(v).cost)
        .collect();
    host_costs.sort_unstable_by(f64::total_cmp);

    let mut on_path = vec![false; net.node_count()];
    on_path[s] = true;
    let mut search = Search {
        net,
        req,
        target: t,
        delay_to_target: distances_from(net, t, |e| net.edges()[e].delay as f64),
        cost_to_target: distances_from(net, t, |e| net.edges()[e].cost),
        min_host_delay: host_delays.iter().take(l).sum(),
        min_host_cost: host_costs.iter().take(l).sum(),
        path: vec![s],
        on_path,
        best: None,
    };
    search.dfs(s, 0.0, 0);

    let best = search.best.ok_or(Error::Infeasible)?;
    Ok(Embedding::from_indices(
        net,
        &best.walk,
        best.positions,
        ALGORITHM_SIMPLE,
    ))
}

struct Label {
    node: usize,
    mask: u64,
    delay: Delay,
    parent: Option<usize>,
    /// True when this label hosts at `node` instead of moving to it.
    hosted: bool,
}

#[derive(PartialEq)]
struct Key {
    cost: Cost,
    delay: Delay,
    label: usize,
}

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then(self.delay.cmp(&other.delay))
            .then(self.label.cmp(&other.label))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimum-cost embedding over walks, ties broken by smaller delay. Refuses
/// networks with more than `node_limit` nodes (and more than 64 candidate
/// hosts).
pub fn solve_exact(net: &Network, req: &Request, node_limit: usize) -> Result<Embedding> {
    let n = net.node_count();
    if n > node_limit || n > 66 {
        return Err(Error::InstanceTooLarge {
            nodes: n,
            limit: node_limit.min(66),
        });
    }
    let (s, t) = req.resolve(net)?;
    let l = req.chain_length;

    // Candidate bit per node; endpoints have none.
    let mut bit = vec![None; n];
    let mut host_delays = Vec::new();
    for v in (0..n).filter(|&v| v != s && v != t) {
        bit[v] = Some(host_delays.len());
        host_delays.push(net.node(v).delay);
    }
    host_delays.sort_unstable();
    // still_needed[k]: least hosting delay of k more hosts.
    let mut still_needed = vec![0; l + 1];
    for k in 1..=l {
        still_needed[k] = still_needed[k - 1] + host_delays[k - 1];
    }
    let delay_to_target = distances_from(net, t, |e| net.edges()[e].delay as f64);
    let fits = |v: usize, mask: u64, delay: Delay| {
        let remaining = l - mask.count_ones() as usize;
        delay as f64 + delay_to_target[v] + still_needed[remaining] as f64 <= req.delay_bound as f64
    };

    let mut labels: Vec<Label> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut settled: HashMap<(usize, u64), Delay> = HashMap::new();
    let push =
        |heap: &mut BinaryHeap<Reverse<Key>>, labels: &mut Vec<Label>, label: Label, cost: Cost| {
            if fits(label.node, label.mask, label.delay) {
                heap.push(Reverse(Key {
                    cost,
                    delay: label.delay,
                    label: labels.len(),
                }));
                labels.push(label);
            }
        };
    push(
        &mut heap,
        &mut labels,
        Label {
            node: s,
            mask: 0,
            delay: 0,
            parent: None,
            hosted: false,
        },
        0.0,
    );

    let mut found = None;
    while let Some(Reverse(Key { cost, delay, label })) = heap.pop() {
        let (v, mask) = (labels[label].node, labels[label].mask);
        match settled.get(&(v, mask)) {
            Some(&d) if d <= delay => continue,
            _ => settled.insert((v, mask), delay),
        };
        let hosted = mask.count_ones() as usize;
        if v == t && hosted == l {
            found = Some(label);
            break;
        }
        if hosted < l {
            if let Some(b) = bit[v].filter(|&b| mask & (1 << b) == 0) {
                let node = net.node(v);
                let next = Label {
                    node: v,
                    mask: mask | (1 << b),
                    delay: delay + node.delay,
                    parent: Some(label),
                    hosted: true,
                };
                push(&mut heap, &mut labels, next, cost + node.cost);
            }
        }
        for &(w, e) in net.neighbors(v) {
            let edge = net.edges()[e];
            let next = Label {
                node: w,
                mask,
                delay: delay + edge.delay,
                parent: Some(label),
                hosted: false,
            };
            push(&mut heap, &mut labels, next, cost + edge.cost);
        }
    }

    let mut label = found.ok_or(Error::Infeasible)?;
    let mut rev_walk = Vec::new();
    // Host positions counted from the end of the walk; a hosting label's
    // node is the next one pushed while unwinding.
    let mut rev_hosts_from_end = Vec::new();
    loop {
        let lab = &labels[label];
        if lab.hosted {
            rev_hosts_from_end.push(rev_walk.len());
        } else {
            rev_walk.push(lab.node);
        }
        match lab.parent {
            Some(p) => label = p,
            None => break,
        }
    }
    let len = rev_walk.len();
    rev_walk.reverse();
    let positions: Vec<usize> = rev_hosts_from_end
        .iter()
        .rev()
        .map(|&k| len - 1 - k)
        .collect();
    Ok(Embedding::from_indices(
        net, &rev_walk, positions, ALGORITHM,
    ))
}


#[cfg(test)]
mod walk_tests {
    use super::*;
    use crate::network::{validate_embedding, EdgeRecord, Node};

    /// s=0 - a=1 (delay 1), a - t=2 (delay 1), a - b=3 (delay 10).
    fn spur() -> Network {
        Network::new(
            (0..4).map(|i| Node::new(i, 1.0, 1)).collect(),
            vec![
                EdgeRecord::new(0, 1, 1.0, 1),
                EdgeRecord::new(1, 2, 1.0, 1),
                EdgeRecord::new(1, 3, 1.0, 10),
            ],
        )
        .unwrap()
    }

    #[test]
    fn second_host_needs_a_revisit() {
        let g = spur();
        let req = Request::new(0, 2, 2, 24);
        let emb = solve_exact(&g, &req, 15).unwrap();
        assert_eq!(emb.walk, vec![0, 1, 3, 1, 2]);
        assert_eq!(emb.hosts, vec![1, 3]);
        assert_eq!((emb.total_cost, emb.total_delay), (6.0, 24));
        assert!(validate_embedding(&g, &req, &emb).passed());

        assert!(matches!(
            solve_exact(&g, &Request::new(0, 2, 2, 23), 15),
            Err(Error::Infeasible)
        ));
        assert!(matches!(
            solve_exact_simple(&g, &req, 15),
            Err(Error::Infeasible)
        ));
    }

    #[test]
    fn host_positions_follow_walk() {
        // Either host order gives the same totals; positions must still
        // point at the hosts.
        let g = spur();
        let emb = solve_exact(&g, &Request::new(0, 2, 2, 40), 15).unwrap();
        let positions: Vec<NodeId> = emb.host_positions.iter().map(|&p| emb.walk[p]).collect();
        assert_eq!(positions, emb.hosts);
        assert!(emb.host_positions.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn never_worse_than_simple_paths() {
        let g = Network::new(
            (0..6).map(|i| Node::new(i, 2.0 + i as f64, 1)).collect(),
            vec![
                EdgeRecord::new(0, 1, 1.0, 1),
                EdgeRecord::new(1, 2, 4.0, 2),
                EdgeRecord::new(2, 5, 1.0, 1),
                EdgeRecord::new(0, 3, 2.0, 1),
                EdgeRecord::new(3, 4, 1.0, 3),
                EdgeRecord::new(4, 5, 2.0, 1),
                EdgeRecord::new(1, 4, 1.0, 1),
            ],
        )
        .unwrap();
        for l in 1..=3 {
            for bound in 0..20 {
                let req = Request::new(0, 5, l, bound);
                let walk = solve_exact(&g, &req, 15);
                if let Ok(simple) = solve_exact_simple(&g, &req, 15) {
                    let walk = walk.unwrap();
                    assert!(walk.total_cost <= simple.total_cost + 1e-9);
                    assert!(validate_embedding(&g, &req, &walk).passed());
                }
            }
        }
    }
}
