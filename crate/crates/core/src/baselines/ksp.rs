//! k-shortest loopless paths (Yen) over edge cost, followed by optimal host
//! selection on each path.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashSet};

use crate::baselines::hosts::select_hosts;
use crate::error::{Error, Result};
use crate::network::{Cost, Delay, Embedding, Network, NodeId, Request};

pub const ALGORITHM: &str = "ksp";
pub const DEFAULT_K: usize = 100;

/// A simple path with its edge cost and edge delay.
#[derive(Debug, Clone, PartialEq)]
pub struct PathCandidate {
    pub nodes: Vec<usize>,
    pub cost: Cost,
    pub delay: Delay,
    ids: Vec<NodeId>,
}

impl PathCandidate {
    fn new(net: &Network, nodes: Vec<usize>) -> Self {
        let (cost, delay) = net.walk_weight(&nodes).expect("path follows edges");
        let ids = nodes.iter().map(|&v| net.id(v)).collect();
        PathCandidate {
            nodes,
            cost,
            delay,
            ids,
        }
    }
}

impl Eq for PathCandidate {}

impl Ord for PathCandidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then(self.delay.cmp(&other.delay))
            .then_with(|| self.ids.cmp(&other.ids))
    }
}

impl PartialOrd for PathCandidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct QueueEntry {
    cost: Cost,
    delay: Delay,
    id: NodeId,
    node: usize,
}

impl Eq for QueueEntry {}

impl Ord for QueueEntry {
    // Reversed: BinaryHeap is a max-heap.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then(other.delay.cmp(&self.delay))
            .then(other.id.cmp(&self.id))
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic (cost, delay) Dijkstra from `from` to `to` avoiding the
/// given nodes and edges.
fn shortest_path(
    net: &Network,
    from: usize,
    to: usize,
    banned_nodes: &[bool],
    banned_edges: &HashSet<usize>,
) -> Option<Vec<usize>> {
    let n = net.node_count();
    let mut dist: Vec<Option<(Cost, Delay)>> = vec![None; n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[from] = Some((0.0, 0));
    heap.push(QueueEntry {
        cost: 0.0,
        delay: 0,
        id: net.id(from),
        node: from,
    });

    while let Some(QueueEntry { node: u, .. }) = heap.pop() {
        if std::mem::replace(&mut done[u], true) {
            continue;
        }
        if u == to {
            break;
        }
        let (cu, du) = dist[u].expect("queued nodes have a distance");
        for &(v, e) in net.neighbors(u) {
            if done[v] || banned_nodes[v] || banned_edges.contains(&e) {
                continue;
            }
            let edge = &net.edges()[e];
            let cand = (cu + edge.cost, du + edge.delay);
            let improves = match dist[v] {
                None => true,
                Some((cv, dv)) => match cand.0.total_cmp(&cv).then(cand.1.cmp(&dv)) {
                    Ordering::Less => true,
                    Ordering::Equal => net.id(u) < net.id(pred[v]),
                    Ordering::Greater => false,
                },
            };
            if improves {
                dist[v] = Some(cand);
                pred[v] = u;
                heap.push(QueueEntry {
                    cost: cand.0,
                    delay: cand.1,
                    id: net.id(v),
                    node: v,
                });
            }
        }
    }

    dist[to]?;
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = pred[cur];
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

/// Lazily enumerates loopless `source -> target` paths in nondecreasing
/// edge cost (ties: lower delay, then lexicographic node id sequence).
pub struct YenPaths<'a> {
    net: &'a Network,
    target: usize,
    accepted: Vec<PathCandidate>,
    candidates: BTreeSet<PathCandidate>,
    seen: HashSet<Vec<usize>>,
    started: bool,
    source: usize,
}

impl<'a> YenPaths<'a> {
    pub fn new(net: &'a Network, source: usize, target: usize) -> Self {
        YenPaths {
            net,
            target,
            accepted: Vec::new(),
            candidates: BTreeSet::new(),
            seen: HashSet::new(),
            started: false,
            source,
        }
    }

    fn spur_from_last(&mut self) {
        let net = self.net;
        let last = self
            .accepted
            .last()
            .expect("called after a path was accepted")
            .nodes
            .clone();
        for i in 0..last.len() - 1 {
            let spur = last[i];
            let root = &last[..=i];
            let mut banned_edges = HashSet::new();
            for p in &self.accepted {
                if p.nodes.len() > i + 1 && p.nodes[..=i] == *root {
                    banned_edges.insert(edge_index(net, p.nodes[i], p.nodes[i + 1]));
                }
            }
            let mut banned_nodes = vec![false; net.node_count()];
            for &v in &root[..i] {
                banned_nodes[v] = true;
            }
            if let Some(tail) = shortest_path(net, spur, self.target, &banned_nodes, &banned_edges)
            {
                let mut nodes = root[..i].to_vec();
                nodes.extend(tail);
                if self.seen.insert(nodes.clone()) {
                    self.candidates.insert(PathCandidate::new(net, nodes));
                }
            }
        }
    }
}

fn edge_index(net: &Network, a: usize, b: usize) -> usize {
    net.neighbors(a)
        .iter()
        .find(|&&(v, _)| v == b)
        .map(|&(_, e)| e)
        .expect("edge exists")
}

impl Iterator for YenPaths<'_> {
    type Item = PathCandidate;

    fn next(&mut self) -> Option<PathCandidate> {
        if !self.started {
            self.started = true;
            let none = vec![false; self.net.node_count()];
            let first = shortest_path(self.net, self.source, self.target, &none, &HashSet::new())?;
            self.seen.insert(first.clone());
            let path = PathCandidate::new(self.net, first);
            self.accepted.push(path.clone());
            return Some(path);
        }
        if self.accepted.is_empty() {
            return None;
        }
        self.spur_from_last();
        let best = self.candidates.pop_first()?;
        self.accepted.push(best.clone());
        Some(best)
    }
}

/// Up to `k` cheapest loopless paths by edge cost.
pub fn k_shortest_paths(
    net: &Network,
    source: usize,
    target: usize,
    k: usize,
) -> Vec<PathCandidate> {
    YenPaths::new(net, source, target).take(k).collect()
}

/// Enumerates up to `k` cheapest loopless paths and places the chain
/// optimally on each; returns the cheapest feasible result.
pub fn solve_ksp(net: &Network, req: &Request, k: usize) -> Result<Embedding> {
    if k < 1 {
        return Err(Error::Validation("k must be ≥ 1".into()));
    }
    let (s, t) = req.resolve(net)?;
    let mut best: Option<(Cost, Delay, PathCandidate, Vec<usize>)> = None;

    for path in YenPaths::new(net, s, t).take(k) {
        // Later paths cost at least as much in edges alone.
        if best.as_ref().is_some_and(|b| path.cost > b.0) {
            break;
        }
        if path.delay > req.delay_bound {
            continue;
        }
        let interior = &path.nodes[1..path.nodes.len() - 1];
        let Ok(sel) = select_hosts(
            net,
            interior,
            req.chain_length,
            req.delay_bound - path.delay,
        ) else {
            continue;
        };
        let total = (path.cost + sel.hosts_cost, path.delay + sel.hosts_delay);
        let improves = best
            .as_ref()
            .is_none_or(|b| total.0.total_cmp(&b.0).then(total.1.cmp(&b.1)).is_lt());
        if improves {
            let positions = sel.positions.iter().map(|p| p + 1).collect();
            best = Some((total.0, total.1, path, positions));
        }
    }

    let (_, _, path, positions) = best.ok_or(Error::NoFeasibleAmongK { k })?;
    Ok(Embedding::from_indices(
        net,
        &path.nodes,
        positions,
        ALGORITHM,
    ))
}
