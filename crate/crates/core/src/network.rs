//! Network model, requests, embeddings and their on-disk documents.
//!
//! Nodes are addressed two ways: by their external `u32` id (what the
//! instance document and every user-facing output use) and by their dense
//! index into [`Network::nodes`], which is what the solvers work with.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = u32;
pub type Cost = f64;
pub type Delay = u64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    /// VNF setup cost paid when the node hosts a function.
    pub cost: Cost,
    /// Processing delay paid when the node hosts a function.
    pub delay: Delay,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
}

impl Node {
    pub fn new(id: NodeId, cost: Cost, delay: Delay) -> Self {
        Node {
            id,
            cost,
            delay,
            x: None,
            y: None,
        }
    }
}

/// Edge as written in the instance document (endpoints are node ids).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: NodeId,
    pub v: NodeId,
    pub cost: Cost,
    pub delay: Delay,
}

impl EdgeRecord {
    pub fn new(u: NodeId, v: NodeId, cost: Cost, delay: Delay) -> Self {
        EdgeRecord { u, v, cost, delay }
    }
}

/// Edge with endpoints resolved to node indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub cost: Cost,
    pub delay: Delay,
}

impl Edge {
    pub fn other(&self, end: usize) -> usize {
        if end == self.a {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub nodes: Vec<Node>,
    pub edges: Vec<EdgeRecord>,
}

/// Undirected simple graph with a (cost, delay) pair on every node and edge.
#[derive(Debug, Clone)]
pub struct Network {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    index: HashMap<NodeId, usize>,
    adjacency: Vec<Vec<(usize, usize)>>,
    edge_index: HashMap<(usize, usize), usize>,
}

fn check_cost(what: &str, cost: Cost) -> Result<()> {
    if !cost.is_finite() || cost < 0.0 {
        return Err(Error::Validation(format!(
            "{what} must be a finite nonnegative number, got {cost}"
        )));
    }
    Ok(())
}

impl Network {
    pub fn new(nodes: Vec<Node>, edge_records: Vec<EdgeRecord>) -> Result<Self> {
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            if index.insert(node.id, i).is_some() {
                return Err(Error::Validation(format!("duplicate node id {}", node.id)));
            }
            check_cost(&format!("cost of node {}", node.id), node.cost)?;
        }

        let mut adjacency = vec![Vec::new(); nodes.len()];
        let mut edge_index = HashMap::with_capacity(edge_records.len());
        let mut edges = Vec::with_capacity(edge_records.len());
        for rec in &edge_records {
            let a = *index.get(&rec.u).ok_or_else(|| {
                Error::Validation(format!("edge references unknown node {}", rec.u))
            })?;
            let b = *index.get(&rec.v).ok_or_else(|| {
                Error::Validation(format!("edge references unknown node {}", rec.v))
            })?;
            if a == b {
                return Err(Error::Validation(format!("self-loop on node {}", rec.u)));
            }
            if rec.delay < 1 {
                return Err(Error::Validation(format!(
                    "edge_delay must be ≥ 1 (edge {}-{})",
                    rec.u, rec.v
                )));
            }
            check_cost(&format!("cost of edge {}-{}", rec.u, rec.v), rec.cost)?;
            let key = (a.min(b), a.max(b));
            if edge_index.insert(key, edges.len()).is_some() {
                return Err(Error::Validation(format!(
                    "parallel edge between {} and {}",
                    rec.u, rec.v
                )));
            }
            adjacency[a].push((b, edges.len()));
            adjacency[b].push((a, edges.len()));
            edges.push(Edge {
                a,
                b,
                cost: rec.cost,
                delay: rec.delay,
            });
        }

        Ok(Network {
            nodes,
            edges,
            index,
            adjacency,
            edge_index,
        })
    }

    pub fn from_document(doc: InstanceDocument) -> Result<Self> {
        Network::new(doc.nodes, doc.edges)
    }

    /// Parses and validates an instance document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InstanceDocument = serde_json::from_str(text)?;
        Network::from_document(doc)
    }

    pub fn to_document(&self) -> InstanceDocument {
        InstanceDocument {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord::new(self.nodes[e.a].id, self.nodes[e.b].id, e.cost, e.delay))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("instance document serializes")
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, idx: usize) -> &Node {
        &self.nodes[idx]
    }

    pub fn id(&self, idx: usize) -> NodeId {
        self.nodes[idx].id
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn resolve(&self, id: NodeId) -> Result<usize> {
        self.index_of(id).ok_or(Error::UnknownNode(id))
    }

    /// `(neighbor index, edge index)` pairs incident to `idx`.
    pub fn neighbors(&self, idx: usize) -> &[(usize, usize)] {
        &self.adjacency[idx]
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<&Edge> {
        self.edge_index
            .get(&(a.min(b), a.max(b)))
            .map(|&e| &self.edges[e])
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.nodes.len()
    }

    /// Sum of edge cost/delay along a walk of node indices, counted per
    /// traversal. `None` if two consecutive nodes are not adjacent.
    pub fn walk_weight(&self, walk: &[usize]) -> Option<(Cost, Delay)> {
        let mut cost = 0.0;
        let mut delay = 0;
        for pair in walk.windows(2) {
            let e = self.edge_between(pair[0], pair[1])?;
            cost += e.cost;
            delay += e.delay;
        }
        Some((cost, delay))
    }

    /// Total cost and delay of an embedding: walk edges followed by hosts.
    /// This is the one summation order used everywhere totals are reported.
    pub fn embedding_totals(&self, walk: &[usize], hosts: &[usize]) -> Option<(Cost, Delay)> {
        let (mut cost, mut delay) = self.walk_weight(walk)?;
        for &h in hosts {
            cost += self.nodes[h].cost;
            delay += self.nodes[h].delay;
        }
        Some((cost, delay))
    }
}

#[derive(PartialEq)]
struct Frontier(f64, usize);

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra distances from `source` under a nonnegative weight given per
/// edge index. Unreachable nodes are `f64::INFINITY`.
pub fn distances_from(net: &Network, source: usize, weight: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; net.node_count()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Frontier(0.0, source));
    while let Some(Frontier(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, e) in net.neighbors(u) {
            let cand = d + weight(e);
            if cand < dist[v] {
                dist[v] = cand;
                heap.push(Frontier(cand, v));
            }
        }
    }
    dist
}

/// A flow request: route from `source` to `target` through `chain_length`
/// distinct hosts with total delay at most `delay_bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Request {
    pub source: NodeId,
    pub target: NodeId,
    pub chain_length: usize,
    pub delay_bound: Delay,
}

impl Request {
    pub fn new(source: NodeId, target: NodeId, chain_length: usize, delay_bound: Delay) -> Self {
        Request {
            source,
            target,
            chain_length,
            delay_bound,
        }
    }

    /// Checks the request against `net` and returns the (source, target)
    /// node indices. A zero delay bound is accepted; every solver reports it
    /// as infeasible.
    pub fn resolve(&self, net: &Network) -> Result<(usize, usize)> {
        let s = net.resolve(self.source)?;
        let t = net.resolve(self.target)?;
        if s == t {
            return Err(Error::Validation("source and target must differ".into()));
        }
        if self.chain_length < 1 {
            return Err(Error::Validation("chain_length must be ≥ 1".into()));
        }
        if self.chain_length + 2 > net.node_count() {
            return Err(Error::Validation(format!(
                "chain_length {} exceeds the {} candidate hosts",
                self.chain_length,
                net.node_count().saturating_sub(2)
            )));
        }
        Ok((s, t))
    }
}

/// A chain placed on a walk from source to target.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub walk: Vec<NodeId>,
    pub hosts: Vec<NodeId>,
    /// Position in `walk` of each host, strictly increasing.
    pub host_positions: Vec<usize>,
    pub total_cost: Cost,
    pub total_delay: Delay,
    pub algorithm: String,
}

impl Embedding {
    /// Builds an embedding from node indices, computing totals with
    /// [`Network::embedding_totals`]. Panics if the walk is not connected.
    pub(crate) fn from_indices(
        net: &Network,
        walk: &[usize],
        host_positions: Vec<usize>,
        algorithm: &str,
    ) -> Embedding {
        let hosts: Vec<usize> = host_positions.iter().map(|&p| walk[p]).collect();
        let (total_cost, total_delay) = net
            .embedding_totals(walk, &hosts)
            .expect("solver produced a disconnected walk");
        Embedding {
            walk: walk.iter().map(|&i| net.id(i)).collect(),
            hosts: hosts.iter().map(|&i| net.id(i)).collect(),
            host_positions,
            total_cost,
            total_delay,
            algorithm: algorithm.to_string(),
        }
    }

    pub fn to_document(&self) -> SolutionDocument {
        SolutionDocument {
            walk: self.walk.clone(),
            hosts: self.hosts.clone(),
            total_cost: Some(self.total_cost),
            total_delay: Some(self.total_delay),
            algorithm: self.algorithm.clone(),
            feasible: true,
        }
    }
}

/// Solution file contents. Infeasible outcomes carry empty sequences and
/// null totals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub walk: Vec<NodeId>,
    pub hosts: Vec<NodeId>,
    pub total_cost: Option<Cost>,
    pub total_delay: Option<Delay>,
    pub algorithm: String,
    pub feasible: bool,
}

impl SolutionDocument {
    pub fn infeasible(algorithm: &str) -> Self {
        SolutionDocument {
            walk: Vec::new(),
            hosts: Vec::new(),
            total_cost: None,
            total_delay: None,
            algorithm: algorithm.to_string(),
            feasible: false,
        }
    }

    /// Rebuilds an embedding, assigning each host to its earliest walk
    /// position after the previous host. `None` for infeasible documents.
    pub fn to_embedding(&self) -> Option<Embedding> {
        if !self.feasible {
            return None;
        }
        Some(Embedding {
            walk: self.walk.clone(),
            hosts: self.hosts.clone(),
            host_positions: earliest_positions(&self.walk, &self.hosts).unwrap_or_default(),
            total_cost: self.total_cost?,
            total_delay: self.total_delay?,
            algorithm: self.algorithm.clone(),
        })
    }
}

fn earliest_positions(walk: &[NodeId], hosts: &[NodeId]) -> Option<Vec<usize>> {
    let mut positions = Vec::with_capacity(hosts.len());
    let mut from = 0;
    for h in hosts {
        let offset = walk[from..].iter().position(|w| w == h)?;
        positions.push(from + offset);
        from += offset + 1;
    }
    Some(positions)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub recomputed_cost: Option<Cost>,
    pub recomputed_delay: Option<Delay>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name,
            passed,
            detail: detail.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{mark} {}", c.name)?;
            } else {
                writeln!(f, "{mark} {}: {}", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}

fn relative_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Checks every embedding constraint of the model against `emb` and
/// recomputes its totals. Never fails; failures are recorded in the report.
pub fn validate_embedding(net: &Network, req: &Request, emb: &Embedding) -> ValidationReport {
    let mut report = ValidationReport {
        checks: Vec::new(),
        recomputed_cost: None,
        recomputed_delay: None,
    };

    let walk: Option<Vec<usize>> = emb.walk.iter().map(|&id| net.index_of(id)).collect();
    let hosts: Option<Vec<usize>> = emb.hosts.iter().map(|&id| net.index_of(id)).collect();
    let (walk, hosts) = match (walk, hosts) {
        (Some(w), Some(h)) => (w, h),
        _ => {
            report.push(
                "known_nodes",
                false,
                "embedding references unknown node ids",
            );
            return report;
        }
    };
    report.push("known_nodes", true, "");

    let endpoints_ok =
        emb.walk.first() == Some(&req.source) && emb.walk.last() == Some(&req.target);
    report.push(
        "endpoints",
        endpoints_ok,
        if endpoints_ok {
            String::new()
        } else {
            "walk must run from source to target".into()
        },
    );

    let broken = walk
        .windows(2)
        .find(|p| net.edge_between(p[0], p[1]).is_none());
    match broken {
        None => report.push("connectivity", true, ""),
        Some(p) => report.push(
            "connectivity",
            false,
            format!("no edge between {} and {}", net.id(p[0]), net.id(p[1])),
        ),
    }

    let count_ok = hosts.len() == req.chain_length;
    report.push(
        "host_count",
        count_ok,
        if count_ok {
            String::new()
        } else {
            format!(
                "{} hosts for a chain of length {}",
                hosts.len(),
                req.chain_length
            )
        },
    );

    let distinct = hosts.iter().collect::<HashSet<_>>().len() == hosts.len();
    report.push(
        "host_distinct",
        distinct,
        if distinct {
            ""
        } else {
            "a node hosts more than one function"
        },
    );

    let excluded = !emb
        .hosts
        .iter()
        .any(|&h| h == req.source || h == req.target);
    report.push(
        "endpoint_exclusion",
        excluded,
        if excluded {
            ""
        } else {
            "endpoint hosts forbidden"
        },
    );

    let stated_order_ok = emb.host_positions.len() == emb.hosts.len()
        && emb.host_positions.windows(2).all(|p| p[0] < p[1])
        && emb
            .host_positions
            .iter()
            .zip(&emb.hosts)
            .all(|(&p, h)| emb.walk.get(p) == Some(h));
    let order_ok = stated_order_ok || earliest_positions(&emb.walk, &emb.hosts).is_some();
    report.push(
        "host_order",
        order_ok,
        if order_ok {
            ""
        } else {
            "hosts do not appear along the walk in chain order"
        },
    );

    match net.embedding_totals(&walk, &hosts) {
        Some((cost, delay)) => {
            report.recomputed_cost = Some(cost);
            report.recomputed_delay = Some(delay);
            let bound_ok = delay <= req.delay_bound;
            report.push(
                "delay_bound",
                bound_ok,
                format!("delay {delay} vs bound {}", req.delay_bound),
            );
            let totals_ok = delay == emb.total_delay && relative_close(cost, emb.total_cost, 1e-9);
            report.push(
                "totals",
                totals_ok,
                if totals_ok {
                    String::new()
                } else {
                    format!(
                        "stored ({}, {}) vs recomputed ({cost}, {delay})",
                        emb.total_cost, emb.total_delay
                    )
                },
            );
        }
        None => {
            report.push("delay_bound", false, "walk is not connected");
            report.push("totals", false, "walk is not connected");
        }
    }

    report
}
