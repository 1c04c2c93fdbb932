//! Layered auxiliary network for a single request.
//!
//! Level 0 holds the source, levels `1..=l` each hold every candidate host
//! (all nodes except source and target) and level `l + 1` holds the target.
//! An arc `u -> v` between consecutive levels stands for the delay-guaranteed
//! shortest path from `u` to `v` under the per-arc budget `delta1`, plus the
//! hosting weight of `v` when `v` is a candidate.
//!
//! Since all intermediate levels are identical, the arc weights are stored
//! as three matrices (source row, candidate square, target column) rather
//! than once per level pair. Physical walks are reconstructed on demand
//! from the DP tables.

use serde::Serialize;

use crate::dcsp::{build_tables, DcspTables};
use crate::error::{Error, Result};
use crate::network::{Cost, Delay, Network, NodeId, Request};

/// Which nodes the maximum node delay in the per-arc budget ranges over.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum MaxDelayScope {
    /// Candidate hosts only (every node except source and target).
    #[default]
    Candidates,
    /// Every node of the network.
    AllNodes,
}

/// `floor((delay_bound - l * max_node_delay) / (l + 1))`. Negative values
/// are returned as they are.
pub fn compute_delta1(req: &Request, net: &Network, scope: MaxDelayScope) -> Result<i64> {
    let (s, t) = req.resolve(net)?;
    let max_delay = (0..net.node_count())
        .filter(|&v| scope == MaxDelayScope::AllNodes || (v != s && v != t))
        .map(|v| net.node(v).delay)
        .max()
        .unwrap_or(0);
    let l = req.chain_length as i64;
    let slack = req.delay_bound as i64 - l * max_delay as i64;
    Ok(slack.div_euclid(l + 1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcWeight {
    pub cost: Cost,
    pub delay: Delay,
}

impl ArcWeight {
    const INFINITE: ArcWeight = ArcWeight {
        cost: f64::INFINITY,
        delay: 0,
    };

    pub fn is_finite(&self) -> bool {
        self.cost.is_finite()
    }
}

#[derive(Debug, Clone)]
pub struct MultilevelNetwork {
    source: usize,
    target: usize,
    chain_length: usize,
    candidates: Vec<usize>,
    /// Position of each node in `candidates`, `None` for source and target.
    slot: Vec<Option<usize>>,
    from_source: Vec<ArcWeight>,
    between: Vec<ArcWeight>,
    to_target: Vec<ArcWeight>,
    tables: DcspTables,
}

impl MultilevelNetwork {
    /// Computes the per-arc budget, fills the DP tables with it and builds
    /// the layered network.
    pub fn for_request(net: &Network, req: &Request, scope: MaxDelayScope) -> Result<Self> {
        let delta1 = compute_delta1(req, net, scope)?;
        if delta1 < 1 {
            return Err(Error::StructurallyInfeasible { delta1 });
        }
        build_multilevel(net, req, build_tables(net, delta1 as Delay))
    }

    pub fn delta1(&self) -> Delay {
        self.tables.budget()
    }

    pub fn tables(&self) -> &DcspTables {
        &self.tables
    }

    pub fn chain_length(&self) -> usize {
        self.chain_length
    }

    pub fn level_count(&self) -> usize {
        self.chain_length + 2
    }

    pub fn candidates(&self) -> &[usize] {
        &self.candidates
    }

    /// Node indices on `level`.
    pub fn level(&self, level: usize) -> &[usize] {
        if level == 0 {
            std::slice::from_ref(&self.source)
        } else if level <= self.chain_length {
            &self.candidates
        } else if level == self.chain_length + 1 {
            std::slice::from_ref(&self.target)
        } else {
            &[]
        }
    }

    /// Weight of the arc from `from` on `level` to `to` on `level + 1`, or
    /// `None` when no such arc exists in the layered structure. Arcs
    /// without a delay-feasible path carry infinite cost.
    pub fn arc(&self, level: usize, from: usize, to: usize) -> Option<ArcWeight> {
        let l = self.chain_length;
        if level > l {
            return None;
        }
        let from_slot = if level == 0 {
            (from == self.source).then_some(0)?
        } else {
            self.slot[from]?
        };
        if level == l {
            return (to == self.target).then(|| self.to_target[from_slot]);
        }
        let to_slot = self.slot[to]?;
        Some(if level == 0 {
            self.from_source[to_slot]
        } else {
            self.between[from_slot * self.candidates.len() + to_slot]
        })
    }

    /// Physical walk behind the arc `from -> to`.
    pub fn arc_walk(&self, net: &Network, from: usize, to: usize) -> Result<Vec<usize>> {
        self.tables.extract_path(net, from, to)
    }

    /// Structured dump of the levels and every finite arc.
    pub fn dump(&self, net: &Network) -> MultilevelDump {
        let levels = (0..self.level_count())
            .map(|k| self.level(k).iter().map(|&v| net.id(v)).collect())
            .collect();
        let mut arcs = Vec::new();
        for k in 0..self.level_count() - 1 {
            for &u in self.level(k) {
                for &v in self.level(k + 1) {
                    let Some(w) = self.arc(k, u, v).filter(ArcWeight::is_finite) else {
                        continue;
                    };
                    let walk = self.arc_walk(net, u, v).expect("finite arc has a walk");
                    arcs.push(ArcDump {
                        level: k,
                        from: net.id(u),
                        to: net.id(v),
                        cost: w.cost,
                        delay: w.delay,
                        walk: walk.into_iter().map(|i| net.id(i)).collect(),
                    });
                }
            }
        }
        MultilevelDump {
            delta1: self.delta1(),
            levels,
            arcs,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MultilevelDump {
    pub delta1: Delay,
    pub levels: Vec<Vec<NodeId>>,
    pub arcs: Vec<ArcDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArcDump {
    pub level: usize,
    pub from: NodeId,
    pub to: NodeId,
    pub cost: Cost,
    pub delay: Delay,
    pub walk: Vec<NodeId>,
}

/// Builds the layered network from tables computed with the per-arc budget
/// as their `budget`.
pub fn build_multilevel(
    net: &Network,
    req: &Request,
    tables: DcspTables,
) -> Result<MultilevelNetwork> {
    let (s, t) = req.resolve(net)?;
    if tables.budget() < 1 {
        return Err(Error::StructurallyInfeasible {
            delta1: tables.budget() as i64,
        });
    }
    let candidates: Vec<usize> = (0..net.node_count())
        .filter(|&v| v != s && v != t)
        .collect();
    let mut slot = vec![None; net.node_count()];
    for (i, &v) in candidates.iter().enumerate() {
        slot[v] = Some(i);
    }

    let into_host = |u: usize, v: usize| match (tables.psi_cost(u, v), tables.psi_delay(u, v)) {
        (Some(cost), Some(delay)) => {
            let node = net.node(v);
            ArcWeight {
                cost: cost + node.cost,
                delay: delay + node.delay,
            }
        }
        _ => ArcWeight::INFINITE,
    };
    let into_target = |u: usize| match (tables.psi_cost(u, t), tables.psi_delay(u, t)) {
        (Some(cost), Some(delay)) => ArcWeight { cost, delay },
        _ => ArcWeight::INFINITE,
    };

    let from_source = candidates.iter().map(|&v| into_host(s, v)).collect();
    let between = candidates
        .iter()
        .flat_map(|&u| candidates.iter().map(move |&v| (u, v)))
        .map(|(u, v)| into_host(u, v))
        .collect();
    let to_target = candidates.iter().map(|&u| into_target(u)).collect();

    Ok(MultilevelNetwork {
        source: s,
        target: t,
        chain_length: req.chain_length,
        candidates,
        slot,
        from_source,
        between,
        to_target,
        tables,
    })
}
