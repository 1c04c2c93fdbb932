//! Level-by-level greedy selection on the multilevel network.
//!
//! Starting from the source, each step takes the cheapest finite arc to the
//! next level whose head has not hosted yet (ties: lower arc delay, then
//! smaller node id). Nodes already used as hosts stay usable as relays inside
//! later physical walks. There is no backtracking: if every arc to the next
//! level is infinite or blocked the run fails.

use crate::error::{Error, Result};
use crate::multilevel::{MaxDelayScope, MultilevelNetwork};
use crate::network::{Cost, Delay, Embedding, Network, Request};

pub const ALGORITHM: &str = "greedy";

#[derive(Debug, Clone)]
pub struct GreedyState {
    pub current_node: usize,
    pub current_level: usize,
    pub blocked: Vec<bool>,
    pub partial_walk: Vec<usize>,
    pub host_positions: Vec<usize>,
    pub accumulated_cost: Cost,
    pub accumulated_delay: Delay,
}

impl GreedyState {
    fn start(net: &Network, source: usize) -> Self {
        GreedyState {
            current_node: source,
            current_level: 0,
            blocked: vec![false; net.node_count()],
            partial_walk: vec![source],
            host_positions: Vec::new(),
            accumulated_cost: 0.0,
            accumulated_delay: 0,
        }
    }

    pub fn hosts(&self) -> impl Iterator<Item = usize> + '_ {
        self.host_positions.iter().map(|&p| self.partial_walk[p])
    }
}

pub fn solve_greedy(net: &Network, req: &Request) -> Result<Embedding> {
    solve_greedy_with(net, req, MaxDelayScope::default())
}

pub fn solve_greedy_with(net: &Network, req: &Request, scope: MaxDelayScope) -> Result<Embedding> {
    let ml = MultilevelNetwork::for_request(net, req, scope)?;
    solve_on(net, req, &ml)
}

/// Runs the greedy pass on an already built multilevel network.
pub fn solve_on(net: &Network, req: &Request, ml: &MultilevelNetwork) -> Result<Embedding> {
    let (s, _) = req.resolve(net)?;
    let mut state = GreedyState::start(net, s);

    for level in 0..=req.chain_length {
        let pick = ml
            .level(level + 1)
            .iter()
            .filter(|&&v| !state.blocked[v])
            .filter_map(|&v| ml.arc(level, state.current_node, v).map(|w| (v, w)))
            .filter(|(_, w)| w.is_finite())
            .min_by(|(a, wa), (b, wb)| {
                wa.cost
                    .total_cmp(&wb.cost)
                    .then(wa.delay.cmp(&wb.delay))
                    .then(net.id(*a).cmp(&net.id(*b)))
            });
        let Some((next, weight)) = pick else {
            return Err(Error::GreedyDeadEnd { level });
        };

        let walk = ml.arc_walk(net, state.current_node, next)?;
        state.partial_walk.extend_from_slice(&walk[1..]);
        if level < req.chain_length {
            state.blocked[next] = true;
            state.host_positions.push(state.partial_walk.len() - 1);
        }
        state.accumulated_cost += weight.cost;
        state.accumulated_delay += weight.delay;
        state.current_node = next;
        state.current_level = level + 1;
    }

    let emb = Embedding::from_indices(net, &state.partial_walk, state.host_positions, ALGORITHM);
    debug_assert_eq!(emb.total_delay, state.accumulated_delay);
    Ok(emb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{validate_embedding, EdgeRecord, Node};

    #[test]
    fn path_graph_unique_embedding() {
        let g = Network::new(
            vec![
                Node::new(0, 1.0, 1),
                Node::new(1, 4.5, 2),
                Node::new(2, 1.0, 1),
            ],
            vec![EdgeRecord::new(0, 1, 3.0, 1), EdgeRecord::new(1, 2, 2.0, 1)],
        )
        .unwrap();
        let req = Request::new(0, 2, 1, 20);
        let emb = solve_greedy(&g, &req).unwrap();
        assert_eq!(emb.hosts, vec![1]);
        assert_eq!(emb.walk, vec![0, 1, 2]);
        assert_eq!(emb.total_cost, 3.0 + 2.0 + 4.5);
        assert_eq!(emb.total_delay, 4);
        assert!(validate_embedding(&g, &req, &emb).passed());
    }

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
    fn dead_end_when_only_reachable_host_is_used() {
        // l = 2, bound 8: delta1 = (8 - 2) / 3 = 2; b is 10 away from a.
        let err = solve_greedy(&spur(), &Request::new(0, 2, 2, 8)).unwrap_err();
        assert!(matches!(err, Error::GreedyDeadEnd { level: 1 }), "{err}");
        assert!(err.is_infeasible());
    }

    #[test]
    fn hosts_may_be_relays_later() {
        // Bound large enough for b: the walk goes a -> b -> a -> t.
        let emb = solve_greedy(&spur(), &Request::new(0, 2, 2, 80)).unwrap();
        assert_eq!(emb.hosts, vec![1, 3]);
        assert_eq!(emb.walk, vec![0, 1, 3, 1, 2]);
        assert_eq!(emb.host_positions, vec![1, 2]);
    }

    #[test]
    fn tight_budget_is_structurally_infeasible() {
        let err = solve_greedy(&spur(), &Request::new(0, 2, 2, 4)).unwrap_err();
        assert!(matches!(err, Error::StructurallyInfeasible { .. }));
        let err = solve_greedy(&spur(), &Request::new(0, 2, 1, 0)).unwrap_err();
        assert!(err.is_infeasible());
    }

    #[test]
    fn ties_fall_to_lower_delay_then_smaller_id() {
        // Candidates 1, 2, 3 all at edge cost 1 from s and node cost 1; node 3
        // has a lower processing delay so it wins, then 1 beats 2 on id.
        let g = Network::new(
            vec![
                Node::new(0, 0.0, 0),
                Node::new(1, 1.0, 2),
                Node::new(2, 1.0, 2),
                Node::new(3, 1.0, 1),
                Node::new(4, 0.0, 0),
            ],
            vec![
                EdgeRecord::new(0, 1, 1.0, 1),
                EdgeRecord::new(0, 2, 1.0, 1),
                EdgeRecord::new(0, 3, 1.0, 1),
                EdgeRecord::new(1, 4, 1.0, 1),
                EdgeRecord::new(2, 4, 1.0, 1),
                EdgeRecord::new(3, 4, 1.0, 1),
                EdgeRecord::new(1, 3, 1.0, 1),
                EdgeRecord::new(2, 3, 1.0, 1),
            ],
        )
        .unwrap();
        let emb = solve_greedy(&g, &Request::new(0, 4, 2, 40)).unwrap();
        assert_eq!(emb.hosts, vec![3, 1]);
    }
}
