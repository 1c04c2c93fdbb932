use crate::error::{Error, Result};
use crate::network::{Cost, Delay, Network};

/// Hosts chosen among the interior nodes of a fixed path.
#[derive(Debug, Clone, PartialEq)]
pub struct HostSelection {
    /// Node indices, in path order.
    pub hosts: Vec<usize>,
    /// Position of each host in the (deduplicated) interior sequence.
    pub positions: Vec<usize>,
    pub hosts_cost: Cost,
    pub hosts_delay: Delay,
}

#[derive(Debug, Clone)]
struct Label {
    cost: Cost,
    delay: Delay,
    picks: Vec<usize>,
}

/// Chooses `l` distinct interior nodes of minimum total node cost whose
/// node delays sum to at most `delay_budget`.
///
/// Dynamic program over (position, hosts taken) keeping a Pareto set of
/// (cost, delay) labels per count. Equal-cost choices are resolved by lower
/// delay, then by the lexicographically smaller host id sequence.
pub fn select_hosts(
    net: &Network,
    interior: &[usize],
    l: usize,
    delay_budget: Delay,
) -> Result<HostSelection> {
    let mut seen = vec![false; net.node_count()];
    let interior: Vec<usize> = interior
        .iter()
        .copied()
        .filter(|&v| !std::mem::replace(&mut seen[v], true))
        .collect();
    if interior.len() < l {
        return Err(Error::NoFeasibleSelection { needed: l });
    }

    let ids_cmp = |a: &Label, b: &Label| {
        a.picks
            .iter()
            .map(|&p| net.id(interior[p]))
            .cmp(b.picks.iter().map(|&p| net.id(interior[p])))
    };
    let better = |a: &Label, b: &Label| {
        a.cost
            .total_cmp(&b.cost)
            .then(a.delay.cmp(&b.delay))
            .then_with(|| ids_cmp(a, b))
            .is_lt()
    };

    let mut labels: Vec<Vec<Label>> = vec![Vec::new(); l + 1];
    labels[0].push(Label {
        cost: 0.0,
        delay: 0,
        picks: Vec::new(),
    });

    for (pos, &v) in interior.iter().enumerate() {
        let node = net.node(v);
        let remaining_after = interior.len() - pos - 1;
        for count in (1..=l.min(pos + 1)).rev() {
            if count + remaining_after < l {
                continue;
            }
            let extended: Vec<Label> = labels[count - 1]
                .iter()
                .filter(|lab| lab.delay + node.delay <= delay_budget)
                .map(|lab| {
                    let mut picks = lab.picks.clone();
                    picks.push(pos);
                    Label {
                        cost: lab.cost + node.cost,
                        delay: lab.delay + node.delay,
                        picks,
                    }
                })
                .collect();
            for cand in extended {
                insert_pareto(&mut labels[count], cand, &ids_cmp);
            }
        }
    }

    let best = labels[l]
        .iter()
        .fold(None::<&Label>, |acc, lab| match acc {
            Some(b) if !better(lab, b) => Some(b),
            _ => Some(lab),
        })
        .ok_or(Error::NoFeasibleSelection { needed: l })?;

    Ok(HostSelection {
        hosts: best.picks.iter().map(|&p| interior[p]).collect(),
        positions: best.picks.clone(),
        hosts_cost: best.cost,
        hosts_delay: best.delay,
    })
}

fn insert_pareto<F>(front: &mut Vec<Label>, cand: Label, ids_cmp: &F)
where
    F: Fn(&Label, &Label) -> std::cmp::Ordering,
{
    let dominated = front.iter().any(|y| {
        y.cost <= cand.cost
            && y.delay <= cand.delay
            && (y.cost < cand.cost || y.delay < cand.delay || ids_cmp(y, &cand).is_le())
    });
    if dominated {
        return;
    }
    front.retain(|y| !(cand.cost <= y.cost && cand.delay <= y.delay));
    front.push(cand);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{EdgeRecord, Node};
    use proptest::prelude::*;

    fn nodes_only(weights: &[(f64, Delay)]) -> Network {
        Network::new(
            weights
                .iter()
                .enumerate()
                .map(|(i, &(c, d))| Node::new(i as u32, c, d))
                .collect(),
            Vec::<EdgeRecord>::new(),
        )
        .unwrap()
    }

    /// Exhaustive subset enumeration, independent of the DP.
    fn brute_force(
        net: &Network,
        interior: &[usize],
        l: usize,
        budget: Delay,
    ) -> Option<(Cost, Delay)> {
        let m = interior.len();
        let mut best: Option<(Cost, Delay)> = None;
        for mask in 0u32..(1 << m) {
            if mask.count_ones() as usize != l {
                continue;
            }
            let (mut c, mut d) = (0.0, 0);
            for (i, &v) in interior.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    c += net.node(v).cost;
                    d += net.node(v).delay;
                }
            }
            if d <= budget && best.is_none_or(|(bc, bd)| c < bc || (c == bc && d < bd)) {
                best = Some((c, d));
            }
        }
        best
    }

    #[test]
    fn single_forced_host() {
        let g = nodes_only(&[(3.0, 2)]);
        let sel = select_hosts(&g, &[0], 1, 2).unwrap();
        assert_eq!(sel.hosts, vec![0]);
        assert_eq!((sel.hosts_cost, sel.hosts_delay), (3.0, 2));
    }

    // 2-subsets of {a(4,3), b(8,1), c(5,3)} within delay 4:
    // {a,b} = (12, 4), {b,c} = (13, 4), {a,c} has delay 6.
    #[test]
    fn three_candidates_pick_two() {
        let g = nodes_only(&[(4.0, 3), (8.0, 1), (5.0, 3)]);
        let sel = select_hosts(&g, &[0, 1, 2], 2, 4).unwrap();
        assert_eq!(sel.hosts, vec![0, 1]);
        assert_eq!((sel.hosts_cost, sel.hosts_delay), (12.0, 4));
    }

    #[test]
    fn too_few_candidates() {
        let g = nodes_only(&[(4.0, 3)]);
        let err = select_hosts(&g, &[0], 2, 100).unwrap_err();
        assert!(matches!(err, Error::NoFeasibleSelection { needed: 2 }));
        let err = select_hosts(&g, &[0, 0], 2, 100).unwrap_err();
        assert!(matches!(err, Error::NoFeasibleSelection { .. }));
    }

    #[test]
    fn delay_infeasible() {
        let g = nodes_only(&[(4.0, 3), (1.0, 3)]);
        assert!(select_hosts(&g, &[0, 1], 2, 5).is_err());
        assert!(select_hosts(&g, &[0, 1], 2, 6).is_ok());
    }

    #[test]
    fn ties_prefer_lower_delay_then_smaller_ids() {
        let g = nodes_only(&[(2.0, 2), (2.0, 1), (2.0, 1)]);
        let sel = select_hosts(&g, &[0, 1, 2], 1, 9).unwrap();
        assert_eq!(sel.hosts, vec![1]);
        let sel = select_hosts(&g, &[2, 1, 0], 1, 9).unwrap();
        assert_eq!(sel.hosts, vec![1]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn matches_brute_force(
            weights in prop::collection::vec((0u32..20, 0u64..5), 1..=12),
            l in 1usize..5,
            budget in 0u64..15,
        ) {
            let weights: Vec<(f64, Delay)> =
                weights.into_iter().map(|(c, d)| (c as f64 * 0.5, d)).collect();
            let g = nodes_only(&weights);
            let interior: Vec<usize> = (0..weights.len()).collect();
            let expected = brute_force(&g, &interior, l, budget);
            match select_hosts(&g, &interior, l, budget) {
                Ok(sel) => {
                    prop_assert_eq!(Some((sel.hosts_cost, sel.hosts_delay)), expected);
                    prop_assert_eq!(sel.hosts.len(), l);
                    prop_assert!(sel.positions.windows(2).all(|p| p[0] < p[1]));
                }
                Err(_) => prop_assert_eq!(expected, None),
            }
        }
    }
}
