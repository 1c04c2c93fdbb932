//! Solver dispatch, run records and comparison sweeps.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::{solve_exact, solve_exact_simple, solve_ksp, DEFAULT_K, DEFAULT_NODE_LIMIT};
use crate::error::{Error, Result};
use crate::generator::{generate, topology_stats, GenConfig};
use crate::greedy::solve_greedy_with;
use crate::multilevel::MaxDelayScope;
use crate::network::{Delay, Embedding, Network, NodeId, Request};

/// ChaCha stream used to draw sweep endpoints; the generator uses 0..=4.
const STREAM_ENDPOINTS: u64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Exact,
    /// Exact over simple paths only.
    ExactSimple,
    Greedy,
    Ksp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Exact,
        Algorithm::ExactSimple,
        Algorithm::Greedy,
        Algorithm::Ksp,
    ];

    pub fn is_exact(self) -> bool {
        matches!(self, Algorithm::Exact | Algorithm::ExactSimple)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::ExactSimple => "exact-simple",
            Algorithm::Greedy => "greedy",
            Algorithm::Ksp => "ksp",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Algorithm::Exact),
            "exact-simple" => Ok(Algorithm::ExactSimple),
            "greedy" => Ok(Algorithm::Greedy),
            "ksp" => Ok(Algorithm::Ksp),
            other => Err(Error::Validation(format!(
                "unknown algorithm {other:?} (expected greedy, ksp, exact or exact-simple)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub k: usize,
    pub node_limit: usize,
    pub scope: MaxDelayScope,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            k: DEFAULT_K,
            node_limit: DEFAULT_NODE_LIMIT,
            scope: MaxDelayScope::default(),
        }
    }
}

/// Runs one solver, timing only the solver call.
pub fn run_solver(
    net: &Network,
    req: &Request,
    algo: Algorithm,
    opts: &SolverOptions,
) -> (Result<Embedding>, f64) {
    let start = Instant::now();
    let result = match algo {
        Algorithm::Greedy => solve_greedy_with(net, req, opts.scope),
        Algorithm::Ksp => solve_ksp(net, req, opts.k),
        Algorithm::Exact => solve_exact(net, req, opts.node_limit),
        Algorithm::ExactSimple => solve_exact_simple(net, req, opts.node_limit),
    };
    (result, start.elapsed().as_secs_f64() * 1e3)
}

/// Sweep default delay bound: `round(2 * MSDP) + l * max node delay`.
pub fn default_delay_bound(net: &Network, chain_length: usize) -> Result<Delay> {
    let stats = topology_stats(net)?;
    let max_delay = net.nodes().iter().map(|n| n.delay).max().unwrap_or(0);
    Ok((2.0 * stats.msdp).round() as Delay + chain_length as Delay * max_delay)
}

/// Uniform distinct source and target for a sweep instance.
pub fn draw_endpoints(net: &Network, seed: u64) -> (NodeId, NodeId) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(STREAM_ENDPOINTS);
    let n = net.node_count();
    let s = rng.gen_range(0..n);
    let mut t = rng.gen_range(0..n - 1);
    if t >= s {
        t += 1;
    }
    (net.id(s), net.id(t))
}

/// One solver run; the CSV columns are the fields in declaration order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance_id: String,
    pub n: usize,
    pub seed: Option<u64>,
    pub algorithm: String,
    pub chain_length: usize,
    pub delay_bound: Delay,
    pub feasible: bool,
    pub total_cost: Option<f64>,
    pub total_delay: Option<Delay>,
    pub runtime_ms: f64,
}

pub const RUN_COLUMNS: [&str; 10] = [
    "instance_id",
    "n",
    "seed",
    "algorithm",
    "chain_length",
    "delay_bound",
    "feasible",
    "total_cost",
    "total_delay",
    "runtime_ms",
];

impl RunRecord {
    pub fn new(
        instance_id: &str,
        net: &Network,
        seed: Option<u64>,
        algo: Algorithm,
        req: &Request,
        result: &Result<Embedding>,
        runtime_ms: f64,
    ) -> Self {
        let emb = result.as_ref().ok();
        RunRecord {
            instance_id: instance_id.to_string(),
            n: net.node_count(),
            seed,
            algorithm: algo.as_str().to_string(),
            chain_length: req.chain_length,
            delay_bound: req.delay_bound,
            feasible: emb.is_some(),
            total_cost: emb.map(|e| e.total_cost),
            total_delay: emb.map(|e| e.total_delay),
            runtime_ms,
        }
    }
}

/// Writes records as CSV with the header row always present.
pub fn write_records<W: Write, T: Serialize>(out: W, header: &[&str], rows: &[T]) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    writer.write_record(header).map_err(csv_error)?;
    for row in rows {
        writer.serialize(row).map_err(csv_error)?;
    }
    writer.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[derive(Debug, Clone)]
pub struct CompareConfig {
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub chain_lengths: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    /// Fixed delay bound; `None` uses [`default_delay_bound`] per instance.
    pub delay_bound: Option<Delay>,
    pub p: Option<f64>,
    pub options: SolverOptions,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            sizes: vec![20, 30, 40, 50, 60],
            seeds: (0..30).collect(),
            chain_lengths: vec![3],
            algorithms: vec![Algorithm::Greedy, Algorithm::Ksp],
            delay_bound: None,
            p: None,
            options: SolverOptions::default(),
        }
    }
}

/// Generates one instance per (size, seed), draws endpoints and runs every
/// requested algorithm for every chain length. Failures become infeasible
/// rows; exact runs are skipped for sizes above the node limit. Rows come
/// back ordered by (size, seed, chain length, algorithm name).
pub fn run_compare(cfg: &CompareConfig) -> Vec<RunRecord> {
    let jobs: Vec<(usize, u64)> = cfg
        .sizes
        .iter()
        .flat_map(|&n| cfg.seeds.iter().map(move |&s| (n, s)))
        .collect();

    let mut rows: Vec<RunRecord> = jobs
        .par_iter()
        .flat_map_iter(|&(n, seed)| compare_instance(cfg, n, seed))
        .collect();
    rows.sort_by(|a, b| {
        (a.n, a.seed, a.chain_length, &a.algorithm).cmp(&(
            b.n,
            b.seed,
            b.chain_length,
            &b.algorithm,
        ))
    });
    rows
}

fn compare_instance(cfg: &CompareConfig, n: usize, seed: u64) -> Vec<RunRecord> {
    let instance_id = format!("n{n}-s{seed}");
    let algorithms: Vec<Algorithm> = cfg
        .algorithms
        .iter()
        .copied()
        .filter(|a| !(a.is_exact() && n > cfg.options.node_limit))
        .collect();
    let gen = GenConfig {
        p: cfg.p,
        ..GenConfig::new(n, seed)
    };
    let Ok(net) = generate(&gen) else {
        // Nothing to solve; every requested run is recorded as infeasible.
        return cfg
            .chain_lengths
            .iter()
            .flat_map(|&l| {
                algorithms.iter().map(move |&algo| RunRecord {
                    instance_id: format!("n{n}-s{seed}"),
                    n,
                    seed: Some(seed),
                    algorithm: algo.as_str().to_string(),
                    chain_length: l,
                    delay_bound: cfg.delay_bound.unwrap_or(0),
                    feasible: false,
                    total_cost: None,
                    total_delay: None,
                    runtime_ms: 0.0,
                })
            })
            .collect();
    };
    let (s, t) = draw_endpoints(&net, seed);

    let mut rows = Vec::new();
    for &l in &cfg.chain_lengths {
        let bound = match cfg.delay_bound {
            Some(b) => b,
            None => default_delay_bound(&net, l).unwrap_or(0),
        };
        let req = Request::new(s, t, l, bound);
        for &algo in &algorithms {
            let (result, ms) = run_solver(&net, &req, algo, &cfg.options);
            rows.push(RunRecord::new(
                &instance_id,
                &net,
                Some(seed),
                algo,
                &req,
                &result,
                ms,
            ));
        }
    }
    rows
}

/// Per (size, chain length, algorithm) means. `paired` columns average only
/// instances on which every algorithm present in the sweep succeeded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub n: usize,
    pub chain_length: usize,
    pub algorithm: String,
    pub runs: usize,
    pub feasible: usize,
    pub mean_cost: Option<f64>,
    pub mean_delay: Option<f64>,
    pub paired: usize,
    pub mean_cost_paired: Option<f64>,
    pub mean_delay_paired: Option<f64>,
    pub mean_runtime_ms: f64,
}

pub const SUMMARY_COLUMNS: [&str; 11] = [
    "n",
    "chain_length",
    "algorithm",
    "runs",
    "feasible",
    "mean_cost",
    "mean_delay",
    "paired",
    "mean_cost_paired",
    "mean_delay_paired",
    "mean_runtime_ms",
];

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

pub fn summarize(rows: &[RunRecord]) -> Vec<SummaryRow> {
    // Instances (id, l) where every run present succeeded.
    let mut per_instance: BTreeMap<(&str, usize), (usize, usize)> = BTreeMap::new();
    for r in rows {
        let entry = per_instance
            .entry((r.instance_id.as_str(), r.chain_length))
            .or_default();
        entry.0 += 1;
        entry.1 += usize::from(r.feasible);
    }
    let all_feasible = |r: &RunRecord| {
        per_instance
            .get(&(r.instance_id.as_str(), r.chain_length))
            .is_some_and(|&(runs, ok)| runs == ok)
    };

    let mut groups: BTreeMap<(usize, usize, &str), Vec<&RunRecord>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((r.n, r.chain_length, r.algorithm.as_str()))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((n, l, algo), runs)| {
            let feasible: Vec<&RunRecord> = runs.iter().copied().filter(|r| r.feasible).collect();
            let paired: Vec<&RunRecord> = feasible
                .iter()
                .copied()
                .filter(|r| all_feasible(r))
                .collect();
            SummaryRow {
                n,
                chain_length: l,
                algorithm: algo.to_string(),
                runs: runs.len(),
                feasible: feasible.len(),
                mean_cost: mean(feasible.iter().filter_map(|r| r.total_cost)),
                mean_delay: mean(
                    feasible
                        .iter()
                        .filter_map(|r| r.total_delay.map(|d| d as f64)),
                ),
                paired: paired.len(),
                mean_cost_paired: mean(paired.iter().filter_map(|r| r.total_cost)),
                mean_delay_paired: mean(
                    paired
                        .iter()
                        .filter_map(|r| r.total_delay.map(|d| d as f64)),
                ),
                mean_runtime_ms: mean(runs.iter().map(|r| r.runtime_ms)).unwrap_or(0.0),
            }
        })
        .collect()
}

/// Parses `"20,30"`, `"20..60"` (inclusive) and `"20..60:10"` (with step),
/// in any comma-separated mix.
pub fn parse_list<T>(text: &str) -> Result<Vec<T>>
where
    T: FromStr + Copy + PartialOrd + std::ops::Add<Output = T> + TryFrom<u64>,
{
    let bad = || Error::Validation(format!("cannot parse list {text:?}"));
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_once("..") {
            None => out.push(item.parse().map_err(|_| bad())?),
            Some((lo, rest)) => {
                let (hi, step) = rest.split_once(':').unwrap_or((rest, "1"));
                let lo: T = lo.parse().map_err(|_| bad())?;
                let hi: T = hi.parse().map_err(|_| bad())?;
                let step: u64 = step.parse().map_err(|_| bad())?;
                if step == 0 {
                    return Err(bad());
                }
                let step = T::try_from(step).map_err(|_| bad())?;
                let mut v = lo;
                while v <= hi {
                    out.push(v);
                    v = v + step;
                }
            }
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{EdgeRecord, Node};

    #[test]
    fn list_syntax() {
        assert_eq!(
            parse_list::<usize>("20..60:10").unwrap(),
            vec![20, 30, 40, 50, 60]
        );
        assert_eq!(parse_list::<u64>("0..3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(
            parse_list::<usize>("5, 7,9..10").unwrap(),
            vec![5, 7, 9, 10]
        );
        assert!(parse_list::<usize>("").is_err());
        assert!(parse_list::<usize>("1..5:0").is_err());
        assert!(parse_list::<usize>("x").is_err());
    }

    #[test]
    fn algorithm_names() {
        for algo in Algorithm::ALL {
            assert_eq!(algo.as_str().parse::<Algorithm>().unwrap(), algo);
        }
        assert!("cplex".parse::<Algorithm>().is_err());
    }

    #[test]
    fn endpoints_distinct_and_deterministic() {
        let net = generate(&GenConfig::new(10, 4)).unwrap();
        for seed in 0..200 {
            let (s, t) = draw_endpoints(&net, seed);
            assert_ne!(s, t);
            assert_eq!((s, t), draw_endpoints(&net, seed));
        }
    }

    #[test]
    fn default_bound_formula() {
        // Path 0-1-2 with edge delays 1 and 3: ordered-pair min delays are
        // 1, 4, 3 (twice each) so MSDP = 8/3 and 2*MSDP rounds to 5.
        let net = Network::new(
            vec![
                Node::new(0, 1.0, 1),
                Node::new(1, 1.0, 3),
                Node::new(2, 1.0, 2),
            ],
            vec![EdgeRecord::new(0, 1, 1.0, 1), EdgeRecord::new(1, 2, 1.0, 3)],
        )
        .unwrap();
        assert_eq!(default_delay_bound(&net, 1).unwrap(), 5 + 3);
        assert_eq!(default_delay_bound(&net, 2).unwrap(), 5 + 6);
    }

    #[test]
    fn csv_header_and_order() {
        let cfg = CompareConfig {
            sizes: vec![8, 6],
            seeds: vec![1, 0],
            chain_lengths: vec![1],
            algorithms: vec![Algorithm::Ksp, Algorithm::Greedy, Algorithm::Exact],
            ..CompareConfig::default()
        };
        let rows = run_compare(&cfg);
        assert_eq!(rows.len(), 2 * 2 * 3);
        let keys: Vec<_> = rows
            .iter()
            .map(|r| (r.n, r.seed, r.algorithm.clone()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        for r in &rows {
            if r.feasible {
                assert!(r.total_delay.unwrap() <= r.delay_bound);
            }
            assert!(r.runtime_ms >= 0.0);
        }

        let mut buf = Vec::new();
        write_records(&mut buf, &RUN_COLUMNS, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), RUN_COLUMNS.join(","));
        assert_eq!(text.lines().count(), rows.len() + 1);

        let mut buf = Vec::new();
        write_records(&mut buf, &RUN_COLUMNS, &Vec::<RunRecord>::new()).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap().trim(),
            RUN_COLUMNS.join(",")
        );
    }

    #[test]
    fn exact_skipped_above_node_limit() {
        let cfg = CompareConfig {
            sizes: vec![20],
            seeds: vec![0],
            chain_lengths: vec![2],
            algorithms: vec![Algorithm::Greedy, Algorithm::Exact],
            ..CompareConfig::default()
        };
        let rows = run_compare(&cfg);
        assert!(rows.iter().all(|r| r.algorithm == "greedy"));
    }

    #[test]
    fn summary_pairs_instances() {
        let row = |id: &str, algo: &str, cost: Option<f64>| RunRecord {
            instance_id: id.into(),
            n: 10,
            seed: Some(0),
            algorithm: algo.into(),
            chain_length: 2,
            delay_bound: 20,
            feasible: cost.is_some(),
            total_cost: cost,
            total_delay: cost.map(|_| 10),
            runtime_ms: 1.0,
        };
        let rows = vec![
            row("a", "greedy", Some(10.0)),
            row("a", "ksp", Some(14.0)),
            row("b", "greedy", Some(20.0)),
            row("b", "ksp", None),
        ];
        let summary = summarize(&rows);
        let greedy = summary.iter().find(|s| s.algorithm == "greedy").unwrap();
        assert_eq!((greedy.runs, greedy.feasible, greedy.paired), (2, 2, 1));
        assert_eq!(greedy.mean_cost, Some(15.0));
        assert_eq!(greedy.mean_cost_paired, Some(10.0));
        let ksp = summary.iter().find(|s| s.algorithm == "ksp").unwrap();
        assert_eq!(ksp.mean_cost_paired, Some(14.0));
    }
}
