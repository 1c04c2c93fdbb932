//! Writes the embedding model as a CPLEX-style LP file.
//!
//! Variables: binary `x_u_v` (one per edge orientation, node ids in the
//! name) and `y_i` (one per node), plus continuous `g_u_v` in `[0, l]`.
//! Rows:
//!
//! * `flow_i`: out-flow minus in-flow is 1 at the source, -1 at the target,
//!   0 elsewhere;
//! * `no_host_s`, `no_host_t`: endpoints never host;
//! * `delay`: edge plus hosting delay at most the bound;
//! * `chain`: exactly `l` hosts;
//! * `host_i`: a node hosts only if it has out-flow;
//! * `reach_i` (every node but the source) and `cap_u_v`: the source ships
//!   `l` units of `g` along selected arcs and each host absorbs one, so
//!   every host is reachable from the source.
//!
//! Without the last group, detached cycles satisfy the flow rows and can
//! host functions away from the path. With it, solutions are walks using
//! each arc orientation at most once, and a minimum-cost walk never needs an
//! orientation twice, so the optimum matches [`solve_exact`].
//!
//! [`solve_exact`]: crate::baselines::solve_exact

use std::fmt::Write;

use crate::error::Result;
use crate::network::{Network, Request};

const TERMS_PER_LINE: usize = 8;

fn x(net: &Network, a: usize, b: usize) -> String {
    format!("x_{}_{}", net.id(a), net.id(b))
}

fn g(net: &Network, a: usize, b: usize) -> String {
    format!("g_{}_{}", net.id(a), net.id(b))
}

fn y(net: &Network, v: usize) -> String {
    format!("y_{}", net.id(v))
}

/// Appends `sum coef * var` to `out`, wrapping long rows. Coefficients keep
/// their sign; zero coefficients are written out.
fn write_terms(out: &mut String, terms: &[(f64, String)]) {
    for (i, (coef, var)) in terms.iter().enumerate() {
        if i > 0 && i % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if coef.is_sign_negative() { "-" } else { "+" };
        let mag = coef.abs();
        if i == 0 && sign == "+" {
            let _ = write!(out, " {mag} {var}");
        } else {
            let _ = write!(out, " {sign} {mag} {var}");
        }
    }
}

fn write_row(out: &mut String, name: &str, terms: &[(f64, String)], sense: &str, rhs: f64) {
    let _ = write!(out, " {name}:");
    write_terms(out, terms);
    let _ = writeln!(out, " {sense} {rhs}");
}

/// Serializes the integer program for `req` on `net`. Only the endpoints
/// are checked; an unsatisfiable request yields an infeasible model.
pub fn export_lp(net: &Network, req: &Request) -> Result<String> {
    let (s, t) = (net.resolve(req.source)?, net.resolve(req.target)?);
    let n = net.node_count();
    let mut out = String::new();

    let _ = writeln!(
        out,
        "\\ SFC embedding: source {}, target {}, chain length {}, delay bound {}",
        req.source, req.target, req.chain_length, req.delay_bound
    );

    // Edge variables in edge order, both orientations.
    let arcs: Vec<(usize, usize, usize)> = net
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(e, edge)| [(edge.a, edge.b, e), (edge.b, edge.a, e)])
        .collect();

    let mut objective: Vec<(f64, String)> = arcs
        .iter()
        .map(|&(a, b, e)| (net.edges()[e].cost, x(net, a, b)))
        .collect();
    objective.extend((0..n).map(|v| (net.node(v).cost, y(net, v))));
    out.push_str("Minimize\n obj:");
    write_terms(&mut out, &objective);
    out.push('\n');

    out.push_str("Subject To\n");
    for v in 0..n {
        let mut terms: Vec<(f64, String)> = Vec::new();
        for &(w, _) in net.neighbors(v) {
            terms.push((1.0, x(net, v, w)));
        }
        for &(w, _) in net.neighbors(v) {
            terms.push((-1.0, x(net, w, v)));
        }
        if terms.is_empty() {
            terms.push((0.0, y(net, v)));
        }
        let rhs = if v == s {
            1.0
        } else if v == t {
            -1.0
        } else {
            0.0
        };
        write_row(&mut out, &format!("flow_{}", net.id(v)), &terms, "=", rhs);
    }

    write_row(&mut out, "no_host_s", &[(1.0, y(net, s))], "=", 0.0);
    write_row(&mut out, "no_host_t", &[(1.0, y(net, t))], "=", 0.0);

    let mut delay: Vec<(f64, String)> = arcs
        .iter()
        .map(|&(a, b, e)| (net.edges()[e].delay as f64, x(net, a, b)))
        .collect();
    delay.extend((0..n).map(|v| (net.node(v).delay as f64, y(net, v))));
    write_row(&mut out, "delay", &delay, "<=", req.delay_bound as f64);

    let chain: Vec<(f64, String)> = (0..n).map(|v| (1.0, y(net, v))).collect();
    write_row(&mut out, "chain", &chain, "=", req.chain_length as f64);

    for v in 0..n {
        let mut terms = vec![(1.0, y(net, v))];
        terms.extend(net.neighbors(v).iter().map(|&(w, _)| (-1.0, x(net, v, w))));
        write_row(&mut out, &format!("host_{}", net.id(v)), &terms, "<=", 0.0);
    }

    for v in (0..n).filter(|&v| v != s) {
        let mut terms: Vec<(f64, String)> = Vec::new();
        for &(w, _) in net.neighbors(v) {
            terms.push((1.0, g(net, w, v)));
        }
        for &(w, _) in net.neighbors(v) {
            terms.push((-1.0, g(net, v, w)));
        }
        terms.push((-1.0, y(net, v)));
        write_row(&mut out, &format!("reach_{}", net.id(v)), &terms, "=", 0.0);
    }
    let l = req.chain_length as f64;
    for &(a, b, _) in &arcs {
        let terms = [(1.0, g(net, a, b)), (-l, x(net, a, b))];
        write_row(
            &mut out,
            &format!("cap_{}_{}", net.id(a), net.id(b)),
            &terms,
            "<=",
            0.0,
        );
    }

    out.push_str("Bounds\n");
    for &(a, b, _) in &arcs {
        let _ = writeln!(out, " 0 <= {} <= {l}", g(net, a, b));
    }

    out.push_str("Binary\n");
    let vars: Vec<String> = arcs
        .iter()
        .map(|&(a, b, _)| x(net, a, b))
        .chain((0..n).map(|v| y(net, v)))
        .collect();
    for chunk in vars.chunks(TERMS_PER_LINE) {
        let _ = writeln!(out, " {}", chunk.join(" "));
    }
    out.push_str("End\n");
    Ok(out)
}
