use std::path::Path;

use defq::graphs::enumerate;
use defq::operators::{gerstenhaber_bracket, hkr, hochschild_d};
use defq::polyalg::jacobiator;
use defq::polyalg::polynomial::ExponentIndex;
use defq::polyalg::rational::{format_rational, int};
use defq::random::{random_constant_bivector, random_multidiffop, random_polynomial, random_polyvector, Rng};
use defq::starprod::{
    associator, contributing_graphs, kontsevich_series, moyal, moyal_via_wick, symbolic_associator, Interval,
    MAX_GRAPH_ORDER,
};
use defq::weights::{snap, weight_mc, WeightTable};
use defq::{GraphId, PolyVector, Polynomial};
use serde_json::{json, Value};

use crate::args::{CheckArgs, CheckKind, McArgs, WeightArgs, WeightsMode};
use crate::input::{load_pi, parse_poly, record, weight_table};
use crate::CliError;

/// JSON printed on stdout, and whether the command counts as passing.
pub struct Report {
    pub json: Value,
    pub pass: bool,
}

impl Report {
    fn ok(json: Value) -> Self {
        Report { json, pass: true }
    }
}

const MIN_MC_SAMPLES: u64 = 10_000;

/// Standard errors used for the interval form of the associativity check.
const SIGMAS: f64 = 3.0;

fn check_order(order: usize) -> Result<(), CliError> {
    if order > MAX_GRAPH_ORDER {
        return Err(CliError::Usage(format!("order must be at most {MAX_GRAPH_ORDER}")));
    }
    Ok(())
}

fn check_samples(mc: &McArgs) -> Result<(), CliError> {
    if mc.samples < MIN_MC_SAMPLES {
        return Err(CliError::Usage(format!("at least {MIN_MC_SAMPLES} samples are required")));
    }
    if mc.max_denominator == 0 {
        return Err(CliError::Usage("max-denominator must be positive".into()));
    }
    Ok(())
}

fn coeffs_json(order: usize, coeffs: &[Polynomial]) -> Value {
    let cs: Vec<String> = coeffs.iter().map(|p| p.to_string()).collect();
    json!({ "order": order, "coeffs": cs })
}

pub fn graphs(n: usize, nbar: usize) -> Result<Report, CliError> {
    if nbar != 2 {
        return Err(CliError::Usage("only two boundary vertices are supported".into()));
    }
    let list = enumerate(n, nbar, 2)?;
    let mut rows = Vec::with_capacity(list.len());
    for g in &list {
        rows.push(json!({
            "id": g.id()?.as_str(),
            "edges": g.edge_count(),
            "edge_count_ok": Some(g.edge_count()) == g.expected_edge_count(),
            "parallel_edges": g.has_parallel_edges(),
        }));
    }
    Ok(Report::ok(json!({
        "n": n,
        "nbar": nbar,
        "count": rows.len(),
        "graphs": rows,
    })))
}

pub fn weight(id: &str, mc: &McArgs, cache: Option<&Path>) -> Result<Report, CliError> {
    check_samples(mc)?;
    let id = GraphId::parse(id)?;
    let g = id.graph();
    if g.nbar() != 2 {
        return Err(CliError::Usage("only two boundary vertices are supported".into()));
    }
    let est = weight_mc(&g, mc.samples, mc.seed)?;
    let snapped = snap(&est, mc.max_denominator);
    let mut fresh = WeightTable::new();
    fresh.insert(&est, snapped.clone());
    record(cache, &fresh)?;
    Ok(Report::ok(json!({
        "graph": est.graph.as_str(),
        "mean": est.mean,
        "stderr": est.stderr,
        "samples": est.samples,
        "seed": est.seed,
        "snapped": snapped.as_ref().map(format_rational),
    })))
}

/// Ids of every graph entering the expansion of `pi` up to `order`.
fn needed_graphs(pi: &PolyVector, order: usize) -> Result<Vec<GraphId>, CliError> {
    let mut ids = Vec::new();
    for n in 1..=order {
        for (g, _) in contributing_graphs(pi, n)? {
            ids.push(g.id()?);
        }
    }
    Ok(ids)
}

/// Fresh estimates for `ids`, recorded in the cache.
fn estimate_all(ids: &[GraphId], w: &WeightArgs) -> Result<WeightTable, CliError> {
    let mut fresh = WeightTable::new();
    for id in ids {
        let est = weight_mc(&id.graph(), w.mc.samples, w.mc.seed)?;
        let s = snap(&est, w.mc.max_denominator);
        fresh.insert(&est, s);
    }
    record(w.cache.cache.as_deref(), &fresh)?;
    Ok(fresh)
}

/// The weights a product of `pi` up to `order` should use, per `--weights`.
fn resolve_weights(pi: &PolyVector, order: usize, w: &WeightArgs) -> Result<WeightTable, CliError> {
    match w.weights {
        WeightsMode::Table => weight_table(w.cache.cache.as_deref()),
        WeightsMode::Mc => {
            check_samples(&w.mc)?;
            let ids = needed_graphs(pi, order)?;
            let fresh = estimate_all(&ids, w)?;
            let unsnapped: Vec<&str> = ids
                .iter()
                .filter(|id| fresh.snapped(id).is_none())
                .map(|id| id.as_str())
                .collect();
            if !unsnapped.is_empty() {
                return Err(CliError::Snap(unsnapped.join(" ")));
            }
            Ok(fresh)
        }
    }
}

fn jacobi_warning(pi: &PolyVector) -> Result<Option<String>, CliError> {
    let j = jacobiator(pi)?;
    Ok((!j.is_zero()).then(|| format!("structure does not satisfy the Jacobi identity: [π,π] = {j}")))
}

pub fn star(pi: &str, f: &str, g: &str, order: usize, w: &WeightArgs) -> Result<Report, CliError> {
    check_order(order)?;
    let pi = load_pi(pi)?;
    let d = pi.dim();
    let (f, g) = (parse_poly(f, d)?, parse_poly(g, d)?);
    let warning = jacobi_warning(&pi)?;
    if let Some(msg) = &warning {
        eprintln!("warning: {msg}");
    }
    let table = resolve_weights(&pi, order, w)?;
    let series = kontsevich_series(&pi, order, &table)?.apply(&f, &g)?;
    let mut out = coeffs_json(order, series.coeffs());
    if let Some(msg) = warning {
        out["warnings"] = json!([msg]);
    }
    Ok(Report::ok(out))
}

pub fn moyal_cmd(pi: &str, f: &str, g: &str, order: usize) -> Result<Report, CliError> {
    check_order(order)?;
    let pi = load_pi(pi)?;
    let d = pi.dim();
    let (f, g) = (parse_poly(f, d)?, parse_poly(g, d)?);
    let series = moyal(&pi, &f, &g, order)?;
    Ok(Report::ok(coeffs_json(order, series.coeffs())))
}

pub fn check(kind: CheckKind, opts: &CheckArgs) -> Result<Report, CliError> {
    match kind {
        CheckKind::Jacobi => check_jacobi(opts),
        CheckKind::Assoc => check_assoc(opts),
        CheckKind::Hochschild => check_hochschild(opts),
        CheckKind::Wick => check_wick(opts),
    }
}

fn required_pi(opts: &CheckArgs) -> Result<PolyVector, CliError> {
    let arg = opts
        .pi
        .as_deref()
        .ok_or_else(|| CliError::Usage("this check needs --pi".into()))?;
    load_pi(arg)
}

fn check_jacobi(opts: &CheckArgs) -> Result<Report, CliError> {
    let pi = required_pi(opts)?;
    let j = jacobiator(&pi)?;
    Ok(Report {
        pass: j.is_zero(),
        json: json!({
            "check": "jacobi",
            "pass": j.is_zero(),
            "dim": pi.dim(),
            "jacobiator": j.to_string(),
        }),
    })
}

/// Monomials of degree one and two in `d` variables.
fn low_monomials(d: usize) -> Vec<(u32, Polynomial)> {
    let mut out = Vec::new();
    for i in 0..d {
        let mut e = vec![0; d];
        e[i] = 1;
        out.push((1, Polynomial::monomial(d, ExponentIndex(e), int(1))));
    }
    for i in 0..d {
        for j in i..d {
            let mut e = vec![0; d];
            e[i] += 1;
            e[j] += 1;
            out.push((2, Polynomial::monomial(d, ExponentIndex(e), int(1))));
        }
    }
    out
}

/// Triples of low-degree monomials with total degree at most four.
fn monomial_triples(d: usize) -> Vec<[Polynomial; 3]> {
    let ms = low_monomials(d);
    let mut out = Vec::new();
    for (a, f) in &ms {
        for (b, g) in &ms {
            for (c, h) in &ms {
                if a + b + c <= 4 {
                    out.push([f.clone(), g.clone(), h.clone()]);
                }
            }
        }
    }
    out
}

fn check_assoc(opts: &CheckArgs) -> Result<Report, CliError> {
    let pi = required_pi(opts)?;
    let order = opts.order.unwrap_or(2);
    check_order(order)?;
    let triples = monomial_triples(pi.dim());
    match opts.weights.weights {
        WeightsMode::Table => {
            let table = weight_table(opts.weights.cache.cache.as_deref())?;
            let series = kontsevich_series(&pi, order, &table)?;
            let mut failures = Vec::new();
            for [f, g, h] in &triples {
                let a = associator(&series, f, g, h, order)?;
                if let Some(k) = a.iter().position(|p| !p.is_zero()) {
                    failures.push(json!({
                        "f": f.to_string(),
                        "g": g.to_string(),
                        "h": h.to_string(),
                        "order": k,
                        "value": a.coeffs()[k].to_string(),
                    }));
                }
            }
            let pass = failures.is_empty();
            failures.truncate(10);
            Ok(Report {
                pass,
                json: json!({
                    "check": "assoc",
                    "pass": pass,
                    "weights": "table",
                    "order": order,
                    "triples": triples.len(),
                    "failures": failures,
                }),
            })
        }
        WeightsMode::Mc => {
            check_samples(&opts.weights.mc)?;
            let ids = needed_graphs(&pi, order)?;
            let fresh = estimate_all(&ids, &opts.weights)?;
            let mut coefficients = 0usize;
            let mut widest = 0.0f64;
            let mut excluded = Vec::new();
            for [f, g, h] in &triples {
                let sym = symbolic_associator(&pi, f, g, h, order)?;
                for (k, s) in sym.iter().enumerate() {
                    let ivs = s.intervals_from_table(&fresh, SIGMAS)?;
                    for (e, iv) in &ivs {
                        coefficients += 1;
                        widest = widest.max(iv.width());
                        if !iv.contains_zero() {
                            excluded.push(interval_failure(f, g, h, k, e, iv));
                        }
                    }
                }
            }
            let pass = excluded.is_empty();
            excluded.truncate(10);
            Ok(Report {
                pass,
                json: json!({
                    "check": "assoc",
                    "pass": pass,
                    "weights": "mc",
                    "order": order,
                    "sigmas": SIGMAS,
                    "samples": opts.weights.mc.samples,
                    "seed": opts.weights.mc.seed,
                    "graphs": ids.len(),
                    "triples": triples.len(),
                    "coefficients": coefficients,
                    "widest_interval": widest,
                    "failures": excluded,
                }),
            })
        }
    }
}

fn interval_failure(f: &Polynomial, g: &Polynomial, h: &Polynomial, k: usize, e: &ExponentIndex, iv: &Interval) -> Value {
    let d = f.dim();
    let mono = Polynomial::monomial(d, e.clone(), int(1));
    json!({
        "f": f.to_string(),
        "g": g.to_string(),
        "h": h.to_string(),
        "order": k,
        "monomial": mono.to_string(),
        "interval": [iv.lo(), iv.hi()],
    })
}

fn check_hochschild(opts: &CheckArgs) -> Result<Report, CliError> {
    let mut rng = Rng::new(opts.weights.mc.seed);
    let mut failures = Vec::new();
    let (n_square, n_jacobi, n_hkr) = (50, 30, 40);
    for case in 0..n_square {
        let d = rng.range(1, 2);
        let arity = rng.range(1, 3);
        let psi = random_multidiffop(&mut rng, d, arity, 2, 2);
        if !hochschild_d(&hochschild_d(&psi)?)?.is_zero() {
            failures.push(format!("square {case}: {psi}"));
        }
    }
    for case in 0..n_jacobi {
        let d = rng.range(1, 2);
        let mut op = || {
            let arity = rng.range(1, 2);
            random_multidiffop(&mut rng, d, arity, 1, 1)
        };
        let (phi, psi, chi) = (op(), op(), op());
        let sign = if phi.degree() * psi.degree() % 2 == 1 { int(-1) } else { int(1) };
        let lhs = gerstenhaber_bracket(&phi, &gerstenhaber_bracket(&psi, &chi)?)?;
        let r1 = gerstenhaber_bracket(&gerstenhaber_bracket(&phi, &psi)?, &chi)?;
        let r2 = gerstenhaber_bracket(&psi, &gerstenhaber_bracket(&phi, &chi)?)?;
        if lhs != r1.try_add(&r2.scale(&sign))? {
            failures.push(format!("jacobi {case}"));
        }
    }
    for case in 0..n_hkr {
        let d = rng.range(1, 4);
        let k = rng.range(1, 3.min(d));
        let xi = random_polyvector(&mut rng, d, k, 2);
        if !hochschild_d(&hkr(&xi)?)?.is_zero() {
            failures.push(format!("hkr {case}: {xi}"));
        }
    }
    let pass = failures.is_empty();
    Ok(Report {
        pass,
        json: json!({
            "check": "hochschild",
            "pass": pass,
            "seed": opts.weights.mc.seed,
            "square_cases": n_square,
            "jacobi_cases": n_jacobi,
            "hkr_cases": n_hkr,
            "failures": failures,
        }),
    })
}

fn check_wick(opts: &CheckArgs) -> Result<Report, CliError> {
    let order = opts.order.unwrap_or(3);
    check_order(order)?;
    let mut rng = Rng::new(opts.weights.mc.seed);
    let fixed = opts.pi.as_deref().map(load_pi).transpose()?;
    let cases = 50;
    let mut failures = Vec::new();
    for case in 0..cases {
        let pi = match &fixed {
            Some(p) => p.clone(),
            None => {
                let d = rng.range(1, 4);
                random_constant_bivector(&mut rng, d)
            }
        };
        let d = pi.dim();
        let f = random_polynomial(&mut rng, d, 3);
        let g = random_polynomial(&mut rng, d, 3);
        if moyal(&pi, &f, &g, order)? != moyal_via_wick(&pi, &f, &g, order)? {
            failures.push(format!("case {case}: f = {f}, g = {g}"));
        }
    }
    let pass = failures.is_empty();
    Ok(Report {
        pass,
        json: json!({
            "check": "wick",
            "pass": pass,
            "order": order,
            "seed": opts.weights.mc.seed,
            "cases": cases,
            "failures": failures,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triple_family_size() {
        // d = 3: 27 linear triples and 3 · 6 · 9 with one quadratic factor
        assert_eq!(monomial_triples(3).len(), 27 + 162);
        assert_eq!(low_monomials(2).len(), 5);
    }

    #[test]
    fn order_above_three_is_a_usage_error() {
        assert!(matches!(check_order(4), Err(CliError::Usage(_))));
        assert!(check_order(3).is_ok());
    }
}
