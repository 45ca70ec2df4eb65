//! Browser bindings: play a game, sample the deviation payoff curve, and
//! tabulate the vanilla Gini series. Every export returns a JSON string.

use cakecut::cake::{Fraction, PlayerId};
use cakecut::engine::{deviate, equilibrium_profile, play, GameConfig, Rule};
use cakecut::equilibrium::{payoff_curve, Grid};
use cakecut::metrics::{gini_asymptotic, gini_limit, gini_vanilla_exact, poa};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn frac(x: &Fraction) -> Value {
    json!({ "text": x.to_string(), "value": x.to_f64() })
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Plays one game on the unit cake. An empty `first_cut` keeps the
/// equilibrium opening cut.
pub fn simulate(rule: &str, n: usize, first_cut: &str) -> Result<Value, String> {
    let rule: Rule = rule.parse().map_err(err)?;
    let config = GameConfig::unit(n, rule).map_err(err)?;
    let mut profile = equilibrium_profile(&config);
    if !first_cut.trim().is_empty() {
        let alpha: Fraction = first_cut.trim().parse().map_err(err)?;
        profile = deviate(&profile, PlayerId(1), alpha).map_err(err)?;
    }
    let (partition, trace) = play(&config, &profile).map_err(err)?;
    let pieces: Vec<Value> = partition
        .iter()
        .map(|(p, piece)| json!({ "player": p.0, "lo": frac(piece.lo()), "hi": frac(piece.hi()), "share": frac(&piece.size()) }))
        .collect();
    let events: Vec<Value> = trace.events.iter().map(|e| serde_json::to_value(e).expect("events serialize")).collect();
    Ok(json!({
        "rule": rule.to_string(),
        "n": n,
        "pieces": pieces,
        "events": events,
        "cuts": trace.cuts(),
        "queries": trace.queries.total(),
    }))
}

pub fn curve(n: usize, grid: u64) -> Result<Value, String> {
    let points = payoff_curve(n, Grid::new(grid).map_err(err)?).map_err(err)?;
    Ok(Value::Array(
        points.iter().map(|p| json!({ "epsilon": frac(&p.epsilon), "payoff": frac(&p.payoff_norm) })).collect(),
    ))
}

pub fn gini_series(n_max: usize) -> Result<Value, String> {
    if n_max < 2 {
        return Err("n_max must be at least 2".into());
    }
    (2..=n_max)
        .map(|n| {
            Ok(json!({
                "n": n,
                "gini_exact": frac(&gini_vanilla_exact(n).map_err(err)?),
                "gini_asymptotic": frac(&gini_asymptotic(n).map_err(err)?),
                "gini_limit": frac(&gini_limit(n).map_err(err)?),
                "poa": frac(&poa(n, Rule::Vanilla).map_err(err)?.poa),
            }))
        })
        .collect::<Result<Vec<_>, String>>()
        .map(Value::Array)
}

fn to_js(result: Result<Value, String>) -> Result<String, JsValue> {
    result.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn simulate_json(rule: &str, n: usize, first_cut: &str) -> Result<String, JsValue> {
    to_js(simulate(rule, n, first_cut))
}

#[wasm_bindgen]
pub fn payoff_curve_json(n: usize, grid: u32) -> Result<String, JsValue> {
    to_js(curve(n, u64::from(grid)))
}

#[wasm_bindgen]
pub fn gini_series_json(n_max: usize) -> Result<String, JsValue> {
    to_js(gini_series(n_max))
}
