//! Browser bindings for the demo page in `www/`.
//!
//! Every exported function takes and returns JSON text. The `*_json`
//! functions hold the logic and also run natively in tests.

use qshare_core::catalog::small_codes;
use qshare_core::code::{distance_threshold_violations, mds_threshold_violations};
use qshare_core::protocol::seeded_rng;
use qshare_core::qsim::round12;
use qshare_core::schema::{parse_code, CodeSpec};
use qshare_core::{verify_all, Budget, LinearCode, LoccDecoder, PlayerSet, Secret, StateVector};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

// The page renders every amplitude; keep states small enough to draw.
const DEMO_BUDGET: Budget = Budget {
    max_codewords: 1 << 12,
    max_subset_players: 8,
    max_amplitudes: 1 << 12,
};

fn load(spec: &str) -> Result<LinearCode, String> {
    parse_code(spec).map_err(|e| e.to_string())
}

fn parse_subset(text: &str) -> Result<PlayerSet, String> {
    let ids = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| format!("not a player number: {s}")))
        .collect::<Result<Vec<_>, _>>()?;
    PlayerSet::from_one_based(&ids).map_err(|e| e.to_string())
}

fn nonzero_terms(state: &StateVector) -> Value {
    let terms: Vec<Value> = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 1e-12)
        .map(|(i, a)| {
            let label: Vec<String> = state.digits_of(i).iter().map(u32::to_string).collect();
            json!({ "label": label.join(" "), "re": round12(a.re), "im": round12(a.im) })
        })
        .collect();
    Value::Array(terms)
}

/// Built-in example codes as `[{name, spec}]`.
pub fn presets_json() -> String {
    let list: Vec<Value> = small_codes()
        .into_iter()
        .map(|nc| json!({ "name": nc.name, "spec": CodeSpec::of(&nc.code) }))
        .collect();
    Value::Array(list).to_string()
}

/// Distance, MDS flag and the rank test for every proper `B`.
pub fn analyze_json(spec: &str) -> Result<String, String> {
    let code = load(spec)?;
    let budget = DEMO_BUDGET;
    let d = code.min_distance(&budget).map_err(|e| e.to_string())?;
    let d_rank = code.distance_via_rank(&budget).map_err(|e| e.to_string())?;
    let reports = code.enumerate_assisting(&budget).map_err(|e| e.to_string())?;
    let mds = d == code.n() - code.k() + 1;
    let subsets: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "b": r.subset_b.to_string(),
                "a": r.subset_b.complement(code.n()).to_string(),
                "size": r.subset_b.len(),
                "rank": r.rank_gb,
                "assisted": r.is_assisted,
            })
        })
        .collect();
    Ok(json!({
        "n": code.n(),
        "k": code.k(),
        "q": code.q(),
        "field": code.field().to_string(),
        "d": d,
        "d_rank": d_rank,
        "mds": mds,
        "distance_threshold_holds": distance_threshold_violations(&reports, code.n(), d).is_empty(),
        "mds_threshold_holds": !mds || mds_threshold_violations(&reports, code.k()).is_empty(),
        "subsets": subsets,
    })
    .to_string())
}

/// One protocol run with every intermediate state. `secret` is `random`
/// or `basis:<idx>`.
pub fn simulate_json(spec: &str, subset_a: &str, secret: &str, seed: u64) -> Result<String, String> {
    let code = load(spec)?;
    let a = parse_subset(subset_a)?;
    let decoder = LoccDecoder::new(&code, &a, DEMO_BUDGET).map_err(|e| e.to_string())?;
    let mut rng = seeded_rng(seed);
    let secret = match secret.strip_prefix("basis:") {
        Some(idx) => {
            let idx = idx.parse().map_err(|_| format!("bad basis index: {idx}"))?;
            Secret::basis(code.field(), code.k(), idx)
        }
        None if secret == "random" => Secret::random(code.field(), code.k(), &mut rng),
        None => return Err(format!("unknown secret: {secret}")),
    }
    .map_err(|e| e.to_string())?;
    let (t, stages) = decoder.run_staged(&secret, &mut rng).map_err(|e| e.to_string())?;
    Ok(json!({
        "subset_a": a.to_string(),
        "subset_b": t.subset_b().to_string(),
        "outcomes": t.outcomes_a.to_string(),
        "probability": round12(t.outcome_probability),
        "correction": t.correction_z.to_string(),
        "fidelity": round12(t.fidelity),
        "stages": [
            { "title": "secret", "terms": nonzero_terms(secret.state()) },
            { "title": "encoded", "terms": nonzero_terms(&stages.encoded) },
            { "title": "after measuring A", "terms": nonzero_terms(&stages.measured) },
            { "title": "after Z correction", "terms": nonzero_terms(&stages.corrected) },
            { "title": "decoded", "terms": nonzero_terms(t.recovered.state()) },
        ],
    })
    .to_string())
}

/// PASS/FAIL and evidence for every proper `A`.
pub fn verify_json(spec: &str, trials: usize, seed: u64) -> Result<String, String> {
    let code = load(spec)?;
    let verdicts = verify_all(&code, trials.max(1), seed, &DEMO_BUDGET).map_err(|e| e.to_string())?;
    let all_pass = verdicts.iter().all(|v| v.pass);
    Ok(json!({ "pass": all_pass, "verdicts": verdicts }).to_string())
}

#[wasm_bindgen]
pub fn presets() -> String {
    presets_json()
}

#[wasm_bindgen]
pub fn analyze(spec: &str) -> Result<String, String> {
    analyze_json(spec)
}

#[wasm_bindgen]
pub fn simulate(spec: &str, subset_a: &str, secret: &str, seed: u32) -> Result<String, String> {
    simulate_json(spec, subset_a, secret, seed as u64)
}

#[wasm_bindgen]
pub fn verify(spec: &str, trials: u32, seed: u32) -> Result<String, String> {
    verify_json(spec, trials as usize, seed as u64)
}
