//! wasm-bindgen entry points for the browser demo. Every export returns a
//! JSON string; errors come back as `{"error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use pencils::linsys::{self, VerifyMode};
use pencils::smoothness::Oracle;
use pencils::{bounds, constructions, incidence, FieldCtx, HomForm};

fn respond(r: pencils::Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

pub fn incidence_json(field: &str, form: &str) -> pencils::Result<Value> {
    let ctx: FieldCtx = field.parse()?;
    let c = HomForm::parse(&ctx, 3, form)?;
    let prof = incidence::profile(&c)?;
    let check = incidence::bound_check(&prof);
    let line = incidence::find_avoiding_line(&c)?;
    Ok(json!({
        "form": c.to_string(),
        "q": prof.q,
        "delta": prof.delta,
        "N": prof.n_points,
        "t": prof.t,
        "contained_lines": prof.overflow,
        "t0_bound": check.lower_t0.to_string(),
        "t0_bound_ok": check.t0_bound_ok,
        "hasse_weil": [check.hasse_weil_low, check.hasse_weil_high],
        "hasse_weil_ok": check.hasse_weil_ok,
        "avoiding_line": line.map(|l| l.to_string()),
    }))
}

pub fn construct_json(field: &str) -> pencils::Result<Value> {
    let ctx: FieldCtx = field.parse()?;
    let recipe = constructions::build_pencil(&ctx)?;
    let rep = linsys::verify_all_smooth(&recipe.pencil(), Oracle::Auto, VerifyMode::Exhaustive)?;
    let det = pencils::mpoly::det_linear_matrix(&constructions::determinant_matrix(&recipe))?;
    Ok(json!({
        "parity": recipe.parity,
        "c": recipe.c,
        "f0": recipe.f0.to_string(),
        "f1": recipe.f1.to_string(),
        "members": rep.total_members,
        "smooth": rep.smooth_count,
        "determinant": det.to_string(),
        "det_factorization_ok": constructions::verify_determinant_factorization(&recipe)?,
    }))
}

pub fn threshold_json(n: u32, d: u32, q: Option<u64>) -> pencils::Result<Value> {
    if n < 1 || d < 2 || n > 12 || d > 64 {
        return Err(pencils::Error::ShapeMismatch("need 1 <= n <= 12 and 2 <= d <= 64".into()));
    }
    let rep = bounds::theorem_threshold(n, d);
    Ok(json!({
        "delta": rep.delta,
        "K": rep.k,
        "threshold_display": rep.threshold_display,
        "smallest_passing_q": rep.smallest_passing_prime_power(),
        "q": q,
        "q_passes": q.map(|q| rep.q_passes(q)),
    }))
}

/// Incidence profile of a plane curve plus the first avoiding line.
#[wasm_bindgen]
pub fn incidence_profile(field: &str, form: &str) -> String {
    respond(incidence_json(field, form))
}

/// The explicit quadric-surface pencil for the given field.
#[wasm_bindgen]
pub fn quadric_pencil(field: &str) -> String {
    respond(construct_json(field))
}

/// Threshold on q for degree-d hypersurfaces in P^n; `q = 0` skips the test.
#[wasm_bindgen]
pub fn threshold(n: u32, d: u32, q: f64) -> String {
    let q = (q >= 1.0).then_some(q as u64);
    respond(threshold_json(n, d, q))
}
