//! Deterministic JSON output.
//!
//! Every floating-point number is rounded to 12 significant digits before
//! serialization, and `serde_json`'s default map (sorted keys) is used
//! everywhere, so equal computations serialize to identical bytes across
//! runs and across serial/parallel execution.

use serde_json::{json, Value};

/// Round to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// A complex value as a deterministic JSON object.
pub fn complex_json(re: f64, im: f64) -> Value {
    json!({ "re": round_sig(re), "im": round_sig(im) })
}

/// A regularized value as a deterministic JSON object.
pub fn regularized_json(r: &crate::regint::RegularizedValue) -> Value {
    json!({
        "value": complex_json(r.value.0, r.value.1),
        "log_coeffs": r.log_coeffs.iter()
            .map(|&(re, im)| complex_json(re, im))
            .collect::<Vec<_>>(),
        "error_estimate": round_sig(r.error_estimate),
        "converged": r.converged,
    })
}

/// A logarithmic one-form as a deterministic JSON object, with exact
/// coefficients rendered as rational strings.
pub fn form_json(form: &crate::geom::LogOneForm, scene: &crate::geom::Scene) -> Value {
    json!({
        "terms": form.coeffs.iter().map(|(i, c)| json!({
            "puncture": i,
            "location": scene.punctures[*i].to_string(),
            "coeff": c.to_string(),
        })).collect::<Vec<_>>(),
    })
}

/// Render any JSON value to a canonical string (sorted keys, no trailing
/// whitespace beyond a final newline).
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON rendering cannot fail");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_idempotent_and_tight() {
        let x = std::f64::consts::PI;
        let r = round_sig(x);
        assert_eq!(round_sig(r), r);
        assert!((r - x).abs() < 1e-11);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(round_sig(-0.0), 0.0);
        // 12 significant digits survive; the 13th does not.
        assert_eq!(round_sig(1.0000000000004), 1.0);
        assert!(round_sig(1.00000000004) != 1.0);
    }

    #[test]
    fn keys_are_sorted() {
        let v = json!({"zebra": 1, "apple": 2});
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.find("apple").unwrap() < s.find("zebra").unwrap());
    }
}
