//! Report and table serializers.

use cayleylab::verifier::{ClaimReport, ScalingRow, Witness};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest integer a JSON consumer can hold exactly in a double.
const SAFE_INT: i64 = 1 << 53;

/// Integers beyond ±2⁵³ become decimal strings.
pub fn int_value(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) if (-SAFE_INT..=SAFE_INT).contains(&i) => Value::from(i),
        _ => Value::String(v.to_string()),
    }
}

pub fn witness_value(w: &Witness) -> Value {
    match w {
        Witness::Int(v) => int_value(v),
        Witness::Rational(q) => Value::String(q.to_string()),
        Witness::Bool(b) => Value::Bool(*b),
        Witness::Real(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
    }
}

pub fn report_json(r: &ClaimReport) -> Value {
    let mut m = Map::new();
    m.insert("tool-version".into(), TOOL_VERSION.into());
    m.insert("claim".into(), r.claim.name().into());
    m.insert("instance".into(), r.instance.clone().into());
    m.insert("pass".into(), r.pass.into());
    let witnesses: Map<String, Value> = r
        .witnesses
        .iter()
        .map(|(k, w)| (k.clone(), witness_value(w)))
        .collect();
    m.insert("witnesses".into(), Value::Object(witnesses));
    m.insert("notes".into(), r.notes.clone().into());
    if let Some(e) = &r.error {
        m.insert("error".into(), json!({ "limit": e.limit, "message": e.message }));
    }
    Value::Object(m)
}

/// One JSON object per line.
pub fn reports_json_lines(reports: &[ClaimReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&report_json(r).to_string());
        out.push('\n');
    }
    out
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Int(v) => v.to_string(),
        Witness::Rational(q) => q.to_string(),
        Witness::Bool(b) => b.to_string(),
        Witness::Real(x) => format!("{x:.6}"),
    }
}

pub fn reports_text(reports: &[ClaimReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        out.push_str(&format!("{verdict} {} {}\n", r.claim, r.instance));
        if !r.witnesses.is_empty() {
            let parts: Vec<String> = r
                .witnesses
                .iter()
                .map(|(k, w)| format!("{k}={}", witness_text(w)))
                .collect();
            out.push_str(&format!("  {}\n", parts.join(" ")));
        }
        if !r.notes.is_empty() {
            out.push_str(&format!("  note: {}\n", r.notes));
        }
        if let Some(e) = &r.error {
            out.push_str(&format!("  error: {}\n", e.message));
        }
    }
    out
}

pub fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

pub fn reports_csv(reports: &[ClaimReport]) -> String {
    csv_string(
        &["claim", "instance", "pass", "witnesses", "notes", "error"],
        reports.iter().map(|r| {
            let ws: Vec<String> = r
                .witnesses
                .iter()
                .map(|(k, w)| format!("{k}={}", witness_text(w)))
                .collect();
            vec![
                r.claim.name().to_string(),
                r.instance.clone(),
                r.pass.to_string(),
                ws.join(" "),
                r.notes.clone(),
                r.error.as_ref().map(|e| e.message.clone()).unwrap_or_default(),
            ]
        }),
    )
}

pub const SCALING_HEADER: [&str; 5] = ["param", "order", "diameter", "log_order", "fit_exponent"];

fn real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.6}")
    } else {
        String::new()
    }
}

pub fn scaling_csv(rows: &[ScalingRow]) -> String {
    csv_string(
        &SCALING_HEADER,
        rows.iter().map(|r| {
            vec![
                r.param.to_string(),
                r.order.to_string(),
                r.diameter.to_string(),
                real(r.log_order),
                real(r.fit_exponent),
            ]
        }),
    )
}

pub fn scaling_row_json(r: &ScalingRow) -> Value {
    let f = |x: f64| serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
    let mut m = Map::new();
    m.insert("param".into(), r.param.into());
    m.insert("order".into(), r.order.into());
    m.insert("diameter".into(), r.diameter.into());
    m.insert("log_order".into(), f(r.log_order));
    m.insert("fit_exponent".into(), f(r.fit_exponent));
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cayleylab::verifier::ClaimId;

    #[test]
    fn big_integers_become_strings() {
        assert_eq!(int_value(&BigInt::from(42)), json!(42));
        assert_eq!(int_value(&BigInt::from(1u64 << 53)), json!(9007199254740992i64));
        assert_eq!(int_value(&(BigInt::from(1u64 << 53) + 1)), json!("9007199254740993"));
        assert_eq!(int_value(&(BigInt::from(1) << 64)), json!("18446744073709551616"));
        assert_eq!(int_value(&BigInt::from(-5)), json!(-5));
    }

    #[test]
    fn report_key_order() {
        let mut r = ClaimReport::new(ClaimId::Nilp2, "q8");
        r.int("class", 1);
        r.pass = true;
        let text = report_json(&r).to_string();
        let keys = ["tool-version", "claim", "instance", "pass", "witnesses", "notes"];
        let pos: Vec<usize> = keys.iter().map(|k| text.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{text}");
        assert!(text.contains("\"pass\":true"));
    }

    #[test]
    fn scaling_csv_rows() {
        let rows = vec![
            ScalingRow { param: 16, order: 16, diameter: 15, log_order: 16f64.ln(), fit_exponent: 1.0 },
            ScalingRow { param: 32, order: 32, diameter: 31, log_order: 32f64.ln(), fit_exponent: 1.0 },
        ];
        let csv = scaling_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "param,order,diameter,log_order,fit_exponent");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("16,16,15,2.772589,"));
    }
}
