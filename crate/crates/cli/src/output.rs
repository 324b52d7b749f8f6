use qnl_core::audit::{AuditItem, AuditReport};
use qnl_core::constants::ConstantEstimate;
use serde::Serialize;

/// `x` with 12 significant digits; scientific outside `[1e-5, 1e12)`.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    let e = x.abs().log10().floor() as i32;
    // Rounding can carry into the next decade.
    let e = if format!("{:.11e}", x.abs()).ends_with(&format!("e{}", e + 1)) { e + 1 } else { e };
    if (-5..12).contains(&e) {
        format!("{:.*}", (11 - e) as usize, x)
    } else {
        format!("{x:.11e}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

#[derive(Serialize)]
pub struct WitnessRecord {
    pub label: String,
    pub f: String,
    pub g: String,
}

#[derive(Serialize)]
pub struct BoundsRecord {
    pub paper_constant: Option<String>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

/// The serialized form of one estimate.
#[derive(Serialize)]
pub struct EstimateRecord {
    pub constant: String,
    pub space: String,
    pub lambda: f64,
    pub mu: f64,
    pub value: f64,
    pub witness: WitnessRecord,
    pub bounds: BoundsRecord,
    pub consistent: bool,
    pub seed: u64,
    pub evaluated: usize,
    pub invalid: usize,
}

impl EstimateRecord {
    pub fn new(e: &ConstantEstimate) -> Self {
        EstimateRecord {
            constant: e.constant.to_string(),
            space: e.space.to_string(),
            lambda: e.skew.lambda,
            mu: e.skew.mu,
            value: e.value,
            witness: WitnessRecord {
                label: e.witness.label.clone(),
                f: e.witness.f.to_string(),
                g: e.witness.g.to_string(),
            },
            bounds: BoundsRecord {
                paper_constant: e
                    .paper_constant
                    .map(|c| serde_json::to_value(c).unwrap()["constant"].as_str().unwrap_or("").to_string()),
                lower: e.lower_bound_paper,
                upper: e.upper_bound_paper,
            },
            consistent: e.consistent,
            seed: e.seed,
            evaluated: e.evaluated,
            invalid: e.invalid,
        }
    }
}

pub const SWEEP_HEADER: [&str; 8] =
    ["p", "lambda", "mu", "constant_id", "estimate", "paper_lower", "paper_upper", "consistent"];

/// Sweep CSV. `p` is the space exponent, empty when there is none.
pub fn estimates_csv(rows: &[ConstantEstimate]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER).unwrap();
    for e in rows {
        w.write_record([
            opt(e.space.kind.exponent()),
            e.skew.lambda.to_string(),
            e.skew.mu.to_string(),
            e.constant.to_string(),
            e.value.to_string(),
            opt(e.lower_bound_paper),
            opt(e.upper_bound_paper),
            e.consistent.to_string(),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

pub fn estimate_table(e: &ConstantEstimate) -> String {
    let r = EstimateRecord::new(e);
    let rows = [
        ("constant", r.constant),
        ("space", r.space),
        ("lambda", r.lambda.to_string()),
        ("mu", r.mu.to_string()),
        ("value", sig12(r.value)),
        ("paper_constant", r.bounds.paper_constant.unwrap_or_else(|| "-".into())),
        ("paper_lower", r.bounds.lower.map_or("-".into(), sig12)),
        ("paper_upper", r.bounds.upper.map_or("-".into(), sig12)),
        ("consistent", r.consistent.to_string()),
        ("witness", r.witness.label),
        ("f", r.witness.f),
        ("g", r.witness.g),
        ("seed", r.seed.to_string()),
    ];
    rows.iter().map(|(k, v)| format!("{k:<15} {v}\n")).collect()
}

pub fn audit_csv(report: &AuditReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "claim_id",
        "role",
        "relation",
        "verdict",
        "computed",
        "paper_claim",
        "tolerance",
        "oracle",
        "oracle_rel_diff",
        "paper_formula",
        "notes",
    ])
    .unwrap();
    for it in &report.items {
        w.write_record(audit_row(it)).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn kebab<T: Serialize>(x: &T) -> String {
    serde_json::to_value(x).unwrap().as_str().unwrap_or_default().to_string()
}

fn audit_row(it: &AuditItem) -> [String; 11] {
    [
        it.claim_id.clone(),
        kebab(&it.role),
        kebab(&it.relation),
        it.verdict.as_str().to_string(),
        opt(it.computed),
        opt(it.paper_claim),
        it.tolerance.to_string(),
        opt(it.oracle),
        opt(it.oracle_rel_diff),
        it.paper_formula.clone(),
        it.notes.clone(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(1.0), "1.00000000000");
        assert_eq!(sig12(2f64.sqrt() / 2.0), "0.707106781187");
        assert_eq!(sig12(123.456), "123.456000000");
        assert_eq!(sig12(9.9999999999999), "10.0000000000");
        assert_eq!(sig12(-2.5), "-2.50000000000");
        assert_eq!(sig12(1e-7), "1.00000000000e-7");
    }
}
