//! Aligned plain-text rendering of a report.

use std::fmt::Write;

use super::{AuditReport, Role};

fn num(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.6e}"))
}

fn role(r: Role) -> &'static str {
    match r {
        Role::Step => "step",
        Role::Witness => "witness",
        Role::Conclusion => "conclusion",
        Role::Consistency => "consistency",
    }
}

/// One line per item plus a summary line.
pub fn render_table(report: &AuditReport) -> String {
    let header = ["claim_id", "role", "verdict", "computed", "claim", "oracle_diff", "formula"];
    let rows: Vec<[String; 7]> = report
        .items
        .iter()
        .map(|it| {
            [
                it.claim_id.clone(),
                role(it.role).to_string(),
                it.verdict.as_str().to_string(),
                num(it.computed),
                num(it.paper_claim),
                num(it.oracle_rel_diff),
                it.paper_formula.clone(),
            ]
        })
        .collect();
    let mut widths = header.map(|h| h.chars().count());
    for r in &rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                let pad = w - c.chars().count();
                s.push_str(c);
                s.extend(std::iter::repeat_n(' ', pad + 2));
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(&header.map(String::from));
    for r in &rows {
        line(r);
    }
    let s = &report.summary;
    let _ = writeln!(
        out,
        "\n{} items: {} confirmed, {} approx-holds, {} violated ({} conclusions), {} inconsistent, {} error",
        s.total, s.confirmed, s.approx_holds, s.violated, s.conclusion_violations, s.inconsistent, s.error
    );
    out
}
