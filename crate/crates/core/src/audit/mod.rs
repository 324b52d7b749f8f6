//! Claim-by-claim audit of the published bounds and their proof chains.
//!
//! Every claim is instantiated once per grid row and gets a stable id of the
//! form `base[key=value,...]`. The set of ids is fixed by [`registry`] before
//! anything is computed, so a report is complete even when the engine fails
//! on some items: those carry the [`Verdict::Error`] verdict instead.

mod render;
mod suites;
mod witness;

use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::SkewParams;
use crate::error::{domain, Result};
use crate::nfunc::NFunction;
use crate::norms::SupGrid;

pub use render::render_table;
pub use suites::{chi_e_items, index_items, quasi_triangle_items, sandwich_items};
pub use witness::{witness_cp, witness_orlicz, witness_p_variant};

/// Relative tolerance of equality claims.
pub const EQ_TOL: f64 = 1e-4;
/// Allowed negative slack of inequality claims.
pub const INEQ_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Confirmed,
    Violated,
    Inconsistent,
    ApproxHolds,
    Error,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Confirmed => "confirmed",
            Verdict::Violated => "violated",
            Verdict::Inconsistent => "inconsistent",
            Verdict::ApproxHolds => "approx-holds",
            Verdict::Error => "error",
        }
    }
}

/// What a failing item means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    /// A line of a proof chain.
    Step,
    /// A lower bound on a supremum, certified only by the proof's witnesses;
    /// a shortfall means the witnesses do not certify it.
    Witness,
    /// A universal claim that a single evaluation can refute.
    Conclusion,
    /// Arithmetic on two printed bounds (`lower ≤ upper`).
    Consistency,
}

/// How `computed` is compared with `paper_claim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Equal,
    AtLeast,
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditItem {
    pub claim_id: String,
    pub role: Role,
    pub relation: Relation,
    pub paper_formula: String,
    /// Numeric value of the claim; `None` when it could not be formed.
    pub paper_claim: Option<f64>,
    pub computed: Option<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub oracle: Option<f64>,
    /// `|computed − oracle| / |oracle|`.
    pub oracle_rel_diff: Option<f64>,
    pub notes: String,
}

/// An engine value and, when the oracle ran, the same quantity recomputed
/// from oracle norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Val {
    pub engine: f64,
    pub oracle: Option<f64>,
}

impl Val {
    pub fn exact(v: f64) -> Self {
        Val { engine: v, oracle: None }
    }

    /// Applies `f` to the engine values and, if every input has one, to the
    /// oracle values.
    pub fn combine<const N: usize>(vals: [Val; N], f: impl Fn([f64; N]) -> f64) -> Self {
        let engine = f(vals.map(|v| v.engine));
        let oracle =
            if vals.iter().all(|v| v.oracle.is_some()) { Some(f(vals.map(|v| v.oracle.unwrap()))) } else { None };
        Val { engine, oracle }
    }
}

/// A claim before evaluation.
#[derive(Debug, Clone)]
pub(crate) struct Claim {
    pub base: &'static str,
    pub role: Role,
    pub relation: Relation,
    pub formula: String,
    pub value: f64,
    /// For equality claims: the inequality the proof draws from them.
    pub supports: Option<Relation>,
    pub notes: String,
}

impl Claim {
    pub fn new(base: &'static str, role: Role, relation: Relation, formula: impl Into<String>, value: f64) -> Self {
        Claim { base, role, relation, formula: formula.into(), value, supports: None, notes: String::new() }
    }

    pub fn supporting(mut self, r: Relation) -> Self {
        self.supports = Some(r);
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes = n.into();
        self
    }

    pub fn eval(self, row: &str, computed: Result<Val>) -> AuditItem {
        let tolerance = match self.relation {
            Relation::Equal => eq_tolerance(self.value),
            _ => INEQ_TOL,
        };
        let claim_id = format!("{}[{row}]", self.base);
        let mut notes = self.notes;
        let (computed, oracle, verdict) = match computed {
            Ok(_) if !self.value.is_finite() => {
                push_note(&mut notes, "claim value is not finite");
                (None, None, Verdict::Error)
            }
            Ok(v) if v.engine.is_finite() => {
                let verdict = decide(self.role, self.relation, self.supports, v.engine, self.value);
                (Some(v.engine), v.oracle, verdict)
            }
            Ok(v) => {
                push_note(&mut notes, &format!("non-finite value {}", v.engine));
                (None, None, Verdict::Error)
            }
            Err(e) => {
                push_note(&mut notes, &e.to_string());
                (None, None, Verdict::Error)
            }
        };
        let oracle_rel_diff = match (computed, oracle) {
            (Some(c), Some(o)) if o != 0.0 => Some((c - o).abs() / o.abs()),
            (Some(c), Some(_)) => Some(c.abs()),
            _ => None,
        };
        AuditItem {
            claim_id,
            role: self.role,
            relation: self.relation,
            paper_formula: self.formula,
            paper_claim: Some(self.value).filter(|v| v.is_finite()),
            computed,
            tolerance,
            verdict,
            oracle,
            oracle_rel_diff,
            notes,
        }
    }
}

fn push_note(notes: &mut String, s: &str) {
    if !notes.is_empty() {
        notes.push_str("; ");
    }
    notes.push_str(s);
}

fn eq_tolerance(claim: f64) -> f64 {
    if claim == 0.0 {
        1e-10
    } else {
        EQ_TOL * claim.abs()
    }
}

fn holds(relation: Relation, computed: f64, claim: f64) -> bool {
    match relation {
        Relation::Equal => (computed - claim).abs() <= eq_tolerance(claim),
        Relation::AtLeast => computed - claim >= -INEQ_TOL,
        Relation::AtMost => claim - computed >= -INEQ_TOL,
    }
}

/// Verdict of `computed` against `claim`.
pub fn decide(role: Role, relation: Relation, supports: Option<Relation>, computed: f64, claim: f64) -> Verdict {
    if holds(relation, computed, claim) {
        return Verdict::Confirmed;
    }
    if role == Role::Consistency {
        return Verdict::Inconsistent;
    }
    match supports {
        Some(s) if relation == Relation::Equal && holds(s, computed, claim) => Verdict::ApproxHolds,
        _ => Verdict::Violated,
    }
}

/// Grid of the audit run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AuditConfig {
    /// Lebesgue exponents.
    pub ps: Vec<f64>,
    /// `(λ, μ)` pairs.
    pub skews: Vec<[f64; 2]>,
    /// Add `Power(p)` for every `p` in `ps` to `phis`.
    pub power_phi: bool,
    /// Further N-functions.
    pub phis: Vec<NFunction>,
    /// Exponents of the `p`-th skew constant.
    pub pexps: Vec<f64>,
    /// Add `pexp = p` rows for `Power(p)`.
    pub pexp_p: bool,
    /// Slack allowed when picking index extremizers.
    pub eps: f64,
    /// Number of points `a` at which level-set identities are measured.
    pub level_points: usize,
    /// Measures `|E|` for the characteristic-function identity.
    pub chi_measures: Vec<f64>,
    /// Random samples per property suite.
    pub samples: usize,
    pub seed: u64,
    /// Recompute every engine norm with the dense-grid oracle.
    pub slow_oracle: bool,
    pub grid: SupGrid,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            ps: vec![1.5, 2.0, 3.0, 4.0],
            skews: vec![[1.0, 1.0], [1.0, 2.0], [2.0, 1.0], [8.0, 8.0]],
            power_phi: true,
            phis: vec![NFunction::ExpMinus],
            pexps: vec![2.0, 3.0],
            pexp_p: true,
            eps: 1e-3,
            level_points: 16,
            chi_measures: vec![0.5, 1.0, 2.0],
            samples: 100,
            seed: 0,
            slow_oracle: false,
            grid: SupGrid::default(),
        }
    }
}

/// One unit of work of the audit.
#[derive(Debug, Clone, PartialEq)]
pub enum Row {
    Cp { p: f64, sk: SkewParams },
    Orlicz { phi: NFunction, sk: SkewParams },
    PVariant { phi: NFunction, sk: SkewParams, pexp: f64 },
    ChiE { phi: NFunction, measure: f64 },
    Indices { phi: NFunction },
    Sandwich { p: f64 },
    QuasiTriangle { p: f64 },
}

fn fmt_sk(sk: &SkewParams) -> String {
    format!("lambda={},mu={}", sk.lambda, sk.mu)
}

impl Row {
    /// The bracketed part of the claim ids of this row.
    pub fn key(&self) -> String {
        match self {
            Row::Cp { p, sk } => format!("p={p},{}", fmt_sk(sk)),
            Row::Orlicz { phi, sk } => format!("phi={phi},{}", fmt_sk(sk)),
            Row::PVariant { phi, sk, pexp } => format!("phi={phi},{},pexp={pexp}", fmt_sk(sk)),
            Row::ChiE { phi, measure } => format!("phi={phi},measure={measure}"),
            Row::Indices { phi } => format!("phi={phi}"),
            Row::Sandwich { p } | Row::QuasiTriangle { p } => format!("p={p}"),
        }
    }

    /// Claim bases emitted by this row, in order.
    pub fn bases(&self) -> Vec<&'static str> {
        let power = |phi: &NFunction| matches!(phi, NFunction::Power { .. });
        match self {
            Row::Cp { .. } => witness::CP_BASES.to_vec(),
            Row::Orlicz { phi, .. } => {
                let mut b = witness::ORLICZ_BASES.to_vec();
                if power(phi) {
                    b.push(witness::ORLICZ_WLP_BASE);
                }
                b
            }
            Row::PVariant { phi, .. } => {
                let mut b = witness::PVAR_BASES.to_vec();
                if power(phi) {
                    b.push(witness::PVAR_WLP_BASE);
                }
                b
            }
            Row::ChiE { .. } => suites::CHI_E_BASES.to_vec(),
            Row::Indices { .. } => suites::INDEX_BASES.to_vec(),
            Row::Sandwich { .. } => suites::SANDWICH_BASES.to_vec(),
            Row::QuasiTriangle { .. } => suites::QUASI_TRIANGLE_BASES.to_vec(),
        }
    }

    pub fn claim_ids(&self) -> Vec<String> {
        let key = self.key();
        self.bases().into_iter().map(|b| format!("{b}[{key}]")).collect()
    }

    /// Whether `λ = μ` (rows without skew parameters count as symmetric).
    pub fn symmetric(&self) -> bool {
        match self {
            Row::Cp { sk, .. } | Row::Orlicz { sk, .. } | Row::PVariant { sk, .. } => sk.lambda == sk.mu,
            _ => true,
        }
    }

    fn run(&self, cfg: &AuditConfig) -> Vec<AuditItem> {
        let out = match self {
            Row::Cp { p, sk } => witness_cp(*p, sk, cfg),
            Row::Orlicz { phi, sk } => witness_orlicz(phi, sk, cfg),
            Row::PVariant { phi, sk, pexp } => witness_p_variant(phi, sk, *pexp, cfg),
            Row::ChiE { phi, measure } => chi_e_items(phi, *measure, cfg),
            Row::Indices { phi } => index_items(phi, cfg),
            Row::Sandwich { p } => sandwich_items(*p, cfg),
            Row::QuasiTriangle { p } => quasi_triangle_items(*p, cfg),
        };
        match out {
            Ok(items) => items,
            Err(e) => self
                .claim_ids()
                .into_iter()
                .map(|claim_id| AuditItem {
                    claim_id,
                    role: Role::Step,
                    relation: Relation::Equal,
                    paper_formula: String::new(),
                    paper_claim: None,
                    computed: None,
                    tolerance: 0.0,
                    verdict: Verdict::Error,
                    oracle: None,
                    oracle_rel_diff: None,
                    notes: e.to_string(),
                })
                .collect(),
        }
    }
}

fn push_unique<T: PartialEq>(v: &mut Vec<T>, x: T) {
    if !v.contains(&x) {
        v.push(x);
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ps.is_empty() || self.skews.is_empty() {
            return domain("audit grid needs at least one p and one (lambda, mu)");
        }
        for &p in &self.ps {
            if !(p.is_finite() && p > 1.0) {
                return domain(format!("p must be finite and > 1, got {p}"));
            }
        }
        for &[l, m] in &self.skews {
            SkewParams::new(l, m)?;
        }
        for phi in &self.phis {
            phi.validate()?;
        }
        for &r in &self.pexps {
            if !(r.is_finite() && r >= 1.0) {
                return domain(format!("pexp must be finite and >= 1, got {r}"));
            }
        }
        for &m in &self.chi_measures {
            if !(m.is_finite() && m > 0.0) {
                return domain(format!("|E| must be finite and > 0, got {m}"));
            }
        }
        if !(self.eps > 0.0) || self.level_points < 1 || self.samples < 1 {
            return domain("eps must be > 0, level_points and samples >= 1");
        }
        Ok(())
    }

    /// The N-functions of the grid, without duplicates.
    pub fn phi_list(&self) -> Vec<NFunction> {
        let mut out = Vec::new();
        if self.power_phi {
            for &p in &self.ps {
                push_unique(&mut out, NFunction::Power { p });
            }
        }
        for &phi in &self.phis {
            push_unique(&mut out, phi);
        }
        out
    }

    /// Rows in report order.
    pub fn rows(&self) -> Vec<Row> {
        let skews: Vec<SkewParams> = self.skews.iter().map(|&[lambda, mu]| SkewParams { lambda, mu }).collect();
        let phis = self.phi_list();
        let mut rows = Vec::new();
        for &p in &self.ps {
            for &sk in &skews {
                rows.push(Row::Cp { p, sk });
            }
        }
        for &phi in &phis {
            for &sk in &skews {
                rows.push(Row::Orlicz { phi, sk });
            }
        }
        for &phi in &phis {
            let mut pexps = self.pexps.clone();
            if let (true, NFunction::Power { p }) = (self.pexp_p, phi) {
                push_unique(&mut pexps, p);
            }
            for &sk in &skews {
                let mut seen = Vec::new();
                for &pexp in &pexps {
                    if seen.contains(&pexp) {
                        continue;
                    }
                    seen.push(pexp);
                    rows.push(Row::PVariant { phi, sk, pexp });
                }
            }
        }
        for &phi in &phis {
            for &measure in &self.chi_measures {
                rows.push(Row::ChiE { phi, measure });
            }
        }
        for &phi in &phis {
            if matches!(phi, NFunction::Power { .. }) {
                rows.push(Row::Indices { phi });
            }
        }
        for &p in &self.ps {
            rows.push(Row::Sandwich { p });
        }
        for &p in &self.ps {
            rows.push(Row::QuasiTriangle { p });
        }
        rows
    }
}

/// Every claim id the report for `cfg` must contain, in report order.
pub fn registry(cfg: &AuditConfig) -> Vec<String> {
    cfg.rows().iter().flat_map(Row::claim_ids).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub total: usize,
    pub confirmed: usize,
    pub violated: usize,
    pub inconsistent: usize,
    pub approx_holds: usize,
    pub error: usize,
    /// Violated items with [`Role::Conclusion`].
    pub conclusion_violations: usize,
    /// Largest oracle disagreement over all items, if the oracle ran.
    pub max_oracle_rel_diff: Option<f64>,
}

impl AuditSummary {
    fn of(items: &[AuditItem]) -> Self {
        let mut s = AuditSummary { total: items.len(), ..Default::default() };
        for it in items {
            match it.verdict {
                Verdict::Confirmed => s.confirmed += 1,
                Verdict::Violated => s.violated += 1,
                Verdict::Inconsistent => s.inconsistent += 1,
                Verdict::ApproxHolds => s.approx_holds += 1,
                Verdict::Error => s.error += 1,
            }
            if it.verdict == Verdict::Violated && it.role == Role::Conclusion {
                s.conclusion_violations += 1;
            }
            if let Some(d) = it.oracle_rel_diff {
                s.max_oracle_rel_diff = Some(s.max_oracle_rel_diff.map_or(d, |m: f64| m.max(d)));
            }
        }
        s
    }
}

/// Readings adopted where the printed text is ambiguous or garbled.
pub const INTERPRETATION_NOTES: &[&str] = &[
    "‖f‖* is taken with the integral over E, i.e. sup_m m^{1/p-1} ∫_0^m f*.",
    "The quasi-triangle step for the difference is checked as ‖μf−λg‖ ≤ 2(μ‖f‖+λ‖g‖).",
    "g₁ is taken as Φ⁻¹(u₀)(χ_{B₁}+χ_{B₂}) and g₂ as Φ⁻¹(u₀)(χ_{B₁}−χ_{B₂}).",
    "Balls are replaced by disjoint intervals of the same measure (n = 1).",
    "f₂, g₂ of the second half of the C_{p2} lemma have the profiles of f₁, g₁.",
    "The weak-Lebesgue corollaries are labeled wL^p; their rows use Φ = Power(p).",
    "Level-set identities are measured for every (λ, μ), including λ ≠ μ.",
    "Skew cores are C-free: no division by C_{X1}C_{X2}.",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub items: Vec<AuditItem>,
    pub config: AuditConfig,
    pub engine_version: String,
    /// Seconds since the Unix epoch; the only non-deterministic field.
    pub timestamp: u64,
    pub summary: AuditSummary,
    pub notes: Vec<String>,
}

impl AuditReport {
    /// `1` if a conclusion is violated, else `0`.
    pub fn exit_code(&self) -> i32 {
        if self.summary.conclusion_violations > 0 {
            1
        } else {
            0
        }
    }

    /// JSON with the timestamp zeroed, for byte comparisons.
    pub fn to_json_without_timestamp(&self) -> String {
        let mut r = self.clone();
        r.timestamp = 0;
        serde_json::to_string_pretty(&r).expect("report serializes")
    }
}

/// Runs every row of `cfg` (in parallel) and collects items in registry order.
pub fn run_audit(cfg: &AuditConfig) -> Result<AuditReport> {
    cfg.validate()?;
    let rows = cfg.rows();
    let items: Vec<AuditItem> = rows.par_iter().map(|r| r.run(cfg)).collect::<Vec<_>>().into_iter().flatten().collect();
    debug_assert_eq!(items.iter().map(|i| i.claim_id.clone()).collect::<Vec<_>>(), registry(cfg));
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    Ok(AuditReport {
        summary: AuditSummary::of(&items),
        items,
        config: cfg.clone(),
        engine_version: crate::VERSION.to_string(),
        timestamp,
        notes: INTERPRETATION_NOTES.iter().map(|s| s.to_string()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_rules() {
        assert_eq!(decide(Role::Step, Relation::Equal, None, 1.00005, 1.0), Verdict::Confirmed);
        assert_eq!(decide(Role::Step, Relation::Equal, None, 1.001, 1.0), Verdict::Violated);
        assert_eq!(decide(Role::Step, Relation::Equal, Some(Relation::AtLeast), 1.1, 1.0), Verdict::ApproxHolds);
        assert_eq!(decide(Role::Step, Relation::Equal, Some(Relation::AtLeast), 0.9, 1.0), Verdict::Violated);
        assert_eq!(decide(Role::Conclusion, Relation::AtMost, None, 2.0 + 5e-7, 2.0), Verdict::Confirmed);
        assert_eq!(decide(Role::Conclusion, Relation::AtMost, None, 2.0 + 2e-6, 2.0), Verdict::Violated);
        assert_eq!(decide(Role::Consistency, Relation::AtMost, None, 4.0, 2.0), Verdict::Inconsistent);
        assert_eq!(decide(Role::Witness, Relation::AtLeast, None, 0.5, 1.0), Verdict::Violated);
    }

    #[test]
    fn default_registry_has_unique_ids() {
        let ids = registry(&AuditConfig::default());
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
        assert!(ids.contains(&"cp.c1-bounds[p=2,lambda=8,mu=8]".to_string()));
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let e = serde_json::from_str::<AuditConfig>(r#"{"ps":[2.0],"bogus":1}"#);
        assert!(e.is_err());
        let c: AuditConfig = serde_json::from_str(r#"{"ps":[2.0]}"#).unwrap();
        assert_eq!(c.skews.len(), 4);
    }
}
