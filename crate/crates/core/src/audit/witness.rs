//! Witness functions of the lower-bound proofs and the items built on them.

use super::{AuditConfig, AuditItem, Claim, Relation, Role, Val};
use crate::constants::{ball_f_pair, ball_g_pair, cp_upper, paper_bounds, ConstantId, SkewParams};
use crate::error::{domain, Result};
use crate::nfunc::NFunction;
use crate::norms::{kolmogorov_functional, weak_lp_norm, weak_orlicz_norm, SupGrid};
use crate::realfn::oracle::GridOracle;
use crate::realfn::PiecewiseFunction;

pub(crate) const CP_BASES: &[&str] = &[
    "cp.f1-norm",
    "cp.g1-norm",
    "cp.h1-norm",
    "cp.h1-level-set",
    "cp.h2-norm",
    "cp.h2-level-set",
    "cp.c1-witness",
    "cp.c2-witness",
    "cp.quasi-triangle-plus",
    "cp.quasi-triangle-minus",
    "cp.c1-upper",
    "cp.c2-upper",
    "cp.c1-bounds",
    "cp.c2-bounds",
    "cp.star-lower",
    "cp.star-upper",
];

pub(crate) const ORLICZ_BASES: &[&str] = &[
    "orlicz.t0-choice",
    "orlicz.u0-choice",
    "orlicz.f1-norm",
    "orlicz.f2-norm",
    "orlicz.f-plus-chain",
    "orlicz.f-plus-lower",
    "orlicz.f-minus-lower",
    "orlicz.f-core",
    "orlicz.g1-norm",
    "orlicz.g2-norm",
    "orlicz.g-plus-chain",
    "orlicz.g-plus-lower",
    "orlicz.g-minus-chain",
    "orlicz.g-minus-lower",
    "orlicz.g-core",
    "orlicz.thm-alpha",
    "orlicz.thm-beta",
];
pub(crate) const ORLICZ_WLP_BASE: &str = "orlicz.cor-wlp";

pub(crate) const PVAR_BASES: &[&str] = &["pvar.f-core", "pvar.g-core", "pvar.thm-alpha", "pvar.thm-beta"];
pub(crate) const PVAR_WLP_BASE: &str = "pvar.cor-wlp";

/// A function with its oracle, built only in slow-oracle mode.
pub(crate) struct Probe<'a> {
    f: &'a PiecewiseFunction,
    oracle: Option<GridOracle>,
    grid: SupGrid,
}

impl<'a> Probe<'a> {
    pub fn new(f: &'a PiecewiseFunction, cfg: &AuditConfig) -> Self {
        Probe { f, oracle: cfg.slow_oracle.then(|| GridOracle::new(f)), grid: cfg.grid }
    }

    pub fn weak_lp(&self, p: f64) -> Result<Val> {
        Ok(Val {
            engine: weak_lp_norm(self.f, p, &self.grid)?,
            oracle: self.oracle.as_ref().map(|o| o.weak_lp_norm(p)),
        })
    }

    pub fn weak_orlicz(&self, phi: &NFunction) -> Result<Val> {
        Ok(Val {
            engine: weak_orlicz_norm(self.f, phi, &self.grid)?,
            oracle: self.oracle.as_ref().map(|o| o.weak_orlicz_norm(phi)),
        })
    }

    pub fn kolmogorov(&self, p: f64) -> Result<Val> {
        Ok(Val {
            engine: kolmogorov_functional(self.f, p, &self.grid)?,
            oracle: self.oracle.as_ref().map(|o| o.kolmogorov(p)),
        })
    }

    pub fn measure_above(&self, t: f64) -> Result<Val> {
        Ok(Val { engine: self.f.distribution(t)?, oracle: self.oracle.as_ref().map(|o| o.distribution(t)) })
    }
}

/// Collects `N` results, keeping the first error.
pub(crate) fn all<const N: usize>(rs: [&Result<Val>; N]) -> Result<[Val; N]> {
    let mut out = [Val::exact(0.0); N];
    for (o, r) in out.iter_mut().zip(rs) {
        *o = r.clone()?;
    }
    Ok(out)
}

fn with<const N: usize>(rs: [&Result<Val>; N], f: impl Fn([f64; N]) -> f64) -> Result<Val> {
    all(rs).map(|v| Val::combine(v, f))
}

/// The level-set identity `|{|h| > |h(a)|}| = c·a` at the `a` in `(0, 1/2]`
/// where it is worst.
fn level_set(h: &Probe<'_>, c: f64, points: usize) -> Result<(Val, f64, f64)> {
    let mut worst: Option<(f64, f64, f64)> = None;
    for k in 1..=points {
        let a = 0.5 * k as f64 / points as f64;
        let m = h.f.distribution(h.f.eval(a).abs())?;
        let want = c * a;
        let dev = if want == 0.0 { m.abs() } else { (m - want).abs() / want };
        if worst.is_none_or(|w| dev > w.0) {
            worst = Some((dev, a, want));
        }
    }
    let (_, a, want) = worst.expect("points >= 1");
    Ok((h.measure_above(h.f.eval(a).abs())?, a, want))
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        domain(format!("p must be finite and > 1, got {p}"))
    }
}

/// Items of the `C_{p1}`, `C_{p2}` lemma: `f₁ = x^{-1/p}`, `g₁ = (1−x)^{-1/p}`
/// on `(0,1)`, `h₁ = λf₁+μg₁`, `h₂ = μf₁−λg₁`.
pub fn witness_cp(p: f64, sk: &SkewParams, cfg: &AuditConfig) -> Result<Vec<AuditItem>> {
    check_p(p)?;
    sk.validate()?;
    let (l, m) = (sk.lambda, sk.mu);
    let row = super::Row::Cp { p, sk: *sk }.key();
    let f1 = PiecewiseFunction::power_left(0.0, 1.0, 1.0, 1.0 / p)?;
    let g1 = PiecewiseFunction::power_right(0.0, 1.0, 1.0, 1.0 / p)?;
    let h1 = PiecewiseFunction::lincomb(l, &f1, m, &g1)?;
    let h2 = PiecewiseFunction::lincomb(m, &f1, -l, &g1)?;
    let (pf, pg, ph1, ph2) = (Probe::new(&f1, cfg), Probe::new(&g1, cfg), Probe::new(&h1, cfg), Probe::new(&h2, cfg));
    let nf = pf.weak_lp(p);
    let ng = pg.weak_lp(p);
    let nh1 = ph1.weak_lp(p);
    let nh2 = ph2.weak_lp(p);
    let kh1 = ph1.kolmogorov(p);
    let upper = cp_upper(p);
    let lower1 = (l + m).powf(1.0 / p);
    let lower2 = (m - l).abs().powf(1.0 + 1.0 / p) / (l + m);
    let c1 = with([&nh1, &nf, &ng], |[h, f, g]| h / (l * f + m * g));
    let c2 = with([&nh2, &nf, &ng], |[h, f, g]| h / (m * f + l * g));

    let level = |h: &Probe<'_>, c: f64| match level_set(h, c, cfg.level_points) {
        Ok((v, a, want)) => (Ok(v), a, want),
        Err(e) => (Err(e), f64::NAN, f64::NAN),
    };
    let (ls1, a1, want1) = level(&ph1, l + m);
    let (ls2, a2, want2) = level(&ph2, (m - l).abs());

    let eq = |b, formula: &str, v| Claim::new(b, Role::Step, Relation::Equal, formula, v);
    let items = vec![
        eq("cp.f1-norm", "‖f₁‖_{wL^p} = 1", 1.0).eval(&row, nf.clone()),
        eq("cp.g1-norm", "‖g₁‖_{wL^p} = 1", 1.0).eval(&row, ng.clone()),
        eq("cp.h1-norm", "‖λf₁+μg₁‖_{wL^p} = (λ+μ)^{1+1/p}", (l + m).powf(1.0 + 1.0 / p))
            .supporting(Relation::AtLeast)
            .eval(&row, nh1.clone()),
        eq("cp.h1-level-set", "|{|h₁| > h₁(a)}| = (λ+μ)a", want1).note(format!("worst a = {a1}")).eval(&row, ls1),
        eq("cp.h2-norm", "‖μf₂−λg₂‖_{wL^p} = |μ−λ|^{1+1/p}", (m - l).abs().powf(1.0 + 1.0 / p))
            .supporting(Relation::AtLeast)
            .eval(&row, nh2.clone()),
        eq("cp.h2-level-set", "|{|h₂| > |h₂(a)|}| = |μ−λ|a", want2).note(format!("worst a = {a2}")).eval(&row, ls2),
        Claim::new("cp.c1-witness", Role::Witness, Relation::AtLeast, "‖h₁‖/(λ‖f₁‖+μ‖g₁‖) ≥ (λ+μ)^{1/p}", lower1)
            .eval(&row, c1.clone()),
        Claim::new(
            "cp.c2-witness",
            Role::Witness,
            Relation::AtLeast,
            "‖h₂‖/(μ‖f₂‖+λ‖g₂‖) ≥ |μ−λ|^{1+1/p}/(λ+μ)",
            lower2,
        )
        .eval(&row, c2.clone()),
        Claim::new("cp.quasi-triangle-plus", Role::Conclusion, Relation::AtMost, "‖λf+μg‖/(λ‖f‖+μ‖g‖) ≤ 2", 2.0)
            .note("evaluated at (f₁, g₁)")
            .eval(&row, c1.clone()),
        Claim::new("cp.quasi-triangle-minus", Role::Conclusion, Relation::AtMost, "‖μf−λg‖/(μ‖f‖+λ‖g‖) ≤ 2", 2.0)
            .note("evaluated at (f₁, g₁)")
            .eval(&row, c2.clone()),
        Claim::new("cp.c1-upper", Role::Conclusion, Relation::AtMost, "C_{p1} ratio ≤ min{2, p/(p−1)}", upper)
            .eval(&row, c1),
        Claim::new("cp.c2-upper", Role::Conclusion, Relation::AtMost, "C_{p2} ratio ≤ min{2, p/(p−1)}", upper)
            .eval(&row, c2),
        Claim::new("cp.c1-bounds", Role::Consistency, Relation::AtMost, "(λ+μ)^{1/p} ≤ min{2, p/(p−1)}", upper)
            .note("computed = printed lower bound")
            .eval(&row, Ok(Val::exact(lower1))),
        Claim::new("cp.c2-bounds", Role::Consistency, Relation::AtMost, "|μ−λ|^{1+1/p}/(λ+μ) ≤ min{2, p/(p−1)}", upper)
            .note("computed = printed lower bound")
            .eval(&row, Ok(Val::exact(lower2))),
        Claim::new("cp.star-lower", Role::Conclusion, Relation::AtLeast, "‖h₁‖*/‖h₁‖_{wL^p} ≥ 1", 1.0)
            .eval(&row, with([&kh1, &nh1], |[k, n]| k / n)),
        Claim::new("cp.star-upper", Role::Conclusion, Relation::AtMost, "‖h₁‖*/‖h₁‖_{wL^p} ≤ p/(p−1)", p / (p - 1.0))
            .eval(&row, with([&kh1, &nh1], |[k, n]| k / n)),
    ];
    Ok(items)
}

/// Orlicz indices and the extremizers used for the ball witnesses: any `t`
/// for power functions, the grid extremizers otherwise.
pub(crate) fn extremizers(phi: &NFunction) -> Result<(f64, f64, f64, f64)> {
    if let NFunction::Power { p } = *phi {
        let v = 2f64.powf(-1.0 / p);
        return Ok((v, v, 1.0, 1.0));
    }
    let ix = phi.indices()?;
    Ok((ix.alpha_bar, ix.beta_bar, ix.argmin_t, ix.argmax_t))
}

struct BallNorms {
    f1: Result<Val>,
    f2: Result<Val>,
    f_plus: Result<Val>,
    f_minus: Result<Val>,
    g1: Result<Val>,
    g2: Result<Val>,
    g_plus: Result<Val>,
    g_minus: Result<Val>,
}

fn ball_norms(phi: &NFunction, sk: &SkewParams, t0: f64, u0: f64, cfg: &AuditConfig) -> Result<BallNorms> {
    let (l, m) = (sk.lambda, sk.mu);
    let (f1, f2) = ball_f_pair(phi, t0)?;
    let (g1, g2) = ball_g_pair(phi, u0)?;
    let fp = PiecewiseFunction::lincomb(l, &f1, m, &f2)?;
    let fm = PiecewiseFunction::lincomb(m, &f1, -l, &f2)?;
    let gp = PiecewiseFunction::lincomb(l, &g1, m, &g2)?;
    let gm = PiecewiseFunction::lincomb(m, &g1, -l, &g2)?;
    let n = |h: &PiecewiseFunction| Probe::new(h, cfg).weak_orlicz(phi);
    Ok(BallNorms {
        f1: n(&f1),
        f2: n(&f2),
        f_plus: n(&fp),
        f_minus: n(&fm),
        g1: n(&g1),
        g2: n(&g2),
        g_plus: n(&gp),
        g_minus: n(&gm),
    })
}

/// C-free core `(‖plus‖^r + ‖minus‖^r) / ((λ^r+μ^r)(‖f‖^r+‖g‖^r))`.
fn core(
    sk: &SkewParams,
    r: f64,
    plus: &Result<Val>,
    minus: &Result<Val>,
    f: &Result<Val>,
    g: &Result<Val>,
) -> Result<Val> {
    let (l, m) = (sk.lambda, sk.mu);
    with([plus, minus, f, g], |[a, b, x, y]| {
        (a.powf(r) + b.powf(r)) / ((l.powf(r) + m.powf(r)) * (x.powf(r) + y.powf(r)))
    })
}

fn max_val(a: &Result<Val>, b: &Result<Val>) -> Result<Val> {
    with([a, b], |[x, y]| x.max(y))
}

/// Items of the weak-Orlicz lower-bound theorem, on the ball witnesses
/// reduced to intervals of measure `1/(2t₀)` and `1/(2u₀)`.
pub fn witness_orlicz(phi: &NFunction, sk: &SkewParams, cfg: &AuditConfig) -> Result<Vec<AuditItem>> {
    phi.validate()?;
    sk.validate()?;
    let (l, m) = (sk.lambda, sk.mu);
    let eps = cfg.eps;
    let row = super::Row::Orlicz { phi: *phi, sk: *sk }.key();
    let (alpha, beta, t0, u0) = extremizers(phi)?;
    let n = ball_norms(phi, sk, t0, u0, cfg)?;
    let ratio_t0 = phi.index_ratio(t0)?;
    let ratio_u0 = phi.index_ratio(u0)?;
    let f_core = core(sk, 2.0, &n.f_plus, &n.f_minus, &n.f1, &n.f2);
    let g_core = core(sk, 2.0, &n.g_plus, &n.g_minus, &n.g1, &n.g2);
    let step = |b, rel, formula: &str, v| Claim::new(b, Role::Step, rel, formula, v);
    let chain = format!("t₀ = {t0:e}, u₀ = {u0:e}");

    let mut items = vec![
        step("orlicz.t0-choice", Relation::AtMost, "Φ⁻¹(t₀)/Φ⁻¹(2t₀) < ᾱ+ε", alpha + eps)
            .note(chain.clone())
            .eval(&row, Ok(Val::exact(ratio_t0))),
        step("orlicz.u0-choice", Relation::AtLeast, "Φ⁻¹(u₀)/Φ⁻¹(2u₀) > β̄−ε/2", beta - 0.5 * eps)
            .note(chain)
            .eval(&row, Ok(Val::exact(ratio_u0))),
        step("orlicz.f1-norm", Relation::Equal, "‖f₁‖_{wL^Φ} = 1", 1.0).eval(&row, n.f1.clone()),
        step("orlicz.f2-norm", Relation::Equal, "‖f₂‖_{wL^Φ} = 1", 1.0).eval(&row, n.f2.clone()),
        step("orlicz.f-plus-chain", Relation::Equal, "‖λf₁+μf₂‖ = (λ+μ)Φ⁻¹(2t₀)/Φ⁻¹(t₀)", (l + m) / ratio_t0)
            .supporting(Relation::AtLeast)
            .eval(&row, n.f_plus.clone()),
        step("orlicz.f-plus-lower", Relation::AtLeast, "‖λf₁+μf₂‖ > (λ+μ)/(ᾱ+ε)", (l + m) / (alpha + eps))
            .eval(&row, n.f_plus.clone()),
        step("orlicz.f-minus-lower", Relation::AtLeast, "‖μf₁−λf₂‖ > |μ−λ|/(ᾱ+ε)", (m - l).abs() / (alpha + eps))
            .eval(&row, n.f_minus.clone()),
        step("orlicz.f-core", Relation::AtLeast, "core(f₁, f₂) ≥ 1/(ᾱ+ε)²", (alpha + eps).powi(-2))
            .eval(&row, f_core.clone()),
        step("orlicz.g1-norm", Relation::Equal, "‖g₁‖_{wL^Φ} = 1", 1.0).eval(&row, n.g1.clone()),
        step("orlicz.g2-norm", Relation::Equal, "‖g₂‖_{wL^Φ} = 1", 1.0).eval(&row, n.g2.clone()),
        step("orlicz.g-plus-chain", Relation::Equal, "‖λg₁+μg₂‖ = 2λΦ⁻¹(u₀)/Φ⁻¹(2u₀)", 2.0 * l * ratio_u0)
            .supporting(Relation::AtLeast)
            .eval(&row, n.g_plus.clone()),
        step("orlicz.g-plus-lower", Relation::AtLeast, "‖λg₁+μg₂‖ > λ(2β̄−ε)", l * (2.0 * beta - eps))
            .eval(&row, n.g_plus.clone()),
        step("orlicz.g-minus-chain", Relation::Equal, "‖μg₁−λg₂‖ = 2μΦ⁻¹(u₀)/Φ⁻¹(2u₀)", 2.0 * m * ratio_u0)
            .supporting(Relation::AtLeast)
            .eval(&row, n.g_minus.clone()),
        step("orlicz.g-minus-lower", Relation::AtLeast, "‖μg₁−λg₂‖ > μ(2β̄−ε)", m * (2.0 * beta - eps))
            .eval(&row, n.g_minus.clone()),
        step("orlicz.g-core", Relation::AtLeast, "core(g₁, g₂) ≥ (2β̄−ε)²/2", (2.0 * beta - eps).powi(2) / 2.0)
            .eval(&row, g_core.clone()),
        Claim::new("orlicz.thm-alpha", Role::Witness, Relation::AtLeast, "L^C_YJ core ≥ 1/ᾱ²", alpha.powi(-2))
            .note("core(f₁, f₂)")
            .eval(&row, f_core.clone()),
        Claim::new("orlicz.thm-beta", Role::Witness, Relation::AtLeast, "L^C_YJ core ≥ 2β̄²", 2.0 * beta * beta)
            .note("core(g₁, g₂)")
            .eval(&row, g_core.clone()),
    ];
    if let NFunction::Power { p } = *phi {
        let b = paper_bounds(&ConstantId::SkewCWeakLp, p, sk, None)?;
        let v = b.lower.map_or(f64::NAN, |x| x.coefficient);
        items.push(
            Claim::new(
                ORLICZ_WLP_BASE,
                Role::Witness,
                Relation::AtLeast,
                "L^C_YJ(wL^p) core ≥ max{2^{2/p}, 2^{1−2/p}}",
                v,
            )
            .note("max of both witness cores")
            .eval(&row, max_val(&f_core, &g_core)),
        );
    }
    Ok(items)
}

/// Items of the `p`-th skew constant theorem with exponent `pexp`, on the
/// same witnesses as [`witness_orlicz`].
pub fn witness_p_variant(phi: &NFunction, sk: &SkewParams, pexp: f64, cfg: &AuditConfig) -> Result<Vec<AuditItem>> {
    phi.validate()?;
    sk.validate()?;
    if !(pexp.is_finite() && pexp >= 1.0) {
        return domain(format!("pexp must be finite and >= 1, got {pexp}"));
    }
    let (l, m, r) = (sk.lambda, sk.mu, pexp);
    let eps = cfg.eps;
    let row = super::Row::PVariant { phi: *phi, sk: *sk, pexp }.key();
    let (alpha, beta, t0, u0) = extremizers(phi)?;
    let n = ball_norms(phi, sk, t0, u0, cfg)?;
    let f_core = core(sk, r, &n.f_plus, &n.f_minus, &n.f1, &n.f2);
    let g_core = core(sk, r, &n.g_plus, &n.g_minus, &n.g1, &n.g2);
    let mix = ((l + m).powf(r) + (m - l).abs().powf(r)) / (l.powf(r) + m.powf(r));

    let mut items = vec![
        Claim::new(
            "pvar.f-core",
            Role::Step,
            Relation::AtLeast,
            "core_p(f₁, f₂) ≥ ((λ+μ)^p+|μ−λ|^p)/(2(λ^p+μ^p)(ᾱ+ε)^p)",
            mix / (2.0 * (alpha + eps).powf(r)),
        )
        .eval(&row, f_core.clone()),
        Claim::new(
            "pvar.g-core",
            Role::Step,
            Relation::AtLeast,
            "core_p(g₁, g₂) ≥ (2β̄−ε)^p/2",
            (2.0 * beta - eps).powf(r) / 2.0,
        )
        .eval(&row, g_core.clone()),
        Claim::new(
            "pvar.thm-alpha",
            Role::Witness,
            Relation::AtLeast,
            "L^{C,p}_YJ core ≥ ((λ+μ)^p+|μ−λ|^p)/(2ᾱ^p(λ^p+μ^p))",
            mix / (2.0 * alpha.powf(r)),
        )
        .eval(&row, f_core.clone()),
        Claim::new(
            "pvar.thm-beta",
            Role::Witness,
            Relation::AtLeast,
            "L^{C,p}_YJ core ≥ 2^{p−1}β̄^p",
            2f64.powf(r - 1.0) * beta.powf(r),
        )
        .eval(&row, g_core.clone()),
    ];
    if let NFunction::Power { p } = *phi {
        let b = paper_bounds(&ConstantId::SkewCpWeakLp, p, sk, Some(r))?;
        let v = b.lower.map_or(f64::NAN, |x| x.coefficient);
        items.push(
            Claim::new(
                PVAR_WLP_BASE,
                Role::Witness,
                Relation::AtLeast,
                "L^{C,p}_YJ(wL^p) core ≥ max{((λ+μ)^p+|μ−λ|^p)/(λ^p+μ^p), 2^{p−2}}",
                v,
            )
            .note("max of both witness cores")
            .eval(&row, max_val(&f_core, &g_core)),
        );
    }
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::Verdict;

    fn find<'a>(items: &'a [AuditItem], base: &str) -> &'a AuditItem {
        items.iter().find(|i| i.claim_id.starts_with(&format!("{base}["))).unwrap()
    }

    #[test]
    fn symmetric_cp_row() {
        let cfg = AuditConfig::default();
        let items = witness_cp(2.0, &SkewParams::unit(), &cfg).unwrap();
        assert_eq!(items.len(), CP_BASES.len());
        let h1 = find(&items, "cp.h1-norm");
        assert_eq!(h1.verdict, Verdict::Confirmed, "{h1:?}");
        assert!((h1.computed.unwrap() - 2f64.powf(1.5)).abs() < 1e-6);
        assert_eq!(find(&items, "cp.h1-level-set").verdict, Verdict::Confirmed);
        assert_eq!(find(&items, "cp.c1-bounds").verdict, Verdict::Confirmed);
    }

    #[test]
    fn eight_eight_is_inconsistent() {
        let cfg = AuditConfig::default();
        let items = witness_cp(2.0, &SkewParams::new(8.0, 8.0).unwrap(), &cfg).unwrap();
        let b = find(&items, "cp.c1-bounds");
        assert_eq!(b.verdict, Verdict::Inconsistent);
        assert_eq!(b.computed, Some(4.0));
        // h₁ = 8(f₁+g₁) has norm 16·2^{1/2}, not 16^{3/2}.
        let h1 = find(&items, "cp.h1-norm");
        assert!((h1.computed.unwrap() - 16.0 * 2f64.sqrt()).abs() < 1e-5);
        assert_eq!(h1.verdict, Verdict::Violated);
    }

    #[test]
    fn orlicz_chain_at_unit_skew() {
        let cfg = AuditConfig::default();
        let items = witness_orlicz(&NFunction::Power { p: 2.0 }, &SkewParams::unit(), &cfg).unwrap();
        assert_eq!(find(&items, "orlicz.f1-norm").verdict, Verdict::Confirmed);
        let plus = find(&items, "orlicz.f-plus-chain");
        assert!((plus.computed.unwrap() - 2f64.sqrt()).abs() < 1e-9);
        assert!((plus.paper_claim.unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(plus.verdict, Verdict::Violated);
        // Witnesses deliver 1/(2ᾱ²) = 1, not the stated 1/ᾱ² = 2.
        let thm = find(&items, "orlicz.thm-alpha");
        assert!((thm.computed.unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(thm.verdict, Verdict::Violated);
    }

    #[test]
    fn p_variant_at_two_matches_orlicz_cores() {
        let cfg = AuditConfig::default();
        let phi = NFunction::ExpMinus;
        let sk = SkewParams::new(1.0, 3.0).unwrap();
        let o = witness_orlicz(&phi, &sk, &cfg).unwrap();
        let v = witness_p_variant(&phi, &sk, 2.0, &cfg).unwrap();
        for (a, b) in [("orlicz.f-core", "pvar.f-core"), ("orlicz.g-core", "pvar.g-core")] {
            let x = find(&o, a).computed.unwrap();
            let y = find(&v, b).computed.unwrap();
            assert!((x - y).abs() <= 1e-10 * x.abs(), "{a}: {x} vs {y}");
        }
    }

    #[test]
    fn slow_oracle_agrees_on_symmetric_rows() {
        let cfg = AuditConfig { slow_oracle: true, ..AuditConfig::default() };
        let items = witness_cp(3.0, &SkewParams::unit(), &cfg).unwrap();
        for it in &items {
            if let Some(d) = it.oracle_rel_diff {
                assert!(d <= 1e-4, "{}: {d}", it.claim_id);
            }
        }
        assert!(find(&items, "cp.h1-norm").oracle.is_some());
    }
}
