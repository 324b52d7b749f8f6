//! Seeded property suites run as audit rows.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::witness::Probe;
use super::{AuditConfig, AuditItem, Claim, Relation, Role, Row, Val};
use crate::constants::{cp_upper, random_pair, StepSampler};
use crate::error::{domain, Result};
use crate::nfunc::NFunction;
use crate::norms::{kolmogorov_functional, weak_lp_norm};
use crate::realfn::PiecewiseFunction;

pub(crate) const CHI_E_BASES: &[&str] = &["norms.chi-e"];
pub(crate) const INDEX_BASES: &[&str] = &["indices.alpha", "indices.beta"];
pub(crate) const SANDWICH_BASES: &[&str] = &["norms.sandwich-lower", "norms.sandwich-upper", "norms.star-f1"];
pub(crate) const QUASI_TRIANGLE_BASES: &[&str] = &["norms.quasi-triangle", "norms.cp-upper"];

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `‖χ_E‖_{wL^Φ} = 1/Φ⁻¹(1/|E|)` with `E = (0, |E|)`.
pub fn chi_e_items(phi: &NFunction, measure: f64, cfg: &AuditConfig) -> Result<Vec<AuditItem>> {
    let row = Row::ChiE { phi: *phi, measure }.key();
    let chi = PiecewiseFunction::char_fn(0.0, measure, 1.0)?;
    let want = 1.0 / phi.inv(1.0 / measure)?;
    Ok(vec![Claim::new(CHI_E_BASES[0], Role::Conclusion, Relation::Equal, "‖χ_E‖_{wL^Φ} = 1/Φ⁻¹(1/|E|)", want)
        .eval(&row, Probe::new(&chi, cfg).weak_orlicz(phi))])
}

/// `ᾱ_Φ = β̄_Φ = 2^{-1/p}` for `Φ = Power(p)`, from the grid search.
pub fn index_items(phi: &NFunction, _cfg: &AuditConfig) -> Result<Vec<AuditItem>> {
    let NFunction::Power { p } = *phi else {
        return domain(format!("closed-form indices are known only for power functions, got {phi}"));
    };
    let row = Row::Indices { phi: *phi }.key();
    let want = 2f64.powf(-1.0 / p);
    let ix = phi.indices();
    let pick = |f: fn(&crate::nfunc::OrliczIndices) -> f64| ix.clone().map(|i| Val::exact(f(&i)));
    Ok(vec![
        Claim::new(INDEX_BASES[0], Role::Conclusion, Relation::Equal, "ᾱ_Φ = 2^{-1/p}", want)
            .eval(&row, pick(|i| i.alpha_bar)),
        Claim::new(INDEX_BASES[1], Role::Conclusion, Relation::Equal, "β̄_Φ = 2^{-1/p}", want)
            .eval(&row, pick(|i| i.beta_bar)),
    ])
}

/// `‖f‖_{wL^p} ≤ ‖f‖* ≤ p/(p−1)‖f‖_{wL^p}` over seeded random step
/// functions, and the tight case `‖x^{-1/p}‖* = p/(p−1)`.
pub fn sandwich_items(p: f64, cfg: &AuditConfig) -> Result<Vec<AuditItem>> {
    if !(p.is_finite() && p > 1.0) {
        return domain(format!("p must be finite and > 1, got {p}"));
    }
    let row = Row::Sandwich { p }.key();
    let sampler = StepSampler::default();
    let ratios: Result<Vec<f64>> = (0..cfg.samples)
        .map(|i| {
            let (f, _) = random_pair(&mut rng_for(cfg.seed, i as u64), &sampler)?;
            Ok(kolmogorov_functional(&f, p, &cfg.grid)? / weak_lp_norm(&f, p, &cfg.grid)?)
        })
        .collect();
    let lo = ratios.clone().map(|r| Val::exact(r.iter().copied().fold(f64::INFINITY, f64::min)));
    let hi = ratios.map(|r| Val::exact(r.iter().copied().fold(0.0, f64::max)));
    let f1 = PiecewiseFunction::power_left(0.0, 1.0, 1.0, 1.0 / p)?;
    let samples = format!("min/max over {} random step functions", cfg.samples);
    Ok(vec![
        Claim::new(SANDWICH_BASES[0], Role::Conclusion, Relation::AtLeast, "‖f‖*/‖f‖_{wL^p} ≥ 1", 1.0)
            .note(samples.clone())
            .eval(&row, lo),
        Claim::new(SANDWICH_BASES[1], Role::Conclusion, Relation::AtMost, "‖f‖*/‖f‖_{wL^p} ≤ p/(p−1)", p / (p - 1.0))
            .note(samples)
            .eval(&row, hi),
        Claim::new(SANDWICH_BASES[2], Role::Conclusion, Relation::Equal, "‖x^{-1/p}χ_(0,1)‖* = p/(p−1)", p / (p - 1.0))
            .eval(&row, Probe::new(&f1, cfg).kolmogorov(p)),
    ])
}

/// `‖λf+μg‖ ≤ 2(λ‖f‖+μ‖g‖)` and `C_{p1}, C_{p2}` ratios `≤ min{2, p/(p−1)}`
/// over seeded random pairs with `λ, μ` log-uniform in `[0.1, 10]`.
pub fn quasi_triangle_items(p: f64, cfg: &AuditConfig) -> Result<Vec<AuditItem>> {
    if !(p.is_finite() && p > 1.0) {
        return domain(format!("p must be finite and > 1, got {p}"));
    }
    let row = Row::QuasiTriangle { p }.key();
    let sampler = StepSampler::default();
    let worst: Result<f64> = (0..cfg.samples).try_fold(0.0f64, |acc, i| {
        let mut rng = rng_for(cfg.seed ^ 0x5155_4153_4954_5249, i as u64);
        let (f, g) = random_pair(&mut rng, &sampler)?;
        let l = 10f64.powf(rng.random_range(-1.0..=1.0));
        let m = 10f64.powf(rng.random_range(-1.0..=1.0));
        let n = |h: &PiecewiseFunction| weak_lp_norm(h, p, &cfg.grid);
        let (nf, ng) = (n(&f)?, n(&g)?);
        let plus = n(&PiecewiseFunction::lincomb(l, &f, m, &g)?)?;
        let minus = n(&PiecewiseFunction::lincomb(m, &f, -l, &g)?)?;
        Ok(acc.max(plus / (l * nf + m * ng)).max(minus / (m * nf + l * ng)))
    });
    let worst = worst.map(Val::exact);
    let samples = format!("max of both ratios over {} random pairs", cfg.samples);
    Ok(vec![
        Claim::new(QUASI_TRIANGLE_BASES[0], Role::Conclusion, Relation::AtMost, "‖λf+μg‖/(λ‖f‖+μ‖g‖) ≤ 2", 2.0)
            .note(samples.clone())
            .eval(&row, worst.clone()),
        Claim::new(
            QUASI_TRIANGLE_BASES[1],
            Role::Conclusion,
            Relation::AtMost,
            "C_{p1}, C_{p2} ratios ≤ min{2, p/(p−1)}",
            cp_upper(p),
        )
        .note(samples)
        .eval(&row, worst),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::Verdict;

    #[test]
    fn suites_confirm() {
        let cfg = AuditConfig { samples: 40, ..AuditConfig::default() };
        let mut items = chi_e_items(&NFunction::ExpMinus, 2.0, &cfg).unwrap();
        items.extend(index_items(&NFunction::Power { p: 3.0 }, &cfg).unwrap());
        items.extend(sandwich_items(1.5, &cfg).unwrap());
        items.extend(quasi_triangle_items(1.5, &cfg).unwrap());
        for it in &items {
            assert_eq!(it.verdict, Verdict::Confirmed, "{it:?}");
        }
        assert!(index_items(&NFunction::ExpMinus, &cfg).is_err());
    }
}
