//! Candidate pairs: random step functions and the witnesses from the proofs.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::SkewParams;
use crate::error::{domain, Result};
use crate::nfunc::NFunction;
use crate::norms::SpaceSpec;
use crate::realfn::PiecewiseFunction;
use crate::search::log_grid;

/// Random step-function parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StepSampler {
    pub k_max: usize,
    pub value_min: f64,
    pub value_max: f64,
    pub length_min: f64,
    pub length_max: f64,
}

impl Default for StepSampler {
    fn default() -> Self {
        StepSampler { k_max: 4, value_min: 1e-2, value_max: 1e2, length_min: 1e-2, length_max: 1.0 }
    }
}

impl StepSampler {
    pub fn validate(&self) -> Result<()> {
        if self.k_max < 1 {
            return domain("k_max must be >= 1");
        }
        if !(0.0 < self.value_min && self.value_min <= self.value_max && self.value_max.is_finite()) {
            return domain("value range must satisfy 0 < min <= max < inf");
        }
        if !(0.0 < self.length_min && self.length_min <= self.length_max && self.length_max.is_finite()) {
            return domain("length range must satisfy 0 < min <= max < inf");
        }
        Ok(())
    }

    fn value(&self, rng: &mut impl Rng) -> f64 {
        let (a, b) = (self.value_min.ln(), self.value_max.ln());
        let v = (a + (b - a) * rng.random::<f64>()).exp();
        if rng.random_bool(0.5) {
            v
        } else {
            -v
        }
    }

    fn length(&self, rng: &mut impl Rng) -> f64 {
        self.length_min + (self.length_max - self.length_min) * rng.random::<f64>()
    }

    fn partition(&self, rng: &mut impl Rng, start: f64) -> Vec<(f64, f64)> {
        let k = rng.random_range(1..=self.k_max);
        let mut a = start;
        (0..k)
            .map(|_| {
                let b = a + self.length(rng);
                let cell = (a, b);
                a = b;
                cell
            })
            .collect()
    }
}

/// A random pair of step functions. `g` reuses `f`'s partition (with fresh
/// values or with `±` the values of `f`), or gets its own partition that
/// overlaps `f`'s support or follows it.
pub fn random_pair(rng: &mut impl Rng, s: &StepSampler) -> Result<(PiecewiseFunction, PiecewiseFunction)> {
    let fp = s.partition(rng, 0.0);
    let fv: Vec<f64> = fp.iter().map(|_| s.value(rng)).collect();
    let end = fp.last().map_or(0.0, |c| c.1);
    let (gp, gv) = match rng.random_range(0..4) {
        0 => (fp.clone(), fp.iter().map(|_| s.value(rng)).collect::<Vec<_>>()),
        1 => (fp.clone(), fv.iter().map(|v| if rng.random_bool(0.5) { *v } else { -v }).collect()),
        mode => {
            let start = if mode == 2 { end * rng.random::<f64>() } else { end };
            let gp = s.partition(rng, start);
            let gv = gp.iter().map(|_| s.value(rng)).collect();
            (gp, gv)
        }
    };
    let build = |p: &[(f64, f64)], v: &[f64]| {
        let steps: Vec<(f64, f64, f64)> = p.iter().zip(v).map(|(&(a, b), &h)| (a, b, h)).collect();
        PiecewiseFunction::steps(&steps)
    };
    Ok((build(&fp, &fv)?, build(&gp, &gv)?))
}

/// A named candidate pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPair {
    pub label: String,
    pub f: PiecewiseFunction,
    pub g: PiecewiseFunction,
}

/// `f₁ = Φ⁻¹(2t₀)χ_{B₁}`, `f₂ = Φ⁻¹(2t₀)χ_{B₂}` on disjoint intervals of
/// measure `1/(2t₀)`.
pub fn ball_f_pair(phi: &NFunction, t0: f64) -> Result<(PiecewiseFunction, PiecewiseFunction)> {
    let h = phi.inv(2.0 * t0)?;
    let m = 0.5 / t0;
    Ok((PiecewiseFunction::char_fn(0.0, m, h)?, PiecewiseFunction::char_fn(2.0 * m, 3.0 * m, h)?))
}

/// `g₁ = Φ⁻¹(u₀)(χ_{B₁} + χ_{B₂})`, `g₂ = Φ⁻¹(u₀)(χ_{B₁} − χ_{B₂})` on
/// disjoint intervals of measure `1/(2u₀)`.
pub fn ball_g_pair(phi: &NFunction, u0: f64) -> Result<(PiecewiseFunction, PiecewiseFunction)> {
    let h = phi.inv(u0)?;
    let m = 0.5 / u0;
    let g1 = PiecewiseFunction::steps(&[(0.0, m, h), (2.0 * m, 3.0 * m, h)])?;
    let g2 = PiecewiseFunction::steps(&[(0.0, m, h), (2.0 * m, 3.0 * m, -h)])?;
    Ok((g1, g2))
}

/// The singular witnesses `x^{-q}`, `(1-x)^{-q}` on `(0,1)` and the ball
/// witnesses over a `t₀` grid, for the exponent and N-function of `space`.
pub fn paper_witnesses(space: &SpaceSpec, sk: &SkewParams) -> Result<Vec<LabeledPair>> {
    let mut out = Vec::new();
    let p = space.kind.exponent();
    if let Some(p) = p {
        let qs = [1.0 / p, 0.25, 0.5, 0.75];
        let mut seen = Vec::new();
        for q in qs {
            if seen.contains(&q) {
                continue;
            }
            seen.push(q);
            let f1 = PiecewiseFunction::power_left(0.0, 1.0, 1.0, q)?;
            let g1 = PiecewiseFunction::power_right(0.0, 1.0, 1.0, q)?;
            let h1 = PiecewiseFunction::lincomb(sk.lambda, &f1, sk.mu, &g1)?;
            let h2 = PiecewiseFunction::lincomb(sk.mu, &f1, -sk.lambda, &g1)?;
            out.push(LabeledPair { label: format!("f1,g1[q={q}]"), f: f1.clone(), g: g1.clone() });
            out.push(LabeledPair { label: format!("g1,f1[q={q}]"), f: g1, g: f1 });
            out.push(LabeledPair { label: format!("h1,h2[q={q}]"), f: h1, g: h2 });
        }
    }
    let phi = match (space.kind.phi(), p) {
        (Some(phi), _) => phi,
        (None, Some(p)) => NFunction::power(p)?,
        (None, None) => unreachable!("every space has an exponent or an N-function"),
    };
    let mut ts = log_grid(1e-3, 1e3, 13);
    if !matches!(phi, NFunction::Power { .. }) {
        let ix = phi.indices()?;
        ts.push(ix.argmin_t);
        ts.push(ix.argmax_t);
    }
    for &t in &ts {
        let (f1, f2) = ball_f_pair(&phi, t)?;
        out.push(LabeledPair { label: format!("ball-f[t0={t:e}]"), f: f1, g: f2 });
        let (g1, g2) = ball_g_pair(&phi, t)?;
        out.push(LabeledPair { label: format!("ball-g[u0={t:e}]"), f: g1, g: g2 });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::SupGrid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_pairs_respect_ranges() {
        let s = StepSampler::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let (f, g) = random_pair(&mut rng, &s).unwrap();
            for h in [&f, &g] {
                assert!(!h.pieces().is_empty() && h.pieces().len() <= 4);
                for p in h.pieces() {
                    let v = p.constant_value().abs();
                    assert!((1e-2..=1e2).contains(&v));
                    assert!(p.len() >= 1e-2 - 1e-15 && p.len() <= 1.0 + 1e-15);
                }
            }
        }
    }

    #[test]
    fn ball_witnesses_have_unit_weak_norm() {
        let g = SupGrid::default();
        for phi in [NFunction::Power { p: 2.0 }, NFunction::ExpMinus] {
            for t0 in [0.01, 1.0, 50.0] {
                let (f1, f2) = ball_f_pair(&phi, t0).unwrap();
                for f in [f1, f2] {
                    let n = crate::norms::weak_orlicz_norm(&f, &phi, &g).unwrap();
                    assert!((n - 1.0).abs() < 1e-10, "{phi} {t0}: {n}");
                }
            }
        }
    }

    #[test]
    fn witness_list_is_deterministic() {
        let s = SpaceSpec::weak_lp(2.0).unwrap();
        let a = paper_witnesses(&s, &SkewParams::unit()).unwrap();
        let b = paper_witnesses(&s, &SkewParams::unit()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3 * 3 + 2 * 13);
    }
}
