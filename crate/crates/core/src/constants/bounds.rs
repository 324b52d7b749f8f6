//! Published closed-form bounds, transcribed as printed.

use serde::{Deserialize, Serialize};

use super::{RatioId, SkewParams};
use crate::error::{domain, Result};
use crate::nfunc::NFunction;
use crate::norms::{SpaceKind, SpaceSpec};

/// Constants with published bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "constant", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConstantId {
    /// `C_{p1}` of `wL^p`.
    Cp1,
    /// `C_{p2}` of `wL^p`.
    Cp2,
    /// `C_NJ(L^p)`.
    NjLp,
    /// `L^C_YJ(wL^Φ)` in terms of the Orlicz indices.
    SkewCWeakOrlicz {
        alpha: f64,
        beta: f64,
    },
    SkewCWeakLp,
    /// `L^{C,p}_YJ(wL^Φ)` in terms of the Orlicz indices.
    SkewCpWeakOrlicz {
        alpha: f64,
        beta: f64,
    },
    SkewCpWeakLp,
}

/// `coefficient`, divided by `C₁C₂` when `per_c1c2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub coefficient: f64,
    pub per_c1c2: bool,
}

impl Bound {
    fn plain(coefficient: f64) -> Self {
        Bound { coefficient, per_c1c2: false }
    }

    fn over_c(coefficient: f64) -> Self {
        Bound { coefficient, per_c1c2: true }
    }

    /// Numeric value for plug-ins `c1, c2`.
    pub fn value(&self, c1: f64, c2: f64) -> f64 {
        if self.per_c1c2 {
            self.coefficient / (c1 * c2)
        } else {
            self.coefficient
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaperBounds {
    pub lower: Option<Bound>,
    pub upper: Option<Bound>,
    /// `lower ≤ upper` whenever both are present.
    pub consistent: bool,
}

impl PaperBounds {
    fn new(lower: Option<Bound>, upper: Option<Bound>) -> Self {
        let consistent = match (lower, upper) {
            (Some(l), Some(u)) if l.per_c1c2 == u.per_c1c2 => l.coefficient <= u.coefficient,
            _ => true,
        };
        PaperBounds { lower, upper, consistent }
    }

    pub fn none() -> Self {
        PaperBounds { lower: None, upper: None, consistent: true }
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        domain(format!("p must be finite and > 1, got {p}"))
    }
}

/// Proven upper bound `min{2, p/(p-1)}` on `C_{p1}` and `C_{p2}`.
pub fn cp_upper(p: f64) -> f64 {
    2f64.min(p / (p - 1.0))
}

/// The printed bounds. `p` is the Lebesgue exponent where one applies and
/// `pexp` the exponent of `L^{C,p}_YJ` (default `p`).
pub fn paper_bounds(id: &ConstantId, p: f64, sk: &SkewParams, pexp: Option<f64>) -> Result<PaperBounds> {
    sk.validate()?;
    let (l, m) = (sk.lambda, sk.mu);
    let skew_p = |alpha: f64, beta: f64, r: f64| {
        let a = ((l + m).powf(r) + (m - l).abs().powf(r)) / (2.0 * alpha.powf(r) * (l.powf(r) + m.powf(r)));
        let b = 2f64.powf(r - 1.0) * beta.powf(r);
        a.max(b)
    };
    let check_index = |x: f64| {
        if (0.5..=1.0).contains(&x) {
            Ok(())
        } else {
            domain(format!("Orlicz index must lie in [1/2, 1], got {x}"))
        }
    };
    Ok(match *id {
        ConstantId::Cp1 => {
            check_p(p)?;
            PaperBounds::new(Some(Bound::plain((l + m).powf(1.0 / p))), Some(Bound::plain(cp_upper(p))))
        }
        ConstantId::Cp2 => {
            check_p(p)?;
            let lower = (m - l).abs().powf(1.0 + 1.0 / p) / (l + m);
            PaperBounds::new(Some(Bound::plain(lower)), Some(Bound::plain(cp_upper(p))))
        }
        ConstantId::NjLp => {
            check_p(p)?;
            let v = 2f64.powf(2.0 / p - 1.0).max(2f64.powf(1.0 - 2.0 / p));
            PaperBounds::new(Some(Bound::plain(v)), Some(Bound::plain(v)))
        }
        ConstantId::SkewCWeakOrlicz { alpha, beta } => {
            check_index(alpha)?;
            check_index(beta)?;
            PaperBounds::new(Some(Bound::over_c((1.0 / (alpha * alpha)).max(2.0 * beta * beta))), None)
        }
        ConstantId::SkewCWeakLp => {
            check_p(p)?;
            let v = 2f64.powf(2.0 / p).max(2f64.powf(1.0 - 2.0 / p));
            PaperBounds::new(Some(Bound::over_c(v)), None)
        }
        ConstantId::SkewCpWeakOrlicz { alpha, beta } => {
            check_index(alpha)?;
            check_index(beta)?;
            let r = pexp.unwrap_or(p);
            check_p(r)?;
            PaperBounds::new(Some(Bound::over_c(skew_p(alpha, beta, r))), None)
        }
        ConstantId::SkewCpWeakLp => {
            // The printed wL^p form is the Orlicz form at ᾱ = β̄ = 2^{-1/p};
            // with pexp = p it reads max{((λ+μ)^p + |μ−λ|^p)/(λ^p+μ^p), 2^{p−2}}.
            check_p(p)?;
            let r = pexp.unwrap_or(p);
            check_p(r)?;
            let idx = 2f64.powf(-1.0 / p);
            PaperBounds::new(Some(Bound::over_c(skew_p(idx, idx, r))), None)
        }
    })
}

/// Bounds relevant to estimating `ratio` in `space`, if any are published.
pub fn bounds_for(ratio: &RatioId, space: &SpaceSpec, sk: &SkewParams) -> Result<Option<(ConstantId, PaperBounds)>> {
    let id = match (*ratio, space.kind) {
        (RatioId::C1, SpaceKind::WeakLp { .. }) => ConstantId::Cp1,
        (RatioId::C2, SpaceKind::WeakLp { .. }) => ConstantId::Cp2,
        (RatioId::Nj, SpaceKind::Lp { .. }) => ConstantId::NjLp,
        (RatioId::SkewC { .. }, SpaceKind::WeakLp { .. }) => ConstantId::SkewCWeakLp,
        (RatioId::SkewCp { .. }, SpaceKind::WeakLp { .. }) => ConstantId::SkewCpWeakLp,
        (RatioId::SkewC { .. }, SpaceKind::WeakOrlicz { phi }) => {
            let (alpha, beta) = indices(&phi)?;
            ConstantId::SkewCWeakOrlicz { alpha, beta }
        }
        (RatioId::SkewCp { .. }, SpaceKind::WeakOrlicz { phi }) => {
            let (alpha, beta) = indices(&phi)?;
            ConstantId::SkewCpWeakOrlicz { alpha, beta }
        }
        _ => return Ok(None),
    };
    let p = space.kind.exponent().unwrap_or(2.0);
    let pexp = match *ratio {
        RatioId::SkewCp { pexp, .. } => Some(pexp),
        _ => None,
    };
    let b = paper_bounds(&id, p, sk, pexp)?;
    Ok(Some((id, b)))
}

fn indices(phi: &NFunction) -> Result<(f64, f64)> {
    if let NFunction::Power { p } = *phi {
        let v = 2f64.powf(-1.0 / p);
        return Ok((v, v));
    }
    let ix = phi.indices()?;
    Ok((ix.alpha_bar, ix.beta_bar))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sk(l: f64, m: f64) -> SkewParams {
        SkewParams::new(l, m).unwrap()
    }

    #[test]
    fn cp1_printed_bounds() {
        let b = paper_bounds(&ConstantId::Cp1, 2.0, &sk(1.0, 1.0), None).unwrap();
        assert!((b.lower.unwrap().coefficient - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(b.upper.unwrap().coefficient, 2.0);
        assert!(b.consistent);
        let b = paper_bounds(&ConstantId::Cp1, 2.0, &sk(8.0, 8.0), None).unwrap();
        assert_eq!(b.lower.unwrap().coefficient, 4.0);
        assert!(!b.consistent);
    }

    #[test]
    fn cp2_and_nj() {
        let b = paper_bounds(&ConstantId::Cp2, 2.0, &sk(1.0, 2.0), None).unwrap();
        assert!((b.lower.unwrap().coefficient - 1.0 / 3.0).abs() < 1e-15);
        let b = paper_bounds(&ConstantId::NjLp, 4.0, &sk(1.0, 1.0), None).unwrap();
        assert!((b.lower.unwrap().coefficient - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(b.lower, b.upper);
    }

    #[test]
    fn skew_bounds() {
        let b = paper_bounds(&ConstantId::SkewCWeakLp, 2.0, &sk(1.0, 1.0), None).unwrap();
        let l = b.lower.unwrap();
        assert!(l.per_c1c2 && (l.coefficient - 2.0).abs() < 1e-15);
        assert!((l.value(2.0, 2.0) - 0.5).abs() < 1e-15);
        // At p = pexp = 2, λ = μ: max{4/2, 1} = 2.
        let b = paper_bounds(&ConstantId::SkewCpWeakLp, 2.0, &sk(1.0, 1.0), Some(2.0)).unwrap();
        assert!((b.lower.unwrap().coefficient - 2.0).abs() < 1e-15);
        let b = paper_bounds(&ConstantId::SkewCpWeakLp, 3.0, &sk(1.0, 2.0), None).unwrap();
        let want = (27.0f64 + 1.0) / 9.0;
        assert!((b.lower.unwrap().coefficient - want.max(2.0)).abs() < 1e-14);
        let (a, bt) = (0.6, 0.8);
        let b = paper_bounds(&ConstantId::SkewCWeakOrlicz { alpha: a, beta: bt }, 2.0, &sk(1.0, 1.0), None).unwrap();
        assert!((b.lower.unwrap().coefficient - (1.0 / 0.36f64).max(1.28)).abs() < 1e-14);
        assert!(paper_bounds(&ConstantId::SkewCWeakOrlicz { alpha: 0.3, beta: 0.8 }, 2.0, &sk(1.0, 1.0), None).is_err());
    }

    #[test]
    fn orlicz_form_reduces_to_lebesgue_form() {
        for p in [1.5, 2.0, 3.0] {
            let idx = 2f64.powf(-1.0 / p);
            let s = sk(1.0, 3.0);
            let o = paper_bounds(&ConstantId::SkewCWeakOrlicz { alpha: idx, beta: idx }, p, &s, None).unwrap();
            let w = paper_bounds(&ConstantId::SkewCWeakLp, p, &s, None).unwrap();
            assert!((o.lower.unwrap().coefficient - w.lower.unwrap().coefficient).abs() < 1e-13);
        }
    }
}
