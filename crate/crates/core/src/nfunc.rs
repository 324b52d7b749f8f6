//! N-functions (convex Young functions) with numeric inversion and the
//! Orlicz indices `inf_t Φ⁻¹(t)/Φ⁻¹(2t)` and `sup_t Φ⁻¹(t)/Φ⁻¹(2t)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::search::log_grid;

/// Default relative tolerance of [`NFunction::inverse`].
pub const DEFAULT_INVERSE_TOL: f64 = 1e-12;

/// Closed-form N-function families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NFunction {
    /// `Φ(t) = t^p`.
    Power { p: f64 },
    /// `Φ(t) = t^p ln(1+t) / ln 2`, normalized so `Φ(1) = 1`.
    PowerLog { p: f64 },
    /// `Φ(t) = e^t - t - 1`.
    #[serde(alias = "expminus")]
    ExpMinus,
}

impl NFunction {
    pub fn power(p: f64) -> Result<Self> {
        check_exponent(p)?;
        Ok(NFunction::Power { p })
    }

    pub fn power_log(p: f64) -> Result<Self> {
        check_exponent(p)?;
        Ok(NFunction::PowerLog { p })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NFunction::Power { p } | NFunction::PowerLog { p } => check_exponent(p),
            NFunction::ExpMinus => Ok(()),
        }
    }

    /// `Φ(t)` from the family's closed form.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return domain(format!("Φ evaluated at negative or NaN argument {t}"));
        }
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        match *self {
            NFunction::Power { p } => t.powf(p),
            NFunction::PowerLog { p } => t.powf(p) * t.ln_1p() / std::f64::consts::LN_2,
            NFunction::ExpMinus => {
                if t < 1e-3 {
                    // e^t - t - 1 loses every digit to cancellation here.
                    let t2 = t * t;
                    t2 * (0.5 + t * (1.0 / 6.0 + t * (1.0 / 24.0 + t / 120.0)))
                } else {
                    t.exp_m1() - t
                }
            }
        }
    }

    /// `Φ⁻¹(y)`: closed form for `Power`, otherwise geometric bracketing
    /// from `[0, 1]` and bisection.
    ///
    /// The result satisfies `|Φ(t) - y| <= tol·max(1, y)` and the final
    /// bracket is at most `tol` wide relative to `t`.
    pub fn inverse(&self, y: f64, tol: f64) -> Result<f64> {
        if !y.is_finite() || y < 0.0 {
            return domain(format!("Φ⁻¹ of non-finite or negative value {y}"));
        }
        if !(tol > 0.0) {
            return domain("Φ⁻¹ tolerance must be positive");
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        if let NFunction::Power { p } = *self {
            return Ok(y.powf(1.0 / p));
        }
        let (mut lo, mut hi) = (0.5_f64, 1.0_f64);
        if self.eval_unchecked(1.0) >= y {
            while self.eval_unchecked(lo) > y {
                hi = lo;
                lo *= 0.5;
                if lo == 0.0 {
                    return Ok(hi);
                }
            }
        } else {
            lo = 1.0;
            hi = 2.0;
            while self.eval_unchecked(hi) < y {
                lo = hi;
                hi *= 2.0;
                if !hi.is_finite() {
                    return domain(format!("Φ⁻¹({y}) overflows"));
                }
            }
        }
        let target = tol * y.max(1.0);
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let v = self.eval_unchecked(mid);
            if v == y {
                return Ok(mid);
            }
            if v < y {
                lo = mid;
            } else {
                hi = mid;
            }
            let m = 0.5 * (lo + hi);
            if (hi - lo) <= tol * m && (self.eval_unchecked(m) - y).abs() <= target {
                return Ok(m);
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `Φ⁻¹` at the default tolerance.
    pub fn inv(&self, y: f64) -> Result<f64> {
        self.inverse(y, DEFAULT_INVERSE_TOL)
    }

    /// `Φ⁻¹(t)/Φ⁻¹(2t)`.
    pub fn index_ratio(&self, t: f64) -> Result<f64> {
        Ok(self.inv(t)? / self.inv(2.0 * t)?)
    }

    /// Growth exponent `a` with `Φ(v) ≈ v^a` as `v → ∞`, or `None` when Φ
    /// grows faster than every power.
    pub fn growth_exponent(&self) -> Option<f64> {
        match *self {
            NFunction::Power { p } | NFunction::PowerLog { p } => Some(p),
            NFunction::ExpMinus => None,
        }
    }

    /// Whether `∫Φ(c·d^{-q})` converges near `d = 0`.
    pub fn integrable_singularity(&self, q: f64) -> bool {
        match self.growth_exponent() {
            Some(a) => q * a < 1.0,
            None => false,
        }
    }

    /// Whether `sup_t t/Φ⁻¹(1/λ(t))` stays finite when `λ(t) ~ t^{-1/q}`.
    pub fn weak_bounded_singularity(&self, q: f64) -> bool {
        match *self {
            NFunction::Power { p } => q * p <= 1.0,
            NFunction::PowerLog { p } => q * p < 1.0,
            NFunction::ExpMinus => false,
        }
    }

    /// Orlicz indices over the default grid.
    pub fn indices(&self) -> Result<OrliczIndices> {
        orlicz_indices(self, &IndexGrid::default())
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        domain(format!("N-function exponent must be finite and > 1, got {p}"))
    }
}

impl fmt::Display for NFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NFunction::Power { p } => write!(f, "power:{p}"),
            NFunction::PowerLog { p } => write!(f, "powerlog:{p}"),
            NFunction::ExpMinus => write!(f, "expminus"),
        }
    }
}

impl FromStr for NFunction {
    type Err = Error;

    /// Parses `power:<p>`, `powerlog:<p>` or `expminus`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s, None),
        };
        let exponent = || -> Result<f64> {
            let a = arg.ok_or_else(|| Error::Parse(format!("N-function '{name}' needs an exponent")))?;
            a.parse::<f64>().map_err(|_| Error::Parse(format!("bad exponent '{a}'")))
        };
        match name.to_ascii_lowercase().as_str() {
            "power" => NFunction::power(exponent()?),
            "powerlog" | "power-log" => NFunction::power_log(exponent()?),
            "expminus" | "exp-minus" if arg.is_none() => Ok(NFunction::ExpMinus),
            _ => Err(Error::Parse(format!("unknown N-function '{s}'"))),
        }
    }
}

/// Log-grid parameters for the index search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub rounds: usize,
}

impl Default for IndexGrid {
    fn default() -> Self {
        IndexGrid { t_min: 1e-6, t_max: 1e6, points: 4096, rounds: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrliczIndices {
    pub alpha_bar: f64,
    pub beta_bar: f64,
    pub argmin_t: f64,
    pub argmax_t: f64,
}

/// Minimum and maximum of `Φ⁻¹(t)/Φ⁻¹(2t)` over a refined log grid.
///
/// Each refinement round replaces the neighbourhood of the current
/// extremizer by a grid ten times finer. Ties keep the smallest `t`.
pub fn orlicz_indices(phi: &NFunction, grid: &IndexGrid) -> Result<OrliczIndices> {
    phi.validate()?;
    if !(grid.t_min > 0.0 && grid.t_max > grid.t_min) || grid.points < 2 {
        return domain("index grid needs 0 < t_min < t_max and at least two points");
    }
    let ts = log_grid(grid.t_min, grid.t_max, grid.points);
    let rs = ts.iter().map(|&t| phi.index_ratio(t)).collect::<Result<Vec<_>>>()?;

    let mut lo = (ts[0], rs[0]);
    let mut hi = (ts[0], rs[0]);
    let mut lo_i = 0;
    let mut hi_i = 0;
    for (i, (&t, &r)) in ts.iter().zip(&rs).enumerate() {
        if r < lo.1 {
            lo = (t, r);
            lo_i = i;
        }
        if r > hi.1 {
            hi = (t, r);
            hi_i = i;
        }
    }

    let refine = |center: usize, best: (f64, f64), better: &dyn Fn(f64, f64) -> bool| -> Result<(f64, f64)> {
        let mut best = best;
        let mut left = ts[center.saturating_sub(1)];
        let mut right = ts[(center + 1).min(ts.len() - 1)];
        for _ in 0..grid.rounds {
            if right <= left {
                break;
            }
            let local = log_grid(left, right, 21);
            let mut idx = None;
            for (j, &t) in local.iter().enumerate() {
                let r = phi.index_ratio(t)?;
                if better(r, best.1) || (r == best.1 && t < best.0) {
                    best = (t, r);
                    idx = Some(j);
                }
            }
            let (step_l, step_r) = match idx {
                Some(j) => (local[j.saturating_sub(1)], local[(j + 1).min(local.len() - 1)]),
                None => {
                    // Extremizer stayed put; shrink around it.
                    let w = (right / left).ln() / 20.0;
                    (best.0 * (-w).exp(), best.0 * w.exp())
                }
            };
            left = step_l.max(grid.t_min);
            right = step_r.min(grid.t_max);
        }
        Ok(best)
    };
    let lo = refine(lo_i, lo, &|a, b| a < b)?;
    let hi = refine(hi_i, hi, &|a, b| a > b)?;
    Ok(OrliczIndices { alpha_bar: lo.1, beta_bar: hi.1, argmin_t: lo.0, argmax_t: hi.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(NFunction::power(2.0).unwrap().eval(3.0).unwrap(), 9.0);
        let e = NFunction::ExpMinus.eval(1.0).unwrap();
        assert!((e - (std::f64::consts::E - 2.0)).abs() < 1e-15);
        for phi in [NFunction::Power { p: 1.5 }, NFunction::PowerLog { p: 2.0 }, NFunction::ExpMinus] {
            assert_eq!(phi.eval(0.0).unwrap(), 0.0);
        }
        assert!((NFunction::PowerLog { p: 3.0 }.eval(1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn negative_argument_rejected() {
        assert!(matches!(NFunction::ExpMinus.eval(-1.0), Err(Error::Domain(_))));
        assert!(matches!(NFunction::ExpMinus.inv(f64::INFINITY), Err(Error::Domain(_))));
        assert!(matches!(NFunction::ExpMinus.inv(f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn bad_exponent_rejected() {
        assert!(NFunction::power(1.0).is_err());
        assert!(NFunction::power_log(f64::NAN).is_err());
        assert!("power:0.5".parse::<NFunction>().is_err());
    }

    #[test]
    fn inverse_examples() {
        let cube = NFunction::power(3.0).unwrap();
        assert!((cube.inv(8.0).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(cube.inv(0.0).unwrap(), 0.0);
    }

    #[test]
    fn expminus_inverse_against_newton() {
        // Newton on e^t - t - 1 = 1 from t = 1.
        let mut t = 1.0_f64;
        for _ in 0..50 {
            t -= (t.exp() - t - 2.0) / (t.exp() - 1.0);
        }
        let got = NFunction::ExpMinus.inv(1.0).unwrap();
        assert!((got - t).abs() < 1e-11, "{got} vs {t}");
        assert!((t - 1.146_193_220_620_582_6).abs() < 1e-12);
    }

    #[test]
    fn expminus_small_argument_is_accurate() {
        let t: f64 = 1e-5;
        let want = t * t / 2.0 + t * t * t / 6.0 + t.powi(4) / 24.0;
        assert!((NFunction::ExpMinus.eval(t).unwrap() / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["power:2.5", "powerlog:2", "expminus"] {
            let phi: NFunction = s.parse().unwrap();
            assert_eq!(phi.to_string().parse::<NFunction>().unwrap(), phi);
        }
        assert!("cosh".parse::<NFunction>().is_err());
    }

    #[test]
    fn power_indices() {
        for p in [1.5, 2.0, 3.0, 4.0, 8.0] {
            let ix = NFunction::power(p).unwrap().indices().unwrap();
            let want = 2f64.powf(-1.0 / p);
            assert!((ix.alpha_bar - want).abs() < 1e-10);
            assert!((ix.beta_bar - want).abs() < 1e-10);
            assert!((ix.alpha_bar - ix.beta_bar).abs() < 1e-10);
        }
    }

    #[test]
    fn expminus_indices_within_bounds() {
        let ix = NFunction::ExpMinus.indices().unwrap();
        assert!(0.5 <= ix.alpha_bar && ix.alpha_bar <= ix.beta_bar && ix.beta_bar <= 1.0);
        // Near 0 the function is t²/2, near infinity Φ⁻¹ ~ ln.
        assert!((ix.alpha_bar - 2f64.powf(-0.5)).abs() < 1e-4);
        assert!(ix.beta_bar > 0.9);
    }

    #[test]
    fn serde_tagged_form() {
        let phi: NFunction = serde_json::from_str(r#"{"family":"power","p":2.5}"#).unwrap();
        assert_eq!(phi, NFunction::Power { p: 2.5 });
        let e: NFunction = serde_json::from_str(r#"{"family":"exp-minus"}"#).unwrap();
        assert_eq!(e, NFunction::ExpMinus);
        assert!(serde_json::from_str::<NFunction>(r#"{"family":"power","p":2,"q":1}"#).is_err());
    }
}
