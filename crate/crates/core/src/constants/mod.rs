//! Ratio functionals behind the geometric constants and their seeded
//! supremum search.
//!
//! Every constant is `sup` of a ratio built from four norms: `‖f‖`, `‖g‖`,
//! `‖λf+μg‖` and `‖μf−λg‖`.

mod bounds;
mod estimate;
mod sampler;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::norms::{norm_with, SpaceSpec, SupGrid};
use crate::realfn::PiecewiseFunction;

pub use bounds::{bounds_for, cp_upper, paper_bounds, Bound, ConstantId, PaperBounds};
pub use estimate::{estimate, ConstantEstimate, Family, SearchConfig, Witness};
pub use sampler::{ball_f_pair, ball_g_pair, paper_witnesses, random_pair, LabeledPair, StepSampler};

/// Skew parameters `λ, μ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkewParams {
    pub lambda: f64,
    pub mu: f64,
}

impl SkewParams {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        let sk = SkewParams { lambda, mu };
        sk.validate()?;
        Ok(sk)
    }

    pub fn unit() -> Self {
        SkewParams { lambda: 1.0, mu: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("lambda", self.lambda), ("mu", self.mu)] {
            if !(v.is_finite() && v > 0.0) {
                return domain(format!("{name} must be finite and > 0, got {v}"));
            }
        }
        Ok(())
    }
}

/// Which ratio functional to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "ratio", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RatioId {
    /// `‖λf+μg‖ / (λ‖f‖ + μ‖g‖)`.
    C1,
    /// `‖μf−λg‖ / (μ‖f‖ + λ‖g‖)`.
    C2,
    /// `(‖f+g‖² + ‖f−g‖²) / (2(‖f‖² + ‖g‖²))`.
    Nj,
    /// `(‖λf+μg‖² + ‖μf−λg‖²) / ((λ²+μ²)(‖f‖² + ‖g‖²))`.
    Lyj,
    /// As `Lyj` with denominator `2(‖f‖² + ‖g‖²)`, on unit vectors.
    LyjPrime,
    /// `Lyj` divided by the plug-ins `c1·c2`.
    SkewC { c1: f64, c2: f64 },
    /// `(‖λf+μg‖^r + ‖μf−λg‖^r) / (c1c2(λ^r+μ^r)(‖f‖^r + ‖g‖^r))`, `r = pexp`.
    SkewCp { c1: f64, c2: f64, pexp: f64 },
}

impl RatioId {
    /// The C-free core of the skew constant.
    pub fn skew_core() -> Self {
        RatioId::SkewC { c1: 1.0, c2: 1.0 }
    }

    pub fn skew_p_core(pexp: f64) -> Self {
        RatioId::SkewCp { c1: 1.0, c2: 1.0, pexp }
    }

    /// Short name used in CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            RatioId::C1 => "c1",
            RatioId::C2 => "c2",
            RatioId::Nj => "nj",
            RatioId::Lyj => "lyj",
            RatioId::LyjPrime => "lyj-prime",
            RatioId::SkewC { .. } => "skew-c",
            RatioId::SkewCp { .. } => "skew-cp",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            RatioId::SkewC { c1, c2 } | RatioId::SkewCp { c1, c2, .. } => {
                if !(c1.is_finite() && c1 > 0.0 && c2.is_finite() && c2 > 0.0) {
                    return domain(format!("plug-in constants must be positive, got {c1}, {c2}"));
                }
                if let RatioId::SkewCp { pexp, .. } = *self {
                    if !(pexp.is_finite() && pexp >= 1.0) {
                        return domain(format!("pexp must be >= 1, got {pexp}"));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Whether the ratio is unchanged by `(λ, μ) → (cλ, cμ)`.
    pub fn skew_homogeneous(&self) -> bool {
        !matches!(self, RatioId::LyjPrime)
    }
}

impl fmt::Display for RatioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RatioId::SkewC { c1, c2 } if (c1, c2) != (1.0, 1.0) => write!(f, "skew-c:{c1}:{c2}"),
            RatioId::SkewCp { c1, c2, pexp } if (c1, c2) != (1.0, 1.0) => write!(f, "skew-cp:{pexp}:{c1}:{c2}"),
            RatioId::SkewCp { pexp, .. } => write!(f, "skew-cp:{pexp}"),
            _ => f.write_str(self.name()),
        }
    }
}

impl FromStr for RatioId {
    type Err = Error;

    /// Parses `c1`, `c2`, `nj`, `lyj`, `lyj-prime`, `skew-c[:c1:c2]` or
    /// `skew-cp[:pexp[:c1:c2]]`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').map(str::trim).collect();
        let num = |i: usize, default: f64| -> Result<f64> {
            match parts.get(i) {
                None => Ok(default),
                Some(t) => t.parse().map_err(|_| Error::Parse(format!("bad number '{t}' in constant '{s}'"))),
            }
        };
        let id = match (parts[0].to_ascii_lowercase().as_str(), parts.len()) {
            ("c1", 1) => RatioId::C1,
            ("c2", 1) => RatioId::C2,
            ("nj", 1) => RatioId::Nj,
            ("lyj", 1) => RatioId::Lyj,
            ("lyj-prime", 1) => RatioId::LyjPrime,
            ("skew-c", 1 | 3) => RatioId::SkewC { c1: num(1, 1.0)?, c2: num(2, 1.0)? },
            ("skew-cp", 1 | 2 | 4) => RatioId::SkewCp { pexp: num(1, 2.0)?, c1: num(2, 1.0)?, c2: num(3, 1.0)? },
            _ => return Err(Error::Parse(format!("unknown constant '{s}'"))),
        };
        id.validate().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(id)
    }
}

/// The four norms a ratio is built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairNorms {
    pub f: f64,
    pub g: f64,
    /// `‖λf+μg‖`.
    pub plus: f64,
    /// `‖μf−λg‖`.
    pub minus: f64,
}

pub fn pair_norms(
    f: &PiecewiseFunction,
    g: &PiecewiseFunction,
    sk: &SkewParams,
    space: &SpaceSpec,
    grid: &SupGrid,
) -> Result<PairNorms> {
    sk.validate()?;
    let plus = PiecewiseFunction::lincomb(sk.lambda, f, sk.mu, g)?;
    let minus = PiecewiseFunction::lincomb(sk.mu, f, -sk.lambda, g)?;
    Ok(PairNorms {
        f: norm_with(f, space, grid)?,
        g: norm_with(g, space, grid)?,
        plus: norm_with(&plus, space, grid)?,
        minus: norm_with(&minus, space, grid)?,
    })
}

fn quotient(num: f64, den: f64) -> Result<f64> {
    if !(den > 0.0) || !den.is_finite() {
        return domain(format!("ratio denominator is {den}"));
    }
    Ok(num / den)
}

/// Assembles ratio `id` from precomputed norms.
pub fn ratio_from_norms(id: &RatioId, n: &PairNorms, sk: &SkewParams) -> Result<f64> {
    id.validate()?;
    let (l, m) = (sk.lambda, sk.mu);
    let sq = |x: f64| x * x;
    match *id {
        RatioId::C1 => quotient(n.plus, l * n.f + m * n.g),
        RatioId::C2 => quotient(n.minus, m * n.f + l * n.g),
        RatioId::Nj => quotient(sq(n.plus) + sq(n.minus), 2.0 * (sq(n.f) + sq(n.g))),
        RatioId::Lyj => quotient(sq(n.plus) + sq(n.minus), (sq(l) + sq(m)) * (sq(n.f) + sq(n.g))),
        RatioId::LyjPrime => {
            if (n.f - 1.0).abs() > 1e-8 || (n.g - 1.0).abs() > 1e-8 {
                return domain(format!("primed ratio needs unit vectors, got norms {} and {}", n.f, n.g));
            }
            quotient(sq(n.plus) + sq(n.minus), 2.0 * (sq(n.f) + sq(n.g)))
        }
        RatioId::SkewC { c1, c2 } => {
            quotient(sq(n.plus) + sq(n.minus), c1 * c2 * (sq(l) + sq(m)) * (sq(n.f) + sq(n.g)))
        }
        RatioId::SkewCp { c1, c2, pexp } => {
            let pw = |x: f64| x.powf(pexp);
            quotient(pw(n.plus) + pw(n.minus), c1 * c2 * (pw(l) + pw(m)) * (pw(n.f) + pw(n.g)))
        }
    }
}

/// Evaluates ratio `id` on `(f, g)`. `Nj` ignores `sk` and uses `λ = μ = 1`.
pub fn ratio(
    id: &RatioId,
    f: &PiecewiseFunction,
    g: &PiecewiseFunction,
    sk: &SkewParams,
    space: &SpaceSpec,
) -> Result<f64> {
    ratio_with(id, f, g, sk, space, &SupGrid::default())
}

pub fn ratio_with(
    id: &RatioId,
    f: &PiecewiseFunction,
    g: &PiecewiseFunction,
    sk: &SkewParams,
    space: &SpaceSpec,
    grid: &SupGrid,
) -> Result<f64> {
    let sk = if matches!(id, RatioId::Nj) { SkewParams::unit() } else { *sk };
    let n = pair_norms(f, g, &sk, space, grid)?;
    ratio_from_norms(id, &n, &sk)
}

pub fn ratio_c1(f: &PiecewiseFunction, g: &PiecewiseFunction, sk: &SkewParams, space: &SpaceSpec) -> Result<f64> {
    ratio(&RatioId::C1, f, g, sk, space)
}

pub fn ratio_c2(f: &PiecewiseFunction, g: &PiecewiseFunction, sk: &SkewParams, space: &SpaceSpec) -> Result<f64> {
    ratio(&RatioId::C2, f, g, sk, space)
}

pub fn ratio_nj(f: &PiecewiseFunction, g: &PiecewiseFunction, space: &SpaceSpec) -> Result<f64> {
    ratio(&RatioId::Nj, f, g, &SkewParams::unit(), space)
}

pub fn ratio_lyj(f: &PiecewiseFunction, g: &PiecewiseFunction, sk: &SkewParams, space: &SpaceSpec) -> Result<f64> {
    ratio(&RatioId::Lyj, f, g, sk, space)
}

pub fn ratio_lyj_prime(
    f: &PiecewiseFunction,
    g: &PiecewiseFunction,
    sk: &SkewParams,
    space: &SpaceSpec,
) -> Result<f64> {
    ratio(&RatioId::LyjPrime, f, g, sk, space)
}

pub fn ratio_skew_c(
    f: &PiecewiseFunction,
    g: &PiecewiseFunction,
    sk: &SkewParams,
    space: &SpaceSpec,
    c1: f64,
    c2: f64,
) -> Result<f64> {
    ratio(&RatioId::SkewC { c1, c2 }, f, g, sk, space)
}

pub fn ratio_skew_cp(
    f: &PiecewiseFunction,
    g: &PiecewiseFunction,
    sk: &SkewParams,
    space: &SpaceSpec,
    c1: f64,
    c2: f64,
    pexp: f64,
) -> Result<f64> {
    ratio(&RatioId::SkewCp { c1, c2, pexp }, f, g, sk, space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfunc::NFunction;

    fn chi(a: f64, b: f64) -> PiecewiseFunction {
        PiecewiseFunction::char_fn(a, b, 1.0).unwrap()
    }

    #[test]
    fn c1_c2_examples() {
        let wl = SpaceSpec::weak_lp(2.0).unwrap();
        for sk in [SkewParams::unit(), SkewParams::new(1.0, 3.0).unwrap()] {
            assert!((ratio_c1(&chi(0.0, 1.0), &chi(0.0, 1.0), &sk, &wl).unwrap() - 1.0).abs() < 1e-15);
            assert!((ratio_c1(&chi(0.0, 1.0), &PiecewiseFunction::zero(), &sk, &wl).unwrap() - 1.0).abs() < 1e-15);
        }
        let u = SkewParams::unit();
        assert_eq!(ratio_c2(&chi(0.0, 1.0), &chi(0.0, 1.0), &u, &wl).unwrap(), 0.0);
        let got = ratio_c2(&chi(0.0, 1.0), &chi(1.0, 2.0), &u, &wl).unwrap();
        assert!((got - 2f64.sqrt() / 2.0).abs() < 1e-15);
        let z = PiecewiseFunction::zero();
        assert!(matches!(ratio_c1(&z, &z, &u, &wl), Err(Error::Domain(_))));
    }

    #[test]
    fn f1_g1_c1_at_unit_skew() {
        let wl = SpaceSpec::weak_lp(2.0).unwrap();
        let f1 = PiecewiseFunction::power_left(0.0, 1.0, 1.0, 0.5).unwrap();
        let g1 = PiecewiseFunction::power_right(0.0, 1.0, 1.0, 0.5).unwrap();
        let got = ratio_c1(&f1, &g1, &SkewParams::unit(), &wl).unwrap();
        assert!((got - 2f64.sqrt()).abs() < 1e-6, "{got}");
    }

    #[test]
    fn nj_examples() {
        let l2 = SpaceSpec::lp(2.0).unwrap();
        let f = PiecewiseFunction::steps(&[(0.0, 1.0, 2.0), (1.0, 1.5, -1.0)]).unwrap();
        assert!((ratio_nj(&f, &f, &l2).unwrap() - 1.0).abs() < 1e-14);
        assert!((ratio_nj(&chi(0.0, 1.0), &chi(1.0, 2.0), &l2).unwrap() - 1.0).abs() < 1e-14);
        let l4 = SpaceSpec::lp(4.0).unwrap();
        let a = PiecewiseFunction::steps(&[(0.0, 1.0, 1.0), (1.0, 2.0, 1.0)]).unwrap();
        let b = PiecewiseFunction::steps(&[(0.0, 1.0, 1.0), (1.0, 2.0, -1.0)]).unwrap();
        assert!((ratio_nj(&a, &b, &l4).unwrap() - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn lyj_identities() {
        let l2 = SpaceSpec::lp(2.0).unwrap();
        let sk = SkewParams::new(0.7, 2.5).unwrap();
        // Disjoint unit vectors in L² give exactly 1.
        let (f, g) = (chi(0.0, 1.0), chi(3.0, 4.0));
        assert!((ratio_lyj(&f, &g, &sk, &l2).unwrap() - 1.0).abs() < 1e-14);
        let same = SkewParams::new(1.5, 1.5).unwrap();
        let f = PiecewiseFunction::steps(&[(0.0, 1.0, 2.0), (1.0, 1.5, -1.0)]).unwrap();
        let g = PiecewiseFunction::steps(&[(0.5, 2.0, 0.3)]).unwrap();
        let wl = SpaceSpec::weak_lp(3.0).unwrap();
        let a = ratio_lyj(&f, &g, &same, &wl).unwrap();
        let b = ratio_nj(&f, &g, &wl).unwrap();
        assert!((a - b).abs() < 1e-14);
        let c = ratio_skew_c(&f, &g, &sk, &wl, 1.0, 1.0).unwrap();
        assert_eq!(c, ratio_lyj(&f, &g, &sk, &wl).unwrap());
        assert!(matches!(ratio_lyj_prime(&f, &g, &sk, &wl), Err(Error::Domain(_))));
    }

    #[test]
    fn skew_examples() {
        let l2 = SpaceSpec::lp(2.0).unwrap();
        let u = SkewParams::unit();
        let c = chi(0.0, 1.0);
        assert!((ratio_skew_c(&c, &c, &u, &l2, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((ratio_skew_cp(&c, &c, &u, &l2, 1.0, 1.0, 3.0).unwrap() - 2.0).abs() < 1e-14);
        let f = PiecewiseFunction::steps(&[(0.0, 1.0, 2.0), (1.0, 1.5, -1.0)]).unwrap();
        let g = PiecewiseFunction::steps(&[(0.5, 2.0, 0.3)]).unwrap();
        let sk = SkewParams::new(2.0, 0.5).unwrap();
        let wo = SpaceSpec::weak_orlicz(NFunction::ExpMinus).unwrap();
        let a = ratio_skew_c(&f, &g, &sk, &wo, 1.3, 1.7).unwrap();
        let b = ratio_skew_cp(&f, &g, &sk, &wo, 1.3, 1.7, 2.0).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn ratio_id_text_and_serde() {
        for text in ["c1", "c2", "nj", "lyj", "lyj-prime", "skew-c", "skew-cp:3", "skew-c:2:1.5", "skew-cp:2:2:2"] {
            let id: RatioId = text.parse().unwrap();
            assert_eq!(id.to_string(), text);
            let back: RatioId = serde_json::from_str(&serde_json::to_string(&id).unwrap()).unwrap();
            assert_eq!(back, id);
        }
        assert!("skew-c:0:1".parse::<RatioId>().is_err());
        assert!("c3".parse::<RatioId>().is_err());
        assert!(SkewParams::new(0.0, 1.0).is_err());
    }
}
