//! Strong and weak Lebesgue and Orlicz quasi-norms and the Kolmogorov-type
//! functional `sup_E |E|^{1/p-1} ∫_E |f|`.
//!
//! Weak norms and the functional are suprema over levels `t` of an
//! objective in `(t, λ_f(t))`. The supremum is taken over every breakpoint
//! level (with both one-sided measures), then by a log grid plus golden
//! refinement inside each gap where `λ_f` varies, including the tail of an
//! unbounded function. Strong norms integrate `Φ(|f|)` segment by segment
//! with a power substitution that removes the singular endpoint.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::nfunc::NFunction;
use crate::quad;
use crate::realfn::DistributionCurve;
use crate::realfn::PiecewiseFunction;
use crate::search::grid_then_golden;

/// Which quasi-norm to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceKind {
    Lp { p: f64 },
    WeakLp { p: f64 },
    Orlicz { phi: NFunction },
    WeakOrlicz { phi: NFunction },
}

impl SpaceKind {
    pub fn is_weak(&self) -> bool {
        matches!(self, SpaceKind::WeakLp { .. } | SpaceKind::WeakOrlicz { .. })
    }

    /// Power-type exponent: `p` for Lebesgue kinds and for `Φ = t^p`.
    pub fn exponent(&self) -> Option<f64> {
        match *self {
            SpaceKind::Lp { p } | SpaceKind::WeakLp { p } => Some(p),
            SpaceKind::Orlicz { phi } | SpaceKind::WeakOrlicz { phi } => match phi {
                NFunction::Power { p } => Some(p),
                _ => None,
            },
        }
    }

    pub fn phi(&self) -> Option<NFunction> {
        match *self {
            SpaceKind::Orlicz { phi } | SpaceKind::WeakOrlicz { phi } => Some(phi),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            SpaceKind::Lp { p } | SpaceKind::WeakLp { p } => {
                if p.is_finite() && p > 1.0 {
                    Ok(())
                } else {
                    domain(format!("space exponent must be finite and > 1, got {p}"))
                }
            }
            SpaceKind::Orlicz { phi } | SpaceKind::WeakOrlicz { phi } => phi.validate(),
        }
    }
}

/// A quasi-normed space and the modulus `C` of `‖x+y‖ ≤ C(‖x‖+‖y‖)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceSpec {
    pub kind: SpaceKind,
    pub quasi_modulus: f64,
}

impl SpaceSpec {
    /// Space with the default modulus (1 for strong kinds, 2 for weak kinds).
    pub fn new(kind: SpaceKind) -> Result<Self> {
        let c = if kind.is_weak() { 2.0 } else { 1.0 };
        Self::with_modulus(kind, c)
    }

    pub fn with_modulus(kind: SpaceKind, quasi_modulus: f64) -> Result<Self> {
        kind.validate()?;
        if !(quasi_modulus.is_finite() && quasi_modulus >= 1.0) {
            return domain(format!("quasi-norm modulus must be >= 1, got {quasi_modulus}"));
        }
        Ok(SpaceSpec { kind, quasi_modulus })
    }

    pub fn lp(p: f64) -> Result<Self> {
        Self::new(SpaceKind::Lp { p })
    }

    pub fn weak_lp(p: f64) -> Result<Self> {
        Self::new(SpaceKind::WeakLp { p })
    }

    pub fn orlicz(phi: NFunction) -> Result<Self> {
        Self::new(SpaceKind::Orlicz { phi })
    }

    pub fn weak_orlicz(phi: NFunction) -> Result<Self> {
        Self::new(SpaceKind::WeakOrlicz { phi })
    }

    pub fn norm(&self, f: &PiecewiseFunction) -> Result<f64> {
        norm_with(f, self, &SupGrid::default())
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SpaceKind::Lp { p } => write!(f, "lp:{p}"),
            SpaceKind::WeakLp { p } => write!(f, "weak-lp:{p}"),
            SpaceKind::Orlicz { phi } => write!(f, "orlicz:{phi}"),
            SpaceKind::WeakOrlicz { phi } => write!(f, "weak-orlicz:{phi}"),
        }
    }
}

impl FromStr for SpaceSpec {
    type Err = Error;

    /// Parses `lp:<p>`, `weak-lp:<p>`, `orlicz:<phi>` or `weak-orlicz:<phi>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("space '{s}' must look like 'weak-lp:2' or 'orlicz:power:2'")))?;
        let exponent = || rest.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad space exponent '{rest}'")));
        let kind = match kind.trim().to_ascii_lowercase().as_str() {
            "lp" => SpaceKind::Lp { p: exponent()? },
            "weak-lp" | "wlp" => SpaceKind::WeakLp { p: exponent()? },
            "orlicz" => SpaceKind::Orlicz { phi: rest.parse()? },
            "weak-orlicz" | "worlicz" => SpaceKind::WeakOrlicz { phi: rest.parse()? },
            other => return Err(Error::Parse(format!("unknown space kind '{other}'"))),
        };
        SpaceSpec::new(kind)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceSpecRepr {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi: Option<NFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quasi_modulus: Option<f64>,
}

impl Serialize for SpaceSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (kind, p, phi) = match self.kind {
            SpaceKind::Lp { p } => ("lp", Some(p), None),
            SpaceKind::WeakLp { p } => ("weak-lp", Some(p), None),
            SpaceKind::Orlicz { phi } => ("orlicz", None, Some(phi)),
            SpaceKind::WeakOrlicz { phi } => ("weak-orlicz", None, Some(phi)),
        };
        SpaceSpecRepr { kind: kind.into(), p, phi, quasi_modulus: Some(self.quasi_modulus) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpaceSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SpaceSpecRepr::deserialize(d)?;
        let need_p = || r.p.ok_or_else(|| D::Error::custom(format!("space kind '{}' needs 'p'", r.kind)));
        let need_phi = || r.phi.ok_or_else(|| D::Error::custom(format!("space kind '{}' needs 'phi'", r.kind)));
        let kind = match r.kind.as_str() {
            "lp" => SpaceKind::Lp { p: need_p()? },
            "weak-lp" => SpaceKind::WeakLp { p: need_p()? },
            "orlicz" => SpaceKind::Orlicz { phi: need_phi()? },
            "weak-orlicz" => SpaceKind::WeakOrlicz { phi: need_phi()? },
            other => return Err(D::Error::custom(format!("unknown space kind '{other}'"))),
        };
        let spec = match r.quasi_modulus {
            Some(c) => SpaceSpec::with_modulus(kind, c),
            None => SpaceSpec::new(kind),
        };
        spec.map_err(D::Error::custom)
    }
}

/// Level-supremum search parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SupGrid {
    /// Log-grid points per gap between breakpoint levels.
    pub points: usize,
    /// Golden-section iterations around the best grid point.
    pub golden_iters: usize,
    /// The tail of an unbounded function is searched up to this multiple of
    /// its scale (largest finite level or mean of `|f|`).
    pub tail_factor: f64,
    /// The gap below the smallest level starts at this multiple of it.
    pub floor_factor: f64,
}

impl Default for SupGrid {
    fn default() -> Self {
        SupGrid { points: 512, golden_iters: 60, tail_factor: 1e12, floor_factor: 1e-12 }
    }
}

/// `sup_t objective(t, m)` where `m` is `λ_f(t)` or, at breakpoint levels,
/// also `λ_f(t⁻)`. `t = 0` is included with `m = |supp f|`.
fn sup_over_levels(curve: &DistributionCurve, grid: &SupGrid, mut objective: impl FnMut(f64, f64) -> f64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let take = |v: f64, best: &mut f64| {
        if v.is_finite() && v > *best {
            *best = v;
        }
    };
    take(objective(0.0, curve.support_measure()), &mut best);
    for &l in curve.levels() {
        take(objective(l, curve.measure_at_least(l)), &mut best);
        take(objective(l, curve.measure_above(l)), &mut best);
    }
    let levels = curve.levels();
    let top = levels.last().copied().unwrap_or(0.0);
    // A zero crossing leaves a round-off level near 0, so the tail is
    // scaled by the mean of |f| as well.
    let scale = top.max(curve.l1_norm() / curve.support_measure());
    let mut gaps: Vec<(f64, f64)> = Vec::with_capacity(levels.len() + 1);
    let mut prev = 0.0;
    for &l in levels {
        gaps.push((prev, l));
        prev = l;
    }
    if curve.is_unbounded() {
        gaps.push((prev, scale * grid.tail_factor));
    }
    for (a, b) in gaps {
        if !curve.varies_within(a, b) {
            continue;
        }
        let lo = if a > 0.0 { a } else { b * grid.floor_factor };
        let (_, v) = grid_then_golden(lo, b, grid.points, grid.golden_iters, |t| objective(t, curve.measure_above(t)));
        take(v, &mut best);
    }
    best.max(0.0)
}

fn check_weak_singularity(curve: &DistributionCurve, p: f64, what: &str) -> Result<()> {
    if let Some(q) = curve.singular_exponent() {
        if q * p > 1.0 {
            return Err(Error::Divergent(format!("{what} is infinite: singularity of order {q} with p = {p}")));
        }
    }
    Ok(())
}

/// `‖f‖_{wL^p} = sup_γ γ·λ_f(γ)^{1/p}`.
pub fn weak_lp_norm(f: &PiecewiseFunction, p: f64, grid: &SupGrid) -> Result<f64> {
    SpaceKind::WeakLp { p }.validate()?;
    if f.is_zero() {
        return Ok(0.0);
    }
    let curve = f.distribution_curve()?;
    check_weak_singularity(&curve, p, "weak L^p norm")?;
    let inv_p = 1.0 / p;
    Ok(sup_over_levels(&curve, grid, |t, m| t * m.powf(inv_p)))
}

/// `‖f‖_{wL^Φ} = sup_t t / Φ⁻¹(1/λ_f(t))`.
pub fn weak_orlicz_norm(f: &PiecewiseFunction, phi: &NFunction, grid: &SupGrid) -> Result<f64> {
    phi.validate()?;
    if f.is_zero() {
        return Ok(0.0);
    }
    let curve = f.distribution_curve()?;
    if let Some(q) = curve.singular_exponent() {
        if !phi.weak_bounded_singularity(q) {
            return Err(Error::Divergent(format!(
                "weak Orlicz norm for {phi} is infinite on a singularity of order {q}"
            )));
        }
    }
    Ok(sup_over_levels(&curve, grid, |t, m| {
        if m <= 0.0 || t <= 0.0 {
            return 0.0;
        }
        phi.inv(1.0 / m).map_or(f64::NAN, |u| t / u)
    }))
}

/// `∫ F(|f|)` over the support, where `F(v)` grows like `v^growth` for
/// large `v` (`None`: faster than any power).
fn modular(curve: &DistributionCurve, growth: Option<f64>, what: &str, big_f: impl Fn(f64) -> f64) -> Result<f64> {
    let mut total = 0.0;
    for s in curve.segments() {
        let len = s.len();
        if s.is_constant() {
            total += len * big_f(s.v_peak);
            continue;
        }
        let k = match (s.singular_exp, growth) {
            (None, _) => 1.0,
            (Some(q), Some(a)) if q * a < 1.0 => 1.0 / (1.0 - q * a),
            (Some(q), _) => {
                return Err(Error::Divergent(format!("{what} is infinite: singularity of order {q}")));
            }
        };
        let integrand = |u: f64| {
            let w = len * k * u.powf(k - 1.0);
            if w == 0.0 {
                return 0.0;
            }
            let d = len * u.powf(k);
            if d <= 0.0 {
                return 0.0;
            }
            w * big_f(s.peak_value(d))
        };
        let r = quad::integrate(integrand, 0.0, 1.0, 1e-300, quad::DEFAULT_REL_TOL);
        if !r.value.is_finite() {
            return Err(Error::Divergent(format!("{what} is infinite")));
        }
        total += r.value;
    }
    Ok(total)
}

/// `‖f‖_{L^p} = (∫|f|^p)^{1/p}`.
pub fn lp_norm(f: &PiecewiseFunction, p: f64) -> Result<f64> {
    SpaceKind::Lp { p }.validate()?;
    if f.is_zero() {
        return Ok(0.0);
    }
    let curve = f.distribution_curve()?;
    let m = modular(&curve, Some(p), "L^p norm", |v| v.powf(p))?;
    Ok(m.powf(1.0 / p))
}

/// `‖f‖_{L^Φ} = inf{b > 0 : ∫Φ(|f|/b) ≤ 1}` by geometric bisection on `b`;
/// closed form `‖f‖_{L^p}` for `Φ = t^p`.
pub fn luxemburg_norm(f: &PiecewiseFunction, phi: &NFunction, tol: f64) -> Result<f64> {
    phi.validate()?;
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    if let NFunction::Power { p } = *phi {
        return lp_norm(f, p);
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    let curve = f.distribution_curve()?;
    let what = "Luxemburg norm";
    let growth = phi.growth_exponent();
    let m = |b: f64| modular(&curve, growth, what, |v| phi.eval_unchecked(v / b));
    let top = curve.levels().last().copied().unwrap_or(0.0);
    let scale = top.max(curve.l1_norm() / curve.support_measure());
    let (mut lo, mut hi) = (1e-9 * scale, 1e9 * scale);
    if m(hi)? > 1.0 {
        return Err(Error::Divergent(format!("{what} exceeds the bisection bracket")));
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        let v = m(mid)?;
        if v > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (v - 1.0).abs() <= tol || hi / lo - 1.0 <= 1e-15 {
            break;
        }
    }
    Ok(hi)
}

/// `sup_{0<|E|<∞} |E|^{1/p-1} ∫_E |f| = sup_m m^{1/p-1} ∫₀^m f*`.
///
/// Parametrized by level `t`, `∫₀^{λ(t)} f* = t·λ(t) + ∫(|f| - t)_+`. Where
/// `λ` jumps `∫₀^m f*` is linear in `m`, and the objective then peaks at an
/// end of the jump, so the level sweep covers every `m`.
pub fn kolmogorov_functional(f: &PiecewiseFunction, p: f64, grid: &SupGrid) -> Result<f64> {
    SpaceKind::WeakLp { p }.validate()?;
    if f.is_zero() {
        return Ok(0.0);
    }
    let curve = f.distribution_curve()?;
    check_weak_singularity(&curve, p, "Kolmogorov functional")?;
    let e = 1.0 / p - 1.0;
    Ok(sup_over_levels(&curve, grid, |t, m| {
        if m <= 0.0 {
            return 0.0;
        }
        let excess: f64 = curve.segments().iter().map(|s| s.excess_integral(t)).sum();
        m.powf(e) * (t * m + excess)
    }))
}

/// Norm of `f` in `space`.
pub fn norm(f: &PiecewiseFunction, space: &SpaceSpec) -> Result<f64> {
    norm_with(f, space, &SupGrid::default())
}

pub fn norm_with(f: &PiecewiseFunction, space: &SpaceSpec, grid: &SupGrid) -> Result<f64> {
    match space.kind {
        SpaceKind::Lp { p } => lp_norm(f, p),
        SpaceKind::WeakLp { p } => weak_lp_norm(f, p, grid),
        SpaceKind::Orlicz { phi } => luxemburg_norm(f, &phi, 1e-12),
        SpaceKind::WeakOrlicz { phi } => weak_orlicz_norm(f, &phi, grid),
    }
}
