//! Monotone decomposition of `|f|`, distribution function and decreasing
//! rearrangement.

use super::{pow_diff, Piece, PiecewiseFunction, Term};
use crate::error::{Error, Result};

const CRIT_SAMPLES: usize = 256;

/// A subinterval on which `|f|` is constant or strictly monotone.
///
/// Non-constant segments are parametrized by the distance `d` from their
/// peak end (the end where `|f|` is largest), so level sets are `[0, d*)`
/// in that coordinate and stay resolvable right next to a singularity.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    terms: Vec<Term>,
    /// `|f| = sign·f` on the segment.
    sign: f64,
    peak_left: bool,
    /// `|f|` at the peak end; infinite at a singularity.
    pub v_peak: f64,
    /// `|f|` at the opposite end.
    pub v_base: f64,
    /// Dominant exponent `q` when the peak is a singularity `~ d^{-q}`.
    pub singular_exp: Option<f64>,
    constant: bool,
}

impl Segment {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_constant(&self) -> bool {
        self.constant
    }

    /// `|f|` at distance `d` from the peak end.
    pub fn peak_value(&self, d: f64) -> f64 {
        if self.constant {
            return self.v_peak;
        }
        let len = self.len();
        let (dl, dr) = if self.peak_left { (d, len - d) } else { (len - d, d) };
        self.sign * self.terms.iter().map(|t| t.value(self.lo, self.hi, dl, dr)).sum::<f64>()
    }

    /// `∫₀^d |f|` measured from the peak end, from closed-form antiderivatives.
    pub fn peak_integral(&self, d: f64) -> f64 {
        if self.constant {
            return self.v_peak * d;
        }
        let mut acc = 0.0;
        for t in &self.terms {
            acc += match *t {
                Term::Const(v) => v * d,
                Term::PowerLeft { coef, exp, anchor } => {
                    let r = 1.0 - exp;
                    let part = if self.peak_left {
                        pow_diff(self.lo - anchor, d, r)
                    } else {
                        -pow_diff(self.hi - anchor, -d, r)
                    };
                    coef * part / r
                }
                Term::PowerRight { coef, exp, anchor } => {
                    let r = 1.0 - exp;
                    let part = if self.peak_left {
                        -pow_diff(anchor - self.lo, -d, r)
                    } else {
                        pow_diff(anchor - self.hi, d, r)
                    };
                    coef * part / r
                }
            };
        }
        self.sign * acc
    }

    /// Distance `d*` from the peak end with `|f| > t` exactly on `[0, d*)`.
    fn crossing(&self, t: f64) -> f64 {
        let len = self.len();
        if self.constant {
            return if self.v_peak > t { len } else { 0.0 };
        }
        if t >= self.v_peak {
            return 0.0;
        }
        if t <= self.v_base {
            return len;
        }
        // Shrink geometrically first so tiny level sets cost O(log) steps.
        let mut hi = len;
        let mut lo = 0.5 * len;
        while self.peak_value(lo) <= t {
            hi = lo;
            lo *= 0.5;
            if lo < f64::MIN_POSITIVE {
                return hi;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.peak_value(mid) > t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// `|{x in segment : |f(x)| > t}|`, or `>=` for constant segments when
    /// `inclusive` (non-constant segments differ only on a null set).
    pub fn measure_above(&self, t: f64, inclusive: bool) -> f64 {
        if self.constant {
            let hit = if inclusive { self.v_peak >= t } else { self.v_peak > t };
            return if hit { self.len() } else { 0.0 };
        }
        self.crossing(t)
    }

    /// `∫ (|f| - t)_+` over the segment.
    pub fn excess_integral(&self, t: f64) -> f64 {
        if self.constant {
            return self.len() * (self.v_peak - t).max(0.0);
        }
        let d = self.crossing(t);
        if d == 0.0 {
            return 0.0;
        }
        (self.peak_integral(d) - t * d).max(0.0)
    }

    /// Whether `|f|` takes values strictly inside `(a, b)` on a set of positive measure.
    fn varies_within(&self, a: f64, b: f64) -> bool {
        !self.constant && self.v_base < b && self.v_peak > a
    }
}

fn derivative(terms: &[Term], x: f64) -> f64 {
    terms.iter().map(|t| t.derivative(x)).sum()
}

/// Signed value at the point `u` or `w` of a subinterval, with `±∞` at a
/// singular endpoint.
fn end_value(piece: &Piece, u: f64, w: f64, at_left: bool) -> f64 {
    let singular: Option<(f64, f64)> = piece
        .terms
        .iter()
        .filter_map(|t| match *t {
            Term::PowerLeft { coef, exp, anchor } if at_left && anchor == u => Some((exp, coef)),
            Term::PowerRight { coef, exp, anchor } if !at_left && anchor == w => Some((exp, coef)),
            _ => None,
        })
        .fold(None, |acc: Option<(f64, f64)>, (e, c)| match acc {
            Some((e0, _)) if e0 >= e => acc,
            _ => Some((e, c)),
        });
    if let Some((_, coef)) = singular {
        return if coef > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
    }
    let len = w - u;
    let (dl, dr) = if at_left { (0.0, len) } else { (len, 0.0) };
    piece.terms.iter().map(|t| t.value(u, w, dl, dr)).sum()
}

fn bisect_x(mut lo: f64, mut hi: f64, mut f_lo_positive: impl FnMut(f64) -> bool) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f_lo_positive(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn critical_point(piece: &Piece) -> Result<Option<f64>> {
    let len = piece.len();
    let mut xs: Vec<f64> = Vec::with_capacity(CRIT_SAMPLES + 2);
    xs.push(piece.lo + 1e-12 * len);
    for j in 1..CRIT_SAMPLES {
        let s = 0.5 * (1.0 - (std::f64::consts::PI * j as f64 / CRIT_SAMPLES as f64).cos());
        xs.push(piece.lo + s * len);
    }
    xs.push(piece.hi - 1e-12 * len);
    let mut prev: Option<(f64, f64)> = None;
    let mut change: Option<(f64, f64)> = None;
    let mut changes = 0;
    for &x in &xs {
        let d = derivative(&piece.terms, x);
        if d == 0.0 || !d.is_finite() {
            continue;
        }
        if let Some((px, pd)) = prev {
            if (pd > 0.0) != (d > 0.0) {
                changes += 1;
                change = Some((px, x));
            }
        }
        prev = Some((x, d));
    }
    match changes {
        0 => Ok(None),
        1 => {
            let (a, b) = change.unwrap();
            let left_sign = derivative(&piece.terms, a) > 0.0;
            Ok(Some(bisect_x(a, b, |x| (derivative(&piece.terms, x) > 0.0) == left_sign)))
        }
        n => Err(Error::Unsupported(format!(
            "piece on ({}, {}) has {n} interior critical points; at most one is supported",
            piece.lo, piece.hi
        ))),
    }
}

fn push_monotone(piece: &Piece, u: f64, w: f64, out: &mut Vec<Segment>, allow_split: bool) {
    let vu = end_value(piece, u, w, true);
    let vw = end_value(piece, u, w, false);
    if allow_split && ((vu > 0.0 && vw < 0.0) || (vu < 0.0 && vw > 0.0)) {
        // A monotone expression has at most one zero.
        let up = vu > 0.0;
        let z = bisect_x(u, w, |x| (piece.eval(x) > 0.0) == up);
        push_monotone(piece, u, z, out, false);
        push_monotone(piece, z, w, out, false);
        return;
    }
    let sign = if vu + vw > 0.0 || (vu + vw == 0.0 && piece.eval(0.5 * (u + w)) > 0.0) { 1.0 } else { -1.0 };
    let (au, aw) = (vu.abs(), vw.abs());
    let peak_left = au > aw;
    let (v_peak, v_base) = if peak_left { (au, aw) } else { (aw, au) };
    let singular_exp = if v_peak.is_infinite() {
        piece
            .terms
            .iter()
            .filter_map(|t| match *t {
                Term::PowerLeft { exp, anchor, .. } if peak_left && anchor == u => Some(exp),
                Term::PowerRight { exp, anchor, .. } if !peak_left && anchor == w => Some(exp),
                _ => None,
            })
            .reduce(f64::max)
    } else {
        None
    };
    out.push(Segment {
        lo: u,
        hi: w,
        terms: piece.terms.clone(),
        sign,
        peak_left,
        v_peak,
        v_base,
        singular_exp,
        constant: false,
    });
}

fn decompose(piece: &Piece, out: &mut Vec<Segment>) -> Result<()> {
    if piece.is_constant() {
        let v = piece.constant_value().abs();
        if v > 0.0 {
            out.push(Segment {
                lo: piece.lo,
                hi: piece.hi,
                terms: Vec::new(),
                sign: 1.0,
                peak_left: true,
                v_peak: v,
                v_base: v,
                singular_exp: None,
                constant: true,
            });
        }
        return Ok(());
    }
    let mut cuts = vec![piece.lo];
    if let Some(c) = critical_point(piece)? {
        cuts.push(c);
    }
    cuts.push(piece.hi);
    for w in cuts.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let sub = Piece { lo: w[0], hi: w[1], terms: piece.terms.clone() };
        let both_singular = end_value(&sub, w[0], w[1], true).is_infinite()
            && end_value(&sub, w[0], w[1], false).is_infinite()
            && end_value(&sub, w[0], w[1], true).signum() == end_value(&sub, w[0], w[1], false).signum();
        if both_singular {
            return Err(Error::Unsupported(format!("monotone piece on ({}, {}) is singular at both ends", w[0], w[1])));
        }
        push_monotone(&sub, w[0], w[1], out, true);
    }
    Ok(())
}

/// The nonincreasing map `t ↦ |{|f| > t}|`, kept as the monotone segments of
/// `|f|` plus the sorted finite levels where it fails to be smooth.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionCurve {
    segments: Vec<Segment>,
    levels: Vec<f64>,
    unbounded: bool,
    support: f64,
}

impl DistributionCurve {
    pub fn new(f: &PiecewiseFunction) -> Result<Self> {
        let mut segments = Vec::new();
        for p in f.pieces() {
            decompose(p, &mut segments)?;
        }
        let mut levels: Vec<f64> =
            segments.iter().flat_map(|s| [s.v_peak, s.v_base]).filter(|v| v.is_finite() && *v > 0.0).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let unbounded = segments.iter().any(|s| s.v_peak.is_infinite());
        let support = segments.iter().map(Segment::len).sum();
        Ok(DistributionCurve { segments, levels, unbounded, support })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Sorted distinct positive finite breakpoint levels.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn is_unbounded(&self) -> bool {
        self.unbounded
    }

    /// `|{|f| > 0}|`.
    pub fn support_measure(&self) -> f64 {
        self.support
    }

    /// Dominant singular exponent among unbounded segments.
    pub fn singular_exponent(&self) -> Option<f64> {
        self.segments.iter().filter_map(|s| s.singular_exp).reduce(f64::max)
    }

    /// `λ_f(t) = |{|f| > t}|`.
    pub fn measure_above(&self, t: f64) -> f64 {
        self.segments.iter().map(|s| s.measure_above(t, false)).sum()
    }

    /// `|{|f| >= t}|`, the left limit `λ_f(t⁻)` for `t > 0`.
    pub fn measure_at_least(&self, t: f64) -> f64 {
        self.segments.iter().map(|s| s.measure_above(t, true)).sum()
    }

    /// Whether `λ_f` is non-constant somewhere inside `(a, b)`.
    pub fn varies_within(&self, a: f64, b: f64) -> bool {
        self.segments.iter().any(|s| s.varies_within(a, b))
    }

    /// `f*(m) = inf{t >= 0 : λ_f(t) <= m}`.
    pub fn rearrangement(&self, m: f64) -> f64 {
        if m >= self.support {
            return 0.0;
        }
        let mut lo = 0.0;
        let mut hi = None;
        for &l in &self.levels {
            if self.measure_above(l) <= m {
                hi = Some(l);
                break;
            }
            lo = l;
        }
        let mut hi = match hi {
            Some(h) => h,
            None => {
                let mut h = if lo > 0.0 { 2.0 * lo } else { 1.0 };
                while self.measure_above(h) > m {
                    lo = h;
                    h *= 2.0;
                    if !h.is_finite() {
                        return f64::MAX;
                    }
                }
                h
            }
        };
        if !self.varies_within(lo, hi) {
            return hi;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.measure_above(mid) <= m {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// `∫₀^m f*(s) ds = m·f*(m) + ∫(|f| - f*(m))_+`.
    pub fn rearrangement_integral(&self, m: f64) -> f64 {
        if m <= 0.0 {
            return 0.0;
        }
        let t = self.rearrangement(m);
        let base = if m >= self.support { 0.0 } else { m * t };
        base + self.segments.iter().map(|s| s.excess_integral(t)).sum::<f64>()
    }

    /// `∫|f|`.
    pub fn l1_norm(&self) -> f64 {
        self.segments.iter().map(|s| s.excess_integral(0.0)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h1(lambda: f64, mu: f64, q: f64) -> PiecewiseFunction {
        let f = PiecewiseFunction::power_left(0.0, 1.0, 1.0, q).unwrap();
        let g = PiecewiseFunction::power_right(0.0, 1.0, 1.0, q).unwrap();
        PiecewiseFunction::lincomb(lambda, &f, mu, &g).unwrap()
    }

    #[test]
    fn char_distribution() {
        let c = PiecewiseFunction::char_fn(0.0, 1.0, 1.0).unwrap();
        assert_eq!(c.distribution(0.5).unwrap(), 1.0);
        assert_eq!(c.distribution(1.5).unwrap(), 0.0);
        assert_eq!(c.distribution(1.0).unwrap(), 0.0);
        assert_eq!(c.distribution_curve().unwrap().measure_at_least(1.0), 1.0);
    }

    #[test]
    fn f1_distribution_closed_form() {
        for p in [1.5, 2.0, 4.0] {
            let f = PiecewiseFunction::power_left(0.0, 1.0, 1.0, 1.0 / p).unwrap();
            for t in [0.3f64, 1.0, 1.7, 10.0, 1e6] {
                let want = 1f64.min(t.powf(-p));
                let got = f.distribution(t).unwrap();
                assert!((got - want).abs() <= 1e-14 * want.max(1e-300) + 1e-300, "p={p} t={t}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn h1_symmetric_level_set() {
        let h = h1(1.0, 1.0, 0.5);
        let t = h.eval(0.25);
        assert!((h.distribution(t).unwrap() - 0.5).abs() < 1e-12);
        let segs = h.distribution_curve().unwrap();
        assert_eq!(segs.segments().len(), 2);
    }

    #[test]
    fn h2_splits_at_zero() {
        let f = PiecewiseFunction::power_left(0.0, 1.0, 2.0, 0.5).unwrap();
        let g = PiecewiseFunction::power_right(0.0, 1.0, 1.0, 0.5).unwrap();
        let h = PiecewiseFunction::lincomb(1.0, &f, -1.0, &g).unwrap();
        let c = h.distribution_curve().unwrap();
        assert_eq!(c.segments().len(), 2);
        assert!(c.segments().iter().all(|s| s.v_base.abs() < 1e-6));
        // |h| > 0 almost everywhere.
        assert!((c.measure_above(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tiny_level_sets_resolved_near_right_singularity() {
        let g = PiecewiseFunction::power_right(0.0, 1.0, 1.0, 0.25).unwrap();
        let t = 1e8f64;
        let want = t.powf(-4.0);
        let got = g.distribution(t).unwrap();
        assert!((got / want - 1.0).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn rearrangement_integral_examples() {
        let c = PiecewiseFunction::char_fn(0.0, 1.0, 1.0).unwrap();
        assert!((c.rearrangement_integral(0.5).unwrap() - 0.5).abs() < 1e-15);
        let f = PiecewiseFunction::power_left(0.0, 1.0, 1.0, 0.5).unwrap();
        assert!((f.rearrangement_integral(1.0).unwrap() - 2.0).abs() < 1e-12);
        for m in [1e-6f64, 0.01, 0.3] {
            let want = 2.0 * m.sqrt();
            assert!((f.rearrangement_integral(m).unwrap() - want).abs() < 1e-12 * want.max(1.0));
        }
    }

    #[test]
    fn step_rearrangement_is_exact() {
        let s = PiecewiseFunction::steps(&[(0.0, 1.0, 1.0), (2.0, 2.5, 3.0), (4.0, 4.25, -2.0)]).unwrap();
        let c = s.distribution_curve().unwrap();
        assert_eq!(c.rearrangement(0.1), 3.0);
        assert_eq!(c.rearrangement(0.6), 2.0);
        assert!((c.rearrangement_integral(0.6) - (1.5 + 0.2)).abs() < 1e-15);
        assert!((c.l1_norm() - (1.0 + 1.5 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn rejects_two_critical_points() {
        // Three interior critical points.
        let p = Piece {
            lo: 0.0,
            hi: 1.0,
            terms: vec![
                Term::PowerLeft { coef: 1.0, exp: 0.9, anchor: 0.0 },
                Term::PowerLeft { coef: -3.0, exp: 0.5, anchor: 0.0 },
                Term::PowerRight { coef: 1.0, exp: 0.3, anchor: 1.0 },
                Term::PowerRight { coef: -3.0, exp: 0.2, anchor: 1.0 },
            ],
        };
        let f = PiecewiseFunction::new(vec![p]).unwrap();
        assert!(matches!(f.distribution_curve(), Err(Error::Unsupported(_))));
    }
}
