//! Measurable functions on bounded 1-D intervals, built from finitely many
//! pieces whose expressions are sums of constants and one-sided power
//! singularities.
//!
//! A piece `(a, b)` carries up to [`MAX_TERMS`] terms:
//!
//! * `Const(v)`: `x ↦ v`
//! * `PowerLeft { coef, exp, anchor }`: `x ↦ coef·(x - anchor)^{-exp}`, `anchor <= a`
//! * `PowerRight { coef, exp, anchor }`: `x ↦ coef·(anchor - x)^{-exp}`, `anchor >= b`
//!
//! The function is zero off its pieces. Anchors are absolute so that pieces
//! split by [`PiecewiseFunction::lincomb`] keep describing the same function.

mod literal;
pub mod oracle;
mod segment;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

pub use segment::{DistributionCurve, Segment};

/// Cap on the number of terms in a single piece's sum.
pub const MAX_TERMS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Term {
    Const(f64),
    PowerLeft { coef: f64, exp: f64, anchor: f64 },
    PowerRight { coef: f64, exp: f64, anchor: f64 },
}

impl Term {
    fn coef(&self) -> f64 {
        match *self {
            Term::Const(v) => v,
            Term::PowerLeft { coef, .. } | Term::PowerRight { coef, .. } => coef,
        }
    }

    pub(crate) fn scaled(&self, c: f64) -> Term {
        match *self {
            Term::Const(v) => Term::Const(c * v),
            Term::PowerLeft { coef, exp, anchor } => Term::PowerLeft { coef: c * coef, exp, anchor },
            Term::PowerRight { coef, exp, anchor } => Term::PowerRight { coef: c * coef, exp, anchor },
        }
    }

    fn same_shape(&self, other: &Term) -> bool {
        match (self, other) {
            (Term::Const(_), Term::Const(_)) => true,
            (Term::PowerLeft { exp: e1, anchor: a1, .. }, Term::PowerLeft { exp: e2, anchor: a2, .. })
            | (Term::PowerRight { exp: e1, anchor: a1, .. }, Term::PowerRight { exp: e2, anchor: a2, .. }) => {
                e1 == e2 && a1 == a2
            }
            _ => false,
        }
    }

    fn with_coef(&self, c: f64) -> Term {
        match *self {
            Term::Const(_) => Term::Const(c),
            Term::PowerLeft { exp, anchor, .. } => Term::PowerLeft { coef: c, exp, anchor },
            Term::PowerRight { exp, anchor, .. } => Term::PowerRight { coef: c, exp, anchor },
        }
    }

    /// Value at the point `lo + dl = hi - dr` of the interval `[lo, hi]`.
    ///
    /// Power terms measure their distance to the anchor through the offset
    /// on the anchor's side, which stays exact next to a singularity.
    #[inline]
    fn value(&self, lo: f64, hi: f64, dl: f64, dr: f64) -> f64 {
        match *self {
            Term::Const(v) => v,
            Term::PowerLeft { coef, exp, anchor } => coef * ((lo - anchor) + dl).powf(-exp),
            Term::PowerRight { coef, exp, anchor } => coef * ((anchor - hi) + dr).powf(-exp),
        }
    }

    #[inline]
    fn derivative(&self, x: f64) -> f64 {
        match *self {
            Term::Const(_) => 0.0,
            Term::PowerLeft { coef, exp, anchor } => -exp * coef * (x - anchor).powf(-exp - 1.0),
            Term::PowerRight { coef, exp, anchor } => exp * coef * (anchor - x).powf(-exp - 1.0),
        }
    }
}

/// `(base + inc)^r - base^r` without cancellation for small `inc`.
fn pow_diff(base: f64, inc: f64, r: f64) -> f64 {
    if base == 0.0 {
        inc.max(0.0).powf(r)
    } else {
        base.powf(r) * (r * (inc / base).ln_1p()).exp_m1()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub terms: Vec<Term>,
}

impl Piece {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| matches!(t, Term::Const(_)))
    }

    /// Sum of the constant terms.
    pub fn constant_value(&self) -> f64 {
        self.terms.iter().filter_map(|t| if let Term::Const(v) = t { Some(*v) } else { None }).sum()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_offset(x - self.lo, self.hi - x)
    }

    /// Value at offset `d` from the left end (`from_left`) or right end.
    pub fn eval_at(&self, d: f64, from_left: bool) -> f64 {
        let len = self.len();
        if from_left {
            self.eval_offset(d, len - d)
        } else {
            self.eval_offset(len - d, d)
        }
    }

    fn eval_offset(&self, dl: f64, dr: f64) -> f64 {
        self.terms.iter().map(|t| t.value(self.lo, self.hi, dl, dr)).sum()
    }

    fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return domain(format!("piece interval ({}, {}) must be finite and nonempty", self.lo, self.hi));
        }
        if self.terms.len() > MAX_TERMS {
            return Err(Error::Unsupported(format!("piece has {} terms, cap is {MAX_TERMS}", self.terms.len())));
        }
        for t in &self.terms {
            match *t {
                Term::Const(v) if !v.is_finite() => return domain("constant term must be finite"),
                Term::PowerLeft { coef, exp, anchor } | Term::PowerRight { coef, exp, anchor } => {
                    if !coef.is_finite() || !anchor.is_finite() {
                        return domain("power term coefficient and anchor must be finite");
                    }
                    if !(exp > 0.0 && exp < 1.0) {
                        return domain(format!("power exponent must lie in (0, 1), got {exp}"));
                    }
                    let ok = match t {
                        Term::PowerLeft { .. } => anchor <= self.lo,
                        _ => anchor >= self.hi,
                    };
                    if !ok {
                        return domain(format!("power anchor {anchor} lies inside ({}, {})", self.lo, self.hi));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Merges like terms and drops zero coefficients.
fn normalize_terms(terms: impl IntoIterator<Item = Term>) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    for t in terms {
        if let Some(slot) = out.iter_mut().find(|o| o.same_shape(&t)) {
            *slot = slot.with_coef(slot.coef() + t.coef());
        } else {
            out.push(t);
        }
    }
    out.retain(|t| t.coef() != 0.0);
    // Const first, then left, then right: a canonical order for printing
    // and comparison.
    out.sort_by_key(|t| match t {
        Term::Const(_) => 0,
        Term::PowerLeft { .. } => 1,
        Term::PowerRight { .. } => 2,
    });
    out
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PiecewiseFunction {
    pieces: Vec<Piece>,
}

impl PiecewiseFunction {
    pub fn zero() -> Self {
        PiecewiseFunction { pieces: Vec::new() }
    }

    /// Validates and normalizes a list of pieces (sorted, pairwise disjoint).
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        let mut out = Vec::with_capacity(pieces.len());
        for p in pieces {
            p.validate()?;
            let terms = normalize_terms(p.terms);
            if terms.len() > MAX_TERMS {
                return Err(Error::Unsupported(format!("piece has {} terms, cap is {MAX_TERMS}", terms.len())));
            }
            if !terms.is_empty() {
                out.push(Piece { lo: p.lo, hi: p.hi, terms });
            }
        }
        for w in out.windows(2) {
            if w[0].hi > w[1].lo {
                return domain(format!(
                    "pieces ({}, {}) and ({}, {}) overlap or are unsorted",
                    w[0].lo, w[0].hi, w[1].lo, w[1].hi
                ));
            }
        }
        Ok(PiecewiseFunction { pieces: out })
    }

    /// `height·χ_(a,b)`.
    pub fn char_fn(a: f64, b: f64, height: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return domain(format!("characteristic function of empty interval ({a}, {b})"));
        }
        if !height.is_finite() {
            return domain("height must be finite");
        }
        Self::new(vec![Piece { lo: a, hi: b, terms: vec![Term::Const(height)] }])
    }

    /// `coef·(x - a)^{-exp}` on `(a, b)`.
    pub fn power_left(a: f64, b: f64, coef: f64, exp: f64) -> Result<Self> {
        Self::new(vec![Piece { lo: a, hi: b, terms: vec![Term::PowerLeft { coef, exp, anchor: a }] }])
    }

    /// `coef·(b - x)^{-exp}` on `(a, b)`.
    pub fn power_right(a: f64, b: f64, coef: f64, exp: f64) -> Result<Self> {
        Self::new(vec![Piece { lo: a, hi: b, terms: vec![Term::PowerRight { coef, exp, anchor: b }] }])
    }

    /// Step function from `(a, b, value)` triples.
    pub fn steps(steps: &[(f64, f64, f64)]) -> Result<Self> {
        let mut pieces: Vec<Piece> =
            steps.iter().map(|&(a, b, v)| Piece { lo: a, hi: b, terms: vec![Term::Const(v)] }).collect();
        pieces.sort_by(|x, y| x.lo.total_cmp(&y.lo));
        Self::new(pieces)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_step(&self) -> bool {
        self.pieces.iter().all(Piece::is_constant)
    }

    /// Smallest interval containing every piece, if any.
    pub fn hull(&self) -> Option<(f64, f64)> {
        Some((self.pieces.first()?.lo, self.pieces.last()?.hi))
    }

    /// Total length of the pieces.
    pub fn domain_measure(&self) -> f64 {
        self.pieces.iter().map(Piece::len).sum()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.pieces.partition_point(|p| p.hi <= x);
        match self.pieces.get(i) {
            Some(p) if p.lo < x && x < p.hi => p.eval(x),
            _ => 0.0,
        }
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return domain("scale factor must be finite");
        }
        Self::new(
            self.pieces
                .iter()
                .map(|p| Piece { lo: p.lo, hi: p.hi, terms: p.terms.iter().map(|t| t.scaled(c)).collect() })
                .collect(),
        )
    }

    /// Pointwise `alpha·f + beta·g` on the common refinement of both partitions.
    pub fn lincomb(alpha: f64, f: &Self, beta: f64, g: &Self) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return domain("linear combination coefficients must be finite");
        }
        let mut cuts: Vec<f64> = f.pieces.iter().chain(&g.pieces).flat_map(|p| [p.lo, p.hi]).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();

        fn covering(h: &PiecewiseFunction, a: f64, b: f64) -> Option<&Piece> {
            h.pieces.iter().find(|p| p.lo <= a && b <= p.hi)
        }
        let mut cells: Vec<Piece> = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mut terms = Vec::new();
            if let Some(p) = covering(f, a, b) {
                terms.extend(p.terms.iter().map(|t| t.scaled(alpha)));
            }
            if let Some(p) = covering(g, a, b) {
                terms.extend(p.terms.iter().map(|t| t.scaled(beta)));
            }
            let terms = normalize_terms(terms);
            if terms.len() > MAX_TERMS {
                return Err(Error::Unsupported(format!(
                    "combination needs {} terms on ({a}, {b}), cap is {MAX_TERMS}",
                    terms.len()
                )));
            }
            if terms.is_empty() {
                continue;
            }
            match cells.last_mut() {
                Some(last) if last.hi == a && last.terms == terms => last.hi = b,
                _ => cells.push(Piece { lo: a, hi: b, terms }),
            }
        }
        Self::new(cells)
    }

    /// `|{x : |f(x)| > t}|`.
    pub fn distribution(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return domain(format!("distribution level must be nonnegative, got {t}"));
        }
        Ok(self.distribution_curve()?.measure_above(t))
    }

    /// `∫₀^m f*(s) ds`, the largest integral of `|f|` over a set of measure `m`.
    pub fn rearrangement_integral(&self, m: f64) -> Result<f64> {
        if !(m >= 0.0) {
            return domain(format!("measure must be nonnegative, got {m}"));
        }
        Ok(self.distribution_curve()?.rearrangement_integral(m))
    }

    /// Monotone decomposition of `|f|` and the resulting distribution function.
    pub fn distribution_curve(&self) -> Result<DistributionCurve> {
        DistributionCurve::new(self)
    }

    /// Dominant singular exponent over all pieces, if `f` is unbounded.
    pub fn max_singular_exponent(&self) -> Option<f64> {
        let mut q: Option<f64> = None;
        for p in &self.pieces {
            for t in &p.terms {
                let e = match *t {
                    Term::PowerLeft { exp, anchor, .. } if anchor == p.lo => exp,
                    Term::PowerRight { exp, anchor, .. } if anchor == p.hi => exp,
                    _ => continue,
                };
                q = Some(q.map_or(e, |c| c.max(e)));
            }
        }
        q
    }

    /// Raw access for in-crate perturbation; callers rebuild through [`Self::new`].
    pub(crate) fn pieces_mut(&mut self) -> &mut Vec<Piece> {
        &mut self.pieces
    }
}

impl fmt::Display for PiecewiseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        literal::write_function(self, f)
    }
}

impl FromStr for PiecewiseFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        literal::parse_function(s)
    }
}

impl Serialize for PiecewiseFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PiecewiseFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(a: f64, b: f64) -> PiecewiseFunction {
        PiecewiseFunction::char_fn(a, b, 1.0).unwrap()
    }

    #[test]
    fn char_fn_examples() {
        let f = chi(0.0, 1.0);
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval(1.5), 0.0);
        assert!(PiecewiseFunction::char_fn(0.0, 1.0, 0.0).unwrap().is_zero());
        let h = 2f64.sqrt();
        let g = PiecewiseFunction::char_fn(2.0, 3.0, h).unwrap();
        assert_eq!(g.eval(2.5), h);
        assert!(matches!(PiecewiseFunction::char_fn(1.0, 1.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn lincomb_disjoint_merges_into_one_step() {
        let s = PiecewiseFunction::lincomb(1.0, &chi(0.0, 1.0), 1.0, &chi(1.0, 2.0)).unwrap();
        assert_eq!(s, PiecewiseFunction::char_fn(0.0, 2.0, 1.0).unwrap());
    }

    #[test]
    fn lincomb_cancels() {
        let z = PiecewiseFunction::lincomb(1.0, &chi(0.0, 1.0), -1.0, &chi(0.0, 1.0)).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn lincomb_builds_h1() {
        let f1 = PiecewiseFunction::power_left(0.0, 1.0, 1.0, 0.5).unwrap();
        let g1 = PiecewiseFunction::power_right(0.0, 1.0, 1.0, 0.5).unwrap();
        let h = PiecewiseFunction::lincomb(2.0, &f1, 3.0, &g1).unwrap();
        assert_eq!(h.pieces().len(), 1);
        assert_eq!(
            h.pieces()[0].terms,
            vec![
                Term::PowerLeft { coef: 2.0, exp: 0.5, anchor: 0.0 },
                Term::PowerRight { coef: 3.0, exp: 0.5, anchor: 1.0 }
            ]
        );
        let x: f64 = 0.3;
        assert!((h.eval(x) - (2.0 * x.powf(-0.5) + 3.0 * (1.0 - x).powf(-0.5))).abs() < 1e-12);
    }

    #[test]
    fn lincomb_term_cap() {
        let mk = |e: f64| PiecewiseFunction::power_left(0.0, 1.0, 1.0, e).unwrap();
        let a = PiecewiseFunction::lincomb(1.0, &mk(0.1), 1.0, &mk(0.2)).unwrap();
        let b = PiecewiseFunction::lincomb(1.0, &mk(0.3), 1.0, &mk(0.4)).unwrap();
        let c = PiecewiseFunction::lincomb(1.0, &a, 1.0, &b).unwrap();
        assert_eq!(c.pieces()[0].terms.len(), 4);
        assert!(matches!(PiecewiseFunction::lincomb(1.0, &c, 1.0, &mk(0.5)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn split_power_piece_keeps_anchor() {
        let f = PiecewiseFunction::power_left(0.0, 1.0, 1.0, 0.5).unwrap();
        let s = PiecewiseFunction::lincomb(1.0, &f, 1.0, &chi(0.5, 2.0)).unwrap();
        assert_eq!(s.pieces().len(), 3);
        assert!((s.eval(0.75) - (0.75f64.powf(-0.5) + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_pieces() {
        let bad_exp = Piece { lo: 0.0, hi: 1.0, terms: vec![Term::PowerLeft { coef: 1.0, exp: 1.0, anchor: 0.0 }] };
        assert!(PiecewiseFunction::new(vec![bad_exp]).is_err());
        let bad_anchor = Piece { lo: 0.0, hi: 1.0, terms: vec![Term::PowerLeft { coef: 1.0, exp: 0.5, anchor: 0.5 }] };
        assert!(PiecewiseFunction::new(vec![bad_anchor]).is_err());
        assert!(PiecewiseFunction::steps(&[(0.0, 1.0, 1.0), (0.5, 2.0, 1.0)]).is_err());
    }

    #[test]
    fn pow_diff_small_increment() {
        let d = pow_diff(1.0, 1e-12, 0.5);
        assert!((d / 0.5e-12 - 1.0).abs() < 1e-9);
        assert_eq!(pow_diff(0.0, 4.0, 0.5), 2.0);
    }
}
