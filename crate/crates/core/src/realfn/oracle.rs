//! Dense-grid reference values.
//!
//! Every non-constant piece is cut into cells graded geometrically toward
//! both of its ends (down to `1e-30` of the piece length, so singular tails
//! are resolved) and `|f|` is sampled at cell midpoints; constant pieces
//! are a single exact cell. All quantities are then computed by sorting
//! cells by value, with no use of the monotone decomposition, level-set
//! inversion or quadrature that the engine relies on.

use crate::nfunc::NFunction;

use super::PiecewiseFunction;

/// Default number of cells per half piece.
pub const DEFAULT_CELLS_PER_HALF: usize = 500_000;

const SMALLEST_OFFSET: f64 = 1e-30;

#[derive(Debug, Clone, Copy)]
struct Cell {
    value: f64,
    width: f64,
    flat: bool,
}

/// Sorted cell samples of `|f|`.
#[derive(Debug, Clone)]
pub struct GridOracle {
    cells: Vec<Cell>,
    /// Suprema ignore levels of smaller measure: the innermost cell of a
    /// singular end is far wider than its neighbours, so its level is coarse.
    min_measure: f64,
}

impl GridOracle {
    pub fn new(f: &PiecewiseFunction) -> Self {
        Self::with_cells(f, DEFAULT_CELLS_PER_HALF)
    }

    pub fn with_cells(f: &PiecewiseFunction, per_half: usize) -> Self {
        let per_half = per_half.max(8);
        let mut cells = Vec::new();
        let mut innermost: f64 = 0.0;
        for p in f.pieces() {
            if p.is_constant() {
                let v = p.constant_value().abs();
                if v > 0.0 {
                    cells.push(Cell { value: v, width: p.len(), flat: true });
                }
                continue;
            }
            let half = 0.5 * p.len();
            innermost = innermost.max(half * SMALLEST_OFFSET);
            let growth = (1.0 / SMALLEST_OFFSET).powf(1.0 / (per_half - 1) as f64);
            for from_left in [true, false] {
                let mut prev = 0.0;
                let mut edge = half * SMALLEST_OFFSET;
                for j in 0..per_half {
                    let next = if j + 1 == per_half { half } else { edge };
                    let mid = 0.5 * (prev + next);
                    let v = p.eval_at(mid, from_left).abs();
                    cells.push(Cell { value: v, width: next - prev, flat: false });
                    prev = next;
                    edge *= growth;
                }
            }
        }
        cells.sort_by(|a, b| b.value.total_cmp(&a.value));
        GridOracle { cells, min_measure: 1e4 * innermost }
    }

    /// `|{|f| > t}|`.
    ///
    /// Between two graded cells the count is interpolated linearly in the
    /// level, taking each midpoint to split its cell evenly.
    pub fn distribution(&self, t: f64) -> f64 {
        let k = self.cells.partition_point(|c| c.value > t);
        let above: f64 = self.cells[..k].iter().map(|c| c.width).sum();
        match (k.checked_sub(1).map(|i| self.cells[i]), self.cells.get(k)) {
            (Some(a), Some(b)) if !a.flat && !b.flat && a.value > b.value => {
                let s = (a.value - t) / (a.value - b.value);
                above - 0.5 * a.width + s * 0.5 * (a.width + b.width)
            }
            _ => above,
        }
    }

    /// `sup` over sampled levels `v` of `objective(v, |{|f| >= v}|)`.
    ///
    /// A sampled cell counts half its width toward its own level: its
    /// midpoint splits it evenly between values above and below.
    fn sup_over_levels(&self, mut objective: impl FnMut(f64, f64) -> f64) -> f64 {
        let mut best: f64 = 0.0;
        let mut cum = 0.0;
        for c in &self.cells {
            if c.value <= 0.0 {
                break;
            }
            let m = cum + if c.flat { c.width } else { 0.5 * c.width };
            cum += c.width;
            if m < self.min_measure {
                continue;
            }
            let v = objective(c.value, m);
            if v.is_finite() {
                best = best.max(v);
            }
        }
        best
    }

    pub fn weak_lp_norm(&self, p: f64) -> f64 {
        self.sup_over_levels(|v, m| v * m.powf(1.0 / p))
    }

    pub fn weak_orlicz_norm(&self, phi: &NFunction) -> f64 {
        self.sup_over_levels(|v, m| v / newton_inverse(phi, 1.0 / m))
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        self.cells.iter().map(|c| c.width * c.value.powf(p)).sum::<f64>().powf(1.0 / p)
    }

    /// Luxemburg norm by bisection on `b` of the cell sum `Σ w·Φ(v/b)`.
    pub fn luxemburg_norm(&self, phi: &NFunction) -> f64 {
        let modular = |b: f64| -> f64 { self.cells.iter().map(|c| c.width * phi.eval_unchecked(c.value / b)).sum() };
        let scale = self.cells.first().map_or(0.0, |c| c.value);
        if scale == 0.0 {
            return 0.0;
        }
        let (mut lo, mut hi) = (scale * 1e-12, scale * 1e12);
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if modular(mid) > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi / lo - 1.0 < 1e-13 {
                break;
            }
        }
        (lo * hi).sqrt()
    }

    /// `∫₀^m f*` from the sorted cells, splitting the last cell.
    pub fn rearrangement_integral(&self, m: f64) -> f64 {
        let mut cum = 0.0;
        let mut acc = 0.0;
        for c in &self.cells {
            if cum + c.width >= m {
                return acc + (m - cum).max(0.0) * c.value;
            }
            cum += c.width;
            acc += c.width * c.value;
        }
        acc
    }

    /// `sup_m m^{1/p - 1} ∫₀^m f*` over cell boundaries.
    pub fn kolmogorov(&self, p: f64) -> f64 {
        let mut cum = 0.0;
        let mut acc = 0.0;
        let mut best: f64 = 0.0;
        for c in &self.cells {
            if c.value <= 0.0 {
                break;
            }
            cum += c.width;
            acc += c.width * c.value;
            if cum >= self.min_measure {
                best = best.max(cum.powf(1.0 / p - 1.0) * acc);
            }
        }
        best
    }
}

/// `Φ⁻¹(y)` by safeguarded Newton iteration on the closed form.
fn newton_inverse(phi: &NFunction, y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while phi.eval_unchecked(hi) < y {
        lo = hi;
        hi *= 2.0;
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..200 {
        let v = phi.eval_unchecked(t) - y;
        if v == 0.0 {
            return t;
        }
        if v < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let h = 1e-7 * t.max(1e-300);
        let slope = (phi.eval_unchecked(t + h) - phi.eval_unchecked(t - h).max(0.0)) / (2.0 * h);
        let mut next = t - v / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-15 * t {
            return next;
        }
        t = next;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_inverse_matches_closed_forms() {
        let phi = NFunction::Power { p: 3.0 };
        assert!((newton_inverse(&phi, 8.0) - 2.0).abs() < 1e-12);
        assert!((newton_inverse(&phi, 1e-9) - 1e-3).abs() < 1e-14);
    }

    #[test]
    fn oracle_on_f1() {
        let f = PiecewiseFunction::power_left(0.0, 1.0, 1.0, 0.5).unwrap();
        let o = GridOracle::with_cells(&f, 100_000);
        assert!((o.weak_lp_norm(2.0) - 1.0).abs() < 1e-4);
        assert!((o.rearrangement_integral(1.0) - 2.0).abs() < 1e-4);
        assert!((o.kolmogorov(2.0) - 2.0).abs() < 1e-3);
        assert!((o.distribution(4.0) - 1.0 / 16.0).abs() < 1e-4);
    }

    #[test]
    fn oracle_on_steps() {
        let s = PiecewiseFunction::steps(&[(0.0, 1.0, 2.0), (1.0, 2.0, 1.0)]).unwrap();
        let o = GridOracle::new(&s);
        assert!((o.lp_norm(2.0) - 5f64.sqrt()).abs() < 1e-12);
        assert!((o.weak_lp_norm(2.0) - 2.0).abs() < 1e-12);
        let phi = NFunction::Power { p: 2.0 };
        assert!((o.luxemburg_norm(&phi) - 5f64.sqrt()).abs() < 1e-9);
    }
}
