//! One-dimensional grid and golden-section helpers shared by the sup searches.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    debug_assert!(lo > 0.0 && hi >= lo);
    if n <= 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + step * i as f64).exp()
            }
        })
        .collect()
}

/// Golden-section maximization of `f` on `[lo, hi]` in log coordinates.
///
/// Returns `(argmax, max)` over every point evaluated, endpoints included.
pub fn golden_max_log(lo: f64, hi: f64, iters: usize, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    debug_assert!(lo > 0.0 && hi >= lo);
    let mut best = (lo, f(lo));
    let fh = f(hi);
    if fh > best.1 {
        best = (hi, fh);
    }
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c.exp());
    let mut fd = f(d.exp());
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c.exp());
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d.exp());
        }
        if (b - a).abs() < 1e-15 {
            break;
        }
    }
    for (x, v) in [(c.exp(), fc), (d.exp(), fd)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Grid scan followed by golden refinement between the neighbours of the best
/// grid point. Points with non-finite objective are ignored.
pub fn grid_then_golden(lo: f64, hi: f64, points: usize, iters: usize, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let grid = log_grid(lo, hi, points.max(2));
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for (i, &x) in grid.iter().enumerate() {
        let v = f(x);
        if v.is_finite() && v > best {
            best = v;
            best_i = i;
        }
    }
    let l = grid[best_i.saturating_sub(1)];
    let r = grid[(best_i + 1).min(grid.len() - 1)];
    let (xr, vr) = golden_max_log(l, r, iters, |x| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::NEG_INFINITY
        }
    });
    if vr > best {
        (xr, vr)
    } else {
        (grid[best_i], best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-3, 1e3, 7);
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[6], 1e3);
        assert!((g[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn golden_finds_interior_max() {
        let (x, v) = golden_max_log(0.1, 10.0, 200, |x| -(x.ln() - 0.5).powi(2));
        assert!((x.ln() - 0.5).abs() < 1e-6);
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn grid_then_golden_monotone_hits_endpoint() {
        let (x, _) = grid_then_golden(1.0, 2.0, 16, 60, |x| x);
        assert_eq!(x, 2.0);
    }
}
