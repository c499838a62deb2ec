//! Local interpolation on sampled, strictly monotone grids.

use super::quad::lagrange4;
use super::Scalar;

/// Binary search: largest index i with xs[i] <= x (clamped to [0, n-2]).
pub fn bracket<T: Scalar>(xs: &[T], x: T) -> usize {
    let n = xs.len();
    debug_assert!(n >= 2);
    let mut lo = 0usize;
    let mut hi = n - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if xs[mid] <= x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo.min(n - 2)
}

/// Cubic Lagrange interpolation using the four samples around `x`.
pub fn cubic<T: Scalar>(xs: &[T], fs: &[T], x: T) -> T {
    let n = xs.len();
    if n < 4 {
        // linear fallback
        let i = bracket(xs, x);
        let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
        return fs[i] + t * (fs[i + 1] - fs[i]);
    }
    let i = bracket(xs, x);
    let i0 = i.saturating_sub(1).min(n - 4);
    lagrange4(&xs[i0..i0 + 4], &fs[i0..i0 + 4], x)
}

/// Cubic Hermite interpolation on one interval given endpoint values and
/// derivatives.
pub fn hermite<T: Scalar>(x0: T, x1: T, f0: T, f1: T, d0: T, d1: T, x: T) -> T {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let two = T::c(2.0);
    let three = T::c(3.0);
    let h00 = two * t3 - three * t2 + T::one();
    let h10 = t3 - two * t2 + t;
    let h01 = -two * t3 + three * t2;
    let h11 = t3 - t2;
    h00 * f0 + h10 * h * d0 + h01 * f1 + h11 * h * d1
}

/// Hermite interpolation over a sampled grid with known derivatives.
pub fn hermite_grid<T: Scalar>(xs: &[T], fs: &[T], ds: &[T], x: T) -> T {
    let i = bracket(xs, x);
    hermite(xs[i], xs[i + 1], fs[i], fs[i + 1], ds[i], ds[i + 1], x)
}
