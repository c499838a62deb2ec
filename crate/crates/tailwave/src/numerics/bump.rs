//! The C-infinity compactly supported bump profile
//! x -> e^4 exp(-1/(x(1-x))) on (0, 1), zero outside.
//!
//! The e^4 factor normalises the peak to exactly 1 at x = 1/2.

use super::Scalar;

/// Profile value; identically zero for x outside (0, 1).
pub fn profile<T: Scalar>(x: T) -> T {
    if x <= T::zero() || x >= T::one() {
        return T::zero();
    }
    let g = T::one() / (x * (T::one() - x));
    (T::c(4.0) - g).exp()
}

/// d/dx of [`profile`].
pub fn profile_d1<T: Scalar>(x: T) -> T {
    if x <= T::zero() || x >= T::one() {
        return T::zero();
    }
    let s = x * (T::one() - x);
    let g = T::one() / s;
    let dg = (T::one() - T::c(2.0) * x) / (s * s);
    (T::c(4.0) - g).exp() * dg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_is_one() {
        assert!((profile(0.5f64) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn compact_support_is_exact() {
        assert_eq!(profile(0.0f64), 0.0);
        assert_eq!(profile(1.0f64), 0.0);
        assert_eq!(profile(-0.3f64), 0.0);
        assert_eq!(profile(1.3f64), 0.0);
        assert_eq!(profile_d1(0.0f64), 0.0);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for &x in &[0.2f64, 0.5, 0.77] {
            let fd = (profile(x + h) - profile(x - h)) / (2.0 * h);
            assert!((profile_d1(x) - fd).abs() < 1e-8, "x = {x}");
        }
    }
}
