//! Linearly coupled skew tent maps.
//!
//! The map and the coupling are generic over the scalar so that the exact
//! periodic orbits at `a = 1/2, ε = 1/4` can be iterated in rational
//! arithmetic; in `f64` those orbits drift off within a few periods because
//! the synchronized direction expands by a factor 2 per step.

use std::fmt::Debug;

use num_traits::Num;

use crate::error::{Error, Result};

pub trait MapScalar: Copy + PartialOrd + Num + Debug {}
impl<T: Copy + PartialOrd + Num + Debug> MapScalar for T {}

fn half<T: MapScalar>() -> T {
    T::one() / (T::one() + T::one())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TentParams<T = f64> {
    pub a: T,
    pub eps: T,
}

impl<T: MapScalar> TentParams<T> {
    pub fn new(a: T, eps: T) -> Result<Self> {
        if !(a > T::zero() && a < T::one()) {
            return Err(Error::InvalidInput(format!("skew parameter a={a:?} must lie in (0, 1)")));
        }
        if !(eps >= T::zero() && eps < half()) {
            return Err(Error::InvalidInput(format!("coupling eps={eps:?} must lie in [0, 1/2)")));
        }
        Ok(Self { a, eps })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledMapState<T = f64> {
    pub x: T,
    pub y: T,
}

impl<T: MapScalar> CoupledMapState<T> {
    pub fn new(x: T, y: T) -> Result<Self> {
        let unit = |v: T| v >= T::zero() && v <= T::one();
        if !unit(x) || !unit(y) {
            return Err(Error::InvalidInput(format!("state ({x:?}, {y:?}) outside [0,1]^2")));
        }
        Ok(Self { x, y })
    }

    /// Deviation from the synchronized state, `y - x`.
    pub fn theta(&self) -> T {
        self.y - self.x
    }
}

/// Skew tent map `f(a, x)`.
pub fn tent_f<T: MapScalar>(a: T, x: T) -> Result<T> {
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::InvalidInput(format!("tent map argument {x:?} outside [0,1]")));
    }
    if !(a > T::zero() && a < T::one()) {
        return Err(Error::InvalidInput(format!("skew parameter a={a:?} must lie in (0, 1)")));
    }
    Ok(tent_unchecked(a, x))
}

#[inline]
pub(crate) fn tent_unchecked<T: MapScalar>(a: T, x: T) -> T {
    if x <= a {
        x / a
    } else {
        (T::one() - x) / (T::one() - a)
    }
}

/// Slope of the tent map: `1/a` on `[0, a]`, `-1/(1-a)` on `(a, 1]`.
#[inline]
pub fn tent_derivative(a: f64, x: f64) -> f64 {
    if x <= a {
        1.0 / a
    } else {
        -1.0 / (1.0 - a)
    }
}

#[inline]
fn clamp_unit<T: MapScalar>(v: T) -> T {
    if v < T::zero() {
        T::zero()
    } else if v > T::one() {
        T::one()
    } else {
        v
    }
}

pub fn coupled_tent_step<T: MapScalar>(s: CoupledMapState<T>, p: &TentParams<T>) -> CoupledMapState<T> {
    let fx = tent_unchecked(p.a, s.x);
    let fy = tent_unchecked(p.a, s.y);
    let keep = T::one() - p.eps;
    // convex combinations; clamping only absorbs a final-ulp overshoot in f64
    CoupledMapState { x: clamp_unit(keep * fx + p.eps * fy), y: clamp_unit(p.eps * fx + keep * fy) }
}

/// Iterate `n_iter` steps from `init` and return `θ = y - x` after each
/// step, dropping the first `discard` values.
pub fn tent_theta_series(
    p: &TentParams<f64>,
    init: CoupledMapState<f64>,
    n_iter: usize,
    discard: usize,
) -> Result<Vec<f64>> {
    if discard >= n_iter {
        return Err(Error::InvalidInput(format!("discard {discard} must be below iterations {n_iter}")));
    }
    let mut s = init;
    let mut out = Vec::with_capacity(n_iter - discard);
    for i in 0..n_iter {
        s = coupled_tent_step(s, p);
        if i >= discard {
            out.push(s.theta());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    type Q = Ratio<i64>;

    fn q(n: i64, d: i64) -> Q {
        Ratio::new(n, d)
    }

    #[test]
    fn tent_examples() {
        assert_eq!(tent_f(0.5, 0.25).unwrap(), 0.5);
        assert_eq!(tent_f(0.5, 0.5).unwrap(), 1.0);
        assert!((tent_f(0.3f64, 0.65).unwrap() - 0.5).abs() < 1e-15);
        assert!(tent_f(0.3, 1.2).is_err());
        assert!(tent_f(0.3, -0.1).is_err());
        assert!(tent_f(1.0, 0.5).is_err());
    }

    #[test]
    fn params_validated() {
        assert!(TentParams::new(0.3, 0.5).is_err());
        assert!(TentParams::new(0.0, 0.1).is_err());
        assert!(TentParams::new(0.3, -0.1).is_err());
        assert!(TentParams::new(0.3, 0.0).is_ok());
        assert!(CoupledMapState::new(0.3, 1.1).is_err());
    }

    #[test]
    fn diagonal_is_invariant() {
        let p = TentParams::new(0.3, 0.2).unwrap();
        let mut s = CoupledMapState::new(0.123, 0.123).unwrap();
        for _ in 0..1000 {
            let v = s.x;
            s = coupled_tent_step(s, &p);
            assert_eq!(s.x, s.y);
            assert!((s.x - tent_f(0.3f64, v).unwrap()).abs() <= f64::EPSILON);
        }
    }

    fn closes_exactly(x0: Q, y0: Q, period: usize) {
        let p = TentParams::new(q(1, 2), q(1, 4)).unwrap();
        let start = CoupledMapState::new(x0, y0).unwrap();
        let mut s = start;
        for step in 1..=period {
            s = coupled_tent_step(s, &p);
            if step < period {
                assert_ne!(s, start, "returned early at step {step}");
            }
        }
        assert_eq!(s, start);
    }

    #[test]
    fn period_20_orbit_closes() {
        closes_exactly(q(46, 100), q(1, 2), 20);
    }

    #[test]
    fn period_100_orbit_closes() {
        closes_exactly(q(44, 1000), q(52, 1000), 100);
    }

    #[test]
    fn period_20_orbit_closes_in_f64() {
        let p = TentParams::new(0.5f64, 0.25).unwrap();
        let mut s = CoupledMapState::new(0.46f64, 0.5).unwrap();
        for _ in 0..20 {
            s = coupled_tent_step(s, &p);
        }
        assert!((s.x - 0.46).abs() < 1e-10 && (s.y - 0.5).abs() < 1e-10);
    }

    #[test]
    fn unit_square_preserved_long_run() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut s = CoupledMapState::new(0.2, 0.9).unwrap();
        let mut p = TentParams::new(0.3, 0.1).unwrap();
        for i in 0..1_000_000 {
            if i % 1000 == 0 {
                p = TentParams::new(rng.random_range(0.01..0.99), rng.random_range(0.0..0.4999)).unwrap();
            }
            s = coupled_tent_step(s, &p);
            assert!((0.0..=1.0).contains(&s.x) && (0.0..=1.0).contains(&s.y));
        }
    }

    proptest! {
        #[test]
        fn step_stays_in_unit_square(a in 0.001f64..0.999, eps in 0.0f64..0.4999, x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
            let p = TentParams::new(a, eps).unwrap();
            let mut s = CoupledMapState::new(x, y).unwrap();
            for _ in 0..50 {
                s = coupled_tent_step(s, &p);
                prop_assert!((0.0..=1.0).contains(&s.x) && (0.0..=1.0).contains(&s.y));
            }
        }
    }
}
