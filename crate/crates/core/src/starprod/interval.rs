use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A closed interval of reals with endpoints widened outward after each
/// operation, so that the exact result of interval arithmetic on the
/// inputs is always contained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

/// Relative widening applied after every operation to cover rounding.
const SLACK: f64 = 4.0 * f64::EPSILON;

fn widen(lo: f64, hi: f64) -> Interval {
    let pad = SLACK * lo.abs().max(hi.abs()) + f64::MIN_POSITIVE;
    Interval {
        lo: lo - pad,
        hi: hi + pad,
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// `[mean − kσ, mean + kσ]`.
    pub fn around(mean: f64, stderr: f64, k: f64) -> Self {
        widen(mean - k * stderr, mean + k * stderr)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn scale(self, c: f64) -> Self {
        let (a, b) = (self.lo * c, self.hi * c);
        widen(a.min(b), a.max(b))
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        widen(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        widen(self.lo - o.hi, self.hi - o.lo)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        widen(lo, hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6e}, {:.6e}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_contains_pointwise_results() {
        let a = Interval::new(-1.0, 2.0);
        let b = Interval::new(3.0, 4.0);
        for x in [-1.0, 0.0, 0.5, 2.0] {
            for y in [3.0, 3.5, 4.0] {
                assert!((a + b).contains(x + y));
                assert!((a - b).contains(x - y));
                assert!((a * b).contains(x * y));
                assert!(a.scale(-2.5).contains(-2.5 * x));
            }
        }
        assert!((a * b).contains(-4.0) && (a * b).contains(8.0));
        assert!(!(b * b).contains_zero());
        assert_eq!(-b, Interval::new(-4.0, -3.0));
    }

    #[test]
    fn around_is_symmetric() {
        let i = Interval::around(0.5, 0.01, 3.0);
        assert!(i.contains(0.47) && i.contains(0.53));
        assert!(!i.contains(0.46));
    }
}
