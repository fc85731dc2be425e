use crate::error::{ensure, Result};
use crate::scalar::Real;

/// A segment `[a, b]` of the line, or the half-line `[a, +inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    a: T,
    b: T,
    half_line: bool,
}

impl<T: Real> Interval<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        ensure!(a.is_finite() && b.is_finite(), Domain, "interval ends must be finite, got [{a}, {b}]");
        ensure!(a < b, Domain, "interval needs a < b, got [{a}, {b}]");
        Ok(Self { a, b, half_line: false })
    }

    pub fn half_line(a: T) -> Result<Self> {
        ensure!(a.is_finite(), Domain, "half-line start must be finite");
        Ok(Self { a, b: T::infinity(), half_line: true })
    }

    /// The canonical cell `[0, pi]`.
    pub fn unit_cell() -> Self {
        Self { a: T::zero(), b: T::PI(), half_line: false }
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn is_half_line(&self) -> bool {
        self.half_line
    }

    pub fn length(&self) -> T {
        self.b - self.a
    }

    pub fn midpoint(&self) -> T {
        (self.a + self.b) / T::of(2.0)
    }

    /// Closed membership test.
    pub fn contains(&self, x: T) -> bool {
        x >= self.a && x <= self.b
    }

    pub fn overlaps(&self, other: &Interval<T>) -> bool {
        self.a < other.b && other.a < self.b
    }

    pub fn shifted(&self, s: T) -> Self {
        Self { a: self.a + s, b: self.b + s, half_line: self.half_line }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(0.0, f64::NAN).is_err());
    }

    #[test]
    fn half_line_has_infinite_end() {
        let r = Interval::half_line(0.0_f64).unwrap();
        assert!(r.is_half_line());
        assert!(r.b().is_infinite());
        assert!(r.contains(1e300));
        assert!(!r.contains(-1e-300));
    }

    #[test]
    fn overlap_is_open() {
        let i = Interval::new(0.0, 1.0).unwrap();
        assert!(i.overlaps(&Interval::new(0.5, 2.0).unwrap()));
        assert!(!i.overlaps(&Interval::new(1.0, 2.0).unwrap()));
    }
}
