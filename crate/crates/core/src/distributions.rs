//! The triangular distribution used for every behavioral deviation.

use crate::error::ModelError;

/// Triangular distribution on `[lower, upper]` with peak at `mode`.
///
/// A collapsed support (`lower == upper`) is a valid point mass. This is what a
/// norm that has decayed to zero produces, and the simulation keeps running.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triangular {
    lower: f64,
    mode: f64,
    upper: f64,
}

impl Triangular {
    /// Builds a distribution with `lower <= mode <= upper` and `lower >= 0`.
    pub fn new(lower: f64, mode: f64, upper: f64) -> Result<Self, ModelError> {
        if !lower.is_finite() || lower < 0.0 {
            return Err(ModelError::InvalidDistribution {
                param: "lower",
                reason: format!("lower bound must be a finite non-negative number of hours, got {lower}"),
            });
        }
        if !upper.is_finite() || upper < lower {
            return Err(ModelError::InvalidDistribution {
                param: "upper",
                reason: format!("upper bound {upper} is below lower bound {lower}"),
            });
        }
        if !mode.is_finite() || mode < lower || mode > upper {
            return Err(ModelError::InvalidDistribution {
                param: "mode",
                reason: format!("mode {mode} lies outside [{lower}, {upper}]"),
            });
        }
        Ok(Triangular { lower, mode, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn mode(&self) -> f64 {
        self.mode
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn is_degenerate(&self) -> bool {
        self.lower == self.upper
    }

    /// Density at `x`. Zero outside the support; a point mass has density zero
    /// everywhere since its mass is not representable as a density.
    pub fn pdf(&self, x: f64) -> f64 {
        let (a, c, b) = (self.lower, self.mode, self.upper);
        if self.is_degenerate() || x < a || x > b {
            return 0.0;
        }
        if x < c {
            2.0 * (x - a) / ((b - a) * (c - a))
        } else if x == c {
            2.0 / (b - a)
        } else {
            2.0 * (b - x) / ((b - a) * (b - c))
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let (a, c, b) = (self.lower, self.mode, self.upper);
        if x < a {
            0.0
        } else if x >= b {
            1.0
        } else if x <= c {
            (x - a) * (x - a) / ((b - a) * (c - a))
        } else {
            1.0 - (b - x) * (b - x) / ((b - a) * (b - c))
        }
    }

    /// Inverse-CDF transform of one uniform draw `u` in `[0, 1]`.
    pub fn sample(&self, u: f64) -> f64 {
        let (a, c, b) = (self.lower, self.mode, self.upper);
        if self.is_degenerate() {
            return a;
        }
        let width = b - a;
        let x = if u * width < c - a {
            a + (u * width * (c - a)).sqrt()
        } else {
            b - ((1.0 - u) * width * (b - c)).sqrt()
        };
        x.clamp(a, b)
    }

    pub fn mean(&self) -> f64 {
        (self.lower + self.mode + self.upper) / 3.0
    }

    pub fn variance(&self) -> f64 {
        let (a, c, b) = (self.lower, self.mode, self.upper);
        (a * a + b * b + c * c - a * b - a * c - b * c) / 18.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(a: f64, c: f64, b: f64) -> Triangular {
        Triangular::new(a, c, b).unwrap()
    }

    #[test]
    fn symmetric_baseline_is_valid() {
        let t = 10.0 / 3.0;
        let d = tri(0.0, t, 2.0 * t);
        assert!((d.mean() - t).abs() < 1e-12);
        assert_eq!(d.sample(0.5), t);
    }

    #[test]
    fn rejects_bad_parameters() {
        match Triangular::new(1.0, 0.0, 2.0) {
            Err(ModelError::InvalidDistribution { param, .. }) => assert_eq!(param, "mode"),
            other => panic!("unexpected {other:?}"),
        }
        match Triangular::new(-0.5, 0.0, 2.0) {
            Err(ModelError::InvalidDistribution { param, .. }) => assert_eq!(param, "lower"),
            other => panic!("unexpected {other:?}"),
        }
        match Triangular::new(2.0, 2.0, 1.0) {
            Err(ModelError::InvalidDistribution { param, .. }) => assert_eq!(param, "upper"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Triangular::new(0.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn degenerate_point_mass() {
        let d = tri(0.0, 0.0, 0.0);
        assert!(d.is_degenerate());
        for u in [0.0, 0.3, 0.999, 1.0] {
            assert_eq!(d.sample(u), 0.0);
        }
        assert_eq!(d.mean(), 0.0);
        assert_eq!(d.pdf(0.0), 0.0);
        assert_eq!(d.pdf(1.0), 0.0);
    }

    #[test]
    fn pdf_values() {
        let d = tri(0.0, 5.0, 10.0);
        assert!((d.pdf(5.0) - 0.2).abs() < 1e-15);
        assert_eq!(d.pdf(-1.0), 0.0);
        assert_eq!(d.pdf(10.5), 0.0);
        let skew = tri(0.0, 3.0, 9.0);
        assert!((skew.pdf(1.0) - 2.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn pdf_matches_numerical_cdf_derivative() {
        let d = tri(0.0, 3.0, 9.0);
        let h = 1e-6;
        for x in [0.5, 1.0, 2.5, 4.0, 7.0, 8.5] {
            let fd = (d.cdf(x + h) - d.cdf(x - h)) / (2.0 * h);
            assert!((fd - d.pdf(x)).abs() < 1e-6, "x={x}");
        }
    }

    #[test]
    fn sample_examples() {
        assert_eq!(tri(0.0, 5.0, 10.0).sample(0.5), 5.0);
        // sqrt(0.1 * 9 * 3)
        let x = tri(0.0, 3.0, 9.0).sample(0.1);
        assert!((x - 1.643_167_672_515_498).abs() < 1e-12);
        assert!((x - 1.6432).abs() < 1e-4);
    }

    #[test]
    fn sample_is_inverse_of_cdf() {
        let d = tri(1.0, 2.5, 6.0);
        for i in 0..=100 {
            let u = i as f64 / 100.0;
            assert!((d.cdf(d.sample(u)) - u).abs() < 1e-12);
        }
    }

    #[test]
    fn means() {
        assert_eq!(tri(0.0, 5.0, 10.0).mean(), 5.0);
        assert_eq!(tri(0.0, 3.0, 9.0).mean(), 4.0);
    }

    #[test]
    fn mode_at_edges() {
        let left = tri(1.0, 1.0, 5.0);
        assert_eq!(left.sample(0.0), 1.0);
        assert_eq!(left.sample(1.0), 5.0);
        assert!((left.pdf(1.0) - 0.5).abs() < 1e-15);
        let right = tri(1.0, 5.0, 5.0);
        assert_eq!(right.sample(1.0), 5.0);
        assert!((right.pdf(5.0) - 0.5).abs() < 1e-15);
    }
}
