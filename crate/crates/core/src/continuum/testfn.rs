//! Closed-form test functions on the line.

use std::f64::consts::PI;

use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// `A·exp(−(t−c)²/(2w²))`.
    Gaussian,
    /// `A·(1 + cos(π(t−c)/w))/2` on `|t−c| < w`, zero elsewhere.
    RaisedCosine,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestFunction {
    pub family: Family,
    pub center: f64,
    pub width: f64,
    pub amplitude: C64,
}

/// Gaussians are treated as supported in `center ± 9·width`, where they
/// have fallen below `3e-18` of their peak.
pub const GAUSSIAN_RADIUS: f64 = 9.0;

fn sinc_scaled(a: f64, w: f64) -> f64 {
    // sin(a·w)/a, continuous at a = 0.
    if (a * w).abs() < 1e-8 {
        w
    } else {
        (a * w).sin() / a
    }
}

impl TestFunction {
    pub fn gaussian(center: f64, width: f64, amplitude: C64) -> Self {
        TestFunction {
            family: Family::Gaussian,
            center,
            width,
            amplitude,
        }
    }

    pub fn raised_cosine(center: f64, width: f64, amplitude: C64) -> Self {
        TestFunction {
            family: Family::RaisedCosine,
            center,
            width,
            amplitude,
        }
    }

    /// `|f(t)| ≤ |A|·decay_bound(t)`.
    pub fn decay_bound(&self, t: f64) -> f64 {
        let r = (t - self.center) / self.width;
        match self.family {
            Family::Gaussian => (-0.5 * r * r).exp(),
            Family::RaisedCosine => {
                if r.abs() < 1.0 {
                    0.5 * (1.0 + (PI * r).cos())
                } else {
                    0.0
                }
            }
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> C64 {
        self.amplitude * self.decay_bound(t)
    }

    /// Half-width of the effective support.
    pub fn radius(&self) -> f64 {
        match self.family {
            Family::Gaussian => GAUSSIAN_RADIUS * self.width,
            Family::RaisedCosine => self.width,
        }
    }

    pub fn window(&self) -> (f64, f64) {
        (self.center - self.radius(), self.center + self.radius())
    }

    /// `∫ f(t) dt`.
    pub fn integral(&self) -> C64 {
        match self.family {
            Family::Gaussian => self.amplitude * self.width * (2.0 * PI).sqrt(),
            Family::RaisedCosine => self.amplitude * self.width,
        }
    }

    /// `∫ f(t)·e^{−iνt} dt`.
    pub fn fourier(&self, nu: f64) -> C64 {
        let shift = C64::from_polar(1.0, -nu * self.center);
        let w = self.width;
        let core = match self.family {
            Family::Gaussian => w * (2.0 * PI).sqrt() * (-0.5 * nu * nu * w * w).exp(),
            Family::RaisedCosine => {
                let k = PI / w;
                sinc_scaled(nu, w) + 0.5 * (sinc_scaled(nu - k, w) + sinc_scaled(nu + k, w))
            }
        };
        self.amplitude * shift * core
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::grid::trapezoid;

    #[test]
    fn closed_forms_match_quadrature() {
        let amp = C64::new(0.7, -0.4);
        for f in [TestFunction::gaussian(0.3, 0.6, amp), TestFunction::raised_cosine(-0.2, 0.9, amp)] {
            let (lo, hi) = f.window();
            let int = trapezoid(lo, hi, 1e-4, |t| f.eval(t));
            assert!((int - f.integral()).norm() < 1e-8, "{f:?}");
            for nu in [0.0, 1.0, 2.5] {
                let ft = trapezoid(lo, hi, 1e-4, |t| f.eval(t) * C64::from_polar(1.0, -nu * t));
                assert!((ft - f.fourier(nu)).norm() < 1e-8, "{f:?} nu={nu}");
            }
        }
    }

    #[test]
    fn decay_bounds() {
        let g = TestFunction::gaussian(0.0, 0.5, C64::new(2.0, 0.0));
        assert!(g.eval(g.radius()).norm() < 3e-18 * 2.0);
        let b = TestFunction::raised_cosine(1.0, 0.5, C64::new(1.0, 0.0));
        assert_eq!(b.eval(1.6), C64::new(0.0, 0.0));
        assert_eq!(b.eval(1.0), C64::new(1.0, 0.0));
    }
}
