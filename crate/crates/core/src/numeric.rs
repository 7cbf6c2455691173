use num_complex::Complex64;

/// Neumaier (improved Kahan) compensated accumulator.
///
/// Used for the double sums of the moment expansion so the result does not
/// depend on summation order beyond rounding of the final value.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of complex terms, real and imaginary parts kept separately.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub(crate) fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub(crate) fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Central difference of fourth order. The step suits the smooth,
/// O(1)-period functions of this crate.
pub(crate) fn derivative<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    const H: f64 = 1e-3;
    (f(x - 2.0 * H) - 8.0 * f(x - H) + 8.0 * f(x + H) - f(x + 2.0 * H)) / (12.0 * H)
}

/// Wraps an angle into `[-π, π)`.
pub(crate) fn wrap_angle(phi: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let w = (phi + PI).rem_euclid(TAU) - PI;
    if w >= PI {
        w - TAU
    } else {
        w
    }
}

/// Distance between two angles on the circle.
pub(crate) fn circular_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// Bisection for a sign change of `f` on `[a, b]`; returns the midpoint of
/// the final bracket once it is narrower than `tol`.
pub(crate) fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Golden-section minimization of `f` on `[a, b]`.
pub(crate) fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let terms = [1.0, 1e100, 1.0, -1e100];
        let s: NeumaierSum = terms.into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn wrap_angle_range() {
        assert!((wrap_angle(PI) + PI).abs() < 1e-15);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_angle(-PI) + PI).abs() < 1e-15);
        assert!(circular_distance(PI - 1e-9, -PI + 1e-9) < 3e-9);
    }

    #[test]
    fn bisect_and_golden() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        let m = golden_min(|x| (x - 0.3).powi(2), -1.0, 1.0, 1e-10);
        assert!((m - 0.3).abs() < 1e-9);
        assert!((derivative(f64::sin, 0.4) - 0.4f64.cos()).abs() < 1e-11);
    }
}
