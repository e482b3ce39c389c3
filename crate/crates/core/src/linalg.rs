//! Dense complex LU with partial pivoting, exposing determinants in both
//! linear and overflow-safe (log-magnitude, unit-phase) form.

use crate::{CMatrix, Complex};

/// Determinant in factored form: det = exp(ln_abs) · phase, |phase| = 1.
///
/// Accumulating the magnitude in the log domain keeps determinant products
/// of matrices with dimension in the hundreds representable.
#[derive(Debug, Clone, Copy)]
pub struct LogDet {
    pub ln_abs: f64,
    pub phase: Complex,
}

impl LogDet {
    pub const ONE: LogDet = LogDet {
        ln_abs: 0.0,
        phase: Complex::ONE,
    };

    pub fn zero() -> LogDet {
        LogDet {
            ln_abs: f64::NEG_INFINITY,
            phase: Complex::ZERO,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ln_abs == f64::NEG_INFINITY
    }

    /// Linear value; ±inf on overflow.
    pub fn value(&self) -> Complex {
        if self.is_zero() {
            Complex::ZERO
        } else {
            self.ln_abs.exp() * self.phase
        }
    }

    /// Product of two factored determinants.
    pub fn mul(&self, other: &LogDet) -> LogDet {
        if self.is_zero() || other.is_zero() {
            return LogDet::zero();
        }
        let raw = self.phase * other.phase;
        LogDet {
            ln_abs: self.ln_abs + other.ln_abs + raw.norm().ln(),
            phase: raw / raw.norm(),
        }
    }

    /// Complex conjugate (det of the entrywise-conjugated matrix).
    pub fn conj(&self) -> LogDet {
        LogDet {
            ln_abs: self.ln_abs,
            phase: self.phase.conj(),
        }
    }

    /// Integer power.
    pub fn powi(&self, n: i32) -> LogDet {
        if self.is_zero() {
            return if n == 0 { LogDet::ONE } else { LogDet::zero() };
        }
        LogDet {
            ln_abs: self.ln_abs * n as f64,
            phase: self.phase.powi(n),
        }
    }

    /// Principal-branch complex power: exp(p · (ln_abs + i arg(phase))).
    ///
    /// arg is taken in (-π, π]; `branch_risk` reports how close the phase
    /// sits to the cut (1 = on the cut, 0 = far away).
    pub fn powf_principal(&self, p: f64) -> (Complex, f64) {
        let arg = self.phase.arg();
        let risk = 1.0 - (std::f64::consts::PI - arg.abs()) / std::f64::consts::PI;
        let ln = Complex::new(self.ln_abs, arg) * p;
        (ln.exp(), risk)
    }

    /// ln of the complex determinant with principal-branch imaginary part.
    pub fn ln(&self) -> Complex {
        Complex::new(self.ln_abs, self.phase.arg())
    }
}

/// LU factorization with partial pivoting, returning the determinant in
/// factored form. O(n³).
pub fn lu_logdet(m: &CMatrix) -> LogDet {
    debug_assert_eq!(m.nrows(), m.ncols());
    let n = m.nrows();
    let mut a = m.clone();
    let mut ln_abs = 0.0f64;
    let mut phase = Complex::ONE;
    for k in 0..n {
        let mut p = k;
        let mut best = a[(k, k)].norm();
        for i in (k + 1)..n {
            let v = a[(i, k)].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return LogDet::zero();
        }
        if p != k {
            a.swap_rows(p, k);
            phase = -phase;
        }
        let piv = a[(k, k)];
        ln_abs += piv.norm().ln();
        phase *= piv / piv.norm();
        for i in (k + 1)..n {
            let f = a[(i, k)] / piv;
            a[(i, k)] = f;
            for j in (k + 1)..n {
                let sub = f * a[(k, j)];
                a[(i, j)] -= sub;
            }
        }
    }
    LogDet { ln_abs, phase }
}

/// Plain complex determinant (linear arithmetic).
pub fn lu_det(m: &CMatrix) -> Complex {
    lu_logdet(m).value()
}

/// det(s·I − M).
pub fn char_det(s: Complex, m: &CMatrix) -> LogDet {
    let n = m.nrows();
    let mut a = -m.clone();
    for i in 0..n {
        a[(i, i)] += s;
    }
    lu_logdet(&a)
}

/// Vandermonde product Δ(x) = Π_{a<b} (x_b − x_a).
pub fn vandermonde(xs: &[Complex]) -> Complex {
    let mut p = Complex::ONE;
    for a in 0..xs.len() {
        for b in (a + 1)..xs.len() {
            p *= xs[b] - xs[a];
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn logdet_matches_known_determinant() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(3.0, 1.0)],
        );
        // det = (1+i)(3+i) - 2(-i) = 2+4i + 2i = 2 + 6i
        let d = lu_logdet(&m);
        assert!((d.value() - c(2.0, 6.0)).norm() < 1e-13);
        assert!((d.phase.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn logdet_scales_without_overflow() {
        // diag(1e200, 1e200, 1e200): det = 1e600 overflows linear f64
        let mut m = CMatrix::zeros(3, 3);
        for i in 0..3 {
            m[(i, i)] = c(1e200, 0.0);
        }
        let d = lu_logdet(&m);
        assert!((d.ln_abs - 600.0 * std::f64::consts::LN_10).abs() < 1e-9);
        assert!(d.value().re.is_infinite());
    }

    #[test]
    fn char_det_at_identity_shift() {
        let m = CMatrix::zeros(2, 2);
        let d = char_det(c(3.0, 0.0), &m);
        assert!((d.value() - c(9.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn vandermonde_small() {
        let v = vandermonde(&[c(0.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)]);
        // (1-0)(3-0)(3-1) = 6
        assert!((v - c(6.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn principal_power_half() {
        let d = LogDet {
            ln_abs: 2.0f64.ln(),
            phase: Complex::from_polar(1.0, 1.0),
        };
        let (v, risk) = d.powf_principal(0.5);
        let expect = Complex::from_polar(2.0f64.sqrt(), 0.5);
        assert!((v - expect).norm() < 1e-13);
        assert!(risk < 0.7);
    }
}
