//! Closed-form finite-N expectation values of one pair of characteristic
//! polynomials, D_N(z, w*) = ⟨det(z−J) det(w*−J*)⟩, for all three classes.
//!
//! Normalized values are evaluated in the e^{x}-factored Q-form
//!
//! * class A:    D_N/D_N(0,0) = e^{x} Q(N+1, x),
//! * class AI†:  e^{2x} (Q(N+1, 2x) − 2x/(N+1) · Q(N, 2x)),
//! * class AII†: e^{2x} Σ_j N!(2j)!/((2N)! j!) (4x)^{N−j} Q(2j+1, 2x),
//!
//! with x = z·w* (the average depends on z, w* only through the product,
//! which the API enforces by taking x). The Q-form avoids the catastrophic
//! cancellation the raw truncated-exponential form develops at large |x|,
//! and damped combinations (the sums without the e^{cx} prefactor) are
//! available for the scaling limits where the prefactor is removed anyway.

use crate::ensembles::EnsembleClass;
use crate::specfun::{
    factorial, ln_factorial, ln_gamma, upper_gamma_reg, upper_gamma_reg_ln,
};
use crate::{Complex, Error, Result};

const LN_MAX: f64 = 709.0;

/// One evaluated pair expectation.
#[derive(Debug, Clone, Copy)]
pub struct CharPolyValue {
    /// D_N(z, w*); infinite when it exceeds the linear range (see
    /// `log_scale` for the magnitude in that case).
    pub raw: Complex,
    /// D_N / D_N(0,0); infinite when it exceeds the linear range.
    pub normalized: Complex,
    /// ln |normalized|, always finite; log-magnitude channel for large N.
    pub log_scale: f64,
}

impl CharPolyValue {
    pub fn raw_overflowed(&self) -> bool {
        !self.raw.is_finite()
    }
}

/// D_N(0,0): N! (A), N!(N+1)/2^N (AI†), (2N)!/4^N (AII†).
pub fn dn_origin(class: EnsembleClass, n: usize) -> Result<f64> {
    let ln = dn_origin_ln(class, n);
    if ln > LN_MAX {
        return Err(Error::Overflow(format!(
            "D_N(0,0) for class {class}, N = {n} exceeds f64 (ln = {ln:.1}); use dn_origin_ln"
        )));
    }
    Ok(match class {
        EnsembleClass::A => factorial(n as u64),
        EnsembleClass::AIDag => factorial(n as u64) * (n as f64 + 1.0) / 2f64.powi(n as i32),
        EnsembleClass::AIIDag if 2 * n <= 170 => {
            factorial(2 * n as u64) / 4f64.powi(n as i32)
        }
        EnsembleClass::AIIDag => ln.exp(),
    })
}

/// ln D_N(0,0); finite for any N within f64's exponent range (N ≤ 10⁴ easily).
pub fn dn_origin_ln(class: EnsembleClass, n: usize) -> f64 {
    let nf = n as f64;
    match class {
        EnsembleClass::A => ln_factorial(n as u64),
        EnsembleClass::AIDag => {
            ln_factorial(n as u64) + (nf + 1.0).ln() - nf * std::f64::consts::LN_2
        }
        EnsembleClass::AIIDag => ln_factorial(2 * n as u64) - nf * (4.0f64).ln(),
    }
}

/// The damped normalized value e^{-cx} D_N/D_N(0,0) (c = 1 for A, 2
/// otherwise) for complex x; this is the combination whose scaling limits
/// the asymptotics module takes.
pub fn damped_pair(class: EnsembleClass, n: usize, x: Complex) -> Result<Complex> {
    let nf = n as f64;
    match class {
        EnsembleClass::A => upper_gamma_reg(nf + 1.0, x),
        EnsembleClass::AIDag => {
            let y = 2.0 * x;
            let q1 = upper_gamma_reg(nf + 1.0, y)?;
            let q0 = upper_gamma_reg(nf, y)?;
            Ok(q1 - y / (nf + 1.0) * q0)
        }
        EnsembleClass::AIIDag => aii_damped(n, x),
    }
}

/// Same damped combination for real x ≥ 0, evaluated term-by-term in the
/// log domain; stays accurate out to N in the thousands where coefficient
/// and Q factors separately overflow/underflow.
pub fn damped_pair_real(class: EnsembleClass, n: usize, x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain(format!(
            "damped_pair_real requires x >= 0, got {x}"
        )));
    }
    let nf = n as f64;
    match class {
        EnsembleClass::A => Ok(upper_gamma_reg(nf + 1.0, Complex::new(x, 0.0))?.re),
        EnsembleClass::AIDag => {
            let y = 2.0 * x;
            let q1 = upper_gamma_reg(nf + 1.0, Complex::new(y, 0.0))?.re;
            let q0 = upper_gamma_reg(nf, Complex::new(y, 0.0))?.re;
            Ok(q1 - y / (nf + 1.0) * q0)
        }
        EnsembleClass::AIIDag => aii_damped_real(n, x),
    }
}

/// Σ_j N!(2j)!/((2N)! j!) (4x)^{N−j} Q(2j+1, 2x), complex x, linear
/// arithmetic (desk-scale N).
fn aii_damped(n: usize, x: Complex) -> Result<Complex> {
    if x == Complex::ZERO {
        return Ok(Complex::ONE); // only j = N survives, Q(2N+1, 0) = 1
    }
    let ln_pref = |j: usize| -> f64 {
        ln_factorial(n as u64) + ln_factorial(2 * j as u64)
            - ln_factorial(2 * n as u64)
            - ln_factorial(j as u64)
    };
    let four_x = 4.0 * x;
    let ln_4x = four_x.ln();
    let mut sum = Complex::ZERO;
    for j in 0..=n {
        let q = upper_gamma_reg(2.0 * j as f64 + 1.0, 2.0 * x)?;
        let ln_coeff = ln_pref(j) + (n - j) as f64 * ln_4x.re;
        if ln_coeff > LN_MAX {
            return Err(Error::Overflow(format!(
                "AII† sum coefficient overflows at N = {n}, j = {j}"
            )));
        }
        let phase = Complex::new(0.0, (n - j) as f64 * ln_4x.im).exp();
        sum += ln_coeff.exp() * phase * q;
    }
    Ok(sum)
}

/// Real-x log-domain version; each term is exp(ln coeff + ln Q), all terms
/// positive, so the sum is cancellation-free.
fn aii_damped_real(n: usize, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(1.0);
    }
    let ln_4x = (4.0 * x).ln();
    let mut sum = 0.0f64;
    for j in 0..=n {
        let ln_coeff = ln_factorial(n as u64) + ln_factorial(2 * j as u64)
            - ln_factorial(2 * n as u64)
            - ln_factorial(j as u64)
            + (n - j) as f64 * ln_4x;
        let ln_q = upper_gamma_reg_ln(2.0 * j as f64 + 1.0, 2.0 * x)?;
        sum += (ln_coeff + ln_q).exp();
    }
    Ok(sum)
}

/// Exponential prefactor multiplicity: D_N/D_N(0,0) = e^{cx}·damped.
pub fn exp_factor(class: EnsembleClass) -> f64 {
    match class {
        EnsembleClass::A => 1.0,
        EnsembleClass::AIDag | EnsembleClass::AIIDag => 2.0,
    }
}

/// Closed-form D_N evaluated at x = z·w*.
pub fn dn_pair(class: EnsembleClass, n: usize, x: Complex) -> Result<CharPolyValue> {
    if n == 0 {
        return Err(Error::Domain("dn_pair requires N >= 1".into()));
    }
    let damped = damped_pair(class, n, x)?;
    let c = exp_factor(class);
    let ln_mag = c * x.re + damped.norm().ln();
    let normalized = if ln_mag > LN_MAX {
        Complex::new(f64::INFINITY, 0.0)
    } else {
        (c * x).exp() * damped
    };
    let ln_raw = ln_mag + dn_origin_ln(class, n);
    let raw = if ln_raw > LN_MAX {
        Complex::new(f64::INFINITY, 0.0)
    } else {
        normalized * dn_origin_ln(class, n).exp()
    };
    Ok(CharPolyValue {
        raw,
        normalized,
        log_scale: ln_mag,
    })
}

/// f_N(x) = e^{2x} Σ_{j=0}^N (N!/j!) (4x)^{N−j} Γ(2j+1, 2x); equals
/// 4^N·D_N^{AII†}(z,w*) at x = zw*. Linear arithmetic: overflows past
/// N ≈ 85 (use the damped forms beyond).
pub fn f_n_sum(n: usize, x: Complex) -> Result<Complex> {
    if n == 0 {
        return Err(Error::Domain("f_n_sum requires N >= 1".into()));
    }
    let damped = aii_damped(n, x)?;
    let ln_f0 = ln_factorial(2 * n as u64);
    let ln_mag = 2.0 * x.re + damped.norm().ln() + ln_f0;
    if ln_mag > LN_MAX {
        return Err(Error::Overflow(format!(
            "f_N overflows the linear range at N = {n} (ln = {ln_mag:.1}); use f_n_sum_ln"
        )));
    }
    Ok((2.0 * x).exp() * damped * ln_f0.exp())
}

/// ln f_N(x) for real x ≥ 0.
pub fn f_n_sum_ln(n: usize, x: f64) -> Result<f64> {
    Ok(2.0 * x + aii_damped_real(n, x)?.ln() + ln_factorial(2 * n as u64))
}

/// f_N(x) by tensor-product Gauss–Laguerre quadrature of
/// ∫₀^∞ du ∫₀^∞ dv e^{−u−v} (4xv + (2x+u)²)^N, real x ≥ 0.
///
/// The node count doubles until two consecutive evaluations agree to 1e−10
/// relative (the integrand is polynomial, so the first doubling already
/// confirms exactness).
pub fn f_n_quad(n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("f_n_quad requires N >= 1".into()));
    }
    if x < 0.0 {
        return Err(Error::Domain(format!(
            "f_n_quad integrates along the real path and needs x >= 0, got {x}"
        )));
    }
    let eval = |nodes: usize| -> f64 {
        let rule = crate::quadrature::gauss_laguerre(nodes);
        let mut total = 0.0;
        for (&u, &wu) in rule.nodes.iter().zip(&rule.weights) {
            let base = (2.0 * x + u) * (2.0 * x + u);
            let mut inner = 0.0;
            for (&v, &wv) in rule.nodes.iter().zip(&rule.weights) {
                inner += wv * (4.0 * x * v + base).powi(n as i32);
            }
            total += wu * inner;
        }
        total
    };
    let mut prev = eval(32);
    for nodes in [64usize, 128, 256] {
        let cur = eval(nodes);
        if (cur - prev).abs() <= 1e-10 * cur.abs() {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NoConvergence(format!(
        "f_n_quad({n}, {x}) did not stabilize under node doubling"
    )))
}

/// Rescaled characteristic polynomial
/// F_N(r) = e^{−d_N zw*} D_N(√d_N s z, √d_N s w*)/D_N(0,0) at zw* = r²:
///
/// * class A:    Q(N+1, Nr²),
/// * class AI†:  Q(N+1, Nr²) − Nr²/(N+1)·Q(N, Nr²),
/// * class AII†: Σ_j N!(2N−2j)!/((2N)!(N−j)!) (4Nr²)^j Q(2N−2j+1, 2Nr²).
pub fn rescaled_f(class: EnsembleClass, n: usize, r: f64) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::Domain(format!("rescaled_f requires r >= 0, got {r}")));
    }
    let nf = n as f64;
    match class {
        EnsembleClass::A | EnsembleClass::AIDag => {
            // the gamma argument is N r² for both classes
            let y = nf * r * r;
            let q1 = upper_gamma_reg(nf + 1.0, Complex::new(y, 0.0))?.re;
            if class == EnsembleClass::A {
                Ok(q1)
            } else {
                let q0 = upper_gamma_reg(nf, Complex::new(y, 0.0))?.re;
                Ok(q1 - y / (nf + 1.0) * q0)
            }
        }
        EnsembleClass::AIIDag => aii_damped_real(n, nf * r * r),
    }
}

/// Residual of the first-order differential equation satisfied by
/// F_N(x) = e^{−2x} f_N(x)/(2N)!:
///
/// |∂ₓF_N − ((2N+1)/(2x) − 1)·F_N + (2N+1)·Q(2N+2, 2x)/(2x)|,
///
/// with ∂ₓF_N computed analytically by term-wise differentiation.
pub fn ode_residual(n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("ode_residual requires N >= 1".into()));
    }
    if x <= 0.0 {
        return Err(Error::Domain(format!(
            "ode_residual requires x > 0, got {x}"
        )));
    }
    let nf = n as f64;
    let ln_4x = (4.0 * x).ln();
    let ln_2x = (2.0 * x).ln();
    let mut f = 0.0f64;
    let mut df = 0.0f64;
    for j in 0..=n {
        let jf = j as f64;
        let ln_coeff = ln_factorial(n as u64) + ln_factorial(2 * j as u64)
            - ln_factorial(2 * n as u64)
            - ln_factorial(j as u64);
        let ln_q = upper_gamma_reg_ln(2.0 * jf + 1.0, 2.0 * x)?;
        // term = coeff (4x)^{N-j} Q(2j+1, 2x)
        let term = (ln_coeff + (n - j) as f64 * ln_4x + ln_q).exp();
        f += term;
        // ∂ₓ[(4x)^{N-j}] Q + (4x)^{N-j} ∂ₓQ, with
        // ∂ₓ Q(2j+1, 2x) = −2 (2x)^{2j} e^{−2x} / Γ(2j+1)
        if j < n {
            df += (n - j) as f64 / x * term;
        }
        let ln_dq = 2.0 * jf * ln_2x - 2.0 * x - ln_gamma(2.0 * jf + 1.0);
        df -= 2.0 * (ln_coeff + (n - j) as f64 * ln_4x + ln_dq).exp();
    }
    let q_inhom = upper_gamma_reg_ln(2.0 * nf + 2.0, 2.0 * x)?.exp();
    let residual = df - ((2.0 * nf + 1.0) / (2.0 * x) - 1.0) * f
        + (2.0 * nf + 1.0) * q_inhom / (2.0 * x);
    Ok(residual.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn origin_values() {
        assert_eq!(dn_origin(EnsembleClass::A, 3).unwrap(), 6.0);
        assert_eq!(dn_origin(EnsembleClass::AIDag, 1).unwrap(), 1.0);
        assert_eq!(dn_origin(EnsembleClass::AIIDag, 1).unwrap(), 0.5);
        // linear overflow flagged, log variant stays finite
        assert!(dn_origin(EnsembleClass::A, 200).is_err());
        assert!(dn_origin_ln(EnsembleClass::A, 10_000).is_finite());
        assert!(dn_origin_ln(EnsembleClass::AIIDag, 10_000).is_finite());
        // log and linear agree where both exist
        for class in EnsembleClass::ALL {
            for n in [1usize, 2, 8, 40] {
                assert_relative_eq!(
                    dn_origin(class, n).unwrap().ln(),
                    dn_origin_ln(class, n),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn n1_normalized_oracles() {
        // hand Gaussian moments: A and AI† give 1 + x, AII† gives (x²+2x+½)/½
        let x = c(1.0, 0.0);
        let a = dn_pair(EnsembleClass::A, 1, x).unwrap();
        assert_relative_eq!(a.normalized.re, 2.0, max_relative = 1e-13);
        let ai = dn_pair(EnsembleClass::AIDag, 1, x).unwrap();
        assert_relative_eq!(ai.normalized.re, 2.0, max_relative = 1e-13);
        let aii = dn_pair(EnsembleClass::AIIDag, 1, x).unwrap();
        assert_relative_eq!(aii.normalized.re, 7.0, max_relative = 1e-13);

        // complex point: closed forms 1 + x and 2x² + 4x + 1
        let x = c(-0.3, 0.8);
        for class in [EnsembleClass::A, EnsembleClass::AIDag] {
            let v = dn_pair(class, 1, x).unwrap().normalized;
            assert!((v - (1.0 + x)).norm() < 1e-13, "{class}");
        }
        let v = dn_pair(EnsembleClass::AIIDag, 1, x).unwrap().normalized;
        let expect = 2.0 * x * x + 4.0 * x + 1.0;
        assert!((v - expect).norm() < 1e-13 * expect.norm());
    }

    #[test]
    fn normalized_matches_truncated_exponential_form() {
        // Q-form against the direct E_N-combination on a complex grid
        use crate::specfun::trunc_exp;
        for n in [1usize, 2, 5, 9] {
            let nf = n as f64;
            for &x in &[c(0.5, 0.0), c(2.0, -1.0), c(-1.2, 0.7), c(0.0, 3.0)] {
                let a = dn_pair(EnsembleClass::A, n, x).unwrap().normalized;
                let ea = trunc_exp(n as u32, x).unwrap();
                assert!((a - ea).norm() < 1e-12 * ea.norm().max(1.0), "A N={n} x={x}");

                let ai = dn_pair(EnsembleClass::AIDag, n, x).unwrap().normalized;
                let e1 = trunc_exp(n as u32, 2.0 * x).unwrap();
                let e0 = trunc_exp(n as u32 - 1, 2.0 * x).unwrap();
                let expect = e1 - 2.0 * x / (nf + 1.0) * e0;
                assert!(
                    (ai - expect).norm() < 1e-12 * expect.norm().max(1.0),
                    "AI N={n} x={x}"
                );

                let aii = dn_pair(EnsembleClass::AIIDag, n, x).unwrap().normalized;
                let mut expect = Complex::ZERO;
                for j in 0..=n {
                    let coeff = factorial(n as u64) * factorial(2 * j as u64)
                        / (factorial(2 * n as u64) * factorial(j as u64));
                    expect += coeff
                        * (4.0 * x).powu((n - j) as u32)
                        * trunc_exp(2 * j as u32, 2.0 * x).unwrap();
                }
                assert!(
                    (aii - expect).norm() < 1e-12 * expect.norm().max(1.0),
                    "AII N={n} x={x}"
                );
            }
        }
    }

    #[test]
    fn f_n_values() {
        assert_relative_eq!(
            f_n_sum(1, Complex::ZERO).unwrap().re,
            2.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            f_n_sum(4, Complex::ZERO).unwrap().re,
            factorial(8),
            max_relative = 1e-13
        );
        // f_1(x) = 4x² + 8x + 2 at x = 1
        assert_relative_eq!(f_n_sum(1, c(1.0, 0.0)).unwrap().re, 14.0, max_relative = 1e-13);
        // quadrature oracle
        assert_relative_eq!(f_n_quad(1, 0.0).unwrap(), 2.0, max_relative = 1e-12);
        assert!((f_n_quad(1, 1.0).unwrap() - 14.0).abs() < 1e-9);
        let s = f_n_sum(5, c(2.0, 0.0)).unwrap().re;
        let q = f_n_quad(5, 2.0).unwrap();
        assert_relative_eq!(s, q, max_relative = 1e-8);
        let s = f_n_sum(3, c(0.7, 0.0)).unwrap().re;
        let q = f_n_quad(3, 0.7).unwrap();
        assert_relative_eq!(s, q, max_relative = 1e-8);
    }

    #[test]
    fn f_n_quad_domain() {
        assert!(f_n_quad(1, -0.5).is_err());
        assert!(f_n_quad(0, 1.0).is_err());
    }

    #[test]
    fn qs_pair_ties_to_f_n() {
        // dn_pair(AII†, N, x)·dn_origin == f_n_sum(N, x)/4^N
        for n in [1usize, 3, 6, 10] {
            for &x in &[c(0.4, 0.0), c(1.0, 1.0), c(3.0, -0.5)] {
                let lhs = dn_pair(EnsembleClass::AIIDag, n, x).unwrap().normalized
                    * dn_origin(EnsembleClass::AIIDag, n).unwrap();
                let rhs = f_n_sum(n, x).unwrap() / 4f64.powi(n as i32);
                assert!(
                    (lhs - rhs).norm() <= 1e-10 * rhs.norm(),
                    "N={n} x={x}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn rescaled_values() {
        // Q(·, 0) = 1 for every class
        for class in EnsembleClass::ALL {
            assert_relative_eq!(rescaled_f(class, 17, 0.0).unwrap(), 1.0, epsilon = 1e-14);
        }
        // AI† at N = 50, r = 0.5: close to the global value 0.75
        let v = rescaled_f(EnsembleClass::AIDag, 50, 0.5).unwrap();
        assert!((v - 0.75).abs() < 5e-3, "AI {v}");
        // AII† at N = 50, r = 0.5: close to 4/3
        let v = rescaled_f(EnsembleClass::AIIDag, 50, 0.5).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 0.05, "AII {v}");
        assert!(rescaled_f(EnsembleClass::A, 10, -0.1).is_err());
    }

    #[test]
    fn damped_real_matches_complex_route() {
        for class in EnsembleClass::ALL {
            for n in [1usize, 4, 12] {
                for &x in &[0.0, 0.3, 2.0, 9.5] {
                    let lin = damped_pair(class, n, c(x, 0.0)).unwrap().re;
                    let real = damped_pair_real(class, n, x).unwrap();
                    assert_relative_eq!(lin, real, max_relative = 1e-11);
                }
            }
        }
    }

    #[test]
    fn ode_residual_small() {
        assert!(ode_residual(1, 0.5).unwrap() < 1e-10);
        assert!(ode_residual(10, 3.0).unwrap() < 1e-9);
        assert!(ode_residual(50, 45.0).unwrap() < 1e-8);
        assert!(ode_residual(1, 0.0).is_err());
    }
}
