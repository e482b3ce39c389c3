//! Large-N limits of the pair expectation: the global shape on the whole
//! support, the local bulk constant, and the local edge profiles with their
//! tail expansions, plus finite-N → limit convergence scans.
//!
//! Scaling conventions (d_N and s per [`EnsembleClass`]):
//!
//! * global: F_N(r) = e^{−d_N zw*} D_N(√d_N s z, √d_N s w*)/D_N(0,0) at zw* = r²,
//! * edge:   z = √d_N s z0 + sχ, w* = √d_N s z0* + sη*, |z0| = 1,
//!           y = (z0*χ + z0η*)/√2,
//! * bulk:   same zoom at |z0| < 1.
//!
//! The edge and bulk limits depend on (χ, η*) only through y, which the API
//! makes structural by taking y directly; shifting (χ, η*) along the
//! boundary never enters.

use crate::charpoly::damped_pair_real;
use crate::ensembles::EnsembleClass;
use crate::specfun::{erfc_c, erfi, owen_tau};
use crate::{Complex, Error, Result};

/// Scaling regime of a spectral zoom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Global,
    Bulk,
    Edge,
}

/// A local zoom frame: base point z0 with fluctuation sources (χ, η*).
#[derive(Debug, Clone)]
pub struct SpectralFrame {
    regime: Regime,
    z0: Complex,
    chi: Vec<Complex>,
    eta_star: Vec<Complex>,
}

impl SpectralFrame {
    pub fn new(
        regime: Regime,
        z0: Complex,
        chi: Vec<Complex>,
        eta_star: Vec<Complex>,
    ) -> Result<Self> {
        if chi.len() != eta_star.len() || chi.is_empty() {
            return Err(Error::ShapeMismatch(format!(
                "chi and eta_star must have equal nonzero length, got {} and {}",
                chi.len(),
                eta_star.len()
            )));
        }
        match regime {
            Regime::Edge => {
                if (z0.norm() - 1.0).abs() > 1e-12 {
                    return Err(Error::Domain(format!(
                        "edge frame requires |z0| = 1, got |z0| = {}",
                        z0.norm()
                    )));
                }
            }
            Regime::Bulk => {
                if z0.norm() >= 1.0 {
                    return Err(Error::Domain(format!(
                        "bulk frame requires |z0| < 1, got |z0| = {}",
                        z0.norm()
                    )));
                }
            }
            Regime::Global => {}
        }
        Ok(Self {
            regime,
            z0,
            chi,
            eta_star,
        })
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn z0(&self) -> Complex {
        self.z0
    }

    pub fn k(&self) -> usize {
        self.chi.len()
    }

    pub fn chi(&self) -> &[Complex] {
        &self.chi
    }

    pub fn eta_star(&self) -> &[Complex] {
        &self.eta_star
    }

    /// y_j = (z0* χ_j + z0 η*_j)/√2, recomputed on every call.
    pub fn y(&self, j: usize) -> Complex {
        (self.z0.conj() * self.chi[j] + self.z0 * self.eta_star[j]) / std::f64::consts::SQRT_2
    }

    pub fn y_vec(&self) -> Vec<Complex> {
        (0..self.k()).map(|j| self.y(j)).collect()
    }
}

/// Global limit of F_N(r): Θ(1−r) (A), (1−r²)Θ(1−r) (AI†),
/// Θ(1−r)/(1−r²) (AII†). At r = 1 the inside limit is returned for A and
/// AI†; class AII† has a pole there, which is signalled.
pub fn global_limit(class: EnsembleClass, r: f64) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::Domain(format!("global_limit needs r >= 0, got {r}")));
    }
    match class {
        EnsembleClass::A => Ok(if r <= 1.0 { 1.0 } else { 0.0 }),
        EnsembleClass::AIDag => Ok(if r <= 1.0 { 1.0 - r * r } else { 0.0 }),
        EnsembleClass::AIIDag => {
            if r > 1.0 {
                Ok(0.0)
            } else if r == 1.0 {
                Err(Error::Pole(
                    "global limit of class AII diverges as 1/(1-r²) at r = 1".into(),
                ))
            } else {
                Ok(1.0 / (1.0 - r * r))
            }
        }
    }
}

/// Bulk limit: 1 (A), 1−|z0|² (AI†), 1/(1−|z0|²) (AII†) for |z0| < 1.
pub fn bulk_limit(class: EnsembleClass, z0: Complex) -> Result<f64> {
    let r2 = z0.norm_sqr();
    if r2 >= 1.0 {
        return Err(Error::Domain(format!(
            "bulk_limit requires |z0| < 1, got |z0| = {}",
            r2.sqrt()
        )));
    }
    Ok(match class {
        EnsembleClass::A => 1.0,
        EnsembleClass::AIDag => 1.0 - r2,
        EnsembleClass::AIIDag => 1.0 / (1.0 - r2),
    })
}

/// Edge limit as a function of y = (z0*χ + z0η*)/√2:
///
/// * class A:    ½ erfc(y),
/// * class AI†:  e^{−y²}/√(2π) − (y/√2) erfc(y),
/// * class AII†: (−(√π/4) erfc(y) erfi(y/√2) − i√π T(√2 y, i/√2)) e^{−y²/2}.
///
/// For real y the AII† value is real: the imaginary parts of the two
/// complex-valued terms cancel.
pub fn edge_limit(class: EnsembleClass, y: Complex) -> Result<Complex> {
    let pi = std::f64::consts::PI;
    match class {
        EnsembleClass::A => Ok(0.5 * erfc_c(y)),
        EnsembleClass::AIDag => {
            Ok((-y * y).exp() / (2.0 * pi).sqrt()
                - y / std::f64::consts::SQRT_2 * erfc_c(y))
        }
        EnsembleClass::AIIDag => {
            // T(√2 y, i/√2) = i τ with τ the real-axis integral; the term
            // −i√π T contributes +√π τ.
            let tau = owen_tau(std::f64::consts::SQRT_2 * y, std::f64::consts::FRAC_1_SQRT_2)?;
            let product = -(pi.sqrt() / 4.0) * erfc_c(y) * erfi(y / std::f64::consts::SQRT_2);
            Ok((product + pi.sqrt() * tau) * (-y * y / 2.0).exp())
        }
    }
}

/// How many expansion orders [`edge_tail`] includes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailOrder {
    /// The stated leading term only.
    Leading,
    /// Leading plus the next-to-leading correction where one is available:
    /// (1 − 1/(2y²)) for class A, the e^{−y²} term on the AI† left tail and
    /// (1 − 3/(2y²)) on its right tail, (1 − 5/(2y²)) on the AII† right
    /// tail and −1/(√2 y³) on its left tail.
    Next,
}

/// Tail expansion of the edge limit at real |y| ≥ 3.
pub fn edge_tail(class: EnsembleClass, y: f64, order: TailOrder) -> Result<f64> {
    if y.abs() < 3.0 {
        return Err(Error::Domain(format!(
            "edge_tail is an asymptotic expansion, |y| >= 3 required (got {y})"
        )));
    }
    let pi = std::f64::consts::PI;
    let gauss = (-y * y).exp();
    let next = order == TailOrder::Next;
    Ok(match class {
        EnsembleClass::A => {
            let corr = if next { 1.0 - 0.5 / (y * y) } else { 1.0 };
            let t = gauss / (2.0 * pi.sqrt() * y) * corr;
            if y > 0.0 {
                t
            } else {
                1.0 + t
            }
        }
        EnsembleClass::AIDag => {
            if y > 0.0 {
                let corr = if next { 1.0 - 1.5 / (y * y) } else { 1.0 };
                gauss / ((8.0 * pi).sqrt() * y * y) * corr
            } else {
                let exp_term = if next {
                    gauss / ((8.0 * pi).sqrt() * y * y)
                } else {
                    0.0
                };
                -std::f64::consts::SQRT_2 * y + exp_term
            }
        }
        EnsembleClass::AIIDag => {
            if y > 0.0 {
                let corr = if next { 1.0 - 2.5 / (y * y) } else { 1.0 };
                gauss / ((8.0 * pi).sqrt() * y * y) * corr
            } else {
                let corr = if next { 1.0 + 1.0 / (y * y) } else { 1.0 };
                -1.0 / (std::f64::consts::SQRT_2 * y) * corr
            }
        }
    })
}

/// The exact finite-N counterpart of [`edge_limit`] along the Figure-2
/// slice χ = y/(√2 z0*), η* = y/(√2 z0) (so χη* = y²/2):
///
/// * class A:    Q(N+1, x) at x = N + √(2N) y + y²/2,
/// * class AI†:  √N e^{−2zw*} D_N/D_N(0,0) at the same 2zw*,
/// * class AII†: e^{−2zw*} D_N/D_N(0,0) / √(2N) at zw* = N + √N y + y²/4.
pub fn finite_n_edge(class: EnsembleClass, n: usize, y: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("finite_n_edge requires N >= 1".into()));
    }
    let nf = n as f64;
    let d = class.matrix_dim(n) as f64;
    let s2 = class.scale() * class.scale();
    // x = zw* = s²(d_N + √(2 d_N) y + χη*) with χη* = y²/2
    let x = s2 * (d + (2.0 * d).sqrt() * y + y * y / 2.0);
    if x < 0.0 {
        return Err(Error::Domain(format!(
            "finite_n_edge slice leaves the positive real axis (x = {x:.3e}); N too small for this y"
        )));
    }
    let damped = damped_pair_real(class, n, x)?;
    Ok(match class {
        EnsembleClass::A => damped,
        EnsembleClass::AIDag => nf.sqrt() * damped,
        EnsembleClass::AIIDag => damped / (2.0 * nf).sqrt(),
    })
}

/// One row of a convergence scan.
#[derive(Debug, Clone, Copy)]
pub struct ScanRow {
    pub n: usize,
    pub finite: f64,
    pub limit: f64,
    pub error: f64,
}

/// Result of [`convergence_scan`].
#[derive(Debug, Clone)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
    /// Least-squares exponent of error ~ N^rate; present for ≥ 3 points.
    pub rate: Option<f64>,
    /// Errors strictly decrease along the (sorted) N list.
    pub monotone: bool,
}

/// |finite_n_edge − edge_limit| over an increasing N list, with a rate fit
/// when at least three points are available.
pub fn convergence_scan(class: EnsembleClass, y: f64, n_list: &[usize]) -> Result<ScanTable> {
    if n_list.is_empty() {
        return Err(Error::Domain("convergence_scan needs a nonempty N list".into()));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(
            "convergence_scan needs a strictly increasing N list".into(),
        ));
    }
    let limit = edge_limit(class, Complex::new(y, 0.0))?.re;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let finite = finite_n_edge(class, n, y)?;
        rows.push(ScanRow {
            n,
            finite,
            limit,
            error: (finite - limit).abs(),
        });
    }
    let monotone = rows.windows(2).all(|w| w[1].error < w[0].error);
    let rate = if rows.len() >= 3 {
        Some(fit_log_slope(
            &rows.iter().map(|r| r.n as f64).collect::<Vec<_>>(),
            &rows.iter().map(|r| r.error.max(1e-300)).collect::<Vec<_>>(),
        ))
    } else {
        None
    };
    Ok(ScanTable {
        rows,
        rate,
        monotone,
    })
}

/// Least-squares slope of ln(e) against ln(n).
fn fit_log_slope(ns: &[f64], es: &[f64]) -> f64 {
    let m = ns.len() as f64;
    let lx: Vec<f64> = ns.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = es.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
