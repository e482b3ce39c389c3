//! k-pair machinery: finite-N duality integrals, bulk Haar-group limits,
//! edge matrix integrals with their normalization constants, the class-A
//! closed forms (HCIZ and erfc determinants), and the effective-Lagrangian
//! evaluators shared by the Monte Carlo integrands.
//!
//! All k ≥ 2 limit formulas are stated in the unifying 2k×2k embedding:
//! class A uses U = diag(Ũ, Ũ) with Ũ ∈ U(k) in the bulk and
//! A = diag(Ã, Ã) with Ã complex k×k at the edge; classes AI† and AII† use
//! USp(2k)/quaternion and O(2k)/real matrices directly.

use crate::asymptotics::{edge_limit, Regime, SpectralFrame};
use crate::ensembles::EnsembleClass;
use crate::linalg::{lu_det, lu_logdet, vandermonde};
use crate::montecarlo::{
    estimate_matrix_integral, estimate_matrix_ratio, MatrixSpace, McEstimate, Weight,
};
use crate::rng::{complex_gaussian, real_gaussian, RngStream};
use crate::specfun::{erfc_c, factorial, gamma, gauss_2f1_half, ln_factorial, pfaffian, trunc_exp, SkewMatrix};
use crate::{CMatrix, Complex, Error, Result};

use nalgebra::DVector;

// ---------------------------------------------------------------------------
// Haar sampling on the classical compact groups
// ---------------------------------------------------------------------------

/// The bulk saddle-point manifolds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaarGroup {
    /// U(k), k×k complex.
    Unitary(usize),
    /// USp(2k), 2k×2k complex with quaternionic structure.
    UnitarySymplectic(usize),
    /// O(m), m×m real (both components).
    Orthogonal(usize),
}

impl HaarGroup {
    pub fn dim(&self) -> usize {
        match self {
            HaarGroup::Unitary(k) => *k,
            HaarGroup::UnitarySymplectic(k) => 2 * k,
            HaarGroup::Orthogonal(m) => *m,
        }
    }

    /// Bulk Goldstone manifold of a class at order k.
    pub fn for_class(class: EnsembleClass, k: usize) -> HaarGroup {
        match class {
            EnsembleClass::A => HaarGroup::Unitary(k),
            EnsembleClass::AIDag => HaarGroup::UnitarySymplectic(k),
            EnsembleClass::AIIDag => HaarGroup::Orthogonal(2 * k),
        }
    }
}

/// Orthonormalize `cols` in place against earlier columns (modified
/// Gram–Schmidt, two passes) and normalize by the real positive norm; the
/// positive-diagonal QR of a Ginibre matrix is Haar on the matching group.
fn mgs_columns(cols: &mut [DVector<Complex>]) {
    for j in 0..cols.len() {
        for _ in 0..2 {
            for i in 0..j {
                let proj: Complex = cols[i].dotc(&cols[j]);
                let prev = cols[i].clone();
                cols[j].axpy(-proj, &prev, Complex::ONE);
            }
        }
        let norm = cols[j].norm();
        cols[j] /= Complex::new(norm, 0.0);
    }
}

/// Haar-distributed element of the group.
pub fn haar_sample<R: rand::Rng + ?Sized>(group: HaarGroup, rng: &mut R) -> CMatrix {
    match group {
        HaarGroup::Unitary(k) => {
            let mut cols: Vec<DVector<Complex>> = (0..k)
                .map(|_| DVector::from_fn(k, |_, _| complex_gaussian(rng, 1.0)))
                .collect();
            mgs_columns(&mut cols);
            CMatrix::from_columns(&cols)
        }
        HaarGroup::Orthogonal(m) => {
            let mut cols: Vec<DVector<Complex>> = (0..m)
                .map(|_| DVector::from_fn(m, |_, _| Complex::new(real_gaussian(rng, 1.0), 0.0)))
                .collect();
            mgs_columns(&mut cols);
            CMatrix::from_columns(&cols)
        }
        HaarGroup::UnitarySymplectic(k) => {
            // Quaternionic Gram–Schmidt in the stacked complex form: the
            // span over H of a column q is the span over C of {q, Ωᵀq*},
            // so orthogonalizing against both members of every earlier
            // pair implements GS over the quaternions.
            let n2 = 2 * k;
            // partner p = Ωᵀ v*: p_top = −conj(v_bottom), p_bottom = conj(v_top)
            let partner = |v: &DVector<Complex>| -> DVector<Complex> {
                DVector::from_fn(n2, |i, _| {
                    if i < k {
                        -v[k + i].conj()
                    } else {
                        v[i - k].conj()
                    }
                })
            };
            let mut q: Vec<DVector<Complex>> = Vec::with_capacity(k);
            let mut p: Vec<DVector<Complex>> = Vec::with_capacity(k);
            for _ in 0..k {
                let mut v = DVector::from_fn(n2, |_, _| complex_gaussian(rng, 1.0));
                for _ in 0..2 {
                    for i in 0..q.len() {
                        let proj: Complex = q[i].dotc(&v);
                        let prev = q[i].clone();
                        v.axpy(-proj, &prev, Complex::ONE);
                        let proj: Complex = p[i].dotc(&v);
                        let prev = p[i].clone();
                        v.axpy(-proj, &prev, Complex::ONE);
                    }
                }
                let norm = v.norm();
                v /= Complex::new(norm, 0.0);
                p.push(partner(&v));
                q.push(v);
            }
            q.extend(p);
            CMatrix::from_columns(&q)
        }
    }
}

/// The stacked symplectic form Ω = [[0, I], [−I, 0]] of USp(2k).
pub fn symplectic_form(k: usize) -> CMatrix {
    let mut omega = CMatrix::zeros(2 * k, 2 * k);
    for i in 0..k {
        omega[(i, k + i)] = Complex::ONE;
        omega[(k + i, i)] = -Complex::ONE;
    }
    omega
}

// ---------------------------------------------------------------------------
// Effective Lagrangian
// ---------------------------------------------------------------------------

/// The two pieces of the effective Lagrangian at a saddle point.
#[derive(Debug, Clone, Copy)]
pub struct LagrangianTerms {
    /// Coefficient of the √d_N divergence: Tr(z0*χ + z0 η*).
    pub divergent: Complex,
    /// The finite piece; in the bulk the exponent of the group integral,
    /// at the edge the source/quartic exponent including the constant
    /// −½Tr[(z0*χ)² + (z0η*)²].
    pub finite: Complex,
}

/// ½ Tr(diag(χ,χ) U† diag(η*,η*) U) for a 2k×2k group element.
fn bulk_exponent(u: &CMatrix, chi: &[Complex], eta_star: &[Complex]) -> Complex {
    let k = chi.len();
    let full = |v: &[Complex], i: usize| v[i % k];
    let mut acc = Complex::ZERO;
    for i in 0..2 * k {
        for j in 0..2 * k {
            acc += full(chi, i) * full(eta_star, j) * u[(j, i)].norm_sqr();
        }
    }
    0.5 * acc
}

/// −(z0*/√2) Tr(A†A diag(χ,χ)) − (z0/√2) Tr(AA† diag(η*,η*)) for a 2k×2k
/// edge matrix.
fn edge_source_exponent(
    a: &CMatrix,
    chi: &[Complex],
    eta_star: &[Complex],
    z0: Complex,
) -> Complex {
    let k = chi.len();
    let n2 = 2 * k;
    let full = |v: &[Complex], i: usize| v[i % k];
    let mut tr_chi = Complex::ZERO; // Tr(A†A D_χ) = Σ_i χ_i Σ_a |A_ai|²
    let mut tr_eta = Complex::ZERO; // Tr(AA† D_η) = Σ_i η_i Σ_a |A_ia|²
    for i in 0..n2 {
        let mut col = 0.0;
        let mut row = 0.0;
        for aa in 0..n2 {
            col += a[(aa, i)].norm_sqr();
            row += a[(i, aa)].norm_sqr();
        }
        tr_chi += full(chi, i) * col;
        tr_eta += full(eta_star, i) * row;
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    -z0.conj() * s * tr_chi - z0 * s * tr_eta
}

/// −½ Tr[(z0*χ)² + (z0η*)²] over the k sources (not doubled).
fn edge_constant(chi: &[Complex], eta_star: &[Complex], z0: Complex) -> Complex {
    let mut acc = Complex::ZERO;
    for (c, e) in chi.iter().zip(eta_star) {
        let zc = z0.conj() * c;
        let ze = z0 * e;
        acc += zc * zc + ze * ze;
    }
    -0.5 * acc
}

/// ½ Tr (A†A)² of a full (2k) edge matrix.
fn edge_quartic(a: &CMatrix) -> f64 {
    let g = a.adjoint() * a;
    let tr: f64 = (0..g.nrows())
        .map(|i| {
            (0..g.ncols())
                .map(|j| (g[(i, j)] * g[(j, i)]).re)
                .sum::<f64>()
        })
        .sum();
    0.5 * tr
}

/// Embed a class-A k×k matrix as diag(M, M); other classes pass through.
fn embed_doubled(m: &CMatrix) -> CMatrix {
    let k = m.nrows();
    let mut full = CMatrix::zeros(2 * k, 2 * k);
    for i in 0..k {
        for j in 0..k {
            full[(i, j)] = m[(i, j)];
            full[(k + i, k + j)] = m[(i, j)];
        }
    }
    full
}

/// Evaluate the effective Lagrangian pieces at a saddle-manifold point:
/// a group element for the bulk regime, a matrix A for the edge regime.
/// Class-A points may be handed in k×k form; they are embedded as
/// diag(·,·) to match the unifying 2k×2k convention.
pub fn lagrangian_eval(
    class: EnsembleClass,
    frame: &SpectralFrame,
    point: &CMatrix,
) -> Result<LagrangianTerms> {
    let k = frame.k();
    let full_point: CMatrix = if point.nrows() == 2 * k {
        point.clone()
    } else if point.nrows() == k && class == EnsembleClass::A {
        embed_doubled(point)
    } else {
        return Err(Error::ShapeMismatch(format!(
            "expected a {0}x{0} (or class-A {1}x{1}) point, got {2}x{3}",
            2 * k,
            k,
            point.nrows(),
            point.ncols()
        )));
    };
    let z0 = frame.z0();
    let divergent: Complex = frame
        .chi()
        .iter()
        .zip(frame.eta_star())
        .map(|(c, e)| z0.conj() * c + z0 * e)
        .sum();
    let finite = match frame.regime() {
        Regime::Bulk => bulk_exponent(&full_point, frame.chi(), frame.eta_star()),
        Regime::Edge => {
            edge_constant(frame.chi(), frame.eta_star(), z0)
                + edge_source_exponent(&full_point, frame.chi(), frame.eta_star(), z0)
                - edge_quartic(&full_point)
        }
        Regime::Global => {
            return Err(Error::ShapeMismatch(
                "lagrangian_eval needs a bulk or edge frame".into(),
            ))
        }
    };
    Ok(LagrangianTerms { divergent, finite })
}

// ---------------------------------------------------------------------------
// Bulk: group integrals and the class-A HCIZ determinant
// ---------------------------------------------------------------------------

/// Monte Carlo bulk limit
/// e^{−Tr χη*}·E_Haar[exp(½ Tr(diag(χ,χ) U† diag(η*,η*) U))]
/// over the class's Goldstone group (U(k) embedded doubled for class A).
pub fn bulk_group_integral(
    class: EnsembleClass,
    chi: &[Complex],
    eta_star: &[Complex],
    n_samples: u64,
    stream: RngStream,
) -> Result<McEstimate> {
    if chi.len() != eta_star.len() || chi.is_empty() {
        return Err(Error::ShapeMismatch(
            "chi and eta_star must have equal nonzero length".into(),
        ));
    }
    let k = chi.len();
    let group = HaarGroup::for_class(class, k);
    let tr_chi_eta: Complex = chi.iter().zip(eta_star).map(|(c, e)| c * e).sum();
    let prefactor = (-tr_chi_eta).exp();
    let st = crate::montecarlo::run_plain_mean(n_samples, stream, move |rng| {
        let u0 = haar_sample(group, rng);
        let u = if class == EnsembleClass::A {
            embed_doubled(&u0)
        } else {
            u0
        };
        bulk_exponent(&u, chi, eta_star).exp()
    })?;
    let mut est = st;
    est.mean *= prefactor;
    est.std_error *= prefactor.norm();
    est.m2 *= prefactor.norm_sqr();
    Ok(est)
}

/// Smallest pairwise gap of a point set.
fn min_gap(xs: &[Complex]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..xs.len() {
        for j in (i + 1)..xs.len() {
            g = g.min((xs[i] - xs[j]).norm());
        }
    }
    g
}

/// Evaluate a determinant-ratio formula, perturbing coincident source
/// points by ε·(index+1) and Richardson-extrapolating over ε ∈ {1e−3, 5e−4}.
fn degeneracy_guard<F>(chi: &[Complex], eta_star: &[Complex], eval: F) -> Result<Complex>
where
    F: Fn(&[Complex], &[Complex]) -> Result<Complex>,
{
    let scale = chi
        .iter()
        .chain(eta_star)
        .map(|z| z.norm())
        .fold(1.0f64, f64::max);
    let tol = 1e-8 * scale;
    if chi.len() < 2 || (min_gap(chi) > tol && min_gap(eta_star) > tol) {
        return eval(chi, eta_star);
    }
    let perturbed = |eps: f64| -> Result<Complex> {
        let c2: Vec<Complex> = chi
            .iter()
            .enumerate()
            .map(|(i, z)| z + eps * (i + 1) as f64)
            .collect();
        let e2: Vec<Complex> = eta_star
            .iter()
            .enumerate()
            .map(|(i, z)| z + eps * (i + 1) as f64)
            .collect();
        eval(&c2, &e2)
    };
    let v1 = perturbed(1e-3 * scale)?;
    let v2 = perturbed(5e-4 * scale)?;
    let extrapolated = 2.0 * v2 - v1;
    if !extrapolated.is_finite() {
        return Err(Error::Degenerate(
            "source points too degenerate for perturbation".into(),
        ));
    }
    Ok(extrapolated)
}

/// Closed-form class-A bulk limit (the Harish-Chandra–Itzykson–Zuber
/// integral):
/// (Π_{j<k} j!)·e^{−Tr χη*}·det[exp(χ_a η*_b)]/(Δ_k(χ)Δ_k(η*)).
pub fn hciz_bulk_a(chi: &[Complex], eta_star: &[Complex]) -> Result<Complex> {
    if chi.len() != eta_star.len() || chi.is_empty() {
        return Err(Error::ShapeMismatch(
            "chi and eta_star must have equal nonzero length".into(),
        ));
    }
    degeneracy_guard(chi, eta_star, |c, e| {
        let k = c.len();
        let mut m = CMatrix::zeros(k, k);
        for a in 0..k {
            for b in 0..k {
                m[(a, b)] = (c[a] * e[b]).exp();
            }
        }
        let tr: Complex = c.iter().zip(e).map(|(x, y)| x * y).sum();
        let mut pref = Complex::ONE;
        for j in 0..k {
            pref *= factorial(j as u64);
        }
        Ok(pref * (-tr).exp() * lu_det(&m) / (vandermonde(c) * vandermonde(e)))
    })
}

// ---------------------------------------------------------------------------
// Edge: normalization constants, closed form, matrix integrals
// ---------------------------------------------------------------------------

/// Edge normalization constant Z̃_k:
///
/// * class A:    π^{k²}/Π(j!)² · det[Γ((a+b−1)/2)]_{k×k},
/// * class AI†:  π^{2k²}(π/2)^{k/2}/Π[(2j+1)!]² · Pf[(b−a)Γ((a+b−1)/2)]_{2k},
/// * class AII†: (√π/(2^{5/4} arctanh(1/√2)))^k (2π)^{2k²}/Π[(2j)!]² ·
///               Pf[(h(a,b) − h(b,a))·Γ((a+b−1)/2)]_{2k}
///               with h(a,b) = 2^{b/2}/(2a−1)·₂F₁((5−2b)/4, (2a−1)/4; (2a+3)/4; ½).
pub fn ztilde(class: EnsembleClass, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("ztilde requires k >= 1".into()));
    }
    let pi = std::f64::consts::PI;
    match class {
        EnsembleClass::A => {
            let mut m = CMatrix::zeros(k, k);
            for a in 1..=k {
                for b in 1..=k {
                    m[(a - 1, b - 1)] = Complex::new(gamma((a + b) as f64 / 2.0 - 0.5), 0.0);
                }
            }
            let mut denom = 1.0;
            for j in 0..k {
                let f = factorial(j as u64);
                denom *= f * f;
            }
            Ok(pi.powi((k * k) as i32) / denom * lu_det(&m).re)
        }
        EnsembleClass::AIDag => {
            let two_k = 2 * k;
            let mut m = CMatrix::zeros(two_k, two_k);
            for a in 1..=two_k {
                for b in 1..=two_k {
                    m[(a - 1, b - 1)] = Complex::new(
                        (b as f64 - a as f64) * gamma((a + b) as f64 / 2.0 - 0.5),
                        0.0,
                    );
                }
            }
            let pf = pfaffian(&SkewMatrix::new(m)?).re;
            let mut denom = 1.0;
            for j in 0..k {
                let f = factorial(2 * j as u64 + 1);
                denom *= f * f;
            }
            Ok(pi.powi((2 * k * k) as i32) * (pi / 2.0).powf(k as f64 / 2.0) / denom * pf)
        }
        EnsembleClass::AIIDag => {
            let two_k = 2 * k;
            let h = |a: usize, b: usize| -> Result<f64> {
                let af = a as f64;
                let bf = b as f64;
                Ok(2f64.powf(bf / 2.0) / (2.0 * af - 1.0)
                    * gauss_2f1_half(
                        (5.0 - 2.0 * bf) / 4.0,
                        (2.0 * af - 1.0) / 4.0,
                        (2.0 * af + 3.0) / 4.0,
                    )?)
            };
            let mut m = CMatrix::zeros(two_k, two_k);
            for a in 1..=two_k {
                for b in 1..=two_k {
                    let g = gamma((a + b) as f64 / 2.0 - 0.5);
                    m[(a - 1, b - 1)] = Complex::new((h(a, b)? - h(b, a)?) * g, 0.0);
                }
            }
            let pf = pfaffian(&SkewMatrix::new(m)?).re;
            let arctanh = 0.5 * ((1.0 + std::f64::consts::FRAC_1_SQRT_2)
                / (1.0 - std::f64::consts::FRAC_1_SQRT_2))
                .ln();
            let mut denom = 1.0;
            for j in 0..k {
                let f = factorial(2 * j as u64);
                denom *= f * f;
            }
            Ok((pi.sqrt() / (2f64.powf(1.25) * arctanh)).powi(k as i32)
                * (2.0 * pi).powi((2 * k * k) as i32)
                / denom
                * pf)
        }
    }
}

fn require_edge_point(z0: Complex) -> Result<()> {
    if (z0.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "edge formulas require |z0| = 1, got |z0| = {}",
            z0.norm()
        )));
    }
    Ok(())
}

/// Closed-form class-A edge limit for k pairs:
///
/// (Π_j 2^{−j}√π (j!)²)/det[Γ((a+b−1)/2)] ·
/// det[erfc((z0*χ_a + z0η*_b)/√2) e^{χ_a η*_b}] /
/// (Δ(χ)Δ(η*)·Π_j erfc((z0*χ_j + z0η*_j)/√2) e^{χ_j η*_j}).
pub fn edge_closed_a(chi: &[Complex], eta_star: &[Complex], z0: Complex) -> Result<Complex> {
    if chi.len() != eta_star.len() || chi.is_empty() {
        return Err(Error::ShapeMismatch(
            "chi and eta_star must have equal nonzero length".into(),
        ));
    }
    require_edge_point(z0)?;
    degeneracy_guard(chi, eta_star, |c, e| {
        let k = c.len();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut m = CMatrix::zeros(k, k);
        for a in 0..k {
            for b in 0..k {
                let arg = (z0.conj() * c[a] + z0 * e[b]) * s;
                m[(a, b)] = erfc_c(arg) * (c[a] * e[b]).exp();
            }
        }
        let mut diag = Complex::ONE;
        for j in 0..k {
            let arg = (z0.conj() * c[j] + z0 * e[j]) * s;
            diag *= erfc_c(arg) * (c[j] * e[j]).exp();
        }
        let mut gm = CMatrix::zeros(k, k);
        for a in 1..=k {
            for b in 1..=k {
                gm[(a - 1, b - 1)] = Complex::new(gamma((a + b) as f64 / 2.0 - 0.5), 0.0);
            }
        }
        let mut pref = Complex::ONE;
        for j in 0..k {
            let f = factorial(j as u64);
            pref *= 2f64.powi(-(j as i32)) * std::f64::consts::PI.sqrt() * f * f;
        }
        Ok(pref / lu_det(&gm) * lu_det(&m) / (vandermonde(c) * vandermonde(e) * diag))
    })
}

/// Monte Carlo edge limit for k pairs:
///
/// ∫[dA] exp[−(z0*/√2)Tr A†A diag(χ,χ) − (z0/√2)Tr AA† diag(η*,η*)
///            − ½Tr(A†A)²]
/// over the class's saddle manifold, divided by
/// Z̃_k · Π_j exp[(z0*χ_j + z0η*_j)²/2] · D_edge(χ_j, η*_j).
pub fn edge_matrix_integral(
    class: EnsembleClass,
    chi: &[Complex],
    eta_star: &[Complex],
    z0: Complex,
    n_samples: u64,
    stream: RngStream,
) -> Result<McEstimate> {
    if chi.len() != eta_star.len() || chi.is_empty() {
        return Err(Error::ShapeMismatch(
            "chi and eta_star must have equal nonzero length".into(),
        ));
    }
    require_edge_point(z0)?;
    let k = chi.len();
    let space = MatrixSpace::for_class(class, k);
    let is_a = class == EnsembleClass::A;
    let numerator = estimate_matrix_integral(
        space,
        Weight::quartic(),
        move |a| {
            let full = if is_a { embed_doubled(a) } else { a.clone() };
            edge_source_exponent(&full, chi, eta_star, z0).exp()
        },
        n_samples,
        stream,
    )?;
    // denominator: Z̃ · Π_j e^{y_j²} D_edge(y_j) with y_j = (z0*χ_j + z0η*_j)/√2
    let mut den = Complex::new(ztilde(class, k)?, 0.0);
    for j in 0..k {
        let y = (z0.conj() * chi[j] + z0 * eta_star[j]) / std::f64::consts::SQRT_2;
        den *= (y * y).exp() * edge_limit(class, y)?;
    }
    let mut est = numerator;
    est.mean /= den;
    est.std_error /= den.norm();
    est.m2 /= den.norm_sqr();
    Ok(est)
}

// ---------------------------------------------------------------------------
// Finite-N duality integrals
// ---------------------------------------------------------------------------

/// Monte Carlo evaluation of the k-dimensional duality representation of
/// D_{N,k}(Z, W*) (the z0-normalized k-pair average), as a shared-sample
/// ratio:
///
/// * class A: over complex k×k with weight e^{−N Tr A†A},
///   det[ZW*/N + A†(W*)^{−1}A W*]^N over det[|z0|²+A†A]^N;
/// * classes AI†/AII†: over quaternion/real 2k×2k with weight
///   e^{−(d_N/2) Tr AA†} and exponent d_N/2 (principal branch when d_N is
///   odd; samples near the branch cut are counted on the estimate).
pub fn duality_finite_n(
    class: EnsembleClass,
    n: usize,
    z: &[Complex],
    w_star: &[Complex],
    z0: Complex,
    n_samples: u64,
    stream: RngStream,
) -> Result<McEstimate> {
    if z.len() != w_star.len() || z.is_empty() {
        return Err(Error::ShapeMismatch(
            "Z and W* diagonals must have equal nonzero length".into(),
        ));
    }
    if n == 0 {
        return Err(Error::Domain("duality_finite_n requires N >= 1".into()));
    }
    if z0.norm() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "duality reference point needs |z0| <= 1, got {}",
            z0.norm()
        )));
    }
    if w_star.iter().any(|w| w.norm() == 0.0) {
        return Err(Error::Singular(
            "duality integrand uses (W*)^{-1}; all w*_j must be nonzero".into(),
        ));
    }
    let k = z.len();
    let d_n = class.matrix_dim(n);
    let z02 = z0.norm_sqr();
    match class {
        EnsembleClass::A => {
            let nf = n as f64;
            // shared constant scale cancels in the ratio
            let ln_scale = nf * k as f64 * (z02 + 1.0 / nf).ln();
            estimate_matrix_ratio(
                MatrixSpace::Complex { k },
                nf,
                move |a| {
                    // M = ZW*/N + A†(W*)^{-1}AW*, with diagonal W*
                    let mut m = CMatrix::zeros(k, k);
                    for i in 0..k {
                        for j in 0..k {
                            let mut acc = Complex::ZERO;
                            for l in 0..k {
                                acc += a[(l, i)].conj() * a[(l, j)];
                            }
                            m[(i, j)] = acc * w_star[j] / w_star[i];
                            if i == j {
                                m[(i, j)] += z[i] * w_star[i] / nf;
                            }
                        }
                    }
                    let num = lu_logdet(&m);
                    let mut den_m = a.adjoint() * a;
                    for i in 0..k {
                        den_m[(i, i)] += z02;
                    }
                    let den = lu_logdet(&den_m);
                    let num_v = (num.ln_abs * nf - ln_scale).exp()
                        * num.phase.powi(n as i32);
                    let den_v = (den.ln_abs * nf - ln_scale).exp()
                        * den.phase.powi(n as i32);
                    (num_v, den_v, false)
                },
                n_samples,
                stream,
            )
        }
        EnsembleClass::AIDag | EnsembleClass::AIIDag => {
            let space = MatrixSpace::for_class(class, k);
            let two_k = 2 * k;
            let half_d = d_n as f64 / 2.0;
            let ln_scale = half_d * two_k as f64 * (z02 + two_k as f64 / d_n as f64).ln();
            let integer_power = d_n % 2 == 0;
            estimate_matrix_ratio(
                space,
                d_n as f64,
                move |a| {
                    let full = |v: &[Complex], i: usize| v[i % k];
                    // M = (2/d_N) z̃ w̃ + A† w̃^{-1} A w̃ with z̃ = diag(Z,Z)
                    let mut m = CMatrix::zeros(two_k, two_k);
                    for i in 0..two_k {
                        for j in 0..two_k {
                            let mut acc = Complex::ZERO;
                            for l in 0..two_k {
                                acc += a[(l, i)].conj() * a[(l, j)];
                            }
                            m[(i, j)] = acc * full(w_star, j) / full(w_star, i);
                            if i == j {
                                m[(i, j)] +=
                                    2.0 / d_n as f64 * full(z, i) * full(w_star, i);
                            }
                        }
                    }
                    let num = lu_logdet(&m);
                    let mut den_m = a.adjoint() * a;
                    for i in 0..two_k {
                        den_m[(i, i)] += z02;
                    }
                    let den = lu_logdet(&den_m);
                    let (num_v, branch) = if integer_power {
                        let v = (num.ln_abs * half_d - ln_scale).exp()
                            * num.phase.powi((d_n / 2) as i32);
                        (v, false)
                    } else {
                        // principal branch of det^{d_N/2}
                        let arg = num.phase.arg();
                        let v = (Complex::new(num.ln_abs, arg) * half_d
                            - Complex::new(ln_scale, 0.0))
                        .exp();
                        (v, arg.abs() > std::f64::consts::PI - 0.1)
                    };
                    // the denominator determinant is positive (A†A ⪰ 0)
                    let den_v = Complex::new((den.ln_abs * half_d - ln_scale).exp(), 0.0);
                    (num_v, den_v, branch)
                },
                n_samples,
                stream,
            )
        }
    }
}

// ---------------------------------------------------------------------------
// Class-A kernel determinant formula (finite N, k pairs)
// ---------------------------------------------------------------------------

/// ⟨Π_{j=1}^k det(z_j − J) det(w*_j − J*)⟩ for class A by the orthogonal-
/// polynomial determinant formula:
/// Π_{i=N}^{N+k−1} i! · det[K_{N+k}(z_a, w*_b)]/(Δ_k(Z)Δ_k(W*)),
/// with pre-kernel K_M(z, w*) = E_{M−1}(z w*).
pub fn op_kernel_formula(n: usize, z: &[Complex], w_star: &[Complex]) -> Result<Complex> {
    if z.len() != w_star.len() || z.is_empty() {
        return Err(Error::ShapeMismatch(
            "Z and W* diagonals must have equal nonzero length".into(),
        ));
    }
    if n == 0 {
        return Err(Error::Domain("op_kernel_formula requires N >= 1".into()));
    }
    let k = z.len();
    let mut ln_pref = 0.0;
    for i in n..(n + k) {
        ln_pref += ln_factorial(i as u64);
    }
    if ln_pref > 700.0 {
        return Err(Error::Overflow(format!(
            "op_kernel_formula prefactor overflows at N = {n}, k = {k}"
        )));
    }
    degeneracy_guard(z, w_star, |zs, ws| {
        let mut m = CMatrix::zeros(k, k);
        for a in 0..k {
            for b in 0..k {
                m[(a, b)] = trunc_exp((n + k - 1) as u32, zs[a] * ws[b])?;
            }
        }
        Ok(ln_pref.exp() * lu_det(&m) / (vandermonde(zs) * vandermonde(ws)))
    })
}

/// Exact D_{N,k} for class A from the kernel formula: the z0-normalized
/// ratio widetilde D(Z,W*)/widetilde D(√N z0·1, √N z0*·1), the confluent
/// denominator handled by the perturbation rule.
pub fn dnk_exact_a(n: usize, z: &[Complex], w_star: &[Complex], z0: Complex) -> Result<Complex> {
    let k = z.len();
    let v = (n as f64).sqrt() * z0;
    let num = op_kernel_formula(n, z, w_star)?;
    let den = op_kernel_formula(n, &vec![v; k], &vec![v.conj(); k])?;
    Ok(num / den)
}
