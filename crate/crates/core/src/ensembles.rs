//! Samplers for the three Gaussian matrix ensembles with weight
//! exp[−Tr JJ†]: complex Ginibre (class A), complex symmetric (class AI†)
//! and complex self-dual (class AII†), plus spectral sanity checks.
//!
//! The weight exp[−c|x|²] for a complex entry means E|x|² = 1/c, so the
//! entry variances are: class A — all entries 1; class AI† — diagonal 1,
//! off-diagonal 1/2; class AII† — A-block 1/2 everywhere, B/C-blocks 1/2
//! off-diagonal with antisymmetry.

use crate::rng::{complex_gaussian, RngStream};
use crate::{CMatrix, Complex, Error, Result};

/// Symmetry class of the ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnsembleClass {
    /// Complex Ginibre.
    A,
    /// Complex symmetric, J = Jᵀ.
    AIDag,
    /// Complex self-dual, Σ_y Jᵀ Σ_y = J, dimension 2N.
    AIIDag,
}

impl EnsembleClass {
    pub const ALL: [EnsembleClass; 3] = [Self::A, Self::AIDag, Self::AIIDag];

    /// Matrix dimension d_N.
    pub fn matrix_dim(&self, n: usize) -> usize {
        match self {
            Self::A | Self::AIDag => n,
            Self::AIIDag => 2 * n,
        }
    }

    /// Support-normalizing scale s.
    pub fn scale(&self) -> f64 {
        match self {
            Self::A => 1.0,
            Self::AIDag | Self::AIIDag => std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    /// Short ASCII label used in outputs and flags.
    pub fn label(&self) -> &'static str {
        match self {
            Self::A => "A",
            Self::AIDag => "AI",
            Self::AIIDag => "AII",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Self::A),
            "AI" | "ai" | "AI†" => Ok(Self::AIDag),
            "AII" | "aii" | "AII†" => Ok(Self::AIIDag),
            other => Err(Error::Domain(format!(
                "unknown ensemble class {other:?} (expected A, AI or AII)"
            ))),
        }
    }
}

impl std::fmt::Display for EnsembleClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// One matrix drawn from an ensemble.
#[derive(Debug, Clone)]
pub struct MatrixSample {
    pub class: EnsembleClass,
    pub n: usize,
    pub entries: CMatrix,
}

/// Draw J from the ensemble weight exp[−Tr JJ†] using the given stream.
pub fn sample(class: EnsembleClass, n: usize, stream: RngStream) -> MatrixSample {
    let mut rng = stream.rng();
    MatrixSample {
        class,
        n,
        entries: sample_with(class, n, &mut rng),
    }
}

/// Same as [`sample`] but drawing from an in-flight generator; the Monte
/// Carlo drivers use this to pull many matrices from one batch stream.
pub fn sample_with<R: rand::Rng + ?Sized>(class: EnsembleClass, n: usize, rng: &mut R) -> CMatrix {
    match class {
        EnsembleClass::A => CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng, 1.0)),
        EnsembleClass::AIDag => {
            let mut j = CMatrix::zeros(n, n);
            for i in 0..n {
                j[(i, i)] = complex_gaussian(rng, 1.0);
                for l in (i + 1)..n {
                    let v = complex_gaussian(rng, 0.5);
                    j[(i, l)] = v;
                    j[(l, i)] = v;
                }
            }
            j
        }
        EnsembleClass::AIIDag => {
            let a = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng, 0.5));
            let mut b = CMatrix::zeros(n, n);
            let mut c = CMatrix::zeros(n, n);
            for l in 0..n {
                for m in (l + 1)..n {
                    let vb = complex_gaussian(rng, 0.5);
                    b[(l, m)] = vb;
                    b[(m, l)] = -vb;
                    let vc = complex_gaussian(rng, 0.5);
                    c[(l, m)] = vc;
                    c[(m, l)] = -vc;
                }
            }
            // J = [[A, B], [C, Aᵀ]]
            let mut j = CMatrix::zeros(2 * n, 2 * n);
            for r in 0..n {
                for s in 0..n {
                    j[(r, s)] = a[(r, s)];
                    j[(r, n + s)] = b[(r, s)];
                    j[(n + r, s)] = c[(r, s)];
                    j[(n + r, n + s)] = a[(s, r)];
                }
            }
            j
        }
    }
}

/// ‖J − Jᵀ‖∞ for AI†, ‖Σ_y Jᵀ Σ_y − J‖∞ for AII†, 0 for A; exact zeros by
/// construction for the structured classes.
pub fn symmetry_residual(sample: &MatrixSample) -> f64 {
    let j = &sample.entries;
    match sample.class {
        EnsembleClass::A => 0.0,
        EnsembleClass::AIDag => {
            let d = j - j.transpose();
            d.iter().map(|z| z.norm()).fold(0.0, f64::max)
        }
        EnsembleClass::AIIDag => {
            let n2 = j.nrows();
            let n = n2 / 2;
            let i = Complex::new(0.0, 1.0);
            let mut sigma = CMatrix::zeros(n2, n2);
            for r in 0..n {
                sigma[(r, n + r)] = -i;
                sigma[(n + r, r)] = i;
            }
            let d = &sigma * j.transpose() * &sigma - j;
            d.iter().map(|z| z.norm()).fold(0.0, f64::max)
        }
    }
}

/// Eigenvalues of J/(√d_N · s), normalized so the limiting support is the
/// unit disc. Uses the general complex Schur decomposition; not part of any
/// closed-form evaluation path.
pub fn scaled_eigenvalues(sample: &MatrixSample) -> Result<Vec<Complex>> {
    let d = sample.class.matrix_dim(sample.n) as f64;
    let denom = d.sqrt() * sample.class.scale();
    let m = sample.entries.map(|z| z / denom);
    let schur = m
        .try_schur(1e-12, 200_000)
        .ok_or_else(|| Error::NoConvergence("complex Schur iteration stalled".into()))?;
    let ev = schur
        .eigenvalues()
        .ok_or_else(|| Error::NoConvergence("Schur form not triangular".into()))?;
    Ok(ev.iter().copied().collect())
}

/// Normalized radial histogram of scaled eigenvalue moduli.
#[derive(Debug, Clone)]
pub struct RadialHistogram {
    /// bin edges, length bins + 1, spanning [0, r_max]
    pub edges: Vec<f64>,
    /// density per unit radius, normalized to ∫ρ dr = 1
    pub density: Vec<f64>,
    pub total_count: usize,
}

/// Histogram the scaled eigenvalue moduli of many samples; also returns the
/// raw moduli.
///
/// For class AII† the spectrum is Kramers degenerate (every eigenvalue
/// appears twice); `dedup_kramers` keeps one member of each pair, which
/// leaves the normalized histogram unchanged.
pub fn radial_density(
    samples: &[MatrixSample],
    bins: usize,
    dedup_kramers: bool,
) -> Result<(RadialHistogram, Vec<f64>)> {
    if samples.is_empty() {
        return Err(Error::Domain(
            "radial_density needs at least one sample".into(),
        ));
    }
    if bins == 0 {
        return Err(Error::Domain("radial_density needs at least one bin".into()));
    }
    let mut moduli = Vec::new();
    for s in samples {
        let mut ev = scaled_eigenvalues(s)?;
        if dedup_kramers && s.class == EnsembleClass::AIIDag {
            ev = dedup_pairs(ev);
        }
        moduli.extend(ev.iter().map(|z| z.norm()));
    }
    let r_max = moduli.iter().cloned().fold(0.0f64, f64::max).max(1e-12);
    let mut counts = vec![0usize; bins];
    for &m in &moduli {
        let idx = ((m / r_max) * bins as f64) as usize;
        counts[idx.min(bins - 1)] += 1;
    }
    let dr = r_max / bins as f64;
    let total = moduli.len();
    let density = counts
        .iter()
        .map(|&c| c as f64 / (total as f64 * dr))
        .collect();
    let edges = (0..=bins).map(|i| i as f64 * dr).collect();
    Ok((
        RadialHistogram {
            edges,
            density,
            total_count: total,
        },
        moduli,
    ))
}

/// Greedily pair each eigenvalue with its nearest neighbour and keep one
/// per pair (Kramers de-duplication).
fn dedup_pairs(mut ev: Vec<Complex>) -> Vec<Complex> {
    let mut kept = Vec::with_capacity(ev.len() / 2);
    while let Some(z) = ev.pop() {
        if !ev.is_empty() {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (i, w) in ev.iter().enumerate() {
                let d = (z - w).norm();
                if d < best_d {
                    best_d = d;
                    best = i;
                }
            }
            ev.swap_remove(best);
        }
        kept.push(z);
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn dims_and_scales() {
        assert_eq!(EnsembleClass::A.matrix_dim(5), 5);
        assert_eq!(EnsembleClass::AIDag.matrix_dim(5), 5);
        assert_eq!(EnsembleClass::AIIDag.matrix_dim(5), 10);
        assert_eq!(EnsembleClass::A.scale(), 1.0);
        assert_eq!(
            EnsembleClass::AIDag.scale(),
            std::f64::consts::FRAC_1_SQRT_2
        );
    }

    #[test]
    fn structural_symmetries_are_exact() {
        for (class, n) in [
            (EnsembleClass::AIDag, 2),
            (EnsembleClass::AIDag, 7),
            (EnsembleClass::AIIDag, 1),
            (EnsembleClass::AIIDag, 6),
        ] {
            let s = sample(class, n, RngStream::new(11, 0));
            assert_eq!(symmetry_residual(&s), 0.0, "{class} N={n}");
        }
    }

    #[test]
    fn entry_second_moments() {
        let n_samples = 1_000;
        let tol = |var: f64, count: usize| 4.0 * var / (count as f64).sqrt();

        // class A: E|J_ij|² = 1 (N = 10 ⇒ 100 entries/sample, Var(|x|²) = 1)
        let mut acc = 0.0;
        let mut cnt = 0usize;
        let mut rng = RngStream::new(5, 1).rng();
        for _ in 0..n_samples {
            let j = sample_with(EnsembleClass::A, 10, &mut rng);
            acc += j.iter().map(|z| z.norm_sqr()).sum::<f64>();
            cnt += 100;
        }
        assert!((acc / cnt as f64 - 1.0).abs() < tol(1.0, cnt));

        // class AI†: diagonal 1, off-diagonal 1/2
        let mut diag = 0.0;
        let mut off = 0.0;
        let mut cd = 0;
        let mut co = 0;
        let mut rng = RngStream::new(5, 2).rng();
        for _ in 0..n_samples {
            let j = sample_with(EnsembleClass::AIDag, 10, &mut rng);
            for i in 0..10 {
                diag += j[(i, i)].norm_sqr();
                cd += 1;
                for l in (i + 1)..10 {
                    off += j[(i, l)].norm_sqr();
                    co += 1;
                }
            }
        }
        assert!((diag / cd as f64 - 1.0).abs() < tol(1.0, cd));
        assert!((off / co as f64 - 0.5).abs() < tol(0.25, co));

        // class AII†, N = 1: J = diag(a, a) with E|a|² = 1/2
        let mut a2 = 0.0;
        let mut rng = RngStream::new(5, 3).rng();
        let m = 100_000;
        for _ in 0..m {
            let j = sample_with(EnsembleClass::AIIDag, 1, &mut rng);
            assert_eq!(j[(0, 1)], Complex::ZERO);
            assert_eq!(j[(1, 0)], Complex::ZERO);
            assert_eq!(j[(0, 0)], j[(1, 1)]);
            a2 += j[(0, 0)].norm_sqr();
        }
        assert!((a2 / m as f64 - 0.5).abs() < tol(0.25, m));
    }

    #[test]
    fn n1_class_a_pair_identity() {
        // ⟨(z−J)(w*−J*)⟩ = 1 + z w* at N = 1
        let z = Complex::new(0.7, 0.4);
        let w_star = Complex::new(0.2, -0.9);
        let n = 200_000;
        let mut rng = RngStream::new(99, 0).rng();
        let mut acc = Complex::ZERO;
        let mut acc2 = 0.0;
        for _ in 0..n {
            let j = complex_gaussian(&mut rng, 1.0);
            let v = (z - j) * (w_star - j.conj());
            acc += v;
            acc2 += v.norm_sqr();
        }
        let mean = acc / n as f64;
        let var = (acc2 / n as f64 - mean.norm_sqr()).max(0.0);
        let se = (var / n as f64).sqrt();
        let expect = 1.0 + z * w_star;
        assert!(
            (mean - expect).norm() < 4.0 * se,
            "mean={mean} expect={expect} se={se}"
        );
    }

    #[test]
    fn n1_identity_eigenvalue() {
        let s = sample(EnsembleClass::A, 1, RngStream::new(3, 3));
        let ev = scaled_eigenvalues(&s).unwrap();
        assert_eq!(ev.len(), 1);
        assert!((ev[0] - s.entries[(0, 0)]).norm() < 1e-12);
    }

    #[test]
    fn radial_density_input_validation() {
        assert!(radial_density(&[], 10, false).is_err());
        let s = sample(EnsembleClass::A, 4, RngStream::new(1, 0));
        assert!(radial_density(&[s], 0, false).is_err());
    }

    #[test]
    fn kramers_pairing_at_small_n() {
        // AII† spectrum is doubly degenerate; check pairing at N = 8
        let s = sample(EnsembleClass::AIIDag, 8, RngStream::new(21, 0));
        let ev = scaled_eigenvalues(&s).unwrap();
        assert_eq!(ev.len(), 16);
        let deduped = dedup_pairs(ev.clone());
        assert_eq!(deduped.len(), 8);
        // every kept eigenvalue had a partner within numerical distance
        for z in &deduped {
            let close = ev.iter().filter(|w| (*w - z).norm() < 1e-8).count();
            assert!(close >= 2, "eigenvalue {z} not Kramers-paired");
        }
    }
}
