//! Brute-force Monte Carlo oracle: direct sampling estimates of
//! ⟨Π_j det(z_j−J) det(w*_j−J*)⟩ and of the k-dimensional matrix-space
//! integrals, with rigorous error bars and reproducible parallelism.
//!
//! Sampling is organized in fixed-size batches; batch i draws from
//! `stream.offset(i)`, batches accumulate one-pass Welford statistics, and
//! batch summaries combine in a fixed half-split reduction tree keyed by
//! batch index. Results are therefore identical for any worker count, and
//! two runs covering the first and second half of a batch range pool back
//! to the single full run exactly (the stream-splitting contract: callers
//! hand out disjoint, block-aligned batch ranges via `stream.offset`).

use crate::charpoly::{dn_origin_ln, dn_pair};
use crate::ensembles::{sample_with, EnsembleClass};
use crate::linalg::{char_det, LogDet};
use crate::rng::RngStream;
use crate::{CMatrix, Complex, Error, Result};

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::hash::{Hash, Hasher};

/// Samples per batch/stream. Runs whose halves are to be pooled exactly
/// should use sample counts aligned to this block size.
pub const BATCH_SIZE: u64 = 4096;

// ---------------------------------------------------------------------------
// Accumulators
// ---------------------------------------------------------------------------

/// One-pass mean/variance accumulator for a complex-valued sample stream
/// (Welford), with weight sums for importance-sampling diagnostics.
#[derive(Debug, Clone, Copy)]
struct MeanState {
    n: u64,
    mean: Complex,
    m2: f64,
    sum_w: f64,
    sum_w2: f64,
    overflowed: bool,
}

impl MeanState {
    fn empty() -> Self {
        MeanState {
            n: 0,
            mean: Complex::ZERO,
            m2: 0.0,
            sum_w: 0.0,
            sum_w2: 0.0,
            overflowed: false,
        }
    }

    fn push(&mut self, x: Complex, w: f64) {
        if !x.is_finite() {
            self.overflowed = true;
        }
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        let delta2 = x - self.mean;
        self.m2 += (delta.conj() * delta2).re;
        self.sum_w += w;
        self.sum_w2 += w * w;
    }

    /// Chan parallel combine; exact function of the two operands.
    fn combine(a: MeanState, b: MeanState) -> MeanState {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let delta = b.mean - a.mean;
        let mean = a.mean + delta * (b.n as f64 / n as f64);
        let m2 = a.m2 + b.m2 + delta.norm_sqr() * (a.n as f64 * b.n as f64 / n as f64);
        MeanState {
            n,
            mean,
            m2,
            sum_w: a.sum_w + b.sum_w,
            sum_w2: a.sum_w2 + b.sum_w2,
            overflowed: a.overflowed || b.overflowed,
        }
    }
}

/// Joint accumulator for shared-sample ratio estimates mean(A)/mean(B),
/// tracking the co-moment needed for the delta-method standard error.
#[derive(Debug, Clone, Copy)]
struct RatioState {
    n: u64,
    mean_num: Complex,
    mean_den: Complex,
    m2_num: f64,
    m2_den: f64,
    c2: Complex,
    branch_risk: u64,
    overflowed: bool,
}

impl RatioState {
    fn empty() -> Self {
        RatioState {
            n: 0,
            mean_num: Complex::ZERO,
            mean_den: Complex::ZERO,
            m2_num: 0.0,
            m2_den: 0.0,
            c2: Complex::ZERO,
            branch_risk: 0,
            overflowed: false,
        }
    }

    fn push(&mut self, num: Complex, den: Complex, branch: bool) {
        if !num.is_finite() || !den.is_finite() {
            self.overflowed = true;
        }
        self.n += 1;
        let nf = self.n as f64;
        let d_num = num - self.mean_num;
        let d_den = den - self.mean_den;
        self.mean_num += d_num / nf;
        self.mean_den += d_den / nf;
        let d_num2 = num - self.mean_num;
        let d_den2 = den - self.mean_den;
        self.m2_num += (d_num.conj() * d_num2).re;
        self.m2_den += (d_den.conj() * d_den2).re;
        // co-moment Σ (a − ā)(b − b̄)*
        self.c2 += d_num2 * d_den.conj();
        if branch {
            self.branch_risk += 1;
        }
    }

    fn combine(a: RatioState, b: RatioState) -> RatioState {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let w = a.n as f64 * b.n as f64 / n as f64;
        let d_num = b.mean_num - a.mean_num;
        let d_den = b.mean_den - a.mean_den;
        RatioState {
            n,
            mean_num: a.mean_num + d_num * (b.n as f64 / n as f64),
            mean_den: a.mean_den + d_den * (b.n as f64 / n as f64),
            m2_num: a.m2_num + b.m2_num + d_num.norm_sqr() * w,
            m2_den: a.m2_den + b.m2_den + d_den.norm_sqr() * w,
            c2: a.c2 + b.c2 + d_num * d_den.conj() * w,
            branch_risk: a.branch_risk + b.branch_risk,
            overflowed: a.overflowed || b.overflowed,
        }
    }

    /// Ratio mean and delta-method standard error.
    fn finalize(&self) -> (Complex, f64) {
        let ratio = self.mean_num / self.mean_den;
        if self.n < 2 {
            return (ratio, f64::INFINITY);
        }
        let nf = self.n as f64;
        let var_num = self.m2_num / (nf - 1.0);
        let var_den = self.m2_den / (nf - 1.0);
        let cov = self.c2 / (nf - 1.0);
        let var_ratio = (var_num + ratio.norm_sqr() * var_den
            - 2.0 * (ratio.conj() * cov).re)
            .max(0.0)
            / self.mean_den.norm_sqr();
        (ratio, (var_ratio / nf).sqrt())
    }
}

/// Fixed half-split reduction over batch summaries; the tree shape depends
/// only on the list length, never on the worker count.
fn reduce_tree<T: Copy, F: Fn(T, T) -> T + Copy>(items: &[T], empty: T, combine: F) -> T {
    match items.len() {
        0 => empty,
        1 => items[0],
        len => {
            let mid = len / 2;
            combine(
                reduce_tree(&items[..mid], empty, combine),
                reduce_tree(&items[mid..], empty, combine),
            )
        }
    }
}

fn batch_lengths(n: u64) -> Vec<u64> {
    let full = n / BATCH_SIZE;
    let rem = n % BATCH_SIZE;
    let mut v = vec![BATCH_SIZE; full as usize];
    if rem > 0 {
        v.push(rem);
    }
    v
}

/// Run a plain-mean estimate over `n` samples.
fn run_mean<F>(n: u64, stream: RngStream, per_sample: F) -> MeanState
where
    F: Fn(&mut ChaCha8Rng) -> (Complex, f64) + Sync,
{
    let lens = batch_lengths(n);
    let states: Vec<MeanState> = lens
        .par_iter()
        .enumerate()
        .map(|(i, &len)| {
            let mut rng = stream.offset(i as u64).rng();
            let mut st = MeanState::empty();
            for _ in 0..len {
                let (x, w) = per_sample(&mut rng);
                st.push(x, w);
            }
            st
        })
        .collect();
    reduce_tree(&states, MeanState::empty(), MeanState::combine)
}

/// Run a shared-sample ratio estimate over `n` samples.
fn run_ratio<F>(n: u64, stream: RngStream, per_sample: F) -> RatioState
where
    F: Fn(&mut ChaCha8Rng) -> (Complex, Complex, bool) + Sync,
{
    let lens = batch_lengths(n);
    let states: Vec<RatioState> = lens
        .par_iter()
        .enumerate()
        .map(|(i, &len)| {
            let mut rng = stream.offset(i as u64).rng();
            let mut st = RatioState::empty();
            for _ in 0..len {
                let (a, b, branch) = per_sample(&mut rng);
                st.push(a, b, branch);
            }
            st
        })
        .collect();
    reduce_tree(&states, RatioState::empty(), RatioState::combine)
}

// ---------------------------------------------------------------------------
// Public estimate type
// ---------------------------------------------------------------------------

/// A Monte Carlo average with its standard error and provenance.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub mean: Complex,
    /// Sample standard deviation / √n (for ratio estimates: delta method).
    pub std_error: f64,
    /// Sum of squared deviations, kept so that pooling stays exact.
    pub m2: f64,
    pub n_samples: u64,
    /// Base stream of the run (batch i used `stream.offset(i)`).
    pub stream: RngStream,
    /// Effective sample size of importance-weighted runs.
    pub ess: Option<f64>,
    /// Samples whose det-power phase came within 0.1 rad of the principal
    /// branch cut (half-integer determinant powers only).
    pub branch_risk_samples: u64,
    /// Hash of the generating query; merging checks it when present.
    pub fingerprint: Option<u64>,
}

impl McEstimate {
    fn from_mean_state(st: MeanState, stream: RngStream, fingerprint: Option<u64>) -> McEstimate {
        let var = if st.n > 1 {
            st.m2 / (st.n as f64 - 1.0)
        } else {
            f64::INFINITY
        };
        McEstimate {
            mean: st.mean,
            std_error: (var / st.n as f64).sqrt(),
            m2: st.m2,
            n_samples: st.n,
            stream,
            ess: if st.sum_w > 0.0 && st.sum_w2 > 0.0 {
                Some(st.sum_w * st.sum_w / st.sum_w2)
            } else {
                None
            },
            branch_risk_samples: 0,
            fingerprint,
        }
    }

    fn from_ratio_state(st: RatioState, stream: RngStream, fingerprint: Option<u64>) -> McEstimate {
        let (mean, se) = st.finalize();
        McEstimate {
            mean,
            std_error: se,
            m2: se * se * st.n as f64 * (st.n as f64 - 1.0),
            n_samples: st.n,
            stream,
            ess: None,
            branch_risk_samples: st.branch_risk,
            fingerprint,
        }
    }

    /// z-score of the estimate against a reference value.
    pub fn z_score(&self, reference: Complex) -> f64 {
        (self.mean - reference).norm() / self.std_error
    }

    /// Importance weights degenerate below 1 % effective sample size.
    pub fn ess_degenerate(&self) -> bool {
        match self.ess {
            Some(e) => e < 0.01 * self.n_samples as f64,
            None => false,
        }
    }
}

/// Pool independent estimates of the same query: means weighted by n,
/// deviations combined exactly (Chan) through the carried m2.
pub fn merge(estimates: &[McEstimate]) -> Result<McEstimate> {
    if estimates.is_empty() {
        return Err(Error::IncompatibleEstimates("nothing to merge".into()));
    }
    let fp = estimates[0].fingerprint;
    for e in estimates {
        if fp.is_some() && e.fingerprint.is_some() && e.fingerprint != fp {
            return Err(Error::IncompatibleEstimates(
                "estimates come from different queries".into(),
            ));
        }
    }
    let states: Vec<MeanState> = estimates
        .iter()
        .map(|e| MeanState {
            n: e.n_samples,
            mean: e.mean,
            m2: e.m2,
            sum_w: 0.0,
            sum_w2: 0.0,
            overflowed: false,
        })
        .collect();
    let st = reduce_tree(&states, MeanState::empty(), MeanState::combine);
    let mut out = McEstimate::from_mean_state(st, estimates[0].stream, fp);
    out.ess = None;
    out.branch_risk_samples = estimates.iter().map(|e| e.branch_risk_samples).sum();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Characteristic-polynomial estimator
// ---------------------------------------------------------------------------

/// Normalization applied to the sampled determinant products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// Plain product average; overflows are reported for large dimensions.
    Raw,
    /// Each sample divided by the exact D_N(0,0)^k.
    OriginNormalized,
    /// Shared-sample ratio against ⟨|det(J − √d_N s z0)|^{2k}⟩ (the
    /// k-pair normalization; requires the reference point z0).
    DnkNormalized { z0: Complex },
}

/// Identifies one expectation value of k pairs of characteristic
/// polynomials.
#[derive(Debug, Clone)]
pub struct CharPolyQuery {
    pub class: EnsembleClass,
    pub n: usize,
    pub z: Vec<Complex>,
    pub w_star: Vec<Complex>,
    pub mode: Mode,
}

impl CharPolyQuery {
    /// Single-pair query at x = z·w* (z = w* = √x).
    pub fn single(class: EnsembleClass, n: usize, x: Complex, mode: Mode) -> Self {
        let root = x.sqrt();
        CharPolyQuery {
            class,
            n,
            z: vec![root],
            w_star: vec![root],
            mode,
        }
    }

    pub fn k(&self) -> usize {
        self.z.len()
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("CharPolyQuery requires N >= 1".into()));
        }
        if self.z.is_empty() || self.z.len() != self.w_star.len() {
            return Err(Error::ShapeMismatch(format!(
                "Z and W* diagonals must have equal nonzero length, got {} and {}",
                self.z.len(),
                self.w_star.len()
            )));
        }
        Ok(())
    }

    fn fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.class.label().hash(&mut h);
        self.n.hash(&mut h);
        for v in self.z.iter().chain(&self.w_star) {
            v.re.to_bits().hash(&mut h);
            v.im.to_bits().hash(&mut h);
        }
        match self.mode {
            Mode::Raw => 0u8.hash(&mut h),
            Mode::OriginNormalized => 1u8.hash(&mut h),
            Mode::DnkNormalized { z0 } => {
                2u8.hash(&mut h);
                z0.re.to_bits().hash(&mut h);
                z0.im.to_bits().hash(&mut h);
            }
        }
        h.finish()
    }
}

/// Product of det(z_j − J)·det(w*_j − J*) over the query's points, in
/// factored log form. det(w*−J*) = conj(det(w−J)).
fn det_product(query: &CharPolyQuery, j: &CMatrix) -> LogDet {
    let mut acc = LogDet::ONE;
    for (z, w_star) in query.z.iter().zip(&query.w_star) {
        acc = acc.mul(&char_det(*z, j));
        acc = acc.mul(&char_det(w_star.conj(), j).conj());
    }
    acc
}

/// Sample mean of Π_j det(z_j−J) det(w*_j−J*) under the query's mode.
///
/// Determinants are evaluated by complex LU with partial pivoting and
/// accumulated as log-magnitude plus phase, so dimensions in the hundreds
/// do not overflow before the mode's normalization is applied.
pub fn estimate_charpoly(
    query: &CharPolyQuery,
    n_samples: u64,
    stream: RngStream,
) -> Result<McEstimate> {
    query.validate()?;
    if n_samples < 2 {
        return Err(Error::Domain("estimate_charpoly needs n >= 2".into()));
    }
    let fp = Some(query.fingerprint());
    let class = query.class;
    let n = query.n;
    match query.mode {
        Mode::Raw | Mode::OriginNormalized => {
            let shift = match query.mode {
                Mode::Raw => 0.0,
                _ => query.k() as f64 * dn_origin_ln(class, n),
            };
            let st = run_mean(n_samples, stream, |rng| {
                let j = sample_with(class, n, rng);
                let ld = det_product(query, &j);
                let value = (ld.ln_abs - shift).exp() * ld.phase;
                (value, 1.0)
            });
            if st.overflowed || !st.m2.is_finite() {
                return Err(Error::Overflow(format!(
                    "raw determinant products overflow at d_N = {}; use OriginNormalized or DnkNormalized mode",
                    class.matrix_dim(n)
                )));
            }
            let mut est = McEstimate::from_mean_state(st, stream, fp);
            est.ess = None;
            Ok(est)
        }
        Mode::DnkNormalized { z0 } => {
            let d = class.matrix_dim(n) as f64;
            let v = d.sqrt() * class.scale() * z0;
            // constant per-run scalings keep both channels O(1)
            let ln_num_scale: f64 = query
                .z
                .iter()
                .zip(&query.w_star)
                .map(|(z, w)| {
                    dn_origin_ln(class, n)
                        + dn_pair(class, n, z * w).map(|v| v.log_scale).unwrap_or(0.0)
                })
                .sum();
            let ln_den_scale = query.k() as f64
                * (dn_origin_ln(class, n)
                    + dn_pair(class, n, v * v.conj())
                        .map(|v| v.log_scale)
                        .unwrap_or(0.0));
            let k = query.k() as i32;
            let st = run_ratio(n_samples, stream, |rng| {
                let j = sample_with(class, n, rng);
                let num = det_product(query, &j);
                let den_half = char_det(v, &j);
                let den = den_half.mul(&den_half.conj()).powi(k);
                (
                    (num.ln_abs - ln_num_scale).exp() * num.phase,
                    (den.ln_abs - ln_den_scale).exp() * den.phase,
                    false,
                )
            });
            if st.overflowed {
                return Err(Error::Overflow(
                    "normalized determinant ratio overflowed its scaling".into(),
                ));
            }
            let mut est = McEstimate::from_ratio_state(st, stream, fp);
            est.mean *= (ln_num_scale - ln_den_scale).exp();
            est.std_error *= (ln_num_scale - ln_den_scale).exp();
            est.m2 = est.std_error * est.std_error
                * est.n_samples as f64
                * (est.n_samples as f64 - 1.0);
            Ok(est)
        }
    }
}

// ---------------------------------------------------------------------------
// Matrix-space integrals
// ---------------------------------------------------------------------------

/// Integration space for the k-pair saddle manifolds: complex k×k,
/// quaternion 2k×2k (stacked complex form [[A, B], [−B*, A*]]) or real
/// 2k×2k matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixSpace {
    Complex { k: usize },
    Quaternion { k: usize },
    Real { k: usize },
}

impl MatrixSpace {
    /// Edge saddle manifold for a class, per the unifying embedding.
    pub fn for_class(class: EnsembleClass, k: usize) -> MatrixSpace {
        match class {
            EnsembleClass::A => MatrixSpace::Complex { k },
            EnsembleClass::AIDag => MatrixSpace::Quaternion { k },
            EnsembleClass::AIIDag => MatrixSpace::Real { k },
        }
    }

    /// Dimension of the matrices handed to integrands.
    pub fn dim(&self) -> usize {
        match self {
            MatrixSpace::Complex { k } => *k,
            MatrixSpace::Quaternion { k } | MatrixSpace::Real { k } => 2 * k,
        }
    }

    /// Gaussian quadratic form V_q(A): Tr A†A for the complex space,
    /// ½ Tr A†A for the doubled spaces.
    pub fn quad_form(&self, a: &CMatrix) -> f64 {
        let tr: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        match self {
            MatrixSpace::Complex { .. } => tr,
            _ => 0.5 * tr,
        }
    }

    /// Quartic form: Tr (A†A)² for the complex space, ½ Tr (A†A)² for the
    /// doubled spaces (the two conventions agree under the embedding
    /// A → diag(Ã, Ã)).
    pub fn quartic_form(&self, a: &CMatrix) -> f64 {
        let g = a.adjoint() * a;
        let tr: f64 = (0..g.nrows())
            .map(|i| (0..g.ncols()).map(|j| (g[(i, j)] * g[(j, i)]).re).sum::<f64>())
            .sum();
        match self {
            MatrixSpace::Complex { .. } => tr,
            _ => 0.5 * tr,
        }
    }

    /// ln ∫ [dA] e^{−c·V_q(A)}.
    pub fn gaussian_ln_norm(&self, c: f64) -> f64 {
        let pi = std::f64::consts::PI;
        match self {
            MatrixSpace::Complex { k } => (k * k) as f64 * (pi / c).ln(),
            MatrixSpace::Quaternion { k } => 2.0 * (k * k) as f64 * (pi / c).ln(),
            MatrixSpace::Real { k } => 2.0 * (k * k) as f64 * (2.0 * pi / c).ln(),
        }
    }

    /// Draw from the normalized Gaussian density ∝ e^{−c·V_q(A)}.
    pub fn sample<R: rand::Rng + ?Sized>(&self, c: f64, rng: &mut R) -> CMatrix {
        use crate::rng::{complex_gaussian, real_gaussian};
        match self {
            MatrixSpace::Complex { k } => {
                CMatrix::from_fn(*k, *k, |_, _| complex_gaussian(rng, 1.0 / c))
            }
            MatrixSpace::Quaternion { k } => {
                let k = *k;
                let a = CMatrix::from_fn(k, k, |_, _| complex_gaussian(rng, 1.0 / c));
                let b = CMatrix::from_fn(k, k, |_, _| complex_gaussian(rng, 1.0 / c));
                let mut m = CMatrix::zeros(2 * k, 2 * k);
                for r in 0..k {
                    for s in 0..k {
                        m[(r, s)] = a[(r, s)];
                        m[(r, k + s)] = b[(r, s)];
                        m[(k + r, s)] = -b[(r, s)].conj();
                        m[(k + r, k + s)] = a[(r, s)].conj();
                    }
                }
                m
            }
            MatrixSpace::Real { k } => CMatrix::from_fn(2 * k, 2 * k, |_, _| {
                Complex::new(real_gaussian(rng, 1.0 / c), 0.0)
            }),
        }
    }
}

/// Weight of a matrix-space integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    /// e^{−scale·V_q(A)}; sampled exactly.
    Gaussian { scale: f64 },
    /// e^{−V_quartic(A)}; importance-sampled from a Gaussian proposal with
    /// per-sample reweighting.
    Quartic { proposal_scale: f64 },
}

impl Weight {
    /// Default quartic weight: proposal scale √2 matches the proposal's
    /// quadratic-form mean to the quartic weight's.
    pub fn quartic() -> Weight {
        Weight::Quartic {
            proposal_scale: std::f64::consts::SQRT_2,
        }
    }
}

/// ∫ [dA] f(A)·weight(A) over the space, by direct Gaussian sampling or
/// importance sampling for the quartic weight. The effective sample size of
/// weighted runs is reported on the estimate; below 1 % of n it flags
/// degenerate reweighting via [`McEstimate::ess_degenerate`].
pub fn estimate_matrix_integral<F>(
    space: MatrixSpace,
    weight: Weight,
    integrand: F,
    n_samples: u64,
    stream: RngStream,
) -> Result<McEstimate>
where
    F: Fn(&CMatrix) -> Complex + Sync,
{
    if n_samples < 2 {
        return Err(Error::Domain("estimate_matrix_integral needs n >= 2".into()));
    }
    let st = match weight {
        Weight::Gaussian { scale } => {
            if !(scale > 0.0) {
                return Err(Error::Domain("gaussian scale must be positive".into()));
            }
            let z = space.gaussian_ln_norm(scale).exp();
            run_mean(n_samples, stream, |rng| {
                let a = space.sample(scale, rng);
                (z * integrand(&a), 1.0)
            })
        }
        Weight::Quartic { proposal_scale } => {
            if !(proposal_scale > 0.0) {
                return Err(Error::Domain("proposal scale must be positive".into()));
            }
            let z = space.gaussian_ln_norm(proposal_scale).exp();
            run_mean(n_samples, stream, |rng| {
                let a = space.sample(proposal_scale, rng);
                let w = (proposal_scale * space.quad_form(&a) - space.quartic_form(&a)).exp();
                (z * w * integrand(&a), w)
            })
        }
    };
    if st.overflowed {
        return Err(Error::Overflow("matrix integrand overflowed".into()));
    }
    let mut est = McEstimate::from_mean_state(st, stream, None);
    if matches!(weight, Weight::Gaussian { .. }) {
        est.ess = None;
    }
    Ok(est)
}

/// Plain mean of a complex-valued sampler; used by the group integrals.
pub(crate) fn run_plain_mean<F>(
    n_samples: u64,
    stream: RngStream,
    per_sample: F,
) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Complex + Sync,
{
    if n_samples < 2 {
        return Err(Error::Domain("estimator needs n >= 2".into()));
    }
    let st = run_mean(n_samples, stream, |rng| (per_sample(rng), 1.0));
    if st.overflowed {
        return Err(Error::Overflow("sampled values overflowed".into()));
    }
    let mut est = McEstimate::from_mean_state(st, stream, None);
    est.ess = None;
    Ok(est)
}

/// Shared-sample ratio of two matrix-space integrands under a common
/// Gaussian weight e^{−scale·V_q}; used by the finite-N duality integrals.
pub(crate) fn estimate_matrix_ratio<F>(
    space: MatrixSpace,
    scale: f64,
    per_sample: F,
    n_samples: u64,
    stream: RngStream,
) -> Result<McEstimate>
where
    F: Fn(&CMatrix) -> (Complex, Complex, bool) + Sync,
{
    if n_samples < 2 {
        return Err(Error::Domain("estimate_matrix_ratio needs n >= 2".into()));
    }
    let st = run_ratio(n_samples, stream, |rng| {
        let a = space.sample(scale, rng);
        per_sample(&a)
    });
    if st.overflowed {
        return Err(Error::Overflow("duality integrand overflowed".into()));
    }
    Ok(McEstimate::from_ratio_state(st, stream, None))
}
