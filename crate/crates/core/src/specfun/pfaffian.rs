//! Pfaffian of complex skew-symmetric matrices.
//!
//! The production path is skew-symmetric Parlett–Reid elimination with
//! partial pivoting and sign tracking, O(n³). The combinatorial perfect-
//! matching expansion is kept for small dimensions as an independent test
//! oracle.

use crate::{CMatrix, Complex, Error, Result};

/// Even-dimensional complex antisymmetric matrix.
///
/// Construction validates skew-symmetry: entries[i][j] = -entries[j][i]
/// within `1e-12` of the largest entry magnitude, zero diagonal.
#[derive(Debug, Clone)]
pub struct SkewMatrix {
    mat: CMatrix,
}

impl SkewMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        let n = mat.nrows();
        if n != mat.ncols() || n % 2 != 0 || n == 0 {
            return Err(Error::Dimension(format!(
                "SkewMatrix requires even square dimension, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let scale = mat.iter().map(|z| z.norm()).fold(0.0f64, f64::max).max(1.0);
        let mut residual = 0.0f64;
        for i in 0..n {
            residual = residual.max(mat[(i, i)].norm());
            for j in (i + 1)..n {
                residual = residual.max((mat[(i, j)] + mat[(j, i)]).norm());
            }
        }
        if residual > 1e-12 * scale {
            return Err(Error::NotSkew(residual / scale));
        }
        Ok(Self { mat })
    }

    /// Build from the strict upper triangle, row-major:
    /// (m01, m02, ..., m0,n-1, m12, ...).
    pub fn from_upper(dim: usize, upper: &[Complex]) -> Result<Self> {
        if upper.len() != dim * (dim - 1) / 2 {
            return Err(Error::Dimension(format!(
                "expected {} upper entries for dim {dim}, got {}",
                dim * (dim - 1) / 2,
                upper.len()
            )));
        }
        let mut mat = CMatrix::zeros(dim, dim);
        let mut it = upper.iter();
        for i in 0..dim {
            for j in (i + 1)..dim {
                let v = *it.next().unwrap();
                mat[(i, j)] = v;
                mat[(j, i)] = -v;
            }
        }
        Self::new(mat)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }
}

/// Pf(m) by Parlett–Reid elimination with partial pivoting.
///
/// Satisfies Pf(m)² = det(m) and Pf(BᵀMB) = det(B)·Pf(M).
pub fn pfaffian(m: &SkewMatrix) -> Complex {
    let mut a = m.mat.clone();
    let n = a.nrows();
    let mut pf = Complex::ONE;
    for k in (0..n - 1).step_by(2) {
        // pivot: the largest |a[i, k]| for i > k
        let mut kp = k + 1;
        let mut best = a[(k + 1, k)].norm();
        for i in (k + 2)..n {
            let v = a[(i, k)].norm();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if best == 0.0 {
            return Complex::ZERO; // column annihilated ⇒ singular skew matrix
        }
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_columns(k + 1, kp);
            pf = -pf;
        }
        pf *= a[(k, k + 1)];
        if k + 2 < n {
            let pivot = a[(k + 1, k)];
            // eliminate column k below row k+1 and the matching row entries
            let tau: Vec<Complex> = ((k + 2)..n).map(|i| a[(i, k)] / pivot).collect();
            let col: Vec<Complex> = ((k + 2)..n).map(|i| a[(i, k + 1)]).collect();
            for (ii, i) in ((k + 2)..n).enumerate() {
                for (jj, j) in ((k + 2)..n).enumerate() {
                    a[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
    }
    pf
}

/// Pfaffian by the perfect-matching expansion; O(n!!), intended as a test
/// oracle for dim ≤ 6.
pub fn pfaffian_combinatorial(m: &SkewMatrix) -> Result<Complex> {
    if m.dim() > 8 {
        return Err(Error::Dimension(format!(
            "combinatorial pfaffian limited to dim <= 8, got {}",
            m.dim()
        )));
    }
    fn expand(mat: &CMatrix, alive: &mut Vec<usize>) -> Complex {
        if alive.is_empty() {
            return Complex::ONE;
        }
        let first = alive[0];
        let mut total = Complex::ZERO;
        for pos in 1..alive.len() {
            let j = alive[pos];
            let sign = if pos % 2 == 1 { 1.0 } else { -1.0 };
            let mut rest: Vec<usize> = alive[1..].to_vec();
            rest.remove(pos - 1);
            total += sign * mat[(first, j)] * expand(mat, &mut rest);
        }
        total
    }
    let mut alive: Vec<usize> = (0..m.dim()).collect();
    Ok(expand(&m.mat, &mut alive))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::lu_det;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn random_skew(dim: usize, seed: u64) -> SkewMatrix {
        // cheap xorshift; statistical quality is irrelevant here
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut mat = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in (i + 1)..dim {
                let v = c(next(), next());
                mat[(i, j)] = v;
                mat[(j, i)] = -v;
            }
        }
        SkewMatrix::new(mat).unwrap()
    }

    #[test]
    fn pfaffian_2x2_is_the_upper_entry() {
        let a = c(1.7, -0.3);
        let m = SkewMatrix::from_upper(2, &[a]).unwrap();
        assert_eq!(pfaffian(&m), a);
        assert_eq!(pfaffian_combinatorial(&m).unwrap(), a);
    }

    #[test]
    fn pfaffian_4x4_combinatorial_identity() {
        // upper entries (a,b,c,d,e,f) = (m01,m02,m03,m12,m13,m23): Pf = af - be + cd
        let u = [
            c(0.3, 1.0),
            c(-0.7, 0.1),
            c(2.0, -0.4),
            c(0.9, 0.9),
            c(-1.1, 0.2),
            c(0.5, -2.0),
        ];
        let m = SkewMatrix::from_upper(4, &u).unwrap();
        let expect = u[0] * u[5] - u[1] * u[4] + u[2] * u[3];
        assert!((pfaffian(&m) - expect).norm() < 1e-13 * expect.norm());
        assert!((pfaffian_combinatorial(&m).unwrap() - expect).norm() < 1e-14 * expect.norm());
    }

    #[test]
    fn pfaffian_squared_is_determinant() {
        for seed in 1..30u64 {
            for dim in [2usize, 4, 6, 8, 12] {
                let m = random_skew(dim, seed * 977 + dim as u64);
                let pf = pfaffian(&m);
                let det = lu_det(m.matrix());
                assert!(
                    (pf * pf - det).norm() <= 1e-10 * det.norm(),
                    "dim={dim} seed={seed}: pf²={} det={det}",
                    pf * pf
                );
            }
        }
    }

    #[test]
    fn pfaffian_matches_combinatorial_oracle() {
        for seed in 1..20u64 {
            let m = random_skew(6, seed);
            let fast = pfaffian(&m);
            let slow = pfaffian_combinatorial(&m).unwrap();
            assert!((fast - slow).norm() <= 1e-12 * slow.norm().max(1e-3));
        }
    }

    #[test]
    fn pfaffian_congruence_transform() {
        // Pf(Bᵀ M B) = det(B) Pf(M)
        let mut state = 42u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..10 {
            let dim = 6;
            let m = random_skew(dim, next().to_bits());
            let b = CMatrix::from_fn(dim, dim, |_, _| c(next(), next()));
            let congruent = b.transpose() * m.matrix() * &b;
            let mc = SkewMatrix::new(congruent).unwrap();
            let lhs = pfaffian(&mc);
            let rhs = lu_det(&b) * pfaffian(&m);
            assert!(
                (lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1e-6),
                "lhs={lhs} rhs={rhs}"
            );
        }
    }

    #[test]
    fn skew_validation() {
        assert!(SkewMatrix::new(CMatrix::zeros(3, 3)).is_err()); // odd
        let mut bad = CMatrix::zeros(2, 2);
        bad[(0, 1)] = c(1.0, 0.0);
        bad[(1, 0)] = c(1.0, 0.0); // not skew
        assert!(matches!(SkewMatrix::new(bad), Err(Error::NotSkew(_))));
    }
}
