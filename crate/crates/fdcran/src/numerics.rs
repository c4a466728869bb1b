//! Complex dense linear algebra at small fixed sizes.
//!
//! Everything the optimizer needs lives here: Kronecker products, Hermitian
//! eigendecomposition (cyclic Jacobi), Cholesky factorization for
//! positive-definite checks and log-determinants, PSD projection and
//! quadratic forms. Matrices in this crate are tiny (dimension at most a few
//! dozen), so the routines favor robustness and determinism over asymptotic
//! speed: no pivoting heuristics that depend on memory layout, no threading,
//! no external LAPACK.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
/// Complex column vector.
pub type CVec = Vec<C64>;

/// Numerical tolerances shared by all modules.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Max allowed entrywise residual |A - A'| before an input is rejected
    /// as non-Hermitian.
    pub hermitian_symmetry: f64,
    /// Max allowed eigenpair residual ||Av - lambda v||.
    pub eig_residual: f64,
    /// Eigenvalues above -psd_clamp count as nonnegative; smaller ones are
    /// clamped to zero by [`project_psd`].
    pub psd_clamp: f64,
}

pub const TOL: Tolerances = Tolerances {
    hermitian_symmetry: 1e-9,
    eig_residual: 1e-9,
    psd_clamp: 1e-12,
};

// ---------------------------------------------------------------------------
// Vector helpers
// ---------------------------------------------------------------------------

/// Conjugate-linear inner product `u' v` (conjugation on `u`).
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Euclidean norm.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Squared Euclidean norm.
pub fn vec_norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

// ---------------------------------------------------------------------------
// Dense complex matrix
// ---------------------------------------------------------------------------

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CMat { nrows, ncols, data: vec![C64::new(0.0, 0.0); nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Real diagonal matrix.
    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = C64::new(e, 0.0);
        }
        m
    }

    /// Rank-1 outer product `u v'`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn col(&self, j: usize) -> CVec {
        (0..self.nrows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)].conj())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a *= s;
        }
        m
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, other: &Self, s: f64) {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows);
        let mut out = Self::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.ncols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> CVec {
        assert_eq!(self.ncols, v.len());
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.nrows).map(|i| self[(i, i)]).sum()
    }

    /// Real part of the trace; for Hermitian matrices this is the trace.
    pub fn trace_re(&self) -> f64 {
        self.trace().re
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut r: f64 = 0.0;
        for i in 0..self.nrows {
            for j in i..self.ncols {
                r = r.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        r
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residual() <= tol
    }

    /// Symmetrize: (A + A')/2. Cheap guard against accumulated drift.
    pub fn hermitize(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.nrows, self.ncols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// Real inner product `Re tr(A' B)`.
    pub fn dot_re(&self, other: &Self) -> f64 {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.ncols + j]
    }
}

// ---------------------------------------------------------------------------
// Kronecker product
// ---------------------------------------------------------------------------

/// Kronecker product. `result[(i*rb + k, j*cb + l)] = a[(i,j)] * b[(k,l)]`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows * b.nrows, a.ncols * b.ncols);
    for i in 0..a.nrows {
        for j in 0..a.ncols {
            let aij = a[(i, j)];
            for k in 0..b.nrows {
                for l in 0..b.ncols {
                    out[(i * b.nrows + k, j * b.ncols + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of two column vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> CVec {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Cholesky
// ---------------------------------------------------------------------------

/// Cholesky factorization `A = L L'` of a Hermitian positive-definite matrix.
/// Returns `None` when a pivot drops below `eps` (matrix not PD).
pub fn cholesky(a: &CMat, eps: f64) -> Option<CMat> {
    assert!(a.is_square());
    let n = a.nrows;
    let mut l = CMat::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d <= eps {
            return None;
        }
        let dj = d.sqrt();
        l[(j, j)] = C64::new(dj, 0.0);
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / dj;
        }
    }
    Some(l)
}

/// log det of a Hermitian positive-definite matrix via Cholesky.
pub fn logdet_pd(a: &CMat) -> Result<f64> {
    let l = cholesky(a, 0.0).ok_or_else(|| {
        Error::domain("logdet: matrix is not positive definite")
    })?;
    Ok(2.0 * (0..a.nrows).map(|i| l[(i, i)].re.ln()).sum::<f64>())
}

/// Solve `L y = b` (forward) then `L' x = y` (backward) for Cholesky factor L.
pub fn chol_solve_vec(l: &CMat, b: &[C64]) -> CVec {
    let n = l.nrows;
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let lik = l[(i, k)];
            y[i] = y[i] - lik * y[k];
        }
        y[i] /= l[(i, i)].re;
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            let lki = l[(k, i)].conj();
            y[i] = y[i] - lki * y[k];
        }
        y[i] /= l[(i, i)].re;
    }
    y
}

/// Inverse of a Hermitian positive-definite matrix via Cholesky.
pub fn inverse_pd(a: &CMat) -> Result<CMat> {
    let l = cholesky(a, 0.0)
        .ok_or_else(|| Error::domain("inverse: matrix is not positive definite"))?;
    let n = a.nrows;
    let mut inv = CMat::zeros(n, n);
    for j in 0..n {
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[j] = C64::new(1.0, 0.0);
        let x = chol_solve_vec(&l, &e);
        for i in 0..n {
            inv[(i, j)] = x[i];
        }
    }
    // exact Hermitian symmetry for downstream consumers
    Ok(inv.hermitize())
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition (cyclic Jacobi)
// ---------------------------------------------------------------------------

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues sorted in descending order with the matching unit-norm
/// eigenvectors as columns. The rotation order is fixed (row-cyclic), which
/// together with the deterministic sort makes repeated calls bitwise equal.
pub fn eigh(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    if !a.is_square() || a.nrows == 0 {
        return Err(Error::domain("eigh: matrix must be square and non-empty"));
    }
    if a.hermitian_residual() > TOL.hermitian_symmetry {
        return Err(Error::domain(format!(
            "eigh: input is not Hermitian (residual {:.3e})",
            a.hermitian_residual()
        )));
    }
    let n = a.nrows;
    let mut b = a.hermitize();
    let mut v = CMat::identity(n);
    let scale = b.frob_norm().max(1e-300);
    let tol = 1e-30 * scale * scale;

    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += b[(p, q)].norm_sqr();
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = b[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                // phase that makes the 2x2 pivot block real symmetric
                let phase = apq / r; // e^{i phi}
                let alpha = b[(p, p)].re;
                let beta = b[(q, q)].re;
                let tau = (beta - alpha) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] acting on (p, q)
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = -s * phase.conj();
                let g_qq = c * phase.conj();
                // columns: B <- B G
                for k in 0..n {
                    let bp = b[(k, p)];
                    let bq = b[(k, q)];
                    b[(k, p)] = bp * g_pp + bq * g_qp;
                    b[(k, q)] = bp * g_pq + bq * g_qq;
                }
                // rows: B <- G' B
                for k in 0..n {
                    let bp = b[(p, k)];
                    let bq = b[(q, k)];
                    b[(p, k)] = g_pp.conj() * bp + g_qp.conj() * bq;
                    b[(q, k)] = g_pq.conj() * bp + g_qq.conj() * bq;
                }
                // eigenvector accumulation: V <- V G
                for k in 0..n {
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * g_pp + vq * g_qp;
                    v[(k, q)] = vp * g_pq + vq * g_qq;
                }
                // keep the pivot block exactly Hermitian
                b[(p, q)] = (b[(p, q)] + b[(q, p)].conj()) * 0.5;
                b[(q, p)] = b[(p, q)].conj();
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable descending sort; ties keep Jacobi column order
    order.sort_by(|&i, &j| b[(j, j)].re.partial_cmp(&b[(i, i)].re).unwrap());
    let eigvals: Vec<f64> = order.iter().map(|&i| b[(i, i)].re).collect();
    let mut vecs = CMat::zeros(n, n);
    for (newcol, &oldcol) in order.iter().enumerate() {
        let mut col = v.col(oldcol);
        normalize_phase(&mut col);
        for i in 0..n {
            vecs[(i, newcol)] = col[i];
        }
    }
    Ok((eigvals, vecs))
}

/// Rotate a vector's global phase so that its first component of modulus
/// above 1e-9 becomes real and nonnegative, then renormalize to unit norm.
fn normalize_phase(v: &mut [C64]) {
    let nrm = vec_norm(v);
    if nrm > 0.0 {
        for z in v.iter_mut() {
            *z /= nrm;
        }
    }
    if let Some(k) = v.iter().position(|z| z.norm() > 1e-9) {
        let phase = v[k] / v[k].norm();
        let rot = phase.conj();
        for z in v.iter_mut() {
            *z *= rot;
        }
        // kill the rounding residue in the anchor component
        v[k] = C64::new(v[k].re.max(0.0), 0.0);
    }
}

/// Largest eigenvalue and matching unit-norm eigenvector of a Hermitian
/// matrix. The phase convention of [`normalize_phase`] makes the result
/// deterministic (two calls on the same matrix agree bitwise).
pub fn principal_eigvec(m: &CMat) -> Result<(f64, CVec)> {
    let (vals, vecs) = eigh(m)?;
    Ok((vals[0], vecs.col(0)))
}

/// Project a Hermitian matrix onto the PSD cone: eigendecompose, clamp
/// negative eigenvalues to zero, reassemble. This is the Frobenius-nearest
/// PSD matrix.
pub fn project_psd(m: &CMat) -> Result<CMat> {
    let (vals, vecs) = eigh(m)?;
    let n = m.nrows;
    let mut out = CMat::zeros(n, n);
    for (k, &lam) in vals.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        let col = vecs.col(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += col[i] * col[j].conj() * lam;
            }
        }
    }
    Ok(out.hermitize())
}

/// Hermitian PSD square root: clamp negative eigenvalues, take sqrt.
pub fn sqrt_psd(m: &CMat) -> Result<CMat> {
    let (vals, vecs) = eigh(m)?;
    let n = m.nrows;
    let mut out = CMat::zeros(n, n);
    for (k, &lam) in vals.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        let s = lam.sqrt();
        let col = vecs.col(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += col[i] * col[j].conj() * s;
            }
        }
    }
    Ok(out.hermitize())
}

/// Quadratic form `v' M v` as a real scalar.
///
/// For Hermitian `M` the imaginary part is a rounding residue; it is checked
/// in debug builds and discarded.
pub fn quad_form(v: &[C64], m: &CMat) -> Result<f64> {
    if m.nrows != v.len() || m.ncols != v.len() {
        return Err(Error::domain(format!(
            "quad_form: dimension mismatch ({}x{} vs vector of {})",
            m.nrows,
            m.ncols,
            v.len()
        )));
    }
    let mv = m.mul_vec(v);
    let q = inner(v, &mv);
    debug_assert!(
        q.im.abs() <= 1e-10 * (1.0 + q.re.abs()),
        "quad_form imaginary residual {:.3e}",
        q.im
    );
    Ok(q.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    pub(crate) fn random_cmat(rng: &mut impl Rng, nrows: usize, ncols: usize) -> CMat {
        CMat::from_fn(nrows, ncols, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    pub(crate) fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMat {
        let a = random_cmat(rng, n, n);
        a.add(&a.adjoint()).scale(0.5)
    }

    fn random_unit(rng: &mut impl Rng, n: usize) -> CVec {
        let v: CVec = (0..n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let nrm = vec_norm(&v);
        v.into_iter().map(|z| z / nrm).collect()
    }

    #[test]
    fn kron_identity_gives_block_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = random_cmat(&mut rng, 2, 2);
        let k = kron(&CMat::identity(2), &b);
        assert_eq!(k.nrows, 4);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(k[(i, j)], b[(i, j)]);
                assert_eq!(k[(2 + i, 2 + j)], b[(i, j)]);
                assert_eq!(k[(i, 2 + j)], c(0.0, 0.0));
                assert_eq!(k[(2 + i, j)], c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn kron_mixed_product_random_2x2() {
        // (A (x) B)(C (x) D) = (AC) (x) (BD), checked by dense multiplication
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let a = random_cmat(&mut rng, 2, 2);
            let b = random_cmat(&mut rng, 2, 2);
            let cm = random_cmat(&mut rng, 2, 2);
            let d = random_cmat(&mut rng, 2, 2);
            let lhs = kron(&a, &b).matmul(&kron(&cm, &d));
            let rhs = kron(&a.matmul(&cm), &b.matmul(&d));
            assert!(lhs.sub(&rhs).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn kron_trace_multiplicative_hermitian_3x3() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = random_hermitian(&mut rng, 3);
            let b = random_hermitian(&mut rng, 3);
            let t = kron(&a, &b).trace();
            let expect = a.trace() * b.trace();
            assert!((t - expect).norm() <= 1e-12);
        }
    }

    #[test]
    fn principal_eigvec_diagonal() {
        let m = CMat::diag(&[1.0, 3.0]);
        let (lam, v) = principal_eigvec(&m).unwrap();
        assert_close(lam, 3.0, 1e-12);
        assert!(v[0].norm() <= 1e-12);
        assert_close(v[1].re, 1.0, 1e-12);
        assert_close(v[1].im, 0.0, 1e-12);
    }

    #[test]
    fn principal_eigvec_analytic_2x2() {
        // [[2,1],[1,2]]: eigenvalues 3 and 1, top eigenvector [1,1]/sqrt(2)
        let m = CMat::from_fn(2, 2, |i, j| if i == j { c(2.0, 0.0) } else { c(1.0, 0.0) });
        let (lam, v) = principal_eigvec(&m).unwrap();
        assert_close(lam, 3.0, 1e-12);
        let s = 1.0 / 2.0_f64.sqrt();
        assert_close(v[0].re, s, 1e-12);
        assert_close(v[1].re, s, 1e-12);
        assert_close(v[0].im, 0.0, 1e-12);
        assert_close(v[1].im, 0.0, 1e-12);
    }

    #[test]
    fn principal_eigvec_rank_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..6 {
            let u = random_unit(&mut rng, n);
            let m = CMat::outer(&u, &u);
            let (lam, v) = principal_eigvec(&m).unwrap();
            assert_close(lam, 1.0, 1e-10);
            // v equals u up to the phase convention: |<u, v>| = 1
            assert_close(inner(&u, &v).norm(), 1.0, 1e-10);
        }
    }

    #[test]
    fn principal_eigvec_rejects_non_hermitian() {
        let m = CMat::from_fn(2, 2, |i, j| c((i + 2 * j) as f64, 1.0));
        assert!(principal_eigvec(&m).is_err());
    }

    #[test]
    fn principal_eigvec_deterministic_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=6 {
            let m = random_hermitian(&mut rng, n);
            let (l1, v1) = principal_eigvec(&m).unwrap();
            let (l2, v2) = principal_eigvec(&m).unwrap();
            assert_eq!(l1.to_bits(), l2.to_bits());
            for (a, b) in v1.iter().zip(&v2) {
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }

    #[test]
    fn eig_residual_small_on_random_hermitian() {
        // 1000 random Hermitian matrices, dims 1..=8
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for k in 0..1000 {
            let n = 1 + k % 8;
            let m = random_hermitian(&mut rng, n);
            let (lam, v) = principal_eigvec(&m).unwrap();
            let mv = m.mul_vec(&v);
            let resid: f64 = mv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b * lam).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(resid <= TOL.eig_residual, "residual {resid} at case {k}");
        }
    }

    #[test]
    fn project_psd_fixed_point_and_clamp() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = random_hermitian(&mut rng, 3);
        let psd = project_psd(&h).unwrap();
        let again = project_psd(&psd).unwrap();
        assert!(psd.sub(&again).max_abs() <= 1e-12);

        let m = CMat::diag(&[1.0, -2.0]);
        let p = project_psd(&m).unwrap();
        assert_close(p[(0, 0)].re, 1.0, 1e-12);
        assert_close(p[(1, 1)].re, 0.0, 1e-12);
    }

    #[test]
    fn project_psd_is_frobenius_nearest() {
        // distance to the projection never exceeds distance to other PSD points
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..25 {
            let m = random_hermitian(&mut rng, 3);
            let p = project_psd(&m).unwrap();
            let d_proj = m.sub(&p).frob_norm();
            for _ in 0..20 {
                let x = random_hermitian(&mut rng, 3);
                let x_psd = project_psd(&x).unwrap();
                let d_other = m.sub(&x_psd).frob_norm();
                assert!(d_proj <= d_other + 1e-10);
            }
        }
    }

    #[test]
    fn quad_form_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v = random_unit(&mut rng, 3);
        assert_close(quad_form(&v, &CMat::identity(3)).unwrap(), 1.0, 1e-12);

        let e0 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        assert_close(quad_form(&e0, &CMat::diag(&[4.0, 7.0])).unwrap(), 4.0, 1e-12);

        // v' (w w') v = |v' w|^2
        for _ in 0..20 {
            let v = random_unit(&mut rng, 4);
            let w = random_unit(&mut rng, 4);
            let m = CMat::outer(&w, &w);
            let q = quad_form(&v, &m).unwrap();
            let expect = inner(&v, &w).norm_sqr();
            assert_close(q, expect, 1e-12);
        }
    }

    #[test]
    fn quad_form_dimension_mismatch_errors() {
        let v = vec![c(1.0, 0.0); 3];
        assert!(quad_form(&v, &CMat::identity(2)).is_err());
    }

    #[test]
    fn cholesky_logdet_matches_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for n in 1..=6 {
            let a = random_cmat(&mut rng, n, n);
            let m = a.matmul(&a.adjoint()).add(&CMat::identity(n).scale(0.5));
            let ld = logdet_pd(&m).unwrap();
            let (vals, _) = eigh(&m).unwrap();
            let expect: f64 = vals.iter().map(|l| l.ln()).sum();
            assert_close(ld, expect, 1e-9);
        }
    }

    #[test]
    fn inverse_pd_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            let a = random_cmat(&mut rng, n, n);
            let m = a.matmul(&a.adjoint()).add(&CMat::identity(n).scale(0.3));
            let inv = inverse_pd(&m).unwrap();
            let prod = m.matmul(&inv);
            assert!(prod.sub(&CMat::identity(n)).max_abs() <= 1e-9);
        }
    }

    proptest! {
        #[test]
        fn prop_kron_mixed_product(seed in 0u64..500, na in 1usize..5, nb in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_cmat(&mut rng, na, na);
            let b = random_cmat(&mut rng, nb, nb);
            let cmt = random_cmat(&mut rng, na, na);
            let d = random_cmat(&mut rng, nb, nb);
            let lhs = kron(&a, &b).matmul(&kron(&cmt, &d));
            let rhs = kron(&a.matmul(&cmt), &b.matmul(&d));
            prop_assert!(lhs.sub(&rhs).max_abs() <= 1e-12 * (1.0 + lhs.max_abs()));
        }

        #[test]
        fn prop_quad_form_nonnegative_on_psd(seed in 0u64..500, n in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_hermitian(&mut rng, n);
            let p = project_psd(&h).unwrap();
            let v: CVec = (0..n)
                .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            let q = quad_form(&v, &p).unwrap();
            prop_assert!(q >= -1e-10);
        }

        #[test]
        fn prop_eigh_reconstructs(seed in 0u64..300, n in 1usize..7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_hermitian(&mut rng, n);
            let (vals, vecs) = eigh(&m).unwrap();
            let mut recon = CMat::zeros(n, n);
            for (k, &lam) in vals.iter().enumerate() {
                let col = vecs.col(k);
                recon.add_scaled(&CMat::outer(&col, &col), lam);
            }
            prop_assert!(recon.sub(&m).max_abs() <= 1e-10 * (1.0 + m.max_abs()));
        }
    }
}
