//! Dense matrix/vector algebra in two scalar regimes.
//!
//! The complex floating-point side ([`CMat`], [`CVec`]) provides
//! eigendecomposition of unitaries, singular values, rank, and nullspaces with
//! relative tolerances. Eigendecomposition of a unitary M goes through the
//! commuting Hermitian pair (M + M†)/2 and (M - M†)/(2i), each diagonalized by
//! a cyclic complex Jacobi kernel, which avoids a general nonsymmetric
//! eigensolver. Singular values come from one-sided Jacobi orthogonalization.
//!
//! The exact side ([`ExactMat`], [`ExactVec`]) carries [`CycloNum`] entries of
//! one shared conductor and supports exact Gaussian elimination, so statements
//! like "this nullspace is one-dimensional" are algebraic facts rather than
//! tolerance judgments.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactmath::{CycloNum, GaloisAut};

pub type CVec = Vec<Complex64>;

pub const DEFAULT_TOL: f64 = 1e-10;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CMat { nrows, ncols, data: vec![Complex64::new(0.0, 0.0); nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_columns(cols: &[CVec]) -> Self {
        let nrows = cols[0].len();
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows);
            for i in 0..nrows {
                m[(i, j)] = c[i];
            }
        }
        m
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> CVec {
        (0..self.nrows).map(|i| self[(i, j)]).collect()
    }

    pub fn matmul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.ncols, rhs.nrows, "shape mismatch");
        let mut out = CMat::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.ncols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> CVec {
        assert_eq!(self.ncols, v.len(), "shape mismatch");
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMat {
        CMat::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.nrows.min(self.ncols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, c: Complex64) -> CMat {
        let mut out = self.clone();
        for x in &mut out.data {
            *x *= c;
        }
        out
    }

    pub fn add(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&rhs.data) {
            *x += y;
        }
        out
    }

    pub fn sub(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&rhs.data) {
            *x -= y;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &CMat) -> f64 {
        self.sub(rhs).max_abs()
    }

    /// Max-norm deviation of M†M from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        self.dagger().matmul(self).max_abs_diff(&CMat::identity(self.ncols))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn pow(&self, k: u32) -> CMat {
        assert_eq!(self.nrows, self.ncols);
        let mut out = CMat::identity(self.nrows);
        for _ in 0..k {
            out = out.matmul(self);
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.ncols + j]
    }
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(a: &[Complex64]) -> f64 {
    inner(a, a).re.sqrt()
}

pub fn normalize(a: &[Complex64]) -> CVec {
    let n = vec_norm(a);
    a.iter().map(|c| c / n).collect()
}

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix.
/// Returns eigenvalues (unsorted) and the unitary V with A = V diag V†.
fn hermitian_eig(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows;
    let mut m = a.clone();
    let mut v = CMat::identity(n);
    let off = |m: &CMat| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s
    };
    let scale = m.max_abs().max(1e-300);
    for _sweep in 0..60 {
        if off(&m).sqrt() < 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.norm() < 1e-300 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Unitary 2x2 rotation [[c, s],[-s̄, c]] zeroing the (p,q) entry.
                let theta = (aqq - app) / (2.0 * apq.norm());
                let t = {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s_mag = t * c;
                let phase = apq / apq.norm();
                let s = phase * s_mag;
                // columns p and q of m (acting on the right by the rotation)
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * c - miq * s.conj();
                    m[(i, q)] = mip * s + miq * c;
                }
                // rows p and q (acting on the left by the adjoint)
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj * c - mqj * s;
                    m[(q, j)] = mpj * s.conj() + mqj * c;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * s.conj();
                    v[(i, q)] = vip * s + viq * c;
                }
            }
        }
    }
    let eig = (0..n).map(|i| m[(i, i)].re).collect();
    (eig, v)
}

/// Eigenvalues of a Hermitian matrix (unsorted), by the Jacobi kernel.
pub fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    hermitian_eig(a).0
}

/// Eigendecomposition of a unitary matrix: clustered eigenvalues, each with an
/// orthonormal basis of its eigenspace, sorted by phase angle in [0, 2π).
pub fn eig_unitary(m: &CMat, tol: f64) -> Result<Vec<(Complex64, Vec<CVec>)>> {
    assert_eq!(m.nrows, m.ncols);
    let defect = m.unitarity_defect();
    if defect > tol.max(1e-8) {
        return Err(Error::NotUnitary(defect));
    }
    let n = m.nrows;
    let herm_re = m.add(&m.dagger()).scale(Complex64::new(0.5, 0.0));
    let (re_eigs, v) = hermitian_eig(&herm_re);
    // Cluster the real parts, then split each cluster by the imaginary part.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| re_eigs[i].partial_cmp(&re_eigs[j]).unwrap());
    let cluster_tol = (tol * 10.0).max(1e-12);
    let mut out: Vec<(Complex64, Vec<CVec>)> = vec![];
    let mut idx = 0;
    while idx < n {
        let mut group = vec![order[idx]];
        while idx + 1 < n && (re_eigs[order[idx + 1]] - re_eigs[group[0]]).abs() < cluster_tol {
            idx += 1;
            group.push(order[idx]);
        }
        idx += 1;
        // Within the cluster, diagonalize the skew part (M - M†)/(2i)
        // restricted to the cluster's span.
        let basis: Vec<CVec> = group.iter().map(|&k| v.column(k)).collect();
        let herm_im = m.sub(&m.dagger()).scale(Complex64::new(0.0, -0.5));
        let k = basis.len();
        let mut restricted = CMat::zeros(k, k);
        for (i, bi) in basis.iter().enumerate() {
            let hbj: Vec<CVec> = basis.iter().map(|bj| herm_im.matvec(bj)).collect();
            for (j, h) in hbj.iter().enumerate() {
                restricted[(i, j)] = inner(bi, h);
            }
        }
        let (im_eigs, w) = hermitian_eig(&restricted);
        // Rotate the basis and regroup by imaginary eigenvalue.
        let mut rotated: Vec<(f64, CVec)> = (0..k)
            .map(|c| {
                let mut col = vec![Complex64::new(0.0, 0.0); n];
                for (r, b) in basis.iter().enumerate() {
                    for (x, bx) in col.iter_mut().zip(b) {
                        *x += w[(r, c)] * bx;
                    }
                }
                (im_eigs[c], col)
            })
            .collect();
        rotated.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut j = 0;
        while j < rotated.len() {
            let mut vecs = vec![rotated[j].1.clone()];
            let im0 = rotated[j].0;
            while j + 1 < rotated.len() && (rotated[j + 1].0 - im0).abs() < cluster_tol {
                j += 1;
                vecs.push(rotated[j].1.clone());
            }
            j += 1;
            let lam = Complex64::new(re_eigs[group[0]], im0);
            // snap to the unit circle
            let lam = lam / lam.norm();
            out.push((lam, vecs));
        }
    }
    // A cluster in the real part can reappear after the imaginary-part split
    // (e.g. ±i share real part 0 with +1 clusters separated); merge by value.
    let mut merged: Vec<(Complex64, Vec<CVec>)> = vec![];
    for (lam, vecs) in out {
        if let Some(entry) = merged
            .iter_mut()
            .find(|(l, _)| (*l - lam).norm() < cluster_tol.max(1e-9))
        {
            entry.1.extend(vecs);
        } else {
            merged.push((lam, vecs));
        }
    }
    let phase = |z: Complex64| {
        let mut a = z.im.atan2(z.re);
        if a < -1e-12 {
            a += 2.0 * std::f64::consts::PI;
        }
        a
    };
    merged.sort_by(|a, b| phase(a.0).partial_cmp(&phase(b.0)).unwrap());
    // Re-orthonormalize each eigenbasis and validate the decomposition.
    for (lam, vecs) in &mut merged {
        let mut ortho: Vec<CVec> = vec![];
        for v0 in vecs.iter() {
            let mut r = v0.clone();
            for _ in 0..2 {
                for q in &ortho {
                    let c = inner(q, &r);
                    for (x, qx) in r.iter_mut().zip(q) {
                        *x -= c * qx;
                    }
                }
            }
            let nrm = vec_norm(&r);
            if nrm > 1e-8 {
                ortho.push(r.iter().map(|c| c / nrm).collect());
            }
        }
        for v0 in &ortho {
            let mv = m.matvec(v0);
            let resid: f64 = mv
                .iter()
                .zip(v0)
                .map(|(a, b)| (a - *lam * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if resid > (tol * 100.0).max(1e-8) {
                return Err(Error::Invalid(format!(
                    "eigendecomposition residual {resid:.3e} for eigenvalue {lam}"
                )));
            }
        }
        *vecs = ortho;
    }
    Ok(merged)
}

/// Singular values (descending) and right-singular vectors by one-sided
/// Jacobi: A V = U Σ with the returned V unitary.
pub fn svd_jacobi(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.ncols;
    let mut w = a.clone();
    let mut v = CMat::identity(n);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let cp = w.column(p);
                let cq = w.column(q);
                let app = inner(&cp, &cp).re;
                let aqq = inner(&cq, &cq).re;
                let apq = inner(&cp, &cq);
                if apq.norm() <= 1e-30 + 1e-16 * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq.norm());
                let t = {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s_mag = t * c;
                let phase = apq / apq.norm();
                let s = phase * s_mag;
                for i in 0..w.nrows {
                    let wip = w[(i, p)];
                    let wiq = w[(i, q)];
                    w[(i, p)] = wip * c - wiq * s.conj();
                    w[(i, q)] = wip * s + wiq * c;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * s.conj();
                    v[(i, q)] = vip * s + viq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut pairs: Vec<(f64, usize)> = (0..n)
        .map(|j| (vec_norm(&w.column(j)), j))
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let sigma: Vec<f64> = pairs.iter().map(|(s, _)| *s).collect();
    let vperm = CMat::from_fn(n, n, |i, j| v[(i, pairs[j].1)]);
    (sigma, vperm)
}

/// Rank (count of singular values above tol·σ_max) and an orthonormal basis
/// of the nullspace.
pub fn rank_nullspace(m: &CMat, tol: f64) -> (usize, Vec<CVec>) {
    let (sigma, v) = svd_jacobi(m);
    let smax = sigma.first().copied().unwrap_or(0.0);
    let rank = sigma.iter().filter(|&&s| s > tol * smax && s > 0.0).count();
    let null: Vec<CVec> = (rank..m.ncols).map(|j| v.column(j)).collect();
    (rank, null)
}

/// Exact column vector over one cyclotomic conductor.
pub type ExactVec = Vec<CycloNum>;

/// Dense matrix of exact cyclotomic entries sharing one conductor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMat {
    pub nrows: usize,
    pub ncols: usize,
    conductor: u32,
    data: Vec<CycloNum>,
}

impl ExactMat {
    pub fn zeros(conductor: u32, nrows: usize, ncols: usize) -> Self {
        ExactMat {
            nrows,
            ncols,
            conductor,
            data: vec![CycloNum::zero(conductor); nrows * ncols],
        }
    }

    pub fn identity(conductor: u32, n: usize) -> Self {
        let mut m = Self::zeros(conductor, n, n);
        for i in 0..n {
            m[(i, i)] = CycloNum::one(conductor);
        }
        m
    }

    pub fn from_fn(
        conductor: u32,
        nrows: usize,
        ncols: usize,
        mut f: impl FnMut(usize, usize) -> CycloNum,
    ) -> Self {
        let mut m = Self::zeros(conductor, nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                let v = f(i, j);
                assert_eq!(v.conductor(), conductor, "conductor mismatch");
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn matmul(&self, rhs: &ExactMat) -> ExactMat {
        assert_eq!(self.ncols, rhs.nrows, "shape mismatch");
        assert_eq!(self.conductor, rhs.conductor, "conductor mismatch");
        let mut out = ExactMat::zeros(self.conductor, self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.ncols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let t = a * b;
                        out[(i, j)] = &out[(i, j)] + &t;
                    }
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[CycloNum]) -> ExactVec {
        assert_eq!(self.ncols, v.len(), "shape mismatch");
        (0..self.nrows)
            .map(|i| {
                let mut acc = CycloNum::zero(self.conductor);
                for j in 0..self.ncols {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = &acc + &(a * &v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Conjugate transpose; conjugation is the Galois map ζ ↦ ζ^{N-1}.
    pub fn dagger(&self) -> ExactMat {
        ExactMat::from_fn(self.conductor, self.ncols, self.nrows, |i, j| self[(j, i)].conj())
    }

    pub fn galois(&self, g: &GaloisAut) -> ExactMat {
        ExactMat::from_fn(self.conductor, self.nrows, self.ncols, |i, j| g.apply(&self[(i, j)]))
    }

    pub fn scale(&self, c: &CycloNum) -> ExactMat {
        ExactMat::from_fn(self.conductor, self.nrows, self.ncols, |i, j| &self[(i, j)] * c)
    }

    pub fn add(&self, rhs: &ExactMat) -> ExactMat {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        ExactMat::from_fn(self.conductor, self.nrows, self.ncols, |i, j| {
            &self[(i, j)] + &rhs[(i, j)]
        })
    }

    pub fn sub(&self, rhs: &ExactMat) -> ExactMat {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        ExactMat::from_fn(self.conductor, self.nrows, self.ncols, |i, j| {
            &self[(i, j)] - &rhs[(i, j)]
        })
    }

    pub fn neg(&self) -> ExactMat {
        ExactMat::from_fn(self.conductor, self.nrows, self.ncols, |i, j| -&self[(i, j)])
    }

    pub fn trace(&self) -> CycloNum {
        let mut acc = CycloNum::zero(self.conductor);
        for i in 0..self.nrows.min(self.ncols) {
            acc = &acc + &self[(i, i)];
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self == &ExactMat::identity(self.conductor, self.nrows)
    }

    pub fn to_cmat(&self) -> CMat {
        CMat::from_fn(self.nrows, self.ncols, |i, j| self[(i, j)].to_c64())
    }
}

impl std::ops::Index<(usize, usize)> for ExactMat {
    type Output = CycloNum;
    fn index(&self, (i, j): (usize, usize)) -> &CycloNum {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut CycloNum {
        &mut self.data[i * self.ncols + j]
    }
}

/// Exact reduced row echelon form, in place. Returns the pivot columns; the
/// elimination order is deterministic (first non-zero entry scanning rows in
/// order within each column).
pub fn exact_rref(m: &mut ExactMat) -> Vec<usize> {
    let mut pivots = vec![];
    let mut row = 0;
    for col in 0..m.ncols {
        if row >= m.nrows {
            break;
        }
        let Some(pr) = (row..m.nrows).find(|&r| !m[(r, col)].is_zero()) else {
            continue;
        };
        // swap rows
        if pr != row {
            for j in 0..m.ncols {
                let a = m[(pr, j)].clone();
                let b = m[(row, j)].clone();
                m[(pr, j)] = b;
                m[(row, j)] = a;
            }
        }
        let inv = m[(row, col)].inv().expect("pivot is non-zero");
        for j in col..m.ncols {
            m[(row, j)] = &m[(row, j)] * &inv;
        }
        for r in 0..m.nrows {
            if r != row && !m[(r, col)].is_zero() {
                let factor = m[(r, col)].clone();
                for j in col..m.ncols {
                    let t = &factor * &m[(row, j)];
                    m[(r, j)] = &m[(r, j)] - &t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Exact rank.
pub fn exact_rank(m: &ExactMat) -> usize {
    let mut work = m.clone();
    exact_rref(&mut work).len()
}

/// Exact nullspace basis: vectors v with M v = 0 exactly, produced in
/// elimination order (one per free column).
pub fn exact_nullspace(m: &ExactMat) -> Vec<ExactVec> {
    let n = m.conductor();
    let mut work = m.clone();
    let pivots = exact_rref(&mut work);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = vec![];
    for free in 0..m.ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![CycloNum::zero(n); m.ncols];
        v[free] = CycloNum::one(n);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&work[(r, free)];
        }
        debug_assert!(m.matvec(&v).iter().all(|c| c.is_zero()));
        basis.push(v);
    }
    basis
}
