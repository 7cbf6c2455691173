//! Dense real symmetric and complex Hermitian eigensolvers.
//!
//! Householder tridiagonalization followed by the implicit QL algorithm
//! (the `tred2`/`tql2` pair from EISPACK, by way of JAMA). Hermitian matrices
//! are mapped onto the real symmetric problem of twice the dimension,
//! `[[Re, -Im], [Im, Re]]`, whose spectrum is the Hermitian spectrum with
//! every eigenvalue repeated.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::{Error, Result};

/// Square dense matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> f64>(n: usize, mut f: F) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Sub-matrix on the given row/column indices.
    pub fn select(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(idx.len(), |a, b| self[(idx[a], idx[b])])
    }

    /// Errors unless `|M_ij - M_ji| <= rel_tol * max|M|` everywhere.
    pub fn check_symmetric(&self, rel_tol: f64) -> Result<()> {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let asym = (self[(i, j)] - self[(j, i)]).abs();
                if asym > rel_tol * scale {
                    return Err(Error::NotSymmetric {
                        row: i,
                        col: j,
                        asym,
                    });
                }
            }
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Square dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest `|M_ij - conj(M_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn check_hermitian(&self, rel_tol: f64) -> Result<()> {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for i in 0..self.n {
            for j in i..self.n {
                let asym = (self[(i, j)] - self[(j, i)].conj()).norm();
                if asym > rel_tol * scale {
                    return Err(Error::NotHermitian {
                        row: i,
                        col: j,
                        asym,
                    });
                }
            }
        }
        Ok(())
    }

    /// True when every imaginary part is at most `tol` in magnitude.
    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.im.abs() <= tol)
    }

    pub fn real_part(&self) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|z| z.re).collect(),
        }
    }

    /// Real symmetric embedding `[[Re, -Im], [Im, Re]]`.
    pub fn real_embedding(&self) -> Matrix {
        let n = self.n;
        let mut m = Matrix::zeros(2 * n);
        for i in 0..n {
            for j in 0..n {
                let z = self[(i, j)];
                m[(i, j)] = z.re;
                m[(i + n, j + n)] = z.re;
                m[(i, j + n)] = -z.im;
                m[(i + n, j)] = z.im;
            }
        }
        m
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: Option<Matrix>,
}

/// Eigen-decomposition of a complex Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// `vectors[k]` is the eigenvector for `values[k]`.
    pub vectors: Option<Vec<Vec<Complex64>>>,
}

const MAX_QL_ITERATIONS: usize = 60;

/// Eigenvalues (and optionally eigenvectors) of a real symmetric matrix.
pub fn symmetric_eigen(m: &Matrix, want_vectors: bool) -> Result<SymmetricEigen> {
    m.check_symmetric(1e-12)?;
    let n = m.dim();
    if n == 0 {
        return Ok(SymmetricEigen {
            values: vec![],
            vectors: want_vectors.then(|| Matrix::zeros(0)),
        });
    }
    // Only the lower triangle is read; symmetrize to absorb round-off.
    let mut v = Matrix::from_fn(n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, &mut d, &mut e);
    tql2(&mut v, &mut d, &mut e, want_vectors)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = want_vectors.then(|| Matrix::from_fn(n, |i, k| v[(i, order[k])]));
    Ok(SymmetricEigen { values, vectors })
}

/// Ascending eigenvalues of a real symmetric matrix.
pub fn symmetric_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    Ok(symmetric_eigen(m, false)?.values)
}

/// Eigen-decomposition of a complex Hermitian matrix.
///
/// Real matrices (all `|Im| <= 1e-15·max|M|`) are solved directly; otherwise
/// through the doubled real embedding, keeping one of each eigenvalue pair.
pub fn hermitian_eigen(m: &ComplexMatrix, want_vectors: bool) -> Result<HermitianEigen> {
    m.check_hermitian(1e-12)?;
    let n = m.dim();
    if m.is_real(1e-15 * m.max_abs()) {
        let eig = symmetric_eigen(&m.real_part(), want_vectors)?;
        let vectors = eig.vectors.map(|v| {
            (0..n)
                .map(|k| (0..n).map(|i| Complex64::new(v[(i, k)], 0.0)).collect())
                .collect()
        });
        return Ok(HermitianEigen {
            values: eig.values,
            vectors,
        });
    }

    let eig = symmetric_eigen(&m.real_embedding(), want_vectors)?;
    // Each Hermitian eigenvalue appears twice; the pair (x, y) and (-y, x)
    // span the same complex vector x + i·y up to a phase.
    let values: Vec<f64> = eig.values.iter().step_by(2).copied().collect();
    let vectors = eig.vectors.map(|v| {
        let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut k = 0;
        while out.len() < n && k < 2 * n {
            let candidate: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new(v[(i, k)], v[(i + n, k)]))
                .collect();
            k += 1;
            // Gram-Schmidt against accepted vectors of (numerically) the same
            // eigenvalue; the doubled space holds each complex vector twice.
            let mut w = candidate;
            for u in &out {
                let overlap: Complex64 = u.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= overlap * ui;
                }
            }
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.5 {
                for wi in &mut w {
                    *wi /= norm;
                }
                out.push(w);
            }
        }
        out
    });
    Ok(HermitianEigen { values, vectors })
}

/// Householder reduction to tridiagonal form. On return `d` holds the
/// diagonal, `e[1..]` the sub-diagonal and `v` the accumulated transform.
fn tred2(v: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let n = v.dim();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }

            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL iterations on the tridiagonal matrix left by [`tred2`].
fn tql2(v: &mut Matrix, d: &mut [f64], e: &mut [f64], want_vectors: bool) -> Result<()> {
    let n = v.dim();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::EigenNoConvergence(MAX_QL_ITERATIONS));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if want_vectors {
                        for k in 0..n {
                            h = v[(k, i + 1)];
                            v[(k, i + 1)] = s * v[(k, i)] + c * h;
                            v[(k, i)] = c * v[(k, i)] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Cyclic Jacobi rotations; slow but independent of the QL path.
    fn jacobi_eigenvalues(m: &Matrix) -> Vec<f64> {
        let n = m.dim();
        let mut a = m.clone();
        for _sweep in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)].powi(2))
                .sum();
            if off < 1e-30 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    if a[(p, q)].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut vals: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
        vals.sort_by(f64::total_cmp);
        vals
    }

    #[test]
    fn diagonal_matrix_sorted() {
        let m = Matrix::from_diagonal(&[3.0, 1.0, 2.0]);
        assert_eq!(symmetric_eigenvalues(&m).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x() {
        let m = Matrix::from_fn(2, |i, j| if i == j { 0.0 } else { 1.0 });
        let vals = symmetric_eigenvalues(&m).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-15);
        assert!((vals[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn one_by_one_and_empty() {
        let m = Matrix::from_diagonal(&[-4.5]);
        assert_eq!(symmetric_eigenvalues(&m).unwrap(), vec![-4.5]);
        assert!(symmetric_eigenvalues(&Matrix::zeros(0)).unwrap().is_empty());
    }

    #[test]
    fn rejects_non_symmetric() {
        let m = Matrix::from_fn(2, |i, j| if i < j { 1.0 } else { 0.0 });
        assert!(matches!(
            symmetric_eigenvalues(&m),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn hermitian_two_level() {
        // [[1, -i], [i, 1]] has eigenvalues 0 and 2.
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(1, 1)] = Complex64::new(1.0, 0.0);
        m[(0, 1)] = Complex64::new(0.0, -1.0);
        m[(1, 0)] = Complex64::new(0.0, 1.0);
        let eig = hermitian_eigen(&m, true).unwrap();
        assert!(eig.values[0].abs() < 1e-14);
        assert!((eig.values[1] - 2.0).abs() < 1e-14);
        let vecs = eig.vectors.unwrap();
        for (k, v) in vecs.iter().enumerate() {
            let mv: Vec<Complex64> = (0..2)
                .map(|i| (0..2).map(|j| m[(i, j)] * v[j]).sum())
                .collect();
            for i in 0..2 {
                assert!((mv[i] - v[i] * eig.values[k]).norm() < 1e-13);
            }
        }
    }

    fn random_symmetric(n: usize, seed: &[f64]) -> Matrix {
        Matrix::from_fn(n, |i, j| {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            seed[(a * 31 + b * 17) % seed.len()] * ((a + 2 * b) as f64).cos()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn ql_matches_jacobi_and_vectors_orthonormal(
            n in 1usize..14,
            seed in prop::collection::vec(-5.0f64..5.0, 40),
        ) {
            let m = random_symmetric(n, &seed);
            let eig = symmetric_eigen(&m, true).unwrap();
            let oracle = jacobi_eigenvalues(&m);
            let scale = m.max_abs().max(1.0);
            for (a, b) in eig.values.iter().zip(&oracle) {
                prop_assert!((a - b).abs() < 1e-10 * scale);
            }
            let v = eig.vectors.unwrap();
            for a in 0..n {
                let mv = m.mul_vec(&v.column(a));
                for i in 0..n {
                    prop_assert!((mv[i] - eig.values[a] * v[(i, a)]).abs() < 1e-10 * scale);
                }
                for b in 0..n {
                    let dot: f64 = (0..n).map(|i| v[(i, a)] * v[(i, b)]).sum();
                    let expected = if a == b { 1.0 } else { 0.0 };
                    prop_assert!((dot - expected).abs() < 1e-10);
                }
            }
        }

        #[test]
        fn hermitian_embedding_matches_direct_real(
            n in 1usize..8,
            seed in prop::collection::vec(-3.0f64..3.0, 40),
        ) {
            // A real symmetric matrix plus a zero imaginary part solved both
            // directly and through the embedding.
            let m = random_symmetric(n, &seed);
            let mut c = ComplexMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    c[(i, j)] = Complex64::new(m[(i, j)], 0.0);
                }
            }
            let direct = symmetric_eigenvalues(&m).unwrap();
            let via = symmetric_eigenvalues(&c.real_embedding()).unwrap();
            for (k, d) in direct.iter().enumerate() {
                prop_assert!((via[2 * k] - d).abs() < 1e-10);
                prop_assert!((via[2 * k + 1] - d).abs() < 1e-10);
            }
        }
    }
}
