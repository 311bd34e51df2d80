//! Small dense complex linear algebra: just enough for correlation
//! matrices (Hermitian eigendecomposition, quadratic forms) and MMSE
//! combining (Cholesky solves). Matrices here are at most a few hundred
//! rows, so everything is row-major `Vec` storage and O(n³) algorithms.

use std::ops::{Index, IndexMut};

use crate::error::{invalid, Error, Result};
use crate::{Complex, Real};

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_rows(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != dim * dim {
            return invalid(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            ));
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self + s·I`
    pub fn add_identity(&self, s: T) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m[(i, i)].re = m[(i, i)].re + s;
        }
        m
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return invalid("matrix dimension mismatch");
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// `A x`
    pub fn mul_vec(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if x.len() != self.dim {
            return invalid(format!(
                "vector of length {} against {}x{} matrix",
                x.len(),
                self.dim,
                self.dim
            ));
        }
        Ok((0..self.dim).map(|i| dot(self.row(i), x)).collect())
    }

    /// `xᴴ A x` without any PSD clipping; the imaginary part is roundoff
    /// when `A` is Hermitian.
    pub fn hermitian_form(&self, x: &[Complex<T>]) -> Result<Complex<T>> {
        let ax = self.mul_vec(x)?;
        Ok(x.iter()
            .zip(&ax)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (xi, yi)| {
                acc + xi.conj() * yi
            }))
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn frobenius_distance(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc + (a - b).norm_sqr())
            .sqrt()
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_defect() <= tol * T::one().max(self.max_abs())
    }

    /// Replaces the matrix with `(A + Aᴴ)/2` so downstream code can rely on
    /// exact symmetry.
    pub fn symmetrize(&mut self) {
        let n = self.dim;
        let half = T::lit(0.5);
        for i in 0..n {
            self.data[i * n + i].im = T::zero();
            for j in (i + 1)..n {
                let avg = (self[(i, j)] + self[(j, i)].conj()) * half;
                self[(i, j)] = avg;
                self[(j, i)] = avg.conj();
            }
        }
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

/// Unconjugated dot product `Σ aᵢ bᵢ`.
pub fn dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| {
            acc + x * y
        })
}

/// Conjugated inner product `aᴴ b`.
pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| {
            acc + x.conj() * y
        })
}

pub fn norm_sqr<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
}

/// Lower-triangular Cholesky factor of a Hermitian positive-definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    lower: CMatrix<T>,
}

impl<T: Real> Cholesky<T> {
    pub fn new(a: &CMatrix<T>) -> Result<Self> {
        let n = a.dim();
        let mut l = CMatrix::zeros(n);
        for j in 0..n {
            let mut diag = a[(j, j)].re;
            for k in 0..j {
                diag = diag - l[(j, k)].norm_sqr();
            }
            if !(diag > T::zero()) || !diag.is_finite() {
                return Err(Error::Numerical(format!(
                    "matrix not positive definite (pivot {j} = {diag})"
                )));
            }
            let ljj = diag.sqrt();
            l[(j, j)] = Complex::new(ljj, T::zero());
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s = s - l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(Self { lower: l })
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let n = self.lower.dim();
        if b.len() != n {
            return invalid("right-hand side length mismatch");
        }
        let l = &self.lower;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s = s - l[(i, k)] * y[k];
            }
            y[i] = s / l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s = s - l[(k, i)].conj() * y[k];
            }
            y[i] = s / l[(i, i)];
        }
        Ok(y)
    }
}

/// Eigendecomposition `A = V diag(λ) Vᴴ` of a Hermitian matrix, eigenvalues
/// ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: CMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// Cyclic complex Jacobi. Each rotation first removes the phase of the
    /// pivot with a diagonal unitary, then applies a real Givens rotation.
    pub fn new(a: &CMatrix<T>) -> Result<Self> {
        let n = a.dim();
        let mut m = a.clone();
        m.symmetrize();
        let mut v = CMatrix::identity(n);
        let scale = T::one().max(m.max_abs());
        let eps = T::epsilon();
        let max_sweeps = 100;

        for _ in 0..max_sweeps {
            let mut off = T::zero();
            for i in 0..n {
                for j in (i + 1)..n {
                    off = off + m[(i, j)].norm_sqr();
                }
            }
            if off.sqrt() <= eps * eps.sqrt() * scale {
                return Ok(Self::sorted(&m, v));
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let b = m[(p, q)];
                    let r = b.norm();
                    if r <= eps * eps * scale {
                        continue;
                    }
                    let phase = b / r;
                    let app = m[(p, p)].re;
                    let aqq = m[(q, q)].re;
                    let theta = (aqq - app) / (T::lit(2.0) * r);
                    let sign = if theta >= T::zero() {
                        T::one()
                    } else {
                        -T::one()
                    };
                    let t = sign / (theta.abs() + (theta * theta + T::one()).sqrt());
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    // U = [[c, s], [-s·e^{-iα}, c·e^{-iα}]] on (p, q).
                    let ph_conj = phase.conj();
                    let u_pp = Complex::new(c, T::zero());
                    let u_pq = Complex::new(s, T::zero());
                    let u_qp = ph_conj * (-s);
                    let u_qq = ph_conj * c;

                    for k in 0..n {
                        let mkp = m[(k, p)];
                        let mkq = m[(k, q)];
                        m[(k, p)] = mkp * u_pp + mkq * u_qp;
                        m[(k, q)] = mkp * u_pq + mkq * u_qq;
                    }
                    for k in 0..n {
                        let mpk = m[(p, k)];
                        let mqk = m[(q, k)];
                        m[(p, k)] = u_pp.conj() * mpk + u_qp.conj() * mqk;
                        m[(q, k)] = u_pq.conj() * mpk + u_qq.conj() * mqk;
                    }
                    m[(p, q)] = Complex::new(T::zero(), T::zero());
                    m[(q, p)] = Complex::new(T::zero(), T::zero());
                    m[(p, p)].im = T::zero();
                    m[(q, q)].im = T::zero();
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * u_pp + vkq * u_qp;
                        v[(k, q)] = vkp * u_pq + vkq * u_qq;
                    }
                }
            }
        }
        Err(Error::Numerical(format!(
            "Jacobi eigensolver did not converge in {max_sweeps} sweeps"
        )))
    }

    fn sorted(m: &CMatrix<T>, v: CMatrix<T>) -> Self {
        let n = m.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            m[(a, a)]
                .re
                .partial_cmp(&m[(b, b)].re)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let values = order.iter().map(|&k| m[(k, k)].re).collect();
        let vectors = CMatrix::from_fn(n, |i, j| v[(i, order[j])]);
        Self { values, vectors }
    }

    /// `V diag(f(λ)) Vᴴ`
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> CMatrix<T> {
        let n = self.values.len();
        let mapped: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = CMatrix::from_fn(n, |i, j| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (k, &m) in mapped.iter().enumerate() {
                acc = acc + self.vectors[(i, k)] * self.vectors[(j, k)].conj() * m;
            }
            acc
        });
        out.symmetrize();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;

    fn random_unitary(n: usize, rng: &mut impl Rng) -> CMatrix<f64> {
        // Gram–Schmidt on random complex columns.
        let mut cols: Vec<Vec<C>> = Vec::new();
        while cols.len() < n {
            let mut v: Vec<C> = (0..n)
                .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            for c in &cols {
                let proj = inner(c, &v);
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= ci * proj;
                }
            }
            let nrm = norm_sqr(&v).sqrt();
            if nrm > 1e-6 {
                cols.push(v.into_iter().map(|z| z / nrm).collect());
            }
        }
        CMatrix::from_fn(n, |i, j| cols[j][i])
    }

    #[test]
    fn jacobi_recovers_constructed_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 5, 12] {
            let u = random_unitary(n, &mut rng);
            let spectrum: Vec<f64> = (0..n).map(|k| k as f64 - 2.5).collect();
            let d = CMatrix::from_real_diagonal(&spectrum);
            let a = u.matmul(&d).unwrap().matmul(&u.conj_transpose()).unwrap();
            let eig = HermitianEigen::new(&a).unwrap();
            for (got, want) in eig.values.iter().zip(&spectrum) {
                assert!((got - want).abs() < 1e-10, "{got} vs {want}");
            }
            let back = eig.reconstruct_with(|l| l);
            assert!(back.frobenius_distance(&a) < 1e-10);
        }
    }

    #[test]
    fn cholesky_solves_hermitian_system() {
        let a = CMatrix::from_rows(
            2,
            vec![
                C::new(4.0, 0.0),
                C::new(1.0, 1.0),
                C::new(1.0, -1.0),
                C::new(3.0, 0.0),
            ],
        )
        .unwrap();
        let x = vec![C::new(1.0, 2.0), C::new(-0.5, 0.25)];
        let b = a.mul_vec(&x).unwrap();
        let got = Cholesky::new(&a).unwrap().solve(&b).unwrap();
        for (g, w) in got.iter().zip(&x) {
            assert!((g - w).norm() < 1e-12);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = CMatrix::<f64>::from_real_diagonal(&[1.0, -1.0]);
        assert!(matches!(Cholesky::new(&a), Err(Error::Numerical(_))));
    }

    #[test]
    fn hermitian_form_of_real_symmetric() {
        let a = CMatrix::from_rows(
            2,
            vec![
                C::new(1.0, 0.0),
                C::new(0.5, 0.0),
                C::new(0.5, 0.0),
                C::new(1.0, 0.0),
            ],
        )
        .unwrap();
        let q = a
            .hermitian_form(&[C::new(1.0, 0.0), C::new(1.0, 0.0)])
            .unwrap();
        assert!((q.re - 3.0).abs() < 1e-15 && q.im.abs() < 1e-15);
    }
}
