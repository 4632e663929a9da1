use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Real, Result};

/// Unitarity tolerance for matrices this crate constructs.
pub const BUILD_TOLERANCE: f64 = 1e-12;
/// Unitarity tolerance for matrices handed in from outside.
pub const EXTERNAL_TOLERANCE: f64 = 1e-8;

/// 2x2 transfer matrix acting on the creation operators of a mode pair.
///
/// Column convention: a photon entering mode `j` leaves in mode `k` with
/// amplitude `m[k][j]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeUnitary<T> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> TwoModeUnitary<T> {
    pub fn new(m: [[Complex<T>; 2]; 2]) -> Self {
        TwoModeUnitary { m }
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex::one(), Complex::zero());
        TwoModeUnitary { m: [[o, z], [z, o]] }
    }

    /// Balanced directional coupler `(1/sqrt2) [[1, 1], [1, -1]]`.
    pub fn dc() -> Self {
        let h = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
        TwoModeUnitary { m: [[h, h], [h, -h]] }
    }

    /// `diag(exp(i phi), 1)`.
    pub fn phase(phi: T) -> Self {
        let (o, z) = (Complex::one(), Complex::zero());
        TwoModeUnitary { m: [[T::cis(phi), z], [z, o]] }
    }

    /// Mach-Zehnder interferometer `DC . diag(e^{i theta2}, 1) . DC . diag(e^{i theta1}, 1)`,
    /// written out in closed form.
    pub fn mzi(theta1: T, theta2: T) -> Self {
        let half = theta2 / T::lit(2.0);
        let g = T::cis(half);
        let e1 = T::cis(theta1);
        let c = Complex::new(half.cos(), T::zero());
        let is = Complex::new(T::zero(), half.sin());
        TwoModeUnitary { m: [[g * e1 * c, g * is], [g * e1 * is, g * c]] }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let a = &self.m;
        let b = &rhs.m;
        let mut m = [[Complex::zero(); 2]; 2];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        TwoModeUnitary { m }
    }

    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        [self.m[0][0] * v[0] + self.m[0][1] * v[1], self.m[1][0] * v[0] + self.m[1][1] * v[1]]
    }

    /// Largest entry of `|U U^dagger - I|`.
    pub fn unitarity_deviation(&self) -> T {
        let mut dev = T::zero();
        for r in 0..2 {
            for c in 0..2 {
                let mut acc = Complex::zero();
                for k in 0..2 {
                    acc = acc + self.m[r][k] * self.m[c][k].conj();
                }
                if r == c {
                    acc = acc - Complex::one();
                }
                dev = dev.max(acc.norm());
            }
        }
        dev
    }

    pub fn max_deviation(&self, other: &Self) -> T {
        let mut dev = T::zero();
        for r in 0..2 {
            for c in 0..2 {
                dev = dev.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        dev
    }
}

/// Dense `M x M` complex transfer matrix of a multimode linear circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

#[derive(Serialize, Deserialize)]
struct TransferMatrixJson {
    dim: usize,
    /// Row-major `[re, im]` pairs.
    data: Vec<[f64; 2]>,
}

impl<T: Real> TransferMatrix<T> {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex::zero(); dim * dim];
        for k in 0..dim {
            data[k * dim + k] = Complex::one();
        }
        TransferMatrix { dim, data }
    }

    pub fn from_rows(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::shape(format!("{} entries for a {dim}x{dim} matrix", data.len())));
        }
        Ok(TransferMatrix { dim, data })
    }

    /// `U` acting on modes `(i, j)`, identity elsewhere.
    pub fn embed(dim: usize, u: &TwoModeUnitary<T>, i: usize, j: usize) -> Self {
        let mut t = Self::identity(dim);
        t[(i, i)] = u.m[0][0];
        t[(i, j)] = u.m[0][1];
        t[(j, i)] = u.m[1][0];
        t[(j, j)] = u.m[1][1];
        t
    }

    pub fn diagonal(phases: &[T]) -> Self {
        let dim = phases.len();
        let mut t = Self::identity(dim);
        for (k, &p) in phases.iter().enumerate() {
            t[(k, k)] = T::cis(p);
        }
        t
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    /// `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut data = vec![Complex::zero(); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    data[r * n + c] = data[r * n + c] + a * rhs.data[k * n + c];
                }
            }
        }
        TransferMatrix { dim: n, data }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut data = vec![Complex::zero(); n * n];
        for r in 0..n {
            for c in 0..n {
                data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        TransferMatrix { dim: n, data }
    }

    /// Largest entry of `|U U^dagger - I|`.
    pub fn unitarity_deviation(&self) -> T {
        let prod = self.matmul(&self.adjoint());
        let mut dev = T::zero();
        for r in 0..self.dim {
            for c in 0..self.dim {
                let target = if r == c { Complex::one() } else { Complex::zero() };
                dev = dev.max((prod[(r, c)] - target).norm());
            }
        }
        dev
    }

    pub fn ensure_unitary(&self, tolerance: f64) -> Result<()> {
        let dev = self.unitarity_deviation();
        if dev.as_f64() > tolerance || !dev.is_finite() {
            return Err(Error::NonUnitary(dev.as_f64()));
        }
        Ok(())
    }

    pub fn max_deviation(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Frobenius distance squared.
    pub fn distance_sqr(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        let json = TransferMatrixJson {
            dim: self.dim,
            data: self.data.iter().map(|c| [c.re.as_f64(), c.im.as_f64()]).collect(),
        };
        Ok(serde_json::to_string(&json)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let json: TransferMatrixJson = serde_json::from_str(text)?;
        let data = json.data.iter().map(|&[re, im]| Complex::new(T::lit(re), T::lit(im))).collect();
        Self::from_rows(json.dim, data)
    }
}

impl<T> std::ops::Index<(usize, usize)> for TransferMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.data[r * self.dim + c]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for TransferMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[r * self.dim + c]
    }
}
