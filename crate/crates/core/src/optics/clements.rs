use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{TransferMatrix, TwoModeUnitary};
use crate::{Error, Real, Result};

/// Mode pairs of a rectangular mesh in application order: column `c`
/// (zero-based) couples `(0,1), (2,3), ...` when `c` is even and
/// `(1,2), (3,4), ...` when odd; there are `M` columns and `M(M-1)/2` MZIs.
pub fn clements_pairs(modes: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(modes * modes.saturating_sub(1) / 2);
    for col in 0..modes {
        let mut k = col % 2;
        while k + 1 < modes {
            pairs.push((k, k + 1));
            k += 2;
        }
    }
    pairs
}

/// Phases of a full mesh: two per MZI plus one output phase per mode.
pub fn clements_param_count(modes: usize) -> usize {
    modes * modes
}

/// Transfer matrix of a rectangular MZI mesh. `theta` holds the `(theta1,
/// theta2)` pair of every MZI in [`clements_pairs`] order followed by `M`
/// output phases.
pub fn clements_mesh<T: Real>(theta: &[T], modes: usize) -> Result<TransferMatrix<T>> {
    let expected = clements_param_count(modes);
    if theta.len() != expected {
        return Err(Error::ParamCount { expected, got: theta.len() });
    }
    let pairs = clements_pairs(modes);
    let (mzi, output) = theta.split_at(2 * pairs.len());
    let mut v = TransferMatrix::identity(modes);
    for (&(i, j), t) in pairs.iter().zip(mzi.chunks_exact(2)) {
        let u = TwoModeUnitary::mzi(t[0], t[1]);
        v = TransferMatrix::embed(modes, &u, i, j).matmul(&v);
    }
    Ok(TransferMatrix::diagonal(output).matmul(&v))
}

/// Haar-random unitary: Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> TransferMatrix<T> {
    let mut cols: Vec<Vec<Complex<f64>>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| Complex::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
                .collect()
        })
        .collect();
    for c in 0..dim {
        for prev in 0..c {
            let dot: Complex<f64> = cols[prev].iter().zip(&cols[c]).map(|(a, b)| a.conj() * b).sum();
            let (head, tail) = cols.split_at_mut(c);
            for (x, p) in tail[0].iter_mut().zip(&head[prev]) {
                *x -= dot * p;
            }
        }
        let norm = cols[c].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut cols[c] {
            *x /= norm;
        }
    }
    let mut data = vec![Complex::new(T::zero(), T::zero()); dim * dim];
    for (c, col) in cols.iter().enumerate() {
        for (r, x) in col.iter().enumerate() {
            data[r * dim + c] = Complex::new(T::lit(x.re), T::lit(x.im));
        }
    }
    TransferMatrix::from_rows(dim, data).expect("square")
}
