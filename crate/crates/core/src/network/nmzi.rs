use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::fock::StateVector;
use crate::optics::{apply_pair_kernel, PairKernel};
use crate::scalar::{binomial, factorial};
use crate::{Real, Result};

/// Parameters of one nonlinear Mach-Zehnder interferometer: NS strengths in
/// the two arms and the static phase bias on the first arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NmziParams<T> {
    pub chi1: T,
    pub chi2: T,
    pub phi_b: T,
}

impl<T: Real> NmziParams<T> {
    /// Nonlinearity strengths are clamped to `[0, pi]`.
    pub fn new(chi1: T, chi2: T, phi_b: T) -> Self {
        let clamp = |x: T| x.max(T::zero()).min(T::PI());
        NmziParams { chi1: clamp(chi1), chi2: clamp(chi2), phi_b }
    }
}

#[inline]
fn parity_sign<T: Real>(exponent: i64) -> T {
    if exponent.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Closed-form NMZI transform `DC . NS_1(chi1) NS_2(chi2) Phase_1(phi_b) . DC`
/// for every pair occupation with up to `max_photons` photons.
///
/// For input `|n, m>` the amplitude on `|pt, qt>` is
/// `2^-(n+m) sum_{p} [sum_j C(n,j) C(m,p-j) (-1)^(m-p+j)]
///  e^{i p(p-1) chi1/2} e^{i q(q-1) chi2/2} e^{i phi_b p}
///  [sum_k C(p,k) C(q,pt-k) (-1)^(q-pt+k)] sqrt(pt! qt! / (n! m!))`
/// with `q = n + m - p`.
pub fn nmzi_kernel<T: Real>(params: &NmziParams<T>, max_photons: usize) -> PairKernel<T> {
    let half = T::lit(0.5);
    let fact: Vec<T> = (0..=max_photons).map(factorial).collect();
    let blocks = (0..=max_photons)
        .map(|s| {
            let w = s + 1;
            // Coupler coefficients: coupler[out * w + in] without normalization.
            let mut coupler = vec![T::zero(); w * w];
            for n in 0..=s {
                let m = s - n;
                for p in 0..=s {
                    let mut acc = T::zero();
                    for j in 0..=p.min(n) {
                        if p - j > m {
                            continue;
                        }
                        acc = acc
                            + binomial::<T>(n, j)
                                * binomial::<T>(m, p - j)
                                * parity_sign::<T>(m as i64 - p as i64 + j as i64);
                    }
                    coupler[p * w + n] = acc;
                }
            }
            let phase: Vec<Complex<T>> = (0..=s)
                .map(|p| {
                    let q = s - p;
                    let arg = T::lit((p * p.saturating_sub(1)) as f64) * params.chi1 * half
                        + T::lit((q * q.saturating_sub(1)) as f64) * params.chi2 * half
                        + params.phi_b * T::lit(p as f64);
                    T::cis(arg)
                })
                .collect();
            let scale = half.powi(s as i32);
            let mut block = vec![Complex::zero(); w * w];
            for n in 0..=s {
                let norm_in = (fact[n] * fact[s - n]).sqrt();
                for pt in 0..=s {
                    let mut acc = Complex::zero();
                    for p in 0..=s {
                        acc = acc + phase[p] * (coupler[pt * w + p] * coupler[p * w + n]);
                    }
                    let norm_out = (fact[pt] * fact[s - pt]).sqrt();
                    block[pt * w + n] = acc * (scale * norm_out / norm_in);
                }
            }
            block
        })
        .collect();
    PairKernel { blocks }
}

/// Apply one NMZI to modes `(i, j)` through the closed-form kernel.
pub fn apply_nmzi_closed<T: Real>(
    state: &StateVector<T>,
    params: &NmziParams<T>,
    modes: (usize, usize),
) -> Result<StateVector<T>> {
    let kernel = nmzi_kernel(params, state.basis().photons());
    apply_pair_kernel(state, modes, &kernel)
}
