use num_complex::Complex;
use num_traits::{One, Zero};

use crate::{Error, Real, Result};

/// Largest permanent evaluated (Ryser costs `O(2^n n)`).
pub const MAX_PERMANENT_SIZE: usize = 12;

/// Permanent of the row-major `n x n` matrix `a` by Ryser's formula,
/// visiting column subsets in Gray-code order so each step updates the row
/// sums with a single column.
pub fn permanent<T: Real>(a: &[Complex<T>], n: usize) -> Result<Complex<T>> {
    if a.len() != n * n {
        return Err(Error::shape(format!("{} entries for a {n}x{n} matrix", a.len())));
    }
    if n > MAX_PERMANENT_SIZE {
        return Err(Error::PermanentTooLarge(n));
    }
    if n == 0 {
        return Ok(Complex::one());
    }
    let mut row_sums = vec![Complex::<T>::zero(); n];
    let mut in_set = vec![false; n];
    let mut total = Complex::zero();
    let mut size = 0usize;
    for k in 1u32..(1u32 << n) {
        let col = k.trailing_zeros() as usize;
        let sign = if in_set[col] { -T::one() } else { T::one() };
        in_set[col] = !in_set[col];
        if in_set[col] {
            size += 1;
        } else {
            size -= 1;
        }
        for (r, sum) in row_sums.iter_mut().enumerate() {
            *sum = *sum + a[r * n + col] * sign;
        }
        let prod = row_sums.iter().fold(Complex::one(), |acc, s| acc * s);
        if size % 2 == 0 {
            total = total + prod;
        } else {
            total = total - prod;
        }
    }
    Ok(if n % 2 == 0 { total } else { -total })
}
