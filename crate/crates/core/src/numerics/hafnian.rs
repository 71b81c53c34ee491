//! Hafnians: sums over perfect matchings of products of matched entries.

use nalgebra::{ComplexField, DMatrix};

use crate::{Error, Result};

/// Largest dimension accepted by the exhaustive [`hafnian`].
pub const HAFNIAN_MAX_DIM: usize = 24;

/// Hafnian by exhaustive enumeration of the `(n−1)!!` perfect matchings.
///
/// Only the upper triangle is read. The 0×0 hafnian is 1 and any
/// odd-dimensional hafnian is 0.
pub fn hafnian<T>(b: &DMatrix<T>) -> Result<T>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = b.nrows();
    if n != b.ncols() {
        return Err(Error::Dimension(format!(
            "hafnian of a {}x{} matrix",
            n,
            b.ncols()
        )));
    }
    if n > HAFNIAN_MAX_DIM {
        return Err(Error::InvalidArgument(format!(
            "hafnian dimension {n} exceeds the enumeration cap {HAFNIAN_MAX_DIM}"
        )));
    }
    if n % 2 == 1 {
        return Ok(T::zero());
    }
    if n == 0 {
        return Ok(T::one());
    }

    let half = n / 2;
    let entry = |i: usize, j: usize| if i < j { b[(i, j)] } else { b[(j, i)] };

    // Depth-first walk: level ℓ pairs the lowest unmatched index with a partner.
    let mut mask = 0u32;
    let mut first = [0usize; HAFNIAN_MAX_DIM / 2];
    let mut partner = [0usize; HAFNIAN_MAX_DIM / 2];
    let mut next = [0usize; HAFNIAN_MAX_DIM / 2];
    let mut prod = [T::one(); HAFNIAN_MAX_DIM / 2 + 1];
    let mut total = T::zero();
    let mut level = 0usize;
    first[0] = 0;
    next[0] = 1;
    loop {
        let i = first[level];
        let mut j = next[level];
        while j < n && (mask >> j) & 1 == 1 {
            j += 1;
        }
        if j >= n {
            if level == 0 {
                break;
            }
            level -= 1;
            mask &= !((1 << first[level]) | (1 << partner[level]));
            continue;
        }
        next[level] = j + 1;
        partner[level] = j;
        prod[level + 1] = prod[level] * entry(i, j);
        if level + 1 == half {
            total += prod[half];
            continue;
        }
        mask |= (1 << i) | (1 << j);
        level += 1;
        let lowest = (!mask).trailing_zeros() as usize;
        first[level] = lowest;
        next[level] = lowest + 1;
    }
    Ok(total)
}

/// Hafnian of the matrix built from `a` by repeating row/column `j`
/// `reps[j]` times and then zeroing the diagonal.
///
/// Copies of the same index pair with each other through `a[(j, j)]`.
/// The sum runs over pair-multiplicity patterns `M` (symmetric, row sums
/// `reps`) rather than individual matchings:
///
/// `Σ_M Π_j reps_j! / (Π_{i<j} M_ij! · Π_j M_jj! 2^{M_jj}) · Π a_ij^{M_ij}`,
///
/// so its cost is independent of the total dimension `Σ reps`.
pub fn hafnian_repeated<T>(a: &DMatrix<T>, reps: &[usize]) -> Result<T>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let k = a.nrows();
    if k != a.ncols() || reps.len() != k {
        return Err(Error::Dimension(format!(
            "repeated hafnian: {}x{} matrix with {} repetition counts",
            a.nrows(),
            a.ncols(),
            reps.len()
        )));
    }
    let total: usize = reps.iter().sum();
    if total % 2 == 1 {
        return Ok(T::zero());
    }
    if total == 0 {
        return Ok(T::one());
    }

    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    let norm: f64 = reps.iter().map(|&r| factorial(r)).product();
    let mut rem = reps.to_vec();
    let mut acc = T::zero();
    walk(a, &pairs, 0, &mut rem, T::one(), 1.0, &mut acc);
    Ok(acc * T::from_real(norm))
}

fn walk<T>(
    a: &DMatrix<T>,
    pairs: &[(usize, usize)],
    at: usize,
    rem: &mut [usize],
    weight: T,
    denom: f64,
    acc: &mut T,
) where
    T: ComplexField<RealField = f64> + Copy,
{
    if at == pairs.len() {
        if rem.iter().all(|&r| r == 0) {
            *acc += weight * T::from_real(1.0 / denom);
        }
        return;
    }
    let (i, j) = pairs[at];
    let last_for_row = j + 1 == a.nrows();
    let (lo, hi) = if i == j {
        let hi = rem[i] / 2;
        if last_for_row {
            if rem[i] % 2 == 1 {
                return;
            }
            (hi, hi)
        } else {
            (0, hi)
        }
    } else {
        let hi = rem[i].min(rem[j]);
        if last_for_row {
            // row i has no later pairs left to absorb its remainder
            if rem[i] > rem[j] {
                return;
            }
            (rem[i], rem[i])
        } else {
            (0, hi)
        }
    };
    let aij = a[(i, j)];
    let mut power = T::one();
    for _ in 0..lo {
        power *= aij;
    }
    for m in lo..=hi {
        let d = if i == j {
            factorial(m) * 2f64.powi(m as i32)
        } else {
            factorial(m)
        };
        if i == j {
            rem[i] -= 2 * m;
        } else {
            rem[i] -= m;
            rem[j] -= m;
        }
        walk(a, pairs, at + 1, rem, weight * power, denom * d, acc);
        if i == j {
            rem[i] += 2 * m;
        } else {
            rem[i] += m;
            rem[j] += m;
        }
        power *= aij;
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
