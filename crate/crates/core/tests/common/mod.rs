//! Random Gaussian states and transforms for property tests.
#![allow(dead_code)]

use ionfield::{CovarianceMatrix, SymplecticTransform};
use nalgebra::DMatrix;
use proptest::prelude::*;

/// One elementary symplectic layer: `(kind, i, j, parameter)`.
pub type Layer = (u8, usize, usize, f64);

pub fn layer(n: usize) -> impl Strategy<Value = Layer> {
    (0u8..4, 0..n, 0..n, -0.8f64..0.8)
}

/// Product of elementary layers on `modes` out of `n` total modes. Two-mode
/// layers with coinciding indices fall back to a single-mode squeeze.
pub fn symplectic_from(n: usize, modes: &[usize], layers: &[Layer]) -> SymplecticTransform {
    let mut s = SymplecticTransform::identity(n);
    for &(kind, i, j, p) in layers {
        let (a, b) = (modes[i % modes.len()], modes[j % modes.len()]);
        let l = match kind {
            0 => SymplecticTransform::single_mode_squeeze(n, p.exp(), &[a]),
            1 => SymplecticTransform::single_mode_rotation(n, 4.0 * p, &[a]),
            2 if a != b => SymplecticTransform::two_mode_squeeze(n, p, a, b),
            3 if a != b => SymplecticTransform::beam_splitter(n, 2.0 * p, a, b),
            _ => SymplecticTransform::single_mode_squeeze(n, (0.5 * p).exp(), &[a]),
        }
        .unwrap();
        s = l.compose(&s).unwrap();
    }
    s
}

/// `S · ⊕ₖ νₖ I₂ · Sᵀ`, pure when every `νₖ = 1`.
pub fn state_from(thermal: &[f64], layers: &[Layer]) -> CovarianceMatrix {
    let n = thermal.len();
    let diag = DMatrix::from_fn(
        2 * n,
        2 * n,
        |r, c| if r == c { thermal[r / 2] } else { 0.0 },
    );
    let all: Vec<usize> = (0..n).collect();
    let s = symplectic_from(n, &all, layers);
    s.apply(&CovarianceMatrix::new(diag).unwrap()).unwrap()
}

pub fn mixed_state(n: usize) -> impl Strategy<Value = CovarianceMatrix> {
    (
        prop::collection::vec(1.0f64..3.0, n),
        prop::collection::vec(layer(n), 1..8),
    )
        .prop_map(|(t, l)| state_from(&t, &l))
}

pub fn pure_state(n: usize) -> impl Strategy<Value = CovarianceMatrix> {
    prop::collection::vec(layer(n), 1..8).prop_map(move |l| state_from(&vec![1.0; n], &l))
}

pub fn symmetric(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |v| {
        let g = DMatrix::from_vec(n, n, v);
        (&g + g.transpose()) * 0.5
    })
}

/// Hafnian by pairing the first index with each partner in turn.
pub fn hafnian_recursive(b: &DMatrix<f64>, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 1.0;
    }
    let mut sum = 0.0;
    for p in 1..idx.len() {
        let rest: Vec<usize> = idx[1..]
            .iter()
            .enumerate()
            .filter(|&(q, _)| q + 1 != p)
            .map(|(_, &v)| v)
            .collect();
        sum += b[(idx[0], idx[p])] * hafnian_recursive(b, &rest);
    }
    sum
}

/// `exp(t₊K₊) · t₀^{K₀} · exp(t₋K₋)` in the 2×2 representation
/// `K₊ = [[0,1],[0,0]]`, `K₋ = [[0,0],[−1,0]]`, `K₀ = diag(½, −½)`.
pub fn ordered_product(t0: f64, tp: f64, tm: f64) -> DMatrix<f64> {
    let up = DMatrix::from_row_slice(2, 2, &[1.0, tp, 0.0, 1.0]);
    let mid = DMatrix::from_row_slice(2, 2, &[t0.sqrt(), 0.0, 0.0, 1.0 / t0.sqrt()]);
    let down = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, -tm, 1.0]);
    up * mid * down
}

pub fn generator(v0: f64, vp: f64, vm: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.5 * v0, vp, -vm, -0.5 * v0])
}
