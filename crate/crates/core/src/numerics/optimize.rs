//! Golden-section maximization of a scalar function.

use crate::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const MAX_ITER: usize = 200;
const MAX_WIDENINGS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub argmax: f64,
    pub max: f64,
    pub iterations: usize,
}

/// Maximizes `f` on `bracket` to an argmax uncertainty below `tol`.
///
/// `f` is assumed unimodal on the bracket. If an endpoint beats both interior
/// probes the bracket is widened by its own width on that side (up to three
/// times) before giving up.
pub fn maximize_1d<F>(mut f: F, bracket: (f64, f64), tol: f64) -> Result<Maximum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bad bracket [{lo}, {hi}] or tolerance {tol}"
        )));
    }

    let mut widenings = 0;
    loop {
        let f_lo = f(lo)?;
        let f_hi = f(hi)?;
        let width = hi - lo;
        let c = hi - INV_PHI * width;
        let d = lo + INV_PHI * width;
        let f_c = f(c)?;
        let f_d = f(d)?;
        let interior = f_c.max(f_d);
        if f_lo <= interior && f_hi <= interior {
            return golden(&mut f, (lo, hi), (c, f_c), (d, f_d), tol);
        }
        if widenings == MAX_WIDENINGS {
            return Err(Error::InvalidArgument(format!(
                "maximum not bracketed by [{lo}, {hi}] after {MAX_WIDENINGS} widenings"
            )));
        }
        widenings += 1;
        if f_lo > interior {
            lo -= width;
        }
        if f_hi > interior {
            hi += width;
        }
    }
}

fn golden<F>(
    f: &mut F,
    (mut a, mut b): (f64, f64),
    (mut c, mut f_c): (f64, f64),
    (mut d, mut f_d): (f64, f64),
    tol: f64,
) -> Result<Maximum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut iterations = 0;
    while b - a > tol {
        if iterations == MAX_ITER {
            return Err(Error::NoConvergence {
                what: "golden-section search",
                iterations,
                residual: b - a,
            });
        }
        iterations += 1;
        if f_c >= f_d {
            b = d;
            d = c;
            f_d = f_c;
            c = b - INV_PHI * (b - a);
            f_c = f(c)?;
        } else {
            a = c;
            c = d;
            f_c = f_d;
            d = a + INV_PHI * (b - a);
            f_d = f(d)?;
        }
    }
    let (argmax, max) = if f_c >= f_d { (c, f_c) } else { (d, f_d) };
    Ok(Maximum {
        argmax,
        max,
        iterations,
    })
}
