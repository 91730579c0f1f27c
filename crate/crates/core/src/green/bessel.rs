//! Exponentially scaled modified Bessel functions `e^{−t} I_n(t)`.

use crate::scalar::{cst, from_usize, to_f64, Scalar};

/// Fills `out[n] = e^{−t} I_n(t)` for `n = 0..out.len()`, `t ≥ 0`.
///
/// Miller's backward recurrence `I_{n−1} = I_{n+1} + (2n/t) I_n`, normalized
/// by `e^{−t}(I₀ + 2 Σ_{n≥1} I_n) = 1`.
pub fn scaled_bessel_i<T: Scalar>(t: T, out: &mut [T]) {
    let nmax = out.len().saturating_sub(1);
    for v in out.iter_mut() {
        *v = T::zero();
    }
    if out.is_empty() {
        return;
    }
    if t == T::zero() {
        out[0] = T::one();
        return;
    }
    let start = nmax + 30 + (10.0 * to_f64(t).sqrt()).ceil() as usize;
    let two_over_t = cst::<T>(2.0) / t;
    let big = cst::<T>(1e200);
    let shrink = cst::<T>(1e-200);
    let mut hi = T::zero();
    let mut cur = cst::<T>(1e-280);
    let mut sum = T::zero();
    let mut n = start;
    while n > 0 {
        // cur = I_n, hi = I_{n+1}
        if n <= nmax {
            out[n] = cur;
        }
        sum = sum + cur;
        let lower = hi + two_over_t * from_usize::<T>(n) * cur;
        hi = cur;
        cur = lower;
        if cur > big {
            cur = cur * shrink;
            hi = hi * shrink;
            sum = sum * shrink;
            for v in out.iter_mut().skip(n.min(nmax + 1)) {
                *v = *v * shrink;
            }
        }
        n -= 1;
    }
    out[0] = cur;
    let norm = cur + cst::<T>(2.0) * sum;
    for v in out.iter_mut() {
        *v = *v / norm;
    }
}
