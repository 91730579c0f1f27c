//! Adaptive Gauss–Kronrod quadrature for vector-valued integrands.

use crate::error::{Error, Result};
use crate::scalar::{cst, from_usize, to_f64, Scalar};

// 7-point Gauss / 15-point Kronrod abscissae and weights on [−1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment<T> {
    a: T,
    b: T,
    value: Vec<T>,
    error: Vec<T>,
}

fn gk15<T: Scalar, F>(f: &mut F, a: T, b: T, dim: usize, buf: &mut [T]) -> Segment<T>
where
    F: FnMut(T, &mut [T]),
{
    let half = (b - a) * cst(0.5);
    let mid = (a + b) * cst(0.5);
    let mut kron = vec![T::zero(); dim];
    let mut gauss = vec![T::zero(); dim];
    let mut accumulate = |t: T, wk: T, wg: Option<T>, buf: &mut [T]| {
        f(t, buf);
        for i in 0..dim {
            kron[i] = kron[i] + wk * buf[i];
            if let Some(w) = wg {
                gauss[i] = gauss[i] + w * buf[i];
            }
        }
    };
    for j in 0..8 {
        let wk = cst::<T>(WGK[j]);
        let wg = if j % 2 == 1 { Some(cst::<T>(WG[j / 2])) } else { None };
        if j == 7 {
            accumulate(mid, wk, wg, buf);
        } else {
            let dx = half * cst(XGK[j]);
            accumulate(mid - dx, wk, wg, buf);
            accumulate(mid + dx, wk, wg, buf);
        }
    }
    let value: Vec<T> = kron.iter().map(|&k| k * half).collect();
    let error: Vec<T> = kron.iter().zip(&gauss).map(|(&k, &g)| ((k - g) * half).abs()).collect();
    Segment { a, b, value, error }
}

/// Integrates a vector-valued `f` over `[0, ∞)` to relative tolerance `tol`
/// per component.
///
/// `tail(T)` must bound `∫_T^∞ |f_i|` for every component. Components whose
/// magnitude falls below `floor` are held to the absolute tolerance `tol·floor`.
pub fn integrate_half_line<T: Scalar, F, G>(mut f: F, dim: usize, tail: G, tol: T, floor: T) -> Result<(Vec<T>, Vec<T>)>
where
    F: FnMut(T, &mut [T]),
    G: Fn(T) -> T,
{
    let mut buf = vec![T::zero(); dim];
    let mut segs: Vec<Segment<T>> = Vec::new();
    let mut edges = vec![T::zero(), cst(0.5), T::one()];
    let mut end = T::one();
    while edges.len() < 8 {
        end = end * cst(2.0);
        edges.push(end);
    }
    for w in edges.windows(2) {
        segs.push(gk15(&mut f, w[0], w[1], dim, &mut buf));
    }
    let totals = |segs: &[Segment<T>]| -> (Vec<T>, Vec<T>) {
        let mut v = vec![T::zero(); dim];
        let mut e = vec![T::zero(); dim];
        for s in segs {
            for i in 0..dim {
                v[i] = v[i] + s.value[i];
                e[i] = e[i] + s.error[i];
            }
        }
        (v, e)
    };
    // Extend the domain until the tail is negligible for every component.
    let mut guard = 0;
    loop {
        let (v, _) = totals(&segs);
        let smallest = v
            .iter()
            .map(|x| x.abs().max(floor))
            .fold(T::infinity(), |a, b| a.min(b));
        if tail(end) <= tol * smallest * cst(0.25) {
            break;
        }
        let next = end * cst(2.0);
        segs.push(gk15(&mut f, end, next, dim, &mut buf));
        end = next;
        guard += 1;
        if guard > 80 {
            return Err(Error::NonConvergence {
                estimate: to_f64(tail(end) / smallest),
                tolerance: to_f64(tol),
                grid: segs.len(),
            });
        }
    }
    let tail_end = tail(end);
    for _round in 0..60 {
        let (v, e) = totals(&segs);
        let target: Vec<T> = v.iter().map(|x| tol * x.abs().max(floor) * cst(0.5)).collect();
        let done = (0..dim).all(|i| e[i] + tail_end <= target[i] * cst(2.0));
        if done {
            let err = e.iter().map(|&x| x + tail_end).collect();
            return Ok((v, err));
        }
        let n = from_usize::<T>(segs.len());
        let mut next: Vec<Segment<T>> = Vec::with_capacity(segs.len() * 2);
        for s in segs.into_iter() {
            let split = (0..dim).any(|i| s.error[i] * n > target[i]);
            if split {
                let m = (s.a + s.b) * cst(0.5);
                next.push(gk15(&mut f, s.a, m, dim, &mut buf));
                next.push(gk15(&mut f, m, s.b, dim, &mut buf));
            } else {
                next.push(s);
            }
        }
        segs = next;
        if segs.len() > 200_000 {
            break;
        }
    }
    let (v, e) = totals(&segs);
    let worst = (0..dim)
        .map(|i| to_f64(e[i] / v[i].abs().max(floor)))
        .fold(0.0, f64::max);
    Err(Error::NonConvergence {
        estimate: worst,
        tolerance: to_f64(tol),
        grid: segs.len(),
    })
}
