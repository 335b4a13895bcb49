//! Adaptive Dormand–Prince 5(4) integration for small linear systems.

use crate::error::{Error, Result};
use crate::scalar::Real;

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights are the last row of A; these are the embedded fourth-order ones
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MAX_STEPS: usize = 100_000;

/// Integrates `y' = rhs(s, y)` from `s = 0` to `s = s_end` (either sign) with
/// mixed absolute/relative error control at `tol`.
pub(crate) fn dopri5<T: Real, const N: usize>(
    rhs: impl Fn(T, &[T; N]) -> [T; N],
    y0: [T; N],
    s_end: T,
    tol: T,
) -> Result<[T; N]> {
    let mut y = y0;
    if s_end == T::zero() {
        return Ok(y);
    }
    let dir = s_end.signum();
    let span = s_end.abs();
    let mut s = T::zero();
    let mut h = span.min(T::lit(0.01));
    let mut k = [[T::zero(); N]; 7];
    for _ in 0..MAX_STEPS {
        if s >= span {
            return Ok(y);
        }
        h = h.min(span - s);
        k[0] = rhs(dir * s, &y);
        for stage in 1..7 {
            let mut ys = y;
            for (n, v) in ys.iter_mut().enumerate() {
                for (j, kj) in k.iter().enumerate().take(stage) {
                    *v += dir * h * T::lit(A[stage][j]) * kj[n];
                }
            }
            k[stage] = rhs(dir * (s + T::lit(C[stage]) * h), &ys);
        }
        let mut y5 = y;
        let mut err = T::zero();
        for n in 0..N {
            let mut d5 = T::zero();
            let mut d4 = T::zero();
            for j in 0..6 {
                d5 += T::lit(A[6][j]) * k[j][n];
            }
            for j in 0..7 {
                d4 += T::lit(B4[j]) * k[j][n];
            }
            y5[n] += dir * h * d5;
            let scale = tol * (T::one() + y[n].abs().max(y5[n].abs()));
            err = err.max((dir * h * (d5 - d4)).abs() / scale);
        }
        if !err.is_finite() {
            return Err(Error::Instability {
                t: s.to_f64_lossy(),
                detail: "non-finite value in the parameter-space flow".into(),
            });
        }
        if err <= T::one() {
            s += h;
            y = y5;
        }
        let factor = if err == T::zero() {
            T::lit(5.0)
        } else {
            (T::lit(0.9) * err.powf(T::lit(-0.2))).max(T::lit(0.2)).min(T::lit(5.0))
        };
        h *= factor;
    }
    Err(Error::Instability {
        t: s.to_f64_lossy(),
        detail: "step budget exhausted in the parameter-space flow".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_matches_cos_sin() {
        let y = dopri5(|_, y: &[f64; 2]| [y[1], -y[0]], [1.0, 0.0], 2.5, 1e-12).unwrap();
        assert!((y[0] - 2.5f64.cos()).abs() < 1e-11);
        assert!((y[1] + 2.5f64.sin()).abs() < 1e-11);
        let back = dopri5(|_, y: &[f64; 2]| [y[1], -y[0]], y, -2.5, 1e-12).unwrap();
        assert!((back[0] - 1.0).abs() < 1e-11 && back[1].abs() < 1e-11);
    }

    #[test]
    fn time_dependent_forcing() {
        // y' = cos s, y(0) = 0
        let y = dopri5(|s: f64, _: &[f64; 1]| [s.cos()], [0.0], -1.3, 1e-12).unwrap();
        assert!((y[0] - (-1.3f64).sin()).abs() < 1e-12);
    }
}
