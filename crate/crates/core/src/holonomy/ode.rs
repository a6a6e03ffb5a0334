//! Adaptive Dormand–Prince 5(4) for a scalar complex ODE.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-16,
            h_min: 1e-12,
            max_steps: 200_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OdeStats {
    pub steps: usize,
    pub rejected: usize,
    /// Largest accepted local error estimate.
    pub max_error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OdeFailure {
    StepUnderflow(f64),
    TooManySteps,
    NonFinite(f64),
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `x' = f(s, x)` from `s = 0` to `s = 1`.
pub fn integrate(
    f: &dyn Fn(f64, Complex64) -> Complex64,
    x0: Complex64,
    ctl: StepControl,
) -> Result<(Complex64, OdeStats), OdeFailure> {
    let (x, stats) = integrate_system(&|s, x: &[Complex64], out: &mut [Complex64]| out[0] = f(s, x[0]), &[x0], ctl)?;
    Ok((x[0], stats))
}

/// Integrates a system with one shared step sequence, so that all
/// components see the same discretisation.
pub fn integrate_system(
    f: &dyn Fn(f64, &[Complex64], &mut [Complex64]),
    x0: &[Complex64],
    ctl: StepControl,
) -> Result<(Vec<Complex64>, OdeStats), OdeFailure> {
    let dim = x0.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut s: f64 = 0.0;
    let mut x = x0.to_vec();
    let mut h: f64 = 1e-3;
    let mut stats = OdeStats::default();
    let mut k = vec![vec![zero; dim]; 7];
    let mut xi = vec![zero; dim];
    let mut x5 = vec![zero; dim];
    f(s, &x, &mut k[0]);
    while s < 1.0 {
        if stats.steps + stats.rejected >= ctl.max_steps {
            return Err(OdeFailure::TooManySteps);
        }
        h = h.min(1.0 - s);
        for i in 1..7 {
            for d in 0..dim {
                xi[d] = x[d];
                for j in 0..i {
                    xi[d] += k[j][d] * (h * A[i][j]);
                }
            }
            let (_, rest) = k.split_at_mut(i);
            f(s + C[i] * h, &xi, &mut rest[0]);
        }
        let mut err: f64 = 0.0;
        let mut abs_err: f64 = 0.0;
        for d in 0..dim {
            let mut y5 = x[d];
            let mut y4 = x[d];
            for i in 0..7 {
                y5 += k[i][d] * (h * B5[i]);
                y4 += k[i][d] * (h * B4[i]);
            }
            if !y5.re.is_finite() || !y5.im.is_finite() {
                return Err(OdeFailure::NonFinite(s));
            }
            let scale = ctl.atol + ctl.rtol * x[d].norm().max(y5.norm());
            let e = (y5 - y4).norm();
            err = err.max(e / scale);
            abs_err = abs_err.max(e);
            x5[d] = y5;
        }
        if err <= 1.0 {
            s += h;
            x.copy_from_slice(&x5);
            // first-same-as-last
            k.swap(0, 6);
            stats.steps += 1;
            stats.max_error = stats.max_error.max(abs_err);
        } else {
            stats.rejected += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < ctl.h_min && s < 1.0 {
            return Err(OdeFailure::StepUnderflow(s));
        }
    }
    Ok((x, stats))
}
