//! Small complex-arithmetic helpers used across modules.

use num_complex::Complex64;
use std::f64::consts::PI;

pub fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

pub fn pi_i() -> Complex64 {
    Complex64::new(0.0, PI)
}

/// e^{2πi w}, the nome/argument map used throughout.
pub fn exp_2pi_i(w: Complex64) -> Complex64 {
    (two_pi_i() * w).exp()
}

/// e^w - 1 with full relative accuracy for small |w|.
pub fn expm1(w: Complex64) -> Complex64 {
    if w.norm() < 0.5 {
        // expm1(a) * cos(b) + (cos(b) - 1) + i e^a sin(b), all cancellation-free
        let ea = w.re.exp_m1();
        let (sb, cb) = w.im.sin_cos();
        let cbm1 = -2.0 * (w.im / 2.0).sin().powi(2);
        Complex64::new(ea * cb + cbm1, (ea + 1.0) * sb)
    } else {
        w.exp() - 1.0
    }
}

/// e^{2πi w} - 1, accurate near every integer w (reduce by the nearest
/// integer first; the function is 1-periodic in w).
pub fn exp_2pi_i_m1(w: Complex64) -> Complex64 {
    let n = w.re.round();
    expm1(two_pi_i() * Complex64::new(w.re - n, w.im))
}

/// cot(π w), reduced by the integer period so accuracy is uniform near the
/// poles at integer w.
pub fn cot_pi(w: Complex64) -> Complex64 {
    let n = w.re.round();
    let u = Complex64::new(w.re - n, w.im);
    let pu = PI * u;
    pu.cos() / pu.sin()
}

pub fn dist(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm()
}
