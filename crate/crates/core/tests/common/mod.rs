#![allow(dead_code)]

//! Shared helpers for the integration suites: seeded samplers and the
//! printed closed forms used as independent oracles.

use multigamma::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c_in(rng: &mut ChaCha8Rng, re: (f64, f64), im: (f64, f64)) -> Complex64 {
    Complex64::new(rng.gen_range(re.0..re.1), rng.gen_range(im.0..im.1))
}

/// Nonzero complex entries in an annulus, any argument.
pub fn random_periods(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| {
            let rad = rng.gen_range(0.5..1.5);
            let th = rng.gen_range(-PI..PI);
            Complex64::new(rad * th.cos(), rad * th.sin())
        })
        .collect()
}

/// Periods with pairwise arguments separated (mod π) so every ratio stays
/// off the real axis; spread across both half-planes when `full_plane`.
pub fn spread_periods(rng: &mut ChaCha8Rng, len: usize, full_plane: bool) -> Vec<Complex64> {
    loop {
        let (base, span) = if full_plane {
            (-1.3, 2.6)
        } else {
            (0.15, 1.25)
        };
        let mut angles: Vec<f64> = (0..len).map(|_| base + rng.gen_range(0.0..span)).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ok = angles.windows(2).all(|w| {
            let gap = (w[1] - w[0]) % PI;
            gap > 0.2 && (PI - gap) > 0.2
        });
        if !ok {
            continue;
        }
        return angles
            .into_iter()
            .map(|th| {
                let rad = rng.gen_range(0.7..1.4);
                Complex64::new(rad * th.cos(), rad * th.sin())
            })
            .collect();
    }
}

/// The printed closed form of `B_11`, ascending coefficients.
pub fn b11_printed(w1: Complex64) -> Vec<Complex64> {
    vec![c(-0.5, 0.0), 1.0 / w1]
}

/// The printed closed form of `B_22`, ascending coefficients.
pub fn b22_printed(w1: Complex64, w2: Complex64) -> Vec<Complex64> {
    let p = w1 * w2;
    vec![
        (w1 * w1 + w2 * w2 + 3.0 * p) / (6.0 * p),
        -(w1 + w2) / p,
        1.0 / p,
    ]
}

/// The printed closed form of `B_33`, ascending coefficients.
pub fn b33_printed(w1: Complex64, w2: Complex64, w3: Complex64) -> Vec<Complex64> {
    let p = w1 * w2 * w3;
    let e1 = w1 + w2 + w3;
    let e2 = w1 * w2 + w2 * w3 + w3 * w1;
    vec![
        -e1 * e2 / (4.0 * p),
        (w1 * w1 + w2 * w2 + w3 * w3 + 3.0 * e2) / (2.0 * p),
        -3.0 * e1 / (2.0 * p),
        1.0 / p,
    ]
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}
