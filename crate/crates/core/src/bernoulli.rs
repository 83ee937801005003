//! Multiple Bernoulli polynomials `B_{r,n}(z|ω)` and the cubic `Q(z;τ,σ)`.
//!
//! `B_{r,n}` is defined by the generating function
//!
//! ```text
//! t^r e^{zt} / ∏_{j=1..r} (e^{ω_j t} - 1)  =  Σ_n B_{r,n}(z|ω) t^n / n!
//! ```
//!
//! Coefficients are assembled from the classical Bernoulli numbers seeded as
//! exact rationals, with one conversion to complex at the end; this keeps
//! high-order convolutions free of avoidable cancellation.  `B_{r,r}` is the
//! exponent of every modular prefactor downstream, so this module is the
//! foundation the identity engine rests on.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::OnceLock;

use crate::policy::EvalError;

/// Largest classical Bernoulli index kept in the exact table.
pub const MAX_CLASSICAL_INDEX: usize = 64;

/// Largest supported order `n` of `B_{r,n}`.  The identities only need
/// `n = r` up to about 6; the headroom is cheap.
pub const MAX_ORDER: usize = 16;

/// Ordered tuple of nonzero complex quasi-periods `ω = (ω_1, …, ω_r)`.
///
/// Most consumers require at least one entry; the empty vector is meaningful
/// only for the Bernoulli generating function itself, where it degenerates
/// to `B_{0,n}(z) = z^n` (the natural right-hand side of the shift
/// relation at r = 1).
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodVector {
    entries: Vec<Complex64>,
}

impl PeriodVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self, EvalError> {
        if entries.iter().any(|w| w.norm() == 0.0 || !w.is_finite()) {
            return Err(EvalError::InvalidParameter(
                "period entries must be nonzero and finite".into(),
            ));
        }
        Ok(PeriodVector { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `|ω| = ω_1 + … + ω_r`.
    pub fn sum(&self) -> Complex64 {
        self.entries.iter().sum()
    }

    /// `ω⁻(j)`: the vector with the j-th entry removed.
    pub fn removed(&self, j: usize) -> PeriodVector {
        let mut e = self.entries.clone();
        e.remove(j);
        PeriodVector { entries: e }
    }

    /// `ω[j]`: the vector with the j-th entry negated.
    pub fn flipped(&self, j: usize) -> PeriodVector {
        let mut e = self.entries.clone();
        e[j] = -e[j];
        PeriodVector { entries: e }
    }

    /// `cω`: every entry scaled by `c`.
    pub fn scaled(&self, c: Complex64) -> PeriodVector {
        PeriodVector {
            entries: self.entries.iter().map(|w| c * w).collect(),
        }
    }
}

impl std::ops::Index<usize> for PeriodVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.entries[i]
    }
}

/// Exact rationals `B_0, …, B_K` (classical Bernoulli numbers,
/// `B_1 = -1/2` convention).
#[derive(Clone, Debug)]
pub struct RationalBernoulliTable {
    values: Vec<BigRational>,
}

impl RationalBernoulliTable {
    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn get(&self, k: usize) -> &BigRational {
        &self.values[k]
    }

    pub fn as_f64(&self, k: usize) -> f64 {
        self.values[k]
            .to_f64()
            .expect("Bernoulli number in f64 range")
    }
}

fn binomial_big(n: usize, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k.min(n - k) {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

fn full_table() -> &'static Vec<BigRational> {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut b: Vec<BigRational> = Vec::with_capacity(MAX_CLASSICAL_INDEX + 1);
        b.push(BigRational::one());
        for k in 1..=MAX_CLASSICAL_INDEX {
            // Σ_{j=0..k} C(k+1, j) B_j = 0
            let mut acc = BigRational::zero();
            for (j, bj) in b.iter().enumerate() {
                acc += BigRational::from(binomial_big(k + 1, j)) * bj;
            }
            b.push(-acc / BigRational::from(BigInt::from(k as i64 + 1)));
        }
        b
    })
}

/// The classical Bernoulli numbers `B_0 … B_{k_max}` as exact rationals.
///
/// Computed once through the standard recurrence and cached immutably;
/// `k_max` may not exceed [`MAX_CLASSICAL_INDEX`].
pub fn classical_bernoulli_numbers(k_max: usize) -> Result<RationalBernoulliTable, EvalError> {
    if k_max > MAX_CLASSICAL_INDEX {
        return Err(EvalError::InvalidParameter(format!(
            "k_max = {k_max} exceeds the table capacity {MAX_CLASSICAL_INDEX}"
        )));
    }
    Ok(RationalBernoulliTable {
        values: full_table()[..=k_max].to_vec(),
    })
}

/// `B_{r,n}(z|ω)` as a coefficient vector in `z`, ascending degree.
#[derive(Clone, Debug)]
pub struct BernoulliPoly {
    pub r: usize,
    pub n: usize,
    /// Coefficients of `z^0, z^1, …, z^n`.
    pub coeffs: Vec<Complex64>,
}

impl BernoulliPoly {
    /// Horner evaluation at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        poly::eval(&self.coeffs, z)
    }
}

/// Construct `B_{r,n}(·|ω)`.
///
/// Requires `omega.len() == r` and `n ≤` [`MAX_ORDER`].  The `t`-series of
/// each factor `ω_j t / (e^{ω_j t} - 1)` is seeded with the exact classical
/// Bernoulli numbers, the `r` series are convolved, the product is divided
/// by `ω_1⋯ω_r`, convolved with the `e^{zt}` expansion, and the `t^n`
/// coefficient is read off as a polynomial in `z` scaled by `n!`.
pub fn multiple_bernoulli_poly(
    r: usize,
    n: usize,
    omega: &PeriodVector,
) -> Result<BernoulliPoly, EvalError> {
    if omega.len() != r {
        return Err(EvalError::InvalidParameter(format!(
            "period vector has {} entries, expected r = {r}",
            omega.len()
        )));
    }
    if n > MAX_ORDER {
        return Err(EvalError::InvalidParameter(format!(
            "order n = {n} beyond truncation capacity {MAX_ORDER}"
        )));
    }
    let table = classical_bernoulli_numbers(n)?;

    // Product over j of the series Σ_k B_k (ω_j t)^k / k!, truncated at t^n.
    let mut prod: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n + 1];
    prod[0] = Complex64::new(1.0, 0.0);
    let mut inv_factorial = vec![1.0f64; n + 1];
    for k in 1..=n {
        inv_factorial[k] = inv_factorial[k - 1] / k as f64;
    }
    for j in 0..r {
        let w = omega[j];
        let mut factor: Vec<Complex64> = Vec::with_capacity(n + 1);
        let mut wk = Complex64::new(1.0, 0.0);
        for (k, inv_kf) in inv_factorial.iter().enumerate() {
            factor.push(wk * (table.as_f64(k) * inv_kf));
            wk *= w;
        }
        prod = poly::truncated_convolution(&prod, &factor, n);
    }
    let inv_period_product: Complex64 = omega
        .entries()
        .iter()
        .fold(Complex64::new(1.0, 0.0), |a, w| a / w);
    for p in prod.iter_mut() {
        *p *= inv_period_product;
    }

    // B_{r,n}(z) = n! Σ_m prod[n-m] z^m / m!
    let mut n_fact = 1.0f64;
    for k in 2..=n {
        n_fact *= k as f64;
    }
    let coeffs: Vec<Complex64> = (0..=n)
        .map(|m| prod[n - m] * (n_fact * inv_factorial[m]))
        .collect();
    Ok(BernoulliPoly { r, n, coeffs })
}

/// `B_{r,n}(z|ω)` evaluated at a point.
pub fn eval_multiple_bernoulli(
    r: usize,
    n: usize,
    z: Complex64,
    omega: &PeriodVector,
) -> Result<Complex64, EvalError> {
    Ok(multiple_bernoulli_poly(r, n, omega)?.eval(z))
}

/// Coefficients of the modular cubic `Q(z;τ,σ)` from the elliptic gamma
/// transformation law, ascending degree.
///
/// `Q` equals `-B_{33}(z|τ,σ,-1)/3`; the coefficients here are assembled
/// from the explicit closed form so the equality stays an executable
/// cross-check rather than a definition.
pub fn q_cubic_coeffs(tau: Complex64, sigma: Complex64) -> Result<[Complex64; 4], EvalError> {
    if tau.norm() == 0.0 || sigma.norm() == 0.0 {
        return Err(EvalError::InvalidParameter(
            "q_cubic requires nonzero tau and sigma".into(),
        ));
    }
    let ts = tau * sigma;
    let one = Complex64::new(1.0, 0.0);
    let c3 = 1.0 / (3.0 * ts);
    let c2 = -(tau + sigma - one) / (2.0 * ts);
    let c1 = (tau * tau + sigma * sigma + one + 3.0 * ts - 3.0 * tau - 3.0 * sigma) / (6.0 * ts);
    let c0 = -(tau + sigma - one) * (ts - tau - sigma) / (12.0 * ts);
    Ok([c0, c1, c2, c3])
}

/// The modular cubic `Q(z;τ,σ)` evaluated at `z`.
pub fn q_cubic(z: Complex64, tau: Complex64, sigma: Complex64) -> Result<Complex64, EvalError> {
    Ok(poly::eval(&q_cubic_coeffs(tau, sigma)?, z))
}

/// Plain polynomial helpers on ascending coefficient vectors.  Used by the
/// coefficient-level relation checks and the identity engine's exponent
/// comparisons.
pub mod poly {
    use num_complex::Complex64;

    pub fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Coefficients of `p(z + a)`.
    pub fn shift_arg(coeffs: &[Complex64], a: Complex64) -> Vec<Complex64> {
        let n = coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        // binomial expansion of each z^k
        for (k, ck) in coeffs.iter().enumerate() {
            let mut binom = 1.0f64;
            let mut apow = Complex64::new(1.0, 0.0);
            for m in (0..=k).rev() {
                out[m] += ck * binom * apow;
                binom = binom * m as f64 / (k - m + 1) as f64;
                apow *= a;
            }
        }
        out
    }

    /// Coefficients of `p(c z)`.
    pub fn scale_arg(coeffs: &[Complex64], c: Complex64) -> Vec<Complex64> {
        let mut cpow = Complex64::new(1.0, 0.0);
        coeffs
            .iter()
            .map(|ck| {
                let v = ck * cpow;
                cpow *= c;
                v
            })
            .collect()
    }

    /// Coefficients of `p'(z)`.
    pub fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
        coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, ck)| ck * k as f64)
            .collect()
    }

    pub fn scaled(coeffs: &[Complex64], c: Complex64) -> Vec<Complex64> {
        coeffs.iter().map(|ck| ck * c).collect()
    }

    pub fn sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let n = a.len().max(b.len());
        (0..n)
            .map(|k| {
                let x = a.get(k).copied().unwrap_or_default();
                let y = b.get(k).copied().unwrap_or_default();
                x - y
            })
            .collect()
    }

    pub fn add(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let n = a.len().max(b.len());
        (0..n)
            .map(|k| {
                let x = a.get(k).copied().unwrap_or_default();
                let y = b.get(k).copied().unwrap_or_default();
                x + y
            })
            .collect()
    }

    pub fn max_norm(coeffs: &[Complex64]) -> f64 {
        coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Relative coefficient distance: `max |a_k - b_k| / max(1, ‖a‖, ‖b‖)`.
    pub fn rel_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
        let scale = 1.0f64.max(max_norm(a)).max(max_norm(b));
        max_norm(&sub(a, b)) / scale
    }

    pub(crate) fn truncated_convolution(
        a: &[Complex64],
        b: &[Complex64],
        n: usize,
    ) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for (i, ai) in a.iter().enumerate().take(n + 1) {
            for (j, bj) in b.iter().enumerate().take(n + 1 - i) {
                out[i + j] += ai * bj;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pv(entries: &[Complex64]) -> PeriodVector {
        PeriodVector::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn classical_table_small_values() {
        let t = classical_bernoulli_numbers(2).unwrap();
        assert_eq!(t.values().len(), 3);
        assert_eq!(t.get(0), &BigRational::from(BigInt::from(1)));
        assert_eq!(
            t.get(1),
            &BigRational::new(BigInt::from(-1), BigInt::from(2))
        );
        assert_eq!(
            t.get(2),
            &BigRational::new(BigInt::from(1), BigInt::from(6))
        );
    }

    #[test]
    fn classical_table_edges() {
        let t = classical_bernoulli_numbers(0).unwrap();
        assert_eq!(t.values().len(), 1);
        assert_eq!(t.get(0), &BigRational::from(BigInt::from(1)));

        // odd values vanish from B_3 on
        let t = classical_bernoulli_numbers(12).unwrap();
        for k in [3usize, 5, 7, 9, 11] {
            assert!(t.get(k).is_zero(), "B_{k} should vanish");
        }
        assert_eq!(
            t.get(12),
            &BigRational::new(BigInt::from(-691), BigInt::from(2730))
        );
        assert!(classical_bernoulli_numbers(65).is_err());
    }

    #[test]
    fn b11_matches_printed_formula() {
        let w1 = c(0.7, -1.3);
        let p = multiple_bernoulli_poly(1, 1, &pv(&[w1])).unwrap();
        assert!((p.coeffs[0] - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((p.coeffs[1] - 1.0 / w1).norm() < 1e-15);
        // midpoint zero
        let v = p.eval(w1 / 2.0);
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn b21_equal_periods_is_z_minus_one() {
        let p = multiple_bernoulli_poly(2, 1, &pv(&[c(1.0, 0.0), c(1.0, 0.0)])).unwrap();
        assert!((p.eval(c(1.0, 0.0))).norm() < 1e-14);
        assert!((p.coeffs[1] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((p.coeffs[0] + c(1.0, 0.0)).norm() < 1e-14);
    }

    /// The printed closed form of B_22, coded independently.
    fn b22_printed(z: Complex64, w1: Complex64, w2: Complex64) -> Complex64 {
        z * z / (w1 * w2) - (w1 + w2) / (w1 * w2) * z
            + (w1 * w1 + w2 * w2 + 3.0 * w1 * w2) / (6.0 * w1 * w2)
    }

    /// The printed closed form of B_33, coded independently.
    fn b33_printed(z: Complex64, w1: Complex64, w2: Complex64, w3: Complex64) -> Complex64 {
        let p = w1 * w2 * w3;
        z * z * z / p - 3.0 * (w1 + w2 + w3) / (2.0 * p) * z * z
            + (w1 * w1 + w2 * w2 + w3 * w3 + 3.0 * (w1 * w2 + w2 * w3 + w3 * w1)) / (2.0 * p) * z
            - (w1 + w2 + w3) * (w1 * w2 + w2 * w3 + w3 * w1) / (4.0 * p)
    }

    #[test]
    fn b22_matches_printed_formula() {
        let ones = pv(&[c(1.0, 0.0), c(1.0, 0.0)]);
        let v = eval_multiple_bernoulli(2, 2, c(0.0, 0.0), &ones).unwrap();
        assert!((v - c(5.0 / 6.0, 0.0)).norm() < 1e-14);

        let (w1, w2) = (c(2.0, 0.0), c(0.0, 3.0));
        let z = c(0.3, 0.1);
        let v = eval_multiple_bernoulli(2, 2, z, &pv(&[w1, w2])).unwrap();
        assert!((v - b22_printed(z, w1, w2)).norm() < 1e-14);
    }

    #[test]
    fn b33_matches_printed_formula_and_reflects() {
        let (w1, w2, w3) = (c(1.0, 0.5), c(-0.3, 1.2), c(2.0, -0.4));
        let z = c(0.4, -0.2);
        let v = eval_multiple_bernoulli(3, 3, z, &pv(&[w1, w2, w3])).unwrap();
        assert!((v - b33_printed(z, w1, w2, w3)).norm() < 1e-13 * v.norm().max(1.0));

        // reflection at equal periods: B_33(3 - z) = -B_33(z)
        let ones = pv(&[c(1.0, 0.0); 3]);
        let z0 = c(0.7, 0.0);
        let a = eval_multiple_bernoulli(3, 3, c(3.0, 0.0) - z0, &ones).unwrap();
        let b = eval_multiple_bernoulli(3, 3, z0, &ones).unwrap();
        assert!((a + b).norm() < 1e-13);
    }

    #[test]
    fn leading_coefficient_is_inverse_period_product() {
        let w = pv(&[c(1.0, 0.5), c(-0.3, 1.2), c(2.0, -0.4)]);
        for n in 3..=6 {
            let p = multiple_bernoulli_poly(3, n, &w).unwrap();
            let lead = p.coeffs[n];
            let expect = 1.0 / (w[0] * w[1] * w[2]);
            assert!((lead - expect).norm() < 1e-13 * expect.norm());
        }
    }

    #[test]
    fn order_and_argument_errors() {
        let w = pv(&[c(1.0, 0.0)]);
        assert!(multiple_bernoulli_poly(1, MAX_ORDER + 1, &w).is_err());
        assert!(multiple_bernoulli_poly(2, 2, &w).is_err());
        assert!(PeriodVector::new(vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn empty_period_vector_gives_pure_power() {
        let e = pv(&[]);
        let p = multiple_bernoulli_poly(0, 4, &e).unwrap();
        for (k, ck) in p.coeffs.iter().enumerate() {
            let expect = if k == 4 { 1.0 } else { 0.0 };
            assert!((ck - c(expect, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn generating_function_oracle_on_small_circle() {
        // Σ_{n≤N} B_{r,n}(z|ω) t^n / n!  vs  t^r e^{zt} / Π (e^{ω_j t} - 1)
        let w = pv(&[c(1.0, 0.3), c(0.8, -0.5)]);
        let z = c(0.4, 0.2);
        let n_max = 16;
        let polys: Vec<BernoulliPoly> = (0..=n_max)
            .map(|n| multiple_bernoulli_poly(2, n, &w).unwrap())
            .collect();
        for k in 0..8 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
            let t = 0.1 * Complex64::new(theta.cos(), theta.sin());
            let mut sum = Complex64::new(0.0, 0.0);
            let mut tn_over_nfact = Complex64::new(1.0, 0.0);
            for (n, p) in polys.iter().enumerate() {
                sum += p.eval(z) * tn_over_nfact;
                tn_over_nfact *= t / (n as f64 + 1.0);
            }
            let direct =
                t * t * (z * t).exp() / ((w[0] * t).exp() - 1.0) / ((w[1] * t).exp() - 1.0);
            assert!(
                (sum - direct).norm() < 1e-10,
                "generating function mismatch at t = {t}"
            );
        }
    }

    #[test]
    fn relations_hold_coefficientwise() {
        let w = pv(&[c(0.9, 0.4), c(1.4, -0.7), c(0.5, 1.1)]);
        let r = 3;
        for n in 1..=5usize {
            let b = multiple_bernoulli_poly(r, n, &w).unwrap();

            // homogeneity: B(cz|cω) = c^{n-r} B(z|ω)
            let cc = c(1.3, -0.8);
            let bc = multiple_bernoulli_poly(r, n, &w.scaled(cc)).unwrap();
            let lhs = poly::scale_arg(&bc.coeffs, cc);
            let rhs = poly::scaled(&b.coeffs, cc.powi(n as i32 - r as i32));
            assert!(poly::rel_distance(&lhs, &rhs) < 1e-12, "homogeneity n={n}");

            // reflection: B(|ω|-z) = (-1)^n B(z); p(-z) shifted by -|ω| is p(|ω|-z)
            let reflected = poly::shift_arg(&poly::scale_arg(&b.coeffs, -Complex64::ONE), -w.sum());
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let rhs = poly::scaled(&b.coeffs, c(sign, 0.0));
            assert!(
                poly::rel_distance(&reflected, &rhs) < 1e-12,
                "reflection n={n}"
            );

            // shift: B_{r,n}(z+ω_j) - B_{r,n}(z) = n B_{r-1,n-1}(z|ω⁻(j))
            let j = 1;
            let shifted = poly::shift_arg(&b.coeffs, w[j]);
            let diff = poly::sub(&shifted, &b.coeffs);
            let small = multiple_bernoulli_poly(r - 1, n - 1, &w.removed(j)).unwrap();
            let rhs = poly::scaled(&small.coeffs, c(n as f64, 0.0));
            assert!(poly::rel_distance(&diff, &rhs) < 1e-12, "shift n={n}");

            // sign flip: B(z|ω[j]) = -B(z+ω_j|ω)
            let flip = multiple_bernoulli_poly(r, n, &w.flipped(j)).unwrap();
            let rhs = poly::scaled(&shifted, c(-1.0, 0.0));
            assert!(poly::rel_distance(&flip.coeffs, &rhs) < 1e-12, "flip n={n}");

            // sum rule: B(z|ω) + B(z|ω[j]) = -n B_{r-1,n-1}(z|ω⁻(j))
            let lhs = poly::add(&b.coeffs, &flip.coeffs);
            let rhs = poly::scaled(&small.coeffs, c(-(n as f64), 0.0));
            assert!(poly::rel_distance(&lhs, &rhs) < 1e-12, "sum rule n={n}");

            // derivative: B' = n B_{r,n-1}
            let d = poly::derivative(&b.coeffs);
            let lower = multiple_bernoulli_poly(r, n - 1, &w).unwrap();
            let rhs = poly::scaled(&lower.coeffs, c(n as f64, 0.0));
            assert!(poly::rel_distance(&d, &rhs) < 1e-12, "derivative n={n}");
        }
    }

    #[test]
    fn equal_period_falling_factorial() {
        // B_{r+1,r}(z|1,…,1) = (z-1)(z-2)⋯(z-r)
        for r in 1..=4usize {
            let w = pv(&vec![c(1.0, 0.0); r + 1]);
            let p = multiple_bernoulli_poly(r + 1, r, &w).unwrap();
            let mut expect = vec![Complex64::ONE];
            for k in 1..=r {
                // multiply by (z - k)
                let mut next = vec![Complex64::new(0.0, 0.0); expect.len() + 1];
                for (m, cm) in expect.iter().enumerate() {
                    next[m + 1] += cm;
                    next[m] -= cm * k as f64;
                }
                expect = next;
            }
            assert!(
                poly::rel_distance(&p.coeffs, &expect) < 1e-12,
                "falling factorial r={r}"
            );
        }
    }

    #[test]
    fn equal_period_unnumbered_relation() {
        // r B_{r+1,n}(z+1) = (r-n) B_{r,n}(z) + n z B_{r,n-1}(z), equal periods
        for r in 1..=3usize {
            for n in 1..=5usize {
                let wr = pv(&vec![c(1.0, 0.0); r]);
                let wr1 = pv(&vec![c(1.0, 0.0); r + 1]);
                let big = multiple_bernoulli_poly(r + 1, n, &wr1).unwrap();
                let lhs = poly::scaled(
                    &poly::shift_arg(&big.coeffs, Complex64::ONE),
                    c(r as f64, 0.0),
                );
                let bn = multiple_bernoulli_poly(r, n, &wr).unwrap();
                let bn1 = multiple_bernoulli_poly(r, n - 1, &wr).unwrap();
                // n z B_{r,n-1}: multiply by z then scale
                let mut zterm = vec![Complex64::new(0.0, 0.0); bn1.coeffs.len() + 1];
                for (m, cm) in bn1.coeffs.iter().enumerate() {
                    zterm[m + 1] = cm * n as f64;
                }
                let rhs = poly::add(
                    &poly::scaled(&bn.coeffs, c(r as f64 - n as f64, 0.0)),
                    &zterm,
                );
                assert!(
                    poly::rel_distance(&lhs, &rhs) < 1e-12,
                    "equal-period relation r={r} n={n}"
                );
            }
        }
    }

    #[test]
    fn q_cubic_matches_bernoulli_route() {
        let (tau, sigma) = (c(0.0, 0.5), c(1.0, 1.0));
        let z = c(0.2, 0.3);
        let q = q_cubic(z, tau, sigma).unwrap();
        let b = eval_multiple_bernoulli(3, 3, z, &pv(&[tau, sigma, c(-1.0, 0.0)])).unwrap();
        let expect = -b / 3.0;
        assert!((q - expect).norm() / expect.norm() < 1e-12);

        // leading coefficient
        let coeffs = q_cubic_coeffs(tau, sigma).unwrap();
        assert!((coeffs[3] - 1.0 / (3.0 * tau * sigma)).norm() < 1e-15);
    }

    #[test]
    fn q_cubic_is_odd_around_its_reflection_center() {
        let (tau, sigma) = (c(0.0, 0.5), c(1.0, 1.0));
        let s = (tau + sigma - 1.0) / 2.0;
        let coeffs = q_cubic_coeffs(tau, sigma).unwrap();
        let centered = poly::shift_arg(&coeffs, s);
        // even-degree coefficients vanish: Q(s+u) = -Q(s-u)
        assert!(centered[0].norm() < 1e-14);
        assert!(centered[2].norm() < 1e-14);
        // and the center itself is a zero
        let qs = q_cubic(s, tau, sigma).unwrap();
        assert!(qs.norm() < 1e-14);
    }

    #[test]
    fn permutation_symmetry() {
        let w = [c(0.9, 0.4), c(1.4, -0.7), c(0.5, 1.1)];
        let base = multiple_bernoulli_poly(3, 4, &pv(&w)).unwrap();
        let perms: [[usize; 3]; 5] = [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for p in perms {
            let wp = pv(&[w[p[0]], w[p[1]], w[p[2]]]);
            let other = multiple_bernoulli_poly(3, 4, &wp).unwrap();
            assert!(poly::rel_distance(&base.coeffs, &other.coeffs) < 1e-14);
        }
    }
}
