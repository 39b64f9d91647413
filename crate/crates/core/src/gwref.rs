//! Gromov-Witten side reference quantities.
//!
//! Everything here is exact except [`asymptotic_tail_check`], which evaluates
//! `log M(e^{−ε})` in multi-precision floating point and compares the fitted
//! tail against the exact Hodge integrals under explicit tolerances.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type ExactRational = BigRational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GwError {
    #[error("Bernoulli index must be even and at least 2, got {0}")]
    BernoulliIndex(i64),
    #[error("genus must be at least 2, got {0}")]
    Genus(i64),
    #[error("asymptotic fit failed; verification residuals {residuals:?}")]
    FitFailure { residuals: Vec<f64> },
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `B_0, …, B_n` from `Σ_{j=0}^{k} C(k+1, j) B_j = 0`, with `B_1 = −1/2`.
pub fn bernoulli_table(n: usize) -> Vec<ExactRational> {
    let mut b = vec![BigRational::one()];
    for k in 1..=n {
        let s: BigRational = (0..k)
            .map(|j| &b[j] * rat(binomial(BigInt::from(k + 1), BigInt::from(j))))
            .sum();
        b.push(-s / rat(k as i64 + 1));
    }
    b
}

pub fn bernoulli(k: i64) -> Result<ExactRational, GwError> {
    if k < 2 || k % 2 != 0 {
        return Err(GwError::BernoulliIndex(k));
    }
    Ok(bernoulli_table(k as usize).pop().expect("nonempty table"))
}

fn factorial(n: u64) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// `∫_{M̄_g} λ_{g−1}³ = |B_{2g}|/(2g) · |B_{2g−2}|/(2g−2) · 1/(2g−2)!`.
pub fn lambda_cube(g: i64) -> Result<ExactRational, GwError> {
    if g < 2 {
        return Err(GwError::Genus(g));
    }
    let b = bernoulli_table(2 * g as usize);
    let top = b[2 * g as usize].abs() / rat(2 * g);
    let low = b[2 * g as usize - 2].abs() / rat(2 * g - 2);
    Ok(top * low / BigRational::from_integer(factorial(2 * g as u64 - 2)))
}

/// Coefficient of `u^{2g−2}` in the genus-`g` degree-0 free energy,
/// `(−1)^g (c/2) ∫λ_{g−1}³`, where `c = ∫(c₃ − c₁c₂)`.
pub fn degree0_coeff(g: i64, c: i64) -> Result<ExactRational, GwError> {
    let sign = if g % 2 == 0 { 1 } else { -1 };
    Ok(lambda_cube(g)? * BigRational::new(BigInt::from(sign * c), BigInt::from(2)))
}

/// Coefficients of `M(±q)^exponent` through `q^{n_max}`, expanding
/// `Π_n (1 − q^n)^{−n·exponent}` exactly.
pub fn macmahon_coeffs(n_max: usize, at_minus_q: bool, exponent: i64) -> Vec<ExactRational> {
    let mut c = vec![BigInt::zero(); n_max + 1];
    c[0] = BigInt::one();
    for n in 1..=n_max {
        let power = n as i64 * exponent;
        for _ in 0..power.unsigned_abs() {
            if power > 0 {
                // divide by (1 − q^n)
                for k in n..=n_max {
                    let prev = c[k - n].clone();
                    c[k] += prev;
                }
            } else {
                for k in (n..=n_max).rev() {
                    let prev = c[k - n].clone();
                    c[k] -= prev;
                }
            }
        }
    }
    c.into_iter()
        .enumerate()
        .map(|(k, x)| {
            if at_minus_q && k % 2 == 1 {
                rat(-x)
            } else {
                rat(x)
            }
        })
        .collect()
}

/// Truncated Laurent series in `u`: `coeffs[k]` multiplies `u^{min_power + k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct USeries {
    pub min_power: i64,
    pub coeffs: Vec<ExactRational>,
}

impl USeries {
    pub fn max_power(&self) -> i64 {
        self.min_power + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, power: i64) -> ExactRational {
        if power < self.min_power {
            return BigRational::zero();
        }
        self.coeffs
            .get((power - self.min_power) as usize)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }
}

/// `1/(2 sin(u/2))²` through `u^order`, from the sine power series alone.
/// This is the genus expansion of a single rigid rational curve.
pub fn inverse_sine_square(order: i64) -> USeries {
    let len = (order + 3).max(1) as usize;
    // 2 sin(u/2) = u · s(u), s(u) = Σ (−1)^k u^{2k} / (4^k (2k+1)!)
    let mut s = vec![BigRational::zero(); len];
    for k in 0..len.div_ceil(2) {
        let den = BigInt::from(4).pow(k as u32) * factorial(2 * k as u64 + 1);
        let sign = if k % 2 == 0 { 1 } else { -1 };
        s[2 * k] = BigRational::new(BigInt::from(sign), den);
    }
    let s2 = mul_series(&s, &s, len);
    let inv = invert_series(&s2, len);
    USeries {
        min_power: -2,
        coeffs: inv,
    }
}

fn mul_series(a: &[BigRational], b: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn invert_series(a: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    out[0] = a[0].recip();
    for n in 1..len {
        let s: BigRational = (1..=n.min(a.len() - 1)).map(|k| &a[k] * &out[n - k]).sum();
        out[n] = -s * &out[0];
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailEntry {
    pub genus: i64,
    /// Fitted coefficient of `u^{2g−2}`.
    pub extracted: f64,
    pub expected: ExactRational,
    pub relative_error: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailReport {
    pub c: i64,
    pub tolerance: f64,
    /// Fitted coefficients of `ε⁻²`, `log ε` and `1`.
    pub singular: [f64; 3],
    pub entries: Vec<TailEntry>,
    pub max_residual: f64,
}

impl TailReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

const PRECISION: usize = 384;
const RM: RoundingMode = RoundingMode::ToEven;
/// Extra tail terms fitted beyond `g_max` to absorb truncation.
const EXTRA_TERMS: i64 = 8;
const VERIFY_POINTS: usize = 3;

struct Mp {
    cc: Consts,
}

impl Mp {
    fn new() -> Self {
        Self {
            cc: Consts::new().expect("astro-float constants"),
        }
    }

    fn int(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, PRECISION)
    }

    fn ratio(&self, a: i64, b: i64) -> BigFloat {
        self.int(a).div(&self.int(b), PRECISION, RM)
    }

    fn to_f64(&mut self, x: &BigFloat) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        let s = x
            .format(Radix::Dec, RM, &mut self.cc)
            .expect("decimal formatting");
        s.replace(".e", ".0e").parse().expect("parsable float")
    }

    /// `log M(e^{−ε}) = Σ_{k≥1} (1/k) q^k / (1 − q^k)²`, `q = e^{−ε}`.
    fn log_macmahon(&mut self, eps: &BigFloat) -> BigFloat {
        let q = eps.neg().exp(PRECISION, RM, &mut self.cc);
        let one = self.int(1);
        let cutoff = BigFloat::from_f64(2f64.powi(-(PRECISION as i32) - 8), PRECISION);
        let mut qk = q.clone();
        let mut sum = self.int(0);
        let mut k = 1i64;
        loop {
            let d = one.sub(&qk, PRECISION, RM);
            let term = qk
                .div(&d.mul(&d, PRECISION, RM), PRECISION, RM)
                .div(&self.int(k), PRECISION, RM);
            sum = sum.add(&term, PRECISION, RM);
            if term.cmp(&cutoff).is_some_and(|o| o < 0) {
                break;
            }
            qk = qk.mul(&q, PRECISION, RM);
            k += 1;
        }
        sum
    }

    fn basis(&mut self, eps: &BigFloat, tail_terms: i64) -> Vec<BigFloat> {
        let e2 = eps.mul(eps, PRECISION, RM);
        let mut row = vec![
            self.int(1).div(&e2, PRECISION, RM),
            eps.ln(PRECISION, RM, &mut self.cc),
            self.int(1),
        ];
        let mut p = e2.clone();
        for _ in 0..tail_terms {
            row.push(p.clone());
            p = p.mul(&e2, PRECISION, RM);
        }
        row
    }

    fn solve(&self, mut a: Vec<Vec<BigFloat>>, mut b: Vec<BigFloat>) -> Option<Vec<BigFloat>> {
        let n = b.len();
        for col in 0..n {
            let pivot = (col..n).max_by(|&i, &j| {
                a[i][col]
                    .abs_cmp(&a[j][col])
                    .unwrap_or(0)
                    .cmp(&0)
            })?;
            if a[pivot][col].is_zero() {
                return None;
            }
            a.swap(col, pivot);
            b.swap(col, pivot);
            for row in col + 1..n {
                let f = a[row][col].div(&a[col][col], PRECISION, RM);
                for k in col..n {
                    let t = f.mul(&a[col][k], PRECISION, RM);
                    a[row][k] = a[row][k].sub(&t, PRECISION, RM);
                }
                let t = f.mul(&b[col], PRECISION, RM);
                b[row] = b[row].sub(&t, PRECISION, RM);
            }
        }
        let mut x = vec![self.int(0); n];
        for row in (0..n).rev() {
            let mut acc = b[row].clone();
            for k in row + 1..n {
                acc = acc.sub(&a[row][k].mul(&x[k], PRECISION, RM), PRECISION, RM);
            }
            x[row] = acc.div(&a[row][row], PRECISION, RM);
        }
        Some(x)
    }
}

/// Compares the polynomial tail of `(c/2) log M(e^{−ε})` with the degree-0
/// free energies under `e^{iu} = e^{−ε}`, i.e. `u^{2g−2} = (−1)^{g−1} ε^{2g−2}`.
///
/// The singular part `A ε⁻² + B log ε + C` is fitted together with the tail
/// by collocation on a descending grid of `ε`; a few further grid points are
/// held out to verify the fit.
pub fn asymptotic_tail_check(g_max: i64, c: i64, tolerance: f64) -> Result<TailReport, GwError> {
    if g_max < 2 {
        return Err(GwError::Genus(g_max));
    }
    let mut mp = Mp::new();
    let tail_terms = g_max - 1 + EXTRA_TERMS;
    let unknowns = 3 + tail_terms as usize;
    let points = unknowns + VERIFY_POINTS;
    // ε from 0.30 down in steps of 0.015; exponentially small corrections
    // (~e^{−4π²/ε}) are far below the working precision on this range.
    let grid: Vec<BigFloat> = (0..points)
        .map(|j| mp.ratio(300 - 15 * j as i64, 1000))
        .collect();
    let scale = mp.ratio(c, 2);

    let mut rows = Vec::with_capacity(points);
    let mut values = Vec::with_capacity(points);
    for eps in &grid {
        rows.push(mp.basis(eps, tail_terms));
        let v = mp.log_macmahon(eps).mul(&scale, PRECISION, RM);
        values.push(v);
    }

    let fit_rows = rows[..unknowns].to_vec();
    let fit_values = values[..unknowns].to_vec();
    let solution = mp.solve(fit_rows, fit_values).ok_or(GwError::FitFailure {
        residuals: Vec::new(),
    })?;

    let mut residuals = Vec::new();
    for (row, v) in rows[unknowns..].iter().zip(&values[unknowns..]) {
        let mut model = mp.int(0);
        for (x, b) in solution.iter().zip(row) {
            model = model.add(&x.mul(b, PRECISION, RM), PRECISION, RM);
        }
        let r = model.sub(v, PRECISION, RM);
        residuals.push(mp.to_f64(&r).abs());
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    // The fit must resolve the smallest contribution being extracted: the
    // top-genus term at the smallest grid point, to within the tolerance.
    let eps_min = mp.to_f64(&grid[points - 1]);
    let top = degree0_coeff(g_max, c)?;
    let top = mp.to_f64(&rational_to_float(&mp, &top)).abs();
    let resolvable = tolerance * top * eps_min.powi(2 * g_max as i32 - 2);
    if !(max_residual < resolvable) {
        return Err(GwError::FitFailure { residuals });
    }

    let singular = [
        mp.to_f64(&solution[0]),
        mp.to_f64(&solution[1]),
        mp.to_f64(&solution[2]),
    ];
    let mut entries = Vec::new();
    for g in 2..=g_max {
        let in_eps = &solution[3 + (g - 2) as usize];
        let sign = if (g - 1) % 2 == 0 { 1 } else { -1 };
        let extracted_mp = in_eps.mul(&mp.int(sign), PRECISION, RM);
        let expected = degree0_coeff(g, c)?;
        let expected_mp = rational_to_float(&mp, &expected);
        let diff = extracted_mp.sub(&expected_mp, PRECISION, RM);
        let relative_error = if expected.is_zero() {
            mp.to_f64(&diff).abs()
        } else {
            mp.to_f64(&diff.div(&expected_mp, PRECISION, RM)).abs()
        };
        entries.push(TailEntry {
            genus: g,
            extracted: mp.to_f64(&extracted_mp),
            expected,
            relative_error,
            passed: relative_error < tolerance,
        });
    }
    Ok(TailReport {
        c,
        tolerance,
        singular,
        entries,
        max_residual,
    })
}

fn rational_to_float(mp: &Mp, r: &BigRational) -> BigFloat {
    let num = bigint_to_float(mp, &r.numer().abs());
    let num = if r.is_negative() { num.neg() } else { num };
    num.div(&bigint_to_float(mp, r.denom()), PRECISION, RM)
}

/// Nonnegative integers only.
fn bigint_to_float(mp: &Mp, n: &BigInt) -> BigFloat {
    // Horner in base 10^9 keeps every step exact at this precision.
    let digits = n.to_string();
    let mut acc = mp.int(0);
    let base = mp.int(1_000_000_000);
    let chunks: Vec<&str> = {
        let head = digits.len() % 9;
        let mut v = Vec::new();
        if head > 0 {
            v.push(&digits[..head]);
        }
        let mut i = head;
        while i < digits.len() {
            v.push(&digits[i..i + 9]);
            i += 9;
        }
        v
    };
    for chunk in chunks {
        acc = acc
            .mul(&base, PRECISION, RM)
            .add(&mp.int(chunk.parse().expect("digits")), PRECISION, RM);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(2).unwrap(), q(1, 6));
        assert_eq!(bernoulli(4).unwrap(), q(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), q(-691, 2730));
        assert_eq!(bernoulli(3), Err(GwError::BernoulliIndex(3)));
        assert_eq!(bernoulli(0), Err(GwError::BernoulliIndex(0)));
    }

    #[test]
    fn lambda_cube_examples() {
        assert_eq!(lambda_cube(2).unwrap(), q(1, 2880));
        assert_eq!(lambda_cube(3).unwrap(), q(1, 725760));
        assert_eq!(lambda_cube(1), Err(GwError::Genus(1)));
        for g in 2..=8 {
            assert!(lambda_cube(g).unwrap().is_positive());
        }
    }

    #[test]
    fn degree0_examples() {
        assert_eq!(degree0_coeff(2, 2).unwrap(), q(1, 2880));
        assert_eq!(degree0_coeff(3, 2).unwrap(), q(-1, 725760));
        assert!(degree0_coeff(5, 0).unwrap().is_zero());
    }

    #[test]
    fn macmahon_examples() {
        let m: Vec<_> = [1, 1, 3, 6, 13, 24, 48].iter().map(|&x| q(x, 1)).collect();
        assert_eq!(macmahon_coeffs(6, false, 1), m);
        let mm: Vec<_> = [1, -1, 3, -6].iter().map(|&x| q(x, 1)).collect();
        assert_eq!(macmahon_coeffs(3, true, 1), mm);
        let zero: Vec<_> = [1, 0, 0, 0].iter().map(|&x| q(x, 1)).collect();
        assert_eq!(macmahon_coeffs(3, false, 0), zero);
        // M(q) · M(q)^{-1} = 1
        let inv = macmahon_coeffs(8, false, -1);
        let fwd = macmahon_coeffs(8, false, 1);
        let prod = mul_series(&fwd, &inv, 9);
        assert_eq!(prod[0], q(1, 1));
        assert!(prod[1..].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn inverse_sine_square_leading_terms() {
        let s = inverse_sine_square(4);
        assert_eq!(s.coeff(-2), q(1, 1));
        assert_eq!(s.coeff(-1), q(0, 1));
        assert_eq!(s.coeff(0), q(1, 12));
        assert_eq!(s.coeff(2), q(1, 240));
        assert_eq!(s.coeff(4), q(1, 6048));
    }

    #[test]
    fn tail_check_recovers_low_genus() {
        let report = asymptotic_tail_check(3, 2, 1e-6).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!((report.singular[0] - 1.2020569031595942).abs() < 1e-12);
        assert!(matches!(asymptotic_tail_check(1, 2, 1e-6), Err(GwError::Genus(1))));
    }

    #[test]
    fn bigint_conversion() {
        let mut mp = Mp::new();
        let n: BigInt = "12345678901234567890123".parse().unwrap();
        let f = bigint_to_float(&mp, &n);
        assert!((mp.to_f64(&f) - 1.2345678901234568e22).abs() < 1e7);
    }
}
