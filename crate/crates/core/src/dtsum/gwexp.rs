//! Expansion of a rational function of `q` in `u` under `q = −e^{iu}`.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{symmetry_check, DtError, QPoly, RationalFn};
use crate::gwref::USeries;

/// Gaussian rational `re + i·im`.
#[derive(Clone, Debug, PartialEq)]
struct Gauss {
    re: BigRational,
    im: BigRational,
}

impl Gauss {
    fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn recip(&self) -> Self {
        let norm = &self.re * &self.re + &self.im * &self.im;
        Self {
            re: &self.re / &norm,
            im: -&self.im / &norm,
        }
    }
}

impl Add for &Gauss {
    type Output = Gauss;
    fn add(self, o: &Gauss) -> Gauss {
        Gauss {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl Sub for &Gauss {
    type Output = Gauss;
    fn sub(self, o: &Gauss) -> Gauss {
        Gauss {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl Mul for &Gauss {
    type Output = Gauss;
    fn mul(self, o: &Gauss) -> Gauss {
        Gauss {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

/// `(i·a)^k / k!`
fn exp_term(a: i64, k: usize) -> Gauss {
    let mut fact = BigInt::one();
    for j in 2..=k as u64 {
        fact *= j;
    }
    let mag = BigRational::new(BigInt::from(a).pow(k as u32), fact);
    match k % 4 {
        0 => Gauss::real(mag),
        1 => Gauss {
            re: BigRational::zero(),
            im: mag,
        },
        2 => Gauss::real(-mag),
        _ => Gauss {
            re: BigRational::zero(),
            im: -mag,
        },
    }
}

/// `p(−e^{iu})` through `u^{len−1}`.
fn substitute(p: &QPoly, len: usize) -> Vec<Gauss> {
    (0..len)
        .map(|k| {
            p.coeffs().iter().enumerate().fold(Gauss::zero(), |acc, (j, c)| {
                let c = if j % 2 == 0 { c.clone() } else { -c };
                &acc + &(&Gauss::real(c) * &exp_term(j as i64, k))
            })
        })
        .collect()
}

fn mul_series(a: &[Gauss], b: &[Gauss], len: usize) -> Vec<Gauss> {
    (0..len)
        .map(|n| {
            (0..=n).fold(Gauss::zero(), |acc, k| match (a.get(k), b.get(n - k)) {
                (Some(x), Some(y)) => &acc + &(x * y),
                _ => acc,
            })
        })
        .collect()
}

fn invert_series(a: &[Gauss], len: usize) -> Vec<Gauss> {
    let lead = a[0].recip();
    let mut out: Vec<Gauss> = Vec::with_capacity(len);
    for n in 0..len {
        if n == 0 {
            out.push(lead.clone());
            continue;
        }
        let s = (1..=n.min(a.len() - 1)).fold(Gauss::zero(), |acc, k| &acc + &(&a[k] * &out[n - k]));
        out.push(&Gauss::zero() - &(&s * &lead));
    }
    out
}

/// Coefficients of `u^k` of `R(−e^{iu})` for `k` up to `order`, starting at
/// the pole order. The function must be symmetric under `q ↦ 1/q`, with at
/// most a double pole at `u = 0`; every coefficient must come out real, and
/// odd powers must vanish.
pub fn gw_expansion(r: &RationalFn, order: i64) -> Result<USeries, DtError> {
    if !symmetry_check(r) {
        return Err(DtError::NotSymmetric);
    }
    if r.is_zero() {
        return Ok(USeries {
            min_power: 0,
            coeffs: vec![BigRational::zero(); (order + 1).max(0) as usize],
        });
    }
    // A zero of multiplicity k at q = −1 is a zero of order k in u, so the
    // polynomial degrees bound both valuations.
    let slack = r.num().degree().unwrap_or(0) + r.den().degree().unwrap_or(0) + 1;
    let raw = (order.max(0) as usize) + 2 * slack + 3;
    let num = substitute(r.num(), raw);
    let den = substitute(r.den(), raw);
    let vn = num.iter().position(|c| !c.is_zero()).expect("nonzero numerator");
    let vd = den.iter().position(|c| !c.is_zero()).expect("nonzero denominator");
    let pole = vd as i64 - vn as i64;
    if pole > 2 {
        return Err(DtError::PoleTooHigh(pole));
    }
    let len = (order + pole + 1).max(0) as usize;
    let quot = mul_series(&num[vn..], &invert_series(&den[vd..], len), len);

    // q^shift = (−1)^shift e^{i·shift·u}
    let sign = if r.shift().rem_euclid(2) == 0 { 1 } else { -1 };
    let twist: Vec<Gauss> = (0..len)
        .map(|k| {
            let t = exp_term(r.shift(), k);
            if sign < 0 {
                &Gauss::zero() - &t
            } else {
                t
            }
        })
        .collect();
    let full = mul_series(&quot, &twist, len);

    let min_power = -pole;
    let mut coeffs = Vec::with_capacity(len);
    for (k, c) in full.into_iter().enumerate() {
        let power = min_power + k as i64;
        if !c.im.is_zero() {
            return Err(DtError::NonReal(power));
        }
        if power.rem_euclid(2) == 1 && !c.re.is_zero() {
            return Err(DtError::OddCoefficient(power));
        }
        coeffs.push(c.re);
    }
    Ok(USeries { min_power, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gwref::inverse_sine_square;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn conifold_matches_sine_series() {
        let r = RationalFn::new(QPoly::from_ints(&[0, 1]), QPoly::from_ints(&[1, 2, 1]), 0);
        let u = gw_expansion(&r, 6).unwrap();
        assert_eq!(u.min_power, -2);
        assert_eq!(u.coeff(-2), q(1, 1));
        assert_eq!(u.coeff(0), q(1, 12));
        assert_eq!(u.coeff(2), q(1, 240));
        assert_eq!(u.coeff(4), q(1, 6048));
        let oracle = inverse_sine_square(6);
        for k in -2..=6 {
            assert_eq!(u.coeff(k), oracle.coeff(k), "u^{k}");
        }
    }

    #[test]
    fn constant_is_constant() {
        let u = gw_expansion(&RationalFn::constant(q(5, 3)), 4).unwrap();
        assert_eq!(u.min_power, 0);
        assert_eq!(u.coeff(0), q(5, 3));
        assert!((1..=4).all(|k| u.coeff(k).is_zero()));
    }

    #[test]
    fn rejects_asymmetric_and_high_poles() {
        let geometric = RationalFn::new(QPoly::one(), QPoly::from_ints(&[1, -1]), 0);
        assert_eq!(gw_expansion(&geometric, 2), Err(DtError::NotSymmetric));
        // q^2/(1+q)^4 has a quartic pole at u = 0
        let quartic = RationalFn::new(QPoly::one(), QPoly::from_ints(&[1, 4, 6, 4, 1]), 2);
        assert_eq!(gw_expansion(&quartic, 2), Err(DtError::PoleTooHigh(4)));
    }
}
