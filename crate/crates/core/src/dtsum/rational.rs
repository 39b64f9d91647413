//! Rational functions of `q` and their reconstruction from series.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::DtError;

/// Verification coefficients required beyond the `p + q + 1` that determine
/// a Padé approximant.
pub const DEFAULT_PADE_MARGIN: usize = 2;

/// Dense polynomial in `q`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn one() -> Self {
        Self::new(vec![BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Exponent of the largest power of `q` dividing `self`.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::default();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `q^deg · p(1/q)`.
    pub fn reversed(&self) -> Self {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    fn drop_low(&self, k: usize) -> Self {
        Self::new(self.coeffs[k..].to_vec())
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[d].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Self::default(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d] * &lead;
            if !c.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * b;
                }
            }
            quot[k] = c;
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor; zero if both are zero.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        match a.lead() {
            Some(l) => a.scale(&l.recip()),
            None => a,
        }
    }

    pub fn eval(&self, q: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * q + c)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().enumerate().map(|(k, c)| (k as i64, c)))
    }
}

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (i64, &'a BigRational)>,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms.filter(|(_, c)| !c.is_zero()) {
        let neg = c.is_negative();
        let abs = c.abs();
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
            (true, false) => {}
        }
        first = false;
        let coeff = if abs.is_integer() {
            abs.to_string()
        } else {
            format!("({abs})")
        };
        match k {
            0 => write!(f, "{coeff}")?,
            _ => {
                if !abs.is_one() {
                    write!(f, "{coeff}*")?;
                }
                if k == 1 {
                    write!(f, "q")?
                } else {
                    write!(f, "q^{k}")?
                }
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// `q^shift · num(q) / den(q)` in normal form: `num` and `den` coprime, neither
/// divisible by `q`, and `den(0) = 1`. Zero is `0 / 1` with shift 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    num: QPoly,
    den: QPoly,
    shift: i64,
}

impl RationalFn {
    pub fn new(num: QPoly, den: QPoly, shift: i64) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (Some(vn), Some(vd)) = (num.valuation(), den.valuation()) else {
            return Self::zero();
        };
        let shift = shift + vn as i64 - vd as i64;
        let (num, den) = (num.drop_low(vn), den.drop_low(vd));
        let g = num.gcd(&den);
        let (num, den) = (num.div_rem(&g).0, den.div_rem(&g).0);
        let norm = den.coeffs[0].recip();
        Self {
            num: num.scale(&norm),
            den: den.scale(&norm),
            shift,
        }
    }

    pub fn zero() -> Self {
        Self {
            num: QPoly::default(),
            den: QPoly::one(),
            shift: 0,
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(QPoly::new(vec![c]), QPoly::one(), 0)
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn shifted(&self, by: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self {
            shift: self.shift + by,
            ..self.clone()
        }
    }

    /// Power-series coefficients of `q^0 … q^{len-1}`; requires `shift ≥ 0`.
    pub fn series(&self, len: usize) -> Vec<BigRational> {
        assert!(self.shift >= 0, "series of a function with a pole at 0");
        let mut inv = Vec::with_capacity(len);
        for n in 0..len {
            let s: BigRational = (1..=n).map(|k| self.den.coeff(k) * &inv[n - k]).sum();
            inv.push(if n == 0 { BigRational::one() } else { -s });
        }
        (0..len)
            .map(|n| match n.checked_sub(self.shift as usize) {
                Some(m) => (0..=m).map(|k| self.num.coeff(k) * &inv[m - k]).sum(),
                None => BigRational::zero(),
            })
            .collect()
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let num = if self.num.coeffs.len() == 1 {
            write_terms_string(std::iter::once((self.shift, &self.num.coeffs[0])))
        } else {
            match self.shift {
                0 => format!("({})", self.num),
                1 => format!("q*({})", self.num),
                k => format!("q^{k}*({})", self.num),
            }
        };
        if self.den.degree() == Some(0) {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/({})", self.den)
        }
    }
}

fn write_terms_string<'a>(terms: impl Iterator<Item = (i64, &'a BigRational)>) -> String {
    struct Terms<I>(std::cell::RefCell<Option<I>>);
    impl<'a, I: Iterator<Item = (i64, &'a BigRational)>> fmt::Display for Terms<I> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_terms(f, self.0.borrow_mut().take().expect("formatted once"))
        }
    }
    Terms(std::cell::RefCell::new(Some(terms))).to_string()
}

/// [`pade_reconstruct_with_margin`] with [`DEFAULT_PADE_MARGIN`].
pub fn pade_reconstruct(
    series: &[BigRational],
    bounds: (usize, usize),
) -> Result<RationalFn, DtError> {
    pade_reconstruct_with_margin(series, bounds, DEFAULT_PADE_MARGIN)
}

/// The rational function `P/Q` with `deg P ≤ p`, `deg Q ≤ q` whose expansion
/// matches every supplied coefficient of `Σ series[k] q^k`. The smallest
/// denominator degree that fits is used.
pub fn pade_reconstruct_with_margin(
    series: &[BigRational],
    (p, q): (usize, usize),
    margin: usize,
) -> Result<RationalFn, DtError> {
    let needed = p + q + 1 + margin;
    if series.len() < needed {
        return Err(DtError::InsufficientCoefficients {
            needed,
            got: series.len(),
        });
    }
    let c = |k: i64| -> BigRational {
        if k < 0 {
            BigRational::zero()
        } else {
            series[k as usize].clone()
        }
    };
    for dq in 0..=q {
        // (Q·C)_k = 0 for p < k < len, with Q_0 = 1 and unknowns Q_1..Q_dq.
        let rows: Vec<Vec<BigRational>> = (p + 1..series.len())
            .map(|k| {
                let k = k as i64;
                let mut row: Vec<_> = (1..=dq as i64).map(|j| c(k - j)).collect();
                row.push(-c(k));
                row
            })
            .collect();
        let Some(tail) = solve(rows, dq) else {
            continue;
        };
        let mut den = vec![BigRational::one()];
        den.extend(tail);
        let den = QPoly::new(den);
        let num = QPoly::new(
            (0..=p as i64)
                .map(|k| (0..=dq as i64).map(|j| den.coeff(j as usize) * c(k - j)).sum())
                .collect(),
        );
        return Ok(RationalFn::new(num, den, 0));
    }
    Err(DtError::NoRationalFunction { p, q })
}

/// Solves an augmented linear system by exact row reduction. Free variables
/// are set to zero; `None` if inconsistent.
fn solve(mut rows: Vec<Vec<BigRational>>, unknowns: usize) -> Option<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..unknowns {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for j in col..=unknowns {
                    let d = &factor * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[unknowns].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); unknowns];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = rows[i][unknowns].clone();
    }
    Some(x)
}

/// Whether `R(1/q) = R(q)`, checked as a cross-multiplied polynomial identity.
pub fn symmetry_check(r: &RationalFn) -> bool {
    if r.is_zero() {
        return true;
    }
    let a = r.num.degree().unwrap_or(0) as i64;
    let b = r.den.degree().unwrap_or(0) as i64;
    // R(1/q) = q^{b − a − shift} · rev(num) / rev(den)
    let lhs = r.num.reversed().mul(&r.den);
    let rhs = r.num.mul(&r.den.reversed());
    b - a - r.shift == r.shift && lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    fn conifold() -> RationalFn {
        RationalFn::new(QPoly::from_ints(&[0, 1]), QPoly::from_ints(&[1, 2, 1]), 0)
    }

    #[test]
    fn normal_form() {
        let r = conifold();
        assert_eq!(r.shift(), 1);
        assert_eq!(r.num(), &QPoly::from_ints(&[1]));
        assert_eq!(r.to_string(), "q/(1 + 2*q + q^2)");
        let cancelled = RationalFn::new(QPoly::from_ints(&[2, 2]), QPoly::from_ints(&[2, 4, 2]), 0);
        assert_eq!(cancelled.den(), &QPoly::from_ints(&[1, 1]));
        assert_eq!(cancelled.num(), &QPoly::from_ints(&[1]));
    }

    #[test]
    fn series_roundtrip() {
        assert_eq!(conifold().series(6), ints(&[0, 1, -2, 3, -4, 5]));
    }

    #[test]
    fn pade_examples() {
        let s = ints(&[0, 1, -2, 3, -4, 5, -6, 7, -8, 9]);
        assert_eq!(pade_reconstruct(&s, (1, 2)).unwrap(), conifold());

        let one = pade_reconstruct(&ints(&[1, 0, 0]), (0, 0)).unwrap();
        assert_eq!(one, RationalFn::constant(BigRational::one()));

        let geometric = pade_reconstruct(&ints(&[1, 1, 1, 1]), (0, 1)).unwrap();
        assert_eq!(geometric.den(), &QPoly::from_ints(&[1, -1]));
    }

    #[test]
    fn pade_failures() {
        assert_eq!(
            pade_reconstruct(&ints(&[0, 1, -2, 3]), (1, 2)),
            Err(DtError::InsufficientCoefficients { needed: 6, got: 4 })
        );
        // 1/(1-q)^3 does not fit a quadratic denominator
        assert_eq!(
            pade_reconstruct(&ints(&[1, 3, 6, 10, 15, 21, 28]), (0, 2)),
            Err(DtError::NoRationalFunction { p: 0, q: 2 })
        );
    }

    #[test]
    fn symmetry_examples() {
        assert!(symmetry_check(&conifold()));
        let geometric = RationalFn::new(QPoly::one(), QPoly::from_ints(&[1, -1]), 0);
        assert!(!symmetry_check(&geometric));
        assert!(symmetry_check(&RationalFn::constant(BigRational::from_integer(7.into()))));
        assert!(symmetry_check(&RationalFn::zero()));
    }

    #[test]
    fn gcd_is_monic() {
        let a = QPoly::from_ints(&[-1, 0, 1]);
        let b = QPoly::from_ints(&[2, 2]);
        assert_eq!(a.gcd(&b), QPoly::from_ints(&[1, 1]));
    }
}
