use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::CharError;

/// Exponent vector of a torus character.
pub type Exponent<const N: usize> = [i64; N];

/// Sparse Laurent polynomial in `N` variables with integer coefficients.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// polynomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly<const N: usize> {
    terms: BTreeMap<Exponent<N>, BigInt>,
}

pub type Laurent2 = LaurentPoly<2>;
pub type Laurent3 = LaurentPoly<3>;

impl<const N: usize> LaurentPoly<N> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial([0; N], 1)
    }

    pub fn monomial(exp: Exponent<N>, coeff: impl Into<BigInt>) -> Self {
        let mut out = Self::zero();
        out.add_term(exp, coeff.into());
        out
    }

    /// The variable `t_{axis+1}`.
    pub fn var(axis: usize) -> Self {
        let mut exp = [0; N];
        exp[axis] = 1;
        Self::monomial(exp, 1)
    }

    /// `1 − t_{axis+1}`.
    pub fn one_minus(axis: usize) -> Self {
        Self::one() - Self::var(axis)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent<N>, BigInt)>) -> Self {
        let mut out = Self::zero();
        for (exp, c) in terms {
            out.add_term(exp, c);
        }
        out
    }

    pub fn add_term(&mut self, exp: Exponent<N>, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent<N>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &Exponent<N>) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&[0; N])
    }

    /// Value at `t = (1, …, 1)`.
    pub fn eval_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Applies `f` to every exponent and collects like terms.
    pub fn map_exponents<const M: usize>(
        &self,
        f: impl Fn(Exponent<N>) -> Exponent<M>,
    ) -> LaurentPoly<M> {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (f(*e), c.clone())))
    }

    /// The involution `t ↦ t⁻¹`.
    pub fn bar(&self) -> Self {
        self.map_exponents(|e| e.map(|x| -x))
    }

    pub fn shift(&self, by: Exponent<N>) -> Self {
        self.map_exponents(|mut e| {
            for (x, d) in e.iter_mut().zip(by) {
                *x += d;
            }
            e
        })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// `self` evaluated at `t_{axis+1} = 1`, as a polynomial with that
    /// exponent zeroed. This is the remainder of division by `1 − t_{axis+1}`.
    pub fn at_one(&self, axis: usize) -> Self {
        self.map_exponents(|mut e| {
            e[axis] = 0;
            e
        })
    }

    pub fn divisible_by_one_minus(&self, axis: usize) -> bool {
        self.at_one(axis).is_zero()
    }

    /// Exact quotient by `1 − t_{axis+1}`.
    pub fn exact_div(&self, axis: usize) -> Result<Self, CharError> {
        let remainder = self.at_one(axis);
        if !remainder.is_zero() {
            return Err(CharError::NotDivisible {
                axis,
                remainder: remainder.to_string(),
            });
        }
        // Fibres over the other exponents are univariate in t_axis; with
        // f = (1 − t) g the quotient coefficients are prefix sums of f's.
        let mut fibres: BTreeMap<Exponent<N>, Vec<(i64, &BigInt)>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut key = *e;
            key[axis] = 0;
            fibres.entry(key).or_default().push((e[axis], c));
        }
        let mut out = Self::zero();
        for (key, mut fibre) in fibres {
            fibre.sort_by_key(|(k, _)| *k);
            let lo = fibre[0].0;
            let hi = fibre[fibre.len() - 1].0;
            let mut acc = BigInt::zero();
            let mut next = fibre.iter().peekable();
            for k in lo..hi {
                if let Some((_, c)) = next.next_if(|(kk, _)| *kk == k) {
                    acc += *c;
                }
                let mut e = key;
                e[axis] = k;
                out.add_term(e, acc.clone());
            }
        }
        Ok(out)
    }

    pub fn degree_range(&self, axis: usize) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|e| e[axis]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x))))
    }
}

impl<const N: usize> fmt::Display for LaurentPoly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (exp, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            let is_const = exp.iter().all(|&x| x == 0);
            if !abs.is_one() || is_const {
                write!(f, "{abs}")?;
            }
            let mut first = abs.is_one();
            for (i, &x) in exp.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "t{}", i + 1)?;
                if x != 1 {
                    write!(f, "^{x}")?;
                }
            }
        }
        Ok(())
    }
}

impl<const N: usize> fmt::Debug for LaurentPoly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<const N: usize> AddAssign<&LaurentPoly<N>> for LaurentPoly<N> {
    fn add_assign(&mut self, rhs: &LaurentPoly<N>) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<const N: usize> SubAssign<&LaurentPoly<N>> for LaurentPoly<N> {
    fn sub_assign(&mut self, rhs: &LaurentPoly<N>) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl<const N: usize> Add for &LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn add(self, rhs: Self) -> LaurentPoly<N> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<const N: usize> Add for LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn add(mut self, rhs: Self) -> LaurentPoly<N> {
        self += &rhs;
        self
    }
}

impl<const N: usize> Sub for &LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn sub(self, rhs: Self) -> LaurentPoly<N> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<const N: usize> Sub for LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn sub(mut self, rhs: Self) -> LaurentPoly<N> {
        self -= &rhs;
        self
    }
}

impl<const N: usize> Neg for &LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn neg(self) -> LaurentPoly<N> {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl<const N: usize> Neg for LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn neg(self) -> LaurentPoly<N> {
        -&self
    }
}

impl<const N: usize> Mul for &LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn mul(self, rhs: Self) -> LaurentPoly<N> {
        let mut acc: std::collections::HashMap<Exponent<N>, BigInt> =
            std::collections::HashMap::with_capacity(self.len() * rhs.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for (x, y) in e.iter_mut().zip(eb) {
                    *x += y;
                }
                *acc.entry(e).or_default() += ca * cb;
            }
        }
        LaurentPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl<const N: usize> Mul for LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn mul(self, rhs: Self) -> LaurentPoly<N> {
        &self * &rhs
    }
}
