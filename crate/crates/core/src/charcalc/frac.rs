use std::ops::{Add, Mul, Neg, Sub};

use super::laurent::{Exponent, Laurent3};
use super::CharError;

/// A character `num / Π (1 − t_i)^{den_i}`.
///
/// Always normalized: `num` is not divisible by `1 − t_i` while `den_i > 0`.
#[derive(Clone, Debug)]
pub struct FracChar {
    num: Laurent3,
    den: [u32; 3],
}

impl FracChar {
    pub fn new(num: Laurent3, den: [u32; 3]) -> Self {
        let mut out = Self { num, den };
        out.normalize();
        out
    }

    pub fn poly(num: Laurent3) -> Self {
        Self { num, den: [0; 3] }
    }

    pub fn num(&self) -> &Laurent3 {
        &self.num
    }

    pub fn den(&self) -> [u32; 3] {
        self.den
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = [0; 3];
            return;
        }
        for axis in 0..3 {
            while self.den[axis] > 0 && self.num.divisible_by_one_minus(axis) {
                self.num = self
                    .num
                    .exact_div(axis)
                    .expect("divisibility was just checked");
                self.den[axis] -= 1;
            }
        }
    }

    /// Numerator over the larger denominator `Π (1 − t_i)^{target_i}`.
    fn lift(&self, target: [u32; 3]) -> Laurent3 {
        let mut num = self.num.clone();
        for axis in 0..3 {
            for _ in self.den[axis]..target[axis] {
                num = &num * &Laurent3::one_minus(axis);
            }
        }
        num
    }

    fn common(&self, other: &Self) -> [u32; 3] {
        std::array::from_fn(|i| self.den[i].max(other.den[i]))
    }

    /// The involution `t ↦ t⁻¹`, using `1/(1 − t⁻¹) = −t/(1 − t)`.
    pub fn bar(&self) -> Self {
        let mut num = self.num.bar();
        let mut sign_neg = false;
        let mut shift: Exponent<3> = [0; 3];
        for axis in 0..3 {
            shift[axis] = self.den[axis] as i64;
            sign_neg ^= self.den[axis] % 2 == 1;
        }
        num = num.shift(shift);
        if sign_neg {
            num = -num;
        }
        Self {
            num,
            den: self.den,
        }
    }

    pub fn shift(&self, by: Exponent<3>) -> Self {
        Self {
            num: self.num.shift(by),
            den: self.den,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den == [0; 3]
    }

    /// The underlying Laurent polynomial; fails if a denominator survives
    /// normalization.
    pub fn into_laurent(self) -> Result<Laurent3, CharError> {
        if self.is_polynomial() {
            Ok(self.num)
        } else {
            Err(CharError::NotLaurent {
                den: self.den,
                num: self.num.to_string(),
            })
        }
    }
}

impl PartialEq for FracChar {
    fn eq(&self, other: &Self) -> bool {
        let target = self.common(other);
        self.lift(target) == other.lift(target)
    }
}

impl Eq for FracChar {}

impl From<Laurent3> for FracChar {
    fn from(num: Laurent3) -> Self {
        Self::poly(num)
    }
}

impl Add for &FracChar {
    type Output = FracChar;
    fn add(self, rhs: Self) -> FracChar {
        let target = self.common(rhs);
        FracChar::new(self.lift(target) + rhs.lift(target), target)
    }
}

impl Sub for &FracChar {
    type Output = FracChar;
    fn sub(self, rhs: Self) -> FracChar {
        let target = self.common(rhs);
        FracChar::new(self.lift(target) - rhs.lift(target), target)
    }
}

impl Neg for &FracChar {
    type Output = FracChar;
    fn neg(self) -> FracChar {
        FracChar {
            num: -&self.num,
            den: self.den,
        }
    }
}

impl Mul for &FracChar {
    type Output = FracChar;
    fn mul(self, rhs: Self) -> FracChar {
        let den = std::array::from_fn(|i| self.den[i] + rhs.den[i]);
        FracChar::new(&self.num * &rhs.num, den)
    }
}

impl Mul<&Laurent3> for &FracChar {
    type Output = FracChar;
    fn mul(self, rhs: &Laurent3) -> FracChar {
        FracChar::new(&self.num * rhs, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(e: [i64; 3]) -> Laurent3 {
        Laurent3::monomial(e, 1)
    }

    #[test]
    fn normalizes_on_construction() {
        let f = FracChar::new(Laurent3::one() - t([2, 0, 0]), [1, 0, 0]);
        assert!(f.is_polynomial());
        assert_eq!(f.num(), &(Laurent3::one() + t([1, 0, 0])));
    }

    #[test]
    fn equality_cross_multiplies() {
        let a = FracChar::new(Laurent3::one(), [1, 0, 0]);
        let b = &FracChar::poly(Laurent3::one()) + &FracChar::new(t([1, 0, 0]), [1, 0, 0]);
        assert_eq!(a, b);
    }

    #[test]
    fn bar_of_geometric_series() {
        // bar(1/(1-t1)) = 1/(1-t1^-1) = -t1/(1-t1)
        let f = FracChar::new(Laurent3::one(), [1, 0, 0]);
        let expected = FracChar::new(-t([1, 0, 0]), [1, 0, 0]);
        assert_eq!(f.bar(), expected);
        assert_eq!(f.bar().bar(), f);
    }

    #[test]
    fn rejects_surviving_denominator() {
        let f = FracChar::new(Laurent3::one(), [0, 1, 0]);
        assert!(matches!(
            f.into_laurent(),
            Err(CharError::NotLaurent { den: [0, 1, 0], .. })
        ));
    }
}
