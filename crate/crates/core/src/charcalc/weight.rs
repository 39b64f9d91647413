use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::laurent::{Exponent, Laurent3, LaurentPoly};
use super::CharError;

/// Integer 3×3 matrix taking local character exponents to the global
/// character lattice: `global = M · local`. Column `i` is the global weight of
/// the local coordinate `x_{i+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Frame {
    rows: [[i64; 3]; 3],
}

impl Frame {
    pub const IDENTITY: Frame = Frame {
        rows: [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    };

    pub fn from_rows(rows: [[i64; 3]; 3]) -> Self {
        Self { rows }
    }

    pub fn from_columns(cols: [[i64; 3]; 3]) -> Self {
        Self {
            rows: std::array::from_fn(|r| std::array::from_fn(|c| cols[c][r])),
        }
    }

    pub fn rows(&self) -> [[i64; 3]; 3] {
        self.rows
    }

    pub fn column(&self, axis: usize) -> [i64; 3] {
        std::array::from_fn(|r| self.rows[r][axis])
    }

    pub fn apply(&self, k: Exponent<3>) -> Exponent<3> {
        std::array::from_fn(|r| (0..3).map(|c| self.rows[r][c] * k[c]).sum())
    }

    pub fn det(&self) -> i64 {
        let m = &self.rows;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == 1
    }

    /// Whether the local `t1 t2 t3` maps to the global `t1 t2 t3`.
    pub fn preserves_cy_product(&self) -> bool {
        self.apply([1, 1, 1]) == [1, 1, 1]
    }

    pub fn transport(&self, f: &Laurent3) -> Laurent3 {
        f.map_exponents(|k| self.apply(k))
    }
}

/// `Π_k (s, k)^{exponent_k}` over nonzero integer weight vectors `k`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeightProduct<const N: usize> {
    factors: BTreeMap<Exponent<N>, i64>,
}

impl<const N: usize> WeightProduct<N> {
    /// The measure of a character: each monomial `v_k t^k` contributes the
    /// factor `(s, k)^{−v_k}`.
    pub fn from_character(v: &LaurentPoly<N>) -> Result<Self, CharError> {
        let mut factors = BTreeMap::new();
        for (k, c) in v.terms() {
            if k.iter().all(|&x| x == 0) {
                return Err(CharError::ZeroWeight {
                    multiplicity: c.to_string(),
                });
            }
            let c = c.to_i64().expect("character multiplicity fits in i64");
            factors.insert(*k, -c);
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &BTreeMap<Exponent<N>, i64> {
        &self.factors
    }

    /// Exact value at `s`; fails if some factor vanishes there.
    pub fn evaluate(&self, s: &[BigRational; N]) -> Result<BigRational, CharError> {
        let mut num = BigRational::one();
        let mut den = BigRational::one();
        for (k, &e) in &self.factors {
            let pairing: BigRational = k
                .iter()
                .zip(s)
                .map(|(&ki, si)| si * BigRational::from_integer(BigInt::from(ki)))
                .sum();
            if pairing.is_zero() {
                return Err(CharError::VanishingFactor { weight: k.to_vec() });
            }
            let power = num_traits::pow(pairing, e.unsigned_abs() as usize);
            if e > 0 {
                num *= power;
            } else {
                den *= power;
            }
        }
        Ok(num / den)
    }
}

/// The equivariant vertex measure of a local character placed in the global
/// lattice by `frame`.
pub fn weight_product(v: &Laurent3, frame: &Frame) -> Result<WeightProduct<3>, CharError> {
    WeightProduct::from_character(&frame.transport(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charcalc::vertex::vertex_v;
    use crate::partitions::Partition3D;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn empty_product_is_one() {
        let w = weight_product(&Laurent3::zero(), &Frame::IDENTITY).unwrap();
        assert_eq!(w.evaluate(&[q(1), q(2), q(-3)]).unwrap(), q(1));
    }

    #[test]
    fn single_box_measure() {
        let v = vertex_v(&Partition3D::finite([[0, 0, 0]]).unwrap()).unwrap();
        let w = weight_product(&v, &Frame::IDENTITY).unwrap();
        assert_eq!(w.evaluate(&[q(1), q(2), q(-3)]).unwrap(), q(-1));
        assert_eq!(w.evaluate(&[q(5), q(-7), q(2)]).unwrap(), q(-1));
    }

    #[test]
    fn rejects_zero_weight() {
        assert!(matches!(
            weight_product(&Laurent3::one(), &Frame::IDENTITY),
            Err(CharError::ZeroWeight { .. })
        ));
    }

    #[test]
    fn vanishing_factor_is_reported() {
        let w = WeightProduct::from_character(&Laurent3::monomial([1, -1, 0], 1)).unwrap();
        assert!(matches!(
            w.evaluate(&[q(2), q(2), q(-4)]),
            Err(CharError::VanishingFactor { .. })
        ));
    }

    #[test]
    fn frame_basics() {
        let f = Frame::from_columns([[-1, 0, 0], [1, 1, 0], [1, 0, 1]]);
        assert_eq!(f.rows(), [[-1, 1, 1], [0, 1, 0], [0, 0, 1]]);
        assert!(f.is_unimodular());
        assert!(f.preserves_cy_product());
        assert_eq!(f.column(1), [1, 1, 0]);
    }
}
