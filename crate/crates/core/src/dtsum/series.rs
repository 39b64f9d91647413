//! Truncated `q`-series graded by curve class.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{
    enumerate_fixed_points, minimal_chi, pade_reconstruct_with_margin, sign, chi, DtError,
    RationalFn,
};
use crate::geometry::ToricCY3;

/// Curve class as a multidegree, one entry per class label.
pub type Degree = Vec<u32>;

/// Dense block of coefficients `coeffs[k]` of `q^{start + k}` for one degree.
/// Everything below `start` vanishes; everything above `valid_through` is
/// unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub start: i64,
    pub coeffs: Vec<BigRational>,
}

impl Part {
    pub fn valid_through(&self) -> i64 {
        self.start + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, n: i64) -> Option<BigRational> {
        if n < self.start {
            Some(BigRational::zero())
        } else {
            self.coeffs.get((n - self.start) as usize).cloned()
        }
    }

    /// Nonzero `(n, coefficient)` pairs.
    pub fn nonzero(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.start + k as i64, c))
    }
}

/// `Σ N_{n,β} q^n v^β` truncated at `n ≤ n_max` and `β ≤ beta_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QVSeries {
    pub n_max: i64,
    pub beta_max: Degree,
    pub parts: BTreeMap<Degree, Part>,
}

impl QVSeries {
    pub fn part(&self, beta: &[u32]) -> Option<&Part> {
        self.parts.get(beta)
    }

    pub fn coeff(&self, n: i64, beta: &[u32]) -> Option<BigRational> {
        self.part(beta)?.coeff(n)
    }
}

/// The DT partition function by summing `sign · q^χ v^β` over fixed points.
pub fn z_dt(g: &ToricCY3, beta_max: &[u32], n_max: i64) -> Result<QVSeries, DtError> {
    let mut parts: BTreeMap<Degree, Part> = minimal_chi(g, beta_max)?
        .into_iter()
        .map(|(beta, start)| {
            let len = (n_max - start + 1).max(0) as usize;
            (
                beta,
                Part {
                    start,
                    coeffs: vec![BigRational::zero(); len],
                },
            )
        })
        .collect();
    for fp in enumerate_fixed_points(g, beta_max, n_max)? {
        let part = parts
            .get_mut(&fp.degree(g))
            .expect("every enumerated degree has a minimum");
        let n = chi(&fp, g);
        let c = &mut part.coeffs[(n - part.start) as usize];
        *c += BigRational::from_integer(sign(&fp, g).into());
    }
    Ok(QVSeries {
        n_max,
        beta_max: beta_max.to_vec(),
        parts,
    })
}

/// Divides every degree by the degree-0 part. The quotient at degree `β` is
/// sound through `q^{n_max + min(0, start_β)}`; `order` caps the output and
/// must not exceed that.
pub fn reduced(z: &QVSeries, order: Option<i64>) -> Result<QVSeries, DtError> {
    let zero_degree = vec![0; z.beta_max.len()];
    let base = z
        .part(&zero_degree)
        .filter(|p| p.start == 0 && p.coeffs.first().is_some_and(|c| !c.is_zero()))
        .ok_or(DtError::DegreeZeroVanishes)?;
    let inv = invert(&base.coeffs);

    let mut parts = BTreeMap::new();
    for (beta, part) in &z.parts {
        let sound = z.n_max + part.start.min(0);
        let last = match order {
            Some(o) if o > sound => {
                return Err(DtError::InsufficientDepth {
                    requested: o,
                    available: sound,
                    degree: beta.clone(),
                })
            }
            Some(o) => o,
            None => sound,
        };
        let len = (last - part.start + 1).max(0) as usize;
        let coeffs = (0..len)
            .map(|k| {
                (0..=k)
                    .filter_map(|j| part.coeffs.get(j).map(|c| c * &inv[k - j]))
                    .sum()
            })
            .collect();
        parts.insert(
            beta.clone(),
            Part {
                start: part.start,
                coeffs,
            },
        );
    }
    Ok(QVSeries {
        n_max: order.unwrap_or(z.n_max),
        beta_max: z.beta_max.clone(),
        parts,
    })
}

fn invert(a: &[BigRational]) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(a.len());
    let lead = a[0].recip();
    for n in 0..a.len() {
        let s: BigRational = (1..=n).map(|k| &a[k] * &out[n - k]).sum();
        out.push(if n == 0 { lead.clone() } else { -s * &lead });
    }
    out
}

/// Rational reconstruction of one degree of a series. Parts starting at a
/// nonnegative power are padded to start at `q^0`; negative starts become the
/// shift of the result.
pub fn reconstruct_part(
    part: &Part,
    bounds: (usize, usize),
    margin: usize,
) -> Result<RationalFn, DtError> {
    let (coeffs, shift) = if part.start >= 0 {
        let mut c = vec![BigRational::zero(); part.start as usize];
        c.extend(part.coeffs.iter().cloned());
        (c, 0)
    } else {
        (part.coeffs.clone(), part.start)
    };
    let r = pade_reconstruct_with_margin(&coeffs, bounds, margin)?;
    Ok(r.shifted(shift))
}

impl QVSeries {
    /// Whether the degree-0 part is `1` through the truncation.
    pub fn is_trivial_in_degree_zero(&self) -> bool {
        let zero_degree = vec![0; self.beta_max.len()];
        self.part(&zero_degree).is_some_and(|p| {
            p.start == 0
                && p.coeffs
                    .iter()
                    .enumerate()
                    .all(|(k, c)| if k == 0 { c.is_one() } else { c.is_zero() })
        })
    }
}
