//! Vertex and edge characters of the virtual tangent space at a torus-fixed
//! ideal sheaf.
//!
//! All characters are written in the local chart of a vertex (vertex
//! characters) or in the chart at the source end of an edge (edge
//! characters). In an edge chart `t1` is the edge direction, `t2` is the lower
//! transverse axis carrying the normal degree `m`, and `t3` the upper one
//! carrying `m'`.

use num_bigint::BigInt;

use super::frac::FracChar;
use super::laurent::{Exponent, Laurent2, Laurent3};
use super::CharError;
use crate::partitions::{f_edge, transverse, Partition2D, Partition3D};

/// Normal degrees `(m, m')` of an invariant line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeFrame {
    pub m: i64,
    pub mprime: i64,
}

impl EdgeFrame {
    pub fn new(m: i64, mprime: i64) -> Self {
        Self { m, mprime }
    }

    /// `m + m' = −2`, the normal bundle degree of a rational curve in a
    /// Calabi-Yau threefold.
    pub fn is_calabi_yau(&self) -> bool {
        self.m + self.mprime == -2
    }
}

/// Generating function of a 3D partition, split into a Laurent polynomial and
/// one geometric tail per leg: `Q = qprime + Σ legs[i] / (1 − t_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexGF {
    pub qprime: Laurent3,
    pub legs: [Laurent2; 3],
}

impl VertexGF {
    pub fn to_frac(&self) -> FracChar {
        let mut q = FracChar::poly(self.qprime.clone());
        for axis in 0..3 {
            let mut den = [0; 3];
            den[axis] = 1;
            q = &q + &FracChar::new(embed_transverse(&self.legs[axis], axis), den);
        }
        q
    }
}

/// Places a character of the plane transverse to `axis` into three
/// variables; the first variable goes to the lower transverse axis.
pub fn embed_transverse(f: &Laurent2, axis: usize) -> Laurent3 {
    let (lo, hi) = transverse(axis);
    f.map_exponents(|[a, b]| {
        let mut e = [0; 3];
        e[lo] = a;
        e[hi] = b;
        e
    })
}

/// `Σ_{(r,c)∈λ} t2^r t3^c` as a two-variable polynomial.
pub fn diagram_gf(lambda: &Partition2D) -> Laurent2 {
    Laurent2::from_terms(
        lambda
            .boxes()
            .map(|(r, c)| ([r as i64, c as i64], BigInt::from(1))),
    )
}

pub fn vertex_q(pi: &Partition3D) -> VertexGF {
    let mut qprime = Laurent3::zero();
    for cell in pi.extra() {
        qprime.add_term(cell.map(i64::from), BigInt::from(1));
    }
    // Boxes in k cylinders are counted k times by the tails; only multiple
    // overlaps, all inside the leg-extent cube, need correcting.
    let l = pi.leg_extent();
    for x in 0..l {
        for y in 0..l {
            for z in 0..l {
                let k = pi.cylinder_multiplicity([x, y, z]);
                if k > 1 {
                    qprime.add_term(
                        [x as i64, y as i64, z as i64],
                        BigInt::from(1 - k as i64),
                    );
                }
            }
        }
    }
    VertexGF {
        qprime,
        legs: std::array::from_fn(|axis| diagram_gf(pi.leg(axis))),
    }
}

/// `F(t2,t3) = −Q − Q̄/(t2t3) + Q Q̄ (1−t2)(1−t3)/(t2t3)` for the diagram
/// generating function `Q` of `λ`.
pub fn edge_char(lambda: &Partition2D) -> Laurent2 {
    let q = diagram_gf(lambda);
    let qbar = q.bar();
    let inv = Laurent2::monomial([-1, -1], 1);
    let cross = &(&Laurent2::one_minus(0) * &Laurent2::one_minus(1)) * &inv;
    let qqbar = &q * &qbar;
    -q - &qbar * &inv + &qqbar * &cross
}

/// The vertex character `V = F_α + Σ_i F_{αβ_i}(t_i', t_i'') / (1 − t_i)`.
pub fn vertex_v(pi: &Partition3D) -> Result<Laurent3, CharError> {
    let q = vertex_q(pi).to_frac();
    let qbar = q.bar();
    let inv = Laurent3::monomial([-1, -1, -1], 1);
    let cube = &(&Laurent3::one_minus(0) * &Laurent3::one_minus(1)) * &Laurent3::one_minus(2);

    let mut v = &(&q - &(&qbar * &inv)) + &(&(&q * &qbar) * &(&cube * &inv));
    for axis in 0..3 {
        let leg = pi.leg(axis);
        if leg.is_empty() {
            continue;
        }
        let mut den = [0; 3];
        den[axis] = 1;
        let tail = FracChar::new(embed_transverse(&edge_char(leg), axis), den);
        v = &v + &tail;
    }
    v.into_laurent()
}

/// The edge character
/// `E = [t1⁻¹ F(t2,t3) − F(t2 t1^{−m}, t3 t1^{−m'})] / (1 − t1⁻¹)`.
pub fn edge_e(lambda: &Partition2D, frame: EdgeFrame) -> Result<Laurent3, CharError> {
    let f = edge_char(lambda);
    let here = f.map_exponents(|[a, b]| [-1, a, b]);
    let there = f.map_exponents(|[a, b]| [-frame.m * a - frame.mprime * b, a, b]);
    // 1/(1 − t1⁻¹) = −t1/(1 − t1)
    let num = -(here - there).shift([1, 0, 0]);
    FracChar::new(num, [1, 0, 0]).into_laurent()
}

/// Restriction to the subtorus `t1 t2 t3 = 1` by `t3 ↦ (t1 t2)⁻¹`.
pub fn restrict_cy(f: &Laurent3) -> Laurent2 {
    f.map_exponents(|[a, b, c]| [a - c, b - c])
}

/// Alternating sum over nonempty generator subsets of `t^{lcm}`, the Poincaré
/// polynomial of the Taylor resolution: `Q = (1 + P) / Π (1 − t_i)`.
pub fn taylor_poincare(gens: &[Exponent<3>]) -> Laurent3 {
    assert!(!gens.is_empty(), "taylor resolution needs a generator");
    assert!(
        gens.iter().flatten().all(|&x| x >= 0),
        "generators must be monomials"
    );
    assert!(gens.len() < 64, "too many generators for subset enumeration");
    let mut p = Laurent3::zero();
    for mask in 1u64..(1u64 << gens.len()) {
        let mut lcm = [0i64; 3];
        for (k, g) in gens.iter().enumerate() {
            if mask >> k & 1 == 1 {
                for i in 0..3 {
                    lcm[i] = lcm[i].max(g[i]);
                }
            }
        }
        let sign = if mask.count_ones() % 2 == 1 { -1 } else { 1 };
        p.add_term(lcm, BigInt::from(sign));
    }
    p
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parities {
    pub vertex: u8,
    pub edges: Vec<u8>,
}

/// Parity of `V(1,1,1)` under the sign-counting splitting (the renormalized
/// volume) and of each edge's `f_{m,m'}(λ) + m|λ|`. Only defined for
/// Calabi-Yau edge frames.
pub fn char_parities(
    pi: &Partition3D,
    edges: &[(Partition2D, EdgeFrame)],
) -> Result<Parities, CharError> {
    let vertex = pi.renorm_volume().rem_euclid(2) as u8;
    let edges = edges
        .iter()
        .map(|(lambda, frame)| {
            if !frame.is_calabi_yau() {
                return Err(CharError::NonCalabiYauFrame {
                    m: frame.m,
                    mprime: frame.mprime,
                });
            }
            let value = f_edge(frame.m, frame.mprime, lambda) + frame.m * lambda.size() as i64;
            Ok(value.rem_euclid(2) as u8)
        })
        .collect::<Result<_, _>>()?;
    Ok(Parities { vertex, edges })
}
