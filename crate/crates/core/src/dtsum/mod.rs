//! Torus-fixed ideal sheaves and the Donaldson-Thomas partition function.

mod gwexp;
mod rational;
mod series;

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::charcalc::{
    edge_e, restrict_cy, vertex_v, CharError, EdgeFrame, Laurent3, WeightProduct,
};
use crate::geometry::{ToricCY3, ValidationReport};
use crate::partitions::{
    enumerate2d_upto, enumerate3d, f_edge, minimal3d, Partition2D, Partition3D, PartitionError,
};

pub use gwexp::gw_expansion;
pub use rational::{
    pade_reconstruct, pade_reconstruct_with_margin, symmetry_check, QPoly, RationalFn,
    DEFAULT_PADE_MARGIN,
};
pub use series::{reconstruct_part, reduced, z_dt, Degree, QVSeries};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DtError {
    #[error("invalid geometry: {0}")]
    Geometry(ValidationReport),
    #[error("degree bound has {got} entries but the geometry has {expected} classes")]
    DegreeArity { expected: usize, got: usize },
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("evaluation point is not on the Calabi-Yau subtorus (s1 + s2 + s3 != 0)")]
    NotOnSubtorus,
    #[error("degree-0 series has zero constant term")]
    DegreeZeroVanishes,
    #[error("requested order q^{requested} exceeds the truncation q^{available} for degree {degree:?}")]
    InsufficientDepth {
        requested: i64,
        available: i64,
        degree: Degree,
    },
    #[error("insufficient coefficients: need {needed}, have {got}")]
    InsufficientCoefficients { needed: usize, got: usize },
    #[error("no rational function with degree bounds ({p}, {q}) matches the series")]
    NoRationalFunction { p: usize, q: usize },
    #[error("rational function is not symmetric under q -> 1/q")]
    NotSymmetric,
    #[error("u-expansion has a pole of order {0}, beyond a double pole")]
    PoleTooHigh(i64),
    #[error("u-expansion has a nonzero coefficient at odd power u^{0}")]
    OddCoefficient(i64),
    #[error("u-expansion coefficient of u^{0} is not real")]
    NonReal(i64),
}

/// Partition data of a torus-fixed ideal sheaf: one diagram per compact edge
/// (read in the edge's source chart) and one 3D partition per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixedPoint {
    pub edge_partitions: Vec<Partition2D>,
    pub vertex_partitions: Vec<Partition3D>,
}

impl FixedPoint {
    pub fn empty(g: &ToricCY3) -> Self {
        Self {
            edge_partitions: vec![Partition2D::empty(); g.edges.len()],
            vertex_partitions: vec![minimal3d(Default::default()); g.vertices.len()],
        }
    }

    /// Curve class: total edge size per class label.
    pub fn degree(&self, g: &ToricCY3) -> Degree {
        let mut d = vec![0; g.num_classes()];
        for (e, lambda) in g.edges.iter().zip(&self.edge_partitions) {
            d[e.class] += lambda.size();
        }
        d
    }

    pub fn is_compatible(&self, g: &ToricCY3) -> bool {
        self.edge_partitions.len() == g.edges.len()
            && self.vertex_partitions.len() == g.vertices.len()
            && self
                .vertex_partitions
                .iter()
                .enumerate()
                .all(|(v, pi)| *pi.legs() == g.vertex_legs(v, &self.edge_partitions))
    }
}

fn check_geometry(g: &ToricCY3) -> Result<(), DtError> {
    let report = g.validate();
    if report.is_ok() {
        Ok(())
    } else {
        Err(DtError::Geometry(report))
    }
}

/// `χ(O_Y) = Σ_α |π_α| + Σ_edges f_{m,m'}(λ)`.
pub fn chi(fp: &FixedPoint, g: &ToricCY3) -> i64 {
    let vertices: i64 = fp.vertex_partitions.iter().map(Partition3D::renorm_volume).sum();
    let edges: i64 = g
        .edges
        .iter()
        .zip(&fp.edge_partitions)
        .map(|(e, lambda)| f_edge(e.frame.m, e.frame.mprime, lambda))
        .sum();
    vertices + edges
}

/// `(−1)^{χ + Σ_edges m|λ|}`.
pub fn sign(fp: &FixedPoint, g: &ToricCY3) -> i32 {
    let twist: i64 = g
        .edges
        .iter()
        .zip(&fp.edge_partitions)
        .map(|(e, lambda)| e.frame.m * lambda.size() as i64)
        .sum();
    if (chi(fp, g) + twist).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Memoized vertex and edge characters, keyed by their partition data.
#[derive(Default)]
pub struct CharacterCache {
    vertex: HashMap<Partition3D, Laurent3>,
    edge: HashMap<(Partition2D, EdgeFrame), Laurent3>,
}

impl CharacterCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, pi: &Partition3D) -> Result<&Laurent3, DtError> {
        if !self.vertex.contains_key(pi) {
            let v = vertex_v(pi)?;
            self.vertex.insert(pi.clone(), v);
        }
        Ok(&self.vertex[pi])
    }

    pub fn edge(&mut self, lambda: &Partition2D, frame: EdgeFrame) -> Result<&Laurent3, DtError> {
        let key = (lambda.clone(), frame);
        if !self.edge.contains_key(&key) {
            let e = edge_e(lambda, frame)?;
            self.edge.insert(key.clone(), e);
        }
        Ok(&self.edge[&key])
    }

    /// `Σ_α V_α + Σ_edges E`, each placed in the global lattice.
    pub fn total_character(&mut self, fp: &FixedPoint, g: &ToricCY3) -> Result<Laurent3, DtError> {
        let mut total = Laurent3::zero();
        for (v, pi) in g.vertices.iter().zip(&fp.vertex_partitions) {
            total += &v.frame.transport(self.vertex(pi)?);
        }
        for (k, (e, lambda)) in g.edges.iter().zip(&fp.edge_partitions).enumerate() {
            if lambda.is_empty() {
                continue;
            }
            let local = self
                .edge(lambda, e.frame)?
                .map_exponents(|x| g.edge_to_vertex_exponent(k, x));
            total += &g.vertices[e.from.vertex].frame.transport(&local);
        }
        Ok(total)
    }

    pub fn weight_ratio(
        &mut self,
        fp: &FixedPoint,
        g: &ToricCY3,
        s: &[BigRational; 3],
    ) -> Result<BigRational, DtError> {
        let sum: BigRational = s.iter().sum();
        if !sum.is_zero() {
            return Err(DtError::NotOnSubtorus);
        }
        let restricted = restrict_cy(&self.total_character(fp, g)?);
        let measure = WeightProduct::from_character(&restricted)?;
        Ok(measure.evaluate(&[s[0].clone(), s[1].clone()])?)
    }
}

/// Localization contribution `e(Ext²)/e(Ext¹)` of a fixed point, evaluated at
/// a point `s` of the Calabi-Yau subtorus.
pub fn weight_ratio(
    fp: &FixedPoint,
    g: &ToricCY3,
    s: &[BigRational; 3],
) -> Result<BigRational, DtError> {
    CharacterCache::new().weight_ratio(fp, g, s)
}

/// All fixed points of degree at most `beta_max` and `χ ≤ n_max`.
///
/// Order: edge assignments by total degree, degree vector, then edge-wise
/// partition order; within an assignment, vertex partitions vary with the
/// last vertex fastest, each vertex's list ordered by renormalized volume and
/// then lexicographically.
pub fn enumerate_fixed_points<'a>(
    g: &'a ToricCY3,
    beta_max: &[u32],
    n_max: i64,
) -> Result<FixedPoints<'a>, DtError> {
    check_geometry(g)?;
    if beta_max.len() != g.num_classes() {
        return Err(DtError::DegreeArity {
            expected: g.num_classes(),
            got: beta_max.len(),
        });
    }
    let mut assignments = Vec::new();
    assign_edges(g, beta_max, 0, &mut Vec::new(), &mut assignments);
    let mut keyed: Vec<_> = assignments
        .into_iter()
        .map(|parts| {
            let fp = FixedPoint {
                edge_partitions: parts,
                vertex_partitions: Vec::new(),
            };
            let d = fp.degree(g);
            let total: u32 = d.iter().sum();
            ((total, d), fp.edge_partitions)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(FixedPoints {
        g,
        n_max,
        assignments: keyed.into_iter().map(|(_, p)| p).collect::<Vec<_>>().into_iter(),
        pending: Vec::new().into_iter(),
        cache: HashMap::new(),
    })
}

/// Lowest `χ` among fixed points of each degree `β ≤ beta_max`: the edge
/// contribution plus minimal vertex volumes, minimized over edge assignments.
pub fn minimal_chi(g: &ToricCY3, beta_max: &[u32]) -> Result<BTreeMap<Degree, i64>, DtError> {
    check_geometry(g)?;
    if beta_max.len() != g.num_classes() {
        return Err(DtError::DegreeArity {
            expected: g.num_classes(),
            got: beta_max.len(),
        });
    }
    let mut assignments = Vec::new();
    assign_edges(g, beta_max, 0, &mut Vec::new(), &mut assignments);
    let mut out = BTreeMap::new();
    for edges in assignments {
        let fp = FixedPoint {
            vertex_partitions: (0..g.vertices.len())
                .map(|v| minimal3d(g.vertex_legs(v, &edges)))
                .collect(),
            edge_partitions: edges,
        };
        let n = chi(&fp, g);
        out.entry(fp.degree(g))
            .and_modify(|m: &mut i64| *m = (*m).min(n))
            .or_insert(n);
    }
    Ok(out)
}

fn assign_edges(
    g: &ToricCY3,
    budget: &[u32],
    edge: usize,
    prefix: &mut Vec<Partition2D>,
    out: &mut Vec<Vec<Partition2D>>,
) {
    if edge == g.edges.len() {
        out.push(prefix.clone());
        return;
    }
    let class = g.edges[edge].class;
    for lambda in enumerate2d_upto(budget[class]) {
        let mut rest = budget.to_vec();
        rest[class] -= lambda.size();
        prefix.push(lambda);
        assign_edges(g, &rest, edge + 1, prefix, out);
        prefix.pop();
    }
}

/// Stream of fixed points produced by [`enumerate_fixed_points`].
pub struct FixedPoints<'a> {
    g: &'a ToricCY3,
    n_max: i64,
    assignments: std::vec::IntoIter<Vec<Partition2D>>,
    pending: std::vec::IntoIter<FixedPoint>,
    cache: HashMap<([Partition2D; 3], i64), Vec<Partition3D>>,
}

impl FixedPoints<'_> {
    fn expand(&mut self, edges: Vec<Partition2D>) -> Vec<FixedPoint> {
        let g = self.g;
        let legs: Vec<[Partition2D; 3]> =
            (0..g.vertices.len()).map(|v| g.vertex_legs(v, &edges)).collect();
        let minima: Vec<i64> = legs
            .iter()
            .map(|l| minimal3d(l.clone()).renorm_volume())
            .collect();
        let edge_chi: i64 = g
            .edges
            .iter()
            .zip(&edges)
            .map(|(e, lambda)| f_edge(e.frame.m, e.frame.mprime, lambda))
            .sum();
        let slack = self.n_max - edge_chi - minima.iter().sum::<i64>();
        if slack < 0 {
            return Vec::new();
        }
        let options: Vec<Vec<(i64, Partition3D)>> = legs
            .into_iter()
            .zip(&minima)
            .map(|(l, &min)| {
                let vmax = min + slack;
                self.cache
                    .entry((l.clone(), vmax))
                    .or_insert_with(|| enumerate3d(l, vmax).expect("vmax is above the minimum"))
                    .iter()
                    .map(|pi| (pi.renorm_volume() - min, pi.clone()))
                    .collect()
            })
            .collect();

        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(options.len());
        product(&options, slack, &mut chosen, &mut |vertex_partitions| {
            out.push(FixedPoint {
                edge_partitions: edges.clone(),
                vertex_partitions: vertex_partitions.to_vec(),
            })
        });
        out
    }
}

fn product(
    options: &[Vec<(i64, Partition3D)>],
    slack: i64,
    chosen: &mut Vec<Partition3D>,
    emit: &mut impl FnMut(&[Partition3D]),
) {
    let Some((first, rest)) = options.split_first() else {
        emit(chosen);
        return;
    };
    for (excess, pi) in first {
        if *excess > slack {
            break;
        }
        chosen.push(pi.clone());
        product(rest, slack - excess, chosen, emit);
        chosen.pop();
    }
}

impl Iterator for FixedPoints<'_> {
    type Item = FixedPoint;

    fn next(&mut self) -> Option<FixedPoint> {
        loop {
            if let Some(fp) = self.pending.next() {
                return Some(fp);
            }
            let edges = self.assignments.next()?;
            self.pending = self.expand(edges).into_iter();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::builtin;

    fn p(rows: &[u32]) -> Partition2D {
        Partition2D::new(rows.to_vec()).unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn conifold_minimal(lambda: Partition2D) -> FixedPoint {
        let g = builtin("conifold").unwrap();
        let edges = vec![lambda];
        let vertex_partitions = (0..2).map(|v| minimal3d(g.vertex_legs(v, &edges))).collect();
        FixedPoint {
            edge_partitions: edges,
            vertex_partitions,
        }
    }

    #[test]
    fn c3_points_up_to_one() {
        let g = builtin("c3").unwrap();
        let pts: Vec<_> = enumerate_fixed_points(&g, &[], 1).unwrap().collect();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0], FixedPoint::empty(&g));
        assert_eq!(pts[1].vertex_partitions[0], Partition3D::finite([[0, 0, 0]]).unwrap());
    }

    #[test]
    fn conifold_points_up_to_one() {
        let g = builtin("conifold").unwrap();
        let pts: Vec<_> = enumerate_fixed_points(&g, &[1], 1).unwrap().collect();
        // empty, one box at either vertex, and the bare (1) curve
        assert_eq!(pts.len(), 4);
        assert!(pts.contains(&conifold_minimal(p(&[1]))));
        assert!(pts.iter().all(|fp| fp.is_compatible(&g)));
    }

    #[test]
    fn below_minimum_is_empty() {
        let g = builtin("conifold").unwrap();
        let pts: Vec<_> = enumerate_fixed_points(&g, &[1], -1).unwrap().collect();
        assert!(pts.is_empty());
    }

    #[test]
    fn chi_and_sign_examples() {
        let g = builtin("conifold").unwrap();
        let curve = conifold_minimal(p(&[1]));
        assert_eq!(chi(&curve, &g), 1);
        assert_eq!(sign(&curve, &g), 1);
        assert_eq!(chi(&conifold_minimal(p(&[2])), &g), 1);
        assert_eq!(sign(&FixedPoint::empty(&g), &g), 1);

        let c3 = builtin("c3").unwrap();
        let one = FixedPoint {
            edge_partitions: vec![],
            vertex_partitions: vec![Partition3D::finite([[0, 0, 0]]).unwrap()],
        };
        assert_eq!(chi(&one, &c3), 1);
        assert_eq!(sign(&one, &c3), -1);
    }

    #[test]
    fn weight_ratio_examples() {
        let c3 = builtin("c3").unwrap();
        let one = FixedPoint {
            edge_partitions: vec![],
            vertex_partitions: vec![Partition3D::finite([[0, 0, 0]]).unwrap()],
        };
        let s = [q(1), q(2), q(-3)];
        assert_eq!(weight_ratio(&one, &c3, &s).unwrap(), q(-1));

        let g = builtin("conifold").unwrap();
        let curve = conifold_minimal(p(&[1]));
        let mut cache = CharacterCache::new();
        assert!(cache.total_character(&curve, &g).unwrap().is_zero());
        assert_eq!(weight_ratio(&curve, &g, &s).unwrap(), q(1));

        assert_eq!(
            weight_ratio(&curve, &g, &[q(1), q(1), q(1)]),
            Err(DtError::NotOnSubtorus)
        );
    }

    #[test]
    fn rejects_wrong_arity() {
        let g = builtin("local_p1p1").unwrap();
        assert!(matches!(
            enumerate_fixed_points(&g, &[1], 2),
            Err(DtError::DegreeArity { expected: 2, got: 1 })
        ));
    }
}
