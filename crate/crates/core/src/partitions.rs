//! Two- and three-dimensional partitions.
//!
//! A [`Partition2D`] is a Young diagram stored by its row lengths. Boxes are
//! addressed 0-based as `(row, col)`; the 1-based `(i, j)` of the edge weight
//! `f_edge` is `(row + 1, col + 1)`.
//!
//! A [`Partition3D`] is an order ideal in `Z≥0³` that may be infinite along
//! the coordinate axes. It is stored as its three leg diagrams plus the finite
//! set of boxes sitting above the union of the leg cylinders. The leg along
//! axis `i` lives in the plane of the two remaining axes `i' < i''`; a leg box
//! `(row, col)` occupies coordinate `row` on axis `i'` and `col` on axis `i''`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A lattice box in `Z≥0³`.
pub type Cell = [u32; 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("row lengths must be positive and weakly decreasing, got {0:?}")]
    NotAPartition(Vec<u32>),
    #[error("box {0:?} already lies in a leg cylinder")]
    ExtraInsideLegs(Cell),
    #[error("box {cell:?} is not supported: {missing:?} is missing")]
    NotAnOrderIdeal { cell: Cell, missing: Cell },
    #[error("volume bound {vmax} is below the minimal renormalized volume {minimum}")]
    VolumeBelowMinimum { vmax: i64, minimum: i64 },
}

/// The two axes transverse to `axis`, in increasing order.
pub fn transverse(axis: usize) -> (usize, usize) {
    match axis {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => panic!("axis {axis} out of range"),
    }
}

#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition2D {
    rows: Vec<u32>,
}

impl Partition2D {
    pub fn new(rows: Vec<u32>) -> Result<Self, PartitionError> {
        let ok = rows.iter().all(|&r| r > 0) && rows.windows(2).all(|w| w[0] >= w[1]);
        if ok {
            Ok(Self { rows })
        } else {
            Err(PartitionError::NotAPartition(rows))
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.rows.iter().sum()
    }

    pub fn num_rows(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn num_cols(&self) -> u32 {
        self.rows.first().copied().unwrap_or(0)
    }

    pub fn contains(&self, row: u32, col: u32) -> bool {
        self.rows.get(row as usize).is_some_and(|&len| col < len)
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.num_cols())
            .map(|c| self.rows.iter().take_while(|&&len| len > c).count() as u32)
            .collect();
        Self { rows }
    }

    /// Boxes as 0-based `(row, col)`, row-major.
    pub fn boxes(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (0..len).map(move |c| (r as u32, c)))
    }
}

impl fmt::Debug for Partition2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "(")?;
        for (k, r) in self.rows.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// `Σ_{(i,j)∈λ} [m(i−1) + m'(j−1) + 1]` with 1-based row `i` and column `j`.
pub fn f_edge(m: i64, mprime: i64, lambda: &Partition2D) -> i64 {
    lambda
        .boxes()
        .map(|(r, c)| m * r as i64 + mprime * c as i64 + 1)
        .sum()
}

/// All partitions of `n`, rows in decreasing lexicographic order.
pub fn enumerate2d(n: u32) -> Vec<Partition2D> {
    fn go(remaining: u32, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition2D>) {
        if remaining == 0 {
            out.push(Partition2D { rows: prefix.clone() });
            return;
        }
        for part in (1..=remaining.min(cap)).rev() {
            prefix.push(part);
            go(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// All partitions of size at most `n`, by size then [`enumerate2d`] order.
pub fn enumerate2d_upto(n: u32) -> Vec<Partition2D> {
    (0..=n).flat_map(enumerate2d).collect()
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition3D {
    legs: [Partition2D; 3],
    extra: BTreeSet<Cell>,
}

/// The configuration with the given legs and no boxes beyond the cylinders.
pub fn minimal3d(legs: [Partition2D; 3]) -> Partition3D {
    Partition3D {
        legs,
        extra: BTreeSet::new(),
    }
}

impl Partition3D {
    /// A finite plane partition (no legs).
    pub fn finite(cells: impl IntoIterator<Item = Cell>) -> Result<Self, PartitionError> {
        Self::with_extra(Default::default(), cells)
    }

    pub fn with_extra(
        legs: [Partition2D; 3],
        extra: impl IntoIterator<Item = Cell>,
    ) -> Result<Self, PartitionError> {
        let pi = Self {
            legs,
            extra: extra.into_iter().collect(),
        };
        for &cell in &pi.extra {
            if pi.in_cylinders(cell) {
                return Err(PartitionError::ExtraInsideLegs(cell));
            }
            for axis in 0..3 {
                if cell[axis] > 0 {
                    let mut below = cell;
                    below[axis] -= 1;
                    if !pi.contains(below) {
                        return Err(PartitionError::NotAnOrderIdeal {
                            cell,
                            missing: below,
                        });
                    }
                }
            }
        }
        Ok(pi)
    }

    pub fn legs(&self) -> &[Partition2D; 3] {
        &self.legs
    }

    pub fn leg(&self, axis: usize) -> &Partition2D {
        &self.legs[axis]
    }

    pub fn extra(&self) -> &BTreeSet<Cell> {
        &self.extra
    }

    pub fn in_cylinder(&self, axis: usize, cell: Cell) -> bool {
        let (a, b) = transverse(axis);
        self.legs[axis].contains(cell[a], cell[b])
    }

    /// Number of leg cylinders containing `cell`.
    pub fn cylinder_multiplicity(&self, cell: Cell) -> u32 {
        (0..3).filter(|&axis| self.in_cylinder(axis, cell)).count() as u32
    }

    fn in_cylinders(&self, cell: Cell) -> bool {
        (0..3).any(|axis| self.in_cylinder(axis, cell))
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.in_cylinders(cell) || self.extra.contains(&cell)
    }

    /// Every leg box fits in `[0, leg_extent)` along both transverse axes.
    pub fn leg_extent(&self) -> u32 {
        self.legs
            .iter()
            .map(|l| l.num_rows().max(l.num_cols()))
            .max()
            .unwrap_or(0)
    }

    /// Side length of a cube `[0, N]³` outside of which only single-cylinder
    /// boxes of the configuration occur.
    fn cutoff(&self) -> u32 {
        let extra_reach = self
            .extra
            .iter()
            .flat_map(|c| c.iter().copied())
            .max()
            .map_or(0, |m| m + 1);
        self.leg_extent().max(extra_reach)
    }

    /// `#(π ∩ [0,N]³) − (N+1)·Σ|legs|` for an explicit cutoff `n`.
    pub fn volume_at_cutoff(&self, n: u32) -> i64 {
        let mut count = 0i64;
        for x in 0..=n {
            for y in 0..=n {
                for z in 0..=n {
                    if self.contains([x, y, z]) {
                        count += 1;
                    }
                }
            }
        }
        let legs: i64 = self.legs.iter().map(|l| l.size() as i64).sum();
        count - (n as i64 + 1) * legs
    }

    /// Renormalized volume; may be negative.
    pub fn renorm_volume(&self) -> i64 {
        self.volume_at_cutoff(self.cutoff())
    }

    /// Boxes outside `π` whose removal-predecessors all lie in `π`. These are
    /// also the minimal generators of the monomial ideal of `π`.
    pub fn addable_cells(&self) -> BTreeSet<Cell> {
        let l = self.leg_extent();
        let mut candidates = BTreeSet::new();
        for x in 0..=l {
            for y in 0..=l {
                for z in 0..=l {
                    candidates.insert([x, y, z]);
                }
            }
        }
        for c in &self.extra {
            for axis in 0..3 {
                let mut up = *c;
                up[axis] += 1;
                candidates.insert(up);
            }
        }
        candidates
            .into_iter()
            .filter(|&c| !self.contains(c) && self.supported(c))
            .collect()
    }

    fn supported(&self, cell: Cell) -> bool {
        (0..3).all(|axis| {
            cell[axis] == 0 || {
                let mut below = cell;
                below[axis] -= 1;
                self.contains(below)
            }
        })
    }

    /// Extra boxes that can be removed while keeping an order ideal.
    pub fn removable_cells(&self) -> Vec<Cell> {
        self.extra
            .iter()
            .copied()
            .filter(|&c| {
                (0..3).all(|axis| {
                    let mut up = c;
                    up[axis] += 1;
                    !self.extra.contains(&up)
                })
            })
            .collect()
    }

    fn adding(&self, cell: Cell) -> Self {
        let mut next = self.clone();
        next.extra.insert(cell);
        next
    }
}

impl fmt::Debug for Partition3D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "π[{}, {}, {} | {:?}]",
            self.legs[0], self.legs[1], self.legs[2], self.extra
        )
    }
}

/// Every configuration with the given legs and renormalized volume at most
/// `vmax`, ordered by volume and then by the sorted extra-box list.
pub fn enumerate3d(legs: [Partition2D; 3], vmax: i64) -> Result<Vec<Partition3D>, PartitionError> {
    let base = minimal3d(legs);
    let minimum = base.renorm_volume();
    if vmax < minimum {
        return Err(PartitionError::VolumeBelowMinimum { vmax, minimum });
    }
    let mut out = vec![base.clone()];
    let mut level = vec![base];
    for _ in minimum..vmax {
        let next: BTreeSet<Partition3D> = level
            .iter()
            .flat_map(|pi| pi.addable_cells().into_iter().map(move |c| pi.adding(c)))
            .collect();
        if next.is_empty() {
            break;
        }
        level = next.into_iter().collect();
        out.extend(level.iter().cloned());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(rows: &[u32]) -> Partition2D {
        Partition2D::new(rows.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(Partition2D::new(vec![1, 2]).is_err());
        assert!(Partition2D::new(vec![2, 0]).is_err());
    }

    #[test]
    fn f_edge_examples() {
        assert_eq!(f_edge(5, -7, &Partition2D::empty()), 0);
        assert_eq!(f_edge(0, 0, &p(&[3, 1])), 4);
        assert_eq!(f_edge(-1, -1, &p(&[1])), 1);
        assert_eq!(f_edge(-1, -1, &p(&[2])), 1);
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(p(&[3, 1]).transpose(), p(&[2, 1, 1]));
        assert_eq!(Partition2D::empty().transpose(), Partition2D::empty());
    }

    #[test]
    fn enumerate2d_examples() {
        assert_eq!(enumerate2d(0), vec![Partition2D::empty()]);
        assert_eq!(enumerate2d(1), vec![p(&[1])]);
        assert_eq!(
            enumerate2d(4),
            vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])]
        );
    }

    #[test]
    fn minimal_volumes() {
        let e = Partition2D::empty;
        assert_eq!(minimal3d([e(), e(), e()]).renorm_volume(), 0);
        assert_eq!(minimal3d([p(&[1]), e(), e()]).renorm_volume(), 0);
        assert_eq!(minimal3d([p(&[1]), p(&[1]), e()]).renorm_volume(), -1);
        assert_eq!(minimal3d([p(&[1]), p(&[1]), p(&[1])]).renorm_volume(), -2);
    }

    #[test]
    fn volume_with_extra() {
        let one = Partition3D::finite([[0, 0, 0]]).unwrap();
        assert_eq!(one.renorm_volume(), 1);
        let e = Partition2D::empty;
        let pi = Partition3D::with_extra([p(&[1]), e(), e()], [[0, 1, 0]]).unwrap();
        assert_eq!(pi.renorm_volume(), 1);
    }

    #[test]
    fn with_extra_validates() {
        let e = Partition2D::empty;
        assert_eq!(
            Partition3D::with_extra([p(&[1]), e(), e()], [[3, 0, 0]]),
            Err(PartitionError::ExtraInsideLegs([3, 0, 0]))
        );
        assert!(matches!(
            Partition3D::finite([[0, 1, 0]]),
            Err(PartitionError::NotAnOrderIdeal { .. })
        ));
    }

    #[test]
    fn enumerate3d_rejects_low_bound() {
        let legs = [p(&[1]), p(&[1]), Partition2D::empty()];
        assert_eq!(
            enumerate3d(legs, -2),
            Err(PartitionError::VolumeBelowMinimum {
                vmax: -2,
                minimum: -1
            })
        );
    }

    #[test]
    fn single_leg_no_room() {
        let legs = [p(&[1]), Partition2D::empty(), Partition2D::empty()];
        let all = enumerate3d(legs.clone(), 0).unwrap();
        assert_eq!(all, vec![minimal3d(legs)]);
    }

    #[test]
    fn addable_cells_of_leg() {
        let legs = [p(&[1]), Partition2D::empty(), Partition2D::empty()];
        let cells: Vec<_> = minimal3d(legs).addable_cells().into_iter().collect();
        assert_eq!(cells, vec![[0, 0, 1], [0, 1, 0]]);
    }
}
