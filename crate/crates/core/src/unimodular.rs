//! Integer 2×2 matrices of determinant ±1, the automorphisms of ℤ².
//!
//! Atoms are invariant under these maps: if `phi` is unimodular then the
//! atoms of `phi(H)` are exactly the images of the atoms of `H`. All cone
//! normalizations in [`crate::cone`] are built from them.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::exact::LatticePoint;

/// Error raised when a matrix with determinant other than ±1 is offered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotUnimodular;

impl fmt::Display for NotUnimodular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "matrix determinant is not +1 or -1")
    }
}

impl core::error::Error for NotUnimodular {}

/// A 2×2 integer matrix with determinant ±1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Unimodular {
    rows: [[BigInt; 2]; 2],
    det: i8,
}

impl Unimodular {
    pub fn new(
        m11: impl Into<BigInt>,
        m12: impl Into<BigInt>,
        m21: impl Into<BigInt>,
        m22: impl Into<BigInt>,
    ) -> Result<Self, NotUnimodular> {
        let rows = [[m11.into(), m12.into()], [m21.into(), m22.into()]];
        let det = &rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0];
        let det = if det.is_one() {
            1
        } else if (-&det).is_one() {
            -1
        } else {
            return Err(NotUnimodular);
        };
        Ok(Unimodular { rows, det })
    }

    pub fn identity() -> Self {
        Unimodular::new(1, 0, 0, 1).unwrap()
    }

    /// Reflection at the x-axis.
    pub fn x_reflection() -> Self {
        Unimodular::new(1, 0, 0, -1).unwrap()
    }

    /// Reflection at the y-axis.
    pub fn y_reflection() -> Self {
        Unimodular::new(-1, 0, 0, 1).unwrap()
    }

    /// Counterclockwise rotation by a quarter turn.
    pub fn quarter_turn() -> Self {
        Unimodular::new(0, -1, 1, 0).unwrap()
    }

    /// `(x, y) -> (x + k*y, y)`.
    pub fn shear_x(k: impl Into<BigInt>) -> Self {
        Unimodular::new(1, k, 0, 1).unwrap()
    }

    /// `(x, y) -> (x, k*x + y)`.
    pub fn shear_y(k: impl Into<BigInt>) -> Self {
        Unimodular::new(1, 0, k, 1).unwrap()
    }

    pub fn rows(&self) -> &[[BigInt; 2]; 2] {
        &self.rows
    }

    pub fn det(&self) -> i8 {
        self.det
    }

    pub fn inverse(&self) -> Unimodular {
        let [[a, b], [c, d]] = &self.rows;
        let s = BigInt::from(self.det);
        Unimodular::new(d * &s, -(b * &s), -(c * &s), a * &s).expect("inverse stays unimodular")
    }

    /// `self ∘ rhs`: apply `rhs` first.
    pub fn compose(&self, rhs: &Unimodular) -> Unimodular {
        let [[a, b], [c, d]] = &self.rows;
        let [[e, f], [g, h]] = &rhs.rows;
        Unimodular::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
            .expect("product of unimodular maps is unimodular")
    }

    pub fn apply_big(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        let [[a, b], [c, d]] = &self.rows;
        (a * x + b * y, c * x + d * y)
    }

    /// Image of a lattice point. Panics if the image leaves `i64` range.
    pub fn apply(&self, p: LatticePoint) -> LatticePoint {
        let (x, y) = self.apply_big(&BigInt::from(p.x), &BigInt::from(p.y));
        LatticePoint::new(
            i64::try_from(x).expect("image x fits i64"),
            i64::try_from(y).expect("image y fits i64"),
        )
    }

    /// `(inverse)^T`, the matrix transforming inner normals when points
    /// transform by `self`.
    pub fn inverse_transpose(&self) -> Unimodular {
        let inv = self.inverse();
        let [[a, b], [c, d]] = &inv.rows;
        Unimodular::new(a.clone(), c.clone(), b.clone(), d.clone())
            .expect("transpose stays unimodular")
    }

    /// Max row sum of absolute entries: `|phi(p)|_box <= norm * |p|_box`.
    pub fn box_norm(&self) -> BigInt {
        let [[a, b], [c, d]] = &self.rows;
        let r0 = a.abs() + b.abs();
        let r1 = c.abs() + d.abs();
        r0.max(r1)
    }
}

impl fmt::Display for Unimodular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.rows;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

/// Componentwise image of a point list. The map is bijective on ℤ².
pub fn apply_unimodular(points: &[LatticePoint], m: &Unimodular) -> Vec<LatticePoint> {
    points.iter().map(|p| m.apply(*p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_singular_matrices() {
        assert!(Unimodular::new(2, 0, 0, 1).is_err());
        assert!(Unimodular::new(1, 1, 1, 1).is_err());
        assert!(Unimodular::new(1, 0, 5, 1).is_ok());
    }

    #[test]
    fn inverse_composes_to_identity() {
        let maps = [
            Unimodular::new(1, 2, 1, 3).unwrap(),
            Unimodular::new(0, 1, 1, 0).unwrap(),
            Unimodular::new(3, -2, -4, 3).unwrap(),
        ];
        for m in &maps {
            assert_eq!(m.compose(&m.inverse()), Unimodular::identity());
            assert_eq!(m.inverse().compose(m), Unimodular::identity());
        }
    }

    #[test]
    fn apply_examples() {
        let id = Unimodular::identity();
        assert_eq!(
            apply_unimodular(&[LatticePoint::new(1, 0)], &id),
            [LatticePoint::new(1, 0)]
        );
        let m = Unimodular::new(1, 0, -2, 1).unwrap();
        assert_eq!(
            apply_unimodular(&[LatticePoint::new(1, 2)], &m),
            [LatticePoint::new(1, 0)]
        );
        assert_eq!(
            apply_unimodular(&[LatticePoint::new(2, 5)], &Unimodular::x_reflection()),
            [LatticePoint::new(2, -5)]
        );
    }

    #[test]
    fn box_norm_bounds_images() {
        let m = Unimodular::new(2, 1, 1, 1).unwrap();
        let norm = m.box_norm();
        for x in -5i64..=5 {
            for y in -5i64..=5 {
                let p = LatticePoint::new(x, y);
                let q = m.apply(p);
                assert!(BigInt::from(q.box_norm()) <= &norm * BigInt::from(p.box_norm().max(1)));
            }
        }
    }
}
