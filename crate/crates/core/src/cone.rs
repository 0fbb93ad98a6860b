//! Arbitrary planar cones: classification, normalization and atoms.
//!
//! Every root-closed monoid with quotient group ℤ² is the lattice of a
//! convex cone with apex at the origin that spans the plane. A unimodular
//! change of basis moves any such cone into one of seven canonical shapes:
//! the full plane, four half-plane lattices (closed, mixed, open, and the
//! irrational-boundary one with no atoms at all), a single slope-bounded
//! family, or a union of one family above the x-axis with a reflected one
//! below. Atoms are enumerated in canonical position and pulled back.
//!
//! Boundary rays with irrational slope carry no lattice points besides the
//! origin, so their inclusion flags are inert; they are normalized to
//! "excluded" and remembered in a warning flag.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{ExactReal, LatticePoint};
use crate::monoid::{
    collect_plan, family_plan, AtomPlan, AtomReport, AtomsError, Family, Progression,
    SpecialMonoid,
};
use crate::unimodular::Unimodular;

/// Index budget for the convergent search in the two-irrational-ray
/// normalization; generously above anything a desk-scale cone needs.
const NORMALIZE_INDEX_BUDGET: i64 = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeError {
    /// The cone does not span the plane, or a sector's angle is not
    /// strictly between 0 and π.
    DegenerateCone,
    /// Sector rays were given in clockwise order.
    RayOrder,
    /// A direction vector must be primitive (coprime coordinates).
    NotPrimitive,
    /// The zero vector is not a direction.
    ZeroDirection,
    /// The slope form only encodes non-vertical directions with `x_sign`.
    InvalidSlopeForm,
    /// This operation needs an irrational slope.
    ExpectedIrrational,
    /// The queried point is not a nonzero element of the monoid.
    NotMember,
    /// The expansion budget was exhausted before the construction could be
    /// certified.
    InsufficientPrecision,
    /// Enumeration bounds must be positive.
    NonpositiveBound,
    /// Error from the family enumerator.
    Atoms(AtomsError),
}

impl fmt::Display for ConeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeError::DegenerateCone => write!(f, "cone is degenerate"),
            ConeError::RayOrder => write!(f, "sector rays must be in counterclockwise order"),
            ConeError::NotPrimitive => write!(f, "direction vector must be primitive"),
            ConeError::ZeroDirection => write!(f, "zero vector is not a direction"),
            ConeError::InvalidSlopeForm => write!(f, "x_sign must be +1 or -1"),
            ConeError::ExpectedIrrational => write!(f, "slope must be irrational"),
            ConeError::NotMember => write!(f, "point is not a nonzero element of the monoid"),
            ConeError::InsufficientPrecision => {
                write!(f, "expansion too short to certify the construction")
            }
            ConeError::NonpositiveBound => write!(f, "bound must be positive"),
            ConeError::Atoms(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ConeError {}

impl From<AtomsError> for ConeError {
    fn from(e: AtomsError) -> Self {
        match e {
            AtomsError::InsufficientPrecision => ConeError::InsufficientPrecision,
            AtomsError::NonpositiveBound => ConeError::NonpositiveBound,
            AtomsError::NotMember => ConeError::NotMember,
            other => ConeError::Atoms(other),
        }
    }
}

impl From<crate::contfrac::ContfracError> for ConeError {
    fn from(_: crate::contfrac::ContfracError) -> Self {
        ConeError::InsufficientPrecision
    }
}

fn ord_sign(o: Ordering) -> i32 {
    match o {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// A ray direction from the origin: a primitive integer vector for
/// rational rays, or a signed slope form for irrational ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RayDir {
    Vector { x: BigInt, y: BigInt },
    Irrational { x_sign: i8, slope: ExactReal },
}

impl RayDir {
    /// Primitive integer direction.
    pub fn vector(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<RayDir, ConeError> {
        let x = x.into();
        let y = y.into();
        if x.is_zero() && y.is_zero() {
            return Err(ConeError::ZeroDirection);
        }
        if !x.gcd(&y).is_one() {
            return Err(ConeError::NotPrimitive);
        }
        Ok(RayDir::Vector { x, y })
    }

    /// Direction `(x_sign, x_sign * slope)`. Rational slopes normalize to
    /// their primitive vector.
    pub fn from_slope(x_sign: i8, slope: ExactReal) -> Result<RayDir, ConeError> {
        if x_sign != 1 && x_sign != -1 {
            return Err(ConeError::InvalidSlopeForm);
        }
        match &slope {
            ExactReal::Rational(r) => RayDir::vector(
                BigInt::from(x_sign) * r.den(),
                BigInt::from(x_sign) * r.num(),
            ),
            ExactReal::Quad(_) => Ok(RayDir::Irrational { x_sign, slope }),
        }
    }

    pub fn vertical(up: bool) -> RayDir {
        RayDir::Vector {
            x: BigInt::zero(),
            y: BigInt::from(if up { 1 } else { -1 }),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, RayDir::Vector { .. })
    }

    /// Exact direction components, scaled by a positive constant.
    pub fn components(&self) -> (ExactReal, ExactReal) {
        match self {
            RayDir::Vector { x, y } => (
                ExactReal::integer(x.clone()),
                ExactReal::integer(y.clone()),
            ),
            RayDir::Irrational { x_sign, slope } => {
                let s = ExactReal::integer(*x_sign as i64);
                (s.clone(), &s * slope)
            }
        }
    }

    /// Sign of `cross(self, (x, y)) = dx*y - dy*x`.
    pub fn cross_point(&self, x: &BigInt, y: &BigInt) -> i32 {
        match self {
            RayDir::Vector { x: dx, y: dy } => {
                let v = dx * y - dy * x;
                ord_sign(v.cmp(&BigInt::zero()))
            }
            RayDir::Irrational { x_sign, slope } => {
                // cross = s * (y - slope * x)
                let t = ord_sign(slope.cmp_mul_int(x, y)); // sign(slope*x - y)
                -(*x_sign as i32) * t
            }
        }
    }

    /// Sign of `dot(self, (x, y))`.
    pub fn dot_point(&self, x: &BigInt, y: &BigInt) -> i32 {
        match self {
            RayDir::Vector { x: dx, y: dy } => {
                let v = dx * x + dy * y;
                ord_sign(v.cmp(&BigInt::zero()))
            }
            RayDir::Irrational { x_sign, slope } => {
                // dot = s * (x + slope * y): compare slope*y with -x.
                let t = ord_sign(slope.cmp_mul_int(y, &-x));
                (*x_sign as i32) * t
            }
        }
    }

    /// Sign of `cross(self, other)`.
    pub fn cross_dir(&self, other: &RayDir) -> i32 {
        match (self, other) {
            (RayDir::Vector { x: ax, y: ay }, _) => other
                .cross_point(ax, ay)
                .checked_neg()
                .expect("sign negation"),
            (RayDir::Irrational { .. }, RayDir::Vector { x: bx, y: by }) => {
                self.cross_point(bx, by)
            }
            (
                RayDir::Irrational {
                    x_sign: s1,
                    slope: a,
                },
                RayDir::Irrational {
                    x_sign: s2,
                    slope: b,
                },
            ) => {
                // cross((s1, s1 a), (s2, s2 b)) = s1 s2 (b - a)
                (*s1 as i32) * (*s2 as i32) * ord_sign(b.compare(a))
            }
        }
    }

    /// Image direction under a unimodular point map.
    pub fn transformed(&self, m: &Unimodular) -> RayDir {
        match self {
            RayDir::Vector { x, y } => {
                let (ix, iy) = m.apply_big(x, y);
                RayDir::Vector { x: ix, y: iy }
            }
            RayDir::Irrational { x_sign, slope } => {
                let [[m11, m12], _] = m.rows();
                let image_slope = slope
                    .moebius(m)
                    .expect("vertical image impossible for irrational slopes");
                let denom = &ExactReal::integer(m11.clone())
                    + &(&ExactReal::integer(m12.clone()) * slope);
                let s = (*x_sign as i32) * denom.signum();
                debug_assert!(s != 0);
                RayDir::Irrational {
                    x_sign: if s > 0 { 1 } else { -1 },
                    slope: image_slope,
                }
            }
        }
    }

    /// Slope `y/x` of a direction with positive x component.
    fn positive_x_slope(&self) -> Option<ExactReal> {
        match self {
            RayDir::Vector { x, y } if x.is_positive() => {
                Some(ExactReal::ratio(y.clone(), x.clone()).expect("x positive"))
            }
            RayDir::Irrational { x_sign: 1, slope } => Some(slope.clone()),
            _ => None,
        }
    }
}

/// A boundary ray with its inclusion flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaySpec {
    pub dir: RayDir,
    pub included: bool,
    /// True when an inclusion request on an irrational ray was dropped:
    /// such rays carry no lattice points, so the flag has no effect.
    pub included_ignored: bool,
}

impl RaySpec {
    pub fn new(dir: RayDir, included: bool) -> RaySpec {
        if included && !dir.is_rational() {
            RaySpec {
                dir,
                included: false,
                included_ignored: true,
            }
        } else {
            RaySpec {
                dir,
                included,
                included_ignored: false,
            }
        }
    }
}

/// A convex cone with apex at the origin that spans the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeSpec {
    FullPlane,
    HalfPlane {
        /// Inner normal: the cone is the side it points into.
        normal: RayDir,
        /// Inclusion flags for the boundary rays `(d, -d)` where `d` is the
        /// normal rotated by -90°.
        included: (bool, bool),
        included_ignored: bool,
    },
    /// Rays in counterclockwise order spanning an angle in (0, π).
    Sector { low: RaySpec, high: RaySpec },
}

impl ConeSpec {
    pub fn full_plane() -> ConeSpec {
        ConeSpec::FullPlane
    }

    pub fn half_plane(normal: RayDir, included: (bool, bool)) -> ConeSpec {
        if normal.is_rational() {
            ConeSpec::HalfPlane {
                normal,
                included,
                included_ignored: false,
            }
        } else {
            let ignored = included.0 || included.1;
            ConeSpec::HalfPlane {
                normal,
                included: (false, false),
                included_ignored: ignored,
            }
        }
    }

    /// Sector between `low` and `high`; the counterclockwise angle from
    /// `low` to `high` must be strictly between 0 and π.
    pub fn sector(low: RaySpec, high: RaySpec) -> Result<ConeSpec, ConeError> {
        match low.dir.cross_dir(&high.dir) {
            1 => Ok(ConeSpec::Sector { low, high }),
            0 => Err(ConeError::DegenerateCone),
            _ => Err(ConeError::RayOrder),
        }
    }

    /// The sector realizing a slope-bounded family in standard position.
    pub fn from_special(spec: &SpecialMonoid) -> ConeSpec {
        let low = RaySpec::new(
            RayDir::vector(1, 0).unwrap(),
            spec.family().lower_included(),
        );
        let upper_dir = RayDir::from_slope(1, spec.alpha().clone()).expect("positive slope");
        let high = RaySpec::new(upper_dir, spec.family().upper_included());
        ConeSpec::sector(low, high).expect("family cone is a valid sector")
    }

    pub fn is_sector(&self) -> bool {
        matches!(self, ConeSpec::Sector { .. })
    }

    /// Exact membership of a lattice point, honoring inclusion flags.
    pub fn contains_big(&self, x: &BigInt, y: &BigInt) -> bool {
        if x.is_zero() && y.is_zero() {
            return true;
        }
        match self {
            ConeSpec::FullPlane => true,
            ConeSpec::HalfPlane {
                normal, included, ..
            } => match normal.dot_point(x, y) {
                1 => true,
                -1 => false,
                _ => match normal {
                    RayDir::Vector { x: nx, y: ny } => {
                        // On the boundary line: d = (ny, -nx).
                        let along = ny * x - nx * y;
                        if along.is_positive() {
                            included.0
                        } else {
                            included.1
                        }
                    }
                    RayDir::Irrational { .. } => {
                        debug_assert!(false, "irrational boundary carries no lattice points");
                        false
                    }
                },
            },
            ConeSpec::Sector { low, high } => {
                let s1 = low.dir.cross_point(x, y);
                let s2 = -high.dir.cross_point(x, y);
                match (s1, s2) {
                    (1, 1) => true,
                    (0, 1) => low.included,
                    (1, 0) => high.included,
                    _ => false,
                }
            }
        }
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.contains_big(&BigInt::from(p.x), &BigInt::from(p.y))
    }

    /// Strict interior membership; the apex is not interior.
    pub fn interior_contains_big(&self, x: &BigInt, y: &BigInt) -> bool {
        if x.is_zero() && y.is_zero() {
            return false;
        }
        match self {
            ConeSpec::FullPlane => true,
            ConeSpec::HalfPlane { normal, .. } => normal.dot_point(x, y) > 0,
            ConeSpec::Sector { low, high } => {
                low.dir.cross_point(x, y) > 0 && high.dir.cross_point(x, y) < 0
            }
        }
    }

    /// Image cone under a unimodular point map.
    pub fn transformed(&self, m: &Unimodular) -> ConeSpec {
        match self {
            ConeSpec::FullPlane => ConeSpec::FullPlane,
            ConeSpec::HalfPlane {
                normal,
                included,
                included_ignored,
            } => {
                // Inner normals transform by the inverse transpose.
                let w = m.inverse_transpose();
                let new_normal = normal.transformed(&w);
                let new_included = match (normal, &new_normal) {
                    (RayDir::Vector { x: nx, y: ny }, RayDir::Vector { x: mx, y: my }) => {
                        // Track which image ray the first flag follows.
                        let (dx, dy) = (ny.clone(), -nx);
                        let (ix, iy) = m.apply_big(&dx, &dy);
                        let (dpx, dpy) = (my.clone(), -mx);
                        if (ix, iy) == (dpx, dpy) {
                            *included
                        } else {
                            (included.1, included.0)
                        }
                    }
                    _ => (false, false),
                };
                ConeSpec::HalfPlane {
                    normal: new_normal,
                    included: new_included,
                    included_ignored: *included_ignored,
                }
            }
            ConeSpec::Sector { low, high } => {
                let mut new_low = RaySpec {
                    dir: low.dir.transformed(m),
                    included: low.included,
                    included_ignored: low.included_ignored,
                };
                let mut new_high = RaySpec {
                    dir: high.dir.transformed(m),
                    included: high.included,
                    included_ignored: high.included_ignored,
                };
                if m.det() < 0 {
                    core::mem::swap(&mut new_low, &mut new_high);
                }
                debug_assert_eq!(new_low.dir.cross_dir(&new_high.dir), 1);
                ConeSpec::Sector {
                    low: new_low,
                    high: new_high,
                }
            }
        }
    }
}

/// Canonical shape tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    A,
    B1,
    B2,
    B3,
    B4,
    C1,
    C2,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            CaseTag::A => "A",
            CaseTag::B1 => "B1",
            CaseTag::B2 => "B2",
            CaseTag::B3 => "B3",
            CaseTag::B4 => "B4",
            CaseTag::C1 => "C1",
            CaseTag::C2 => "C2",
        };
        write!(f, "{tag}")
    }
}

/// Case-dependent canonical payload.
#[derive(Clone, Debug, PartialEq)]
pub enum CanonicalForm {
    /// The full lattice; a group, every element a unit.
    Group,
    /// Closed upper half lattice: factorial, one class of associated atoms.
    UpperHalfClosed,
    /// Open upper half plus the nonnegative x-axis: not atomic.
    UpperHalfWithAxis,
    /// Open upper half plus the origin: infinite band of atoms.
    UpperHalfOpen,
    /// All points on or below an irrational slope: no atoms at all.
    IrrationalHalfPlane { alpha: ExactReal },
    /// A single slope-bounded family.
    Special(SpecialMonoid),
    /// A family above the x-axis glued to a reflected one below it.
    Wedge {
        upper: SpecialMonoid,
        lower: SpecialMonoid,
    },
}

impl CanonicalForm {
    /// Membership in the canonical region itself; composing with the
    /// classification map must reproduce membership in the input cone.
    pub fn contains(&self, p: LatticePoint) -> bool {
        match self {
            CanonicalForm::Group => true,
            CanonicalForm::UpperHalfClosed => p.y >= 0,
            CanonicalForm::UpperHalfWithAxis => p.y > 0 || (p.y == 0 && p.x >= 0),
            CanonicalForm::UpperHalfOpen => p.y > 0 || p.is_origin(),
            CanonicalForm::IrrationalHalfPlane { alpha } => {
                alpha.cmp_mul_int(&BigInt::from(p.x), &BigInt::from(p.y)) != Ordering::Less
            }
            CanonicalForm::Special(spec) => spec.contains(p),
            CanonicalForm::Wedge { upper, lower } => {
                upper.contains(p) || lower.contains(LatticePoint::new(p.x, -p.y))
            }
        }
    }
}

/// Result of normalization: case tag, the unimodular map carrying the
/// input cone onto the canonical shape, and that shape's parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub case: CaseTag,
    pub phi: Unimodular,
    pub canonical: CanonicalForm,
}

/// Geometric property flags of the monoid (it is root-closed by
/// construction).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PropertyFlags {
    pub root_closed: bool,
    pub completely_integrally_closed: bool,
    pub krull: bool,
    pub primary_reduced: bool,
}

/// Minimal nonnegative Bezout pair: `p*b + q*a = 1` with `0 <= a < |p|`
/// when `p != 0`.
fn bezout(p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
    if p.is_zero() {
        // q = ±1: a = q, b = 0.
        return (q.clone(), BigInt::zero());
    }
    let ext = p.extended_gcd(q);
    debug_assert!(ext.gcd.is_one(), "direction must be primitive");
    let (b0, a0) = (ext.x, ext.y);
    let a = a0.mod_floor(&p.abs());
    let k = (&a0 - &a) / p;
    let b = b0 + k * q;
    debug_assert!((p * &b + q * &a).is_one());
    (a, b)
}

/// Orientation-preserving map sending the primitive direction `(p, q)` to
/// `(1, 0)`. Callers compose a reflection when the cone must land on a
/// particular side.
fn axis_map(p: &BigInt, q: &BigInt) -> Unimodular {
    let (a, b) = bezout(p, q);
    Unimodular::new(b, a, -q, p.clone()).expect("det +1")
}

fn classify_half_plane(
    normal: &RayDir,
    included: (bool, bool),
) -> Result<Classification, ConeError> {
    match normal {
        RayDir::Vector { x: nx, y: ny } => {
            // Boundary direction d = (p, q) = normal rotated by -90°.
            let p = ny.clone();
            let q = -nx;
            let phi0 = axis_map(&p, &q);
            // The normal itself is strictly inside; it must map upward.
            let (_, img_y) = phi0.apply_big(nx, ny);
            let phi = if img_y.is_positive() {
                phi0
            } else {
                Unimodular::x_reflection().compose(&phi0)
            };
            // phi maps d to (1, 0) and the cone onto the upper half-plane.
            let (case, phi, canonical) = match included {
                (true, true) => (CaseTag::B1, phi, CanonicalForm::UpperHalfClosed),
                (false, false) => (CaseTag::B3, phi, CanonicalForm::UpperHalfOpen),
                (true, false) => (CaseTag::B2, phi, CanonicalForm::UpperHalfWithAxis),
                (false, true) => (
                    CaseTag::B2,
                    Unimodular::y_reflection().compose(&phi),
                    CanonicalForm::UpperHalfWithAxis,
                ),
            };
            Ok(Classification {
                case,
                phi,
                canonical,
            })
        }
        RayDir::Irrational { .. } => {
            // Rotate by quarter turns until the normal points into the
            // fourth quadrant; the cone is then below a positive
            // irrational slope.
            let (mut nx, mut ny) = normal.components();
            let mut phi = Unimodular::identity();
            for _ in 0..4 {
                if nx.is_positive() && ny.is_negative() {
                    let alpha = &nx / &(-&ny);
                    debug_assert!(alpha.is_positive() && !alpha.is_rational());
                    return Ok(Classification {
                        case: CaseTag::B4,
                        phi,
                        canonical: CanonicalForm::IrrationalHalfPlane { alpha },
                    });
                }
                // Rotating the cone by the quarter turn rotates the normal
                // the same way.
                let t = nx;
                nx = -&ny;
                ny = t;
                phi = Unimodular::quarter_turn().compose(&phi);
            }
            unreachable!("an irrational normal has nonzero components")
        }
    }
}

/// Smallest `n >= 1` with `(-n, 1)` outside the cone, given the high ray
/// of a sector whose low ray is the positive x-axis.
fn shear_amount(high: &RaySpec) -> BigInt {
    match &high.dir {
        RayDir::Vector { x: e, y: f } => {
            debug_assert!(f.is_positive());
            // The high ray crosses height 1 at x = e/f <= 0; (-n, 1) leaves
            // the cone strictly past that point, or at it when excluded.
            let t_num = -e;
            let (t, rem) = t_num.div_mod_floor(f);
            if rem.is_zero() {
                if high.included {
                    t + 1
                } else {
                    t.max(BigInt::one())
                }
            } else {
                t + 1
            }
        }
        RayDir::Irrational { x_sign, slope } => {
            debug_assert_eq!(*x_sign, -1);
            // Direction (-1, -slope) with slope < 0 crosses height 1 at
            // x = 1/slope; no lattice point hits the ray.
            let t = -&slope.recip();
            t.floor() + 1
        }
    }
}

fn classify_sector_with_rational_ray(
    cone: &ConeSpec,
    low: &RaySpec,
    high: &RaySpec,
) -> Result<Classification, ConeError> {
    // The clockwise-most rational ray goes to the positive x-axis.
    let pivot = if low.dir.is_rational() { low } else { high };
    let RayDir::Vector { x: p, y: q } = &pivot.dir else {
        unreachable!()
    };
    let mut phi = axis_map(p, q);
    let x_axis = RayDir::vector(1, 0).unwrap();
    {
        let image = cone.transformed(&phi);
        let ConeSpec::Sector { low: il, .. } = &image else {
            unreachable!()
        };
        if il.dir != x_axis {
            // The pivot landed as the high ray; reflect to make it low.
            phi = Unimodular::x_reflection().compose(&phi);
        }
    }
    let image = cone.transformed(&phi);
    let ConeSpec::Sector {
        low: img_low,
        high: img_high,
    } = &image
    else {
        unreachable!()
    };
    debug_assert_eq!(img_low.dir, x_axis);

    // Shear until the second ray's slope is positive.
    let needs_shear = match &img_high.dir {
        RayDir::Vector { x: e, .. } => !e.is_positive(),
        RayDir::Irrational { x_sign, .. } => *x_sign < 0,
    };
    let (final_low, final_high, phi) = if needs_shear {
        let n = shear_amount(img_high);
        let phi = Unimodular::shear_x(n + 1).compose(&phi);
        let image = cone.transformed(&phi);
        let ConeSpec::Sector { low, high } = image else {
            unreachable!()
        };
        (low, high, phi)
    } else {
        (img_low.clone(), img_high.clone(), phi)
    };
    debug_assert_eq!(final_low.dir, x_axis);

    let alpha = final_high
        .dir
        .positive_x_slope()
        .expect("normalized slope is positive");
    debug_assert!(alpha.is_positive());
    let family = Family::from_inclusion(final_low.included, final_high.included);
    let spec = SpecialMonoid::new(family, alpha)?;
    Ok(Classification {
        case: CaseTag::C1,
        phi,
        canonical: CanonicalForm::Special(spec),
    })
}

fn classify_sector_irrational(
    cone: &ConeSpec,
    low: &RaySpec,
) -> Result<Classification, ConeError> {
    let RayDir::Irrational { slope, .. } = &low.dir else {
        unreachable!()
    };
    let cf = crate::contfrac::cf_expand(slope, 4096);
    let mut table = crate::contfrac::ConvergentTable::new(cf);
    for n in 0..NORMALIZE_INDEX_BUDGET {
        let (p_n, q_n) = table.convergent(n)?;
        let (p_n1, q_n1) = table.convergent(n + 1)?;
        for eps in [1i64, -1] {
            let e = BigInt::from(eps);
            let (q, p) = (&e * &q_n, &e * &p_n);
            let (q1, p1) = (&e * &q_n1, &e * &p_n1);
            // The point (q, p) must avoid the cone along its whole line,
            // while the next convergent direction is strictly interior.
            if cone.contains_big(&q, &p) || cone.contains_big(&-&q, &-&p) {
                continue;
            }
            if !cone.interior_contains_big(&q1, &p1) {
                continue;
            }
            let delta = &p * &q1 - &p1 * &q;
            debug_assert!(delta.abs().is_one());
            let d = if delta.is_positive() { 1 } else { -1 };
            let phi = Unimodular::new(
                BigInt::from(d) * &p,
                BigInt::from(-d) * &q,
                BigInt::from(-d) * &p1,
                BigInt::from(d) * &q1,
            )
            .expect("determinant ±1 by the convergent identity");
            let image = cone.transformed(&phi);
            let ConeSpec::Sector {
                low: img_low,
                high: img_high,
            } = &image
            else {
                unreachable!()
            };
            let alpha = img_high
                .dir
                .positive_x_slope()
                .expect("upper ray has positive x and positive slope");
            let beta = -&img_low
                .dir
                .positive_x_slope()
                .expect("lower ray has positive x and negative slope");
            debug_assert!(alpha.is_positive() && beta.is_positive());
            let upper_family = if img_high.included {
                Family::M
            } else {
                Family::MCirc
            };
            let lower_family = if img_low.included {
                Family::M
            } else {
                Family::MCirc
            };
            let upper = SpecialMonoid::new(upper_family, alpha)?;
            let lower = SpecialMonoid::new(lower_family, beta)?;
            return Ok(Classification {
                case: CaseTag::C2,
                phi,
                canonical: CanonicalForm::Wedge { upper, lower },
            });
        }
    }
    Err(ConeError::InsufficientPrecision)
}

/// Classifies the cone and produces the unimodular map onto its canonical
/// shape.
pub fn classify(cone: &ConeSpec) -> Result<Classification, ConeError> {
    match cone {
        ConeSpec::FullPlane => Ok(Classification {
            case: CaseTag::A,
            phi: Unimodular::identity(),
            canonical: CanonicalForm::Group,
        }),
        ConeSpec::HalfPlane {
            normal, included, ..
        } => classify_half_plane(normal, *included),
        ConeSpec::Sector { low, high } => {
            if low.dir.is_rational() || high.dir.is_rational() {
                classify_sector_with_rational_ray(cone, low, high)
            } else {
                classify_sector_irrational(cone, low)
            }
        }
    }
}

/// Geometric property flags read directly off the cone shape.
pub fn monoid_properties(cone: &ConeSpec) -> PropertyFlags {
    let (cic, krull, primary_reduced) = match cone {
        ConeSpec::FullPlane => (true, true, false),
        ConeSpec::HalfPlane {
            normal, included, ..
        } => {
            let rational = normal.is_rational();
            let all_in = included.0 && included.1;
            let all_out = !included.0 && !included.1;
            (!rational || all_in, rational && all_in, all_out)
        }
        ConeSpec::Sector { low, high } => {
            let ray_closed =
                |r: &RaySpec| -> bool { !r.dir.is_rational() || r.included };
            let cic = ray_closed(low) && ray_closed(high);
            let krull = low.dir.is_rational()
                && high.dir.is_rational()
                && low.included
                && high.included;
            let primary_reduced = !low.included && !high.included;
            (cic, krull, primary_reduced)
        }
    };
    debug_assert!(!krull || cic, "krull implies completely integrally closed");
    PropertyFlags {
        root_closed: true,
        completely_integrally_closed: cic,
        krull,
        primary_reduced,
    }
}

fn empty_report(bound: i64) -> AtomReport {
    AtomReport::from_set(alloc::collections::BTreeSet::new(), bound)
}

/// All atoms of the cone's monoid inside `max(|x|, |y|) <= bound`,
/// enumerated in canonical position and pulled back through the
/// normalization map.
pub fn atoms_of_cone(cone: &ConeSpec, bound: i64) -> Result<AtomReport, ConeError> {
    if bound < 1 {
        return Err(ConeError::NonpositiveBound);
    }
    let class = classify(cone)?;
    let pull = class.phi.inverse();
    let canon_bound = BigInt::from(bound) * class.phi.box_norm();
    match &class.canonical {
        CanonicalForm::Group | CanonicalForm::IrrationalHalfPlane { .. } => {
            Ok(empty_report(bound))
        }
        CanonicalForm::UpperHalfClosed | CanonicalForm::UpperHalfOpen => {
            let plan = AtomPlan {
                progressions: alloc::vec![Progression::full_line(
                    (BigInt::zero(), BigInt::one()),
                    (BigInt::one(), BigInt::zero()),
                )],
                exclusions: Vec::new(),
            };
            let mut report = AtomReport::from_set(collect_plan(&plan, &pull, bound), bound);
            report.note = Some(String::from(
                if matches!(class.canonical, CanonicalForm::UpperHalfClosed) {
                    "atom set is an infinite band forming one class of associated atoms; listing is filtered to the box"
                } else {
                    "atom set is an infinite band; listing is filtered to the box"
                },
            ));
            Ok(report)
        }
        CanonicalForm::UpperHalfWithAxis => {
            let plan = AtomPlan {
                progressions: alloc::vec![Progression::single((BigInt::one(), BigInt::zero()))],
                exclusions: Vec::new(),
            };
            let mut report = AtomReport::from_set(collect_plan(&plan, &pull, bound), bound);
            report.atomic = false;
            report.note = Some(String::from(
                "monoid is not atomic: no element off the listed ray is a sum of atoms",
            ));
            Ok(report)
        }
        CanonicalForm::Special(spec) => {
            let plan = family_plan(spec, &canon_bound)?;
            Ok(AtomReport::from_set(collect_plan(&plan, &pull, bound), bound))
        }
        CanonicalForm::Wedge { upper, lower } => {
            let upper_plan = family_plan(upper, &canon_bound)?;
            let lower_plan = family_plan(lower, &canon_bound)?;
            let mut set = collect_plan(&upper_plan, &pull, bound);
            let reflect_pull = pull.compose(&Unimodular::x_reflection());
            set.extend(collect_plan(&lower_plan, &reflect_pull, bound));
            Ok(AtomReport::from_set(set, bound))
        }
    }
}

/// Constructive witness that no element below an irrational slope is an
/// atom: splits a nonzero member `h` of `{y <= alpha x}` into two nonzero
/// members using the first even-indexed convergent close enough to the
/// slope.
pub fn b4_witness_decomposition(
    alpha: &ExactReal,
    h: LatticePoint,
) -> Result<(LatticePoint, LatticePoint), ConeError> {
    if alpha.is_rational() || !alpha.is_positive() {
        return Err(ConeError::ExpectedIrrational);
    }
    let hx = BigInt::from(h.x);
    let hy = BigInt::from(h.y);
    if h.is_origin() || alpha.cmp_mul_int(&hx, &hy) == Ordering::Less {
        return Err(ConeError::NotMember);
    }
    let cf = crate::contfrac::cf_expand(alpha, 4096);
    let mut table = crate::contfrac::ConvergentTable::new(cf);
    let mut n = 0i64;
    while n < NORMALIZE_INDEX_BUDGET {
        let (p_n, q_n) = table.convergent(n)?;
        // alpha q_n - p_n < alpha x - y, i.e. alpha (q_n - x) < p_n - y.
        if alpha.cmp_mul_int(&(&q_n - &hx), &(&p_n - &hy)) == Ordering::Less {
            let part = LatticePoint::new(
                i64::try_from(&q_n).map_err(|_| ConeError::InsufficientPrecision)?,
                i64::try_from(&p_n).map_err(|_| ConeError::InsufficientPrecision)?,
            );
            let rest = h - part;
            debug_assert!(alpha.cmp_mul_int(&BigInt::from(rest.x), &BigInt::from(rest.y))
                != Ordering::Less);
            debug_assert!(!part.is_origin() && !rest.is_origin());
            return Ok((part, rest));
        }
        n += 2;
    }
    Err(ConeError::InsufficientPrecision)
}
