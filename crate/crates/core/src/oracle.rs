//! Brute-force ground truth for atoms of strictly convex cones.
//!
//! This module answers atomhood by exhaustive search: a nonzero member `h`
//! is an atom exactly when no nonzero member `h1` other than `h` keeps
//! `h - h1` in the monoid. For a sector spanning less than a half turn the
//! divisors of `h` live in the bounded region `C ∩ (h - C)`, so the search
//! is finite and exact.
//!
//! The only code shared with the closed-form enumerators is the exact
//! arithmetic layer; membership tests and the atom logic are written here
//! from the raw ray data, so the two routes stay independent witnesses of
//! each other.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cone::{ConeSpec, RayDir, RaySpec};
use crate::contfrac::{cf_expand, ConvergentTable};
use crate::exact::{quad_sign_big, quad_sign_i128, ExactReal, LatticePoint};
use crate::monoid::AtomReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    /// Half-planes and the full plane admit elements with infinitely many
    /// divisors; the exhaustive search refuses them.
    NotStrictlyConvex,
    /// The queried point is not a nonzero element of the monoid.
    NotMember,
    /// The divisor region does not fit the machine-word search window.
    RegionTooLarge,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::NotStrictlyConvex => {
                write!(f, "exhaustive search requires a strictly convex sector")
            }
            OracleError::NotMember => {
                write!(f, "point is not a nonzero element of the monoid")
            }
            OracleError::RegionTooLarge => write!(f, "divisor region exceeds the search window"),
        }
    }
}

impl core::error::Error for OracleError {}

/// Sign of `(u1 x + u2 y) + (v1 x + v2 y) sqrt(d)` at lattice points, with
/// a machine-integer fast path and an exact big-integer fallback.
struct LinForm {
    u: (BigInt, BigInt),
    v: (BigInt, BigInt),
    d: BigInt,
    fast: Option<(i128, i128, i128, i128, i128)>,
}

impl LinForm {
    fn new(u: (BigInt, BigInt), v: (BigInt, BigInt), d: BigInt) -> LinForm {
        // Keep products with box-sized coordinates far from overflow.
        let cap = 1i128 << 40;
        let fit = |b: &BigInt| b.to_i128().filter(|v| v.abs() < cap);
        let fast = match (fit(&u.0), fit(&u.1), fit(&v.0), fit(&v.1), fit(&d)) {
            (Some(a), Some(b), Some(c), Some(e), Some(f)) => Some((a, b, c, e, f)),
            _ => None,
        };
        LinForm { u, v, d, fast }
    }

    fn rational(u1: BigInt, u2: BigInt) -> LinForm {
        LinForm::new((u1, u2), (BigInt::zero(), BigInt::zero()), BigInt::zero())
    }

    /// `sign(cross(dir, p))` as a linear form in `p`.
    fn cross_of(dir: &RayDir) -> LinForm {
        match dir {
            RayDir::Vector { x, y } => LinForm::rational(-y.clone(), x.clone()),
            RayDir::Irrational { x_sign, slope } => {
                let ExactReal::Quad(q) = slope else {
                    unreachable!("irrational ray slope is quadratic")
                };
                let (a, b, c, d) = q.parts();
                let s = BigInt::from(*x_sign);
                // s * (c y - a x - b x sqrt(d)), scaled by c > 0.
                LinForm::new(
                    (-(&s * a), &s * c),
                    (-(&s * b), BigInt::zero()),
                    d.clone(),
                )
            }
        }
    }

    fn sign(&self, p: LatticePoint) -> i32 {
        if let Some((u1, u2, v1, v2, d)) = self.fast {
            let x = p.x as i128;
            let y = p.y as i128;
            let e = u1 * x + u2 * y;
            if v1 == 0 && v2 == 0 {
                return e.signum() as i32;
            }
            let f = v1 * x + v2 * y;
            if let Some(s) = quad_sign_i128(e, f, d) {
                return s;
            }
        }
        let x = BigInt::from(p.x);
        let y = BigInt::from(p.y);
        let e = &self.u.0 * &x + &self.u.1 * &y;
        if self.v.0.is_zero() && self.v.1.is_zero() {
            return if e.is_positive() {
                1
            } else if e.is_negative() {
                -1
            } else {
                0
            };
        }
        let f = &self.v.0 * &x + &self.v.1 * &y;
        quad_sign_big(&e, &f, &self.d)
    }
}

/// Membership tester for one sector, built once per query batch.
struct SectorTester {
    low_cross: LinForm,
    high_cross: LinForm,
    low_included: bool,
    high_included: bool,
}

impl SectorTester {
    fn new(cone: &ConeSpec) -> Result<SectorTester, OracleError> {
        let ConeSpec::Sector { low, high } = cone else {
            return Err(OracleError::NotStrictlyConvex);
        };
        Ok(SectorTester {
            low_cross: LinForm::cross_of(&low.dir),
            high_cross: LinForm::cross_of(&high.dir),
            low_included: low.included,
            high_included: high.included,
        })
    }

    fn contains(&self, p: LatticePoint) -> bool {
        if p.is_origin() {
            return true;
        }
        let s1 = self.low_cross.sign(p);
        let s2 = -self.high_cross.sign(p);
        match (s1, s2) {
            (1, 1) => true,
            (0, 1) => self.low_included,
            (1, 0) => self.high_included,
            _ => false,
        }
    }
}

/// Exact membership of a lattice point in any cone, written from the raw
/// boundary data.
pub fn cone_contains(cone: &ConeSpec, p: LatticePoint) -> bool {
    if p.is_origin() {
        return true;
    }
    match cone {
        ConeSpec::FullPlane => true,
        ConeSpec::HalfPlane {
            normal, included, ..
        } => {
            // dot(normal, p) as a linear form: swap the cross form's roles.
            let dot = match normal {
                RayDir::Vector { x, y } => LinForm::rational(x.clone(), y.clone()),
                RayDir::Irrational { x_sign, slope } => {
                    let ExactReal::Quad(q) = slope else { unreachable!() };
                    let (a, b, c, d) = q.parts();
                    let s = BigInt::from(*x_sign);
                    // s * (c x + a y + b y sqrt(d)), scaled by c > 0.
                    LinForm::new((&s * c, &s * a), (BigInt::zero(), &s * b), d.clone())
                }
            };
            match dot.sign(p) {
                1 => true,
                -1 => false,
                _ => match normal {
                    RayDir::Vector { x: nx, y: ny } => {
                        let along = ny * BigInt::from(p.x) - nx * BigInt::from(p.y);
                        if along.is_positive() {
                            included.0
                        } else {
                            included.1
                        }
                    }
                    RayDir::Irrational { .. } => false,
                },
            }
        }
        ConeSpec::Sector { .. } => SectorTester::new(cone)
            .expect("sector")
            .contains(p),
    }
}

/// Increasingly tight integer directions strictly on the outer side of a
/// ray (clockwise of a low ray, counterclockwise of a high ray). Rational
/// rays are their own exact approximation.
fn outer_candidates(ray: &RaySpec, low_side: bool) -> Vec<(BigInt, BigInt)> {
    match &ray.dir {
        RayDir::Vector { x, y } => alloc::vec![(x.clone(), y.clone())],
        RayDir::Irrational { x_sign, slope } => {
            let cf = cf_expand(slope, 512);
            let mut table = ConvergentTable::new(cf);
            let mut out = Vec::new();
            let coeff_cap = BigInt::from(1i64 << 24);
            for n in 1..128i64 {
                let Ok((p_n, q_n)) = table.convergent(n) else {
                    break;
                };
                let s = BigInt::from(*x_sign);
                let cand = (&s * &q_n, &s * &p_n);
                let Ok(cand_dir) = RayDir::vector(cand.0.clone(), cand.1.clone()) else {
                    continue;
                };
                let side_ok = if low_side {
                    cand_dir.cross_dir(&ray.dir) > 0
                } else {
                    ray.dir.cross_dir(&cand_dir) > 0
                };
                if side_ok {
                    out.push(cand);
                }
                if q_n > coeff_cap {
                    break;
                }
            }
            out
        }
    }
}

type IntDir = (BigInt, BigInt);

/// Outer rational directions for both rays, tightened together until the
/// widened sector still spans less than a half turn.
fn outer_pair(low: &RaySpec, high: &RaySpec) -> Result<(IntDir, IntDir), OracleError> {
    let lows = outer_candidates(low, true);
    let highs = outer_candidates(high, false);
    if lows.is_empty() || highs.is_empty() {
        return Err(OracleError::RegionTooLarge);
    }
    // Tightest approximations first: they keep the scanned boxes close to
    // the true divisor regions.
    for k in (0..lows.len().max(highs.len())).rev() {
        let r1 = &lows[k.min(lows.len() - 1)];
        let r2 = &highs[k.min(highs.len() - 1)];
        if cross_pair(r1, r2).is_positive() {
            return Ok((r1.clone(), r2.clone()));
        }
    }
    Err(OracleError::RegionTooLarge)
}

/// Integer bounding box of the divisor region `C ∩ (h - C)`.
///
/// In the coordinates `u = cross(r1, p)`, `v = cross(p, r2)` of a widened
/// rational sector `r1, r2 ⊇ C`, the region is the rectangle
/// `[0, cross(r1, h)] × [0, cross(h, r2)]`, and `p` is recovered as
/// `(v r1 + u r2) / cross(r1, r2)`; the box is the image of the
/// rectangle's corners, rounded outward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorRegion {
    pub x_range: (i64, i64),
    pub y_range: (i64, i64),
}

impl DivisorRegion {
    pub fn widened(&self, margin: i64) -> DivisorRegion {
        DivisorRegion {
            x_range: (self.x_range.0 - margin, self.x_range.1 + margin),
            y_range: (self.y_range.0 - margin, self.y_range.1 + margin),
        }
    }
}

/// Per-cone search context: membership tester plus the widened rational
/// frame that bounds divisor regions. Built once, reused for every point.
struct SectorOracle {
    tester: SectorTester,
    r1: (BigInt, BigInt),
    r2: (BigInt, BigInt),
    det: BigInt,
}

fn cross_pair(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> BigInt {
    &a.0 * &b.1 - &a.1 * &b.0
}

impl SectorOracle {
    fn new(cone: &ConeSpec) -> Result<SectorOracle, OracleError> {
        let tester = SectorTester::new(cone)?;
        let ConeSpec::Sector { low, high } = cone else {
            unreachable!()
        };
        let (r1, r2) = outer_pair(low, high)?;
        let det = cross_pair(&r1, &r2);
        debug_assert!(det.is_positive());
        Ok(SectorOracle {
            tester,
            r1,
            r2,
            det,
        })
    }

    fn region(&self, h: LatticePoint) -> Result<DivisorRegion, OracleError> {
        let hb = (BigInt::from(h.x), BigInt::from(h.y));
        let u_max = cross_pair(&self.r1, &hb);
        let v_max = cross_pair(&hb, &self.r2);
        debug_assert!(!u_max.is_negative() && !v_max.is_negative());
        let corner =
            |u: &BigInt, v: &BigInt| (v * &self.r1.0 + u * &self.r2.0, v * &self.r1.1 + u * &self.r2.1);
        let zero = BigInt::zero();
        let corners = [
            corner(&zero, &zero),
            corner(&u_max, &zero),
            corner(&zero, &v_max),
            corner(&u_max, &v_max),
        ];
        let mut x_lo: Option<BigInt> = None;
        let mut x_hi: Option<BigInt> = None;
        let mut y_lo: Option<BigInt> = None;
        let mut y_hi: Option<BigInt> = None;
        for (cx, cy) in corners {
            let xf = cx.div_floor(&self.det);
            let xc = cx.div_ceil(&self.det);
            let yf = cy.div_floor(&self.det);
            let yc = cy.div_ceil(&self.det);
            x_lo = Some(x_lo.map_or(xf.clone(), |v| v.min(xf)));
            x_hi = Some(x_hi.map_or(xc.clone(), |v| v.max(xc)));
            y_lo = Some(y_lo.map_or(yf.clone(), |v| v.min(yf)));
            y_hi = Some(y_hi.map_or(yc.clone(), |v| v.max(yc)));
        }
        let to_i64 = |v: Option<BigInt>| -> Result<i64, OracleError> {
            v.unwrap().to_i64().ok_or(OracleError::RegionTooLarge)
        };
        Ok(DivisorRegion {
            x_range: (to_i64(x_lo)?, to_i64(x_hi)?),
            y_range: (to_i64(y_lo)?, to_i64(y_hi)?),
        })
    }

    fn is_atom_in(&self, region: &DivisorRegion, h: LatticePoint) -> Result<bool, OracleError> {
        let area = (region.x_range.1 - region.x_range.0 + 1) as i128
            * (region.y_range.1 - region.y_range.0 + 1) as i128;
        if area > 200_000_000 {
            return Err(OracleError::RegionTooLarge);
        }
        for x in region.x_range.0..=region.x_range.1 {
            for y in region.y_range.0..=region.y_range.1 {
                let p = LatticePoint::new(x, y);
                if p.is_origin() || p == h || !self.tester.contains(p) {
                    continue;
                }
                if self.tester.contains(h - p) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Integer bounding box of the divisor region of `h`.
pub fn divisor_region(cone: &ConeSpec, h: LatticePoint) -> Result<DivisorRegion, OracleError> {
    SectorOracle::new(cone)?.region(h)
}

/// Exhaustive atom test: scans the whole divisor region of `h`.
pub fn oracle_is_atom(cone: &ConeSpec, h: LatticePoint) -> Result<bool, OracleError> {
    let oracle = SectorOracle::new(cone)?;
    if h.is_origin() || !oracle.tester.contains(h) {
        return Err(OracleError::NotMember);
    }
    let region = oracle.region(h)?;
    oracle.is_atom_in(&region, h)
}

/// All atoms with `max(|x|, |y|) <= bound`, each certified by the
/// exhaustive divisor scan (which follows divisors beyond the box).
pub fn oracle_atoms_in_box(cone: &ConeSpec, bound: i64) -> Result<AtomReport, OracleError> {
    let oracle = SectorOracle::new(cone)?;
    let mut atoms = BTreeSet::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            let p = LatticePoint::new(x, y);
            if p.is_origin() || !oracle.tester.contains(p) {
                continue;
            }
            let region = oracle.region(p)?;
            if oracle.is_atom_in(&region, p)? {
                atoms.insert(p);
            }
        }
    }
    Ok(AtomReport::from_set(atoms, bound))
}

/// Distinct factorizations of `h` into oracle atoms, as multisets sorted
/// in report order, at most `max_factorizations` of them; the list is
/// ordered lexicographically by leading atom.
pub fn factor_into_atoms(
    cone: &ConeSpec,
    h: LatticePoint,
    max_factorizations: usize,
) -> Result<Vec<Vec<LatticePoint>>, OracleError> {
    let oracle = SectorOracle::new(cone)?;
    if !oracle.tester.contains(h) {
        return Err(OracleError::NotMember);
    }
    let mut atom_memo: BTreeMap<LatticePoint, bool> = BTreeMap::new();
    let mut out: Vec<Vec<LatticePoint>> = Vec::new();
    let mut path: Vec<LatticePoint> = Vec::new();
    factor_rec(
        &oracle,
        h,
        None,
        &mut atom_memo,
        &mut path,
        &mut out,
        max_factorizations,
    )?;
    Ok(out)
}

fn factor_rec(
    oracle: &SectorOracle,
    rest: LatticePoint,
    min_atom: Option<LatticePoint>,
    atom_memo: &mut BTreeMap<LatticePoint, bool>,
    path: &mut Vec<LatticePoint>,
    out: &mut Vec<Vec<LatticePoint>>,
    cap: usize,
) -> Result<(), OracleError> {
    if out.len() >= cap {
        return Ok(());
    }
    if rest.is_origin() {
        out.push(path.clone());
        return Ok(());
    }
    // Candidate atoms dividing `rest` all lie in its divisor region.
    let region = oracle.region(rest)?;
    let mut candidates: Vec<LatticePoint> = Vec::new();
    for x in region.x_range.0..=region.x_range.1 {
        for y in region.y_range.0..=region.y_range.1 {
            let p = LatticePoint::new(x, y);
            if p.is_origin()
                || !oracle.tester.contains(p)
                || !oracle.tester.contains(rest - p)
            {
                continue;
            }
            if let Some(min) = min_atom {
                if p.report_key() < min.report_key() {
                    continue;
                }
            }
            let is_atom = match atom_memo.get(&p) {
                Some(v) => *v,
                None => {
                    let reg = oracle.region(p)?;
                    let v = oracle.is_atom_in(&reg, p)?;
                    atom_memo.insert(p, v);
                    v
                }
            };
            if is_atom {
                candidates.push(p);
            }
        }
    }
    candidates.sort_by_key(|p| p.report_key());
    for a in candidates {
        if out.len() >= cap {
            break;
        }
        path.push(a);
        factor_rec(oracle, rest - a, Some(a), atom_memo, path, out, cap)?;
        path.pop();
    }
    Ok(())
}
