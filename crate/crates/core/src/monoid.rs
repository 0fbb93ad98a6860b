//! The four slope-bounded monoid families and their atom sets.
//!
//! For `alpha > 0` the families are the submonoids of ℤ² between the
//! x-axis and the line of slope `alpha`, with each of the two boundary
//! rays either included or excluded. Their atoms are read off the
//! convergents and second convergents of `alpha`: the closed family's
//! atoms are exactly the points `(q, p)` of the even-indexed second
//! convergents `p/q`; dropping the upper boundary replaces the final
//! convergent by an infinite arithmetic progression of atoms above it, and
//! dropping the lower boundary adds the band of atoms at height one.
//!
//! Enumeration works on arithmetic progressions of lattice points, so a
//! box bound never costs more than the atoms it actually contains, even
//! after pulling the progressions back through a unimodular map.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::contfrac::{cf_expand, normalize_even, CfExpansion, ContfracError, ConvergentTable};
use crate::exact::{ExactReal, LatticePoint};
use crate::unimodular::Unimodular;

/// Term budget for internal continued-fraction expansions. Periodic
/// expansions are detected long before this for any reasonable radicand;
/// hitting the budget surfaces as [`AtomsError::InsufficientPrecision`].
const CF_TERM_BUDGET: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomsError {
    /// The slope of a special monoid must be positive.
    NonpositiveAlpha,
    /// The queried point is not a nonzero element of the monoid.
    NotMember,
    /// The open-above enumeration is only defined for rational slopes.
    IrrationalAlpha,
    /// The atom criterion is only implemented for the families containing
    /// the x-axis.
    UnsupportedFamily,
    /// The available expansion is too short to certify that the box is
    /// covered, so a complete report cannot be produced.
    InsufficientPrecision,
    /// Enumeration bounds must be positive.
    NonpositiveBound,
}

impl fmt::Display for AtomsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomsError::NonpositiveAlpha => write!(f, "slope must be positive"),
            AtomsError::NotMember => write!(f, "point is not a nonzero element of the monoid"),
            AtomsError::IrrationalAlpha => {
                write!(f, "open-above enumeration requires a rational slope")
            }
            AtomsError::UnsupportedFamily => {
                write!(f, "atom criterion requires a family containing the x-axis")
            }
            AtomsError::InsufficientPrecision => {
                write!(f, "expansion too short to certify completeness for the box")
            }
            AtomsError::NonpositiveBound => write!(f, "bound must be positive"),
        }
    }
}

impl core::error::Error for AtomsError {}

impl From<ContfracError> for AtomsError {
    fn from(_: ContfracError) -> Self {
        AtomsError::InsufficientPrecision
    }
}

/// Which boundary points of the slope cone belong to the monoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `0 <= y <= alpha x`: both boundaries included.
    M,
    /// `0 <= y < alpha x` plus the origin: upper boundary excluded.
    MCirc,
    /// `0 < y <= alpha x` plus the origin: lower boundary excluded.
    MGt0,
    /// `0 < y < alpha x` plus the origin: both boundaries excluded.
    MCircGt0,
}

impl Family {
    pub fn lower_included(self) -> bool {
        matches!(self, Family::M | Family::MCirc)
    }

    pub fn upper_included(self) -> bool {
        matches!(self, Family::M | Family::MGt0)
    }

    pub fn from_inclusion(lower: bool, upper: bool) -> Family {
        match (lower, upper) {
            (true, true) => Family::M,
            (true, false) => Family::MCirc,
            (false, true) => Family::MGt0,
            (false, false) => Family::MCircGt0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Family::M => "M",
            Family::MCirc => "Mo",
            Family::MGt0 => "Mgt0",
            Family::MCircGt0 => "Mogt0",
        };
        write!(f, "{tag}")
    }
}

/// A slope-bounded monoid `family` at slope `alpha > 0`.
///
/// For irrational slopes the upper boundary carries no lattice points, so
/// the open-above families collapse onto their closed counterparts at
/// construction; one monoid, one spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialMonoid {
    family: Family,
    alpha: ExactReal,
}

impl SpecialMonoid {
    pub fn new(family: Family, alpha: ExactReal) -> Result<Self, AtomsError> {
        if !alpha.is_positive() {
            return Err(AtomsError::NonpositiveAlpha);
        }
        let family = if alpha.is_rational() {
            family
        } else {
            match family {
                Family::MCirc => Family::M,
                Family::MCircGt0 => Family::MGt0,
                other => other,
            }
        };
        Ok(SpecialMonoid { family, alpha })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn alpha(&self) -> &ExactReal {
        &self.alpha
    }

    /// Exact membership test.
    pub fn contains(&self, h: LatticePoint) -> bool {
        if h.is_origin() {
            return true;
        }
        let lower_ok = if self.family.lower_included() {
            h.y >= 0
        } else {
            h.y > 0
        };
        if !lower_ok {
            return false;
        }
        // alpha * x versus y.
        let up = self
            .alpha
            .cmp_mul_int(&BigInt::from(h.x), &BigInt::from(h.y));
        if self.family.upper_included() {
            up != core::cmp::Ordering::Less
        } else {
            up == core::cmp::Ordering::Greater
        }
    }

    /// Atom criterion for the families containing the x-axis: a nonzero
    /// `(x0, y0)` is an atom iff it is `(1, 0)`, or `y0 > 0` and every
    /// other nonzero member `(x, y)` with `0 < y <= y0` has strictly
    /// smaller slope. The scan domain `1 <= x <= x0`, `1 <= y <= y0` is
    /// finite and covers every candidate.
    pub fn is_atom(&self, a: LatticePoint) -> Result<bool, AtomsError> {
        if !matches!(self.family, Family::M | Family::MCirc) {
            return Err(AtomsError::UnsupportedFamily);
        }
        if a.is_origin() || !self.contains(a) {
            return Err(AtomsError::NotMember);
        }
        if a.y == 0 {
            return Ok(a.x == 1);
        }
        for x in 1..=a.x {
            for y in 1..=a.y {
                let h = LatticePoint::new(x, y);
                if h == a || !self.contains(h) {
                    continue;
                }
                // y/x >= y0/x0 contradicts atomicity.
                if (y as i128) * (a.x as i128) >= (a.y as i128) * (x as i128) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Sorted, deduplicated atom listing inside the box `max(|x|, |y|) <= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomReport {
    pub bound: i64,
    /// Atoms sorted lexicographically by `(y, x)`.
    pub atoms: Vec<LatticePoint>,
    /// Always true on success: no atom inside the box is missing.
    pub complete_up_to_bound: bool,
    /// False only for the half-plane case whose single listed atom does
    /// not generate the monoid.
    pub atomic: bool,
    /// Set when the listed box is a window onto an infinite band.
    pub note: Option<String>,
}

impl AtomReport {
    pub(crate) fn from_set(set: BTreeSet<LatticePoint>, bound: i64) -> AtomReport {
        let mut atoms: Vec<LatticePoint> = set.into_iter().collect();
        atoms.sort_by_key(|p| p.report_key());
        AtomReport {
            bound,
            atoms,
            complete_up_to_bound: true,
            atomic: true,
            note: None,
        }
    }

    pub fn atom_set(&self) -> BTreeSet<LatticePoint> {
        self.atoms.iter().copied().collect()
    }
}

/// An arithmetic progression of lattice points `base + i * step` for `i`
/// in an integer interval (either end may be unbounded).
#[derive(Clone, Debug)]
pub(crate) struct Progression {
    pub base: (BigInt, BigInt),
    pub step: (BigInt, BigInt),
    pub lo: Option<BigInt>,
    pub hi: Option<BigInt>,
}

impl Progression {
    fn block(base: (BigInt, BigInt), step: (BigInt, BigInt), hi: BigInt) -> Progression {
        Progression {
            base,
            step,
            lo: Some(BigInt::zero()),
            hi: Some(hi),
        }
    }

    fn tail(base: (BigInt, BigInt), step: (BigInt, BigInt)) -> Progression {
        Progression {
            base,
            step,
            lo: Some(BigInt::zero()),
            hi: None,
        }
    }

    pub(crate) fn full_line(base: (BigInt, BigInt), step: (BigInt, BigInt)) -> Progression {
        Progression {
            base,
            step,
            lo: None,
            hi: None,
        }
    }

    pub(crate) fn single(point: (BigInt, BigInt)) -> Progression {
        Progression {
            base: point,
            step: (BigInt::zero(), BigInt::zero()),
            lo: Some(BigInt::zero()),
            hi: Some(BigInt::zero()),
        }
    }
}

/// Atom generators plus points to drop from the final set.
#[derive(Clone, Debug, Default)]
pub(crate) struct AtomPlan {
    pub progressions: Vec<Progression>,
    pub exclusions: Vec<(BigInt, BigInt)>,
}

/// Solves `|b + i*s| <= bound` for integer `i`; `None` means infeasible,
/// unbounded sides stay `None` inside the pair.
fn coord_interval(
    b: &BigInt,
    s: &BigInt,
    bound: &BigInt,
) -> Option<(Option<BigInt>, Option<BigInt>)> {
    if s.is_zero() {
        if b.abs() <= *bound {
            Some((None, None))
        } else {
            None
        }
    } else {
        let lo_num = -bound - b;
        let hi_num = bound - b;
        let (lo, hi) = if s.is_positive() {
            (lo_num.div_ceil(s), hi_num.div_floor(s))
        } else {
            (hi_num.div_ceil(s), lo_num.div_floor(s))
        };
        if lo > hi {
            None
        } else {
            Some((Some(lo), Some(hi)))
        }
    }
}

fn max_lower(a: Option<BigInt>, b: Option<&BigInt>) -> Option<BigInt> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) => Some(x),
        (None, Some(y)) => Some(y.clone()),
        (Some(x), Some(y)) => Some(if x >= *y { x } else { y.clone() }),
    }
}

fn min_upper(a: Option<BigInt>, b: Option<&BigInt>) -> Option<BigInt> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) => Some(x),
        (None, Some(y)) => Some(y.clone()),
        (Some(x), Some(y)) => Some(if x <= *y { x } else { y.clone() }),
    }
}

/// Collects the images of a plan under `map`, filtered to the box. The
/// interval arithmetic keeps the cost proportional to the points emitted.
pub(crate) fn collect_plan(
    plan: &AtomPlan,
    map: &Unimodular,
    bound: i64,
) -> BTreeSet<LatticePoint> {
    let big_bound = BigInt::from(bound);
    let mut set = BTreeSet::new();
    for prog in &plan.progressions {
        let base = map.apply_big(&prog.base.0, &prog.base.1);
        let step = map.apply_big(&prog.step.0, &prog.step.1);
        let Some((lo_x, hi_x)) = coord_interval(&base.0, &step.0, &big_bound) else {
            continue;
        };
        let Some((lo_y, hi_y)) = coord_interval(&base.1, &step.1, &big_bound) else {
            continue;
        };
        let lo = max_lower(max_lower(lo_x, lo_y.as_ref()), prog.lo.as_ref());
        let hi = min_upper(min_upper(hi_x, hi_y.as_ref()), prog.hi.as_ref());
        let (Some(lo), Some(hi)) = (lo, hi) else {
            // Unbounded index ranges only survive for a zero step, which no
            // producer emits without a finite index range.
            debug_assert!(prog.step.0.is_zero() && prog.step.1.is_zero());
            continue;
        };
        let mut i = lo.clone();
        let mut x = &base.0 + &lo * &step.0;
        let mut y = &base.1 + &lo * &step.1;
        while i <= hi {
            let px = i64::try_from(&x).expect("in-box coordinate fits i64");
            let py = i64::try_from(&y).expect("in-box coordinate fits i64");
            set.insert(LatticePoint::new(px, py));
            i += 1;
            x += &step.0;
            y += &step.1;
        }
    }
    for (ex, ey) in &plan.exclusions {
        let (x, y) = map.apply_big(ex, ey);
        if let (Ok(px), Ok(py)) = (i64::try_from(&x), i64::try_from(&y)) {
            set.remove(&LatticePoint::new(px, py));
        }
    }
    set
}

/// Expansion of `alpha` ready for atom reading: even-length for rationals.
fn expansion_for_atoms(alpha: &ExactReal) -> Result<CfExpansion, AtomsError> {
    let cf = cf_expand(alpha, CF_TERM_BUDGET);
    if cf.is_finite() {
        Ok(normalize_even(&cf)?)
    } else {
        Ok(cf)
    }
}

/// Progressions for the closed family: one block per even index `n`, the
/// block at `n` running over the second convergents between the
/// convergents at `n` and `n + 2`. Adjacent blocks share their seam point;
/// set semantics absorb the duplicate.
fn closed_blocks(cf: &CfExpansion, canon_bound: &BigInt) -> Result<Vec<Progression>, AtomsError> {
    let finite_top: Option<i64> = match cf {
        CfExpansion::Finite(q) => Some(q.len() as i64 - 1),
        _ => None,
    };
    let mut table = ConvergentTable::new(cf.clone());
    let mut blocks = Vec::new();
    let mut n = -2i64;
    loop {
        if let Some(top) = finite_top {
            if n > top - 2 {
                break;
            }
        }
        let (p_n, q_n) = table.convergent(n)?;
        // Every atom from this block on has x >= q_n and y >= p_n, both
        // nondecreasing, so leaving the box here certifies completeness.
        if n >= 0 && (&q_n > canon_bound || &p_n > canon_bound) {
            break;
        }
        let (p_n1, q_n1) = table.convergent(n + 1)?;
        let a_n2 = table.quotient(n + 2)?;
        blocks.push(Progression::block((q_n, p_n), (q_n1, p_n1), a_n2));
        n += 2;
    }
    Ok(blocks)
}

/// Plan for the open-above family of a rational slope: the closed blocks
/// with the top convergent dropped, plus the arithmetic progression of
/// atoms climbing past it.
fn open_above_plan(cf: &CfExpansion, canon_bound: &BigInt) -> Result<AtomPlan, AtomsError> {
    let CfExpansion::Finite(quotients) = cf else {
        return Err(AtomsError::IrrationalAlpha);
    };
    let top = quotients.len() as i64 - 1; // even by normalization
    let mut blocks = closed_blocks(cf, canon_bound)?;
    if let Some(last) = blocks.last_mut() {
        // Drop the top seam point (q_N, p_N) itself.
        last.hi = Some(last.hi.clone().expect("finite block") - 1);
    }
    let mut table = ConvergentTable::new(cf.clone());
    let (p_top, q_top) = table.convergent(top)?;
    let (p_prev, q_prev) = table.convergent(top - 1)?;
    // The anchor one step below the seam is the convergent difference
    // (q_N - q_{N-1}, p_N - p_{N-1}); the tail climbs from anchor + seam in
    // steps of the seam.
    let base = (&q_top - &q_prev + &q_top, &p_top - &p_prev + &p_top);
    let mut plan = AtomPlan {
        progressions: blocks,
        exclusions: Vec::new(),
    };
    plan.progressions
        .push(Progression::tail(base, (q_top, p_top)));
    Ok(plan)
}

fn band_start(alpha: &ExactReal, strict: bool) -> BigInt {
    let inv = alpha.recip();
    let n0 = if strict { inv.floor() + 1 } else { inv.ceil() };
    n0.max(BigInt::one())
}

/// Full plan for any family at `alpha`, complete for the canonical-side
/// box of radius `canon_bound`.
pub(crate) fn family_plan(
    spec: &SpecialMonoid,
    canon_bound: &BigInt,
) -> Result<AtomPlan, AtomsError> {
    let cf = expansion_for_atoms(&spec.alpha)?;
    let closed = |cf: &CfExpansion| -> Result<AtomPlan, AtomsError> {
        Ok(AtomPlan {
            progressions: closed_blocks(cf, canon_bound)?,
            exclusions: Vec::new(),
        })
    };
    let upper_open = |cf: &CfExpansion| -> Result<AtomPlan, AtomsError> {
        if spec.alpha.is_rational() {
            open_above_plan(cf, canon_bound)
        } else {
            closed(cf)
        }
    };
    let mut plan = match spec.family {
        Family::M => closed(&cf)?,
        Family::MCirc => upper_open(&cf)?,
        Family::MGt0 | Family::MCircGt0 => {
            let strict = spec.family == Family::MCircGt0;
            let mut plan = if strict { upper_open(&cf)? } else { closed(&cf)? };
            let n0 = band_start(&spec.alpha, strict);
            plan.progressions.push(Progression::tail(
                (n0, BigInt::one()),
                (BigInt::one(), BigInt::zero()),
            ));
            plan.exclusions.push((BigInt::one(), BigInt::zero()));
            plan
        }
    };
    plan.progressions.retain(|p| match (&p.lo, &p.hi) {
        (Some(lo), Some(hi)) => lo <= hi,
        _ => true,
    });
    Ok(plan)
}

fn check_bound(bound: i64) -> Result<(), AtomsError> {
    if bound >= 1 {
        Ok(())
    } else {
        Err(AtomsError::NonpositiveBound)
    }
}

/// Atoms of the closed family `0 <= y <= alpha x` inside the box.
pub fn atoms_closed(alpha: &ExactReal, bound: i64) -> Result<AtomReport, AtomsError> {
    let spec = SpecialMonoid::new(Family::M, alpha.clone())?;
    enumerate_atoms(&spec, bound)
}

/// Atoms of the closed family read from a caller-supplied expansion;
/// truncated prefixes are accepted and fail only when they are too short
/// to certify the box.
pub fn atoms_closed_from_cf(cf: &CfExpansion, bound: i64) -> Result<AtomReport, AtomsError> {
    check_bound(bound)?;
    let cf = if cf.is_finite() {
        normalize_even(cf)?
    } else {
        cf.clone()
    };
    let plan = AtomPlan {
        progressions: closed_blocks(&cf, &BigInt::from(bound))?,
        exclusions: Vec::new(),
    };
    Ok(AtomReport::from_set(
        collect_plan(&plan, &Unimodular::identity(), bound),
        bound,
    ))
}

/// Atoms of the open-above family `0 <= y < alpha x` (rational `alpha`).
pub fn atoms_open_above(alpha: &ExactReal, bound: i64) -> Result<AtomReport, AtomsError> {
    if !alpha.is_rational() {
        return Err(AtomsError::IrrationalAlpha);
    }
    let spec = SpecialMonoid::new(Family::MCirc, alpha.clone())?;
    enumerate_atoms(&spec, bound)
}

/// Atoms of the positive-height families `0 < y <= alpha x` and
/// `0 < y < alpha x`.
pub fn atoms_positive_y(
    alpha: &ExactReal,
    open_above: bool,
    bound: i64,
) -> Result<AtomReport, AtomsError> {
    let family = if open_above {
        Family::MCircGt0
    } else {
        Family::MGt0
    };
    let spec = SpecialMonoid::new(family, alpha.clone())?;
    enumerate_atoms(&spec, bound)
}

/// Complete atom set of `spec` inside the box, dispatching on the family.
pub fn enumerate_atoms(spec: &SpecialMonoid, bound: i64) -> Result<AtomReport, AtomsError> {
    check_bound(bound)?;
    let plan = family_plan(spec, &BigInt::from(bound))?;
    Ok(AtomReport::from_set(
        collect_plan(&plan, &Unimodular::identity(), bound),
        bound,
    ))
}

/// Number of atoms of the closed family for rational `alpha`: one more
/// than the sum of the even-indexed partial quotients.
pub fn closed_atom_count(alpha: &ExactReal) -> Option<BigInt> {
    if !alpha.is_rational() || !alpha.is_positive() {
        return None;
    }
    let CfExpansion::Finite(q) = normalize_even(&cf_expand(alpha, CF_TERM_BUDGET)).ok()? else {
        return None;
    };
    let mut count = BigInt::one();
    for (i, a) in q.iter().enumerate() {
        if i % 2 == 0 {
            count += a;
        }
    }
    Some(count)
}
