//! Regular continued fractions, convergents and second convergents.
//!
//! Rational values get their full Euclidean expansion; quadratic
//! irrationals are expanded with the surd algorithm, detecting the period
//! by state repetition. Convergent tables grow lazily and satisfy the
//! classical determinant identities, which the test suite checks on every
//! table it builds.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::ExactReal;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContfracError {
    /// Even-length normalization is only defined for finite expansions.
    NotFinite,
    /// A convergent or partial quotient beyond the available expansion was
    /// requested.
    IndexBeyondExpansion,
    /// Mediants require positive denominators.
    NonpositiveDenominator,
    /// Second convergents at the seed index are only defined for positive
    /// values.
    NegativeValueAtSeed,
}

impl fmt::Display for ContfracError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContfracError::NotFinite => write!(f, "expansion is not finite"),
            ContfracError::IndexBeyondExpansion => {
                write!(f, "index beyond the available expansion")
            }
            ContfracError::NonpositiveDenominator => {
                write!(f, "mediant requires positive denominators")
            }
            ContfracError::NegativeValueAtSeed => {
                write!(f, "seed-level second convergents require a positive value")
            }
        }
    }
}

impl core::error::Error for ContfracError {}

/// A regular continued fraction `[a0; a1, a2, ...]` with `a_i >= 1` for
/// `i >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CfExpansion {
    /// Complete expansion of a rational value, in canonical form (the last
    /// quotient is at least 2 unless the expansion is a single integer).
    Finite(Vec<BigInt>),
    /// Eventually periodic expansion of a quadratic irrational. The period
    /// is nonempty and minimal.
    Periodic {
        preperiod: Vec<BigInt>,
        period: Vec<BigInt>,
    },
    /// Prefix of an expansion whose period was not reached within the term
    /// budget.
    Truncated(Vec<BigInt>),
}

impl CfExpansion {
    /// Partial quotient `a_n`, if available.
    pub fn quotient(&self, n: usize) -> Option<BigInt> {
        match self {
            CfExpansion::Finite(q) | CfExpansion::Truncated(q) => q.get(n).cloned(),
            CfExpansion::Periodic { preperiod, period } => {
                if n < preperiod.len() {
                    Some(preperiod[n].clone())
                } else {
                    Some(period[(n - preperiod.len()) % period.len()].clone())
                }
            }
        }
    }

    /// Number of quotients, `None` when the expansion is infinite.
    pub fn term_count(&self) -> Option<usize> {
        match self {
            CfExpansion::Finite(q) | CfExpansion::Truncated(q) => Some(q.len()),
            CfExpansion::Periodic { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CfExpansion::Finite(_))
    }

    /// The quotients actually stored, in order (preperiod then period for
    /// the periodic case).
    pub fn stored_quotients(&self) -> Vec<BigInt> {
        match self {
            CfExpansion::Finite(q) | CfExpansion::Truncated(q) => q.clone(),
            CfExpansion::Periodic { preperiod, period } => {
                let mut v = preperiod.clone();
                v.extend(period.iter().cloned());
                v
            }
        }
    }

    /// Exact value of the expansion; `None` for truncated prefixes.
    ///
    /// Reconstructing a periodic expansion solves a quadratic whose
    /// discriminant grows with the period's continuants, and canonicalizing
    /// it factors out square divisors by trial division. This is cheap for
    /// the short periods of canonical inputs; it is not meant for
    /// adversarially long periods.
    pub fn value(&self) -> Option<ExactReal> {
        match self {
            CfExpansion::Finite(q) => Some(eval_finite(q)),
            CfExpansion::Truncated(_) => None,
            CfExpansion::Periodic { preperiod, period } => {
                // The purely periodic tail t satisfies t = (pt*t + pp)/(qt*t + qp)
                // where the coefficients come from the period's convergent
                // matrix, so t is the positive root of a quadratic.
                let (pt, pp, qt, qp) = convergent_matrix(period);
                // qt*t^2 + (qp - pt)*t - pp = 0
                let two_a = BigInt::from(2) * &qt;
                let b = &qp - &pt;
                let disc = &b * &b + BigInt::from(4) * &qt * &pp;
                let t = ExactReal::quadratic(-b, 1, two_a, disc).ok()?;
                // Fold the preperiod around the tail: value = (pn*t + pn1)/(qn*t + qn1).
                let (pn, pn1, qn, qn1) = convergent_matrix(preperiod);
                let num = &(&ExactReal::integer(pn) * &t) + &ExactReal::integer(pn1);
                let den = &(&ExactReal::integer(qn) * &t) + &ExactReal::integer(qn1);
                Some(&num / &den)
            }
        }
    }
}

/// `[[p_n, p_{n-1}], [q_n, q_{n-1}]]` for the quotient list, seeded with the
/// empty-product matrix.
fn convergent_matrix(quotients: &[BigInt]) -> (BigInt, BigInt, BigInt, BigInt) {
    let (mut p1, mut p0) = (BigInt::one(), BigInt::zero());
    let (mut q1, mut q0) = (BigInt::zero(), BigInt::one());
    for a in quotients {
        let p = a * &p1 + &p0;
        let q = a * &q1 + &q0;
        p0 = core::mem::replace(&mut p1, p);
        q0 = core::mem::replace(&mut q1, q);
    }
    (p1, p0, q1, q0)
}

fn eval_finite(quotients: &[BigInt]) -> ExactReal {
    let (p, _, q, _) = convergent_matrix(quotients);
    ExactReal::ratio(p, q).expect("q >= 1 for canonical expansions")
}

/// Regular continued fraction expansion of `x`.
///
/// Rational values are expanded completely regardless of `max_terms`.
/// Quadratic irrationals run the surd algorithm until a state repeats
/// (yielding the periodic form) or until `max_terms` quotients have been
/// produced (yielding a truncated prefix).
pub fn cf_expand(x: &ExactReal, max_terms: usize) -> CfExpansion {
    assert!(max_terms >= 1, "max_terms must be positive");
    match x {
        ExactReal::Rational(_) => CfExpansion::Finite(expand_rational(x)),
        ExactReal::Quad(q) => {
            let (a, b, c, d) = q.parts();
            expand_quadratic(a, b, c, d, max_terms)
        }
    }
}

fn expand_rational(x: &ExactReal) -> Vec<BigInt> {
    let ExactReal::Rational(r) = x else {
        unreachable!()
    };
    let mut p = r.num().clone();
    let mut q = r.den().clone();
    let mut quotients = Vec::new();
    loop {
        let (a, rem) = p.div_mod_floor(&q);
        quotients.push(a);
        if rem.is_zero() {
            return quotients;
        }
        p = q;
        q = rem;
    }
}

/// Surd algorithm on `x = (P + sqrt(D))/Q` with `Q | D - P^2` maintained.
fn expand_quadratic(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt, max_terms: usize) -> CfExpansion {
    // Rewrite (a + b*sqrt(d))/c with b possibly negative as (P + sqrt(D))/Q.
    let (mut p, mut q, mut big_d) = if b.is_positive() {
        (a.clone(), c.clone(), b * b * d)
    } else {
        (-a, -c, b * b * d)
    };
    // Scale so that Q divides D - P^2.
    let defect = &big_d - &p * &p;
    if !(&defect % &q).is_zero() {
        let s = q.abs();
        p *= &s;
        big_d *= &s * &s;
        q *= &s;
    }
    let sqrt_d_floor = big_d.sqrt();

    let mut quotients: Vec<BigInt> = Vec::new();
    let mut seen: BTreeMap<(BigInt, BigInt), usize> = BTreeMap::new();
    loop {
        // floor((P + sqrt(D))/Q) with sqrt(D) irrational.
        let a_n = if q.is_positive() {
            (&p + &sqrt_d_floor).div_floor(&q)
        } else {
            -((&p + &sqrt_d_floor).div_floor(&-&q)) - 1
        };
        // State of the NEXT complete quotient; repeats exactly on the period.
        let p_next = &a_n * &q - &p;
        let q_next = (&big_d - &p_next * &p_next) / &q;
        quotients.push(a_n);
        if quotients.len() == max_terms {
            // One more state check before giving up: the state reached now
            // may already close the period.
            if let Some(&start) = seen.get(&(p_next.clone(), q_next.clone())) {
                let period = quotients.split_off(start);
                return CfExpansion::Periodic {
                    preperiod: quotients,
                    period,
                };
            }
            return CfExpansion::Truncated(quotients);
        }
        if let Some(&start) = seen.get(&(p_next.clone(), q_next.clone())) {
            let period = quotients.split_off(start);
            return CfExpansion::Periodic {
                preperiod: quotients,
                period,
            };
        }
        seen.insert((p_next.clone(), q_next.clone()), quotients.len());
        p = p_next;
        q = q_next;
    }
}

/// Rewrites a finite expansion to even length without changing its value:
/// `[...; a_N]` with odd `N` becomes `[...; a_N - 1, 1]` when `a_N >= 2`,
/// and `[...; a_{N-1} + 1]` when `a_N = 1`.
pub fn normalize_even(cf: &CfExpansion) -> Result<CfExpansion, ContfracError> {
    let CfExpansion::Finite(q) = cf else {
        return Err(ContfracError::NotFinite);
    };
    let mut q = q.clone();
    if (q.len() - 1) % 2 == 0 {
        return Ok(CfExpansion::Finite(q));
    }
    let last = q.pop().expect("nonempty");
    if last.is_one() {
        *q.last_mut().expect("N >= 1") += 1;
    } else {
        q.push(last - 1);
        q.push(BigInt::one());
    }
    debug_assert_eq!((q.len() - 1) % 2, 0);
    Ok(CfExpansion::Finite(q))
}

/// Convergent table `p_n, q_n` for `n >= -2`, grown lazily from its
/// expansion. Values are immutable once computed; growth needs the single
/// owner's `&mut` handle.
#[derive(Clone, Debug)]
pub struct ConvergentTable {
    cf: CfExpansion,
    // pairs[k] = (p_{k-2}, q_{k-2})
    pairs: Vec<(BigInt, BigInt)>,
}

impl ConvergentTable {
    pub fn new(cf: CfExpansion) -> Self {
        ConvergentTable {
            cf,
            pairs: alloc::vec![
                (BigInt::zero(), BigInt::one()),
                (BigInt::one(), BigInt::zero()),
            ],
        }
    }

    /// Table with all convergents up to index `n_max` materialized.
    pub fn up_to(cf: CfExpansion, n_max: i64) -> Result<Self, ContfracError> {
        let mut t = ConvergentTable::new(cf);
        t.ensure(n_max)?;
        Ok(t)
    }

    pub fn cf(&self) -> &CfExpansion {
        &self.cf
    }

    pub fn quotient(&self, n: i64) -> Result<BigInt, ContfracError> {
        if n < 0 {
            return Err(ContfracError::IndexBeyondExpansion);
        }
        self.cf
            .quotient(n as usize)
            .ok_or(ContfracError::IndexBeyondExpansion)
    }

    /// Grows the table so that `convergent(n)` is available.
    pub fn ensure(&mut self, n: i64) -> Result<(), ContfracError> {
        if n < -2 {
            return Err(ContfracError::IndexBeyondExpansion);
        }
        while (self.pairs.len() as i64) - 2 <= n {
            let k = self.pairs.len();
            let a = self.quotient(k as i64 - 2)?;
            let p = &a * &self.pairs[k - 1].0 + &self.pairs[k - 2].0;
            let q = &a * &self.pairs[k - 1].1 + &self.pairs[k - 2].1;
            self.pairs.push((p, q));
        }
        Ok(())
    }

    /// `(p_n, q_n)` for `n >= -2`.
    pub fn convergent(&mut self, n: i64) -> Result<(BigInt, BigInt), ContfracError> {
        self.ensure(n)?;
        Ok(self.pairs[(n + 2) as usize].clone())
    }

    /// Second convergents `(p_{n,i}, q_{n,i}) = (p_n + i p_{n+1}, q_n + i q_{n+1})`
    /// for `i = 0 ..= a_{n+2}`. Every returned pair is coprime.
    pub fn second_convergents(
        &mut self,
        n: i64,
    ) -> Result<Vec<(BigInt, BigInt)>, ContfracError> {
        if n < -2 {
            return Err(ContfracError::IndexBeyondExpansion);
        }
        let limit = self.quotient(n + 2)?;
        if n == -2 && limit.is_negative() {
            // Negative values would need the mirrored index convention,
            // which no caller of this library requires.
            return Err(ContfracError::NegativeValueAtSeed);
        }
        let (p_n, q_n) = self.convergent(n)?;
        let (p_n1, q_n1) = self.convergent(n + 1)?;
        let mut out = Vec::new();
        let mut i = BigInt::zero();
        let mut p = p_n;
        let mut q = q_n;
        loop {
            out.push((p.clone(), q.clone()));
            if i == limit {
                break;
            }
            i += 1;
            p += &p_n1;
            q += &q_n1;
        }
        Ok(out)
    }
}

/// Mediant of `y1/x1` and `y2/x2` as a `(numerator, denominator)` pair;
/// requires `x1, x2 >= 1`, which keeps the mediant between the inputs.
pub fn mediant(
    a: (&BigInt, &BigInt),
    b: (&BigInt, &BigInt),
) -> Result<(BigInt, BigInt), ContfracError> {
    if !a.1.is_positive() || !b.1.is_positive() {
        return Err(ContfracError::NonpositiveDenominator);
    }
    Ok((a.0 + b.0, a.1 + b.1))
}
