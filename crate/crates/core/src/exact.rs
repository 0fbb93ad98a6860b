//! Exact arithmetic over rationals and real quadratic irrationals.
//!
//! Every value is either `num/den` in lowest terms or `(a + b*sqrt(d))/c`
//! with `d >= 2` squarefree, `b != 0`, `c >= 1` and `gcd(a, b, c) = 1`.
//! Canonical forms are unique, so structural equality is value equality and
//! the derived `Eq`/`Hash` are sound. Comparisons, floors and unimodular
//! slope transforms are computed exactly; floating point appears nowhere.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::unimodular::Unimodular;

/// Errors from constructors, parsing and slope transforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactError {
    /// A rational was requested with denominator zero.
    ZeroDenominator,
    /// A quadratic value was requested with a negative radicand.
    NegativeDiscriminant,
    /// The image direction of a slope under a unimodular map is vertical,
    /// so it has no slope. The caller must handle this case.
    VerticalImage,
    /// The input string does not match the number grammar.
    Parse(String),
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::ZeroDenominator => write!(f, "denominator is zero"),
            ExactError::NegativeDiscriminant => write!(f, "radicand is negative"),
            ExactError::VerticalImage => write!(f, "image direction is vertical"),
            ExactError::Parse(msg) => write!(f, "invalid number literal: {msg}"),
        }
    }
}

impl core::error::Error for ExactError {}

/// A point of the lattice ℤ². `O = (0, 0)` is the monoid identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0 };

    pub fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn is_origin(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// `max(|x|, |y|)`, the box norm used for all enumeration bounds.
    pub fn box_norm(&self) -> i64 {
        self.x.abs().max(self.y.abs())
    }

    /// Report ordering: lexicographic by `(y, x)`.
    pub fn report_key(&self) -> (i64, i64) {
        (self.y, self.x)
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint::new(-self.x, -self.y)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `num/den` with `den >= 1` and `gcd(|num|, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }
}

/// `(a + b*sqrt(d))/c` with `d >= 2` squarefree, `b != 0`, `c >= 1`,
/// `gcd(a, b, c) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadIrr {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl QuadIrr {
    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c, &self.d)
    }
}

/// An exact real number: rational or real quadratic irrational.
///
/// These two classes are closed under everything the cone pipeline needs
/// (GL₂(ℤ) slope transforms in particular), so no wider number tower exists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactReal {
    Rational(Rational),
    Quad(QuadIrr),
}

/// Sign of `e + f*sqrt(d)` for `d >= 2` squarefree.
pub(crate) fn quad_sign_big(e: &BigInt, f: &BigInt, d: &BigInt) -> i32 {
    let se = sign_of(e);
    let sf = sign_of(f);
    match (se, sf) {
        (0, 0) => 0,
        (s, 0) | (0, s) => s,
        (1, 1) => 1,
        (-1, -1) => -1,
        _ => {
            // Opposite signs: compare e^2 with f^2 d. Equality would force
            // sqrt(d) rational, impossible for squarefree d >= 2.
            let e2 = e * e;
            let f2d = f * f * d;
            match e2.cmp(&f2d) {
                Ordering::Greater => se,
                Ordering::Less => sf,
                Ordering::Equal => unreachable!("d is squarefree and >= 2"),
            }
        }
    }
}

/// Sign of `e + f*sqrt(d)` in machine integers, `None` on overflow.
pub(crate) fn quad_sign_i128(e: i128, f: i128, d: i128) -> Option<i32> {
    let se = e.signum() as i32;
    let sf = f.signum() as i32;
    match (se, sf) {
        (0, 0) => Some(0),
        (s, 0) | (0, s) => Some(s),
        (1, 1) => Some(1),
        (-1, -1) => Some(-1),
        _ => {
            let e2 = e.checked_mul(e)?;
            let f2d = f.checked_mul(f)?.checked_mul(d)?;
            Some(match e2.cmp(&f2d) {
                Ordering::Greater => se,
                Ordering::Less => sf,
                Ordering::Equal => unreachable!("d is squarefree and >= 2"),
            })
        }
    }
}

/// Sign of `e + f*sqrt(d1) + g*sqrt(d2)` for distinct squarefree `d1, d2 >= 2`.
fn quad_pair_sign(e: &BigInt, f: &BigInt, d1: &BigInt, g: &BigInt, d2: &BigInt) -> i32 {
    let s1 = quad_sign_big(e, f, d1);
    let s2 = sign_of(g);
    if s1 == 0 {
        return s2;
    }
    if s2 == 0 || s1 == s2 {
        return s1;
    }
    // |e + f*sqrt(d1)| versus |g|*sqrt(d2): square both sides. The squares
    // can only be equal when both sides vanish, excluded above.
    let lhs_const = e * e + f * f * d1 - g * g * d2;
    let lhs_root = BigInt::from(2) * e * f;
    let u = quad_sign_big(&lhs_const, &lhs_root, d1);
    match u {
        1 => s1,
        -1 => s2,
        _ => unreachable!("sqrt(d1), sqrt(d2) are rationally independent"),
    }
}

fn sign_of(v: &BigInt) -> i32 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Split `d >= 0` into `s^2 * d'` with `d'` squarefree; returns `(d', s)`.
fn extract_square(d: &BigInt) -> (BigInt, BigInt) {
    let mut rest = d.clone();
    let mut root = BigInt::one();
    let mut k = BigInt::from(2);
    loop {
        let k2 = &k * &k;
        if k2 > rest {
            break;
        }
        while (&rest % &k2).is_zero() {
            rest /= &k2;
            root *= &k;
        }
        k += 1;
    }
    (rest, root)
}

/// Floor of `b * sqrt(d)` for `d >= 2` not a perfect square.
fn floor_b_sqrt_d(b: &BigInt, d: &BigInt) -> BigInt {
    if b.is_zero() {
        return BigInt::zero();
    }
    let s = (b * b * d).sqrt();
    if b.is_positive() {
        s
    } else {
        // b*sqrt(d) is negative irrational, so floor(-t) = -floor(t) - 1.
        -s - 1
    }
}

impl ExactReal {
    pub fn integer(n: impl Into<BigInt>) -> ExactReal {
        ExactReal::Rational(Rational {
            num: n.into(),
            den: BigInt::one(),
        })
    }

    pub fn zero() -> ExactReal {
        ExactReal::integer(0)
    }

    pub fn one() -> ExactReal {
        ExactReal::integer(1)
    }

    /// `num/den`, reduced, with positive denominator.
    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<ExactReal, ExactError> {
        let mut num = num.into();
        let mut den = den.into();
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num /= &g;
            den /= &g;
        }
        Ok(ExactReal::Rational(Rational { num, den }))
    }

    /// `(a + b*sqrt(d))/c` in canonical form. Square factors of `d` are
    /// pulled into `b`; values that turn out rational collapse to the
    /// `Rational` variant, so one value always has one representation.
    pub fn quadratic(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<ExactReal, ExactError> {
        let a = a.into();
        let b = b.into();
        let c = c.into();
        let d = d.into();
        if c.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        if d.is_negative() {
            return Err(ExactError::NegativeDiscriminant);
        }
        let (d_free, root) = extract_square(&d);
        let b = b * root;
        if b.is_zero() || d_free.is_zero() {
            return ExactReal::ratio(a, c);
        }
        if d_free.is_one() {
            return ExactReal::ratio(a + b, c);
        }
        let (mut a, mut b, mut c) = (a, b, c);
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(ExactReal::Quad(QuadIrr {
            a,
            b,
            c,
            d: d_free,
        }))
    }

    /// `sqrt(d)` for `d >= 0`.
    pub fn sqrt(d: impl Into<BigInt>) -> Result<ExactReal, ExactError> {
        ExactReal::quadratic(0, 1, 1, d)
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, ExactReal::Rational(_))
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, ExactReal::Rational(r) if r.den.is_one())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactReal::Rational(r) if r.num.is_zero())
    }

    pub fn signum(&self) -> i32 {
        match self {
            ExactReal::Rational(r) => sign_of(&r.num),
            ExactReal::Quad(q) => quad_sign_big(&q.a, &q.b, &q.d),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    /// Exact ordering of the two real values. Total on all pairs, including
    /// quadratic values over distinct radicands.
    pub fn compare(&self, other: &ExactReal) -> Ordering {
        use ExactReal::{Quad, Rational as Rat};
        let sign = match (self, other) {
            (Rat(x), Rat(y)) => sign_of(&(&x.num * &y.den - &y.num * &x.den)),
            (Quad(q), Rat(r)) => {
                // (a + b sqrt(d))/c - p/q, both denominators positive.
                let e = &q.a * &r.den - &r.num * &q.c;
                let f = &q.b * &r.den;
                quad_sign_big(&e, &f, &q.d)
            }
            (Rat(_), Quad(_)) => return other.compare(self).reverse(),
            (Quad(p), Quad(q)) if p.d == q.d => {
                let e = &p.a * &q.c - &q.a * &p.c;
                let f = &p.b * &q.c - &q.b * &p.c;
                quad_sign_big(&e, &f, &p.d)
            }
            (Quad(p), Quad(q)) => {
                let e = &p.a * &q.c - &q.a * &p.c;
                let f = &p.b * &q.c;
                let g = -(&q.b * &p.c);
                quad_pair_sign(&e, &f, &p.d, &g, &q.d)
            }
        };
        sign.cmp(&0)
    }

    /// Greatest integer `<= self`, computed exactly.
    pub fn floor(&self) -> BigInt {
        match self {
            ExactReal::Rational(r) => r.num.div_floor(&r.den),
            ExactReal::Quad(q) => {
                // a + floor(b sqrt d) <= a + b sqrt d < a + floor(b sqrt d) + 1,
                // and no integer multiple of c sits strictly between, so the
                // integer floor of the bracket determines the result.
                let t = &q.a + floor_b_sqrt_d(&q.b, &q.d);
                let n = t.div_floor(&q.c);
                debug_assert!({
                    let nn = ExactReal::integer(n.clone());
                    let np = ExactReal::integer(&n + 1);
                    nn.compare(self) != Ordering::Greater && self.compare(&np) == Ordering::Less
                });
                n
            }
        }
    }

    pub fn ceil(&self) -> BigInt {
        -((-self).floor())
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> ExactReal {
        match self {
            ExactReal::Rational(r) => {
                assert!(!r.num.is_zero(), "reciprocal of zero");
                ExactReal::ratio(r.den.clone(), r.num.clone()).unwrap()
            }
            ExactReal::Quad(q) => {
                // c / (a + b sqrt d) = c (a - b sqrt d) / (a^2 - b^2 d);
                // the norm is nonzero since the value is irrational.
                let norm = &q.a * &q.a - &q.b * &q.b * &q.d;
                ExactReal::quadratic(&q.c * &q.a, -(&q.c * &q.b), norm, q.d.clone()).unwrap()
            }
        }
    }

    /// Slope of the image of the direction `(1, self)` under the point map
    /// given by `m`, i.e. `(m21 + m22*self) / (m11 + m12*self)`.
    ///
    /// Rational slopes stay rational, quadratic slopes stay quadratic over
    /// the same radicand. Fails with [`ExactError::VerticalImage`] when the
    /// image direction is vertical.
    pub fn moebius(&self, m: &Unimodular) -> Result<ExactReal, ExactError> {
        let [[m11, m12], [m21, m22]] = m.rows();
        let num = &ExactReal::integer(m21.clone()) + &(&ExactReal::integer(m22.clone()) * self);
        let den = &ExactReal::integer(m11.clone()) + &(&ExactReal::integer(m12.clone()) * self);
        if den.is_zero() {
            return Err(ExactError::VerticalImage);
        }
        Ok(&num / &den)
    }

    /// Ordering of `self * x` against `y`; the membership primitive for
    /// slope inequalities `y <=> alpha * x`.
    pub fn cmp_mul_int(&self, x: &BigInt, y: &BigInt) -> Ordering {
        let sign = match self {
            ExactReal::Rational(r) => sign_of(&(&r.num * x - &r.den * y)),
            ExactReal::Quad(q) => {
                let e = &q.a * x - &q.c * y;
                let f = &q.b * x;
                quad_sign_big(&e, &f, &q.d)
            }
        };
        sign.cmp(&0)
    }

}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

fn same_field(p: &QuadIrr, q: &QuadIrr) {
    assert!(
        p.d == q.d,
        "arithmetic on quadratic values over distinct radicands"
    );
}

impl Neg for &ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        match self {
            ExactReal::Rational(r) => ExactReal::Rational(Rational {
                num: -&r.num,
                den: r.den.clone(),
            }),
            ExactReal::Quad(q) => ExactReal::Quad(QuadIrr {
                a: -&q.a,
                b: -&q.b,
                c: q.c.clone(),
                d: q.d.clone(),
            }),
        }
    }
}

impl Add for &ExactReal {
    type Output = ExactReal;
    fn add(self, rhs: &ExactReal) -> ExactReal {
        use ExactReal::{Quad, Rational as Rat};
        match (self, rhs) {
            (Rat(x), Rat(y)) => {
                ExactReal::ratio(&x.num * &y.den + &y.num * &x.den, &x.den * &y.den).unwrap()
            }
            (Quad(q), Rat(r)) | (Rat(r), Quad(q)) => ExactReal::quadratic(
                &q.a * &r.den + &r.num * &q.c,
                &q.b * &r.den,
                &q.c * &r.den,
                q.d.clone(),
            )
            .unwrap(),
            (Quad(p), Quad(q)) => {
                same_field(p, q);
                ExactReal::quadratic(
                    &p.a * &q.c + &q.a * &p.c,
                    &p.b * &q.c + &q.b * &p.c,
                    &p.c * &q.c,
                    p.d.clone(),
                )
                .unwrap()
            }
        }
    }
}

impl Sub for &ExactReal {
    type Output = ExactReal;
    fn sub(self, rhs: &ExactReal) -> ExactReal {
        self + &(-rhs)
    }
}

impl Mul for &ExactReal {
    type Output = ExactReal;
    fn mul(self, rhs: &ExactReal) -> ExactReal {
        use ExactReal::{Quad, Rational as Rat};
        match (self, rhs) {
            (Rat(x), Rat(y)) => ExactReal::ratio(&x.num * &y.num, &x.den * &y.den).unwrap(),
            (Quad(q), Rat(r)) | (Rat(r), Quad(q)) => ExactReal::quadratic(
                &q.a * &r.num,
                &q.b * &r.num,
                &q.c * &r.den,
                q.d.clone(),
            )
            .unwrap(),
            (Quad(p), Quad(q)) => {
                same_field(p, q);
                ExactReal::quadratic(
                    &p.a * &q.a + &p.b * &q.b * &p.d,
                    &p.a * &q.b + &p.b * &q.a,
                    &p.c * &q.c,
                    p.d.clone(),
                )
                .unwrap()
            }
        }
    }
}

impl Div for &ExactReal {
    type Output = ExactReal;
    #[allow(clippy::suspicious_arithmetic_impl)] // division via reciprocal
    fn div(self, rhs: &ExactReal) -> ExactReal {
        self * &rhs.recip()
    }
}

impl fmt::Display for ExactReal {
    /// Emits the number grammar used by the CLI and the JSON formats:
    /// `INT`, `INT/POSINT`, or `(INT+INT*sqrt(POSINT))/POSINT`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactReal::Rational(r) => {
                if r.den.is_one() {
                    write!(f, "{}", r.num)
                } else {
                    write!(f, "{}/{}", r.num, r.den)
                }
            }
            ExactReal::Quad(q) => write!(f, "({}+{}*sqrt({}))/{}", q.a, q.b, q.d, q.c),
        }
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, token: &str) -> Result<(), ExactError> {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(ExactError::Parse(alloc::format!(
                "expected `{token}` at byte {}",
                self.pos
            )))
        }
    }

    fn int(&mut self) -> Result<BigInt, ExactError> {
        let rest = self.rest();
        let mut len = 0;
        let bytes = rest.as_bytes();
        if bytes.first() == Some(&b'-') {
            len += 1;
        }
        while len < bytes.len() && bytes[len].is_ascii_digit() {
            len += 1;
        }
        let text = &rest[..len];
        if text.is_empty() || text == "-" {
            return Err(ExactError::Parse(alloc::format!(
                "expected integer at byte {}",
                self.pos
            )));
        }
        self.pos += len;
        Ok(BigInt::from_str(text).expect("digits parse"))
    }

    fn posint(&mut self) -> Result<BigInt, ExactError> {
        let at = self.pos;
        let v = self.int()?;
        if v.is_positive() {
            Ok(v)
        } else {
            Err(ExactError::Parse(alloc::format!(
                "expected positive integer at byte {at}"
            )))
        }
    }

    fn done(&self) -> Result<(), ExactError> {
        if self.pos == self.src.len() {
            Ok(())
        } else {
            Err(ExactError::Parse(alloc::format!(
                "trailing input at byte {}",
                self.pos
            )))
        }
    }
}

impl FromStr for ExactReal {
    type Err = ExactError;

    /// Parses the whitespace-free grammar `INT`, `INT/POSINT`, or
    /// `(INT+INT*sqrt(POSINT))/POSINT`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        if cur.rest().starts_with('(') {
            cur.eat("(")?;
            let a = cur.int()?;
            cur.eat("+")?;
            let b = cur.int()?;
            cur.eat("*sqrt(")?;
            let d = cur.posint()?;
            cur.eat("))/")?;
            let c = cur.posint()?;
            cur.done()?;
            ExactReal::quadratic(a, b, c, d)
        } else {
            let num = cur.int()?;
            if cur.rest().starts_with('/') {
                cur.eat("/")?;
                let den = cur.posint()?;
                cur.done()?;
                ExactReal::ratio(num, den)
            } else {
                cur.done()?;
                Ok(ExactReal::integer(num))
            }
        }
    }
}
