//! Exact scalars and 2×2 linear algebra.
//!
//! [`Rational`] is an arbitrary-precision fraction, [`QuadExt`] an element
//! `a + b√d` of a real quadratic field, and [`Mat2`] a 2×2 rational matrix
//! acting on column vectors. Nothing here touches floating point.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type Vec2 = [Rational; 2];

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn vec2(l: i64, h: i64) -> Vec2 {
    [int(l), int(h)]
}

pub fn as_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| Error::Parse(format!("rational {s:?}")))
}

/// Determinant of the matrix with columns `u`, `v`.
pub fn cross(u: &Vec2, v: &Vec2) -> Rational {
    &u[0] * &v[1] - &u[1] * &v[0]
}

/// Serializes a rational as a JSON integer when it is one, otherwise as "p/q".
pub fn serialize_rational<S: Serializer>(
    q: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match as_i64(q) {
        Some(n) => s.serialize_i64(n),
        None => s.serialize_str(&q.to_string()),
    }
}

pub fn serialize_opt_rational<S: Serializer>(
    q: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => serialize_rational(q, s),
        None => s.serialize_none(),
    }
}

pub fn serialize_rationals<S: Serializer>(
    qs: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(qs.len()))?;
    for q in qs {
        seq.serialize_element(&JsonRational(q))?;
    }
    seq.end()
}

pub(crate) struct JsonRational<'a>(pub &'a Rational);

impl Serialize for JsonRational<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_rational(self.0, s)
    }
}

/// Splits `n ≥ 0` as `square² · free` with `free` square-free, by trial division.
pub fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_negative(), "square_free_split of a negative number");
    if n.is_zero() {
        return (BigInt::zero(), BigInt::one());
    }
    if let Some(small) = n.to_u128() {
        let (s, f) = square_free_split_u128(small);
        return (BigInt::from(s), BigInt::from(f));
    }
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= &p;
        }
        p += 1;
    }
    (square, free * rest)
}

fn square_free_split_u128(mut rest: u128) -> (u128, u128) {
    let mut square = 1u128;
    let mut free = 1u128;
    let mut p = 2u128;
    while p * p <= rest {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
        p += 1;
    }
    (square, free * rest)
}

/// An element `a + b√d` of the real quadratic field Q(√d).
///
/// The radicand is kept square-free; an element with `b = 0` is rational and
/// stores `d = 0`, so it combines with any field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: BigInt,
}

impl QuadExt {
    /// Builds `a + b√d`, pulling square factors of `d` into `b`.
    ///
    /// # Panics
    /// If `d` is negative.
    pub fn new(a: Rational, b: Rational, d: impl Into<BigInt>) -> Self {
        let d = d.into();
        assert!(!d.is_negative(), "negative radicand {d}");
        let (s, free) = square_free_split(&d);
        let b = b * Rational::from_integer(s);
        if b.is_zero() {
            return Self::rational(a);
        }
        if free.is_one() {
            return Self::rational(a + b);
        }
        QuadExt { a, b, d: free }
    }

    pub fn rational(a: Rational) -> Self {
        QuadExt {
            a,
            b: Rational::zero(),
            d: BigInt::zero(),
        }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::rational(int(n))
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn conj(&self) -> Self {
        QuadExt {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// Field norm `a² − b²d`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.clone())
    }

    /// True when both elements live in a common field.
    pub fn compatible(&self, other: &Self) -> bool {
        self.is_rational() || other.is_rational() || self.d == other.d
    }

    fn common_radicand(&self, other: &Self) -> BigInt {
        if self.is_rational() {
            other.d.clone()
        } else if other.is_rational() || self.d == other.d {
            self.d.clone()
        } else {
            panic!("mixing Q(√{}) with Q(√{})", self.d, other.d)
        }
    }

    fn make(a: Rational, b: Rational, d: BigInt) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            QuadExt { a, b, d }
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::make(&self.a * k, &self.b * k, self.d.clone())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(self.conj().scale(&n.recip()))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.recip().map(|r| self * &r)
    }

    /// Exact sign of the real number `a + b√d`.
    pub fn sign(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        let aa = &self.a * &self.a;
        let bbd = &self.b * &self.b * Rational::from_integer(self.d.clone());
        match aa.cmp(&bbd) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        // floor(|b|√d) = isqrt(floor(b²d)); |b|√d is irrational so never an integer.
        let bbd = &self.b * &self.b * Rational::from_integer(self.d.clone());
        let m = bbd.floor().to_integer().sqrt();
        let radical_floor = if self.b.is_positive() { m } else { -m - 1 };
        let guess = self.a.floor().to_integer() + radical_floor;
        let above = self - &QuadExt::rational(Rational::from_integer(&guess + 1));
        if above.sign() == Ordering::Less {
            guess
        } else {
            guess + 1
        }
    }

    /// Decimal expansion truncated toward negative infinity.
    pub fn to_decimal(&self, places: u32) -> String {
        let scale = BigInt::from(10).pow(places);
        let n = self.scale(&Rational::from_integer(scale.clone())).floor();
        let neg = n.is_negative();
        let (q, r) = n.abs().div_rem(&scale);
        let sign = if neg { "-" } else { "" };
        if places == 0 {
            format!("{sign}{q}")
        } else {
            format!("{sign}{q}.{:0>width$}", r.to_string(), width = places as usize)
        }
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if !self.compatible(other) {
            return None;
        }
        Some((self - other).sign())
    }
}

impl From<Rational> for QuadExt {
    fn from(a: Rational) -> Self {
        QuadExt::rational(a)
    }
}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, o: &QuadExt) -> QuadExt {
        let d = self.common_radicand(o);
        QuadExt::make(&self.a + &o.a, &self.b + &o.b, d)
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, o: &QuadExt) -> QuadExt {
        let d = self.common_radicand(o);
        QuadExt::make(&self.a - &o.a, &self.b - &o.b, d)
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, o: &QuadExt) -> QuadExt {
        let d = self.common_radicand(o);
        let dq = Rational::from_integer(d.clone());
        QuadExt::make(
            &self.a * &o.a + &self.b * &o.b * dq,
            &self.a * &o.b + &self.b * &o.a,
            d,
        )
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::make(-self.a.clone(), -self.b.clone(), self.d.clone())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QuadExt {
            type Output = QuadExt;
            fn $m(self, o: QuadExt) -> QuadExt { (&self).$m(&o) }
        }
        impl $tr<&QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $m(self, o: &QuadExt) -> QuadExt { (&self).$m(o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

fn fmt_coeff(q: &Rational) -> String {
    if q.is_integer() {
        q.to_string()
    } else {
        format!("({q})")
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        let radical = if self.b.is_one() {
            format!("√{}", self.d)
        } else if (-self.b.clone()).is_one() {
            format!("-√{}", self.d)
        } else if self.b.is_negative() {
            format!("-{}√{}", fmt_coeff(&-self.b.clone()), self.d)
        } else {
            format!("{}√{}", fmt_coeff(&self.b), self.d)
        };
        if self.a.is_zero() {
            write!(f, "{radical}")
        } else if self.b.is_positive() {
            write!(f, "{}+{radical}", self.a)
        } else {
            write!(f, "{}{radical}", self.a)
        }
    }
}

impl Serialize for QuadExt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("QuadExt", 3)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.serialize_field("d", &self.d.to_u64().unwrap_or(0))?;
        st.end()
    }
}

/// Both roots of `a·x² + b·x + c = 0`, larger first.
pub fn solve_quadratic(a: &Rational, b: &Rational, c: &Rational) -> Result<[QuadExt; 2]> {
    if a.is_zero() {
        return Err(Error::DegenerateQuadratic);
    }
    let disc = b * b - int(4) * a * c;
    if disc.is_negative() {
        return Err(Error::NoRealRoot(disc.to_string()));
    }
    // √(p/q) = √(pq)/q
    let (square, free) = square_free_split(&(disc.numer() * disc.denom()));
    let root = QuadExt::new(
        Rational::zero(),
        Rational::new(square, disc.denom().clone()),
        free,
    );
    let inv_2a = (int(2) * a).recip();
    let minus_b = QuadExt::rational(-b.clone());
    let r1 = (&minus_b + &root).scale(&inv_2a);
    let r2 = (&minus_b - &root).scale(&inv_2a);
    if r1 >= r2 {
        Ok([r1, r2])
    } else {
        Ok([r2, r1])
    }
}

/// Basis labels of a matrix's domain or codomain.
pub type Basis = [&'static str; 2];

pub const LH: Basis = ["L", "H"];

/// A 2×2 rational matrix acting on column vectors from `dom` to `cod`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    rows: [[Rational; 2]; 2],
    pub dom: Basis,
    pub cod: Basis,
}

impl Mat2 {
    pub fn new(rows: [[Rational; 2]; 2], dom: Basis, cod: Basis) -> Self {
        Mat2 { rows, dom, cod }
    }

    pub fn from_i64(rows: [[i64; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = rows;
        Mat2::new([[int(a), int(b)], [int(c), int(d)]], LH, LH)
    }

    pub fn identity(basis: Basis) -> Self {
        Mat2::new(
            [[Rational::one(), Rational::zero()], [Rational::zero(), Rational::one()]],
            basis,
            basis,
        )
    }

    /// Matrix whose columns are the images of the two domain basis vectors.
    pub fn from_columns(c0: &Vec2, c1: &Vec2, dom: Basis, cod: Basis) -> Self {
        Mat2::new(
            [[c0[0].clone(), c1[0].clone()], [c0[1].clone(), c1[1].clone()]],
            dom,
            cod,
        )
    }

    pub fn with_bases(mut self, dom: Basis, cod: Basis) -> Self {
        self.dom = dom;
        self.cod = cod;
        self
    }

    pub fn rows(&self) -> &[[Rational; 2]; 2] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec2 {
        [self.rows[0][j].clone(), self.rows[1][j].clone()]
    }

    pub fn det(&self) -> Rational {
        let [[a, b], [c, d]] = &self.rows;
        a * d - b * c
    }

    pub fn trace(&self) -> Rational {
        &self.rows[0][0] + &self.rows[1][1]
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        let inv = det.recip();
        let [[a, b], [c, d]] = &self.rows;
        Some(Mat2::new(
            [[d * &inv, -(b * &inv)], [-(c * &inv), a * &inv]],
            self.cod,
            self.dom,
        ))
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        let [[a, b], [c, d]] = &self.rows;
        [a * &v[0] + b * &v[1], c * &v[0] + d * &v[1]]
    }

    pub fn apply_quad(&self, v: &[QuadExt; 2]) -> [QuadExt; 2] {
        let e = |q: &Rational| QuadExt::rational(q.clone());
        let [[a, b], [c, d]] = &self.rows;
        [
            &e(a) * &v[0] + &e(b) * &v[1],
            &e(c) * &v[0] + &e(d) * &v[1],
        ]
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().flatten().all(|q| q.is_integer())
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_integral() && self.det().abs().is_one()
    }

    pub fn to_i64(&self) -> Option<[[i64; 2]; 2]> {
        let [[a, b], [c, d]] = &self.rows;
        Some([[as_i64(a)?, as_i64(b)?], [as_i64(c)?, as_i64(d)?]])
    }

    pub fn is_identity(&self) -> bool {
        self.rows == Mat2::identity(self.dom).rows
    }

    pub fn same_entries(&self, other: &Mat2) -> bool {
        self.rows == other.rows
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    /// `self ∘ rhs`: apply `rhs` first.
    fn mul(self, rhs: &Mat2) -> Mat2 {
        let p = &self.rows;
        let q = &rhs.rows;
        let e = |i: usize, j: usize| &p[i][0] * &q[0][j] + &p[i][1] * &q[1][j];
        Mat2::new([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]], rhs.dom, self.cod)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.rows;
        write!(f, "[{a} {b}; {c} {d}]")
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<JsonRational>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(JsonRational).collect())
            .collect();
        let mut st = s.serialize_struct("Mat2", 3)?;
        st.serialize_field("rows", &rows)?;
        st.serialize_field("domain", &self.dom)?;
        st.serialize_field("codomain", &self.cod)?;
        st.end()
    }
}

/// How `eigen2` scales its eigenvectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RayNorm {
    /// Clear denominators, divide by the gcd of all integer parts, and make
    /// the first nonzero coordinate positive.
    Content,
    /// Scale so that the first nonzero coordinate equals the given rational.
    Leading(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenPair {
    pub value: QuadExt,
    pub vector: [QuadExt; 2],
}

/// Both eigenpairs of `m`, larger eigenvalue first.
pub fn eigen2(m: &Mat2, norm: &RayNorm) -> Result<[EigenPair; 2]> {
    let t = m.trace();
    let det = m.det();
    let disc = &t * &t - int(4) * &det;
    if disc.is_negative() {
        return Err(Error::NoRealSpectrum(disc.to_string()));
    }
    if disc.is_zero() {
        return Err(Error::DegenerateSpectrum((t / int(2)).to_string()));
    }
    let [l1, l2] = solve_quadratic(&Rational::one(), &-t, &det)?;
    let pair = |value: QuadExt| {
        let vector = normalize_ray(eigenvector(m, &value), norm);
        EigenPair { value, vector }
    };
    Ok([pair(l1), pair(l2)])
}

fn eigenvector(m: &Mat2, lambda: &QuadExt) -> [QuadExt; 2] {
    let [[p, q], [r, s]] = m.rows();
    let e = |x: &Rational| QuadExt::rational(x.clone());
    if !q.is_zero() {
        [e(q), lambda - &e(p)]
    } else if !r.is_zero() {
        [lambda - &e(s), e(r)]
    } else if lambda == &e(p) {
        [QuadExt::from_i64(1), QuadExt::zero()]
    } else {
        [QuadExt::zero(), QuadExt::from_i64(1)]
    }
}

pub fn normalize_ray(v: [QuadExt; 2], norm: &RayNorm) -> [QuadExt; 2] {
    let lead = v.iter().find(|x| !x.is_zero()).cloned();
    let Some(lead) = lead else { return v };
    match norm {
        RayNorm::Leading(k) => {
            let f = QuadExt::rational(k.clone()).div(&lead).expect("nonzero lead");
            [&v[0] * &f, &v[1] * &f]
        }
        RayNorm::Content => {
            let parts: Vec<&Rational> = v.iter().flat_map(|x| [&x.a, &x.b]).collect();
            let den = parts
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            let num = parts
                .iter()
                .map(|q| q.numer() * (&den / q.denom()))
                .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
            let mut k = Rational::new(den, num);
            if lead.is_negative() {
                k = -k;
            }
            [v[0].scale(&k), v[1].scale(&k)]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64, d: i64) -> QuadExt {
        QuadExt::new(int(a), int(b), d)
    }

    #[test]
    fn perfect_square_roots() {
        let r = solve_quadratic(&int(1), &int(-6), &int(9)).unwrap();
        assert_eq!(r, [QuadExt::from_i64(3), QuadExt::from_i64(3)]);
    }

    #[test]
    fn square_free_extraction() {
        let r = solve_quadratic(&int(1), &int(-2), &int(-2)).unwrap();
        assert_eq!(r, [q(1, 1, 3), q(1, -1, 3)]);
        assert_eq!(square_free_split(&BigInt::from(72)), (BigInt::from(6), BigInt::from(2)));
        assert_eq!(q(0, 1, 12), q(0, 2, 3));
    }

    #[test]
    fn negative_discriminant_is_reported() {
        let err = solve_quadratic(&int(8), &int(-32), &int(50)).unwrap_err();
        assert!(matches!(err, Error::NoRealRoot(_)));
        assert!(matches!(
            solve_quadratic(&int(0), &int(1), &int(1)),
            Err(Error::DegenerateQuadratic)
        ));
    }

    #[test]
    fn flop_quadratic_has_rational_roots() {
        // 8β² − 40β + 32 from the Grassmannian quartic-quadric case
        let r = solve_quadratic(&int(8), &int(-40), &int(32)).unwrap();
        assert_eq!(r, [QuadExt::from_i64(4), QuadExt::from_i64(1)]);
    }

    #[test]
    fn quintic_spectrum() {
        let m = Mat2::from_i64([[-19, -15], [90, 71]]);
        let [e1, e2] = eigen2(&m, &RayNorm::Content).unwrap();
        assert_eq!(e1.value, q(26, 15, 3));
        assert_eq!(e2.value, q(26, -15, 3));
        assert_eq!(e1.vector, [QuadExt::from_i64(1), q(-3, -1, 3)]);
    }

    #[test]
    fn grassmannian_spectrum() {
        let m = Mat2::from_i64([[-199, -176], [770, 681]]);
        let [e1, e2] = eigen2(&m, &RayNorm::Leading(int(-4))).unwrap();
        assert_eq!(e1.value, q(241, 44, 30));
        assert_eq!(e2.value, q(241, -44, 30));
        assert_eq!(e1.vector, [QuadExt::from_i64(-4), q(10, 1, 30)]);
        assert_eq!(e2.vector, [QuadExt::from_i64(-4), q(10, -1, 30)]);
    }

    #[test]
    fn identity_is_degenerate() {
        let err = eigen2(&Mat2::identity(LH), &RayNorm::Content).unwrap_err();
        assert!(matches!(err, Error::DegenerateSpectrum(_)));
        let rot = Mat2::from_i64([[0, -1], [1, 0]]);
        assert!(matches!(
            eigen2(&rot, &RayNorm::Content),
            Err(Error::NoRealSpectrum(_))
        ));
    }

    #[test]
    fn signs_and_floors() {
        assert!(q(26, -15, 3).is_positive());
        assert!(q(-10, 1, 30).is_negative());
        assert_eq!(q(3, 1, 3).floor(), BigInt::from(4));
        assert_eq!(q(-3, 1, 3).floor(), BigInt::from(-2));
        assert_eq!(q(0, -1, 2).floor(), BigInt::from(-2));
        assert_eq!(q(0, 1, 2).to_decimal(4), "1.4142");
        assert_eq!(q(0, -1, 2).to_decimal(2), "-1.42");
    }

    #[test]
    fn display_forms() {
        assert_eq!(q(26, 15, 3).to_string(), "26+15√3");
        assert_eq!(q(-10, 1, 30).to_string(), "-10+√30");
        assert_eq!(q(0, -1, 2).to_string(), "-√2");
        let half = QuadExt::new(frac(31, 8), frac(1, 8), 5);
        assert_eq!(half.to_string(), "31/8+(1/8)√5");
        let json = serde_json::to_string(&q(26, -15, 3)).unwrap();
        assert_eq!(json, r#"{"a":"26","b":"-15","d":3}"#);
    }

    #[test]
    fn matrix_algebra() {
        let chi = Mat2::from_i64([[-1, 0], [5, 1]]);
        assert!((&chi * &chi).is_identity());
        assert_eq!(chi.inverse().unwrap(), chi);
        let m = Mat2::from_i64([[2, 1], [7, 4]]);
        assert_eq!(m.det(), int(1));
        assert!((&m * &m.inverse().unwrap()).is_identity());
        assert_eq!(m.apply(&vec2(1, -1)), vec2(1, 3));
    }

    fn floor_by_search(x: &QuadExt) -> BigInt {
        // walk down from a crude bound until x − n ≥ 0
        let radical_bound: Rational = x.b.abs() * Rational::from_integer(&x.d + BigInt::one());
        let bound: BigInt =
            x.a.abs().ceil().to_integer() + radical_bound.ceil().to_integer() + BigInt::one();
        let mut n = bound;
        loop {
            let diff = x - &QuadExt::rational(Rational::from_integer(n.clone()));
            if diff.sign() != Ordering::Less {
                return n;
            }
            n -= 1;
        }
    }

    proptest! {
        #[test]
        fn rational_round_trip(
            p in any::<i64>(), q in 1i64..i64::MAX,
            r in any::<i64>(), s in 1i64..i64::MAX,
            big in 0u32..4,
        ) {
            let scale = Rational::from_integer(BigInt::from(10).pow(20 * big));
            let x = frac(p, q) * &scale;
            let y = frac(r, s) / &scale;
            prop_assert_eq!((&x + &y) - &y, x);
        }

        #[test]
        fn quadratic_roots_vanish(a in -60i64..60, b in -500i64..500, c in -500i64..500, den in 1i64..9) {
            prop_assume!(a != 0);
            let (a, b, c) = (frac(a, den), int(b), frac(c, den + 1));
            match solve_quadratic(&a, &b, &c) {
                Ok(roots) => for r in roots {
                    let val = &(&r * &r).scale(&a) + &r.scale(&b);
                    prop_assert!((&val + &QuadExt::rational(c.clone())).is_zero());
                },
                Err(Error::NoRealRoot(_)) => prop_assert!(&b * &b < int(4) * &a * &c),
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }

        #[test]
        fn eigenpairs_are_exact(a in -40i64..40, b in -40i64..40, c in -40i64..40, d in -40i64..40) {
            let m = Mat2::from_i64([[a, b], [c, d]]);
            if let Ok(pairs) = eigen2(&m, &RayNorm::Content) {
                prop_assert!(pairs[0].value > pairs[1].value);
                for p in &pairs {
                    let mv = m.apply_quad(&p.vector);
                    prop_assert_eq!(&mv[0], &(&p.value * &p.vector[0]));
                    prop_assert_eq!(&mv[1], &(&p.value * &p.vector[1]));
                }
                let prod = &pairs[0].value * &pairs[1].value;
                let sum = &pairs[0].value + &pairs[1].value;
                prop_assert_eq!(prod, QuadExt::rational(m.det()));
                prop_assert_eq!(sum, QuadExt::rational(m.trace()));
            }
        }

        #[test]
        fn floor_matches_search(a in -300i64..300, b in -50i64..50, d in 2i64..200, den in 1i64..7) {
            let x = QuadExt::new(frac(a, den), frac(b, den + 2), d);
            prop_assert_eq!(x.floor(), floor_by_search(&x));
        }

        #[test]
        fn field_inverse(a in -100i64..100, b in -100i64..100, d in 2i64..50) {
            let x = q(a, b, d);
            prop_assume!(!x.is_zero());
            let one = &x * &x.recip().unwrap();
            prop_assert_eq!(one, QuadExt::from_i64(1));
        }
    }
}
