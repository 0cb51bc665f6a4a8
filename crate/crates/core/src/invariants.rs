//! Numerical profiles of the marked models: the cubic form, the c2 form and
//! what can be read off from them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::chern::{odp_count, virtual_chern, Direction};
use crate::error::{Error, Result};
use crate::exact::{
    as_i64, cross, int, serialize_opt_rational, serialize_rational, Basis, JsonRational, Mat2,
    QuadExt, Rational, Vec2, LH,
};
use crate::fano::{cy_condition, SplitPair};

/// A divisor class xL + yH with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivClass {
    pub l: Rational,
    pub h: Rational,
}

impl DivClass {
    pub fn new(l: i64, h: i64) -> Self {
        DivClass { l: int(l), h: int(h) }
    }

    pub fn from_vec(v: Vec2) -> Self {
        let [l, h] = v;
        DivClass { l, h }
    }

    pub fn to_vec(&self) -> Vec2 {
        [self.l.clone(), self.h.clone()]
    }

    pub fn is_zero(&self) -> bool {
        self.l.is_zero() && self.h.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.l.is_integer() && self.h.is_integer()
    }

    pub fn neg(&self) -> Self {
        DivClass {
            l: -self.l.clone(),
            h: -self.h.clone(),
        }
    }

    /// Positive multiple with coprime integer coefficients.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let den = self.l.denom().lcm(self.h.denom());
        let l = self.l.numer() * (&den / self.l.denom());
        let h = self.h.numer() * (&den / self.h.denom());
        let g = l.gcd(&h);
        DivClass {
            l: Rational::from_integer(l / &g),
            h: Rational::from_integer(h / &g),
        }
    }

    pub fn cross(&self, other: &DivClass) -> Rational {
        cross(&self.to_vec(), &other.to_vec())
    }

    pub fn apply(&self, m: &Mat2) -> DivClass {
        DivClass::from_vec(m.apply(&self.to_vec()))
    }

    pub fn pair(&self, c: &CurveClass) -> Rational {
        &self.l * Rational::from_integer(c.l.clone()) + &self.h * Rational::from_integer(c.h.clone())
    }

    pub fn to_i64(&self) -> Option<[i64; 2]> {
        Some([as_i64(&self.l)?, as_i64(&self.h)?])
    }

    /// Basis-labelled rendering, e.g. `4L_E-H_E` for `basis = ["L_E", "H_E"]`.
    pub fn render(&self, basis: Basis) -> String {
        let terms = [(&self.l, basis[0]), (&self.h, basis[1])];
        let nonzero: Vec<_> = terms.iter().filter(|(c, _)| !c.is_zero()).collect();
        let order: Vec<_> = match nonzero.as_slice() {
            [] => return "0".into(),
            [a, b] if a.0.is_negative() && b.0.is_positive() => vec![*b, *a],
            other => other.to_vec(),
        };
        let mut out = String::new();
        for (i, (c, sym)) in order.iter().enumerate() {
            let term = fmt_term(c, sym);
            if i > 0 && !term.starts_with('-') {
                out.push('+');
            }
            out.push_str(&term);
        }
        out
    }
}

fn fmt_term(c: &Rational, sym: &str) -> String {
    if c.is_one() {
        sym.to_string()
    } else if (-c).is_one() {
        format!("-{sym}")
    } else if c.is_integer() {
        format!("{c}{sym}")
    } else if c.is_negative() {
        format!("-({}){sym}", -c)
    } else {
        format!("({c}){sym}")
    }
}

impl fmt::Display for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(LH))
    }
}

impl Serialize for DivClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [JsonRational(&self.l), JsonRational(&self.h)].serialize(s)
    }
}

/// A curve class recorded by its pairings with L and H.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveClass {
    pub l: BigInt,
    pub h: BigInt,
}

impl CurveClass {
    pub fn new(l: i64, h: i64) -> Self {
        CurveClass {
            l: l.into(),
            h: h.into(),
        }
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(L.C, H.C) = ({}, {})", self.l, self.h)
    }
}

impl Serialize for CurveClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.l.to_string(), self.h.to_string()].serialize(s)
    }
}

/// A ray xL + yH with coordinates in a real quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadRay {
    pub l: QuadExt,
    pub h: QuadExt,
}

impl QuadRay {
    pub fn from_rational(d: &DivClass) -> Self {
        QuadRay {
            l: QuadExt::rational(d.l.clone()),
            h: QuadExt::rational(d.h.clone()),
        }
    }

    pub fn cross(&self, other: &QuadRay) -> QuadExt {
        &self.l * &other.h - &self.h * &other.l
    }
}

fn fmt_quad_term(c: &QuadExt, sym: &str) -> String {
    match c.as_rational() {
        Some(q) => fmt_term(q, sym),
        None => format!("({c}){sym}"),
    }
}

impl fmt::Display for QuadRay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = fmt_quad_term(&self.l, "L");
        let h = fmt_quad_term(&self.h, "H");
        match (self.l.is_zero(), self.h.is_zero()) {
            (true, true) => f.write_str("0"),
            (true, false) => f.write_str(&h),
            (false, true) => f.write_str(&l),
            (false, false) if h.starts_with('-') => write!(f, "{l}{h}"),
            (false, false) => write!(f, "{l}+{h}"),
        }
    }
}

/// Cubic form (L³, L²H, LH², H³), c2 form (c2·L, c2·H) and node count of a
/// marked model, in the basis named by `basis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericalProfile {
    pub cubic: [Rational; 4],
    pub c2: [Rational; 2],
    pub odp: u64,
    pub basis: Basis,
}

impl NumericalProfile {
    pub fn from_i64(cubic: [i64; 4], c2: [i64; 2], odp: u64) -> Self {
        NumericalProfile {
            cubic: cubic.map(int),
            c2: c2.map(int),
            odp,
            basis: LH,
        }
    }

    /// Symmetric trilinear extension of the cubic form.
    pub fn eval3(&self, a: &DivClass, b: &DivClass, c: &DivClass) -> Rational {
        let (a, b, c) = (a.to_vec(), b.to_vec(), c.to_vec());
        let mut total = Rational::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    total += &a[i] * &b[j] * &c[k] * &self.cubic[i + j + k];
                }
            }
        }
        total
    }

    pub fn cube(&self, d: &DivClass) -> Rational {
        self.eval3(d, d, d)
    }

    pub fn c2_dot(&self, d: &DivClass) -> Rational {
        &d.l * &self.c2[0] + &d.h * &self.c2[1]
    }

    /// The same form read through `m`: a class v of `m`'s domain is evaluated
    /// as m·v here.
    pub fn pullback(&self, m: &Mat2) -> NumericalProfile {
        let e0 = DivClass::from_vec(m.column(0));
        let e1 = DivClass::from_vec(m.column(1));
        NumericalProfile {
            cubic: [
                self.eval3(&e0, &e0, &e0),
                self.eval3(&e0, &e0, &e1),
                self.eval3(&e0, &e1, &e1),
                self.eval3(&e1, &e1, &e1),
            ],
            c2: [self.c2_dot(&e0), self.c2_dot(&e1)],
            odp: self.odp,
            basis: m.dom,
        }
    }

    /// Same numbers, ignoring basis labels.
    pub fn same_forms(&self, other: &NumericalProfile) -> bool {
        self.cubic == other.cubic && self.c2 == other.c2
    }

    pub fn is_integral(&self) -> bool {
        self.cubic.iter().chain(&self.c2).all(|q| q.is_integer())
    }

    pub fn to_i64(&self) -> Option<([i64; 4], [i64; 2])> {
        let [a, b, c, d] = &self.cubic;
        let [x, y] = &self.c2;
        Some((
            [as_i64(a)?, as_i64(b)?, as_i64(c)?, as_i64(d)?],
            [as_i64(x)?, as_i64(y)?],
        ))
    }
}

impl fmt::Display for NumericalProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.cubic;
        let [x, y] = &self.c2;
        write!(f, "cubic ({a}, {b}, {c}, {d}), c2 ({x}, {y}), nodes {}", self.odp)
    }
}

impl Serialize for NumericalProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let cubic: Vec<_> = self.cubic.iter().map(JsonRational).collect();
        let c2: Vec<_> = self.c2.iter().map(JsonRational).collect();
        let mut st = s.serialize_struct("NumericalProfile", 4)?;
        st.serialize_field("cubic", &cubic)?;
        st.serialize_field("c2", &c2)?;
        st.serialize_field("odp", &self.odp)?;
        st.serialize_field("basis", &self.basis)?;
        st.end()
    }
}

pub fn cubic_eval(p: &NumericalProfile, d1: &DivClass, d2: &DivClass, d3: &DivClass) -> Rational {
    p.eval3(d1, d2, d3)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    F,
    E,
}

pub const E_BASIS: Basis = ["L_E", "H_E"];

/// Profile of X_F (side F) or X_E (side E) in its own (L, H) basis.
pub fn profile(pair: &SplitPair, side: Side) -> Result<NumericalProfile> {
    if !cy_condition(pair) {
        return Err(Error::NotCalabiYau(pair.id()));
    }
    let (dir, basis) = match side {
        Side::F => (Direction::EMinusFDual, LH),
        Side::E => (Direction::FMinusEDual, E_BASIS),
    };
    let v = virtual_chern(pair, dir);
    let d = int(pair.base.degree);
    let c2m = int(pair.base.c2_pairing);
    let odp = odp_count(pair)?;
    Ok(NumericalProfile {
        cubic: [&v.c[4] * &d, &v.c[3] * &d, &v.c[2] * &d, &v.c[1] * &d],
        c2: [&c2m * &v.c[2] - int(odp as i64), &c2m * &v.c[1]],
        odp,
        basis,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeData {
    pub h11: i64,
    pub h21: i64,
    pub euler: i64,
}

/// Hodge numbers of X_F from the smoothing Ỹ and the node count.
pub fn hodge(pair: &SplitPair) -> Result<HodgeData> {
    if !cy_condition(pair) {
        return Err(Error::NotCalabiYau(pair.id()));
    }
    let odp = odp_count(pair)? as i64;
    let h21_smooth = 1 - pair.base.chi_anticanonical / 2;
    // relative Picard number of X_F over the nodal hypersurface is 1
    let h21 = h21_smooth - odp + 1;
    Ok(HodgeData {
        h11: 2,
        h21,
        euler: 2 * (2 - h21),
    })
}

/// χ(O(D)) = D³/6 + c2·D/12, which is h⁰ for nef and big D.
pub fn rr_h0(p: &NumericalProfile, d: &DivClass) -> Rational {
    p.cube(d) / int(6) + p.c2_dot(d) / int(12)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SurfaceKind {
    ProjectivePlane,
    Quadric,
    Hirzebruch1,
    DelPezzo(i64),
    BlownUpPlane(i64),
    BlownUpK3(i64),
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceKind::ProjectivePlane => f.write_str("P2"),
            SurfaceKind::Quadric => f.write_str("P1xP1"),
            SurfaceKind::Hirzebruch1 => f.write_str("F1"),
            SurfaceKind::DelPezzo(k) => write!(f, "del Pezzo of degree {k}"),
            SurfaceKind::BlownUpPlane(n) => write!(f, "P2 blown up at {n} points"),
            SurfaceKind::BlownUpK3(n) => write!(f, "K3 blown up at {n} points"),
        }
    }
}

/// The exceptional surface S ⊂ X_F over the locus where the largest twist drops.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceData {
    pub exc_class: DivClass,
    #[serde(serialize_with = "serialize_rational")]
    pub ks_sq: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub ks_dot_h: Rational,
    /// K_S on a ruling line, recorded when S is ruled over L − H.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub ks_dot_line: Option<Rational>,
    pub surface: SurfaceKind,
}

/// Class and numerical type of the exceptional surface of X_F.
///
/// K_S = S|_S on a Calabi-Yau threefold, so K_S² = S³ and K_S·H = S²·H.
pub fn surface_invariants(pair: &SplitPair) -> Result<SurfaceData> {
    let p = profile(pair, Side::F)?;
    let a = pair.f[0];
    let b = *pair.f.last().expect("rank at least 2");
    if a == b {
        return Err(Error::NoExceptionalSurface(format!(
            "{pair}: all twists of F are equal"
        )));
    }
    let s = DivClass::new(1, -a);
    let h = DivClass::new(0, 1);
    let ks_sq = p.cube(&s);
    let ks_dot_h = p.eval3(&s, &s, &h);
    let c = pair.e.iter().sum::<i64>();
    let d = pair.base.degree;
    let r = pair.base.index;
    let mismatch = |what: &str, want: Rational, got: &Rational| {
        Error::ProfileInconsistency(format!("{pair}: {what} is {got}, expected {want}"))
    };
    let mut ks_dot_line = None;
    let surface = if pair.rank() == 2 {
        let closed = (a - b) * (a - b) * ((a + b) * (a + b + c) - a * (b + r)) * d;
        if ks_sq != int(closed) {
            return Err(mismatch("K_S^2", int(closed), &ks_sq));
        }
        let expect_h = -ks_sq.clone() / int(a - b);
        if ks_dot_h != expect_h {
            return Err(mismatch("K_S.H", expect_h, &ks_dot_h));
        }
        match as_i64(&ks_sq) {
            Some(9) => SurfaceKind::ProjectivePlane,
            Some(8) if a - b == 2 => SurfaceKind::Quadric,
            Some(8) => SurfaceKind::Hirzebruch1,
            Some(k) if (1..=7).contains(&k) => SurfaceKind::DelPezzo(k),
            _ => {
                return Err(Error::UnrecognizedContraction(format!(
                    "{pair}: K_S^2 = {ks_sq} on a ruled exceptional surface"
                )))
            }
        }
    } else {
        let top = pair.f.iter().filter(|&&x| x == a).count();
        let k2 = as_i64(&ks_sq).ok_or_else(|| mismatch("K_S^2", int(0), &ks_sq))?;
        match (top, a) {
            (1, 2) => SurfaceKind::BlownUpPlane(9 - k2),
            (1, 3) => {
                let line = p.eval3(&s, &s, &DivClass::new(1, -1));
                if k2 != 8 || line != int(-2) {
                    return Err(mismatch("K_S.line", int(-2), &line));
                }
                ks_dot_line = Some(line);
                SurfaceKind::Hirzebruch1
            }
            (t, _) if t > 1 && k2 < 0 => SurfaceKind::BlownUpK3(-k2),
            _ => {
                return Err(Error::UnrecognizedContraction(format!(
                    "{pair}: no surface rule for top twist {a} of multiplicity {top}"
                )))
            }
        }
    };
    Ok(SurfaceData {
        exc_class: s,
        ks_sq,
        ks_dot_h,
        ks_dot_line,
        surface,
    })
}

/// Profile after flopping `count` disjoint (−1,−1)-curves of class `c`:
/// D³ drops by count·(D·C)³ and c2·D rises by 2·count·(D·C).
pub fn flop_update(p: &NumericalProfile, c: &CurveClass, count: u64) -> NumericalProfile {
    let n = int(count as i64);
    let x = Rational::from_integer(c.l.clone());
    let y = Rational::from_integer(c.h.clone());
    let mono = |k: usize| {
        let mut v = Rational::one();
        for _ in 0..3 - k {
            v *= &x;
        }
        for _ in 0..k {
            v *= &y;
        }
        v
    };
    let mut out = p.clone();
    for k in 0..4 {
        out.cubic[k] -= &n * mono(k);
    }
    out.c2[0] += int(2) * &n * &x;
    out.c2[1] += int(2) * &n * &y;
    out
}

/// Nodes of a double cover of P³ branched along a surface of degree `branch`
/// whose small resolution has Euler number `euler`.
pub fn double_cover_odp_count(euler: i64, branch: i64) -> Result<i64> {
    let surface = branch * branch * branch - 4 * branch * branch + 6 * branch;
    let smooth = 2 * 4 - surface;
    let diff = euler - smooth;
    if diff < 0 || diff % 2 != 0 {
        return Err(Error::ProfileInconsistency(format!(
            "Euler number {euler} against smooth double cover {smooth}"
        )));
    }
    Ok(diff / 2)
}
