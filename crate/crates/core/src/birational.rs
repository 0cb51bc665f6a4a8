//! Pushforward matrices of flops, involutions and their composites, and the
//! irrational rays an infinite-order map accumulates on.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{eigen2, int, solve_quadratic, Mat2, QuadExt, Rational, RayNorm, LH};
use crate::fano::FanoBase;
use crate::invariants::{CurveClass, DivClass, NumericalProfile, QuadRay, E_BASIS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    DeterminantalFlop,
    SmallFlop,
    Involution,
    Isomorphism,
    Composite,
}

/// The action on N¹ of a birational map between two marked models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushforwardMap {
    pub matrix: Mat2,
    pub source: String,
    pub target: String,
    pub kind: MapKind,
}

impl PushforwardMap {
    pub fn new(matrix: Mat2, source: &str, target: &str, kind: MapKind) -> Self {
        PushforwardMap {
            matrix,
            source: source.into(),
            target: target.into(),
            kind,
        }
    }

    pub fn inverse(&self) -> PushforwardMap {
        PushforwardMap {
            matrix: self.matrix.inverse().expect("pushforward maps are invertible"),
            source: self.target.clone(),
            target: self.source.clone(),
            kind: self.kind,
        }
    }

    pub fn apply(&self, d: &DivClass) -> DivClass {
        d.apply(&self.matrix)
    }
}

impl fmt::Display for PushforwardMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

impl Serialize for PushforwardMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PushforwardMap", 4)?;
        st.serialize_field("matrix", &self.matrix)?;
        st.serialize_field("source", &self.source)?;
        st.serialize_field("target", &self.target)?;
        st.serialize_field("kind", &self.kind)?;
        st.end()
    }
}

/// χ_*L = αL_E + βH_E for the determinantal flop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlopSolution {
    pub alpha: Rational,
    pub beta: Rational,
}

/// The hypothesis under which the flop is forced to be χ_*L = −L_E + r·H_E:
/// L_E·H_E² > 0 and r²·d − 2·L·H² < 0.
pub fn deterwall_condition(pf: &NumericalProfile, pe: &NumericalProfile, base: &FanoBase) -> bool {
    let r = int(base.index);
    pe.cubic[2].is_positive() && (&r * &r * int(base.degree) - int(2) * &pf.cubic[2]).is_negative()
}

/// Solves H³β² − 2(L·H²)β + L²H − L_E²H_E = 0 and keeps the root with αβ < 0.
pub fn flop_solution(pf: &NumericalProfile, pe: &NumericalProfile) -> Result<FlopSolution> {
    let h3 = &pe.cubic[3];
    let lh2 = &pf.cubic[2];
    let le_he2 = &pe.cubic[2];
    if le_he2.is_zero() {
        return Err(Error::ProfileInconsistency("L_E.H_E^2 vanishes".into()));
    }
    let c = &pf.cubic[1] - &pe.cubic[1];
    let roots = solve_quadratic(h3, &(int(-2) * lh2), &c)?;
    let betas: Vec<Rational> = roots
        .iter()
        .map(|r| {
            r.as_rational()
                .cloned()
                .ok_or_else(|| Error::IrrationalFlop(format!("root {r}")))
        })
        .collect::<Result<_>>()?;
    let disc = int(4) * lh2 * lh2 - int(4) * h3 * &c;
    let expect = int(4) * le_he2 * le_he2;
    if disc != expect {
        return Err(Error::ProfileInconsistency(format!(
            "flop discriminant {disc}, expected {expect}"
        )));
    }
    betas
        .into_iter()
        .map(|beta| FlopSolution {
            alpha: (lh2 - h3 * &beta) / le_he2,
            beta,
        })
        .find(|s| (&s.alpha * &s.beta).is_negative())
        .ok_or(Error::NoFlopSolution)
}

/// The matrix of χ: X_F ⇢ X_E, columns χ_*L = (α, β) and χ_*H = (0, 1).
pub fn determinantal_flop(
    pf: &NumericalProfile,
    pe: &NumericalProfile,
    base: &FanoBase,
) -> Result<PushforwardMap> {
    let sol = flop_solution(pf, pe)?;
    if deterwall_condition(pf, pe, base) && (sol.alpha != int(-1) || sol.beta != int(base.index)) {
        return Err(Error::ProfileInconsistency(format!(
            "flop gives (α, β) = ({}, {}), expected (-1, {})",
            sol.alpha, sol.beta, base.index
        )));
    }
    let m = Mat2::new(
        [[sol.alpha, Rational::zero()], [sol.beta, Rational::one()]],
        LH,
        E_BASIS,
    );
    Ok(PushforwardMap::new(m, "X_F", "X_E", MapKind::DeterminantalFlop))
}

/// A non-identity involution fixing a wall, with the first and third power
/// sums (Σk, Σk³) of the curve multiplicities its flop part must remove.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetry {
    pub map: PushforwardMap,
    pub curve_moments: [Rational; 2],
}

fn complement(f: &DivClass) -> DivClass {
    let (a, b) = (f.l.to_integer(), f.h.to_integer());
    let eg = a.extended_gcd(&b);
    // eg.x·a + eg.y·b = ±1, so (−y, x) completes f to a basis
    let v = DivClass {
        l: Rational::from_integer(-eg.y),
        h: Rational::from_integer(eg.x),
    };
    if f.cross(&v).is_negative() {
        v.neg()
    } else {
        v
    }
}

/// Matrix g with g(f) = f and g(v) = w, in the basis of the profile.
fn map_fixing(f: &DivClass, v: &DivClass, w: &DivClass, basis: crate::exact::Basis) -> Option<Mat2> {
    let src = Mat2::from_columns(&f.to_vec(), &v.to_vec(), basis, basis);
    let dst = Mat2::from_columns(&f.to_vec(), &w.to_vec(), basis, basis);
    Some(&dst * &src.inverse()?)
}

/// Looks for an integral involution g of N¹ with g(fixed) = fixed that is
/// compatible with a flop along the wall followed by an isomorphism.
///
/// Such a g keeps f²·X and f·X² and moves X³ and c2·X only by the flop
/// corrections, so the surviving constraints are f²·W = f²·V, f·W² = f·V²,
/// integrality, g² = 1, and flop moments (Σk, Σk³) with Σk > 0, Σk³ ≥ Σk and
/// Σk³ ≡ Σk mod 6. Here V completes f to a lattice basis and W = g(V).
pub fn symmetry_solver(
    p: &NumericalProfile,
    fixed: &DivClass,
    model: &str,
) -> Result<Option<Symmetry>> {
    if fixed.is_zero() || !fixed.is_integral() {
        return Err(Error::MalformedCase(format!("fixed class {fixed} must be nonzero and integral")));
    }
    let f = fixed.primitive();
    let v = complement(&f);
    let l = DivClass::new(1, 0);
    let h = DivClass::new(0, 1);
    let (ff_l, ff_h) = (p.eval3(&f, &f, &l), p.eval3(&f, &f, &h));
    if ff_l.is_zero() && ff_h.is_zero() {
        return Err(Error::AmbiguousSymmetry(format!("{f} is numerically square-zero")));
    }
    let u = DivClass { l: ff_h, h: -ff_l }.primitive();
    let fuu = p.eval3(&f, &u, &u);
    let fvu = p.eval3(&f, &v, &u);
    if fuu.is_zero() {
        if fvu.is_zero() {
            return Err(Error::AmbiguousSymmetry(format!(
                "every point of the line through {v} satisfies the constraints"
            )));
        }
        return Ok(None);
    }
    let t = int(-2) * &fvu / &fuu;
    if t.is_zero() || !t.is_integer() {
        return Ok(None);
    }
    let w = DivClass {
        l: &v.l + &t * &u.l,
        h: &v.h + &t * &u.h,
    };
    let Some(g) = map_fixing(&f, &v, &w, p.basis) else {
        return Ok(None);
    };
    if !g.is_unimodular() || !(&g * &g).is_identity() {
        return Ok(None);
    }
    let mut k1 = (p.c2_dot(&w) - p.c2_dot(&v)) / int(2);
    let mut k3 = p.cube(&v) - p.cube(&w);
    if k1.is_negative() {
        k1 = -k1;
        k3 = -k3;
    }
    let plausible = k1.is_integer()
        && k3.is_integer()
        && if k1.is_zero() {
            k3.is_zero()
        } else {
            k3 >= k1 && (&k3 - &k1).to_integer().is_multiple_of(&BigInt::from(6))
        };
    if !plausible {
        return Ok(None);
    }
    Ok(Some(Symmetry {
        map: PushforwardMap::new(g, model, model, MapKind::Involution),
        curve_moments: [k1, k3],
    }))
}

/// The unique integral g with g(from) = to that carries `src` onto `dst`
/// exactly (all four cubic coefficients and the c2 form). `complement`
/// completes `from` to a basis.
pub fn form_isometry(
    src: &NumericalProfile,
    dst: &NumericalProfile,
    from: &DivClass,
    to: &DivClass,
    complement: &DivClass,
    source: &str,
    target: &str,
) -> Result<PushforwardMap> {
    let fail = |why: String| Error::ProfileInconsistency(format!("no isometry {source} -> {target}: {why}"));
    if src.cube(from) != dst.cube(to) || src.c2_dot(from) != dst.c2_dot(to) {
        return Err(fail(format!("{from} and {to} have different invariants")));
    }
    let (a, v) = (from, complement);
    let l = DivClass::new(1, 0);
    let h = DivClass::new(0, 1);
    // to²·W = from²·V and c2·W = c2·V fix W
    let (p1, q1, r1) = (dst.eval3(to, to, &l), dst.eval3(to, to, &h), src.eval3(a, a, v));
    let (p2, q2, r2) = (dst.c2[0].clone(), dst.c2[1].clone(), src.c2_dot(v));
    let det = &p1 * &q2 - &q1 * &p2;
    if det.is_zero() {
        return Err(Error::AmbiguousSymmetry(format!(
            "linear constraints on the image of {v} are dependent"
        )));
    }
    let w = DivClass {
        l: (&r1 * &q2 - &q1 * &r2) / &det,
        h: (&p1 * &r2 - &r1 * &p2) / &det,
    };
    if dst.eval3(to, &w, &w) != src.eval3(a, v, v) || dst.cube(&w) != src.cube(v) {
        return Err(fail(format!("image {w} of {v} breaks the cubic form")));
    }
    let from_m = Mat2::from_columns(&a.to_vec(), &v.to_vec(), LH, LH);
    let to_m = Mat2::from_columns(&to.to_vec(), &w.to_vec(), LH, LH);
    let g = &to_m * &from_m.inverse().ok_or_else(|| fail(format!("{a}, {v} are dependent")))?;
    if !g.is_unimodular() {
        return Err(fail(format!("{g} is not integral unimodular")));
    }
    if !dst.pullback(&g).same_forms(src) {
        return Err(fail("forms differ after transport".into()));
    }
    Ok(PushforwardMap::new(g, source, target, MapKind::Isomorphism))
}

/// Composite of maps listed in the order they are applied.
pub fn compose(maps: &[PushforwardMap]) -> Result<PushforwardMap> {
    let (first, rest) = maps
        .split_first()
        .ok_or_else(|| Error::CompositionMismatch("empty composition".into()))?;
    let mut acc = first.clone();
    for m in rest {
        if m.source != acc.target || m.matrix.dom != acc.matrix.cod {
            return Err(Error::CompositionMismatch(format!(
                "{} ends at {} but the next map starts at {}",
                acc.source, acc.target, m.source
            )));
        }
        acc = PushforwardMap {
            matrix: &m.matrix * &acc.matrix,
            source: acc.source,
            target: m.target.clone(),
            kind: MapKind::Composite,
        };
    }
    Ok(acc)
}

/// The two eigen rays of a hyperbolic map, dominant first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AccumulationRays {
    pub dominant: QuadRay,
    pub recessive: QuadRay,
    pub radius: QuadExt,
    pub eigenvalues: [QuadExt; 2],
}

/// Eigen rays of `m`, scaled to coprime integer parts and oriented so that H
/// lies strictly between them; fails unless `m` is hyperbolic.
pub fn accumulation_rays(m: &Mat2) -> Result<AccumulationRays> {
    let t = m.trace();
    let det = m.det();
    let hyperbolic = match det.cmp(&Rational::zero()) {
        Ordering::Greater => &t * &t > int(4) * &det,
        Ordering::Less => !t.is_zero(),
        Ordering::Equal => false,
    };
    if !hyperbolic {
        return Err(Error::FiniteOrParabolic(format!("trace {t}, determinant {det}")));
    }
    let [e1, e2] = eigen2(m, &RayNorm::Content)?;
    let (mut dom, mut rec) = if e1.value.abs() >= e2.value.abs() {
        (e1, e2)
    } else {
        (e2, e1)
    };
    let ray = |v: &[QuadExt; 2]| QuadRay {
        l: v[0].clone(),
        h: v[1].clone(),
    };
    let (r1, r2) = (ray(&dom.vector), ray(&rec.vector));
    let hq = QuadRay {
        l: QuadExt::zero(),
        h: QuadExt::from_i64(1),
    };
    // H = s·r1 + t·r2 by Cramer's rule
    let c = r1.cross(&r2);
    let s = hq.cross(&r2).div(&c).expect("eigen rays are independent");
    let u = r1.cross(&hq).div(&c).expect("eigen rays are independent");
    if s.is_negative() {
        dom.vector = [-&dom.vector[0], -&dom.vector[1]];
    }
    if u.is_negative() {
        rec.vector = [-&rec.vector[0], -&rec.vector[1]];
    }
    Ok(AccumulationRays {
        dominant: ray(&dom.vector),
        recessive: ray(&rec.vector),
        radius: dom.value.abs(),
        eigenvalues: [dom.value, rec.value],
    })
}

/// The primitive integral curve class C with wall·C = 0 and interior·C > 0.
pub fn primitive_curve(wall: &DivClass, interior: &DivClass) -> Result<CurveClass> {
    if wall.is_zero() {
        return Err(Error::MalformedCase("zero wall".into()));
    }
    let w = wall.primitive();
    let mut c = CurveClass {
        l: w.h.to_integer(),
        h: -w.l.to_integer(),
    };
    let side = interior.pair(&c);
    if side.is_zero() {
        return Err(Error::MalformedCase(format!("{interior} lies on the wall {wall}")));
    }
    if side.is_negative() {
        c = CurveClass {
            l: -c.l,
            h: -c.h,
        };
    }
    Ok(c)
}
