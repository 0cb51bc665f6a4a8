//! Walls, chambers and the movable cone.
//!
//! Which wall is flopped (and along how many curves), which one is crossed by
//! an involution and where the walk stops is fixed per family in `script`.
//! Everything numeric is recomputed and checked along the way.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::birational::{
    accumulation_rays, compose, determinantal_flop, form_isometry, primitive_curve,
    symmetry_solver, AccumulationRays, MapKind, PushforwardMap,
};
use crate::error::{Error, Result};
use crate::exact::{as_i64, int, Basis, Mat2, QuadExt, Rational, LH};
use crate::fano::SplitPair;
use crate::invariants::{
    flop_update, profile, rr_h0, surface_invariants, DivClass, NumericalProfile, QuadRay, Side,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum WallKind {
    #[serde(rename = "determinantal")]
    Determinantal,
    #[serde(rename = "type_I")]
    TypeI,
    #[serde(rename = "type_II")]
    TypeII,
    #[serde(rename = "type_III")]
    TypeIII,
    #[serde(rename = "K3_fibration")]
    K3Fibration,
    #[serde(rename = "elliptic_fibration")]
    EllipticFibration,
    #[serde(rename = "double_cover_small")]
    DoubleCoverSmall,
}

impl WallKind {
    pub fn label(self) -> &'static str {
        match self {
            WallKind::Determinantal => "determinantal",
            WallKind::TypeI => "type_I",
            WallKind::TypeII => "type_II",
            WallKind::TypeIII => "type_III",
            WallKind::K3Fibration => "K3_fibration",
            WallKind::EllipticFibration => "elliptic_fibration",
            WallKind::DoubleCoverSmall => "double_cover_small",
        }
    }

    /// Contracts only finitely many curves.
    pub fn is_small(self) -> bool {
        matches!(
            self,
            WallKind::Determinantal | WallKind::TypeI | WallKind::DoubleCoverSmall
        )
    }

    fn target(self) -> &'static str {
        match self {
            WallKind::Determinantal => "determinantal hypersurface in the base",
            WallKind::TypeI => "small contraction to a nodal threefold",
            WallKind::TypeII => "divisor contracted to a point",
            WallKind::TypeIII => "divisor contracted to a curve",
            WallKind::K3Fibration => "K3 fibration over P1",
            WallKind::EllipticFibration => "elliptic fibration over a surface",
            WallKind::DoubleCoverSmall => "small contraction onto a double cover of P3",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    #[serde(rename = "F_side")]
    FSide,
    #[serde(rename = "E_side")]
    ESide,
    #[serde(rename = "flopped")]
    Flopped,
}

/// A marked minimal model: its own profile, the marking into the reference
/// basis of X_F, and its nef cone [left, right] in reference coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub id: String,
    pub profile: NumericalProfile,
    pub marking: Mat2,
    pub nef: [DivClass; 2],
    pub provenance: Provenance,
}

impl Model {
    fn new(
        id: &str,
        profile: NumericalProfile,
        marking: Mat2,
        nef: [DivClass; 2],
        provenance: Provenance,
    ) -> Result<Model> {
        let m = Model {
            id: id.into(),
            profile,
            marking,
            nef: [nef[0].primitive(), nef[1].primitive()],
            provenance,
        };
        if !m.marking.is_unimodular() {
            return Err(Error::chamber(&m.nef[0], format!("marking of {id} is not unimodular")));
        }
        if !m.nef.iter().all(DivClass::is_integral) || !m.nef[0].cross(&m.nef[1]).is_negative() {
            return Err(Error::chamber(
                &m.nef[0],
                format!("nef cone of {id} is not a clockwise integral cone"),
            ));
        }
        Ok(m)
    }

    /// The profile read in reference coordinates.
    pub fn reference_profile(&self) -> NumericalProfile {
        self.profile
            .pullback(&self.marking.inverse().expect("markings are invertible"))
    }

    pub fn interior(&self) -> DivClass {
        DivClass {
            l: &self.nef[0].l + &self.nef[1].l,
            h: &self.nef[0].h + &self.nef[1].h,
        }
    }

    fn own_nef(&self) -> [DivClass; 2] {
        let back = self.marking.inverse().expect("markings are invertible");
        let [a, b] = [self.nef[0].apply(&back), self.nef[1].apply(&back)];
        if a.to_vec() <= b.to_vec() {
            [a, b]
        } else {
            [b, a]
        }
    }

    fn transported(&self, g: &Mat2) -> Result<Model> {
        let [l, r] = [self.nef[0].apply(g), self.nef[1].apply(g)];
        let nef = if g.det().is_negative() { [r, l] } else { [l, r] };
        Model::new(&self.id, self.profile.clone(), g * &self.marking, nef, self.provenance)
    }
}

impl Serialize for Model {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Model", 5)?;
        st.serialize_field("id", &self.id)?;
        st.serialize_field("provenance", &self.provenance)?;
        st.serialize_field("profile", &self.profile)?;
        st.serialize_field("marking", &self.marking)?;
        st.serialize_field("nef", &self.nef)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub class: DivClass,
    pub kind: WallKind,
    pub certificates: BTreeMap<String, i64>,
    pub exc: Option<DivClass>,
    pub surface: Option<String>,
}

impl Wall {
    fn certify(&mut self, key: &str, q: &Rational) -> Result<()> {
        let v = as_i64(q)
            .ok_or_else(|| Error::chamber(&self.class, format!("{key} = {q} is not an integer")))?;
        self.certificates.insert(key.into(), v);
        Ok(())
    }
}

impl Serialize for Wall {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Wall", 7)?;
        st.serialize_field("class", &self.class)?;
        st.serialize_field("label", &self.class.to_string())?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("certificates", &self.certificates)?;
        st.serialize_field("exc", &self.exc)?;
        st.serialize_field("surface", &self.surface)?;
        st.serialize_field("target", self.kind.target())?;
        st.end()
    }
}

/// ⟨H, L − (min a_i)H⟩.
pub fn nef_cone(pair: &SplitPair) -> [DivClass; 2] {
    let b = *pair.f.last().expect("rank at least 2");
    [DivClass::new(0, 1), DivClass::new(1, -b)]
}

/// Types the boundary wall `w` of `m` (reference coordinates) from the cubic
/// and c2 forms, with `exc` the exceptional surface of a divisorial
/// contraction if the model has one.
pub fn classify_wall(m: &Model, w: &DivClass, exc: Option<&DivClass>) -> Result<Wall> {
    classify_in(&m.reference_profile(), w, exc)
}

fn classify_in(p: &NumericalProfile, w: &DivClass, exc: Option<&DivClass>) -> Result<Wall> {
    let mut wall = Wall {
        class: w.clone(),
        kind: WallKind::TypeI,
        certificates: BTreeMap::new(),
        exc: exc.cloned(),
        surface: None,
    };
    let g3 = p.cube(w);
    wall.certify("G^3", &g3)?;
    wall.certify("c2.G", &p.c2_dot(w))?;
    wall.kind = if g3.is_positive() {
        match exc {
            Some(s) => {
                let g2s = p.eval3(w, w, s);
                let gs2 = p.eval3(w, s, s);
                wall.certify("G^2.S", &g2s)?;
                wall.certify("G.S^2", &gs2)?;
                if g2s.is_positive() {
                    WallKind::TypeI
                } else if g2s.is_zero() && gs2.is_zero() {
                    WallKind::TypeII
                } else if g2s.is_zero() && gs2.is_negative() {
                    WallKind::TypeIII
                } else {
                    return Err(Error::UnrecognizedContraction(format!(
                        "{w}: G^2.S = {g2s}, G.S^2 = {gs2}"
                    )));
                }
            }
            None => WallKind::TypeI,
        }
    } else if g3.is_zero() {
        let g2l = p.eval3(w, w, &DivClass::new(1, 0));
        let g2h = p.eval3(w, w, &DivClass::new(0, 1));
        wall.certify("G^2.L", &g2l)?;
        wall.certify("G^2.H", &g2h)?;
        if !g2l.is_zero() || !g2h.is_zero() {
            WallKind::EllipticFibration
        } else if p.c2_dot(w) == int(24) {
            WallKind::K3Fibration
        } else {
            return Err(Error::UnrecognizedFibration(format!(
                "{w}: square-zero with c2.G = {}",
                p.c2_dot(w)
            )));
        }
    } else {
        return Err(Error::UnrecognizedContraction(format!("{w}: G^3 = {g3} < 0")));
    };
    if wall.kind == WallKind::TypeI && g3 == int(2) {
        wall.kind = WallKind::DoubleCoverSmall;
    }
    Ok(wall)
}

#[derive(Clone, Debug)]
enum Step {
    /// The wall bounds the movable cone.
    Boundary(WallKind),
    /// Small wall: flop `curves` curves; the new chamber ends at `far`.
    Flop {
        curves: u64,
        far: DivClass,
        far_exc: Option<DivClass>,
    },
    /// Small wall crossed by an involution of the current model.
    Reflect,
    /// Small wall left open; the glue on the other side closes it.
    Open,
    /// Flop `curves` curves here and identify the flopped model with the
    /// flopped model at the open end of the other side.
    Glue { curves: u64, far: DivClass },
}

#[derive(Clone, Debug)]
struct Script {
    right: Vec<Step>,
    left: Vec<Step>,
}

fn script(pair: &SplitPair) -> Result<Script> {
    use Step::*;
    use WallKind::*;
    let id = pair.id();
    let ends = |f: WallKind, e: WallKind| Script {
        right: vec![Boundary(f)],
        left: vec![Boundary(e)],
    };
    Ok(match id.as_str() {
        "P4/F=2,2,1/E=0,0,0" => Script {
            right: vec![
                Flop {
                    curves: 1,
                    far: DivClass::new(1, -2),
                    far_exc: None,
                },
                Boundary(K3Fibration),
            ],
            left: vec![Boundary(EllipticFibration)],
        },
        "P4/F=2,1,1,1/E=0,0,0,0" => Script {
            right: vec![
                Flop {
                    curves: 10,
                    far: DivClass::new(4, -5),
                    far_exc: Some(DivClass::new(1, -2)),
                },
                Boundary(TypeII),
            ],
            left: vec![Reflect],
        },
        "Gr24/F=1,1,1,1/E=0,0,0,0" => Script {
            right: vec![Reflect],
            left: vec![Reflect],
        },
        "P4/F=1,1,1,1,1/E=0,0,0,0,0" => Script {
            right: vec![
                Flop {
                    curves: 50,
                    far: DivClass::new(4, -5),
                    far_exc: None,
                },
                Open,
            ],
            left: vec![Glue {
                curves: 50,
                far: DivClass::new(-4, 19),
            }],
        },
        _ if !pair.is_catalog_case() => {
            return Err(Error::UnknownCase(format!("{id} has no chamber script")))
        }
        _ => match (pair.rank(), pair.e_trivial()) {
            (2, true) if pair.f[0] > pair.f[1] => ends(TypeII, K3Fibration),
            (2, true) => ends(K3Fibration, K3Fibration),
            (2, false) => ends(TypeII, TypeII),
            (3, false) => ends(TypeIII, TypeIII),
            (3, true) if pair.f[0] == 1 => ends(EllipticFibration, EllipticFibration),
            (3, true) => ends(TypeIII, EllipticFibration),
            _ => return Err(Error::UnknownCase(format!("{id} has no chamber script"))),
        },
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    Left,
    Right,
}

enum End {
    Boundary,
    Reflect(PushforwardMap, PushforwardMap),
    Open,
    Glue(Model),
}

struct Walk {
    /// Starting model first, moving away from the determinantal wall.
    models: Vec<Model>,
    /// walls[i] is the far wall of models[i].
    walls: Vec<Wall>,
    end: End,
}

fn expect_kind(wall: &Wall, want: WallKind, model: &str) -> Result<()> {
    if wall.kind != want {
        return Err(Error::chamber(
            &wall.class,
            format!("{model}: expected {}, found {}", want.label(), wall.kind.label()),
        ));
    }
    Ok(())
}

fn walk(
    start: Model,
    exc: Option<DivClass>,
    surface: Option<String>,
    steps: &[Step],
    dir: Dir,
) -> Result<Walk> {
    let side = |m: &Model| match dir {
        Dir::Left => m.nef[0].clone(),
        Dir::Right => m.nef[1].clone(),
    };
    let mut models = vec![start];
    let mut walls = Vec::new();
    let mut exc = exc;
    let mut surface = surface;
    for (i, step) in steps.iter().enumerate() {
        let cur = models.last().expect("walk starts with a model").clone();
        let w = side(&cur);
        let mut wall = classify_wall(&cur, &w, exc.as_ref())?;
        wall.surface = surface.take();
        let last = i + 1 == steps.len();
        let terminal = matches!(step, Step::Boundary(_) | Step::Reflect | Step::Open | Step::Glue { .. });
        if terminal != last {
            return Err(Error::chamber(&w, "script ends in the middle of the cone"));
        }
        match step {
            Step::Boundary(kind) => {
                expect_kind(&wall, *kind, &cur.id)?;
                walls.push(wall);
                return Ok(Walk { models, walls, end: End::Boundary });
            }
            Step::Open => {
                expect_kind(&wall, WallKind::TypeI, &cur.id)?;
                walls.push(wall);
                return Ok(Walk { models, walls, end: End::Open });
            }
            Step::Reflect => {
                expect_kind(&wall, WallKind::DoubleCoverSmall, &cur.id)?;
                let back = cur.marking.inverse().expect("markings are invertible");
                let own_wall = w.apply(&back);
                let sym = symmetry_solver(&cur.profile, &own_wall, &cur.id)?.ok_or_else(|| {
                    Error::chamber(&w, format!("{} has no involution fixing the wall", cur.id))
                })?;
                let g = &(&cur.marking * &sym.map.matrix) * &back;
                if w.apply(&g) != w {
                    return Err(Error::chamber(&w, "involution moves its own wall"));
                }
                let [k1, k3] = &sym.curve_moments;
                wall.certify("flopped curves", k1)?;
                wall.certify("flopped cubes", k3)?;
                walls.push(wall);
                let reference = PushforwardMap::new(g, &cur.id, &cur.id, MapKind::Involution);
                return Ok(Walk {
                    models,
                    walls,
                    end: End::Reflect(sym.map, reference),
                });
            }
            Step::Flop { curves, far, far_exc } => {
                expect_kind(&wall, WallKind::TypeI, &cur.id)?;
                let (model, _) = flop_across(&cur, &w, *curves, far, dir, &mut wall)?;
                walls.push(wall);
                models.push(model);
                exc = far_exc.clone();
            }
            Step::Glue { curves, far } => {
                expect_kind(&wall, WallKind::TypeI, &cur.id)?;
                let (model, _) = flop_across(&cur, &w, *curves, far, dir, &mut wall)?;
                walls.push(wall);
                return Ok(Walk { models, walls, end: End::Glue(model) });
            }
        }
    }
    Err(Error::chamber(side(models.last().unwrap()), "empty script"))
}

fn flop_across(
    cur: &Model,
    w: &DivClass,
    curves: u64,
    far: &DivClass,
    dir: Dir,
    wall: &mut Wall,
) -> Result<(Model, NumericalProfile)> {
    let c = primitive_curve(w, &cur.interior())?;
    let p = flop_update(&cur.reference_profile(), &c, curves);
    wall.certify("flopped curves", &int(curves as i64))?;
    wall.certify("C.L", &Rational::from_integer(c.l.clone()))?;
    wall.certify("C.H", &Rational::from_integer(c.h.clone()))?;
    if !far.pair(&c).is_negative() {
        return Err(Error::chamber(far, "far wall is not across the flopped curves"));
    }
    let nef = match dir {
        Dir::Right => [w.clone(), far.clone()],
        Dir::Left => [far.clone(), w.clone()],
    };
    let model = Model::new(
        &format!("{}+", cur.id),
        p.clone(),
        Mat2::identity(LH),
        nef,
        Provenance::Flopped,
    )?;
    if !p.cube(&model.interior()).is_positive() {
        return Err(Error::chamber(w, "flopped chamber has a non-big interior"));
    }
    Ok((model, p))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeStructure {
    Finite {
        distinct_models: usize,
    },
    Infinite {
        fundamental_domain: [DivClass; 2],
        generator: PushforwardMap,
        rays: AccumulationRays,
    },
}

/// The movable cone as an ordered list of chambers, left to right. In the
/// infinite case the chambers make up one fundamental domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MovableCone {
    pub case: String,
    pub chambers: Vec<Model>,
    /// walls[i] and walls[i + 1] bound chambers[i].
    pub walls: Vec<Wall>,
    pub structure: ConeStructure,
    /// Named pushforward maps met while building the cone.
    pub maps: BTreeMap<String, PushforwardMap>,
    /// Models used to build the generator that are not chambers of the domain.
    pub auxiliary: Vec<Model>,
}

impl MovableCone {
    pub fn is_finite(&self) -> bool {
        matches!(self.structure, ConeStructure::Finite { .. })
    }

    pub fn boundary(&self) -> [&Wall; 2] {
        [self.walls.first().unwrap(), self.walls.last().unwrap()]
    }

    pub fn map(&self, name: &str) -> Option<&PushforwardMap> {
        self.maps.get(name)
    }

    /// The two outermost rays: boundary walls, or accumulation rays.
    pub fn outer_rays(&self) -> [QuadRay; 2] {
        match &self.structure {
            ConeStructure::Finite { .. } => {
                let [l, r] = self.boundary();
                [QuadRay::from_rational(&l.class), QuadRay::from_rational(&r.class)]
            }
            ConeStructure::Infinite { rays, .. } => {
                if rays.dominant.cross(&rays.recessive).is_negative() {
                    [rays.dominant.clone(), rays.recessive.clone()]
                } else {
                    [rays.recessive.clone(), rays.dominant.clone()]
                }
            }
        }
    }
}

struct ChamberJson<'a> {
    model: &'a Model,
    walls: [&'a Wall; 2],
}

impl Serialize for ChamberJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Chamber", 6)?;
        st.serialize_field("model", &self.model.id)?;
        st.serialize_field("provenance", &self.model.provenance)?;
        st.serialize_field("nef", &self.model.nef)?;
        st.serialize_field("marking", &self.model.marking)?;
        st.serialize_field("profile", &self.model.profile)?;
        st.serialize_field("walls", &self.walls)?;
        st.end()
    }
}

impl Serialize for MovableCone {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let chambers: Vec<ChamberJson> = self
            .chambers
            .iter()
            .enumerate()
            .map(|(i, model)| ChamberJson {
                model,
                walls: [&self.walls[i], &self.walls[i + 1]],
            })
            .collect();
        let rays: Vec<[&QuadExt; 2]> = Vec::new();
        let outer = self.outer_rays();
        let mut rays = rays;
        rays.extend(outer.iter().map(|r| [&r.l, &r.h]));
        let (finiteness, generator, domain, distinct, spectrum) = match &self.structure {
            ConeStructure::Finite { distinct_models } => {
                ("finite", None, None, Some(*distinct_models), None)
            }
            ConeStructure::Infinite {
                fundamental_domain,
                generator,
                rays,
            } => (
                "infinite",
                Some(generator),
                Some(fundamental_domain),
                None,
                Some(rays),
            ),
        };
        let mut st = s.serialize_struct("MovableCone", 10)?;
        st.serialize_field("case", &self.case)?;
        st.serialize_field("finiteness", finiteness)?;
        st.serialize_field("chambers", &chambers)?;
        st.serialize_field("boundary_rays", &rays)?;
        st.serialize_field("generator", &generator)?;
        st.serialize_field("fundamental_domain", &domain)?;
        st.serialize_field("distinct_models", &distinct)?;
        st.serialize_field("spectrum", &spectrum)?;
        st.serialize_field("maps", &self.maps)?;
        st.serialize_field("auxiliary_models", &self.auxiliary)?;
        st.end()
    }
}

const GLUE_BASIS: Basis = ["Z1", "Z2"];

/// Mirrors `models`/`walls` (left to right) through the reflection `g`
/// fixing the left end, reclassifying every mirrored wall from scratch.
fn mirror(models: &[Model], walls: &[Wall], g: &Mat2) -> Result<(Vec<Model>, Vec<Wall>)> {
    let out_models = models
        .iter()
        .rev()
        .map(|m| m.transported(g))
        .collect::<Result<Vec<_>>>()?;
    let mut out_walls = Vec::new();
    // walls[0] is the fixed one; the mirror walls are the rest, reversed
    for (i, w) in walls.iter().enumerate().skip(1).rev() {
        let mut image = w.clone();
        image.class = w.class.apply(g);
        image.exc = w.exc.as_ref().map(|e| e.apply(g));
        if w.kind != WallKind::Determinantal {
            let moved = models[i - 1].transported(g)?;
            let again = classify_wall(&moved, &image.class, image.exc.as_ref())?;
            let same = again
                .certificates
                .iter()
                .all(|(k, v)| w.certificates.get(k) == Some(v));
            if again.kind != w.kind || !same {
                return Err(Error::chamber(&image.class, "mirror image certificates differ"));
            }
        }
        out_walls.push(image);
    }
    Ok((out_models, out_walls))
}

/// Builds the movable cone of a catalog case by running its script.
pub fn build_movable(pair: &SplitPair) -> Result<MovableCone> {
    let script = script(pair)?;
    let pf = profile(pair, Side::F)?;
    let pe = profile(pair, Side::E)?;
    let chi = determinantal_flop(&pf, &pe, &pair.base)?;
    let chi_inv = chi.inverse();
    let a_max = pair.f[0];
    let b_min = *pair.e.last().expect("rank at least 2");
    let b_max = pair.e[0];

    let xf = Model::new("X_F", pf.clone(), Mat2::identity(LH), nef_cone(pair), Provenance::FSide)?;
    let e_wall = DivClass::new(1, -b_min).apply(&chi_inv.matrix);
    let xe = Model::new(
        "X_E",
        pe.clone(),
        chi_inv.matrix.clone(),
        [e_wall, DivClass::new(0, 1)],
        Provenance::ESide,
    )?;
    let exc_f = (pair.f.last() != Some(&a_max)).then(|| DivClass::new(1, -a_max));
    let surface_f = match &exc_f {
        Some(_) => Some(surface_invariants(pair)?.surface.to_string()),
        None => None,
    };
    let exc_e = (b_max != b_min).then(|| DivClass::new(1, -b_max).apply(&chi_inv.matrix));

    let mut det = Wall {
        class: DivClass::new(0, 1),
        kind: WallKind::Determinantal,
        certificates: BTreeMap::new(),
        exc: None,
        surface: None,
    };
    det.certify("nodes", &int(pf.odp as i64))?;
    det.certify("alpha", &chi.matrix.rows()[0][0])?;
    det.certify("beta", &chi.matrix.rows()[1][0])?;
    let flopped = flop_update(&pf, &crate::invariants::CurveClass::new(1, 0), pf.odp);
    if !flopped.same_forms(&xe.reference_profile()) {
        return Err(Error::chamber(&det.class, "flop of the nodes does not give X_E"));
    }

    let right = walk(xf.clone(), exc_f, surface_f, &script.right, Dir::Right)?;
    let left = walk(xe.clone(), exc_e, None, &script.left, Dir::Left)?;

    let mut maps = BTreeMap::new();
    maps.insert("determinantal_flop".to_string(), chi.clone());
    let mut chambers: Vec<Model> = left.models.iter().rev().cloned().collect();
    chambers.extend(right.models.iter().cloned());
    let mut walls: Vec<Wall> = left.walls.iter().rev().cloned().collect();
    walls.push(det);
    walls.extend(right.walls.iter().cloned());
    let mut auxiliary = Vec::new();

    let structure = match (&left.end, &right.end) {
        (End::Boundary, End::Boundary) => ConeStructure::Finite { distinct_models: 0 },
        (End::Reflect(own, g), End::Boundary) => {
            maps.insert(format!("involution_{}", own.source), own.clone());
            if own.source == "X_E" {
                let check = compose(&[chi.clone(), own.clone(), chi_inv.clone()])?;
                if !check.matrix.same_entries(&g.matrix) {
                    return Err(Error::CompositionMismatch("mirror through X_E".into()));
                }
            }
            let (mm, mw) = mirror(&chambers, &walls, &g.matrix)?;
            let mut reflected = g.clone();
            reflected.kind = MapKind::Composite;
            maps.insert("mirror".into(), reflected);
            chambers = mm.into_iter().chain(chambers).collect();
            walls = mw.into_iter().chain(walls).collect();
            ConeStructure::Finite { distinct_models: 0 }
        }
        (End::Reflect(own_l, g_l), End::Reflect(own_r, g_r)) => {
            maps.insert(format!("involution_{}", own_l.source), own_l.clone());
            maps.insert(format!("involution_{}", own_r.source), own_r.clone());
            let generator_m = &g_l.matrix * &g_r.matrix;
            let mut generator =
                PushforwardMap::new(generator_m, &own_r.source, &own_r.source, MapKind::Composite);
            if own_r.source == "X_F" && own_l.source == "X_E" {
                let via = compose(&[own_r.clone(), chi.clone(), own_l.clone(), chi_inv.clone()])?;
                if !via.matrix.same_entries(&generator.matrix) {
                    return Err(Error::CompositionMismatch("generator through X_E".into()));
                }
                generator = via;
            }
            let mut conj = g_l.clone();
            conj.kind = MapKind::Composite;
            maps.insert("mirror".into(), conj);
            let (mm, mw) = mirror(&chambers, &walls, &g_l.matrix)?;
            chambers = mm.into_iter().chain(chambers).collect();
            walls = mw.into_iter().chain(walls).collect();
            infinite(&chambers, generator)?
        }
        (End::Glue(plus_e), End::Open) => {
            let plus_f = right.models.last().expect("flopped model");
            let w_l = &xe.nef[0];
            let w_r = &plus_f.nef[1];
            let g = form_isometry(
                &plus_f.reference_profile(),
                &plus_e.reference_profile(),
                w_r,
                w_l,
                &plus_f.nef[0],
                &plus_f.id,
                &plus_e.id,
            )?;
            let far_e = &plus_e.nef[0];
            if plus_f.nef[0].apply(&g.matrix) != *far_e {
                return Err(Error::chamber(far_e, "isometry misses the far wall of the glued model"));
            }
            let zf = PushforwardMap::new(
                Mat2::from_columns(&plus_f.nef[0].to_vec(), &w_r.to_vec(), GLUE_BASIS, LH),
                "X+",
                "X_F",
                MapKind::SmallFlop,
            );
            let ze_ref = Mat2::from_columns(&far_e.to_vec(), &w_l.to_vec(), GLUE_BASIS, LH);
            let ze = PushforwardMap::new(&chi.matrix * &ze_ref, "X+", "X_E", MapKind::SmallFlop);
            let generator = compose(&[zf.inverse(), ze.clone(), chi_inv.clone()])?;
            if !generator.matrix.same_entries(&g.matrix) {
                return Err(Error::CompositionMismatch(format!(
                    "glued generator {} differs from the isometry {}",
                    generator.matrix, g.matrix
                )));
            }
            maps.insert("isometry".into(), g);
            maps.insert("flop_F".into(), zf);
            maps.insert("flop_E".into(), ze);
            auxiliary.push(plus_e.clone());
            infinite(&chambers, generator)?
        }
        _ => {
            return Err(Error::chamber(
                &walls[0].class,
                "script ends do not fit together",
            ))
        }
    };
    let structure = match structure {
        ConeStructure::Finite { .. } => ConeStructure::Finite {
            distinct_models: distinct_models(&chambers),
        },
        other => other,
    };
    if let ConeStructure::Infinite { generator, .. } = &structure {
        maps.insert("generator".into(), generator.clone());
    }
    Ok(MovableCone {
        case: pair.id(),
        chambers,
        walls,
        structure,
        maps,
        auxiliary,
    })
}

fn infinite(chambers: &[Model], generator: PushforwardMap) -> Result<ConeStructure> {
    let left = chambers.first().unwrap().nef[0].clone();
    let right = chambers.last().unwrap().nef[1].clone();
    if right.apply(&generator.matrix) != left {
        return Err(Error::chamber(&right, "generator does not carry the domain's right edge to its left edge"));
    }
    if generator.matrix.det() != int(1) {
        return Err(Error::chamber(&right, format!("generator {} reverses orientation", generator.matrix)));
    }
    let rays = accumulation_rays(&generator.matrix)?;
    Ok(ConeStructure::Infinite {
        fundamental_domain: [left, right],
        generator,
        rays,
    })
}

/// Chambers counted up to marking: same own profile and same own nef cone.
fn distinct_models(chambers: &[Model]) -> usize {
    let mut seen: Vec<(NumericalProfile, [DivClass; 2])> = Vec::new();
    for m in chambers {
        let key = (m.profile.clone(), m.own_nef());
        if !seen.iter().any(|(p, n)| p.same_forms(&key.0) && *n == key.1) {
            seen.push(key);
        }
    }
    seen.len()
}

/// One translate (infinite case) or chamber (finite case) of the tiling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tile {
    pub index: i64,
    pub label: String,
    pub left: DivClass,
    pub right: DivClass,
    /// Normalized positions of the two edges between the outer rays.
    pub position: [QuadExt; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeReport {
    pub case: String,
    pub finite: bool,
    pub tiles: Vec<Tile>,
    pub distinct_models: Option<usize>,
    pub checks: Vec<String>,
}

/// t = cross(l, v) / (cross(l, v) + cross(v, r)): 0 on l, 1 on r.
pub fn slice_position(outer: &[QuadRay; 2], v: &QuadRay) -> Option<QuadExt> {
    let a = outer[0].cross(v);
    let b = v.cross(&outer[1]);
    a.div(&(&a + &b))
}

fn fail(msg: String) -> Error {
    Error::ConeConjecture(msg)
}

/// Checks that the chambers (finite case) or the generator translates of the
/// fundamental domain for |k| ≤ depth (infinite case) tile without overlap
/// and, in the infinite case, squeeze monotonically onto the eigen rays.
pub fn verify_cone_conjecture(mc: &MovableCone, depth: u32) -> Result<ConeReport> {
    let outer = mc.outer_rays();
    if !outer[0].cross(&outer[1]).is_negative() {
        return Err(fail("outer rays are not in clockwise order".into()));
    }
    let pos = |d: &DivClass| {
        slice_position(&outer, &QuadRay::from_rational(d))
            .ok_or_else(|| fail(format!("{d} sits on an outer ray")))
    };
    let mut checks = Vec::new();
    // nef chambers in every case
    for (i, m) in mc.chambers.iter().enumerate() {
        if m.nef[1] != mc.chambers.get(i + 1).map_or(m.nef[1].clone(), |n| n.nef[0].clone()) {
            return Err(fail(format!("chambers {} and {} do not share a wall", i, i + 1)));
        }
        if mc.walls[i].class != m.nef[0] || mc.walls[i + 1].class != m.nef[1] {
            return Err(fail(format!("wall list disagrees with chamber {i}")));
        }
        let p = m.reference_profile();
        for g in &m.nef {
            let h0 = rr_h0(&p, g);
            if !h0.is_integer() {
                return Err(fail(format!("h0({g}) = {h0} on {} is not an integer", m.id)));
            }
        }
    }
    checks.push(format!("{} chambers share consecutive walls", mc.chambers.len()));
    checks.push("Riemann-Roch is integral on every nef generator".into());
    let mut tiles = Vec::new();
    let distinct = match &mc.structure {
        ConeStructure::Finite { distinct_models } => {
            for w in mc.boundary() {
                if w.kind.is_small() {
                    return Err(fail(format!("boundary wall {} is small", w.class)));
                }
            }
            checks.push("boundary walls are fibrations or divisorial".into());
            for (i, m) in mc.chambers.iter().enumerate() {
                tiles.push(Tile {
                    index: i as i64,
                    label: m.id.clone(),
                    left: m.nef[0].clone(),
                    right: m.nef[1].clone(),
                    position: [pos(&m.nef[0]).unwrap_or_else(|_| QuadExt::zero()), pos(&m.nef[1]).unwrap_or_else(|_| QuadExt::from_i64(1))],
                });
            }
            Some(*distinct_models)
        }
        ConeStructure::Infinite {
            fundamental_domain,
            generator,
            rays,
        } => {
            let g = &generator.matrix;
            let t = g.trace();
            if g.det() != int(1) || &t * &t <= int(4) {
                return Err(fail(format!("generator {g} is not hyperbolic")));
            }
            if rays.radius <= QuadExt::from_i64(1) {
                return Err(fail("spectral radius is not above 1".into()));
            }
            for ray in [&rays.dominant, &rays.recessive] {
                let [l, h] = g.apply_quad(&[ray.l.clone(), ray.h.clone()]);
                if !(QuadRay { l, h }).cross(ray).is_zero() {
                    return Err(fail(format!("{ray} is not fixed by the generator")));
                }
            }
            if outer[0] != rays.dominant {
                return Err(fail("forward translates do not move toward the dominant ray".into()));
            }
            checks.push("eigen rays are exact fixed points".into());
            let inv = g.inverse().expect("unimodular");
            let d = depth as i64;
            let mut fwd = vec![Mat2::identity(LH)];
            let mut bwd = vec![Mat2::identity(LH)];
            for _ in 0..d {
                fwd.push(g * fwd.last().unwrap());
                bwd.push(&inv * bwd.last().unwrap());
            }
            for k in -d..=d {
                let m = if k >= 0 { &fwd[k as usize] } else { &bwd[(-k) as usize] };
                let left = fundamental_domain[0].apply(m);
                let right = fundamental_domain[1].apply(m);
                tiles.push(Tile {
                    index: k,
                    label: format!("k={k}"),
                    position: [pos(&left)?, pos(&right)?],
                    left,
                    right,
                });
            }
            for pair in tiles.windows(2) {
                // tile k+1 sits immediately left of tile k
                let (lo, hi) = (&pair[0], &pair[1]);
                if hi.right != lo.left {
                    return Err(fail(format!("translates {} and {} do not abut", lo.index, hi.index)));
                }
            }
            checks.push(format!("{} translates abut along shared rays", tiles.len()));
            None
        }
    };
    for t in &tiles {
        if !t.left.cross(&t.right).is_negative() {
            return Err(fail(format!("tile {} is degenerate or reversed", t.label)));
        }
        let zero = QuadExt::zero();
        let one = QuadExt::from_i64(1);
        let [a, b] = &t.position;
        if !mc.is_finite() && !(zero < *a && a < b && *b < one) {
            return Err(fail(format!("tile {} leaves the open cone between the rays", t.label)));
        }
    }
    // strictly monotone positions: pairwise disjoint interiors
    let mut sorted: Vec<&Tile> = tiles.iter().collect();
    sorted.sort_by(|a, b| a.position[0].partial_cmp(&b.position[0]).expect("real field"));
    for w in sorted.windows(2) {
        if w[0].position[1] > w[1].position[0] || w[0].position[0] >= w[1].position[0] {
            return Err(fail(format!("tiles {} and {} overlap", w[0].label, w[1].label)));
        }
    }
    checks.push("tile interiors are pairwise disjoint".into());
    if !mc.is_finite() {
        checks.push("edge positions decrease strictly to 0 and increase strictly to 1".into());
    }
    Ok(ConeReport {
        case: mc.case.clone(),
        finite: mc.is_finite(),
        tiles,
        distinct_models: distinct,
        checks,
    })
}

/// The cone sliced to a unit segment, chambers labelled, edges labelled by
/// their divisor classes.
pub fn render_svg(mc: &MovableCone, report: &ConeReport) -> String {
    let width = 900;
    let (x0, span) = (60, 780);
    let x = |t: &QuadExt| (t.scale(&int(span)) + QuadExt::from_i64(x0)).to_decimal(2);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="220" font-family="serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<title>{}</title>"#, mc.case);
    let _ = writeln!(
        s,
        r#"<line x1="{x0}" y1="110" x2="{}" y2="110" stroke="black"/>"#,
        x0 + span
    );
    let [ol, or] = mc.outer_rays();
    let _ = writeln!(
        s,
        r#"<text x="{x0}" y="150" text-anchor="middle">{ol}</text><text x="{}" y="150" text-anchor="middle">{or}</text>"#,
        x0 + span
    );
    let mut edges: Vec<(QuadExt, String)> = Vec::new();
    for t in &report.tiles {
        for (p, d) in t.position.iter().zip([&t.left, &t.right]) {
            if !edges.iter().any(|(q, _)| q == p) {
                edges.push((p.clone(), d.to_string()));
            }
        }
    }
    let near_domain: Vec<&QuadExt> = report
        .tiles
        .iter()
        .filter(|t| t.index.abs() <= 1)
        .flat_map(|t| t.position.iter())
        .collect();
    for (i, (p, label)) in edges.iter().enumerate() {
        let xs = x(p);
        let _ = writeln!(s, r#"<line x1="{xs}" y1="100" x2="{xs}" y2="120" stroke="black"/>"#);
        if mc.is_finite() || near_domain.contains(&p) {
            let y = if i % 2 == 0 { 90 } else { 140 };
            let _ = writeln!(s, r#"<text x="{xs}" y="{y}" text-anchor="middle">{label}</text>"#);
        }
    }
    let names: Vec<&str> = if mc.is_finite() {
        report.tiles.iter().map(|t| t.label.as_str()).collect()
    } else {
        Vec::new()
    };
    for (i, t) in report.tiles.iter().enumerate() {
        let mid = (&t.position[0] + &t.position[1]).scale(&Rational::new(1.into(), 2.into()));
        if let Some(name) = names.get(i) {
            let _ = writeln!(s, r#"<text x="{}" y="70" text-anchor="middle">{name}</text>"#, x(&mid));
        } else if t.index == 0 {
            let _ = writeln!(s, r#"<text x="{}" y="70" text-anchor="middle">fundamental domain</text>"#, x(&mid));
        }
    }
    if let ConeStructure::Infinite { generator, .. } = &mc.structure {
        let _ = writeln!(s, r#"<text x="{x0}" y="200">generator {}</text>"#, generator.matrix);
    }
    s.push_str("</svg>\n");
    s
}

impl Tile {
    pub fn width(&self) -> QuadExt {
        &self.position[1] - &self.position[0]
    }
}
