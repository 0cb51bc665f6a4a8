//! C ABI over `movcone`.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `_free` function. Every fallible call returns a
//! [`MovconeStatus`] and leaves a message behind for
//! [`movcone_last_error`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use movcone::birational::PushforwardMap;
use movcone::chambers::{build_movable, verify_cone_conjecture, MovableCone, WallKind};
use movcone::fano::{Catalog, SplitPair};
use movcone::invariants::{hodge, profile, NumericalProfile, Side};
use movcone::Error;

/// Result of every fallible call. Codes 2 to 5 match the exit codes of the
/// `movcone` binary.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MovconeStatus {
    Ok = 0,
    NullArgument = 1,
    /// Unknown or unparsable case id, or a string that is not UTF-8.
    InvalidInput = 2,
    NotCalabiYau = 3,
    /// An exact computation had no admissible answer.
    Algebra = 4,
    /// A model, wall or cone failed verification.
    Verification = 5,
    /// A value does not fit the C type it is returned in.
    Overflow = 6,
    OutOfRange = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MovconeSide {
    F = 0,
    E = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MovconeWallKind {
    Determinantal = 0,
    TypeI = 1,
    TypeII = 2,
    TypeIII = 3,
    K3Fibration = 4,
    EllipticFibration = 5,
    DoubleCoverSmall = 6,
}

/// Cubic form (L^3, L^2.H, L.H^2, H^3), c2 pairings (c2.L, c2.H) and nodes.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MovconeProfile {
    pub cubic: [i64; 4],
    pub c2: [i64; 2],
    pub odp: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MovconeHodge {
    pub h11: i64,
    pub h21: i64,
    pub euler: i64,
}

/// A wall lL + hH of the movable cone.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MovconeWall {
    pub l: i64,
    pub h: i64,
    pub kind: MovconeWallKind,
}

/// A Calabi-Yau pair from the built-in catalog.
pub struct MovconeCase {
    pair: SplitPair,
}

/// A computed movable cone.
pub struct MovconeCone {
    cone: MovableCone,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MovconeStatus {
    match e.exit_code() {
        2 => MovconeStatus::InvalidInput,
        3 => MovconeStatus::NotCalabiYau,
        4 => MovconeStatus::Algebra,
        _ => MovconeStatus::Verification,
    }
}

struct Fail(MovconeStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn overflow(what: &str) -> Fail {
    Fail(MovconeStatus::Overflow, format!("{what} does not fit in 64 bits"))
}

fn null(what: &str) -> Fail {
    Fail(MovconeStatus::NullArgument, format!("{what} is null"))
}

/// Runs `f`, recording any failure or panic.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MovconeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MovconeStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            MovconeStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(MovconeStatus::InvalidInput, format!("{what} is not UTF-8")))
}

fn export_profile(p: &NumericalProfile) -> Result<MovconeProfile, Fail> {
    let (cubic, c2) = p.to_i64().ok_or_else(|| overflow("profile"))?;
    Ok(MovconeProfile { cubic, c2, odp: p.odp })
}

fn export_kind(k: WallKind) -> MovconeWallKind {
    match k {
        WallKind::Determinantal => MovconeWallKind::Determinantal,
        WallKind::TypeI => MovconeWallKind::TypeI,
        WallKind::TypeII => MovconeWallKind::TypeII,
        WallKind::TypeIII => MovconeWallKind::TypeIII,
        WallKind::K3Fibration => MovconeWallKind::K3Fibration,
        WallKind::EllipticFibration => MovconeWallKind::EllipticFibration,
        WallKind::DoubleCoverSmall => MovconeWallKind::DoubleCoverSmall,
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn movcone_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn movcone_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a case id such as "P4/F=2,1,1,1/E=0,0,0,0" against the built-in catalog.
///
/// # Safety
/// `id` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn movcone_case_new(id: *const c_char, out_case: *mut *mut MovconeCase) -> MovconeStatus {
    guard(|| {
        let slot = out(out_case, "out")?;
        *slot = ptr::null_mut();
        let pair = SplitPair::parse(text(id, "id")?, Catalog::builtin())?;
        *slot = Box::into_raw(Box::new(MovconeCase { pair }));
        Ok(())
    })
}

/// # Safety
/// `case` must come from `movcone_case_new` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn movcone_case_free(case: *mut MovconeCase) {
    if !case.is_null() {
        drop(Box::from_raw(case));
    }
}

/// Number of catalog cases.
#[no_mangle]
pub extern "C" fn movcone_catalog_len() -> usize {
    Catalog::builtin().cases().len()
}

/// Opens the catalog case at `index`, in listing order.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn movcone_catalog_case(index: usize, out_case: *mut *mut MovconeCase) -> MovconeStatus {
    guard(|| {
        let slot = out(out_case, "out")?;
        *slot = ptr::null_mut();
        let pair = Catalog::builtin()
            .cases()
            .into_iter()
            .nth(index)
            .ok_or_else(|| Fail(MovconeStatus::OutOfRange, format!("no catalog case {index}")))?;
        *slot = Box::into_raw(Box::new(MovconeCase { pair }));
        Ok(())
    })
}

/// Canonical id of the case as a newly allocated string; release it with
/// `movcone_string_free`.
///
/// # Safety
/// `case` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn movcone_case_id(case: *const MovconeCase, out_id: *mut *mut c_char) -> MovconeStatus {
    guard(|| {
        let c = borrow(case, "case")?;
        let slot = out(out_id, "out")?;
        *slot = CString::new(c.pair.id()).expect("ids have no nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `case` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn movcone_case_profile(
    case: *const MovconeCase,
    side: MovconeSide,
    out_profile: *mut MovconeProfile,
) -> MovconeStatus {
    guard(|| {
        let c = borrow(case, "case")?;
        let slot = out(out_profile, "out")?;
        let side = match side {
            MovconeSide::F => Side::F,
            MovconeSide::E => Side::E,
        };
        *slot = export_profile(&profile(&c.pair, side)?)?;
        Ok(())
    })
}

/// # Safety
/// `case` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn movcone_case_hodge(case: *const MovconeCase, out_hodge: *mut MovconeHodge) -> MovconeStatus {
    guard(|| {
        let c = borrow(case, "case")?;
        let slot = out(out_hodge, "out")?;
        let h = hodge(&c.pair)?;
        *slot = MovconeHodge { h11: h.h11, h21: h.h21, euler: h.euler };
        Ok(())
    })
}

/// Builds the movable cone of a case.
///
/// # Safety
/// `case` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn movcone_cone_new(case: *const MovconeCase, out_cone: *mut *mut MovconeCone) -> MovconeStatus {
    guard(|| {
        let c = borrow(case, "case")?;
        let slot = out(out_cone, "out")?;
        *slot = ptr::null_mut();
        let cone = build_movable(&c.pair)?;
        *slot = Box::into_raw(Box::new(MovconeCone { cone }));
        Ok(())
    })
}

/// # Safety
/// `cone` must come from `movcone_cone_new` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn movcone_cone_free(cone: *mut MovconeCone) {
    if !cone.is_null() {
        drop(Box::from_raw(cone));
    }
}

/// # Safety
/// `cone` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn movcone_cone_is_finite(cone: *const MovconeCone, out_finite: *mut bool) -> MovconeStatus {
    guard(|| {
        *out(out_finite, "out")? = borrow(cone, "cone")?.cone.is_finite();
        Ok(())
    })
}

/// Chambers of the cone, or of one fundamental domain when it is infinite.
///
/// # Safety
/// `cone` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn movcone_cone_chamber_count(cone: *const MovconeCone, out_count: *mut usize) -> MovconeStatus {
    guard(|| {
        *out(out_count, "out")? = borrow(cone, "cone")?.cone.chambers.len();
        Ok(())
    })
}

/// Wall `index`, left to right; there is one more wall than chambers.
///
/// # Safety
/// `cone` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn movcone_cone_wall(
    cone: *const MovconeCone,
    index: usize,
    out_wall: *mut MovconeWall,
) -> MovconeStatus {
    guard(|| {
        let mc = &borrow(cone, "cone")?.cone;
        let slot = out(out_wall, "out")?;
        let w = mc
            .walls
            .get(index)
            .ok_or_else(|| Fail(MovconeStatus::OutOfRange, format!("wall {index} of {}", mc.walls.len())))?;
        let [l, h] = w.class.to_i64().ok_or_else(|| overflow("wall class"))?;
        *slot = MovconeWall { l, h, kind: export_kind(w.kind) };
        Ok(())
    })
}

/// Row-major integer matrix of a named map, for example "generator" or
/// "determinantal_flop". Columns are images of L and H.
///
/// # Safety
/// `cone` and `name` must be valid, and `out` must point at four int64_t.
#[no_mangle]
pub unsafe extern "C" fn movcone_cone_map(
    cone: *const MovconeCone,
    name: *const c_char,
    out_matrix: *mut i64,
) -> MovconeStatus {
    guard(|| {
        let mc = &borrow(cone, "cone")?.cone;
        let name = text(name, "name")?;
        if out_matrix.is_null() {
            return Err(null("out"));
        }
        let m: &PushforwardMap = mc
            .map(name)
            .ok_or_else(|| Fail(MovconeStatus::OutOfRange, format!("{} has no map {name}", mc.case)))?;
        let rows = m.matrix.to_i64().ok_or_else(|| overflow("matrix"))?;
        let flat = [rows[0][0], rows[0][1], rows[1][0], rows[1][1]];
        ptr::copy_nonoverlapping(flat.as_ptr(), out_matrix, 4);
        Ok(())
    })
}

/// Verifies the cone with `depth` translates per side and returns the full
/// report as JSON; release it with `movcone_string_free`.
///
/// # Safety
/// `cone` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn movcone_cone_json(
    cone: *const MovconeCone,
    depth: u32,
    out_json: *mut *mut c_char,
) -> MovconeStatus {
    guard(|| {
        let mc = &borrow(cone, "cone")?.cone;
        let slot = out(out_json, "out")?;
        *slot = ptr::null_mut();
        let report = verify_cone_conjecture(mc, depth)?;
        let v = movcone::cli::movable_json(mc, &report);
        *slot = CString::new(v.to_string()).expect("json has no nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn movcone_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
