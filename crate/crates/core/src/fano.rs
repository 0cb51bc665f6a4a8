//! Base Fano fourfolds and the split bundle pairs living over them.

use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BUILTIN: &str = include_str!("../data/fano.json");

/// A Picard-rank-1 Fano fourfold, reduced to four numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanoBase {
    pub id: String,
    /// Fano index: -K = index · H.
    pub index: i64,
    /// H⁴.
    pub degree: i64,
    /// ∫ c2(T) · H².
    pub c2_pairing: i64,
    /// Topological Euler number of a smooth anticanonical hypersurface.
    pub chi_anticanonical: i64,
    pub description: String,
    #[serde(default)]
    pub variants: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Projective,
    Grassmannian,
    DelPezzo,
    Mukai,
}

impl FanoBase {
    pub fn family(&self) -> Family {
        match self.index {
            5 => Family::Projective,
            4 => Family::Grassmannian,
            3 => Family::DelPezzo,
            _ => Family::Mukai,
        }
    }

    /// Genus of a Mukai base, d = 2g − 2.
    pub fn genus(&self) -> Option<i64> {
        (self.family() == Family::Mukai).then_some(self.degree / 2 + 1)
    }

    /// ∫ c1·c3 of the tangent bundle, recovered from the hypersurface Euler number.
    pub fn c1c3(&self) -> i64 {
        self.chi_anticanonical + self.index * self.index * self.c2_pairing
    }

    /// Left and right sides of the fundamental-divisor section count,
    /// each multiplied by 24.
    pub fn section_count_sides(&self) -> (i64, i64) {
        let (r, d, c2) = (self.index, self.degree, self.c2_pairing);
        let lhs = (r + 1) * (r + 1) * d + (r + 1) * c2 + 24;
        let rhs = match self.family() {
            Family::Mukai => 12 * d + 96,
            _ => 12 * d * (r - 1) + 72,
        };
        (lhs, rhs)
    }

    fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::Catalog(format!("{}: {why}", self.id)));
        let (r, d) = (self.index, self.degree);
        if !(2..=5).contains(&r) {
            return bad("index outside 2..5");
        }
        let degree_ok = match r {
            5 => d == 1,
            4 => d == 2,
            3 => (2..=5).contains(&d),
            _ => d % 2 == 0 && (2..=18).contains(&d),
        };
        if !degree_ok {
            return bad("degree not allowed for this index");
        }
        let c2_expected = match self.family() {
            Family::DelPezzo => Some(2 * d + 12),
            Family::Mukai => Some(d + 24),
            _ => None,
        };
        if c2_expected.is_some_and(|c| c != self.c2_pairing) {
            return bad("c2 pairing disagrees with the degree");
        }
        if (self.chi_anticanonical + r * r * self.c2_pairing) % r != 0 {
            return bad("c1·c3 recovered from the Euler number is not an integer");
        }
        if self.chi_anticanonical % 2 != 0 {
            return bad("odd Euler number for a Calabi-Yau threefold");
        }
        if matches!(self.family(), Family::DelPezzo | Family::Mukai) {
            let (lhs, rhs) = self.section_count_sides();
            if lhs != rhs {
                return bad("fundamental-divisor section count fails");
            }
        }
        Ok(())
    }
}

/// A validated list of bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    bases: Vec<FanoBase>,
}

impl Catalog {
    pub fn from_json(text: &str) -> Result<Catalog> {
        let bases: Vec<FanoBase> =
            serde_json::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        for (i, b) in bases.iter().enumerate() {
            b.validate()?;
            if bases[..i].iter().any(|o| o.id == b.id) {
                return Err(Error::Catalog(format!("duplicate id {}", b.id)));
            }
        }
        Ok(Catalog { bases })
    }

    pub fn load(path: &Path) -> Result<Catalog> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
        Catalog::from_json(&text)
    }

    pub fn builtin() -> &'static Catalog {
        static CAT: OnceLock<Catalog> = OnceLock::new();
        CAT.get_or_init(|| Catalog::from_json(BUILTIN).expect("bundled catalog is valid"))
    }

    pub fn bases(&self) -> &[FanoBase] {
        &self.bases
    }

    pub fn get(&self, id: &str) -> Result<&FanoBase> {
        self.bases
            .iter()
            .find(|b| b.id == id)
            .ok_or_else(|| Error::UnknownCase(format!("no base named {id}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.bases).expect("catalog serializes")
    }

    /// Every admissible pair over the bases present in this catalog.
    pub fn cases(&self) -> Vec<SplitPair> {
        let mut out: Vec<SplitPair> = CASES
            .iter()
            .filter_map(|(id, f, e)| {
                let base = self.get(id).ok()?;
                Some(SplitPair::new(base.clone(), f.to_vec(), e.to_vec()))
            })
            .collect();
        out.sort_by_key(|x| x.sort_key(self));
        out
    }

    fn position(&self, id: &str) -> usize {
        self.bases.iter().position(|b| b.id == id).unwrap_or(usize::MAX)
    }
}

pub fn catalog() -> &'static [FanoBase] {
    Catalog::builtin().bases()
}

/// The classified list of (base, F twists, E twists), transcribed as data.
const CASES: &[(&str, &[i64], &[i64])] = &[
    ("P4", &[4, 1], &[0, 0]),
    ("P4", &[3, 2], &[0, 0]),
    ("P4", &[3, 1, 1], &[0, 0, 0]),
    ("P4", &[2, 2, 1], &[0, 0, 0]),
    ("P4", &[2, 1, 1, 1], &[0, 0, 0, 0]),
    ("P4", &[1, 1, 1, 1, 1], &[0, 0, 0, 0, 0]),
    ("P4", &[2, 1, 1], &[1, 0, 0]),
    ("P4", &[3, 1], &[1, 0]),
    ("Gr24", &[3, 1], &[0, 0]),
    ("Gr24", &[2, 2], &[0, 0]),
    ("Gr24", &[2, 1, 1], &[0, 0, 0]),
    ("Gr24", &[1, 1, 1, 1], &[0, 0, 0, 0]),
    ("Gr24", &[2, 1], &[1, 0]),
    ("dP2", &[2, 1], &[0, 0]),
    ("dP2", &[1, 1, 1], &[0, 0, 0]),
    ("dP3", &[2, 1], &[0, 0]),
    ("dP3", &[1, 1, 1], &[0, 0, 0]),
    ("dP4", &[2, 1], &[0, 0]),
    ("dP4", &[1, 1, 1], &[0, 0, 0]),
    ("dP5", &[2, 1], &[0, 0]),
    ("dP5", &[1, 1, 1], &[0, 0, 0]),
    ("Mu2", &[1, 1], &[0, 0]),
    ("Mu3", &[1, 1], &[0, 0]),
    ("Mu4", &[1, 1], &[0, 0]),
    ("Mu5", &[1, 1], &[0, 0]),
    ("Mu6", &[1, 1], &[0, 0]),
    ("Mu7", &[1, 1], &[0, 0]),
    ("Mu8", &[1, 1], &[0, 0]),
    ("Mu9", &[1, 1], &[0, 0]),
    ("Mu10", &[1, 1], &[0, 0]),
];

/// All catalog cases in listing order.
pub fn enumerate_cases() -> Vec<SplitPair> {
    Catalog::builtin().cases()
}

/// A base with the twists of F = ⊕O(a_i) and E = ⊕O(b_i), both nonincreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPair {
    pub base: FanoBase,
    pub f: Vec<i64>,
    pub e: Vec<i64>,
}

impl SplitPair {
    pub fn new(base: FanoBase, mut f: Vec<i64>, mut e: Vec<i64>) -> SplitPair {
        f.sort_unstable_by(|a, b| b.cmp(a));
        e.sort_unstable_by(|a, b| b.cmp(a));
        SplitPair { base, f, e }
    }

    pub fn rank(&self) -> usize {
        self.f.len()
    }

    pub fn id(&self) -> String {
        let join = |v: &[i64]| {
            v.iter()
                .map(i64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("{}/F={}/E={}", self.base.id, join(&self.f), join(&self.e))
    }

    pub fn e_trivial(&self) -> bool {
        self.e.iter().all(|&b| b == 0)
    }

    /// The same geometry with the roles of F and E exchanged.
    pub fn swapped(&self) -> SplitPair {
        SplitPair {
            base: self.base.clone(),
            f: self.e.clone(),
            e: self.f.clone(),
        }
    }

    pub fn is_catalog_case(&self) -> bool {
        CASES
            .iter()
            .any(|(id, f, e)| *id == self.base.id && *f == self.f && *e == self.e)
    }

    fn sort_key(&self, cat: &Catalog) -> (usize, Vec<i64>, Vec<i64>) {
        (cat.position(&self.base.id), self.f.clone(), self.e.clone())
    }

    /// Parses `<base>/F=<a,..>/E=<b,..>` against a catalog.
    ///
    /// Grammar problems and unknown bases are reported before the
    /// Calabi-Yau condition, which is checked before the rank rules.
    pub fn parse(text: &str, cat: &Catalog) -> Result<SplitPair> {
        let bad = || Error::Parse(format!("case id {text:?}; expected <base>/F=a,b,../E=c,d,.."));
        let mut parts = text.trim().split('/');
        let (Some(base), Some(f), Some(e), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        let seq = |s: &str, tag: &str| -> Result<Vec<i64>> {
            let body = s.strip_prefix(tag).ok_or_else(bad)?;
            body.split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
                .collect()
        };
        let f = seq(f, "F=")?;
        let e = seq(e, "E=")?;
        let base = cat.get(base)?.clone();
        let pair = SplitPair::new(base, f, e);
        if !cy_condition(&pair) {
            return Err(Error::NotCalabiYau(format!(
                "{}: twists sum to {}, index is {}",
                pair.id(),
                pair.f.iter().chain(&pair.e).sum::<i64>(),
                pair.base.index
            )));
        }
        if pair.f.len() != pair.e.len() || pair.f.len() < 2 {
            return Err(Error::MalformedCase(format!(
                "{}: F and E need equal rank at least 2",
                pair.id()
            )));
        }
        Ok(pair)
    }
}

impl fmt::Display for SplitPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Σ(a_i + b_i) = index with every a_i positive and every b_i nonnegative.
pub fn cy_condition(pair: &SplitPair) -> bool {
    pair.f.iter().all(|&a| a > 0)
        && pair.e.iter().all(|&b| b >= 0)
        && pair.f.iter().chain(&pair.e).sum::<i64>() == pair.base.index
}
