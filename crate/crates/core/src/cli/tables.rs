//! The intersection-number and Hodge tables, rebuilt from the catalog.

use serde_json::{json, Value};

use crate::error::Result;
use crate::exact::Rational;
use crate::fano::{Catalog, SplitPair};
use crate::invariants::{hodge, profile, DivClass, NumericalProfile, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum TableId {
    #[value(name = "T1")]
    T1,
    #[value(name = "T2")]
    T2,
    #[value(name = "T3")]
    T3,
    #[value(name = "T4")]
    T4,
    #[value(name = "A1")]
    A1,
    #[value(name = "A2")]
    A2,
    #[value(name = "A3")]
    A3,
    #[value(name = "A4")]
    A4,
    #[value(name = "A5")]
    A5,
}

impl TableId {
    pub const ALL: [TableId; 9] = [
        TableId::T1,
        TableId::T2,
        TableId::T3,
        TableId::T4,
        TableId::A1,
        TableId::A2,
        TableId::A3,
        TableId::A4,
        TableId::A5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::T1 => "T1",
            TableId::T2 => "T2",
            TableId::T3 => "T3",
            TableId::T4 => "T4",
            TableId::A1 => "A1",
            TableId::A2 => "A2",
            TableId::A3 => "A3",
            TableId::A4 => "A4",
            TableId::A5 => "A5",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub id: TableId,
    pub caption: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Echoed from the catalog rather than computed.
    pub catalog_input: bool,
}

impl Table {
    pub fn markdown(&self) -> String {
        let mut s = format!("{}: {}", self.id.name(), self.caption);
        if self.catalog_input {
            s.push_str(" [catalog input]");
        }
        s.push_str("\n\n");
        s.push_str(&format!("| {} |\n", self.columns.join(" | ")));
        s.push_str(&format!("|{}\n", "---|".repeat(self.columns.len())));
        for r in &self.rows {
            s.push_str(&format!("| {} |\n", r.join(" | ")));
        }
        s
    }

    pub fn csv(&self) -> String {
        let esc = |c: &str| {
            if c.contains(',') || c.contains('"') {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.to_string()
            }
        };
        let mut s = self.columns.iter().map(|c| esc(c)).collect::<Vec<_>>().join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.iter().map(|c| esc(c)).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }

    pub fn json(&self) -> Value {
        let cell = |c: &String| c.parse::<i64>().map(Value::from).unwrap_or_else(|_| json!(c));
        json!({
            "id": self.id.name(),
            "caption": self.caption,
            "source": if self.catalog_input { "catalog input" } else { "computed" },
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(cell).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// "O(1)^3+O(2)", twists ascending as in the tables.
pub fn bundle_label(twists: &[i64]) -> String {
    let mut t = twists.to_vec();
    t.sort_unstable();
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < t.len() {
        let j = t[i..].iter().take_while(|&&x| x == t[i]).count();
        let base = if t[i] == 0 { "O".to_string() } else { format!("O({})", t[i]) };
        parts.push(if j > 1 { format!("{base}^{j}") } else { base });
        i += j;
    }
    parts.join("+")
}

pub fn base_label(id: &str) -> &str {
    match id {
        "P4" => "P4",
        "Gr24" => "Gr(2,4)",
        other => other,
    }
}

fn case(cat: &Catalog, id: &str) -> Result<SplitPair> {
    SplitPair::parse(id, cat)
}

fn n(q: &Rational) -> String {
    q.to_string()
}

fn profile_row(p: &NumericalProfile) -> Vec<String> {
    let mut row: Vec<String> = p.cubic.iter().map(n).collect();
    row.extend(p.c2.iter().map(n));
    row.push(p.odp.to_string());
    row
}

const PROFILE_COLUMNS: [&str; 7] = ["L^3", "L^2.H", "L.H^2", "H^3", "L.c2", "H.c2", "ODPs"];

fn profile_table(cat: &Catalog, id: TableId, case_id: &str) -> Result<Table> {
    let p = profile(&case(cat, case_id)?, Side::F)?;
    Ok(Table {
        id,
        caption: format!("intersection numbers on X_F for {case_id}"),
        columns: PROFILE_COLUMNS.to_vec(),
        rows: vec![profile_row(&p)],
        catalog_input: false,
    })
}

pub fn build(cat: &Catalog, id: TableId) -> Result<Table> {
    match id {
        TableId::T1 => {
            let mut rows = Vec::new();
            for cid in [
                "P4/F=2,1,1/E=1,0,0",
                "P4/F=3,1,1/E=0,0,0",
                "Gr24/F=2,1,1/E=0,0,0",
            ] {
                let c = case(cat, cid)?;
                let p = profile(&c, Side::F)?;
                let mut row = vec![base_label(&c.base.id).to_string(), bundle_label(&c.e)];
                row.extend(p.cubic.iter().map(n));
                row.push(n(&p.cube(&DivClass::new(1, -1))));
                rows.push(row);
            }
            Ok(Table {
                id,
                caption: "intersection numbers on X_F, rank 3, with G = L-H".into(),
                columns: vec!["M", "E", "L^3", "L^2.H", "L.H^2", "H^3", "G^3"],
                rows,
                catalog_input: false,
            })
        }
        TableId::T2 => profile_table(cat, id, "P4/F=2,2,1/E=0,0,0"),
        TableId::T3 => profile_table(cat, id, "P4/F=2,1,1,1/E=0,0,0,0"),
        TableId::T4 => profile_table(cat, id, "Gr24/F=1,1,1,1/E=0,0,0,0"),
        TableId::A1 => {
            let mut rows = Vec::new();
            for f in ["1,1,1", "2,1"] {
                for d in 2..=5 {
                    let zeros = vec!["0"; f.split(',').count()].join(",");
                    let c = case(cat, &format!("dP{d}/F={f}/E={zeros}"))?;
                    let h = hodge(&c)?;
                    rows.push(vec![
                        bundle_label(&c.f),
                        c.base.degree.to_string(),
                        h.euler.to_string(),
                        h.h21.to_string(),
                        crate::chern::odp_count(&c)?.to_string(),
                    ]);
                }
            }
            Ok(Table {
                id,
                caption: "del Pezzo fourfold bases".into(),
                columns: vec!["F", "d", "chi(X_F)", "h21(X_F)", "ODPs"],
                rows,
                catalog_input: false,
            })
        }
        TableId::A2 => {
            let rows = (2..=5)
                .map(|d| {
                    let b = cat.get(&format!("dP{d}"))?;
                    Ok(vec![
                        b.degree.to_string(),
                        b.chi_anticanonical.to_string(),
                        (1 - b.chi_anticanonical / 2).to_string(),
                    ])
                })
                .collect::<Result<_>>()?;
            Ok(Table {
                id,
                caption: "smooth anticanonical hypersurface of a del Pezzo fourfold".into(),
                columns: vec!["d", "chi(Y)", "h21(Y)"],
                rows,
                catalog_input: true,
            })
        }
        TableId::A3 => {
            let mut rows = Vec::new();
            for g in 2..=10 {
                let c = case(cat, &format!("Mu{g}/F=1,1/E=0,0"))?;
                let h = hodge(&c)?;
                let chi_y = c.base.chi_anticanonical;
                rows.push(vec![
                    g.to_string(),
                    chi_y.to_string(),
                    (1 - chi_y / 2).to_string(),
                    h.euler.to_string(),
                    h.h21.to_string(),
                    crate::chern::odp_count(&c)?.to_string(),
                ]);
            }
            Ok(Table {
                id,
                caption: "Mukai fourfold bases, F = O(1)^2".into(),
                columns: vec!["g", "chi(Y)", "h21(Y)", "chi(X_F)", "h21(X_F)", "ODPs"],
                rows,
                catalog_input: false,
            })
        }
        TableId::A4 => {
            let ids = [
                "P4/F=1,1,1,1,1/E=0,0,0,0,0",
                "P4/F=2,1,1,1/E=0,0,0,0",
                "P4/F=2,2,1/E=0,0,0",
                "P4/F=3,1,1/E=0,0,0",
                "P4/F=4,1/E=0,0",
                "P4/F=3,2/E=0,0",
                "Gr24/F=1,1,1,1/E=0,0,0,0",
                "Gr24/F=2,1,1/E=0,0,0",
                "Gr24/F=3,1/E=0,0",
                "Gr24/F=2,2/E=0,0",
            ];
            hodge_table(cat, id, &ids, false, "P4 or Gr(2,4), E trivial")
        }
        TableId::A5 => {
            let ids = [
                "P4/F=2,1,1/E=1,0,0",
                "P4/F=3,1/E=1,0",
                "Gr24/F=2,1/E=1,0",
            ];
            hodge_table(cat, id, &ids, true, "P4 or Gr(2,4), E nontrivial")
        }
    }
}

fn hodge_table(cat: &Catalog, id: TableId, ids: &[&str], with_e: bool, caption: &str) -> Result<Table> {
    let mut rows = Vec::new();
    for cid in ids {
        let c = case(cat, cid)?;
        let h = hodge(&c)?;
        let mut row = vec![base_label(&c.base.id).to_string(), c.rank().to_string()];
        if with_e {
            row.push(bundle_label(&c.e));
        }
        row.push(bundle_label(&c.f));
        row.push(h.euler.to_string());
        row.push(h.h21.to_string());
        row.push(crate::chern::odp_count(&c)?.to_string());
        rows.push(row);
    }
    let mut columns = vec!["M", "rk"];
    if with_e {
        columns.push("E");
    }
    columns.extend(["F", "chi(X_F)", "h21(X_F)", "ODPs"]);
    Ok(Table {
        id,
        caption: caption.into(),
        columns,
        rows,
        catalog_input: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(bundle_label(&[2, 1, 1, 1]), "O(1)^3+O(2)");
        assert_eq!(bundle_label(&[1, 0, 0]), "O^2+O(1)");
        assert_eq!(bundle_label(&[0, 0, 0]), "O^3");
        assert_eq!(bundle_label(&[3, 2]), "O(2)+O(3)");
    }

    #[test]
    fn renderings_are_stable() {
        let t = build(Catalog::builtin(), TableId::T3).unwrap();
        assert!(t.markdown().contains("| 99 | 42 | 16 | 5 | 114 | 50 | 46 |"));
        assert!(t.csv().ends_with("99,42,16,5,114,50,46\n"));
        assert_eq!(t.json()["rows"][0][6], 46);
        let a2 = build(Catalog::builtin(), TableId::A2).unwrap();
        assert!(a2.markdown().contains("[catalog input]"));
        assert_eq!(a2.json()["source"], "catalog input");
        assert_eq!(build(Catalog::builtin(), TableId::A4).unwrap().rows.len(), 10);
    }
}
