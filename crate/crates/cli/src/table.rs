//! Count tables as CSV.

use num_bigint::BigUint;
use quiddity::counter::dp_count;
use quiddity::crt::{self, PieceSource};
use quiddity::formulas::{self, Sign};
use quiddity::{Error, Modulus, NamedTarget, Result, SetSpec};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    /// `|Ω_n^{+Id}|` over Z/NZ for odd `n` and `N` in 8, 16, 24, 32, 40.
    OddWPlus,
    /// Total count of both signs over Z/8Z.
    W8,
    /// Unit-second-letter counts over Z/8Z with target `Id`.
    DeltaId,
    /// Unit-second-letter counts over Z/8Z with target `S`.
    DeltaS,
}

impl TableKind {
    pub const ALL: [TableKind; 4] = [
        TableKind::OddWPlus,
        TableKind::W8,
        TableKind::DeltaId,
        TableKind::DeltaS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableKind::OddWPlus => "odd-w-plus",
            TableKind::W8 => "w8",
            TableKind::DeltaId => "delta-id",
            TableKind::DeltaS => "delta-s",
        }
    }

    pub fn parse(s: &str) -> Option<TableKind> {
        TableKind::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn default_rows(self) -> Vec<u32> {
        match self {
            TableKind::OddWPlus => vec![3, 5, 7, 9],
            TableKind::W8 => (2..=10).collect(),
            TableKind::DeltaId | TableKind::DeltaS => (3..=10).collect(),
        }
    }
}

pub const ODD_TABLE_MODULI: [u64; 5] = [8, 16, 24, 32, 40];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// Header line then one line per row, comma-separated, LF-terminated.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: serde_json::Map<String, Value> = self
                    .header
                    .iter()
                    .cloned()
                    .zip(r.iter().map(|v| json!(v)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        json!({ "columns": self.header, "rows": rows })
    }
}

fn both_signs_dp(size: u32, modulus: u64) -> Result<BigUint> {
    let md = Modulus::new(modulus)?;
    Sign::BOTH
        .iter()
        .map(|s| dp_count(&SetSpec::new(size as usize, s.target().matrix(md))?))
        .sum()
}

fn w8_value(size: u32) -> Result<BigUint> {
    match size {
        0 | 1 => Err(Error::Precondition(format!(
            "w8 rows start at 2, got {size}"
        ))),
        2 | 3 => both_signs_dp(size, 8),
        n if n % 2 == 0 => Ok(formulas::w8_even(n / 2)?.value),
        n => Ok(formulas::w8_odd(n / 2, Sign::Plus)?.value * 2u32),
    }
}

pub fn cmd_table(kind: TableKind, rows: Option<&[u32]>, budget: u128) -> Result<Table> {
    let rows = rows
        .map(<[u32]>::to_vec)
        .unwrap_or_else(|| kind.default_rows());
    let header: Vec<String> = match kind {
        TableKind::OddWPlus => std::iter::once("n".to_string())
            .chain(ODD_TABLE_MODULI.iter().map(|n| format!("N={n}")))
            .collect(),
        TableKind::W8 => vec!["n".into(), "w_n_8".into()],
        TableKind::DeltaId => vec!["n".into(), "delta_id_m3".into()],
        TableKind::DeltaS => vec!["n".into(), "delta_s_m3".into()],
    };
    let mut out = Vec::with_capacity(rows.len());
    for &n in &rows {
        let mut line = vec![n.to_string()];
        match kind {
            TableKind::OddWPlus => {
                if n < 3 || n % 2 == 0 {
                    return Err(Error::Precondition(format!(
                        "odd-w-plus rows must be odd and >= 3, got {n}"
                    )));
                }
                for &modulus in &ODD_TABLE_MODULI {
                    let f = crt::split(modulus)?;
                    let a = crt::assemble_count(n, &f, Sign::Plus, PieceSource::Auto { budget })?;
                    line.push(a.value.value.to_string());
                }
            }
            TableKind::W8 => line.push(w8_value(n)?.to_string()),
            TableKind::DeltaId => {
                line.push(formulas::delta_any(n, 3, NamedTarget::Id)?.to_string())
            }
            TableKind::DeltaS => {
                if n < 3 {
                    return Err(Error::Precondition(format!(
                        "delta-s rows start at 3, got {n}"
                    )));
                }
                line.push(formulas::delta_any(n, 3, NamedTarget::S)?.to_string())
            }
        }
        out.push(line);
    }
    Ok(Table { header, rows: out })
}
