//! Command implementations behind the `quiddity` binary. Each command returns a
//! value; printing and exit codes are left to `main`.

use std::time::Instant;

use num_bigint::BigUint;
use quiddity::counter::dp_count;
use quiddity::crt::{self, PieceSource};
use quiddity::formulas::{self, FormulaValue, Sign};
use quiddity::modring::prime_factors;
use quiddity::oracle::{self, OracleMethod};
use quiddity::sl2::{sl2_order, MAX_GROUP_ORDER};
use quiddity::{ConstraintKind, Error, Mat2, Modulus, NamedTarget, Result, SetSpec};
use serde::Serialize;
use serde_json::{json, Value};

pub mod table;
pub mod verify;

pub const BUDGET_VAR: &str = "QUIDDITY_BUDGET";

/// Candidate budget: `QUIDDITY_BUDGET` if set, otherwise the library default.
pub fn budget_from_env() -> Result<u128> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::InvalidSpec(format!("{BUDGET_VAR}={v} is not a non-negative integer"))
        }),
        Err(_) => Ok(oracle::DEFAULT_BUDGET),
    }
}

/// A named target (`id`, `neg-id`, `s`, `neg-s`, `t`, `neg-t`) or four
/// comma-separated entries `a,b,c,d` of a determinant-one matrix.
pub fn parse_target(text: &str, modulus: Modulus) -> Result<Mat2> {
    if let Some(t) = NamedTarget::parse(text) {
        return Ok(t.matrix(modulus));
    }
    let entries: Vec<i64> = text
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidSpec(format!("unknown target '{text}'")))?;
    let [a, b, c, d] = entries[..] else {
        return Err(Error::InvalidSpec(format!(
            "target '{text}' needs four entries"
        )));
    };
    let m = Mat2::new(a, b, c, d, modulus);
    if !m.is_special() {
        return Err(Error::InvalidSpec(format!(
            "target {m} does not have determinant 1"
        )));
    }
    Ok(m)
}

pub fn target_label(target: &Mat2) -> String {
    NamedTarget::ALL
        .into_iter()
        .find(|t| t.matrix(target.modulus()) == *target)
        .map(|t| t.name().to_string())
        .unwrap_or_else(|| {
            let [a, b, c, d] = target.entries();
            format!("{a},{b},{c},{d}")
        })
}

/// Comma-separated position constraints: `a2-unit`, `a3-nonunit`, `a4-any`,
/// `a2=3`. An empty string or `none` means no constraint.
pub fn parse_constraints(text: &str, modulus: Modulus) -> Result<Vec<(usize, ConstraintKind)>> {
    let text = text.trim();
    if text.is_empty() || text == "none" {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|item| {
            let item = item.trim();
            let bad = || Error::InvalidSpec(format!("cannot parse constraint '{item}'"));
            let rest = item.strip_prefix('a').ok_or_else(bad)?;
            let split = rest.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?;
            let pos: usize = rest[..split].parse().map_err(|_| bad())?;
            let kind = match &rest[split..] {
                "-unit" => ConstraintKind::Unit,
                "-nonunit" => ConstraintKind::NonUnit,
                "-any" => ConstraintKind::Any,
                s if s.starts_with('=') => {
                    let v: i64 = s[1..].parse().map_err(|_| bad())?;
                    ConstraintKind::Fixed(modulus.residue(v))
                }
                _ => return Err(bad()),
            };
            Ok((pos, kind))
        })
        .collect()
}

fn build_spec(
    modulus: Modulus,
    size: usize,
    target: Mat2,
    constraints: &[(usize, ConstraintKind)],
) -> Result<SetSpec> {
    constraints
        .iter()
        .try_fold(SetSpec::new(size, target)?, |spec, &(pos, kind)| {
            spec.with(pos, kind)
        })
        .map_err(|e| match e {
            Error::ModulusMismatch { .. } => e,
            other => Error::InvalidSpec(format!("{other} (modulus {modulus})")),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Auto,
    Dp,
    Brute,
    Formula,
}

impl Method {
    pub fn parse(s: &str) -> Option<Method> {
        match s {
            "auto" => Some(Method::Auto),
            "dp" => Some(Method::Dp),
            "brute" => Some(Method::Brute),
            "formula" => Some(Method::Formula),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CountConfig {
    pub modulus: u64,
    pub size: usize,
    pub target: String,
    pub constraint: String,
    pub method: Method,
    pub budget: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    pub modulus: u64,
    pub size: usize,
    pub target: String,
    pub constraint: String,
    /// The method that produced the count (never `auto`).
    pub method: Method,
    pub count: String,
    pub elapsed_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
}

fn sign_of(target: &Mat2) -> Option<Sign> {
    Sign::BOTH
        .into_iter()
        .find(|s| s.target().matrix(target.modulus()) == *target)
}

/// Closed form for the set, if one applies.
pub fn formula_for(spec: &SetSpec) -> Result<FormulaValue> {
    let md = spec.modulus();
    let n = u32::try_from(spec.size()).map_err(|_| Error::InvalidSpec("size too large".into()))?;
    let free: Vec<(usize, ConstraintKind)> = spec
        .constraints()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != ConstraintKind::Any)
        .map(|(i, c)| (i + 1, *c))
        .collect();
    let named = NamedTarget::ALL
        .into_iter()
        .find(|t| t.matrix(md) == spec.target());
    match (free.as_slice(), named, md.two_adic()) {
        ([], _, _) => {
            let sign = sign_of(&spec.target())
                .ok_or_else(|| Error::UnsupportedCase("closed forms cover ±Id only".into()))?;
            let factors = prime_factors(u64::from(md.value()));
            if let [(p, 1)] = factors.as_slice() {
                return formulas::u_count(n, *p, sign);
            }
            let factorization = crt::split(u64::from(md.value()))?;
            let assembly = crt::assemble_count(n, &factorization, sign, PieceSource::FormulaOnly)?;
            match assembly.pieces.as_slice() {
                [(_, crt::PieceOrigin::Formula(id))] => {
                    Ok(FormulaValue::new(id, assembly.value.value)
                        .param("n", n)
                        .param("N", md.value())
                        .param("sign", sign.name()))
                }
                _ => Ok(assembly.value),
            }
        }
        ([(2, ConstraintKind::Unit)], Some(t), Some(m)) if m >= 2 => {
            let value = formulas::delta_any(n, m, t)?;
            Ok(FormulaValue::new("delta_any", value)
                .param("n", n)
                .param("m", m)
                .param("target", t.name()))
        }
        _ => Err(Error::UnsupportedCase(
            "no closed form for this constraint set".into(),
        )),
    }
}

fn dp_feasible(md: Modulus) -> bool {
    sl2_order(u64::from(md.value())) <= MAX_GROUP_ORDER as u128
}

pub fn cmd_count(config: &CountConfig) -> Result<CountReport> {
    let start = Instant::now();
    let md = Modulus::new(config.modulus)?;
    let target = parse_target(&config.target, md)?;
    let constraints = parse_constraints(&config.constraint, md)?;
    let spec = build_spec(md, config.size, target, &constraints)?;

    let mut formula_id = None;
    let (method, count): (Method, BigUint) = match config.method {
        Method::Formula => {
            let f = formula_for(&spec)?;
            formula_id = Some(f.formula_id.to_string());
            (Method::Formula, f.value)
        }
        Method::Dp => (Method::Dp, dp_count(&spec)?),
        Method::Brute => (
            Method::Brute,
            oracle::count(&spec, OracleMethod::Auto, config.budget)?,
        ),
        Method::Auto => match formula_for(&spec) {
            Ok(f) => {
                eprintln!("auto: using formula {}", f.formula_id);
                formula_id = Some(f.formula_id.to_string());
                (Method::Formula, f.value)
            }
            Err(reason) if dp_feasible(md) => {
                eprintln!("auto: using dp ({reason})");
                (Method::Dp, dp_count(&spec)?)
            }
            Err(reason) => {
                eprintln!("auto: using brute force ({reason}; group too large for dp)");
                (
                    Method::Brute,
                    oracle::count(&spec, OracleMethod::Auto, config.budget)?,
                )
            }
        },
    };
    Ok(CountReport {
        modulus: config.modulus,
        size: config.size,
        target: target_label(&target),
        constraint: if constraints.is_empty() {
            "none".into()
        } else {
            config.constraint.clone()
        },
        method,
        count: count.to_string(),
        elapsed_ms: start.elapsed().as_millis(),
        formula: formula_id,
    })
}

/// Arguments for [`cmd_formula`]; unused fields are ignored by each formula.
#[derive(Debug, Clone, Default)]
pub struct FormulaArgs {
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub q: Option<u64>,
    pub sign: Option<Sign>,
    pub target: Option<NamedTarget>,
}

pub const FORMULA_NAMES: [&str; 10] = [
    "u",
    "w4-ring4",
    "w-odd",
    "w4",
    "delta",
    "delta-base",
    "w-even-bounds",
    "w8-even",
    "w8-odd",
    "zero-pairs",
];

fn need<T>(v: Option<T>, what: &str, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidSpec(format!("formula '{name}' needs --{what}")))
}

fn formula_json(f: &FormulaValue) -> Value {
    let params: serde_json::Map<String, Value> = f
        .params
        .iter()
        .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
        .collect();
    json!({ "formula": f.formula_id, "params": params, "value": f.value.to_string() })
}

/// Evaluate a closed form by name. `n` is the tuple size for every formula
/// except `w-odd`, `w8-even`, `w8-odd` and `w-even-bounds`, which take
/// `n = size / 2` (rounded down).
pub fn cmd_formula(name: &str, args: &FormulaArgs) -> Result<Value> {
    let n = || need(args.n, "n", name);
    let m = || need(args.m, "m", name);
    let sign = || need(args.sign, "sign", name);
    let target = || need(args.target, "target", name);
    let single = |f: Result<FormulaValue>| f.map(|f| formula_json(&f));
    match name {
        "u" => single(formulas::u_count(n()?, need(args.q, "q", name)?, sign()?)),
        "w4-ring4" => single(formulas::w4_ring4(n()?, sign()?)),
        "w-odd" => single(formulas::w_odd_2m(n()?, m()?, sign()?)),
        "w4" => single(formulas::w4_2m(m()?, sign()?)),
        "delta" => single(formulas::delta_closed_form(n()?, m()?, target()?)),
        "delta-base" => single(formulas::delta_base(n()?, m()?, target()?)),
        "w8-even" => single(formulas::w8_even(n()?)),
        "w8-odd" => single(formulas::w8_odd(n()?, sign()?)),
        "zero-pairs" => single(formulas::zero_pair_count(m()?)),
        "w-even-bounds" => {
            let (lo, hi) = formulas::w_even_bounds(n()?, m()?, sign()?)?;
            Ok(json!({ "lower": formula_json(&lo), "upper": formula_json(&hi) }))
        }
        _ => Err(Error::InvalidSpec(format!(
            "unknown formula '{name}'; expected one of {}",
            FORMULA_NAMES.join(", ")
        ))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CrtPieceReport {
    pub modulus: u64,
    pub count: String,
    pub source: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrtReport {
    pub modulus: u64,
    pub size: u32,
    pub sign: &'static str,
    pub pieces: Vec<CrtPieceReport>,
    pub count: String,
}

pub fn cmd_crt(modulus: u64, size: u32, sign: Sign, budget: u128) -> Result<CrtReport> {
    let factorization = crt::split(modulus)?;
    let assembly = crt::assemble_count(size, &factorization, sign, PieceSource::Auto { budget })?;
    Ok(CrtReport {
        modulus,
        size,
        sign: sign.name(),
        pieces: assembly
            .pieces
            .iter()
            .map(|(p, origin)| CrtPieceReport {
                modulus: p.modulus,
                count: p.count.to_string(),
                source: origin.to_string(),
            })
            .collect(),
        count: assembly.value.value.to_string(),
    })
}
