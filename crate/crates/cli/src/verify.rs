//! Verification suites: each produces a list of named pass/fail checks.

use num_bigint::BigUint;
use quiddity::counter::{dp_count, dp_vector};
use quiddity::crt::{self, PieceSource};
use quiddity::formulas::{self, Sign};
use quiddity::maps::{self, verify_reciprocal};
use quiddity::oracle::{self, psi_fiber};
use quiddity::{ConstraintKind, Error, Modulus, NamedTarget, Result, SetSpec};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Bijections,
    Recursion,
    Bounds,
    Crt,
    Totality,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        Some(match s {
            "bijections" => Suite::Bijections,
            "recursion" => Suite::Recursion,
            "bounds" => Suite::Bounds,
            "crt" => Suite::Crt,
            "totality" => Suite::Totality,
            "all" => Suite::All,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bijections => "bijections",
            Suite::Recursion => "recursion",
            Suite::Bounds => "bounds",
            Suite::Crt => "crt",
            Suite::Totality => "totality",
            Suite::All => "all",
        }
    }
}

/// Grid overrides; `None` means the suite's default.
#[derive(Debug, Clone, Default)]
pub struct Grid {
    pub moduli: Option<Vec<u64>>,
    pub ms: Option<Vec<u32>>,
    pub sizes: Option<Vec<u32>>,
    pub max_size: Option<usize>,
}

/// `"5..10"` (inclusive) or `"6,8"`.
pub fn parse_list<T: std::str::FromStr + Copy + Into<u64> + TryFrom<u64>>(
    text: &str,
) -> Result<Vec<T>> {
    let bad = || Error::InvalidSpec(format!("cannot parse list '{text}'"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi
            .trim()
            .trim_start_matches('=')
            .parse()
            .map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return (lo..=hi)
            .map(|v| T::try_from(v).map_err(|_| bad()))
            .collect();
    }
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| bad()))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn record(
        &mut self,
        suite: &'static str,
        name: String,
        passed: bool,
        detail: impl FnOnce() -> String,
    ) {
        let detail = if passed { None } else { Some(detail()) };
        self.checks.push(Check {
            suite,
            name,
            passed,
            detail,
        });
    }

    fn expect_eq<T: PartialEq + std::fmt::Display>(
        &mut self,
        suite: &'static str,
        name: String,
        got: T,
        want: T,
    ) {
        let passed = got == want;
        self.record(suite, name, passed, || {
            format!("got {got}, expected {want}")
        });
    }
}

fn modulus(n: u64) -> Result<Modulus> {
    Modulus::new(n)
}

fn omega(size: u32, md: Modulus, sign: Sign) -> Result<SetSpec> {
    SetSpec::new(size as usize, sign.target().matrix(md))
}

fn unit_second(size: u32) -> Vec<ConstraintKind> {
    let mut c = vec![ConstraintKind::Any; size as usize];
    c[1] = ConstraintKind::Unit;
    c
}

fn two_adic(n: u64) -> Result<u32> {
    modulus(n)?
        .two_adic()
        .filter(|&m| m >= 2)
        .ok_or_else(|| Error::InvalidSpec(format!("{n} is not a power of two >= 4")))
}

fn bijections(grid: &Grid, budget: u128, report: &mut VerifyReport) -> Result<()> {
    const SUITE: &str = "bijections";
    for n in grid.moduli.clone().unwrap_or_else(|| vec![4, 8]) {
        let md = modulus(n)?;
        let max_size = grid.max_size.unwrap_or(if n <= 4 { 8 } else { 6 });
        for size in 2..=max_size {
            for map in maps::catalogue(md, size) {
                let r = verify_reciprocal(map.as_ref(), budget)?;
                report.record(SUITE, r.name.clone(), r.passed(), || {
                    let shown: Vec<String> = r.failures.iter().map(ToString::to_string).collect();
                    format!("{} failures; {}", r.failure_count, shown.join("; "))
                });
            }
        }
        let Some(m) = md.two_adic().filter(|&m| m >= 2) else {
            continue;
        };
        let half_units = BigUint::from(1u32) << (m - 1);
        for x in quiddity::modring::units_of(md) {
            let size = psi_fiber(m, x)?.len();
            report.expect_eq(
                SUITE,
                format!("fiber size |T({m},{x})|"),
                size,
                1 << (2 * m - 1),
            );
        }
        for size in (4..=max_size as u32).step_by(2) {
            for sign in Sign::BOTH {
                let target = sign.target().matrix(md);
                let delta =
                    dp_count(&SetSpec::new(size as usize, target)?.with(2, ConstraintKind::Unit)?)?;
                let odd = dp_count(&omega(size - 1, md, sign)?)?;
                report.expect_eq(
                    SUITE,
                    format!(
                        "unit block N={n} n={size} {} equals units times odd count",
                        sign.name()
                    ),
                    delta,
                    &half_units * odd,
                );
            }
        }
    }
    Ok(())
}

fn recursion(grid: &Grid, report: &mut VerifyReport) -> Result<()> {
    const SUITE: &str = "recursion";
    let ms = grid.ms.clone().unwrap_or_else(|| vec![2, 3]);
    let sizes = grid.sizes.clone().unwrap_or_else(|| (5..=10).collect());
    for &m in &ms {
        let md = modulus(1u64 << m)?;
        for &n in &sizes {
            if n < 5 {
                return Err(Error::InvalidSpec(format!(
                    "recursion sizes start at 5, got {n}"
                )));
            }
            let vectors = [n, n - 1, n - 2]
                .map(|k| dp_vector(md, &unit_second(k)))
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            for t in NamedTarget::ALL {
                let at = |i: usize| vectors[i].get(&t.matrix(md)).cloned().unwrap_or_default();
                let step = formulas::delta_recursion(&at(1), &at(2), m)?.value;
                report.expect_eq(SUITE, format!("dp m={m} n={n} {}", t.name()), at(0), step);
                let closed = formulas::delta_closed_form(n, m, t)?.value;
                report.expect_eq(
                    SUITE,
                    format!("closed form vs dp m={m} n={n} {}", t.name()),
                    closed,
                    at(0),
                );
            }
        }
        for n in 7..=40 {
            for t in NamedTarget::ALL {
                let d = |k| formulas::delta_closed_form(k, m, t).map(|f| f.value);
                let step = formulas::delta_recursion(&d(n - 1)?, &d(n - 2)?, m)?.value;
                report.expect_eq(
                    SUITE,
                    format!("closed form m={m} n={n} {}", t.name()),
                    d(n)?,
                    step,
                );
            }
        }
    }
    Ok(())
}

fn bounds(grid: &Grid, report: &mut VerifyReport) -> Result<()> {
    const SUITE: &str = "bounds";
    let ms = grid.ms.clone().unwrap_or_else(|| vec![2, 3]);
    let sizes = grid.sizes.clone().unwrap_or_else(|| vec![6, 8]);
    for &m in &ms {
        let md = modulus(1u64 << m)?;
        for &size in &sizes {
            if size < 6 || size % 2 == 1 {
                return Err(Error::InvalidSpec(format!(
                    "bound sizes must be even and >= 6, got {size}"
                )));
            }
            for sign in Sign::BOTH {
                let (lo, hi) = formulas::w_even_bounds(size / 2, m, sign)?;
                let count = dp_count(&omega(size, md, sign)?)?;
                let inside = lo.value <= count && count <= hi.value;
                report.record(
                    SUITE,
                    format!("m={m} n={size} {}", sign.name()),
                    inside,
                    || format!("{count} outside [{}, {}]", lo.value, hi.value),
                );
            }
        }
    }
    Ok(())
}

fn crt_suite(grid: &Grid, budget: u128, report: &mut VerifyReport) -> Result<()> {
    const SUITE: &str = "crt";
    let moduli = grid.moduli.clone().unwrap_or_else(|| vec![12, 24]);
    let sizes = grid.sizes.clone().unwrap_or_else(|| (4..=7).collect());
    for &n in &moduli {
        let md = modulus(n)?;
        let f = crt::split(n)?;
        for &size in &sizes {
            for sign in Sign::BOTH {
                let assembled = crt::assemble_count(size, &f, sign, PieceSource::Auto { budget })?
                    .value
                    .value;
                let dp = dp_count(&omega(size, md, sign)?)?;
                report.expect_eq(
                    SUITE,
                    format!("N={n} n={size} {}", sign.name()),
                    assembled,
                    dp,
                );
            }
        }
        let size = grid.max_size.unwrap_or(4);
        for map in maps::catalogue(md, size)
            .into_iter()
            .filter(|m| m.name().starts_with("crt"))
        {
            let r = verify_reciprocal(map.as_ref(), budget)?;
            report.record(SUITE, r.name.clone(), r.passed(), || {
                format!("{:?}", r.failures)
            });
        }
    }
    Ok(())
}

fn totality(grid: &Grid, budget: u128, report: &mut VerifyReport) -> Result<()> {
    const SUITE: &str = "totality";
    let moduli = grid.moduli.clone().unwrap_or_else(|| (2..=12).collect());
    let sizes = grid.sizes.clone().unwrap_or_else(|| (1..=5).collect());
    for &n in &moduli {
        let md = modulus(n)?;
        for &size in &sizes {
            let any = vec![ConstraintKind::Any; size as usize];
            let expected = BigUint::from(n).pow(size);
            let total = dp_vector(md, &any)?.total()?;
            report.expect_eq(SUITE, format!("dp N={n} n={size}"), total, expected.clone());
            if expected <= BigUint::from(200_000u32) {
                let by_target = oracle::count_by_target(md, &any, budget)?;
                let sum: u64 = by_target.values().sum();
                report.expect_eq(
                    SUITE,
                    format!("oracle N={n} n={size}"),
                    BigUint::from(sum),
                    expected,
                );
            }
            if size % 2 == 1 {
                let plus = dp_count(&omega(size, md, Sign::Plus)?)?;
                let minus = dp_count(&omega(size, md, Sign::Minus)?)?;
                report.expect_eq(SUITE, format!("sign symmetry N={n} n={size}"), plus, minus);
            }
        }
    }
    Ok(())
}

pub fn cmd_verify(suite: Suite, grid: &Grid, budget: u128) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let run = |s: Suite| suite == s || suite == Suite::All;
    if let Some(ms) = &grid.ms {
        for &m in ms {
            two_adic(1u64 << m.min(40))?;
        }
    }
    if run(Suite::Bijections) {
        bijections(grid, budget, &mut report)?;
    }
    if run(Suite::Recursion) {
        recursion(grid, &mut report)?;
    }
    if run(Suite::Bounds) {
        bounds(grid, &mut report)?;
    }
    if run(Suite::Crt) {
        crt_suite(grid, budget, &mut report)?;
    }
    if run(Suite::Totality) {
        totality(grid, budget, &mut report)?;
    }
    Ok(report)
}
