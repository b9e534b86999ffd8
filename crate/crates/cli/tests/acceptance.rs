//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use quiddity::counter::{dp_count, dp_vector};
use quiddity::crt::{self, PieceSource};
use quiddity::formulas::{self, Sign};
use quiddity::oracle::{self, OracleMethod, DEFAULT_BUDGET};
use quiddity::{ConstraintKind, Modulus, NamedTarget, SetSpec};
use quiddity_cli::table::{cmd_table, TableKind};
use quiddity_cli::verify::{cmd_verify, Grid, Suite, VerifyReport};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn md(n: u64) -> Modulus {
    Modulus::new(n).unwrap()
}

fn omega(size: usize, n: u64, sign: Sign) -> SetSpec {
    SetSpec::new(size, sign.target().matrix(md(n))).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_secs: u64, what: &str) -> Result<(), String> {
    ensure(elapsed < Duration::from_secs(limit_secs), || {
        format!(
            "{what} took {:.2}s, limit {limit_secs}s",
            elapsed.as_secs_f64()
        )
    })
}

fn suite(s: Suite, grid: Grid) -> Result<VerifyReport, String> {
    let report = cmd_verify(s, &grid, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    if let Some(f) = report.failures().next() {
        return Err(format!(
            "{}: {}",
            f.name,
            f.detail.clone().unwrap_or_default()
        ));
    }
    Ok(report)
}

fn brute(spec: &SetSpec) -> BigUint {
    oracle::count(spec, OracleMethod::Auto, DEFAULT_BUDGET).unwrap()
}

fn odd_table() -> Outcome {
    let expected: [[u64; 5]; 4] = [
        [1, 1, 1, 1, 1],
        [80, 320, 800, 1280, 2080],
        [5376, 86016, 489216, 1376256, 3499776],
        [348160, 22282240, 285491200, 1426063360, 5666652160],
    ];
    let start = Instant::now();
    let table = cmd_table(TableKind::OddWPlus, None, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    within(start.elapsed(), 1, "odd table")?;
    let mut cells = 0;
    for (row, want) in table.rows.iter().zip(expected) {
        for (got, want) in row[1..].iter().zip(want) {
            ensure(*got == want.to_string(), || {
                format!("row n={}: got {got}, expected {want}", row[0])
            })?;
            cells += 1;
        }
    }
    ensure(cells == 20, || format!("only {cells} cells"))?;
    Ok(format!(
        "20/20 entries in {} ms",
        start.elapsed().as_millis()
    ))
}

fn w8_table() -> Outcome {
    let expected = [1u64, 2, 28, 160, 1440, 10752, 88320, 696320, 5605376];
    let table = cmd_table(TableKind::W8, None, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    for (row, want) in table.rows.iter().zip(expected) {
        ensure(row[1] == want.to_string(), || {
            format!("n={}: got {}, expected {want}", row[0], row[1])
        })?;
    }
    let both = |size: usize, f: &dyn Fn(&SetSpec) -> BigUint| -> BigUint {
        Sign::BOTH.iter().map(|&s| f(&omega(size, 8, s))).sum()
    };
    let start = Instant::now();
    for (size, want) in (2..=8).zip(expected) {
        let dp = both(size, &|s| dp_count(s).unwrap());
        ensure(dp == big(want), || format!("dp n={size}: {dp} vs {want}"))?;
    }
    within(start.elapsed(), 10, "dp")?;
    let start = Instant::now();
    for (size, want) in (2..=6).zip(expected) {
        let b = both(size, &brute);
        ensure(b == big(want), || format!("oracle n={size}: {b} vs {want}"))?;
    }
    within(start.elapsed(), 60, "oracle")?;
    Ok(format!(
        "9/9 values; dp n<=8, oracle n<=6 ({} ms)",
        start.elapsed().as_millis()
    ))
}

fn delta_tables() -> Outcome {
    let rows = [
        (
            TableKind::DeltaId,
            NamedTarget::Id,
            [1u64, 4, 48, 320, 2816, 21504, 176128, 1392640],
        ),
        (
            TableKind::DeltaS,
            NamedTarget::S,
            [0, 8, 32, 384, 2560, 22528, 172032, 1409024],
        ),
    ];
    let m8 = md(8);
    for (kind, target, expected) in rows {
        let table = cmd_table(kind, None, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        for (row, want) in table.rows.iter().zip(expected) {
            ensure(row[1] == want.to_string(), || {
                format!("{} n={}: {}", kind.name(), row[0], row[1])
            })?;
        }
        for (size, want) in (3..=8).zip(expected) {
            let spec = SetSpec::new(size, target.matrix(m8))
                .unwrap()
                .with(2, ConstraintKind::Unit)
                .unwrap();
            let dp = dp_count(&spec).unwrap();
            ensure(dp == big(want), || {
                format!("dp {} n={size}: {dp} vs {want}", kind.name())
            })?;
        }
    }
    Ok("16/16 formula values, 12/12 dp values".into())
}

fn base_cases() -> Outcome {
    for m in 2..=4u32 {
        for sign in Sign::BOTH {
            let closed = formulas::w4_2m(m, sign).map_err(|e| e.to_string())?.value;
            let expected = match sign {
                Sign::Plus => big(u64::from(m + 2) << (m - 1)),
                Sign::Minus => big(1 << m),
            };
            let b = brute(&omega(4, 1 << m, sign));
            ensure(closed == expected && b == expected, || {
                format!(
                    "m={m} {}: formula {closed}, oracle {b}, expected {expected}",
                    sign.name()
                )
            })?;
        }
    }
    let m8 = md(8);
    for (x, want) in [(1, 20u64), (3, 8)] {
        let spec = SetSpec::new(5, NamedTarget::Id.matrix(m8))
            .unwrap()
            .with(2, ConstraintKind::Fixed(m8.residue(x)))
            .unwrap();
        let b = brute(&spec);
        ensure(b == big(want), || {
            format!("a2={x}: oracle {b}, expected {want}")
        })?;
    }
    Ok("size-4 counts for m=2..4 and both fixed-letter values".into())
}

fn recursion() -> Outcome {
    let grid = Grid {
        ms: Some(vec![2, 3]),
        sizes: Some((5..=8).collect()),
        ..Default::default()
    };
    let report = suite(Suite::Recursion, grid)?;
    Ok(format!("{} checks", report.checks.len()))
}

fn sandwich() -> Outcome {
    let mut checks = 0;
    for (m, size) in [(2u32, 6u32), (2, 8), (2, 10), (3, 6), (3, 8)] {
        for sign in Sign::BOTH {
            let (lo, hi) = formulas::w_even_bounds(size / 2, m, sign).map_err(|e| e.to_string())?;
            let count = dp_count(&omega(size as usize, 1 << m, sign)).unwrap();
            ensure(lo.value <= count && count <= hi.value, || {
                format!(
                    "m={m} n={size} {}: {count} not in [{}, {}]",
                    sign.name(),
                    lo.value,
                    hi.value
                )
            })?;
            checks += 1;
        }
    }
    Ok(format!("{checks}/10 counts inside their bounds"))
}

fn crt_criterion() -> Outcome {
    let start = Instant::now();
    let f = crt::split(12).map_err(|e| e.to_string())?;
    for size in 4..=7u32 {
        for sign in Sign::BOTH {
            let assembled = crt::assemble_count(
                size,
                &f,
                sign,
                PieceSource::Auto {
                    budget: DEFAULT_BUDGET,
                },
            )
            .map_err(|e| e.to_string())?
            .value
            .value;
            let dp = dp_count(&omega(size as usize, 12, sign)).unwrap();
            ensure(assembled == dp, || {
                format!("n={size} {}: {assembled} vs dp {dp}", sign.name())
            })?;
        }
    }
    within(start.elapsed(), 5, "N=12 dp")?;
    let table: [(u32, u64, u64); 8] = [
        (3, 24, 1),
        (5, 24, 800),
        (7, 24, 489216),
        (9, 24, 285491200),
        (3, 40, 1),
        (5, 40, 2080),
        (7, 40, 3499776),
        (9, 40, 5666652160),
    ];
    for (size, n, want) in table {
        let f = crt::split(n).map_err(|e| e.to_string())?;
        let a = crt::assemble_count(
            size,
            &f,
            Sign::Plus,
            PieceSource::Auto {
                budget: DEFAULT_BUDGET,
            },
        )
        .map_err(|e| e.to_string())?;
        ensure(a.value.value == big(want), || {
            format!("N={n} n={size}: {}", a.value.value)
        })?;
    }
    Ok("N=12 sizes 4..7 both signs; 8 table values at N=24, 40".into())
}

fn bijections() -> Outcome {
    let report = suite(Suite::Bijections, Grid::default())?;
    Ok(format!(
        "{} maps and cardinality checks",
        report.checks.len()
    ))
}

fn prime_fields() -> Outcome {
    let start = Instant::now();
    for p in [3u64, 5] {
        for size in 5..=7u32 {
            for sign in Sign::BOTH {
                let closed = formulas::u_count(size, p, sign)
                    .map_err(|e| e.to_string())?
                    .value;
                let b = brute(&omega(size as usize, p, sign));
                ensure(closed == b, || {
                    format!("p={p} n={size} {}: {closed} vs oracle {b}", sign.name())
                })?;
            }
        }
    }
    within(start.elapsed(), 60, "prime-field oracle")?;
    Ok(format!("12/12 in {} ms", start.elapsed().as_millis()))
}

fn exactness_grid() -> Result<usize, String> {
    let mut evaluated = 0;
    let mut run = |r: quiddity::Result<()>| match r {
        Ok(()) => {
            evaluated += 1;
            Ok(())
        }
        Err(e) => Err(e.to_string()),
    };
    for m in 2..=6u32 {
        for sign in Sign::BOTH {
            run(formulas::w4_2m(m, sign).map(drop))?;
            for n in 2..=20u32 {
                run(formulas::w_odd_2m(n, m, sign).map(drop))?;
            }
            for n in 3..=20u32 {
                run(formulas::w_even_bounds(n, m, sign).map(drop))?;
            }
        }
        for n in 5..=40u32 {
            for t in NamedTarget::ALL {
                run(formulas::delta_closed_form(n, m, t).map(drop))?;
            }
        }
    }
    for n in 3..=40u32 {
        for sign in Sign::BOTH {
            run(formulas::w4_ring4(n, sign).map(drop))?;
        }
    }
    for n in 2..=20u32 {
        run(formulas::w8_even(n).map(drop))?;
        for sign in Sign::BOTH {
            run(formulas::w8_odd(n, sign).map(drop))?;
        }
    }
    for q in [3u64, 5, 7, 9, 25, 27] {
        for n in 5..=40u32 {
            for sign in Sign::BOTH {
                run(formulas::u_count(n, q, sign).map(drop))?;
            }
        }
    }
    Ok(evaluated)
}

fn properties() -> Outcome {
    let totality = suite(Suite::Totality, Grid::default())?;
    for n in [8u64, 16, 24] {
        let total = dp_vector(md(n), &[ConstraintKind::Any; 6])
            .unwrap()
            .total()
            .unwrap();
        ensure(total == BigUint::from(n).pow(6), || {
            format!("total over Z/{n}Z")
        })?;
        for size in [5usize, 7] {
            let plus = dp_count(&omega(size, n, Sign::Plus)).unwrap();
            let minus = dp_count(&omega(size, n, Sign::Minus)).unwrap();
            ensure(plus == minus, || format!("sign symmetry N={n} n={size}"))?;
        }
    }
    let evaluated = exactness_grid()?;
    Ok(format!(
        "{} totality checks, {evaluated} exact formula evaluations",
        totality.checks.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("odd-size table over N = 8..40", odd_table),
        ("Z/8Z table, confirmed by dp and oracle", w8_table),
        ("unit-second-letter tables", delta_tables),
        ("size-4 and fixed-letter base cases", base_cases),
        ("unit-block recursion", recursion),
        ("even-size sandwich bounds", sandwich),
        ("coprime assembly", crt_criterion),
        ("bijection harness", bijections),
        ("prime-field closed forms", prime_fields),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(summary) => println!(
                "criterion {:>2} PASS  {name} ({secs:.2}s): {summary}",
                i + 1
            ),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
