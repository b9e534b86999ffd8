//! Closed-form counts evaluated in exact arithmetic.
//!
//! Everything is computed over big rationals and converted back to an integer
//! at the end; the powers of two in these expressions can have negative
//! exponents at the bottom of their valid ranges (e.g. `n = m = 2`), and the
//! divisions by 3 only cancel once the whole expression is assembled.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::modring::prime_factors;
use crate::sl2::NamedTarget;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn epsilon(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn target(self) -> NamedTarget {
        match self {
            Sign::Plus => NamedTarget::Id,
            Sign::Minus => NamedTarget::NegId,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }

    pub fn parse(s: &str) -> Option<Sign> {
        match s {
            "plus" | "+" | "+1" | "1" => Some(Sign::Plus),
            "minus" | "-" | "-1" => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// An exact count tagged with the formula and parameters that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaValue {
    pub value: BigUint,
    pub formula_id: &'static str,
    pub params: Vec<(&'static str, String)>,
}

impl FormulaValue {
    pub fn new(formula_id: &'static str, value: BigUint) -> Self {
        FormulaValue {
            value,
            formula_id,
            params: Vec::new(),
        }
    }

    pub fn param(mut self, name: &'static str, v: impl fmt::Display) -> Self {
        self.params.push((name, v.to_string()));
        self
    }
}

impl fmt::Display for FormulaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        write!(
            f,
            "{}({}) = {}",
            self.formula_id,
            params.join(", "),
            self.value
        )
    }
}

fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn big_pow(base: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

fn sign_pow(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Demand a nonnegative integer; anything else means the algebra is wrong.
fn integral(r: BigRational, formula: &str) -> Result<BigUint> {
    if !r.is_integer() || r.is_negative() {
        return Err(Error::InexactResult {
            formula: formula.to_string(),
        });
    }
    Ok(r.to_integer().to_biguint().expect("nonnegative"))
}

fn exact_div(num: BigInt, den: BigInt, what: &str) -> Result<BigInt> {
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::InexactDivision(what.to_string()));
    }
    Ok(q)
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}

/// `[m]_k = (k^m - 1) / (k - 1)`.
pub fn gauss_bracket(m: u32, k: u64) -> Result<BigUint> {
    require(m >= 1 && k >= 2, || {
        format!("[m]_k needs m >= 1 and k >= 2, got m={m}, k={k}")
    })?;
    let q = exact_div(big_pow(k, m) - 1, BigInt::from(k - 1), "gauss_bracket")?;
    Ok(q.to_biguint().expect("nonnegative"))
}

/// `binom(m, 2)_k = (k^m - 1)(k^(m-1) - 1) / ((k - 1)(k^2 - 1))`.
pub fn gauss_binom2(m: u32, k: u64) -> Result<BigUint> {
    require(m >= 1 && k >= 2, || {
        format!("binom(m,2)_k needs m >= 1 and k >= 2, got m={m}, k={k}")
    })?;
    let num = (big_pow(k, m) - 1) * (big_pow(k, m - 1) - 1);
    let den = BigInt::from(k - 1) * (big_pow(k, 2) - 1);
    let q = exact_div(num, den, "gauss_binom2")?;
    Ok(q.to_biguint().expect("nonnegative"))
}

/// The prime `p` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power_base(q: u64) -> Option<u64> {
    match prime_factors(q).as_slice() {
        [(p, _)] => Some(*p),
        _ => None,
    }
}

/// Number of solutions of `M_n = ±Id` over the finite field with `q` elements.
pub fn u_count(n: u32, q: u64, sign: Sign) -> Result<FormulaValue> {
    require(n > 4, || format!("field counts need n > 4, got {n}"))?;
    let p = prime_power_base(q)
        .ok_or_else(|| Error::Precondition(format!("{q} is not a prime power")))?;
    if sign == Sign::Plus && p == 2 {
        return Err(Error::UnsupportedCase(format!(
            "no closed form for the +Id count in characteristic 2 (q = {q})"
        )));
    }
    let id = match sign {
        Sign::Plus => "u_plus",
        Sign::Minus => "u_minus",
    };
    let value = if n % 2 == 1 {
        gauss_bracket((n - 1) / 2, q * q)?
    } else {
        let half = n / 2;
        let base = BigUint::from(q - 1) * gauss_binom2(half, q)?;
        let extra = num_traits::pow(BigUint::from(q), (half - 1) as usize);
        let with_extra = match (sign, p == 2, half.is_multiple_of(2)) {
            (Sign::Minus, true, _) => true,
            (Sign::Minus, false, even) => !even,
            (Sign::Plus, false, even) => even,
            (Sign::Plus, true, _) => unreachable!(),
        };
        if with_extra {
            base + extra
        } else {
            base
        }
    };
    Ok(FormulaValue::new(id, value).param("n", n).param("q", q))
}

/// Solutions over Z/4Z, valid for `n >= 3`.
pub fn w4_ring4(n: u32, sign: Sign) -> Result<FormulaValue> {
    require(n >= 3, || format!("Z/4Z counts need n >= 3, got {n}"))?;
    let n = i64::from(n);
    let lead = pow2(2 * (n - 2));
    let high = (lead.clone() + int(4) * pow2(n - 3)) / int(3);
    let low = (lead.clone() - pow2(n - 2)) / int(3);
    let r = if n % 2 == 1 {
        (lead - pow2(n - 3)) / int(3)
    } else {
        let half_even = (n / 2) % 2 == 0;
        match (sign, half_even) {
            (Sign::Plus, true) | (Sign::Minus, false) => high,
            (Sign::Plus, false) | (Sign::Minus, true) => low,
        }
    };
    let value = integral(r, "w4_ring4")?;
    Ok(FormulaValue::new("w4_ring4", value)
        .param("n", n)
        .param("sign", sign.name()))
}

/// Count of size `2n + 1` solutions over Z/2^mZ (either sign), `n >= 2`.
pub fn w_odd_2m(n_half: u32, m: u32, sign: Sign) -> Result<FormulaValue> {
    require(n_half >= 2 && m >= 2, || {
        format!("odd-size counts need n >= 2 and m >= 2, got n={n_half}, m={m}")
    })?;
    let (n, m2) = (i64::from(n_half), i64::from(m));
    let r = pow2(2 * m2 * n - 2 * n - 2 * m2 - 1) * (pow2(2 * n + 3) - int(8)) / int(3);
    let value = integral(r, "w_odd_2m")?;
    Ok(FormulaValue::new("w_odd_2m", value)
        .param("size", 2 * n_half + 1)
        .param("m", m)
        .param("sign", sign.name()))
}

fn delta_target_class(target: NamedTarget) -> bool {
    // true for ±S, false for ±Id and ±T
    matches!(target, NamedTarget::S | NamedTarget::NegS)
}

/// `|Δ_n^B(m)|` for `n > 4` and `B` one of `±Id`, `±S`, `±T`.
pub fn delta_closed_form(n: u32, m: u32, target: NamedTarget) -> Result<FormulaValue> {
    require(n > 4 && m >= 2, || {
        format!("delta closed form needs n > 4 and m >= 2, got n={n}, m={m}")
    })?;
    let (ni, mi) = (i64::from(n), i64::from(m));
    let r = if delta_target_class(target) {
        pow2(mi * ni - ni - 3 * mi + 1) * (pow2(ni) + int(8 * sign_pow(ni))) / int(3)
    } else {
        pow2(mi * ni - ni - 3 * mi) * (pow2(ni + 1) + int(8 * sign_pow(ni + 1))) / int(3)
    };
    let value = integral(r, "delta_closed_form")?;
    Ok(FormulaValue::new("delta_closed_form", value)
        .param("n", n)
        .param("m", m)
        .param("target", target.name()))
}

/// Base values `|Δ_3|` and `|Δ_4|`.
pub fn delta_base(n: u32, m: u32, target: NamedTarget) -> Result<FormulaValue> {
    require((n == 3 || n == 4) && m >= 2, || {
        format!("delta base needs n in {{3, 4}} and m >= 2, got n={n}, m={m}")
    })?;
    let s_class = delta_target_class(target);
    let value = match (n, s_class) {
        (3, false) => BigUint::one(),
        (3, true) => BigUint::zero(),
        (4, false) => BigUint::one() << (m - 1),
        (4, true) => BigUint::one() << m,
        _ => unreachable!(),
    };
    Ok(FormulaValue::new("delta_base", value)
        .param("n", n)
        .param("m", m)
        .param("target", target.name()))
}

/// `|Δ_2^{±Id}(m)| = 0`: `M_2(a, b) = [[ab - 1, -b], [a, -1]]` is `±Id` only at
/// `a = b = 0`, where `a_2 = 0` is not a unit.
pub const DELTA_TWO: u32 = 0;

/// `|Δ_n^B(m)|` for any `n >= 2` using the base cases below the closed form.
pub fn delta_any(n: u32, m: u32, target: NamedTarget) -> Result<BigUint> {
    match n {
        2 if matches!(target, NamedTarget::Id | NamedTarget::NegId) => Ok(BigUint::from(DELTA_TWO)),
        3 | 4 => Ok(delta_base(n, m, target)?.value),
        n if n > 4 => Ok(delta_closed_form(n, m, target)?.value),
        _ => Err(Error::Precondition(format!(
            "no delta value for n={n}, target {}",
            target.name()
        ))),
    }
}

/// `2^(m-1) * prev + 2^(2m-1) * prev2`.
pub fn delta_recursion(prev: &BigUint, prev2: &BigUint, m: u32) -> Result<FormulaValue> {
    require(m >= 2, || format!("m must be >= 2, got {m}"))?;
    let value = (prev << (m - 1)) + (prev2 << (2 * m - 1));
    Ok(FormulaValue::new("delta_recursion", value)
        .param("prev", prev)
        .param("prev2", prev2)
        .param("m", m))
}

/// Size-4 counts over Z/2^mZ.
pub fn w4_2m(m: u32, sign: Sign) -> Result<FormulaValue> {
    require(m >= 2, || format!("m must be >= 2, got {m}"))?;
    let value = match sign {
        Sign::Plus => BigUint::from(m + 2) << (m - 1),
        Sign::Minus => BigUint::one() << m,
    };
    Ok(FormulaValue::new("w4_2m", value)
        .param("m", m)
        .param("sign", sign.name()))
}

/// Lower and upper bounds for `|Ω_2n^ε(m)|`, `n >= 3`.
pub fn w_even_bounds(n_half: u32, m: u32, sign: Sign) -> Result<(FormulaValue, FormulaValue)> {
    require(n_half >= 3 && m >= 2, || {
        format!("even-size bounds need n >= 3 and m >= 2, got n={n_half}, m={m}")
    })?;
    let t = sign.target();
    let size = 2 * n_half;
    let d_2n = delta_any(size, m, t)?;
    let d_odd = delta_any(size - 1, m, t)?;
    let d_tail = delta_any(size - 4, m, t)?;
    let units = BigUint::one() << (m - 1);
    let lower = &d_2n + &units * &d_odd + BigUint::from(m) * &units * &d_tail;
    let upper = &d_2n + &units * &d_odd + (BigUint::one() << (2 * m - 2)) * &d_odd;
    let tag = |id, v| {
        FormulaValue::new(id, v)
            .param("size", size)
            .param("m", m)
            .param("sign", sign.name())
    };
    Ok((tag("w_even_lower", lower), tag("w_even_upper", upper)))
}

/// Total (both signs) size-`2n` count over Z/8Z, `n >= 2`.
pub fn w8_even(n_half: u32) -> Result<FormulaValue> {
    require(n_half >= 2, || format!("n must be >= 2, got {n_half}"))?;
    let n = i64::from(n_half);
    let r = int(28) * pow2(3 * (n - 2))
        + (pow2(4 * n - 5) - pow2(3 * n - 3) + pow2(6 * n - 6) - pow2(3 * n)) / int(3);
    let value = integral(r, "w8_even")?;
    Ok(FormulaValue::new("w8_even", value).param("size", 2 * n_half))
}

/// Size-`2n + 1` count over Z/8Z for one sign, `n >= 2`.
pub fn w8_odd(n_half: u32, sign: Sign) -> Result<FormulaValue> {
    require(n_half >= 2, || format!("n must be >= 2, got {n_half}"))?;
    let n = i64::from(n_half);
    let r = pow2(6 * n - 2 * n - 7) * (pow2(2 * n + 3) - int(8)) / int(3);
    let value = integral(r, "w8_odd")?;
    Ok(FormulaValue::new("w8_odd", value)
        .param("size", 2 * n_half + 1)
        .param("sign", sign.name()))
}

/// `m * 2^(m-1)`.
pub fn zero_pair_count(m: u32) -> Result<FormulaValue> {
    require(m >= 2, || format!("m must be >= 2, got {m}"))?;
    Ok(FormulaValue::new("zero_pair_count", BigUint::from(m) << (m - 1)).param("m", m))
}

/// One coprime factor of a modulus together with the count over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtPiece {
    pub modulus: u64,
    pub count: BigUint,
}

/// Product of per-piece counts for `N = 2^m * p_1 * ... * p_r`.
///
/// Pieces must be one power of two (optional) and distinct odd primes.
pub fn crt_count(size: u32, sign: Sign, pieces: &[CrtPiece]) -> Result<FormulaValue> {
    let mut seen_primes: Vec<u64> = Vec::new();
    let mut two_parts = 0;
    for piece in pieces {
        let factors = prime_factors(piece.modulus);
        match factors.as_slice() {
            [(2, _)] => two_parts += 1,
            [(p, 1)] => {
                if seen_primes.contains(p) {
                    return Err(Error::NonSquarefree(*p));
                }
                seen_primes.push(*p);
            }
            [(p, _)] => return Err(Error::NonSquarefree(*p)),
            _ => {
                return Err(Error::Precondition(format!(
                    "CRT piece {} is neither a power of two nor an odd prime",
                    piece.modulus
                )))
            }
        }
    }
    if two_parts > 1 {
        return Err(Error::NonSquarefree(2));
    }
    let modulus: u64 = pieces.iter().map(|p| p.modulus).product();
    let value = pieces.iter().fold(BigUint::one(), |acc, p| acc * &p.count);
    Ok(FormulaValue::new("crt_count", value)
        .param("size", size)
        .param("modulus", modulus)
        .param("sign", sign.name()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: Result<FormulaValue>) -> u64 {
        u64::try_from(x.unwrap().value).unwrap()
    }

    fn b(x: u64) -> BigUint {
        BigUint::from(x)
    }

    /// Gaussian binomial via the q-Pascal recurrence
    /// `[n, k] = [n-1, k-1] + q^k [n-1, k]`.
    fn q_pascal(n: u32, k: u32, q: u64) -> u64 {
        if k == 0 || k == n {
            return 1;
        }
        if k > n {
            return 0;
        }
        q_pascal(n - 1, k - 1, q) + q.pow(k) * q_pascal(n - 1, k, q)
    }

    #[test]
    fn brackets() {
        for k in 2..10 {
            assert_eq!(gauss_bracket(1, k).unwrap(), b(1));
        }
        assert_eq!(gauss_bracket(3, 2).unwrap(), b(7));
        assert_eq!(gauss_bracket(2, 9).unwrap(), b(10));
        assert!(gauss_bracket(0, 3).is_err());
        assert!(gauss_bracket(2, 1).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(gauss_binom2(1, 5).unwrap(), b(0));
        assert_eq!(gauss_binom2(2, 2).unwrap(), b(1));
        assert_eq!(gauss_binom2(3, 3).unwrap(), b(13));
        for m in 1..9 {
            for k in 2..8 {
                assert_eq!(
                    gauss_binom2(m, k).unwrap(),
                    b(q_pascal(m, 2, k)),
                    "m={m} k={k}"
                );
            }
        }
    }

    #[test]
    fn field_counts() {
        assert_eq!(v(u_count(5, 3, Sign::Minus)), 10);
        assert_eq!(v(u_count(6, 3, Sign::Minus)), 35);
        assert_eq!(v(u_count(6, 3, Sign::Plus)), 26);
        assert_eq!(v(u_count(5, 5, Sign::Plus)), 26);
        assert_eq!(v(u_count(7, 3, Sign::Plus)), 91);
        assert_eq!(v(u_count(9, 5, Sign::Plus)), 16276);
        assert!(matches!(
            u_count(5, 4, Sign::Plus),
            Err(Error::UnsupportedCase(_))
        ));
        assert!(u_count(5, 4, Sign::Minus).is_ok());
        assert!(u_count(4, 3, Sign::Minus).is_err());
        assert!(u_count(5, 6, Sign::Minus).is_err());
    }

    #[test]
    fn field_counts_characteristic_two() {
        // Over F_2 the signs coincide; n = 6, half = 3: (2-1)*binom(3,2)_2 + 2^2 = 7 + 4.
        assert_eq!(v(u_count(6, 2, Sign::Minus)), 11);
        assert_eq!(v(u_count(5, 2, Sign::Minus)), 5);
    }

    #[test]
    fn ring4() {
        assert_eq!(v(w4_ring4(5, Sign::Plus)), 20);
        assert_eq!(v(w4_ring4(6, Sign::Plus)), 80);
        assert_eq!(v(w4_ring4(6, Sign::Minus)), 96);
        assert_eq!(v(w4_ring4(3, Sign::Minus)), 1);
        assert_eq!(v(w4_ring4(4, Sign::Plus)), 8);
        assert_eq!(v(w4_ring4(4, Sign::Minus)), 4);
        assert!(w4_ring4(2, Sign::Plus).is_err());
    }

    #[test]
    fn odd_sizes() {
        assert_eq!(v(w_odd_2m(2, 3, Sign::Plus)), 80);
        assert_eq!(v(w_odd_2m(4, 3, Sign::Plus)), 348160);
        assert_eq!(v(w_odd_2m(2, 2, Sign::Plus)), 20);
        assert_eq!(v(w8_odd(2, Sign::Plus)), 80);
        assert_eq!(v(w8_odd(3, Sign::Plus)), 5376);
        assert_eq!(v(w8_odd(3, Sign::Minus)), 5376);
        assert!(w_odd_2m(1, 3, Sign::Plus).is_err());
    }

    #[test]
    fn deltas() {
        assert_eq!(v(delta_closed_form(7, 3, NamedTarget::Id)), 2816);
        assert_eq!(v(delta_closed_form(6, 3, NamedTarget::S)), 384);
        assert_eq!(v(delta_closed_form(10, 3, NamedTarget::S)), 1409024);
        assert_eq!(v(delta_base(4, 3, NamedTarget::Id)), 4);
        assert_eq!(v(delta_base(3, 3, NamedTarget::S)), 0);
        assert_eq!(v(delta_base(4, 2, NamedTarget::S)), 4);
        assert!(delta_closed_form(4, 3, NamedTarget::Id).is_err());
        assert!(delta_base(5, 3, NamedTarget::Id).is_err());
    }

    #[test]
    fn recursion_examples() {
        assert_eq!(v(delta_recursion(&b(48), &b(4), 3)), 320);
        assert_eq!(v(delta_recursion(&b(0), &b(0), 5)), 0);
        assert_eq!(v(delta_recursion(&b(2816), &b(320), 3)), 21504);
    }

    #[test]
    fn closed_form_satisfies_recursion() {
        for m in 2..=6 {
            for t in NamedTarget::ALL {
                for n in 7..=40 {
                    let d = |k| delta_closed_form(k, m, t).unwrap().value;
                    let rec = delta_recursion(&d(n - 1), &d(n - 2), m).unwrap().value;
                    assert_eq!(d(n), rec, "m={m} n={n} {t:?}");
                }
                // the recursion also links the closed form to the base values
                let d5 = delta_closed_form(5, m, t).unwrap().value;
                let d6 = delta_closed_form(6, m, t).unwrap().value;
                let d4 = delta_base(4, m, t).unwrap().value;
                let d3 = delta_base(3, m, t).unwrap().value;
                assert_eq!(d5, delta_recursion(&d4, &d3, m).unwrap().value);
                assert_eq!(d6, delta_recursion(&d5, &d4, m).unwrap().value);
            }
        }
    }

    #[test]
    fn size_four() {
        assert_eq!(v(w4_2m(3, Sign::Plus)), 20);
        assert_eq!(v(w4_2m(3, Sign::Minus)), 8);
        assert_eq!(v(w4_2m(2, Sign::Plus)), 8);
        assert_eq!(v(w4_2m(2, Sign::Minus)), 4);
    }

    #[test]
    fn even_bounds() {
        for s in Sign::BOTH {
            let (lo, hi) = w_even_bounds(3, 3, s).unwrap();
            assert_eq!(lo.value, b(512));
            assert_eq!(hi.value, b(1280));
        }
        assert!(w_even_bounds(2, 3, Sign::Plus).is_err());
    }

    #[test]
    fn z8_even() {
        assert_eq!(v(w8_even(2)), 28);
        assert_eq!(v(w8_even(3)), 1440);
        assert_eq!(v(w8_even(5)), 5605376);
        assert!(w8_even(1).is_err());
    }

    #[test]
    fn zero_pairs() {
        assert_eq!(v(zero_pair_count(2)), 4);
        assert_eq!(v(zero_pair_count(3)), 12);
        assert_eq!(v(zero_pair_count(4)), 32);
    }

    #[test]
    fn crt_products() {
        let piece = |modulus, count| CrtPiece {
            modulus,
            count: b(count),
        };
        assert_eq!(
            v(crt_count(5, Sign::Plus, &[piece(8, 80), piece(3, 10)])),
            800
        );
        assert_eq!(
            v(crt_count(5, Sign::Plus, &[piece(8, 80), piece(5, 26)])),
            2080
        );
        assert_eq!(
            v(crt_count(7, Sign::Plus, &[piece(8, 5376), piece(3, 91)])),
            489216
        );
        assert_eq!(
            crt_count(5, Sign::Plus, &[piece(3, 10), piece(3, 10)]),
            Err(Error::NonSquarefree(3))
        );
        assert_eq!(
            crt_count(5, Sign::Plus, &[piece(9, 1)]),
            Err(Error::NonSquarefree(3))
        );
    }

    #[test]
    fn exactness_over_the_grid() {
        for m in 2..=6 {
            for n in 2..=20 {
                for s in Sign::BOTH {
                    w_odd_2m(n, m, s).unwrap();
                }
                w8_even(n).unwrap();
                w8_odd(n, Sign::Plus).unwrap();
            }
            for n in 5..=40 {
                for t in NamedTarget::ALL {
                    delta_closed_form(n, m, t).unwrap();
                }
            }
            for n in 3..=20 {
                for s in Sign::BOTH {
                    let (lo, hi) = w_even_bounds(n, m, s).unwrap();
                    assert!(lo.value <= hi.value);
                }
            }
        }
    }

    #[test]
    fn sign_symmetry_and_continuity() {
        for m in 2..=6 {
            for n in 2..=20 {
                assert_eq!(
                    w_odd_2m(n, m, Sign::Plus).unwrap().value,
                    w_odd_2m(n, m, Sign::Minus).unwrap().value
                );
            }
        }
        for size in (5..=21).step_by(2) {
            let via_2m = w_odd_2m((size - 1) / 2, 2, Sign::Plus).unwrap().value;
            assert_eq!(via_2m, w4_ring4(size, Sign::Plus).unwrap().value);
            assert_eq!(via_2m, w4_ring4(size, Sign::Minus).unwrap().value);
        }
        for n in 2..=20 {
            assert_eq!(
                w8_odd(n, Sign::Plus).unwrap().value,
                w_odd_2m(n, 3, Sign::Plus).unwrap().value
            );
        }
    }
}
