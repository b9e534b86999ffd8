//! Counts over `Z/NZ` with `N = 2^m * p_1 * ... * p_r` assembled from counts
//! over the coprime pieces.

use std::fmt;

use num_bigint::BigUint;

use crate::counter::dp_count;
use crate::error::{Error, Result};
use crate::formulas::{
    crt_count, u_count, w4_2m, w4_ring4, w_odd_2m, CrtPiece, FormulaValue, Sign,
};
use crate::modring::{prime_factors, Modulus};
use crate::oracle::{self, OracleMethod, SetSpec};
use crate::sl2::{sl2_order, MAX_GROUP_ORDER};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Exponent `m >= 2` of the power of two, if `N` is even.
    pub two_part: Option<u32>,
    /// Distinct odd primes in increasing order.
    pub odd_primes: Vec<u64>,
}

impl Factorization {
    pub fn modulus(&self) -> u64 {
        let two = self.two_part.map_or(1, |m| 1u64 << m);
        two * self.odd_primes.iter().product::<u64>()
    }

    pub fn piece_moduli(&self) -> Vec<u64> {
        self.two_part
            .map(|m| 1u64 << m)
            .into_iter()
            .chain(self.odd_primes.iter().copied())
            .collect()
    }
}

/// Factor `N` as a power of two times a squarefree odd part.
///
/// `N = 2 * odd` is rejected: the two-adic counts are only available for
/// `m >= 2`.
pub fn split(n: u64) -> Result<Factorization> {
    if n < 2 {
        return Err(Error::InvalidModulus(n));
    }
    let mut out = Factorization {
        two_part: None,
        odd_primes: Vec::new(),
    };
    for (p, e) in prime_factors(n) {
        if p == 2 {
            if e == 1 {
                return Err(Error::UnsupportedCase(format!(
                    "{n} is divisible by 2 but not by 4"
                )));
            }
            out.two_part = Some(e);
        } else if e > 1 {
            return Err(Error::NonSquarefreeOddPart(n));
        } else {
            out.odd_primes.push(p);
        }
    }
    Ok(out)
}

/// Where piece counts may come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceSource {
    /// Closed forms where they apply, otherwise DP or the oracle.
    Auto { budget: u128 },
    /// Closed forms only; pieces outside their range are an error.
    FormulaOnly,
    /// Transfer-matrix DP for every piece.
    Dp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceOrigin {
    Formula(&'static str),
    Dp,
    Oracle,
}

impl fmt::Display for PieceOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PieceOrigin::Formula(id) => write!(f, "formula:{id}"),
            PieceOrigin::Dp => f.write_str("dp"),
            PieceOrigin::Oracle => f.write_str("oracle"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Assembly {
    pub value: FormulaValue,
    pub pieces: Vec<(CrtPiece, PieceOrigin)>,
}

fn two_adic_formula(size: u32, m: u32, sign: Sign) -> Option<Result<FormulaValue>> {
    if m == 2 && size >= 3 {
        Some(w4_ring4(size, sign))
    } else if size == 4 {
        Some(w4_2m(m, sign))
    } else if size >= 5 && size % 2 == 1 {
        Some(w_odd_2m((size - 1) / 2, m, sign))
    } else {
        None
    }
}

fn computed(
    size: u32,
    modulus: u64,
    sign: Sign,
    prefer_dp: bool,
    budget: u128,
) -> Result<(BigUint, PieceOrigin)> {
    let md = Modulus::new(modulus)?;
    let spec = SetSpec::new(size as usize, sign.target().matrix(md))?;
    if prefer_dp && sl2_order(modulus) <= MAX_GROUP_ORDER as u128 {
        Ok((dp_count(&spec)?, PieceOrigin::Dp))
    } else {
        Ok((
            oracle::count(&spec, OracleMethod::Auto, budget)?,
            PieceOrigin::Oracle,
        ))
    }
}

fn piece(
    size: u32,
    modulus: u64,
    sign: Sign,
    source: PieceSource,
) -> Result<(BigUint, PieceOrigin)> {
    let formula = if modulus.is_multiple_of(2) {
        two_adic_formula(size, modulus.trailing_zeros(), sign)
    } else if size > 4 {
        Some(u_count(size, modulus, sign))
    } else {
        None
    };
    match (source, formula) {
        (PieceSource::Dp, _) => computed(size, modulus, sign, true, 0),
        (_, Some(f)) => {
            let f = f?;
            Ok((f.value, PieceOrigin::Formula(f.formula_id)))
        }
        (PieceSource::FormulaOnly, None) => Err(Error::UnsupportedCase(format!(
            "no closed form for size {size} over Z/{modulus}Z"
        ))),
        // small odd-prime pieces go to the oracle, two-adic ones to DP
        (PieceSource::Auto { budget }, None) => {
            computed(size, modulus, sign, modulus.is_multiple_of(2), budget)
        }
    }
}

/// `|Ω_size^{±Id}|` over `Z/NZ` as a product of piece counts.
pub fn assemble_count(
    size: u32,
    factorization: &Factorization,
    sign: Sign,
    source: PieceSource,
) -> Result<Assembly> {
    let pieces = factorization
        .piece_moduli()
        .into_iter()
        .map(|q| {
            piece(size, q, sign, source)
                .map(|(count, origin)| (CrtPiece { modulus: q, count }, origin))
        })
        .collect::<Result<Vec<_>>>()?;
    let plain: Vec<CrtPiece> = pieces.iter().map(|(p, _)| p.clone()).collect();
    let value = crt_count(size, sign, &plain)?;
    Ok(Assembly { value, pieces })
}
