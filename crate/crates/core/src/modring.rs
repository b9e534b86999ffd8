//! Arithmetic in the residue rings Z/NZ.
//!
//! Residues are always stored as their least nonnegative representative, so
//! structural equality and hashing coincide with equality in the ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest modulus accepted by the enumeration and DP paths.
pub const ENUMERATION_CAP: u32 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus {
    n: u32,
    two_adic: Option<u32>,
}

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 || n > u64::from(u32::MAX) {
            return Err(Error::InvalidModulus(n));
        }
        let n = n as u32;
        let two_adic = (n.is_power_of_two() && n >= 4).then(|| n.trailing_zeros());
        Ok(Modulus { n, two_adic })
    }

    /// The ring Z/2^mZ.
    pub fn power_of_two(m: u32) -> Result<Self> {
        if m == 0 || m > 31 {
            return Err(Error::InvalidModulus(1u64 << m.min(63)));
        }
        Modulus::new(1u64 << m)
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.n
    }

    /// Exponent m when N = 2^m with m >= 2.
    #[inline]
    pub fn two_adic(self) -> Option<u32> {
        self.two_adic
    }

    pub fn residue(self, z: i64) -> Residue {
        Residue::new(z, self)
    }

    pub fn zero(self) -> Residue {
        Residue {
            value: 0,
            modulus: self,
        }
    }

    pub fn one(self) -> Residue {
        Residue {
            value: 1,
            modulus: self,
        }
    }

    /// Every residue in ascending order.
    pub fn elements(self) -> impl Iterator<Item = Residue> {
        (0..self.n).map(move |value| Residue {
            value,
            modulus: self,
        })
    }

    pub fn check_enumerable(self) -> Result<()> {
        if self.n > ENUMERATION_CAP {
            Err(Error::CapExceeded {
                modulus: self.n,
                cap: ENUMERATION_CAP,
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u32,
    modulus: Modulus,
}

impl Residue {
    pub fn new(z: i64, modulus: Modulus) -> Self {
        let value = z.rem_euclid(i64::from(modulus.n)) as u32;
        Residue { value, modulus }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_unit(self) -> bool {
        is_unit(self)
    }

    pub fn inverse(self) -> Result<Residue> {
        inverse(self)
    }

    fn same_ring(self, other: Residue) {
        assert_eq!(
            self.modulus, other.modulus,
            "residues from different rings: mod {} vs mod {}",
            self.modulus.n, other.modulus.n
        );
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.same_ring(rhs);
        let n = u64::from(self.modulus.n);
        let value = ((u64::from(self.value) + u64::from(rhs.value)) % n) as u32;
        Residue {
            value,
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self + (-rhs)
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.same_ring(rhs);
        let n = u64::from(self.modulus.n);
        let value = ((u64::from(self.value) * u64::from(rhs.value)) % n) as u32;
        Residue {
            value,
            modulus: self.modulus,
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        let value = if self.value == 0 {
            0
        } else {
            self.modulus.n - self.value
        };
        Residue {
            value,
            modulus: self.modulus,
        }
    }
}

pub fn is_unit(r: Residue) -> bool {
    r.value.gcd(&r.modulus.n) == 1
}

/// Multiplicative inverse by the extended Euclidean algorithm.
pub fn inverse(r: Residue) -> Result<Residue> {
    let n = i64::from(r.modulus.n);
    let eg = i64::from(r.value).extended_gcd(&n);
    if eg.gcd != 1 {
        return Err(Error::NotAUnit {
            value: r.value,
            modulus: r.modulus.n,
        });
    }
    Ok(Residue::new(eg.x, r.modulus))
}

/// Units of Z/NZ in ascending order.
pub fn units_of(modulus: Modulus) -> Vec<Residue> {
    modulus.elements().filter(|r| r.is_unit()).collect()
}

pub fn non_units_of(modulus: Modulus) -> Vec<Residue> {
    modulus.elements().filter(|r| !r.is_unit()).collect()
}

/// Euler's totient by trial division.
pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Prime factorization by trial division as (prime, exponent) pairs.
pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
