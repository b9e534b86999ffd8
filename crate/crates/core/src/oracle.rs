//! Brute-force ground truth.
//!
//! Every count here comes from walking the candidate tuples themselves, either
//! one by one or through a meet-in-the-middle join on the midpoint product.
//! Nothing in this module consults the transfer-matrix counter or a formula.

use std::collections::HashMap;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modring::{Modulus, Residue};
use crate::sl2::{GroupTable, Mat2};

/// Default candidate budget.
pub const DEFAULT_BUDGET: u128 = 1 << 27;

/// Auto mode switches to meet-in-the-middle at this many free positions.
pub const AUTO_SPLIT_FREE_POSITIONS: usize = 6;

pub type Tuple = Vec<Residue>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintKind {
    Any,
    Unit,
    NonUnit,
    Fixed(Residue),
}

impl ConstraintKind {
    pub fn admits(&self, r: Residue) -> bool {
        match *self {
            ConstraintKind::Any => true,
            ConstraintKind::Unit => r.is_unit(),
            ConstraintKind::NonUnit => !r.is_unit(),
            ConstraintKind::Fixed(x) => x == r,
        }
    }

    pub fn alphabet(&self, modulus: Modulus) -> Vec<u32> {
        modulus
            .elements()
            .filter(|&r| self.admits(r))
            .map(Residue::value)
            .collect()
    }
}

/// A set of tuples `{(a_1..a_n) : M_n(a) = target, a_p satisfies constraint p}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSpec {
    target: Mat2,
    constraints: Vec<ConstraintKind>,
}

impl SetSpec {
    pub fn new(size: usize, target: Mat2) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidSpec("tuple size must be at least 1".into()));
        }
        if !target.is_special() {
            return Err(Error::InvalidSpec(format!("target {target} is not in SL2")));
        }
        Ok(SetSpec {
            target,
            constraints: vec![ConstraintKind::Any; size],
        })
    }

    /// Constrain the 1-based `position`. Each position may be constrained once.
    pub fn with(mut self, position: usize, kind: ConstraintKind) -> Result<Self> {
        if position == 0 || position > self.size() {
            return Err(Error::InvalidSpec(format!(
                "position {position} outside 1..={}",
                self.size()
            )));
        }
        if self.constraints[position - 1] != ConstraintKind::Any {
            return Err(Error::InvalidSpec(format!(
                "position {position} constrained twice"
            )));
        }
        if let ConstraintKind::Fixed(r) = kind {
            if r.modulus() != self.modulus() {
                return Err(Error::ModulusMismatch {
                    left: self.modulus().value(),
                    right: r.modulus().value(),
                });
            }
        }
        self.constraints[position - 1] = kind;
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.constraints.len()
    }

    pub fn target(&self) -> Mat2 {
        self.target
    }

    pub fn modulus(&self) -> Modulus {
        self.target.modulus()
    }

    pub fn constraints(&self) -> &[ConstraintKind] {
        &self.constraints
    }

    pub fn constraint(&self, position: usize) -> ConstraintKind {
        self.constraints[position - 1]
    }

    pub fn with_target(&self, target: Mat2) -> SetSpec {
        SetSpec {
            target,
            constraints: self.constraints.clone(),
        }
    }

    /// Membership test by direct multiplication.
    pub fn contains(&self, t: &[Residue]) -> bool {
        t.len() == self.size()
            && t.iter().all(|r| r.modulus() == self.modulus())
            && t.iter().zip(&self.constraints).all(|(&r, c)| c.admits(r))
            && crate::sl2::continuant_product(t).ok() == Some(self.target)
    }

    pub fn free_positions(&self) -> usize {
        self.constraints
            .iter()
            .filter(|c| !matches!(c, ConstraintKind::Fixed(_)))
            .count()
    }

    fn alphabets(&self) -> Vec<Vec<u32>> {
        let m = self.modulus();
        self.constraints.iter().map(|c| c.alphabet(m)).collect()
    }

    /// Number of candidate tuples a naive walk visits.
    pub fn candidates(&self) -> u128 {
        self.alphabets()
            .iter()
            .fold(1u128, |acc, a| acc.saturating_mul(a.len() as u128))
    }
}

fn check_budget(required: u128, budget: u128) -> Result<()> {
    if required > budget {
        Err(Error::BudgetExceeded { required, budget })
    } else {
        Ok(())
    }
}

/// Lexicographic walk over the product of per-position alphabets, keeping the
/// prefix products so that each step costs one matrix update.
struct Odometer {
    modulus: Modulus,
    alphabets: Vec<Vec<u32>>,
    digits: Vec<usize>,
    // prefix[k] is the product of the first k letters.
    prefix: Vec<Mat2>,
    exhausted: bool,
}

impl Odometer {
    fn new(modulus: Modulus, alphabets: Vec<Vec<u32>>) -> Self {
        let n = alphabets.len();
        let exhausted = alphabets.iter().any(Vec::is_empty);
        let mut od = Odometer {
            modulus,
            alphabets,
            digits: vec![0; n],
            prefix: vec![Mat2::identity(modulus); n + 1],
            exhausted,
        };
        if !od.exhausted {
            od.refresh_from(0);
        }
        od
    }

    fn refresh_from(&mut self, k: usize) {
        for i in k..self.digits.len() {
            let letter = self.alphabets[i][self.digits[i]];
            self.prefix[i + 1] = self.prefix[i].push_letter(letter);
        }
    }

    fn product(&self) -> Mat2 {
        *self.prefix.last().unwrap()
    }

    fn tuple(&self) -> Tuple {
        self.digits
            .iter()
            .zip(&self.alphabets)
            .map(|(&d, a)| self.modulus.residue(i64::from(a[d])))
            .collect()
    }

    fn advance(&mut self) {
        let mut i = self.digits.len();
        while i > 0 {
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.alphabets[i].len() {
                self.refresh_from(i);
                return;
            }
            self.digits[i] = 0;
        }
        self.exhausted = true;
    }
}

/// Stream of the members of a [`SetSpec`] in lexicographic order.
pub struct Enumeration {
    target: Mat2,
    odometer: Odometer,
}

impl Iterator for Enumeration {
    type Item = Tuple;

    fn next(&mut self) -> Option<Tuple> {
        while !self.odometer.exhausted {
            let hit = self.odometer.product() == self.target;
            let t = hit.then(|| self.odometer.tuple());
            self.odometer.advance();
            if t.is_some() {
                return t;
            }
        }
        None
    }
}

pub fn enumerate(spec: &SetSpec, budget: u128) -> Result<Enumeration> {
    spec.modulus().check_enumerable()?;
    check_budget(spec.candidates(), budget)?;
    Ok(Enumeration {
        target: spec.target(),
        odometer: Odometer::new(spec.modulus(), spec.alphabets()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    Naive,
    MeetInTheMiddle,
    Auto,
}

/// Count the members of `spec` by exhaustive search.
pub fn count(spec: &SetSpec, method: OracleMethod, budget: u128) -> Result<BigUint> {
    spec.modulus().check_enumerable()?;
    let split = match method {
        OracleMethod::Naive => false,
        OracleMethod::MeetInTheMiddle => spec.size() >= 2,
        OracleMethod::Auto => {
            spec.size() >= 2 && spec.free_positions() >= AUTO_SPLIT_FREE_POSITIONS
        }
    };
    if split {
        count_split(spec, spec.size() / 2, budget)
    } else {
        count_naive(spec, budget)
    }
}

/// Walk every candidate. The outermost position is spread across threads.
pub fn count_naive(spec: &SetSpec, budget: u128) -> Result<BigUint> {
    check_budget(spec.candidates(), budget)?;
    let modulus = spec.modulus();
    let target = spec.target();
    let alphabets = spec.alphabets();
    let total: u64 = alphabets[0]
        .par_iter()
        .map(|&first| {
            let mut ab = alphabets.clone();
            ab[0] = vec![first];
            let mut od = Odometer::new(modulus, ab);
            let mut hits = 0u64;
            while !od.exhausted {
                hits += u64::from(od.product() == target);
                od.advance();
            }
            hits
        })
        .sum();
    Ok(BigUint::from(total))
}

/// Meet-in-the-middle: with prefix `P` (positions `1..=split`) and suffix `Q`,
/// the tuple is a member iff `P = Q^-1 * target`. Prefix products are
/// tallied by group ordinal and joined against the suffix products.
pub fn count_split(spec: &SetSpec, split: usize, budget: u128) -> Result<BigUint> {
    let n = spec.size();
    if split == 0 || split >= n {
        return Err(Error::Precondition(format!(
            "split point {split} outside 1..{n}"
        )));
    }
    let modulus = spec.modulus();
    let alphabets = spec.alphabets();
    let space = |ab: &[Vec<u32>]| {
        ab.iter()
            .fold(1u128, |acc, a| acc.saturating_mul(a.len() as u128))
    };
    let (head, tail) = alphabets.split_at(split);
    check_budget(space(head).saturating_add(space(tail)), budget)?;
    if alphabets.iter().any(Vec::is_empty) {
        return Ok(BigUint::default());
    }

    let table = GroupTable::shared(modulus)?;
    let mut tally = vec![0u64; table.len()];
    let mut od = Odometer::new(modulus, head.to_vec());
    while !od.exhausted {
        let idx = table.index_of(&od.product()).expect("product lies in SL2");
        tally[idx.0 as usize] += 1;
        od.advance();
    }

    let target = spec.target();
    let mut od = Odometer::new(modulus, tail.to_vec());
    let mut total = BigUint::default();
    let mut batch = 0u64;
    while !od.exhausted {
        let need = od.product().sl2_inverse()? * target;
        if let Some(idx) = table.index_of(&need) {
            batch += tally[idx.0 as usize];
            if batch > u64::MAX / 2 {
                total += batch;
                batch = 0;
            }
        }
        od.advance();
    }
    total += batch;
    Ok(total)
}

/// Full distribution of products over all tuples admitted by `constraints`.
pub fn count_by_target(
    modulus: Modulus,
    constraints: &[ConstraintKind],
    budget: u128,
) -> Result<HashMap<Mat2, u64>> {
    modulus.check_enumerable()?;
    let alphabets: Vec<Vec<u32>> = constraints.iter().map(|c| c.alphabet(modulus)).collect();
    check_budget(
        alphabets
            .iter()
            .fold(1u128, |acc, a| acc.saturating_mul(a.len() as u128)),
        budget,
    )?;
    let mut out = HashMap::new();
    let mut od = Odometer::new(modulus, alphabets);
    while !od.exhausted {
        *out.entry(od.product()).or_insert(0) += 1;
        od.advance();
    }
    Ok(out)
}

/// `|{(x, y) non-units of Z/2^mZ : xy = 0}|` by enumeration.
pub fn count_zero_pairs(m: u32) -> Result<u64> {
    let md = two_power(m)?;
    let non_units = crate::modring::non_units_of(md);
    let mut hits = 0;
    for &x in &non_units {
        for &y in &non_units {
            hits += u64::from((x * y).is_zero());
        }
    }
    Ok(hits)
}

/// `psi(u, v, w) = ((vw - 1)(uv - 1) - 1) v^-1`.
pub fn psi(u: Residue, v: Residue, w: Residue) -> Result<Residue> {
    let one = u.modulus().one();
    let vinv = v.inverse()?;
    Ok(((v * w - one) * (u * v - one) - one) * vinv)
}

/// The fiber `T(m, x) = {(u, v, w) in U x U x Z/2^mZ : psi(u, v, w) = x}` in
/// lexicographic order.
pub fn psi_fiber(m: u32, x: Residue) -> Result<Vec<[Residue; 3]>> {
    let md = two_power(m)?;
    if x.modulus() != md {
        return Err(Error::ModulusMismatch {
            left: md.value(),
            right: x.modulus().value(),
        });
    }
    let units = crate::modring::units_of(md);
    let mut out = Vec::new();
    for &u in &units {
        for &v in &units {
            for w in md.elements() {
                if psi(u, v, w)? == x {
                    out.push([u, v, w]);
                }
            }
        }
    }
    Ok(out)
}

pub(crate) fn two_power(m: u32) -> Result<Modulus> {
    if m < 2 {
        return Err(Error::Precondition(format!(
            "exponent m must be >= 2, got {m}"
        )));
    }
    Modulus::power_of_two(m)
}
