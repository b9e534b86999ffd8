//! Bijections and reductions between solution sets, and a harness that checks
//! a forward/backward pair pointwise on enumerated domains.
//!
//! Positions in this module are 1-based, matching the `a_1, ..., a_n` naming.
//! The reductions act at fixed positions; nothing here assumes that solution
//! sets are invariant under cyclic rotation.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::modring::{Modulus, Residue};
use crate::oracle::{self, psi, ConstraintKind, SetSpec, Tuple};
use crate::sl2::{continuant_product, Mat2};

fn violation(msg: impl Into<String>) -> Error {
    Error::DomainViolation(msg.into())
}

fn show(t: &[Residue]) -> String {
    let vals: Vec<String> = t.iter().map(|r| r.value().to_string()).collect();
    format!("({})", vals.join(","))
}

fn check_interior(t: &[Residue], pos: usize) -> Result<()> {
    if pos < 2 || pos + 1 > t.len() {
        return Err(violation(format!(
            "position {pos} is not interior to a tuple of size {}",
            t.len()
        )));
    }
    Ok(())
}

fn check_value(t: &[Residue], pos: usize, want: Residue, what: &str) -> Result<()> {
    if t[pos - 1] != want {
        return Err(violation(format!(
            "{what}: a_{pos} = {} but {} is required in {}",
            t[pos - 1],
            want,
            show(t)
        )));
    }
    Ok(())
}

/// `(a_1, ..., a_n) -> (-a_1, ..., -a_n)` without any domain check.
pub fn negate(t: &[Residue]) -> Tuple {
    t.iter().map(|&r| -r).collect()
}

/// Negation from the `+Id` solutions of odd size onto the `-Id` solutions.
pub fn negate_map(t: &[Residue]) -> Result<Tuple> {
    if t.len().is_multiple_of(2) {
        return Err(violation(format!(
            "negation needs odd size, got {}",
            t.len()
        )));
    }
    let m = continuant_product(t)?;
    if m != Mat2::identity(m.modulus()) {
        return Err(violation(format!("M_n{} = {m}, not Id", show(t))));
    }
    Ok(negate(t))
}

/// `(λ a_1, λ^-1 a_2, λ a_3, ...)` without any domain check.
pub fn scale_alternating(t: &[Residue], lambda: Residue) -> Result<Tuple> {
    let inv = lambda.inverse()?;
    Ok(t.iter()
        .enumerate()
        .map(|(i, &a)| if i % 2 == 0 { lambda * a } else { inv * a })
        .collect())
}

/// Alternating scaling of an even-size `±Id` solution.
pub fn scale_map(t: &[Residue], lambda: Residue) -> Result<Tuple> {
    if t.len() < 4 || t.len() % 2 == 1 {
        return Err(violation(format!(
            "scaling needs even size >= 4, got {}",
            t.len()
        )));
    }
    let m = continuant_product(t)?;
    let id = Mat2::identity(m.modulus());
    if m != id && m != -id {
        return Err(violation(format!("M_n{} = {m}, not ±Id", show(t))));
    }
    scale_alternating(t, lambda)
}

/// Drop an interior letter equal to `marker` and shift both neighbours by
/// `-marker`: `(.., a, 1, b, ..) -> (.., a - 1, b - 1, ..)`,
/// `(.., a, -1, b, ..) -> (.., a + 1, b + 1, ..)`.
fn contract(t: &[Residue], pos: usize, marker: Residue) -> Result<Tuple> {
    check_interior(t, pos)?;
    check_value(t, pos, marker, "contraction")?;
    let mut out: Tuple = Vec::with_capacity(t.len() - 1);
    out.extend_from_slice(&t[..pos - 2]);
    out.push(t[pos - 2] - marker);
    out.push(t[pos] - marker);
    out.extend_from_slice(&t[pos + 1..]);
    Ok(out)
}

/// Inverse of [`contract`]: the result has `marker` at `pos`.
fn expand(s: &[Residue], pos: usize, marker: Residue) -> Result<Tuple> {
    if pos < 2 || pos > s.len() {
        return Err(violation(format!(
            "cannot insert at position {pos} into a tuple of size {}",
            s.len()
        )));
    }
    let mut out: Tuple = Vec::with_capacity(s.len() + 1);
    out.extend_from_slice(&s[..pos - 2]);
    out.push(s[pos - 2] + marker);
    out.push(marker);
    out.push(s[pos - 1] + marker);
    out.extend_from_slice(&s[pos..]);
    Ok(out)
}

/// `M_3(a, 1, b) = M_2(a - 1, b - 1)` applied at interior position `pos`.
pub fn reduce_one(t: &[Residue], pos: usize) -> Result<Tuple> {
    let one = first_modulus(t)?.one();
    contract(t, pos, one)
}

pub fn expand_one(s: &[Residue], pos: usize) -> Result<Tuple> {
    let one = first_modulus(s)?.one();
    expand(s, pos, one)
}

/// `M_3(a, -1, b) = -M_2(a + 1, b + 1)` applied at interior position `pos`.
pub fn reduce_minus_one(t: &[Residue], pos: usize) -> Result<Tuple> {
    let minus = -first_modulus(t)?.one();
    contract(t, pos, minus)
}

pub fn expand_minus_one(s: &[Residue], pos: usize) -> Result<Tuple> {
    let minus = -first_modulus(s)?.one();
    expand(s, pos, minus)
}

fn first_modulus(t: &[Residue]) -> Result<Modulus> {
    t.first()
        .map(|r| r.modulus())
        .ok_or_else(|| violation("empty tuple"))
}

/// Collapse positions 2 and 3 (`u`, `v` with `uv - 1` a unit):
/// `(a, u, v, b, ..) -> (a + (1 - v) z^-1, z, b + (1 - u) z^-1, ..)`, `z = uv - 1`.
pub fn reduce_pair(t: &[Residue]) -> Result<Tuple> {
    if t.len() < 4 {
        return Err(violation(format!(
            "pair reduction needs size >= 4, got {}",
            t.len()
        )));
    }
    let one = t[0].modulus().one();
    let (a, u, v, b) = (t[0], t[1], t[2], t[3]);
    let z = u * v - one;
    let zi = z.inverse()?;
    let mut out = vec![a + (one - v) * zi, z, b + (one - u) * zi];
    out.extend_from_slice(&t[4..]);
    Ok(out)
}

/// Inverse of [`reduce_pair`] for prescribed `u`, `v`; requires `a_2 = uv - 1`.
pub fn expand_pair(s: &[Residue], u: Residue, v: Residue) -> Result<Tuple> {
    if s.len() < 3 {
        return Err(violation(format!(
            "pair expansion needs size >= 3, got {}",
            s.len()
        )));
    }
    let one = s[0].modulus().one();
    let z = u * v - one;
    check_value(s, 2, z, "pair expansion")?;
    let zi = z.inverse()?;
    let mut out = vec![s[0] - (one - v) * zi, u, v, s[2] - (one - u) * zi];
    out.extend_from_slice(&s[3..]);
    Ok(out)
}

/// Inverse of [`reduce_pair`] when only the unit `u` is prescribed: the third
/// letter is recovered as `v = u^-1 (a_2 + 1)`.
pub fn expand_pair_unit(s: &[Residue], u: Residue) -> Result<Tuple> {
    if s.len() < 3 {
        return Err(violation(format!(
            "pair expansion needs size >= 3, got {}",
            s.len()
        )));
    }
    let v = u.inverse()? * (s[1] + s[1].modulus().one());
    expand_pair(s, u, v)
}

/// Collapse positions 2..4 (`u`, `v`, `w`) into the single letter
/// `x = psi(u, v, w)`:
/// `(a, u, v, w, c, ..) -> (a - (vw - 2) x^-1, x, c - (uv - 2) x^-1, ..)`.
pub fn reduce_quintuple(t: &[Residue]) -> Result<Tuple> {
    if t.len() < 5 {
        return Err(violation(format!(
            "quintuple reduction needs size >= 5, got {}",
            t.len()
        )));
    }
    let md = t[0].modulus();
    let two = md.residue(2);
    let (a, u, v, w, c) = (t[0], t[1], t[2], t[3], t[4]);
    let x = psi(u, v, w)?;
    let xi = x.inverse()?;
    let mut out = vec![a - (v * w - two) * xi, x, c - (u * v - two) * xi];
    out.extend_from_slice(&t[5..]);
    Ok(out)
}

/// Inverse of [`reduce_quintuple`]; requires `a_2 = psi(u, v, w)`.
pub fn expand_quintuple(s: &[Residue], u: Residue, v: Residue, w: Residue) -> Result<Tuple> {
    if s.len() < 3 {
        return Err(violation(format!(
            "quintuple expansion needs size >= 3, got {}",
            s.len()
        )));
    }
    let two = s[0].modulus().residue(2);
    let x = psi(u, v, w)?;
    check_value(s, 2, x, "quintuple expansion")?;
    let xi = x.inverse()?;
    let mut out = vec![
        s[0] + (v * w - two) * xi,
        u,
        v,
        w,
        s[2] + (u * v - two) * xi,
    ];
    out.extend_from_slice(&s[3..]);
    Ok(out)
}

/// Odd-size solution to even-size solution with `a_2 = u`:
/// `(a_1, ..) -> ((a_1 + 1) u^-1, u, (a_2 + 1) u^-1, a_3 u, a_4 u^-1, ..., a_{2n-1} u)`.
pub fn unit_insert(t: &[Residue], u: Residue) -> Result<Tuple> {
    if t.len() < 3 || t.len().is_multiple_of(2) {
        return Err(violation(format!(
            "unit insertion needs odd size >= 3, got {}",
            t.len()
        )));
    }
    let one = u.modulus().one();
    let ui = u.inverse()?;
    let mut out = vec![(t[0] + one) * ui, u, (t[1] + one) * ui];
    // output position j >= 4 carries a_{j-1}, times u for even j and u^-1 for odd j
    for (k, &a) in t.iter().enumerate().skip(2) {
        let j = k + 2;
        out.push(if j % 2 == 0 { a * u } else { a * ui });
    }
    Ok(out)
}

/// Inverse of [`unit_insert`]; `u` is read off position 2.
pub fn unit_remove(t: &[Residue]) -> Result<Tuple> {
    if t.len() < 4 || t.len() % 2 == 1 {
        return Err(violation(format!(
            "unit removal needs even size >= 4, got {}",
            t.len()
        )));
    }
    let one = t[0].modulus().one();
    let u = t[1];
    let ui = u.inverse()?;
    let mut out = vec![t[0] * u - one, t[2] * u - one];
    for (k, &a) in t.iter().enumerate().skip(3) {
        let j = k + 1;
        out.push(if j % 2 == 0 { a * ui } else { a * u });
    }
    Ok(out)
}

/// `(u, v, w) -> (xu, v x^-1, w x)`.
pub fn fiber_shift(triple: [Residue; 3], x: Residue) -> Result<[Residue; 3]> {
    let xi = x.inverse()?;
    let [u, v, w] = triple;
    Ok([x * u, v * xi, w * x])
}

/// `(u, v, w) -> (u x^-1, v x, w x^-1)`.
pub fn fiber_unshift(triple: [Residue; 3], x: Residue) -> Result<[Residue; 3]> {
    let xi = x.inverse()?;
    let [u, v, w] = triple;
    Ok([u * xi, v * x, w * xi])
}

/// An extensionally described set that a map acts on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    Set(SetSpec),
    /// Concatenated pairs `(s, t)` with `s` in the first set and `t` in the second.
    Product(SetSpec, SetSpec),
    /// Triples `(u, v, w)` in `U(m) x U(m) x Z/2^mZ` with `psi(u, v, w) = x`.
    Fiber {
        m: u32,
        x: Residue,
    },
}

impl Domain {
    pub fn enumerate(&self, budget: u128) -> Result<Vec<Tuple>> {
        match self {
            Domain::Set(spec) => Ok(oracle::enumerate(spec, budget)?.collect()),
            Domain::Product(first, second) => {
                let left: Vec<Tuple> = oracle::enumerate(first, budget)?.collect();
                let right: Vec<Tuple> = oracle::enumerate(second, budget)?.collect();
                Ok(left
                    .iter()
                    .flat_map(|l| right.iter().map(move |r| [l.as_slice(), r].concat()))
                    .collect())
            }
            Domain::Fiber { m, x } => Ok(oracle::psi_fiber(*m, *x)?
                .into_iter()
                .map(|t| t.to_vec())
                .collect()),
        }
    }

    pub fn contains(&self, t: &[Residue]) -> bool {
        match self {
            Domain::Set(spec) => spec.contains(t),
            Domain::Product(first, second) => {
                t.len() == first.size() + second.size()
                    && first.contains(&t[..first.size()])
                    && second.contains(&t[first.size()..])
            }
            Domain::Fiber { m, x } => {
                t.len() == 3
                    && t.iter().all(|r| r.modulus() == x.modulus())
                    && t[0].is_unit()
                    && t[1].is_unit()
                    && x.modulus().two_adic() == Some(*m)
                    && psi(t[0], t[1], t[2]).ok() == Some(*x)
            }
        }
    }
}

/// A forward/backward pair between two enumerable sets.
pub trait TupleMap: Send + Sync {
    fn name(&self) -> String;
    fn domain(&self) -> Domain;
    fn codomain(&self) -> Domain;
    fn forward(&self, t: &[Residue]) -> Result<Tuple>;
    fn backward(&self, t: &[Residue]) -> Result<Tuple>;
}

fn fixed(r: Residue) -> ConstraintKind {
    ConstraintKind::Fixed(r)
}

/// `D B D` with `D = diag(1, -1)`.
fn conjugate_by_reflection(b: Mat2) -> Mat2 {
    let [p, q, r, s] = b.entries();
    Mat2::from_residues(p, -q, -r, s)
}

/// Negation of every letter. For odd size it carries `Ω^B` onto `Ω^{-DBD}`,
/// in particular `+Id` onto `-Id`; fixed letters are negated as well.
#[derive(Debug, Clone)]
pub struct Negation {
    pub spec: SetSpec,
}

impl TupleMap for Negation {
    fn name(&self) -> String {
        format!(
            "negation(n={}, N={})",
            self.spec.size(),
            self.spec.modulus()
        )
    }
    fn domain(&self) -> Domain {
        Domain::Set(self.spec.clone())
    }
    fn codomain(&self) -> Domain {
        let b = conjugate_by_reflection(self.spec.target());
        let target = if self.spec.size() % 2 == 1 { -b } else { b };
        let mut out = SetSpec::new(self.spec.size(), target).expect("valid target");
        for (i, c) in self.spec.constraints().iter().enumerate() {
            let c = match *c {
                ConstraintKind::Fixed(r) => fixed(-r),
                ConstraintKind::Any => continue,
                other => other,
            };
            out = out.with(i + 1, c).expect("valid constraint");
        }
        Domain::Set(out)
    }
    fn forward(&self, t: &[Residue]) -> Result<Tuple> {
        Ok(negate(t))
    }
    fn backward(&self, t: &[Residue]) -> Result<Tuple> {
        Ok(negate(t))
    }
}

/// Alternating scaling by a unit on an even-size `±Id` solution set.
#[derive(Debug, Clone)]
pub struct Scaling {
    pub spec: SetSpec,
    pub lambda: Residue,
}

impl TupleMap for Scaling {
    fn name(&self) -> String {
        format!(
            "scaling(n={}, N={}, λ={})",
            self.spec.size(),
            self.spec.modulus(),
            self.lambda
        )
    }
    fn domain(&self) -> Domain {
        Domain::Set(self.spec.clone())
    }
    fn codomain(&self) -> Domain {
        Domain::Set(self.spec.clone())
    }
    fn forward(&self, t: &[Residue]) -> Result<Tuple> {
        scale_alternating(t, self.lambda)
    }
    fn backward(&self, t: &[Residue]) -> Result<Tuple> {
        scale_alternating(t, self.lambda.inverse()?)
    }
}

/// Contraction of a letter `1` (or `-1`) at an interior position:
/// `Ω_n^B` restricted to `a_pos = ±1` onto `Ω_{n-1}^{±B}`.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub size: usize,
    pub position: usize,
    pub target: Mat2,
    pub minus: bool,
}

impl Contraction {
    fn marker(&self) -> Residue {
        let one = self.target.modulus().one();
        if self.minus {
            -one
        } else {
            one
        }
    }
}

impl TupleMap for Contraction {
    fn name(&self) -> String {
        format!(
            "contract_{}(n={}, pos={}, N={})",
            if self.minus { "minus_one" } else { "one" },
            self.size,
            self.position,
            self.target.modulus()
        )
    }
    fn domain(&self) -> Domain {
        Domain::Set(
            SetSpec::new(self.size, self.target)
                .and_then(|s| s.with(self.position, fixed(self.marker())))
                .expect("valid contraction domain"),
        )
    }
    fn codomain(&self) -> Domain {
        let target = if self.minus {
            -self.target
        } else {
            self.target
        };
        Domain::Set(SetSpec::new(self.size - 1, target).expect("valid contraction codomain"))
    }
    fn forward(&self, t: &[Residue]) -> Result<Tuple> {
        contract(t, self.position, self.marker())
    }
    fn backward(&self, t: &[Residue]) -> Result<Tuple> {
        expand(t, self.position, self.marker())
    }
}

/// Which letters at positions 2 and 3 a [`PairReduction`] acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairShape {
    /// `a_2 = u` (a unit), `a_3` any non-unit; image has `a_2` a unit.
    UnitThenNonUnit { u: Residue },
    /// `a_2 = x`, `a_3 = y` with `xy - 1` a unit; image has `a_2 = xy - 1`.
    Fixed { x: Residue, y: Residue },
}

#[derive(Debug, Clone)]
pub struct PairReduction {
    pub size: usize,
    pub target: Mat2,
    pub shape: PairShape,
}

impl TupleMap for PairReduction {
    fn name(&self) -> String {
        let shape = match self.shape {
            PairShape::UnitThenNonUnit { u } => format!("u={u}"),
            PairShape::Fixed { x, y } => format!("x={x}, y={y}"),
        };
        format!(
            "pair_reduction(n={}, N={}, {shape})",
            self.size,
            self.target.modulus()
        )
    }
    fn domain(&self) -> Domain {
        let base = SetSpec::new(self.size, self.target).expect("valid target");
        let spec = match self.shape {
            PairShape::UnitThenNonUnit { u } => base
                .with(2, fixed(u))
                .and_then(|s| s.with(3, ConstraintKind::NonUnit)),
            PairShape::Fixed { x, y } => base.with(2, fixed(x)).and_then(|s| s.with(3, fixed(y))),
        };
        Domain::Set(spec.expect("valid pair domain"))
    }
    fn codomain(&self) -> Domain {
        let base = SetSpec::new(self.size - 1, self.target).expect("valid target");
        let spec = match self.shape {
            PairShape::UnitThenNonUnit { .. } => base.with(2, ConstraintKind::Unit),
            PairShape::Fixed { x, y } => base.with(2, fixed(x * y - x.modulus().one())),
        };
        Domain::Set(spec.expect("valid pair codomain"))
    }
    fn forward(&self, t: &[Residue]) -> Result<Tuple> {
        reduce_pair(t)
    }
    fn backward(&self, t: &[Residue]) -> Result<Tuple> {
        match self.shape {
            PairShape::UnitThenNonUnit { u } => expand_pair_unit(t, u),
            PairShape::Fixed { x, y } => expand_pair(t, x, y),
        }
    }
}

/// `a_2 = u, a_3 = v, a_4 = w` fixed, collapsed to `a_2 = psi(u, v, w)`.
#[derive(Debug, Clone)]
pub struct QuintupleReduction {
    pub size: usize,
    pub target: Mat2,
    pub u: Residue,
    pub v: Residue,
    pub w: Residue,
}

impl TupleMap for QuintupleReduction {
    fn name(&self) -> String {
        format!(
            "quintuple_reduction(n={}, N={}, u={}, v={}, w={})",
            self.size,
            self.target.modulus(),
            self.u,
            self.v,
            self.w
        )
    }
    fn domain(&self) -> Domain {
        Domain::Set(
            SetSpec::new(self.size, self.target)
                .and_then(|s| s.with(2, fixed(self.u)))
                .and_then(|s| s.with(3, fixed(self.v)))
                .and_then(|s| s.with(4, fixed(self.w)))
                .expect("valid quintuple domain"),
        )
    }
    fn codomain(&self) -> Domain {
        let x = psi(self.u, self.v, self.w).expect("v is a unit");
        Domain::Set(
            SetSpec::new(self.size - 2, self.target)
                .and_then(|s| s.with(2, fixed(x)))
                .expect("valid quintuple codomain"),
        )
    }
    fn forward(&self, t: &[Residue]) -> Result<Tuple> {
        reduce_quintuple(t)
    }
    fn backward(&self, t: &[Residue]) -> Result<Tuple> {
        expand_quintuple(t, self.u, self.v, self.w)
    }
}

/// `Ω_{2n-1}^ε` onto `Λ_{2n}^ε(u)` for `ε Id` targets.
#[derive(Debug, Clone)]
pub struct UnitInsertion {
    pub odd_size: usize,
    pub target: Mat2,
    pub u: Residue,
}

impl TupleMap for UnitInsertion {
    fn name(&self) -> String {
        format!(
            "unit_insertion(n={}, N={}, u={})",
            self.odd_size,
            self.target.modulus(),
            self.u
        )
    }
    fn domain(&self) -> Domain {
        Domain::Set(SetSpec::new(self.odd_size, self.target).expect("valid target"))
    }
    fn codomain(&self) -> Domain {
        Domain::Set(
            SetSpec::new(self.odd_size + 1, self.target)
                .and_then(|s| s.with(2, fixed(self.u)))
                .expect("valid insertion codomain"),
        )
    }
    fn forward(&self, t: &[Residue]) -> Result<Tuple> {
        unit_insert(t, self.u)
    }
    fn backward(&self, t: &[Residue]) -> Result<Tuple> {
        check_value(t, 2, self.u, "unit removal")?;
        unit_remove(t)
    }
}

/// `T(m, 1)` onto `T(m, x)`.
#[derive(Debug, Clone)]
pub struct FiberShift {
    pub m: u32,
    pub x: Residue,
}

fn triple(t: &[Residue]) -> Result<[Residue; 3]> {
    t.try_into()
        .map_err(|_| violation(format!("expected a triple, got {}", show(t))))
}

impl TupleMap for FiberShift {
    fn name(&self) -> String {
        format!("fiber_shift(m={}, x={})", self.m, self.x)
    }
    fn domain(&self) -> Domain {
        Domain::Fiber {
            m: self.m,
            x: self.x.modulus().one(),
        }
    }
    fn codomain(&self) -> Domain {
        Domain::Fiber {
            m: self.m,
            x: self.x,
        }
    }
    fn forward(&self, t: &[Residue]) -> Result<Tuple> {
        Ok(fiber_shift(triple(t)?, self.x)?.to_vec())
    }
    fn backward(&self, t: &[Residue]) -> Result<Tuple> {
        Ok(fiber_unshift(triple(t)?, self.x)?.to_vec())
    }
}

/// Componentwise residue splitting `(Z/N1N2Z)^n -> (Z/N1Z)^n x (Z/N2Z)^n` for
/// coprime `N1`, `N2`, restricted to `ε Id` solutions.
#[derive(Debug, Clone)]
pub struct CrtSplit {
    pub size: usize,
    pub left: Modulus,
    pub right: Modulus,
    pub negative: bool,
}

impl CrtSplit {
    pub fn new(size: usize, left: Modulus, right: Modulus, negative: bool) -> Result<Self> {
        if num_integer::gcd(left.value(), right.value()) != 1 {
            return Err(Error::Precondition(format!(
                "{left} and {right} are not coprime"
            )));
        }
        Ok(CrtSplit {
            size,
            left,
            right,
            negative,
        })
    }

    fn whole(&self) -> Modulus {
        Modulus::new(u64::from(self.left.value()) * u64::from(self.right.value()))
            .expect("product of moduli")
    }

    fn spec(&self, md: Modulus) -> SetSpec {
        let id = Mat2::identity(md);
        SetSpec::new(self.size, if self.negative { -id } else { id }).expect("valid target")
    }
}

impl TupleMap for CrtSplit {
    fn name(&self) -> String {
        format!("crt_split(n={}, N={}x{})", self.size, self.left, self.right)
    }
    fn domain(&self) -> Domain {
        Domain::Set(self.spec(self.whole()))
    }
    fn codomain(&self) -> Domain {
        Domain::Product(self.spec(self.left), self.spec(self.right))
    }
    fn forward(&self, t: &[Residue]) -> Result<Tuple> {
        let l = t.iter().map(|r| self.left.residue(i64::from(r.value())));
        let r = t.iter().map(|r| self.right.residue(i64::from(r.value())));
        Ok(l.chain(r).collect())
    }
    fn backward(&self, t: &[Residue]) -> Result<Tuple> {
        if t.len() != 2 * self.size {
            return Err(violation(format!("expected {} residues", 2 * self.size)));
        }
        let whole = self.whole();
        let (n1, n2) = (i64::from(self.left.value()), i64::from(self.right.value()));
        // x = l + n1 * ((r - l) * n1^-1 mod n2)
        let n1_inv = self.right.residue(n1).inverse()?;
        Ok((0..self.size)
            .map(|i| {
                let l = i64::from(t[i].value());
                let r = self.right.residue(i64::from(t[self.size + i].value()));
                let k = (r - self.right.residue(l)) * n1_inv;
                whole.residue(l + n1 * i64::from(k.value()))
            })
            .inspect(|_| debug_assert!(n2 > 0))
            .collect())
    }
}

/// Every shipped map whose domain has tuples of length `size` over
/// `modulus`. Reductions need `modulus` a power of two; a CRT split is added
/// for each coprime factorization `N = N1 * N2` with `N1, N2 > 1`.
pub fn catalogue(modulus: Modulus, size: usize) -> Vec<Box<dyn TupleMap>> {
    let mut maps: Vec<Box<dyn TupleMap>> = Vec::new();
    let id = Mat2::identity(modulus);
    let signs = [id, -id];
    let targets = [id, -id, Mat2::s(modulus), Mat2::t(modulus)];
    let units = crate::modring::units_of(modulus);

    if let Some(m) = modulus.two_adic() {
        if size % 2 == 1 {
            for &b in &targets {
                maps.push(Box::new(Negation {
                    spec: SetSpec::new(size, b).expect("valid target"),
                }));
            }
            for &b in &signs {
                for &u in &units {
                    maps.push(Box::new(UnitInsertion {
                        odd_size: size,
                        target: b,
                        u,
                    }));
                }
            }
        }
        if size >= 4 && size.is_multiple_of(2) {
            for &b in &signs {
                for &lambda in &units {
                    let spec = SetSpec::new(size, b).expect("valid target");
                    maps.push(Box::new(Scaling { spec, lambda }));
                }
            }
        }
        if size >= 3 {
            for &b in &targets {
                for position in 2..size {
                    for minus in [false, true] {
                        maps.push(Box::new(Contraction {
                            size,
                            position,
                            target: b,
                            minus,
                        }));
                    }
                }
            }
        }
        if size >= 4 {
            for &b in &targets {
                for &u in &units {
                    let shape = PairShape::UnitThenNonUnit { u };
                    maps.push(Box::new(PairReduction {
                        size,
                        target: b,
                        shape,
                    }));
                }
                for x in crate::modring::non_units_of(modulus) {
                    for y in modulus.elements() {
                        let shape = PairShape::Fixed { x, y };
                        maps.push(Box::new(PairReduction {
                            size,
                            target: b,
                            shape,
                        }));
                    }
                }
            }
        }
        if size >= 5 {
            for &b in &signs {
                for &u in &units {
                    for &v in &units {
                        for w in modulus.elements() {
                            if psi(u, v, w).is_ok_and(|x| x.is_unit()) {
                                maps.push(Box::new(QuintupleReduction {
                                    size,
                                    target: b,
                                    u,
                                    v,
                                    w,
                                }));
                            }
                        }
                    }
                }
            }
        }
        if size == 3 && m >= 2 {
            for &x in &units {
                maps.push(Box::new(FiberShift { m, x }));
            }
        }
    }

    let n = u64::from(modulus.value());
    for d in 2..n {
        if n % d == 0 && d < n / d && num_integer::gcd(d, n / d) == 1 {
            let left = Modulus::new(d).expect("divisor");
            let right = Modulus::new(n / d).expect("divisor");
            for negative in [false, true] {
                maps.push(Box::new(
                    CrtSplit::new(size, left, right, negative).expect("coprime"),
                ));
            }
        }
    }
    maps
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    ForwardError,
    ForwardLeavesCodomain,
    BackwardAfterForward,
    BackwardError,
    BackwardLeavesDomain,
    ForwardAfterBackward,
    CardinalityMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub kind: FailureKind,
    pub input: Tuple,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} at {}: {}",
            self.kind,
            show(&self.input),
            self.detail
        )
    }
}

#[derive(Debug, Clone)]
pub struct ReciprocityReport {
    pub name: String,
    pub domain_size: usize,
    pub codomain_size: usize,
    pub failure_count: usize,
    /// The first few failures; `failure_count` has the total.
    pub failures: Vec<Counterexample>,
}

impl ReciprocityReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

const KEPT_FAILURES: usize = 16;

/// Check that `map` is a bijection between its enumerated domain and codomain
/// with `backward` as its inverse.
pub fn verify_reciprocal(map: &dyn TupleMap, budget: u128) -> Result<ReciprocityReport> {
    let domain = map.domain().enumerate(budget)?;
    let codomain = map.codomain().enumerate(budget)?;
    let domain_set: HashSet<&Tuple> = domain.iter().collect();
    let codomain_set: HashSet<&Tuple> = codomain.iter().collect();

    let mut report = ReciprocityReport {
        name: map.name(),
        domain_size: domain.len(),
        codomain_size: codomain.len(),
        failure_count: 0,
        failures: Vec::new(),
    };
    let mut fail = |kind, input: &Tuple, detail: String| {
        report.failure_count += 1;
        if report.failures.len() < KEPT_FAILURES {
            report.failures.push(Counterexample {
                kind,
                input: input.clone(),
                detail,
            });
        }
    };

    for t in &domain {
        let image = match map.forward(t) {
            Ok(img) => img,
            Err(e) => {
                fail(FailureKind::ForwardError, t, e.to_string());
                continue;
            }
        };
        if !codomain_set.contains(&image) {
            fail(
                FailureKind::ForwardLeavesCodomain,
                t,
                format!("image {}", show(&image)),
            );
            continue;
        }
        match map.backward(&image) {
            Ok(back) if &back == t => {}
            Ok(back) => fail(
                FailureKind::BackwardAfterForward,
                t,
                format!("returned {}", show(&back)),
            ),
            Err(e) => fail(FailureKind::BackwardError, &image, e.to_string()),
        }
    }
    for s in &codomain {
        let pre = match map.backward(s) {
            Ok(p) => p,
            Err(e) => {
                fail(FailureKind::BackwardError, s, e.to_string());
                continue;
            }
        };
        if !domain_set.contains(&pre) {
            fail(
                FailureKind::BackwardLeavesDomain,
                s,
                format!("preimage {}", show(&pre)),
            );
            continue;
        }
        match map.forward(&pre) {
            Ok(img) if &img == s => {}
            Ok(img) => fail(
                FailureKind::ForwardAfterBackward,
                s,
                format!("returned {}", show(&img)),
            ),
            Err(e) => fail(FailureKind::ForwardError, &pre, e.to_string()),
        }
    }
    if domain.len() != codomain.len() {
        fail(
            FailureKind::CardinalityMismatch,
            &Vec::new(),
            format!(
                "|domain| = {}, |codomain| = {}",
                domain.len(),
                codomain.len()
            ),
        );
    }
    Ok(report)
}
