//! 2x2 matrices over Z/NZ, continuant products and a dense index of SL2(Z/NZ).
//!
//! The continuant product of `(a_1, ..., a_n)` is `E(a_n) * ... * E(a_1)` with
//! `E(a) = [[a, -1], [1, 0]]`: every new letter multiplies on the left.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Mul, Neg};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::modring::{prime_factors, Modulus, Residue};

/// Refuse to materialize groups larger than this many elements.
pub const MAX_GROUP_ORDER: u64 = 1 << 26;

/// Row-major `[[a, b], [c, d]]` over Z/NZ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    a: u32,
    b: u32,
    c: u32,
    d: u32,
    modulus: Modulus,
}

impl Mat2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64, modulus: Modulus) -> Self {
        Mat2::from_residues(
            modulus.residue(a),
            modulus.residue(b),
            modulus.residue(c),
            modulus.residue(d),
        )
    }

    pub fn from_residues(a: Residue, b: Residue, c: Residue, d: Residue) -> Self {
        let modulus = a.modulus();
        assert!(
            [b, c, d].iter().all(|r| r.modulus() == modulus),
            "matrix entries from different rings"
        );
        Mat2 {
            a: a.value(),
            b: b.value(),
            c: c.value(),
            d: d.value(),
            modulus,
        }
    }

    pub fn identity(modulus: Modulus) -> Self {
        Mat2::new(1, 0, 0, 1, modulus)
    }

    pub fn neg_identity(modulus: Modulus) -> Self {
        -Mat2::identity(modulus)
    }

    /// `S = [[0, -1], [1, 0]]`.
    pub fn s(modulus: Modulus) -> Self {
        Mat2::new(0, -1, 1, 0, modulus)
    }

    /// `T = [[1, 1], [0, 1]]`.
    pub fn t(modulus: Modulus) -> Self {
        Mat2::new(1, 1, 0, 1, modulus)
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn entries(&self) -> [Residue; 4] {
        let m = self.modulus;
        [self.a, self.b, self.c, self.d].map(|v| m.residue(i64::from(v)))
    }

    pub fn raw(&self) -> [u32; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> Residue {
        let [a, b, c, d] = self.entries();
        a * d - b * c
    }

    pub fn is_special(&self) -> bool {
        self.det().value() == 1 % self.modulus.value()
    }

    /// Inverse of a determinant-one matrix, `[[d, -b], [-c, a]]`.
    pub fn sl2_inverse(&self) -> Result<Mat2> {
        if !self.is_special() {
            return Err(Error::Precondition(format!("{self} has determinant != 1")));
        }
        let [a, b, c, d] = self.entries();
        Ok(Mat2::from_residues(d, -b, -c, a))
    }

    /// Packed word `((a*N + b)*N + c)*N + d`; unique for N <= 2^16.
    #[inline]
    pub fn key(&self) -> u64 {
        let n = u64::from(self.modulus.value());
        ((u64::from(self.a) * n + u64::from(self.b)) * n + u64::from(self.c)) * n
            + u64::from(self.d)
    }

    /// `E(x) * self`, the step that appends letter `x` to a tuple.
    #[inline]
    pub fn push_letter(&self, x: u32) -> Mat2 {
        let n = u64::from(self.modulus.value());
        let x = u64::from(x);
        let a = ((x * u64::from(self.a) + n - u64::from(self.c)) % n) as u32;
        let b = ((x * u64::from(self.b) + n - u64::from(self.d)) % n) as u32;
        Mat2 {
            a,
            b,
            c: self.a,
            d: self.b,
            modulus: self.modulus,
        }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        assert_eq!(self.modulus, rhs.modulus, "matrices from different rings");
        let [a, b, c, d] = self.entries();
        let [e, f, g, h] = rhs.entries();
        Mat2::from_residues(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        let [a, b, c, d] = self.entries();
        Mat2::from_residues(-a, -b, -c, -d)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]] mod {}",
            self.a, self.b, self.c, self.d, self.modulus
        )
    }
}

/// `[[a, -1], [1, 0]]`.
pub fn elementary(a: Residue) -> Mat2 {
    let m = a.modulus();
    Mat2::from_residues(a, -m.one(), m.one(), m.zero())
}

/// `M_n(a_1, ..., a_n) = E(a_n) * ... * E(a_1)`.
pub fn continuant_product(tuple: &[Residue]) -> Result<Mat2> {
    let first = tuple
        .first()
        .ok_or_else(|| Error::Precondition("continuant of an empty tuple".into()))?;
    let modulus = first.modulus();
    let mut acc = Mat2::identity(modulus);
    for r in tuple {
        if r.modulus() != modulus {
            return Err(Error::ModulusMismatch {
                left: modulus.value(),
                right: r.modulus().value(),
            });
        }
        acc = acc.push_letter(r.value());
    }
    Ok(acc)
}

/// The six distinguished targets `±Id`, `±S`, `±T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedTarget {
    Id,
    NegId,
    S,
    NegS,
    T,
    NegT,
}

impl NamedTarget {
    pub const ALL: [NamedTarget; 6] = [
        NamedTarget::Id,
        NamedTarget::NegId,
        NamedTarget::S,
        NamedTarget::NegS,
        NamedTarget::T,
        NamedTarget::NegT,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedTarget::Id => "id",
            NamedTarget::NegId => "neg-id",
            NamedTarget::S => "s",
            NamedTarget::NegS => "neg-s",
            NamedTarget::T => "t",
            NamedTarget::NegT => "neg-t",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        NamedTarget::ALL.into_iter().find(|t| t.name() == name)
    }

    pub fn matrix(self, modulus: Modulus) -> Mat2 {
        match self {
            NamedTarget::Id => Mat2::identity(modulus),
            NamedTarget::NegId => Mat2::neg_identity(modulus),
            NamedTarget::S => Mat2::s(modulus),
            NamedTarget::NegS => -Mat2::s(modulus),
            NamedTarget::T => Mat2::t(modulus),
            NamedTarget::NegT => -Mat2::t(modulus),
        }
    }

    pub fn negated(self) -> Self {
        match self {
            NamedTarget::Id => NamedTarget::NegId,
            NamedTarget::NegId => NamedTarget::Id,
            NamedTarget::S => NamedTarget::NegS,
            NamedTarget::NegS => NamedTarget::S,
            NamedTarget::T => NamedTarget::NegT,
            NamedTarget::NegT => NamedTarget::T,
        }
    }
}

/// `|SL2(Z/NZ)| = N^3 * prod_{p | N} (1 - p^-2)`.
pub fn sl2_order(n: u64) -> u128 {
    let n = u128::from(n);
    prime_factors(n as u64)
        .iter()
        .fold(n * n * n, |acc, &(p, _)| {
            let p = u128::from(p);
            acc / (p * p) * (p * p - 1)
        })
}

/// Dense ordinals for the elements of SL2(Z/NZ). Identity sits at ordinal 0,
/// the remaining elements follow in ascending packed-key order.
#[derive(Debug)]
pub struct GroupTable {
    modulus: Modulus,
    elements: Vec<Mat2>,
    index: HashMap<u64, u32>,
}

/// An ordinal into a [`GroupTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupIndex(pub u32);

impl GroupTable {
    pub fn build(modulus: Modulus) -> Result<GroupTable> {
        modulus.check_enumerable()?;
        let order = sl2_order(u64::from(modulus.value()));
        if order > u128::from(MAX_GROUP_ORDER) {
            return Err(Error::Precondition(format!(
                "SL2(Z/{modulus}Z) has {order} elements, above the table limit {MAX_GROUP_ORDER}"
            )));
        }
        let n = modulus.value();
        let n64 = u64::from(n);
        let mut elements = Vec::with_capacity(order as usize);
        // a*d = 1 + b*c is a linear congruence in d for fixed (a, b, c).
        for a in 0..n {
            let g = num_integer::gcd(a, n);
            let step = n / g;
            let a_red = modulus.residue(i64::from(a / g));
            let inv = if step == 1 {
                0
            } else {
                let small = Modulus::new(u64::from(step))?;
                small.residue(i64::from(a_red.value())).inverse()?.value()
            };
            for b in 0..n {
                for c in 0..n {
                    let rhs = ((1 + u64::from(b) * u64::from(c)) % n64) as u32;
                    if !rhs.is_multiple_of(g) {
                        continue;
                    }
                    let d0 = if step == 1 {
                        0
                    } else {
                        ((u64::from(rhs / g) * u64::from(inv)) % u64::from(step)) as u32
                    };
                    for k in 0..g {
                        let d = d0 + k * step;
                        elements.push(Mat2 {
                            a,
                            b,
                            c,
                            d,
                            modulus,
                        });
                    }
                }
            }
        }
        let id = Mat2::identity(modulus);
        elements.sort_by_key(|m| (*m != id, m.key()));
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (m.key(), i as u32))
            .collect();
        Ok(GroupTable {
            modulus,
            elements,
            index,
        })
    }

    /// Process-wide table for `modulus`, built on first use.
    pub fn shared(modulus: Modulus) -> Result<Arc<GroupTable>> {
        static CACHE: OnceLock<Mutex<HashMap<Modulus, Arc<GroupTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().unwrap().get(&modulus) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(GroupTable::build(modulus)?);
        let mut guard = cache.lock().unwrap();
        Ok(Arc::clone(guard.entry(modulus).or_insert(table)))
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn element(&self, idx: GroupIndex) -> Mat2 {
        self.elements[idx.0 as usize]
    }

    pub fn index_of(&self, m: &Mat2) -> Option<GroupIndex> {
        if m.modulus() != self.modulus {
            return None;
        }
        self.index.get(&m.key()).map(|&i| GroupIndex(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::{HashSet, VecDeque};

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn tuple(vals: &[i64], md: Modulus) -> Vec<Residue> {
        vals.iter().map(|&v| md.residue(v)).collect()
    }

    #[test]
    fn elementary_matrices() {
        for n in [2, 3, 8, 12] {
            assert_eq!(elementary(m(n).zero()), Mat2::s(m(n)));
        }
        assert_eq!(elementary(m(8).one()).raw(), [1, 7, 1, 0]);
        assert_eq!(elementary(m(4).residue(2)).raw(), [2, 3, 1, 0]);
        assert!(elementary(m(9).residue(5)).is_special());
    }

    #[test]
    fn small_continuants() {
        let md = m(8);
        assert_eq!(
            continuant_product(&tuple(&[1, 1, 1], md)).unwrap(),
            Mat2::neg_identity(md)
        );
        for n in [2, 5, 8, 40] {
            let z = tuple(&[0, 0], m(n));
            assert_eq!(continuant_product(&z).unwrap(), Mat2::neg_identity(m(n)));
        }
        for a in 0..8 {
            for b in 0..8 {
                let lhs = continuant_product(&tuple(&[a, 1, b], md)).unwrap();
                let rhs = continuant_product(&tuple(&[a - 1, b - 1], md)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        assert!(continuant_product(&[]).is_err());
    }

    #[test]
    fn two_letter_closed_form() {
        let md = m(8);
        for a in 0..8 {
            for b in 0..8 {
                let got = continuant_product(&tuple(&[a, b], md)).unwrap();
                assert_eq!(got, Mat2::new(a * b - 1, -b, a, -1, md));
            }
        }
    }

    #[test]
    fn generator_factorisation() {
        // E(a) = T^a S
        let md = m(12);
        for a in 0..12 {
            let mut ta = Mat2::identity(md);
            for _ in 0..a {
                ta = ta * Mat2::t(md);
            }
            assert_eq!(elementary(md.residue(a)), ta * Mat2::s(md));
        }
    }

    /// Brute-force count of determinant-one matrices over all N^4 candidates.
    fn brute_sl2_count(n: u32) -> usize {
        let mut count = 0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if (a * d + n * n - (b * c) % n) % n == 1 % n {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn group_orders() {
        assert_eq!(brute_sl2_count(4), 48);
        assert_eq!(brute_sl2_count(8), 384);
        assert_eq!(brute_sl2_count(3), 24);
        for (n, order) in [(4u64, 48usize), (8, 384), (3, 24)] {
            let t = GroupTable::build(m(n)).unwrap();
            assert_eq!(t.len(), order);
            assert_eq!(sl2_order(n), order as u128);
        }
        for n in [2u32, 5, 6, 9, 12, 16] {
            let t = GroupTable::build(m(u64::from(n))).unwrap();
            assert_eq!(t.len(), brute_sl2_count(n), "N = {n}");
            assert_eq!(t.len() as u128, sl2_order(u64::from(n)));
        }
    }

    #[test]
    fn table_is_bijective() {
        for n in [3, 4, 8, 12] {
            let t = GroupTable::build(m(n)).unwrap();
            assert_eq!(t.element(GroupIndex(0)), Mat2::identity(m(n)));
            let keys: HashSet<u64> = t.elements().iter().map(Mat2::key).collect();
            assert_eq!(keys.len(), t.len());
            for (i, g) in t.elements().iter().enumerate() {
                assert!(g.is_special());
                assert_eq!(t.index_of(g), Some(GroupIndex(i as u32)));
            }
            assert_eq!(t.index_of(&Mat2::new(2, 0, 0, 1, m(n))), None);
        }
    }

    #[test]
    fn cap_enforced() {
        let big = Modulus::new(u64::from(crate::modring::ENUMERATION_CAP) + 1).unwrap();
        assert!(matches!(
            GroupTable::build(big),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn letters_generate_the_group() {
        for n in [3, 4, 8] {
            let md = m(n);
            let table = GroupTable::build(md).unwrap();
            let mut seen = HashSet::from([Mat2::identity(md)]);
            let mut queue = VecDeque::from([Mat2::identity(md)]);
            while let Some(g) = queue.pop_front() {
                for x in 0..md.value() {
                    let h = g.push_letter(x);
                    if seen.insert(h) {
                        queue.push_back(h);
                    }
                }
            }
            assert_eq!(seen.len(), table.len());
        }
    }

    #[test]
    fn named_targets() {
        let md = m(8);
        assert_eq!(NamedTarget::NegS.matrix(md).raw(), [0, 1, 7, 0]);
        for t in NamedTarget::ALL {
            assert_eq!(NamedTarget::parse(t.name()), Some(t));
            assert_eq!(t.negated().matrix(md), -t.matrix(md));
            assert!(t.matrix(md).is_special());
        }
    }

    proptest! {
        #[test]
        fn product_accumulates_on_the_left(
            n in 2u64..30,
            t in prop::collection::vec(any::<i64>(), 1..8),
            u in prop::collection::vec(any::<i64>(), 1..8),
        ) {
            let md = m(n);
            let t = tuple(&t, md);
            let u = tuple(&u, md);
            let joined: Vec<_> = t.iter().chain(u.iter()).copied().collect();
            let whole = continuant_product(&joined).unwrap();
            prop_assert_eq!(whole, continuant_product(&u).unwrap() * continuant_product(&t).unwrap());
            prop_assert!(whole.is_special());
            prop_assert_eq!(whole * whole.sl2_inverse().unwrap(), Mat2::identity(md));
        }
    }
}
