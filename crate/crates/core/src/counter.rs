//! Transfer-matrix counting over SL2(Z/NZ).
//!
//! The state after `k` letters is a vector indexed by group ordinal holding the
//! number of admissible `k`-prefixes with that product. Appending letter `a`
//! moves mass from `g` to `E(a) * g`, read off a precomputed table of left
//! multiplications by the `N` elementary matrices.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{CheckedAdd, One, Zero};

use crate::error::{Error, Result};
use crate::modring::Modulus;
use crate::oracle::{ConstraintKind, SetSpec};
use crate::sl2::{GroupTable, Mat2, NamedTarget};

/// Accumulator for walk counts. Fixed-width integers report overflow instead
/// of wrapping; [`BigUint`] never overflows.
pub trait CountScalar: Clone + Zero + One + CheckedAdd + Send + Sync {
    fn accumulate(&mut self, other: &Self) -> Result<()> {
        *self = self.checked_add(other).ok_or(Error::CountOverflow)?;
        Ok(())
    }
}

impl<T: Clone + Zero + One + CheckedAdd + Send + Sync> CountScalar for T {}

/// Left-multiplication table: `step[a][g] = ordinal(E(a) * g)`.
#[derive(Debug)]
pub struct Transfer {
    table: Arc<GroupTable>,
    step: Vec<Vec<u32>>,
}

impl Transfer {
    pub fn build(modulus: Modulus) -> Result<Transfer> {
        let table = GroupTable::shared(modulus)?;
        let step = (0..modulus.value())
            .map(|a| {
                table
                    .elements()
                    .iter()
                    .map(|g| {
                        table
                            .index_of(&g.push_letter(a))
                            .expect("closed under E(a)")
                            .0
                    })
                    .collect()
            })
            .collect();
        Ok(Transfer { table, step })
    }

    pub fn shared(modulus: Modulus) -> Result<Arc<Transfer>> {
        static CACHE: OnceLock<Mutex<HashMap<Modulus, Arc<Transfer>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().unwrap().get(&modulus) {
            return Ok(Arc::clone(t));
        }
        let built = Arc::new(Transfer::build(modulus)?);
        let mut guard = cache.lock().unwrap();
        Ok(Arc::clone(guard.entry(modulus).or_insert(built)))
    }

    pub fn table(&self) -> &Arc<GroupTable> {
        &self.table
    }
}

/// Distribution of walk counts over the group.
#[derive(Debug, Clone)]
pub struct CountVector<C> {
    table: Arc<GroupTable>,
    counts: Vec<C>,
}

impl<C: CountScalar> CountVector<C> {
    /// The empty product: one walk sitting at the identity.
    pub fn unit(table: Arc<GroupTable>) -> Self {
        let mut counts = vec![C::zero(); table.len()];
        counts[0] = C::one();
        CountVector { table, counts }
    }

    pub fn modulus(&self) -> Modulus {
        self.table.modulus()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[C] {
        &self.counts
    }

    pub fn table(&self) -> &GroupTable {
        &self.table
    }

    /// Count at `target`; `None` if `target` is not in SL2 of this ring.
    pub fn get(&self, target: &Mat2) -> Option<&C> {
        self.table
            .index_of(target)
            .map(|i| &self.counts[i.0 as usize])
    }

    pub fn total(&self) -> Result<C> {
        let mut acc = C::zero();
        for c in &self.counts {
            acc.accumulate(c)?;
        }
        Ok(acc)
    }

    /// Append one position whose letter ranges over `letters`.
    pub fn step(&self, transfer: &Transfer, letters: &[u32]) -> Result<Self> {
        let mut next = vec![C::zero(); self.counts.len()];
        for (g, mass) in self.counts.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            for &a in letters {
                let h = transfer.step[a as usize][g] as usize;
                next[h].accumulate(mass)?;
            }
        }
        Ok(CountVector {
            table: Arc::clone(&self.table),
            counts: next,
        })
    }
}

/// Walk counts to every group element for tuples of length
/// `constraints.len()`, position 1 applied first.
pub fn dp_vector_with<C: CountScalar>(
    modulus: Modulus,
    constraints: &[ConstraintKind],
) -> Result<CountVector<C>> {
    if constraints.is_empty() {
        return Err(Error::Precondition("tuple size must be at least 1".into()));
    }
    for c in constraints {
        if let ConstraintKind::Fixed(r) = c {
            if r.modulus() != modulus {
                return Err(Error::ModulusMismatch {
                    left: modulus.value(),
                    right: r.modulus().value(),
                });
            }
        }
    }
    let transfer = Transfer::shared(modulus)?;
    let mut vector = CountVector::unit(Arc::clone(transfer.table()));
    for c in constraints {
        vector = vector.step(&transfer, &c.alphabet(modulus))?;
    }
    Ok(vector)
}

pub fn dp_vector(modulus: Modulus, constraints: &[ConstraintKind]) -> Result<CountVector<BigUint>> {
    dp_vector_with(modulus, constraints)
}

pub fn dp_count_with<C: CountScalar>(spec: &SetSpec) -> Result<C> {
    let v = dp_vector_with::<C>(spec.modulus(), spec.constraints())?;
    Ok(v.get(&spec.target())
        .cloned()
        .expect("SetSpec targets lie in SL2"))
}

pub fn dp_count(spec: &SetSpec) -> Result<BigUint> {
    dp_count_with(spec)
}

/// Counts at `±Id`, `±S`, `±T` from a single pass.
pub fn dp_count_all_targets(
    modulus: Modulus,
    constraints: &[ConstraintKind],
) -> Result<Vec<(NamedTarget, BigUint)>> {
    let v = dp_vector(modulus, constraints)?;
    Ok(NamedTarget::ALL
        .iter()
        .map(|&t| (t, v.get(&t.matrix(modulus)).cloned().unwrap_or_default()))
        .collect())
}
