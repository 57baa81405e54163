//! Integer-indexed form of an enumerated group with a full Cayley table.
//!
//! Element ids follow canonical-key order, so "minimal id" and "minimal
//! canonical key" coincide everywhere.

use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::group::{ElementIndex, FiniteGroup};
use crate::ops::GroupOps;

/// Largest group whose Cayley table is materialised.
pub const DEFAULT_TABLE_CAP: usize = 2500;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemId(pub u32);

impl ElemId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

pub struct IndexedGroup {
    group: Arc<FiniteGroup>,
    universe: Arc<ElementIndex>,
    table: Vec<u32>,
    inverses: Vec<u32>,
    identity: ElemId,
    generators: OnceLock<Vec<ElemId>>,
}

impl std::fmt::Debug for IndexedGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IndexedGroup")
            .field("group", &self.group.label())
            .field("order", &self.order())
            .finish()
    }
}

impl IndexedGroup {
    pub fn new(group: Arc<FiniteGroup>) -> Result<IndexedGroup> {
        Self::with_cap(group, DEFAULT_TABLE_CAP)
    }

    pub fn with_cap(group: Arc<FiniteGroup>, cap: usize) -> Result<IndexedGroup> {
        let universe = group.enumerate()?;
        let n = universe.len();
        if n > cap {
            return Err(Error::Limit {
                what: "Cayley table order",
                cap,
                partial: n,
            });
        }
        let elements = universe.elements();
        let position = |e: &Element| universe.position(e).expect("closed under products");
        let table: Vec<u32> = elements
            .par_iter()
            .flat_map_iter(|a| elements.iter().map(|b| position(&group.mul(a, b))).collect::<Vec<_>>())
            .collect();
        let identity = position(group.identity());
        let mut inverses = vec![0u32; n];
        for (i, slot) in inverses.iter_mut().enumerate() {
            *slot = (0..n)
                .find(|&j| table[i * n + j] == identity)
                .expect("every element has an inverse") as u32;
        }
        Ok(IndexedGroup {
            group,
            universe,
            table,
            inverses,
            identity: ElemId(identity),
            generators: OnceLock::new(),
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn label(&self) -> &str {
        self.group.label()
    }

    pub fn order(&self) -> usize {
        self.inverses.len()
    }

    pub fn identity(&self) -> ElemId {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        ElemId(self.table[a.idx() * self.inverses.len() + b.idx()])
    }

    #[inline]
    pub fn inv(&self, a: ElemId) -> ElemId {
        ElemId(self.inverses[a.idx()])
    }

    pub fn ids(&self) -> impl Iterator<Item = ElemId> {
        (0..self.order() as u32).map(ElemId)
    }

    pub fn element(&self, id: ElemId) -> &Element {
        &self.universe.elements()[id.idx()]
    }

    pub fn id_of(&self, e: &Element) -> Result<ElemId> {
        self.universe
            .position(e)
            .map(ElemId)
            .ok_or_else(|| Error::Domain(format!("{e} is not an element of {}", self.label())))
    }

    pub fn ids_of<'a>(&self, elements: impl IntoIterator<Item = &'a Element>) -> Result<Vec<ElemId>> {
        elements.into_iter().map(|e| self.id_of(e)).collect()
    }

    /// Greedy generators of the whole group: scan ids in order and keep
    /// each one not yet in the closure of those kept so far.
    pub fn generators(&self) -> &[ElemId] {
        self.generators.get_or_init(|| {
            let all: Vec<ElemId> = self.ids().collect();
            greedy_generators(self, &all)
        })
    }

    /// Smallest `m ≥ 1` with `a^m = e`.
    pub fn element_order(&self, a: ElemId) -> usize {
        let mut x = a;
        let mut m = 1;
        while x != self.identity {
            x = self.mul(x, a);
            m += 1;
        }
        m
    }

    /// Closure of `gens` under right multiplication, as a membership set
    /// plus the members in discovery order.
    pub fn close(&self, gens: &[ElemId]) -> (FixedBitSet, Vec<ElemId>) {
        let mut members = FixedBitSet::with_capacity(self.order());
        members.insert(self.identity.idx());
        let mut queue = vec![self.identity];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !members.put(y.idx()) {
                    queue.push(y);
                }
            }
        }
        (members, queue)
    }

    /// Closure of an existing subgroup together with extra elements.
    pub fn extend_closure(
        &self,
        members: &FixedBitSet,
        elements: &[ElemId],
        gens: &[ElemId],
        extra: &[ElemId],
    ) -> (FixedBitSet, Vec<ElemId>) {
        let mut members = members.clone();
        let mut queue = elements.to_vec();
        let mut all_gens: Vec<ElemId> = gens.to_vec();
        all_gens.extend_from_slice(extra);
        // old members are already closed under the old generators, but their
        // products with the new ones are not
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in &all_gens {
                let y = self.mul(x, g);
                if !members.put(y.idx()) {
                    queue.push(y);
                }
            }
        }
        (members, queue)
    }
}

/// Canonical generators of the subgroup whose members are `sorted`
/// (ascending ids): each member not in the closure of the earlier picks.
pub fn greedy_generators(g: &IndexedGroup, sorted: &[ElemId]) -> Vec<ElemId> {
    let mut gens = Vec::new();
    let (mut members, mut elements) = g.close(&[]);
    for &x in sorted {
        if members.contains(x.idx()) {
            continue;
        }
        let (m, e) = g.extend_closure(&members, &elements, &gens, &[x]);
        gens.push(x);
        members = m;
        elements = e;
        if elements.len() == sorted.len() {
            break;
        }
    }
    gens
}

impl GroupOps for IndexedGroup {
    type Elem = ElemId;

    fn identity(&self) -> ElemId {
        self.identity
    }

    fn op(&self, a: &ElemId, b: &ElemId) -> ElemId {
        self.mul(*a, *b)
    }

    fn inv(&self, a: &ElemId) -> ElemId {
        IndexedGroup::inv(self, *a)
    }

    fn order(&self) -> Result<usize> {
        Ok(IndexedGroup::order(self))
    }
}

/// A subgroup viewed as a group in its own right; its order is the target
/// a generating set of the subgroup has to reach.
pub struct SubgroupView<'a> {
    pub parent: &'a IndexedGroup,
    pub order: usize,
}

impl GroupOps for SubgroupView<'_> {
    type Elem = ElemId;

    fn identity(&self) -> ElemId {
        self.parent.identity
    }

    fn op(&self, a: &ElemId, b: &ElemId) -> ElemId {
        self.parent.mul(*a, *b)
    }

    fn inv(&self, a: &ElemId) -> ElemId {
        self.parent.inv(*a)
    }

    fn order(&self) -> Result<usize> {
        Ok(self.order)
    }
}

/// `H/N` for `N ⊴ H`, each coset represented by its minimal-id member.
pub struct QuotientView<'a> {
    parent: &'a IndexedGroup,
    rep: Vec<u32>,
    order: usize,
}

impl<'a> QuotientView<'a> {
    /// `h_elements` lists the members of `H`; `n_elements` the members of
    /// `N`, which must be normal in `H`.
    pub fn new(parent: &'a IndexedGroup, h_elements: &[ElemId], n_elements: &[ElemId]) -> Self {
        const UNSET: u32 = u32::MAX;
        let mut rep = vec![UNSET; parent.order()];
        let mut sorted = h_elements.to_vec();
        sorted.sort_unstable();
        let mut order = 0;
        for &x in &sorted {
            if rep[x.idx()] != UNSET {
                continue;
            }
            order += 1;
            // x is the smallest id in its coset because we sweep in id order
            for &m in n_elements {
                rep[parent.mul(x, m).idx()] = x.0;
            }
        }
        QuotientView { parent, rep, order }
    }

    pub fn project(&self, a: ElemId) -> ElemId {
        ElemId(self.rep[a.idx()])
    }
}

impl GroupOps for QuotientView<'_> {
    type Elem = ElemId;

    fn identity(&self) -> ElemId {
        self.project(self.parent.identity)
    }

    fn op(&self, a: &ElemId, b: &ElemId) -> ElemId {
        self.project(self.parent.mul(*a, *b))
    }

    fn inv(&self, a: &ElemId) -> ElemId {
        self.project(self.parent.inv(*a))
    }

    fn order(&self) -> Result<usize> {
        Ok(self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_follow_key_order() {
        let g = IndexedGroup::new(Arc::new(FiniteGroup::sl2(3).unwrap())).unwrap();
        let keys: Vec<Vec<u8>> = g.ids().map(|i| g.element(i).canonical_key()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn table_matches_element_arithmetic() {
        let fg = Arc::new(FiniteGroup::wreath(3).unwrap());
        let g = IndexedGroup::new(fg.clone()).unwrap();
        for a in g.ids() {
            assert_eq!(g.mul(a, g.inv(a)), g.identity());
            for b in g.ids().step_by(5) {
                let want = fg.multiply(g.element(a), g.element(b)).unwrap();
                assert_eq!(g.element(g.mul(a, b)), &want);
            }
        }
    }

    #[test]
    fn table_cap() {
        let fg = Arc::new(FiniteGroup::symmetric(5).unwrap());
        assert!(IndexedGroup::with_cap(fg, 100).unwrap_err().is_limit());
    }
}
