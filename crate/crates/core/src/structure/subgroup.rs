use std::cmp::Ordering;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;

use crate::indexed::{greedy_generators, ElemId, IndexedGroup, SubgroupView};

/// Nilpotency class, from the lower central series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Nilpotency {
    Class(usize),
    NotNilpotent,
}

impl Nilpotency {
    pub fn class(self) -> Option<usize> {
        match self {
            Nilpotency::Class(c) => Some(c),
            Nilpotency::NotNilpotent => None,
        }
    }
}

/// A subgroup of an [`IndexedGroup`] with lazily filled invariants.
///
/// Generators are canonical: scanning the members in id (= canonical key)
/// order, each member outside the closure of the earlier picks is kept.
#[derive(Clone)]
pub struct Subgroup {
    members: FixedBitSet,
    elements: Vec<ElemId>,
    generators: Vec<ElemId>,
    parent_order: usize,
    pub(crate) derived: OnceLock<Arc<Subgroup>>,
    pub(crate) class_count: OnceLock<usize>,
    pub(crate) nilpotency: OnceLock<(Nilpotency, Vec<usize>)>,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Subgroup")
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn from_members(g: &IndexedGroup, members: FixedBitSet) -> Subgroup {
        let elements: Vec<ElemId> = members.ones().map(|i| ElemId(i as u32)).collect();
        let generators = greedy_generators(g, &elements);
        Subgroup {
            members,
            elements,
            generators,
            parent_order: g.order(),
            derived: OnceLock::new(),
            class_count: OnceLock::new(),
            nilpotency: OnceLock::new(),
        }
    }

    /// The closure of `gens`.
    pub fn generated_by(g: &IndexedGroup, gens: &[ElemId]) -> Subgroup {
        Self::from_members(g, g.close(gens).0)
    }

    pub fn whole(g: &IndexedGroup) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(g.order());
        members.insert_range(..);
        Self::from_members(g, members)
    }

    pub fn trivial(g: &IndexedGroup) -> Subgroup {
        Self::generated_by(g, &[])
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `|G : H|`.
    pub fn index(&self) -> usize {
        self.parent_order / self.order()
    }

    pub fn contains(&self, x: ElemId) -> bool {
        self.members.contains(x.idx())
    }

    /// Members in ascending id order.
    pub fn elements(&self) -> &[ElemId] {
        &self.elements
    }

    pub fn generators(&self) -> &[ElemId] {
        &self.generators
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn generator_keys(&self, g: &IndexedGroup) -> Vec<Vec<u8>> {
        self.generators
            .iter()
            .map(|&x| g.element(x).canonical_key())
            .collect()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// `x⁻¹ h x ∈ H` for every generator `x` of `G` and `h` of `H`.
    pub fn is_normal(&self, g: &IndexedGroup) -> bool {
        g.generators().iter().all(|&x| {
            let xi = g.inv(x);
            self.generators
                .iter()
                .all(|&h| self.contains(g.mul(g.mul(xi, h), x)))
        })
    }

    /// Normality inside a larger subgroup `k ⊇ self`.
    pub fn is_normal_in(&self, g: &IndexedGroup, k: &Subgroup) -> bool {
        k.generators.iter().all(|&x| {
            let xi = g.inv(x);
            self.generators
                .iter()
                .all(|&h| self.contains(g.mul(g.mul(xi, h), x)))
        })
    }

    pub fn view<'a>(&self, g: &'a IndexedGroup) -> SubgroupView<'a> {
        SubgroupView {
            parent: g,
            order: self.order(),
        }
    }

    /// Sort order used for subgroup lists: by order, then by the generator
    /// key lists compared lexicographically.
    pub fn canonical_cmp(&self, other: &Subgroup) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.generators.cmp(&other.generators))
    }

    pub fn intersection(&self, g: &IndexedGroup, other: &Subgroup) -> Subgroup {
        let mut m = self.members.clone();
        m.intersect_with(&other.members);
        Subgroup::from_members(g, m)
    }
}
