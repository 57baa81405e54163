//! Quotients by normal subgroups.

use std::collections::HashMap;
use std::sync::Arc;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::group::{CosetMap, FiniteGroup};
use crate::indexed::IndexedGroup;
use crate::structure::Subgroup;

/// `G/N`, each coset represented by its member of minimal canonical key.
#[derive(Debug, Clone)]
pub struct QuotientGroup {
    group: Arc<FiniteGroup>,
    map: Arc<CosetMap>,
    normal_order: usize,
}

/// Builds `G/N`. Fails with a precondition error when `N` is not normal.
pub fn quotient(g: &IndexedGroup, n: &Subgroup) -> Result<QuotientGroup> {
    if !n.is_normal(g) {
        return Err(Error::precondition(format!(
            "subgroup of order {} is not normal in {}",
            n.order(),
            g.label()
        )));
    }
    let mut rep = HashMap::with_capacity(g.order());
    let mut done = fixedbitset::FixedBitSet::with_capacity(g.order());
    // ids ascend with canonical keys, so the first unseen id is its coset's minimum
    for x in g.ids() {
        if done.contains(x.idx()) {
            continue;
        }
        let r = g.element(x).clone();
        for &m in n.elements() {
            let y = g.mul(x, m);
            done.insert(y.idx());
            rep.insert(g.element(y).clone(), r.clone());
        }
    }
    let map = Arc::new(CosetMap {
        parent: g.group().clone(),
        rep,
    });
    let label = format!("{}/N{}", g.label(), n.order());
    let group = Arc::new(FiniteGroup::from_cosets(label, map.clone()));
    Ok(QuotientGroup {
        group,
        map,
        normal_order: n.order(),
    })
}

impl QuotientGroup {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.map.parent
    }

    pub fn normal_order(&self) -> usize {
        self.normal_order
    }

    pub fn order(&self) -> usize {
        self.map.parent.order().unwrap_or(0) / self.normal_order
    }

    /// `ρ(a)`, the coset of `a`.
    pub fn project(&self, a: &Element) -> Result<Element> {
        self.map
            .rep
            .get(a)
            .map(|r| Element::Coset(Box::new(r.clone())))
            .ok_or_else(|| Error::Domain(format!("{a} is not an element of {}", self.map.parent.label())))
    }
}
