use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{Nilpotency, Subgroup};
use crate::indexed::{ElemId, IndexedGroup};

/// Subgroup generated by `[a, b]` for `a ∈ left`, `b ∈ right`.
fn commutator_subgroup(g: &IndexedGroup, left: &[ElemId], right: &[ElemId]) -> Subgroup {
    let (mut members, mut elements) = g.close(&[]);
    let mut gens: Vec<ElemId> = Vec::new();
    for &a in left {
        let ai = g.inv(a);
        for &b in right {
            let c = g.mul(g.mul(ai, g.inv(b)), g.mul(a, b));
            if !members.contains(c.idx()) {
                let (m, e) = g.extend_closure(&members, &elements, &gens, &[c]);
                gens.push(c);
                members = m;
                elements = e;
            }
        }
    }
    Subgroup::from_members(g, members)
}

/// `H′`, generated by the commutators of all pairs of members of `H`.
pub fn derived_subgroup(g: &IndexedGroup, h: &Subgroup) -> Arc<Subgroup> {
    h.derived
        .get_or_init(|| Arc::new(commutator_subgroup(g, h.elements(), h.elements())))
        .clone()
}

/// `|H/H′|`.
pub fn abelianization_order(g: &IndexedGroup, h: &Subgroup) -> usize {
    h.order() / derived_subgroup(g, h).order()
}

/// `γ₁ = H`, `γ_{k+1} = [γ_k, H]`. Returns the class (the last `k` with
/// `γ_k ≠ 1`) together with the orders `|γ₁|, |γ₂|, …`; a series that
/// stalls above the trivial group ends with the repeated order.
pub fn lower_central_series(g: &IndexedGroup, h: &Subgroup) -> (Nilpotency, Vec<usize>) {
    h.nilpotency
        .get_or_init(|| {
            let mut orders = vec![h.order()];
            if h.is_trivial() {
                return (Nilpotency::Class(0), orders);
            }
            let mut current = derived_subgroup(g, h);
            let mut k = 1;
            loop {
                orders.push(current.order());
                if current.is_trivial() {
                    return (Nilpotency::Class(k), orders);
                }
                if current.order() == orders[orders.len() - 2] {
                    return (Nilpotency::NotNilpotent, orders);
                }
                current = Arc::new(commutator_subgroup(g, current.elements(), h.elements()));
                k += 1;
            }
        })
        .clone()
}

/// Invariant factors `d₁ | d₂ | …` of `H/H′`.
///
/// Repeatedly takes an element of maximal order in `H/N` (starting from
/// `N = H′`), records that order and enlarges `N` by it; a cyclic subgroup of
/// maximal order in a finite abelian group is a direct factor.
pub fn abelian_invariants(g: &IndexedGroup, h: &Subgroup) -> Vec<usize> {
    let derived = derived_subgroup(g, h);
    let mut members: FixedBitSet = derived.members().clone();
    let mut elements: Vec<ElemId> = derived.elements().to_vec();
    let mut gens: Vec<ElemId> = derived.generators().to_vec();
    let mut factors = Vec::new();
    while elements.len() < h.order() {
        let order_mod = |x: ElemId| {
            let mut y = x;
            let mut m = 1;
            while !members.contains(y.idx()) {
                y = g.mul(y, x);
                m += 1;
            }
            m
        };
        let (best, m) = h
            .elements()
            .iter()
            .map(|&x| (x, order_mod(x)))
            .fold((h.elements()[0], 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        factors.push(m);
        let (mm, ee) = g.extend_closure(&members, &elements, &gens, &[best]);
        gens.push(best);
        members = mm;
        elements = ee;
    }
    factors.reverse();
    factors
}
