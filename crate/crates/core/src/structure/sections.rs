use super::series::{abelianization_order, derived_subgroup};
use super::Subgroup;
use crate::indexed::IndexedGroup;

/// Largest abelian section `|K/K′|` over `subgroups`, with the smallest
/// subgroup attaining it. `subgroups` must be sorted canonically (as
/// returned by `all_subgroups`), so the first hit of minimal order wins ties.
pub fn best_abelian_section<'a>(g: &IndexedGroup, subgroups: &'a [Subgroup]) -> Option<(usize, &'a Subgroup)> {
    let mut best: Option<(usize, &Subgroup)> = None;
    for k in subgroups {
        let ab = abelianization_order(g, k);
        let better = match best {
            None => true,
            Some((m, h)) => ab > m || (ab == m && k.canonical_cmp(h).is_lt()),
        };
        if better {
            best = Some((ab, k));
        }
    }
    best
}

/// A normal subgroup `N` and a subgroup `H ⊇ N` with `H/N` abelian.
#[derive(Clone, Debug)]
pub struct BtWitness {
    pub normal: Subgroup,
    pub subgroup: Subgroup,
    /// `|G:H|`.
    pub index: usize,
}

/// Witness of smallest `|G:H|`, then smallest `|N|`, with `|G:H| ≤ index_cap`.
pub fn find_bt_witness(g: &IndexedGroup, subgroups: &[Subgroup], index_cap: usize) -> Option<BtWitness> {
    find_bt_witness_where(g, subgroups, index_cap, |_| true)
}

/// As [`find_bt_witness`], with `N` restricted to those accepted by `allow`.
pub fn find_bt_witness_where(
    g: &IndexedGroup,
    subgroups: &[Subgroup],
    index_cap: usize,
    allow: impl Fn(&Subgroup) -> bool,
) -> Option<BtWitness> {
    let mut best: Option<(usize, usize, &Subgroup, &Subgroup)> = None;
    for n in subgroups.iter().filter(|n| n.is_normal(g) && allow(n)) {
        for h in subgroups {
            let index = h.index();
            if index > index_cap || !n.is_subgroup_of(h) {
                continue;
            }
            if let Some((bi, bn, _, _)) = best {
                if (index, n.order()) >= (bi, bn) {
                    continue;
                }
            }
            if derived_subgroup(g, h).is_subgroup_of(n) {
                best = Some((index, n.order(), n, h));
            }
        }
    }
    best.map(|(index, _, n, h)| BtWitness {
        normal: n.clone(),
        subgroup: h.clone(),
        index,
    })
}
