use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use super::Subgroup;
use crate::error::{Error, Result};
use crate::indexed::{ElemId, IndexedGroup};

/// Largest group whose subgroup lattice is enumerated.
pub const DEFAULT_SUBGROUP_ORDER_CAP: usize = 2000;
/// Largest number of subgroups kept before giving up.
pub const DEFAULT_SUBGROUP_COUNT_CAP: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeCaps {
    pub order: usize,
    pub count: usize,
}

impl Default for LatticeCaps {
    fn default() -> Self {
        LatticeCaps {
            order: DEFAULT_SUBGROUP_ORDER_CAP,
            count: DEFAULT_SUBGROUP_COUNT_CAP,
        }
    }
}

pub fn all_subgroups(g: &IndexedGroup) -> Result<Vec<Subgroup>> {
    all_subgroups_with(g, LatticeCaps::default())
}

/// Every subgroup exactly once, sorted by [`Subgroup::canonical_cmp`].
///
/// Starts from the cyclic subgroups and joins each new subgroup with every
/// cyclic subgroup of prime-power order until nothing new appears. Every
/// subgroup is generated by its prime-power elements, so the fixed point
/// contains all of them.
pub fn all_subgroups_with(g: &IndexedGroup, caps: LatticeCaps) -> Result<Vec<Subgroup>> {
    if g.order() > caps.order {
        return Err(Error::Limit {
            what: "subgroup enumeration order",
            cap: caps.order,
            partial: g.order(),
        });
    }
    struct Node {
        members: FixedBitSet,
        elements: Vec<ElemId>,
        gens: Vec<ElemId>,
    }
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut cyclic: Vec<Node> = Vec::new();
    let mut prime_power: Vec<ElemId> = Vec::new();
    for x in g.ids() {
        let (members, elements) = g.close(&[x]);
        if seen.insert(members.clone()) {
            if is_prime_power(elements.len()) {
                prime_power.push(x);
            }
            cyclic.push(Node {
                members,
                elements,
                gens: vec![x],
            });
        }
    }
    let mut all: Vec<FixedBitSet> = cyclic.iter().map(|n| n.members.clone()).collect();
    let mut wave = cyclic;
    while !wave.is_empty() {
        let joins: Vec<Node> = wave
            .par_iter()
            .flat_map_iter(|node| {
                prime_power
                    .iter()
                    .filter(|&&p| !node.members.contains(p.idx()))
                    .map(|&p| {
                        let (members, elements) =
                            g.extend_closure(&node.members, &node.elements, &node.gens, &[p]);
                        let mut gens = node.gens.clone();
                        gens.push(p);
                        Node {
                            members,
                            elements,
                            gens,
                        }
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut next = Vec::new();
        for node in joins {
            if seen.insert(node.members.clone()) {
                all.push(node.members.clone());
                next.push(node);
                if all.len() > caps.count {
                    return Err(Error::Limit {
                        what: "subgroup count",
                        cap: caps.count,
                        partial: all.len(),
                    });
                }
            }
        }
        wave = next;
    }
    let mut subgroups: Vec<Subgroup> = all
        .into_par_iter()
        .map(|m| Subgroup::from_members(g, m))
        .collect();
    subgroups.sort_by(|a, b| a.canonical_cmp(b));
    Ok(subgroups)
}

fn is_prime_power(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d)).unwrap_or(n);
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

/// The normal members of `subgroups`, in the same order.
pub fn normal_subgroups(g: &IndexedGroup, subgroups: &[Subgroup]) -> Vec<Subgroup> {
    subgroups.iter().filter(|h| h.is_normal(g)).cloned().collect()
}
