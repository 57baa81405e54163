//! Coset transversals and Schreier generators.

use std::collections::BTreeMap;

use super::Subgroup;
use crate::error::{Error, Result};
use crate::indexed::{ElemId, IndexedGroup};

/// Generators of `H` obtained from a transversal of its right cosets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierData {
    /// One representative per right coset `Hg`, in breadth-first order.
    pub transversal: Vec<ElemId>,
    /// `t·s·rep(t·s)⁻¹` over `t` in the transversal and `s ∈ S`, first
    /// occurrence kept, identity dropped.
    pub generators: Vec<ElemId>,
    /// `|G:H|·|S|`.
    pub size_bound: usize,
}

/// Right-coset labels: `labels[x]` numbers the coset `Hx`.
fn right_coset_labels(g: &IndexedGroup, h: &Subgroup) -> Vec<u32> {
    const UNSET: u32 = u32::MAX;
    let mut labels = vec![UNSET; g.order()];
    let mut next = 0;
    for x in g.ids() {
        if labels[x.idx()] != UNSET {
            continue;
        }
        for &m in h.elements() {
            labels[g.mul(m, x).idx()] = next;
        }
        next += 1;
    }
    labels
}

fn check_generates(g: &IndexedGroup, gens: &[ElemId]) -> Result<()> {
    let reached = g.close(gens).1.len();
    if reached != g.order() {
        return Err(Error::precondition(format!(
            "the set generates a subgroup of order {reached}, not all {} elements of {}",
            g.order(),
            g.label()
        )));
    }
    Ok(())
}

/// Breadth-first transversal for the right cosets of `H`: each coset's
/// representative is the first element reaching it, ties within a level
/// going to the minimal canonical key. `H` itself is represented by the
/// identity.
pub fn coset_transversal(g: &IndexedGroup, h: &Subgroup, gens: &[ElemId]) -> Result<Vec<ElemId>> {
    check_generates(g, gens)?;
    Ok(transversal_with_labels(g, h, gens).0)
}

fn transversal_with_labels(
    g: &IndexedGroup,
    h: &Subgroup,
    gens: &[ElemId],
) -> (Vec<ElemId>, Vec<u32>, Vec<ElemId>) {
    let labels = right_coset_labels(g, h);
    let index = h.index();
    let mut rep_of_coset = vec![None; index];
    rep_of_coset[labels[g.identity().idx()] as usize] = Some(g.identity());
    let mut transversal = vec![g.identity()];
    let mut level = vec![g.identity()];
    while !level.is_empty() {
        let mut candidates: BTreeMap<u32, ElemId> = BTreeMap::new();
        for &t in &level {
            for &s in gens {
                let y = g.mul(t, s);
                let c = labels[y.idx()];
                if rep_of_coset[c as usize].is_none() {
                    candidates
                        .entry(c)
                        .and_modify(|best| *best = (*best).min(y))
                        .or_insert(y);
                }
            }
        }
        let mut next: Vec<ElemId> = candidates.values().copied().collect();
        next.sort_unstable();
        for &y in &next {
            rep_of_coset[labels[y.idx()] as usize] = Some(y);
        }
        transversal.extend_from_slice(&next);
        level = next;
    }
    let reps = rep_of_coset
        .into_iter()
        .map(|r| r.unwrap_or(ElemId(u32::MAX)))
        .collect();
    (transversal, labels, reps)
}

pub fn schreier_generators(g: &IndexedGroup, h: &Subgroup, gens: &[ElemId]) -> Result<SchreierData> {
    check_generates(g, gens)?;
    let (transversal, labels, reps) = transversal_with_labels(g, h, gens);
    let mut seen = fixedbitset::FixedBitSet::with_capacity(g.order());
    seen.insert(g.identity().idx());
    let mut generators = Vec::new();
    for &t in &transversal {
        for &s in gens {
            let ts = g.mul(t, s);
            let rep = reps[labels[ts.idx()] as usize];
            let x = g.mul(ts, g.inv(rep));
            if !seen.put(x.idx()) {
                generators.push(x);
            }
        }
    }
    Ok(SchreierData {
        transversal,
        generators,
        size_bound: h.index() * gens.len(),
    })
}
