use fixedbitset::FixedBitSet;

use super::Subgroup;
use crate::indexed::{ElemId, IndexedGroup};

/// Conjugacy classes of a group (or of a subgroup acting on itself).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyData {
    pub count: usize,
    /// Minimal-key member of each class, classes listed in that order.
    pub representatives: Vec<ElemId>,
    pub sizes: Vec<usize>,
}

/// Orbits of `H` acting on itself by conjugation. Orbits are grown by the
/// generators of `H` only, which reaches the same orbits.
pub fn conjugacy_classes_of(g: &IndexedGroup, h: &Subgroup) -> ConjugacyData {
    let mut seen = FixedBitSet::with_capacity(g.order());
    let conj: Vec<(ElemId, ElemId)> = h.generators().iter().map(|&x| (g.inv(x), x)).collect();
    let mut representatives = Vec::new();
    let mut sizes = Vec::new();
    for &x in h.elements() {
        if seen.put(x.idx()) {
            continue;
        }
        representatives.push(x);
        let mut orbit = vec![x];
        let mut head = 0;
        while head < orbit.len() {
            let y = orbit[head];
            head += 1;
            for &(ci, c) in &conj {
                let z = g.mul(g.mul(ci, y), c);
                if !seen.put(z.idx()) {
                    orbit.push(z);
                }
            }
        }
        sizes.push(orbit.len());
    }
    ConjugacyData {
        count: representatives.len(),
        representatives,
        sizes,
    }
}

pub fn conjugacy_classes(g: &IndexedGroup) -> ConjugacyData {
    conjugacy_classes_of(g, &Subgroup::whole(g))
}

/// `k(H)`, cached on the subgroup.
pub fn class_count(g: &IndexedGroup, h: &Subgroup) -> usize {
    *h.class_count
        .get_or_init(|| conjugacy_classes_of(g, h).count)
}

/// `Σ_{h ∈ H} |C_H(h)|` by direct commutation tests. Dividing by `|H|`
/// gives `k(H)` by orbit counting.
pub fn centralizer_sum(g: &IndexedGroup, h: &Subgroup) -> usize {
    let xs = h.elements();
    xs.iter()
        .map(|&a| xs.iter().filter(|&&b| g.mul(a, b) == g.mul(b, a)).count())
        .sum()
}

pub fn centralizer(g: &IndexedGroup, x: ElemId) -> Subgroup {
    let mut members = FixedBitSet::with_capacity(g.order());
    for y in g.ids() {
        if g.mul(x, y) == g.mul(y, x) {
            members.insert(y.idx());
        }
    }
    Subgroup::from_members(g, members)
}

/// `∩_{s ∈ S} C_G(s)`.
pub fn conjugation_kernel(g: &IndexedGroup, set: &[ElemId]) -> Subgroup {
    let mut members = FixedBitSet::with_capacity(g.order());
    for y in g.ids() {
        if set.iter().all(|&s| g.mul(s, y) == g.mul(y, s)) {
            members.insert(y.idx());
        }
    }
    Subgroup::from_members(g, members)
}

/// `Z(G)`: elements commuting with every generator.
pub fn center(g: &IndexedGroup) -> Subgroup {
    let gens = g.generators().to_vec();
    conjugation_kernel(g, &gens)
}

/// Conjugacy class of `x` in `G`.
pub fn class_of(g: &IndexedGroup, x: ElemId) -> Vec<ElemId> {
    let mut seen = FixedBitSet::with_capacity(g.order());
    for y in g.ids() {
        seen.insert(g.mul(g.mul(g.inv(y), x), y).idx());
    }
    seen.ones().map(|i| ElemId(i as u32)).collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::FiniteGroup;

    fn indexed(g: FiniteGroup) -> IndexedGroup {
        IndexedGroup::new(Arc::new(g)).unwrap()
    }

    #[test]
    fn class_counts() {
        let s3 = indexed(FiniteGroup::symmetric(3).unwrap());
        let c = conjugacy_classes(&s3);
        let mut sizes = c.sizes.clone();
        sizes.sort_unstable();
        assert_eq!((c.count, sizes), (3, vec![1, 2, 3]));
        assert_eq!(conjugacy_classes(&indexed(FiniteGroup::cyclic(7).unwrap())).count, 7);
        let sl = indexed(FiniteGroup::sl2(5).unwrap());
        let whole = Subgroup::whole(&sl);
        assert_eq!(class_count(&sl, &whole), 9);
        assert_eq!(centralizer_sum(&sl, &whole), 9 * 120);
    }

    #[test]
    fn centers_and_kernels() {
        let s3 = indexed(FiniteGroup::symmetric(3).unwrap());
        assert!(center(&s3).is_trivial());
        let transpositions: Vec<ElemId> = ["(0 1)", "(0 2)", "(1 2)"]
            .iter()
            .map(|t| s3.id_of(&s3.group().parse_element(t).unwrap()).unwrap())
            .collect();
        assert!(conjugation_kernel(&s3, &transpositions).is_trivial());
        assert_eq!(conjugation_kernel(&s3, &[s3.identity()]).order(), 6);
        let c6 = indexed(FiniteGroup::cyclic(6).unwrap());
        assert_eq!(center(&c6).order(), 6);

        let q8 = indexed(FiniteGroup::quaternion());
        let i = q8.id_of(&q8.group().generators()[0]).unwrap();
        let ci = centralizer(&q8, i);
        assert_eq!(ci, Subgroup::generated_by(&q8, &[i]));
        assert_eq!(ci.order(), 4);
        let minus_one = q8.mul(i, i);
        assert_eq!(conjugation_kernel(&q8, &[minus_one]).order(), 8);
        assert_eq!(class_of(&q8, i).len(), 2);
    }
}
