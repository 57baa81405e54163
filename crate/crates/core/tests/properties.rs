use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use cayleylab::cayley;
use cayleylab::quotient::quotient;
use cayleylab::structure::{
    abelian_invariants, abelianization_order, all_subgroups, center, class_count, conjugacy_classes,
    conjugation_kernel, derived_subgroup, normal_subgroups, schreier_generators, Subgroup,
};
use cayleylab::verifier::{
    check_abelian_diameter, check_conjugacy_bound, check_lemma_nilp2, check_normal_set, check_schreier_all,
    check_theorem_b_all, is_abelian, recheck, sample_generating_sets, ClaimReport,
};
use cayleylab::{ElemId, GroupSpec, IndexedGroup};
use proptest::prelude::*;

const SPECS: [&str; 10] = [
    "cyclic:12",
    "dihedral:6",
    "sym:4",
    "q8",
    "elemab:2:3",
    "sl2:3",
    "wreath:3",
    "product:cyclic:2,sym:3",
    "table:fixtures/a4.tbl",
    "table:fixtures/heisenberg3.tbl",
];

struct Fixture {
    g: IndexedGroup,
    subgroups: Vec<Subgroup>,
}

fn fixtures() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| {
        SPECS
            .iter()
            .map(|s| {
                let spec = GroupSpec::parse(s).unwrap();
                let g = IndexedGroup::new(spec.construct_in(cayleylab::verifier::builtin_base()).unwrap()).unwrap();
                let subgroups = all_subgroups(&g).unwrap();
                Fixture { g, subgroups }
            })
            .collect()
    })
}

fn ids(g: &IndexedGroup, raw: &[usize]) -> Vec<ElemId> {
    raw.iter().map(|&r| ElemId((r % g.order()) as u32)).collect()
}

/// Naive closure: multiply until nothing new appears.
fn naive_closure(g: &IndexedGroup, gens: &[ElemId]) -> BTreeSet<ElemId> {
    let mut set: BTreeSet<ElemId> = BTreeSet::from([g.identity()]);
    loop {
        let mut next = set.clone();
        for &a in &set {
            for &s in gens {
                next.insert(g.mul(a, s));
            }
        }
        if next.len() == set.len() {
            return set;
        }
        set = next;
    }
}

fn commutator(g: &IndexedGroup, a: ElemId, b: ElemId) -> ElemId {
    g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b))
}

/// `H′` as the smallest subgroup containing every commutator and closed
/// under conjugation by `H`.
fn naive_derived(g: &IndexedGroup, h: &Subgroup) -> BTreeSet<ElemId> {
    let mut set: BTreeSet<ElemId> = BTreeSet::new();
    for &a in h.elements() {
        for &b in h.elements() {
            set.insert(commutator(g, a, b));
        }
    }
    loop {
        let gens: Vec<ElemId> = set.iter().copied().collect();
        let mut next = naive_closure(g, &gens);
        for &x in &gens {
            for &c in h.elements() {
                next.insert(g.mul(g.mul(g.inv(c), x), c));
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

/// Orbits of `H` acting on itself by conjugation, by flood fill.
fn naive_orbits(g: &IndexedGroup, h: &Subgroup) -> usize {
    let mut seen = HashSet::new();
    let mut orbits = 0;
    for &x in h.elements() {
        if !seen.insert(x) {
            continue;
        }
        orbits += 1;
        for &c in h.elements() {
            seen.insert(g.mul(g.mul(g.inv(c), x), c));
        }
    }
    orbits
}

fn power_set(g: &IndexedGroup, s: &[ElemId], k: usize) -> HashSet<ElemId> {
    let mut level: HashSet<ElemId> = HashSet::from([g.identity()]);
    for _ in 0..k {
        level = level.iter().flat_map(|&a| s.iter().map(move |&b| (a, b))).map(|(a, b)| g.mul(a, b)).collect();
    }
    level
}

fn generating(g: &IndexedGroup, raw: &[usize]) -> Vec<ElemId> {
    let mut s = ids(g, raw);
    s.extend_from_slice(g.generators());
    s.sort();
    s.dedup();
    s
}

fn pick() -> impl Strategy<Value = usize> {
    0..SPECS.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_matches_naive_and_obeys_lagrange(i in pick(), raw in prop::collection::vec(any::<usize>(), 0..4)) {
        let g = &fixtures()[i].g;
        let gens = ids(g, &raw);
        let h = Subgroup::generated_by(g, &gens);
        let naive = naive_closure(g, &gens);
        prop_assert_eq!(h.elements().iter().copied().collect::<BTreeSet<_>>(), naive);
        prop_assert_eq!(g.order() % h.order(), 0);
        for &a in h.elements() {
            prop_assert!(h.contains(g.inv(a)));
            for &b in h.elements() {
                prop_assert!(h.contains(g.mul(a, b)));
            }
        }
    }

    #[test]
    fn projection_is_a_homomorphism(i in pick(), k in any::<usize>(), a in any::<usize>(), b in any::<usize>()) {
        let f = &fixtures()[i];
        let g = &f.g;
        let normals = normal_subgroups(g, &f.subgroups);
        let n = &normals[k % normals.len()];
        let q = quotient(g, n).unwrap();
        prop_assert_eq!(q.order() * n.order(), g.order());
        let (a, b) = (ElemId((a % g.order()) as u32), ElemId((b % g.order()) as u32));
        let pa = q.project(g.element(a)).unwrap();
        let pb = q.project(g.element(b)).unwrap();
        let pab = q.project(g.element(g.mul(a, b))).unwrap();
        prop_assert_eq!(q.group().multiply(&pa, &pb).unwrap(), pab);
        let same_coset = n.contains(g.mul(g.inv(a), b));
        prop_assert_eq!(pa == pb, same_coset);
    }

    #[test]
    fn balls_are_unions_of_powers(i in pick(), raw in prop::collection::vec(any::<usize>(), 1..4), n in 0usize..5) {
        let g = &fixtures()[i].g;
        let s = ids(g, &raw);
        let ball = cayley::ball(g, &s, n);
        let union: HashSet<ElemId> = (0..=n).flat_map(|k| power_set(g, &s, k)).collect();
        prop_assert_eq!(ball, union);
    }

    #[test]
    fn powers_with_identity_are_balls(i in pick(), raw in prop::collection::vec(any::<usize>(), 1..4), n in 1usize..6) {
        let g = &fixtures()[i].g;
        let mut s = ids(g, &raw);
        s.push(g.identity());
        let profile = cayley::power_profile(g, &s, n, 1 << 20).unwrap();
        for k in 1..=n {
            prop_assert_eq!(profile.size(k), Some(cayley::ball(g, &s, k).len()));
        }
    }

    #[test]
    fn results_ignore_generator_order(i in pick(), raw in prop::collection::vec(any::<usize>(), 1..5), seed in any::<u64>()) {
        let g = &fixtures()[i].g;
        let s = ids(g, &raw);
        let mut t = s.clone();
        t.reverse();
        let shift = seed as usize % t.len();
        t.rotate_left(shift);
        let (ps, pt) = (cayley::ball_profile(g, &s).unwrap(), cayley::ball_profile(g, &t).unwrap());
        prop_assert_eq!(ps, pt);
        prop_assert_eq!(sample_generating_sets(g, seed), sample_generating_sets(g, seed));
    }

    #[test]
    fn schreier_generators_are_sound(i in pick(), k in any::<usize>(), raw in prop::collection::vec(any::<usize>(), 0..3)) {
        let f = &fixtures()[i];
        let g = &f.g;
        let h = &f.subgroups[k % f.subgroups.len()];
        let s = generating(g, &raw);
        let data = schreier_generators(g, h, &s).unwrap();
        prop_assert!(data.generators.iter().all(|&x| h.contains(x)));
        prop_assert!(data.generators.len() <= h.index() * s.len());
        prop_assert_eq!(data.transversal.len(), h.index());
        let closure = naive_closure(g, &data.generators);
        prop_assert_eq!(closure.len(), h.order());
        let dg = cayley::diameter(g, &s).unwrap().finite().unwrap();
        let dh = cayley::diameter(&h.view(g), &data.generators).unwrap();
        prop_assert!(dh.finite().unwrap() <= dg);
    }

    #[test]
    fn derived_subgroup_is_minimal(i in pick(), k in any::<usize>()) {
        let f = &fixtures()[i];
        let g = &f.g;
        let h = &f.subgroups[k % f.subgroups.len()];
        prop_assume!(h.order() <= 200);
        let d = derived_subgroup(g, h);
        prop_assert_eq!(d.elements().iter().copied().collect::<BTreeSet<_>>(), naive_derived(g, h));
        prop_assert_eq!(abelianization_order(g, h) * d.order(), h.order());
    }

    #[test]
    fn class_counts_match_orbits(i in pick(), k in any::<usize>()) {
        let f = &fixtures()[i];
        let g = &f.g;
        let h = &f.subgroups[k % f.subgroups.len()];
        let count = class_count(g, h);
        prop_assert_eq!(count, naive_orbits(g, h));
        // Burnside: Σ|C_H(x)| = k(H)|H|
        let fixed: usize = h
            .elements()
            .iter()
            .map(|&x| h.elements().iter().filter(|&&c| g.mul(x, c) == g.mul(c, x)).count())
            .sum();
        prop_assert_eq!(fixed, count * h.order());
        prop_assert!(count >= abelianization_order(g, h));
    }

    #[test]
    fn abelian_invariants_form_a_divisor_chain(i in pick(), k in any::<usize>()) {
        let f = &fixtures()[i];
        let g = &f.g;
        let h = &f.subgroups[k % f.subgroups.len()];
        let inv = abelian_invariants(g, h);
        prop_assert!(inv.iter().all(|&d| d > 1));
        prop_assert!(inv.windows(2).all(|w| w[1] % w[0] == 0));
        prop_assert_eq!(inv.iter().product::<usize>(), abelianization_order(g, h));
    }

    #[test]
    fn kernel_of_generating_normal_set_is_center(i in pick(), mask in any::<u64>()) {
        let g = &fixtures()[i].g;
        let data = conjugacy_classes(g);
        let mut set = Vec::new();
        for (j, &rep) in data.representatives.iter().enumerate() {
            if rep != g.identity() && mask >> (j % 64) & 1 == 1 {
                set.extend(cayleylab::structure::class_of(g, rep));
            }
        }
        set.sort();
        prop_assume!(!set.is_empty() && naive_closure(g, &set).len() == g.order());
        prop_assert_eq!(conjugation_kernel(g, &set), center(g));
        let r = check_normal_set(g, &set).unwrap();
        prop_assert!(r.pass);
    }
}

fn assert_round_trip(r: &ClaimReport) {
    assert_eq!(recheck(r), Some(r.pass), "{r:?}");
}

#[test]
fn reports_recheck_to_their_verdict() {
    for f in fixtures() {
        let g = &f.g;
        for s in sample_generating_sets(g, 7).iter().take(5) {
            if is_abelian(g) {
                assert_round_trip(&check_abelian_diameter(g, s).unwrap());
            }
            assert_round_trip(&check_schreier_all(g, &f.subgroups, s).unwrap());
            assert_round_trip(&check_theorem_b_all(g, &f.subgroups, s).unwrap());
        }
        assert_round_trip(&check_conjugacy_bound(g, &f.subgroups).unwrap());
        assert_round_trip(&check_lemma_nilp2(g, &f.subgroups).unwrap());
    }
}

#[test]
fn tampered_witness_fails_recheck() {
    let f = &fixtures()[0];
    let g = &f.g;
    let mut r = check_abelian_diameter(g, g.generators()).unwrap();
    assert!(r.pass);
    r.int("diameter", 0);
    assert_eq!(recheck(&r), Some(false));
}
