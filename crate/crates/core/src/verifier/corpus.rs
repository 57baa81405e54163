use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::checks::{
    check_abelian_diameter, check_bt, check_bt_hypothesis, check_conjugacy_bound, check_lemma_nilp2,
    check_normal_set, check_schreier_all, check_theorem_b_all, is_abelian, BtParams,
};
use super::report::{ClaimId, ClaimReport};
use crate::error::{Error, Result};
use crate::exact::binomial;
use crate::groupspec::{GroupSpec, InstanceSpec, RANDOM_GENS_RETRIES};
use crate::indexed::{ElemId, IndexedGroup};
use crate::structure::{all_subgroups_with, class_of, conjugacy_classes, LatticeCaps, Subgroup};

/// Most generating sets checked per group, the standard one included.
pub const SAMPLE_LIMIT: usize = 50;
/// Enumerate every candidate set when there are at most this many.
pub const EXHAUSTIVE_LIMIT: u64 = 500;
/// Largest sampled set size.
pub const MAX_SAMPLED_SIZE: usize = 3;

fn generates(g: &IndexedGroup, set: &[ElemId]) -> bool {
    g.close(set).1.len() == g.order()
}

/// Deterministic 64-bit mix of a seed and a label.
fn mix(seed: u64, label: &str) -> u64 {
    // FNV-1a
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// The declared generators followed by generating sets of size 1 to 3.
///
/// When the number of non-identity subsets of size at most 3 is at most
/// [`EXHAUSTIVE_LIMIT`] they are all listed and the generating ones kept,
/// subsampled (seeded) to stay within [`SAMPLE_LIMIT`]. Otherwise sets are
/// drawn uniformly without replacement, size uniform in 1 to 3, rejecting
/// repeats and non-generating draws.
pub fn sample_generating_sets(g: &IndexedGroup, seed: u64) -> Vec<Vec<ElemId>> {
    let mut standard: Vec<ElemId> = Vec::new();
    for e in g.group().generators() {
        let id = g.id_of(e).expect("generators lie in the group");
        if !standard.contains(&id) {
            standard.push(id);
        }
    }
    if standard.is_empty() {
        standard.push(g.identity());
    }
    let mut out = vec![standard.clone()];
    let pool: Vec<ElemId> = g.ids().filter(|&x| x != g.identity()).collect();
    if pool.is_empty() {
        return out;
    }
    let mut sorted_standard = standard;
    sorted_standard.sort_unstable();
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, g.label()));
    let m = pool.len() as u64;
    let total: u64 = (1..=MAX_SAMPLED_SIZE as u64).map(|k| u64::try_from(binomial(m, k)).unwrap_or(u64::MAX)).sum();
    if total <= EXHAUSTIVE_LIMIT {
        let mut found = Vec::new();
        for k in 1..=MAX_SAMPLED_SIZE.min(pool.len()) {
            for combo in combinations(pool.len(), k) {
                let set: Vec<ElemId> = combo.iter().map(|&i| pool[i]).collect();
                if set != sorted_standard && generates(g, &set) {
                    found.push(set);
                }
            }
        }
        let room = SAMPLE_LIMIT - 1;
        if found.len() > room {
            let mut keep: Vec<usize> = sample(&mut rng, found.len(), room).into_vec();
            keep.sort_unstable();
            found = keep.into_iter().map(|i| found[i].clone()).collect();
        }
        out.extend(found);
        return out;
    }
    let mut seen = std::collections::HashSet::new();
    seen.insert(sorted_standard);
    for _ in 0..RANDOM_GENS_RETRIES {
        if out.len() >= SAMPLE_LIMIT {
            break;
        }
        let k = rng.gen_range(1..=MAX_SAMPLED_SIZE.min(pool.len()));
        let mut set: Vec<ElemId> = sample(&mut rng, pool.len(), k).into_iter().map(|i| pool[i]).collect();
        set.sort_unstable();
        if !seen.contains(&set) && generates(g, &set) {
            seen.insert(set.clone());
            out.push(set);
        }
    }
    out
}

/// `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Directory holding the bundled multiplication tables.
pub fn fixtures_dir() -> PathBuf {
    builtin_base().join("fixtures")
}

/// Base for the relative table paths in [`builtin_corpus`].
pub fn builtin_base() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

pub const FIXTURE_TABLES: [&str; 5] = ["a4.tbl", "dic3.tbl", "f21.tbl", "heisenberg3.tbl", "q16.tbl"];

fn base_families() -> Vec<GroupSpec> {
    let mut v = vec![GroupSpec::Cyclic(1)];
    v.extend((2..=31).map(GroupSpec::Cyclic));
    v.extend((3..=15).map(GroupSpec::Dihedral));
    v.extend([GroupSpec::Sym(3), GroupSpec::Sym(4), GroupSpec::Q8]);
    for (p, k) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)] {
        v.push(GroupSpec::Elemab { p, k });
    }
    v.extend([GroupSpec::Sl2(3), GroupSpec::Wreath(2), GroupSpec::Wreath(3)]);
    v
}

/// Orders computed by closing the declared generators.
fn order_of(spec: &GroupSpec) -> usize {
    spec.construct().and_then(|g| g.order()).unwrap_or(usize::MAX)
}

/// Direct products of two or three non-trivial members of the base
/// families with order at most `max_order`, each unordered choice once.
pub fn small_products(max_order: usize) -> Vec<GroupSpec> {
    let base: Vec<(GroupSpec, usize)> = base_families()
        .into_iter()
        .map(|s| {
            let n = order_of(&s);
            (s, n)
        })
        .filter(|(_, n)| *n >= 2 && *n <= max_order / 2)
        .collect();
    let mut out = Vec::new();
    for i in 0..base.len() {
        for j in i..base.len() {
            let nij = base[i].1 * base[j].1;
            if nij > max_order {
                continue;
            }
            let pair = GroupSpec::Product(Box::new(base[i].0.clone()), Box::new(base[j].0.clone()));
            out.push(pair);
            for k in j..base.len() {
                if nij * base[k].1 <= max_order {
                    let inner = GroupSpec::Product(Box::new(base[j].0.clone()), Box::new(base[k].0.clone()));
                    out.push(GroupSpec::Product(Box::new(base[i].0.clone()), Box::new(inner)));
                }
            }
        }
    }
    out
}

/// The standard sweep corpus: the constructible families up to order 512,
/// every small product up to order 63 and the bundled tables. Table paths
/// are relative to [`builtin_base`].
pub fn builtin_corpus() -> Vec<InstanceSpec> {
    let mut specs: Vec<GroupSpec> = Vec::new();
    specs.extend((1..=12).map(GroupSpec::Cyclic));
    specs.extend([16, 30, 64, 100, 128, 210, 360, 512].map(GroupSpec::Cyclic));
    specs.extend((3..=12).chain([16, 25, 50, 100]).map(GroupSpec::Dihedral));
    specs.extend((1..=5).map(GroupSpec::Sym));
    specs.push(GroupSpec::Q8);
    for (p, k) in [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2), (7, 2)] {
        specs.push(GroupSpec::Elemab { p, k });
    }
    specs.extend([3, 5, 7].map(GroupSpec::Sl2));
    specs.extend((2..=6).map(GroupSpec::Wreath));
    specs.extend(small_products(63));
    specs.extend(FIXTURE_TABLES.iter().map(|t| GroupSpec::Table(Path::new("fixtures").join(t))));
    specs.into_iter().map(|group| InstanceSpec { group, gens: None }).collect()
}

/// Largest group each claim is swept over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepLimits {
    pub abelian: usize,
    pub schreier: usize,
    pub theorem_b: usize,
    pub conjugacy: usize,
    pub nilpotency: usize,
    pub normal_set: usize,
    pub growth: usize,
}

impl Default for SweepLimits {
    fn default() -> Self {
        SweepLimits {
            abelian: 512,
            schreier: 200,
            theorem_b: 200,
            conjugacy: 500,
            nilpotency: 500,
            normal_set: 200,
            growth: 500,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub seed: u64,
    pub claims: Vec<ClaimId>,
    pub bt: BtParams,
    pub limits: SweepLimits,
    pub lattice: LatticeCaps,
}

/// Claims swept when none are named.
pub const DEFAULT_CLAIMS: [ClaimId; 6] = [
    ClaimId::AbelianDiam,
    ClaimId::TheoremB,
    ClaimId::Schreier,
    ClaimId::ConjBound,
    ClaimId::Nilp2,
    ClaimId::NormalSet,
];

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            seed: 0,
            claims: DEFAULT_CLAIMS.to_vec(),
            bt: BtParams::default(),
            limits: SweepLimits::default(),
            lattice: LatticeCaps::default(),
        }
    }
}

struct Context<'a> {
    g: IndexedGroup,
    gens: std::result::Result<Vec<Vec<ElemId>>, Arc<Error>>,
    lattice: OnceLock<std::result::Result<Vec<Subgroup>, Arc<Error>>>,
    entry: &'a InstanceSpec,
    caps: LatticeCaps,
}

impl Context<'_> {
    fn lattice(&self) -> std::result::Result<&[Subgroup], Arc<Error>> {
        match self.lattice.get_or_init(|| all_subgroups_with(&self.g, self.caps).map_err(Arc::new)) {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }
}

fn resolve_gens(g: &IndexedGroup, entry: &InstanceSpec, seed: u64) -> Result<Vec<Vec<ElemId>>> {
    match &entry.gens {
        Some(spec) => {
            let set = spec.resolve(g.group())?;
            Ok(vec![g.ids_of(set.elements())?])
        }
        None => Ok(sample_generating_sets(g, seed)),
    }
}

fn run_entry(entry: &InstanceSpec, base: Option<&Path>, config: &SweepConfig) -> Vec<ClaimReport> {
    let label = entry.to_string();
    let built = match base {
        Some(b) => entry.group.construct_in(b),
        None => entry.group.construct(),
    }
    .and_then(IndexedGroup::new);
    let g = match built {
        Ok(g) => g,
        Err(e) => return config.claims.iter().map(|&c| ClaimReport::failed(c, &label, &e)).collect(),
    };
    let cx = Context {
        gens: resolve_gens(&g, entry, config.seed).map_err(Arc::new),
        g,
        lattice: OnceLock::new(),
        entry,
        caps: config.lattice,
    };
    let mut out = Vec::new();
    for &claim in &config.claims {
        run_claim(&cx, claim, config, &label, &mut out);
    }
    out
}

fn run_claim(cx: &Context, claim: ClaimId, config: &SweepConfig, label: &str, out: &mut Vec<ClaimReport>) {
    let g = &cx.g;
    let n = g.order();
    let lim = &config.limits;
    let fail = |e: &Error| ClaimReport::failed(claim, label, e);
    let per_set = |out: &mut Vec<ClaimReport>, f: &dyn Fn(&[ElemId]) -> Result<ClaimReport>| match &cx.gens {
        Ok(sets) => out.extend(sets.iter().map(|s| f(s).unwrap_or_else(|e| fail(&e)))),
        Err(e) => out.push(fail(e)),
    };
    let with_lattice = |out: &mut Vec<ClaimReport>, f: &dyn Fn(&[Subgroup]) -> Vec<ClaimReport>| match cx.lattice() {
        Ok(subs) => out.extend(f(subs)),
        Err(e) => out.push(fail(&e)),
    };
    match claim {
        ClaimId::AbelianDiam if n <= lim.abelian && is_abelian(g) => {
            per_set(out, &|s| check_abelian_diameter(g, s));
        }
        ClaimId::Schreier if n <= lim.schreier => with_lattice(out, &|subs| {
            per_set_vec(cx, claim, label, |s| check_schreier_all(g, subs, s))
        }),
        ClaimId::TheoremB if n <= lim.theorem_b => with_lattice(out, &|subs| {
            per_set_vec(cx, claim, label, |s| check_theorem_b_all(g, subs, s))
        }),
        ClaimId::ConjBound if n <= lim.conjugacy => with_lattice(out, &|subs| {
            vec![check_conjugacy_bound(g, subs).unwrap_or_else(|e| fail(&e))]
        }),
        ClaimId::Nilp2 if n <= lim.nilpotency => with_lattice(out, &|subs| {
            vec![check_lemma_nilp2(g, subs).unwrap_or_else(|e| fail(&e))]
        }),
        ClaimId::NormalSet if n <= lim.normal_set => {
            if cx.entry.gens.is_some() {
                per_set(out, &|s| check_normal_set(g, s));
            } else {
                let classes = conjugacy_classes(g);
                for &rep in classes.representatives.iter().filter(|&&r| r != g.identity()) {
                    let set = class_of(g, rep);
                    out.push(check_normal_set(g, &set).unwrap_or_else(|e| fail(&e)));
                }
            }
        }
        ClaimId::BtHypothesis if n <= lim.growth => {
            per_set(out, &|s| check_bt_hypothesis(g, s, &config.bt.theta, &config.bt.delta, config.bt.power_cap));
        }
        ClaimId::BtWitness if n <= lim.growth => with_lattice(out, &|subs| {
            per_set_vec(cx, claim, label, |s| check_bt(g, subs, s, &config.bt))
        }),
        _ => {}
    }
}

fn per_set_vec(
    cx: &Context,
    claim: ClaimId,
    label: &str,
    f: impl Fn(&[ElemId]) -> Result<ClaimReport>,
) -> Vec<ClaimReport> {
    match &cx.gens {
        Ok(sets) => sets
            .iter()
            .map(|s| f(s).unwrap_or_else(|e| ClaimReport::failed(claim, label, &e)))
            .collect(),
        Err(e) => vec![ClaimReport::failed(claim, label, e)],
    }
}

/// Runs `config.claims` over every corpus entry. Reports come back in
/// corpus order, then claim order, then generating-set order, regardless of
/// how the work is scheduled. Errors are recorded in the affected reports.
/// `SCALING` is not a per-group claim and is ignored here.
pub fn run_corpus(corpus: &[InstanceSpec], base: Option<&Path>, config: &SweepConfig) -> Vec<ClaimReport> {
    corpus
        .par_iter()
        .map(|entry| run_entry(entry, base, config))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// Reports that could not be evaluated (counted in `failed` too).
    pub errors: usize,
    pub limit_errors: usize,
}

pub fn summarize(reports: &[ClaimReport]) -> Summary {
    let mut s = Summary::default();
    for r in reports {
        s.total += 1;
        if r.pass {
            s.passed += 1;
        } else {
            s.failed += 1;
        }
        if let Some(e) = &r.error {
            s.errors += 1;
            s.limit_errors += usize::from(e.limit);
        }
    }
    s
}
