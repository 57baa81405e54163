use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;

use super::report::{ClaimId, ClaimReport};
use crate::cayley::{self, Diameter};
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, floor_rational_power, small_parts};
use crate::indexed::{ElemId, IndexedGroup, QuotientView};
use crate::structure::{
    abelianization_order, best_abelian_section, center, centralizer_sum, class_count, conjugation_kernel,
    derived_subgroup, find_bt_witness_where, lower_central_series, schreier_generators, Nilpotency, Subgroup,
};

/// `{a,b,...}` in element notation.
pub fn gens_label(g: &IndexedGroup, gens: &[ElemId]) -> String {
    let parts: Vec<String> = gens.iter().map(|&x| g.element(x).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn instance(g: &IndexedGroup, gens: &[ElemId]) -> String {
    format!("{} S={}", g.label(), gens_label(g, gens))
}

fn subgroup_label(g: &IndexedGroup, h: &Subgroup) -> String {
    format!("H=<{}>", gens_label(g, h.generators()).trim_matches(|c| c == '{' || c == '}'))
}

/// `-1` for an infinite diameter.
fn diam_int(d: Diameter) -> BigInt {
    match d {
        Diameter::Finite(n) => n.into(),
        Diameter::Infinite => (-1).into(),
    }
}

fn require_generating(g: &IndexedGroup, gens: &[ElemId]) -> Result<usize> {
    match cayley::diameter(g, gens)? {
        Diameter::Finite(d) => Ok(d),
        Diameter::Infinite => Err(Error::precondition(format!(
            "{} does not generate {}",
            gens_label(g, gens),
            g.label()
        ))),
    }
}

pub fn is_abelian(g: &IndexedGroup) -> bool {
    let gens = g.generators();
    gens.iter()
        .all(|&a| gens.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
}

/// `|G| ≤ C(diam + |S|, |S|)` for abelian `G`.
pub fn check_abelian_diameter(g: &IndexedGroup, gens: &[ElemId]) -> Result<ClaimReport> {
    if !is_abelian(g) {
        return Err(Error::precondition(format!("{} is not abelian", g.label())));
    }
    let d = require_generating(g, gens)?;
    let s = gens.len() as u64;
    let bound = binomial(d as u64 + s, s);
    let order = BigInt::from(g.order());
    let literal = BigInt::from(d).pow(s as u32) >= order;
    let mut r = ClaimReport::new(ClaimId::AbelianDiam, instance(g, gens));
    r.int("order", g.order())
        .int("gens", s)
        .int("diameter", d)
        .int("bound", bound.clone())
        .flag("tight", order == BigInt::from(bound))
        .flag("literal_form_holds", literal)
        .note("bound counts exponent vectors of total degree at most diam");
    if !literal {
        r.note("diam >= |G|^(1/|S|) fails under the zero-based distance convention");
    }
    Ok(r.finish())
}

struct SchreierChain {
    index: usize,
    sbar: Vec<ElemId>,
    size_bound: usize,
    in_subgroup: bool,
    diameter_h: Diameter,
}

fn schreier_chain(g: &IndexedGroup, h: &Subgroup, gens: &[ElemId]) -> Result<SchreierChain> {
    let data = schreier_generators(g, h, gens)?;
    let in_subgroup = data.generators.iter().all(|&x| h.contains(x));
    let diameter_h = if in_subgroup {
        cayley::diameter(&h.view(g), &data.generators)?
    } else {
        Diameter::Infinite
    };
    Ok(SchreierChain {
        index: h.index(),
        size_bound: data.size_bound,
        sbar: data.generators,
        in_subgroup,
        diameter_h,
    })
}

#[derive(Default)]
struct SchreierTally {
    subgroups: usize,
    not_in_subgroup: usize,
    not_generating: usize,
    over_size_bound: usize,
    over_diameter: usize,
    max_diameter: usize,
    max_size: usize,
}

impl SchreierTally {
    fn add(&mut self, c: &SchreierChain, diameter: usize) {
        self.subgroups += 1;
        self.not_in_subgroup += usize::from(!c.in_subgroup);
        self.over_size_bound += usize::from(c.sbar.len() > c.size_bound);
        self.max_size = self.max_size.max(c.sbar.len());
        match c.diameter_h {
            Diameter::Finite(dh) => {
                self.over_diameter += usize::from(dh > diameter);
                self.max_diameter = self.max_diameter.max(dh);
            }
            Diameter::Infinite => self.not_generating += 1,
        }
    }

    fn write(&self, r: &mut ClaimReport) {
        r.int("subgroups", self.subgroups)
            .int("not_in_subgroup", self.not_in_subgroup)
            .int("not_generating", self.not_generating)
            .int("over_size_bound", self.over_size_bound)
            .int("over_diameter", self.over_diameter)
            .int("max_diameter_subgroup", self.max_diameter)
            .int("max_schreier_size", self.max_size);
    }
}

/// Schreier generators of one subgroup: inside `H`, generating `H`, at most
/// `|G:H||S|` of them, and `diam(H, S̄) ≤ diam(G, S)`.
pub fn check_schreier(g: &IndexedGroup, h: &Subgroup, gens: &[ElemId]) -> Result<ClaimReport> {
    let d = require_generating(g, gens)?;
    let c = schreier_chain(g, h, gens)?;
    let mut tally = SchreierTally::default();
    tally.add(&c, d);
    let mut r = ClaimReport::new(
        ClaimId::Schreier,
        format!("{} {}", instance(g, gens), subgroup_label(g, h)),
    );
    tally.write(&mut r);
    r.int("diameter", d)
        .int("index", c.index)
        .int("gens", gens.len())
        .int("schreier_size", c.sbar.len())
        .int("size_bound", c.size_bound)
        .int("diameter_subgroup", diam_int(c.diameter_h));
    Ok(r.finish())
}

/// [`check_schreier`] over every subgroup in `subgroups`.
pub fn check_schreier_all(g: &IndexedGroup, subgroups: &[Subgroup], gens: &[ElemId]) -> Result<ClaimReport> {
    let d = require_generating(g, gens)?;
    let mut tally = SchreierTally::default();
    for h in subgroups {
        tally.add(&schreier_chain(g, h, gens)?, d);
    }
    let mut r = ClaimReport::new(ClaimId::Schreier, instance(g, gens));
    tally.write(&mut r);
    r.int("diameter", d).int("gens", gens.len());
    Ok(r.finish())
}

struct AbelianLink {
    order: usize,
    gens: usize,
    diameter: Diameter,
}

/// `diam(H/H′, ρ(S̄))` with `ρ(S̄)` deduplicated and the identity removed.
fn abelian_link(g: &IndexedGroup, h: &Subgroup, sbar: &[ElemId]) -> Result<AbelianLink> {
    let derived = derived_subgroup(g, h);
    let q = QuotientView::new(g, h.elements(), derived.elements());
    let e = q.project(g.identity());
    let mut rho: Vec<ElemId> = Vec::new();
    for &x in sbar {
        let y = q.project(x);
        if y != e && !rho.contains(&y) {
            rho.push(y);
        }
    }
    Ok(AbelianLink {
        order: abelianization_order(g, h),
        gens: rho.len(),
        diameter: cayley::diameter(&q, &rho)?,
    })
}

struct ChainLinks {
    link1: bool,
    link2: bool,
    link3: bool,
    tight: bool,
}

fn links(d: usize, c: &SchreierChain, ab: &AbelianLink, s: usize) -> ChainLinks {
    let le = |a: Diameter, b: Diameter| matches!((a, b), (Diameter::Finite(x), Diameter::Finite(y)) if x <= y);
    let bound = match ab.diameter {
        Diameter::Finite(dab) => binomial((dab + ab.gens) as u64, ab.gens as u64),
        Diameter::Infinite => 0u32.into(),
    };
    let order = num_bigint::BigUint::from(ab.order);
    ChainLinks {
        link1: le(c.diameter_h, Diameter::Finite(d)),
        link2: le(ab.diameter, c.diameter_h),
        link3: ab.gens <= c.index * s && order <= bound,
        tight: order == bound,
    }
}

/// `diam(G,S) ≥ diam(H,S̄) ≥ diam(H/H′,ρ(S̄))` and
/// `|H/H′| ≤ C(diam(H/H′,ρ(S̄)) + m, m)` for one subgroup.
pub fn check_theorem_b(g: &IndexedGroup, h: &Subgroup, gens: &[ElemId]) -> Result<ClaimReport> {
    let d = require_generating(g, gens)?;
    let c = schreier_chain(g, h, gens)?;
    let ab = abelian_link(g, h, &c.sbar)?;
    let l = links(d, &c, &ab, gens.len());
    let mut r = ClaimReport::new(
        ClaimId::TheoremB,
        format!("{} {}", instance(g, gens), subgroup_label(g, h)),
    );
    let bound = match ab.diameter {
        Diameter::Finite(dab) => binomial((dab + ab.gens) as u64, ab.gens as u64),
        Diameter::Infinite => 0u32.into(),
    };
    r.int("diameter", d)
        .int("diameter_subgroup", diam_int(c.diameter_h))
        .int("diameter_abelianization", diam_int(ab.diameter))
        .int("abelianization_order", ab.order)
        .int("quotient_gens", ab.gens)
        .int("index", c.index)
        .int("gens", gens.len())
        .int("bound", bound)
        .flag("tight", l.tight)
        .int("epsilon_divisor", c.index * gens.len())
        .note("epsilon_divisor is |G:H||S|, the literal exponent scale; informational");
    Ok(r.finish())
}

/// [`check_theorem_b`] over every subgroup in `subgroups`.
pub fn check_theorem_b_all(g: &IndexedGroup, subgroups: &[Subgroup], gens: &[ElemId]) -> Result<ClaimReport> {
    let d = require_generating(g, gens)?;
    let mut fails = [0usize; 3];
    let mut tight = 0;
    for h in subgroups {
        let c = schreier_chain(g, h, gens)?;
        let ab = abelian_link(g, h, &c.sbar)?;
        let l = links(d, &c, &ab, gens.len());
        fails[0] += usize::from(!l.link1);
        fails[1] += usize::from(!l.link2);
        fails[2] += usize::from(!l.link3);
        tight += usize::from(l.tight);
    }
    let mut r = ClaimReport::new(ClaimId::TheoremB, instance(g, gens));
    r.int("diameter", d)
        .int("gens", gens.len())
        .int("subgroups", subgroups.len())
        .int("link1_failures", fails[0])
        .int("link2_failures", fails[1])
        .int("link3_failures", fails[2])
        .int("tight_subgroups", tight);
    Ok(r.finish())
}

fn whole_of(g: &IndexedGroup, subgroups: &[Subgroup]) -> Subgroup {
    subgroups
        .iter()
        .find(|h| h.order() == g.order())
        .cloned()
        .unwrap_or_else(|| Subgroup::whole(g))
}

/// `k(G) ≥ k(H)/|G:H|` and `k(H) ≥ |H/H′|` for every subgroup.
pub fn check_conjugacy_bound(g: &IndexedGroup, subgroups: &[Subgroup]) -> Result<ClaimReport> {
    let whole = whole_of(g, subgroups);
    let k = class_count(g, &whole);
    let mut max_ratio = BigRational::from_integer(0.into());
    let mut max_order = 0;
    let mut min_slack: Option<i64> = None;
    for h in subgroups {
        let kh = class_count(g, h);
        let ratio = BigRational::new(BigInt::from(kh), BigInt::from(h.index()));
        if ratio > max_ratio {
            max_ratio = ratio;
            max_order = h.order();
        }
        let slack = kh as i64 - abelianization_order(g, h) as i64;
        min_slack = Some(min_slack.map_or(slack, |m| m.min(slack)));
    }
    let mut r = ClaimReport::new(ClaimId::ConjBound, g.label().to_string());
    r.int("classes", k)
        .int("order", g.order())
        .int("centralizer_sum", centralizer_sum(g, &whole))
        .int("subgroups", subgroups.len())
        .rational("max_subgroup_classes_over_index", max_ratio)
        .int("max_ratio_subgroup_order", max_order)
        .int("min_classes_minus_abelianization", min_slack.unwrap_or(0));
    Ok(r.finish())
}

/// The best abelian-section witness has nilpotency class at most 2.
pub fn check_lemma_nilp2(g: &IndexedGroup, subgroups: &[Subgroup]) -> Result<ClaimReport> {
    let (max_ab, h) =
        best_abelian_section(g, subgroups).ok_or_else(|| Error::precondition("empty subgroup list"))?;
    let (class, series) = lower_central_series(g, h);
    let mut r = ClaimReport::new(ClaimId::Nilp2, g.label().to_string());
    r.int("subgroup_order", h.order())
        .int("max_abelian_section", max_ab)
        .flag("nilpotent", class != Nilpotency::NotNilpotent);
    if let Some(c) = class.class() {
        r.int("class", c);
    }
    let series: Vec<String> = series.iter().map(usize::to_string).collect();
    r.note(format!("{} lower central series orders [{}]", subgroup_label(g, h), series.join(",")));
    Ok(r.finish())
}

/// True when `x⁻¹ S x = S` for every generator `x` of `G`.
pub fn is_conjugation_closed(g: &IndexedGroup, set: &[ElemId]) -> bool {
    let mut members = FixedBitSet::with_capacity(g.order());
    for &s in set {
        members.insert(s.idx());
    }
    g.generators().iter().all(|&x| {
        let xi = g.inv(x);
        set.iter().all(|&s| members.contains(g.mul(g.mul(xi, s), x).idx()))
    })
}

/// For a conjugation-closed generating `S`: the kernel of the conjugation
/// action is `Z(G)`, `|G/Z(G)| ≤ |S|!`, and the Schreier chain into `Z(G)`
/// holds. Vacuous when `S` does not generate.
pub fn check_normal_set(g: &IndexedGroup, set: &[ElemId]) -> Result<ClaimReport> {
    if !is_conjugation_closed(g, set) {
        return Err(Error::precondition(format!(
            "{} is not closed under conjugation in {}",
            gens_label(g, set),
            g.label()
        )));
    }
    let mut r = ClaimReport::new(ClaimId::NormalSet, instance(g, set));
    r.int("set_size", set.len());
    let Diameter::Finite(d) = cayley::diameter(g, set)? else {
        r.flag("generates", false).note("does not generate; holds trivially");
        return Ok(r.finish());
    };
    let kernel = conjugation_kernel(g, set);
    let z = center(g);
    let c = schreier_chain(g, &z, set)?;
    let dz = match c.diameter_h {
        Diameter::Finite(x) => Some(x),
        Diameter::Infinite => None,
    };
    let bound = dz.map_or(0u32.into(), |x| binomial((x + c.sbar.len()) as u64, c.sbar.len() as u64));
    let fact = factorial(set.len() as u64);
    let quotient = g.order() / z.order();
    r.flag("generates", true)
        .flag("kernel_is_center", kernel == z)
        .int("kernel_order", kernel.order())
        .int("center_order", z.order())
        .int("central_quotient_order", quotient)
        .int("set_factorial", fact.clone())
        .flag("tight", num_bigint::BigUint::from(quotient) == fact)
        .int("diameter", d)
        .int("diameter_center", diam_int(c.diameter_h))
        .int("center_gens", c.sbar.len())
        .int("index", c.index)
        .int("bound", bound);
    Ok(r.finish())
}

/// Growth-condition scan, reported for the record.
pub fn check_bt_hypothesis(
    g: &IndexedGroup,
    gens: &[ElemId],
    theta: &BigRational,
    delta: &BigRational,
    power_cap: usize,
) -> Result<ClaimReport> {
    let scan = cayley::growth_condition(g, gens, theta, delta, power_cap)?;
    let mut r = ClaimReport::new(ClaimId::BtHypothesis, instance(g, gens));
    r.int("diameter", scan.diameter)
        .rational("theta", theta.clone())
        .rational("delta", delta.clone())
        .int("alpha", scan.alpha)
        .int("max_n", scan.max_n)
        .flag("cap_hit", scan.cap_hit)
        .flag("found", scan.witness.is_some());
    if let Some(w) = &scan.witness {
        r.int("n", w.n)
            .int("size_n", w.s_n)
            .int("size_5n", w.s_5n)
            .rational("ratio", w.ratio.clone());
    }
    Ok(r.finish())
}

/// Parameters of the structure check that follows a growth witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BtParams {
    pub theta: BigRational,
    pub delta: BigRational,
    pub index_cap: usize,
    pub power_cap: usize,
}

impl Default for BtParams {
    fn default() -> Self {
        BtParams {
            theta: BigRational::from_integer(5.into()),
            delta: BigRational::new(1.into(), 4.into()),
            index_cap: 2,
            power_cap: cayley::DEFAULT_POWER_CAP,
        }
    }
}

/// If `|S^{5n}| ≤ θ|S^n|` for some `n ≤ diam^δ`, there is a normal `N`
/// inside the ball of radius `⌊diam^{1/2+δ}⌋` and `H ⊇ N` with `H/N`
/// abelian and `|G:H| ≤ index_cap`.
pub fn check_bt(g: &IndexedGroup, subgroups: &[Subgroup], gens: &[ElemId], p: &BtParams) -> Result<ClaimReport> {
    let scan = cayley::growth_condition(g, gens, &p.theta, &p.delta, p.power_cap)?;
    let mut r = ClaimReport::new(ClaimId::BtWitness, instance(g, gens));
    r.int("diameter", scan.diameter)
        .rational("theta", p.theta.clone())
        .rational("delta", p.delta.clone())
        .int("index_cap", p.index_cap)
        .flag("growth_found", scan.witness.is_some());
    let Some(w) = &scan.witness else {
        r.note("no growth witness; holds vacuously");
        return Ok(r.finish());
    };
    r.int("n", w.n);
    let e = BigRational::new(1.into(), 2.into()) + &p.delta;
    let (en, ed) = small_parts(&e, "1/2 + delta")?;
    let radius = floor_rational_power(scan.diameter as u64, en, ed) as usize;
    let mut ball = FixedBitSet::with_capacity(g.order());
    for x in cayley::ball(g, gens, radius) {
        ball.insert(x.idx());
    }
    r.int("radius", radius);
    let found = find_bt_witness_where(g, subgroups, p.index_cap, |n| n.members().is_subset(&ball));
    r.flag("witness_found", found.is_some());
    if let Some(bt) = found {
        r.int("normal_order", bt.normal.order())
            .int("subgroup_order", bt.subgroup.order())
            .int("index", bt.index)
            .flag("normal_in_ball", bt.normal.members().is_subset(&ball))
            .flag(
                "quotient_abelian",
                derived_subgroup(g, &bt.subgroup).is_subgroup_of(&bt.normal),
            )
            .note(format!(
                "N={} {}",
                subgroup_label(g, &bt.normal).trim_start_matches("H="),
                subgroup_label(g, &bt.subgroup)
            ));
    }
    Ok(r.finish())
}
