//! Breadth-first search over Cayley graphs: balls, diameters, exact power
//! sets and the moderate-growth scan.
//!
//! Balls grow by right multiplication, `B_k = B_{k−1} ∪ B_{k−1}·S`, with the
//! identity at distance 0. `S` is used as given; it is not closed under
//! inverses unless the caller asks for that.

use std::collections::HashSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact;
use crate::genset::GeneratingSet;
use crate::group::FiniteGroup;
use crate::ops::GroupOps;

/// Per-level cap on exact power sets.
pub const DEFAULT_POWER_CAP: usize = 2_000_000;

/// Frontiers larger than this are expanded in parallel.
const PARALLEL_FRONTIER: usize = 8192;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Diameter {
    Finite(usize),
    Infinite,
}

impl Diameter {
    pub fn finite(self) -> Option<usize> {
        match self {
            Diameter::Finite(d) => Some(d),
            Diameter::Infinite => None,
        }
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => f.write_str("infinite"),
        }
    }
}

/// `|B_0|, |B_1|, …` up to the first radius where the ball stops growing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallProfile {
    pub sizes: Vec<usize>,
    pub generates: bool,
}

impl BallProfile {
    pub fn diameter(&self) -> Diameter {
        if self.generates {
            Diameter::Finite(self.sizes.len() - 1)
        } else {
            Diameter::Infinite
        }
    }

    pub fn final_size(&self) -> usize {
        *self.sizes.last().expect("B_0 is always present")
    }
}

fn expand<G: GroupOps>(
    group: &G,
    gens: &[G::Elem],
    frontier: &[G::Elem],
    visited: &HashSet<G::Elem>,
) -> Vec<G::Elem> {
    let step = |x: &G::Elem| {
        gens.iter()
            .map(|s| group.op(x, s))
            .filter(|y| !visited.contains(y))
            .collect::<Vec<_>>()
    };
    if frontier.len() > PARALLEL_FRONTIER {
        frontier
            .par_chunks(1024)
            .flat_map_iter(|chunk| chunk.iter().flat_map(step).collect::<Vec<_>>())
            .collect()
    } else {
        frontier.iter().flat_map(step).collect()
    }
}

/// Runs the level-by-level search, handing each new level to `visit`.
/// Returns the level sizes and the final ball.
fn bfs<G: GroupOps>(
    group: &G,
    gens: &[G::Elem],
    max_radius: Option<usize>,
    mut visit: impl FnMut(usize, &[G::Elem]),
) -> (Vec<usize>, HashSet<G::Elem>) {
    let id = group.identity();
    let mut visited: HashSet<G::Elem> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    visit(0, &frontier);
    let mut sizes = vec![1];
    let mut radius = 0;
    while max_radius.is_none_or(|r| radius < r) {
        let candidates = expand(group, gens, &frontier, &visited);
        let mut next = Vec::new();
        for y in candidates {
            if visited.insert(y.clone()) {
                next.push(y);
            }
        }
        if next.is_empty() {
            break;
        }
        radius += 1;
        visit(radius, &next);
        sizes.push(visited.len());
        frontier = next;
    }
    (sizes, visited)
}

pub fn ball_profile<G: GroupOps>(group: &G, gens: &[G::Elem]) -> Result<BallProfile> {
    let order = group.order()?;
    let (sizes, _) = bfs(group, gens, None, |_, _| {});
    let generates = *sizes.last().unwrap() == order;
    Ok(BallProfile { sizes, generates })
}

pub fn diameter<G: GroupOps>(group: &G, gens: &[G::Elem]) -> Result<Diameter> {
    Ok(ball_profile(group, gens)?.diameter())
}

pub fn generates<G: GroupOps>(group: &G, gens: &[G::Elem]) -> Result<bool> {
    Ok(ball_profile(group, gens)?.generates)
}

/// The ball `B_radius`.
pub fn ball<G: GroupOps>(group: &G, gens: &[G::Elem], radius: usize) -> HashSet<G::Elem> {
    bfs(group, gens, Some(radius), |_, _| {}).1
}

/// Every element with its word distance from the identity, level by level.
pub fn levels<G: GroupOps>(group: &G, gens: &[G::Elem]) -> Vec<Vec<G::Elem>> {
    let mut out = Vec::new();
    bfs(group, gens, None, |_, level| out.push(level.to_vec()));
    out
}

/// `|S¹|, …, |S^m|` for exact-length products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerProfile {
    pub sizes: Vec<usize>,
    pub cap_hit: bool,
}

impl PowerProfile {
    /// `|S^n|` for `n ≥ 1`, when computed.
    pub fn size(&self, n: usize) -> Option<usize> {
        n.checked_sub(1).and_then(|i| self.sizes.get(i).copied())
    }
}

pub fn power_profile<G: GroupOps>(
    group: &G,
    gens: &[G::Elem],
    max_n: usize,
    cap: usize,
) -> Result<PowerProfile> {
    if max_n == 0 {
        return Err(Error::precondition("max_n must be at least 1"));
    }
    let mut level: HashSet<G::Elem> = gens.iter().cloned().collect();
    let mut sizes = vec![level.len()];
    let mut cap_hit = level.len() > cap;
    while !cap_hit && sizes.len() < max_n {
        let current: Vec<G::Elem> = level.into_iter().collect();
        let products: Vec<G::Elem> = if current.len() > PARALLEL_FRONTIER {
            current
                .par_chunks(1024)
                .flat_map_iter(|chunk| {
                    chunk
                        .iter()
                        .flat_map(|x| gens.iter().map(move |s| group.op(x, s)))
                        .collect::<Vec<_>>()
                })
                .collect()
        } else {
            current
                .iter()
                .flat_map(|x| gens.iter().map(move |s| group.op(x, s)))
                .collect()
        };
        level = products.into_iter().collect();
        if level.len() > cap {
            cap_hit = true;
            break;
        }
        sizes.push(level.len());
        // A power set equal to the whole group stays the whole group.
        if level.len() == group.order()? {
            sizes.resize(max_n, level.len());
        }
    }
    Ok(PowerProfile { sizes, cap_hit })
}

/// A scale `n` at which `|S^{5n}| ≤ θ·|S^n|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthWitness {
    pub theta: BigRational,
    pub delta: BigRational,
    pub alpha: u32,
    pub n: usize,
    pub s_n: usize,
    pub s_5n: usize,
    pub ratio: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthScan {
    pub diameter: usize,
    /// `⌊diam^δ⌋`, the largest scale searched.
    pub max_n: usize,
    /// Least `α ≥ 1` with `5^α > diam^{1/8}`.
    pub alpha: u32,
    pub witness: Option<GrowthWitness>,
    pub cap_hit: bool,
}

/// Least `α ≥ 1` with `5^{8α} > diam`.
pub fn growth_alpha(diameter: usize) -> u32 {
    let mut alpha = 1u32;
    let mut p = num_bigint::BigUint::from(5u32).pow(8);
    let step = p.clone();
    while p <= num_bigint::BigUint::from(diameter) {
        p *= &step;
        alpha += 1;
    }
    alpha
}

/// Scans `n = 1 ..= ⌊diam^δ⌋` for the first `n` with `|S^{5n}| ≤ θ|S^n|`.
pub fn growth_condition<G: GroupOps>(
    group: &G,
    gens: &[G::Elem],
    theta: &BigRational,
    delta: &BigRational,
    power_cap: usize,
) -> Result<GrowthScan> {
    exact::positive_parts(theta, "theta")?;
    if *delta > BigRational::one() {
        return Err(Error::precondition(format!("delta must lie in (0, 1], got {delta}")));
    }
    let (dn, dd) = exact::small_parts(delta, "delta")?;
    let diameter = diameter(group, gens)?
        .finite()
        .ok_or_else(|| Error::precondition("the set does not generate the group"))?;
    let alpha = growth_alpha(diameter);
    let max_n = exact::floor_rational_power(diameter as u64, dn, dd) as usize;
    let mut scan = GrowthScan {
        diameter,
        max_n,
        alpha,
        witness: None,
        cap_hit: false,
    };
    if max_n == 0 {
        return Ok(scan);
    }
    let profile = power_profile(group, gens, 5 * max_n, power_cap)?;
    scan.cap_hit = profile.cap_hit;
    for n in 1..=max_n {
        let (Some(s_n), Some(s_5n)) = (profile.size(n), profile.size(5 * n)) else {
            break;
        };
        if exact::at_most_times(s_5n as u64, theta, s_n as u64) {
            scan.witness = Some(GrowthWitness {
                theta: theta.clone(),
                delta: delta.clone(),
                alpha,
                n,
                s_n,
                s_5n,
                ratio: exact::ratio(s_5n as u64, s_n as u64),
            });
            break;
        }
    }
    Ok(scan)
}

/// `⌈c · log₂|G|⌉`, the diameter bound a log-size set must meet.
pub fn log_set_bound(order: usize, c: &BigRational) -> Result<usize> {
    Ok(exact::ceil_scaled_log2(c, order as u64)? as usize)
}

/// Random search for a set of size `⌈c1·log₂|G|⌉` whose diameter is at
/// most `⌈c2·log₂|G|⌉`.
pub fn find_log_set(
    group: &FiniteGroup,
    c1: &BigRational,
    c2: &BigRational,
    trials: usize,
    seed: u64,
) -> Result<Option<GeneratingSet>> {
    let universe = group.enumerate()?;
    let order = universe.len();
    if order < 2 {
        return Err(Error::precondition("the group must have at least two elements"));
    }
    let pool: Vec<_> = universe
        .elements()
        .iter()
        .filter(|e| *e != group.identity())
        .collect();
    let size = log_set_bound(order, c1)?.clamp(1, pool.len());
    let bound = log_set_bound(order, c2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let pick: Vec<_> = sample(&mut rng, pool.len(), size)
            .into_iter()
            .map(|i| pool[i].clone())
            .collect();
        if let Diameter::Finite(d) = diameter(group, &pick)? {
            if d <= bound {
                return Ok(Some(GeneratingSet::new(format!("log-set:{seed}:{trial}"), pick)));
            }
        }
    }
    Ok(None)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_log_log(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::Element;

    fn r(v: u32) -> Element {
        Element::Residues([v].into())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn s3_pair() -> Vec<Element> {
        // (0 1) and (0 1 2)
        vec![Element::perm([1, 0, 2]), Element::perm([1, 2, 0])]
    }

    #[test]
    fn cyclic_ball() {
        let c5 = FiniteGroup::cyclic(5).unwrap();
        let p = ball_profile(&c5, &[r(1)]).unwrap();
        assert_eq!(p.sizes, vec![1, 2, 3, 4, 5]);
        assert!(p.generates);
        assert_eq!(p.diameter(), Diameter::Finite(4));
    }

    #[test]
    fn s3_balls() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let p = ball_profile(&s3, &s3_pair()).unwrap();
        assert_eq!(p.sizes, vec![1, 3, 6]);
        assert_eq!(p.diameter(), Diameter::Finite(2));
        let rot = ball_profile(&s3, &[Element::perm([1, 2, 0])]).unwrap();
        assert_eq!(rot.final_size(), 3);
        assert!(!rot.generates);
        assert_eq!(rot.diameter(), Diameter::Infinite);
    }

    #[test]
    fn power_profiles() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let p = power_profile(&s3, &s3_pair(), 3, DEFAULT_POWER_CAP).unwrap();
        assert_eq!(p.sizes, vec![2, 4, 6]);
        let c = FiniteGroup::cyclic(1000).unwrap();
        let p = power_profile(&c, &[r(1)], 10, DEFAULT_POWER_CAP).unwrap();
        assert_eq!(p.sizes, vec![1; 10]);
        let p = power_profile(&s3, &[s3.identity().clone()], 4, DEFAULT_POWER_CAP).unwrap();
        assert_eq!(p.sizes, vec![1; 4]);
        let p = power_profile(&s3, &s3_pair(), 5, 3).unwrap();
        assert!(p.cap_hit);
        assert_eq!(p.sizes, vec![2]);
    }

    #[test]
    fn growth_scans() {
        let c = FiniteGroup::cyclic(1000).unwrap();
        let scan = growth_condition(&c, &[r(1)], &rat(5, 1), &rat(1, 4), DEFAULT_POWER_CAP).unwrap();
        let w = scan.witness.unwrap();
        assert_eq!((w.n, w.ratio.clone()), (1, rat(1, 1)));
        // diam 999: 5^8 = 390625 > 999
        assert_eq!(scan.alpha, 1);
        assert_eq!(scan.max_n, 5); // ⌊999^{1/4}⌋ = 5

        let s3 = FiniteGroup::symmetric(3).unwrap();
        let scan = growth_condition(&s3, &s3_pair(), &rat(3, 1), &rat(1, 1), DEFAULT_POWER_CAP).unwrap();
        let w = scan.witness.unwrap();
        assert_eq!((w.n, w.s_n, w.s_5n), (1, 2, 6));

        let err = growth_condition(&s3, &[Element::perm([1, 2, 0])], &rat(3, 1), &rat(1, 1), 100);
        assert!(matches!(err, Err(Error::Precondition(_))));
        assert!(growth_condition(&s3, &s3_pair(), &rat(0, 1), &rat(1, 1), 100).is_err());
        assert!(growth_condition(&s3, &s3_pair(), &rat(1, 1), &rat(3, 2), 100).is_err());
    }

    #[test]
    fn alpha_thresholds() {
        assert_eq!(growth_alpha(0), 1);
        assert_eq!(growth_alpha(390_624), 1);
        assert_eq!(growth_alpha(390_625), 2);
    }

    #[test]
    fn powers_of_two_form_a_log_set() {
        let c = FiniteGroup::cyclic(64).unwrap();
        let gens: Vec<_> = (0..6).map(|i| r(1 << i)).collect();
        assert_eq!(diameter(&c, &gens).unwrap(), Diameter::Finite(6));
        assert_eq!(log_set_bound(64, &rat(1, 1)).unwrap(), 6);
    }

    #[test]
    fn log_set_search() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let s = find_log_set(&c2, &rat(4, 1), &rat(4, 1), 10, 1).unwrap().unwrap();
        assert_eq!(s.elements(), &[r(1)]);
        assert_eq!(diameter(&c2, s.elements()).unwrap(), Diameter::Finite(1));
        let s6 = FiniteGroup::symmetric(6).unwrap();
        let found = find_log_set(&s6, &rat(4, 1), &rat(4, 1), 100, 7).unwrap().unwrap();
        assert_eq!(found.len(), 38);
        assert!(diameter(&s6, found.elements()).unwrap() <= Diameter::Finite(38));
    }

    #[test]
    fn log_log_fit() {
        let pts: Vec<(f64, f64)> = (1..6).map(|i| (2f64.powi(i), 3.0 * 2f64.powi(2 * i))).collect();
        assert!((fit_log_log(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(fit_log_log(&pts[..1]), None);
    }
}
