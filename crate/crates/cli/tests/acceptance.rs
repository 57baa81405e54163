//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::{BTreeMap, HashSet};
use std::process::{Command, ExitCode};
use std::time::Instant;

use cayleylab::cayley::{self, Diameter};
use cayleylab::structure::{all_subgroups, class_of, Subgroup};
use cayleylab::verifier::{
    builtin_base, builtin_corpus, check_bt, check_normal_set, check_theorem_b, is_abelian, run_corpus,
    scaling_experiment, scaling_report, BtParams, ClaimId, ClaimReport, ScalingFamily, SweepConfig, DEFAULT_CLAIMS,
};
use cayleylab::{GensSpec, GroupSpec, IndexedGroup, InstanceSpec};
use num_bigint::BigInt;
use num_rational::BigRational;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn group(spec: &str) -> IndexedGroup {
    let spec = GroupSpec::parse(spec).unwrap();
    IndexedGroup::new(spec.construct_in(builtin_base()).unwrap()).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn diam_of(spec: &str, gens: &[&str]) -> Diameter {
    let g = GroupSpec::parse(spec).unwrap().construct().unwrap();
    let set: Vec<_> = if gens.is_empty() {
        g.generators().to_vec()
    } else {
        gens.iter().map(|t| g.parse_element(t).unwrap()).collect()
    };
    cayley::diameter(g.as_ref(), &set).unwrap()
}

fn criterion_1() -> Outcome {
    for n in [5u32, 16, 64, 1000] {
        let d = diam_of(&format!("cyclic:{n}"), &["1"]);
        ensure(d == Diameter::Finite(n as usize - 1), format!("diam(C{n}) = {d}"))?;
    }
    let d = diam_of("sym:3", &["(0 1)", "(0 1 2)"]);
    ensure(d == Diameter::Finite(2), format!("diam(S3) = {d}"))?;
    let d = diam_of("wreath:2", &[]);
    ensure(d == Diameter::Finite(4), format!("diam(W2) = {d}"))?;
    Ok("C5,C16,C64,C1000 = n-1; S3 = 2; W2 = 4".into())
}

/// Every default claim over the builtin corpus, grouped by claim.
fn sweep() -> &'static BTreeMap<ClaimId, Vec<ClaimReport>> {
    static CELL: std::sync::OnceLock<BTreeMap<ClaimId, Vec<ClaimReport>>> = std::sync::OnceLock::new();
    CELL.get_or_init(|| {
        let config = SweepConfig { seed: 0, claims: DEFAULT_CLAIMS.to_vec(), ..SweepConfig::default() };
        let mut by_claim: BTreeMap<ClaimId, Vec<ClaimReport>> = BTreeMap::new();
        for r in run_corpus(&builtin_corpus(), Some(builtin_base()), &config) {
            by_claim.entry(r.claim).or_default().push(r);
        }
        by_claim
    })
}

fn zero_failures(claim: ClaimId) -> Outcome {
    let reports = sweep().get(&claim).map(Vec::as_slice).unwrap_or_default();
    ensure(!reports.is_empty(), format!("no {claim} reports"))?;
    let failed: Vec<&ClaimReport> = reports.iter().filter(|r| !r.pass).collect();
    if let Some(r) = failed.first() {
        return Err(format!("{} of {} failed, first: {} {:?}", failed.len(), reports.len(), r.instance, r.error));
    }
    let groups: HashSet<&str> = reports.iter().map(|r| r.instance.split(" S=").next().unwrap()).collect();
    Ok(format!("{} reports over {} groups, 0 failures", reports.len(), groups.len()))
}

fn criterion_2() -> Outcome {
    let summary = zero_failures(ClaimId::AbelianDiam)?;
    // Standard sets ride along with the sample and may be larger.
    let small = sweep()[&ClaimId::AbelianDiam]
        .iter()
        .filter(|r| r.get_int("gens").is_some_and(|s| *s <= BigInt::from(3)))
        .count();
    ensure(small > 0, "no sets of size <= 3")?;
    Ok(format!("{summary}; {small} with |S| <= 3"))
}

fn criterion_3() -> Outcome {
    zero_failures(ClaimId::Schreier)
}

fn criterion_4() -> Outcome {
    let summary = zero_failures(ClaimId::TheoremB)?;
    let g = group("sym:3");
    let s = g.generators().to_vec();
    let a3 = Subgroup::generated_by(&g, &[g.mul(s[0], s[1])]);
    ensure(a3.order() == 3, "A3 has the wrong order")?;
    let r = check_theorem_b(&g, &a3, &s).map_err(|e| e.to_string())?;
    ensure(r.pass, "S3/A3 fails")?;
    ensure(r.get_bool("tight") == Some(true), "S3/A3 is not tight")?;
    ensure(r.get_int("abelianization_order") == Some(&3.into()), "|A3/A3'| != 3")?;
    ensure(r.get_int("bound") == Some(&3.into()), "C(3,2) != 3")?;
    Ok(format!("{summary}; S3/A3 tight 3 = C(3,2)"))
}

/// Conjugation orbits on the whole group, by flood fill.
fn brute_class_count(g: &IndexedGroup) -> usize {
    let mut seen = HashSet::new();
    let mut count = 0;
    for x in g.ids() {
        if seen.insert(x) {
            count += 1;
            for c in g.ids() {
                seen.insert(g.mul(g.mul(g.inv(c), x), c));
            }
        }
    }
    count
}

fn criterion_5() -> Outcome {
    let summary = zero_failures(ClaimId::ConjBound)?;
    let g = group("sl2:5");
    let k = brute_class_count(&g);
    ensure(k == 9, format!("k(SL2(5)) = {k}"))?;
    let r = sweep()[&ClaimId::ConjBound]
        .iter()
        .find(|r| r.instance.split_whitespace().next() == Some("sl2:5"))
        .ok_or("sl2:5 missing from sweep")?;
    ensure(r.get_int("classes") == Some(&9.into()), "reported k(SL2(5)) != 9")?;
    Ok(format!("{summary}; k(SL2(5)) = 9"))
}

fn criterion_6() -> Outcome {
    let summary = zero_failures(ClaimId::Nilp2)?;
    let reports = &sweep()[&ClaimId::Nilp2];
    let products = reports.iter().filter(|r| r.instance.starts_with("product:")).count();
    let tables = reports.iter().filter(|r| r.instance.starts_with("table:")).count();
    let expected_products = cayleylab::verifier::small_products(63).len();
    ensure(products == expected_products, format!("{products} of {expected_products} products swept"))?;
    ensure(
        tables == cayleylab::verifier::FIXTURE_TABLES.len(),
        format!("{tables} table groups swept"),
    )?;
    Ok(format!("{summary}; includes {products} products of order <= 63 and {tables} table groups"))
}

fn criterion_7() -> Outcome {
    let summary = zero_failures(ClaimId::NormalSet)?;
    let g = group("sym:3");
    let t = g.id_of(&g.group().parse_element("(0 1)").unwrap()).unwrap();
    let set = class_of(&g, t);
    let r = check_normal_set(&g, &set).map_err(|e| e.to_string())?;
    ensure(r.pass, "S3 transpositions fail")?;
    ensure(r.get_int("central_quotient_order") == Some(&6.into()), "|G/Z| != 6")?;
    ensure(r.get_int("set_factorial") == Some(&6.into()), "3! != 6")?;
    ensure(r.get_bool("tight") == Some(true), "not reported tight")?;
    Ok(format!("{summary}; S3 transpositions 6 = 3!"))
}

fn criterion_8() -> Outcome {
    let params = BtParams {
        theta: BigRational::from_integer(5.into()),
        delta: BigRational::new(1.into(), 4.into()),
        index_cap: 2,
        ..BtParams::default()
    };
    let mut corpus: Vec<InstanceSpec> = Vec::new();
    for entry in builtin_corpus() {
        let g = IndexedGroup::new(entry.group.construct_in(builtin_base()).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        if is_abelian(&g) {
            corpus.push(entry);
        }
    }
    let abelian = corpus.len();
    for extra in ["sym:3", "q8", "dihedral:4"] {
        corpus.push(InstanceSpec { group: GroupSpec::parse(extra).unwrap(), gens: None });
    }
    let mut config = SweepConfig { seed: 0, claims: vec![ClaimId::BtWitness], bt: params.clone(), ..SweepConfig::default() };
    config.limits.growth = usize::MAX;
    let reports = run_corpus(&corpus, Some(builtin_base()), &config);
    let failed: Vec<&ClaimReport> = reports.iter().filter(|r| !r.pass).collect();
    if let Some(r) = failed.first() {
        return Err(format!("{} of {} failed, first: {}", failed.len(), reports.len(), r.instance));
    }
    let q8 = group("q8");
    let subs = all_subgroups(&q8).map_err(|e| e.to_string())?;
    let r = check_bt(&q8, &subs, q8.generators(), &params).map_err(|e| e.to_string())?;
    ensure(r.pass, "Q8 fails")?;
    ensure(r.get_int("normal_order") == Some(&2.into()), format!("Q8 witness N has order {:?}", r.get_int("normal_order")))?;
    ensure(r.get_bool("normal_in_ball") == Some(true), "Q8 N outside the ball")?;
    let radius = r.get_int("radius").cloned().unwrap_or_default();
    ensure(radius >= BigInt::from(2), format!("Q8 radius {radius}"))?;
    Ok(format!(
        "{} reports over {abelian} abelian groups + S3, Q8, D4; Q8 has N = Z inside B_{radius}",
        reports.len()
    ))
}

fn criterion_9() -> Outcome {
    let std = GensSpec::standard();
    let powers: Vec<u32> = (4..=10).map(|k| 1 << k).collect();
    let cyc = scaling_experiment(ScalingFamily::Cyclic, &powers, &std).map_err(|e| e.to_string())?;
    let e = cyc.fit_exponent.ok_or("no cyclic fit")?;
    ensure((0.95..=1.05).contains(&e), format!("cyclic exponent {e}"))?;

    let wr = scaling_experiment(ScalingFamily::Wreath, &(2..=8).collect::<Vec<_>>(), &std).map_err(|e| e.to_string())?;
    for row in &wr.rows {
        ensure(row.diameter <= 4 * row.param as usize, format!("W{} diameter {}", row.param, row.diameter))?;
    }
    ensure(scaling_report(&wr).pass, "wreath report fails")?;

    let sl = scaling_experiment(ScalingFamily::Sl2, &[3, 5, 7, 11, 13], &std).map_err(|e| e.to_string())?;
    for row in &sl.rows {
        // diam ≤ 4 log₂|G| ⟺ 2^diam ≤ |G|^4
        let lhs = BigInt::from(2).pow(row.diameter as u32);
        let rhs = BigInt::from(row.order).pow(4);
        ensure(lhs <= rhs, format!("SL2({}) diameter {}", row.param, row.diameter))?;
    }
    ensure(scaling_report(&sl).pass, "sl2 report fails")?;

    let d = diam_of("cyclic:64", &["1", "2", "4", "8", "16", "32"]);
    ensure(matches!(d, Diameter::Finite(n) if n <= 6), format!("cyclic:64 power-of-two diameter {d}"))?;
    let worst_wreath = wr.rows.iter().map(|r| r.diameter as f64 / r.param as f64).fold(0.0, f64::max);
    Ok(format!(
        "cyclic exponent {e:.4}; wreath max diam/n {worst_wreath:.2}; sl2 diameters {:?}; cyclic:64 log set diameter {d}",
        sl.rows.iter().map(|r| r.diameter).collect::<Vec<_>>()
    ))
}

fn sweep_bytes(threads: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cayleylab"))
        .args(["sweep", "--corpus", "builtin", "--seed", "42", "--format", "json", "--threads", threads])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), format!("sweep exited {:?}", out.status.code()))?;
    Ok(out.stdout)
}

fn criterion_10() -> Outcome {
    let a = sweep_bytes("4")?;
    let b = sweep_bytes("2")?;
    ensure(!a.is_empty(), "empty sweep output")?;
    ensure(a == b, "outputs differ")?;
    let lines = a.iter().filter(|&&c| c == b'\n').count();
    Ok(format!("{lines} JSON lines, {} bytes, identical across runs", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("exact diameters", criterion_1),
        ("abelian bound", criterion_2),
        ("schreier generators", criterion_3),
        ("subgroup/abelianization chain", criterion_4),
        ("conjugacy class bounds", criterion_5),
        ("abelian section nilpotency", criterion_6),
        ("normal generating sets", criterion_7),
        ("growth witness shape", criterion_8),
        ("scaling", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
