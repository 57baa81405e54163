use std::path::{Path, PathBuf};
use std::sync::Arc;

use cayleylab::cayley::{self, Diameter};
use cayleylab::structure::{
    abelian_invariants, all_subgroups_with, best_abelian_section, center, class_of, conjugacy_classes,
    derived_subgroup, lower_central_series, LatticeCaps, Nilpotency, Subgroup,
};
use cayleylab::verifier::{
    self, builtin_base, builtin_corpus, run_corpus, scaling_experiment, scaling_report, summarize, BtParams,
    ClaimId, ClaimReport, SweepConfig, DEFAULT_CLAIMS,
};
use cayleylab::{ElemId, FiniteGroup, GensSpec, GroupSpec, IndexedGroup};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::args::{is_prime, Command, Format, RunConfig};
use crate::serialize::{self, csv_string, report_json, TOOL_VERSION};
use crate::{CliError, Outcome, EXIT_CAP, EXIT_FAIL, EXIT_PASS};

pub fn dispatch(cmd: &Command, config: &RunConfig) -> Result<Outcome, CliError> {
    match cmd {
        Command::Diameter { group, gens } => diameter(config, group, gens),
        Command::Growth { group, gens, max_n, theta, delta } => growth(config, group, gens, *max_n, theta, delta),
        Command::Structure { group, subgroups, classes, best_section } => {
            let view = match (subgroups, classes, best_section) {
                (true, _, _) => View::Subgroups,
                (_, true, _) => View::Classes,
                (_, _, true) => View::BestSection,
                _ => View::Summary,
            };
            structure(config, group, view)
        }
        Command::Verify { claim, group, gens, subgroup, theta, delta, index_cap } => {
            let bt = BtParams {
                theta: theta.clone(),
                delta: delta.clone(),
                index_cap: *index_cap,
                power_cap: config.cap_power,
            };
            verify(config, *claim, group, gens.as_ref(), subgroup.as_deref(), &bt)
        }
        Command::Sweep { corpus, claims } => sweep(config, corpus, claims),
        Command::Scaling { family, range, gens } => {
            let params: Vec<u32> = match family {
                verifier::ScalingFamily::Sl2 => range.0.iter().copied().filter(|&p| is_prime(p)).collect(),
                _ => range.0.clone(),
            };
            if params.is_empty() {
                return Err(CliError::Usage(format!("no valid {family} parameters in range")));
            }
            let table = scaling_experiment(*family, &params, gens)?;
            let report = scaling_report(&table);
            let stdout = match config.format {
                Format::Csv => serialize::scaling_csv(&table.rows),
                Format::Json => {
                    let rows: Vec<Value> = table.rows.iter().map(serialize::scaling_row_json).collect();
                    let mut m = header();
                    m.insert("family".into(), family.name().into());
                    m.insert("gens".into(), gens.to_string().into());
                    m.insert("rows".into(), rows.into());
                    m.insert("report".into(), report_json(&report));
                    format!("{}\n", Value::Object(m))
                }
                Format::Text => {
                    let mut s = format!("{:>6} {:>8} {:>8} {:>10}\n", "param", "order", "diameter", "ln|G|");
                    for r in &table.rows {
                        s.push_str(&format!("{:>6} {:>8} {:>8} {:>10.4}\n", r.param, r.order, r.diameter, r.log_order));
                    }
                    match table.fit_exponent {
                        Some(e) => s.push_str(&format!("fit exponent {e:.4}\n")),
                        None => s.push_str("fit exponent n/a\n"),
                    }
                    s.push_str(&serialize::reports_text(std::slice::from_ref(&report)));
                    s
                }
            };
            Ok(Outcome { stdout, code: verdict(std::slice::from_ref(&report)) })
        }
    }
}

fn header() -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool-version".into(), TOOL_VERSION.into());
    m
}

/// 1 if any report failed on its merits, else 3 if any hit a cap, else 0.
fn verdict(reports: &[ClaimReport]) -> i32 {
    if reports.iter().any(|r| !r.pass && r.error.as_ref().is_none_or(|e| !e.limit)) {
        EXIT_FAIL
    } else if reports.iter().any(|r| r.error.is_some()) {
        EXIT_CAP
    } else {
        EXIT_PASS
    }
}

fn reports_out(config: &RunConfig, reports: &[ClaimReport]) -> Outcome {
    let stdout = match config.format {
        Format::Json => serialize::reports_json_lines(reports),
        Format::Csv => serialize::reports_csv(reports),
        Format::Text => serialize::reports_text(reports),
    };
    Outcome { stdout, code: verdict(reports) }
}

fn diameter(config: &RunConfig, spec: &GroupSpec, gens: &GensSpec) -> Result<Outcome, CliError> {
    let group = spec.construct()?;
    let set = gens.resolve(&group)?;
    let profile = cayley::ball_profile(group.as_ref(), set.elements())?;
    let d = profile.diameter();
    let stdout = match config.format {
        Format::Text => match d {
            Diameter::Finite(n) => format!("{n}\n"),
            Diameter::Infinite => "infinite\n".to_string(),
        },
        Format::Json => {
            let mut m = header();
            m.insert("group".into(), spec.to_string().into());
            m.insert("gens".into(), set.label().into());
            m.insert("diameter".into(), d.finite().map_or(Value::Null, Value::from));
            m.insert("generates".into(), profile.generates.into());
            m.insert("ball_sizes".into(), profile.sizes.clone().into());
            format!("{}\n", Value::Object(m))
        }
        Format::Csv => csv_string(
            &["radius", "ball_size"],
            profile.sizes.iter().enumerate().map(|(r, s)| vec![r.to_string(), s.to_string()]),
        ),
    };
    Ok(Outcome { stdout, code: EXIT_PASS })
}

fn growth(
    config: &RunConfig,
    spec: &GroupSpec,
    gens: &GensSpec,
    max_n: Option<usize>,
    theta: &BigRational,
    delta: &BigRational,
) -> Result<Outcome, CliError> {
    let group = spec.construct()?;
    let set = gens.resolve(&group)?;
    let scan = cayley::growth_condition(group.as_ref(), set.elements(), theta, delta, config.cap_power)?;
    let powers = match max_n {
        Some(n) => Some(cayley::power_profile(group.as_ref(), set.elements(), n, config.cap_power)?),
        None => None,
    };
    let sizes: Vec<usize> = powers.as_ref().map(|p| p.sizes.clone()).unwrap_or_default();
    let cap_hit = scan.cap_hit || powers.as_ref().is_some_and(|p| p.cap_hit);
    let stdout = match config.format {
        Format::Json => {
            let mut m = header();
            m.insert("group".into(), spec.to_string().into());
            m.insert("gens".into(), set.label().into());
            m.insert("theta".into(), theta.to_string().into());
            m.insert("delta".into(), delta.to_string().into());
            m.insert("diameter".into(), scan.diameter.into());
            m.insert("max_n".into(), scan.max_n.into());
            m.insert("alpha".into(), scan.alpha.into());
            m.insert("cap_hit".into(), cap_hit.into());
            m.insert(
                "witness".into(),
                scan.witness.as_ref().map_or(Value::Null, |w| {
                    json!({ "n": w.n, "size_n": w.s_n, "size_5n": w.s_5n, "ratio": w.ratio.to_string() })
                }),
            );
            if powers.is_some() {
                m.insert("power_sizes".into(), sizes.clone().into());
            }
            format!("{}\n", Value::Object(m))
        }
        Format::Csv => csv_string(
            &["n", "power_size"],
            sizes.iter().enumerate().map(|(i, s)| vec![(i + 1).to_string(), s.to_string()]),
        ),
        Format::Text => {
            let mut s = format!("diameter {}\nmax_n {}\nalpha {}\n", scan.diameter, scan.max_n, scan.alpha);
            match &scan.witness {
                Some(w) => s.push_str(&format!(
                    "witness n={} |S^n|={} |S^5n|={} ratio={}\n",
                    w.n, w.s_n, w.s_5n, w.ratio
                )),
                None => s.push_str("no witness\n"),
            }
            for (i, size) in sizes.iter().enumerate() {
                s.push_str(&format!("|S^{}| = {size}\n", i + 1));
            }
            if cap_hit {
                s.push_str("power-set cap reached\n");
            }
            s
        }
    };
    Ok(Outcome { stdout, code: if cap_hit { EXIT_CAP } else { EXIT_PASS } })
}

enum View {
    Summary,
    Subgroups,
    Classes,
    BestSection,
}

fn indexed(spec: &GroupSpec) -> Result<IndexedGroup, CliError> {
    let group: Arc<FiniteGroup> = spec.construct()?;
    Ok(IndexedGroup::new(group)?)
}

fn lattice(g: &IndexedGroup, config: &RunConfig) -> Result<Vec<Subgroup>, CliError> {
    let caps = LatticeCaps { order: config.cap_subgroups, ..LatticeCaps::default() };
    Ok(all_subgroups_with(g, caps)?)
}

fn elem_list(g: &IndexedGroup, ids: &[ElemId]) -> Vec<String> {
    ids.iter().map(|&x| g.element(x).to_string()).collect()
}

fn nilpotency_value(n: Nilpotency) -> Value {
    n.class().map_or(Value::Null, Value::from)
}

fn structure(config: &RunConfig, spec: &GroupSpec, view: View) -> Result<Outcome, CliError> {
    let g = indexed(spec)?;
    let whole = Subgroup::whole(&g);
    let stdout = match view {
        View::Summary => {
            let classes = conjugacy_classes(&g);
            let z = center(&g);
            let derived = derived_subgroup(&g, &whole);
            let (nil, series) = lower_central_series(&g, &whole);
            let inv = abelian_invariants(&g, &whole);
            let fields: Vec<(&str, Value)> = vec![
                ("group", spec.to_string().into()),
                ("order", g.order().into()),
                ("abelian", verifier::is_abelian(&g).into()),
                ("classes", classes.count.into()),
                ("center_order", z.order().into()),
                ("derived_order", derived.order().into()),
                ("abelian_invariants", inv.into()),
                ("nilpotency_class", nilpotency_value(nil)),
                ("lower_central_series", series.into()),
                ("generators", elem_list(&g, g.generators()).into()),
            ];
            render_fields(config, fields)
        }
        View::Subgroups => {
            let subs = lattice(&g, config)?;
            let rows: Vec<(usize, usize, bool, Vec<String>)> = subs
                .iter()
                .map(|h| (h.order(), h.index(), h.is_normal(&g), elem_list(&g, h.generators())))
                .collect();
            match config.format {
                Format::Json => {
                    let list: Vec<Value> = rows
                        .iter()
                        .map(|(o, i, n, gens)| json!({ "order": o, "index": i, "normal": n, "generators": gens }))
                        .collect();
                    let mut m = header();
                    m.insert("group".into(), spec.to_string().into());
                    m.insert("count".into(), list.len().into());
                    m.insert("subgroups".into(), list.into());
                    format!("{}\n", Value::Object(m))
                }
                Format::Csv => csv_string(
                    &["order", "index", "normal", "generators"],
                    rows.iter()
                        .map(|(o, i, n, gens)| vec![o.to_string(), i.to_string(), n.to_string(), gens.join(" ")]),
                ),
                Format::Text => {
                    let mut s = format!("{} subgroups\n", rows.len());
                    for (o, i, n, gens) in &rows {
                        let mark = if *n { " normal" } else { "" };
                        s.push_str(&format!("order {o} index {i}{mark} <{}>\n", gens.join(", ")));
                    }
                    s
                }
            }
        }
        View::Classes => {
            let data = conjugacy_classes(&g);
            let rows: Vec<(String, usize, usize)> = data
                .representatives
                .iter()
                .zip(&data.sizes)
                .map(|(&r, &size)| (g.element(r).to_string(), size, g.element_order(r)))
                .collect();
            match config.format {
                Format::Json => {
                    let list: Vec<Value> = rows
                        .iter()
                        .map(|(r, s, o)| json!({ "representative": r, "size": s, "element_order": o }))
                        .collect();
                    let mut m = header();
                    m.insert("group".into(), spec.to_string().into());
                    m.insert("count".into(), data.count.into());
                    m.insert("classes".into(), list.into());
                    format!("{}\n", Value::Object(m))
                }
                Format::Csv => csv_string(
                    &["representative", "size", "element_order"],
                    rows.iter().map(|(r, s, o)| vec![r.clone(), s.to_string(), o.to_string()]),
                ),
                Format::Text => {
                    let mut s = format!("{} classes\n", data.count);
                    for (r, size, o) in &rows {
                        s.push_str(&format!("size {size} order {o} {r}\n"));
                    }
                    s
                }
            }
        }
        View::BestSection => {
            let subs = lattice(&g, config)?;
            let (section, h) = best_abelian_section(&g, &subs)
                .ok_or_else(|| CliError::Usage("group has no subgroups".into()))?;
            let (nil, series) = lower_central_series(&g, h);
            let fields: Vec<(&str, Value)> = vec![
                ("group", spec.to_string().into()),
                ("section_order", section.into()),
                ("subgroup_order", h.order().into()),
                ("subgroup_generators", elem_list(&g, h.generators()).into()),
                ("nilpotency_class", nilpotency_value(nil)),
                ("lower_central_series", series.into()),
            ];
            render_fields(config, fields)
        }
    };
    Ok(Outcome { stdout, code: EXIT_PASS })
}

fn render_fields(config: &RunConfig, fields: Vec<(&str, Value)>) -> String {
    let plain = |v: &Value| match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        Value::Array(a) => a.iter().map(|x| x.as_str().map_or(x.to_string(), str::to_string)).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    };
    match config.format {
        Format::Json => {
            let mut m = header();
            for (k, v) in fields {
                m.insert(k.into(), v);
            }
            format!("{}\n", Value::Object(m))
        }
        Format::Csv => csv_string(&["field", "value"], fields.iter().map(|(k, v)| vec![k.to_string(), plain(v)])),
        Format::Text => fields.iter().map(|(k, v)| format!("{k}: {}\n", plain(v))).collect(),
    }
}

fn parse_subgroup(g: &IndexedGroup, text: &str) -> Result<Subgroup, CliError> {
    let mut ids = Vec::new();
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let e = g.group().parse_element(part)?;
        ids.push(g.id_of(&e)?);
    }
    Ok(Subgroup::generated_by(g, &ids))
}

fn verify(
    config: &RunConfig,
    claim: ClaimId,
    spec: &GroupSpec,
    gens: Option<&GensSpec>,
    subgroup: Option<&str>,
    bt: &BtParams,
) -> Result<Outcome, CliError> {
    if claim == ClaimId::Scaling {
        return Err(CliError::Usage("SCALING is checked with the `scaling` command".into()));
    }
    let g = indexed(spec)?;
    let gen_ids = |spec: &GensSpec| -> Result<Vec<ElemId>, CliError> {
        let set = spec.resolve(g.group())?;
        Ok(g.ids_of(set.elements())?)
    };
    let standard = GensSpec::standard();
    let s = gen_ids(gens.unwrap_or(&standard))?;
    let h = subgroup.map(|t| parse_subgroup(&g, t)).transpose()?;
    let reports = match claim {
        ClaimId::AbelianDiam => vec![verifier::check_abelian_diameter(&g, &s)?],
        ClaimId::Schreier => match &h {
            Some(h) => vec![verifier::check_schreier(&g, h, &s)?],
            None => vec![verifier::check_schreier_all(&g, &lattice(&g, config)?, &s)?],
        },
        ClaimId::TheoremB => match &h {
            Some(h) => vec![verifier::check_theorem_b(&g, h, &s)?],
            None => vec![verifier::check_theorem_b_all(&g, &lattice(&g, config)?, &s)?],
        },
        ClaimId::ConjBound => vec![verifier::check_conjugacy_bound(&g, &lattice(&g, config)?)?],
        ClaimId::Nilp2 => vec![verifier::check_lemma_nilp2(&g, &lattice(&g, config)?)?],
        ClaimId::NormalSet => match gens {
            Some(_) => vec![verifier::check_normal_set(&g, &s)?],
            None => {
                let classes = conjugacy_classes(&g);
                classes
                    .representatives
                    .iter()
                    .filter(|&&r| r != g.identity())
                    .map(|&r| verifier::check_normal_set(&g, &class_of(&g, r)))
                    .collect::<Result<Vec<_>, _>>()?
            }
        },
        ClaimId::BtHypothesis => vec![verifier::check_bt_hypothesis(&g, &s, &bt.theta, &bt.delta, bt.power_cap)?],
        ClaimId::BtWitness => vec![verifier::check_bt(&g, &lattice(&g, config)?, &s, bt)?],
        ClaimId::Scaling => unreachable!(),
    };
    Ok(reports_out(config, &reports))
}

fn parse_claims(text: &str) -> Result<Vec<ClaimId>, CliError> {
    match text.trim().to_ascii_lowercase().as_str() {
        "default" => Ok(DEFAULT_CLAIMS.to_vec()),
        "all" => Ok(ClaimId::ALL.into_iter().filter(|&c| c != ClaimId::Scaling).collect()),
        _ => {
            let claims = text
                .split(',')
                .map(|c| c.parse::<ClaimId>().map_err(|e| CliError::Usage(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            if claims.contains(&ClaimId::Scaling) {
                return Err(CliError::Usage("SCALING is checked with the `scaling` command".into()));
            }
            Ok(claims)
        }
    }
}

fn sweep(config: &RunConfig, corpus: &str, claims: &str) -> Result<Outcome, CliError> {
    let claims = parse_claims(claims)?;
    let (entries, base): (_, PathBuf) = if corpus == "builtin" {
        (builtin_corpus(), builtin_base().to_path_buf())
    } else {
        let path = Path::new(corpus);
        let text = std::fs::read_to_string(path).map_err(|source| cayleylab::Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        (cayleylab::groupspec::parse_corpus(&text)?, base)
    };
    let sweep_config = SweepConfig {
        seed: config.seed,
        claims,
        bt: BtParams { power_cap: config.cap_power, ..BtParams::default() },
        lattice: LatticeCaps { order: config.cap_subgroups, ..LatticeCaps::default() },
        ..SweepConfig::default()
    };
    let reports = run_corpus(&entries, Some(&base), &sweep_config);
    let s = summarize(&reports);
    eprintln!(
        "{} reports: {} passed, {} failed ({} errors, {} at a cap)",
        s.total, s.passed, s.failed, s.errors, s.limit_errors
    );
    Ok(reports_out(config, &reports))
}
