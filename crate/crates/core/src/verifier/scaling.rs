use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;

use super::report::{ClaimId, ClaimReport};
use crate::cayley::{self, Diameter};
use crate::error::{Error, Result};
use crate::groupspec::{GensSpec, GroupSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalingFamily {
    Cyclic,
    Dihedral,
    Wreath,
    Sl2,
    /// `elemab:2,k`, parameter `k`.
    Elemab,
}

impl ScalingFamily {
    pub fn name(self) -> &'static str {
        match self {
            ScalingFamily::Cyclic => "cyclic",
            ScalingFamily::Dihedral => "dihedral",
            ScalingFamily::Wreath => "wreath",
            ScalingFamily::Sl2 => "sl2",
            ScalingFamily::Elemab => "elemab",
        }
    }

    pub fn spec(self, param: u32) -> GroupSpec {
        match self {
            ScalingFamily::Cyclic => GroupSpec::Cyclic(param),
            ScalingFamily::Dihedral => GroupSpec::Dihedral(param),
            ScalingFamily::Wreath => GroupSpec::Wreath(param),
            ScalingFamily::Sl2 => GroupSpec::Sl2(param),
            ScalingFamily::Elemab => GroupSpec::Elemab { p: 2, k: param },
        }
    }
}

impl fmt::Display for ScalingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScalingFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cyclic" => Ok(ScalingFamily::Cyclic),
            "dihedral" => Ok(ScalingFamily::Dihedral),
            "wreath" => Ok(ScalingFamily::Wreath),
            "sl2" => Ok(ScalingFamily::Sl2),
            "elemab" => Ok(ScalingFamily::Elemab),
            _ => Err(Error::parse(0, format!("unknown scaling family {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub param: u32,
    pub order: usize,
    pub diameter: usize,
    /// `ln |G|`.
    pub log_order: f64,
    /// Slope of `ln diam` against `ln |G|` over the whole table.
    pub fit_exponent: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingTable {
    pub family: ScalingFamily,
    pub gens: GensSpec,
    /// Sorted by order.
    pub rows: Vec<ScalingRow>,
    pub fit_exponent: Option<f64>,
}

/// Exact diameters across a family, with a log-log fit.
pub fn scaling_experiment(family: ScalingFamily, range: &[u32], gens: &GensSpec) -> Result<ScalingTable> {
    let mut rows = range
        .iter()
        .map(|&param| {
            let group = family.spec(param).construct()?;
            let set = gens.resolve(&group)?;
            let order = group.order()?;
            let diameter = match cayley::diameter(group.as_ref(), set.elements())? {
                Diameter::Finite(d) => d,
                Diameter::Infinite => {
                    return Err(Error::precondition(format!(
                        "{} does not generate {}",
                        set.label(),
                        group.label()
                    )))
                }
            };
            Ok(ScalingRow {
                param,
                order,
                diameter,
                log_order: (order as f64).ln(),
                fit_exponent: f64::NAN,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.order, r.param));
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.order as f64, r.diameter as f64)).collect();
    let fit = cayley::fit_log_log(&points);
    for r in &mut rows {
        r.fit_exponent = fit.unwrap_or(f64::NAN);
    }
    Ok(ScalingTable {
        family,
        gens: gens.clone(),
        rows,
        fit_exponent: fit,
    })
}

/// `diam ≤ 4n` for wreath rows and `2^diam ≤ |G|^4` for SL₂ rows; other
/// families are reported without a bound.
pub fn scaling_report(table: &ScalingTable) -> ClaimReport {
    let params: Vec<String> = table.rows.iter().map(|r| r.param.to_string()).collect();
    let mut r = ClaimReport::new(
        ClaimId::Scaling,
        format!("{} [{}] {}", table.family, params.join(","), table.gens),
    );
    let mut failures = 0usize;
    match table.family {
        ScalingFamily::Wreath => {
            let worst = table
                .rows
                .iter()
                .map(|row| BigRational::new(row.diameter.into(), row.param.into()))
                .max();
            failures = table.rows.iter().filter(|row| row.diameter > 4 * row.param as usize).count();
            if let Some(q) = worst {
                r.rational("max_diameter_over_n", q);
            }
        }
        ScalingFamily::Sl2 => {
            failures = table
                .rows
                .iter()
                .filter(|row| BigUint::from(2u32).pow(row.diameter as u32) > BigUint::from(row.order).pow(4u32))
                .count();
        }
        _ => {}
    }
    r.int("rows", table.rows.len()).int("bound_failures", failures);
    if let Some(e) = table.fit_exponent {
        r.real("fit_exponent", e);
    }
    r.note("empirical");
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_rows() {
        let t = scaling_experiment(ScalingFamily::Cyclic, &[64, 16, 32], &GensSpec::standard()).unwrap();
        let d: Vec<usize> = t.rows.iter().map(|r| r.diameter).collect();
        assert_eq!(d, vec![15, 31, 63]);
        let e = t.fit_exponent.unwrap();
        assert!((e - 1.0).abs() < 0.05, "{e}");
        assert!(scaling_report(&t).pass);
    }

    #[test]
    fn wreath_two() {
        let t = scaling_experiment(ScalingFamily::Wreath, &[2, 3], &GensSpec::standard()).unwrap();
        assert_eq!(t.rows[0].diameter, 4);
        let r = scaling_report(&t);
        assert!(r.pass);
        assert!(r.get_rational("max_diameter_over_n").is_some());
    }
}
