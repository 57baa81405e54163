use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, floor_rational_power};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClaimId {
    AbelianDiam,
    TheoremB,
    Schreier,
    ConjBound,
    Nilp2,
    NormalSet,
    BtHypothesis,
    BtWitness,
    Scaling,
}

impl ClaimId {
    pub const ALL: [ClaimId; 9] = [
        ClaimId::AbelianDiam,
        ClaimId::TheoremB,
        ClaimId::Schreier,
        ClaimId::ConjBound,
        ClaimId::Nilp2,
        ClaimId::NormalSet,
        ClaimId::BtHypothesis,
        ClaimId::BtWitness,
        ClaimId::Scaling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClaimId::AbelianDiam => "ABELIAN_DIAM",
            ClaimId::TheoremB => "THEOREM_B",
            ClaimId::Schreier => "SCHREIER",
            ClaimId::ConjBound => "CONJ_BOUND",
            ClaimId::Nilp2 => "NILP2",
            ClaimId::NormalSet => "NORMAL_SET",
            ClaimId::BtHypothesis => "BT_HYPOTHESIS",
            ClaimId::BtWitness => "BT_WITNESS",
            ClaimId::Scaling => "SCALING",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<ClaimId> {
        let wanted = s.trim().to_ascii_uppercase().replace('-', "_");
        ClaimId::ALL
            .into_iter()
            .find(|c| c.name() == wanted)
            .ok_or_else(|| Error::parse(0, format!("unknown claim {s:?}")))
    }
}

/// One named value in a report.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Int(BigInt),
    Rational(BigRational),
    Bool(bool),
    /// Informational only; never read by a pass formula.
    Real(f64),
}

/// Outcome of one claim on one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct ClaimReport {
    pub claim: ClaimId,
    pub instance: String,
    pub pass: bool,
    pub witnesses: BTreeMap<String, Witness>,
    pub notes: String,
    /// Set when the instance could not be evaluated.
    pub error: Option<ReportError>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportError {
    pub limit: bool,
    pub message: String,
}

impl ClaimReport {
    pub fn new(claim: ClaimId, instance: impl Into<String>) -> Self {
        ClaimReport {
            claim,
            instance: instance.into(),
            pass: false,
            witnesses: BTreeMap::new(),
            notes: String::new(),
            error: None,
        }
    }

    pub fn failed(claim: ClaimId, instance: impl Into<String>, err: &Error) -> Self {
        let mut r = Self::new(claim, instance);
        r.error = Some(ReportError {
            limit: err.is_limit(),
            message: err.to_string(),
        });
        r
    }

    pub fn int(&mut self, name: &str, v: impl Into<BigInt>) -> &mut Self {
        self.witnesses.insert(name.into(), Witness::Int(v.into()));
        self
    }

    pub fn rational(&mut self, name: &str, v: BigRational) -> &mut Self {
        self.witnesses.insert(name.into(), Witness::Rational(v));
        self
    }

    pub fn flag(&mut self, name: &str, v: bool) -> &mut Self {
        self.witnesses.insert(name.into(), Witness::Bool(v));
        self
    }

    pub fn real(&mut self, name: &str, v: f64) -> &mut Self {
        self.witnesses.insert(name.into(), Witness::Real(v));
        self
    }

    pub fn note(&mut self, text: impl AsRef<str>) -> &mut Self {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(text.as_ref());
        self
    }

    /// Sets `pass` from the witnesses.
    pub(crate) fn finish(mut self) -> Self {
        self.pass = self.error.is_none() && recheck(&self).unwrap_or(false);
        self
    }

    pub fn get(&self, name: &str) -> Option<&Witness> {
        self.witnesses.get(name)
    }

    pub fn get_int(&self, name: &str) -> Option<&BigInt> {
        match self.witnesses.get(name)? {
            Witness::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn get_bool(&self, name: &str) -> Option<bool> {
        match self.witnesses.get(name)? {
            Witness::Bool(v) => Some(*v),
            _ => None,
        }
    }

    pub fn get_rational(&self, name: &str) -> Option<&BigRational> {
        match self.witnesses.get(name)? {
            Witness::Rational(v) => Some(v),
            _ => None,
        }
    }

    fn u64(&self, name: &str) -> Option<u64> {
        self.get_int(name)?.to_u64()
    }

    /// A diameter witness; `-1` marks an infinite one.
    fn diam(&self, name: &str) -> Option<Option<u64>> {
        let v = self.get_int(name)?;
        Some(if v.is_negative() { None } else { v.to_u64() })
    }
}

fn le(a: &BigInt, b: impl Into<BigInt>) -> bool {
    *a <= b.into()
}

/// `|X| ≤ C(d + m, m)` with `d` possibly infinite.
fn binomial_holds(order: &BigInt, d: Option<u64>, m: u64) -> bool {
    match d {
        Some(d) => le(order, binomial(d + m, m)),
        None => false,
    }
}

/// Recomputes a report's pass flag from its witnesses alone. `None` when a
/// witness the formula needs is missing or has the wrong type.
pub fn recheck(r: &ClaimReport) -> Option<bool> {
    match r.claim {
        ClaimId::AbelianDiam => {
            let s = r.u64("gens")?;
            let d = r.diam("diameter")?;
            Some(binomial_holds(r.get_int("order")?, d, s))
        }
        ClaimId::Schreier => {
            let zero = |n: &str| r.get_int(n).map(|v| v.is_zero());
            let counts = zero("not_in_subgroup")?
                && zero("not_generating")?
                && zero("over_size_bound")?
                && zero("over_diameter")?;
            let single = match (r.u64("schreier_size"), r.u64("size_bound"), r.diam("diameter_subgroup")) {
                (Some(size), Some(bound), Some(dh)) => {
                    size <= bound && matches!((dh, r.diam("diameter")?), (Some(a), Some(b)) if a <= b)
                }
                _ => true,
            };
            Some(counts && single)
        }
        ClaimId::TheoremB => {
            if r.get_int("subgroups").is_some() {
                let zero = |n: &str| r.get_int(n).map(|v| v.is_zero());
                return Some(zero("link1_failures")? && zero("link2_failures")? && zero("link3_failures")?);
            }
            let dg = r.diam("diameter")?;
            let dh = r.diam("diameter_subgroup")?;
            let dab = r.diam("diameter_abelianization")?;
            let m = r.u64("quotient_gens")?;
            let bound = r.u64("index")? * r.u64("gens")?;
            let link1 = matches!((dg, dh), (Some(a), Some(b)) if b <= a);
            let link2 = matches!((dh, dab), (Some(a), Some(b)) if b <= a);
            let link3 = m <= bound && binomial_holds(r.get_int("abelianization_order")?, dab, m);
            Some(link1 && link2 && link3)
        }
        ClaimId::ConjBound => {
            let k = r.get_int("classes")?;
            let order = r.get_int("order")?;
            let orbit = r.get_int("centralizer_sum")?;
            let max_ratio = r.get_rational("max_subgroup_classes_over_index")?;
            let slack = r.get_int("min_classes_minus_abelianization")?;
            Some(
                *orbit == k * order
                    && BigRational::from_integer(k.clone()) >= *max_ratio
                    && !slack.is_negative(),
            )
        }
        ClaimId::Nilp2 => {
            let nilpotent = r.get_bool("nilpotent")?;
            Some(nilpotent && r.u64("class")? <= 2)
        }
        ClaimId::NormalSet => {
            if !r.get_bool("generates")? {
                return Some(true);
            }
            let s = r.u64("set_size")?;
            let kernel_is_center = r.get_bool("kernel_is_center")?;
            let quotient_ok = le(r.get_int("central_quotient_order")?, factorial(s));
            let dg = r.diam("diameter")?;
            let dz = r.diam("diameter_center")?;
            let m = r.u64("center_gens")?;
            let chain = matches!((dg, dz), (Some(a), Some(b)) if b <= a)
                && m <= s * r.u64("index")?
                && binomial_holds(r.get_int("center_order")?, dz, m);
            Some(kernel_is_center && quotient_ok && chain)
        }
        ClaimId::BtHypothesis => {
            let d = r.u64("diameter")?;
            let delta = r.get_rational("delta")?;
            let (dn, dd) = (delta.numer().to_u32()?, delta.denom().to_u32()?);
            let max_n = r.u64("max_n")?;
            if max_n != floor_rational_power(d, dn, dd) {
                return Some(false);
            }
            if !r.get_bool("found")? {
                return Some(true);
            }
            let n = r.u64("n")?;
            let theta = r.get_rational("theta")?;
            let s_n = BigRational::from_integer(r.get_int("size_n")?.clone());
            let s_5n = BigRational::from_integer(r.get_int("size_5n")?.clone());
            Some(1 <= n && n <= max_n && s_5n <= theta * s_n)
        }
        ClaimId::BtWitness => {
            if !r.get_bool("growth_found")? {
                return Some(true);
            }
            let d = r.u64("diameter")?;
            let delta = r.get_rational("delta")?;
            // 1/2 + δ
            let e = BigRational::new(1.into(), 2.into()) + delta;
            let radius = floor_rational_power(d, e.numer().to_u32()?, e.denom().to_u32()?);
            if r.u64("radius")? != radius {
                return Some(false);
            }
            if !r.get_bool("witness_found")? {
                return Some(false);
            }
            Some(
                r.get_bool("normal_in_ball")?
                    && r.get_bool("quotient_abelian")?
                    && r.u64("index")? <= r.u64("index_cap")?,
            )
        }
        ClaimId::Scaling => {
            let ok = r.get_int("bound_failures")?.is_zero();
            let wreath_ok = match r.get_rational("max_diameter_over_n") {
                Some(q) => *q <= BigRational::from_integer(4.into()),
                None => true,
            };
            Some(ok && wreath_ok)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_names_round_trip() {
        for c in ClaimId::ALL {
            assert_eq!(c.name().parse::<ClaimId>().unwrap(), c);
        }
        assert_eq!("nilp2".parse::<ClaimId>().unwrap(), ClaimId::Nilp2);
        assert!("LEMMA9".parse::<ClaimId>().is_err());
    }

    #[test]
    fn abelian_formula() {
        let mut r = ClaimReport::new(ClaimId::AbelianDiam, "c5");
        r.int("order", 5).int("gens", 1).int("diameter", 4);
        assert_eq!(recheck(&r), Some(true));
        r.int("diameter", 3);
        assert_eq!(recheck(&r), Some(false));
        r.int("diameter", -1);
        assert_eq!(recheck(&r), Some(false));
        r.witnesses.remove("gens");
        assert_eq!(recheck(&r), None);
        assert!(!r.finish().pass);
    }
}
