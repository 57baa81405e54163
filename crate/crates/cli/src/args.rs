use std::path::PathBuf;

use cayleylab::cayley::DEFAULT_POWER_CAP;
use cayleylab::structure::DEFAULT_SUBGROUP_ORDER_CAP;
use cayleylab::verifier::{ClaimId, ScalingFamily};
use cayleylab::{GensSpec, GroupSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Parser)]
#[command(name = "cayleylab", version, about = "Cayley graph diameters and finite group structure checks")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct RunConfig {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for the engine (default: all cores).
    #[arg(long, global = true, value_parser = positive)]
    pub threads: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Largest group that may be enumerated.
    #[arg(long, global = true, value_parser = positive)]
    pub cap_elements: Option<usize>,
    /// Largest power set `S^n` that may be materialised.
    #[arg(long, global = true, value_parser = positive, default_value_t = DEFAULT_POWER_CAP)]
    pub cap_power: usize,
    /// Largest group whose subgroup lattice may be enumerated.
    #[arg(long, global = true, value_parser = positive, default_value_t = DEFAULT_SUBGROUP_ORDER_CAP)]
    pub cap_subgroups: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Diameter and ball sizes of a Cayley graph.
    Diameter {
        #[arg(long, value_parser = group_spec)]
        group: GroupSpec,
        #[arg(long, value_parser = gens_spec, default_value = "standard")]
        gens: GensSpec,
    },
    /// Power-set growth `|S^n|` and the search for `|S^{5n}| ≤ θ|S^n|`.
    Growth {
        #[arg(long, value_parser = group_spec)]
        group: GroupSpec,
        #[arg(long, value_parser = gens_spec, default_value = "standard")]
        gens: GensSpec,
        /// Also list `|S^n|` for `n = 1..=max-n`.
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, value_parser = rational, default_value = "5")]
        theta: BigRational,
        #[arg(long, value_parser = rational, default_value = "1/4")]
        delta: BigRational,
    },
    /// Invariants, subgroups or conjugacy classes of a group.
    Structure {
        #[arg(long, value_parser = group_spec)]
        group: GroupSpec,
        #[arg(long, conflicts_with_all = ["classes", "best_section"])]
        subgroups: bool,
        #[arg(long, conflicts_with = "best_section")]
        classes: bool,
        #[arg(long)]
        best_section: bool,
    },
    /// Check one claim on one group.
    Verify {
        #[arg(long, value_parser = claim)]
        claim: ClaimId,
        #[arg(long, value_parser = group_spec)]
        group: GroupSpec,
        #[arg(long, value_parser = gens_spec)]
        gens: Option<GensSpec>,
        /// Subgroup generators separated by `;` (SCHREIER, THEOREM_B).
        #[arg(long)]
        subgroup: Option<String>,
        #[arg(long, value_parser = rational, default_value = "5")]
        theta: BigRational,
        #[arg(long, value_parser = rational, default_value = "1/4")]
        delta: BigRational,
        #[arg(long, value_parser = positive, default_value_t = 2)]
        index_cap: usize,
    },
    /// Run claims over a corpus file, or `builtin`.
    Sweep {
        #[arg(long, default_value = "builtin")]
        corpus: String,
        /// `default`, `all`, or a comma-separated list of claim ids.
        #[arg(long, default_value = "default")]
        claims: String,
    },
    /// Exact diameters across a family with a log-log fit.
    Scaling {
        #[arg(long, value_parser = family)]
        family: ScalingFamily,
        /// `a..b` (inclusive) or `a,b,c`.
        #[arg(long, value_parser = param_range)]
        range: ParamRange,
        #[arg(long, value_parser = gens_spec, default_value = "standard")]
        gens: GensSpec,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamRange(pub Vec<u32>);

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn group_spec(s: &str) -> Result<GroupSpec, String> {
    GroupSpec::parse(s).map_err(|e| e.to_string())
}

fn gens_spec(s: &str) -> Result<GensSpec, String> {
    GensSpec::parse(s).map_err(|e| e.to_string())
}

fn claim(s: &str) -> Result<ClaimId, String> {
    s.parse().map_err(|e: cayleylab::Error| e.to_string())
}

fn family(s: &str) -> Result<ScalingFamily, String> {
    s.parse().map_err(|e: cayleylab::Error| e.to_string())
}

/// `p/q`, an integer, or a finite decimal.
pub fn rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let bad = || format!("expected a rational such as 1/4 or 0.25, got {s:?}");
    let q = if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        BigRational::new(n, d)
    } else if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        BigRational::new(digits, scale)
    } else {
        BigRational::from_integer(s.parse().map_err(|_| bad())?)
    };
    if q <= BigRational::zero() {
        return Err("must be positive".into());
    }
    Ok(q)
}

pub fn param_range(s: &str) -> Result<ParamRange, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("expected an integer, got {t:?}"));
    let v = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty range {s}"));
        }
        (a..=b).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if v.is_empty() {
        return Err("empty range".into());
    }
    Ok(ParamRange(v))
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}
