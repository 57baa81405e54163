//! The group-spec mini-language.
//!
//! ```text
//! spec      := "cyclic:" N | "dihedral:" N | "sym:" N | "q8" | "elemab:" P ":" K
//!            | "sl2:" P | "wreath:" N | "product:" component "," component
//!            | "table:" PATH
//! component := spec | "(" spec ")"
//! gens      := ("standard" | "random:" K ":" SEED | "all-nonid" | "file:" PATH)
//!              ("+symmetric" | "+conj-close")*
//! ```
//!
//! Products are prefix notation, so nesting never needs parentheses; they
//! are accepted anyway and the printer uses them around nested products.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cayley;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::genset::GeneratingSet;
use crate::group::FiniteGroup;

/// Rejection-sampling attempts for `random:k:seed` before giving up.
pub const RANDOM_GENS_RETRIES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Cyclic,
    Dihedral,
    Sym,
    Q8,
    Elemab,
    Sl2,
    Wreath,
    Product,
    Table,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Cyclic => "cyclic",
            Family::Dihedral => "dihedral",
            Family::Sym => "sym",
            Family::Q8 => "q8",
            Family::Elemab => "elemab",
            Family::Sl2 => "sl2",
            Family::Wreath => "wreath",
            Family::Product => "product",
            Family::Table => "table",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(u32),
    Dihedral(u32),
    Sym(u32),
    Q8,
    Elemab { p: u32, k: u32 },
    Sl2(u32),
    Wreath(u32),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Table(PathBuf),
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let mut p = Parser { text, pos: 0 };
        let spec = p.spec()?;
        if p.pos != text.len() {
            return Err(Error::parse(p.pos, "unexpected trailing input"));
        }
        Ok(spec)
    }

    pub fn family(&self) -> Family {
        match self {
            GroupSpec::Cyclic(_) => Family::Cyclic,
            GroupSpec::Dihedral(_) => Family::Dihedral,
            GroupSpec::Sym(_) => Family::Sym,
            GroupSpec::Q8 => Family::Q8,
            GroupSpec::Elemab { .. } => Family::Elemab,
            GroupSpec::Sl2(_) => Family::Sl2,
            GroupSpec::Wreath(_) => Family::Wreath,
            GroupSpec::Product(..) => Family::Product,
            GroupSpec::Table(_) => Family::Table,
        }
    }

    pub fn construct(&self) -> Result<Arc<FiniteGroup>> {
        Ok(Arc::new(self.build(None)?))
    }

    /// As [`construct`](Self::construct), with relative table paths resolved
    /// against `base`. Labels keep the paths as written.
    pub fn construct_in(&self, base: &Path) -> Result<Arc<FiniteGroup>> {
        Ok(Arc::new(self.build(Some(base))?))
    }

    fn build(&self, base: Option<&Path>) -> Result<FiniteGroup> {
        let group = match self {
            GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n)?,
            GroupSpec::Dihedral(n) => FiniteGroup::dihedral(*n)?,
            GroupSpec::Sym(d) => FiniteGroup::symmetric(*d)?,
            GroupSpec::Q8 => FiniteGroup::quaternion(),
            GroupSpec::Elemab { p, k } => FiniteGroup::elementary_abelian(*p, *k)?,
            GroupSpec::Sl2(p) => FiniteGroup::sl2(*p)?,
            GroupSpec::Wreath(n) => FiniteGroup::wreath(*n)?,
            GroupSpec::Product(a, b) => {
                FiniteGroup::product(Arc::new(a.build(base)?), Arc::new(b.build(base)?))
            }
            GroupSpec::Table(path) => match base {
                Some(base) if path.is_relative() => FiniteGroup::from_table_file(&base.join(path))?,
                _ => FiniteGroup::from_table_file(path)?,
            },
        };
        Ok(group.with_label(self.to_string()))
    }

    /// Resolves relative table paths against `base`.
    pub fn rebase(&self, base: &Path) -> GroupSpec {
        match self {
            GroupSpec::Table(p) if p.is_relative() => GroupSpec::Table(base.join(p)),
            GroupSpec::Product(a, b) => {
                GroupSpec::Product(Box::new(a.rebase(base)), Box::new(b.rebase(base)))
            }
            other => other.clone(),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Sym(d) => write!(f, "sym:{d}"),
            GroupSpec::Q8 => f.write_str("q8"),
            GroupSpec::Elemab { p, k } => write!(f, "elemab:{p}:{k}"),
            GroupSpec::Sl2(p) => write!(f, "sl2:{p}"),
            GroupSpec::Wreath(n) => write!(f, "wreath:{n}"),
            GroupSpec::Product(a, b) => {
                f.write_str("product:")?;
                write_component(f, a)?;
                f.write_str(",")?;
                write_component(f, b)
            }
            GroupSpec::Table(p) => write!(f, "table:{}", p.display()),
        }
    }
}

fn write_component(f: &mut fmt::Formatter<'_>, spec: &GroupSpec) -> fmt::Result {
    match spec {
        GroupSpec::Product(..) | GroupSpec::Table(_) => write!(f, "({spec})"),
        _ => write!(f, "{spec}"),
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a number"));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| Error::parse(start, "number out of range"))
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let name = &self.text[start..self.pos];
        let spec = match name {
            "q8" => GroupSpec::Q8,
            "cyclic" | "dihedral" | "sym" | "sl2" | "wreath" => {
                self.expect(b':')?;
                let n = self.number()?;
                match name {
                    "cyclic" => GroupSpec::Cyclic(n),
                    "dihedral" => GroupSpec::Dihedral(n),
                    "sym" => GroupSpec::Sym(n),
                    "sl2" => GroupSpec::Sl2(n),
                    _ => GroupSpec::Wreath(n),
                }
            }
            "elemab" => {
                self.expect(b':')?;
                let p = self.number()?;
                self.expect(b':')?;
                let k = self.number()?;
                GroupSpec::Elemab { p, k }
            }
            "product" => {
                self.expect(b':')?;
                let a = self.component()?;
                self.expect(b',')?;
                let b = self.component()?;
                GroupSpec::Product(Box::new(a), Box::new(b))
            }
            "table" => {
                self.expect(b':')?;
                let path_start = self.pos;
                while self.peek().is_some_and(|c| c != b',' && c != b')') {
                    self.pos += 1;
                }
                if path_start == self.pos {
                    return Err(Error::parse(path_start, "expected a table path"));
                }
                GroupSpec::Table(PathBuf::from(&self.text[path_start..self.pos]))
            }
            "" => return Err(Error::parse(start, "expected a group family")),
            other => return Err(Error::parse(start, format!("unknown group family {other:?}"))),
        };
        Ok(spec)
    }

    fn component(&mut self) -> Result<GroupSpec> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let spec = self.spec()?;
            self.expect(b')')?;
            Ok(spec)
        } else {
            self.spec()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GensSource {
    Standard,
    Random { k: usize, seed: u64 },
    AllNonIdentity,
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GensSpec {
    pub source: GensSource,
    pub symmetric: bool,
    pub conj_close: bool,
}

impl GensSpec {
    pub fn standard() -> Self {
        GensSpec {
            source: GensSource::Standard,
            symmetric: false,
            conj_close: false,
        }
    }

    pub fn parse(text: &str) -> Result<GensSpec> {
        let mut body = text;
        let mut symmetric = false;
        let mut conj_close = false;
        loop {
            if let Some(rest) = body.strip_suffix("+symmetric") {
                symmetric = true;
                body = rest;
            } else if let Some(rest) = body.strip_suffix("+conj-close") {
                conj_close = true;
                body = rest;
            } else {
                break;
            }
        }
        let source = if body == "standard" {
            GensSource::Standard
        } else if body == "all-nonid" {
            GensSource::AllNonIdentity
        } else if let Some(path) = body.strip_prefix("file:") {
            if path.is_empty() {
                return Err(Error::parse(5, "expected a generator file path"));
            }
            GensSource::File(PathBuf::from(path))
        } else if let Some(rest) = body.strip_prefix("random:") {
            let (k, seed) = rest
                .split_once(':')
                .ok_or_else(|| Error::parse(body.len(), "expected random:K:SEED"))?;
            let k = k
                .parse()
                .map_err(|_| Error::parse(7, "expected a set size"))?;
            let seed = seed
                .parse()
                .map_err(|_| Error::parse(8 + rest.find(':').unwrap_or(0), "expected a seed"))?;
            GensSource::Random { k, seed }
        } else {
            return Err(Error::parse(0, format!("unknown generator spec {body:?}")));
        };
        Ok(GensSpec {
            source,
            symmetric,
            conj_close,
        })
    }

    pub fn resolve(&self, group: &FiniteGroup) -> Result<GeneratingSet> {
        let base = match &self.source {
            GensSource::Standard => GeneratingSet::standard(group),
            GensSource::AllNonIdentity => GeneratingSet::new(
                "all-nonid",
                group
                    .enumerate()?
                    .elements()
                    .iter()
                    .filter(|e| *e != group.identity())
                    .cloned(),
            ),
            GensSource::Random { k, seed } => random_generating_set(group, *k, *seed)?,
            GensSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                let mut elems = Vec::new();
                for line in text.lines() {
                    let line = line.split('#').next().unwrap_or("").trim();
                    if line.is_empty() {
                        continue;
                    }
                    let e = group.parse_element(line)?;
                    if !group.contains(&e)? {
                        return Err(Error::Domain(format!("{e} is not in {}", group.label())));
                    }
                    elems.push(e);
                }
                GeneratingSet::new(format!("file:{}", path.display()), elems)
            }
        };
        let mut set = base;
        if self.symmetric {
            set = set.symmetrize(group)?;
        }
        if self.conj_close {
            set = set.conjugation_closure(group)?;
        }
        Ok(set.with_label(self.to_string()))
    }
}

impl fmt::Display for GensSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            GensSource::Standard => f.write_str("standard")?,
            GensSource::AllNonIdentity => f.write_str("all-nonid")?,
            GensSource::Random { k, seed } => write!(f, "random:{k}:{seed}")?,
            GensSource::File(p) => write!(f, "file:{}", p.display())?,
        }
        if self.symmetric {
            f.write_str("+symmetric")?;
        }
        if self.conj_close {
            f.write_str("+conj-close")?;
        }
        Ok(())
    }
}

/// `k` distinct non-identity elements, redrawn until they generate.
pub fn random_generating_set(group: &FiniteGroup, k: usize, seed: u64) -> Result<GeneratingSet> {
    let universe = group.enumerate()?;
    let pool: Vec<&Element> = universe
        .elements()
        .iter()
        .filter(|e| *e != group.identity())
        .collect();
    if k > pool.len() {
        return Err(Error::precondition(format!(
            "cannot pick {k} distinct non-identity elements from a group of order {}",
            universe.len()
        )));
    }
    if pool.is_empty() {
        return Ok(GeneratingSet::new("random", []));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_GENS_RETRIES {
        let pick: Vec<Element> = sample(&mut rng, pool.len(), k)
            .into_iter()
            .map(|i| pool[i].clone())
            .collect();
        if cayley::generates(group, &pick)? {
            return Ok(GeneratingSet::new("random", pick));
        }
    }
    Err(Error::precondition(format!(
        "no generating set of size {k} found in {RANDOM_GENS_RETRIES} draws"
    )))
}

/// One corpus line: a group and, optionally, how to pick its generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSpec {
    pub group: GroupSpec,
    pub gens: Option<GensSpec>,
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.group)?;
        if let Some(g) = &self.gens {
            write!(f, " {g}")?;
        }
        Ok(())
    }
}

/// One group-spec plus optional gens-spec per line; `#` starts a comment.
/// Offsets in errors are relative to the whole text.
pub fn parse_corpus(text: &str) -> Result<Vec<InstanceSpec>> {
    let mut out = Vec::new();
    let mut line_start = 0;
    for raw in text.split_inclusive('\n') {
        let line = raw.split('#').next().unwrap_or("");
        let mut fields = line.split_whitespace();
        if let Some(group_text) = fields.next() {
            let shift = |e: Error, within: &str| match e {
                Error::Parse { offset, message } => Error::Parse {
                    offset: line_start + (within.as_ptr() as usize - raw.as_ptr() as usize) + offset,
                    message,
                },
                other => other,
            };
            let group = GroupSpec::parse(group_text).map_err(|e| shift(e, group_text))?;
            let gens = match fields.next() {
                Some(g) => Some(GensSpec::parse(g).map_err(|e| shift(e, g))?),
                None => None,
            };
            if let Some(extra) = fields.next() {
                return Err(Error::parse(
                    line_start + (extra.as_ptr() as usize - raw.as_ptr() as usize),
                    "expected at most a group spec and a gens spec",
                ));
            }
            out.push(InstanceSpec { group, gens });
        }
        line_start += raw.len();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn simple_specs() {
        assert_eq!(GroupSpec::parse("cyclic:12").unwrap(), GroupSpec::Cyclic(12));
        assert_eq!(GroupSpec::parse("q8").unwrap(), GroupSpec::Q8);
        assert_eq!(
            GroupSpec::parse("elemab:2:3").unwrap(),
            GroupSpec::Elemab { p: 2, k: 3 }
        );
        assert_eq!(
            GroupSpec::parse("product:cyclic:2,cyclic:2").unwrap(),
            GroupSpec::Product(Box::new(GroupSpec::Cyclic(2)), Box::new(GroupSpec::Cyclic(2)))
        );
    }

    #[test]
    fn nested_products_with_and_without_parens() {
        let want = GroupSpec::Product(
            Box::new(GroupSpec::Product(
                Box::new(GroupSpec::Cyclic(2)),
                Box::new(GroupSpec::Cyclic(3)),
            )),
            Box::new(GroupSpec::Q8),
        );
        assert_eq!(GroupSpec::parse("product:product:cyclic:2,cyclic:3,q8").unwrap(), want);
        assert_eq!(GroupSpec::parse("product:(product:cyclic:2,cyclic:3),q8").unwrap(), want);
        assert_eq!(want.to_string(), "product:(product:cyclic:2,cyclic:3),q8");
    }

    #[test]
    fn error_offsets() {
        let offset = |t: &str| match GroupSpec::parse(t).unwrap_err() {
            Error::Parse { offset, .. } => offset,
            e => panic!("{e}"),
        };
        assert_eq!(offset("wreath:xy"), 7);
        assert_eq!(offset("klein:4"), 0);
        assert_eq!(offset("cyclic"), 6);
        assert_eq!(offset("elemab:2"), 8);
        assert_eq!(offset("cyclic:4x"), 8);
        assert_eq!(offset("product:cyclic:2;cyclic:3"), 16);
        assert_eq!(offset("cyclic:99999999999"), 7);
    }

    #[test]
    fn gens_specs() {
        let g = GensSpec::parse("random:3:42+conj-close").unwrap();
        assert_eq!(g.source, GensSource::Random { k: 3, seed: 42 });
        assert!(g.conj_close && !g.symmetric);
        assert_eq!(g.to_string(), "random:3:42+conj-close");
        assert!(GensSpec::parse("bogus").is_err());
        assert!(GensSpec::parse("random:x:1").is_err());
        assert_eq!(
            GensSpec::parse("file:a/b.txt+symmetric").unwrap().source,
            GensSource::File("a/b.txt".into())
        );
    }

    #[test]
    fn random_sets_generate_and_are_reproducible() {
        let s4 = FiniteGroup::symmetric(4).unwrap();
        let a = random_generating_set(&s4, 2, 9).unwrap();
        let b = random_generating_set(&s4, 2, 9).unwrap();
        assert_eq!(a, b);
        assert!(cayley::generates(&s4, a.elements()).unwrap());
        assert!(random_generating_set(&s4, 1, 9).is_err());
    }

    #[test]
    fn missing_gens_file_is_io_error() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let err = GensSpec::parse("file:/nonexistent/gens.txt")
            .unwrap()
            .resolve(&s3)
            .unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn corpus_lines() {
        let text = "# header\ncyclic:5\n\nsym:3 standard+conj-close  # trailing\n";
        let c = parse_corpus(text).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[1].gens.as_ref().unwrap().to_string(), "standard+conj-close");
        match parse_corpus("cyclic:5\nsym:x\n").unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(offset, 13),
            e => panic!("{e}"),
        }
    }

    fn arb_spec() -> impl Strategy<Value = GroupSpec> {
        let leaf = prop_oneof![
            (1u32..1000).prop_map(GroupSpec::Cyclic),
            (3u32..50).prop_map(GroupSpec::Dihedral),
            (1u32..9).prop_map(GroupSpec::Sym),
            Just(GroupSpec::Q8),
            (2u32..10, 1u32..5).prop_map(|(p, k)| GroupSpec::Elemab { p, k }),
            (2u32..14).prop_map(GroupSpec::Sl2),
            (1u32..13).prop_map(GroupSpec::Wreath),
            "[a-z][a-z0-9_./]{0,12}".prop_map(|p| GroupSpec::Table(PathBuf::from(p))),
        ];
        leaf.prop_recursive(3, 16, 2, |inner| {
            (inner.clone(), inner).prop_map(|(a, b)| GroupSpec::Product(Box::new(a), Box::new(b)))
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(spec in arb_spec()) {
            prop_assert_eq!(GroupSpec::parse(&spec.to_string()).unwrap(), spec);
        }
    }
}
