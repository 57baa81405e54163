//! Finite groups with exact element arithmetic.
//!
//! Permutations compose left to right: `(a·b)(x) = b(a(x))`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::element::{Element, ElementKind};
use crate::error::{Error, Result};
use crate::ops::GroupOps;

pub const DEFAULT_ORDER_CAP: usize = 2_000_000;

/// Environment variable overriding [`DEFAULT_ORDER_CAP`].
pub const CAP_ENV: &str = "CAYLEYLAB_CAP_ELEMENTS";

pub const MAX_SYM_DEGREE: u32 = 8;
pub const MAX_SL2_MODULUS: u32 = 13;
pub const MAX_WREATH_RANK: u32 = 12;

pub fn default_order_cap() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&v: &usize| v > 0)
        .unwrap_or(DEFAULT_ORDER_CAP)
}

/// A validated Cayley table on `0..n` with identity 0.
#[derive(Debug)]
pub struct MulTable {
    n: u32,
    cells: Vec<u32>,
    inverses: Vec<u32>,
}

impl MulTable {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<MulTable> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::format("multiplication table", "empty table"));
        }
        let mut cells = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::format(
                    "multiplication table",
                    format!("row {i} has {} entries, expected {n}", row.len()),
                ));
            }
            if let Some(&bad) = row.iter().find(|&&x| x as usize >= n) {
                return Err(Error::format(
                    "multiplication table",
                    format!("row {i} holds index {bad} outside 0..{n}"),
                ));
            }
            cells.extend_from_slice(row);
        }
        let at = |i: usize, j: usize| cells[i * n + j] as usize;
        for i in 0..n {
            if at(0, i) != i || at(i, 0) != i {
                return Err(Error::format(
                    "multiplication table",
                    "element 0 is not the identity",
                ));
            }
        }
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                row_seen[at(i, j)] = true;
                col_seen[at(j, i)] = true;
            }
            if row_seen.iter().chain(&col_seen).any(|s| !s) {
                return Err(Error::format(
                    "multiplication table",
                    format!("row or column {i} is not a permutation"),
                ));
            }
        }
        let assoc = |a: usize, b: usize, c: usize| at(at(a, b), c) == at(a, at(b, c));
        if n <= 128 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(Error::format(
                                "multiplication table",
                                format!("not associative at ({a}, {b}, {c})"),
                            ));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x7ab1e);
            for _ in 0..200_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Err(Error::format(
                        "multiplication table",
                        format!("not associative at ({a}, {b}, {c})"),
                    ));
                }
            }
        }
        let mut inverses = vec![0u32; n];
        for (i, slot) in inverses.iter_mut().enumerate() {
            // Latin rows guarantee exactly one solution.
            *slot = (0..n).find(|&j| at(i, j) == 0).unwrap() as u32;
        }
        Ok(MulTable {
            n: n as u32,
            cells,
            inverses,
        })
    }

    /// Line 1 holds `n`, the next `n` lines hold the rows. An optional
    /// trailing line `gens: i j ...` lists generator indices.
    pub fn parse(text: &str) -> Result<(MulTable, Option<Vec<u32>>)> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::format("multiplication table", "missing size line"))?;
        let n: usize = header.parse().map_err(|_| {
            Error::format("multiplication table", format!("bad size line {header:?}"))
        })?;
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines.next().ok_or_else(|| {
                Error::format("multiplication table", format!("expected {n} rows, found {i}"))
            })?;
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| {
                    Error::format("multiplication table", format!("row {i} is not numeric"))
                })?;
            rows.push(row);
        }
        let mut gens = None;
        if let Some(line) = lines.next() {
            let rest = line.strip_prefix("gens:").ok_or_else(|| {
                Error::format("multiplication table", format!("unexpected line {line:?}"))
            })?;
            let list = rest
                .split_whitespace()
                .map(|t| t.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::format("multiplication table", "bad generator list"))?;
            if let Some(&bad) = list.iter().find(|&&g| g as usize >= n) {
                return Err(Error::format(
                    "multiplication table",
                    format!("generator {bad} outside 0..{n}"),
                ));
            }
            gens = Some(list);
        }
        if lines.next().is_some() {
            return Err(Error::format("multiplication table", "trailing lines"));
        }
        Ok((MulTable::new(rows)?, gens))
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn product(&self, a: u32, b: u32) -> u32 {
        self.cells[a as usize * self.n as usize + b as usize]
    }

    #[inline]
    pub fn inverse(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }
}

/// Coset representatives of a normal subgroup, keyed by parent element.
#[derive(Debug)]
pub(crate) struct CosetMap {
    pub(crate) parent: Arc<FiniteGroup>,
    pub(crate) rep: HashMap<Element, Element>,
}

#[derive(Debug)]
enum Law {
    Perm { degree: usize },
    Matrix { modulus: u8 },
    Wreath { n: u8 },
    Residues { moduli: Box<[u32]> },
    Table(Arc<MulTable>),
    Product(Arc<FiniteGroup>, Arc<FiniteGroup>),
    Quotient(Arc<CosetMap>),
}

/// Every element of a group, sorted by canonical key.
#[derive(Debug)]
pub struct ElementIndex {
    elements: Vec<Element>,
    positions: HashMap<Element, u32>,
}

impl ElementIndex {
    fn new(mut elements: Vec<Element>) -> ElementIndex {
        let mut keyed: Vec<(Vec<u8>, Element)> = elements
            .drain(..)
            .map(|e| (e.canonical_key(), e))
            .collect();
        keyed.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let elements: Vec<Element> = keyed.into_iter().map(|(_, e)| e).collect();
        let positions = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as u32))
            .collect();
        ElementIndex {
            elements,
            positions,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in ascending canonical-key order.
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn position(&self, a: &Element) -> Option<u32> {
        self.positions.get(a).copied()
    }

    pub fn contains(&self, a: &Element) -> bool {
        self.positions.contains_key(a)
    }

    pub fn keys(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        self.elements.iter().map(Element::canonical_key)
    }
}

pub struct FiniteGroup {
    label: String,
    law: Law,
    identity: Element,
    generators: Vec<Element>,
    order_cap: usize,
    universe: OnceLock<Arc<ElementIndex>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("generators", &self.generators.len())
            .field("order_cap", &self.order_cap)
            .finish()
    }
}

impl FiniteGroup {
    fn build(label: String, law: Law, identity: Element, generators: Vec<Element>) -> Self {
        FiniteGroup {
            label,
            law,
            identity,
            generators,
            order_cap: default_order_cap(),
            universe: OnceLock::new(),
        }
    }

    /// `Cₙ` as residues mod `n`, generated by 1.
    pub fn cyclic(n: u32) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::Domain("cyclic group needs n ≥ 1".into()));
        }
        Ok(Self::build(
            format!("cyclic:{n}"),
            Law::Residues { moduli: [n].into() },
            Element::Residues([0].into()),
            vec![Element::Residues([1 % n].into())],
        ))
    }

    /// `(C_p)^k` with the unit vectors as generators.
    pub fn elementary_abelian(p: u32, k: u32) -> Result<FiniteGroup> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("elemab modulus {p} is not prime")));
        }
        if k == 0 {
            return Err(Error::Domain("elemab rank must be ≥ 1".into()));
        }
        let cap = default_order_cap();
        let order = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if order > cap as u128 {
            return Err(Error::Limit {
                what: "elemab order",
                cap,
                partial: order.min(usize::MAX as u128) as usize,
            });
        }
        let k = k as usize;
        let gens = (0..k)
            .map(|i| Element::Residues((0..k).map(|j| u32::from(i == j)).collect()))
            .collect();
        Ok(Self::build(
            format!("elemab:{p}:{k}"),
            Law::Residues {
                moduli: vec![p; k].into(),
            },
            Element::Residues(vec![0; k].into()),
            gens,
        ))
    }

    /// The dihedral group of order `2n` acting on the vertices of an `n`-gon.
    pub fn dihedral(n: u32) -> Result<FiniteGroup> {
        if n < 3 {
            return Err(Error::Domain(format!("dihedral:{n} needs n ≥ 3")));
        }
        if n > u16::MAX as u32 {
            return Err(Error::Limit {
                what: "dihedral degree",
                cap: u16::MAX as usize,
                partial: n as usize,
            });
        }
        let rotation = Element::perm((0..n).map(|i| ((i + 1) % n) as u16));
        let reflection = Element::perm((0..n).map(|i| ((n - i) % n) as u16));
        Ok(Self::build(
            format!("dihedral:{n}"),
            Law::Perm { degree: n as usize },
            Element::perm((0..n).map(|i| i as u16)),
            vec![rotation, reflection],
        ))
    }

    /// `S_d` generated by `(0 1)` and `(0 1 … d−1)`.
    pub fn symmetric(d: u32) -> Result<FiniteGroup> {
        if d == 0 {
            return Err(Error::Domain("sym degree must be ≥ 1".into()));
        }
        if d > MAX_SYM_DEGREE {
            return Err(Error::Limit {
                what: "symmetric degree",
                cap: MAX_SYM_DEGREE as usize,
                partial: d as usize,
            });
        }
        let identity = Element::perm((0..d).map(|i| i as u16));
        let gens = if d == 1 {
            vec![identity.clone()]
        } else {
            let mut swap: Vec<u16> = (0..d as u16).collect();
            swap.swap(0, 1);
            vec![
                Element::Perm(swap.into()),
                Element::perm((0..d).map(|i| ((i + 1) % d) as u16)),
            ]
        };
        Ok(Self::build(
            format!("sym:{d}"),
            Law::Perm { degree: d as usize },
            identity,
            gens,
        ))
    }

    /// `Q₈` realised inside `SL₂(𝔽₃)`: `i = [[0,2],[1,0]]`, `j = [[1,1],[1,2]]`.
    pub fn quaternion() -> FiniteGroup {
        let m = |entries| Element::Matrix { entries, modulus: 3 };
        Self::build(
            "q8".into(),
            Law::Matrix { modulus: 3 },
            m([1, 0, 0, 1]),
            vec![m([0, 2, 1, 0]), m([1, 1, 1, 2])],
        )
    }

    /// `SL₂(𝔽_p)` generated by the two elementary unipotent matrices.
    pub fn sl2(p: u32) -> Result<FiniteGroup> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("sl2 modulus {p} is not prime")));
        }
        if p > MAX_SL2_MODULUS {
            return Err(Error::Limit {
                what: "sl2 modulus",
                cap: MAX_SL2_MODULUS as usize,
                partial: p as usize,
            });
        }
        let p = p as u8;
        let m = |entries| Element::Matrix { entries, modulus: p };
        Ok(Self::build(
            format!("sl2:{p}"),
            Law::Matrix { modulus: p },
            m([1, 0, 0, 1]),
            vec![m([1, 1, 0, 1]), m([1, 0, 1, 1])],
        ))
    }

    /// `(C₂)ⁿ ⋊ Cₙ`, generated by the flip of coordinate 0 and the unit shift.
    pub fn wreath(n: u32) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::Domain("wreath rank must be ≥ 1".into()));
        }
        if n > MAX_WREATH_RANK {
            return Err(Error::Limit {
                what: "wreath rank",
                cap: MAX_WREATH_RANK as usize,
                partial: n as usize,
            });
        }
        let n = n as u8;
        let w = |bits, shift| Element::Wreath { bits, shift, n };
        Ok(Self::build(
            format!("wreath:{n}"),
            Law::Wreath { n },
            w(0, 0),
            vec![w(1, 0), w(0, 1 % n)],
        ))
    }

    /// Direct product; generators are `(g, e)` for `g` in the first factor's
    /// generators followed by `(e, h)` for the second's.
    pub fn product(a: Arc<FiniteGroup>, b: Arc<FiniteGroup>) -> FiniteGroup {
        let mut gens: Vec<Element> = a
            .generators
            .iter()
            .map(|g| Element::pair(g.clone(), b.identity.clone()))
            .collect();
        gens.extend(
            b.generators
                .iter()
                .map(|h| Element::pair(a.identity.clone(), h.clone())),
        );
        let identity = Element::pair(a.identity.clone(), b.identity.clone());
        let label = format!("product:{},{}", wrap_product(&a.label), wrap_product(&b.label));
        Self::build(label, Law::Product(a, b), identity, gens)
    }

    /// A table group. Without an explicit list, every non-identity element
    /// is a generator.
    pub fn from_table(label: String, table: MulTable, gens: Option<Vec<u32>>) -> FiniteGroup {
        let gens = gens
            .unwrap_or_else(|| (1..table.len() as u32).collect())
            .into_iter()
            .map(Element::Table)
            .collect();
        Self::build(label, Law::Table(Arc::new(table)), Element::Table(0), gens)
    }

    pub fn from_table_file(path: &Path) -> Result<FiniteGroup> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let (table, gens) = MulTable::parse(&text)?;
        Ok(Self::from_table(
            format!("table:{}", path.display()),
            table,
            gens,
        ))
    }

    pub(crate) fn from_cosets(label: String, map: Arc<CosetMap>) -> FiniteGroup {
        let project = |x: &Element| Element::Coset(Box::new(map.rep[x].clone()));
        let identity = project(&map.parent.identity);
        let mut seen = HashSet::new();
        let gens = map
            .parent
            .generators
            .iter()
            .map(project)
            .filter(|g| seen.insert(g.clone()))
            .collect();
        Self::build(label, Law::Quotient(map), identity, gens)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_order_cap(mut self, cap: usize) -> Self {
        self.order_cap = cap.max(1);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn identity(&self) -> &Element {
        &self.identity
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn order_cap(&self) -> usize {
        self.order_cap
    }

    pub fn element_kind(&self) -> ElementKind {
        self.identity.kind()
    }

    /// Exact product; `a` is applied first for permutations.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_shape(a)?;
        self.check_shape(b)?;
        Ok(self.mul(a, b))
    }

    pub fn inverse(&self, a: &Element) -> Result<Element> {
        self.check_shape(a)?;
        Ok(self.inv(a))
    }

    /// Rejects elements of another kind or shape. Membership in a proper
    /// subgroup of the ambient structure (e.g. `Q₈` inside `SL₂(𝔽₃)`) is
    /// checked by [`FiniteGroup::contains`].
    pub fn check_shape(&self, a: &Element) -> Result<()> {
        let ok = match (&self.law, a) {
            (Law::Perm { degree }, Element::Perm(images)) => {
                images.len() == *degree && is_bijection(images)
            }
            (Law::Matrix { modulus }, Element::Matrix { entries, modulus: m }) => {
                m == modulus
                    && entries.iter().all(|&x| x < *modulus)
                    && det_mod(entries, *modulus) == 1 % *modulus as u32
            }
            (Law::Wreath { n }, Element::Wreath { bits, shift, n: m }) => {
                m == n && shift < n && bits >> n == 0
            }
            (Law::Residues { moduli }, Element::Residues(values)) => {
                values.len() == moduli.len() && values.iter().zip(moduli.iter()).all(|(v, m)| v < m)
            }
            (Law::Table(t), Element::Table(i)) => (*i as usize) < t.len(),
            (Law::Product(x, y), Element::Pair(pair)) => {
                x.check_shape(&pair.0).is_ok() && y.check_shape(&pair.1).is_ok()
            }
            (Law::Quotient(map), Element::Coset(rep)) => map.rep.get(rep) == Some(rep),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{a} is not a {:?} element of {}",
                self.element_kind(),
                self.label
            )))
        }
    }

    pub(crate) fn mul(&self, a: &Element, b: &Element) -> Element {
        match (&self.law, a, b) {
            (Law::Perm { .. }, Element::Perm(x), Element::Perm(y)) => {
                Element::Perm(x.iter().map(|&i| y[i as usize]).collect())
            }
            (
                Law::Matrix { modulus },
                Element::Matrix { entries: x, .. },
                Element::Matrix { entries: y, .. },
            ) => {
                let p = *modulus as u32;
                let [a, b, c, d] = x.map(u32::from);
                let [e, f, g, h] = y.map(u32::from);
                Element::Matrix {
                    entries: [
                        ((a * e + b * g) % p) as u8,
                        ((a * f + b * h) % p) as u8,
                        ((c * e + d * g) % p) as u8,
                        ((c * f + d * h) % p) as u8,
                    ],
                    modulus: *modulus,
                }
            }
            (
                Law::Wreath { n },
                Element::Wreath { bits: b1, shift: s1, .. },
                Element::Wreath { bits: b2, shift: s2, .. },
            ) => Element::Wreath {
                bits: b1 ^ rotate_left(*b2, *s1, *n),
                shift: (s1 + s2) % n,
                n: *n,
            },
            (Law::Residues { moduli }, Element::Residues(x), Element::Residues(y)) => {
                Element::Residues(
                    x.iter()
                        .zip(y.iter())
                        .zip(moduli.iter())
                        .map(|((&u, &v), &m)| ((u as u64 + v as u64) % m as u64) as u32)
                        .collect(),
                )
            }
            (Law::Table(t), Element::Table(i), Element::Table(j)) => {
                Element::Table(t.product(*i, *j))
            }
            (Law::Product(g, h), Element::Pair(x), Element::Pair(y)) => {
                Element::pair(g.mul(&x.0, &y.0), h.mul(&x.1, &y.1))
            }
            (Law::Quotient(map), Element::Coset(x), Element::Coset(y)) => {
                let prod = map.parent.mul(x, y);
                Element::Coset(Box::new(map.rep[&prod].clone()))
            }
            _ => panic!("element kind does not match the law of {}", self.label),
        }
    }

    pub(crate) fn inv(&self, a: &Element) -> Element {
        match (&self.law, a) {
            (Law::Perm { .. }, Element::Perm(x)) => {
                let mut out = vec![0u16; x.len()];
                for (i, &y) in x.iter().enumerate() {
                    out[y as usize] = i as u16;
                }
                Element::Perm(out.into())
            }
            (Law::Matrix { modulus }, Element::Matrix { entries: [a, b, c, d], .. }) => {
                let neg = |v: u8| (*modulus - v % *modulus) % *modulus;
                Element::Matrix {
                    entries: [*d, neg(*b), neg(*c), *a],
                    modulus: *modulus,
                }
            }
            (Law::Wreath { n }, Element::Wreath { bits, shift, .. }) => {
                let back = (n - shift) % n;
                Element::Wreath {
                    bits: rotate_left(*bits, back, *n),
                    shift: back,
                    n: *n,
                }
            }
            (Law::Residues { moduli }, Element::Residues(x)) => Element::Residues(
                x.iter()
                    .zip(moduli.iter())
                    .map(|(&u, &m)| (m - u % m) % m)
                    .collect(),
            ),
            (Law::Table(t), Element::Table(i)) => Element::Table(t.inverse(*i)),
            (Law::Product(g, h), Element::Pair(x)) => Element::pair(g.inv(&x.0), h.inv(&x.1)),
            (Law::Quotient(map), Element::Coset(x)) => {
                Element::Coset(Box::new(map.rep[&map.parent.inv(x)].clone()))
            }
            _ => panic!("element kind does not match the law of {}", self.label),
        }
    }

    /// All elements, computed once as the closure of the generators.
    pub fn enumerate(&self) -> Result<Arc<ElementIndex>> {
        if let Some(u) = self.universe.get() {
            return Ok(u.clone());
        }
        let elements = match &self.law {
            Law::Table(t) => {
                if t.len() > self.order_cap {
                    return Err(Error::Limit {
                        what: "group order",
                        cap: self.order_cap,
                        partial: t.len(),
                    });
                }
                (0..t.len() as u32).map(Element::Table).collect()
            }
            Law::Quotient(map) => {
                let parent = map.parent.enumerate()?;
                let reps: HashSet<&Element> = parent.elements().iter().map(|x| &map.rep[x]).collect();
                reps.into_iter()
                    .map(|r| Element::Coset(Box::new(r.clone())))
                    .collect()
            }
            _ => self.close()?,
        };
        // A racing fill computes the same set, so losing the race is harmless.
        let _ = self.universe.set(Arc::new(ElementIndex::new(elements)));
        Ok(self.universe.get().unwrap().clone())
    }

    fn close(&self) -> Result<Vec<Element>> {
        let mut seen: HashSet<Element> = HashSet::from([self.identity.clone()]);
        let mut queue = vec![self.identity.clone()];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head].clone();
            head += 1;
            for g in &self.generators {
                let y = self.mul(&x, g);
                if !seen.contains(&y) {
                    seen.insert(y.clone());
                    queue.push(y);
                    if queue.len() > self.order_cap {
                        return Err(Error::Limit {
                            what: "group order",
                            cap: self.order_cap,
                            partial: queue.len(),
                        });
                    }
                }
            }
        }
        Ok(queue)
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.enumerate()?.len())
    }

    pub fn contains(&self, a: &Element) -> Result<bool> {
        Ok(self.check_shape(a).is_ok() && self.enumerate()?.contains(a))
    }

    /// Commutativity of the generators, or of every element for table and
    /// quotient groups whose declared generators need not generate.
    pub fn is_abelian(&self) -> Result<bool> {
        let universe;
        let xs: &[Element] = match self.law {
            Law::Table(_) | Law::Quotient(_) => {
                universe = self.enumerate()?;
                universe.elements()
            }
            _ => &self.generators,
        };
        Ok(xs
            .iter()
            .enumerate()
            .all(|(i, a)| xs[i + 1..].iter().all(|b| self.mul(a, b) == self.mul(b, a))))
    }

    /// Inverse of [`Element::canonical_key`] for elements of this group.
    pub fn decode_key(&self, key: &[u8]) -> Result<Element> {
        let (e, rest) = self.decode_prefix(key)?;
        if !rest.is_empty() {
            return Err(Error::format("element key", "trailing bytes"));
        }
        self.check_shape(&e)?;
        Ok(e)
    }

    fn key_width(&self) -> usize {
        match &self.law {
            Law::Perm { degree } => {
                if *degree <= 255 {
                    *degree
                } else {
                    2 * degree
                }
            }
            Law::Matrix { .. } => 5,
            Law::Wreath { n } => (*n as usize).div_ceil(8) + 1,
            Law::Residues { moduli } => 4 * moduli.len(),
            Law::Table(_) => 4,
            Law::Product(a, b) => a.key_width() + b.key_width(),
            Law::Quotient(map) => map.parent.key_width(),
        }
    }

    fn decode_prefix<'k>(&self, key: &'k [u8]) -> Result<(Element, &'k [u8])> {
        let width = self.key_width();
        if key.len() < width {
            return Err(Error::format("element key", "too short"));
        }
        let (head, rest) = key.split_at(width);
        let e = match &self.law {
            Law::Perm { degree } => {
                if *degree <= 255 {
                    Element::perm(head.iter().map(|&b| b as u16))
                } else {
                    Element::perm(head.chunks(2).map(|c| u16::from_be_bytes([c[0], c[1]])))
                }
            }
            Law::Matrix { .. } => Element::Matrix {
                entries: [head[0], head[1], head[2], head[3]],
                modulus: head[4],
            },
            Law::Wreath { n } => {
                let mut le = [0u8; 8];
                le[..width - 1].copy_from_slice(&head[..width - 1]);
                Element::Wreath {
                    bits: u64::from_le_bytes(le),
                    shift: head[width - 1],
                    n: *n,
                }
            }
            Law::Residues { .. } => Element::Residues(
                head.chunks(4)
                    .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]))
                    .collect(),
            ),
            Law::Table(_) => Element::Table(u32::from_be_bytes([head[0], head[1], head[2], head[3]])),
            Law::Product(a, b) => {
                let (x, r) = a.decode_prefix(head)?;
                let (y, _) = b.decode_prefix(r)?;
                Element::pair(x, y)
            }
            Law::Quotient(map) => {
                let (x, _) = map.parent.decode_prefix(head)?;
                Element::Coset(Box::new(x))
            }
        };
        Ok((e, rest))
    }

    /// Parses the textual form produced by `Display` for this group's
    /// elements (permutations also accept an image list `[1,0,2]`).
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let text = text.trim();
        let bad = |msg: &str| Error::parse(0, format!("{msg}: {text:?}"));
        let e = match &self.law {
            Law::Perm { degree } => parse_perm(text, *degree).ok_or_else(|| bad("bad permutation"))?,
            Law::Matrix { modulus } => {
                let v = integers(text).ok_or_else(|| bad("bad matrix"))?;
                if v.len() != 4 {
                    return Err(bad("matrix needs four entries"));
                }
                let m = *modulus as u64;
                Element::Matrix {
                    entries: [0, 1, 2, 3].map(|i| (v[i] % m) as u8),
                    modulus: *modulus,
                }
            }
            Law::Wreath { n } => {
                let inner = text.trim_start_matches('(').trim_end_matches(')');
                let (bits_text, shift_text) = inner.split_once(';').ok_or_else(|| bad("wreath element needs bits;shift"))?;
                let bits_text = bits_text.trim();
                if bits_text.len() != *n as usize || !bits_text.bytes().all(|b| b == b'0' || b == b'1') {
                    return Err(bad("wreath bits must be a 0/1 string of length n"));
                }
                let bits = bits_text
                    .bytes()
                    .enumerate()
                    .fold(0u64, |acc, (i, b)| acc | (u64::from(b == b'1') << i));
                let shift: u8 = shift_text.trim().parse().map_err(|_| bad("bad shift"))?;
                Element::Wreath { bits, shift, n: *n }
            }
            Law::Residues { .. } => {
                let v = integers(text).ok_or_else(|| bad("bad residues"))?;
                Element::Residues(v.into_iter().map(|x| x.min(u32::MAX as u64) as u32).collect())
            }
            Law::Table(_) => {
                let v: u32 = text
                    .trim_start_matches('#')
                    .trim()
                    .parse()
                    .map_err(|_| bad("bad table index"))?;
                Element::Table(v)
            }
            Law::Product(a, b) => {
                let inner = text
                    .strip_prefix('<')
                    .and_then(|t| t.strip_suffix('>'))
                    .ok_or_else(|| bad("pair must look like <a | b>"))?;
                let cut = top_level_bar(inner).ok_or_else(|| bad("pair must look like <a | b>"))?;
                Element::pair(a.parse_element(&inner[..cut])?, b.parse_element(&inner[cut + 1..])?)
            }
            Law::Quotient(map) => {
                let x = map.parent.parse_element(text)?;
                let rep = map
                    .rep
                    .get(&x)
                    .ok_or_else(|| Error::Domain(format!("{x} is not in {}", map.parent.label)))?;
                Element::Coset(Box::new(rep.clone()))
            }
        };
        self.check_shape(&e)?;
        Ok(e)
    }
}

impl GroupOps for FiniteGroup {
    type Elem = Element;

    fn identity(&self) -> Element {
        self.identity.clone()
    }

    fn op(&self, a: &Element, b: &Element) -> Element {
        self.mul(a, b)
    }

    fn inv(&self, a: &Element) -> Element {
        FiniteGroup::inv(self, a)
    }

    fn order(&self) -> Result<usize> {
        FiniteGroup::order(self)
    }
}

fn wrap_product(label: &str) -> String {
    if label.starts_with("product:") {
        format!("({label})")
    } else {
        label.to_string()
    }
}

/// `rot_s(b)_i = b_{(i+s) mod n}`.
#[inline]
fn rotate_left(bits: u64, s: u8, n: u8) -> u64 {
    if s == 0 {
        return bits;
    }
    let mask = (1u64 << n) - 1;
    ((bits >> s) | (bits << (n - s))) & mask
}

fn det_mod(e: &[u8; 4], p: u8) -> u32 {
    let [a, b, c, d] = e.map(u32::from);
    let p = p as u32;
    (a * d + p * p - (b * c) % (p * p)) % p
}

fn is_bijection(images: &[u16]) -> bool {
    let mut seen = vec![false; images.len()];
    images.iter().all(|&x| {
        let x = x as usize;
        x < seen.len() && !std::mem::replace(&mut seen[x], true)
    })
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn integers(text: &str) -> Option<Vec<u64>> {
    let v: Vec<u64> = text
        .split(|c: char| !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().ok())
        .collect::<Option<_>>()?;
    let stray = text
        .chars()
        .any(|c| !(c.is_ascii_digit() || c.is_whitespace() || "()[],;".contains(c)));
    (!stray).then_some(v)
}

fn parse_perm(text: &str, degree: usize) -> Option<Element> {
    if let Some(inner) = text.strip_prefix('[') {
        let inner = inner.strip_suffix(']')?;
        let images: Vec<u16> = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().ok())
            .collect::<Option<_>>()?;
        return (images.len() == degree).then(|| Element::Perm(images.into()));
    }
    let mut images: Vec<u16> = (0..degree as u16).collect();
    let mut rest = text.trim();
    if rest.is_empty() {
        return None;
    }
    while !rest.is_empty() {
        let open = rest.strip_prefix('(')?;
        let close = open.find(')')?;
        let points: Vec<usize> = open[..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().ok())
            .collect::<Option<_>>()?;
        if points.iter().any(|&p| p >= degree) {
            return None;
        }
        let mut cycle: Vec<u16> = (0..degree as u16).collect();
        for (i, &p) in points.iter().enumerate() {
            cycle[p] = points[(i + 1) % points.len()] as u16;
        }
        if !is_bijection(&cycle) {
            return None;
        }
        // apply the cycles left to right
        images = images.iter().map(|&x| cycle[x as usize]).collect();
        rest = open[close + 1..].trim_start();
    }
    Some(Element::Perm(images.into()))
}

fn top_level_bar(text: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in text.char_indices() {
        match c {
            '<' | '(' | '[' => depth += 1,
            '>' | ')' | ']' => depth -= 1,
            '|' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}
