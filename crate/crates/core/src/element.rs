//! Group elements and their canonical byte keys.
//!
//! Key layouts (all multi-byte integers big-endian):
//!
//! | kind        | layout                                                        |
//! |-------------|---------------------------------------------------------------|
//! | permutation | one byte per point image if degree ≤ 255, else two bytes      |
//! | matrix      | `a b c d p`, one byte each, for `[[a, b], [c, d]]` mod `p`     |
//! | wreath      | ⌈n/8⌉ bytes of flip bits (LSB of byte 0 = coordinate 0), shift |
//! | residues    | four bytes per coordinate                                     |
//! | table       | four bytes of row index                                       |
//! | pair        | key of the first component, then key of the second            |
//! | coset       | key of the coset representative                               |
//!
//! Every group produces keys of a single fixed width, so concatenating the
//! component keys of a pair stays injective.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementKind {
    Permutation,
    Matrix,
    Wreath,
    Residues,
    Table,
    Pair,
    Coset,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    /// Images of `0..d`. Composition applies the left factor first.
    Perm(Box<[u16]>),
    /// `[[a, b], [c, d]]` stored row-major, entries reduced mod `modulus`.
    Matrix { entries: [u8; 4], modulus: u8 },
    /// A pair (flip bits, shift) in `(C₂)ⁿ ⋊ Cₙ`.
    Wreath { bits: u64, shift: u8, n: u8 },
    /// Additive residues; the moduli live on the group.
    Residues(Box<[u32]>),
    /// Row index into a multiplication table.
    Table(u32),
    Pair(Box<(Element, Element)>),
    /// A coset of a normal subgroup, labelled by its minimal-key member.
    Coset(Box<Element>),
}

impl Element {
    pub fn kind(&self) -> ElementKind {
        match self {
            Element::Perm(_) => ElementKind::Permutation,
            Element::Matrix { .. } => ElementKind::Matrix,
            Element::Wreath { .. } => ElementKind::Wreath,
            Element::Residues(_) => ElementKind::Residues,
            Element::Table(_) => ElementKind::Table,
            Element::Pair(_) => ElementKind::Pair,
            Element::Coset(_) => ElementKind::Coset,
        }
    }

    pub fn perm(images: impl IntoIterator<Item = u16>) -> Element {
        Element::Perm(images.into_iter().collect())
    }

    pub fn pair(a: Element, b: Element) -> Element {
        Element::Pair(Box::new((a, b)))
    }

    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_key(&mut out);
        out
    }

    pub fn write_key(&self, out: &mut Vec<u8>) {
        match self {
            Element::Perm(images) => {
                if images.len() <= 255 {
                    out.extend(images.iter().map(|&x| x as u8));
                } else {
                    for &x in images.iter() {
                        out.extend_from_slice(&x.to_be_bytes());
                    }
                }
            }
            Element::Matrix { entries, modulus } => {
                out.extend_from_slice(entries);
                out.push(*modulus);
            }
            Element::Wreath { bits, shift, n } => {
                let width = (*n as usize).div_ceil(8);
                out.extend_from_slice(&bits.to_le_bytes()[..width]);
                out.push(*shift);
            }
            Element::Residues(values) => {
                for v in values.iter() {
                    out.extend_from_slice(&v.to_be_bytes());
                }
            }
            Element::Table(i) => out.extend_from_slice(&i.to_be_bytes()),
            Element::Pair(pair) => {
                pair.0.write_key(out);
                pair.1.write_key(out);
            }
            Element::Coset(rep) => rep.write_key(out),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Perm(images) => write_cycles(f, images),
            Element::Matrix { entries: [a, b, c, d], .. } => {
                write!(f, "[[{a},{b}],[{c},{d}]]")
            }
            Element::Wreath { bits, shift, n } => {
                f.write_str("(")?;
                for i in 0..*n {
                    f.write_str(if bits >> i & 1 == 1 { "1" } else { "0" })?;
                }
                write!(f, ";{shift})")
            }
            Element::Residues(values) if values.len() == 1 => write!(f, "{}", values[0]),
            Element::Residues(values) => {
                f.write_str("(")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str(")")
            }
            Element::Table(i) => write!(f, "#{i}"),
            Element::Pair(pair) => write!(f, "<{} | {}>", pair.0, pair.1),
            Element::Coset(rep) => write!(f, "{rep}"),
        }
    }
}

fn write_cycles(f: &mut fmt::Formatter<'_>, images: &[u16]) -> fmt::Result {
    let mut seen = vec![false; images.len()];
    let mut any = false;
    for start in 0..images.len() {
        if seen[start] || images[start] as usize == start {
            continue;
        }
        any = true;
        f.write_str("(")?;
        let mut x = start;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
            first = false;
            x = images[x] as usize;
        }
        f.write_str(")")?;
    }
    if !any {
        f.write_str("()")?;
    }
    Ok(())
}
