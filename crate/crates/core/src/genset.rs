use std::collections::HashSet;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// An ordered set of group elements, free of duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSet {
    elements: Vec<Element>,
    symmetric_closed: bool,
    conjugation_closed: bool,
    label: String,
}

impl GeneratingSet {
    /// Keeps the first occurrence of each element.
    pub fn new(label: impl Into<String>, elements: impl IntoIterator<Item = Element>) -> Self {
        let mut seen = HashSet::new();
        let elements = elements
            .into_iter()
            .filter(|e| seen.insert(e.clone()))
            .collect();
        GeneratingSet {
            elements,
            symmetric_closed: false,
            conjugation_closed: false,
            label: label.into(),
        }
    }

    pub fn standard(group: &FiniteGroup) -> Self {
        Self::new("standard", group.generators().iter().cloned())
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_symmetric_closed(&self) -> bool {
        self.symmetric_closed
    }

    pub fn is_conjugation_closed(&self) -> bool {
        self.conjugation_closed
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Appends missing inverses.
    pub fn symmetrize(&self, group: &FiniteGroup) -> Result<Self> {
        let mut out = self.elements.clone();
        for e in &self.elements {
            out.push(group.inverse(e)?);
        }
        let mut set = Self::new(format!("{}+symmetric", self.label), out);
        set.symmetric_closed = true;
        set.conjugation_closed = self.conjugation_closed;
        Ok(set)
    }

    /// Smallest superset closed under conjugation by the group's generators
    /// (and therefore by the whole group).
    pub fn conjugation_closure(&self, group: &FiniteGroup) -> Result<Self> {
        for e in &self.elements {
            group.check_shape(e)?;
        }
        let conjugators = conjugators(group)?;
        let mut out = self.elements.clone();
        let mut seen: HashSet<Element> = out.iter().cloned().collect();
        let mut head = 0;
        while head < out.len() {
            let s = out[head].clone();
            head += 1;
            for g in &conjugators {
                let c = group.mul(&group.mul(&group.inv(g), &s), g);
                if seen.insert(c.clone()) {
                    out.push(c);
                }
            }
        }
        let mut set = Self::new(format!("{}+conj-close", self.label), out);
        set.conjugation_closed = true;
        set.symmetric_closed = self.symmetric_closed;
        Ok(set)
    }

    /// Marks the set conjugation-closed after checking `g⁻¹sg ∈ S` for every
    /// `s ∈ S` and generator `g`.
    pub fn assert_conjugation_closed(mut self, group: &FiniteGroup) -> Result<Self> {
        if !self.verify_conjugation_closed(group)? {
            return Err(Error::precondition(format!(
                "generating set {} is not closed under conjugation",
                self.label
            )));
        }
        self.conjugation_closed = true;
        Ok(self)
    }

    pub fn verify_conjugation_closed(&self, group: &FiniteGroup) -> Result<bool> {
        let set: HashSet<&Element> = self.elements.iter().collect();
        let conjugators = conjugators(group)?;
        Ok(self.elements.iter().all(|s| {
            conjugators
                .iter()
                .all(|g| set.contains(&group.mul(&group.mul(&group.inv(g), s), g)))
        }))
    }

    pub fn verify_symmetric(&self, group: &FiniteGroup) -> bool {
        let set: HashSet<&Element> = self.elements.iter().collect();
        self.elements.iter().all(|s| set.contains(&group.inv(s)))
    }
}

/// Declared generators, or every element for groups (tables, quotients of
/// tables) whose declared list might not generate.
fn conjugators(group: &FiniteGroup) -> Result<Vec<Element>> {
    let universe = group.enumerate()?;
    let mut seen = HashSet::from([group.identity().clone()]);
    let mut reach = vec![group.identity().clone()];
    let mut head = 0;
    while head < reach.len() {
        let x = reach[head].clone();
        head += 1;
        for g in group.generators() {
            let y = group.mul(&x, g);
            if seen.insert(y.clone()) {
                reach.push(y);
            }
        }
    }
    if reach.len() == universe.len() {
        Ok(group.generators().to_vec())
    } else {
        Ok(universe.elements().to_vec())
    }
}
