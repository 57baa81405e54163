use std::fmt::Debug;
use std::hash::Hash;

use crate::error::Result;

/// The operations breadth-first searches need from a group.
///
/// `order` is the size of the whole group; a generating set reaches exactly
/// that many elements.
pub trait GroupOps: Sync {
    type Elem: Clone + Eq + Hash + Send + Sync + Debug;

    fn identity(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn order(&self) -> Result<usize>;

    /// `a⁻¹ b⁻¹ a b`
    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.op(a, b);
        let ba = self.op(b, a);
        self.op(&self.inv(&ba), &ab)
    }

    /// `x⁻¹ a x`
    fn conjugate(&self, a: &Self::Elem, x: &Self::Elem) -> Self::Elem {
        self.op(&self.op(&self.inv(x), a), x)
    }
}
