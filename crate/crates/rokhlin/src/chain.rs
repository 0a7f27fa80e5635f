//! Sparse integer chains over tuples from a free group set.
//!
//! A chain of arity `n` is a finitely supported integer combination of
//! `(n+1)`-tuples of vertices. Vertices carry a group part acted on by the
//! lattice; the simplicial boundary deletes one entry at a time with
//! alternating signs. A tuple is degenerate when two entries coincide; the
//! essential norm counts non-degenerate terms only and is the seminorm the
//! whole vanishing argument runs on.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use crate::lattice::LatticeElement;

/// Label payload attached to a vertex next to its group part.
pub trait Label: Copy + Ord + Eq + Hash + fmt::Debug + Default {}

impl Label for usize {}
impl Label for (usize, usize) {}

/// Anything the lattice acts on that can sit in a tuple.
pub trait Vertex: Clone + Ord + Eq + Hash + fmt::Debug {
    fn translate(&self, g: &LatticeElement) -> Self;
}

/// A group element with a finite label: an element of `Gamma x I` (cover
/// labels) or of the tower vertex set `Gamma x I x J` (labels `(i, j)`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupVertex<L: Label> {
    pub group: LatticeElement,
    pub label: L,
}

impl<L: Label> GroupVertex<L> {
    pub fn new(group: LatticeElement, label: L) -> Self {
        GroupVertex { group, label }
    }
}

impl<L: Label> Vertex for GroupVertex<L> {
    fn translate(&self, g: &LatticeElement) -> Self {
        GroupVertex { group: g.compose(&self.group), label: self.label }
    }
}

impl<L: Label> fmt::Debug for GroupVertex<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}#{:?}", self.group, self.label)
    }
}

/// Vertices of the cover resolution `Gamma x I`.
pub type EVertex = GroupVertex<usize>;
/// Vertices of the tower resolution `Gamma x I x J`, labelled `(i, j)`.
pub type SLabel = (usize, usize);
pub type SVertex = GroupVertex<SLabel>;

pub fn e_vertex(coords: &[i64], label: usize) -> EVertex {
    GroupVertex::new(LatticeElement::from_i64(coords), label)
}

pub fn s_vertex(coords: &[i64], i: usize, j: usize) -> SVertex {
    GroupVertex::new(LatticeElement::from_i64(coords), (i, j))
}

/// An ordered `(n+1)`-tuple of vertices; the generators of arity `n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple<V: Vertex>(pub Vec<V>);

impl<V: Vertex> Tuple<V> {
    pub fn new(entries: Vec<V>) -> Self {
        assert!(!entries.is_empty(), "tuples have at least one entry");
        Tuple(entries)
    }

    pub fn arity(&self) -> usize {
        self.0.len() - 1
    }

    pub fn entries(&self) -> &[V] {
        &self.0
    }

    /// Degenerate: two equal entries somewhere.
    pub fn is_degenerate(&self) -> bool {
        for k in 0..self.0.len() {
            for l in (k + 1)..self.0.len() {
                if self.0[k] == self.0[l] {
                    return true;
                }
            }
        }
        false
    }

    pub fn is_essential(&self) -> bool {
        !self.is_degenerate()
    }

    /// The tuple with entry `j` deleted.
    pub fn face(&self, j: usize) -> Tuple<V> {
        assert!(self.arity() >= 1, "faces need arity at least 1");
        let mut entries = self.0.clone();
        entries.remove(j);
        Tuple(entries)
    }

    pub fn translate(&self, g: &LatticeElement) -> Tuple<V> {
        Tuple(self.0.iter().map(|v| v.translate(g)).collect())
    }
}

impl<V: Vertex> fmt::Debug for Tuple<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

/// A sparse integer chain: arity plus a term map without zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Chain<V: Vertex> {
    arity: usize,
    terms: BTreeMap<Tuple<V>, i64>,
}

impl<V: Vertex> Chain<V> {
    pub fn zero(arity: usize) -> Self {
        Chain { arity, terms: BTreeMap::new() }
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Tuple<V>, i64)>) -> Self {
        let mut chain = Chain::zero(arity);
        for (tuple, coeff) in terms {
            chain.add_term(tuple, coeff);
        }
        chain
    }

    pub fn single(tuple: Tuple<V>, coeff: i64) -> Self {
        Chain::from_terms(tuple.arity(), [(tuple, coeff)])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tuple<V>, i64)> {
        self.terms.iter().map(|(t, &c)| (t, c))
    }

    pub fn coefficient(&self, tuple: &Tuple<V>) -> i64 {
        self.terms.get(tuple).copied().unwrap_or(0)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, tuple: Tuple<V>, coeff: i64) {
        assert_eq!(tuple.arity(), self.arity, "tuple arity must match the chain arity");
        if coeff == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(tuple) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &Chain<V>) -> Chain<V> {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = self.clone();
        for (tuple, coeff) in other.terms() {
            out.add_term(tuple.clone(), coeff);
        }
        out
    }

    pub fn neg(&self) -> Chain<V> {
        Chain {
            arity: self.arity,
            terms: self.terms.iter().map(|(t, &c)| (t.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Chain<V>) -> Chain<V> {
        self.add(&other.neg())
    }

    pub fn scale(&self, factor: i64) -> Chain<V> {
        if factor == 0 {
            return Chain::zero(self.arity);
        }
        Chain {
            arity: self.arity,
            terms: self.terms.iter().map(|(t, &c)| (t.clone(), c * factor)).collect(),
        }
    }

    pub fn translate(&self, g: &LatticeElement) -> Chain<V> {
        Chain {
            arity: self.arity,
            terms: self.terms.iter().map(|(t, &c)| (t.translate(g), c)).collect(),
        }
    }

    /// The simplicial boundary: alternating sum of face deletions.
    pub fn boundary(&self) -> Chain<V> {
        assert!(self.arity >= 1, "boundary needs arity at least 1");
        let mut out = Chain::zero(self.arity - 1);
        for (tuple, coeff) in self.terms() {
            for j in 0..=self.arity {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                out.add_term(tuple.face(j), sign * coeff);
            }
        }
        out
    }

    /// Augmentation of arity-0 chains: the coefficient sum.
    pub fn augment(&self) -> i64 {
        assert_eq!(self.arity, 0, "augmentation is defined in arity 0");
        self.terms.values().sum()
    }

    pub fn l1_norm(&self) -> u64 {
        self.terms.values().map(|c| c.unsigned_abs()).sum()
    }

    /// Coefficient sum over essential tuples only.
    pub fn essential_norm(&self) -> u64 {
        self.terms
            .iter()
            .filter(|(t, _)| t.is_essential())
            .map(|(_, c)| c.unsigned_abs())
            .sum()
    }

    /// The part of the chain supported on essential tuples.
    pub fn essential_part(&self) -> Chain<V> {
        Chain {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.is_essential())
                .map(|(t, &c)| (t.clone(), c))
                .collect(),
        }
    }
}

impl<L: Label> Chain<GroupVertex<L>> {
    /// Normal form in the coinvariants of the free translation action: each
    /// tuple is translated so its first group part is the identity, and
    /// merged orbits sum. Two chains represent the same coinvariant class
    /// exactly when their normal forms coincide.
    pub fn coinvariant_normal_form(&self) -> Chain<GroupVertex<L>> {
        let mut out = Chain::zero(self.arity);
        for (tuple, coeff) in self.terms() {
            let anchor = tuple.entries()[0].group.inverse();
            out.add_term(tuple.translate(&anchor), coeff);
        }
        out
    }
}

impl<V: Vertex> fmt::Debug for Chain<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0[arity {}]", self.arity);
        }
        let mut first = true;
        for (tuple, coeff) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{coeff}*{tuple:?}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(entries: &[(i64, usize)]) -> Tuple<EVertex> {
        Tuple::new(entries.iter().map(|&(c, l)| e_vertex(&[c], l)).collect())
    }

    #[test]
    fn boundary_examples() {
        let c = Chain::single(t(&[(0, 0), (1, 0)]), 1);
        let d = c.boundary();
        assert_eq!(d.coefficient(&t(&[(1, 0)])), 1);
        assert_eq!(d.coefficient(&t(&[(0, 0)])), -1);
        assert_eq!(d.term_count(), 2);

        let c = Chain::single(t(&[(0, 0), (1, 0), (2, 0)]), 1);
        let d = c.boundary();
        assert_eq!(d.coefficient(&t(&[(1, 0), (2, 0)])), 1);
        assert_eq!(d.coefficient(&t(&[(0, 0), (2, 0)])), -1);
        assert_eq!(d.coefficient(&t(&[(0, 0), (1, 0)])), 1);
    }

    #[test]
    #[should_panic(expected = "arity at least 1")]
    fn boundary_rejects_arity_zero() {
        let _ = Chain::single(t(&[(0, 0)]), 1).boundary();
    }

    #[test]
    fn augment_examples() {
        let c = Chain::from_terms(0, [(t(&[(0, 0)]), 3), (t(&[(1, 0)]), -1)]);
        assert_eq!(c.augment(), 2);
        assert_eq!(Chain::<EVertex>::zero(0).augment(), 0);
        let one = Chain::single(t(&[(0, 0), (5, 1)]), 7);
        assert_eq!(one.boundary().augment(), 0);
    }

    #[test]
    fn norm_examples() {
        let c = Chain::from_terms(
            1,
            [(t(&[(0, 0), (1, 0)]), 2), (t(&[(2, 1), (2, 1)]), -3)],
        );
        assert_eq!(c.l1_norm(), 5);
        assert_eq!(c.essential_norm(), 2);
        let zero = Chain::<EVertex>::zero(1);
        assert_eq!((zero.l1_norm(), zero.essential_norm()), (0, 0));
    }

    #[test]
    fn coinvariant_normal_form_examples() {
        let c = Chain::from_terms(0, [(t(&[(3, 0)]), 1), (t(&[(5, 1)]), 1)]);
        let nf = c.coinvariant_normal_form();
        assert_eq!(nf.coefficient(&t(&[(0, 0)])), 1);
        assert_eq!(nf.coefficient(&t(&[(0, 1)])), 1);

        let g = LatticeElement::from_i64(&[7]);
        let shifted = c.translate(&g);
        assert_eq!(shifted.coinvariant_normal_form(), nf);

        // The 1-dimensional torus cycle has coinvariant boundary zero.
        let cycle = Chain::single(t(&[(0, 0), (1, 0)]), 1);
        assert!(cycle.boundary().coinvariant_normal_form().is_zero());
    }

    fn arb_chain(arity: usize) -> impl Strategy<Value = Chain<EVertex>> {
        let vertex = (-4i64..5, 0usize..2).prop_map(|(c, l)| e_vertex(&[c], l));
        let tuple = proptest::collection::vec(vertex, arity + 1).prop_map(Tuple::new);
        proptest::collection::vec((tuple, -3i64..4), 0..8)
            .prop_map(move |terms| Chain::from_terms(arity, terms))
    }

    proptest! {
        #[test]
        fn boundary_squares_to_zero(c in arb_chain(3)) {
            prop_assert!(c.boundary().boundary().is_zero());
        }

        #[test]
        fn boundary_commutes_with_translation(c in arb_chain(2), g in -5i64..6) {
            let g = LatticeElement::from_i64(&[g]);
            prop_assert_eq!(c.translate(&g).boundary(), c.boundary().translate(&g));
        }

        #[test]
        fn essential_norm_is_dominated_and_vanishes_on_degenerates(c in arb_chain(2)) {
            prop_assert!(c.essential_norm() <= c.l1_norm());
            let degenerate = c.sub(&c.essential_part());
            prop_assert_eq!(degenerate.essential_norm(), 0);
        }

        #[test]
        fn essential_norm_triangle(a in arb_chain(2), b in arb_chain(2)) {
            prop_assert!(a.add(&b).essential_norm() <= a.essential_norm() + b.essential_norm());
        }

        #[test]
        fn normal_form_is_idempotent_and_invariant(c in arb_chain(2), g in -5i64..6) {
            let nf = c.coinvariant_normal_form();
            prop_assert_eq!(nf.coinvariant_normal_form(), nf.clone());
            let g = LatticeElement::from_i64(&[g]);
            prop_assert_eq!(c.translate(&g).coinvariant_normal_form(), nf);
        }

        #[test]
        fn boundary_descends_to_coinvariants(c in arb_chain(2), shifts in proptest::collection::vec(-4i64..5, 8)) {
            // Translate each term separately: same coinvariant class, so the
            // boundary's normal form must agree.
            let mut moved = Chain::zero(c.arity());
            for (idx, (tuple, coeff)) in c.terms().enumerate() {
                let g = LatticeElement::from_i64(&[shifts[idx % shifts.len()]]);
                moved.add_term(tuple.translate(&g), coeff);
            }
            prop_assert_eq!(moved.coinvariant_normal_form(), c.coinvariant_normal_form());
            prop_assert_eq!(
                moved.boundary().coinvariant_normal_form(),
                c.boundary().coinvariant_normal_form()
            );
        }
    }
}
