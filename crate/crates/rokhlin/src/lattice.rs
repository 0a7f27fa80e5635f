//! The acting group and its Følner sets.
//!
//! The group is always a free abelian lattice `Z^k` in exact arithmetic.
//! Subgroups are given by explicit integer basis matrices with exact
//! membership tests, and Følner sets are boxes over such a basis. The
//! almost-invariance of a box under a finite translation set is measured by
//! [`invariance_defect`], an exact rational.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{Int, Rat};

/// An element of `Z^k` written additively; the identity is the zero vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeElement {
    coords: Vec<Int>,
}

impl LatticeElement {
    pub fn new(coords: Vec<Int>) -> Self {
        LatticeElement { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeElement { coords: coords.iter().map(|&c| Int::from(c)).collect() }
    }

    pub fn zero(dim: usize) -> Self {
        LatticeElement { coords: vec![Int::zero(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Int] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The group law of `Z^k`: componentwise sum.
    ///
    /// Panics when the dimensions differ.
    pub fn compose(&self, other: &LatticeElement) -> LatticeElement {
        assert_eq!(
            self.dim(),
            other.dim(),
            "dimension mismatch: {} vs {}",
            self.dim(),
            other.dim()
        );
        LatticeElement {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inverse(&self) -> LatticeElement {
        LatticeElement { coords: self.coords.iter().map(|a| -a).collect() }
    }

    /// `other - self`, the element translating `self` onto `other`.
    pub fn difference(&self, other: &LatticeElement) -> LatticeElement {
        self.inverse().compose(other)
    }

    pub fn scale(&self, factor: i64) -> LatticeElement {
        let f = Int::from(factor);
        LatticeElement { coords: self.coords.iter().map(|a| a * &f).collect() }
    }
}

impl fmt::Debug for LatticeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A subgroup of `Z^k` spanned by independent integer columns.
///
/// The rank may be smaller than the ambient dimension (a coordinate
/// sublattice); towers require full rank, membership does not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    ambient_dim: usize,
    basis: Vec<LatticeElement>,
}

impl Sublattice {
    /// Builds a sublattice from basis columns, verifying independence.
    pub fn new(ambient_dim: usize, basis: Vec<LatticeElement>) -> Result<Self> {
        for b in &basis {
            if b.dim() != ambient_dim {
                return Err(Error::BasisDimensionMismatch { ambient: ambient_dim, actual: b.dim() });
            }
        }
        let lattice = Sublattice { ambient_dim, basis };
        let rank = lattice.column_rank();
        if rank != lattice.basis.len() {
            return Err(Error::RankDeficientBasis { expected: lattice.basis.len(), actual: rank });
        }
        Ok(lattice)
    }

    /// The full lattice `Z^k` with the standard basis.
    pub fn full(dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| {
                let mut coords = vec![Int::zero(); dim];
                coords[i] = Int::one();
                LatticeElement::new(coords)
            })
            .collect();
        Sublattice { ambient_dim: dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LatticeElement] {
        &self.basis
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_dim
    }

    fn column_rank(&self) -> usize {
        let rows = self.ambient_dim;
        let cols = self.basis.len();
        let mut m: Vec<Vec<Rat>> = (0..rows)
            .map(|r| (0..cols).map(|c| Rat::from_integer(self.basis[c].coords()[r].clone())).collect())
            .collect();
        let mut rank = 0;
        for col in 0..cols {
            let pivot = (rank..rows).find(|&r| !m[r][col].is_zero());
            let Some(pivot) = pivot else { continue };
            m.swap(rank, pivot);
            let inv = m[rank][col].clone();
            for r in 0..rows {
                if r != rank && !m[r][col].is_zero() {
                    let factor = &m[r][col] / &inv;
                    for c in col..cols {
                        let sub = &factor * &m[rank][c];
                        m[r][c] -= sub;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Solves `basis * x = g` exactly over the rationals; `Some(x)` only when
    /// the system is consistent (uniqueness follows from independence).
    fn solve(&self, g: &LatticeElement) -> Option<Vec<Rat>> {
        assert_eq!(g.dim(), self.ambient_dim, "dimension mismatch");
        let rows = self.ambient_dim;
        let cols = self.basis.len();
        let mut m: Vec<Vec<Rat>> = (0..rows)
            .map(|r| {
                let mut row: Vec<Rat> = (0..cols)
                    .map(|c| Rat::from_integer(self.basis[c].coords()[r].clone()))
                    .collect();
                row.push(Rat::from_integer(g.coords()[r].clone()));
                row
            })
            .collect();
        let mut pivot_rows = Vec::with_capacity(cols);
        let mut rank = 0;
        for col in 0..cols {
            let pivot = (rank..rows).find(|&r| !m[r][col].is_zero());
            let Some(pivot) = pivot else { continue };
            m.swap(rank, pivot);
            let inv = m[rank][col].clone();
            for r in 0..rows {
                if r != rank && !m[r][col].is_zero() {
                    let factor = &m[r][col] / &inv;
                    for c in col..=cols {
                        let sub = &factor * &m[rank][c];
                        m[r][c] -= sub;
                    }
                }
            }
            pivot_rows.push((col, rank));
            rank += 1;
        }
        // Consistency: rows below the pivots must have zero right-hand side.
        for r in rank..rows {
            if !m[r][cols].is_zero() {
                return None;
            }
        }
        let mut x = vec![Rat::zero(); cols];
        for &(col, row) in &pivot_rows {
            x[col] = &m[row][cols] / &m[row][col];
        }
        Some(x)
    }

    /// Exact membership test for `g` in the spanned subgroup.
    pub fn contains(&self, g: &LatticeElement) -> bool {
        match self.solve(g) {
            Some(x) => x.iter().all(|c| c.denom().is_one()),
            None => false,
        }
    }

    /// Integer coordinates of `g` in this basis, when `g` is a member.
    pub fn coordinates(&self, g: &LatticeElement) -> Option<Vec<Int>> {
        let x = self.solve(g)?;
        if x.iter().all(|c| c.denom().is_one()) {
            Some(x.into_iter().map(|c| c.numer().clone()).collect())
        } else {
            None
        }
    }

    /// `|det|` of the basis matrix for full-rank sublattices: the index of
    /// the subgroup in `Z^k`.
    pub fn index(&self) -> Result<Int> {
        if !self.is_full_rank() {
            return Err(Error::RankDeficientBasis {
                expected: self.ambient_dim,
                actual: self.rank(),
            });
        }
        let n = self.ambient_dim;
        let mut m: Vec<Vec<Rat>> = (0..n)
            .map(|r| (0..n).map(|c| Rat::from_integer(self.basis[c].coords()[r].clone())).collect())
            .collect();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero());
            let Some(pivot) = pivot else { return Ok(Int::zero()) };
            if pivot != col {
                m.swap(col, pivot);
                det = -det;
            }
            det *= m[col][col].clone();
            let inv = m[col][col].clone();
            for r in (col + 1)..n {
                if !m[r][col].is_zero() {
                    let factor = &m[r][col] / &inv;
                    for c in col..n {
                        let sub = &factor * &m[col][c];
                        m[r][c] -= sub;
                    }
                }
            }
        }
        debug_assert!(det.denom().is_one());
        Ok(det.numer().abs())
    }

    /// Lexicographically first coset representatives of `Z^k` modulo this
    /// full-rank sublattice. Every coset has a representative with
    /// coordinates in `[0, index)` because `index * Z^k` lies inside the
    /// subgroup, so scanning that box suffices.
    pub fn coset_representatives(&self) -> Result<Vec<LatticeElement>> {
        let index = self.index()?;
        let d: u64 = index
            .to_string()
            .parse()
            .map_err(|_| Error::BadInput { what: "sublattice index", detail: index.to_string() })?;
        let mut reps: Vec<LatticeElement> = Vec::with_capacity(d as usize);
        for v in lex_box(self.ambient_dim, d) {
            let candidate = LatticeElement::new(v.into_iter().map(Int::from).collect());
            if reps.iter().all(|r| !self.contains(&r.difference(&candidate))) {
                reps.push(candidate);
                if reps.len() as u64 == d {
                    break;
                }
            }
        }
        debug_assert_eq!(reps.len() as u64, d);
        Ok(reps)
    }
}

/// All vectors in `[0, n)^dim` in lexicographic order.
pub(crate) fn lex_box(dim: usize, n: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = (n as u128).pow(dim as u32);
    (0..total).map(move |mut idx| {
        let mut v = vec![0u64; dim];
        for c in (0..dim).rev() {
            v[c] = (idx % n as u128) as u64;
            idx /= n as u128;
        }
        v
    })
}

/// A finite box-shaped Følner set inside a sublattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolnerSet {
    elements: BTreeSet<LatticeElement>,
}

impl FolnerSet {
    /// Builds a Følner set from explicit elements. Must be non-empty; the
    /// identity requirement of towers is checked by tower verification, so
    /// deliberately broken sets can be constructed for negative tests.
    pub fn new(elements: impl IntoIterator<Item = LatticeElement>) -> Self {
        let elements: BTreeSet<_> = elements.into_iter().collect();
        assert!(!elements.is_empty(), "Følner set must be non-empty");
        FolnerSet { elements }
    }

    pub fn elements(&self) -> impl Iterator<Item = &LatticeElement> {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &LatticeElement) -> bool {
        self.elements.contains(g)
    }

    pub fn contains_identity(&self) -> bool {
        self.elements.iter().any(LatticeElement::is_identity)
    }

    pub fn translate(&self, g: &LatticeElement) -> FolnerSet {
        FolnerSet { elements: self.elements.iter().map(|t| g.compose(t)).collect() }
    }

    pub fn inverse(&self) -> FolnerSet {
        FolnerSet { elements: self.elements.iter().map(LatticeElement::inverse).collect() }
    }
}

/// A finite subset of the group, e.g. the overlap set derived from a cover.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FiniteGenSet {
    elements: BTreeSet<LatticeElement>,
}

impl FiniteGenSet {
    pub fn new(elements: impl IntoIterator<Item = LatticeElement>) -> Self {
        FiniteGenSet { elements: elements.into_iter().collect() }
    }

    pub fn from_i64(elements: &[&[i64]]) -> Self {
        Self::new(elements.iter().map(|c| LatticeElement::from_i64(c)))
    }

    pub fn elements(&self) -> impl Iterator<Item = &LatticeElement> {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &LatticeElement) -> bool {
        self.elements.contains(g)
    }

    /// Restriction to the members of a subgroup.
    pub fn intersect_sublattice(&self, l: &Sublattice) -> FiniteGenSet {
        FiniteGenSet {
            elements: self.elements.iter().filter(|g| l.contains(g)).cloned().collect(),
        }
    }
}

/// The box `{ sum a_l b_l : 0 <= a_l < n }` over the basis of `l`.
///
/// Contains the identity and has exactly `n^rank` elements.
pub fn folner_box(l: &Sublattice, n: u64) -> FolnerSet {
    assert!(n >= 1, "box side must be at least 1");
    let mut elements = BTreeSet::new();
    for coeffs in lex_box(l.rank(), n) {
        let mut g = LatticeElement::zero(l.ambient_dim());
        for (b, &a) in l.basis().iter().zip(&coeffs) {
            if a != 0 {
                g = g.compose(&b.scale(a as i64));
            }
        }
        elements.insert(g);
    }
    FolnerSet { elements }
}

/// `|F.T symdiff T| / |T|` as an exact rational.
pub fn invariance_defect(t: &FolnerSet, f: &FiniteGenSet) -> Rat {
    let mut translated: BTreeSet<LatticeElement> = BTreeSet::new();
    for g in f.elements() {
        for s in t.elements() {
            translated.insert(g.compose(s));
        }
    }
    let sym_diff = translated.symmetric_difference(&t.elements).count();
    Rat::new(Int::from(sym_diff as u64), Int::from(t.len() as u64))
}

/// Scalar gcd helper shared with the measure algebra.
pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

/// Floor-mod of a big integer by a positive scalar modulus.
pub(crate) fn mod_u64(value: &Int, modulus: u64) -> u64 {
    let m = Int::from(modulus);
    let r = value.mod_floor(&m);
    let digits = r.to_u64_digits().1;
    match digits.len() {
        0 => 0,
        1 => digits[0],
        _ => unreachable!("residue below modulus fits one digit"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_from_ints;
    use proptest::prelude::*;

    fn el(coords: &[i64]) -> LatticeElement {
        LatticeElement::from_i64(coords)
    }

    #[test]
    fn compose_examples() {
        assert_eq!(el(&[1, 2]).compose(&el(&[3, -2])), el(&[4, 0]));
        let g = el(&[5, -7]);
        assert_eq!(g.compose(&LatticeElement::zero(2)), g);
        assert!(g.compose(&g.inverse()).is_identity());
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn compose_rejects_dimension_mismatch() {
        let _ = el(&[1]).compose(&el(&[1, 2]));
    }

    #[test]
    fn folner_box_examples() {
        let z = Sublattice::full(1);
        let t = folner_box(&z, 4);
        assert_eq!(
            t.elements().cloned().collect::<Vec<_>>(),
            vec![el(&[0]), el(&[1]), el(&[2]), el(&[3])]
        );

        let z2 = Sublattice::full(2);
        let t = folner_box(&z2, 2);
        let expected: BTreeSet<_> =
            [el(&[0, 0]), el(&[0, 1]), el(&[1, 0]), el(&[1, 1])].into_iter().collect();
        assert_eq!(t.elements().cloned().collect::<BTreeSet<_>>(), expected);

        let two_z = Sublattice::new(1, vec![el(&[2])]).unwrap();
        let t = folner_box(&two_z, 3);
        assert_eq!(t.elements().cloned().collect::<Vec<_>>(), vec![el(&[0]), el(&[2]), el(&[4])]);
    }

    #[test]
    fn folner_box_contains_identity_and_has_power_cardinality() {
        for n in [1u64, 2, 3, 5] {
            for lat in [
                Sublattice::full(1),
                Sublattice::full(2),
                Sublattice::new(2, vec![el(&[1, 1]), el(&[0, 2])]).unwrap(),
                Sublattice::new(2, vec![el(&[1, 0])]).unwrap(),
            ] {
                let t = folner_box(&lat, n);
                assert!(t.contains_identity());
                assert_eq!(t.len() as u64, n.pow(lat.rank() as u32));
            }
        }
    }

    // Oracle for the defect: direct enumeration of F.T and the symmetric
    // difference, written out against plain integer vectors.
    fn defect_by_enumeration(t: &[i64], f: &[i64]) -> Rat {
        let t_set: BTreeSet<i64> = t.iter().copied().collect();
        let mut ft: BTreeSet<i64> = BTreeSet::new();
        for &g in f {
            for &s in t {
                ft.insert(g + s);
            }
        }
        let diff = ft.symmetric_difference(&t_set).count();
        rat_from_ints(diff as i64, t.len() as i64)
    }

    #[test]
    fn invariance_defect_examples() {
        let t = FolnerSet::new((0..4).map(|c| el(&[c])));
        let f1 = FiniteGenSet::from_i64(&[&[1]]);
        assert_eq!(invariance_defect(&t, &f1), defect_by_enumeration(&[0, 1, 2, 3], &[1]));
        assert_eq!(invariance_defect(&t, &f1), rat_from_ints(2, 4));

        let f2 = FiniteGenSet::from_i64(&[&[-1], &[1]]);
        assert_eq!(invariance_defect(&t, &f2), defect_by_enumeration(&[0, 1, 2, 3], &[-1, 1]));
        assert_eq!(invariance_defect(&t, &f2), rat_from_ints(2, 4));

        let f0 = FiniteGenSet::from_i64(&[&[0]]);
        assert_eq!(invariance_defect(&t, &f0), Rat::zero());
    }

    #[test]
    fn defect_of_boxes_decays_like_one_over_n() {
        // c_F is read off at n = 1 and certifies defect(n) <= c_F / n.
        let cases: Vec<(Sublattice, FiniteGenSet)> = vec![
            (Sublattice::full(1), FiniteGenSet::from_i64(&[&[-1], &[1]])),
            (Sublattice::full(2), FiniteGenSet::from_i64(&[&[1, 0], &[0, 1]])),
            (
                Sublattice::new(2, vec![el(&[2, 0]), el(&[0, 1])]).unwrap(),
                FiniteGenSet::from_i64(&[&[2, 0], &[0, 1]]),
            ),
        ];
        for (lat, f) in cases {
            let c_f = invariance_defect(&folner_box(&lat, 1), &f);
            let mut previous: Option<Rat> = None;
            for n in [1u64, 2, 4, 8, 16] {
                let defect = invariance_defect(&folner_box(&lat, n), &f);
                let bound = &c_f / Rat::from_integer(Int::from(n));
                assert!(defect <= bound, "defect {defect} exceeds {bound} at n={n}");
                if let Some(prev) = previous {
                    assert!(defect <= prev, "defect must not increase along doubling");
                }
                previous = Some(defect);
            }
        }
    }

    #[test]
    fn sublattice_membership_and_index() {
        let lat = Sublattice::new(2, vec![el(&[2, 0]), el(&[1, 1])]).unwrap();
        assert!(lat.contains(&el(&[3, 1])));
        assert!(!lat.contains(&el(&[1, 0])));
        assert_eq!(lat.index().unwrap(), Int::from(2));

        let line = Sublattice::new(2, vec![el(&[1, 0])]).unwrap();
        assert!(line.contains(&el(&[5, 0])));
        assert!(!line.contains(&el(&[5, 1])));
        assert!(line.index().is_err());
    }

    #[test]
    fn rejects_dependent_basis() {
        let err = Sublattice::new(2, vec![el(&[1, 1]), el(&[2, 2])]);
        assert!(matches!(err, Err(Error::RankDeficientBasis { .. })));
    }

    #[test]
    fn coset_representatives_cover_the_quotient() {
        let lat = Sublattice::new(2, vec![el(&[1, 1]), el(&[0, 2])]).unwrap();
        let reps = lat.coset_representatives().unwrap();
        assert_eq!(reps.len(), 2);
        for (a, b) in [(0, 1), (1, 0)] {
            let v = el(&[a, b]);
            let hits = reps.iter().filter(|r| lat.contains(&r.difference(&v))).count();
            assert_eq!(hits, 1, "{v:?} must land in exactly one coset");
        }
    }

    proptest! {
        #[test]
        fn compose_is_associative_and_commutative(
            a in proptest::collection::vec(-50i64..50, 3),
            b in proptest::collection::vec(-50i64..50, 3),
            c in proptest::collection::vec(-50i64..50, 3),
        ) {
            let (a, b, c) = (el(&a), el(&b), el(&c));
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
            prop_assert_eq!(a.compose(&b), b.compose(&a));
        }
    }
}
