//! Exact measure algebra on the odometer completion of `Z^k`.
//!
//! The space is the profinite completion `X = lim (Z/m)^k` with the Haar
//! probability measure and the translation action of `Z^k`. Every set this
//! crate ever produces is a congruence set: a union of residue classes at a
//! single scalar modulus. Two sets are compared by refining both to the
//! least common modulus, so all operations are exact and the action is
//! measure-preserving by construction.
//!
//! Memory is `O(m^k)` in the worst case; intended scale is `k <= 3` with
//! moduli up to about 1000.

use std::collections::BTreeSet;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::lattice::{lcm_u64, mod_u64, LatticeElement};
use crate::rational::{Int, Rat};

/// A union of residue classes `{ x : x = r mod m }` in the odometer.
#[derive(Clone, Serialize, Deserialize)]
pub struct CongruenceSet {
    dim: usize,
    #[serde(rename = "m")]
    modulus: u64,
    residues: BTreeSet<Vec<u64>>,
}

impl CongruenceSet {
    /// Builds a set from residues at the given modulus; residues are reduced.
    pub fn new(dim: usize, modulus: u64, residues: impl IntoIterator<Item = Vec<u64>>) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let residues = residues
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), dim, "residue arity must match dimension");
                r.into_iter().map(|c| c % modulus).collect()
            })
            .collect();
        CongruenceSet { dim, modulus, residues }
    }

    pub fn empty(dim: usize) -> Self {
        CongruenceSet { dim, modulus: 1, residues: BTreeSet::new() }
    }

    /// The whole space, `{ x : x = 0 mod 1 }`.
    pub fn full(dim: usize) -> Self {
        CongruenceSet::new(dim, 1, [vec![0; dim]])
    }

    pub fn single(dim: usize, modulus: u64, residue: Vec<u64>) -> Self {
        CongruenceSet::new(dim, modulus, [residue])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.residues.iter()
    }

    pub fn residue_count(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    /// Rewrites the set at a larger modulus (`modulus | target`): each
    /// residue lifts to `(target/m)^k` residues.
    pub fn refine_to(&self, target: u64) -> CongruenceSet {
        assert!(target % self.modulus == 0, "refinement target must be a multiple of the modulus");
        if target == self.modulus {
            return self.clone();
        }
        let step = self.modulus;
        let lifts = target / step;
        let mut residues = BTreeSet::new();
        for r in &self.residues {
            for lift in crate::lattice::lex_box(self.dim, lifts) {
                let lifted: Vec<u64> =
                    r.iter().zip(&lift).map(|(&base, &a)| base + a * step).collect();
                residues.insert(lifted);
            }
        }
        CongruenceSet { dim: self.dim, modulus: target, residues }
    }

    /// The translation action: residues shift by `g` modulo `m`.
    pub fn translate(&self, g: &LatticeElement) -> CongruenceSet {
        assert_eq!(g.dim(), self.dim, "dimension mismatch");
        let shift: Vec<u64> = g.coords().iter().map(|c| mod_u64(c, self.modulus)).collect();
        let residues = self
            .residues
            .iter()
            .map(|r| r.iter().zip(&shift).map(|(&a, &b)| (a + b) % self.modulus).collect())
            .collect();
        CongruenceSet { dim: self.dim, modulus: self.modulus, residues }
    }

    /// Intersection after refining both operands to the lcm of their moduli.
    pub fn intersect(&self, other: &CongruenceSet) -> CongruenceSet {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        if self.is_empty() || other.is_empty() {
            return CongruenceSet::empty(self.dim);
        }
        let m = lcm_u64(self.modulus, other.modulus);
        let a = self.refine_to(m);
        let b = other.refine_to(m);
        let residues = a.residues.intersection(&b.residues).cloned().collect();
        CongruenceSet { dim: self.dim, modulus: m, residues }
    }

    /// Exact Haar measure `|residues| / m^k`.
    pub fn measure(&self) -> Rat {
        let total = Int::from(self.modulus).pow(self.dim as u32);
        Rat::new(Int::from(self.residues.len() as u64), total)
    }

    /// Membership of the point determined by a residue at a finer modulus.
    pub fn contains_residue(&self, residue: &[u64], modulus: u64) -> bool {
        assert!(
            modulus % self.modulus == 0,
            "query modulus must refine the set modulus"
        );
        let reduced: Vec<u64> = residue.iter().map(|&c| c % self.modulus).collect();
        self.residues.contains(&reduced)
    }
}

impl PartialEq for CongruenceSet {
    fn eq(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let m = lcm_u64(self.modulus, other.modulus);
        self.refine_to(m).residues == other.refine_to(m).residues
    }
}

impl Eq for CongruenceSet {}

impl fmt::Debug for CongruenceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CongruenceSet(mod {}, {} residues)", self.modulus, self.residues.len())
    }
}

/// An integer-valued step function on the odometer, kept canonical: values
/// are stored per residue at the least modulus of periodicity, zeros absent.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StepFunction {
    dim: usize,
    modulus: u64,
    values: BTreeMap<Vec<u64>, i64>,
}

impl StepFunction {
    pub fn zero(dim: usize) -> Self {
        StepFunction { dim, modulus: 1, values: BTreeMap::new() }
    }

    pub fn indicator(set: &CongruenceSet) -> Self {
        Self::scaled_indicator(set, 1)
    }

    pub fn scaled_indicator(set: &CongruenceSet, coeff: i64) -> Self {
        let values = if coeff == 0 {
            BTreeMap::new()
        } else {
            set.residues().map(|r| (r.clone(), coeff)).collect()
        };
        StepFunction { dim: set.dim(), modulus: set.modulus(), values }.canonicalize()
    }

    pub fn constant(dim: usize, value: i64) -> Self {
        if value == 0 {
            Self::zero(dim)
        } else {
            StepFunction { dim, modulus: 1, values: [(vec![0; dim], value)].into() }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn canonicalize(mut self) -> Self {
        self.values.retain(|_, v| *v != 0);
        if self.values.is_empty() {
            self.modulus = 1;
            return self;
        }
        // Reduce the modulus prime by prime while the function stays periodic.
        let mut p = 2;
        while p <= self.modulus {
            if self.modulus % p == 0 {
                let target = self.modulus / p;
                if let Some(reduced) = self.try_reduce(target) {
                    self = reduced;
                    continue;
                }
            }
            p += 1;
        }
        self
    }

    /// Attempts to rewrite at modulus `target` (`target | modulus`): every
    /// residue class mod `target` must carry a uniform value across lifts.
    fn try_reduce(&self, target: u64) -> Option<StepFunction> {
        let lifts_per_class = ((self.modulus / target) as u128).pow(self.dim as u32);
        let mut classes: HashMap<Vec<u64>, (i64, u128)> = HashMap::new();
        for (r, &v) in &self.values {
            let key: Vec<u64> = r.iter().map(|&c| c % target).collect();
            let entry = classes.entry(key).or_insert((v, 0));
            if entry.0 != v {
                return None;
            }
            entry.1 += 1;
        }
        if classes.values().any(|&(_, count)| count != lifts_per_class) {
            return None;
        }
        Some(StepFunction {
            dim: self.dim,
            modulus: target,
            values: classes.into_iter().map(|(r, (v, _))| (r, v)).collect(),
        })
    }

    fn refine_values(&self, target: u64) -> BTreeMap<Vec<u64>, i64> {
        assert!(target % self.modulus == 0);
        let lifts = target / self.modulus;
        let mut out = BTreeMap::new();
        for (r, &v) in &self.values {
            for lift in crate::lattice::lex_box(self.dim, lifts) {
                let lifted: Vec<u64> =
                    r.iter().zip(&lift).map(|(&base, &a)| base + a * self.modulus).collect();
                out.insert(lifted, v);
            }
        }
        out
    }

    pub fn add(&self, other: &StepFunction) -> StepFunction {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let m = lcm_u64(self.modulus, other.modulus);
        let mut values = self.refine_values(m);
        for (r, v) in other.refine_values(m) {
            *values.entry(r).or_insert(0) += v;
        }
        StepFunction { dim: self.dim, modulus: m, values }.canonicalize()
    }

    pub fn neg(&self) -> StepFunction {
        StepFunction {
            dim: self.dim,
            modulus: self.modulus,
            values: self.values.iter().map(|(r, &v)| (r.clone(), -v)).collect(),
        }
    }

    pub fn sub(&self, other: &StepFunction) -> StepFunction {
        self.add(&other.neg())
    }

    pub fn scale(&self, factor: i64) -> StepFunction {
        if factor == 0 {
            return StepFunction::zero(self.dim);
        }
        StepFunction {
            dim: self.dim,
            modulus: self.modulus,
            values: self.values.iter().map(|(r, &v)| (r.clone(), v * factor)).collect(),
        }
    }

    /// The module action `(g.f)(x) = f(x - g)`: support translates by `g`.
    pub fn translate(&self, g: &LatticeElement) -> StepFunction {
        assert_eq!(g.dim(), self.dim, "dimension mismatch");
        let shift: Vec<u64> = g.coords().iter().map(|c| mod_u64(c, self.modulus)).collect();
        let values = self
            .values
            .iter()
            .map(|(r, &v)| {
                (r.iter().zip(&shift).map(|(&a, &b)| (a + b) % self.modulus).collect(), v)
            })
            .collect();
        StepFunction { dim: self.dim, modulus: self.modulus, values }
    }

    /// Value at the point pinned down by a residue at a refining modulus.
    pub fn eval(&self, residue: &[u64], modulus: u64) -> i64 {
        assert!(modulus % self.modulus == 0, "query modulus must refine the function modulus");
        let reduced: Vec<u64> = residue.iter().map(|&c| c % self.modulus).collect();
        self.values.get(&reduced).copied().unwrap_or(0)
    }

    /// `Integral of |f| d mu`, exactly.
    pub fn integrate_abs(&self) -> Rat {
        let total = Int::from(self.modulus).pow(self.dim as u32);
        let sum: Int = self.values.values().map(|&v| Int::from(v.unsigned_abs())).sum();
        Rat::new(sum, total)
    }

    /// The canonical term view: one congruence set per distinct value.
    pub fn terms(&self) -> Vec<(CongruenceSet, i64)> {
        let mut by_value: BTreeMap<i64, BTreeSet<Vec<u64>>> = BTreeMap::new();
        for (r, &v) in &self.values {
            by_value.entry(v).or_default().insert(r.clone());
        }
        by_value
            .into_iter()
            .map(|(v, residues)| {
                (CongruenceSet { dim: self.dim, modulus: self.modulus, residues }, v)
            })
            .collect()
    }

    pub fn from_terms(
        dim: usize,
        terms: impl IntoIterator<Item = (CongruenceSet, i64)>,
    ) -> StepFunction {
        let mut acc = StepFunction::zero(dim);
        for (set, coeff) in terms {
            acc = acc.add(&StepFunction::scaled_indicator(&set, coeff));
        }
        acc
    }
}

impl Serialize for StepFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            set: CongruenceSet,
            coeff: i64,
        }
        #[derive(Serialize)]
        struct Repr {
            dim: usize,
            terms: Vec<Term>,
        }
        let repr = Repr {
            dim: self.dim,
            terms: self.terms().into_iter().map(|(set, coeff)| Term { set, coeff }).collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Term {
            set: CongruenceSet,
            coeff: i64,
        }
        #[derive(Deserialize)]
        struct Repr {
            dim: usize,
            terms: Vec<Term>,
        }
        let repr = Repr::deserialize(d)?;
        Ok(StepFunction::from_terms(repr.dim, repr.terms.into_iter().map(|t| (t.set, t.coeff))))
    }
}
