//! Weights and integer Laurent polynomials on the weight lattice.
//!
//! A [`Weight`] is an integer tuple in fundamental-weight coordinates: the
//! `i`-th coordinate of `lambda` is the pairing with the `i`-th simple
//! coroot. A [`LaurentPoly`] is a finite formal Z-combination of symbols
//! `e^lambda`; it is the representation-ring element an equivariant class
//! restricts to at a fixed point. All arithmetic is exact over Z; coefficient
//! overflow panics rather than wrapping.
//!
//! Canonical term order (used for serialization, display and leading terms)
//! is lexicographic on the coordinate tuples.

use crate::{Error, Result};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coordinate type for weights. Rank is at most 6 and all exponents produced
/// by the supported computations are small, so `i32` is ample.
pub type Coord = i32;

/// A weight in fundamental-weight coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(SmallVec<[Coord; 8]>);

impl Weight {
    pub fn new(coords: impl Into<SmallVec<[Coord; 8]>>) -> Self {
        Weight(coords.into())
    }

    pub fn zero(rank: usize) -> Self {
        Weight(SmallVec::from_elem(0, rank))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Coord] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Coord {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Componentwise minimum; used to clear denominators before division.
    fn min_with(&self, other: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), other.rank());
        Weight(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.min(b))
                .collect(),
        )
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(&a, &b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(&a, &b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|&a| -a).collect())
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Coord>::deserialize(d)?;
        Ok(Weight(v.into()))
    }
}

fn cadd(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("coefficient overflow")
}

fn cmul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("coefficient overflow")
}

/// An integer Laurent polynomial on the weight lattice: a finite
/// Z-combination of `e^lambda`. Terms are kept in canonical (lexicographic)
/// order with no zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<Weight, i64>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, 1)
    }

    pub fn constant(rank: usize, c: i64) -> Self {
        Self::monomial(Weight::zero(rank), c)
    }

    /// `c * e^w`.
    pub fn monomial(w: Weight, c: i64) -> Self {
        let rank = w.rank();
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(w, c);
        }
        LaurentPoly { rank, terms }
    }

    /// `e^w`.
    pub fn exp(w: Weight) -> Self {
        Self::monomial(w, 1)
    }

    pub fn from_terms(rank: usize, it: impl IntoIterator<Item = (Weight, i64)>) -> Self {
        let mut p = Self::zero(rank);
        for (w, c) in it {
            assert_eq!(w.rank(), rank, "weight rank mismatch");
            p.add_term(w, c);
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Weight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    /// Terms in canonical (lex-ascending) order.
    pub fn iter(&self) -> impl Iterator<Item = (&Weight, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    /// Support in canonical order.
    pub fn support(&self) -> impl Iterator<Item = &Weight> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, w: Weight, c: i64) {
        debug_assert_eq!(w.rank(), self.rank);
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = cadd(*e.get(), c);
                if s == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: i64) -> LaurentPoly {
        if c == 0 {
            return Self::zero(self.rank);
        }
        LaurentPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(w, &k)| (w.clone(), cmul(k, c)))
                .collect(),
        }
    }

    /// Multiply by the monomial `c * e^w` (exact shift, no term growth).
    pub fn mul_monomial(&self, w: &Weight, c: i64) -> LaurentPoly {
        if c == 0 {
            return Self::zero(self.rank);
        }
        LaurentPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(u, &k)| (u + w, cmul(k, c)))
                .collect(),
        }
    }

    /// The involution `e^lambda -> e^{-lambda}` (dual of a representation).
    pub fn star(&self) -> LaurentPoly {
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(w, &c)| (-w, c)).collect(),
        }
    }

    /// Linear extension of a map on exponents; the caller guarantees the map
    /// is injective on the support (true for lattice automorphisms such as
    /// Weyl-group elements).
    pub fn map_exponents(&self, f: impl Fn(&Weight) -> Weight) -> LaurentPoly {
        let mut p = Self::zero(self.rank);
        for (w, &c) in &self.terms {
            p.add_term(f(w), c);
        }
        p
    }

    /// Forgetful map to non-equivariant K-theory: `e^lambda -> 1`.
    pub fn forgetful(&self) -> i64 {
        self.terms.values().fold(0, |a, &c| cadd(a, c))
    }

    /// Lex-largest term, if any.
    pub fn lex_max_term(&self) -> Option<(&Weight, i64)> {
        self.terms.last_key_value().map(|(w, &c)| (w, c))
    }

    fn min_corner(&self) -> Weight {
        let mut it = self.terms.keys();
        let first = it.next().expect("nonzero polynomial").clone();
        it.fold(first, |acc, w| acc.min_with(w))
    }

    /// Exact division: returns `q` with `self = q * g`, or
    /// [`Error::InexactDivision`] if no such integer Laurent polynomial
    /// exists. Implemented as multivariate polynomial division after clearing
    /// a monomial from each operand.
    pub fn div_exact(&self, g: &LaurentPoly) -> Result<LaurentPoly> {
        if self.rank != g.rank {
            return Err(Error::RankMismatch(self.rank, g.rank));
        }
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.rank));
        }
        let mf = self.min_corner();
        let mg = g.min_corner();
        let fp = self.mul_monomial(&-&mf, 1);
        let gp = g.mul_monomial(&-&mg, 1);
        let (gw, gc) = gp.lex_max_term().expect("nonzero divisor");
        let gw = gw.clone();
        let mut rem = fp;
        let mut q = Self::zero(self.rank);
        while let Some((fw, fc)) = rem.lex_max_term() {
            let d = fw - &gw;
            if d.coords().iter().any(|&c| c < 0) || fc % gc != 0 {
                return Err(Error::InexactDivision);
            }
            let t = fc / gc;
            q.add_term(d.clone(), t);
            let sub = gp.mul_monomial(&d, t);
            rem = &rem - &sub;
        }
        Ok(q.mul_monomial(&(&mf - &mg), 1))
    }

    /// True if `g` divides `self` exactly.
    pub fn divisible_by(&self, g: &LaurentPoly) -> bool {
        self.div_exact(g).is_ok()
    }

    /// Coerce the rank of a zero polynomial (deserialized `[]` carries no
    /// rank information).
    pub fn coerce_rank(mut self, rank: usize) -> Result<LaurentPoly> {
        if self.rank == rank {
            return Ok(self);
        }
        if self.is_zero() {
            self.rank = rank;
            return Ok(self);
        }
        Err(Error::RankMismatch(self.rank, rank))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.rank, rhs.rank, "rank mismatch");
        let mut p = self.clone();
        for (w, &c) in &rhs.terms {
            p.add_term(w.clone(), c);
        }
        p
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.rank, rhs.rank, "rank mismatch");
        let mut p = self.clone();
        for (w, &c) in &rhs.terms {
            p.add_term(w.clone(), -c);
        }
        p
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.rank, rhs.rank, "rank mismatch");
        let mut p = LaurentPoly::zero(self.rank);
        for (u, &a) in &self.terms {
            for (v, &b) in &rhs.terms {
                p.add_term(u + v, cmul(a, b));
            }
        }
        p
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else if *c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if w.is_zero() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "e{w}")?;
            } else {
                write!(f, "{mag}*e{w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (w, &c) in &self.terms {
            struct Term<'a>(&'a Weight, i64);
            impl Serialize for Term<'_> {
                fn serialize<S: Serializer>(
                    &self,
                    s: S,
                ) -> std::result::Result<S::Ok, S::Error> {
                    let mut st = s.serialize_struct("Term", 2)?;
                    st.serialize_field("w", self.0)?;
                    st.serialize_field("c", &self.1)?;
                    st.end()
                }
            }
            seq.serialize_element(&Term(w, c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Term {
            w: Weight,
            c: i64,
        }
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "an array of {{w, c}} terms")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<LaurentPoly, A::Error> {
                let mut terms: Vec<Term> = Vec::new();
                while let Some(t) = seq.next_element::<Term>()? {
                    terms.push(t);
                }
                let rank = terms.first().map_or(0, |t| t.w.rank());
                if terms.iter().any(|t| t.w.rank() != rank) {
                    return Err(de::Error::custom("mixed weight ranks"));
                }
                Ok(LaurentPoly::from_terms(
                    rank,
                    terms.into_iter().map(|t| (t.w, t.c)),
                ))
            }
        }
        d.deserialize_seq(V)
    }
}

/// Convenience constructor used throughout: `1 - e^w`.
pub fn one_minus_exp(w: &Weight) -> LaurentPoly {
    let mut p = LaurentPoly::one(w.rank());
    p.add_term(w.clone(), -1);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(c: &[Coord]) -> Weight {
        Weight::new(c.to_vec())
    }

    #[test]
    fn square_of_one_minus_exp() {
        // (1 - e^{-a})^2 = 1 - 2 e^{-a} + e^{-2a}, rank-1 lattice with a = [2].
        let a = w(&[-2]);
        let p = one_minus_exp(&a);
        let sq = &p * &p;
        let mut expect = LaurentPoly::one(1);
        expect.add_term(w(&[-2]), -2);
        expect.add_term(w(&[-4]), 1);
        assert_eq!(sq, expect);
    }

    #[test]
    fn star_flips_exponents() {
        let p = one_minus_exp(&w(&[-2]));
        let s = p.star();
        assert_eq!(s, one_minus_exp(&w(&[2])));
        assert_eq!(s.star(), p);
    }

    #[test]
    fn forgetful_values() {
        assert_eq!(one_minus_exp(&w(&[-2])).forgetful(), 0);
        assert_eq!(LaurentPoly::constant(1, 5).forgetful(), 5);
        assert_eq!(LaurentPoly::zero(3).forgetful(), 0);
    }

    #[test]
    fn exact_division_of_product() {
        let a = &one_minus_exp(&w(&[1, -1])) * &one_minus_exp(&w(&[-2, 1]));
        let q = a.div_exact(&one_minus_exp(&w(&[1, -1]))).unwrap();
        assert_eq!(q, one_minus_exp(&w(&[-2, 1])));
    }

    #[test]
    fn inexact_division_is_an_error() {
        let f = LaurentPoly::constant(1, 1);
        let g = one_minus_exp(&w(&[2]));
        assert_eq!(f.div_exact(&g), Err(Error::InexactDivision));
        // 1 - e^{2a} is divisible by 1 - e^{a} but not by 1 - e^{3a}.
        let f = one_minus_exp(&w(&[4]));
        assert!(f.div_exact(&one_minus_exp(&w(&[2]))).is_ok());
        assert_eq!(
            f.div_exact(&one_minus_exp(&w(&[6]))),
            Err(Error::InexactDivision)
        );
    }

    #[test]
    fn division_handles_units_and_signs() {
        // (1 - e^{-a}) = -e^{-a} (1 - e^{a}); quotient must be the unit -e^{-a}.
        let f = one_minus_exp(&w(&[-2]));
        let g = one_minus_exp(&w(&[2]));
        let q = f.div_exact(&g).unwrap();
        assert_eq!(q, LaurentPoly::monomial(w(&[-2]), -1));
        assert_eq!(&q * &g, f);
    }

    #[test]
    fn zero_division_rules() {
        let z = LaurentPoly::zero(2);
        let g = one_minus_exp(&w(&[1, 0]));
        assert_eq!(z.div_exact(&g).unwrap(), z);
        assert_eq!(g.div_exact(&z), Err(Error::DivisionByZero));
    }

    #[test]
    fn display_is_canonical() {
        let mut p = LaurentPoly::constant(2, 3);
        p.add_term(w(&[-1, 2]), -1);
        p.add_term(w(&[1, 0]), 2);
        assert_eq!(p.to_string(), "-e[-1,2] + 3 + 2*e[1,0]");
        assert_eq!(LaurentPoly::zero(2).to_string(), "0");
    }

    #[test]
    fn serde_round_trip_is_bit_exact() {
        let mut p = LaurentPoly::constant(2, 3);
        p.add_term(w(&[-1, 2]), -1);
        p.add_term(w(&[1, 0]), 2);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"[{"w":[-1,2],"c":-1},{"w":[0,0],"c":3},{"w":[1,0],"c":2}]"#);
        let q: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
        assert_eq!(serde_json::to_string(&q).unwrap(), s);
        // Zero polynomial round-trips through the empty array.
        let z: LaurentPoly = serde_json::from_str("[]").unwrap();
        assert!(z.is_zero());
        assert_eq!(serde_json::to_string(&z).unwrap(), "[]");
    }

    fn arb_poly(rank: usize) -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec(
            (prop::collection::vec(-4i32..=4, rank), -5i64..=5),
            0..6,
        )
        .prop_map(move |terms| {
            LaurentPoly::from_terms(rank, terms.into_iter().map(|(c, k)| (Weight::new(c), k)))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a - &a, LaurentPoly::zero(2));
            prop_assert_eq!(&a * &LaurentPoly::one(2), a.clone());
        }

        #[test]
        fn star_is_a_ring_involution(a in arb_poly(2), b in arb_poly(2)) {
            prop_assert_eq!(a.star().star(), a.clone());
            prop_assert_eq!((&a * &b).star(), &a.star() * &b.star());
            prop_assert_eq!((&a + &b).star(), &a.star() + &b.star());
        }

        #[test]
        fn forgetful_is_a_ring_map(a in arb_poly(2), b in arb_poly(2)) {
            prop_assert_eq!((&a * &b).forgetful(), a.forgetful() * b.forgetful());
            prop_assert_eq!((&a + &b).forgetful(), a.forgetful() + b.forgetful());
        }

        #[test]
        fn product_divides_back(a in arb_poly(2), b in arb_poly(2)) {
            prop_assume!(!b.is_zero());
            let p = &a * &b;
            prop_assert_eq!(p.div_exact(&b).unwrap(), a);
        }

        #[test]
        fn serde_round_trip(a in arb_poly(3)) {
            let s = serde_json::to_string(&a).unwrap();
            let q: LaurentPoly = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(q.coerce_rank(3).unwrap(), a);
        }
    }
}
