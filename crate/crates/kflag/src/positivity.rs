//! Membership certificates for the positivity cones
//! `Z_+[e^{-beta} - 1]` and `Z_+[e^{beta} - 1]` over the positive roots.
//!
//! A cone member is a nonnegative-integer combination of the monomials
//! `prod_beta (e^{-beta} - 1)^{n_beta}` (or the mirrored products). Writing
//! `z_i = e^{-alpha_i} - 1` for the simple roots, every generator satisfies
//! `e^{-beta} - 1 = prod_i (1 + z_i)^{m_i} - 1` with `beta = sum m_i alpha_i`,
//! which expands with nonnegative coefficients in the `z`-monomials; products
//! and sums preserve that property. Conversely a nonnegative combination of
//! `z`-monomials is itself a combination of cone monomials, because simple
//! roots are positive roots. Hence membership holds if and only if the
//! expansion of `f` over `z`-monomials — which is *unique*, since the
//! `e^{-alpha_i}` are algebraically independent — has nonnegative
//! coefficients.
//!
//! The certifier computes that expansion by canonical extreme-term
//! elimination: the lowest term of `f` (maximal height of the negated
//! exponent) is the lowest term of exactly one `z`-monomial, with coefficient
//! `+1`, so its coefficient in `f` *is* a `z`-coordinate. A negative value
//! refutes membership outright; otherwise the monomial is subtracted and the
//! elimination continues on strictly shallower terms until the residual
//! vanishes. The node cap bounds the number of eliminations and turns
//! oversized queries into an explicit "unknown" outcome, reported distinctly
//! from refutation.

use crate::lattice::{Coord, LaurentPoly, Weight};
use crate::roots::RootSystem;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::collections::HashMap;

/// Which of the two mirrored cones a query concerns.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum ConeSign {
    /// `Z_+[e^{-beta} - 1]`, exponents in the negative root cone.
    NegativeRoots,
    /// `Z_+[e^{beta} - 1]`, exponents in the positive root cone.
    PositiveRoots,
}

/// One certified summand: the exponent multiset of a monomial (positive-root
/// index -> multiplicity) and its strictly positive coefficient.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CertTerm {
    pub exps: BTreeMap<usize, u32>,
    pub coef: i64,
}

/// An explicit nonnegative-integer combination witnessing cone membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    sign: ConeSign,
    terms: Vec<CertTerm>,
}

impl Certificate {
    pub fn sign(&self) -> ConeSign {
        self.sign
    }

    pub fn terms(&self) -> &[CertTerm] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Symbolic re-expansion `sum c * prod (e^{sign beta} - 1)^{n_beta}`;
    /// must reproduce the certified polynomial exactly.
    pub fn expand(&self, rs: &RootSystem) -> LaurentPoly {
        let rank = rs.rank();
        let mut acc = LaurentPoly::zero(rank);
        for t in &self.terms {
            let mut m = LaurentPoly::constant(rank, t.coef);
            for (&k, &mult) in &t.exps {
                let beta = &rs.positive_roots()[k];
                let factor = match self.sign {
                    ConeSign::NegativeRoots => binomial(-beta),
                    ConeSign::PositiveRoots => binomial(beta.clone()),
                };
                for _ in 0..mult {
                    m = &m * &factor;
                }
            }
            acc = &acc + &m;
        }
        acc
    }
}

/// Outcome of a membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member(Certificate),
    NotMember,
    /// The elimination hit the node cap before deciding.
    Unknown { nodes: u64 },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Membership::Member(c) => Some(c),
            _ => None,
        }
    }
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for t in &self.terms {
            seq.serialize_element(&CertTermRepr(t))?;
        }
        seq.end()
    }
}

struct CertTermRepr<'a>(&'a CertTerm);

impl Serialize for CertTermRepr<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        let exps: BTreeMap<String, u32> = self
            .0
            .exps
            .iter()
            .map(|(&k, &v)| (k.to_string(), v))
            .collect();
        map.serialize_entry("exps", &exps)?;
        map.serialize_entry("coef", &self.0.coef)?;
        map.end()
    }
}

impl Serialize for Membership {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Membership::Member(c) => c.serialize(s),
            Membership::NotMember => {
                let mut map = s.serialize_map(Some(1))?;
                map.serialize_entry("member", &false)?;
                map.end()
            }
            Membership::Unknown { nodes } => {
                let mut map = s.serialize_map(Some(2))?;
                map.serialize_entry("unknown", &true)?;
                map.serialize_entry("nodes", nodes)?;
                map.end()
            }
        }
    }
}

/// Default elimination budget per query.
pub const DEFAULT_NODE_CAP: u64 = 1_000_000;

/// `true` iff `f` lies in the subring `Z[e^{sign beta} - 1]`, i.e. every
/// exponent of `f` lies in the corresponding root cone.
pub fn ring_membership(rs: &RootSystem, f: &LaurentPoly, sign: ConeSign) -> bool {
    f.iter().all(|(w, _)| {
        let oriented = match sign {
            ConeSign::NegativeRoots => -w,
            ConeSign::PositiveRoots => w.clone(),
        };
        rs.in_positive_root_cone(&oriented)
    })
}

fn binomial(w: Weight) -> LaurentPoly {
    let rank = w.rank();
    let mut p = LaurentPoly::exp(w);
    p.add_term(Weight::zero(rank), -1);
    p
}

/// Extreme term of a nonzero residual supported in the negative root cone:
/// the exponent whose negation has maximal height, ties broken by the
/// lattice order. Returns the exponent's coefficient and the simple-root
/// coordinates of its negation.
fn extreme(rs: &RootSystem, f: &LaurentPoly) -> (i64, Vec<Coord>) {
    let mut best: Option<(i64, Weight, i64, Vec<Coord>)> = None;
    for (w, c) in f.iter() {
        let mu = rs
            .alpha_coords(&-w)
            .expect("residual support stays in the negative root cone");
        let h = mu.iter().map(|&x| x as i64).sum::<i64>();
        if best
            .as_ref()
            .is_none_or(|(bh, bw, _, _)| h > *bh || (h == *bh && *w < *bw))
        {
            best = Some((h, w.clone(), c, mu));
        }
    }
    let (_, _, c, mu) = best.expect("residual is nonzero");
    (c, mu)
}

/// Expansion of `prod_i (e^{-alpha_i} - 1)^{m_i}` for simple-root exponents
/// `m`, memoized per query.
fn simple_monomial<'a>(
    rs: &RootSystem,
    cache: &'a mut HashMap<Vec<Coord>, LaurentPoly>,
    m: &[Coord],
) -> &'a LaurentPoly {
    if !cache.contains_key(m) {
        let mut p = LaurentPoly::one(rs.rank());
        for (i, &mult) in m.iter().enumerate() {
            let factor = binomial(-&rs.simple_roots()[i]);
            for _ in 0..mult {
                p = &p * &factor;
            }
        }
        cache.insert(m.to_vec(), p);
    }
    &cache[m]
}

/// Decide membership of `f` in the chosen cone, with an explicit certificate
/// on success. `cap` bounds the number of elimination steps; exceeding it
/// yields [`Membership::Unknown`], never a wrong verdict.
pub fn cone_certificate(
    rs: &RootSystem,
    f: &LaurentPoly,
    sign: ConeSign,
    cap: u64,
) -> Membership {
    assert_eq!(f.rank(), rs.rank(), "rank mismatch");
    // Orient to the negative convention; the exponent multisets of a
    // certificate are identical for the mirrored cone.
    let g = match sign {
        ConeSign::NegativeRoots => f.clone(),
        ConeSign::PositiveRoots => f.star(),
    };
    if !ring_membership(rs, &g, ConeSign::NegativeRoots) {
        return Membership::NotMember;
    }
    // Positive-root-list indices of the simple roots, for certificate terms.
    let simple_idx: Vec<usize> = rs
        .simple_roots()
        .iter()
        .map(|a| {
            rs.root_index(a)
                .expect("simple roots are positive roots")
                .0
        })
        .collect();
    let mut residual = g;
    let mut cache: HashMap<Vec<Coord>, LaurentPoly> = HashMap::new();
    let mut raw_terms: Vec<(Vec<Coord>, i64)> = Vec::new();
    let mut nodes: u64 = 0;
    while !residual.is_zero() {
        nodes += 1;
        if nodes > cap {
            return Membership::Unknown { nodes };
        }
        let (coef, m) = extreme(rs, &residual);
        if coef < 0 {
            // The z-coordinates of f are unique, so a negative one is a
            // sound refutation.
            return Membership::NotMember;
        }
        let monomial = simple_monomial(rs, &mut cache, &m);
        residual = &residual - &monomial.scale(coef);
        raw_terms.push((m, coef));
    }
    let mut terms: Vec<CertTerm> = raw_terms
        .into_iter()
        .map(|(m, coef)| {
            let exps: BTreeMap<usize, u32> = m
                .iter()
                .enumerate()
                .filter(|(_, &mult)| mult != 0)
                .map(|(i, &mult)| (simple_idx[i], mult as u32))
                .collect();
            CertTerm { exps, coef }
        })
        .collect();
    terms.sort();
    let cert = Certificate { sign, terms };
    debug_assert_eq!(cert.expand(rs), *f, "certificate must re-expand exactly");
    Membership::Member(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Coord;

    fn a2() -> std::sync::Arc<RootSystem> {
        RootSystem::from_tag("A2").unwrap()
    }

    fn lp(rank: usize, terms: &[(&[Coord], i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(rank, terms.iter().map(|(w, c)| (Weight::new(w.to_vec()), *c)))
    }

    #[test]
    fn zero_has_empty_certificate() {
        let rs = a2();
        let m = cone_certificate(&rs, &LaurentPoly::zero(2), ConeSign::NegativeRoots, 100);
        let c = m.certificate().unwrap();
        assert_eq!(c.num_terms(), 0);
        assert!(c.expand(&rs).is_zero());
    }

    #[test]
    fn exponential_of_negative_root_splits_off_one() {
        // e^{-alpha_1} = 1 + (e^{-alpha_1} - 1); alpha_1 = [2, -1].
        let rs = a2();
        let f = lp(2, &[(&[-2, 1], 1)]);
        let m = cone_certificate(&rs, &f, ConeSign::NegativeRoots, 100);
        let c = m.certificate().unwrap();
        assert_eq!(c.num_terms(), 2);
        assert_eq!(c.expand(&rs), f);
        // One empty monomial, one linear monomial in the first simple root.
        assert_eq!(c.terms()[0].exps.len(), 0);
        assert_eq!(c.terms()[0].coef, 1);
        assert_eq!(c.terms()[1].exps, BTreeMap::from([(0usize, 1u32)]));
        assert_eq!(c.terms()[1].coef, 1);
    }

    #[test]
    fn refutations() {
        let rs = a2();
        // e^{-alpha_1} - 2: the residual after the forced elimination is -1.
        let f = lp(2, &[(&[-2, 1], 1), (&[0, 0], -2)]);
        assert_eq!(
            cone_certificate(&rs, &f, ConeSign::NegativeRoots, 1000),
            Membership::NotMember
        );
        // 1 - e^{-alpha_1}: negative extreme coefficient.
        let g = lp(2, &[(&[0, 0], 1), (&[-2, 1], -1)]);
        assert_eq!(
            cone_certificate(&rs, &g, ConeSign::NegativeRoots, 1000),
            Membership::NotMember
        );
        // Support outside the cone: a fundamental weight.
        let h = lp(2, &[(&[1, 0], 1)]);
        assert_eq!(
            cone_certificate(&rs, &h, ConeSign::NegativeRoots, 1000),
            Membership::NotMember
        );
    }

    #[test]
    fn ring_membership_examples() {
        let rs = a2();
        // e^{-alpha_1 - alpha_2} - 1: in the negative-convention ring.
        let f = lp(2, &[(&[-1, -1], 1), (&[0, 0], -1)]);
        assert!(ring_membership(&rs, &f, ConeSign::NegativeRoots));
        assert!(!ring_membership(&rs, &lp(2, &[(&[1, 0], 1)]), ConeSign::NegativeRoots));
        assert!(ring_membership(
            &rs,
            &f.star(),
            ConeSign::PositiveRoots
        ));
    }

    #[test]
    fn mirrored_cone_via_star() {
        let rs = a2();
        // (e^{alpha_1} - 1)(e^{alpha_2} - 1) + 3 in the positive convention.
        let m = &binomial(rs.positive_roots()[0].clone())
            * &binomial(rs.positive_roots()[1].clone());
        let f = &m + &LaurentPoly::constant(2, 3);
        let out = cone_certificate(&rs, &f, ConeSign::PositiveRoots, 1000);
        let c = out.certificate().unwrap();
        assert_eq!(c.sign(), ConeSign::PositiveRoots);
        assert_eq!(c.expand(&rs), f);
    }

    /// A generator built on a non-simple root must itself be certified: its
    /// canonical certificate rewrites it over simple-root monomials.
    #[test]
    fn non_simple_generators_are_members() {
        for tag in ["A2", "B2", "G2"] {
            let rs = RootSystem::from_tag(tag).unwrap();
            for beta in rs.positive_roots() {
                let f = binomial(-beta);
                let out = cone_certificate(&rs, &f, ConeSign::NegativeRoots, 10_000);
                let cert = out.certificate().unwrap_or_else(|| {
                    panic!("generator for {beta} in {tag} must be certified")
                });
                assert_eq!(cert.expand(&rs), f);
                // Certificate terms only reference simple roots.
                for t in cert.terms() {
                    for (&k, _) in &t.exps {
                        let root = &rs.positive_roots()[k];
                        assert!(rs.simple_roots().contains(root));
                    }
                }
            }
        }
    }

    /// Exhaustive completeness check on a small box: every polynomial with
    /// support in {0, -a1, -a2, -a1-a2} and coefficients in [-1, 1] is
    /// certified iff a brute-force bounded search over the five candidate
    /// monomials finds a representation.
    #[test]
    fn verdicts_match_brute_force_on_small_box() {
        let rs = a2();
        let supports: [&[Coord]; 4] = [&[0, 0], &[-2, 1], &[1, -2], &[-1, -1]];
        // Candidate monomials with extreme weights in the box.
        let cands: Vec<LaurentPoly> = vec![
            LaurentPoly::one(2),
            binomial(-&rs.positive_roots()[0]),
            binomial(-&rs.positive_roots()[1]),
            binomial(-&rs.positive_roots()[2]),
            &binomial(-&rs.positive_roots()[0]) * &binomial(-&rs.positive_roots()[1]),
        ];
        let bound = 6i64;
        let mut combos: Vec<LaurentPoly> = Vec::new();
        let mut idx = vec![0i64; cands.len()];
        loop {
            let mut acc = LaurentPoly::zero(2);
            for (a, c) in idx.iter().zip(&cands) {
                if *a > 0 {
                    acc = &acc + &c.scale(*a);
                }
            }
            combos.push(acc);
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] <= bound {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
        let mut checked = 0;
        for c0 in -1..=1i64 {
            for c1 in -1..=1i64 {
                for c2 in -1..=1i64 {
                    for c3 in -1..=1i64 {
                        let f = lp(
                            2,
                            &[
                                (supports[0], c0),
                                (supports[1], c1),
                                (supports[2], c2),
                                (supports[3], c3),
                            ],
                        );
                        let verdict =
                            cone_certificate(&rs, &f, ConeSign::NegativeRoots, 100_000);
                        let feasible = combos.iter().any(|g| *g == f);
                        match verdict {
                            Membership::Member(ref cert) => {
                                assert!(feasible, "certified but oracle disagrees: {f}");
                                assert_eq!(cert.expand(&rs), f);
                            }
                            Membership::NotMember => {
                                assert!(!feasible, "refuted but oracle found a combo: {f}")
                            }
                            Membership::Unknown { .. } => panic!("cap hit on tiny instance"),
                        }
                        checked += 1;
                    }
                }
            }
        }
        assert_eq!(checked, 81);
    }

    #[test]
    fn members_are_closed_under_addition() {
        let rs = a2();
        let f = lp(2, &[(&[-2, 1], 1)]); // e^{-alpha_1}
        let g = lp(2, &[(&[-1, -1], 2), (&[0, 0], 1)]); // 2 e^{-a1-a2} + 1
        let fg = &f + &g;
        for h in [&f, &g, &fg] {
            assert!(
                cone_certificate(&rs, h, ConeSign::NegativeRoots, 10_000).is_member(),
                "{h}"
            );
        }
    }

    #[test]
    fn forgetful_of_member_is_nonnegative() {
        let rs = a2();
        let f = lp(2, &[(&[-2, 1], 3), (&[-1, -1], 1), (&[0, 0], 2)]);
        if let Membership::Member(c) = cone_certificate(&rs, &f, ConeSign::NegativeRoots, 10_000)
        {
            // The forgetful image equals the empty-monomial coefficient.
            let empty: i64 = c
                .terms()
                .iter()
                .filter(|t| t.exps.is_empty())
                .map(|t| t.coef)
                .sum();
            assert_eq!(f.forgetful(), empty);
            assert!(f.forgetful() >= 0);
        } else {
            panic!("expected membership");
        }
    }

    #[test]
    fn node_cap_reports_unknown() {
        let rs = RootSystem::from_tag("G2").unwrap();
        // An instance needing several eliminations under an absurdly small
        // cap must come back Unknown, not NotMember.
        let beta = &rs.positive_roots()[5];
        let mut f = LaurentPoly::one(2);
        for k in 0..3 {
            f = &f * &binomial(-&rs.positive_roots()[k]);
        }
        f = &f + &binomial(-beta).scale(2);
        match cone_certificate(&rs, &f, ConeSign::NegativeRoots, 2) {
            Membership::Unknown { nodes } => assert!(nodes > 2),
            other => panic!("expected Unknown, got {other:?}"),
        }
        // With a real budget the same query resolves.
        assert!(
            !matches!(
                cone_certificate(&rs, &f, ConeSign::NegativeRoots, DEFAULT_NODE_CAP),
                Membership::Unknown { .. }
            )
        );
    }

    proptest::proptest! {
        /// Any nonnegative combination of cone monomials must come back
        /// certified, and the certificate must re-expand to the input.
        #[test]
        fn random_members_are_certified(
            tag in proptest::sample::select(vec!["A2", "B2", "G2"]),
            picks in proptest::collection::vec((0usize..6, 1i64..4), 0..4),
        ) {
            let rs = RootSystem::from_tag(tag).unwrap();
            let n = rs.num_positive_roots();
            let mut f = LaurentPoly::zero(2);
            for (k, c) in picks {
                f = &f + &binomial(-&rs.positive_roots()[k % n]).scale(c);
            }
            let out = cone_certificate(&rs, &f, ConeSign::NegativeRoots, DEFAULT_NODE_CAP);
            match out {
                Membership::Member(cert) => {
                    proptest::prop_assert_eq!(cert.expand(&rs), f);
                }
                other => return Err(proptest::test_runner::TestCaseError::fail(
                    format!("expected membership for {f}, got {other:?}"))),
            }
        }

        /// Perturbing a member below one of its canonical coordinates makes
        /// it a non-member, and the certifier refutes it.
        #[test]
        fn undercut_members_are_refuted(
            tag in proptest::sample::select(vec!["A2", "B2", "G2"]),
            picks in proptest::collection::vec((0usize..6, 1i64..3), 1..4),
            cut in 1i64..5,
        ) {
            let rs = RootSystem::from_tag(tag).unwrap();
            let n = rs.num_positive_roots();
            let mut f = LaurentPoly::zero(2);
            for &(k, c) in &picks {
                f = &f + &binomial(-&rs.positive_roots()[k % n]).scale(c);
            }
            // Subtract more copies of a deepest-exponent monomial than the
            // canonical expansion can contain: the total binomial degree of f
            // is below the degree of the subtracted product, so its
            // coordinate there is zero and the result must leave the cone.
            let mut deep = LaurentPoly::one(2);
            for &(k, _) in &picks {
                deep = &deep * &binomial(-&rs.positive_roots()[k % n]);
            }
            deep = &deep * &binomial(-&rs.positive_roots()[0]);
            let g = &f - &deep.scale(cut);
            let out = cone_certificate(&rs, &g, ConeSign::NegativeRoots, DEFAULT_NODE_CAP);
            proptest::prop_assert_eq!(out, Membership::NotMember);
        }
    }

    #[test]
    fn json_shapes() {
        let rs = a2();
        let f = lp(2, &[(&[-2, 1], 1)]);
        let m = cone_certificate(&rs, &f, ConeSign::NegativeRoots, 100);
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"[{"exps":{},"coef":1},{"exps":{"0":1},"coef":1}]"#
        );
        assert_eq!(
            serde_json::to_string(&Membership::NotMember).unwrap(),
            r#"{"member":false}"#
        );
        assert_eq!(
            serde_json::to_string(&Membership::Unknown { nodes: 7 }).unwrap(),
            r#"{"unknown":true,"nodes":7}"#
        );
    }
}
