//! Fixed-point (GKM) models of flag spaces `G/P` and their Schubert-type
//! bases.
//!
//! A class is stored by its restrictions to the torus-fixed points, which are
//! indexed by the minimal coset representatives `W^P`. Conventions, pinned by
//! the calibration gate in [`FlagSpace::calibrate_demazure`] and the
//! restriction tests:
//!
//! - tangent weights at the fixed point `w` are `-w(beta)` for `beta` in
//!   `Delta^+ \ Delta^+_S`; the class of the point `w` restricts there to
//!   `prod (1 - e^{w beta})`;
//! - `[L(lambda)]` restricts at `w` to `e^{-w lambda}`;
//! - the Euler characteristic is
//!   `sum_w gamma(w) / prod_beta (1 - e^{w beta})`, evaluated exactly over a
//!   common denominator with a zero-remainder division;
//! - structure-sheaf classes of Schubert varieties are built along reduced
//!   words by the push-pull (Demazure) operator
//!   `(D_i gamma)(v) = (gamma(v) - e^{v alpha_i} gamma(v s_i)) / (1 - e^{v alpha_i})`;
//! - opposite classes are translations of ordinary ones by the longest
//!   element, via `([O_{vY}])(u) = v . ([O_Y](v^{-1} u))`.

use crate::lattice::{one_minus_exp, LaurentPoly, Weight};
use crate::roots::{RootSystem, TypeTag, WeylElem};
use crate::{Error, Result};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Identifies the space a class lives on, for mismatch checks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpaceKey {
    tag: TypeTag,
    parabolic: Vec<usize>,
}

/// Which Schubert-type basis / side.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Side {
    /// Closures of Borel orbits through the identity coset (`X_w`).
    Ordinary,
    /// Closures of opposite-Borel orbits (`X^w`).
    Opposite,
}

/// Basis families for expansion.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Basis {
    /// `[O_{X_w}]`, support below `w` in Bruhat order.
    OrdinaryO,
    /// `[O_{X^w}]`, support above `w`.
    OppositeO,
    /// Boundary-twisted duals `xi^w` of the ordinary basis, support above `w`.
    DualXi,
    /// Dualizing-sheaf twists of the opposite basis, support above `w`
    /// (full flag only).
    Dualizing,
}

/// Structure-constant families.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Family {
    /// `xi^u * xi^v` expanded in the `xi` basis.
    P,
    /// ordinary * ordinary expanded in the ordinary basis.
    B,
    /// opposite * opposite expanded in the opposite basis.
    C,
    /// dualizing * dualizing expanded in `{dualizing_w * [omega_{G/P}]}`
    /// (full flag only).
    D,
}

/// The four sign choices for the push-pull operator, distinguished by the
/// calibration gate. Naming is (numerator twist sign, denominator sign) on
/// `e^{v alpha_i}`.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum DemazureVariant {
    PlusPlus,
    MinusMinus,
    PlusMinus,
    MinusPlus,
}

impl DemazureVariant {
    pub const ALL: [DemazureVariant; 4] = [
        DemazureVariant::PlusPlus,
        DemazureVariant::MinusMinus,
        DemazureVariant::PlusMinus,
        DemazureVariant::MinusPlus,
    ];
}

/// A T-equivariant K-class in the fixed-point model: one Laurent polynomial
/// per fixed point of the space.
#[derive(Clone, PartialEq, Eq)]
pub struct GKMClass {
    key: SpaceKey,
    vals: Vec<LaurentPoly>,
}

impl GKMClass {
    pub fn restrictions(&self) -> &[LaurentPoly] {
        &self.vals
    }

    /// Restriction at the fixed point with the given index.
    pub fn at(&self, point: usize) -> &LaurentPoly {
        &self.vals[point]
    }

    pub fn is_zero(&self) -> bool {
        self.vals.iter().all(|p| p.is_zero())
    }

    /// Fixed points with nonzero restriction.
    pub fn support(&self) -> Vec<usize> {
        (0..self.vals.len())
            .filter(|&i| !self.vals[i].is_zero())
            .collect()
    }

    /// Pointwise dual: applies `e^lambda -> e^{-lambda}` to every restriction.
    pub fn star(&self) -> GKMClass {
        GKMClass {
            key: self.key.clone(),
            vals: self.vals.iter().map(|p| p.star()).collect(),
        }
    }

    /// Multiply by a global representation-ring scalar.
    pub fn scale_poly(&self, f: &LaurentPoly) -> GKMClass {
        GKMClass {
            key: self.key.clone(),
            vals: self.vals.iter().map(|p| p * f).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> GKMClass {
        GKMClass {
            key: self.key.clone(),
            vals: self.vals.iter().map(|p| p.scale(c)).collect(),
        }
    }

    fn check_key(&self, other: &GKMClass) {
        assert_eq!(self.key, other.key, "classes live on different spaces");
    }
}

impl std::ops::Add for &GKMClass {
    type Output = GKMClass;
    fn add(self, rhs: &GKMClass) -> GKMClass {
        self.check_key(rhs);
        GKMClass {
            key: self.key.clone(),
            vals: self
                .vals
                .iter()
                .zip(&rhs.vals)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &GKMClass {
    type Output = GKMClass;
    fn sub(self, rhs: &GKMClass) -> GKMClass {
        self.check_key(rhs);
        GKMClass {
            key: self.key.clone(),
            vals: self
                .vals
                .iter()
                .zip(&rhs.vals)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Mul for &GKMClass {
    type Output = GKMClass;
    fn mul(self, rhs: &GKMClass) -> GKMClass {
        self.check_key(rhs);
        GKMClass {
            key: self.key.clone(),
            vals: self
                .vals
                .iter()
                .zip(&rhs.vals)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }
}

impl fmt::Debug for GKMClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GKMClass[")?;
        for (i, p) in self.vals.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Per-point denominator bookkeeping: the tangent denominator
/// `d_w = prod_beta (1 - e^{w beta})` written as
/// `sign * e^{shift} * prod_{gamma in roots} (1 - e^gamma)` with positive
/// roots `gamma`.
struct DenomData {
    roots: Vec<usize>,
    sign: i64,
    shift: Weight,
}

/// A flag space `G/P` in its fixed-point model.
pub struct FlagSpace {
    rs: Arc<RootSystem>,
    parabolic: Vec<usize>,
    key: SpaceKey,
    points: Vec<WeylElem>,
    point_of: Vec<u32>,
    rep_point: Vec<u32>,
    tangent: Vec<usize>,
    denoms: Vec<DenomData>,
    euler_data: OnceLock<(Vec<LaurentPoly>, LaurentPoly)>,
    engine: OnceLock<Box<FlagSpace>>,
    ord_cells: OnceLock<Vec<OnceLock<GKMClass>>>,
    ordinary: OnceLock<Vec<GKMClass>>,
    opposite: OnceLock<Vec<GKMClass>>,
    xi: OnceLock<Vec<GKMClass>>,
    mobius_p: OnceLock<Vec<Vec<i64>>>,
}

impl FlagSpace {
    /// Build the model of `G/P` for the standard parabolic generated by the
    /// simple reflections with the given 0-based indices (`&[]` is the full
    /// flag variety `G/B`).
    pub fn new(rs: &Arc<RootSystem>, parabolic: &[usize]) -> Result<FlagSpace> {
        let rank = rs.rank();
        let mut s: Vec<usize> = parabolic.to_vec();
        s.sort_unstable();
        s.dedup();
        if let Some(&bad) = s.iter().find(|&&i| i >= rank) {
            return Err(Error::BadGenerator(bad, rank));
        }

        let points = rs.min_coset_reps(&s);
        let mut point_of = vec![u32::MAX; rs.order()];
        for (i, &w) in points.iter().enumerate() {
            point_of[w.index()] = i as u32;
        }
        let rep_point: Vec<u32> = rs
            .elements()
            .map(|w| point_of[rs.coset_rep(w, &s).index()])
            .collect();

        // Tangent roots: positive roots outside the Levi, i.e. those whose
        // simple-root support is not contained in S.
        let in_s = |i: usize| s.binary_search(&i).is_ok();
        let tangent: Vec<usize> = rs
            .positive_roots_alpha()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.iter().enumerate().any(|(i, &c)| c != 0 && !in_s(i)))
            .map(|(k, _)| k)
            .collect();

        // Denominator data per point.
        let mut denoms = Vec::with_capacity(points.len());
        for &w in &points {
            let mut roots = Vec::with_capacity(tangent.len());
            let mut sign = 1i64;
            let mut shift = Weight::zero(rank);
            for &k in &tangent {
                let im = rs.act(w, &rs.positive_roots()[k]);
                let (idx, neg) = rs
                    .root_index(&im)
                    .expect("Weyl image of a root is a root");
                roots.push(idx);
                if neg {
                    sign = -sign;
                    shift = &shift + &im;
                }
            }
            roots.sort_unstable();
            debug_assert!(roots.windows(2).all(|p| p[0] != p[1]));
            denoms.push(DenomData { roots, sign, shift });
        }

        Ok(FlagSpace {
            rs: Arc::clone(rs),
            key: SpaceKey {
                tag: rs.tag(),
                parabolic: s.clone(),
            },
            parabolic: s,
            points,
            point_of,
            rep_point,
            tangent,
            denoms,
            euler_data: OnceLock::new(),
            engine: OnceLock::new(),
            ord_cells: OnceLock::new(),
            ordinary: OnceLock::new(),
            opposite: OnceLock::new(),
            xi: OnceLock::new(),
            mobius_p: OnceLock::new(),
        })
    }

    pub fn full_flag(rs: &Arc<RootSystem>) -> FlagSpace {
        Self::new(rs, &[]).expect("empty parabolic is valid")
    }

    /// The model of projective `n`-space: type `A_n` with the parabolic
    /// generated by all simple reflections but the first. Fixed points are a
    /// chain; the point with index `u` lies in the `u`-dimensional coordinate
    /// subspace stratum.
    pub fn projective_space(n: usize) -> Result<FlagSpace> {
        if !(1..=6).contains(&n) {
            return Err(Error::IndexOutOfRange(format!(
                "projective space dimension {n} (supported: 1..=6)"
            )));
        }
        let rs = RootSystem::new(TypeTag::A(n as u8));
        let s: Vec<usize> = (1..n).collect();
        FlagSpace::new(&rs, &s)
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    /// 0-based indices of the simple reflections generating the parabolic.
    pub fn parabolic(&self) -> &[usize] {
        &self.parabolic
    }

    pub fn is_full_flag(&self) -> bool {
        self.parabolic.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// Complex dimension: number of tangent roots.
    pub fn dim(&self) -> usize {
        self.tangent.len()
    }

    /// Fixed points (minimal coset representatives) sorted by length.
    pub fn points(&self) -> &[WeylElem] {
        &self.points
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn point_index(&self, w: WeylElem) -> Result<usize> {
        let i = self.point_of[w.index()];
        if i == u32::MAX {
            Err(Error::NotMinimalRep)
        } else {
            Ok(i as usize)
        }
    }

    /// Index of the fixed point representing the coset of `w`.
    pub fn coset_point(&self, w: WeylElem) -> usize {
        self.rep_point[w.index()] as usize
    }

    /// Positive-root indices of `Delta^+ \ Delta^+_S`.
    pub fn tangent_roots(&self) -> &[usize] {
        &self.tangent
    }

    fn class(&self, vals: Vec<LaurentPoly>) -> GKMClass {
        GKMClass {
            key: self.key.clone(),
            vals,
        }
    }

    pub fn zero_class(&self) -> GKMClass {
        let z = LaurentPoly::zero(self.rank());
        self.class(vec![z; self.num_points()])
    }

    pub fn unit_class(&self) -> GKMClass {
        let o = LaurentPoly::one(self.rank());
        self.class(vec![o; self.num_points()])
    }

    fn check_class(&self, c: &GKMClass) -> Result<()> {
        if c.key != self.key {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    /// The tangent denominator at a point, as a polynomial:
    /// `prod_{beta tangent} (1 - e^{w beta})`.
    pub fn denominator_poly(&self, point: usize) -> LaurentPoly {
        let d = &self.denoms[point];
        let mut p = LaurentPoly::monomial(d.shift.clone(), d.sign);
        for &k in &d.roots {
            p = &p * &one_minus_exp(&self.rs.positive_roots()[k]);
        }
        p
    }

    /// The class of the fixed point with the given index.
    pub fn point_class(&self, point: usize) -> GKMClass {
        let mut vals = vec![LaurentPoly::zero(self.rank()); self.num_points()];
        vals[point] = self.denominator_poly(point);
        self.class(vals)
    }

    /// `[L(lambda)]`: the line bundle associated to a character `lambda` of
    /// the parabolic. `lambda` must be invariant under the Levi Weyl group.
    pub fn line_bundle_class(&self, lambda: &Weight) -> Result<GKMClass> {
        if lambda.rank() != self.rank() {
            return Err(Error::RankMismatch(lambda.rank(), self.rank()));
        }
        for &i in &self.parabolic {
            if self.rs.act(self.rs.simple_reflection(i), lambda) != *lambda {
                return Err(Error::NotParabolicChar);
            }
        }
        let vals = self
            .points
            .iter()
            .map(|&w| LaurentPoly::exp(-&self.rs.act(w, lambda)))
            .collect();
        Ok(self.class(vals))
    }

    /// One push-pull step with an explicit sign variant (used by the
    /// calibration gate; production code uses [`DemazureVariant::PlusPlus`]).
    pub fn demazure_variant(
        &self,
        variant: DemazureVariant,
        i: usize,
        c: &GKMClass,
    ) -> Result<GKMClass> {
        self.check_class(c)?;
        let (num_plus, den_plus) = match variant {
            DemazureVariant::PlusPlus => (true, true),
            DemazureVariant::MinusMinus => (false, false),
            DemazureVariant::PlusMinus => (true, false),
            DemazureVariant::MinusPlus => (false, true),
        };
        let mut vals = Vec::with_capacity(self.num_points());
        for (pi, &u) in self.points.iter().enumerate() {
            let other = self.coset_point(self.rs.mul_gen(u, i));
            let ua = self.rs.act(u, &self.rs.simple_roots()[i]);
            let num_w = if num_plus { ua.clone() } else { -&ua };
            let den_w = if den_plus { ua.clone() } else { -&ua };
            let num = c.at(pi) - &c.at(other).mul_monomial(&num_w, 1);
            vals.push(num.div_exact(&one_minus_exp(&den_w))?);
        }
        Ok(self.class(vals))
    }

    /// The push-pull (Demazure) operator along the `i`-th simple reflection.
    pub fn demazure(&self, i: usize, c: &GKMClass) -> Result<GKMClass> {
        self.demazure_variant(DemazureVariant::PlusPlus, i, c)
    }

    /// The full-flag model on the same root system; on a parabolic quotient
    /// this is the fibration total space used to transport classes.
    fn engine(&self) -> &FlagSpace {
        if self.is_full_flag() {
            self
        } else {
            self.engine
                .get_or_init(|| Box::new(FlagSpace::full_flag(&self.rs)))
        }
    }

    /// Ordinary class at a fixed point of a full-flag space, built lazily by
    /// push-pull along the canonical reduced word (whose prefixes are again
    /// canonical words, so the recursion only meets cached ancestors).
    fn ordinary_cell(&self, pi: usize) -> &GKMClass {
        debug_assert!(self.is_full_flag());
        let cells = self
            .ord_cells
            .get_or_init(|| (0..self.num_points()).map(|_| OnceLock::new()).collect());
        cells[pi].get_or_init(|| {
            if pi == 0 {
                return self.point_class(0);
            }
            let w = self.points[pi];
            let word = self.rs.word(w);
            let last = *word.last().unwrap();
            let prev = self
                .point_index(self.rs.mul_gen(w, last))
                .expect("word prefixes exist in the full flag model");
            self.demazure(last, self.ordinary_cell(prev))
                .expect("push-pull of a Schubert class is exact")
        })
    }

    fn ordinary_all(&self) -> &Vec<GKMClass> {
        self.ordinary.get_or_init(|| {
            if self.is_full_flag() {
                return (0..self.num_points())
                    .map(|pi| self.ordinary_cell(pi).clone())
                    .collect();
            }
            // On G/P, the class of the Schubert variety indexed by the
            // minimal representative w restricts, at each fixed point, to the
            // full-flag class of the maximal representative w * w_max(S)
            // (the preimage of the variety under the quotient fibration).
            let eng = self.engine();
            let wos = self
                .rs
                .subgroup(&self.parabolic)
                .into_iter()
                .max_by_key(|&x| self.rs.length(x))
                .expect("parabolic subgroup is nonempty");
            self.points
                .iter()
                .map(|&w| {
                    let vmax = self.rs.mul(w, wos);
                    let cls = eng.ordinary_cell(eng.point_index(vmax).unwrap());
                    self.class(
                        self.points
                            .iter()
                            .map(|&u| cls.at(eng.point_index(u).unwrap()).clone())
                            .collect(),
                    )
                })
                .collect()
        })
    }

    fn opposite_all(&self) -> &Vec<GKMClass> {
        self.opposite.get_or_init(|| {
            let wo = self.rs.longest_element();
            (0..self.num_points())
                .map(|pi| {
                    let dual = self.coset_point(self.rs.mul(wo, self.points[pi]));
                    self.translate(wo, &self.ordinary_all()[dual])
                })
                .collect()
        })
    }

    /// Structure-sheaf class of a Schubert variety: the closure of the
    /// (ordinary or opposite) Borel orbit indexed by a minimal coset
    /// representative `w`.
    pub fn schubert_class(&self, w: WeylElem, side: Side) -> Result<GKMClass> {
        let pi = self.point_index(w)?;
        Ok(match side {
            Side::Ordinary => self.ordinary_all()[pi].clone(),
            Side::Opposite => self.opposite_all()[pi].clone(),
        })
    }

    /// Moebius function of Bruhat order restricted to the fixed-point poset,
    /// computed by inverting the (unitriangular) incidence matrix.
    fn poset_mobius(&self) -> &Vec<Vec<i64>> {
        self.mobius_p.get_or_init(|| {
            let n = self.num_points();
            let leq =
                |i: usize, j: usize| self.rs.bruhat_leq(self.points[i], self.points[j]);
            let mut mu = vec![vec![0i64; n]; n];
            for i in 0..n {
                mu[i][i] = 1;
                for j in i + 1..n {
                    if !leq(i, j) {
                        continue;
                    }
                    let mut acc = 0i64;
                    for t in i..j {
                        if leq(i, t) && leq(t, j) {
                            acc += mu[i][t];
                        }
                    }
                    mu[i][j] = -acc;
                }
            }
            mu
        })
    }

    fn xi_all(&self) -> &Vec<GKMClass> {
        self.xi.get_or_init(|| {
            let mu = self.poset_mobius().clone();
            let opp = self.opposite_all();
            (0..self.num_points())
                .map(|v| {
                    let mut acc = self.zero_class();
                    for (w, opp_w) in opp.iter().enumerate() {
                        if mu[v][w] != 0 {
                            acc = &acc + &opp_w.scale(mu[v][w]);
                        }
                    }
                    acc
                })
                .collect()
        })
    }

    /// The dual basis element `xi^v` (opposite Schubert class twisted down by
    /// its boundary): the Moebius-alternating sum of opposite classes over
    /// the fixed-point poset. Dual to the ordinary basis under the pairing.
    pub fn xi_class(&self, v: WeylElem) -> Result<GKMClass> {
        let pi = self.point_index(v)?;
        Ok(self.xi_all()[pi].clone())
    }

    /// Dualizing-sheaf class of a Schubert variety (full flag only).
    pub fn dualizing_class(&self, w: WeylElem, side: Side) -> Result<GKMClass> {
        if !self.is_full_flag() {
            return Err(Error::FullFlagOnly);
        }
        let rho = self.rs.rho();
        let l_minus_rho = self.line_bundle_class(&-&rho)?;
        match side {
            Side::Opposite => {
                // e^rho * L(-rho) * xi^w
                let c = self.xi_class(w)?.scale_poly(&LaurentPoly::exp(rho));
                Ok(&c * &l_minus_rho)
            }
            Side::Ordinary => {
                // e^{-rho} * L(-rho) * (boundary-twisted ordinary class),
                // the latter obtained by translating xi at the dual index.
                let wo = self.rs.longest_element();
                let dual = self.coset_point(self.rs.mul(wo, w));
                let tw = self.translate(wo, &self.xi_all()[dual]);
                let c = tw.scale_poly(&LaurentPoly::exp(-&rho));
                Ok(&c * &l_minus_rho)
            }
        }
    }

    /// Restriction model of the translation automorphism:
    /// `([O_{vY}])(u) = v . ([O_Y](v^{-1} u))`, valid for any class.
    fn translate(&self, v: WeylElem, c: &GKMClass) -> GKMClass {
        let vinv = self.rs.inverse(v);
        let vals = self
            .points
            .iter()
            .map(|&u| {
                let src = self.coset_point(self.rs.mul(vinv, u));
                self.rs.weyl_act(v, c.at(src))
            })
            .collect();
        self.class(vals)
    }

    /// Class of the translated Schubert variety `v . X_w` (full flag only).
    pub fn translated_class(&self, v: WeylElem, w: WeylElem) -> Result<GKMClass> {
        if !self.is_full_flag() {
            return Err(Error::FullFlagOnly);
        }
        let c = self.schubert_class(w, Side::Ordinary)?;
        Ok(self.translate(v, &c))
    }

    /// Class of the Richardson intersection `X_w ∩ X^v` (full flag only):
    /// the product of the two structure-sheaf classes.
    pub fn richardson_class(&self, v: WeylElem, w: WeylElem) -> Result<GKMClass> {
        if !self.is_full_flag() {
            return Err(Error::FullFlagOnly);
        }
        Ok(&self.schubert_class(w, Side::Ordinary)? * &self.schubert_class(v, Side::Opposite)?)
    }

    /// Exact Euler characteristic by fixed-point localization:
    /// `sum_w gamma(w) / prod_beta (1 - e^{w beta})` over the tangent roots,
    /// computed over the common denominator `prod_{gamma > 0} (1 - e^gamma)`
    /// with an exactness check.
    pub fn euler_char(&self, c: &GKMClass) -> Result<LaurentPoly> {
        self.check_class(c)?;
        let (cofactors, denom) = self.euler_data.get_or_init(|| {
            let all: Vec<LaurentPoly> = self
                .rs
                .positive_roots()
                .iter()
                .map(one_minus_exp)
                .collect();
            let mut d = LaurentPoly::one(self.rank());
            for f in &all {
                d = &d * f;
            }
            let cof = (0..self.num_points())
                .map(|pi| {
                    let dd = &self.denoms[pi];
                    let mut p = LaurentPoly::monomial(-&dd.shift, dd.sign);
                    let mut it = dd.roots.iter().copied().peekable();
                    for (k, f) in all.iter().enumerate() {
                        if it.peek() == Some(&k) {
                            it.next();
                        } else {
                            p = &p * f;
                        }
                    }
                    p
                })
                .collect();
            (cof, d)
        });
        let mut num = LaurentPoly::zero(self.rank());
        for pi in 0..self.num_points() {
            let v = c.at(pi);
            if !v.is_zero() {
                num = &num + &(v * &cofactors[pi]);
            }
        }
        num.div_exact(denom)
            .map_err(|_| Error::Malformed("restrictions violate localization".into()))
    }

    /// `chi(a * b)`.
    pub fn pairing(&self, a: &GKMClass, b: &GKMClass) -> Result<LaurentPoly> {
        self.check_class(a)?;
        self.check_class(b)?;
        self.euler_char(&(a * b))
    }

    fn basis_classes(&self, basis: Basis) -> Result<Vec<GKMClass>> {
        Ok(match basis {
            Basis::OrdinaryO => self.ordinary_all().clone(),
            Basis::OppositeO => self.opposite_all().clone(),
            Basis::DualXi => self.xi_all().clone(),
            Basis::Dualizing => (0..self.num_points())
                .map(|i| self.dualizing_class(self.points[i], Side::Opposite))
                .collect::<Result<Vec<_>>>()?,
        })
    }

    /// Expand a class in one of the Schubert-type bases by triangular
    /// elimination along Bruhat order. Returns one coefficient (a Laurent
    /// polynomial) per fixed point.
    pub fn expand(&self, c: &GKMClass, basis: Basis) -> Result<Vec<LaurentPoly>> {
        self.check_class(c)?;
        let bs = self.basis_classes(basis)?;
        let n = self.num_points();
        // Ordinary supports point down in Bruhat order, the others up;
        // eliminate along a linear extension accordingly.
        let order: Vec<usize> = match basis {
            Basis::OrdinaryO => (0..n).rev().collect(),
            _ => (0..n).collect(),
        };
        let mut resid = c.clone();
        let mut coeffs = vec![LaurentPoly::zero(self.rank()); n];
        for &j in &order {
            let val = resid.at(j);
            if val.is_zero() {
                continue;
            }
            let a = val
                .div_exact(bs[j].at(j))
                .map_err(|_| Error::Malformed("class is not an integral combination".into()))?;
            resid = &resid - &bs[j].scale_poly(&a);
            coeffs[j] = a;
        }
        if !resid.is_zero() {
            return Err(Error::Malformed(
                "triangular elimination left a nonzero residual".into(),
            ));
        }
        Ok(coeffs)
    }

    /// Expansion coefficients by dual pairing, for the two bases with exact
    /// duals: ordinary coefficients pair against `xi`, `xi` coefficients pair
    /// against ordinary classes. Used as an independent cross-check of
    /// [`FlagSpace::expand`].
    pub fn expand_via_pairing(&self, c: &GKMClass, basis: Basis) -> Result<Vec<LaurentPoly>> {
        self.check_class(c)?;
        match basis {
            Basis::OrdinaryO => (0..self.num_points())
                .map(|j| self.pairing(c, &self.xi_all()[j]))
                .collect(),
            Basis::DualXi => (0..self.num_points())
                .map(|j| self.pairing(c, &self.ordinary_all()[j]))
                .collect(),
            _ => Err(Error::Malformed(
                "pairing expansion exists for the ordinary and xi bases".into(),
            )),
        }
    }

    /// Structure constants of the chosen family against basis element
    /// indices `u`, `v` (fixed-point indices). Returns one coefficient per
    /// fixed point `w`.
    pub fn structure_constants(
        &self,
        u: usize,
        v: usize,
        family: Family,
    ) -> Result<Vec<LaurentPoly>> {
        if u >= self.num_points() || v >= self.num_points() {
            return Err(Error::IndexOutOfRange(format!("u={u} v={v}")));
        }
        match family {
            Family::P => {
                let prod = &self.xi_all()[u] * &self.xi_all()[v];
                self.expand(&prod, Basis::DualXi)
            }
            Family::B => {
                let prod = &self.ordinary_all()[u] * &self.ordinary_all()[v];
                self.expand(&prod, Basis::OrdinaryO)
            }
            Family::C => {
                let prod = &self.opposite_all()[u] * &self.opposite_all()[v];
                self.expand(&prod, Basis::OppositeO)
            }
            Family::D => {
                if !self.is_full_flag() {
                    return Err(Error::FullFlagOnly);
                }
                let du = self.dualizing_class(self.points[u], Side::Opposite)?;
                let dv = self.dualizing_class(self.points[v], Side::Opposite)?;
                let prod = &du * &dv;
                // Divide out [omega_{G/B}] = [L(-2 rho)] pointwise (a unit:
                // e^{2 w rho} at the point w).
                let two_rho = Weight::new(vec![2; self.rank()]);
                let omega = self.line_bundle_class(&-&two_rho)?;
                let vals = prod
                    .vals
                    .iter()
                    .zip(&omega.vals)
                    .map(|(p, o)| p.div_exact(o))
                    .collect::<Result<Vec<_>>>()?;
                self.expand(&self.class(vals), Basis::Dualizing)
            }
        }
    }

    /// Structure constants of the parabolic quotient computed from full-flag
    /// constants by coset summation: the coefficient of `w in W^P` in
    /// `xi^u_P * xi^v_P` equals `sum p^w_{u', v'}` over `u'` in `u W_S`,
    /// `v'` in `v W_S`. `self` must be the full flag space; `s` names the
    /// parabolic (0-based).
    pub fn parabolic_p_from_b(
        &self,
        s: &[usize],
        u: WeylElem,
        v: WeylElem,
    ) -> Result<Vec<(WeylElem, LaurentPoly)>> {
        if !self.is_full_flag() {
            return Err(Error::FullFlagOnly);
        }
        let reps = self.rs.min_coset_reps(s);
        if !reps.contains(&u) || !reps.contains(&v) {
            return Err(Error::NotMinimalRep);
        }
        let ws = self.rs.subgroup(s);
        let mut acc: Vec<LaurentPoly> =
            vec![LaurentPoly::zero(self.rank()); self.num_points()];
        for &x in &ws {
            let up = self.point_index(self.rs.mul(u, x))?;
            for &y in &ws {
                let vp = self.point_index(self.rs.mul(v, y))?;
                let row = self.structure_constants(up, vp, Family::P)?;
                for (a, r) in acc.iter_mut().zip(row) {
                    *a = &*a + &r;
                }
            }
        }
        Ok(reps
            .iter()
            .map(|&w| (w, acc[self.point_index(w).unwrap()].clone()))
            .collect())
    }

    /// Coefficients of every translated ordinary class `[O_{v X_w}]` in the
    /// ordinary basis, computed by the one-letter recursion
    /// `[O_{v s_i X_w}] = e^{-v alpha_i} [O_{v X_w}] - (e^{-v alpha_i} - 1) [O_{v X_{s_i w}}]`
    /// (when `s_i w > w`; otherwise `s_i X_w = X_w`). Returns
    /// `table[w][u]` for the requested `v`. Full flag only; independent of
    /// the restriction-side computation, for cross-checking.
    pub fn translated_coeffs_recursive(&self, v: WeylElem) -> Result<Vec<Vec<LaurentPoly>>> {
        if !self.is_full_flag() {
            return Err(Error::FullFlagOnly);
        }
        let n = self.num_points();
        let zero = LaurentPoly::zero(self.rank());
        // x = e: [O_{X_w}] has coefficient vector delta_w.
        let mut table: Vec<Vec<LaurentPoly>> = (0..n)
            .map(|w| {
                let mut row = vec![zero.clone(); n];
                row[w] = LaurentPoly::one(self.rank());
                row
            })
            .collect();
        let mut x = self.rs.identity();
        for i in self.rs.word(v) {
            let si = self.rs.simple_reflection(i);
            let exw = LaurentPoly::exp(-&self.rs.act(x, &self.rs.simple_roots()[i]));
            let mut exw_m1 = exw.clone();
            exw_m1.add_term(Weight::zero(self.rank()), -1);
            let next: Vec<Vec<LaurentPoly>> = (0..n)
                .map(|wi| {
                    let w = self.points[wi];
                    let sw = self.rs.mul(si, w);
                    if self.rs.length(sw) < self.rs.length(w) {
                        table[wi].clone()
                    } else {
                        let swi = self.point_index(sw).expect("full flag");
                        (0..n)
                            .map(|u| {
                                &(&table[wi][u] * &exw) - &(&table[swi][u] * &exw_m1)
                            })
                            .collect()
                    }
                })
                .collect();
            table = next;
            x = self.rs.mul_gen(x, i);
        }
        debug_assert_eq!(x, v);
        Ok(table)
    }

    /// Check the divisibility conditions of the fixed-point model: for every
    /// point `w` and positive root `beta` with `rep(w s_beta) != w`, the
    /// difference of restrictions is divisible by `1 - e^{w beta}`.
    pub fn check_gkm(&self, c: &GKMClass) -> Result<()> {
        self.check_class(c)?;
        for (pi, &w) in self.points.iter().enumerate() {
            for (k, beta) in self.rs.positive_roots().iter().enumerate() {
                let partner = self.coset_point(self.rs.mul(w, self.rs.reflection(k)));
                if partner == pi {
                    continue;
                }
                let diff = c.at(pi) - c.at(partner);
                if diff.is_zero() {
                    continue;
                }
                let modulus = one_minus_exp(&self.rs.act(w, beta));
                if !diff.divisible_by(&modulus) {
                    return Err(Error::Malformed(format!(
                        "divisibility fails at point {pi}, root {k}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Convention calibration gate: run every push-pull sign variant through
    /// the pins and return the unique survivor; error if zero or several
    /// variants pass. Pins, for every class built along canonical reduced
    /// words starting from the point class: exactness of every division, chi
    /// equal to 1, Bruhat-triangular support, the divisibility conditions,
    /// the smooth-point diagonal value
    /// `prod_{beta > 0, w beta > 0} (1 - e^{w beta})`, and the top class
    /// being the unit. Full flag only.
    pub fn calibrate_demazure(&self) -> Result<DemazureVariant> {
        if !self.is_full_flag() {
            return Err(Error::FullFlagOnly);
        }
        let one = LaurentPoly::one(self.rank());
        let mut passing = Vec::new();
        'variants: for variant in DemazureVariant::ALL {
            let mut classes = vec![self.point_class(0)];
            for pi in 1..self.num_points() {
                let w = self.points[pi];
                let word = self.rs.word(w);
                let last = *word.last().unwrap();
                let prev = self.point_index(self.rs.mul_gen(w, last)).unwrap();
                match self.demazure_variant(variant, last, &classes[prev]) {
                    Ok(c) => classes.push(c),
                    Err(_) => continue 'variants,
                }
            }
            for (pi, c) in classes.iter().enumerate() {
                let w = self.points[pi];
                match self.euler_char(c) {
                    Ok(chi) if chi == one => {}
                    _ => continue 'variants,
                }
                for (qi, &v) in self.points.iter().enumerate() {
                    if !c.at(qi).is_zero() && !self.rs.bruhat_leq(v, w) {
                        continue 'variants;
                    }
                }
                if self.check_gkm(c).is_err() {
                    continue 'variants;
                }
                let mut diag = one.clone();
                for beta in self.rs.positive_roots() {
                    let im = self.rs.act(w, beta);
                    if !self.rs.root_index(&im).unwrap().1 {
                        diag = &diag * &one_minus_exp(&im);
                    }
                }
                if c.at(pi) != &diag {
                    continue 'variants;
                }
            }
            if classes.last().unwrap() != &self.unit_class() {
                continue 'variants;
            }
            passing.push(variant);
        }
        match passing.as_slice() {
            [v] => Ok(*v),
            [] => Err(Error::Malformed(
                "no push-pull variant passes the pins".into(),
            )),
            _ => Err(Error::Malformed(format!(
                "multiple push-pull variants pass the pins: {passing:?}"
            ))),
        }
    }
}

impl fmt::Debug for FlagSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FlagSpace({}, S={:?}, {} points)",
            self.rs.tag(),
            self.parabolic,
            self.num_points()
        )
    }
}
