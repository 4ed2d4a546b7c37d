//! Root systems, Weyl groups, Bruhat order and parabolic coset data.
//!
//! Supported types: `A1`..`A6`, `A1xA1`, `B2`, `G2`. Simple roots are the
//! columns of the Cartan matrix in fundamental-weight coordinates, so the
//! simple reflection acts by `s_i(lambda) = lambda - lambda_i * alpha_i`.
//! The Weyl group is enumerated once by breadth-first closure under right
//! multiplication by the simple reflections, which yields lengths and one
//! reduced word per element as byproducts. Bruhat order is tabulated with the
//! lifting-property recursion; the positive roots are the orbit of the simple
//! roots intersected with the positive cone.

use crate::lattice::{Coord, LaurentPoly, Weight};
use crate::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// A Weyl-group element: a cheap id into the enumeration held by a
/// [`RootSystem`]. Ids are BFS order, so they are sorted by length.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct WeylElem(u32);

impl WeylElem {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum TypeTag {
    A(u8),
    A1xA1,
    B2,
    G2,
}

impl TypeTag {
    pub fn parse(s: &str) -> Result<TypeTag> {
        match s {
            "A1" => Ok(TypeTag::A(1)),
            "A2" => Ok(TypeTag::A(2)),
            "A3" => Ok(TypeTag::A(3)),
            "A4" => Ok(TypeTag::A(4)),
            "A5" => Ok(TypeTag::A(5)),
            "A6" => Ok(TypeTag::A(6)),
            "A1xA1" => Ok(TypeTag::A1xA1),
            "B2" => Ok(TypeTag::B2),
            "G2" => Ok(TypeTag::G2),
            _ => Err(Error::UnknownType(s.to_string())),
        }
    }

    pub fn rank(self) -> usize {
        match self {
            TypeTag::A(n) => n as usize,
            TypeTag::A1xA1 | TypeTag::B2 | TypeTag::G2 => 2,
        }
    }

    /// Cartan matrix `a[i][j] = <alpha_j, alpha_i^vee>`.
    pub fn cartan(self) -> Vec<Vec<Coord>> {
        match self {
            TypeTag::A(n) => {
                let n = n as usize;
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                if i == j {
                                    2
                                } else if i.abs_diff(j) == 1 {
                                    -1
                                } else {
                                    0
                                }
                            })
                            .collect()
                    })
                    .collect()
            }
            TypeTag::A1xA1 => vec![vec![2, 0], vec![0, 2]],
            TypeTag::B2 => vec![vec![2, -1], vec![-2, 2]],
            TypeTag::G2 => vec![vec![2, -3], vec![-1, 2]],
        }
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeTag::A(n) => write!(f, "A{n}"),
            TypeTag::A1xA1 => write!(f, "A1xA1"),
            TypeTag::B2 => write!(f, "B2"),
            TypeTag::G2 => write!(f, "G2"),
        }
    }
}

/// Square integer matrix acting on fundamental-weight coordinates
/// (row-major; `(M v)_i = sum_j M[i*r+j] v_j`).
type Mat = Vec<Coord>;

fn mat_mul(a: &[Coord], b: &[Coord], r: usize) -> Mat {
    let mut m = vec![0; r * r];
    for i in 0..r {
        for k in 0..r {
            let aik = a[i * r + k];
            if aik == 0 {
                continue;
            }
            for j in 0..r {
                m[i * r + j] += aik * b[k * r + j];
            }
        }
    }
    m
}

/// Bit matrix with one row per group element.
struct BitMat {
    words: usize,
    data: Vec<u64>,
}

impl BitMat {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMat {
            words,
            data: vec![0; words * n],
        }
    }
    fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.words + col / 64] >> (col % 64) & 1 == 1
    }
    fn set(&mut self, row: usize, col: usize) {
        self.data[row * self.words + col / 64] |= 1 << (col % 64);
    }
    fn copy_row(&mut self, dst: usize, src: usize) {
        let (w, n) = (self.words, self.data.len());
        debug_assert!(src * w + w <= n && dst * w + w <= n);
        let row: Vec<u64> = self.data[src * w..src * w + w].to_vec();
        self.data[dst * w..dst * w + w].copy_from_slice(&row);
    }
}

/// An irreducible-or-`A1xA1` root system with its fully enumerated Weyl
/// group, Bruhat order and root data.
pub struct RootSystem {
    tag: TypeTag,
    rank: usize,
    cartan: Vec<Vec<Coord>>,
    cartan_adj: Vec<Vec<i64>>,
    cartan_det: i64,
    simple_roots: Vec<Weight>,
    positive_roots: Vec<Weight>,
    positive_roots_alpha: Vec<Vec<Coord>>,
    /// Map from alpha-coordinates to index in `positive_roots`.
    pos_index: HashMap<Vec<Coord>, usize>,
    mats: Vec<Mat>,
    length: Vec<u32>,
    word: Vec<Vec<u8>>,
    right_mul: Vec<u32>, // n * rank, w s_i
    inv: Vec<u32>,
    refl: Vec<u32>, // positive-root index -> reflection element
    bruhat: BitMat,
    longest: WeylElem,
}

fn det_i64(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut d = 0;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = (1..n)
            .map(|i| (0..n).filter(|&k| k != j).map(|k| m[i][k]).collect())
            .collect();
        let s = if j % 2 == 0 { 1 } else { -1 };
        d += s * m[0][j] * det_i64(&minor);
    }
    d
}

impl RootSystem {
    pub fn new(tag: TypeTag) -> Arc<RootSystem> {
        let rank = tag.rank();
        let cartan = tag.cartan();

        // Adjugate and determinant of the Cartan matrix, for exact conversion
        // of weights into simple-root coordinates.
        let c64: Vec<Vec<i64>> = cartan
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect();
        let cartan_det = det_i64(&c64);
        let mut cartan_adj = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                if rank == 1 {
                    cartan_adj[0][0] = 1;
                    continue;
                }
                let minor: Vec<Vec<i64>> = (0..rank)
                    .filter(|&r| r != j)
                    .map(|r| {
                        (0..rank)
                            .filter(|&c| c != i)
                            .map(|c| c64[r][c])
                            .collect()
                    })
                    .collect();
                let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                cartan_adj[i][j] = s * det_i64(&minor);
            }
        }

        // Simple roots: columns of the Cartan matrix in fundamental coords.
        let simple_roots: Vec<Weight> = (0..rank)
            .map(|j| Weight::new((0..rank).map(|i| cartan[i][j]).collect::<Vec<_>>()))
            .collect();

        // Positive roots: closure of the simple roots under the reflections,
        // kept in the positive cone (alpha-coordinates all nonnegative).
        let mut pos_alpha: Vec<Vec<Coord>> = (0..rank)
            .map(|i| (0..rank).map(|j| (i == j) as Coord).collect())
            .collect();
        let mut seen: std::collections::HashSet<Vec<Coord>> = pos_alpha.iter().cloned().collect();
        let mut qi = 0;
        while qi < pos_alpha.len() {
            let beta = pos_alpha[qi].clone();
            qi += 1;
            for i in 0..rank {
                // <beta, alpha_i^vee> = (A beta)_i
                let pair: Coord = (0..rank).map(|j| cartan[i][j] * beta[j]).sum();
                let mut im = beta.clone();
                im[i] -= pair;
                if im.iter().all(|&c| c >= 0) && seen.insert(im.clone()) {
                    pos_alpha.push(im);
                }
            }
        }
        // Canonical order: by height, then lex-descending on alpha coords
        // (puts the simple roots first in index order).
        pos_alpha.sort_by(|a, b| {
            let ha: Coord = a.iter().sum();
            let hb: Coord = b.iter().sum();
            ha.cmp(&hb).then(b.cmp(a))
        });
        let to_fund = |a: &[Coord]| -> Weight {
            Weight::new(
                (0..rank)
                    .map(|i| (0..rank).map(|j| cartan[i][j] * a[j]).sum::<Coord>())
                    .collect::<Vec<_>>(),
            )
        };
        let positive_roots: Vec<Weight> = pos_alpha.iter().map(|a| to_fund(a)).collect();
        let pos_index: HashMap<Vec<Coord>, usize> = pos_alpha
            .iter()
            .enumerate()
            .map(|(k, a)| (a.clone(), k))
            .collect();

        // Simple-reflection matrices.
        let gens: Vec<Mat> = (0..rank)
            .map(|i| {
                let mut m = vec![0; rank * rank];
                for k in 0..rank {
                    for j in 0..rank {
                        m[k * rank + j] =
                            (k == j) as Coord - if j == i { cartan[k][i] } else { 0 };
                    }
                }
                m
            })
            .collect();

        // BFS enumeration of W.
        let ident: Mat = {
            let mut m = vec![0; rank * rank];
            for i in 0..rank {
                m[i * rank + i] = 1;
            }
            m
        };
        let mut mats = vec![ident.clone()];
        let mut index: HashMap<Mat, u32> = HashMap::from([(ident, 0)]);
        let mut length = vec![0u32];
        let mut word: Vec<Vec<u8>> = vec![vec![]];
        let mut right_mul: Vec<u32> = Vec::new();
        let mut qi = 0;
        while qi < mats.len() {
            let m = mats[qi].clone();
            right_mul.resize((qi + 1) * rank, 0);
            for i in 0..rank {
                let prod = mat_mul(&m, &gens[i], rank);
                let id = *index.entry(prod.clone()).or_insert_with(|| {
                    mats.push(prod);
                    length.push(length[qi] + 1);
                    let mut w = word[qi].clone();
                    w.push(i as u8);
                    word.push(w);
                    (mats.len() - 1) as u32
                });
                right_mul[qi * rank + i] = id;
            }
            qi += 1;
        }
        let n = mats.len();

        // Inverses: walk the reversed reduced word from the identity.
        let inv: Vec<u32> = (0..n)
            .map(|w| {
                let mut acc = 0u32;
                for &i in word[w].iter().rev() {
                    acc = right_mul[acc as usize * rank + i as usize];
                }
                acc
            })
            .collect();

        let longest = WeylElem((n - 1) as u32);
        debug_assert!(length[n - 1] as usize == positive_roots.len());
        debug_assert!(n < 2 || length[n - 2] < length[n - 1], "longest element unique");

        // Reflections s_beta = w s_i w^{-1} where beta = w(alpha_i).
        let act = |m: &Mat, v: &Weight| -> Weight {
            Weight::new(
                (0..rank)
                    .map(|i| (0..rank).map(|j| m[i * rank + j] * v.get(j)).sum::<Coord>())
                    .collect::<Vec<_>>(),
            )
        };
        let alpha_coords = |v: &Weight| -> Option<Vec<Coord>> {
            let mut out = vec![0; rank];
            for (j, o) in out.iter_mut().enumerate() {
                let num: i64 = (0..rank)
                    .map(|i| cartan_adj[j][i] * v.get(i) as i64)
                    .sum();
                if num % cartan_det != 0 {
                    return None;
                }
                *o = (num / cartan_det) as Coord;
            }
            Some(out)
        };
        let mut refl = vec![u32::MAX; positive_roots.len()];
        'outer: for w in 0..n {
            for i in 0..rank {
                let beta = act(&mats[w], &simple_roots[i]);
                if let Some(a) = alpha_coords(&beta) {
                    if let Some(&k) = pos_index.get(&a) {
                        if refl[k] == u32::MAX {
                            // s_beta = (w s_i) w^{-1}
                            let mut acc = right_mul[w * rank + i];
                            for &l in word[inv[w] as usize].iter() {
                                acc = right_mul[acc as usize * rank + l as usize];
                            }
                            refl[k] = acc;
                        }
                    }
                }
            }
            if refl.iter().all(|&r| r != u32::MAX) {
                break 'outer;
            }
        }
        debug_assert!(refl.iter().all(|&r| r != u32::MAX));

        // Bruhat order by the lifting property: for s with ws < w,
        // v <= w  iff  v <= ws or vs <= ws. Rows in BFS (length) order.
        let mut bruhat = BitMat::new(n);
        bruhat.set(0, 0);
        for w in 1..n {
            let s = *word[w].last().unwrap() as usize;
            let ws = right_mul[w * rank + s] as usize;
            debug_assert!(length[ws] < length[w]);
            bruhat.copy_row(w, ws);
            for v in 0..n {
                let vs = right_mul[v * rank + s] as usize;
                if bruhat.get(ws, v) || bruhat.get(ws, vs) {
                    bruhat.set(w, v);
                }
            }
        }

        Arc::new(RootSystem {
            tag,
            rank,
            cartan,
            cartan_adj,
            cartan_det,
            simple_roots,
            positive_roots,
            positive_roots_alpha: pos_alpha,
            pos_index,
            mats,
            length,
            word,
            right_mul,
            inv,
            refl,
            bruhat,
            longest,
        })
    }

    /// Build from an external tag string (`"A1"`..`"A6"`, `"A1xA1"`, `"B2"`,
    /// `"G2"`).
    pub fn from_tag(tag: &str) -> Result<Arc<RootSystem>> {
        Ok(Self::new(TypeTag::parse(tag)?))
    }

    pub fn tag(&self) -> TypeTag {
        self.tag
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<Coord>] {
        &self.cartan
    }

    pub fn order(&self) -> usize {
        self.mats.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = WeylElem> {
        (0..self.order() as u32).map(WeylElem)
    }

    pub fn element(&self, index: usize) -> WeylElem {
        assert!(index < self.order());
        WeylElem(index as u32)
    }

    pub fn identity(&self) -> WeylElem {
        WeylElem(0)
    }

    pub fn longest_element(&self) -> WeylElem {
        self.longest
    }

    pub fn simple_reflection(&self, i: usize) -> WeylElem {
        assert!(i < self.rank);
        WeylElem(self.right_mul[i])
    }

    pub fn length(&self, w: WeylElem) -> usize {
        self.length[w.index()] as usize
    }

    /// One reduced word for `w` (0-based generator indices, BFS-canonical).
    pub fn word(&self, w: WeylElem) -> Vec<usize> {
        self.word[w.index()].iter().map(|&i| i as usize).collect()
    }

    /// Product of simple reflections with the given 0-based indices.
    pub fn from_word(&self, word: &[usize]) -> Result<WeylElem> {
        let mut acc = self.identity();
        for &i in word {
            if i >= self.rank {
                return Err(Error::BadGenerator(i, self.rank));
            }
            acc = self.mul_gen(acc, i);
        }
        Ok(acc)
    }

    /// `w * s_i`.
    pub fn mul_gen(&self, w: WeylElem, i: usize) -> WeylElem {
        WeylElem(self.right_mul[w.index() * self.rank + i])
    }

    pub fn mul(&self, a: WeylElem, b: WeylElem) -> WeylElem {
        let mut acc = a;
        for &i in self.word[b.index()].iter() {
            acc = self.mul_gen(acc, i as usize);
        }
        acc
    }

    pub fn inverse(&self, w: WeylElem) -> WeylElem {
        WeylElem(self.inv[w.index()])
    }

    /// True if `l(w s_i) < l(w)`.
    pub fn right_descent(&self, w: WeylElem, i: usize) -> bool {
        self.length(self.mul_gen(w, i)) < self.length(w)
    }

    /// Action on a weight in fundamental coordinates.
    pub fn act(&self, w: WeylElem, v: &Weight) -> Weight {
        let m = &self.mats[w.index()];
        let r = self.rank;
        Weight::new(
            (0..r)
                .map(|i| (0..r).map(|j| m[i * r + j] * v.get(j)).sum::<Coord>())
                .collect::<Vec<_>>(),
        )
    }

    /// Linear extension of the action to Laurent polynomials:
    /// `w . e^lambda = e^{w lambda}`.
    pub fn weyl_act(&self, w: WeylElem, p: &LaurentPoly) -> LaurentPoly {
        p.map_exponents(|v| self.act(w, v))
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    /// Simple-root coordinates of the positive roots, in list order.
    pub fn positive_roots_alpha(&self) -> &[Vec<Coord>] {
        &self.positive_roots_alpha
    }

    /// The reflection through the `k`-th positive root.
    pub fn reflection(&self, k: usize) -> WeylElem {
        WeylElem(self.refl[k])
    }

    /// Index of a root given in fundamental coordinates; `(index, negative)`.
    pub fn root_index(&self, beta: &Weight) -> Option<(usize, bool)> {
        let a = self.alpha_coords(beta)?;
        if let Some(&k) = self.pos_index.get(&a) {
            return Some((k, false));
        }
        let na: Vec<Coord> = a.iter().map(|&c| -c).collect();
        self.pos_index.get(&na).map(|&k| (k, true))
    }

    /// Sum of the fundamental weights (= half the sum of positive roots).
    pub fn rho(&self) -> Weight {
        Weight::new(vec![1; self.rank])
    }

    /// Bruhat order `v <= w`.
    pub fn bruhat_leq(&self, v: WeylElem, w: WeylElem) -> bool {
        self.bruhat.get(w.index(), v.index())
    }

    /// Moebius function of Bruhat order on the full Weyl group:
    /// `(-1)^{l(v)+l(w)}` on comparable pairs, 0 otherwise.
    pub fn mobius(&self, v: WeylElem, w: WeylElem) -> i64 {
        if !self.bruhat_leq(v, w) {
            0
        } else if (self.length(v) + self.length(w)) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Simple-root coordinates of a weight, if it lies in the root lattice.
    pub fn alpha_coords(&self, v: &Weight) -> Option<Vec<Coord>> {
        let mut out = vec![0; self.rank];
        for (j, o) in out.iter_mut().enumerate() {
            let num: i64 = (0..self.rank)
                .map(|i| self.cartan_adj[j][i] * v.get(i) as i64)
                .sum();
            if num % self.cartan_det != 0 {
                return None;
            }
            *o = (num / self.cartan_det) as Coord;
        }
        Some(out)
    }

    /// Membership in the positive root cone `Q^+ = Z_+ alpha_1 + ...`.
    pub fn in_positive_root_cone(&self, v: &Weight) -> bool {
        self.alpha_coords(v)
            .is_some_and(|a| a.iter().all(|&c| c >= 0))
    }

    /// Height of a root-lattice element: sum of simple-root coordinates.
    pub fn height(&self, v: &Weight) -> Option<i64> {
        self.alpha_coords(v)
            .map(|a| a.iter().map(|&c| c as i64).sum())
    }

    /// Elements of the standard parabolic subgroup `W_S` (0-based generator
    /// set), in id order.
    pub fn subgroup(&self, s: &[usize]) -> Vec<WeylElem> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0u32];
        let mut qi = 0;
        while qi < out.len() {
            let w = out[qi] as usize;
            qi += 1;
            for &i in s {
                let u = self.right_mul[w * self.rank + i];
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    out.push(u);
                }
            }
        }
        out.sort_unstable();
        out.into_iter().map(WeylElem).collect()
    }

    /// Minimal-length coset representatives of `W / W_S`, sorted by
    /// `(length, id)`: exactly the `w` with `w s_i > w` for all `i` in `S`.
    pub fn min_coset_reps(&self, s: &[usize]) -> Vec<WeylElem> {
        self.elements()
            .filter(|&w| s.iter().all(|&i| !self.right_descent(w, i)))
            .collect()
    }

    /// The minimal representative of the coset `w W_S`.
    pub fn coset_rep(&self, w: WeylElem, s: &[usize]) -> WeylElem {
        let mut w = w;
        loop {
            let mut moved = false;
            for &i in s {
                if self.right_descent(w, i) {
                    w = self.mul_gen(w, i);
                    moved = true;
                }
            }
            if !moved {
                return w;
            }
        }
    }
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootSystem({}, |W|={})", self.tag, self.order())
    }
}
