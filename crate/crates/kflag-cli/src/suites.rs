//! Verification sweeps over whole flag varieties: every instance is an exact
//! Laurent-polynomial check or a cone-certificate search, run in parallel and
//! aggregated in a canonical order.

use anyhow::{Context, Result};
use kflag::{
    cone_certificate, ConeSign, Family, FlagSpace, LaurentPoly, Membership, RootSystem, Side,
    WeylElem,
};
use rayon::prelude::*;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

/// One failing or capped instance, with enough detail to reproduce it via
/// `kflag show`.
#[derive(Clone, Debug)]
pub struct Failure {
    pub instance: String,
    pub detail: String,
}

/// Outcome summary of one verification sweep.
#[derive(Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub instances: usize,
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
    pub failures: Vec<Failure>,
    pub capped: Vec<Failure>,
    pub wall: Duration,
}

impl SuiteReport {
    pub fn is_clean(&self) -> bool {
        self.fail == 0 && self.unknown == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite={} instances={} pass={} fail={} unknown={} wall={:.2}s",
            self.suite,
            self.instances,
            self.pass,
            self.fail,
            self.unknown,
            self.wall.as_secs_f64()
        )?;
        for fail in &self.failures {
            writeln!(f, "  FAIL {}: {}", fail.instance, fail.detail)?;
        }
        for cap in &self.capped {
            writeln!(f, "  UNKNOWN {}: {}", cap.instance, cap.detail)?;
        }
        Ok(())
    }
}

enum Outcome {
    Pass,
    Fail(String),
    Unknown(String),
}

type Instance = (String, Outcome);

fn aggregate(suite: String, results: Vec<Instance>, start: Instant) -> SuiteReport {
    let mut report = SuiteReport {
        suite,
        instances: results.len(),
        pass: 0,
        fail: 0,
        unknown: 0,
        failures: Vec::new(),
        capped: Vec::new(),
        wall: Duration::ZERO,
    };
    for (instance, outcome) in results {
        match outcome {
            Outcome::Pass => report.pass += 1,
            Outcome::Fail(detail) => {
                report.fail += 1;
                report.failures.push(Failure { instance, detail });
            }
            Outcome::Unknown(detail) => {
                report.unknown += 1;
                report.capped.push(Failure { instance, detail });
            }
        }
    }
    report.wall = start.elapsed();
    report
}

/// Render a Weyl-group element as a 1-based generator word, `e` for identity.
pub fn word_str(rs: &RootSystem, w: WeylElem) -> String {
    let word = rs.word(w);
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join("")
    }
}

fn parity_sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Check a sign-twisted value for cone membership.
fn certify(
    rs: &RootSystem,
    value: &LaurentPoly,
    sign: i64,
    cone: ConeSign,
    cap: u64,
) -> Outcome {
    let twisted = value.scale(sign);
    match cone_certificate(rs, &twisted, cone, cap) {
        Membership::Member(_) => Outcome::Pass,
        Membership::NotMember => Outcome::Fail(format!("cone refutation for {twisted}")),
        Membership::Unknown { nodes } => {
            Outcome::Unknown(format!("search capped after {nodes} nodes; value {twisted}"))
        }
    }
}

fn parabolic_str(parabolic: &[usize]) -> String {
    if parabolic.is_empty() {
        "-".to_string()
    } else {
        parabolic
            .iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn open_space(tag: &str, parabolic: &[usize]) -> Result<(Arc<RootSystem>, FlagSpace)> {
    let rs = RootSystem::from_tag(tag)?;
    let space = FlagSpace::new(&rs, parabolic)
        .with_context(|| format!("invalid parabolic subset for {tag}"))?;
    Ok((rs, space))
}

/// Dual-basis structure constants: for every triple of minimal coset
/// representatives, the value `(-1)^{l(u)+l(v)+l(w)} p^w_{u,v}` must carry a
/// certificate in the negative-root cone.
pub fn verify_gk(tag: &str, parabolic: &[usize], cap: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let (rs, space) = open_space(tag, parabolic)?;
    let pts = space.points().to_vec();
    let pairs: Vec<(usize, usize)> = (0..pts.len())
        .flat_map(|a| (0..pts.len()).map(move |b| (a, b)))
        .collect();
    let results: Vec<Instance> = pairs
        .par_iter()
        .map(|&(ui, vi)| {
            let (u, v) = (pts[ui], pts[vi]);
            let mut out = Vec::with_capacity(pts.len());
            match space.structure_constants(ui, vi, Family::P) {
                Ok(row) => {
                    for (wi, value) in row.iter().enumerate() {
                        let w = pts[wi];
                        let id = format!(
                            "p u={} v={} w={}",
                            word_str(&rs, u),
                            word_str(&rs, v),
                            word_str(&rs, w)
                        );
                        let sign =
                            parity_sign(rs.length(u) + rs.length(v) + rs.length(w));
                        out.push((id, certify(&rs, value, sign, ConeSign::NegativeRoots, cap)));
                    }
                }
                Err(e) => out.push((
                    format!("p u={} v={}", word_str(&rs, u), word_str(&rs, v)),
                    Outcome::Fail(format!("engine error: {e}")),
                )),
            }
            out
        })
        .flatten()
        .collect();
    Ok(aggregate(
        format!("gk type={tag} parabolic={}", parabolic_str(parabolic)),
        results,
        start,
    ))
}

/// Structure-sheaf-side sweeps: certificates for the sign-twisted c-family,
/// the mirrored sign form for the b-family, agreement of parabolic and full
/// c-constants, and on the full flag the exact d-to-c comparison plus the
/// unsigned d-family cone check.
pub fn verify_gr(tag: &str, parabolic: &[usize], cap: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let (rs, space) = open_space(tag, parabolic)?;
    let full = if parabolic.is_empty() {
        None
    } else {
        Some(FlagSpace::full_flag(&rs))
    };
    let pts = space.points().to_vec();
    let dim = space.dim();
    let pairs: Vec<(usize, usize)> = (0..pts.len())
        .flat_map(|a| (0..pts.len()).map(move |b| (a, b)))
        .collect();
    let results: Vec<Instance> = pairs
        .par_iter()
        .map(|&(ui, vi)| {
            let (u, v) = (pts[ui], pts[vi]);
            let mut out = Vec::new();
            let c_row = match space.structure_constants(ui, vi, Family::C) {
                Ok(r) => r,
                Err(e) => {
                    return vec![(
                        format!("c u={} v={}", word_str(&rs, u), word_str(&rs, v)),
                        Outcome::Fail(format!("engine error: {e}")),
                    )]
                }
            };
            let b_row = match space.structure_constants(ui, vi, Family::B) {
                Ok(r) => r,
                Err(e) => {
                    return vec![(
                        format!("b u={} v={}", word_str(&rs, u), word_str(&rs, v)),
                        Outcome::Fail(format!("engine error: {e}")),
                    )]
                }
            };
            let full_c_row = full.as_ref().map(|fs| {
                let fu = fs
                    .point_index(u)
                    .expect("minimal representatives are full-flag points");
                let fv = fs
                    .point_index(v)
                    .expect("minimal representatives are full-flag points");
                fs.structure_constants(fu, fv, Family::C)
            });
            let d_row = if parabolic.is_empty() {
                Some(space.structure_constants(ui, vi, Family::D))
            } else {
                None
            };
            for (wi, w) in pts.iter().enumerate() {
                let (u_s, v_s, w_s) =
                    (word_str(&rs, u), word_str(&rs, v), word_str(&rs, *w));
                let lsum = rs.length(u) + rs.length(v) + rs.length(*w);
                out.push((
                    format!("c u={u_s} v={v_s} w={w_s}"),
                    certify(&rs, &c_row[wi], parity_sign(lsum), ConeSign::NegativeRoots, cap),
                ));
                out.push((
                    format!("b u={u_s} v={v_s} w={w_s}"),
                    certify(
                        &rs,
                        &b_row[wi],
                        parity_sign(dim + lsum),
                        ConeSign::PositiveRoots,
                        cap,
                    ),
                ));
                if let (Some(fs), Some(fc)) = (full.as_ref(), full_c_row.as_ref()) {
                    let outcome = match fc {
                        Ok(row) => {
                            let fwi = fs
                                .point_index(*w)
                                .expect("minimal representatives are full-flag points");
                            if row[fwi] == c_row[wi] {
                                Outcome::Pass
                            } else {
                                Outcome::Fail(format!(
                                    "parabolic c {} differs from full-flag c {}",
                                    c_row[wi], row[fwi]
                                ))
                            }
                        }
                        Err(e) => Outcome::Fail(format!("engine error: {e}")),
                    };
                    out.push((format!("c-restriction u={u_s} v={v_s} w={w_s}"), outcome));
                }
                if let Some(ref dr) = d_row {
                    let outcome = match dr {
                        Ok(row) => {
                            let expected = c_row[wi].star().scale(parity_sign(lsum));
                            if row[wi] != expected {
                                Outcome::Fail(format!(
                                    "d {} does not match sign-twisted mirrored c {}",
                                    row[wi], expected
                                ))
                            } else {
                                match certify(&rs, &row[wi], 1, ConeSign::PositiveRoots, cap) {
                                    Outcome::Pass => Outcome::Pass,
                                    other => other,
                                }
                            }
                        }
                        Err(e) => Outcome::Fail(format!("engine error: {e}")),
                    };
                    out.push((format!("d u={u_s} v={v_s} w={w_s}"), outcome));
                }
            }
            out
        })
        .flatten()
        .collect();
    Ok(aggregate(
        format!("gr type={tag} parabolic={}", parabolic_str(parabolic)),
        results,
        start,
    ))
}

/// Translated Schubert classes: expansion coefficients of `[O_{v X_w}]` in
/// the Schubert basis and of opposite classes in the ordinary basis carry
/// sign-twisted certificates in the negative-root cone.
pub fn verify_translation(tag: &str, cap: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let (rs, space) = open_space(tag, &[])?;
    let pts = space.points().to_vec();
    let n_pos = rs.num_positive_roots();
    let vs: Vec<usize> = (0..pts.len()).collect();
    let mut results: Vec<Instance> = vs
        .par_iter()
        .map(|&vi| {
            let v = pts[vi];
            let mut out = Vec::new();
            match space.translated_coeffs_recursive(v) {
                Ok(table) => {
                    for (wi, row) in table.iter().enumerate() {
                        for (ui, value) in row.iter().enumerate() {
                            let id = format!(
                                "f v={} w={} u={}",
                                word_str(&rs, v),
                                word_str(&rs, pts[wi]),
                                word_str(&rs, pts[ui])
                            );
                            let sign =
                                parity_sign(rs.length(pts[wi]) + rs.length(pts[ui]));
                            out.push((
                                id,
                                certify(&rs, value, sign, ConeSign::NegativeRoots, cap),
                            ));
                        }
                    }
                }
                Err(e) => out.push((
                    format!("f v={}", word_str(&rs, v)),
                    Outcome::Fail(format!("engine error: {e}")),
                )),
            }
            out
        })
        .flatten()
        .collect();
    // Opposite classes expanded in the ordinary basis.
    let e_results: Vec<Instance> = vs
        .par_iter()
        .map(|&wi| {
            let w = pts[wi];
            let mut out = Vec::new();
            let expansion = space
                .schubert_class(w, Side::Opposite)
                .and_then(|c| space.expand(&c, kflag::Basis::OrdinaryO));
            match expansion {
                Ok(coeffs) => {
                    for (ui, value) in coeffs.iter().enumerate() {
                        let id = format!(
                            "e w={} u={}",
                            word_str(&rs, w),
                            word_str(&rs, pts[ui])
                        );
                        let sign =
                            parity_sign(rs.length(w) + n_pos - rs.length(pts[ui]));
                        out.push((id, certify(&rs, value, sign, ConeSign::NegativeRoots, cap)));
                    }
                }
                Err(e) => out.push((
                    format!("e w={}", word_str(&rs, w)),
                    Outcome::Fail(format!("engine error: {e}")),
                )),
            }
            out
        })
        .flatten()
        .collect();
    results.extend(e_results);
    Ok(aggregate(format!("translation type={tag}"), results, start))
}

/// Richardson classes `[O_{X_w ∩ X^v}]`, v ≤ w: expansion in the Schubert
/// basis carries codimension-sign certificates in the negative-root cone.
pub fn verify_richardson(tag: &str, cap: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let (rs, space) = open_space(tag, &[])?;
    let pts = space.points().to_vec();
    let pairs: Vec<(usize, usize)> = (0..pts.len())
        .flat_map(|a| (0..pts.len()).map(move |b| (a, b)))
        .filter(|&(vi, wi)| rs.bruhat_leq(pts[vi], pts[wi]))
        .collect();
    let results: Vec<Instance> = pairs
        .par_iter()
        .map(|&(vi, wi)| {
            let (v, w) = (pts[vi], pts[wi]);
            let mut out = Vec::new();
            let expansion = space
                .richardson_class(v, w)
                .and_then(|c| space.expand(&c, kflag::Basis::OrdinaryO));
            match expansion {
                Ok(coeffs) => {
                    for (ui, value) in coeffs.iter().enumerate() {
                        let id = format!(
                            "richardson v={} w={} u={}",
                            word_str(&rs, v),
                            word_str(&rs, w),
                            word_str(&rs, pts[ui])
                        );
                        // codim(X_w ∩ X^v) + codim(X_u) has the parity of
                        // l(v) + l(w) + l(u).
                        let sign = parity_sign(
                            rs.length(v) + rs.length(w) + rs.length(pts[ui]),
                        );
                        out.push((id, certify(&rs, value, sign, ConeSign::NegativeRoots, cap)));
                    }
                }
                Err(e) => out.push((
                    format!(
                        "richardson v={} w={}",
                        word_str(&rs, v),
                        word_str(&rs, w)
                    ),
                    Outcome::Fail(format!("engine error: {e}")),
                )),
            }
            out
        })
        .flatten()
        .collect();
    Ok(aggregate(format!("richardson type={tag}"), results, start))
}

/// The sweep hardwired to the rank-2 special linear group, where every
/// nonempty Richardson variety has been checked by hand.
pub fn verify_richardson_sl3(cap: u64) -> Result<SuiteReport> {
    verify_richardson("A2", cap)
}

/// Row sums of dual-basis constants over standard subgroups: monomialwise
/// nonnegativity of the sign-twisted sum, exact agreement with the
/// Euler-characteristic identity, and cone certificates for the identity and
/// simple-reflection columns.
pub fn verify_psum(tag: &str, cap: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let (rs, space) = open_space(tag, &[])?;
    let pts = space.points().to_vec();
    let n = pts.len();
    let rank = rs.rank();
    // Precompute all dual-basis rows once.
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let rows: Vec<Vec<LaurentPoly>> = pairs
        .par_iter()
        .map(|&(ui, vi)| {
            space
                .structure_constants(ui, vi, Family::P)
                .expect("full-flag structure constants")
        })
        .collect();
    let p = |ui: usize, vi: usize, wi: usize| -> &LaurentPoly { &rows[ui * n + vi][wi] };

    let subsets: Vec<Vec<usize>> = (0..(1usize << rank))
        .map(|mask| (0..rank).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    let mut work: Vec<(usize, usize, Option<usize>)> = Vec::new();
    for ui in 0..n {
        for wi in 0..n {
            for (si, _) in subsets.iter().enumerate() {
                work.push((ui, wi, Some(si)));
            }
            work.push((ui, wi, None)); // identity / simple-reflection columns
        }
    }
    let results: Vec<Instance> = work
        .par_iter()
        .map(|&(ui, wi, subset)| {
            let (u, w) = (pts[ui], pts[wi]);
            let (u_s, w_s) = (word_str(&rs, u), word_str(&rs, w));
            let mut out = Vec::new();
            match subset {
                Some(si) => {
                    let s = &subsets[si];
                    let sign = parity_sign(rs.length(u) + rs.length(w));
                    let mut sum = LaurentPoly::zero(rank);
                    for v in rs.subgroup(s) {
                        let vi = space
                            .point_index(v)
                            .expect("subgroup elements are full-flag points");
                        sum = &sum + p(ui, vi, wi);
                    }
                    let twisted = sum.scale(sign);
                    let id = format!("psum u={u_s} w={w_s} S={}", parabolic_str(s));
                    let monomial_ok = twisted.iter().all(|(wt, c)| {
                        c >= 0 && rs.in_positive_root_cone(&-wt)
                    });
                    // Independent route: the twisted Euler characteristic of
                    // [O_{X_w}] ξ^u L(-rho_S), scaled by e^{-rho_S}, where
                    // rho_S sums the fundamental weights outside S.
                    let rho_s = kflag::Weight::new(
                        (0..rank)
                            .map(|i| if s.contains(&i) { 0 } else { 1 })
                            .collect::<Vec<_>>(),
                    );
                    let chi = space
                        .schubert_class(w, Side::Ordinary)
                        .and_then(|ow| {
                            let xi = space.xi_class(u)?;
                            let lb = space.line_bundle_class(&-&rho_s)?;
                            space.euler_char(&(&(&ow * &xi) * &lb))
                        })
                        .map(|chi| chi.mul_monomial(&-&rho_s, 1));
                    let outcome = match chi {
                        Ok(rhs) if rhs != sum => Outcome::Fail(format!(
                            "row sum {sum} disagrees with Euler-characteristic route {rhs}"
                        )),
                        Err(e) => Outcome::Fail(format!("engine error: {e}")),
                        Ok(_) if !monomial_ok => Outcome::Fail(format!(
                            "twisted row sum has a negative or out-of-cone term: {twisted}"
                        )),
                        Ok(_) => Outcome::Pass,
                    };
                    out.push((id, outcome));
                }
                None => {
                    let e_idx = space
                        .point_index(rs.identity())
                        .expect("identity is a point");
                    let sign = parity_sign(rs.length(u) + rs.length(w));
                    out.push((
                        format!("p-column u={u_s} w={w_s} v=e"),
                        certify(&rs, p(ui, e_idx, wi), sign, ConeSign::NegativeRoots, cap),
                    ));
                    for i in 0..rank {
                        let si_idx = space
                            .point_index(rs.simple_reflection(i))
                            .expect("simple reflection is a point");
                        out.push((
                            format!("p-column u={u_s} w={w_s} v={}", i + 1),
                            certify(
                                &rs,
                                p(ui, si_idx, wi),
                                -sign,
                                ConeSign::NegativeRoots,
                                cap,
                            ),
                        ));
                    }
                }
            }
            out
        })
        .flatten()
        .collect();
    Ok(aggregate(format!("psum type={tag}"), results, start))
}
