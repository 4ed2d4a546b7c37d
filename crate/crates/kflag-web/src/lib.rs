//! Browser bindings for the kflag engine.
//!
//! Three operations are exposed to JavaScript, each returning a JSON string:
//! a structure-constant explorer (one `(u, v)` product expanded over `w`,
//! with positivity verdicts and certificates), projective-space tables with
//! the closed form cross-checked against the recurrence, and a cone-
//! membership checker for hand-typed Laurent polynomials.
//!
//! The JSON-producing core is plain Rust (`Result<String, String>`) so it is
//! testable on the host; `wasm-bindgen` wrappers adapt errors for JS.

use kflag::projective::{self, PnIndex};
use kflag::render::{parse_alpha, render_alpha, render_eps};
use kflag::{
    cone_certificate, ConeSign, Family, FlagSpace, LaurentPoly, RootSystem, WeylElem,
    DEFAULT_NODE_CAP,
};
use serde_json::json;
use wasm_bindgen::prelude::*;

const TAGS: &[&str] = &["A1", "A1xA1", "A2", "B2", "G2", "A3"];

fn parse_tag(tag: &str) -> Result<std::sync::Arc<RootSystem>, String> {
    if !TAGS.contains(&tag) {
        return Err(format!("unsupported type `{tag}` (choose one of {TAGS:?})"));
    }
    RootSystem::from_tag(tag).map_err(|e| e.to_string())
}

fn parse_parabolic(rs: &RootSystem, s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let i: usize = part
            .parse()
            .map_err(|_| format!("bad generator index `{part}`"))?;
        if i == 0 || i > rs.rank() {
            return Err(format!("generator {i} out of range 1..={}", rs.rank()));
        }
        out.push(i - 1);
    }
    Ok(out)
}

fn parse_word(rs: &RootSystem, s: &str) -> Result<WeylElem, String> {
    let s = s.trim();
    if s.is_empty() || s == "e" {
        return rs.from_word(&[]).map_err(|e| e.to_string());
    }
    let letters: Vec<usize> = if s.contains(',') {
        s.split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| format!("bad word `{s}`"))?
    } else {
        s.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or(()))
            .collect::<Result<_, _>>()
            .map_err(|_| format!("bad word `{s}`"))?
    };
    if letters.iter().any(|&i| i == 0 || i > rs.rank()) {
        return Err(format!("word `{s}` has letters out of range 1..={}", rs.rank()));
    }
    let zero_based: Vec<usize> = letters.iter().map(|&i| i - 1).collect();
    rs.from_word(&zero_based).map_err(|e| e.to_string())
}

fn word_str(rs: &RootSystem, w: WeylElem) -> String {
    let word = rs.word(w);
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter().map(|i| (i + 1).to_string()).collect()
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s {
        "p" => Ok(Family::P),
        "b" => Ok(Family::B),
        "c" => Ok(Family::C),
        "d" => Ok(Family::D),
        other => Err(format!("unknown family `{other}` (use p, b, c or d)")),
    }
}

/// Per-family positivity statement: the sign that twists the constant and
/// the cone the twisted constant is certified in.
fn family_convention(
    space: &FlagSpace,
    family: Family,
    lsum: usize,
) -> (i64, ConeSign, &'static str) {
    let parity = |k: usize| if k % 2 == 0 { 1i64 } else { -1 };
    match family {
        Family::P | Family::C => (parity(lsum), ConeSign::NegativeRoots, "negative"),
        Family::B => (
            parity(space.dim() + lsum),
            ConeSign::PositiveRoots,
            "positive",
        ),
        Family::D => (1, ConeSign::PositiveRoots, "positive"),
    }
}

/// Expand one product in the chosen basis family and certify every
/// coefficient. Words are 1-based digit strings ("121"), comma lists
/// ("1,2,1") or "e"; `parabolic` is a comma list of 1-based generators.
pub fn structure_constants_core(
    tag: &str,
    parabolic: &str,
    family: &str,
    u: &str,
    v: &str,
) -> Result<String, String> {
    let rs = parse_tag(tag)?;
    let s = parse_parabolic(&rs, parabolic)?;
    let family = parse_family(family)?;
    let space = FlagSpace::new(&rs, &s).map_err(|e| e.to_string())?;
    let uw = parse_word(&rs, u)?;
    let vw = parse_word(&rs, v)?;
    let ui = space
        .point_index(uw)
        .map_err(|_| format!("u = {} is not minimal in the chosen quotient", word_str(&rs, uw)))?;
    let vi = space
        .point_index(vw)
        .map_err(|_| format!("v = {} is not minimal in the chosen quotient", word_str(&rs, vw)))?;
    let row = space
        .structure_constants(ui, vi, family)
        .map_err(|e| e.to_string())?;
    let base = rs.length(uw) + rs.length(vw);
    let mut rows = Vec::new();
    for (wi, value) in row.iter().enumerate() {
        let w = space.points()[wi];
        let (sign, cone, cone_name) = family_convention(&space, family, base + rs.length(w));
        let twisted = value.scale(sign);
        let verdict = cone_certificate(&rs, &twisted, cone, DEFAULT_NODE_CAP);
        rows.push(json!({
            "w": word_str(&rs, w),
            "value": render_alpha(&rs, value).map_err(|e| e.to_string())?,
            "sign": sign,
            "cone": cone_name,
            "verdict": match &verdict {
                kflag::Membership::Member(_) => "member",
                kflag::Membership::NotMember => "not-a-member",
                kflag::Membership::Unknown { .. } => "unknown",
            },
            "certificate": verdict,
        }));
    }
    let out = json!({
        "type": tag,
        "parabolic": s.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "u": word_str(&rs, uw),
        "v": word_str(&rs, vw),
        "rows": rows,
    });
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// Full structure-constant table of `P^n` for one family, with the closed
/// formula checked against the recurrence on every entry.
pub fn projective_table_core(n: usize, family: &str) -> Result<String, String> {
    if !(1..=6).contains(&n) {
        return Err(format!("n = {n} out of range 1..=6"));
    }
    let weights = projective::eps_weights(n);
    let mut rows = Vec::new();
    for u in 0..=n {
        for v in 0..=n {
            for w in 0..=n {
                let idx = PnIndex::new(n, u, v, w).map_err(|e| e.to_string())?;
                let (closed, recur): (LaurentPoly, LaurentPoly) = match family {
                    "p" => (
                        projective::pn_p_closed(idx, &weights).map_err(|e| e.to_string())?,
                        projective::pn_p_recur(idx),
                    ),
                    "b" => (
                        projective::pn_b(idx).map_err(|e| e.to_string())?,
                        projective::pn_b_recur(idx),
                    ),
                    "r" => (
                        projective::pn_r_closed(idx).map_err(|e| e.to_string())?,
                        projective::pn_r_recur(idx),
                    ),
                    "q" => (
                        projective::pn_q_closed(idx).map_err(|e| e.to_string())?,
                        projective::pn_q_recur(idx),
                    ),
                    other => return Err(format!("unknown family `{other}` (use p, b, r or q)")),
                };
                rows.push(json!({
                    "u": u,
                    "v": v,
                    "w": w,
                    "value": render_eps(n, &closed).map_err(|e| e.to_string())?,
                    "agrees": closed == recur,
                }));
            }
        }
    }
    serde_json::to_string(&json!({ "n": n, "family": family, "rows": rows }))
        .map_err(|e| e.to_string())
}

/// Decide membership of a hand-typed Laurent polynomial (in the
/// `x_i = e^{alpha_i}` syntax) in the chosen binomial cone.
pub fn certify_core(tag: &str, poly: &str, cone: &str) -> Result<String, String> {
    let rs = parse_tag(tag)?;
    let f = parse_alpha(&rs, poly).map_err(|e| e.to_string())?;
    let cone_sign = match cone {
        "negative" => ConeSign::NegativeRoots,
        "positive" => ConeSign::PositiveRoots,
        other => return Err(format!("unknown cone `{other}` (use negative or positive)")),
    };
    let verdict = cone_certificate(&rs, &f, cone_sign, DEFAULT_NODE_CAP);
    let out = json!({
        "type": tag,
        "input": render_alpha(&rs, &f).map_err(|e| e.to_string())?,
        "cone": cone,
        "verdict": match &verdict {
            kflag::Membership::Member(_) => "member",
            kflag::Membership::NotMember => "not-a-member",
            kflag::Membership::Unknown { .. } => "unknown",
        },
        "certificate": verdict,
    });
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn structure_constants(
    tag: &str,
    parabolic: &str,
    family: &str,
    u: &str,
    v: &str,
) -> Result<String, JsValue> {
    structure_constants_core(tag, parabolic, family, u, v).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn projective_table(n: usize, family: &str) -> Result<String, JsValue> {
    projective_table_core(n, family).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn certify(tag: &str, poly: &str, cone: &str) -> Result<String, JsValue> {
    certify_core(tag, poly, cone).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explorer_certifies_a_full_row() {
        let out = structure_constants_core("A2", "", "p", "1", "1").unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 6);
        for row in rows {
            assert_eq!(row["verdict"], "member", "{row}");
        }
        assert_eq!(v["u"], "1");
        // xi^1 * xi^1 restricted to w = 121 is -e^{-2 rho}.
        let last = rows.iter().find(|r| r["w"] == "121").unwrap();
        assert_eq!(last["value"], "-x1^-2*x2^-2");
        assert_eq!(last["sign"], -1);
    }

    #[test]
    fn explorer_handles_parabolic_quotients() {
        let out = structure_constants_core("A2", "2", "p", "1", "1").unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 3);
        let labels: Vec<&str> = rows.iter().map(|r| r["w"].as_str().unwrap()).collect();
        assert_eq!(labels, ["e", "1", "21"]);
        // Non-minimal input is rejected with a readable message.
        let err = structure_constants_core("A2", "2", "p", "2", "e").unwrap_err();
        assert!(err.contains("not minimal"), "{err}");
    }

    #[test]
    fn explorer_matches_the_sheaf_basis_table() {
        let out = structure_constants_core("A2", "", "c", "12", "21").unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let row = v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["w"] == "121")
            .unwrap();
        assert_eq!(row["value"], "-x1^-1*x2^-1 + 1");
        assert_eq!(row["verdict"], "member");
    }

    #[test]
    fn projective_rows_agree_between_routes() {
        for family in ["p", "b", "r", "q"] {
            let out = projective_table_core(2, family).unwrap();
            let v: serde_json::Value = serde_json::from_str(&out).unwrap();
            let rows = v["rows"].as_array().unwrap();
            assert_eq!(rows.len(), 27);
            for row in rows {
                assert_eq!(row["agrees"], true, "family {family}: {row}");
            }
        }
        assert!(projective_table_core(0, "p").is_err());
        assert!(projective_table_core(2, "z").is_err());
    }

    #[test]
    fn certify_accepts_members_and_refutes_non_members() {
        let out = certify_core("A2", "x1^-1*x2^-1 - 1", "negative").unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"], "member");
        let cert = v["certificate"].as_array().unwrap();
        assert!(!cert.is_empty());

        let out = certify_core("A2", "1 - x1^-1", "negative").unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"], "not-a-member");
        assert_eq!(v["certificate"]["member"], false);

        // The mirrored cone accepts the mirrored binomial.
        let out = certify_core("A2", "x1*x2 - 1", "positive").unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"], "member");

        assert!(certify_core("A2", "x1 +", "negative").is_err());
        assert!(certify_core("E8", "1", "negative").is_err());
    }
}
