//! Deterministic structure-constant tables in CSV or JSON.
//!
//! Coefficients are rendered in canonical term order. Full-flag tables use
//! variables `x_i = e^{alpha_i}` (simple-root exponents); projective-space
//! tables use `y_ij = e^{eps_i - eps_j}` with a greedy pairing of the
//! epsilon-coordinate vector.

use anyhow::Result;
use kflag::projective::{self, PnIndex};
pub use kflag::render::{render_alpha, render_eps};
use kflag::{Family, FlagSpace, LaurentPoly, RootSystem};
use serde_json::json;

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum PnFamily {
    P,
    B,
    R,
    Q,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum PnForm {
    Closed,
    Recur,
}

fn word_json(rs: &RootSystem, w: kflag::WeylElem) -> serde_json::Value {
    json!(rs.word(w).iter().map(|i| i + 1).collect::<Vec<usize>>())
}

/// Full-flag structure-constant table for one family, all `(u,v,w)` triples
/// in the canonical element order, as a CSV or JSON string.
pub fn type_table(tag: &str, family: Family, format: TableFormat) -> Result<String> {
    let rs = RootSystem::from_tag(tag)?;
    let space = FlagSpace::full_flag(&rs);
    let pts = space.points().to_vec();
    let mut csv_rows: Vec<[String; 4]> = Vec::new();
    let mut json_rows: Vec<serde_json::Value> = Vec::new();
    for (ui, &u) in pts.iter().enumerate() {
        for (vi, &v) in pts.iter().enumerate() {
            let row = space.structure_constants(ui, vi, family)?;
            for (wi, value) in row.iter().enumerate() {
                let w = pts[wi];
                match format {
                    TableFormat::Csv => csv_rows.push([
                        crate::suites::word_str(&rs, u),
                        crate::suites::word_str(&rs, v),
                        crate::suites::word_str(&rs, w),
                        render_alpha(&rs, value)?,
                    ]),
                    TableFormat::Json => json_rows.push(json!({
                        "u": word_json(&rs, u),
                        "v": word_json(&rs, v),
                        "w": word_json(&rs, w),
                        "coef": value,
                    })),
                }
            }
        }
    }
    match format {
        TableFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record(["u", "v", "w", "coefficient"])?;
            for row in csv_rows {
                wtr.write_record(&row)?;
            }
            Ok(String::from_utf8(wtr.into_inner()?)?)
        }
        TableFormat::Json => Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&serde_json::Value::Array(json_rows))?
        )),
    }
}

/// One projective-space structure constant by the requested route.
pub fn pn_value(n: usize, family: PnFamily, form: PnForm, u: usize, v: usize, w: usize)
    -> Result<LaurentPoly>
{
    let idx = PnIndex::new(n, u, v, w)?;
    Ok(match (family, form) {
        (PnFamily::P, PnForm::Closed) => {
            projective::pn_p_closed(idx, &projective::eps_weights(n))?
        }
        (PnFamily::P, PnForm::Recur) => projective::pn_p_recur(idx),
        (PnFamily::B, PnForm::Closed) => projective::pn_b(idx)?,
        (PnFamily::B, PnForm::Recur) => projective::pn_b_recur(idx),
        (PnFamily::R, PnForm::Closed) => projective::pn_r_closed(idx)?,
        (PnFamily::R, PnForm::Recur) => projective::pn_r_recur(idx),
        (PnFamily::Q, PnForm::Closed) => projective::pn_q_closed(idx)?,
        (PnFamily::Q, PnForm::Recur) => projective::pn_q_recur(idx),
    })
}

/// Structure-constant table of `P^n` for one family, all `(u,v,w)` with
/// `0 <= u,v,w <= n`, as a CSV or JSON string.
pub fn pn_table(n: usize, family: PnFamily, form: PnForm, format: TableFormat) -> Result<String> {
    let mut csv_rows: Vec<[String; 5]> = Vec::new();
    let mut json_rows: Vec<serde_json::Value> = Vec::new();
    for u in 0..=n {
        for v in 0..=n {
            for w in 0..=n {
                let value = pn_value(n, family, form, u, v, w)?;
                match format {
                    TableFormat::Csv => csv_rows.push([
                        n.to_string(),
                        u.to_string(),
                        v.to_string(),
                        w.to_string(),
                        render_eps(n, &value)?,
                    ]),
                    TableFormat::Json => json_rows.push(json!({
                        "n": n, "u": u, "v": v, "w": w, "coef": value,
                    })),
                }
            }
        }
    }
    match format {
        TableFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record(["n", "u", "v", "w", "coefficient"])?;
            for row in csv_rows {
                wtr.write_record(&row)?;
            }
            Ok(String::from_utf8(wtr.into_inner()?)?)
        }
        TableFormat::Json => Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&serde_json::Value::Array(json_rows))?
        )),
    }
}
