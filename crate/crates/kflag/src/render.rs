//! Human-readable rendering and parsing of Laurent polynomials.
//!
//! Exponents in the root lattice are written in simple-root coordinates with
//! variables `x_i = e^{alpha_i}`; weights of projective space are written as
//! products of `y_ij = e^{eps_i - eps_j}`, `i < j`. Term order follows the
//! canonical order of [`LaurentPoly`].

use crate::error::Error;
use crate::lattice::{LaurentPoly, Weight};
use crate::roots::RootSystem;
use crate::Result;

/// Join rendered terms with explicit signs, magnitudes and a monomial body.
fn join_terms(parts: Vec<(i64, String)>) -> String {
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (c, body)) in parts.iter().enumerate() {
        let mag = c.abs();
        if i == 0 {
            if *c < 0 {
                s.push('-');
            }
        } else if *c < 0 {
            s.push_str(" - ");
        } else {
            s.push_str(" + ");
        }
        if body.is_empty() {
            s.push_str(&mag.to_string());
        } else if mag == 1 {
            s.push_str(body);
        } else {
            s.push_str(&format!("{mag}*{body}"));
        }
    }
    s
}

/// Render `f` with exponents written in simple-root coordinates,
/// `x_i = e^{alpha_i}`.
pub fn render_alpha(rs: &RootSystem, f: &LaurentPoly) -> Result<String> {
    let mut parts = Vec::new();
    for (w, c) in f.iter() {
        let coords = rs
            .alpha_coords(w)
            .ok_or_else(|| Error::Malformed(format!("exponent {w} is not in the root lattice")))?;
        let body = coords
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| {
                if d == 1 {
                    format!("x{}", i + 1)
                } else {
                    format!("x{}^{}", i + 1, d)
                }
            })
            .collect::<Vec<_>>()
            .join("*");
        parts.push((c, body));
    }
    Ok(join_terms(parts))
}

/// Render `f` (living on the rank-`n` weight lattice of `P^n`) with exponents
/// written as products of `y_ij = e^{eps_i - eps_j}`, `i < j`.
pub fn render_eps(n: usize, f: &LaurentPoly) -> Result<String> {
    let mut parts = Vec::new();
    for (wt, c) in f.iter() {
        // eps-coordinates: a_i = sum_{j >= i} c_j, then shift to zero sum.
        let coords = wt.coords();
        let mut a: Vec<i64> = (0..=n)
            .map(|i| coords[i..].iter().map(|&x| x as i64).sum())
            .collect();
        let total: i64 = a.iter().sum();
        let m = n as i64 + 1;
        if total % m != 0 {
            return Err(Error::Malformed(format!(
                "exponent {wt} is not in the root lattice of P^{n}"
            )));
        }
        let shift = total / m;
        for x in &mut a {
            *x -= shift;
        }
        let mut factors = Vec::new();
        loop {
            let i = a.iter().position(|&x| x > 0);
            let j = a.iter().position(|&x| x < 0);
            match (i, j) {
                (Some(i), Some(j)) => {
                    let k = a[i].min(-a[j]);
                    let (lo, hi, exp) = if i < j { (i, j, k) } else { (j, i, -k) };
                    if exp == 1 {
                        factors.push(format!("y{}{}", lo + 1, hi + 1));
                    } else {
                        factors.push(format!("y{}{}^{}", lo + 1, hi + 1, exp));
                    }
                    a[i] -= k;
                    a[j] += k;
                }
                _ => break,
            }
        }
        parts.push((c, factors.join("*")));
    }
    Ok(join_terms(parts))
}

/// Parse the `x_i = e^{alpha_i}` syntax produced by [`render_alpha`]:
/// integer combinations of `*`-separated factors `xI` or `xI^E`, joined by
/// `+` and `-`. Examples: `1 - x1^-1`, `2*x1*x2^-3 + 4`, `0`.
pub fn parse_alpha(rs: &RootSystem, input: &str) -> Result<LaurentPoly> {
    let rank = rs.rank();
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Malformed("empty polynomial".into()));
    }
    // Split into signed terms at top-level + and - (exponent minus signs
    // always follow '^' and are consumed with their factor).
    let mut terms: Vec<(i64, &str)> = Vec::new();
    let bytes = compact.as_bytes();
    let mut start = usize::from(bytes[0] == b'+' || bytes[0] == b'-');
    let mut sign = if bytes[0] == b'-' { -1i64 } else { 1 };
    let mut i = start;
    while i <= bytes.len() {
        let at_break = i == bytes.len()
            || ((bytes[i] == b'+' || bytes[i] == b'-') && i > 0 && bytes[i - 1] != b'^'
                && bytes[i - 1] != b'*');
        if at_break {
            if i > start {
                terms.push((sign, &compact[start..i]));
            } else if i < bytes.len() {
                return Err(Error::Malformed(format!("empty term at offset {i}")));
            } else {
                return Err(Error::Malformed("dangling sign at end of input".into()));
            }
            if i < bytes.len() {
                sign = if bytes[i] == b'-' { -1 } else { 1 };
                start = i + 1;
            }
        }
        i += 1;
    }
    if terms.is_empty() {
        return Err(Error::Malformed("no terms".into()));
    }
    let mut acc: Vec<(Weight, i64)> = Vec::new();
    for (sign, term) in terms {
        let mut coef: i64 = 1;
        let mut seen_number = false;
        let mut exps = vec![0i64; rank];
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(Error::Malformed(format!("empty factor in `{term}`")));
            }
            if let Some(rest) = factor.strip_prefix('x') {
                let (idx_str, exp) = match rest.split_once('^') {
                    Some((i, e)) => (
                        i,
                        e.parse::<i64>().map_err(|_| {
                            Error::Malformed(format!("bad exponent in `{factor}`"))
                        })?,
                    ),
                    None => (rest, 1),
                };
                let idx: usize = idx_str
                    .parse()
                    .map_err(|_| Error::Malformed(format!("bad variable in `{factor}`")))?;
                if idx == 0 || idx > rank {
                    return Err(Error::Malformed(format!(
                        "variable x{idx} out of range 1..={rank}"
                    )));
                }
                exps[idx - 1] += exp;
            } else {
                let c: i64 = factor
                    .parse()
                    .map_err(|_| Error::Malformed(format!("bad factor `{factor}`")))?;
                if seen_number {
                    return Err(Error::Malformed(format!(
                        "two numeric factors in `{term}`"
                    )));
                }
                seen_number = true;
                coef *= c;
            }
        }
        let mut wt = Weight::zero(rank);
        for (i, &e) in exps.iter().enumerate() {
            let alpha = &rs.simple_roots()[i];
            let step = if e >= 0 { alpha.clone() } else { &Weight::zero(rank) - alpha };
            for _ in 0..e.unsigned_abs() {
                wt = &wt + &step;
            }
        }
        acc.push((wt, sign * coef));
    }
    Ok(LaurentPoly::from_terms(rank, acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> std::sync::Arc<RootSystem> {
        RootSystem::from_tag("A2").unwrap()
    }

    #[test]
    fn renders_alpha_canonically() {
        let rs = a2();
        let alpha1 = rs.simple_roots()[0].clone();
        let f = LaurentPoly::from_terms(
            2,
            [
                (Weight::zero(2), 1),
                (&Weight::zero(2) - &alpha1, -2),
                (&alpha1 + &rs.simple_roots()[1], 1),
            ],
        );
        let s = render_alpha(&rs, &f).unwrap();
        assert_eq!(s, "-2*x1^-1 + 1 + x1*x2");
        assert_eq!(render_alpha(&rs, &LaurentPoly::zero(2)).unwrap(), "0");
        assert_eq!(render_alpha(&rs, &LaurentPoly::one(2)).unwrap(), "1");
    }

    #[test]
    fn rejects_weights_outside_the_root_lattice() {
        let rs = a2();
        let f = LaurentPoly::from_terms(2, [(Weight::new(vec![1, 0]), 1)]);
        assert!(render_alpha(&rs, &f).is_err());
    }

    #[test]
    fn parses_what_it_renders() {
        let rs = a2();
        let alpha = rs.simple_roots();
        let samples = [
            LaurentPoly::zero(2),
            LaurentPoly::one(2),
            LaurentPoly::constant(2, -7),
            LaurentPoly::from_terms(
                2,
                [
                    (&Weight::zero(2) - &alpha[0], 3),
                    (&alpha[0] + &alpha[1], -1),
                    (Weight::zero(2), 5),
                ],
            ),
            LaurentPoly::from_terms(2, [(&(&alpha[0] + &alpha[0]) - &alpha[1], -4)]),
        ];
        for f in samples {
            let s = render_alpha(&rs, &f).unwrap();
            assert_eq!(parse_alpha(&rs, &s).unwrap(), f, "round trip of `{s}`");
        }
    }

    #[test]
    fn parses_free_form_input() {
        let rs = a2();
        let alpha = rs.simple_roots();
        let f = parse_alpha(&rs, " x2^-1*3 - x1 ^ 2 + 1 -2").unwrap();
        let want = LaurentPoly::from_terms(
            2,
            [
                (&Weight::zero(2) - &alpha[1], 3),
                (&alpha[0] + &alpha[0], -1),
                (Weight::zero(2), -1),
            ],
        );
        assert_eq!(f, want);
        let neg_lead = parse_alpha(&rs, "-x1 + 1").unwrap();
        assert_eq!(
            neg_lead,
            LaurentPoly::from_terms(2, [(alpha[0].clone(), -1), (Weight::zero(2), 1)])
        );
        assert_eq!(render_alpha(&rs, &neg_lead).unwrap(), "1 - x1");
        assert!(parse_alpha(&rs, "").is_err());
        assert!(parse_alpha(&rs, "x3").is_err());
        assert!(parse_alpha(&rs, "x1^").is_err());
        assert!(parse_alpha(&rs, "1++2").is_err());
        assert!(parse_alpha(&rs, "y1").is_err());
    }

    #[test]
    fn renders_eps_products() {
        // On P^2 (rank 2): alpha_1 = eps_1 - eps_2 has fundamental-weight
        // coordinates (2,-1).
        let f = LaurentPoly::from_terms(2, [(Weight::new(vec![2, -1]), 1)]);
        assert_eq!(render_eps(2, &f).unwrap(), "y12");
        // eps_1 - eps_3 = alpha_1 + alpha_2 = (1,1).
        let g = LaurentPoly::from_terms(2, [(Weight::new(vec![1, 1]), -1)]);
        assert_eq!(render_eps(2, &g).unwrap(), "-y13");
        // A doubled root.
        let h = LaurentPoly::from_terms(2, [(Weight::new(vec![4, -2]), 2)]);
        assert_eq!(render_eps(2, &h).unwrap(), "2*y12^2");
    }
}
