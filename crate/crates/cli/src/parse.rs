use std::fs;

use serde_json::Value;

use idele_core::approx::ApproxTarget;
use idele_core::curve::Curve;
use idele_core::funcfield::{parse_function, Divisor};
use idele_core::{Error, Result};

/// Split on `+`/`-` at parenthesis depth 0, keeping the sign with each term.
fn split_terms(s: &str) -> Vec<(i64, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut sign = 1;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (ch == '+' || ch == '-') {
            if !cur.trim().is_empty() {
                out.push((sign, cur.trim().to_string()));
            }
            sign = if ch == '-' { -1 } else { 1 };
            cur.clear();
            continue;
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push((sign, cur.trim().to_string()));
    }
    out
}

/// `2*(t + 1) - 3*inf`, `pt(0,0) + pt(2,0) - 2*O`.
pub fn parse_divisor(curve: &Curve, s: &str) -> Result<Divisor> {
    let mut d = Divisor::new();
    for (sign, term) in split_terms(s) {
        let (n, place) = match term.split_once('*') {
            Some((n, p)) => (
                n.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad multiplicity in `{term}`")))?,
                p.trim(),
            ),
            None => (1, term.as_str()),
        };
        d.add_term(&curve.parse_place(place)?, sign * n);
    }
    Ok(d)
}

/// `place:function:order`, for instance `(t):1+t:2`; the target is the
/// expansion of the function at the place cut at the order.
pub fn parse_target(curve: &Curve, s: &str) -> Result<ApproxTarget> {
    let parts: Vec<&str> = s.rsplitn(3, ':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("expected place:function:order, got `{s}`")));
    }
    let (order, func, place) = (parts[0], parts[1], parts[2]);
    let order: i64 = order
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad order in `{s}`")))?;
    let x = curve.parse_place(place)?;
    let f = parse_function(curve, func)?;
    ApproxTarget::from_function(&f, &x, order)
}

/// Inline JSON, or `@path` to read it from a file.
pub fn parse_json_arg(s: &str) -> Result<Value> {
    let text = match s.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?,
        None => s.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use idele_core::gf::{Fe, Field};

    #[test]
    fn divisors() {
        let c = Curve::p1(&Field::prime(5).unwrap());
        let d = parse_divisor(&c, "2*(t + 1) - 3*inf + (t^2 + 2)").unwrap();
        assert_eq!(d.degree(), 1);
        assert_eq!(d.get(&c.infinity()), -3);
        let e = Curve::elliptic(&Field::prime(5).unwrap(), Fe(1), Fe(0)).unwrap();
        let d = parse_divisor(&e, "pt(0,0) + pt(2,0) - 2*O").unwrap();
        assert_eq!(d.degree(), 0);
    }

    #[test]
    fn targets() {
        let c = Curve::p1(&Field::prime(3).unwrap());
        let t = parse_target(&c, "(t):1+t:2").unwrap();
        assert_eq!(t.order, 2);
        assert_eq!(t.valuation(), Some(0));
        assert!(parse_target(&c, "(t):1").is_err());
    }
}
