//! Local charts: coordinate functions as series in a fixed uniformizer.
//!
//! Uniformizers: `π(t)` at a finite place of `P^1`, `s = 1/t` at `∞`;
//! on `E`, `r(x)` (the minimal polynomial of `x0`) at an affine place with
//! `y0 != 0`, `y` at a place with `y0 = 0`, and `z = x/y` at `O`.

use super::{Curve, Place, PlaceKind};
use crate::error::{Error, Result};
use crate::funcfield::{valuation, FuncElem};
use crate::gf::{Fe, Field};
use crate::polyser::{LaurentJet, Poly, Series};

/// Relative precision beyond which expansion gives up.
const MAX_CHART_PREC: usize = 1 << 11;

/// Series `S(u)` with `P(S(u)) = u`, for `P(0) = 0`, `P'(0) != 0`.
fn revert(p: &Poly, abs: i64) -> Series {
    let l = p.field();
    let p1 = p.coeff(1);
    let inv = l.inv(p1);
    let mut higher = p.clone();
    higher = higher.sub(&Poly::monomial(l, p1, 1));
    let u = Series::variable(l, abs);
    let mut s = u.scale(inv);
    for _ in 0..abs {
        s = u.sub(&s.eval_poly(&higher)).scale(inv).truncate_abs(abs);
    }
    s
}

/// Series `y` with `y^2 = f` and `y(0) = y0`, for `f` of valuation 0.
fn sqrt_series(f: &Series, y0: Fe) -> Series {
    let l = f.field();
    let n = f.abs_prec().max(0) as usize;
    let inv2y0 = l.inv(l.add(y0, y0));
    let mut ys = vec![y0];
    for i in 1..n {
        let mut acc = f.coeff(i as i64).expect("within precision");
        for j in 1..i {
            acc = l.sub(acc, l.mul(ys[j], ys[i - j]));
        }
        ys.push(l.mul(acc, inv2y0));
    }
    Series::new(l, 0, ys)
}

/// Coordinate series at `place` with relative precision about `r`:
/// `[t]` on `P^1`, `[x, y]` on `E`.
pub(crate) fn chart(curve: &Curve, place: &Place, r: usize) -> Result<Vec<Series>> {
    let k = curve.field();
    let l = place.residue_field();
    let abs = r as i64;
    Ok(match place.kind() {
        PlaceKind::P1Finite(pi) => {
            let theta = if place.degree() == 1 {
                k.neg(pi.coeff(0))
            } else {
                Fe(k.order())
            };
            let shifted = pi.embed(l).compose(&Poly::new(l, vec![theta, Fe::ONE]));
            vec![revert(&shifted, abs + 1).add_const(theta)]
        }
        PlaceKind::P1Infinity => {
            let mut v = vec![Fe::ZERO; r.max(1)];
            v[0] = Fe::ONE;
            vec![Series::new(k, -1, v)]
        }
        PlaceKind::EllFinite { x, y, xpoly } => {
            let (a, _) = curve.coefficients().expect("elliptic");
            if y.is_zero() {
                // u = y, x = x0 + w with F(x0 + w) = u^2
                let u = Series::variable(l, abs + 1);
                let u2 = u.mul(&u);
                let fp = l.add(l.mul(l.from_int(3), l.mul(*x, *x)), a);
                let inv = l.inv(fp);
                let c2 = l.mul(l.from_int(3), *x);
                let mut w = u2.scale(inv);
                for _ in 0..=abs {
                    let w2 = w.mul(&w);
                    let w3 = w2.mul(&w);
                    w = u2.sub(&w2.scale(c2)).sub(&w3).scale(inv).truncate_abs(abs + 1);
                }
                vec![w.add_const(*x), u]
            } else {
                let shifted = xpoly.embed(l).compose(&Poly::new(l, vec![*x, Fe::ONE]));
                let xs = revert(&shifted, abs + 1).add_const(*x);
                let fx = xs.eval_poly(&curve.cubic().embed(l));
                let ys = sqrt_series(&fx, *y);
                vec![xs, ys]
            }
        }
        PlaceKind::EllInfinity => {
            // z = x/y, w = 1/y, w = z^3 + a z w^2 + b w^3
            let (a, b) = curve.coefficients().expect("elliptic");
            let wabs = abs + 3;
            let z = Series::variable(k, abs + 1);
            let z3 = z.mul(&z).mul(&z).truncate_abs(wabs);
            let mut w = z3.clone();
            for _ in 0..=abs {
                let w2 = w.mul(&w);
                let w3 = w2.mul(&w);
                w = z3
                    .add(&z.mul(&w2).scale(a))
                    .add(&w3.scale(b))
                    .truncate_abs(wabs);
            }
            let winv = w.inv()?;
            vec![z.mul(&winv), winv]
        }
    })
}

fn eval_at(f: &FuncElem, coords: &[Series], l: &Field) -> (Series, Series) {
    let x = &coords[0];
    let mut num = x.eval_poly(&f.u().embed(l));
    if !f.v().is_zero() {
        num = num.add(&x.eval_poly(&f.v().embed(l)).mul(&coords[1]));
    }
    let den = x.eval_poly(&f.w().embed(l));
    (num, den)
}

/// Expansion of a nonzero `f` with at least `n` known coefficients, found by
/// doubling the chart precision until numerator and denominator are resolved.
pub(crate) fn expand_series(f: &FuncElem, place: &Place, n: usize) -> Result<Series> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let l = place.residue_field();
    let mut r = n + 2;
    loop {
        let coords = chart(f.curve(), place, r)?;
        let (num, den) = eval_at(f, &coords, l);
        if num.valuation().is_some()
            && den.valuation().is_some()
            && num.rel_prec() >= n
            && den.rel_prec() >= n
        {
            let q = num.div(&den)?;
            return Ok(q.truncate_abs(q.val_bound() + n as i64));
        }
        r *= 2;
        if r > MAX_CHART_PREC {
            return Err(Error::Precision(format!(
                "expansion of {f} at {place} did not resolve"
            )));
        }
    }
}

/// `v_x(f)` read off the local expansion alone.
pub fn valuation_by_expansion(f: &FuncElem, place: &Place) -> Result<i64> {
    Ok(expand_series(f, place, 1)?
        .valuation()
        .expect("resolved expansions have a valuation"))
}

/// The Laurent jet of `f` at `place` with `n` coefficients.
///
/// The valuation read from the expansion must agree with the algebraic one
/// (factorization on `P^1`, norms on `E`); disagreement is an internal error.
pub fn expand_at(f: &FuncElem, place: &Place, n: usize) -> Result<LaurentJet> {
    if n == 0 {
        return Err(Error::Precondition("precision must be >= 1".into()));
    }
    let s = expand_series(f, place, n)?;
    let v = valuation(f, place)?;
    if s.valuation() != Some(v) {
        return Err(Error::Internal(format!(
            "valuation of {f} at {place}: expansion {:?}, algebraic {v}",
            s.valuation()
        )));
    }
    LaurentJet::from_series(place, &s, n)
}

/// The uniformizer used by [`expand_at`] at `place`.
pub fn uniformizer(curve: &Curve, place: &Place) -> FuncElem {
    let k = curve.field();
    match place.kind() {
        PlaceKind::P1Finite(pi) => FuncElem::from_poly(curve, pi.clone()),
        PlaceKind::P1Infinity => FuncElem::from_poly(curve, Poly::x(k))
            .inv()
            .expect("t is nonzero"),
        PlaceKind::EllFinite { y, xpoly, .. } => {
            if y.is_zero() {
                FuncElem::y(curve)
            } else {
                FuncElem::from_poly(curve, xpoly.clone())
            }
        }
        PlaceKind::EllInfinity => FuncElem::x(curve)
            .div(&FuncElem::y(curve))
            .expect("y is nonzero"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::parse_function;

    #[test]
    fn p1_examples() {
        let k3 = Field::prime(3).unwrap();
        let c3 = Curve::p1(&k3);
        let t = parse_function(&c3, "t").unwrap();
        let inf = c3.infinity();
        let j = expand_at(&t, &inf, 2).unwrap();
        assert_eq!((j.valuation(), j.coeffs().to_vec()), (-1, vec![Fe(1), Fe(0)]));
        let at0 = c3.parse_place("(t)").unwrap();
        let j = expand_at(&t, &at0, 1).unwrap();
        assert_eq!((j.valuation(), j.coeffs().to_vec()), (1, vec![Fe(1)]));

        let k5 = Field::prime(5).unwrap();
        let c5 = Curve::p1(&k5);
        let f = parse_function(&c5, "t/(1-t)").unwrap();
        let j = expand_at(&f, &c5.parse_place("(t)").unwrap(), 2).unwrap();
        assert_eq!((j.valuation(), j.coeffs().to_vec()), (1, vec![Fe(1), Fe(1)]));
    }

    #[test]
    fn uniformizers_have_valuation_one() {
        let k5 = Field::prime(5).unwrap();
        let e = Curve::elliptic(&k5, Fe(1), Fe(0)).unwrap();
        let p1 = Curve::p1(&Field::prime(3).unwrap());
        for c in [e, p1] {
            for x in c.places_up_to(2).unwrap() {
                let u = uniformizer(&c, &x);
                let j = expand_at(&u, &x, 4).unwrap();
                assert_eq!(j.valuation(), 1, "at {x}");
                assert_eq!(j.coeffs(), &[Fe(1), Fe(0), Fe(0), Fe(0)], "at {x}");
            }
        }
    }

    #[test]
    fn two_torsion_uses_y() {
        let k5 = Field::prime(5).unwrap();
        let e = Curve::elliptic(&k5, Fe(1), Fe(0)).unwrap();
        let p = e.parse_place("pt(0,0)").unwrap();
        let x = FuncElem::x(&e);
        assert_eq!(expand_at(&x, &p, 1).unwrap().valuation(), 2);
        assert_eq!(expand_at(&FuncElem::y(&e), &p, 1).unwrap().valuation(), 1);
    }
}
