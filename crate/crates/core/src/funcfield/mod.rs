//! Rational functions on a curve: arithmetic, valuations, divisors,
//! evaluation at places, and functions with a prescribed divisor.

mod divisor;
mod miller;

use std::fmt;

pub use divisor::Divisor;
pub use miller::{abel_jacobi, function_with_divisor, line_function, place_function};

use crate::curve::{expand_at, Curve, Place, PlaceKind};
use crate::error::{Error, Result};
use crate::gf::{Fe, Field, GFElem};
use crate::polyser::{parse_expr, poly_factor, ExprAlgebra, Poly};

/// `(U + V·y) / W` with `W` monic and `gcd(U, V, W) = 1`; on `P^1`, `V = 0`
/// and the function is `U(t)/W(t)`.
///
/// The zero function is representable (`U = V = 0`, `W = 1`) so that sums
/// can cancel, but it has no divisor and no expansion.
#[derive(Clone)]
pub struct FuncElem {
    curve: Curve,
    u: Poly,
    v: Poly,
    w: Poly,
}

impl PartialEq for FuncElem {
    fn eq(&self, other: &Self) -> bool {
        self.curve == other.curve && self.u == other.u && self.v == other.v && self.w == other.w
    }
}

impl Eq for FuncElem {}

impl FuncElem {
    /// Build and normalize `(u + v·y)/w`.
    pub fn from_parts(curve: &Curve, u: Poly, v: Poly, w: Poly) -> Result<FuncElem> {
        if w.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if curve.is_p1() && !v.is_zero() {
            return Err(Error::Unsupported("y is not a coordinate on P1".into()));
        }
        let k = curve.field();
        if u.is_zero() && v.is_zero() {
            return Ok(FuncElem::zero(curve));
        }
        let g = u.gcd(&v).gcd(&w);
        let (mut u, mut v, mut w) = (
            u.div_exact(&g)?,
            v.div_exact(&g)?,
            w.div_exact(&g)?,
        );
        let lc = w.lc();
        if lc != Fe::ONE {
            let inv = k.inv(lc);
            u = u.scale(inv);
            v = v.scale(inv);
            w = w.scale(inv);
        }
        Ok(FuncElem {
            curve: curve.clone(),
            u,
            v,
            w,
        })
    }

    pub fn zero(curve: &Curve) -> FuncElem {
        let k = curve.field();
        FuncElem {
            curve: curve.clone(),
            u: Poly::zero(k),
            v: Poly::zero(k),
            w: Poly::one(k),
        }
    }

    pub fn constant(curve: &Curve, c: Fe) -> FuncElem {
        let k = curve.field();
        FuncElem {
            curve: curve.clone(),
            u: Poly::constant(k, c),
            v: Poly::zero(k),
            w: Poly::one(k),
        }
    }

    pub fn one(curve: &Curve) -> FuncElem {
        FuncElem::constant(curve, Fe::ONE)
    }

    /// A polynomial in the coordinate `t` (or `x`).
    pub fn from_poly(curve: &Curve, p: Poly) -> FuncElem {
        let k = curve.field();
        FuncElem {
            curve: curve.clone(),
            u: p,
            v: Poly::zero(k),
            w: Poly::one(k),
        }
    }

    /// `num/den` on either curve, with `den` nonzero.
    pub fn ratio(curve: &Curve, num: Poly, den: Poly) -> Result<FuncElem> {
        FuncElem::from_parts(curve, num, Poly::zero(curve.field()), den)
    }

    /// The coordinate `t` on `P^1`, `x` on `E`.
    pub fn x(curve: &Curve) -> FuncElem {
        FuncElem::from_poly(curve, Poly::x(curve.field()))
    }

    /// The coordinate `y` on `E`.
    ///
    /// # Panics
    /// Panics on `P^1`.
    pub fn y(curve: &Curve) -> FuncElem {
        assert!(curve.is_elliptic(), "y is only defined on elliptic curves");
        let k = curve.field();
        FuncElem {
            curve: curve.clone(),
            u: Poly::zero(k),
            v: Poly::one(k),
            w: Poly::one(k),
        }
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn field(&self) -> &Field {
        self.curve.field()
    }

    pub fn u(&self) -> &Poly {
        &self.u
    }

    pub fn v(&self) -> &Poly {
        &self.v
    }

    pub fn w(&self) -> &Poly {
        &self.w
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.v.is_zero() && self.u.is_one() && self.w.is_one()
    }

    /// `Some(c)` when the function is the constant `c`.
    pub fn constant_value(&self) -> Option<Fe> {
        (self.v.is_zero() && self.w.is_one() && self.u.is_constant()).then(|| self.u.coeff(0))
    }

    fn same_curve(&self, other: &FuncElem) -> Result<()> {
        if self.curve == other.curve {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!(
                "{} vs {}",
                self.curve.describe(),
                other.curve.describe()
            )))
        }
    }

    fn build(&self, u: Poly, v: Poly, w: Poly) -> FuncElem {
        FuncElem::from_parts(&self.curve, u, v, w).expect("nonzero denominator")
    }

    pub fn add(&self, other: &FuncElem) -> FuncElem {
        self.same_curve(other).expect("same curve");
        self.build(
            self.u.mul(&other.w).add(&other.u.mul(&self.w)),
            self.v.mul(&other.w).add(&other.v.mul(&self.w)),
            self.w.mul(&other.w),
        )
    }

    pub fn neg(&self) -> FuncElem {
        FuncElem {
            curve: self.curve.clone(),
            u: self.u.neg(),
            v: self.v.neg(),
            w: self.w.clone(),
        }
    }

    pub fn sub(&self, other: &FuncElem) -> FuncElem {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fe) -> FuncElem {
        self.build(self.u.scale(c), self.v.scale(c), self.w.clone())
    }

    pub fn mul(&self, other: &FuncElem) -> FuncElem {
        self.same_curve(other).expect("same curve");
        let f = self.curve.cubic();
        let u = self
            .u
            .mul(&other.u)
            .add(&self.v.mul(&other.v).mul(&f));
        let v = self.u.mul(&other.v).add(&other.u.mul(&self.v));
        self.build(u, v, self.w.mul(&other.w))
    }

    /// `(U - V·y)/W`.
    pub fn conjugate(&self) -> FuncElem {
        FuncElem {
            curve: self.curve.clone(),
            u: self.u.clone(),
            v: self.v.neg(),
            w: self.w.clone(),
        }
    }

    /// `U^2 - V^2·F`, the numerator of `f·conj(f)` over `W^2`.
    pub fn norm_numerator(&self) -> Poly {
        self.u
            .mul(&self.u)
            .sub(&self.v.mul(&self.v).mul(&self.curve.cubic()))
    }

    pub fn inv(&self) -> Result<FuncElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_numerator();
        Ok(self.build(self.w.mul(&self.u), self.w.mul(&self.v).neg(), n))
    }

    pub fn div(&self, other: &FuncElem) -> Result<FuncElem> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<FuncElem> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = FuncElem::one(&self.curve);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Leading coefficient of the expansion at the distinguished point
    /// (`∞` in `s = 1/t`, `O` in `z = x/y`).
    pub fn leading_at_infinity(&self) -> Result<Fe> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let k = self.field();
        // x = z^-2(1 + …), y = z^-3(1 + …), W monic
        let lc = if self.v.is_zero() {
            self.u.lc()
        } else if self.u.is_zero() || 2 * self.v.deg() + 3 > 2 * self.u.deg() {
            self.v.lc()
        } else {
            self.u.lc()
        };
        k.div(lc, self.w.lc())
    }

    /// Scale so that [`FuncElem::leading_at_infinity`] is 1.
    pub fn normalized(&self) -> Result<FuncElem> {
        let lc = self.leading_at_infinity()?;
        Ok(self.scale(self.field().inv(lc)))
    }
}

impl fmt::Display for FuncElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.curve.var();
        let num = if self.v.is_zero() {
            self.u.format(var)
        } else if self.u.is_zero() {
            format!("({})*y", self.v.format(var))
        } else {
            format!("({}) + ({})*y", self.u.format(var), self.v.format(var))
        };
        if self.w.is_one() {
            f.write_str(&num)
        } else {
            write!(f, "({num})/({})", self.w.format(var))
        }
    }
}

impl fmt::Debug for FuncElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct FuncAlgebra<'a>(&'a Curve);

impl ExprAlgebra for FuncAlgebra<'_> {
    type Elem = FuncElem;

    fn field(&self) -> &Field {
        self.0.field()
    }

    fn constant(&self, c: Fe) -> FuncElem {
        FuncElem::constant(self.0, c)
    }

    fn variable(&self, name: &str) -> Result<FuncElem> {
        match (name, self.0.is_p1()) {
            ("t", true) | ("x", false) => Ok(FuncElem::x(self.0)),
            ("y", false) => Ok(FuncElem::y(self.0)),
            _ => Err(Error::Parse(format!(
                "unknown variable `{name}` on {}",
                self.0.describe()
            ))),
        }
    }

    fn add(&self, a: &FuncElem, b: &FuncElem) -> FuncElem {
        a.add(b)
    }

    fn neg(&self, a: &FuncElem) -> FuncElem {
        a.neg()
    }

    fn mul(&self, a: &FuncElem, b: &FuncElem) -> FuncElem {
        a.mul(b)
    }

    fn div(&self, a: &FuncElem, b: &FuncElem) -> Result<FuncElem> {
        a.div(b)
    }

    fn pow(&self, a: &FuncElem, e: i64) -> Result<FuncElem> {
        a.pow(e)
    }
}

/// Parse a rational expression in `t` (on `P^1`) or `x`, `y` (on `E`).
pub fn parse_function(curve: &Curve, s: &str) -> Result<FuncElem> {
    parse_expr(&FuncAlgebra(curve), s)
}

/// `v_x(f)` computed algebraically: by multiplicities on `P^1`, and on `E`
/// from the norm `U'^2 - V'^2·F` after removing `gcd(U, V)`.
pub fn valuation(f: &FuncElem, place: &Place) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    match place.kind() {
        PlaceKind::P1Finite(pi) => {
            Ok(i64::from(f.u.multiplicity(pi).0) - i64::from(f.w.multiplicity(pi).0))
        }
        PlaceKind::P1Infinity => Ok(f.w.deg() as i64 - f.u.deg() as i64),
        PlaceKind::EllInfinity => {
            let vu = (!f.u.is_zero()).then(|| -2 * f.u.deg() as i64);
            let vv = (!f.v.is_zero()).then(|| -2 * f.v.deg() as i64 - 3);
            let num = vu.into_iter().chain(vv).min().expect("nonzero function");
            Ok(num + 2 * f.w.deg() as i64)
        }
        PlaceKind::EllFinite { x, y, xpoly } => {
            let e = if place.is_ramified() { 2 } else { 1 };
            let h = f.u.gcd(&f.v);
            let u1 = f.u.div_exact(&h)?;
            let v1 = f.v.div_exact(&h)?;
            let n = u1.mul(&u1).sub(&v1.mul(&v1).mul(&f.curve.cubic()));
            let ord_n = i64::from(n.multiplicity(xpoly).0);
            let vg = if place.is_ramified() {
                ord_n
            } else {
                let l = place.residue_field();
                let at = l.add(u1.eval_in(l, *x), l.mul(v1.eval_in(l, *x), *y));
                if at.is_zero() {
                    ord_n
                } else {
                    0
                }
            };
            let oh = i64::from(h.multiplicity(xpoly).0);
            let ow = i64::from(f.w.multiplicity(xpoly).0);
            Ok(vg + e * (oh - ow))
        }
    }
}

/// `D(f) = Σ v_x(f)·x` over the full support.
pub fn divisor_of(f: &FuncElem) -> Result<Divisor> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let curve = &f.curve;
    let mut d = Divisor::new();
    if curve.is_p1() {
        for p in [&f.u, &f.w] {
            if p.is_constant() {
                continue;
            }
            for (pi, _) in poly_factor(p)?.factors {
                let x = curve.p1_place(&pi)?;
                d.add_term(&x, valuation(f, &x)?);
            }
        }
    } else {
        let h = f.u.gcd(&f.v);
        let u1 = f.u.div_exact(&h)?;
        let v1 = f.v.div_exact(&h)?;
        let n = u1.mul(&u1).sub(&v1.mul(&v1).mul(&curve.cubic()));
        let mut cands: Vec<Poly> = Vec::new();
        for p in [&h, &n, &f.w] {
            if p.is_constant() {
                continue;
            }
            cands.extend(poly_factor(p)?.factors.into_iter().map(|(r, _)| r));
        }
        cands.sort();
        cands.dedup();
        for r in cands {
            for x in curve.places_above(&r)? {
                if d.get(&x) == 0 {
                    d.add_term(&x, valuation(f, &x)?);
                }
            }
        }
    }
    let inf = curve.infinity();
    d.add_term(&inf, valuation(f, &inf)?);
    if d.degree() != 0 {
        return Err(Error::Internal(format!("divisor of {f} has degree {}", d.degree())));
    }
    Ok(d)
}

/// The residue class `f(x)` in `k(x)`; requires `v_x(f) = 0`.
pub fn evaluate(f: &FuncElem, place: &Place) -> Result<GFElem> {
    let v = valuation(f, place)?;
    if v != 0 {
        return Err(Error::NotAUnit(v, place.to_string()));
    }
    let l = place.residue_field();
    let direct = match place.kind() {
        PlaceKind::P1Finite(pi) => {
            let theta = if place.degree() == 1 {
                l.neg(pi.coeff(0))
            } else {
                Fe(f.field().order())
            };
            Some((f.u.eval_in(l, theta), f.w.eval_in(l, theta)))
        }
        PlaceKind::EllFinite { x, y, .. } => Some((
            l.add(f.u.eval_in(l, *x), l.mul(f.v.eval_in(l, *x), *y)),
            f.w.eval_in(l, *x),
        )),
        _ => None,
    };
    let value = match direct {
        Some((n, d)) if !d.is_zero() => l.div(n, d)?,
        _ => expand_at(f, place, 1)?.leading(),
    };
    Ok(l.elem(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{expand_at, valuation_by_expansion};

    fn p1(q: u32) -> Curve {
        Curve::p1(&Field::prime(q).unwrap())
    }

    fn ell(a: u32, b: u32) -> Curve {
        Curve::elliptic(&Field::prime(5).unwrap(), Fe(a), Fe(b)).unwrap()
    }

    #[test]
    fn p1_divisors() {
        let c = p1(3);
        let f = parse_function(&c, "t/(t+1)").unwrap();
        assert_eq!(divisor_of(&f).unwrap().to_string(), "(t) - (t + 1)");
        let g = parse_function(&c, "t^2+1").unwrap();
        assert_eq!(divisor_of(&g).unwrap().to_string(), "-2*inf + (t^2 + 1)");
        assert!(divisor_of(&FuncElem::constant(&c, Fe(2))).unwrap().is_zero());
        assert_eq!(divisor_of(&FuncElem::zero(&c)), Err(Error::ZeroFunction));
    }

    #[test]
    fn evaluation_examples() {
        let c5 = p1(5);
        let f = parse_function(&c5, "t+1").unwrap();
        assert_eq!(evaluate(&f, &c5.parse_place("(t)").unwrap()).unwrap().value, Fe(1));
        let g = parse_function(&c5, "(t+1)/(t+2)").unwrap();
        assert_eq!(evaluate(&g, &c5.infinity()).unwrap().value, Fe(1));
        let c3 = p1(3);
        let x = c3.parse_place("(t^2+1)").unwrap();
        let t = parse_function(&c3, "t").unwrap();
        assert_eq!(evaluate(&t, &x).unwrap().value, Fe(3));
        assert!(matches!(
            evaluate(&t, &c3.parse_place("(t)").unwrap()),
            Err(Error::NotAUnit(1, _))
        ));
    }

    #[test]
    fn elliptic_divisors() {
        let e = ell(1, 0);
        let y = FuncElem::y(&e);
        let d = divisor_of(&y).unwrap();
        assert_eq!(d.to_string(), "-3*inf + pt(0,0) + pt(2,0) + pt(3,0)");
        let x = FuncElem::x(&e);
        assert_eq!(divisor_of(&x).unwrap().to_string(), "-2*inf + 2*pt(0,0)");
    }

    #[test]
    fn valuation_oracles_agree() {
        let e = ell(1, 1);
        let exprs = ["y - x - 1", "(y + 2x)/(x^2 + 1)", "x^3 + y", "(y - 3)/(y + x^2)", "y*x - 1"];
        for s in exprs {
            let f = parse_function(&e, s).unwrap();
            for x in e.places_up_to(2).unwrap() {
                assert_eq!(
                    valuation(&f, &x).unwrap(),
                    valuation_by_expansion(&f, &x).unwrap(),
                    "{s} at {x}"
                );
            }
        }
    }

    #[test]
    fn evaluation_matches_expansion() {
        let e = ell(1, 1);
        let f = parse_function(&e, "(y + 2x + 1)/(x^2 + 2)").unwrap();
        for x in e.places_up_to(2).unwrap() {
            if valuation(&f, &x).unwrap() == 0 {
                assert_eq!(
                    evaluate(&f, &x).unwrap().value,
                    expand_at(&f, &x, 1).unwrap().leading()
                );
            }
        }
    }

    #[test]
    fn display_round_trips() {
        let e = ell(1, 1);
        for s in ["(y + 2x)/(x^2 + 1)", "g*y", "x^2 - 3", "1/(y - x)"] {
            let f = parse_function(&e, s).unwrap();
            assert_eq!(parse_function(&e, &f.to_string()).unwrap(), f);
        }
    }
}
