//! Functions with prescribed divisors on `E` by chord/vertical accumulation,
//! and the Abel–Jacobi map `Div^0 -> E(k)`.

use super::{Divisor, FuncElem};
use crate::curve::{Curve, EcGroup, EcPoint, Place, PlaceKind};
use crate::error::{Error, Result};
use crate::gf::Fe;
use crate::polyser::Poly;

/// `(u + v·y)/w` with coefficients in an extension of `k`.
#[derive(Clone, Debug)]
struct ExtFunc {
    u: Poly,
    v: Poly,
    w: Poly,
}

impl ExtFunc {
    fn one(grp: &EcGroup) -> ExtFunc {
        let l = &grp.field;
        ExtFunc {
            u: Poly::one(l),
            v: Poly::zero(l),
            w: Poly::one(l),
        }
    }

    fn mul(&self, other: &ExtFunc, cubic: &Poly) -> ExtFunc {
        let u = self.u.mul(&other.u).add(&self.v.mul(&other.v).mul(cubic));
        let v = self.u.mul(&other.v).add(&other.u.mul(&self.v));
        ExtFunc {
            u,
            v,
            w: self.w.mul(&other.w),
        }
        .reduced()
    }

    /// Divide by a polynomial in `x`.
    fn div_poly(&self, p: &Poly) -> ExtFunc {
        ExtFunc {
            u: self.u.clone(),
            v: self.v.clone(),
            w: self.w.mul(p),
        }
        .reduced()
    }

    fn reduced(self) -> ExtFunc {
        let g = self.u.gcd(&self.v).gcd(&self.w);
        ExtFunc {
            u: self.u.div_exact(&g).expect("gcd divides"),
            v: self.v.div_exact(&g).expect("gcd divides"),
            w: self.w.div_exact(&g).expect("gcd divides"),
        }
    }

    /// Leading coefficient at `O` in `z = x/y`.
    fn leading_at_o(&self) -> Fe {
        let l = self.u.field();
        let lc = if self.u.is_zero() || (!self.v.is_zero() && 2 * self.v.deg() + 3 > 2 * self.u.deg()) {
            self.v.lc()
        } else {
            self.u.lc()
        };
        l.div(lc, self.w.lc()).expect("monic-able denominator")
    }
}

/// The chord through `s` and `p` (tangent when equal, vertical when opposite).
fn chord(grp: &EcGroup, s: EcPoint, p: EcPoint) -> ExtFunc {
    let l = &grp.field;
    let (xs, ys, xp, yp) = match (s, p) {
        (EcPoint::Affine(a, b), EcPoint::Affine(c, d)) => (a, b, c, d),
        _ => return ExtFunc::one(grp),
    };
    if xs == xp && l.add(ys, yp).is_zero() {
        return ExtFunc {
            u: Poly::linear(l, xs),
            v: Poly::zero(l),
            w: Poly::one(l),
        };
    }
    let lambda = if xs == xp {
        let num = l.add(l.mul(l.from_int(3), l.mul(xs, xs)), grp.a);
        l.div(num, l.add(ys, ys)).expect("y != 0 on a tangent")
    } else {
        l.div(l.sub(yp, ys), l.sub(xp, xs)).expect("distinct x")
    };
    // y - ys - λ(x - xs)
    let c0 = l.sub(l.mul(lambda, xs), ys);
    ExtFunc {
        u: Poly::new(l, vec![c0, l.neg(lambda)]),
        v: Poly::one(l),
        w: Poly::one(l),
    }
}

fn vertical(grp: &EcGroup, p: EcPoint) -> Poly {
    match p {
        EcPoint::Infinity => Poly::one(&grp.field),
        EcPoint::Affine(x, _) => Poly::linear(&grp.field, x),
    }
}

/// `h` and `S = Σ m_P·P` with `div h = Σ m_P((P) - (O)) - ((S) - (O))`.
fn accumulate(grp: &EcGroup, cubic: &Poly, terms: &[(EcPoint, i64)]) -> (ExtFunc, EcPoint) {
    let mut h = ExtFunc::one(grp);
    let mut s = EcPoint::Infinity;
    for &(p, m) in terms {
        if p.is_infinity() {
            continue;
        }
        let step = if m > 0 { p } else { grp.neg(p) };
        for _ in 0..m.unsigned_abs() {
            let next = grp.add(s, step);
            if !s.is_infinity() {
                h = h.mul(&chord(grp, s, step), cubic).div_poly(&vertical(grp, next));
            }
            s = next;
            if m < 0 {
                // -((P) - (O)) = ((-P) - (O)) - div(x - x_P)
                h = h.div_poly(&vertical(grp, p));
            }
        }
    }
    (h, s)
}

fn descend(curve: &Curve, h: &ExtFunc) -> Result<FuncElem> {
    let l = h.u.field();
    let c = l.inv(h.leading_at_o());
    let k = curve.field();
    FuncElem::from_parts(
        curve,
        h.u.scale(c).descend(k)?,
        h.v.scale(c).descend(k)?,
        h.w.scale(c).descend(k)?,
    )
}

fn frobenius_points(place: &Place) -> Vec<EcPoint> {
    let l = place.residue_field();
    match place.kind() {
        PlaceKind::EllFinite { x, y, .. } => {
            let mut out = vec![EcPoint::Affine(*x, *y)];
            let (mut cx, mut cy) = (*x, *y);
            for _ in 1..place.degree() {
                cx = l.frobenius(cx);
                cy = l.frobenius(cy);
                out.push(EcPoint::Affine(cx, cy));
            }
            out
        }
        _ => vec![EcPoint::Infinity],
    }
}

/// Sum of the Frobenius conjugates of a place's point, as a point of `E(k)`.
fn orbit_sum(curve: &Curve, place: &Place) -> Result<EcPoint> {
    let grp = curve.group_over(place.residue_field())?;
    let s = frobenius_points(place)
        .into_iter()
        .fold(EcPoint::Infinity, |acc, p| grp.add(acc, p));
    let q = curve.field().order();
    match s {
        EcPoint::Affine(x, y) if x.0 >= q || y.0 >= q => Err(Error::Internal(format!(
            "orbit sum at {place} is not rational"
        ))),
        _ => Ok(s),
    }
}

/// `Σ n_x·(orbit sum at x)`; the class of a degree-0 divisor in `E(k)`.
pub fn abel_jacobi(curve: &Curve, d: &Divisor) -> Result<EcPoint> {
    let grp = curve.group()?;
    let mut acc = EcPoint::Infinity;
    for (x, n) in d.iter() {
        acc = grp.add(acc, grp.mul(orbit_sum(curve, x)?, n));
    }
    Ok(acc)
}

/// For an affine place `x` of `E`: the function with divisor
/// `(x) - deg(x)·(O) - ((R) - (O))` where `R` is the orbit sum, normalized
/// at `O`, together with `R`.
pub fn place_function(curve: &Curve, place: &Place) -> Result<(FuncElem, EcPoint)> {
    if place.is_infinity() {
        return Ok((FuncElem::one(curve), EcPoint::Infinity));
    }
    let grp = curve.group_over(place.residue_field())?;
    let cubic = curve.cubic().embed(place.residue_field());
    let terms: Vec<(EcPoint, i64)> = frobenius_points(place).into_iter().map(|p| (p, 1)).collect();
    let (h, s) = accumulate(&grp, &cubic, &terms);
    Ok((descend(curve, &h)?, s))
}

/// The line through two rational points (tangent if equal), normalized at `O`.
pub fn line_function(curve: &Curve, p: EcPoint, q: EcPoint) -> Result<FuncElem> {
    let grp = curve.group()?;
    descend(curve, &chord(&grp, p, q))
}

/// A function with divisor `d`, normalized to have leading coefficient 1 at
/// the distinguished point.
pub fn function_with_divisor(curve: &Curve, d: &Divisor) -> Result<FuncElem> {
    if d.degree() != 0 {
        return Err(Error::NonPrincipal(format!("degree {}", d.degree())));
    }
    if curve.is_p1() {
        let k = curve.field();
        let (mut num, mut den) = (Poly::one(k), Poly::one(k));
        for (x, n) in d.iter() {
            if let Some(pi) = x.poly() {
                if n > 0 {
                    num = num.mul(&pi.pow(n as u64));
                } else {
                    den = den.mul(&pi.pow(n.unsigned_abs()));
                }
            }
        }
        return FuncElem::ratio(curve, num, den);
    }
    let class = abel_jacobi(curve, d)?;
    if !class.is_infinity() {
        return Err(Error::NonPrincipal(class.format(curve.field())));
    }
    let grp = curve.group()?;
    let cubic = curve.cubic();
    let mut acc = FuncElem::one(curve);
    let mut rational: Vec<(EcPoint, i64)> = Vec::new();
    for (x, n) in d.iter() {
        if x.is_infinity() {
            continue;
        }
        if x.is_rational() {
            rational.push((x.point().expect("affine place"), n));
        } else {
            let (g, r) = place_function(curve, x)?;
            acc = acc.mul(&g.pow(n)?);
            rational.push((r, n));
        }
    }
    let (h, s) = accumulate(&grp, &cubic, &rational);
    if !s.is_infinity() {
        return Err(Error::Internal("accumulated point is not O".into()));
    }
    acc.mul(&descend(curve, &h)?).normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::divisor_of;
    use crate::gf::Field;

    fn ell(a: u32, b: u32) -> Curve {
        Curve::elliptic(&Field::prime(5).unwrap(), Fe(a), Fe(b)).unwrap()
    }

    #[test]
    fn two_torsion_line_is_y() {
        let e = ell(1, 0);
        let d = Divisor::from_terms([
            (e.parse_place("pt(0,0)").unwrap(), 1),
            (e.parse_place("pt(2,0)").unwrap(), 1),
            (e.parse_place("pt(3,0)").unwrap(), 1),
            (e.infinity(), -3),
        ]);
        assert_eq!(function_with_divisor(&e, &d).unwrap(), FuncElem::y(&e));
    }

    #[test]
    fn abel_jacobi_examples() {
        let e = ell(1, 0);
        let d = Divisor::from_terms([
            (e.parse_place("pt(0,0)").unwrap(), 1),
            (e.parse_place("pt(2,0)").unwrap(), 1),
            (e.infinity(), -2),
        ]);
        assert_eq!(abel_jacobi(&e, &d).unwrap(), EcPoint::Affine(Fe(3), Fe(0)));
        assert!(matches!(
            function_with_divisor(&e, &d),
            Err(Error::NonPrincipal(_))
        ));
    }

    #[test]
    fn place_functions_have_the_right_divisor() {
        for e in [ell(1, 1), ell(1, 0)] {
            for x in e.places_up_to(3).unwrap() {
                if x.is_infinity() {
                    continue;
                }
                let (g, r) = place_function(&e, &x).unwrap();
                let mut want = Divisor::point(&x);
                want.add_term(&e.infinity(), -i64::from(x.degree()) + 1);
                if !r.is_infinity() {
                    let rp = match r {
                        EcPoint::Affine(a, b) => e.point_place(1, a, b).unwrap(),
                        EcPoint::Infinity => unreachable!(),
                    };
                    want.add_term(&rp, -1);
                } else {
                    want.add_term(&e.infinity(), -1);
                }
                assert_eq!(divisor_of(&g).unwrap(), want, "at {x}");
            }
        }
    }

    #[test]
    fn round_trip_principal_divisors() {
        let e = ell(1, 1);
        for s in ["y - x - 1", "(y + 2x)/(x^2 + 1)", "(x^2 + 2)/(y + 3)"] {
            let f = crate::funcfield::parse_function(&e, s).unwrap();
            let d = divisor_of(&f).unwrap();
            let g = function_with_divisor(&e, &d).unwrap();
            assert_eq!(g, f.normalized().unwrap(), "{s}");
        }
        let p = Curve::p1(&Field::prime(3).unwrap());
        let f = crate::funcfield::parse_function(&p, "t/(t+1)").unwrap();
        assert_eq!(function_with_divisor(&p, &divisor_of(&f).unwrap()).unwrap(), f);
    }
}
