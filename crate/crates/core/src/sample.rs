//! Seeded generators for functions, jets and ideles used by the randomized
//! checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::curve::{Curve, Place};
use crate::error::{Error, Result};
use crate::funcfield::{divisor_of, FuncElem};
use crate::gf::{Fe, Field};
use crate::idele::Idele;
use crate::polyser::{LaurentJet, Poly};

pub fn element<R: Rng>(rng: &mut R, k: &Field) -> Fe {
    Fe(rng.gen_range(0..k.order()))
}

pub fn unit<R: Rng>(rng: &mut R, k: &Field) -> Fe {
    Fe(rng.gen_range(1..k.order()))
}

/// A polynomial of degree exactly `d` with a random nonzero leading coefficient.
pub fn poly<R: Rng>(rng: &mut R, k: &Field, d: usize) -> Poly {
    let mut c: Vec<Fe> = (0..d).map(|_| element(rng, k)).collect();
    c.push(unit(rng, k));
    Poly::new(k, c)
}

/// A jet with the given valuation and precision and random coefficients.
pub fn jet<R: Rng>(rng: &mut R, x: &Place, val: i64, prec: usize) -> LaurentJet {
    let l = x.residue_field();
    let mut c = vec![unit(rng, l)];
    c.extend((1..prec.max(1)).map(|_| element(rng, l)));
    LaurentJet::new(x, val, c).expect("valid random jet")
}

pub fn unit_jet<R: Rng>(rng: &mut R, x: &Place, prec: usize) -> LaurentJet {
    jet(rng, x, 0, prec)
}

/// `1 + c·t^depth + O(t^{depth+1})`.
pub fn principal_unit<R: Rng>(rng: &mut R, x: &Place, depth: usize) -> LaurentJet {
    let l = x.residue_field();
    let mut c = vec![Fe::ZERO; depth + 1];
    c[0] = Fe::ONE;
    if depth > 0 {
        c[depth] = element(rng, l);
    }
    LaurentJet::new(x, 0, c).expect("valid principal unit")
}

/// A nonzero function: a ratio of polynomials of degree `<= max_deg` on
/// `P^1`; on `E` a product of up to three small atoms (constants, `x - c`,
/// `y - λx - μ`) raised to `±1`.
pub fn function<R: Rng>(rng: &mut R, curve: &Curve, max_deg: usize) -> FuncElem {
    let k = curve.field();
    if curve.is_p1() {
        let nd = rng.gen_range(0..=max_deg);
        let dd = rng.gen_range(0..=max_deg);
        let num = poly(rng, k, nd);
        let den = poly(rng, k, dd);
        return FuncElem::ratio(curve, num, den).expect("nonzero denominator");
    }
    let mut f = FuncElem::constant(curve, unit(rng, k));
    for _ in 0..rng.gen_range(1..=3) {
        let atom = match rng.gen_range(0..3) {
            0 => FuncElem::constant(curve, unit(rng, k)),
            1 => FuncElem::x(curve).sub(&FuncElem::constant(curve, element(rng, k))),
            _ => {
                let lam = element(rng, k);
                let mu = element(rng, k);
                FuncElem::y(curve)
                    .sub(&FuncElem::x(curve).scale(lam))
                    .sub(&FuncElem::constant(curve, mu))
            }
        };
        f = if rng.gen_bool(0.5) {
            f.mul(&atom)
        } else {
            f.div(&atom).expect("atoms are nonzero")
        };
    }
    f
}

/// A random function whose divisor lies on places of degree `<= window`.
pub fn function_in_window<R: Rng>(
    rng: &mut R,
    curve: &Curve,
    window: u32,
    max_deg: usize,
) -> Result<FuncElem> {
    for _ in 0..64 {
        let f = function(rng, curve, max_deg);
        if divisor_of(&f)?.max_place_degree() <= window {
            return Ok(f);
        }
    }
    Err(Error::Internal(format!(
        "no random function supported in window {window} on {}",
        curve.describe()
    )))
}

/// Shape of a random idele.
#[derive(Clone, Copy, Debug)]
pub struct IdeleShape {
    pub max_jets: usize,
    pub max_val: i64,
    pub max_prec: usize,
    pub max_poly_deg: usize,
}

impl Default for IdeleShape {
    fn default() -> Self {
        IdeleShape {
            max_jets: 2,
            max_val: 2,
            max_prec: 3,
            max_poly_deg: 2,
        }
    }
}

/// `diag(f)` with a few local jets at random places of `places`.
pub fn idele<R: Rng>(
    rng: &mut R,
    curve: &Curve,
    places: &[Place],
    window: u32,
    shape: IdeleShape,
) -> Result<Idele> {
    let f = function_in_window(rng, curve, window, shape.max_poly_deg)?;
    let n = rng.gen_range(0..=shape.max_jets).min(places.len());
    let chosen: Vec<&Place> = places.choose_multiple(rng, n).collect();
    let jets = chosen.into_iter().map(|x| {
        let v = rng.gen_range(-shape.max_val..=shape.max_val);
        let p = rng.gen_range(1..=shape.max_prec);
        jet(rng, x, v, p)
    });
    Idele::new(f, jets.collect::<Vec<_>>(), window)
}

/// Adjust the component at the distinguished rational point so that the
/// divisor has degree 0.
pub fn into_i1<R: Rng>(rng: &mut R, alpha: &Idele) -> Result<Idele> {
    let deg = alpha.degree()?;
    if deg == 0 {
        return Ok(alpha.clone());
    }
    let inf = alpha.curve().infinity();
    let v = alpha.valuation_at(&inf)? - deg;
    let prec = rng.gen_range(1..=2);
    alpha.with_local(jet(rng, &inf, v, prec))
}

/// An element of `k^* · ∏(1 + m̂_x) N_x` over `places`: a constant times a few
/// principal units scaled by norm-one residues.
pub fn radical_member<R: Rng>(rng: &mut R, curve: &Curve, places: &[Place], window: u32) -> Result<Idele> {
    let mut alpha = Idele::constant(curve, unit(rng, curve.field()), window)?;
    for _ in 0..rng.gen_range(1..=3) {
        let x = &places[rng.gen_range(0..places.len())];
        let n1 = x.norm_one_subgroup()?;
        let nu = n1[rng.gen_range(0..n1.len())];
        let depth = rng.gen_range(1..=2);
        alpha = alpha.perturb(&principal_unit(rng, x, depth).scale(nu)?)?;
    }
    Ok(alpha)
}

/// A radical member changed at one place of `places` so that it leaves the
/// radical: either a valuation `m` with `(q - 1) ∤ m` or a residue of
/// nontrivial norm. Needs `q > 2`.
pub fn radical_nonmember<R: Rng>(rng: &mut R, curve: &Curve, places: &[Place], window: u32) -> Result<Idele> {
    let k = curve.field();
    let q1 = i64::from(k.order()) - 1;
    if q1 == 1 {
        return Err(Error::Precondition("every idele over F_2 pairs like a radical element".into()));
    }
    let base = radical_member(rng, curve, places, window)?;
    let x = &places[rng.gen_range(0..places.len())];
    let l = x.residue_field();
    let prec = rng.gen_range(1..=2);
    let jet = if rng.gen_bool(0.5) {
        let m = loop {
            let m = rng.gen_range(-3..=3);
            if m % q1 != 0 {
                break m;
            }
        };
        jet(rng, x, m, prec)
    } else {
        let units: Vec<Fe> = l.units_by_power().filter(|&u| x.norm(u) != Fe::ONE).collect();
        let mut j = jet(rng, x, 0, prec);
        j = LaurentJet::new(x, 0, [&[units[rng.gen_range(0..units.len())]], &j.coeffs()[1..]].concat())?;
        j
    };
    base.perturb(&jet)
}
