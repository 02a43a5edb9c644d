//! Curves (`P^1` and short-Weierstrass elliptic curves), their places, and
//! local expansions of functions at places.

mod ec;
mod local;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

pub use ec::{EcGroup, EcPoint, GroupStructure};
pub use local::{expand_at, uniformizer, valuation_by_expansion};
pub(crate) use local::{chart, expand_series};

use crate::error::{Error, Result};
use crate::gf::{check_cap, Fe, Field};
use crate::polyser::{irreducibles_up_to, least_irreducible, parse_poly, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveKind {
    P1,
    /// `y^2 = x^3 + ax + b`.
    Elliptic { a: Fe, b: Fe },
}

struct CurveInner {
    field: Field,
    kind: CurveKind,
    ext: Mutex<BTreeMap<u32, Field>>,
    places: Mutex<BTreeMap<PlaceKey, Place>>,
    above: Mutex<BTreeMap<Vec<u32>, Vec<Place>>>,
}

/// A curve over `k = F_q`; cheap to clone, caches shared between clones.
#[derive(Clone)]
pub struct Curve(Arc<CurveInner>);

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field && self.0.kind == other.0.kind)
    }
}

impl Eq for Curve {}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl Curve {
    fn build(field: &Field, kind: CurveKind) -> Curve {
        Curve(Arc::new(CurveInner {
            field: field.clone(),
            kind,
            ext: Mutex::new(BTreeMap::new()),
            places: Mutex::new(BTreeMap::new()),
            above: Mutex::new(BTreeMap::new()),
        }))
    }

    pub fn p1(field: &Field) -> Curve {
        Curve::build(field, CurveKind::P1)
    }

    pub fn elliptic(field: &Field, a: Fe, b: Fe) -> Result<Curve> {
        if field.p() < 5 {
            return Err(Error::InvalidCurve(format!(
                "short Weierstrass models need characteristic >= 5, got {}",
                field.p()
            )));
        }
        let f = field;
        let a3 = f.mul(f.mul(a, a), a);
        let disc = f.add(f.mul(f.from_int(4), a3), f.mul(f.from_int(27), f.mul(b, b)));
        if disc.is_zero() {
            return Err(Error::InvalidCurve("4a^3 + 27b^2 = 0".into()));
        }
        Ok(Curve::build(field, CurveKind::Elliptic { a, b }))
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn kind(&self) -> &CurveKind {
        &self.0.kind
    }

    pub fn is_p1(&self) -> bool {
        self.0.kind == CurveKind::P1
    }

    pub fn is_elliptic(&self) -> bool {
        !self.is_p1()
    }

    /// `(a, b)` for an elliptic curve.
    pub fn coefficients(&self) -> Option<(Fe, Fe)> {
        match self.0.kind {
            CurveKind::P1 => None,
            CurveKind::Elliptic { a, b } => Some((a, b)),
        }
    }

    /// `x^3 + ax + b` as a polynomial over `k`.
    pub fn cubic(&self) -> Poly {
        let (a, b) = self.coefficients().unwrap_or((Fe::ZERO, Fe::ZERO));
        Poly::new(self.field(), vec![b, a, Fe::ZERO, Fe::ONE])
    }

    /// Variable name used when printing functions: `t` or `x`.
    pub fn var(&self) -> &'static str {
        if self.is_p1() {
            "t"
        } else {
            "x"
        }
    }

    pub fn describe(&self) -> String {
        let k = self.field();
        match self.0.kind {
            CurveKind::P1 => format!("P1 over {}", k.describe()),
            CurveKind::Elliptic { a, b } => format!(
                "y^2 = x^3 + {}*x + {} over {}",
                k.format(a),
                k.format(b),
                k.describe()
            ),
        }
    }

    /// The group of points over an extension field `ext` of `k`.
    pub fn group_over(&self, ext: &Field) -> Result<EcGroup> {
        let (a, b) = self
            .coefficients()
            .ok_or_else(|| Error::Unsupported("group law on P1".into()))?;
        Ok(EcGroup::new(ext, a, b))
    }

    /// `E(k)`.
    pub fn group(&self) -> Result<EcGroup> {
        self.group_over(self.field())
    }

    /// `F_{q^d}` as `k[T]/(least irreducible of degree d)`; `k` itself for `d = 1`.
    pub fn ext_field(&self, d: u32) -> Result<Field> {
        if d == 1 {
            return Ok(self.field().clone());
        }
        if d == 0 {
            return Err(Error::Precondition("extension degree 0".into()));
        }
        check_cap(u64::from(self.field().order()).saturating_pow(d))?;
        let mut cache = self.0.ext.lock().expect("extension cache poisoned");
        if let Some(f) = cache.get(&d) {
            return Ok(f.clone());
        }
        let m = least_irreducible(self.field(), d as usize)?;
        let f = Field::extension(self.field(), m.coeffs().to_vec())?;
        cache.insert(d, f.clone());
        Ok(f)
    }

    fn intern(&self, key: PlaceKey, make: impl FnOnce() -> Result<Place>) -> Result<Place> {
        if let Some(p) = self.0.places.lock().expect("place cache poisoned").get(&key) {
            return Ok(p.clone());
        }
        let p = make()?;
        self.0
            .places
            .lock()
            .expect("place cache poisoned")
            .entry(key)
            .or_insert(p.clone());
        Ok(p)
    }

    /// The distinguished rational point: `∞` on `P^1`, `O` on `E`.
    pub fn infinity(&self) -> Place {
        let kind = if self.is_p1() {
            PlaceKind::P1Infinity
        } else {
            PlaceKind::EllInfinity
        };
        self.intern(PlaceKey::Infinity, || {
            Ok(Place::make(kind, 1, self.field().clone()))
        })
        .expect("infinity is always constructible")
    }

    /// The place of `P^1` cut out by a monic irreducible `π`.
    pub fn p1_place(&self, pi: &Poly) -> Result<Place> {
        if !self.is_p1() {
            return Err(Error::InvalidPlace("polynomial places live on P1".into()));
        }
        if pi.field() != self.field() || !pi.is_monic() || !pi.is_irreducible() {
            return Err(Error::InvalidPlace(format!(
                "{} is not a monic irreducible over {}",
                pi.format("t"),
                self.field().describe()
            )));
        }
        let d = pi.deg() as u32;
        let key = PlaceKey::Finite {
            degree: d,
            code: pi.coeffs().iter().rev().map(|c| c.0).collect(),
        };
        self.intern(key, || {
            let residue = if d == 1 {
                self.field().clone()
            } else {
                check_cap(u64::from(self.field().order()).saturating_pow(d))?;
                Field::extension(self.field(), pi.coeffs().to_vec())?
            };
            Ok(Place::make(PlaceKind::P1Finite(pi.clone()), d, residue))
        })
    }

    /// The place through the point `(x, y)` with coordinates in `F_{q^d}`
    /// (the field [`Curve::ext_field`]`(d)`); `d` must be the exact degree of
    /// the point.
    pub fn point_place(&self, d: u32, x: Fe, y: Fe) -> Result<Place> {
        let ext = self.ext_field(d)?;
        let grp = self.group_over(&ext)?;
        if x.0 >= ext.order() || y.0 >= ext.order() || !grp.contains(EcPoint::Affine(x, y)) {
            return Err(Error::InvalidPlace(format!(
                "({}, {}) is not on {} over {}",
                ext.format(x),
                ext.format(y),
                self.describe(),
                ext.describe()
            )));
        }
        let orbit = frobenius_orbit(&ext, d, x, y);
        if orbit.len() as u32 != d {
            return Err(Error::InvalidPlace(format!(
                "point has degree {} rather than {d}",
                orbit.len()
            )));
        }
        let &(rx, ry) = orbit.iter().min().expect("orbit is nonempty");
        let key = PlaceKey::Finite {
            degree: d,
            code: vec![rx.0, ry.0],
        };
        self.intern(key, || {
            let mut xs: Vec<Fe> = orbit.iter().map(|p| p.0).collect();
            xs.sort();
            xs.dedup();
            let mut r = Poly::one(&ext);
            for &c in &xs {
                r = r.mul(&Poly::linear(&ext, c));
            }
            let xpoly = r.descend(self.field())?;
            Ok(Place::make(
                PlaceKind::EllFinite {
                    x: rx,
                    y: ry,
                    xpoly,
                },
                d,
                ext.clone(),
            ))
        })
    }

    /// Places of `E` lying over the monic irreducible `r(x)`.
    pub fn places_above(&self, r: &Poly) -> Result<Vec<Place>> {
        let grp = self.group()?;
        if !r.is_monic() || !r.is_irreducible() {
            return Err(Error::InvalidPlace(format!(
                "{} is not monic irreducible",
                r.format("x")
            )));
        }
        let cache_key: Vec<u32> = r.coeffs().iter().map(|c| c.0).collect();
        if let Some(v) = self.0.above.lock().expect("cache poisoned").get(&cache_key) {
            return Ok(v.clone());
        }
        let d = r.deg() as u32;
        let ld = self.ext_field(d)?;
        let theta = root_in(r, &ld)?;
        let fx = EcGroup::new(&ld, grp.a, grp.b).rhs(theta);
        let mut out = Vec::new();
        if fx.is_zero() {
            out.push(self.point_place(d, theta, Fe::ZERO)?);
        } else if let Some(s) = ld.sqrt(fx) {
            out.push(self.point_place(d, theta, s)?);
            out.push(self.point_place(d, theta, ld.neg(s))?);
        } else {
            let l2 = self.ext_field(2 * d)?;
            let theta2 = root_in(r, &l2)?;
            let fx2 = EcGroup::new(&l2, grp.a, grp.b).rhs(theta2);
            let s = l2
                .sqrt(fx2)
                .ok_or_else(|| Error::Internal("no square root in the quadratic extension".into()))?;
            out.push(self.point_place(2 * d, theta2, s)?);
        }
        out.sort();
        self.0
            .above
            .lock()
            .expect("cache poisoned")
            .insert(cache_key, out.clone());
        Ok(out)
    }

    /// All places of degree `<= bound`, infinity first, then by degree and key.
    pub fn places_up_to(&self, bound: u32) -> Result<Vec<Place>> {
        if bound == 0 {
            return Err(Error::Precondition("degree bound must be >= 1".into()));
        }
        let mut out = vec![self.infinity()];
        match self.0.kind {
            CurveKind::P1 => {
                for pi in irreducibles_up_to(self.field(), bound as usize)? {
                    out.push(self.p1_place(&pi)?);
                }
            }
            CurveKind::Elliptic { .. } => {
                for d in 1..=bound {
                    let ext = self.ext_field(d)?;
                    let grp = self.group_over(&ext)?;
                    let mut seen = std::collections::BTreeSet::new();
                    for p in grp.points() {
                        if let EcPoint::Affine(x, y) = p {
                            let orbit = frobenius_orbit(&ext, d, x, y);
                            if orbit.len() as u32 == d {
                                let rep = *orbit.iter().min().expect("nonempty");
                                if seen.insert(rep) {
                                    out.push(self.point_place(d, rep.0, rep.1)?);
                                }
                            }
                        }
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// `E(k)` in sorted order.
    pub fn rational_points(&self) -> Result<Vec<EcPoint>> {
        Ok(self.group()?.points())
    }

    /// Parse `inf`, `(t^2 + t + 1)`, `pt(x, y)` or `orbit(X, Y; d=D)`.
    pub fn parse_place(&self, s: &str) -> Result<Place> {
        let s = s.trim();
        if s == "inf" || s == "O" || s == "oo" {
            return Ok(self.infinity());
        }
        if let Some(body) = s.strip_prefix("pt(").and_then(|r| r.strip_suffix(')')) {
            let (xs, ys) = body
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected pt(x, y), got `{s}`")))?;
            let k = self.field();
            return self.point_place(1, k.parse(xs)?, k.parse(ys)?);
        }
        if let Some(body) = s.strip_prefix("orbit(").and_then(|r| r.strip_suffix(')')) {
            let (coords, deg) = body
                .split_once(';')
                .ok_or_else(|| Error::Parse(format!("expected orbit(X, Y; d=D), got `{s}`")))?;
            let d: u32 = deg
                .trim()
                .strip_prefix("d")
                .map(|r| r.trim_start().trim_start_matches('='))
                .and_then(|r| r.trim().parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad degree in `{s}`")))?;
            let (xs, ys) = coords
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected two coordinates in `{s}`")))?;
            let ext = self.ext_field(d)?;
            return self.point_place(d, ext.parse(xs)?, ext.parse(ys)?);
        }
        if self.is_p1() {
            let pi = parse_poly(self.field(), s, "t")?;
            return self.p1_place(&pi);
        }
        Err(Error::Parse(format!("unrecognized place `{s}`")))
    }
}

/// Distinct Frobenius conjugates of `(x, y)` over `k`, where both lie in the
/// degree-`d` extension `ext`.
fn frobenius_orbit(ext: &Field, d: u32, x: Fe, y: Fe) -> Vec<(Fe, Fe)> {
    if d == 1 {
        return vec![(x, y)];
    }
    let mut out = vec![(x, y)];
    let (mut cx, mut cy) = (ext.frobenius(x), ext.frobenius(y));
    while (cx, cy) != (x, y) {
        out.push((cx, cy));
        cx = ext.frobenius(cx);
        cy = ext.frobenius(cy);
    }
    out
}

/// The least-code root of `r` (over `k`) inside `ext`.
fn root_in(r: &Poly, ext: &Field) -> Result<Fe> {
    ext.elements()
        .find(|&z| r.eval_in(ext, z).is_zero())
        .ok_or_else(|| Error::Internal(format!("{} has no root in {}", r.format("x"), ext.describe())))
}

/// Sort key: infinity first, then by degree, then by the defining data.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlaceKey {
    Infinity,
    Finite { degree: u32, code: Vec<u32> },
}

#[derive(Clone, Debug)]
pub enum PlaceKind {
    /// Zero of the monic irreducible `π(t)`.
    P1Finite(Poly),
    P1Infinity,
    /// Frobenius orbit of `(x, y)`, coordinates in the residue field;
    /// `xpoly` is the minimal polynomial of `x` over `k`.
    EllFinite { x: Fe, y: Fe, xpoly: Poly },
    EllInfinity,
}

struct PlaceData {
    key: PlaceKey,
    kind: PlaceKind,
    degree: u32,
    residue: Field,
}

/// A closed point of a curve with its residue field `k(x)`.
#[derive(Clone)]
pub struct Place(Arc<PlaceData>);

impl Place {
    fn make(kind: PlaceKind, degree: u32, residue: Field) -> Place {
        let key = match &kind {
            PlaceKind::P1Infinity | PlaceKind::EllInfinity => PlaceKey::Infinity,
            PlaceKind::P1Finite(pi) => PlaceKey::Finite {
                degree,
                code: pi.coeffs().iter().rev().map(|c| c.0).collect(),
            },
            PlaceKind::EllFinite { x, y, .. } => PlaceKey::Finite {
                degree,
                code: vec![x.0, y.0],
            },
        };
        Place(Arc::new(PlaceData {
            key,
            kind,
            degree,
            residue,
        }))
    }

    pub fn kind(&self) -> &PlaceKind {
        &self.0.kind
    }

    pub fn key(&self) -> &PlaceKey {
        &self.0.key
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    /// `k(x)`; equal to `k` itself for rational places.
    pub fn residue_field(&self) -> &Field {
        &self.0.residue
    }

    pub fn is_infinity(&self) -> bool {
        self.0.key == PlaceKey::Infinity
    }

    pub fn is_rational(&self) -> bool {
        self.0.degree == 1
    }

    pub fn poly(&self) -> Option<&Poly> {
        match &self.0.kind {
            PlaceKind::P1Finite(p) => Some(p),
            _ => None,
        }
    }

    /// Representative point of an affine elliptic place.
    pub fn point(&self) -> Option<EcPoint> {
        match &self.0.kind {
            PlaceKind::EllFinite { x, y, .. } => Some(EcPoint::Affine(*x, *y)),
            PlaceKind::EllInfinity => Some(EcPoint::Infinity),
            _ => None,
        }
    }

    /// Whether `x - x0` is not a uniformizer (an affine elliptic place with `y0 = 0`).
    pub fn is_ramified(&self) -> bool {
        matches!(&self.0.kind, PlaceKind::EllFinite { y, .. } if y.is_zero())
    }

    /// `N_{k(x)/k}` on the residue field.
    pub fn norm(&self, a: Fe) -> Fe {
        if self.0.degree == 1 {
            a
        } else {
            self.0.residue.norm(a)
        }
    }

    /// The kernel `N_x` of the norm, in generator-power order.
    pub fn norm_one_subgroup(&self) -> Result<Vec<Fe>> {
        check_cap(u64::from(self.0.residue.order()))?;
        Ok(self
            .0
            .residue
            .units_by_power()
            .filter(|&a| self.norm(a) == Fe::ONE)
            .collect())
    }

    /// Some `u` in `k(x)^*` with `N(u) = c`.
    pub fn norm_preimage(&self, c: Fe) -> Result<Fe> {
        if c.is_zero() {
            return Err(Error::Precondition("norm preimage of zero".into()));
        }
        if self.0.degree == 1 {
            return Ok(c);
        }
        let k = self
            .0
            .residue
            .base()
            .expect("residue field of a non-rational place is an extension");
        Ok(crate::gf::gf_norm_preimage(&k.elem(c), &self.0.residue)?.value)
    }
}

impl PartialEq for Place {
    fn eq(&self, other: &Self) -> bool {
        self.0.key == other.0.key
    }
}

impl Eq for Place {}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.key.cmp(&other.0.key)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            PlaceKind::P1Infinity | PlaceKind::EllInfinity => f.write_str("inf"),
            PlaceKind::P1Finite(p) => write!(f, "({})", p.format("t")),
            PlaceKind::EllFinite { x, y, .. } if self.0.degree == 1 => {
                let k = &self.0.residue;
                write!(f, "pt({},{})", k.format(*x), k.format(*y))
            }
            PlaceKind::EllFinite { x, y, .. } => {
                let l = &self.0.residue;
                write!(f, "orbit({}, {}; d={})", l.format(*x), l.format(*y), self.0.degree)
            }
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Invariant factors of `E(k)` from element orders.
pub fn ec_group_structure(curve: &Curve) -> Result<GroupStructure> {
    let grp = curve.group()?;
    let pts = grp.points();
    let order = pts.len() as u64;
    let n = pts.iter().map(|&p| grp.order_of(p)).max().unwrap_or(1);
    Ok(GroupStructure {
        m: order / n,
        n,
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn p1_places() {
        let c = Curve::p1(&f(2));
        let names: Vec<String> = c.places_up_to(2).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(names, vec!["inf", "(t)", "(t + 1)", "(t^2 + t + 1)"]);
        for q in [2, 3, 5, 7] {
            assert_eq!(Curve::p1(&f(q)).places_up_to(1).unwrap().len() as u32, q + 1);
        }
    }

    #[test]
    fn elliptic_places_and_groups() {
        let c = Curve::elliptic(&f(5), Fe(1), Fe(1)).unwrap();
        assert_eq!(c.places_up_to(1).unwrap().len(), 9);
        assert_eq!(
            ec_group_structure(&c).unwrap(),
            GroupStructure { m: 1, n: 9, order: 9 }
        );
        let c2 = Curve::elliptic(&f(5), Fe(1), Fe(0)).unwrap();
        assert_eq!(
            ec_group_structure(&c2).unwrap(),
            GroupStructure { m: 2, n: 2, order: 4 }
        );
        assert!(Curve::elliptic(&f(3), Fe(1), Fe(1)).is_err());
        assert!(Curve::elliptic(&f(5), Fe(0), Fe(0)).is_err());
    }

    #[test]
    fn gauss_count_over_extensions() {
        // Σ_{d | B} d·#places(d) = #E(F_{q^B}) - 1 (affine points)
        let c = Curve::elliptic(&f(5), Fe(1), Fe(1)).unwrap();
        let places = c.places_up_to(3).unwrap();
        for b in [1u32, 2, 3] {
            let lhs: u32 = places
                .iter()
                .filter(|p| !p.is_infinity() && b % p.degree() == 0)
                .map(Place::degree)
                .sum();
            let ext = c.ext_field(b).unwrap();
            let rhs = c.group_over(&ext).unwrap().points().len() as u32 - 1;
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn places_above_polynomials() {
        let k = f(5);
        let c = Curve::elliptic(&k, Fe(1), Fe(0)).unwrap();
        // x: F(0) = 0, ramified
        let above = c.places_above(&Poly::x(&k)).unwrap();
        assert_eq!(above.len(), 1);
        assert!(above[0].is_ramified());
        // x - 1: F(1) = 2 is a non-square mod 5, one place of degree 2
        let above = c.places_above(&Poly::linear(&k, Fe(1))).unwrap();
        assert_eq!(above.len(), 1);
        assert_eq!(above[0].degree(), 2);
    }

    #[test]
    fn place_syntax_round_trip() {
        let c = Curve::elliptic(&f(5), Fe(1), Fe(1)).unwrap();
        for p in c.places_up_to(2).unwrap() {
            assert_eq!(c.parse_place(&p.to_string()).unwrap(), p);
        }
        let l = Curve::p1(&f(3));
        for p in l.places_up_to(2).unwrap() {
            assert_eq!(l.parse_place(&p.to_string()).unwrap(), p);
        }
        assert!(c.parse_place("pt(1,1)").is_err());
    }

    #[test]
    fn norm_one_subgroups() {
        let c = Curve::p1(&f(3));
        for p in c.places_up_to(3).unwrap() {
            let q = 3u64;
            let expect = (q.pow(p.degree()) - 1) / (q - 1);
            assert_eq!(p.norm_one_subgroup().unwrap().len() as u64, expect);
        }
    }
}
