//! Finite-window ideles: a principal (global) part together with explicit
//! local jets that replace it at finitely many places.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde_json::{json, Value};

use crate::curve::{expand_at, uniformizer, Curve, Place};
use crate::error::{Error, Result};
use crate::funcfield::{divisor_of, evaluate, valuation, Divisor, FuncElem};
use crate::gf::{Fe, Field};
use crate::polyser::{jet_inv, jet_mul, LaurentJet};

/// `f · (local corrections)`, certified over places of degree `<= window`.
///
/// At a place carrying a local jet the jet *is* the component; everywhere
/// else the component is the expansion of `principal`.
#[derive(Clone)]
pub struct Idele {
    curve: Curve,
    principal: FuncElem,
    local: BTreeMap<Place, LaurentJet>,
    window: u32,
    principal_divisor: OnceLock<Divisor>,
}

impl PartialEq for Idele {
    fn eq(&self, other: &Self) -> bool {
        self.curve == other.curve
            && self.principal == other.principal
            && self.local == other.local
            && self.window == other.window
    }
}

impl Eq for Idele {}

fn check_window(place: &Place, window: u32) -> Result<()> {
    if place.degree() > window {
        Err(Error::WindowEscape {
            place: place.to_string(),
            degree: place.degree(),
            window,
        })
    } else {
        Ok(())
    }
}

/// The jet of `f` at `x` with `n` coefficients; precision 1 avoids a full
/// local expansion by evaluating `f / t_x^v` at `x`.
pub fn function_jet(f: &FuncElem, x: &Place, n: usize) -> Result<LaurentJet> {
    if n > 1 {
        return expand_at(f, x, n);
    }
    let v = valuation(f, x)?;
    let unit = if v == 0 {
        f.clone()
    } else {
        f.div(&uniformizer(f.curve(), x).pow(v)?)?
    };
    LaurentJet::monomial(x, v, evaluate(&unit, x)?.value)
}

impl Idele {
    pub fn new<I>(principal: FuncElem, local: I, window: u32) -> Result<Idele>
    where
        I: IntoIterator<Item = LaurentJet>,
    {
        if principal.is_zero() {
            return Err(Error::ZeroFunction);
        }
        if window == 0 {
            return Err(Error::Precondition("window bound must be >= 1".into()));
        }
        let curve = principal.curve().clone();
        let mut map = BTreeMap::new();
        for jet in local {
            check_window(jet.place(), window)?;
            if map.insert(jet.place().clone(), jet.clone()).is_some() {
                return Err(Error::Precondition(format!(
                    "two local jets at {}",
                    jet.place()
                )));
            }
        }
        Ok(Idele {
            curve,
            principal,
            local: map,
            window,
            principal_divisor: OnceLock::new(),
        })
    }

    /// The diagonal image of a global function.
    pub fn diag(f: &FuncElem, window: u32) -> Result<Idele> {
        Idele::new(f.clone(), [], window)
    }

    pub fn identity(curve: &Curve, window: u32) -> Idele {
        Idele::diag(&FuncElem::one(curve), window).expect("1 is a valid principal part")
    }

    pub fn constant(curve: &Curve, c: Fe, window: u32) -> Result<Idele> {
        Idele::diag(&FuncElem::constant(curve, c), window)
    }

    /// Identity everywhere except the given jets.
    pub fn from_jets<I>(curve: &Curve, jets: I, window: u32) -> Result<Idele>
    where
        I: IntoIterator<Item = LaurentJet>,
    {
        Idele::new(FuncElem::one(curve), jets, window)
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn field(&self) -> &Field {
        self.curve.field()
    }

    pub fn principal(&self) -> &FuncElem {
        &self.principal
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn local(&self) -> impl Iterator<Item = &LaurentJet> {
        self.local.values()
    }

    pub fn local_jet(&self, x: &Place) -> Option<&LaurentJet> {
        self.local.get(x)
    }

    pub fn with_window(&self, window: u32) -> Result<Idele> {
        Idele::new(self.principal.clone(), self.local.values().cloned(), window)
    }

    /// Replace the component at the jet's place.
    pub fn with_local(&self, jet: LaurentJet) -> Result<Idele> {
        check_window(jet.place(), self.window)?;
        let mut out = self.clone();
        out.local.insert(jet.place().clone(), jet);
        Ok(out)
    }

    /// Multiply the component at the jet's place by the jet.
    pub fn perturb(&self, jet: &LaurentJet) -> Result<Idele> {
        let cur = self.component(jet.place(), jet.precision())?;
        self.with_local(jet_mul(&cur, jet)?)
    }

    /// `α_x` to at least `n` coefficients (a local jet is returned as stored).
    pub fn component(&self, x: &Place, n: usize) -> Result<LaurentJet> {
        match self.local.get(x) {
            Some(j) => Ok(j.clone()),
            None => function_jet(&self.principal, x, n.max(1)),
        }
    }

    /// Residue class of a component of valuation 0.
    pub fn residue(&self, x: &Place) -> Result<Fe> {
        let j = self.component(x, 1)?;
        if j.valuation() != 0 {
            return Err(Error::NotAUnit(j.valuation(), x.to_string()));
        }
        Ok(j.leading())
    }

    pub fn valuation_at(&self, x: &Place) -> Result<i64> {
        match self.local.get(x) {
            Some(j) => Ok(j.valuation()),
            None => valuation(&self.principal, x),
        }
    }

    fn principal_divisor(&self) -> Result<&Divisor> {
        if let Some(d) = self.principal_divisor.get() {
            return Ok(d);
        }
        let d = divisor_of(&self.principal)?;
        Ok(self.principal_divisor.get_or_init(|| d))
    }

    /// `D(α) = Σ v_x(α_x)·x`.
    pub fn divisor(&self) -> Result<Divisor> {
        let mut d = Divisor::new();
        for (x, n) in self.principal_divisor()?.iter() {
            if !self.local.contains_key(x) {
                d.add_term(x, n);
            }
        }
        for (x, j) in &self.local {
            d.add_term(x, j.valuation());
        }
        Ok(d)
    }

    pub fn degree(&self) -> Result<i64> {
        Ok(self.divisor()?.degree())
    }

    /// Membership in `I^1`: degree-0 divisor.
    pub fn in_i1(&self) -> Result<bool> {
        Ok(self.degree()? == 0)
    }

    /// Places where the component may differ from a residue-1 unit: the
    /// support of the principal divisor together with the local support.
    pub fn support(&self) -> Result<BTreeSet<Place>> {
        let mut s: BTreeSet<Place> = self.principal_divisor()?.support().cloned().collect();
        s.extend(self.local.keys().cloned());
        Ok(s)
    }

    /// Fail with [`Error::WindowEscape`] unless the support lies in `window`.
    pub fn check_support(&self, window: u32) -> Result<()> {
        for x in self.support()? {
            check_window(&x, window)?;
        }
        Ok(())
    }

    /// Drop local jets that agree with the principal expansion.
    fn simplified(mut self) -> Result<Idele> {
        let mut drop = Vec::new();
        for (x, j) in &self.local {
            if function_jet(&self.principal, x, j.precision())?.agrees_to(j, j.precision()) {
                drop.push(x.clone());
            }
        }
        for x in drop {
            self.local.remove(&x);
        }
        Ok(self)
    }

    pub fn mul(&self, other: &Idele) -> Result<Idele> {
        if self.curve != other.curve {
            return Err(Error::Precondition("ideles on different curves".into()));
        }
        let window = self.window.min(other.window);
        let principal = self.principal.mul(&other.principal);
        let places: BTreeSet<&Place> = self.local.keys().chain(other.local.keys()).collect();
        let mut jets = Vec::new();
        for x in places {
            let n = [self.local.get(x), other.local.get(x)]
                .into_iter()
                .flatten()
                .map(LaurentJet::precision)
                .max()
                .unwrap_or(1);
            jets.push(jet_mul(&self.component(x, n)?, &other.component(x, n)?)?);
        }
        Idele::new(principal, jets, window)?.simplified()
    }

    pub fn inv(&self) -> Result<Idele> {
        Idele::new(
            self.principal.inv()?,
            self.local.values().map(jet_inv),
            self.window,
        )
    }

    pub fn div(&self, other: &Idele) -> Result<Idele> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Idele> {
        Idele::new(
            self.principal.pow(e)?,
            self.local.values().map(|j| j.pow(e)),
            self.window,
        )
    }

    /// `-α`, i.e. `α · diag(-1)`.
    pub fn neg(&self) -> Idele {
        let jets = self.local.values().map(|j| {
            let k = j.place().residue_field();
            j.scale(k.neg(Fe::ONE)).expect("-1 is a unit")
        });
        Idele::new(self.principal.neg(), jets, self.window).expect("negation keeps validity")
    }

    /// `1 - α`, when it is again an idele whose components are determined.
    pub fn one_minus(&self) -> Option<Idele> {
        let f = FuncElem::one(&self.curve).sub(&self.principal);
        if f.is_zero() {
            return None;
        }
        let jets: Option<Vec<LaurentJet>> =
            self.local.values().map(LaurentJet::one_minus).collect();
        Idele::new(f, jets?, self.window).ok()
    }

    /// The class modulo `∏(1 + m̂_x)`: every jet truncated to precision 1.
    pub fn bar_reduce(&self) -> Result<Idele> {
        Idele::new(
            self.principal.clone(),
            self.local.values().map(|j| j.truncate(1)),
            self.window,
        )?
        .simplified()
    }

    /// Canonical JSON: `{principal, local: [{place, val, coeffs}], window}`
    /// with places in sorted order.
    pub fn to_json(&self) -> Value {
        let local: Vec<Value> = self
            .local
            .values()
            .map(|j| {
                let l = j.place().residue_field();
                json!({
                    "place": j.place().to_string(),
                    "val": j.valuation(),
                    "coeffs": j.coeffs().iter().map(|&c| coeff_json(l, c)).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "principal": self.principal.to_string(),
            "local": local,
            "window": self.window,
        })
    }

    pub fn from_json(curve: &Curve, v: &Value) -> Result<Idele> {
        let bad = |what: &str| Error::Parse(format!("idele JSON: {what}"));
        let principal = match v.get("principal") {
            None | Some(Value::Null) => FuncElem::one(curve),
            Some(Value::String(s)) => crate::funcfield::parse_function(curve, s)?,
            Some(_) => return Err(bad("principal must be a string")),
        };
        let window = v
            .get("window")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing window"))? as u32;
        let mut jets = Vec::new();
        for item in v
            .get("local")
            .and_then(Value::as_array)
            .map(Vec::as_slice)
            .unwrap_or_default()
        {
            let place = curve.parse_place(
                item.get("place")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad("local entry needs a place"))?,
            )?;
            let val = item
                .get("val")
                .and_then(Value::as_i64)
                .ok_or_else(|| bad("local entry needs val"))?;
            let l = place.residue_field();
            let coeffs = item
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("local entry needs coeffs"))?
                .iter()
                .map(|c| match c {
                    Value::Number(n) => l.parse(&n.to_string()),
                    Value::String(s) => l.parse(s),
                    _ => Err(bad("coefficient must be a number or string")),
                })
                .collect::<Result<Vec<Fe>>>()?;
            jets.push(LaurentJet::new(&place, val, coeffs)?);
        }
        Idele::new(principal, jets, window)
    }
}

/// Prime-subfield values as JSON numbers, other elements as `"g^k"`.
pub(crate) fn coeff_json(field: &Field, c: Fe) -> Value {
    let s = field.format(c);
    match s.parse::<u64>() {
        Ok(n) => Value::from(n),
        Err(_) => Value::from(s),
    }
}

impl fmt::Display for Idele {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.principal)?;
        for j in self.local.values() {
            write!(f, " | {j}")?;
        }
        write!(f, " [B={}]", self.window)
    }
}

impl fmt::Debug for Idele {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::parse_function;

    fn p1(q: u32) -> Curve {
        Curve::p1(&Field::prime(q).unwrap())
    }

    fn jet(x: &Place, m: i64, c: &[u32]) -> LaurentJet {
        LaurentJet::new(x, m, c.iter().map(|&v| Fe(v)).collect()).unwrap()
    }

    #[test]
    fn divisor_examples() {
        let c = p1(5);
        let t = parse_function(&c, "t").unwrap();
        let at0 = c.parse_place("(t)").unwrap();
        let at1 = c.parse_place("(t+1)").unwrap();
        let inf = c.infinity();
        assert_eq!(
            Idele::diag(&t, 1).unwrap().divisor().unwrap(),
            divisor_of(&t).unwrap()
        );
        let a = Idele::from_jets(&c, [jet(&at1, 2, &[1])], 1).unwrap();
        assert_eq!(a.divisor().unwrap(), Divisor::from_terms([(at1, 2)]));
        let b = Idele::new(t, [jet(&at0, 0, &[1])], 1).unwrap();
        assert_eq!(b.divisor().unwrap(), Divisor::from_terms([(inf.clone(), -1)]));
        let c2 = Idele::from_jets(&c, [jet(&at0, 1, &[1]), jet(&inf, -1, &[1])], 1).unwrap();
        assert!(c2.in_i1().unwrap());
    }

    #[test]
    fn degree_two_jet_is_not_in_i1() {
        let c = p1(3);
        let x = c.parse_place("(t^2+1)").unwrap();
        let a = Idele::from_jets(&c, [jet(&x, 1, &[1])], 2).unwrap();
        assert_eq!(a.degree().unwrap(), 2);
        assert!(!a.in_i1().unwrap());
        assert!(Idele::from_jets(&c, [jet(&x, 1, &[1])], 1).is_err());
    }

    #[test]
    fn multiplication_examples() {
        let c = p1(5);
        let at0 = c.parse_place("(t)").unwrap();
        let a = Idele::from_jets(&c, [jet(&at0, 0, &[2])], 1).unwrap();
        let b = Idele::from_jets(&c, [jet(&at0, 0, &[3])], 1).unwrap();
        assert_eq!(a.mul(&b).unwrap(), Idele::identity(&c, 1));
        let f = parse_function(&c, "t/(t+2)").unwrap();
        let g = parse_function(&c, "t^2+1").unwrap();
        assert_eq!(
            Idele::diag(&f, 2)
                .unwrap()
                .mul(&Idele::diag(&g, 2).unwrap())
                .unwrap(),
            Idele::diag(&f.mul(&g), 2).unwrap()
        );
        let z = Idele::new(f, [jet(&at0, 1, &[3, 1, 4])], 2).unwrap();
        assert_eq!(z.mul(&z.inv().unwrap()).unwrap(), Idele::identity(&c, 2));
    }

    #[test]
    fn bar_reduce_examples() {
        let c = p1(5);
        let at0 = c.parse_place("(t)").unwrap();
        let a = Idele::from_jets(&c, [jet(&at0, 0, &[1, 3, 4])], 1).unwrap();
        assert_eq!(a.bar_reduce().unwrap(), Idele::identity(&c, 1));
        let b = Idele::from_jets(&c, [jet(&at0, 2, &[3, 1])], 1).unwrap();
        assert_eq!(
            b.bar_reduce().unwrap().local_jet(&at0).unwrap(),
            &jet(&at0, 2, &[3])
        );
    }

    #[test]
    fn json_round_trip() {
        let c = Curve::p1(&Field::new(3, 2).unwrap());
        let x = c.parse_place("(t + g)").unwrap();
        let f = parse_function(&c, "(t + g)/(t^2 + 2)").unwrap();
        let gen = c.field().generator();
        let a = Idele::new(f, [jet(&x, -1, &[1, 0]).scale(gen).unwrap()], 2).unwrap();
        let v = a.to_json();
        assert_eq!(Idele::from_json(&c, &v).unwrap(), a);
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.starts_with("{\"local\":[{\"coeffs\":"), "{text}");
    }

    #[test]
    fn one_minus_and_neg() {
        let c = p1(5);
        let at0 = c.parse_place("(t)").unwrap();
        let a = Idele::new(parse_function(&c, "t+2").unwrap(), [jet(&at0, 0, &[1])], 1).unwrap();
        assert!(a.one_minus().is_none());
        let b = a.with_local(jet(&at0, 0, &[1, 2])).unwrap();
        let om = b.one_minus().unwrap();
        assert_eq!(om.local_jet(&at0).unwrap(), &jet(&at0, 1, &[3]));
        assert_eq!(om.principal(), &parse_function(&c, "4 - t").unwrap());
        assert_eq!(b.neg().neg(), b);
    }

    #[test]
    fn residues_at_extension_places() {
        let c = p1(3);
        let x = c.parse_place("(t^2+1)").unwrap();
        let f = parse_function(&c, "t+1").unwrap();
        let j = function_jet(&f, &x, 1).unwrap();
        assert_eq!(j, expand_at(&f, &x, 1).unwrap());
        assert_eq!(x.norm(j.leading()), Fe(2));
    }
}
