//! Truncated Laurent jets at a place: `c·t^m·(1 + …) + O(t^{m+N})`.

use std::fmt;

use super::Series;
use crate::curve::Place;
use crate::error::{Error, Result};
use crate::gf::Fe;

/// A unit of the completion at a place, known to `N >= 1` coefficients.
///
/// `coeffs[0]` is never zero and the zero jet cannot be built.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentJet {
    place: Place,
    val: i64,
    coeffs: Vec<Fe>,
}

impl LaurentJet {
    pub fn new(place: &Place, val: i64, coeffs: Vec<Fe>) -> Result<LaurentJet> {
        let order = place.residue_field().order();
        match coeffs.first() {
            None => Err(Error::Precondition("a jet needs at least one coefficient".into())),
            Some(c) if c.is_zero() => Err(Error::Precondition(
                "leading jet coefficient must be nonzero".into(),
            )),
            _ if coeffs.iter().any(|c| c.0 >= order) => Err(Error::FieldMismatch(format!(
                "jet coefficient outside {}",
                place.residue_field().describe()
            ))),
            _ => Ok(LaurentJet {
                place: place.clone(),
                val,
                coeffs,
            }),
        }
    }

    /// `c·t^m` at precision 1.
    pub fn monomial(place: &Place, val: i64, c: Fe) -> Result<LaurentJet> {
        LaurentJet::new(place, val, vec![c])
    }

    /// The constant unit `c` at precision 1.
    pub fn unit(place: &Place, c: Fe) -> Result<LaurentJet> {
        LaurentJet::new(place, 0, vec![c])
    }

    /// `1 + O(t^n)`.
    pub fn one(place: &Place, n: usize) -> LaurentJet {
        let mut coeffs = vec![Fe::ZERO; n.max(1)];
        coeffs[0] = Fe::ONE;
        LaurentJet {
            place: place.clone(),
            val: 0,
            coeffs,
        }
    }

    /// The first `n` coefficients of a series with determined valuation.
    pub fn from_series(place: &Place, s: &Series, n: usize) -> Result<LaurentJet> {
        let val = s
            .valuation()
            .ok_or_else(|| Error::Precision(format!("valuation undetermined at {place}")))?;
        if s.rel_prec() < n {
            return Err(Error::Precision(format!(
                "need {n} coefficients at {place}, have {}",
                s.rel_prec()
            )));
        }
        LaurentJet::new(place, val, s.coeffs()[..n].to_vec())
    }

    pub fn to_series(&self) -> Series {
        Series::new(self.place.residue_field(), self.val, self.coeffs.clone())
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn leading(&self) -> Fe {
        self.coeffs[0]
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Whether this is `1 + O(t^N)`: valuation 0 and leading coefficient 1.
    pub fn is_principal_unit(&self) -> bool {
        self.val == 0 && self.coeffs[0] == Fe::ONE
    }

    /// Whether every known coefficient matches `1 + 0·t + …`.
    pub fn is_one(&self) -> bool {
        self.is_principal_unit() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, n: usize) -> LaurentJet {
        let mut out = self.clone();
        out.coeffs.truncate(n.max(1));
        out
    }

    pub fn scale(&self, c: Fe) -> Result<LaurentJet> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.place.residue_field();
        Ok(LaurentJet {
            place: self.place.clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        })
    }

    pub fn pow(&self, e: i64) -> LaurentJet {
        let base = if e < 0 { jet_inv(self) } else { self.clone() };
        let mut acc = LaurentJet::one(&self.place, self.precision());
        for _ in 0..e.unsigned_abs() {
            acc = jet_mul(&acc, &base).expect("same place");
        }
        acc
    }

    /// `1 - self`, if its valuation is determined at the available precision.
    pub fn one_minus(&self) -> Option<LaurentJet> {
        let s = self.to_series().neg().add_const(Fe::ONE);
        let n = s.rel_prec().min(self.precision());
        LaurentJet::from_series(&self.place, &s, n).ok()
    }

    /// Equality of the first `n` coefficients (and the valuation).
    pub fn agrees_to(&self, other: &LaurentJet, n: usize) -> bool {
        let n = n.min(self.precision()).min(other.precision());
        self.place == other.place
            && self.val == other.val
            && self.coeffs[..n] == other.coeffs[..n]
    }
}

impl fmt::Debug for LaurentJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for LaurentJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.place.residue_field();
        let cs: Vec<String> = self.coeffs.iter().map(|&c| l.format(c)).collect();
        write!(f, "(m={}, [{}]) at {}", self.val, cs.join(", "), self.place)
    }
}

fn same_place(a: &LaurentJet, b: &LaurentJet) -> Result<()> {
    if a.place == b.place {
        Ok(())
    } else {
        Err(Error::PlaceMismatch(a.place.to_string(), b.place.to_string()))
    }
}

/// Product; valuations add and the precision is the smaller of the two.
pub fn jet_mul(a: &LaurentJet, b: &LaurentJet) -> Result<LaurentJet> {
    same_place(a, b)?;
    let n = a.precision().min(b.precision());
    LaurentJet::from_series(&a.place, &a.to_series().mul(&b.to_series()), n)
}

/// Inverse by series division.
pub fn jet_inv(a: &LaurentJet) -> LaurentJet {
    let s = a.to_series().inv().expect("jets have a nonzero leading coefficient");
    LaurentJet::from_series(&a.place, &s, a.precision()).expect("inverse keeps precision")
}

pub fn jet_div(a: &LaurentJet, b: &LaurentJet) -> Result<LaurentJet> {
    jet_mul(a, &jet_inv(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::gf::Field;
    use crate::polyser::Poly;

    fn place_t(p: u32) -> Place {
        let k = Field::prime(p).unwrap();
        Curve::p1(&k).p1_place(&Poly::x(&k)).unwrap()
    }

    fn jet(x: &Place, m: i64, c: &[u32]) -> LaurentJet {
        LaurentJet::new(x, m, c.iter().map(|&v| Fe(v)).collect()).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let x = place_t(5);
        assert_eq!(jet_mul(&jet(&x, 1, &[1]), &jet(&x, -1, &[1])).unwrap(), jet(&x, 0, &[1]));
        assert_eq!(
            jet_mul(&jet(&x, 0, &[2, 1]), &jet(&x, 0, &[2, 1])).unwrap(),
            jet(&x, 0, &[4, 4])
        );
        assert_eq!(jet_mul(&jet(&x, 2, &[3]), &jet(&x, 3, &[4])).unwrap(), jet(&x, 5, &[2]));
    }

    #[test]
    fn inverse_examples() {
        let x5 = place_t(5);
        assert_eq!(jet_inv(&jet(&x5, 0, &[1])), jet(&x5, 0, &[1]));
        assert_eq!(jet_inv(&jet(&x5, 3, &[2])), jet(&x5, -3, &[3]));
        let x2 = place_t(2);
        assert_eq!(jet_inv(&jet(&x2, 0, &[1, 1])), jet(&x2, 0, &[1, 1]));
    }

    #[test]
    fn rejects_bad_jets() {
        let x = place_t(3);
        assert!(LaurentJet::new(&x, 0, vec![]).is_err());
        assert!(LaurentJet::new(&x, 0, vec![Fe(0), Fe(1)]).is_err());
        assert!(LaurentJet::new(&x, 0, vec![Fe(7)]).is_err());
        let other = {
            let k = Field::prime(3).unwrap();
            Curve::p1(&k).p1_place(&Poly::linear(&k, Fe(1))).unwrap()
        };
        assert!(matches!(
            jet_mul(&jet(&x, 0, &[1]), &jet(&other, 0, &[1])),
            Err(Error::PlaceMismatch(..))
        ));
    }

    #[test]
    fn one_minus_cases() {
        let x = place_t(5);
        assert_eq!(jet(&x, 2, &[3]).one_minus().unwrap(), jet(&x, 0, &[1]));
        assert_eq!(jet(&x, -1, &[2]).one_minus().unwrap(), jet(&x, -1, &[3]));
        assert_eq!(jet(&x, 0, &[1, 2]).one_minus().unwrap(), jet(&x, 1, &[3]));
        assert!(jet(&x, 0, &[1]).one_minus().is_none());
    }
}
