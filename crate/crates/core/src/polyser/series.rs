//! Truncated Laurent series with absolute-precision tracking.

use std::fmt;

use super::Poly;
use crate::error::{Error, Result};
use crate::gf::{Fe, Field};

/// `Σ coeffs[i]·t^{val+i} + O(t^{val + coeffs.len()})`.
///
/// Normalized so that `coeffs[0] != 0`; an empty coefficient list means the
/// series is known to vanish up to `O(t^val)` and its valuation is unknown.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    field: Field,
    val: i64,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{}·[", self.val)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.field.format(*c))?;
        }
        write!(f, "] + O(t^{})", self.abs_prec())
    }
}

impl Series {
    pub fn new(field: &Field, val: i64, coeffs: Vec<Fe>) -> Series {
        let mut s = Series {
            field: field.clone(),
            val,
            coeffs,
        };
        s.normalize();
        s
    }

    /// `O(t^abs)`.
    pub fn unknown(field: &Field, abs: i64) -> Series {
        Series {
            field: field.clone(),
            val: abs,
            coeffs: Vec::new(),
        }
    }

    /// The constant `c` known to absolute precision `abs`.
    pub fn constant(field: &Field, c: Fe, abs: i64) -> Series {
        if abs <= 0 {
            return Series::unknown(field, abs);
        }
        let mut v = vec![Fe::ZERO; abs as usize];
        v[0] = c;
        Series::new(field, 0, v)
    }

    /// `t` to absolute precision `abs`.
    pub fn variable(field: &Field, abs: i64) -> Series {
        if abs <= 1 {
            return Series::unknown(field, abs);
        }
        let mut v = vec![Fe::ZERO; (abs - 1) as usize];
        v[0] = Fe::ONE;
        Series::new(field, 1, v)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Valuation, if determined.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    /// Lower bound for the valuation (exact when determined).
    pub fn val_bound(&self) -> i64 {
        self.val
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn abs_prec(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn rel_prec(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `t^e`; `None` beyond the known precision.
    pub fn coeff(&self, e: i64) -> Option<Fe> {
        if e >= self.abs_prec() {
            None
        } else if e < self.val {
            Some(Fe::ZERO)
        } else {
            Some(self.coeffs[(e - self.val) as usize])
        }
    }

    pub fn truncate_abs(&self, abs: i64) -> Series {
        if abs >= self.abs_prec() {
            return self.clone();
        }
        if abs <= self.val {
            return Series::unknown(&self.field, abs);
        }
        Series::new(
            &self.field,
            self.val,
            self.coeffs[..(abs - self.val) as usize].to_vec(),
        )
    }

    pub fn add(&self, other: &Series) -> Series {
        let f = &self.field;
        let abs = self.abs_prec().min(other.abs_prec());
        let lo = self.val.min(other.val);
        if abs <= lo {
            return Series::unknown(f, abs);
        }
        let v = (lo..abs)
            .map(|e| {
                f.add(
                    self.coeff(e).unwrap_or(Fe::ZERO),
                    other.coeff(e).unwrap_or(Fe::ZERO),
                )
            })
            .collect();
        Series::new(f, lo, v)
    }

    pub fn neg(&self) -> Series {
        let f = &self.field;
        Series {
            field: f.clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    /// Add an exact constant.
    pub fn add_const(&self, c: Fe) -> Series {
        let abs = self.abs_prec();
        if abs <= 0 || c.is_zero() {
            return self.clone();
        }
        let f = &self.field;
        let lo = self.val.min(0);
        let v = (lo..abs)
            .map(|e| {
                let base = self.coeff(e).unwrap_or(Fe::ZERO);
                if e == 0 {
                    f.add(base, c)
                } else {
                    base
                }
            })
            .collect();
        Series::new(f, lo, v)
    }

    pub fn scale(&self, c: Fe) -> Series {
        let f = &self.field;
        Series::new(f, self.val, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Series {
        Series {
            field: self.field.clone(),
            val: self.val + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn mul(&self, other: &Series) -> Series {
        let f = &self.field;
        let val = self.val + other.val;
        let len = self.coeffs.len().min(other.coeffs.len());
        let mut v = vec![Fe::ZERO; len];
        for (i, &a) in self.coeffs.iter().take(len).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().take(len - i).enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        Series::new(f, val, v)
    }

    pub fn inv(&self) -> Result<Series> {
        if self.coeffs.is_empty() {
            return Err(Error::Precision(
                "inverse of a series with undetermined valuation".into(),
            ));
        }
        let f = &self.field;
        let n = self.coeffs.len();
        let c0inv = f.inv(self.coeffs[0]);
        let mut out = vec![Fe::ZERO; n];
        out[0] = c0inv;
        for k in 1..n {
            let mut s = Fe::ZERO;
            for j in 1..=k {
                s = f.add(s, f.mul(self.coeffs[j], out[k - j]));
            }
            out[k] = f.neg(f.mul(s, c0inv));
        }
        Ok(Series::new(f, -self.val, out))
    }

    pub fn div(&self, other: &Series) -> Result<Series> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Series> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Series::constant(&self.field, Fe::ONE, base.rel_prec().max(1) as i64);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// `p(self)` by Horner; `p`'s coefficients must embed in this field.
    pub fn eval_poly(&self, p: &Poly) -> Series {
        let f = &self.field;
        let big = self.abs_prec().max(1) + 4 * p.deg() as i64 * self.val.abs();
        let mut acc = Series::constant(f, p.lc(), big);
        if p.is_zero() {
            return Series::unknown(f, i64::MAX / 4);
        }
        for &c in p.coeffs().iter().rev().skip(1) {
            acc = acc.mul(self).add_const(c);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_bookkeeping() {
        let f5 = Field::prime(5).unwrap();
        let a = Series::new(&f5, 0, vec![Fe(2), Fe(1)]);
        let sq = a.mul(&a);
        assert_eq!(sq.coeffs(), &[Fe(4), Fe(4)]);
        assert_eq!(sq.abs_prec(), 2);
        let inv = a.inv().unwrap();
        assert_eq!(a.mul(&inv).coeffs(), &[Fe(1), Fe(0)]);
        let t = Series::variable(&f5, 5);
        assert_eq!(t.valuation(), Some(1));
        assert_eq!(t.abs_prec(), 5);
        let one_minus = t.neg().add_const(Fe(1));
        assert_eq!(one_minus.coeffs(), &[Fe(1), Fe(4), Fe(0), Fe(0), Fe(0)]);
        let cancel = a.sub(&a);
        assert_eq!(cancel.valuation(), None);
        assert_eq!(cancel.abs_prec(), 2);
    }

    #[test]
    fn laurent_add_constant() {
        let f3 = Field::prime(3).unwrap();
        let s = Series::new(&f3, -1, vec![Fe(1), Fe(0)]);
        let r = s.add_const(Fe(1));
        assert_eq!(r.valuation(), Some(-1));
        assert_eq!(r.coeffs(), &[Fe(1), Fe(1)]);
    }

    #[test]
    fn horner_eval() {
        let f5 = Field::prime(5).unwrap();
        // (1 + t)^2 at t-series
        let p = Poly::new(&f5, vec![Fe(1), Fe(2), Fe(1)]);
        let t = Series::variable(&f5, 4);
        let r = t.eval_poly(&p);
        assert_eq!(r.coeffs(), &[Fe(1), Fe(2), Fe(1), Fe(0)]);
    }
}
