use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{format_coeffs, Fe, Field};

/// Dense univariate polynomial over a finite field, low degree first.
///
/// Trailing zeros are always trimmed, so the zero polynomial has no
/// coefficients and the leading coefficient of anything else is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.format("t"))
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last() == Some(&Fe::ZERO) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Fe::ONE)
    }

    pub fn constant(field: &Field, c: Fe) -> Poly {
        Poly::new(field, vec![c])
    }

    /// The variable itself.
    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![Fe::ZERO, Fe::ONE])
    }

    pub fn monomial(field: &Field, c: Fe, n: usize) -> Poly {
        let mut v = vec![Fe::ZERO; n + 1];
        v[n] = c;
        Poly::new(field, v)
    }

    /// `t - c`.
    pub fn linear(field: &Field, c: Fe) -> Poly {
        Poly::new(field, vec![field.neg(c), Fe::ONE])
    }

    /// Monic polynomial of degree `deg` whose lower coefficients are the base-`q`
    /// digits of `code`; enumerates monics in lexicographic order.
    pub fn monic_from_code(field: &Field, deg: usize, mut code: u64) -> Poly {
        let q = u64::from(field.order());
        let mut v = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            v.push(Fe((code % q) as u32));
            code /= q;
        }
        v.push(Fe::ONE);
        Poly::new(field, v)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [Fe::ONE]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = 0`; only for contexts where zero cannot occur or
    /// does not matter.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == Fe::ONE
    }

    fn same(&self, other: &Poly) {
        debug_assert!(
            self.field == other.field,
            "polynomials over different fields"
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same(other);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Poly::new(f, v)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.same(other);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| f.sub(self.coeff(i), other.coeff(i)))
            .collect();
        Poly::new(f, v)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: Fe) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut v = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, v)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiply by `t^n`.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Fe::ZERO; n];
        v.extend_from_slice(&self.coeffs);
        Poly::new(&self.field, v)
    }

    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.same(d);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let dd = d.deg();
        let inv = f.inv(d.lc());
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut q = vec![Fe::ZERO; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = f.mul(r[k], inv);
            if c.is_zero() {
                continue;
            }
            q[k - dd] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                r[k - dd + j] = f.sub(r[k - dd + j], f.mul(c, dj));
            }
        }
        r.truncate(dd);
        Ok((Poly::new(f, q), Poly::new(f, r)))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).expect("remainder by zero polynomial").1
    }

    /// Exact quotient; errors when `d` does not divide.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Internal(format!("{d:?} does not divide {self:?}")));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lc()))
    }

    /// Monic greatest common divisor (zero only if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·other = g` and `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = f.inv(r0.lc());
        (r0.scale(c), s0.scale(c), t0.scale(c))
    }

    /// Inverse modulo `m`, when coprime.
    pub fn inv_mod(&self, m: &Poly) -> Result<Poly> {
        let (g, s, _) = self.rem(m).ext_gcd(m);
        if !g.is_one() {
            return Err(Error::DivisionByZero);
        }
        Ok(s.rem(m))
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m)
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Poly::new(f, v)
    }

    /// Evaluate at a point of this field.
    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Evaluate at a point of an extension `ext` whose base is this field.
    pub fn eval_in(&self, ext: &Field, x: Fe) -> Fe {
        debug_assert!(ext.contains(&self.field));
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| ext.add(ext.mul(acc, x), c))
    }

    /// The same coefficients read in an extension field.
    pub fn embed(&self, ext: &Field) -> Poly {
        debug_assert!(ext.contains(&self.field));
        Poly::new(ext, self.coeffs.clone())
    }

    /// Coefficients read back in a subfield; fails if one is not a constant.
    pub fn descend(&self, sub: &Field) -> Result<Poly> {
        if let Some(c) = self.coeffs.iter().find(|c| c.0 >= sub.order()) {
            return Err(Error::Internal(format!(
                "coefficient {} not in {}",
                self.field.format(*c),
                sub.describe()
            )));
        }
        Ok(Poly::new(sub, self.coeffs.clone()))
    }

    /// `self(g)` for another polynomial `g`.
    pub fn compose(&self, g: &Poly) -> Poly {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Poly::zero(f), |acc, &c| {
            acc.mul(g).add(&Poly::constant(f, c))
        })
    }

    /// Coefficients reversed against degree `n`: `t^n · self(1/t)`.
    pub fn reversed(&self, n: usize) -> Poly {
        let mut v = vec![Fe::ZERO; n + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[n - i] = c;
        }
        Poly::new(&self.field, v)
    }

    /// Integer key with `(degree, code)` order matching lexicographic order
    /// from the top coefficient down.
    pub fn code(&self) -> u64 {
        let q = u64::from(self.field.order());
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, c| acc.saturating_mul(q).saturating_add(u64::from(c.0)))
    }

    /// Multiplicity of `p` as a factor of `self` (nonzero).
    pub fn multiplicity(&self, p: &Poly) -> (u32, Poly) {
        let mut n = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(p).expect("nonzero divisor");
            if !r.is_zero() || cur.is_zero() {
                return (n, cur);
            }
            cur = q;
            n += 1;
        }
    }

    pub fn format(&self, var: &str) -> String {
        format_coeffs(&self.field, &self.coeffs, var)
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic();
        let q = u64::from(self.field.order());
        let x = Poly::x(&self.field);
        // x^{q^k} mod f for k = 0..=n
        let mut frob = vec![x.rem(&f)];
        for k in 0..n {
            let next = frob[k].pow_mod(q, &f);
            frob.push(next);
        }
        if frob[n].sub(&x).rem(&f).is_zero() {
            crate::gf::prime_factors(n as u64).into_iter().all(|r| {
                let h = frob[n / r as usize].sub(&x);
                h.gcd(&f).is_one()
            })
        } else {
            false
        }
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

/// The lexicographically least monic irreducible of degree `d` over `field`.
pub fn least_irreducible(field: &Field, d: usize) -> Result<Poly> {
    let total = u64::from(field.order()).saturating_pow(d as u32);
    (0..total)
        .map(|code| Poly::monic_from_code(field, d, code))
        .find(Poly::is_irreducible)
        .ok_or_else(|| Error::Internal(format!("no irreducible of degree {d}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(field: &Field, c: &[u32]) -> Poly {
        Poly::new(field, c.iter().map(|&x| Fe(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let f5 = Field::prime(5).unwrap();
        let a = p(&f5, &[1, 0, 1]); // t^2+1 = (t+2)(t+3)
        let b = p(&f5, &[2, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, p(&f5, &[3, 1]));
        assert_eq!(a.gcd(&p(&f5, &[3, 1]).mul(&p(&f5, &[1, 1]))), p(&f5, &[3, 1]));
        let (g, s, t) = a.ext_gcd(&p(&f5, &[1, 1]));
        assert!(g.is_one());
        assert_eq!(s.mul(&a).add(&t.mul(&p(&f5, &[1, 1]))), g);
    }

    #[test]
    fn irreducibility() {
        let f3 = Field::prime(3).unwrap();
        assert!(p(&f3, &[1, 0, 1]).is_irreducible());
        assert!(!p(&f3, &[0, 0, 1]).is_irreducible());
        let f2 = Field::prime(2).unwrap();
        assert!(p(&f2, &[1, 1, 0, 1]).is_irreducible());
        assert!(!p(&f2, &[1, 0, 0, 0, 1]).is_irreducible());
        assert_eq!(least_irreducible(&f2, 2).unwrap(), p(&f2, &[1, 1, 1]));
    }

    #[test]
    fn ordering_is_top_down_lex() {
        let f2 = Field::prime(2).unwrap();
        let a = p(&f2, &[1, 1, 0, 1]);
        let b = p(&f2, &[1, 0, 1, 1]);
        assert!(a < b);
        assert!(a.code() < b.code());
        assert!(p(&f2, &[1, 1]) < a);
    }
}
