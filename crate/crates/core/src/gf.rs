//! Finite fields `F_p`, `F_{p^e}` and residue fields `k[T]/(π)`.
//!
//! Every field is a prime field or `base[T]/(modulus)` for a monic
//! irreducible modulus over `base`. Elements are stored as integer codes: the
//! coefficient vector over `base` read in base `|base|`, so digits over `F_p`
//! concatenate and the elements of every subfield in the tower keep their
//! codes inside the extension. Multiplication
//! goes through log/exp tables built once per field.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Default upper bound on the order of any field built at desk scale.
pub const DEFAULT_DESK_CAP: u32 = 1024;

/// Environment variable overriding [`DEFAULT_DESK_CAP`].
pub const CAP_ENV: &str = "IDELE_DESK_CAP";

/// Field-size cap, read once from `IDELE_DESK_CAP`.
pub fn desk_cap() -> u32 {
    static CAP: OnceLock<u32> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(CAP_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .filter(|&c: &u32| c >= 2)
            .unwrap_or(DEFAULT_DESK_CAP)
    })
}

pub(crate) fn check_cap(needed: u64) -> Result<()> {
    let cap = desk_cap();
    if needed > u64::from(cap) {
        Err(Error::CapExceeded { needed, cap })
    } else {
        Ok(())
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Element code inside a particular [`Field`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct FieldInner {
    p: u32,
    base: Option<Field>,
    modulus: Vec<Fe>,
    degree: u32,
    abs_degree: u32,
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Descriptor of a finite field; cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.order == other.0.order
                && self.0.modulus == other.0.modulus
                && self.0.base == other.0.base)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        check_cap(u64::from(p))?;
        let mut inner = FieldInner {
            p,
            base: None,
            modulus: Vec::new(),
            degree: 1,
            abs_degree: 1,
            order: p,
            exp: Vec::new(),
            log: Vec::new(),
        };
        let mul = |a: u32, b: u32| ((u64::from(a) * u64::from(b)) % u64::from(p)) as u32;
        build_tables(&mut inner, &mul)?;
        Ok(Field(Arc::new(inner)))
    }

    /// `F_{p^e}` with the lexicographically least monic irreducible modulus.
    pub fn new(p: u32, e: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::Precondition("extension degree must be >= 1".into()));
        }
        check_cap(u64::from(p).saturating_pow(e))?;
        let prime = Field::prime(p)?;
        if e == 1 {
            return Ok(prime);
        }
        let modulus = crate::polyser::least_irreducible(&prime, e as usize)?;
        Field::extension(&prime, modulus.coeffs().to_vec())
    }

    /// `base[T]/(modulus)`; the modulus must be monic and irreducible over `base`.
    ///
    /// Irreducibility is confirmed while building the tables: the quotient ring
    /// is a field exactly when it has an element of order `|base|^d - 1`.
    pub fn extension(base: &Field, modulus: Vec<Fe>) -> Result<Field> {
        let degree = modulus.len().saturating_sub(1) as u32;
        if degree == 0 || modulus.last() != Some(&Fe::ONE) {
            return Err(Error::NotIrreducible("modulus must be monic of degree >= 1".into()));
        }
        if degree == 1 {
            return Err(Error::Precondition(
                "degree-one extensions are represented by the base field itself".into(),
            ));
        }
        let qb = u64::from(base.order());
        check_cap(qb.saturating_pow(degree))?;
        let order = qb.pow(degree) as u32;
        let mut inner = FieldInner {
            p: base.p(),
            base: Some(base.clone()),
            modulus: modulus.clone(),
            degree,
            abs_degree: base.abs_degree() * degree,
            order,
            exp: Vec::new(),
            log: Vec::new(),
        };
        let b = base.clone();
        let d = degree as usize;
        let red = modulus.clone();
        let mul = move |x: u32, y: u32| {
            let xs = digits(x, qb as u32, d);
            let ys = digits(y, qb as u32, d);
            let mut prod = vec![Fe::ZERO; 2 * d - 1];
            for (i, &xi) in xs.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for (j, &yj) in ys.iter().enumerate() {
                    prod[i + j] = b.add(prod[i + j], b.mul(xi, yj));
                }
            }
            for k in (d..prod.len()).rev() {
                let c = prod[k];
                if c.is_zero() {
                    continue;
                }
                for (j, &mj) in red[..d].iter().enumerate() {
                    prod[k - d + j] = b.sub(prod[k - d + j], b.mul(c, mj));
                }
                prod[k] = Fe::ZERO;
            }
            undigits(&prod[..d], qb as u32)
        };
        build_tables(&mut inner, &mul).map_err(|_| {
            Error::NotIrreducible(format!("modulus {:?} over {}", modulus, base.describe()))
        })?;
        Ok(Field(Arc::new(inner)))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// Degree over the base field (1 for prime fields).
    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn abs_degree(&self) -> u32 {
        self.0.abs_degree
    }

    pub fn base(&self) -> Option<&Field> {
        self.0.base.as_ref()
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.base.is_none()
    }

    /// Monic modulus over the base, low degree first; empty for prime fields.
    pub fn modulus(&self) -> &[Fe] {
        &self.0.modulus
    }

    /// The order of the field this one is built over (itself for prime fields).
    pub fn base_order(&self) -> u32 {
        self.0.base.as_ref().map_or(self.0.p, |b| b.order())
    }

    /// Whether `sub` occurs in this field's tower, i.e. `sub`-codes are valid here.
    pub fn contains(&self, sub: &Field) -> bool {
        self == sub || self.base().is_some_and(|b| b.contains(sub))
    }

    pub fn describe(&self) -> String {
        match &self.0.base {
            None => format!("F_{}", self.0.p),
            Some(b) => format!(
                "{}[T]/({})",
                b.describe(),
                format_coeffs(b, &self.0.modulus, "T")
            ),
        }
    }

    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(i64::from(self.0.p)) as u32)
    }

    pub fn neg_one(&self) -> Fe {
        Fe(self.0.p - 1)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        if p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if self.0.abs_degree == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= p { s - p } else { s });
        }
        let (mut x, mut y, mut r, mut w) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            r += d * w;
            w *= p;
            x /= p;
            y /= p;
        }
        Fe(r)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let (mut x, mut r, mut w) = (a.0, 0u32, 1u32);
        while x > 0 {
            let d = x % p;
            r += ((p - d) % p) * w;
            w *= p;
            x /= p;
        }
        Fe(r)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        let n = self.0.order - 1;
        let s = self.0.log[a.0 as usize] + self.0.log[b.0 as usize];
        Fe(self.0.exp[(if s >= n { s - n } else { s }) as usize])
    }

    pub fn try_inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.0.order - 1;
        let l = self.0.log[a.0 as usize];
        Ok(Fe(self.0.exp[((n - l) % n) as usize]))
    }

    /// Inverse of a nonzero element.
    ///
    /// # Panics
    /// Panics on zero.
    pub fn inv(&self, a: Fe) -> Fe {
        self.try_inv(a).expect("inverse of zero")
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.try_inv(b)?))
    }

    /// `a^e` for any integer `e`; `0^0 = 1`, negative powers of zero panic.
    pub fn pow(&self, a: Fe, e: i64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            assert!(e > 0, "negative power of zero");
            return Fe::ZERO;
        }
        let n = i128::from(self.0.order - 1);
        let l = i128::from(self.0.log[a.0 as usize]);
        Fe(self.0.exp[((l * i128::from(e)).rem_euclid(n)) as usize])
    }

    /// The cached primitive element (least code of multiplicative order `q - 1`).
    pub fn generator(&self) -> Fe {
        Fe(self.0.exp[1 % self.0.exp.len()])
    }

    /// `g^k` for the cached generator.
    pub fn gen_pow(&self, k: i64) -> Fe {
        let n = i64::from(self.0.order - 1);
        Fe(self.0.exp[k.rem_euclid(n) as usize])
    }

    /// Discrete logarithm to the cached generator.
    pub fn log(&self, a: Fe) -> Option<u32> {
        (!a.is_zero()).then(|| self.0.log[a.0 as usize])
    }

    pub fn is_square(&self, a: Fe) -> bool {
        a.is_zero() || self.0.p == 2 || self.0.log[a.0 as usize].is_multiple_of(2)
    }

    /// A square root, if one exists.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return Some(Fe::ZERO);
        }
        let l = self.0.log[a.0 as usize];
        if self.0.p == 2 {
            // squaring is a bijection
            let n = self.0.order - 1;
            let half = if l.is_multiple_of(2) { l / 2 } else { (l + n) / 2 };
            return Some(Fe(self.0.exp[half as usize]));
        }
        l.is_multiple_of(2).then(|| Fe(self.0.exp[(l / 2) as usize]))
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Fe) -> u64 {
        let n = u64::from(self.0.order - 1);
        let l = u64::from(self.0.log[a.0 as usize]);
        n / gcd_u64(n, l)
    }

    /// `a^{|base|}`, the relative Frobenius.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, i64::from(self.base_order()))
    }

    /// Relative norm to the base field as the product of Frobenius conjugates
    /// `a · a^q · … · a^{q^{d-1}}`. For prime fields this is the identity.
    pub fn norm(&self, a: Fe) -> Fe {
        let mut acc = Fe::ONE;
        let mut conj = a;
        for _ in 0..self.0.degree {
            acc = self.mul(acc, conj);
            conj = self.frobenius(conj);
        }
        acc
    }

    /// Relative norm via the exponent `(q^d - 1)/(q - 1)`.
    pub fn norm_by_exponent(&self, a: Fe) -> Fe {
        if a.is_zero() {
            return Fe::ZERO;
        }
        let q = i64::from(self.base_order());
        let e = (i64::from(self.0.order) - 1) / (q - 1);
        self.pow(a, e)
    }

    /// All elements, in code order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.order).map(Fe)
    }

    /// All nonzero elements in generator-power order `g^0, g^1, …`.
    pub fn units_by_power(&self) -> impl Iterator<Item = Fe> + '_ {
        self.0.exp.iter().map(|&c| Fe(c))
    }

    /// Coefficient vector of `a` over the base field.
    pub fn to_base_coeffs(&self, a: Fe) -> Vec<Fe> {
        digits(a.0, self.base_order(), self.0.degree as usize)
    }

    pub fn from_base_coeffs(&self, coeffs: &[Fe]) -> Fe {
        Fe(undigits(coeffs, self.base_order()))
    }

    /// Whether `a` lies in the base field embedded as constants.
    pub fn in_base(&self, a: Fe) -> bool {
        a.0 < self.base_order()
    }

    /// Render an element: integers for the prime subfield, `g^k` otherwise.
    pub fn format(&self, a: Fe) -> String {
        if a.0 < self.0.p {
            a.0.to_string()
        } else {
            format!("g^{}", self.0.log[a.0 as usize])
        }
    }

    /// Parse an integer literal or `g^k`.
    pub fn parse(&self, s: &str) -> Result<Fe> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("g^") {
            let k: i64 = rest
                .trim()
                .trim_start_matches('(')
                .trim_end_matches(')')
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator power `{s}`")))?;
            return Ok(self.gen_pow(k));
        }
        if s == "g" {
            return Ok(self.generator());
        }
        let n: i64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad field literal `{s}`")))?;
        Ok(self.from_int(n))
    }

    pub fn elem(&self, a: Fe) -> GFElem {
        GFElem::new(self.clone(), a)
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn digits(mut x: u32, base: u32, len: usize) -> Vec<Fe> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(Fe(x % base));
        x /= base;
    }
    out
}

fn undigits(ds: &[Fe], base: u32) -> u32 {
    ds.iter().rev().fold(0u32, |acc, d| acc * base + d.0)
}

fn build_tables(inner: &mut FieldInner, mul: &dyn Fn(u32, u32) -> u32) -> Result<()> {
    let q = inner.order;
    let n = u64::from(q - 1);
    let primes = prime_factors(n);
    let pow = |a: u32, mut e: u64| {
        let mut acc = 1u32;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let gen = (1..q)
        .find(|&g| pow(g, n) == 1 && primes.iter().all(|&r| pow(g, n / r) != 1))
        .ok_or_else(|| Error::NotIrreducible("no primitive element".into()))?;
    let mut exp = Vec::with_capacity(n as usize);
    let mut log = vec![0u32; q as usize];
    let mut cur = 1u32;
    for i in 0..n as u32 {
        exp.push(cur);
        log[cur as usize] = i;
        cur = mul(cur, gen);
    }
    inner.exp = exp;
    inner.log = log;
    Ok(())
}

pub(crate) fn format_coeffs(field: &Field, coeffs: &[Fe], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let cs = field.format(c);
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (i, c == Fe::ONE) {
            (0, _) => cs,
            (_, true) => mono,
            _ => format!("{cs}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// An element together with its field descriptor.
#[derive(Clone, PartialEq, Eq)]
pub struct GFElem {
    pub field: Field,
    pub value: Fe,
}

impl GFElem {
    pub fn new(field: Field, value: Fe) -> Self {
        GFElem { field, value }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value == Fe::ONE
    }

    fn same(&self, other: &GFElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!(
                "{} vs {}",
                self.field.describe(),
                other.field.describe()
            )))
        }
    }

    pub fn mul(&self, other: &GFElem) -> Result<GFElem> {
        self.same(other)?;
        Ok(self.field.elem(self.field.mul(self.value, other.value)))
    }

    pub fn add(&self, other: &GFElem) -> Result<GFElem> {
        self.same(other)?;
        Ok(self.field.elem(self.field.add(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<GFElem> {
        Ok(self.field.elem(self.field.try_inv(self.value)?))
    }

    pub fn pow(&self, e: i64) -> GFElem {
        self.field.elem(self.field.pow(self.value, e))
    }
}

impl fmt::Display for GFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

impl fmt::Debug for GFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.field.format(self.value), self.field.describe())
    }
}

/// `F_{p^e}` with the lexicographically least modulus.
pub fn gf_make_field(p: u32, e: u32) -> Result<Field> {
    Field::new(p, e)
}

fn base_of(a: &GFElem) -> Result<Field> {
    Ok(a.field.base().cloned().unwrap_or_else(|| a.field.clone()))
}

/// `N_{k(x)/k}(a)` where `k` is the base of `a`'s field.
pub fn gf_norm(a: &GFElem) -> Result<GFElem> {
    let k = base_of(a)?;
    let n = a.field.norm(a.value);
    if !a.field.in_base(n) {
        return Err(Error::Internal(format!("norm {n:?} left the base field")));
    }
    Ok(k.elem(n))
}

/// The kernel `N_x` of the norm on `kx^*`, in generator-power order.
pub fn gf_norm_one_subgroup(kx: &Field) -> Result<Vec<GFElem>> {
    check_cap(u64::from(kx.order()))?;
    Ok(kx
        .units_by_power()
        .filter(|&a| kx.norm(a) == Fe::ONE)
        .map(|a| kx.elem(a))
        .collect())
}

/// Some `u` in `kx^*` with `N(u) = c`: `g^j` for the least `j` with `N(g)^j = c`.
pub fn gf_norm_preimage(c: &GFElem, kx: &Field) -> Result<GFElem> {
    let k = kx.base().cloned().unwrap_or_else(|| kx.clone());
    if c.field != k {
        return Err(Error::FieldMismatch(format!(
            "{} is not the base of {}",
            c.field.describe(),
            kx.describe()
        )));
    }
    if c.is_zero() {
        return Err(Error::Precondition("norm preimage of zero".into()));
    }
    let g = kx.generator();
    let ng = kx.norm(g);
    let mut acc = Fe::ONE;
    for j in 0..k.order() - 1 {
        if acc == c.value {
            return Ok(kx.elem(kx.gen_pow(i64::from(j))));
        }
        acc = k.mul(acc, ng);
    }
    Err(Error::Internal("norm of a generator does not generate k*".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_moduli() {
        let f4 = gf_make_field(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[Fe(1), Fe(1), Fe(1)]);
        let f5 = gf_make_field(5, 1).unwrap();
        assert!(f5.is_prime_field());
        assert_eq!(f5.order(), 5);
        let f9 = gf_make_field(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[Fe(1), Fe(0), Fe(1)]);
    }

    #[test]
    fn make_field_errors() {
        assert_eq!(gf_make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            gf_make_field(2, 11),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn f9_norm_of_i_plus_one() {
        let f9 = gf_make_field(3, 2).unwrap();
        let a = f9.from_base_coeffs(&[Fe(1), Fe(1)]);
        let n = gf_norm(&f9.elem(a)).unwrap();
        assert_eq!(n.value, Fe(2));
        assert_eq!(f9.norm_by_exponent(a), Fe(2));
    }

    #[test]
    fn f4_units_have_norm_one() {
        let f4 = gf_make_field(2, 2).unwrap();
        for a in f4.units_by_power() {
            assert_eq!(f4.norm(a), Fe::ONE);
        }
        assert_eq!(gf_norm_one_subgroup(&f4).unwrap().len(), 3);
    }

    #[test]
    fn norm_one_subgroup_sizes() {
        let f5 = gf_make_field(5, 1).unwrap();
        let n1 = gf_norm_one_subgroup(&f5).unwrap();
        assert_eq!(n1.len(), 1);
        assert!(n1[0].is_one());
        assert_eq!(gf_norm_one_subgroup(&gf_make_field(3, 2).unwrap()).unwrap().len(), 4);
    }

    #[test]
    fn norm_preimage_cases() {
        let f3 = gf_make_field(3, 1).unwrap();
        let f9 = gf_make_field(3, 2).unwrap();
        let one = gf_norm_preimage(&f3.elem(Fe(1)), &f9).unwrap();
        assert!(one.is_one());
        let u = gf_norm_preimage(&f3.elem(Fe(2)), &f9).unwrap();
        assert_eq!(gf_norm(&u).unwrap().value, Fe(2));
        let f5 = gf_make_field(5, 1).unwrap();
        let u = gf_norm_preimage(&f5.elem(Fe(3)), &f5).unwrap();
        assert_eq!(u.value, Fe(3));
        assert!(gf_norm_preimage(&f3.elem(Fe(0)), &f9).is_err());
    }

    #[test]
    fn field_axioms_small() {
        for (p, e) in [(2, 3), (3, 2), (5, 1), (7, 2)] {
            let f = gf_make_field(p, e).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a)), Fe::ONE);
                    assert_eq!(f.pow(a, i64::from(f.order()) - 1), Fe::ONE);
                }
                for b in f.elements().step_by(3) {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                }
            }
        }
    }

    #[test]
    fn literals_round_trip() {
        let f9 = gf_make_field(3, 2).unwrap();
        for a in f9.elements() {
            assert_eq!(f9.parse(&f9.format(a)).unwrap(), a);
        }
        assert_eq!(f9.parse("g^1").unwrap(), f9.generator());
        assert_eq!(f9.parse("-1").unwrap(), Fe(2));
    }

    #[test]
    fn sqrt_in_odd_and_even_characteristic() {
        for (p, e) in [(5, 1), (2, 3), (3, 2)] {
            let f = gf_make_field(p, e).unwrap();
            for a in f.elements() {
                if let Some(r) = f.sqrt(a) {
                    assert_eq!(f.mul(r, r), a);
                }
            }
        }
    }
}
