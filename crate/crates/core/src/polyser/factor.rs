//! Factorization over `F_q`: squarefree, distinct-degree, equal-degree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Poly;
use crate::error::{Error, Result};
use crate::gf::{check_cap, Fe, Field};

/// Seed used by [`poly_factor`] when the caller does not supply one.
pub const DEFAULT_SPLIT_SEED: u64 = 0x5eed_f00d;

/// `f = lc · ∏ factor^mult` with monic irreducible factors in sorted order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub lc: Fe,
    pub factors: Vec<(Poly, u32)>,
    /// Seed of the equal-degree splitting stream.
    pub seed: u64,
}

impl Factorization {
    pub fn expand(&self, field: &Field) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(field, self.lc), |acc, (p, m)| {
                acc.mul(&p.pow(u64::from(*m)))
            })
    }
}

pub fn poly_factor(f: &Poly) -> Result<Factorization> {
    poly_factor_seeded(f, DEFAULT_SPLIT_SEED)
}

pub fn poly_factor_seeded(f: &Poly, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lc = f.lc();
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (sq, mult) in squarefree(&f.monic()) {
        for (g, d) in distinct_degree(&sq) {
            for h in equal_degree(&g, d, &mut rng) {
                out.push((h, mult));
            }
        }
    }
    out.sort();
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (p, m) in out {
        match merged.last_mut() {
            Some((q, n)) if *q == p => *n += m,
            _ => merged.push((p, m)),
        }
    }
    Ok(Factorization {
        lc,
        factors: merged,
        seed,
    })
}

/// Squarefree decomposition of a monic polynomial: `(part, multiplicity)`.
pub fn squarefree(f: &Poly) -> Vec<(Poly, u32)> {
    let field = f.field().clone();
    let p = field.p();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = f.derivative();
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y).expect("gcd divides");
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w).expect("gcd divides");
    }
    if !c.is_one() {
        for (g, m) in squarefree(&pth_root(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

fn pth_root(c: &Poly) -> Poly {
    let field = c.field();
    let p = field.p() as usize;
    // a^{1/p} = a^{q/p}
    let e = i64::from(field.order() / field.p());
    let v = c
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&a| field.pow(a, e))
        .collect();
    Poly::new(field, v)
}

/// Distinct-degree factorization of a monic squarefree polynomial.
pub fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field().clone();
    let q = u64::from(field.order());
    let x = Poly::x(&field);
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut out = Vec::new();
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(q, &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if rest.deg() > 0 {
        let n = rest.deg();
        out.push((rest, n));
    }
    out
}

/// Split a product of distinct monic irreducibles of degree `d`.
pub fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.deg();
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field().clone();
    let q = u64::from(field.order());
    loop {
        let a = Poly::new(
            &field,
            (0..n).map(|_| Fe(rng.gen_range(0..field.order()))).collect(),
        );
        if a.deg() == 0 {
            continue;
        }
        let b = if field.p() == 2 {
            // absolute trace Σ a^{2^i}, i < e·d
            let steps = field.abs_degree() as usize * d;
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..steps {
                t = t.mul_mod(&t, f);
                acc = acc.add(&t);
            }
            acc
        } else {
            // a^{(q^d - 1)/2} = (∏_{i<d} a^{q^i})^{(q-1)/2}
            let mut conj = a.rem(f);
            let mut prod = Poly::one(&field);
            for _ in 0..d {
                prod = prod.mul_mod(&conj, f);
                conj = conj.pow_mod(q, f);
            }
            prod.pow_mod((q - 1) / 2, f).sub(&Poly::one(&field))
        };
        let g = b.gcd(f);
        if g.deg() > 0 && g.deg() < n {
            let h = f.div_exact(&g).expect("gcd divides");
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

/// All monic irreducibles of degree `1..=bound`, by degree then lexicographically.
pub fn irreducibles_up_to(field: &Field, bound: usize) -> Result<Vec<Poly>> {
    if bound == 0 {
        return Err(Error::Precondition("degree bound must be >= 1".into()));
    }
    check_cap(u64::from(field.order()).saturating_pow(bound as u32))?;
    let mut out = Vec::new();
    for d in 1..=bound {
        let total = u64::from(field.order()).pow(d as u32);
        let found: Vec<Poly> = (0..total)
            .map(|c| Poly::monic_from_code(field, d, c))
            .filter(Poly::is_irreducible)
            .collect();
        if found.len() as u64 != necklace_count(u64::from(field.order()), d as u64) {
            return Err(Error::Internal(format!(
                "irreducible count mismatch in degree {d}"
            )));
        }
        out.extend(found);
    }
    Ok(out)
}

fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of monic irreducibles of degree `d` over `F_q`: `(1/d) Σ_{e|d} μ(e) q^{d/e}`.
pub fn necklace_count(q: u64, d: u64) -> u64 {
    let s: i64 = (1..=d)
        .filter(|e| d.is_multiple_of(*e))
        .map(|e| mobius(e) * (q.pow((d / e) as u32) as i64))
        .sum();
    (s / d as i64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(field: &Field, c: &[u32]) -> Poly {
        Poly::new(field, c.iter().map(|&x| Fe(x)).collect())
    }

    #[test]
    fn factor_examples() {
        let f5 = Field::prime(5).unwrap();
        let fa = poly_factor(&p(&f5, &[1, 0, 1])).unwrap();
        assert_eq!(fa.lc, Fe::ONE);
        assert_eq!(
            fa.factors,
            vec![(p(&f5, &[2, 1]), 1), (p(&f5, &[3, 1]), 1)]
        );
        let f3 = Field::prime(3).unwrap();
        let fa = poly_factor(&p(&f3, &[0, 0, 1])).unwrap();
        assert_eq!(fa.factors, vec![(p(&f3, &[0, 1]), 2)]);
        let fa = poly_factor(&p(&f3, &[1, 0, 1])).unwrap();
        assert_eq!(fa.factors, vec![(p(&f3, &[1, 0, 1]), 1)]);
        assert_eq!(poly_factor(&Poly::zero(&f3)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn pth_powers_factor() {
        // (t+1)^3 (t^2+1)^2 over F_3 has a p-th power part
        let f3 = Field::prime(3).unwrap();
        let a = p(&f3, &[1, 1]).pow(3).mul(&p(&f3, &[1, 0, 1]).pow(2)).scale(Fe(2));
        let fa = poly_factor(&a).unwrap();
        assert_eq!(fa.lc, Fe(2));
        assert_eq!(
            fa.factors,
            vec![(p(&f3, &[1, 1]), 3), (p(&f3, &[1, 0, 1]), 2)]
        );
        assert_eq!(fa.expand(&f3), a);
    }

    #[test]
    fn irreducible_lists() {
        let f2 = Field::prime(2).unwrap();
        let l = irreducibles_up_to(&f2, 2).unwrap();
        assert_eq!(l, vec![p(&f2, &[0, 1]), p(&f2, &[1, 1]), p(&f2, &[1, 1, 1])]);
        let l3 = irreducibles_up_to(&f2, 3).unwrap();
        assert_eq!(&l3[3..], &[p(&f2, &[1, 1, 0, 1]), p(&f2, &[1, 0, 1, 1])]);
        let f3 = Field::prime(3).unwrap();
        assert_eq!(irreducibles_up_to(&f3, 1).unwrap().len(), 3);
        assert_eq!(necklace_count(2, 4), 3);
        assert_eq!(necklace_count(9, 3), 240);
    }

    #[test]
    fn factor_over_extension_field() {
        let f4 = crate::gf::gf_make_field(2, 2).unwrap();
        let f9 = crate::gf::gf_make_field(3, 2).unwrap();
        for field in [f4, f9] {
            let q = u64::from(field.order());
            for code in 0..q.pow(3) {
                let f = Poly::monic_from_code(&field, 3, code).scale(field.generator());
                let fa = poly_factor_seeded(&f, code).unwrap();
                assert_eq!(fa.expand(&field), f);
                assert!(fa.factors.iter().all(|(g, _)| g.is_monic() && g.is_irreducible()));
            }
        }
    }
}
