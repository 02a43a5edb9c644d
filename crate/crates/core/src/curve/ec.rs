//! Chord-tangent group law on `y^2 = x^3 + ax + b`, over any field whose
//! tower contains the coefficients.

use serde::Serialize;

use crate::gf::{Fe, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EcPoint {
    Infinity,
    Affine(Fe, Fe),
}

impl EcPoint {
    pub fn is_infinity(self) -> bool {
        self == EcPoint::Infinity
    }

    pub fn format(self, field: &Field) -> String {
        match self {
            EcPoint::Infinity => "O".into(),
            EcPoint::Affine(x, y) => format!("({}, {})", field.format(x), field.format(y)),
        }
    }
}

/// Curve coefficients bundled with the field the points live in.
#[derive(Clone, Debug)]
pub struct EcGroup {
    pub field: Field,
    pub a: Fe,
    pub b: Fe,
}

impl EcGroup {
    pub fn new(field: &Field, a: Fe, b: Fe) -> EcGroup {
        EcGroup {
            field: field.clone(),
            a,
            b,
        }
    }

    /// `x^3 + ax + b`.
    pub fn rhs(&self, x: Fe) -> Fe {
        let f = &self.field;
        let x3 = f.mul(f.mul(x, x), x);
        f.add(f.add(x3, f.mul(self.a, x)), self.b)
    }

    pub fn contains(&self, p: EcPoint) -> bool {
        match p {
            EcPoint::Infinity => true,
            EcPoint::Affine(x, y) => self.field.mul(y, y) == self.rhs(x),
        }
    }

    pub fn neg(&self, p: EcPoint) -> EcPoint {
        match p {
            EcPoint::Infinity => p,
            EcPoint::Affine(x, y) => EcPoint::Affine(x, self.field.neg(y)),
        }
    }

    pub fn add(&self, p: EcPoint, q: EcPoint) -> EcPoint {
        let f = &self.field;
        let (x1, y1, x2, y2) = match (p, q) {
            (EcPoint::Infinity, _) => return q,
            (_, EcPoint::Infinity) => return p,
            (EcPoint::Affine(x1, y1), EcPoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if f.add(y1, y2).is_zero() {
                return EcPoint::Infinity;
            }
            let three_x2 = f.mul(f.from_int(3), f.mul(x1, x1));
            f.mul(f.add(three_x2, self.a), f.inv(f.add(y1, y1)))
        } else {
            f.mul(f.sub(y2, y1), f.inv(f.sub(x2, x1)))
        };
        let x3 = f.sub(f.sub(f.mul(lambda, lambda), x1), x2);
        let y3 = f.sub(f.mul(lambda, f.sub(x1, x3)), y1);
        EcPoint::Affine(x3, y3)
    }

    pub fn mul(&self, p: EcPoint, n: i64) -> EcPoint {
        let mut base = if n < 0 { self.neg(p) } else { p };
        let mut k = n.unsigned_abs();
        let mut acc = EcPoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn order_of(&self, p: EcPoint) -> u64 {
        let mut acc = p;
        let mut n = 1;
        while !acc.is_infinity() {
            acc = self.add(acc, p);
            n += 1;
        }
        n
    }

    /// All points with coordinates in `self.field`, `O` first then by codes.
    pub fn points(&self) -> Vec<EcPoint> {
        let f = &self.field;
        let mut out = vec![EcPoint::Infinity];
        for x in f.elements() {
            let r = self.rhs(x);
            if let Some(y) = f.sqrt(r) {
                out.push(EcPoint::Affine(x, y));
                if !y.is_zero() {
                    out.push(EcPoint::Affine(x, f.neg(y)));
                }
            }
        }
        out.sort();
        out
    }
}

/// `E(F_q) ≅ Z/m × Z/n` with `m | n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupStructure {
    pub m: u64,
    pub n: u64,
    pub order: u64,
}

impl GroupStructure {
    pub fn invariant_factors(&self) -> Vec<u64> {
        if self.m == 1 {
            vec![self.n]
        } else {
            vec![self.m, self.n]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(a: u32, b: u32) -> EcGroup {
        EcGroup::new(&Field::prime(5).unwrap(), Fe(a), Fe(b))
    }

    #[test]
    fn point_counts() {
        assert_eq!(group(1, 1).points().len(), 9);
        let g = group(1, 0);
        let pts = g.points();
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().all(|&p| g.order_of(p) <= 2));
    }

    #[test]
    fn group_axioms_exhaustive() {
        for (a, b) in [(1, 1), (1, 0), (2, 1)] {
            let g = group(a, b);
            let pts = g.points();
            for &p in &pts {
                assert_eq!(g.add(p, EcPoint::Infinity), p);
                assert!(g.add(p, g.neg(p)).is_infinity());
                for &q in &pts {
                    assert_eq!(g.add(p, q), g.add(q, p));
                    for &r in &pts {
                        assert_eq!(g.add(g.add(p, q), r), g.add(p, g.add(q, r)));
                    }
                }
            }
        }
    }
}
