use std::collections::BTreeMap;
use std::fmt;

use crate::curve::Place;

/// A finite formal sum `Σ n_x·x` of places; zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Divisor {
    terms: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn new() -> Divisor {
        Divisor::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (Place, i64)>>(terms: I) -> Divisor {
        let mut d = Divisor::new();
        for (p, n) in terms {
            d.add_term(&p, n);
        }
        d
    }

    /// The prime divisor `1·x`.
    pub fn point(place: &Place) -> Divisor {
        Divisor::from_terms([(place.clone(), 1)])
    }

    pub fn add_term(&mut self, place: &Place, n: i64) {
        if n == 0 {
            return;
        }
        let e = self.terms.entry(place.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(place);
        }
    }

    pub fn get(&self, place: &Place) -> i64 {
        self.terms.get(place).copied().unwrap_or(0)
    }

    /// `Σ n_x·deg(x)`.
    pub fn degree(&self) -> i64 {
        self.terms
            .iter()
            .map(|(p, n)| n * i64::from(p.degree()))
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.terms.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.terms.iter().map(|(p, &n)| (p, n))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest degree of a place in the support (0 for the zero divisor).
    pub fn max_place_degree(&self) -> u32 {
        self.terms.keys().map(Place::degree).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, n) in other.iter() {
            out.add_term(p, n);
        }
        out
    }

    pub fn neg(&self) -> Divisor {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Divisor {
        Divisor::from_terms(self.terms.iter().map(|(p, &n)| (p.clone(), n * k)))
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&n| n > 0)
    }

    /// `self >= other` coefficientwise.
    pub fn dominates(&self, other: &Divisor) -> bool {
        self.sub(other).is_effective()
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, &n)) in self.terms.iter().enumerate() {
            let sign = if n < 0 { "-" } else { "+" };
            if i == 0 {
                if n < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if n.abs() != 1 {
                write!(f, "{}*", n.abs())?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
