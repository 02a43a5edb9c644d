//! The tame symbol at a place, the global pairing on ideles, Weil
//! reciprocity and the symbol identities.

use std::collections::BTreeSet;

use rand::Rng;
use serde_json::{json, Value};

use crate::curve::Place;
use crate::error::{Error, Result};
use crate::funcfield::{Divisor, FuncElem};
use crate::gf::{Fe, Field};
use crate::idele::Idele;
use crate::polyser::LaurentJet;
use crate::sample;
use crate::verdict::{Check, CheckStatus};

/// `k` as seen from a place: the residue field itself when rational,
/// otherwise its base.
fn base_of(x: &Place) -> &Field {
    let l = x.residue_field();
    if x.is_rational() {
        l
    } else {
        l.base().expect("non-rational residue field is an extension")
    }
}

/// `⟨a, b⟩_x = (-1)^{deg(x)·m·n} · N_{k(x)/k}(c^n / d^m)` for
/// `a = c·t^m(1 + …)` and `b = d·t^n(1 + …)`.
pub fn local_symbol(a: &LaurentJet, b: &LaurentJet) -> Result<Fe> {
    if a.place() != b.place() {
        return Err(Error::PlaceMismatch(
            a.place().to_string(),
            b.place().to_string(),
        ));
    }
    let x = a.place();
    let l = x.residue_field();
    let (m, n) = (a.valuation(), b.valuation());
    let inner = l.div(l.pow(a.leading(), n), l.pow(b.leading(), m))?;
    let norm = x.norm(inner);
    let odd = (i64::from(x.degree()) * m * n).rem_euclid(2) == 1;
    Ok(if odd { base_of(x).neg(norm) } else { norm })
}

/// The value of a global pairing together with its local factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingTable {
    pub field: Field,
    pub window: u32,
    pub entries: Vec<(Place, Fe)>,
    pub value: Fe,
}

impl PairingTable {
    pub fn is_one(&self) -> bool {
        self.value == Fe::ONE
    }

    pub fn to_json(&self) -> Value {
        let k = &self.field;
        let rows: Vec<Value> = self
            .entries
            .iter()
            .map(|(x, s)| json!({"place": x.to_string(), "symbol": k.format(*s)}))
            .collect();
        json!({"value": k.format(self.value), "window": self.window, "table": rows})
    }
}

/// `∏_x ⟨α_x, β_x⟩_x` over the places where either side has a nonzero
/// valuation or a local correction; all other places contribute 1.
///
/// Refuses with [`Error::WindowEscape`] when that set leaves either window.
pub fn global_pairing(alpha: &Idele, beta: &Idele) -> Result<PairingTable> {
    if alpha.curve() != beta.curve() {
        return Err(Error::Precondition("ideles on different curves".into()));
    }
    let window = alpha.window().min(beta.window());
    let mut places: BTreeSet<Place> = alpha.support()?;
    places.extend(beta.support()?);
    for x in &places {
        if x.degree() > window {
            return Err(Error::WindowEscape {
                place: x.to_string(),
                degree: x.degree(),
                window,
            });
        }
    }
    let k = alpha.field().clone();
    let mut value = Fe::ONE;
    let mut entries = Vec::with_capacity(places.len());
    for x in places {
        let s = local_symbol(&alpha.component(&x, 1)?, &beta.component(&x, 1)?)?;
        value = k.mul(value, s);
        entries.push((x, s));
    }
    Ok(PairingTable {
        field: k,
        window,
        entries,
        value,
    })
}

pub fn pairing(alpha: &Idele, beta: &Idele) -> Result<Fe> {
    Ok(global_pairing(alpha, beta)?.value)
}

/// The product of all local symbols of two global functions; Weil
/// reciprocity says it is 1.
pub fn weil_check(f: &FuncElem, g: &FuncElem) -> Result<PairingTable> {
    let df = crate::funcfield::divisor_of(f)?;
    let dg = crate::funcfield::divisor_of(g)?;
    let window = df.max_place_degree().max(dg.max_place_degree()).max(1);
    global_pairing(&Idele::diag(f, window)?, &Idele::diag(g, window)?)
}

fn value_check(name: &str, k: &Field, lhs: Fe, rhs: Fe) -> Check {
    Check::new(
        name,
        CheckStatus::from_bool(lhs == rhs),
        json!({"lhs": k.format(lhs), "rhs": k.format(rhs)}),
    )
}

/// The seven symbol identities on one triple; the Steinberg relation is
/// skipped when `1 - α` is not an idele within the window, and isotropy when
/// `α` is not in `I^1`.
pub fn axiom_suite(alpha: &Idele, beta: &Idele, gamma: &Idele) -> Result<Vec<Check>> {
    let k = alpha.field().clone();
    let ab = pairing(alpha, beta)?;
    let ag = pairing(alpha, gamma)?;
    let bg = pairing(beta, gamma)?;
    let ba = pairing(beta, alpha)?;
    let aa = pairing(alpha, alpha)?;
    let mut out = vec![
        value_check(
            "left_bimultiplicative",
            &k,
            pairing(&alpha.mul(beta)?, gamma)?,
            k.mul(ag, bg),
        ),
        value_check(
            "right_bimultiplicative",
            &k,
            pairing(alpha, &beta.mul(gamma)?)?,
            k.mul(ab, ag),
        ),
        value_check("antisymmetry", &k, k.mul(ab, ba), Fe::ONE),
        value_check("alpha_minus_alpha", &k, pairing(alpha, &alpha.neg())?, Fe::ONE),
        value_check(
            "alpha_alpha_is_alpha_minus_one",
            &k,
            aa,
            pairing(alpha, &Idele::constant(alpha.curve(), k.neg_one(), alpha.window())?)?,
        ),
    ];
    out.push(match alpha.one_minus() {
        None => Check::skipped("steinberg", "1 - alpha is not an idele at this precision"),
        Some(om) => match pairing(alpha, &om) {
            Ok(v) => value_check("steinberg", &k, v, Fe::ONE),
            Err(Error::WindowEscape { place, .. }) => {
                Check::skipped("steinberg", format!("1 - alpha has support at {place}"))
            }
            Err(Error::CapExceeded { needed, .. }) => Check::skipped(
                "steinberg",
                format!("1 - alpha has support at a place with residue field of order {needed}"),
            ),
            Err(e) => return Err(e),
        },
    });
    out.push(if alpha.in_i1()? {
        value_check("isotropy_on_i1", &k, aa, Fe::ONE)
    } else {
        Check::skipped("isotropy_on_i1", "alpha is not in I1")
    });
    Ok(out)
}

/// `⟨c, β⟩ = c^{deg D(β)}` and `⟨β, c⟩ = c^{-deg D(β)}`.
pub fn constant_pairing_check(beta: &Idele, c: Fe) -> Result<Check> {
    let k = beta.field().clone();
    let cst = Idele::constant(beta.curve(), c, beta.window())?;
    let deg = beta.degree()?;
    let left = pairing(&cst, beta)?;
    let right = pairing(beta, &cst)?;
    let ok = left == k.pow(c, deg) && right == k.pow(c, -deg);
    Ok(Check::new(
        "constant_pairing",
        CheckStatus::from_bool(ok),
        json!({"c": k.format(c), "degree": deg, "left": k.format(left), "right": k.format(right)}),
    ))
}

/// `⟨αu, βv⟩ = ⟨α, β⟩` for sampled `u, v` congruent to 1 modulo
/// `m̂^{n_x + 1}` on `supp D ∪ supp D(α) ∪ supp D(β)` and arbitrary units at
/// a few other places of the window.
pub fn local_constancy_check<R: Rng>(
    alpha: &Idele,
    beta: &Idele,
    d: &Divisor,
    trials: usize,
    rng: &mut R,
) -> Result<Check> {
    if !d.is_effective() && !d.is_zero() {
        return Err(Error::Precondition(format!("{d} is not effective")));
    }
    let window = alpha.window().min(beta.window());
    let base = global_pairing(alpha, beta)?;
    let reduced = pairing(&alpha.bar_reduce()?, &beta.bar_reduce()?)?;
    if reduced != base.value {
        return Ok(Check::new(
            "local_constancy",
            CheckStatus::Fail,
            json!({"reason": "pairing changed under reduction to precision 1"}),
        ));
    }
    let mut guarded: BTreeSet<Place> = alpha.support()?;
    guarded.extend(beta.support()?);
    guarded.extend(d.support().cloned());
    let free: Vec<Place> = alpha
        .curve()
        .places_up_to(window)?
        .into_iter()
        .filter(|x| !guarded.contains(x))
        .collect();
    let k = alpha.field();
    for trial in 0..trials {
        let mut sides = Vec::new();
        for _ in 0..2 {
            let mut jets = Vec::new();
            for x in &guarded {
                let depth = d.get(x).max(0) as usize + 1;
                jets.push(sample::principal_unit(rng, x, depth));
            }
            if !free.is_empty() {
                for _ in 0..rng.gen_range(0..=2usize) {
                    let x = &free[rng.gen_range(0..free.len())];
                    if jets.iter().all(|j| j.place() != x) {
                        let prec = rng.gen_range(1..=3);
                        jets.push(sample::unit_jet(rng, x, prec));
                    }
                }
            }
            sides.push(Idele::from_jets(alpha.curve(), jets, window)?);
        }
        let got = pairing(&alpha.mul(&sides[0])?, &beta.mul(&sides[1])?)?;
        if got != base.value {
            return Ok(Check::new(
                "local_constancy",
                CheckStatus::Fail,
                json!({
                    "trial": trial,
                    "u": sides[0].to_json(),
                    "v": sides[1].to_json(),
                    "expected": k.format(base.value),
                    "got": k.format(got),
                }),
            ));
        }
    }
    Ok(Check::new(
        "local_constancy",
        CheckStatus::Pass,
        json!({"trials": trials, "value": k.format(base.value)}),
    ))
}

/// Prime powers `q <= bound`.
fn prime_powers(bound: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for p in 2..=bound {
        if !crate::gf::is_prime(p) {
            continue;
        }
        let mut e = 1;
        while p.pow(e) <= bound {
            out.push((p, e));
            e += 1;
        }
    }
    out.sort_by_key(|&(p, e)| p.pow(e));
    out
}

/// Antisymmetry and `1 + m̂` invariance of the local symbol over every
/// (valuation, leading coefficient) pair with `|v| <= max_val`, at one place
/// of each degree `d` of `P^1` over each `F_q` with `q^d <= max_order`.
/// Unit parts are perturbed by seeded principal units of every precision
/// `2..=max_prec`.
pub fn exhaustive_local_checks(max_order: u32, max_val: i64, max_prec: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = crate::rng::stream(seed, "symbol-exhaustive");
    let mut anti = Vec::new();
    let mut inv = Vec::new();
    let mut pairs = 0u64;
    let mut fields = Vec::new();
    for (p, e) in prime_powers(max_order) {
        let k = Field::new(p, e)?;
        let curve = crate::curve::Curve::p1(&k);
        let q = k.order();
        let mut d = 1;
        while q.pow(d) <= max_order {
            let pi = crate::polyser::least_irreducible(&k, d as usize)?;
            let x = curve.p1_place(&pi)?;
            fields.push(format!("{} at {x}", k.describe()));
            let l = x.residue_field();
            let jets: Vec<LaurentJet> = (-max_val..=max_val)
                .flat_map(|v| l.units_by_power().map(move |c| (v, c)))
                .map(|(v, c)| LaurentJet::monomial(&x, v, c))
                .collect::<Result<_>>()?;
            for a in &jets {
                for b in &jets {
                    pairs += 1;
                    let ab = local_symbol(a, b)?;
                    let ba = local_symbol(b, a)?;
                    if k.mul(ab, ba) != Fe::ONE && anti.len() < 8 {
                        anti.push(json!({"a": a.to_string(), "b": b.to_string()}));
                    }
                    for prec in 2..=max_prec {
                        let u = sample::principal_unit(&mut rng, &x, prec - 1);
                        let depth = rng.gen_range(1..prec);
                        let w = sample::principal_unit(&mut rng, &x, depth);
                        let au = crate::polyser::jet_mul(a, &u)?;
                        let bw = crate::polyser::jet_mul(b, &w)?;
                        if local_symbol(&au, &bw)? != ab && inv.len() < 8 {
                            inv.push(json!({"a": au.to_string(), "b": bw.to_string()}));
                        }
                    }
                }
            }
            d += 1;
        }
    }
    Ok(vec![
        Check::new(
            "local_antisymmetry",
            CheckStatus::from_bool(anti.is_empty()),
            json!({"pairs": pairs, "fields": fields, "failures": anti}),
        ),
        Check::new(
            "local_unit_invariance",
            CheckStatus::from_bool(inv.is_empty()),
            json!({"pairs": pairs, "max_prec": max_prec, "failures": inv}),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::funcfield::parse_function;

    fn jet(x: &Place, m: i64, c: &[u32]) -> LaurentJet {
        LaurentJet::new(x, m, c.iter().map(|&v| Fe(v)).collect()).unwrap()
    }

    #[test]
    fn exhaustive_small() {
        let checks = exhaustive_local_checks(9, 1, 3, 0).unwrap();
        assert!(checks.iter().all(|c| c.status == CheckStatus::Pass));
    }

    #[test]
    fn local_symbol_examples() {
        let c5 = Curve::p1(&Field::prime(5).unwrap());
        let x = c5.parse_place("(t)").unwrap();
        assert_eq!(local_symbol(&jet(&x, 1, &[1]), &jet(&x, 1, &[1])).unwrap(), Fe(4));
        assert_eq!(local_symbol(&jet(&x, 0, &[3]), &jet(&x, 0, &[2])).unwrap(), Fe(1));
        assert_eq!(local_symbol(&jet(&x, 1, &[1]), &jet(&x, 1, &[2])).unwrap(), Fe(2));

        let c3 = Curve::p1(&Field::prime(3).unwrap());
        let y = c3.parse_place("(t^2+1)").unwrap();
        let f = parse_function(&c3, "t^2+1").unwrap();
        let g = parse_function(&c3, "t+1").unwrap();
        let a = crate::idele::function_jet(&f, &y, 1).unwrap();
        let b = crate::idele::function_jet(&g, &y, 1).unwrap();
        assert_eq!(local_symbol(&a, &b).unwrap(), Fe(2));
    }

    #[test]
    fn weil_examples() {
        let c5 = Curve::p1(&Field::prime(5).unwrap());
        let t = parse_function(&c5, "t").unwrap();
        let g = parse_function(&c5, "1 - t").unwrap();
        let table = weil_check(&t, &g).unwrap();
        assert!(table.is_one());
        let vals: Vec<(String, Fe)> = table
            .entries
            .iter()
            .map(|(x, s)| (x.to_string(), *s))
            .collect();
        assert_eq!(
            vals,
            vec![
                ("inf".to_string(), Fe(1)),
                ("(t)".to_string(), Fe(1)),
                ("(t + 4)".to_string(), Fe(1)),
            ]
        );
        let cst = FuncElem::constant(&c5, Fe(3));
        assert!(weil_check(&cst, &cst).unwrap().entries.is_empty());

        let e = Curve::elliptic(&Field::prime(5).unwrap(), Fe(1), Fe(0)).unwrap();
        let y = parse_function(&e, "y").unwrap();
        let x = parse_function(&e, "x").unwrap();
        assert!(weil_check(&y, &x).unwrap().is_one());
    }

    #[test]
    fn pairing_examples() {
        let c5 = Curve::p1(&Field::prime(5).unwrap());
        let x = c5.parse_place("(t)").unwrap();
        let a = Idele::from_jets(&c5, [jet(&x, 0, &[2])], 1).unwrap();
        let t = Idele::diag(&parse_function(&c5, "t").unwrap(), 1).unwrap();
        assert_eq!(pairing(&a, &t).unwrap(), Fe(2));
        let far = Idele::diag(&parse_function(&c5, "t^2+2").unwrap(), 1).unwrap();
        assert!(matches!(
            global_pairing(&a, &far),
            Err(Error::WindowEscape { degree: 2, .. })
        ));
    }

    #[test]
    fn constants_pair_by_degree() {
        let c5 = Curve::p1(&Field::prime(5).unwrap());
        let x = c5.parse_place("(t+2)").unwrap();
        let b = Idele::from_jets(&c5, [jet(&x, 3, &[4])], 1).unwrap();
        let check = constant_pairing_check(&b, Fe(2)).unwrap();
        assert_eq!(check.status, CheckStatus::Pass, "{:?}", check.witness);
    }

    #[test]
    fn characteristic_two_sign_vanishes() {
        let c2 = Curve::p1(&Field::prime(2).unwrap());
        let x = c2.parse_place("(t^2+t+1)").unwrap();
        let a = jet(&x, 1, &[1]);
        assert_eq!(local_symbol(&a, &a).unwrap(), Fe(1));
    }
}
