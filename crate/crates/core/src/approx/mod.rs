//! Strong approximation on `P^1`: given jet targets `λ_i` at places `x_i`
//! and an exceptional place `x_0`, find `f` with `v_{x_i}(f - λ_i) >= n_i`
//! and no poles outside `{x_i} ∪ {x_0}`.

use std::fmt;

use rand::Rng;
use serde_json::{json, Value};

use crate::curve::{chart, Curve, Place, PlaceKind};
use crate::error::{Error, Result};
use crate::funcfield::FuncElem;
use crate::gf::{Fe, Field};
use crate::idele::coeff_json;
use crate::polyser::{LaurentJet, Poly, Series};
use crate::verdict::{Check, CheckStatus};

/// The Laurent polynomial `Σ c_j u^{val+j}` in the uniformizer `u` at `place`,
/// required to order `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxTarget {
    pub place: Place,
    val: i64,
    coeffs: Vec<Fe>,
    pub order: i64,
}

impl ApproxTarget {
    pub fn new(place: &Place, val: i64, coeffs: Vec<Fe>, order: i64) -> Result<ApproxTarget> {
        let l = place.residue_field();
        if coeffs.iter().any(|c| c.0 >= l.order()) {
            return Err(Error::FieldMismatch(format!("target coefficient outside {}", l.describe())));
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        let mut coeffs = coeffs[lead..].to_vec();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let val = val + lead as i64;
        if !coeffs.is_empty() && order < val {
            return Err(Error::Precondition(format!(
                "order {order} at {place} is below the target valuation {val}"
            )));
        }
        Ok(ApproxTarget { place: place.clone(), val, coeffs, order })
    }

    pub fn from_jet(jet: &LaurentJet, order: i64) -> Result<ApproxTarget> {
        ApproxTarget::new(jet.place(), jet.valuation(), jet.coeffs().to_vec(), order)
    }

    /// The expansion of `f` at `place`, cut at `order`.
    pub fn from_function(f: &FuncElem, place: &Place, order: i64) -> Result<ApproxTarget> {
        if f.is_zero() {
            return ApproxTarget::new(place, 0, vec![], order);
        }
        let s = expand_to(f, place, order)?;
        let v = s.valuation().unwrap_or(order);
        let coeffs = (v..order).map(|e| s.coeff(e).unwrap_or(Fe::ZERO)).collect();
        ApproxTarget::new(place, v, coeffs, order)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    fn coeff(&self, e: i64) -> Fe {
        usize::try_from(e - self.val)
            .ok()
            .and_then(|i| self.coeffs.get(i).copied())
            .unwrap_or(Fe::ZERO)
    }

    /// Known to absolute precision `abs`, zeros past the stored coefficients.
    fn series(&self, abs: i64) -> Series {
        let l = self.place.residue_field();
        let start = self.val.min(abs);
        let c = (start..abs).map(|e| self.coeff(e)).collect();
        Series::new(l, start, c)
    }

    pub fn to_json(&self) -> Value {
        let l = self.place.residue_field();
        json!({
            "place": self.place.to_string(),
            "val": self.val,
            "coeffs": self.coeffs.iter().map(|&c| coeff_json(l, c)).collect::<Vec<_>>(),
            "order": self.order,
        })
    }
}

impl fmt::Display for ApproxTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.place.residue_field();
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| format!("{}·u^{}", l.format(c), self.val + i as i64))
            .collect();
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        write!(f, "{body} + O(u^{}) at {}", self.order, self.place)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxProblem {
    pub curve: Curve,
    pub x0: Place,
    pub targets: Vec<ApproxTarget>,
}

impl ApproxProblem {
    pub fn new(curve: &Curve, x0: &Place, targets: Vec<ApproxTarget>) -> Result<ApproxProblem> {
        if !curve.is_p1() {
            return Err(Error::Unsupported("strong approximation is implemented on P^1 only".into()));
        }
        for (i, t) in targets.iter().enumerate() {
            if &t.place == x0 {
                return Err(Error::Precondition(format!("{x0} is both exceptional and constrained")));
            }
            if targets[..i].iter().any(|s| s.place == t.place) {
                return Err(Error::Precondition(format!("{} is constrained twice", t.place)));
            }
        }
        Ok(ApproxProblem { curve: curve.clone(), x0: x0.clone(), targets })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "curve": self.curve.describe(),
            "x0": self.x0.to_string(),
            "targets": self.targets.iter().map(ApproxTarget::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Expansion of a nonzero `f` at `place` known to absolute precision `abs`.
fn expand_to(f: &FuncElem, place: &Place, abs: i64) -> Result<Series> {
    let v = crate::funcfield::valuation(f, place)?;
    let rel = (abs - v).max(1) as usize;
    crate::curve::expand_series(f, place, rel)
}

/// Solve the square system `a·x = b` over `k`.
fn solve_linear(k: &Field, mut a: Vec<Vec<Fe>>, mut b: Vec<Fe>) -> Result<Vec<Fe>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Internal("singular jet conversion system".into()))?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = k.inv(a[col][col]);
        for v in &mut a[col][col..] {
            *v = k.mul(*v, inv);
        }
        b[col] = k.mul(b[col], inv);
        let pivot_row = a[col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let m = a[r][col];
            for (v, &p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *v = k.sub(*v, k.mul(m, p));
            }
            b[r] = k.sub(b[r], k.mul(m, b[col]));
        }
    }
    Ok(b)
}

fn coords(k: &Field, l: &Field, d: usize, c: Fe) -> Vec<Fe> {
    if d == 1 {
        vec![c]
    } else {
        debug_assert!(l.base().is_some_and(|b| b == k));
        l.to_base_coeffs(c)
    }
}

/// The polynomial of degree `< n·deg(x)` congruent to `s` modulo `π^n`, for a
/// series `s` at a finite place with valuation `>= 0` known to precision `n`.
fn jet_to_poly(curve: &Curve, place: &Place, s: &Series, n: i64) -> Result<Poly> {
    let k = curve.field();
    let l = place.residue_field();
    let d = place.degree() as usize;
    let size = n as usize * d;
    if size == 0 {
        return Ok(Poly::zero(k));
    }
    let t = chart(curve, place, n as usize + 1)?.remove(0).truncate_abs(n);
    let mut cols = Vec::with_capacity(size);
    let mut pw = Series::constant(l, Fe::ONE, n);
    for _ in 0..size {
        let mut col = Vec::with_capacity(size);
        for e in 0..n {
            col.extend(coords(k, l, d, pw.coeff(e).unwrap_or(Fe::ZERO)));
        }
        cols.push(col);
        pw = pw.mul(&t).truncate_abs(n);
    }
    let a: Vec<Vec<Fe>> = (0..size).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let mut b = Vec::with_capacity(size);
    for e in 0..n {
        let c = s
            .coeff(e)
            .ok_or_else(|| Error::Precision(format!("target at {place} unknown at order {e}")))?;
        b.extend(coords(k, l, d, c));
    }
    Ok(Poly::new(k, solve_linear(k, a, b)?))
}

/// `g` with `g ≡ r_i mod m_i` and `deg g < Σ deg m_i`.
fn crt(k: &Field, residues: &[(Poly, Poly)]) -> Result<(Poly, Poly)> {
    let modulus = residues.iter().fold(Poly::one(k), |acc, (_, m)| acc.mul(m));
    let mut g = Poly::zero(k);
    for (r, m) in residues {
        let co = modulus.div_exact(m)?;
        let inv = co.rem(m).inv_mod(m)?;
        g = g.add(&r.mul_mod(&inv, m).mul(&co));
    }
    Ok((g.rem(&modulus), modulus))
}

/// Jet of `q·λ` at a finite place, to absolute precision `n`.
fn scaled_target(curve: &Curve, q: &Poly, t: &ApproxTarget, n: i64) -> Result<Series> {
    let l = t.place.residue_field();
    let vmin = t.val.min(0);
    let coord = chart(curve, &t.place, (n - vmin) as usize + 2)?.remove(0);
    let qs = coord.eval_poly(&q.embed(l));
    let prod = qs.mul(&t.series(n - vmin + 1));
    if prod.abs_prec() < n {
        return Err(Error::Precision(format!("scaled target at {} to order {n}", t.place)));
    }
    Ok(prod.truncate_abs(n))
}

fn finite_poly(place: &Place) -> &Poly {
    match place.kind() {
        PlaceKind::P1Finite(p) => p,
        _ => unreachable!("finite P^1 place"),
    }
}

/// Solve, adding `kernel(rng)` when given: a random element of the solution
/// coset's direction.
fn solve_inner<R: Rng>(p: &ApproxProblem, mut rng: Option<&mut R>) -> Result<FuncElem> {
    let curve = &p.curve;
    let k = curve.field();
    let mut finite = Vec::new();
    let mut at_inf = None;
    for t in &p.targets {
        if t.place.is_infinity() {
            at_inf = Some(t);
        } else {
            finite.push(t);
        }
    }
    let mut denom = Poly::one(k);
    let mut modulus = Poly::one(k);
    let mut levels = Vec::new();
    for t in &finite {
        let e = (-t.val).max(0);
        let pi = finite_poly(&t.place);
        denom = denom.mul(&pi.pow(e as u64));
        let n = if t.is_zero() { t.order.max(0) } else { t.order } + e;
        let n = n.max(0);
        modulus = modulus.mul(&pi.pow(n as u64));
        levels.push(n);
    }
    let (n_inf, lam_inf) = match at_inf {
        Some(t) => (t.order, Some(t)),
        None => (0, None),
    };
    let x0_poly = (!p.x0.is_infinity()).then(|| finite_poly(&p.x0).clone());
    let mut q = denom.clone();
    if let Some(pi0) = &x0_poly {
        let need = (modulus.deg() as i64 + n_inf - 1).max(n_inf).max(0);
        let extra = match rng.as_deref_mut() {
            Some(r) => r.gen_range(0..=1u64),
            None => 0,
        };
        while (q.deg() as i64) < need {
            q = q.mul(pi0);
        }
        q = q.mul(&pi0.pow(extra));
    }
    // Top coefficients forced by the condition at ∞.
    let mut top = Poly::zero(k);
    let slack = match (&x0_poly, lam_inf) {
        (Some(_), lam) => {
            let cut = q.deg() as i64 - n_inf;
            if let Some(t) = lam {
                let qc = q.coeffs();
                let mut c = Vec::new();
                for j in 0..=(q.deg() as i64 - t.val.min(0) + 1) {
                    let mut acc = Fe::ZERO;
                    if j > cut {
                        for (a, &qa) in qc.iter().enumerate() {
                            acc = k.add(acc, k.mul(qa, t.coeff(a as i64 - j)));
                        }
                    }
                    c.push(acc);
                }
                top = Poly::new(k, c);
            }
            Some(cut - modulus.deg() as i64)
        }
        (None, _) => None,
    };
    let mut residues = Vec::new();
    for (t, &n) in finite.iter().zip(&levels) {
        if n == 0 {
            continue;
        }
        let pi = finite_poly(&t.place);
        let m = pi.pow(n as u64);
        let target = scaled_target(curve, &q, t, n)?;
        let r = jet_to_poly(curve, &t.place, &target, n)?;
        residues.push((r.sub(&top).rem(&m), m));
    }
    let (mut g, m) = crt(k, &residues)?;
    debug_assert_eq!(m, modulus);
    if let Some(r) = rng {
        let room = slack.unwrap_or(2);
        if room >= 0 {
            let u = Poly::new(k, (0..=room).map(|_| Fe(r.gen_range(0..k.order()))).collect());
            g = g.add(&modulus.mul(&u));
        }
    }
    let g = g.add(&top);
    if g.is_zero() {
        return Ok(FuncElem::zero(curve));
    }
    FuncElem::ratio(curve, g, q)
}

pub fn strong_approx_solve(p: &ApproxProblem) -> Result<FuncElem> {
    solve_inner::<rand_chacha::ChaCha8Rng>(p, None)
}

/// Another solution: the canonical one moved along the solution coset by a
/// seeded element.
pub fn strong_approx_solve_seeded(p: &ApproxProblem, seed: u64) -> Result<FuncElem> {
    let mut rng = crate::rng::stream(seed, "approx-coset");
    solve_inner(p, Some(&mut rng))
}

/// Per-place outcome of the independent check.
#[derive(Clone, Debug)]
pub struct ApproxVerdict {
    pub checks: Vec<Check>,
}

impl ApproxVerdict {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status.is_failure())
    }

    pub fn to_json(&self) -> Value {
        json!({"passed": self.passed(), "checks": self.checks})
    }
}

/// Re-expand `f` at every constrained place and at every pole.
pub fn strong_approx_verify(f: &FuncElem, p: &ApproxProblem) -> Result<ApproxVerdict> {
    let mut checks = Vec::new();
    for t in &p.targets {
        let diff = if f.is_zero() {
            t.series(t.order).neg()
        } else {
            expand_to(f, &t.place, t.order)?.sub(&t.series(t.order))
        };
        let reached = match diff.valuation() {
            Some(v) if v < t.order => Some(v),
            _ => None,
        };
        let l = t.place.residue_field();
        let witness = match reached {
            Some(v) => json!({
                "required": t.order,
                "valuation": v,
                "coeff": coeff_json(l, diff.coeff(v).expect("known")),
            }),
            None => json!({"required": t.order, "valuation_at_least": t.order}),
        };
        checks.push(Check::new(
            format!("congruence_at {}", t.place),
            CheckStatus::from_bool(reached.is_none()),
            witness,
        ));
    }
    let mut stray = Vec::new();
    if !f.is_zero() {
        let allowed: Vec<&Place> = p.targets.iter().map(|t| &t.place).chain([&p.x0]).collect();
        let g = f.u().gcd(f.w());
        let (num, mut den) = (f.u().div_exact(&g)?, f.w().div_exact(&g)?);
        for x in allowed.iter().filter(|x| !x.is_infinity()) {
            den = den.multiplicity(finite_poly(x)).1;
        }
        if !den.is_constant() {
            stray.push(json!({"denominator_factor": den.monic().format("t")}));
        }
        let inf = p.curve.infinity();
        if num.deg() > f.w().div_exact(&g)?.deg() && !allowed.contains(&&inf) {
            stray.push(json!({"place": inf.to_string(), "order": f.w().div_exact(&g)?.deg() as i64 - num.deg() as i64}));
        }
    }
    checks.push(Check::new(
        "poles_only_at_targets_and_x0",
        CheckStatus::from_bool(stray.is_empty()),
        json!(stray),
    ));
    Ok(ApproxVerdict { checks })
}

/// A seeded problem with at most `max_places` constrained places of degree
/// `<= max_deg`, orders `<= max_order`.
pub fn random_problem<R: Rng>(
    rng: &mut R,
    curve: &Curve,
    max_places: usize,
    max_deg: u32,
    max_order: i64,
) -> Result<ApproxProblem> {
    use rand::seq::SliceRandom;
    let mut places = curve.places_up_to(max_deg)?;
    places.shuffle(rng);
    let x0 = places.pop().expect("P^1 has places");
    let n = rng.gen_range(0..=max_places.min(places.len()));
    let mut targets = Vec::new();
    for x in places.into_iter().take(n) {
        let l = x.residue_field();
        let order = rng.gen_range(-1..=max_order);
        let val = rng.gen_range(-2..=order);
        let len = (order - val).max(0) as usize;
        let coeffs = (0..len).map(|_| Fe(rng.gen_range(0..l.order()))).collect();
        targets.push(ApproxTarget::new(&x, val, coeffs, order)?);
    }
    ApproxProblem::new(curve, &x0, targets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::parse_function;
    use crate::rng::stream;

    fn p1(q: u32) -> Curve {
        let (p, e) = match q {
            4 => (2, 2),
            9 => (3, 2),
            _ => (q, 1),
        };
        Curve::p1(&Field::new(p, e).unwrap())
    }

    #[test]
    fn hand_example() {
        let c = p1(3);
        let x = c.parse_place("(t)").unwrap();
        let y = c.parse_place("(t + 2)").unwrap();
        let prob = ApproxProblem::new(
            &c,
            &c.infinity(),
            vec![
                ApproxTarget::new(&x, 0, vec![Fe(1), Fe(1)], 2).unwrap(),
                ApproxTarget::new(&y, 0, vec![Fe(2)], 1).unwrap(),
            ],
        )
        .unwrap();
        let f = strong_approx_solve(&prob).unwrap();
        assert_eq!(f, parse_function(&c, "1 + t").unwrap());
        assert!(strong_approx_verify(&f, &prob).unwrap().passed());
    }

    #[test]
    fn trivial_examples() {
        let c = p1(5);
        let prob = ApproxProblem::new(&c, &c.infinity(), vec![]).unwrap();
        assert!(strong_approx_solve(&prob).unwrap().is_zero());
        let x = c.parse_place("(t)").unwrap();
        let prob = ApproxProblem::new(
            &c,
            &c.infinity(),
            vec![ApproxTarget::new(&x, -1, vec![Fe(1)], 0).unwrap()],
        )
        .unwrap();
        assert_eq!(strong_approx_solve(&prob).unwrap(), parse_function(&c, "1/t").unwrap());
    }

    #[test]
    fn verifier_rejects() {
        let c = p1(5);
        let x = c.parse_place("(t)").unwrap();
        let prob = ApproxProblem::new(
            &c,
            &c.infinity(),
            vec![ApproxTarget::new(&x, 0, vec![Fe(3)], 1).unwrap()],
        )
        .unwrap();
        let v = strong_approx_verify(&FuncElem::zero(&c), &prob).unwrap();
        assert_eq!(v.failures().next().unwrap().name, "congruence_at (t)");
        let v = strong_approx_verify(&parse_function(&c, "3/(t + 1)").unwrap(), &prob).unwrap();
        let bad: Vec<_> = v.failures().map(|c| c.name.clone()).collect();
        assert_eq!(bad, vec!["poles_only_at_targets_and_x0"]);
    }

    #[test]
    fn rejects_bad_problems() {
        let c = p1(3);
        assert!(ApproxProblem::new(
            &c,
            &c.infinity(),
            vec![ApproxTarget::new(&c.infinity(), 0, vec![Fe(1)], 1).unwrap()]
        )
        .is_err());
        let e = Curve::elliptic(&Field::prime(5).unwrap(), Fe(1), Fe(0)).unwrap();
        assert!(ApproxProblem::new(&e, &e.infinity(), vec![]).is_err());
    }

    #[test]
    fn finite_exceptional_place_with_condition_at_infinity() {
        let c = p1(5);
        let x0 = c.parse_place("(t^2 + 2)").unwrap();
        let inf = c.infinity();
        let x = c.parse_place("(t + 1)").unwrap();
        let prob = ApproxProblem::new(
            &c,
            &x0,
            vec![
                ApproxTarget::new(&inf, -2, vec![Fe(1), Fe(0), Fe(4)], 2).unwrap(),
                ApproxTarget::new(&x, -1, vec![Fe(2), Fe(1)], 2).unwrap(),
            ],
        )
        .unwrap();
        let f = strong_approx_solve(&prob).unwrap();
        let v = strong_approx_verify(&f, &prob).unwrap();
        assert!(v.passed(), "{f}: {}", v.to_json());
    }

    #[test]
    fn random_problems_solve() {
        for q in [2, 3, 4, 5, 9] {
            let c = p1(q);
            let mut rng = stream(q as u64, "approx-unit");
            for _ in 0..40 {
                let prob = random_problem(&mut rng, &c, 4, 2, 3).unwrap();
                let f = strong_approx_solve(&prob).unwrap();
                let v = strong_approx_verify(&f, &prob).unwrap();
                assert!(v.passed(), "{}: {f}: {}", prob.to_json(), v.to_json());
                let g = strong_approx_solve_seeded(&prob, 9).unwrap();
                assert!(strong_approx_verify(&g, &prob).unwrap().passed());
            }
        }
    }
}
