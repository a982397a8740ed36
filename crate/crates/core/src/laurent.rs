//! Exact multivariable Laurent polynomials over the integers.
//!
//! Polynomials live in `Z[t_1^±1, ..., t_mu^±1]`. A `half_step` polynomial
//! reads a stored exponent `k` as `t^{k/2}`; the two kinds never mix in one
//! operation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::torus::{unit_from_turn, TorusPoint};

/// Exponent vector of a monomial. Ordered lexicographically with `t_1` most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(mu: usize) -> Self {
        Monomial(vec![0; mu])
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    mu: usize,
    half_step: bool,
    terms: BTreeMap<Monomial, BigInt>,
}

/// Canonical representative of a class of polynomials modulo units `±t^k`:
/// every variable has minimal exponent 0 and the lexicographically largest
/// term has a positive coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitNormalForm(LaurentPoly);

impl UnitNormalForm {
    pub fn poly(&self) -> &LaurentPoly {
        &self.0
    }

    pub fn into_poly(self) -> LaurentPoly {
        self.0
    }
}

impl fmt::Display for UnitNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl LaurentPoly {
    pub fn zero(mu: usize) -> Self {
        assert!(mu >= 1, "a Laurent polynomial needs at least one variable");
        Self {
            mu,
            half_step: false,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(mu: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(mu, &vec![0; mu], c)
    }

    pub fn one(mu: usize) -> Self {
        Self::constant(mu, 1)
    }

    /// `c * t^exps`.
    pub fn monomial(mu: usize, exps: &[i32], c: impl Into<BigInt>) -> Self {
        assert_eq!(exps.len(), mu, "monomial length must equal the variable count");
        let mut p = Self::zero(mu);
        p.add_term(Monomial(exps.to_vec()), c.into());
        p
    }

    /// The variable `t_i` (zero-based index).
    pub fn var(mu: usize, i: usize) -> Self {
        let mut e = vec![0; mu];
        e[i] = 1;
        Self::monomial(mu, &e, 1)
    }

    /// `t_i - 1` (zero-based index).
    pub fn var_minus_one(mu: usize, i: usize) -> Self {
        &Self::var(mu, i) - &Self::one(mu)
    }

    pub fn from_terms<I, C>(mu: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i32>, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(mu);
        for (e, c) in terms {
            if e.len() != mu {
                return Err(Error::invalid(format!(
                    "monomial of length {} in a {}-variable ring",
                    e.len(),
                    mu
                )));
            }
            p.add_term(Monomial(e), c.into());
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn is_half_step(&self) -> bool {
        self.half_step
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing lexicographic order of monomials.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[i32]) -> BigInt {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// The constant term, if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.0.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// `sum |c|` as a float.
    pub fn coeff_mass(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .sum()
    }

    /// Reinterprets stored exponents as half-steps (`k` now means `t^{k/2}`).
    pub fn into_half_step(mut self) -> Self {
        self.half_step = true;
        self
    }

    /// Embeds an integer-step polynomial into the half-step ring by doubling exponents.
    pub fn to_half_step(&self) -> Result<Self> {
        if self.half_step {
            return Err(Error::invalid("polynomial is already half-step"));
        }
        let mut out = Self::zero(self.mu).into_half_step();
        for (m, c) in &self.terms {
            out.add_term(Monomial(m.0.iter().map(|e| 2 * e).collect()), c.clone());
        }
        Ok(out)
    }

    /// Converts a half-step polynomial with only even exponents back to integer steps.
    pub fn from_half_step(&self) -> Result<Self> {
        if !self.half_step {
            return Err(Error::invalid("polynomial is not half-step"));
        }
        let mut out = Self::zero(self.mu);
        for (m, c) in &self.terms {
            if m.0.iter().any(|e| e % 2 != 0) {
                return Err(Error::invalid("odd half-exponent has no integer-step form"));
            }
            out.add_term(Monomial(m.0.iter().map(|e| e / 2).collect()), c.clone());
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.mu != other.mu {
            return Err(Error::invalid(format!(
                "variable count mismatch: {} vs {}",
                self.mu, other.mu
            )));
        }
        if self.half_step != other.half_step {
            return Err(Error::invalid("cannot mix half-step and integer-step polynomials"));
        }
        Ok(())
    }

    fn empty_like(&self) -> Self {
        Self {
            mu: self.mu,
            half_step: self.half_step,
            terms: BTreeMap::new(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.empty_like();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    /// Multiplies by the monomial `t^exps`.
    pub fn shift(&self, exps: &[i32]) -> Self {
        let s = Monomial(exps.to_vec());
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            out.terms.insert(m.mul(&s), c.clone());
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self {
            terms: Self::one(self.mu).terms,
            ..self.empty_like()
        };
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Minimal exponent of each variable over the support (zeros for the zero polynomial).
    pub fn min_exponents(&self) -> Vec<i32> {
        self.fold_exponents(i32::min)
    }

    pub fn max_exponents(&self) -> Vec<i32> {
        self.fold_exponents(i32::max)
    }

    fn fold_exponents(&self, f: fn(i32, i32) -> i32) -> Vec<i32> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.mu];
        };
        let mut acc = first.0.clone();
        for m in it {
            for (a, &e) in acc.iter_mut().zip(&m.0) {
                *a = f(*a, e);
            }
        }
        acc
    }

    /// Evaluates at a torus point. Negative powers are conjugate powers; half-step
    /// exponents use the principal root `e^{i pi q_j}`.
    pub fn eval(&self, omega: &TorusPoint) -> Result<Complex64> {
        if omega.mu() != self.mu {
            return Err(Error::invalid(format!(
                "point has {} coordinates, polynomial has {} variables",
                omega.mu(),
                self.mu
            )));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let c = c.to_f64().unwrap_or(f64::NAN);
            acc += monomial_value(omega, &m.0, self.half_step) * c;
        }
        Ok(acc)
    }

    pub fn unit_normalize(&self) -> UnitNormalForm {
        if self.is_zero() {
            return UnitNormalForm(self.clone());
        }
        let mins: Vec<i32> = self.min_exponents().iter().map(|e| -e).collect();
        let mut p = self.shift(&mins);
        if p.terms.values().next_back().is_some_and(|c| c.is_negative()) {
            p = -&p;
        }
        UnitNormalForm(p)
    }

    pub fn eq_up_to_units(&self, other: &Self) -> bool {
        self.mu == other.mu
            && self.half_step == other.half_step
            && self.unit_normalize() == other.unit_normalize()
    }

    /// `q` with `q * divisor == self`, or [`Error::NotDivisible`].
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        self.check_compatible(divisor)?;
        if divisor.is_zero() {
            return Err(Error::invalid("division by zero polynomial"));
        }
        if self.is_zero() {
            return Ok(self.empty_like());
        }
        // Newton polytopes add under multiplication, so every quotient exponent
        // lies in this box.
        let (amin, amax) = (self.min_exponents(), self.max_exponents());
        let (bmin, bmax) = (divisor.min_exponents(), divisor.max_exponents());
        let lo: Vec<i32> = amin.iter().zip(&bmin).map(|(a, b)| a - b).collect();
        let hi: Vec<i32> = amax.iter().zip(&bmax).map(|(a, b)| a - b).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::NotDivisible);
        }
        let (lead_m, lead_c) = divisor.terms.iter().next_back().unwrap();
        let mut rem = self.clone();
        let mut quot = self.empty_like();
        while let Some((m, c)) = rem.terms.iter().next_back() {
            let qm = m.div(lead_m);
            let inside = qm.0.iter().zip(lo.iter().zip(&hi)).all(|(e, (l, h))| l <= e && e <= h);
            if !inside {
                return Err(Error::NotDivisible);
            }
            let (qc, r) = c.div_rem(lead_c);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            for (bm, bc) in &divisor.terms {
                rem.add_term(bm.mul(&qm), -(&qc * bc));
            }
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// Greatest common divisor, unit-normalized.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.is_zero() {
            return Ok(other.unit_normalize().into_poly());
        }
        if other.is_zero() {
            return Ok(self.unit_normalize().into_poly());
        }
        let a = self.unit_normalize().into_poly();
        let b = other.unit_normalize().into_poly();
        let g = gcd_rec(&a, &b, 0);
        Ok(g.unit_normalize().into_poly())
    }

    /// Replaces every variable by a single variable `t`.
    pub fn substitute_diagonal(&self) -> Self {
        let mut out = Self {
            mu: 1,
            half_step: self.half_step,
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            out.add_term(Monomial(vec![m.0.iter().sum()]), c.clone());
        }
        out
    }

    /// `t_i -> t_i^{-1}` on every monomial.
    pub fn conj_involution(&self) -> Self {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            out.terms.insert(Monomial(m.0.iter().map(|e| -e).collect()), c.clone());
        }
        out
    }

    /// Degree in variable `var` (polynomial must have non-negative exponents there).
    fn degree_in(&self, var: usize) -> i32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Coefficient of `t_var^d` as a polynomial in the other variables.
    fn coeff_in(&self, var: usize, d: i32) -> Self {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            if m.0[var] == d {
                let mut e = m.0.clone();
                e[var] = 0;
                out.terms.insert(Monomial(e), c.clone());
            }
        }
        out
    }

    fn coeffs_in(&self, var: usize) -> BTreeMap<i32, Self> {
        let mut out: BTreeMap<i32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let d = std::mem::replace(&mut e[var], 0);
            out.entry(d)
                .or_insert_with(|| self.empty_like())
                .terms
                .insert(Monomial(e), c.clone());
        }
        out
    }

    /// Parses sums of products of integers, variables `t<i>^<int>` and
    /// parenthesized groups (optionally raised to a non-negative power).
    pub fn parse(s: &str, mu: usize) -> Result<Self> {
        Parser::new(s, mu, false).parse()
    }

    /// Parses a half-step polynomial; exponents may be written `^(k/2)`.
    pub fn parse_half_step(s: &str, mu: usize) -> Result<Self> {
        Parser::new(s, mu, true).parse()
    }
}

/// `t^exps` at `omega`, computed from one exactly reduced phase.
fn monomial_value(omega: &TorusPoint, exps: &[i32], half: bool) -> Complex64 {
    let mut lcm: i128 = 1;
    for q in omega.turns() {
        lcm = lcm.lcm(&(*q.denom() as i128));
    }
    let scale = if half { 2 } else { 1 };
    let total = lcm * scale;
    if total <= i64::MAX as i128 / 4 {
        let mut num: i128 = 0;
        for (q, &e) in omega.turns().iter().zip(exps) {
            num += (*q.numer() as i128) * (lcm / *q.denom() as i128) * e as i128;
        }
        let num = num.rem_euclid(total);
        return unit_from_turn(Ratio::new(num as i64, total as i64));
    }
    let mut z = Complex64::new(1.0, 0.0);
    for (j, &e) in exps.iter().enumerate() {
        let w = if half { omega.half_coord(j) } else { omega.coord(j) };
        z *= if e >= 0 { w.powi(e) } else { w.conj().powi(-e) };
    }
    z
}

/// Content with respect to `var`: gcd of the coefficients in the remaining variables.
fn content(p: &LaurentPoly, var: usize) -> LaurentPoly {
    let mut it = p.coeffs_in(var).into_values();
    let mut g = it.next().expect("content of zero polynomial");
    for c in it {
        if g.as_constant().is_some_and(|k| k.abs().is_one()) {
            break;
        }
        g = gcd_rec(&g, &c, var + 1);
    }
    g
}

/// Pseudo-remainder of `f` by `g` in `var`.
fn prem(f: &LaurentPoly, g: &LaurentPoly, var: usize) -> LaurentPoly {
    let dg = g.degree_in(var);
    let lc_g = g.coeff_in(var, dg);
    let mut r = f.clone();
    while !r.is_zero() {
        let dr = r.degree_in(var);
        if dr < dg {
            break;
        }
        let lc_r = r.coeff_in(var, dr);
        let mut e = vec![0; r.mu];
        e[var] = dr - dg;
        r = &(&lc_g * &r) - &(&lc_r * &g.shift(&e));
    }
    r
}

fn primitive_part(p: &LaurentPoly, var: usize) -> LaurentPoly {
    let c = content(p, var);
    p.exact_div(&c).expect("content divides its polynomial")
}

/// Recursive primitive-PRS gcd. Both inputs are nonzero, have non-negative
/// exponents and involve only variables `>= var`.
fn gcd_rec(a: &LaurentPoly, b: &LaurentPoly, var: usize) -> LaurentPoly {
    if var == a.mu {
        let x = a.as_constant().unwrap();
        let y = b.as_constant().unwrap();
        return LaurentPoly {
            terms: LaurentPoly::constant(a.mu, x.gcd(&y)).terms,
            ..a.empty_like()
        };
    }
    if a.degree_in(var) == 0 && b.degree_in(var) == 0 {
        return gcd_rec(a, b, var + 1);
    }
    let c = gcd_rec(&content(a, var), &content(b, var), var + 1);
    let (mut f, mut g) = (primitive_part(a, var), primitive_part(b, var));
    if f.degree_in(var) < g.degree_in(var) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        if g.degree_in(var) == 0 {
            // g is primitive of degree zero, hence a unit in this variable
            return c;
        }
        let r = prem(&f, &g, var);
        if r.is_zero() {
            return &c * &g;
        }
        f = g;
        g = primitive_part(&r, var);
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;

            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).expect("incompatible Laurent polynomials")
            }
        }

        impl std::ops::$tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;

            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }
}

impl std::ops::Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            for (j, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = if self.mu == 1 {
                    "t".to_string()
                } else {
                    format!("t{}", j + 1)
                };
                let exp = if self.half_step {
                    if e % 2 == 0 {
                        (e / 2).to_string()
                    } else {
                        format!("({e}/2)")
                    }
                } else {
                    e.to_string()
                };
                if exp == "1" {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{exp}"));
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
    mu: usize,
    half: bool,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, mu: usize, half: bool) -> Self {
        Self {
            src,
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            mu,
            half,
        }
    }

    fn err(&self, reason: impl Into<String>) -> Error {
        Error::Parse {
            input: self.src.to_string(),
            reason: reason.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let d = self.digits().ok_or_else(|| self.err("expected an integer"))?;
        let v: i64 = d.parse().map_err(|_| self.err("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    /// Exponent in stored units (half-steps when parsing half-step polynomials).
    fn exponent(&mut self) -> Result<i32> {
        let scale = if self.half { 2 } else { 1 };
        if self.eat('(') {
            let num = self.signed_int()?;
            let val = if self.eat('/') {
                let den = self.signed_int()?;
                match den {
                    1 => num * scale,
                    2 if self.half => num,
                    _ => return Err(self.err("only /2 exponents are allowed in half-step form")),
                }
            } else {
                num * scale
            };
            if !self.eat(')') {
                return Err(self.err("missing ')'"));
            }
            return i32::try_from(val).map_err(|_| self.err("exponent out of range"));
        }
        let v = self.signed_int()? * scale;
        i32::try_from(v).map_err(|_| self.err("exponent out of range"))
    }

    fn variable(&mut self) -> Result<LaurentPoly> {
        let idx = match self.digits() {
            Some(d) => {
                let i: usize = d.parse().map_err(|_| self.err("bad variable index"))?;
                if i == 0 || i > self.mu {
                    return Err(self.err(format!("variable t{i} outside t1..t{}", self.mu)));
                }
                i - 1
            }
            None if self.mu == 1 => 0,
            None => return Err(self.err("bare 't' is only allowed for one variable")),
        };
        let e = if self.eat('^') {
            self.exponent()?
        } else if self.half {
            2
        } else {
            1
        };
        let mut exps = vec![0; self.mu];
        exps[idx] = e;
        Ok(self.lift(LaurentPoly::monomial(self.mu, &exps, 1)))
    }

    fn lift(&self, mut p: LaurentPoly) -> LaurentPoly {
        p.half_step = self.half;
        p
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        if let Some(d) = self.digits() {
            let c = d.parse::<BigInt>().map_err(|_| self.err("bad coefficient"))?;
            return Ok(self.lift(LaurentPoly::constant(self.mu, c)));
        }
        if self.eat('t') {
            return self.variable();
        }
        if self.eat('(') {
            let inner = self.sum()?;
            if !self.eat(')') {
                return Err(self.err("missing ')'"));
            }
            if self.eat('^') {
                let d = self.digits().ok_or_else(|| self.err("a parenthesized group takes a non-negative integer power"))?;
                let n: u32 = d.parse().map_err(|_| self.err("power out of range"))?;
                return Ok(inner.pow(n));
            }
            return Ok(inner);
        }
        Err(self.err(format!("expected a term at position {}", self.pos)))
    }

    fn product(&mut self) -> Result<LaurentPoly> {
        let mut p = self.atom()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    p = &p * &self.atom()?;
                }
                Some('t') | Some('(') => p = &p * &self.atom()?,
                _ => break,
            }
        }
        Ok(p)
    }

    fn sum(&mut self) -> Result<LaurentPoly> {
        let mut negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.lift(LaurentPoly::zero(self.mu));
        loop {
            let t = self.product()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some('+') => negate = false,
                Some('-') => negate = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(acc)
    }

    fn parse(mut self) -> Result<LaurentPoly> {
        if self.chars.is_empty() {
            return Err(self.err("empty polynomial"));
        }
        let p = self.sum()?;
        if let Some(ch) = self.peek() {
            return Err(self.err(format!("unexpected '{ch}' at position {}", self.pos)));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, mu: usize) -> LaurentPoly {
        LaurentPoly::parse(s, mu).unwrap()
    }

    #[test]
    fn addition_examples() {
        assert!((p("t1 - 1", 1) + p("1 - t1", 1)).is_zero());
        assert_eq!(p("t1*t2 + 1", 2) + p("t1*t2", 2), p("2*t1*t2 + 1", 2));
        let s = p("t1^-1", 1) + p("t1", 1);
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_string(), "t + t^-1");
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        assert!(matches!(
            p("t1", 2).try_add(&p("t1", 3)),
            Err(Error::InvalidInput(_))
        ));
        let h = p("t1", 1).into_half_step();
        assert!(matches!(p("t1", 1).try_mul(&h), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(p("t1 - 1", 1) * p("t1^-1", 1), p("1 - t^-1", 1));
        let prod = p("t1-1", 3) * p("t2-1", 3) * p("t3-1", 3);
        assert_eq!(prod.len(), 8);
        assert!(prod.terms().all(|(_, c)| c.abs().is_one()));
        assert_eq!(p("t-1", 1) * p("t+1", 1), p("t^2-1", 1));
    }

    #[test]
    fn evaluation_examples() {
        let w: TorusPoint = "1/2,1/2".parse().unwrap();
        assert!((p("t1*t2+1", 2).eval(&w).unwrap() - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        let f = p("t1-1", 3) * p("t2-1", 3) * p("t3-1", 3);
        for s in ["0,1/3,2/7", "0,5/11,1/2"] {
            let w: TorusPoint = s.parse().unwrap();
            assert!(f.eval(&w).unwrap().norm() < 1e-14);
        }
        let i: TorusPoint = "1/4".parse().unwrap();
        assert_eq!(p("t - 1", 1).eval(&i).unwrap(), Complex64::new(-1.0, 1.0));
        assert!(p("t1", 2).eval(&i).is_err());
    }

    #[test]
    fn half_step_evaluation_uses_principal_root() {
        let s = p("t", 1).into_half_step();
        let w: TorusPoint = "1/2".parse().unwrap();
        assert!((s.eval(&w).unwrap() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn unit_normalize_examples() {
        let a = -(p("t1^-2", 2) * p("t1*t2+1", 2));
        assert_eq!(a.unit_normalize().poly(), &p("t1*t2+1", 2));
        assert_eq!(
            p("t-1", 1).unit_normalize(),
            p("1 - t^-1", 1).unit_normalize()
        );
        assert_eq!(p("t-1", 1).unit_normalize().to_string(), "t - 1");
        assert!(LaurentPoly::zero(2).unit_normalize().poly().is_zero());
    }

    #[test]
    fn eq_up_to_units_examples() {
        let a = p("t1-1", 2) * p("t2-1", 2);
        let b = p("1-t1^-1", 2) * p("1-t2^-1", 2) * p("t1*t2", 2);
        assert!(a.eq_up_to_units(&b));
        assert!(!p("t1*t2+1", 2).eq_up_to_units(&p("t1+t2", 2)));
        let d = p("t1*t2 + 1", 2);
        assert!(d.eq_up_to_units(&-&d));
    }

    #[test]
    fn exact_division_examples() {
        assert_eq!(p("t^2-1", 1).exact_div(&p("t-1", 1)).unwrap(), p("t+1", 1));
        assert_eq!(
            p("t1*t2+1", 2).exact_div(&p("t1-1", 2)),
            Err(Error::NotDivisible)
        );
        assert_eq!(
            p("t-1", 1).exact_div(&p("t-1", 1).pow(1)).unwrap(),
            LaurentPoly::one(1)
        );
        assert_eq!(p("1", 1).exact_div(&p("t-1", 1)), Err(Error::NotDivisible));
        assert_eq!(p("2*t", 1).exact_div(&p("3", 1)), Err(Error::NotDivisible));
        assert_eq!(
            p("t^-3 - t^2", 1).exact_div(&p("t^-1", 1)).unwrap(),
            p("t^-2 - t^3", 1)
        );
    }

    #[test]
    fn gcd_examples() {
        let a = p("t1-1", 2) * p("t1*t2+1", 2);
        let b = p("t1-1", 2) * p("t2-1", 2);
        let g = a.gcd(&b).unwrap();
        assert!(g.eq_up_to_units(&p("t1-1", 2)));
        // brute-force check that no other candidate factor is common
        let candidates = ["t1*t2+1", "t2-1", "t1+1", "t2+1", "t1*t2-1", "t1+t2", "t1-t2", "2"];
        for c in candidates {
            let c = p(c, 2);
            let both = a.exact_div(&c).is_ok() && b.exact_div(&c).is_ok();
            assert!(!both, "{c} divides both");
        }
        assert!(a.exact_div(&g).is_ok() && b.exact_div(&g).is_ok());

        let q = p("t1^2*t2 - 3", 2);
        assert!(q.gcd(&LaurentPoly::zero(2)).unwrap().eq_up_to_units(&q));
        assert_eq!(p("2*t1", 2).gcd(&p("3*t2", 2)).unwrap(), LaurentPoly::one(2));
        assert_eq!(p("6*t1-6", 1).gcd(&p("4*t1^2-4", 1)).unwrap(), p("2*t - 2", 1));
    }

    #[test]
    fn diagonal_substitution_examples() {
        assert_eq!(p("t1*t2+1", 2).substitute_diagonal(), p("t^2+1", 1));
        assert_eq!(
            (p("t1-1", 2) * p("t2-1", 2)).substitute_diagonal(),
            p("t-1", 1).pow(2)
        );
        assert_eq!(p("5", 3).substitute_diagonal(), p("5", 1));
    }

    #[test]
    fn conj_involution_examples() {
        let a = p("t1*t2+1", 2);
        assert_eq!(a.conj_involution(), p("t1^-1*t2^-1 + 1", 2));
        assert!(a.conj_involution().eq_up_to_units(&a));
        assert_eq!(p("t1^2 + t2", 2).conj_involution(), p("t1^-2 + t2^-1", 2));
        assert!(LaurentPoly::zero(2).conj_involution().is_zero());
    }

    #[test]
    fn parser_accepts_grammar_and_rejects_junk() {
        assert_eq!(p(" -2*t1^-1 * t2 + 3 ", 2).to_string(), "3 - 2*t1^-1*t2");
        assert_eq!(p("3t1t2", 2), p("3*t1*t2", 2));
        assert_eq!(p("t1^2*t1", 2), p("t1^3", 2));
        assert_eq!(p("(t1-1)^2*(t2 + 1)", 2), p("t1-1", 2).pow(2) * p("t2+1", 2));
        assert_eq!(p("-(t1 - 1)(t2 - 1)", 2), p("-t1*t2 + t1 + t2 - 1", 2));
        for bad in ["", "t3", "t", "t1^", "1 +", "t1 ** t2", "x", "t1 + - t2", "*t1", "(t1", "(t1)^-1", "()"] {
            assert!(LaurentPoly::parse(bad, 2).is_err(), "{bad:?} parsed");
        }
        let h = LaurentPoly::parse_half_step("t1^(1/2) - t1^(-1/2)", 1).unwrap();
        assert_eq!(h.to_string(), "t^(1/2) - t^(-1/2)");
        assert_eq!(LaurentPoly::parse_half_step(&h.to_string(), 1).unwrap(), h);
        assert!(LaurentPoly::parse("t^(1/2)", 1).is_err());
    }

    #[test]
    fn half_step_conversions() {
        let a = p("t1 - 1", 2);
        let h = a.to_half_step().unwrap();
        assert_eq!(h.to_string(), "t1 - 1");
        assert_eq!(h.coeff(&[2, 0]), BigInt::one());
        assert_eq!(h.from_half_step().unwrap(), a);
        assert!(p("t1", 2).into_half_step().from_half_step().is_err());
    }
}
