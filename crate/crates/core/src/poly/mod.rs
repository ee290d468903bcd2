//! Sparse multivariate polynomials with exact coefficients.
//!
//! One generic container, [`Poly`], serves two coefficient kinds:
//! [`MultiPoly`] (rational coefficients) and [`ParamPoly`] (coefficients
//! that are affine forms in solver unknowns). A `ParamPoly` may be multiplied
//! by a `MultiPoly` but never by another `ParamPoly`, which keeps every
//! system extracted from it linear.
//!
//! Indeterminates are ∂ (`d`), λ (`l`), μ (`m`) and named parameters. Unit
//! parameters (such as the twist `c` of a rank-one module) may carry negative
//! exponents, giving Laurent polynomials in them.

mod linear;
mod parse;

pub use linear::{LinearForm, Unknown, UnknownLabel, Unknowns};
pub use parse::{parse_expr, parse_poly, parse_poly_with_units, Expr, ParseOptions};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A polynomial indeterminate. The global order is ∂ < λ < μ < parameters,
/// parameters ordered by name.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Var {
    /// ∂, printed `d`.
    D,
    /// λ, printed `l`.
    L,
    /// μ, printed `m`.
    M,
    /// A parameter that only takes nonnegative exponents.
    Param(Arc<str>),
    /// An invertible parameter; negative exponents allowed.
    Unit(Arc<str>),
}

impl Var {
    pub fn param(name: &str) -> Var {
        Var::Param(Arc::from(name))
    }

    pub fn unit(name: &str) -> Var {
        Var::Unit(Arc::from(name))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Var::Unit(_))
    }

    pub fn name(&self) -> &str {
        match self {
            Var::D => "d",
            Var::L => "l",
            Var::M => "m",
            Var::Param(n) | Var::Unit(n) => n,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Var::D => 0,
            Var::L => 1,
            Var::M => 2,
            Var::Param(_) | Var::Unit(_) => 3,
        }
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.name().cmp(other.name()))
            .then_with(|| self.is_unit().cmp(&other.is_unit()))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A power product of indeterminates, stored as sorted `(var, exponent)`
/// pairs with nonzero exponents.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// of the earliest variable in the global order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// `var^exp`; rejects negative exponents on non-unit variables.
    pub fn power(var: Var, exp: i32) -> Result<Self> {
        Self::from_pairs([(var, exp)])
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, i32)>>(pairs: I) -> Result<Self> {
        let mut acc: BTreeMap<Var, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *acc.entry(v).or_insert(0) += e;
        }
        let mut out = Vec::with_capacity(acc.len());
        for (v, e) in acc {
            if e == 0 {
                continue;
            }
            if e < 0 && !v.is_unit() {
                return Err(Error::NegativeExponent { var: v.name().to_string() });
            }
            out.push((v, e));
        }
        Ok(Monomial(out))
    }

    pub fn exponents(&self) -> &[(Var, i32)] {
        &self.0
    }

    pub fn exponent(&self, var: &Var) -> i32 {
        self.0.iter().find(|(v, _)| v == var).map_or(0, |(_, e)| *e)
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|(_, e)| *e).sum()
    }

    /// Degree counting only the given variables.
    pub fn degree_in(&self, vars: &[Var]) -> i32 {
        self.0.iter().filter(|(v, _)| vars.contains(v)).map(|(_, e)| *e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Splits into the part in `vars` and the rest.
    pub fn split(&self, vars: &[Var]) -> (Monomial, Monomial) {
        let (inside, outside): (Vec<_>, Vec<_>) =
            self.0.iter().cloned().partition(|(v, _)| vars.contains(v));
        (Monomial(inside), Monomial(outside))
    }

    /// Removes `var`, returning its exponent and the remaining monomial.
    pub fn take(&self, var: &Var) -> (i32, Monomial) {
        let mut exp = 0;
        let rest = self
            .0
            .iter()
            .filter(|(v, e)| {
                if v == var {
                    exp = *e;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (exp, Monomial(rest))
    }

    pub fn inverse(&self) -> Option<Monomial> {
        if self.0.iter().all(|(v, _)| v.is_unit()) {
            Some(Monomial(self.0.iter().map(|(v, e)| (v.clone(), -e)).collect()))
        } else {
            None
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = &Var> {
        self.0.iter().map(|(v, _)| v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (a, b) = (&self.0, &other.0);
            let (mut i, mut j) = (0, 0);
            loop {
                match (a.get(i), b.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some((_, ea)), None) => return ea.cmp(&0),
                    (None, Some((_, eb))) => return 0.cmp(eb),
                    (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                        Ordering::Less => return ea.cmp(&0),
                        Ordering::Greater => return 0.cmp(eb),
                        Ordering::Equal => {
                            if ea != eb {
                                return ea.cmp(eb);
                            }
                            i += 1;
                            j += 1;
                        }
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Coefficient ring of a [`Poly`]: a ℚ-vector space.
pub trait Coefficient: Clone + PartialEq + Eq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn from_rational(r: Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn neg(&self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    /// The coefficient as a plain rational, if it is one.
    fn as_rational(&self) -> Option<Rational>;
    /// Writes the coefficient as a factor in front of a monomial.
    fn write_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result;
}

impl Coefficient for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn write_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Sparse polynomial: monomial → nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<C> {
    terms: BTreeMap<Monomial, C>,
}

/// Polynomial with exact rational coefficients.
pub type MultiPoly = Poly<Rational>;
/// Polynomial whose coefficients are affine in solver unknowns.
pub type ParamPoly = Poly<LinearForm>;

impl<C: Coefficient> Default for Poly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::constant(C::from_rational(r))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_int(n))
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial(alloc::vec![(v, 1)]), C::from_rational(Rational::one()))
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
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

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scale(r))).collect() }
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.neg());
        }
    }

    /// Product with a rational polynomial.
    pub fn mul_poly(&self, other: &MultiPoly) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.scale(c2));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.scale(r))).collect() }
    }

    /// Product of two polynomials of this kind, allowed only when one side
    /// has purely rational coefficients.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if let Some(q) = other.to_rational() {
            Ok(self.mul_poly(&q))
        } else if let Some(p) = self.to_rational() {
            Ok(other.mul_poly(&p))
        } else {
            Err(Error::NonlinearCombination)
        }
    }

    /// Converts to a rational polynomial when every coefficient is rational.
    pub fn to_rational(&self) -> Option<MultiPoly> {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.as_rational()?);
        }
        Some(out)
    }

    pub fn map_coeffs<D: Coefficient, F: FnMut(&C) -> D>(&self, mut f: F) -> Poly<D> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Replaces `var` by `value` (exact composition).
    ///
    /// Negative powers of `var` require `value` to be a single invertible
    /// monomial; otherwise a `unit-substitution` error is returned.
    pub fn substitute(&self, var: &Var, value: &MultiPoly) -> Result<Self> {
        let mut powers: BTreeMap<i32, MultiPoly> = BTreeMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (exp, rest) = m.take(var);
            if exp == 0 {
                out.add_term(rest, c.clone());
                continue;
            }
            if !powers.contains_key(&exp) {
                let pw = if exp > 0 {
                    value.pow(exp as u32)
                } else {
                    value
                        .unit_inverse()
                        .ok_or_else(|| Error::UnitSubstitution { var: var.name().to_string() })?
                        .pow((-exp) as u32)
                };
                powers.insert(exp, pw);
            }
            let pw = &powers[&exp];
            for (pm, pc) in pw.terms() {
                out.add_term(rest.mul(pm), c.scale(pc));
            }
        }
        Ok(out)
    }

    /// Groups terms by their monomial in `vars`; the values are polynomials
    /// in the remaining indeterminates. Summing `monomial · value` over the
    /// result reconstructs `self`.
    pub fn collect(&self, vars: &[Var]) -> BTreeMap<Monomial, Self> {
        let mut out: BTreeMap<Monomial, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (inside, outside) = m.split(vars);
            out.entry(inside).or_default().add_term(outside, c.clone());
        }
        out
    }

    pub fn total_degree(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Largest exponent of `var` (0 for the zero polynomial).
    pub fn degree_in(&self, var: &Var) -> i32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.variables().cloned()).collect()
    }

    pub fn is_free_of(&self, var: &Var) -> bool {
        self.terms.keys().all(|m| m.exponent(var) == 0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }
}

impl MultiPoly {
    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.mul_poly(other)
    }

    pub fn pow(&self, exp: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse of a single monomial in unit variables with nonzero
    /// coefficient.
    pub fn unit_inverse(&self) -> Option<MultiPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        Some(MultiPoly::term(m.inverse()?, c.recip()?))
    }

    pub fn to_param(&self) -> ParamPoly {
        self.map_coeffs(|c| LinearForm::constant(c.clone()))
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }
}

impl ParamPoly {
    /// Sets the unknowns to rational values.
    pub fn specialize<F: Fn(Unknown) -> Rational>(&self, value: F) -> MultiPoly {
        self.map_coeffs(|c| c.evaluate(&value))
    }

    /// Re-expresses every coefficient through `image(u)` for each unknown.
    pub fn compose<F: Fn(Unknown) -> LinearForm>(&self, image: F) -> ParamPoly {
        self.map_coeffs(|c| c.compose(&image))
    }

    /// The linear equations stating `self ≡ 0`: one per monomial, in
    /// descending monomial order.
    pub fn equations_from_zero(&self) -> Vec<LinearForm> {
        self.terms.values().rev().cloned().collect()
    }

    pub fn unknowns(&self) -> BTreeSet<Unknown> {
        self.terms.values().flat_map(|c| c.coefficients().keys().copied()).collect()
    }
}

impl MultiPoly {
    /// Parses the polynomial text syntax with no unit variables.
    pub fn parse(text: &str) -> Result<MultiPoly> {
        parse_poly(text)
    }
}

impl<C: Coefficient> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            match c.as_rational() {
                Some(r) => {
                    if r.is_negative() {
                        f.write_str("-")?;
                    } else if k > 0 {
                        f.write_str("+")?;
                    }
                    let a = r.abs();
                    if m.is_one() {
                        write!(f, "{}", a)?;
                    } else if a.is_one() {
                        write!(f, "{}", m)?;
                    } else {
                        write!(f, "{}*{}", a, m)?;
                    }
                }
                None => {
                    if k > 0 {
                        f.write_str("+")?;
                    }
                    c.write_factor(f)?;
                    if !m.is_one() {
                        write!(f, "*{}", m)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl<C: Coefficient> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl<C: Coefficient> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(mut self, rhs: Poly<C>) -> Poly<C> {
        self.add_assign(&rhs);
        self
    }
}

impl<C: Coefficient> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
}

impl<C: Coefficient> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(mut self, rhs: Poly<C>) -> Poly<C> {
        self.sub_assign(&rhs);
        self
    }
}

impl<C: Coefficient> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::neg(self)
    }
}

impl<C: Coefficient> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::neg(&self)
    }
}

impl<C: Coefficient> Mul<&MultiPoly> for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &MultiPoly) -> Poly<C> {
        self.mul_poly(rhs)
    }
}

/// Shorthand constructors used throughout the kernel.
pub mod vars {
    use super::{MultiPoly, Var};

    pub fn d() -> MultiPoly {
        MultiPoly::var(Var::D)
    }
    pub fn l() -> MultiPoly {
        MultiPoly::var(Var::L)
    }
    pub fn m() -> MultiPoly {
        MultiPoly::var(Var::M)
    }
}

/// Joins displayed items with `sep`; small helper for report text.
pub fn join_display<T: fmt::Display>(items: &[T], sep: &str) -> String {
    let mut out = String::new();
    for (k, it) in items.iter().enumerate() {
        if k > 0 {
            out.push_str(sep);
        }
        out.push_str(&it.to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::vars::{d, l, m};
    use super::*;
    use alloc::vec;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn add_cancels() {
        assert_eq!(&p("d+2*l") + &p("-2*l"), d());
    }

    #[test]
    fn multiply_expands() {
        let prod = p("d+l").mul(&p("d+l+2*m"));
        assert_eq!(prod, p("d^2+2*l*d+2*m*d+l^2+2*l*m"));
        assert_eq!(prod.to_string(), "d^2+2*d*l+2*d*m+l^2+2*l*m");
    }

    #[test]
    fn scale_param_poly() {
        let x = LinearForm::unknown(Unknown(0));
        let pp = p("d+2*l").map_coeffs(|c| x.scale(c));
        let scaled = pp.scale(&Rational::from_int(3));
        assert_eq!(scaled, p("3*d+6*l").map_coeffs(|c| x.scale(c)));
    }

    #[test]
    fn param_times_param_rejected() {
        let x = p("l").map_coeffs(|c| LinearForm::unknown(Unknown(0)).scale(c));
        let y = p("d").map_coeffs(|c| LinearForm::unknown(Unknown(1)).scale(c));
        assert_eq!(x.try_mul(&y), Err(Error::NonlinearCombination));
        assert!(x.try_mul(&p("d").to_param()).is_ok());
    }

    #[test]
    fn substitution_examples() {
        let skew = p("1/2*d+3/2*l").substitute(&Var::L, &(-&(&l() + &d()))).unwrap();
        assert_eq!(skew, p("-d-3/2*l"));
        let shifted = p("d+2*l").substitute(&Var::D, &(&d() + &m())).unwrap();
        assert_eq!(shifted, p("d+m+2*l"));
        let units = ParseOptions::with_units(&["c"]);
        let q = parse_poly_with_units("c^-1*d", &units).unwrap();
        let c = parse_poly_with_units("c", &units).unwrap();
        assert_eq!(q.substitute(&Var::unit("c"), &c).unwrap(), q);
    }

    #[test]
    fn unit_substitution_error() {
        let units = ParseOptions::with_units(&["c"]);
        let q = parse_poly_with_units("c^-1", &units).unwrap();
        let bad = parse_poly_with_units("c+1", &units).unwrap();
        assert!(matches!(q.substitute(&Var::unit("c"), &bad), Err(Error::UnitSubstitution { .. })));
        let half = MultiPoly::from_rational(Rational::new(1, 2));
        assert_eq!(q.substitute(&Var::unit("c"), &half).unwrap(), MultiPoly::from_int(2));
    }

    #[test]
    fn collect_examples() {
        let got = p("d*l+2*l+m").collect(&[Var::L, Var::M]);
        assert_eq!(got.len(), 2);
        assert_eq!(got[&Monomial::power(Var::L, 1).unwrap()], p("d+2"));
        assert_eq!(got[&Monomial::power(Var::M, 1).unwrap()], p("1"));

        let jac = p("(l-m)*(l+m)^3").collect(&[Var::L, Var::M]);
        let mono = |a, b| Monomial::from_pairs([(Var::L, a), (Var::M, b)]).unwrap();
        let expected: BTreeMap<Monomial, MultiPoly> = vec![
            (mono(4, 0), p("1")),
            (mono(3, 1), p("2")),
            (mono(1, 3), p("-2")),
            (mono(0, 4), p("-1")),
        ]
        .into_iter()
        .collect();
        assert_eq!(jac, expected);

        let (x, y) = (Unknown(0), Unknown(1));
        let lin = l().map_coeffs(|c| LinearForm::unknown(x).scale(c))
            + l().map_coeffs(|c| LinearForm::unknown(y).scale(c));
        let got = lin.collect(&[Var::L]);
        let mut xy = LinearForm::unknown(x);
        xy.add_assign(&LinearForm::unknown(y));
        assert_eq!(got[&Monomial::power(Var::L, 1).unwrap()], ParamPoly::constant(xy));
    }

    #[test]
    fn equations_from_zero_examples() {
        assert!(ParamPoly::zero().equations_from_zero().is_empty());
        let (x, y) = (Unknown(0), Unknown(1));
        let pp = l().map_coeffs(|c| LinearForm::unknown(x).scale(c))
            + p("d+l").map_coeffs(|c| LinearForm::unknown(y).scale(c));
        let eqs = pp.equations_from_zero();
        let mut xy = LinearForm::unknown(x);
        xy.add_assign(&LinearForm::unknown(y));
        assert_eq!(eqs.len(), 2);
        assert!(eqs.contains(&xy));
        assert!(eqs.contains(&LinearForm::unknown(y)));

        let pp = p("2*l").map_coeffs(|c| LinearForm::unknown(x).scale(c)) - l().to_param();
        let mut expect = LinearForm::term(x, Rational::from_int(2));
        expect.add_assign(&LinearForm::constant(Rational::from_int(-1)));
        assert_eq!(pp.equations_from_zero(), vec![expect]);
    }

    #[test]
    fn monomial_order_is_graded() {
        let a = Monomial::power(Var::D, 2).unwrap();
        let b = Monomial::from_pairs([(Var::D, 1), (Var::L, 1)]).unwrap();
        let c = Monomial::power(Var::L, 3).unwrap();
        assert!(a > b);
        assert!(c > a);
        assert!(Monomial::power(Var::D, 1).unwrap() > Monomial::power(Var::L, 1).unwrap());
    }

    #[test]
    fn negative_exponent_needs_unit() {
        assert!(Monomial::power(Var::param("a"), -1).is_err());
        assert!(Monomial::power(Var::unit("c"), -1).is_ok());
    }
}
