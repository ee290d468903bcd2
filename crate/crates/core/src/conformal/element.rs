use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::BasisKey;
use crate::error::Result;
use crate::poly::{Coefficient, LinearForm, MultiPoly, Poly, Var};
use crate::rational::Rational;

/// Finite sum `Σ p_k · X_k` with polynomial coefficients over basis keys.
///
/// Algebra elements have coefficients in ∂ only; bracket results carry λ
/// (and μ) as well. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lambda<C> {
    terms: BTreeMap<BasisKey, Poly<C>>,
}

/// Element of the algebra (coefficients in ℂ[∂]).
pub type Element = Lambda<Rational>;
/// Bracket value with coefficients in ℂ[∂, λ, μ, …].
pub type LambdaElement = Lambda<Rational>;
/// Same, with coefficients linear in solver unknowns.
pub type ParamLambda = Lambda<LinearForm>;

impl<C: Coefficient> Default for Lambda<C> {
    fn default() -> Self {
        Lambda { terms: BTreeMap::new() }
    }
}

impl<C: Coefficient> Lambda<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: BasisKey, coeff: Poly<C>) -> Self {
        let mut out = Self::zero();
        out.add_term(key, &coeff);
        out
    }

    pub fn add_term(&mut self, key: BasisKey, coeff: &Poly<C>) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_default();
        slot.add_assign(coeff);
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, p) in &other.terms {
            self.add_term(k.clone(), p);
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (k, p) in &other.terms {
            self.add_term(k.clone(), &p.neg());
        }
    }

    pub fn neg(&self) -> Self {
        Lambda { terms: self.terms.iter().map(|(k, p)| (k.clone(), p.neg())).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Lambda { terms: self.terms.iter().map(|(k, p)| (k.clone(), p.scale(r))).collect() }
    }

    /// Multiplies every coefficient by a rational polynomial.
    pub fn mul_poly(&self, q: &MultiPoly) -> Self {
        let mut out = Self::zero();
        for (k, p) in &self.terms {
            out.add_term(k.clone(), &p.mul_poly(q));
        }
        out
    }

    pub fn substitute(&self, var: &Var, value: &MultiPoly) -> Result<Self> {
        let mut out = Self::zero();
        for (k, p) in &self.terms {
            out.add_term(k.clone(), &p.substitute(var, value)?);
        }
        Ok(out)
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

    pub fn terms(&self) -> impl Iterator<Item = (&BasisKey, &Poly<C>)> {
        self.terms.iter()
    }

    pub fn get(&self, key: &BasisKey) -> Option<&Poly<C>> {
        self.terms.get(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &BasisKey> {
        self.terms.keys()
    }

    pub fn map_coeffs<D: Coefficient, F: FnMut(&C) -> D>(&self, mut f: F) -> Lambda<D> {
        let mut out = Lambda::zero();
        for (k, p) in &self.terms {
            out.add_term(k.clone(), &p.map_coeffs(&mut f));
        }
        out
    }

    /// Every coefficient equation `coefficient = 0` over all keys and
    /// monomials, for parametrised residuals.
    pub fn coefficients(&self) -> Vec<(&BasisKey, &crate::poly::Monomial, &C)> {
        self.terms.iter().flat_map(|(k, p)| p.terms().map(move |(m, c)| (k, m, c))).collect()
    }
}

impl Lambda<Rational> {
    pub fn basis(key: BasisKey) -> Self {
        Self::single(key, MultiPoly::one())
    }

    pub fn to_param(&self) -> ParamLambda {
        self.map_coeffs(|c| LinearForm::constant(c.clone()))
    }
}

impl ParamLambda {
    pub fn specialize<F: Fn(crate::poly::Unknown) -> Rational>(&self, value: F) -> LambdaElement {
        let mut out = LambdaElement::zero();
        for (k, p) in &self.terms {
            out.add_term(k.clone(), &p.specialize(&value));
        }
        out
    }

    /// All linear equations obtained by setting every coefficient to zero.
    pub fn equations_from_zero(&self) -> Vec<LinearForm> {
        self.terms.values().flat_map(|p| p.equations_from_zero()).collect()
    }
}

impl<C: Coefficient> fmt::Display for Lambda<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, p) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})*{}", p, k)?;
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for Lambda<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<C: Coefficient> Lambda<C> {
    pub fn to_text(&self) -> String {
        alloc::format!("{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn cancellation_removes_keys() {
        let k = BasisKey::new("L", 1);
        let mut a = Element::single(k.clone(), parse_poly("d+1").unwrap());
        a.add_term(k, &parse_poly("-d-1").unwrap());
        assert!(a.is_zero());
        assert_eq!(a.to_string(), "0");
    }

    #[test]
    fn display() {
        let mut a = Element::basis(BasisKey::new("M", 0));
        a.add_term(BasisKey::new("L", -1), &parse_poly("2*d").unwrap());
        assert_eq!(a.to_string(), "(2*d)*L@-1 + (1)*M@0");
    }
}
