//! Unknowns and affine forms over them, the coefficients of [`ParamPoly`].
//!
//! [`ParamPoly`]: super::ParamPoly

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::Coefficient;
use crate::rational::Rational;

/// Handle of a solver unknown. Labels live in the [`Unknowns`] registry that
/// issued it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Unknown(pub u32);

impl Unknown {
    pub fn id(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Human-readable label of an unknown.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct UnknownLabel {
    pub name: String,
    pub index: Vec<i64>,
}

/// Registry issuing unknowns for one solve session. Labels are unique.
#[derive(Clone, Debug, Default)]
pub struct Unknowns {
    labels: Vec<UnknownLabel>,
    by_label: BTreeMap<UnknownLabel, Unknown>,
}

impl Unknowns {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the unknown carrying `label`, creating it on first use.
    pub fn get_or_create(&mut self, name: &str, index: &[i64]) -> Unknown {
        let label = UnknownLabel { name: String::from(name), index: index.to_vec() };
        if let Some(u) = self.by_label.get(&label) {
            return *u;
        }
        let u = Unknown(self.labels.len() as u32);
        self.labels.push(label.clone());
        self.by_label.insert(label, u);
        u
    }

    pub fn label(&self, u: Unknown) -> &UnknownLabel {
        &self.labels[u.id()]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Unknown> + '_ {
        (0..self.labels.len() as u32).map(Unknown)
    }
}

/// `constant + Σ coefficient·unknown`, with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LinearForm {
    constant: Rational,
    coefficients: BTreeMap<Unknown, Rational>,
}

impl LinearForm {
    pub fn constant(c: Rational) -> Self {
        LinearForm { constant: c, coefficients: BTreeMap::new() }
    }

    pub fn unknown(u: Unknown) -> Self {
        Self::term(u, Rational::one())
    }

    pub fn term(u: Unknown, coeff: Rational) -> Self {
        let mut coefficients = BTreeMap::new();
        if !coeff.is_zero() {
            coefficients.insert(u, coeff);
        }
        LinearForm { constant: Rational::zero(), coefficients }
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn coefficients(&self) -> &BTreeMap<Unknown, Rational> {
        &self.coefficients
    }

    pub fn coefficient(&self, u: Unknown) -> Rational {
        self.coefficients.get(&u).cloned().unwrap_or_else(Rational::zero)
    }

    /// True when no unknown appears.
    pub fn is_constant(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Evaluates the form at `value(u)` for each unknown.
    pub fn evaluate<F: Fn(Unknown) -> Rational>(&self, value: F) -> Rational {
        let mut acc = self.constant.clone();
        for (u, c) in &self.coefficients {
            acc += &(c * &value(*u));
        }
        acc
    }

    /// Replaces each unknown by a linear form (used to re-express a form in
    /// terms of free solution parameters).
    pub fn compose<F: Fn(Unknown) -> LinearForm>(&self, image: F) -> LinearForm {
        let mut acc = LinearForm::constant(self.constant.clone());
        for (u, c) in &self.coefficients {
            acc.add_assign(&image(*u).scale(c));
        }
        acc
    }
}

impl Coefficient for LinearForm {
    fn zero() -> Self {
        LinearForm::default()
    }

    fn from_rational(r: Rational) -> Self {
        LinearForm::constant(r)
    }

    fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coefficients.is_empty()
    }

    fn add_assign(&mut self, other: &Self) {
        self.constant += &other.constant;
        for (u, c) in &other.coefficients {
            let slot = self.coefficients.entry(*u).or_insert_with(Rational::zero);
            *slot += c;
            if slot.is_zero() {
                self.coefficients.remove(u);
            }
        }
    }

    fn neg(&self) -> Self {
        LinearForm {
            constant: -&self.constant,
            coefficients: self.coefficients.iter().map(|(u, c)| (*u, -c)).collect(),
        }
    }

    fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return LinearForm::default();
        }
        LinearForm {
            constant: &self.constant * r,
            coefficients: self.coefficients.iter().map(|(u, c)| (*u, c * r)).collect(),
        }
    }

    fn as_rational(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.constant.clone())
        } else {
            None
        }
    }

    fn write_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (u, c) in &self.coefficients {
            write_signed(f, c, first)?;
            if c.abs().is_one() {
                write!(f, "{}", u)?;
            } else {
                write!(f, "{}*{}", c.abs(), u)?;
            }
            first = false;
        }
        if !self.constant.is_zero() || first {
            write_signed(f, &self.constant, first)?;
            write!(f, "{}", self.constant.abs())?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn write_signed(f: &mut fmt::Formatter<'_>, c: &Rational, first: bool) -> fmt::Result {
    if c.is_negative() {
        f.write_str("-")
    } else if !first {
        f.write_str("+")
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn registry_reuses_labels() {
        let mut reg = Unknowns::new();
        let a = reg.get_or_create("h", &[0, 1]);
        let b = reg.get_or_create("h", &[0, 2]);
        assert_ne!(a, b);
        assert_eq!(reg.get_or_create("h", &[0, 1]), a);
        assert_eq!(reg.len(), 2);
    }

    #[test]
    fn cancellation_drops_entries() {
        let x = Unknown(0);
        let mut f = LinearForm::unknown(x);
        f.add_assign(&LinearForm::term(x, Rational::from_int(-1)));
        assert!(Coefficient::is_zero(&f));
        assert_eq!(f.to_string(), "0");
    }

    #[test]
    fn display() {
        let mut f = LinearForm::term(Unknown(1), Rational::from_int(2));
        f.add_assign(&LinearForm::constant(Rational::from_int(-1)));
        assert_eq!(f.to_string(), "2*x1-1");
    }
}
