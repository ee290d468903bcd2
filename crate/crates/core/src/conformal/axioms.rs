//! Skew-symmetry and Jacobi checks over a finite window.
//!
//! Structure polynomials do not depend on indices, so one instance of each
//! family tuple already decides the identity for all of ℤ. The windowed
//! sweep is still run in full: it exercises the index bookkeeping too.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{bracket, bracket_at, conjugate_bracket, AlgebraSpec, BasisKey, LambdaElement, Window};
use crate::error::Result;
use crate::poly::vars;

/// One checked instance. `residual` is `"0"` when it passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub label: String,
    pub passed: bool,
    pub residual: String,
}

impl CheckItem {
    pub fn from_residual<T: core::fmt::Display>(label: String, residual: &T, passed: bool) -> Self {
        CheckItem { label, passed, residual: residual.to_string() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub items: Vec<CheckItem>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(name: &str) -> Self {
        CheckReport { name: name.to_string(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.passed)
    }

    pub fn push(&mut self, item: CheckItem) {
        self.items.push(item);
    }
}

/// Ordered key pairs `(X_i, Y_j)` with `i, j, i+j` in the window.
pub fn skew_items(alg: &AlgebraSpec, w: Window) -> Vec<(BasisKey, BasisKey)> {
    let keys = alg.keys_in(w);
    let mut out = Vec::new();
    for a in &keys {
        for b in &keys {
            if w.contains(a.index + b.index) {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// `[a λ b] + [b_{-λ-∂} a]`.
pub fn skew_residual(alg: &AlgebraSpec, a: &BasisKey, b: &BasisKey) -> Result<LambdaElement> {
    let ea = LambdaElement::basis(a.clone());
    let eb = LambdaElement::basis(b.clone());
    let mut r = bracket(alg, &ea, &eb)?;
    r.sub_assign(&conjugate_bracket(alg, &ea, &eb)?);
    Ok(r)
}

pub fn check_skew(alg: &AlgebraSpec, w: Window) -> Result<CheckReport> {
    let mut report = CheckReport::new("skew-symmetry");
    for (a, b) in skew_items(alg, w) {
        let r = skew_residual(alg, &a, &b)?;
        report.push(CheckItem::from_residual(format!("({}, {})", a, b), &r, r.is_zero()));
    }
    Ok(report)
}

/// Key triples with every partial index sum in the window.
pub fn jacobi_items(alg: &AlgebraSpec, w: Window) -> Vec<(BasisKey, BasisKey, BasisKey)> {
    let keys = alg.keys_in(w);
    let mut out = Vec::new();
    for a in &keys {
        for b in &keys {
            if !w.contains(a.index + b.index) {
                continue;
            }
            for c in &keys {
                let (i, j, k) = (a.index, b.index, c.index);
                if w.contains(j + k) && w.contains(i + k) && w.contains(i + j + k) {
                    out.push((a.clone(), b.clone(), c.clone()));
                }
            }
        }
    }
    out
}

/// `[a λ [b μ c]] - [[a λ b]_{λ+μ} c] - [b μ [a λ c]]`.
pub fn jacobi_residual(alg: &AlgebraSpec, a: &BasisKey, b: &BasisKey, c: &BasisKey) -> Result<LambdaElement> {
    let (l, m) = (vars::l(), vars::m());
    let lm = &l + &m;
    let ea = LambdaElement::basis(a.clone());
    let eb = LambdaElement::basis(b.clone());
    let ec = LambdaElement::basis(c.clone());
    let mut r = bracket_at(alg, &ea, &bracket_at(alg, &eb, &ec, &m)?, &l)?;
    r.sub_assign(&bracket_at(alg, &bracket_at(alg, &ea, &eb, &l)?, &ec, &lm)?);
    r.sub_assign(&bracket_at(alg, &eb, &bracket_at(alg, &ea, &ec, &l)?, &m)?);
    Ok(r)
}

pub fn check_jacobi(alg: &AlgebraSpec, w: Window) -> Result<CheckReport> {
    let mut report = CheckReport::new("jacobi");
    for (a, b, c) in jacobi_items(alg, w) {
        let r = jacobi_residual(alg, &a, &b, &c)?;
        report.push(CheckItem::from_residual(format!("({}, {}, {})", a, b, c), &r, r.is_zero()));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn builtins_satisfy_axioms() {
        let w = Window::new(-2, 2).unwrap();
        for name in AlgebraSpec::BUILTIN_NAMES {
            let alg = AlgebraSpec::builtin(name).unwrap();
            assert!(check_skew(&alg, w).unwrap().passed(), "{}", name);
            let j = check_jacobi(&alg, w).unwrap();
            assert!(!j.items.is_empty());
            assert!(j.passed(), "{}", name);
        }
    }

    #[test]
    fn tampered_table_fails() {
        let mut alg = AlgebraSpec::builtin("csv").unwrap();
        alg.set_bracket("Y", "L", &[("Y", parse_poly("d+3/2*l").unwrap())]).unwrap();
        let w = Window::new(-1, 1).unwrap();
        let skew = check_skew(&alg, w).unwrap();
        assert!(!skew.passed());
        assert!(skew.failures().any(|f| f.label.contains("Y@")));
    }

    #[test]
    fn jacobi_catches_wrong_weight() {
        let mut alg = AlgebraSpec::builtin("chv").unwrap();
        alg.set_bracket("L", "M", &[("M", parse_poly("d+2*l").unwrap())]).unwrap();
        alg.set_bracket("M", "L", &[("M", parse_poly("d+2*l").unwrap())]).unwrap();
        let w = Window::new(-1, 1).unwrap();
        assert!(check_skew(&alg, w).unwrap().passed());
        assert!(check_jacobi(&alg, w).unwrap().passed(), "weight-2 M is still a module");
        alg.set_bracket("M", "M", &[("M", parse_poly("1").unwrap())]).unwrap();
        assert!(!check_jacobi(&alg, w).unwrap().passed());
    }
}
