//! The λ-bracket engine.
//!
//! For `a = Σ p(∂) X_i` and `b = Σ s(∂) Y_j` the bracket at spectral value
//! `x` is `Σ p(-x) s(∂+x) r(∂, x) Z_{i+j}` by sesquilinearity. Coefficients
//! of the inputs may already depend on other spectral parameters; only ∂ is
//! substituted.

use alloc::vec::Vec;

use super::{AlgebraSpec, BasisKey, Lambda, LambdaElement};
use crate::error::Result;
use crate::poly::{vars, Coefficient, MultiPoly, Poly, Var};

/// Structure terms of `[ka x kb]` with λ replaced by the spectral value.
fn structure_at(
    alg: &AlgebraSpec,
    ka: &BasisKey,
    kb: &BasisKey,
    spectral: &MultiPoly,
) -> Result<Vec<(BasisKey, MultiPoly)>> {
    alg.check_families(&[ka, kb])?;
    let index = ka.index + kb.index;
    alg.table(&ka.family, &kb.family)
        .iter()
        .map(|(fam, r)| Ok((fam.at(index), r.substitute(&Var::L, spectral)?)))
        .collect()
}

/// `[a x b]` where `b` may carry parametrised coefficients.
pub fn bracket_at<C: Coefficient>(
    alg: &AlgebraSpec,
    a: &LambdaElement,
    b: &Lambda<C>,
    spectral: &MultiPoly,
) -> Result<Lambda<C>> {
    let minus = -spectral;
    let shift = &vars::d() + spectral;
    let mut out = Lambda::zero();
    for (ka, pa) in a.terms() {
        let left = pa.substitute(&Var::D, &minus)?;
        for (kb, pb) in b.terms() {
            let table = structure_at(alg, ka, kb, spectral)?;
            if table.is_empty() {
                continue;
            }
            let right: Poly<C> = pb.substitute(&Var::D, &shift)?.mul_poly(&left);
            for (key, r) in table {
                out.add_term(key, &right.mul_poly(&r));
            }
        }
    }
    Ok(out)
}

/// `[a x b]` where `a` may carry parametrised coefficients.
pub fn bracket_at_left<C: Coefficient>(
    alg: &AlgebraSpec,
    a: &Lambda<C>,
    b: &LambdaElement,
    spectral: &MultiPoly,
) -> Result<Lambda<C>> {
    let minus = -spectral;
    let shift = &vars::d() + spectral;
    let mut out = Lambda::zero();
    for (ka, pa) in a.terms() {
        let left: Poly<C> = pa.substitute(&Var::D, &minus)?;
        for (kb, pb) in b.terms() {
            let table = structure_at(alg, ka, kb, spectral)?;
            if table.is_empty() {
                continue;
            }
            let right = pb.substitute(&Var::D, &shift)?;
            let prod = left.mul_poly(&right);
            for (key, r) in table {
                out.add_term(key, &prod.mul_poly(&r));
            }
        }
    }
    Ok(out)
}

/// `[a λ b]`.
pub fn bracket(alg: &AlgebraSpec, a: &LambdaElement, b: &LambdaElement) -> Result<LambdaElement> {
    bracket_at(alg, a, b, &vars::l())
}

/// `-[b_{-λ-∂} a]`, the right-hand side of skew-symmetry. The inner bracket
/// is computed at μ, then μ is replaced by `-λ-∂`.
pub fn conjugate_bracket(alg: &AlgebraSpec, a: &LambdaElement, b: &LambdaElement) -> Result<LambdaElement> {
    let inner = bracket_at(alg, b, a, &vars::m())?;
    let target = -(&vars::l() + &vars::d());
    Ok(inner.substitute(&Var::M, &target)?.neg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn el(text: &str, key: &str) -> LambdaElement {
        LambdaElement::single(BasisKey::parse(key).unwrap(), parse_poly(text).unwrap())
    }

    #[test]
    fn basis_brackets() {
        let csv = AlgebraSpec::builtin("csv").unwrap();
        let r = bracket(&csv, &el("1", "L@1"), &el("1", "L@-1")).unwrap();
        assert_eq!(r, el("d+2*l", "L@0"));
        let r = bracket(&csv, &el("1", "Y@1"), &el("1", "Y@2")).unwrap();
        assert_eq!(r, el("d+2*l", "M@3"));
        let r = bracket(&csv, &el("1", "M@0"), &el("1", "Y@0")).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn sesquilinearity_examples() {
        let cv = AlgebraSpec::builtin("cv").unwrap();
        // [∂L λ L] = -λ (∂+2λ) L
        let r = bracket(&cv, &el("d", "L@0"), &el("1", "L@0")).unwrap();
        assert_eq!(r, el("-l*d-2*l^2", "L@0"));
        // [L λ ∂L] = (∂+λ)(∂+2λ) L
        let r = bracket(&cv, &el("1", "L@0"), &el("d", "L@0")).unwrap();
        assert_eq!(r, el("(d+l)*(d+2*l)", "L@0"));
    }

    #[test]
    fn conjugate_matches_for_builtin_pairs() {
        let csv = AlgebraSpec::builtin("csv").unwrap();
        let a = el("1", "Y@1");
        let b = el("1", "L@0");
        assert_eq!(bracket(&csv, &a, &b).unwrap(), conjugate_bracket(&csv, &a, &b).unwrap());
    }

    #[test]
    fn unknown_family_is_an_error() {
        let cv = AlgebraSpec::builtin("cv").unwrap();
        assert!(bracket(&cv, &el("1", "Q@0"), &el("1", "L@0")).is_err());
    }
}
