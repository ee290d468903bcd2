//! Translation of local commutators `[a(z), b(w)] = Σ_j c^j(w) ∂_w^j δ(z,w) / j!`
//! into λ-brackets `Σ_j λ^j / j! · c^j`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{AlgebraSpec, BasisKey, Element, LambdaElement};
use crate::error::{Error, Result};
use crate::poly::{parse_poly, vars, MultiPoly, Var};
use crate::rational::Rational;

/// Coefficient `c^j` of `∂_w^j δ(z,w) / j!`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpeTerm {
    pub j: u32,
    pub value: Element,
}

/// A commutator `[left(z), right(w)]` given by its OPE coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpeCommutator {
    pub left: BasisKey,
    pub right: BasisKey,
    pub terms: Vec<OpeTerm>,
}

pub fn ope_to_lambda(terms: &[OpeTerm]) -> LambdaElement {
    let mut out = LambdaElement::zero();
    for t in terms {
        let weight = vars::l().pow(t.j).scale(&Rational::factorial(t.j).recip().expect("j! > 0"));
        out.add_assign(&t.value.mul_poly(&weight));
    }
    out
}

/// The seven nonzero commutators of the extended loop Schrödinger–Virasoro
/// algebra at indices `(i, j)`. The remaining nonzero pairs follow by
/// skew-symmetry.
pub fn builtin_ope_table(i: i64, j: i64) -> Vec<OpeCommutator> {
    let s = i + j;
    let term = |j: u32, fam: &str, poly: &str| OpeTerm {
        j,
        value: Element::single(BasisKey::new(fam, s), parse_poly(poly).expect("table polynomial")),
    };
    let comm = |a: &str, b: &str, terms: Vec<OpeTerm>| OpeCommutator {
        left: BasisKey::new(a, i),
        right: BasisKey::new(b, j),
        terms,
    };
    vec![
        comm("L", "L", vec![term(0, "L", "d"), term(1, "L", "2")]),
        comm("L", "M", vec![term(0, "M", "d"), term(1, "M", "1")]),
        comm("L", "Y", vec![term(0, "Y", "d"), term(1, "Y", "3/2")]),
        comm("Y", "Y", vec![term(0, "M", "d"), term(1, "M", "2")]),
        comm("L", "N", vec![term(0, "N", "d"), term(1, "N", "1")]),
        comm("N", "M", vec![term(0, "M", "2")]),
        comm("N", "Y", vec![term(0, "Y", "1")]),
    ]
}

/// Builds an algebra from commutator data. Pairs whose reverse is given but
/// which are absent themselves are filled in by `r(∂,λ) ↦ -r(∂,-λ-∂)`.
pub fn algebra_from_ope(name: &str, families: &[&str], commutators: &[OpeCommutator]) -> Result<AlgebraSpec> {
    let mut alg = AlgebraSpec::new(name, families)?;
    let mut given: Vec<(String, String, Vec<(String, MultiPoly)>)> = Vec::new();
    for c in commutators {
        let s = c.left.index + c.right.index;
        let lam = ope_to_lambda(&c.terms);
        let mut out = Vec::new();
        for (k, p) in lam.terms() {
            if k.index != s {
                return Err(Error::InvalidSpec(format!(
                    "[{}, {}] has a term at {}; expected index {}",
                    c.left, c.right, k, s
                )));
            }
            if p.variables().iter().any(|v| !matches!(v, Var::D | Var::L)) {
                return Err(Error::InvalidSpec(format!("OPE coefficient of {} must be a polynomial in d", k)));
            }
            out.push((k.family.as_str().into(), p.clone()));
        }
        given.push((c.left.family.as_str().into(), c.right.family.as_str().into(), out));
    }
    let set = |alg: &mut AlgebraSpec, a: &str, b: &str, out: &[(String, MultiPoly)]| {
        let refs: Vec<(&str, MultiPoly)> = out.iter().map(|(f, p)| (f.as_str(), p.clone())).collect();
        alg.set_bracket(a, b, &refs)
    };
    for (a, b, out) in &given {
        set(&mut alg, a, b, out)?;
    }
    let target = -(&vars::l() + &vars::d());
    for (a, b, out) in &given {
        if given.iter().any(|(x, y, _)| x == b && y == a) {
            continue;
        }
        let mut conj = Vec::new();
        for (f, p) in out {
            conj.push((f.clone(), p.substitute(&Var::L, &target)?.neg()));
        }
        set(&mut alg, b, a, &conj)?;
    }
    Ok(alg)
}

/// Family pairs on which two tables disagree, with both sides printed.
pub fn table_diff(a: &AlgebraSpec, b: &AlgebraSpec) -> Vec<String> {
    let mut fams: Vec<_> = a.families().iter().chain(b.families()).cloned().collect();
    fams.sort();
    fams.dedup();
    let show = |t: &[(super::FamilyId, MultiPoly)]| -> String {
        if t.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = t.iter().map(|(f, p)| format!("({})*{}", p, f)).collect();
        parts.join(" + ")
    };
    let mut out = Vec::new();
    for x in &fams {
        for y in &fams {
            let (ta, tb) = (a.table(x, y), b.table(x, y));
            if ta != tb {
                out.push(format!("[{} λ {}]: {} vs {}", x, y, show(ta), show(tb)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_translations() {
        let t = [
            OpeTerm { j: 0, value: Element::single(BasisKey::new("L", 1), parse_poly("d").unwrap()) },
            OpeTerm { j: 1, value: Element::single(BasisKey::new("L", 1), parse_poly("2").unwrap()) },
        ];
        assert_eq!(ope_to_lambda(&t), LambdaElement::single(BasisKey::new("L", 1), parse_poly("d+2*l").unwrap()));
        assert!(ope_to_lambda(&[]).is_zero());
        let t = [OpeTerm { j: 2, value: Element::basis(BasisKey::new("M", 0)) }];
        assert_eq!(ope_to_lambda(&t), LambdaElement::single(BasisKey::new("M", 0), parse_poly("1/2*l^2").unwrap()));
    }

    #[test]
    fn wrong_index_is_rejected() {
        let c = OpeCommutator {
            left: BasisKey::new("L", 0),
            right: BasisKey::new("L", 1),
            terms: vec![OpeTerm { j: 0, value: Element::basis(BasisKey::new("L", 0)) }],
        };
        assert!(algebra_from_ope("t", &["L"], &[c]).is_err());
    }
}
