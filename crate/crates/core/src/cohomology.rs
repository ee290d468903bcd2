//! Second cohomology with trivial coefficients.
//!
//! A 2-cochain is stored by its values `φ_λ(X_i, Y_j) ∈ ℂ[λ]` on basis keys
//! and extended by `φ_λ(∂a, b) = -λ φ_λ(a, b)`, `φ_λ(a, ∂b) = λ φ_λ(a, b)`.
//! Cochains are treated as vanishing on every pair of keys of the window
//! that carries no entry.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::conformal::{
    bracket, bracket_at, jacobi_items, skew_items, AlgebraSpec, BasisKey, CheckItem, CheckReport, LambdaElement, Window,
};
use crate::error::{Error, Result};
use crate::linalg::{homogeneous_nullspace, quotient_dim, row_from_form, Echelon, SparseVec};
use crate::poly::{vars, Coefficient, LinearForm, Monomial, MultiPoly, Poly, Unknown, Var};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CocycleTable<C: Coefficient = Rational> {
    domain: Window,
    entries: BTreeMap<(BasisKey, BasisKey), Poly<C>>,
}

impl<C: Coefficient> CocycleTable<C> {
    pub fn new(domain: Window) -> Self {
        CocycleTable { domain, entries: BTreeMap::new() }
    }

    pub fn domain(&self) -> Window {
        self.domain
    }

    /// Sets `φ_λ(a, b)`. The value must be a polynomial in λ (and
    /// parameters) only.
    pub fn set(&mut self, a: BasisKey, b: BasisKey, value: Poly<C>) -> Result<()> {
        if value.variables().iter().any(|v| matches!(v, Var::D | Var::M)) {
            return Err(Error::InvalidSpec(format!("cocycle value on ({}, {}) must not involve d or m", a, b)));
        }
        if value.is_zero() {
            self.entries.remove(&(a, b));
        } else {
            self.entries.insert((a, b), value);
        }
        Ok(())
    }

    /// `φ_λ(a, b)`; zero for unset pairs inside the domain.
    pub fn get(&self, a: &BasisKey, b: &BasisKey) -> Result<Poly<C>> {
        for k in [a, b] {
            if !self.domain.contains(k.index) {
                return Err(Error::WindowUnderflow { key: format!("{}", k) });
            }
        }
        Ok(self.entries.get(&(a.clone(), b.clone())).cloned().unwrap_or_default())
    }

    /// Nonzero entries in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&(BasisKey, BasisKey), &Poly<C>)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `φ_x(a, b)` for elements whose coefficients may involve ∂ and the
    /// spectral variables.
    pub fn eval(&self, a: &LambdaElement, b: &LambdaElement, x: &MultiPoly) -> Result<Poly<C>> {
        let minus = -x;
        let mut out = Poly::zero();
        for (ka, pa) in a.terms() {
            let left = pa.substitute(&Var::D, &minus)?;
            for (kb, pb) in b.terms() {
                let v = self.get(ka, kb)?;
                if v.is_zero() {
                    continue;
                }
                let right = pb.substitute(&Var::D, x)?;
                out.add_assign(&v.substitute(&Var::L, x)?.mul_poly(&left.mul(&right)));
            }
        }
        Ok(out)
    }
}

/// `φ_λ(a, b) + φ_{-λ}(b, a)`.
pub fn cocycle_skew_residual<C: Coefficient>(t: &CocycleTable<C>, a: &BasisKey, b: &BasisKey) -> Result<Poly<C>> {
    let mut r = t.get(a, b)?;
    r.add_assign(&t.get(b, a)?.substitute(&Var::L, &-vars::l())?);
    Ok(r)
}

/// `φ_{λ+μ}([a λ b], c) - φ_λ(a, [b μ c]) + φ_μ(b, [a λ c])`.
pub fn cocycle_jacobi_residual<C: Coefficient>(
    alg: &AlgebraSpec,
    t: &CocycleTable<C>,
    a: &BasisKey,
    b: &BasisKey,
    c: &BasisKey,
) -> Result<Poly<C>> {
    let (l, m) = (vars::l(), vars::m());
    let ea = LambdaElement::basis(a.clone());
    let eb = LambdaElement::basis(b.clone());
    let ec = LambdaElement::basis(c.clone());
    let mut r = t.eval(&bracket_at(alg, &ea, &eb, &l)?, &ec, &(&l + &m))?;
    r.sub_assign(&t.eval(&ea, &bracket_at(alg, &eb, &ec, &m)?, &l)?);
    r.add_assign(&t.eval(&eb, &bracket_at(alg, &ea, &ec, &l)?, &m)?);
    Ok(r)
}

pub fn check_cocycle(alg: &AlgebraSpec, t: &CocycleTable, w: Window) -> Result<CheckReport> {
    let mut report = CheckReport::new("cocycle");
    for (a, b) in skew_items(alg, w) {
        let r = cocycle_skew_residual(t, &a, &b)?;
        report.push(CheckItem::from_residual(format!("skew ({}, {})", a, b), &r, r.is_zero()));
    }
    for (a, b, c) in jacobi_items(alg, w) {
        let r = cocycle_jacobi_residual(alg, t, &a, &b, &c)?;
        report.push(CheckItem::from_residual(format!("jacobi ({}, {}, {})", a, b, c), &r, r.is_zero()));
    }
    Ok(report)
}

/// Rational values on basis keys, extended by `f(p(∂) e) = p(0) f(e)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct OneCochain {
    pub values: BTreeMap<BasisKey, Rational>,
}

impl OneCochain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn delta(key: BasisKey) -> Self {
        let mut f = Self::new();
        f.values.insert(key, Rational::one());
        f
    }

    pub fn set(&mut self, key: BasisKey, value: Rational) {
        if value.is_zero() {
            self.values.remove(&key);
        } else {
            self.values.insert(key, value);
        }
    }

    /// `f` applied to an element with coefficients in ∂ and λ.
    pub fn apply(&self, x: &LambdaElement) -> Result<MultiPoly> {
        let zero = MultiPoly::zero();
        let mut out = MultiPoly::zero();
        for (k, p) in x.terms() {
            if let Some(v) = self.values.get(k) {
                out.add_assign(&p.substitute(&Var::D, &zero)?.scale(v));
            }
        }
        Ok(out)
    }
}

/// `(df)_λ(a, b) = -f([a λ b])` on every key pair of the window.
pub fn coboundary(alg: &AlgebraSpec, f: &OneCochain, w: Window) -> Result<CocycleTable> {
    let mut t = CocycleTable::new(w);
    let keys = alg.keys_in(w);
    for a in &keys {
        for b in &keys {
            if !f.values.keys().any(|k| k.index == a.index + b.index) {
                continue;
            }
            let v = f.apply(&bracket(alg, &LambdaElement::basis(a.clone()), &LambdaElement::basis(b.clone()))?)?;
            t.set(a.clone(), b.clone(), v.neg())?;
        }
    }
    Ok(t)
}

/// Ansatz `φ(a, b) = Σ_{k ≤ bound} x λ^k` on every key pair of the window
/// with index sum `s`.
#[derive(Clone, Debug)]
pub struct CocycleAnsatz {
    pub sum: i64,
    pub degbound: u32,
    pub window: Window,
    table: CocycleTable<LinearForm>,
    columns: BTreeMap<(BasisKey, BasisKey, i32), usize>,
}

impl CocycleAnsatz {
    pub fn new(alg: &AlgebraSpec, sum: i64, w: Window, degbound: u32) -> Self {
        let mut table = CocycleTable::new(w);
        let mut columns = BTreeMap::new();
        let keys = alg.keys_in(w);
        for a in &keys {
            for b in keys.iter().filter(|b| a.index + b.index == sum) {
                let mut poly = Poly::zero();
                for k in 0..=degbound as i32 {
                    let id = columns.len();
                    columns.insert((a.clone(), b.clone(), k), id);
                    poly.add_term(
                        Monomial::power(Var::L, k).expect("nonnegative"),
                        LinearForm::unknown(Unknown(id as u32)),
                    );
                }
                table.set(a.clone(), b.clone(), poly).expect("λ-only ansatz");
            }
        }
        CocycleAnsatz { sum, degbound, window: w, table, columns }
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    /// Coordinates of a concrete table supported on this index sum, or
    /// `None` if it leaves the ansatz.
    pub fn to_vector(&self, t: &CocycleTable) -> Option<SparseVec> {
        let mut pairs = Vec::new();
        for ((a, b), p) in t.entries() {
            for (mono, r) in p.terms() {
                let k = mono.exponent(&Var::L);
                if mono.degree() != k {
                    return None;
                }
                pairs.push((*self.columns.get(&(a.clone(), b.clone(), k))?, r.clone()));
            }
        }
        Some(SparseVec::from_pairs(pairs))
    }

    pub fn from_vector(&self, v: &SparseVec) -> CocycleTable {
        let mut acc: BTreeMap<(BasisKey, BasisKey), MultiPoly> = BTreeMap::new();
        for ((a, b, k), id) in &self.columns {
            let r = v.get(*id);
            if !r.is_zero() {
                acc.entry((a.clone(), b.clone()))
                    .or_default()
                    .add_term(Monomial::power(Var::L, *k).expect("nonnegative"), r);
            }
        }
        let mut t = CocycleTable::new(self.window);
        for ((a, b), p) in acc {
            t.set(a, b, p).expect("λ-only");
        }
        t
    }

    /// Skew and Jacobi equations whose pairs all have index sum `s`.
    pub fn equations(&self, alg: &AlgebraSpec) -> Result<Vec<SparseVec>> {
        let mut rows = Vec::new();
        for (a, b) in skew_items(alg, self.window).into_iter().filter(|(a, b)| a.index + b.index == self.sum) {
            let r = cocycle_skew_residual(&self.table, &a, &b)?;
            rows.extend(r.equations_from_zero().iter().map(row_from_form));
        }
        for (a, b, c) in jacobi_items(alg, self.window) {
            if a.index + b.index + c.index != self.sum {
                continue;
            }
            let r = cocycle_jacobi_residual(alg, &self.table, &a, &b, &c)?;
            rows.extend(r.equations_from_zero().iter().map(row_from_form));
        }
        Ok(rows)
    }
}

#[derive(Clone, Debug)]
pub struct CocycleSpace {
    pub ansatz: CocycleAnsatz,
    pub basis: Vec<SparseVec>,
}

/// All cocycles of index sum `s` within the ansatz.
pub fn solve_cocycles_sum(alg: &AlgebraSpec, w: Window, degbound: u32, sum: i64) -> Result<CocycleSpace> {
    w.require_interior()?;
    let ansatz = CocycleAnsatz::new(alg, sum, w, degbound);
    let rows = ansatz.equations(alg)?;
    let basis = homogeneous_nullspace(ansatz.ncols(), rows);
    Ok(CocycleSpace { ansatz, basis })
}

/// Basis of the cocycle space, concatenated over the sums `s ∈ w`.
pub fn solve_cocycles(alg: &AlgebraSpec, w: Window, degbound: u32) -> Result<Vec<CocycleTable>> {
    let mut out = Vec::new();
    for s in w.indices() {
        let space = solve_cocycles_sum(alg, w, degbound, s)?;
        out.extend(space.basis.iter().map(|v| space.ansatz.from_vector(v)));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SumQuotient {
    pub sum: i64,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    pub dim: usize,
    /// Classes reduced against the coboundaries, echelon-reduced, monic.
    pub representatives: Vec<CocycleTable>,
}

/// `H²` restricted to index sum `s`; coboundaries come from `f = δ_{Z_s}`.
pub fn h2_sum(alg: &AlgebraSpec, w: Window, degbound: u32, sum: i64) -> Result<SumQuotient> {
    let space = solve_cocycles_sum(alg, w, degbound, sum)?;
    let mut cob = Vec::new();
    for z in alg.families() {
        let t = coboundary(alg, &OneCochain::delta(z.at(sum)), w)?;
        if let Some(v) = space.ansatz.to_vector(&t) {
            if !v.is_zero() {
                cob.push(v);
            }
        }
    }
    let dim = quotient_dim(&space.basis, &cob)?;
    let mut cob_e = Echelon::new();
    for v in &cob {
        cob_e.insert(v);
    }
    let cob_e = cob_e.into_reduced();
    let mut reps = Echelon::new();
    for v in &space.basis {
        reps.insert(&cob_e.reduce(v));
    }
    let representatives = reps.into_reduced().rows().map(|v| space.ansatz.from_vector(&v.monic())).collect();
    Ok(SumQuotient { sum, cocycle_dim: space.basis.len(), coboundary_dim: cob_e.rank(), dim, representatives })
}

/// Per-sum `H²` over the sums `s ∈ w`.
pub fn h2_quotient(alg: &AlgebraSpec, w: Window, degbound: u32) -> Result<Vec<SumQuotient>> {
    w.indices().map(|s| h2_sum(alg, w, degbound, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn w(lo: i64, hi: i64) -> Window {
        Window::new(lo, hi).unwrap()
    }

    fn ll_table(w: Window, poly: &str) -> CocycleTable {
        let mut t = CocycleTable::new(w);
        for i in w.indices() {
            for j in w.indices() {
                t.set(BasisKey::new("L", i), BasisKey::new("L", j), parse_poly(poly).unwrap()).unwrap();
            }
        }
        t
    }

    #[test]
    fn virasoro_cocycle() {
        let csv = AlgebraSpec::builtin("csv").unwrap();
        let win = w(-2, 2);
        assert!(check_cocycle(&csv, &ll_table(win, "l^3"), win).unwrap().passed());
        let r = check_cocycle(&csv, &ll_table(win, "l^2"), win).unwrap();
        assert!(r.failures().any(|f| f.label.starts_with("skew")));
        let l0 = BasisKey::new("L", 0);
        let jac = cocycle_jacobi_residual(&csv, &ll_table(win, "l^3"), &l0, &l0, &l0).unwrap();
        assert!(jac.is_zero());
    }

    #[test]
    fn coboundary_examples() {
        let csv = AlgebraSpec::builtin("csv").unwrap();
        let win = w(-2, 2);
        let t = coboundary(&csv, &OneCochain::delta(BasisKey::new("L", 0)), win).unwrap();
        assert_eq!(t.get(&BasisKey::new("L", 1), &BasisKey::new("L", -1)).unwrap(), parse_poly("-2*l").unwrap());
        assert!(t.get(&BasisKey::new("M", 1), &BasisKey::new("L", -1)).unwrap().is_zero());
        let t = coboundary(&csv, &OneCochain::delta(BasisKey::new("M", 0)), win).unwrap();
        assert_eq!(t.get(&BasisKey::new("L", 2), &BasisKey::new("M", -2)).unwrap(), parse_poly("-l").unwrap());
        assert_eq!(t.get(&BasisKey::new("M", 2), &BasisKey::new("L", -2)).unwrap(), parse_poly("-l").unwrap());
        assert_eq!(t.get(&BasisKey::new("Y", 1), &BasisKey::new("Y", -1)).unwrap(), parse_poly("-2*l").unwrap());
        assert!(check_cocycle(&csv, &t, win).unwrap().passed());
        assert!(coboundary(&csv, &OneCochain::new(), win).unwrap().is_zero());
    }

    #[test]
    fn outside_domain_underflows() {
        let t = CocycleTable::<Rational>::new(w(-1, 1));
        assert!(matches!(t.get(&BasisKey::new("L", 2), &BasisKey::new("L", 0)), Err(Error::WindowUnderflow { .. })));
    }

    #[test]
    fn zero_algebra_keeps_every_skew_cochain() {
        let z = AlgebraSpec::zero_algebra("z", &["L"]).unwrap();
        let q = h2_sum(&z, w(-1, 1), 3, 0).unwrap();
        assert_eq!(q.coboundary_dim, 0);
        // pairs (L@-1,L@1), (L@0,L@0), (L@1,L@-1): skew ties the outer two
        // together (all degrees) and forces odd degrees on the middle one
        assert_eq!(q.dim, 4 + 2);
    }

    #[test]
    fn virasoro_h2_per_sum() {
        let cv = AlgebraSpec::builtin("cv").unwrap();
        for q in h2_quotient(&cv, w(-2, 2), 5).unwrap() {
            assert_eq!(q.dim, 1, "sum {}", q.sum);
        }
    }
}
