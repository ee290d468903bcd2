//! Conformal derivations `d_λ([a μ b]) = [(d_λ a)_{λ+μ} b] + [a μ (d_λ b)]`.
//!
//! A derivation is stored by its values on basis keys and extended to
//! ∂-multiples by `d_λ(p(∂) x) = p(∂+λ) d_λ(x)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::conformal::{
    bracket, bracket_at, bracket_at_left, skew_items, AlgebraSpec, BasisKey, CheckItem, CheckReport, Element,
    FamilyId, Lambda, LambdaElement, Window,
};
use crate::error::{Error, Result};
use crate::linalg::{express_in_span, homogeneous_nullspace, quotient_dim, row_from_form, Echelon, Solution, SparseVec};
use crate::poly::{vars, Coefficient, LinearForm, Monomial, MultiPoly, Poly, Unknown, Var};
use crate::rational::Rational;

/// Values `d_λ(X_i)` on basis keys.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DerivationTable<C: Coefficient = Rational> {
    entries: BTreeMap<BasisKey, Lambda<C>>,
}

impl<C: Coefficient> Default for DerivationTable<C> {
    fn default() -> Self {
        DerivationTable { entries: BTreeMap::new() }
    }
}

impl<C: Coefficient> DerivationTable<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: BasisKey, value: Lambda<C>) {
        self.entries.insert(key, value);
    }

    pub fn get(&self, key: &BasisKey) -> Option<&Lambda<C>> {
        self.entries.get(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&BasisKey, &Lambda<C>)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when every stored value is zero.
    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|v| v.is_zero())
    }

    /// Sets `d(X_i) = 0` for every index of the window not yet present.
    pub fn extend_zero(&mut self, family: &FamilyId, w: Window) {
        for i in w.indices() {
            self.entries.entry(family.at(i)).or_default();
        }
    }

    /// `d_λ(x)` for `x` with coefficients in ∂ and other spectral variables.
    pub fn apply(&self, x: &LambdaElement) -> Result<Lambda<C>> {
        let shift = &vars::d() + &vars::l();
        let mut out = Lambda::zero();
        for (k, p) in x.terms() {
            let d = self.entries.get(k).ok_or_else(|| Error::WindowUnderflow { key: format!("{}", k) })?;
            out.add_assign(&d.mul_poly(&p.substitute(&Var::D, &shift)?));
        }
        Ok(out)
    }
}

impl DerivationTable<Rational> {
    pub fn add_scaled(&mut self, k: &Rational, other: &DerivationTable) {
        for (key, v) in &other.entries {
            self.entries.entry(key.clone()).or_default().add_assign(&v.scale(k));
        }
    }
}

/// `d_λ([a μ b]) - [(d_λ a)_{λ+μ} b] - [a μ (d_λ b)]`.
pub fn derivation_residual<C: Coefficient>(
    alg: &AlgebraSpec,
    d: &DerivationTable<C>,
    a: &BasisKey,
    b: &BasisKey,
) -> Result<Lambda<C>> {
    let (l, m) = (vars::l(), vars::m());
    let ea = LambdaElement::basis(a.clone());
    let eb = LambdaElement::basis(b.clone());
    let da = d.apply(&ea)?;
    let db = d.apply(&eb)?;
    let mut r = d.apply(&bracket_at(alg, &ea, &eb, &m)?)?;
    r.sub_assign(&bracket_at_left(alg, &da, &eb, &(&l + &m))?);
    r.sub_assign(&bracket_at(alg, &ea, &db, &m)?);
    Ok(r)
}

/// Checks the derivation law on every key pair `(X_i, Y_j)` with `i, j,
/// i+j` in the window.
pub fn check_derivation(alg: &AlgebraSpec, d: &DerivationTable, w: Window) -> Result<CheckReport> {
    let mut report = CheckReport::new("derivation");
    for (a, b) in skew_items(alg, w) {
        let r = derivation_residual(alg, d, &a, &b)?;
        report.push(CheckItem::from_residual(format!("({}, {})", a, b), &r, r.is_zero()));
    }
    Ok(report)
}

/// `ad_x` on every key of the window.
pub fn inner_derivation(alg: &AlgebraSpec, x: &Element, w: Window) -> Result<DerivationTable> {
    let mut t = DerivationTable::new();
    for key in alg.keys_in(w) {
        let v = bracket(alg, x, &LambdaElement::basis(key.clone()))?;
        t.insert(key, v);
    }
    Ok(t)
}

/// `L_i ↦ Σ_c a_c M_{i+c}`, `M_i, Y_i ↦ 0`.
pub fn d_vec(a: &BTreeMap<i64, Rational>, w: Window) -> DerivationTable {
    let mut t = DerivationTable::new();
    for i in w.indices() {
        let mut v = LambdaElement::zero();
        for (c, coeff) in a {
            v.add_term(BasisKey::new("M", i + c), &MultiPoly::from_rational(coeff.clone()));
        }
        t.insert(BasisKey::new("L", i), v);
        t.insert(BasisKey::new("M", i), LambdaElement::zero());
        t.insert(BasisKey::new("Y", i), LambdaElement::zero());
    }
    t
}

/// Degree-`c` ansatz: `d(X_i) = Σ_Z Σ_{p+q ≤ bound} x ∂^p λ^q Z_{i+c}` for
/// every key of the window, one unknown per coefficient.
#[derive(Clone, Debug)]
pub struct DerivationAnsatz {
    pub c: i64,
    pub degbound: u32,
    pub window: Window,
    table: DerivationTable<LinearForm>,
    columns: BTreeMap<(BasisKey, BasisKey, Monomial), usize>,
}

impl DerivationAnsatz {
    pub fn new(alg: &AlgebraSpec, c: i64, w: Window, degbound: u32) -> Self {
        let mut monomials = Vec::new();
        for p in 0..=degbound as i32 {
            for q in 0..=(degbound as i32 - p) {
                monomials.push(Monomial::from_pairs([(Var::D, p), (Var::L, q)]).expect("nonnegative"));
            }
        }
        let mut table = DerivationTable::new();
        let mut columns = BTreeMap::new();
        for key in alg.keys_in(w) {
            let mut v = Lambda::zero();
            for z in alg.families() {
                let out = z.at(key.index + c);
                let mut poly = Poly::zero();
                for mono in &monomials {
                    let id = columns.len();
                    columns.insert((key.clone(), out.clone(), mono.clone()), id);
                    poly.add_term(mono.clone(), LinearForm::unknown(Unknown(id as u32)));
                }
                v.add_term(out, &poly);
            }
            table.insert(key, v);
        }
        DerivationAnsatz { c, degbound, window: w, table, columns }
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn table(&self) -> &DerivationTable<LinearForm> {
        &self.table
    }

    /// Coordinates of a concrete table, or `None` if some entry falls
    /// outside the ansatz.
    pub fn to_vector(&self, d: &DerivationTable) -> Option<SparseVec> {
        let mut pairs = Vec::new();
        for (key, v) in d.entries() {
            for (out, p) in v.terms() {
                for (mono, r) in p.terms() {
                    let id = self.columns.get(&(key.clone(), out.clone(), mono.clone()))?;
                    pairs.push((*id, r.clone()));
                }
            }
        }
        Some(SparseVec::from_pairs(pairs))
    }

    pub fn from_vector(&self, v: &SparseVec) -> DerivationTable {
        let mut t = DerivationTable::new();
        for key in self.table.entries.keys() {
            t.insert(key.clone(), LambdaElement::zero());
        }
        for ((key, out, mono), id) in &self.columns {
            let r = v.get(*id);
            if !r.is_zero() {
                let slot = t.entries.get_mut(key).expect("ansatz key");
                slot.add_term(out.clone(), &MultiPoly::term(mono.clone(), r));
            }
        }
        t
    }

    /// Linear equations of the derivation law on pairs inside the window.
    pub fn equations(&self, alg: &AlgebraSpec) -> Result<Vec<SparseVec>> {
        let mut rows = Vec::new();
        for (a, b) in skew_items(alg, self.window) {
            let r = derivation_residual(alg, &self.table, &a, &b)?;
            rows.extend(r.equations_from_zero().iter().map(row_from_form));
        }
        Ok(rows)
    }
}

/// Exact solution space of the degree-`c` ansatz, as coordinate vectors.
#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub ansatz: DerivationAnsatz,
    pub basis: Vec<SparseVec>,
}

impl DerivationSpace {
    pub fn tables(&self) -> Vec<DerivationTable> {
        self.basis.iter().map(|v| self.ansatz.from_vector(v)).collect()
    }
}

pub fn solve_degree_c_space(alg: &AlgebraSpec, c: i64, w: Window, degbound: u32) -> Result<DerivationSpace> {
    w.require_interior()?;
    let ansatz = DerivationAnsatz::new(alg, c, w, degbound);
    let rows = ansatz.equations(alg)?;
    let basis = homogeneous_nullspace(ansatz.ncols(), rows);
    Ok(DerivationSpace { ansatz, basis })
}

/// Basis of all degree-`c` derivations within the ansatz.
pub fn solve_degree_c(alg: &AlgebraSpec, c: i64, w: Window, degbound: u32) -> Result<Vec<DerivationTable>> {
    Ok(solve_degree_c_space(alg, c, w, degbound)?.tables())
}

/// Coordinates of `ad_{∂^k X_c}` for every family and every `k` whose table
/// fits the ansatz.
pub fn inner_span(alg: &AlgebraSpec, ansatz: &DerivationAnsatz) -> Result<Vec<SparseVec>> {
    let mut out = Vec::new();
    for x in alg.families() {
        for k in 0..=ansatz.degbound {
            let gen = Element::single(x.at(ansatz.c), vars::d().pow(k));
            let t = inner_derivation(alg, &gen, ansatz.window)?;
            if let Some(v) = ansatz.to_vector(&t) {
                if !v.is_zero() {
                    out.push(v);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct OuterResult {
    pub c: i64,
    pub dim: usize,
    pub solution_dim: usize,
    pub inner_dim: usize,
    /// Classes modulo the inner span, reduced and made monic.
    pub representatives: Vec<DerivationTable>,
}

pub fn outer_dimension(alg: &AlgebraSpec, c: i64, w: Window, degbound: u32) -> Result<OuterResult> {
    let space = solve_degree_c_space(alg, c, w, degbound)?;
    let inner = inner_span(alg, &space.ansatz)?;
    let dim = quotient_dim(&space.basis, &inner)?;
    let mut inner_e = Echelon::new();
    for v in &inner {
        inner_e.insert(v);
    }
    let inner_e = inner_e.into_reduced();
    let mut reps = Echelon::new();
    for v in &space.basis {
        reps.insert(&inner_e.reduce(v));
    }
    let representatives = reps.into_reduced().rows().map(|v| space.ansatz.from_vector(&v.monic())).collect();
    Ok(OuterResult {
        c,
        dim,
        solution_dim: space.basis.len(),
        inner_dim: inner_e.rank(),
        representatives,
    })
}

/// Tries to write `d` as a combination of the inner generators of degree
/// `c`. `Solution::Inconsistent` certifies `d ∉ Inn`.
pub fn express_in_inner(alg: &AlgebraSpec, d: &DerivationTable, c: i64, w: Window, degbound: u32) -> Result<Solution> {
    let ansatz = DerivationAnsatz::new(alg, c, w, degbound);
    let target = ansatz
        .to_vector(d)
        .ok_or_else(|| Error::InvalidSpec(format!("table does not fit the degree-{} ansatz", c)))?;
    let inner = inner_span(alg, &ansatz)?;
    Ok(express_in_span(&inner, &target, ansatz.ncols()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn w(lo: i64, hi: i64) -> Window {
        Window::new(lo, hi).unwrap()
    }

    #[test]
    fn inner_examples() {
        let csv = AlgebraSpec::builtin("csv").unwrap();
        let t = inner_derivation(&csv, &Element::basis(BasisKey::new("L", 0)), w(-2, 2)).unwrap();
        assert_eq!(
            t.get(&BasisKey::new("M", 1)).unwrap(),
            &LambdaElement::single(BasisKey::new("M", 1), parse_poly("d+l").unwrap())
        );
        assert!(check_derivation(&csv, &t, w(-2, 2)).unwrap().passed());
        let t = inner_derivation(&csv, &Element::single(BasisKey::new("Y", 0), parse_poly("d").unwrap()), w(-1, 1))
            .unwrap();
        assert_eq!(
            t.get(&BasisKey::new("L", 0)).unwrap(),
            &LambdaElement::single(BasisKey::new("Y", 0), parse_poly("-l*(1/2*d+3/2*l)").unwrap())
        );
    }

    #[test]
    fn d_vec_is_outer_for_csv_only() {
        let csv = AlgebraSpec::builtin("csv").unwrap();
        let ext = AlgebraSpec::builtin("csv-ext").unwrap();
        let a: BTreeMap<i64, Rational> = [(0, Rational::one())].into_iter().collect();
        let mut d = d_vec(&a, w(-2, 2));
        assert!(check_derivation(&csv, &d, w(-2, 2)).unwrap().passed());
        assert!(matches!(check_derivation(&ext, &d, w(-2, 2)), Err(Error::WindowUnderflow { .. })));
        d.extend_zero(&ext.family("N").unwrap(), w(-2, 2));
        let r = check_derivation(&ext, &d, w(-2, 2)).unwrap();
        assert!(r.failures().any(|f| f.label.starts_with("(N@")));
    }

    #[test]
    fn d_vec_linearity() {
        let a: BTreeMap<i64, Rational> = [(1, Rational::from_int(2)), (-1, Rational::from_int(3))].into_iter().collect();
        let d = d_vec(&a, w(-1, 1));
        let mut expect = LambdaElement::zero();
        expect.add_term(BasisKey::new("M", 1), &MultiPoly::from_int(2));
        expect.add_term(BasisKey::new("M", -1), &MultiPoly::from_int(3));
        assert_eq!(d.get(&BasisKey::new("L", 0)).unwrap(), &expect);
        assert!(d_vec(&BTreeMap::new(), w(0, 1)).is_zero());
    }

    #[test]
    fn small_window_rejected() {
        let cv = AlgebraSpec::builtin("cv").unwrap();
        assert!(matches!(solve_degree_c(&cv, 0, w(1, 2), 2), Err(Error::WindowTooSmall { .. })));
    }

    #[test]
    fn zero_algebra_is_unconstrained() {
        let z = AlgebraSpec::zero_algebra("z", &["L"]).unwrap();
        let sols = solve_degree_c(&z, 0, w(-1, 1), 2).unwrap();
        assert_eq!(sols.len(), 3 * 6);
    }

    #[test]
    fn virasoro_has_no_outer_derivations() {
        let cv = AlgebraSpec::builtin("cv").unwrap();
        let r = outer_dimension(&cv, 0, w(-2, 2), 3).unwrap();
        assert_eq!(r.dim, 0);
        assert_eq!(r.solution_dim, r.inner_dim);
    }
}
