//! Conformal modules: `a_λ(b_μ v) - b_μ(a_λ v) = [a λ b]_{λ+μ} v`.
//!
//! Modules are free over ℂ[∂], either of rank one (`ℂ[∂]v`) or ℤ-graded
//! with one generator `v_m` per index and `X_i λ v_m ∈ ℂ[∂,λ] v_{i+m}`.
//! Basis vectors are [`BasisKey`]s of the family `v`.

mod families;
mod solve;

pub use families::{graded_module, rank_one_module, rank_one_module_with, GradedKind, GradedParams, RankOneParams};
pub use solve::{
    solve_graded_extension, solve_graded_extension_in, solve_rank_one_extension, solve_rank_one_extension_at,
    ClassificationResult, Quadratic, StageReport,
};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::conformal::{bracket_at, AlgebraSpec, BasisKey, CheckItem, CheckReport, FamilyId, Lambda, LambdaElement, Window};
use crate::error::{Error, Result};
use crate::poly::{vars, Coefficient, Expr, LinearForm, MultiPoly, ParseOptions, Poly, Var};
use crate::rational::Rational;

pub const MODULE_FAMILY: &str = "v";

/// A 0/1 sequence on a finite index range.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Pattern {
    bits: BTreeMap<i64, u8>,
}

impl Pattern {
    pub fn new(values: &BTreeMap<i64, i64>) -> Result<Self> {
        let mut bits = BTreeMap::new();
        for (i, v) in values {
            match *v {
                0 | 1 => {
                    bits.insert(*i, *v as u8);
                }
                value => return Err(Error::PatternValue { index: *i, value }),
            }
        }
        Ok(Pattern { bits })
    }

    /// Bits `values[k]` at index `lo + k`.
    pub fn from_bits(lo: i64, values: &[u8]) -> Result<Self> {
        let map: BTreeMap<i64, i64> = values.iter().enumerate().map(|(k, b)| (lo + k as i64, *b as i64)).collect();
        Self::new(&map)
    }

    pub fn constant(w: Window, bit: u8) -> Self {
        Pattern { bits: w.indices().map(|i| (i, bit)).collect() }
    }

    /// All `2^n` patterns on the window, in binary counting order.
    pub fn all(w: Window) -> Vec<Pattern> {
        let n = (w.hi() - w.lo() + 1) as u32;
        (0u64..1 << n)
            .map(|k| Pattern { bits: w.indices().enumerate().map(|(t, i)| (i, ((k >> t) & 1) as u8)).collect() })
            .collect()
    }

    pub fn get(&self, i: i64) -> Result<u8> {
        self.bits.get(&i).copied().ok_or(Error::PatternGap(i))
    }

    pub fn covers(&self, w: Window) -> Result<()> {
        for i in w.indices() {
            self.get(i)?;
        }
        Ok(())
    }

    pub fn bits(&self) -> &BTreeMap<i64, u8> {
        &self.bits
    }

    pub fn is_constant(&self) -> bool {
        let mut it = self.bits.values();
        match it.next() {
            Some(first) => it.all(|b| b == first),
            None => true,
        }
    }
}

impl core::fmt::Display for Pattern {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for b in self.bits.values() {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

/// How one algebra family acts on the module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionRule<C: Coefficient = Rational> {
    /// Template in `d`, `l`, parameters and the integer symbols `i`
    /// (algebra index) and `m` (module index).
    Template { text: String, expr: Expr },
    /// The four-case L-action of the pattern family: `∂+b`, `∂+b+λ`, `1`,
    /// `(∂+b)(∂+b+λ)` for `(A_m, A_{i+m}) = (0,0), (1,1), (0,1), (1,0)`.
    Pattern { pattern: Pattern, b: MultiPoly },
    /// Values listed per `(i, m)`; rank-one tables use `m = 0`.
    Explicit(BTreeMap<(i64, i64), Poly<C>>),
    Zero,
}

impl<C: Coefficient> ActionRule<C> {
    pub fn template(text: &str) -> Result<Self> {
        Ok(ActionRule::Template { text: text.to_string(), expr: crate::poly::parse_expr(text)? })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionTable<C: Coefficient = Rational> {
    graded: bool,
    units: Vec<String>,
    subs: Vec<(Var, MultiPoly)>,
    rules: BTreeMap<FamilyId, ActionRule<C>>,
}

impl<C: Coefficient> ActionTable<C> {
    /// `units` names the template identifiers read as invertible
    /// indeterminates (negative powers allowed).
    pub fn new(graded: bool, units: &[&str]) -> Self {
        ActionTable {
            graded,
            units: units.iter().map(|s| s.to_string()).collect(),
            subs: Vec::new(),
            rules: BTreeMap::new(),
        }
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn units(&self) -> &[String] {
        &self.units
    }

    pub fn set_rule(&mut self, family: &str, rule: ActionRule<C>) {
        self.rules.insert(FamilyId::new(family), rule);
    }

    pub fn rule(&self, family: &FamilyId) -> Option<&ActionRule<C>> {
        self.rules.get(family)
    }

    pub fn rules(&self) -> impl Iterator<Item = (&FamilyId, &ActionRule<C>)> {
        self.rules.iter()
    }

    /// Substitution applied after evaluating templates and patterns, used
    /// to specialise symbolic parameters.
    pub fn substitute_param(&mut self, var: Var, value: MultiPoly) {
        if value != MultiPoly::var(var.clone()) {
            self.subs.push((var, value));
        }
    }

    pub fn substitutions(&self) -> &[(Var, MultiPoly)] {
        &self.subs
    }

    pub fn module_key(&self, m: i64) -> BasisKey {
        BasisKey::new(MODULE_FAMILY, if self.graded { m } else { 0 })
    }

    fn target(&self, i: i64, m: i64) -> i64 {
        if self.graded {
            i + m
        } else {
            0
        }
    }

    fn specialise(&self, mut p: MultiPoly) -> Result<MultiPoly> {
        for (v, value) in &self.subs {
            p = p.substitute(v, value)?;
        }
        Ok(p)
    }

    /// The polynomial `g(∂, λ)` with `X_i λ v_m = g v_{target}`.
    pub fn action(&self, family: &FamilyId, i: i64, m: i64) -> Result<Poly<C>> {
        let m = if self.graded { m } else { 0 };
        let rule = self.rules.get(family).ok_or_else(|| Error::MissingAction { family: family.to_string(), i, m })?;
        let lift = |p: MultiPoly| p.map_coeffs(|c| C::from_rational(c.clone()));
        Ok(match rule {
            ActionRule::Template { expr, .. } => {
                let units: Vec<&str> = self.units.iter().map(|s| s.as_str()).collect();
                let opts = ParseOptions::with_units(&units).bind("i", i).bind("m", m);
                lift(self.specialise(expr.eval(&opts)?)?)
            }
            ActionRule::Pattern { pattern, b } => {
                let x = &vars::d() + b;
                let p = match (pattern.get(m)?, pattern.get(i + m)?) {
                    (0, 0) => x,
                    (1, 1) => &x + &vars::l(),
                    (0, 1) => MultiPoly::one(),
                    _ => x.mul(&(&x + &vars::l())),
                };
                lift(self.specialise(p)?)
            }
            ActionRule::Explicit(map) => {
                map.get(&(i, m)).cloned().ok_or_else(|| Error::MissingAction { family: family.to_string(), i, m })?
            }
            ActionRule::Zero => Poly::zero(),
        })
    }

    /// `X_i` acting at `spectral` on a module element whose coefficients
    /// may carry other spectral variables: `g(∂) v_m ↦ g(∂+x) r(∂, x) v_{i+m}`.
    pub fn act(&self, key: &BasisKey, v: &Lambda<C>, spectral: &MultiPoly) -> Result<Lambda<C>> {
        let shift = &vars::d() + spectral;
        let mut out = Lambda::zero();
        for (vk, g) in v.terms() {
            let r = self.action(&key.family, key.index, vk.index)?;
            if r.is_zero() {
                continue;
            }
            let r = if spectral == &vars::l() { r } else { r.substitute(&Var::L, spectral)? };
            let g = g.substitute(&Var::D, &shift)?;
            out.add_term(self.module_key(self.target(key.index, vk.index)), &g.try_mul(&r)?);
        }
        Ok(out)
    }

    /// An algebra element `Σ q(∂, λ) e` acting at `spectral`:
    /// `(q e)_x v = q(-x, λ) e_x v`.
    pub fn act_element(&self, x: &LambdaElement, v: &Lambda<C>, spectral: &MultiPoly) -> Result<Lambda<C>> {
        let minus = -spectral;
        let mut out = Lambda::zero();
        for (k, q) in x.terms() {
            let factor = q.substitute(&Var::D, &minus)?;
            out.add_assign(&self.act(k, v, spectral)?.mul_poly(&factor));
        }
        Ok(out)
    }
}

impl ActionTable {
    /// The same table over linear-form coefficients.
    pub fn to_param(&self) -> ActionTable<LinearForm> {
        let rules = self
            .rules
            .iter()
            .map(|(f, r)| {
                let r = match r {
                    ActionRule::Template { text, expr } => ActionRule::Template { text: text.clone(), expr: expr.clone() },
                    ActionRule::Pattern { pattern, b } => ActionRule::Pattern { pattern: pattern.clone(), b: b.clone() },
                    ActionRule::Explicit(map) => {
                        ActionRule::Explicit(map.iter().map(|(k, p)| (*k, p.to_param())).collect())
                    }
                    ActionRule::Zero => ActionRule::Zero,
                };
                (f.clone(), r)
            })
            .collect();
        ActionTable { graded: self.graded, units: self.units.clone(), subs: self.subs.clone(), rules }
    }
}

/// `[a λ b]_{λ+μ} v_m - (a_λ(b_μ v_m) - b_μ(a_λ v_m))`.
pub fn module_residual<C: Coefficient>(
    alg: &AlgebraSpec,
    t: &ActionTable<C>,
    a: &BasisKey,
    b: &BasisKey,
    m: i64,
) -> Result<Lambda<C>> {
    let (l, mu) = (vars::l(), vars::m());
    let v = Lambda::single(t.module_key(m), Poly::one());
    let br = bracket_at(alg, &LambdaElement::basis(a.clone()), &LambdaElement::basis(b.clone()), &l)?;
    let mut r = t.act_element(&br, &v, &(&l + &mu))?;
    r.sub_assign(&t.act(a, &t.act(b, &v, &mu)?, &l)?);
    r.add_assign(&t.act(b, &t.act(a, &v, &l)?, &mu)?);
    Ok(r)
}

/// Instances `(X_i, Y_j, m)` checked over the window. Graded modules need
/// `m, i+m, j+m, i+j+m` in the window as well; rank-one modules use `m = 0`.
pub fn module_items(alg: &AlgebraSpec, graded: bool, w: Window) -> Vec<(BasisKey, BasisKey, i64)> {
    let keys = alg.keys_in(w);
    let mut out = Vec::new();
    for a in &keys {
        for b in &keys {
            let (i, j) = (a.index, b.index);
            if !w.contains(i + j) {
                continue;
            }
            if !graded {
                out.push((a.clone(), b.clone(), 0));
                continue;
            }
            for m in w.indices() {
                if w.contains(i + m) && w.contains(j + m) && w.contains(i + j + m) {
                    out.push((a.clone(), b.clone(), m));
                }
            }
        }
    }
    out
}

pub fn check_module(alg: &AlgebraSpec, t: &ActionTable, w: Window) -> Result<CheckReport> {
    let mut report = CheckReport::new("module");
    for fam in alg.families() {
        if t.rule(fam).is_none() {
            return Err(Error::MissingAction { family: fam.to_string(), i: 0, m: 0 });
        }
    }
    for (a, b, m) in module_items(alg, t.is_graded(), w) {
        let r = module_residual(alg, t, &a, &b, m)?;
        let label = if t.is_graded() { format!("({}, {}) on v@{}", a, b, m) } else { format!("({}, {})", a, b) };
        report.push(CheckItem::from_residual(label, &r, r.is_zero()));
    }
    if let Some(note) = sesquilinearity_spot_check(alg, t, w)? {
        report.push(note);
    }
    Ok(report)
}

/// `(∂a)_λ v = -λ a_λ v` and `a_λ(∂v) = (∂+λ) a_λ v` on one instance.
fn sesquilinearity_spot_check(alg: &AlgebraSpec, t: &ActionTable, w: Window) -> Result<Option<CheckItem>> {
    let Some(fam) = alg.families().first() else {
        return Ok(None);
    };
    let i = if w.contains(0) { 0 } else { w.lo() };
    let m = if !t.is_graded() {
        0
    } else if let Some(m) = w.indices().find(|m| w.contains(i + m)) {
        m
    } else {
        return Ok(None);
    };
    let a = fam.at(i);
    let (d, l) = (vars::d(), vars::l());
    let v = LambdaElement::basis(t.module_key(m));
    let base = t.act(&a, &v, &l)?;
    let left = t.act_element(&LambdaElement::single(a.clone(), d.clone()), &v, &l)?;
    let right = t.act(&a, &LambdaElement::single(t.module_key(m), d.clone()), &l)?;
    let mut r = left;
    r.add_assign(&base.mul_poly(&l));
    r.sub_assign(&right);
    r.add_assign(&base.mul_poly(&(&d + &l)));
    let label = format!("sesquilinearity {} on v@{}", a, m);
    let passed = r.is_zero();
    Ok(Some(CheckItem::from_residual(label, &r, passed)))
}

#[cfg(test)]
mod tests;
