//! Staged extension solvers for rank-one and intermediate-series modules.
//!
//! Every stage is a linear system in the coefficients of a degree-bounded
//! ansatz. The one genuinely bilinear constraint, the `(Y, Y)` pair, is never
//! solved: once the linear stages have pinned down a finite solution space,
//! its residual is probed at rational points and split into constant,
//! linear and quadratic parts in the coordinates of that space.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{
    graded_module, module_items, module_residual, rank_one_module_with, ActionRule, ActionTable, GradedKind,
    GradedParams, RankOneParams,
};
use crate::conformal::{AlgebraSpec, BasisKey, LambdaElement, Window};
use crate::error::{Error, Result};
use crate::linalg::{homogeneous_nullspace, row_from_form, SparseVec};
use crate::poly::{vars, LinearForm, MultiPoly, ParamPoly, Unknowns, Var};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageReport {
    pub name: String,
    pub unknowns: usize,
    pub equations: usize,
    pub solution_dim: usize,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationResult {
    pub algebra: String,
    pub base: String,
    pub window: Window,
    pub degbound: u32,
    pub stages: Vec<StageReport>,
    /// Unknown or parameter → forced value, e.g. `e → 0`, `Y → 0`.
    pub forced: BTreeMap<String, String>,
    pub free: Vec<String>,
    pub verdict: String,
    /// Every stage reached its closing conclusion.
    pub settled: bool,
    /// The table with all forced assignments applied, when one exists.
    pub normal_form: Option<ActionTable>,
    /// `check_module` passes on the normal form over the window.
    pub round_trip: bool,
}

/// Residual of one module constraint as a function of coordinates `t` on a
/// solution space: `constant + Σ t_k linear[k] + Σ_{k≤l} t_k t_l quadratic[(k,l)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadratic {
    pub label: String,
    pub constant: LambdaElement,
    pub linear: Vec<LambdaElement>,
    pub quadratic: BTreeMap<(usize, usize), LambdaElement>,
}

impl Quadratic {
    /// The residual does not depend on `t`.
    pub fn is_constant(&self) -> bool {
        self.linear.iter().all(|x| x.is_zero()) && self.quadratic.is_empty()
    }
}

/// Degree-bounded ansatz `Σ_{p+q≤D} x ∂^p λ^q · prefactor(i, m)` per key.
struct Ansatz {
    polys: BTreeMap<(i64, i64), ParamPoly>,
}

impl Ansatz {
    fn new<F: Fn(i64, i64) -> MultiPoly>(
        reg: &mut Unknowns,
        name: &str,
        keys: &[(i64, i64)],
        degbound: u32,
        prefactor: F,
    ) -> Self {
        let mut polys = BTreeMap::new();
        for &(i, m) in keys {
            let pre = prefactor(i, m);
            let mut p = ParamPoly::zero();
            for deg in 0..=degbound {
                for q in 0..=deg {
                    let x = reg.get_or_create(name, &[i, m, (deg - q) as i64, q as i64]);
                    let mono = vars::d().pow(deg - q).mul(&vars::l().pow(q)).mul(&pre);
                    for (mm, c) in mono.terms() {
                        p.add_term(mm.clone(), LinearForm::term(x, c.clone()));
                    }
                }
            }
            polys.insert((i, m), p);
        }
        Ansatz { polys }
    }

    fn rule(&self) -> ActionRule<LinearForm> {
        ActionRule::Explicit(self.polys.clone())
    }

    fn values(&self, v: &SparseVec) -> BTreeMap<(i64, i64), MultiPoly> {
        self.polys.iter().map(|(k, p)| (*k, p.specialize(|u| v.get(u.id())))).collect()
    }

    fn specialize(&self, v: &SparseVec) -> ActionRule {
        ActionRule::Explicit(self.values(v))
    }
}

fn combine(basis: &[SparseVec], coords: &[Rational]) -> SparseVec {
    let mut out = SparseVec::new();
    for (b, t) in basis.iter().zip(coords) {
        if !t.is_zero() {
            out = out.sub_scaled(&-t, b);
        }
    }
    out
}

/// `c^j` for an invertible `c`.
fn unit_pow(c: &MultiPoly, j: i64) -> MultiPoly {
    if j >= 0 {
        c.pow(j as u32)
    } else {
        c.unit_inverse().expect("invertible twist").pow((-j) as u32)
    }
}

fn is_symbol(p: &MultiPoly, v: Var) -> bool {
    *p == MultiPoly::var(v)
}

type Item = (BasisKey, BasisKey, i64);

fn items_where<F: Fn(&str, &str) -> bool>(alg: &AlgebraSpec, graded: bool, w: Window, keep: F) -> Vec<Item> {
    module_items(alg, graded, w).into_iter().filter(|(a, b, _)| keep(a.family.as_str(), b.family.as_str())).collect()
}

fn item_label(graded: bool, a: &BasisKey, b: &BasisKey, m: i64) -> String {
    if graded {
        format!("({}, {}) on v@{}", a, b, m)
    } else {
        format!("({}, {})", a, b)
    }
}

/// Nullspace of the homogeneous system collected from `items`, and the
/// number of equations.
fn linear_stage(alg: &AlgebraSpec, t: &ActionTable<LinearForm>, items: &[Item], ncols: usize) -> Result<(Vec<SparseVec>, usize)> {
    let mut rows = Vec::new();
    for (a, b, m) in items {
        let r = module_residual(alg, t, a, b, *m)?;
        for f in r.equations_from_zero() {
            if !f.constant_part().is_zero() {
                return Err(Error::InvalidSpec(format!(
                    "inhomogeneous constraint at {}",
                    item_label(t.is_graded(), a, b, *m)
                )));
            }
            rows.push(row_from_form(&f));
        }
    }
    let n = rows.len();
    Ok((homogeneous_nullspace(ncols, rows), n))
}

/// Splits the residuals of `items` over the space spanned by `dim`
/// coordinates by polarisation at the points `0`, `±e_k`, `e_k + e_l`.
fn probe<F: Fn(&[Rational]) -> Result<ActionTable>>(
    alg: &AlgebraSpec,
    items: &[Item],
    graded: bool,
    dim: usize,
    table_at: F,
) -> Result<Vec<Quadratic>> {
    let eval = |coords: &[Rational]| -> Result<Vec<LambdaElement>> {
        let t = table_at(coords)?;
        items.iter().map(|(a, b, m)| module_residual(alg, &t, a, b, *m)).collect()
    };
    let point = |entries: &[(usize, i64)]| {
        let mut c = vec![Rational::zero(); dim];
        for (k, v) in entries {
            c[*k] = Rational::from_int(*v);
        }
        c
    };
    let half = Rational::new(1, 2);
    let c0 = eval(&point(&[]))?;
    let mut lin: Vec<Vec<LambdaElement>> = Vec::with_capacity(dim);
    let mut diag: Vec<Vec<LambdaElement>> = Vec::with_capacity(dim);
    for k in 0..dim {
        let plus = eval(&point(&[(k, 1)]))?;
        let minus = eval(&point(&[(k, -1)]))?;
        let mut l = Vec::with_capacity(items.len());
        let mut q = Vec::with_capacity(items.len());
        for n in 0..items.len() {
            let mut a = plus[n].clone();
            a.sub_assign(&minus[n]);
            l.push(a.scale(&half));
            let mut s = plus[n].clone();
            s.add_assign(&minus[n]);
            let mut s = s.scale(&half);
            s.sub_assign(&c0[n]);
            q.push(s);
        }
        lin.push(l);
        diag.push(q);
    }
    let mut out: Vec<Quadratic> = items
        .iter()
        .enumerate()
        .map(|(n, (a, b, m))| {
            let mut quadratic = BTreeMap::new();
            for (k, d) in diag.iter().enumerate() {
                if !d[n].is_zero() {
                    quadratic.insert((k, k), d[n].clone());
                }
            }
            Quadratic {
                label: item_label(graded, a, b, *m),
                constant: c0[n].clone(),
                linear: lin.iter().map(|l| l[n].clone()).collect(),
                quadratic,
            }
        })
        .collect();
    for k in 0..dim {
        for l in k + 1..dim {
            let r = eval(&point(&[(k, 1), (l, 1)]))?;
            for (n, q) in out.iter_mut().enumerate() {
                let mut x = r[n].clone();
                for s in [&c0[n], &lin[k][n], &lin[l][n], &diag[k][n], &diag[l][n]] {
                    x.sub_assign(s);
                }
                if !x.is_zero() {
                    q.quadratic.insert((k, l), x);
                }
            }
        }
    }
    Ok(out)
}

/// Every coefficient of `c` over `∂, λ, μ` is a single monomial carrying
/// `var` (times units), so `c = 0` forces `var = 0`.
fn forces_zero(c: &LambdaElement, var: &Var) -> bool {
    if c.is_zero() {
        return false;
    }
    c.terms().all(|(_, p)| {
        p.collect(&[Var::D, Var::L, Var::M]).values().all(|q| {
            q.len() == 1
                && q.terms().all(|(mono, _)| {
                    mono.exponent(var) > 0 && mono.variables().all(|v| v == var || v.is_unit())
                })
        })
    })
}

enum Closure {
    /// The residual is constant on the solution space and forces `var = 0`.
    Forced(String),
    /// Constant and nonzero with no parameter left to vanish.
    Inconsistent(String),
    Open(String),
}

fn close_branch(qs: &[Quadratic], var: &Var) -> Closure {
    if let Some(q) = qs.iter().find(|q| !q.is_constant()) {
        return Closure::Open(format!("{} depends on the Y coordinates", q.label));
    }
    let Some(q) = qs.iter().find(|q| !q.constant.is_zero()) else {
        return Closure::Open("every (Y, Y) residual vanishes".to_string());
    };
    let text = format!("{} requires {} = 0", q.label, q.constant);
    if qs.iter().filter(|q| !q.constant.is_zero()).all(|q| forces_zero(&q.constant, var)) {
        Closure::Forced(text)
    } else {
        Closure::Inconsistent(text)
    }
}

fn describe_forms(values: &[BTreeMap<(i64, i64), MultiPoly>], key: &Var) -> (bool, bool) {
    let free_of = values.iter().all(|m| m.values().all(|p| p.is_free_of(key)));
    let m_indep = values.iter().all(|m| {
        let mut by_i: BTreeMap<i64, &MultiPoly> = BTreeMap::new();
        m.iter().all(|((i, _), p)| *by_i.entry(*i).or_insert(p) == p)
    });
    (free_of, m_indep)
}

/// A one-dimensional space spanned by `κ · prefactor(i, m)` with a fixed
/// nonzero rational `κ`.
fn scalar_multiple<F: Fn(i64, i64) -> MultiPoly>(values: &BTreeMap<(i64, i64), MultiPoly>, prefactor: F) -> bool {
    let mut kappa: Option<Rational> = None;
    for ((i, m), p) in values {
        let pre = prefactor(*i, *m);
        let Some((mono, c)) = pre.terms().next() else { return false };
        let k = p.coefficient(mono) * c.recip().expect("nonzero prefactor");
        if k.is_zero() || *p != pre.scale(&k) {
            return false;
        }
        match &kappa {
            Some(x) if *x != k => return false,
            _ => kappa = Some(k),
        }
    }
    kappa.is_some()
}

/// Which base family a solver instance starts from; used to rebuild tables
/// with a given `Y` or `N` rule.
enum Base<'a> {
    RankOne(&'a RankOneParams),
    Graded(&'a GradedParams, Window),
}

impl Base<'_> {
    fn graded(&self) -> bool {
        matches!(self, Base::Graded(..))
    }

    fn build(&self, algname: &str, twist_zero: bool, overrides: &[(&str, ActionRule)]) -> Result<ActionTable> {
        match self {
            Base::RankOne(p) => {
                let p = if twist_zero { (*p).clone().with_e(MultiPoly::zero()) } else { (*p).clone() };
                rank_one_module_with(algname, &p, overrides)
            }
            Base::Graded(p, w) => {
                let p = if twist_zero { (*p).clone().with_c(MultiPoly::zero()) } else { (*p).clone() };
                let mut t = graded_module(algname, &p, *w)?;
                for (f, r) in overrides {
                    t.set_rule(f, r.clone());
                }
                Ok(t)
            }
        }
    }

    fn keys(&self, w: Window) -> Vec<(i64, i64)> {
        match self {
            Base::RankOne(_) => w.indices().map(|j| (j, 0)).collect(),
            Base::Graded(..) => w
                .indices()
                .flat_map(|i| w.indices().filter(move |m| w.contains(i + m)).map(move |m| (i, m)))
                .collect(),
        }
    }

    fn prefactor(&self, i: i64) -> MultiPoly {
        match self {
            Base::RankOne(p) => unit_pow(&p.c, i),
            Base::Graded(..) => MultiPoly::one(),
        }
    }

    /// The parameter multiplying the `M`-action.
    fn twist(&self) -> (&'static str, Var, &MultiPoly) {
        match self {
            Base::RankOne(p) => ("e", Var::param("e"), &p.e),
            Base::Graded(p, _) => ("c", Var::param("c"), &p.c),
        }
    }

    fn name(&self) -> String {
        match self {
            Base::RankOne(_) => "rank-one".to_string(),
            Base::Graded(p, _) => match &p.kind {
                GradedKind::Uniform { .. } => "uniform".to_string(),
                GradedKind::Pattern(a) => format!("pattern {}", a),
            },
        }
    }

    fn symbolic_free(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            Base::RankOne(p) => {
                for (name, v, var) in [("a", &p.a, Var::param("a")), ("b", &p.b, Var::param("b")), ("c", &p.c, Var::unit("c"))] {
                    if is_symbol(v, var) {
                        out.push(name.to_string());
                    }
                }
            }
            Base::Graded(p, _) => {
                if let GradedKind::Uniform { a } = &p.kind {
                    if is_symbol(a, Var::param("a")) {
                        out.push("a".to_string());
                    }
                }
                if is_symbol(&p.b, Var::param("b")) {
                    out.push("b".to_string());
                }
            }
        }
        out
    }

    fn n_scalar(&self) -> &MultiPoly {
        match self {
            Base::RankOne(p) => &p.d,
            Base::Graded(p, _) => &p.d,
        }
    }

    fn n_form(&self) -> &'static str {
        match self {
            Base::RankOne(_) => "dn*c^i",
            Base::Graded(..) => "dn",
        }
    }
}

/// Classifies rank-one extensions over `csv` or `csv-ext` with all
/// parameters symbolic on the window `[-2, 2]`.
pub fn solve_rank_one_extension(algname: &str, degbound: u32) -> Result<ClassificationResult> {
    solve_rank_one_extension_at(algname, &RankOneParams::symbolic(), Window::new(-2, 2)?, degbound)
}

/// As [`solve_rank_one_extension`] with some parameters specialised.
pub fn solve_rank_one_extension_at(
    algname: &str,
    p: &RankOneParams,
    w: Window,
    degbound: u32,
) -> Result<ClassificationResult> {
    run(algname, Base::RankOne(p), w, degbound)
}

/// Classifies intermediate-series extensions of the given base kind with
/// `b`, `c` and the N-scalar symbolic.
pub fn solve_graded_extension(algname: &str, kind: &GradedKind, w: Window, degbound: u32) -> Result<ClassificationResult> {
    let p = GradedParams { kind: kind.clone(), ..GradedParams::uniform() };
    solve_graded_extension_in(algname, &p, w, degbound)
}

pub fn solve_graded_extension_in(algname: &str, p: &GradedParams, w: Window, degbound: u32) -> Result<ClassificationResult> {
    run(algname, Base::Graded(p, w), w, degbound)
}

fn run(algname: &str, base: Base<'_>, w: Window, degbound: u32) -> Result<ClassificationResult> {
    let alg = AlgebraSpec::builtin(algname)?;
    if algname == "cv" {
        return Err(Error::UnknownAlgebra("module solvers need one of chv, csv, csv-ext".to_string()));
    }
    w.require_interior()?;
    let graded = base.graded();
    let has_y = alg.family("Y").is_ok();
    let has_n = alg.family("N").is_ok();
    let keys = base.keys(w);
    let (twist_name, twist_var, twist_value) = base.twist();
    let twist_zero = twist_value.is_zero();

    let mut stages = Vec::new();
    let mut forced = BTreeMap::new();
    let mut free = base.symbolic_free();
    let mut settled = true;
    let mut verdict_parts: Vec<String> = Vec::new();

    let no_y = || if has_y { vec![("Y", ActionRule::Zero)] } else { vec![] };
    let mut twist_forced = twist_zero;

    if has_y && !twist_zero {
        // (M, Y): with a nonzero twist h must be free of ∂.
        let mut reg = Unknowns::new();
        let ans = Ansatz::new(&mut reg, "h", &keys, degbound, |i, _| base.prefactor(i));
        let mut t = base.build(algname, false, &[])?.to_param();
        t.set_rule("Y", ans.rule());
        let items = items_where(&alg, graded, w, |a, b| a == "M" && b == "Y");
        let (basis, neq) = linear_stage(&alg, &t, &items, reg.len())?;
        let values: Vec<_> = basis.iter().map(|v| ans.values(v)).collect();
        let (d_free, m_indep) = describe_forms(&values, &Var::D);
        let mut outcome = format!("{}h is free of d", if d_free { "" } else { "not every " });
        if graded {
            outcome.push_str(if m_indep { " and of m" } else { "; h depends on m" });
        }
        stages.push(StageReport {
            name: format!("(M, Y) with {} != 0", twist_name),
            unknowns: reg.len(),
            equations: neq,
            solution_dim: basis.len(),
            outcome,
        });

        // (Y, Y) on that space.
        let items = items_where(&alg, graded, w, |a, b| a == "Y" && b == "Y");
        let qs = probe(&alg, &items, graded, basis.len(), |coords| {
            let rule = ans.specialize(&combine(&basis, coords));
            base.build(algname, false, &[("Y", rule)])
        })?;
        let closure = close_branch(&qs, &twist_var);
        let (outcome, close) = match closure {
            Closure::Forced(text) => {
                forced.insert(twist_name.to_string(), "0".to_string());
                twist_forced = true;
                (format!("branch closed: {}", text), true)
            }
            Closure::Inconsistent(text) => {
                verdict_parts.push(format!("no module: {}", text));
                (format!("inconsistent: {}", text), false)
            }
            Closure::Open(text) => {
                verdict_parts.push(format!("{} != 0 branch open", twist_name));
                (format!("open: {}", text), false)
            }
        };
        settled &= close;
        stages.push(StageReport {
            name: format!("(Y, Y) with {} != 0", twist_name),
            unknowns: basis.len(),
            equations: items.len(),
            solution_dim: if close { 0 } else { basis.len() },
            outcome,
        });
        if !close {
            return Ok(ClassificationResult {
                algebra: algname.to_string(),
                base: base.name(),
                window: w,
                degbound,
                stages,
                forced,
                free,
                verdict: verdict_parts.join("; "),
                settled: false,
                normal_form: None,
                round_trip: false,
            });
        }
    } else if !has_y && !twist_zero {
        free.push(twist_name.to_string());
    }

    if has_y {
        // (L, Y), (Y, L), (M, Y), (Y, M) with the twist gone.
        let mut reg = Unknowns::new();
        let ans = Ansatz::new(&mut reg, "h", &keys, degbound, |i, _| base.prefactor(i));
        let mut t = base.build(algname, twist_forced, &[])?;
        if has_n {
            t.set_rule("N", ActionRule::Zero);
        }
        let mut t = t.to_param();
        t.set_rule("Y", ans.rule());
        let items = items_where(&alg, graded, w, |a, b| (a == "Y") != (b == "Y") && a != "N" && b != "N");
        let (basis, neq) = linear_stage(&alg, &t, &items, reg.len())?;
        let outcome = if basis.is_empty() {
            forced.insert("Y".to_string(), "0".to_string());
            "h = 0".to_string()
        } else {
            settled = false;
            verdict_parts.push(format!("Y-space of dimension {}", basis.len()));
            format!("{} independent Y-actions", basis.len())
        };
        stages.push(StageReport {
            name: "(L, Y)".to_string(),
            unknowns: reg.len(),
            equations: neq,
            solution_dim: basis.len(),
            outcome,
        });
    }

    let mut n_override: Option<ActionRule> = None;
    if has_n {
        let mut reg = Unknowns::new();
        let ans = Ansatz::new(&mut reg, "n", &keys, degbound, |i, _| base.prefactor(i));
        let mut t = base.build(algname, twist_forced, &no_y())?.to_param();
        t.set_rule("N", ans.rule());
        let items = items_where(&alg, graded, w, |a, b| (a == "N") != (b == "N"));
        let (basis, neq) = linear_stage(&alg, &t, &items, reg.len())?;
        let values: Vec<_> = basis.iter().map(|v| ans.values(v)).collect();
        let items_nn = items_where(&alg, graded, w, |a, b| a == "N" && b == "N");
        let qs = probe(&alg, &items_nn, graded, basis.len(), |coords| {
            let mut o = no_y();
            o.push(("N", ans.specialize(&combine(&basis, coords))));
            base.build(algname, twist_forced, &o)
        })?;
        let nn_ok = qs.iter().all(|q| q.is_constant() && q.constant.is_zero());
        let outcome = if basis.is_empty() {
            forced.insert("N".to_string(), "0".to_string());
            n_override = Some(ActionRule::Zero);
            "N = 0".to_string()
        } else if basis.len() == 1 && scalar_multiple(&values[0], |i, _| base.prefactor(i)) && nn_ok {
            forced.insert("N".to_string(), base.n_form().to_string());
            if is_symbol(base.n_scalar(), Var::param("dn")) {
                free.push("dn".to_string());
            }
            format!("N = {}", base.n_form())
        } else {
            settled = false;
            verdict_parts.push(format!("N-space of dimension {} not a scalar family", basis.len()));
            format!("{} independent N-actions; (N, N) {}", basis.len(), if nn_ok { "holds" } else { "fails" })
        };
        stages.push(StageReport {
            name: "N".to_string(),
            unknowns: reg.len(),
            equations: neq,
            solution_dim: basis.len(),
            outcome,
        });
    }

    let mut overrides = no_y();
    if let Some(r) = n_override.clone() {
        overrides.push(("N", r));
    }
    let nf = base.build(algname, twist_forced, &overrides)?;
    let report = super::check_module(&alg, &nf, w)?;
    let round_trip = report.passed();
    settled &= round_trip;
    if !round_trip {
        verdict_parts.push(format!("normal form fails {} check(s)", report.failures().count()));
    }

    let verdict = if settled {
        let mut parts: Vec<String> = forced.iter().map(|(k, v)| format!("{} = {}", k, v)).collect();
        parts.sort();
        let free_txt = if free.is_empty() { "none".to_string() } else { free.join(", ") };
        format!("{} module with {}; free: {}", base.name(), parts.join(", "), free_txt)
    } else {
        verdict_parts.join("; ")
    };

    Ok(ClassificationResult {
        algebra: algname.to_string(),
        base: base.name(),
        window: w,
        degbound,
        stages,
        forced,
        free,
        verdict,
        settled,
        normal_form: Some(nf),
        round_trip,
    })
}

#[cfg(test)]
pub(super) mod tests_support {
    use super::*;

    pub fn cpow(j: i64) -> MultiPoly {
        unit_pow(&MultiPoly::var(Var::unit("c")), j)
    }

    /// Probes `(Y, Y)` items on the line `t · h`.
    pub fn probe_rank_one(
        alg: &AlgebraSpec,
        p: &RankOneParams,
        items: &[Item],
        h: &BTreeMap<(i64, i64), MultiPoly>,
    ) -> Result<Vec<Quadratic>> {
        probe(alg, items, false, 1, |coords| {
            let rule = ActionRule::Explicit(h.iter().map(|(k, v)| (*k, v.scale(&coords[0]))).collect());
            rank_one_module_with(alg.name(), p, &[("Y", rule)])
        })
    }
}
