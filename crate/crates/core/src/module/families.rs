use alloc::string::ToString;

use super::{ActionRule, ActionTable, Pattern};
use crate::conformal::{AlgebraSpec, Window};
use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Var};

/// Parameters of the rank-one family `L_i ↦ c^i(∂+aλ+b)`, `M_i ↦ c^i e`.
/// Each value is either the symbol itself or a specialisation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneParams {
    pub a: MultiPoly,
    pub b: MultiPoly,
    pub c: MultiPoly,
    pub e: MultiPoly,
    /// N-scalar, used only over the extended algebra.
    pub d: MultiPoly,
}

impl RankOneParams {
    /// All parameters symbolic; `c` is a unit and the N-scalar is `dn`.
    pub fn symbolic() -> Self {
        RankOneParams {
            a: MultiPoly::var(Var::param("a")),
            b: MultiPoly::var(Var::param("b")),
            c: MultiPoly::var(Var::unit("c")),
            e: MultiPoly::var(Var::param("e")),
            d: MultiPoly::var(Var::param("dn")),
        }
    }

    pub fn with_e(mut self, e: MultiPoly) -> Self {
        self.e = e;
        self
    }

    fn apply<C: crate::poly::Coefficient>(&self, t: &mut ActionTable<C>) -> Result<()> {
        if self.c.unit_inverse().is_none() {
            return Err(Error::UnitSubstitution { var: "c".to_string() });
        }
        for (var, own) in [
            (Var::param("a"), &self.a),
            (Var::param("b"), &self.b),
            (Var::unit("c"), &self.c),
            (Var::param("e"), &self.e),
            (Var::param("dn"), &self.d),
        ] {
            t.substitute_param(var, own.clone());
        }
        Ok(())
    }
}

/// Rank-one module over `chv`, `csv` or `csv-ext`. `Y` acts by zero and
/// `N_i` by `dn·c^i`.
pub fn rank_one_module(algname: &str, p: &RankOneParams) -> Result<ActionTable> {
    rank_one_module_with(algname, p, &[])
}

/// As [`rank_one_module`], with some family actions replaced.
pub fn rank_one_module_with(algname: &str, p: &RankOneParams, overrides: &[(&str, ActionRule)]) -> Result<ActionTable> {
    let alg = AlgebraSpec::builtin(algname)?;
    if algname == "cv" {
        return Err(Error::UnknownAlgebra("rank-one families need one of chv, csv, csv-ext".to_string()));
    }
    let mut t = ActionTable::new(false, &["c"]);
    t.set_rule("L", ActionRule::template("c^i*(d+a*l+b)")?);
    t.set_rule("M", ActionRule::template("c^i*e")?);
    if alg.family("Y").is_ok() {
        t.set_rule("Y", ActionRule::Zero);
    }
    if alg.family("N").is_ok() {
        t.set_rule("N", ActionRule::template("dn*c^i")?);
    }
    for (fam, rule) in overrides {
        alg.family(fam)?;
        t.set_rule(fam, rule.clone());
    }
    p.apply(&mut t)?;
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradedKind {
    /// `L_i v_m = (∂+aλ+b) v_{i+m}`.
    Uniform { a: MultiPoly },
    /// The four-case action read off `(A_m, A_{i+m})`.
    Pattern(Pattern),
}

/// Intermediate-series family; `M_i v_m = c v_{i+m}`, `Y` by zero and
/// `N_i v_m = d v_{i+m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedParams {
    pub kind: GradedKind,
    pub b: MultiPoly,
    pub c: MultiPoly,
    pub d: MultiPoly,
}

impl GradedParams {
    pub fn uniform() -> Self {
        GradedParams {
            kind: GradedKind::Uniform { a: MultiPoly::var(Var::param("a")) },
            b: MultiPoly::var(Var::param("b")),
            c: MultiPoly::var(Var::param("c")),
            d: MultiPoly::var(Var::param("dn")),
        }
    }

    pub fn pattern(pattern: Pattern) -> Self {
        GradedParams { kind: GradedKind::Pattern(pattern), ..Self::uniform() }
    }

    pub fn with_c(mut self, c: MultiPoly) -> Self {
        self.c = c;
        self
    }

    pub fn with_d(mut self, d: MultiPoly) -> Self {
        self.d = d;
        self
    }
}

pub fn graded_module(algname: &str, p: &GradedParams, w: Window) -> Result<ActionTable> {
    let alg = AlgebraSpec::builtin(algname)?;
    if algname == "cv" {
        return Err(Error::UnknownAlgebra("graded families need one of chv, csv, csv-ext".to_string()));
    }
    let mut t = ActionTable::new(true, &[]);
    match &p.kind {
        GradedKind::Uniform { a } => {
            t.set_rule("L", ActionRule::template("d+a*l+b")?);
            t.substitute_param(Var::param("a"), a.clone());
        }
        GradedKind::Pattern(pattern) => {
            pattern.covers(w)?;
            t.set_rule("L", ActionRule::Pattern { pattern: pattern.clone(), b: MultiPoly::var(Var::param("b")) });
        }
    }
    t.set_rule("M", ActionRule::template("c")?);
    if alg.family("Y").is_ok() {
        t.set_rule("Y", ActionRule::Zero);
    }
    if alg.family("N").is_ok() {
        t.set_rule("N", ActionRule::template("dn")?);
    }
    t.substitute_param(Var::param("b"), p.b.clone());
    t.substitute_param(Var::param("c"), p.c.clone());
    t.substitute_param(Var::param("dn"), p.d.clone());
    Ok(t)
}
