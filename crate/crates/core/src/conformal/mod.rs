//! ℤ-graded Lie conformal algebras presented by structure polynomials.
//!
//! An algebra is a free ℂ[∂]-module on basis keys `X_i` (family `X`, index
//! `i ∈ ℤ`) with `[X_i λ Y_j] = Σ_Z r_Z(∂, λ) Z_{i+j}`, the polynomials
//! `r_Z` independent of the indices.

mod axioms;
mod bracket;
mod element;
mod ope;

pub use axioms::{check_jacobi, check_skew, jacobi_items, jacobi_residual, skew_items, skew_residual, CheckItem, CheckReport};
pub use bracket::{bracket, bracket_at, bracket_at_left, conjugate_bracket};
pub use element::{Element, Lambda, LambdaElement, ParamLambda};
pub use ope::{algebra_from_ope, ope_to_lambda, builtin_ope_table, table_diff, OpeCommutator, OpeTerm};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::poly::{parse_poly, MultiPoly, Var};

/// Name of a generator family (`L`, `M`, `Y`, `N`, …).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyId(Arc<str>);

impl FamilyId {
    pub fn new(name: &str) -> Self {
        FamilyId(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn at(&self, index: i64) -> BasisKey {
        BasisKey { family: self.clone(), index }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Graded basis element `X_i`, printed `X@i`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisKey {
    pub family: FamilyId,
    pub index: i64,
}

impl BasisKey {
    pub fn new(family: &str, index: i64) -> Self {
        BasisKey { family: FamilyId::new(family), index }
    }

    /// Parses `X@i`.
    pub fn parse(text: &str) -> Result<Self> {
        let (fam, idx) = text.split_once('@').ok_or_else(|| Error::Parse {
            column: 1,
            message: format!("basis key `{}` must look like `L@1`", text),
        })?;
        let index = idx.trim().parse::<i64>().map_err(|_| Error::Parse {
            column: fam.len() + 2,
            message: format!("bad index in `{}`", text),
        })?;
        Ok(BasisKey::new(fam.trim(), index))
    }
}

impl fmt::Display for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.family, self.index)
    }
}

impl fmt::Debug for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Finite index range `lo..=hi` over which graded statements are checked.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Window {
    lo: i64,
    hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(Window { lo, hi })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn contains(&self, i: i64) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> + Clone {
        self.lo..=self.hi
    }

    pub fn widen(&self, by: i64) -> Window {
        Window { lo: self.lo - by, hi: self.hi + by }
    }

    /// Solvers anchor their constraints on index 0 and need at least one
    /// other index.
    pub fn require_interior(&self) -> Result<()> {
        if self.contains(0) && self.hi > self.lo {
            Ok(())
        } else {
            Err(Error::WindowTooSmall { lo: self.lo, hi: self.hi })
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

/// One output term of a structure table entry: `poly(∂, λ) · family_{i+j}`.
pub type StructureTerm = (FamilyId, MultiPoly);

/// A graded Lie conformal algebra given by index-independent structure
/// polynomials in ∂ and λ. Absent pairs bracket to zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraSpec {
    name: String,
    families: Vec<FamilyId>,
    table: BTreeMap<(FamilyId, FamilyId), Vec<StructureTerm>>,
}

impl AlgebraSpec {
    pub fn new(name: &str, families: &[&str]) -> Result<Self> {
        let mut fams: Vec<FamilyId> = Vec::new();
        for f in families {
            let id = FamilyId::new(f);
            if fams.contains(&id) {
                return Err(Error::InvalidSpec(format!("duplicate family `{}`", f)));
            }
            if f.is_empty() || f.contains('@') {
                return Err(Error::InvalidSpec(format!("bad family name `{}`", f)));
            }
            fams.push(id);
        }
        Ok(AlgebraSpec { name: name.to_string(), families: fams, table: BTreeMap::new() })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn families(&self) -> &[FamilyId] {
        &self.families
    }

    pub fn family(&self, name: &str) -> Result<FamilyId> {
        self.families
            .iter()
            .find(|f| f.as_str() == name)
            .cloned()
            .ok_or_else(|| Error::UnknownFamily(name.to_string()))
    }

    pub fn has_family(&self, f: &FamilyId) -> bool {
        self.families.contains(f)
    }

    /// Sets `[left λ right]`. Structure polynomials may only involve ∂ and λ.
    pub fn set_bracket(&mut self, left: &str, right: &str, out: &[(&str, MultiPoly)]) -> Result<()> {
        let l = self.family(left)?;
        let r = self.family(right)?;
        let mut terms: BTreeMap<FamilyId, MultiPoly> = BTreeMap::new();
        for (fam, poly) in out {
            let id = self.family(fam)?;
            if let Some(v) = poly.variables().into_iter().find(|v| !matches!(v, Var::D | Var::L)) {
                return Err(Error::InvalidSpec(format!(
                    "structure polynomial `{}` of [{} λ {}] uses `{}`; only d and l are allowed",
                    poly, left, right, v
                )));
            }
            terms.entry(id).or_default().add_assign(poly);
        }
        let terms: Vec<StructureTerm> = terms.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        if terms.is_empty() {
            self.table.remove(&(l, r));
        } else {
            self.table.insert((l, r), terms);
        }
        Ok(())
    }

    fn set_text(&mut self, left: &str, right: &str, out: &[(&str, &str)]) {
        let parsed: Vec<(&str, MultiPoly)> =
            out.iter().map(|(f, p)| (*f, parse_poly(p).expect("builtin polynomial"))).collect();
        self.set_bracket(left, right, &parsed).expect("builtin table");
    }

    /// Structure terms of `[left λ right]` (empty for a zero bracket).
    pub fn table(&self, left: &FamilyId, right: &FamilyId) -> &[StructureTerm] {
        self.table.get(&(left.clone(), right.clone())).map_or(&[], |v| v.as_slice())
    }

    /// Nonzero table entries in sorted order.
    pub fn entries(&self) -> impl Iterator<Item = (&(FamilyId, FamilyId), &Vec<StructureTerm>)> {
        self.table.iter()
    }

    /// The algebra with the same families and no nonzero brackets.
    pub fn zero_algebra(name: &str, families: &[&str]) -> Result<Self> {
        Self::new(name, families)
    }

    /// Builtin algebras: `cv` (loop Virasoro), `chv` (loop
    /// Heisenberg–Virasoro), `csv` (loop Schrödinger–Virasoro) and `csv-ext`
    /// (its extension by `N`).
    pub fn builtin(name: &str) -> Result<Self> {
        let mut alg = match name {
            "cv" => Self::new("cv", &["L"])?,
            "chv" => Self::new("chv", &["L", "M"])?,
            "csv" => Self::new("csv", &["L", "M", "Y"])?,
            "csv-ext" => Self::new("csv-ext", &["L", "M", "Y", "N"])?,
            other => return Err(Error::UnknownAlgebra(other.to_string())),
        };
        alg.set_text("L", "L", &[("L", "d+2*l")]);
        if name == "cv" {
            return Ok(alg);
        }
        alg.set_text("L", "M", &[("M", "d+l")]);
        alg.set_text("M", "L", &[("M", "l")]);
        if name == "chv" {
            return Ok(alg);
        }
        alg.set_text("L", "Y", &[("Y", "d+3/2*l")]);
        alg.set_text("Y", "L", &[("Y", "1/2*d+3/2*l")]);
        alg.set_text("Y", "Y", &[("M", "d+2*l")]);
        if name == "csv" {
            return Ok(alg);
        }
        alg.set_text("L", "N", &[("N", "d+l")]);
        alg.set_text("N", "L", &[("N", "l")]);
        alg.set_text("N", "M", &[("M", "2")]);
        alg.set_text("M", "N", &[("M", "-2")]);
        alg.set_text("N", "Y", &[("Y", "1")]);
        alg.set_text("Y", "N", &[("Y", "-1")]);
        Ok(alg)
    }

    pub const BUILTIN_NAMES: [&'static str; 4] = ["cv", "chv", "csv", "csv-ext"];

    /// Largest total degree in (∂, λ) over all structure polynomials.
    pub fn max_structure_degree(&self) -> i32 {
        self.table
            .values()
            .flat_map(|v| v.iter().filter_map(|(_, p)| p.total_degree()))
            .max()
            .unwrap_or(0)
    }

    /// All basis keys with index in `w`, ordered by family then index.
    pub fn keys_in(&self, w: Window) -> Vec<BasisKey> {
        let mut keys: Vec<BasisKey> =
            self.families.iter().flat_map(|f| w.indices().map(move |i| f.at(i))).collect();
        keys.sort();
        keys
    }

    fn check_families(&self, keys: &[&BasisKey]) -> Result<()> {
        for k in keys {
            if !self.has_family(&k.family) {
                return Err(Error::UnknownFamily(k.family.to_string()));
            }
        }
        Ok(())
    }
}
