//! JSON inputs: algebra specs, OPE tables and module action rules.

use std::path::Path;

use ck_core::conformal::{AlgebraSpec, BasisKey, Element, OpeCommutator, OpeTerm};
use ck_core::module::{ActionRule, ActionTable};
use ck_core::poly::{parse_poly, MultiPoly};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    #[serde(default)]
    pub name: Option<String>,
    pub families: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BracketJson {
    pub left: String,
    pub right: String,
    pub out: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub family: String,
    pub poly: String,
}

fn poly_at(text: &str, at: &str) -> Result<MultiPoly, CliError> {
    parse_poly(text).map_err(|e| CliError::Input(format!("{}: {}", at, e)))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {}", path.display(), e)))
}

fn from_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{}: {}", path.display(), e)))
}

impl AlgebraJson {
    pub fn to_spec(&self, default_name: &str) -> Result<AlgebraSpec, CliError> {
        let fams: Vec<&str> = self.families.iter().map(|s| s.as_str()).collect();
        let name = self.name.as_deref().unwrap_or(default_name);
        let mut alg = AlgebraSpec::new(name, &fams).map_err(|e| CliError::Input(e.to_string()))?;
        for (n, b) in self.brackets.iter().enumerate() {
            let mut out = Vec::new();
            for (k, t) in b.out.iter().enumerate() {
                out.push((t.family.as_str(), poly_at(&t.poly, &format!("brackets[{}].out[{}].poly", n, k))?));
            }
            alg.set_bracket(&b.left, &b.right, &out)
                .map_err(|e| CliError::Input(format!("brackets[{}]: {}", n, e)))?;
        }
        Ok(alg)
    }

    pub fn from_spec(alg: &AlgebraSpec) -> Self {
        let families = alg.families().iter().map(|f| f.to_string()).collect();
        let brackets = alg
            .entries()
            .filter(|(_, out)| !out.is_empty())
            .map(|((l, r), out)| BracketJson {
                left: l.to_string(),
                right: r.to_string(),
                out: out.iter().map(|(f, p)| TermJson { family: f.to_string(), poly: p.to_string() }).collect(),
            })
            .collect();
        AlgebraJson { name: Some(alg.name().to_string()), families, brackets }
    }
}

/// A builtin name, or a path to an algebra JSON file.
pub fn load_algebra(spec: &str) -> Result<AlgebraSpec, CliError> {
    if AlgebraSpec::BUILTIN_NAMES.contains(&spec) {
        return AlgebraSpec::builtin(spec).map_err(CliError::Core);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "`{}` is neither a builtin ({}) nor a readable file",
            spec,
            AlgebraSpec::BUILTIN_NAMES.join(", ")
        )));
    }
    let text = read(path)?;
    let json: AlgebraJson = from_json(path, &text)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("file");
    json.to_spec(stem)
}

/// OPE data: the commutator `[left_i(z), right_j(w)]` has coefficient
/// `poly · family_{i+j}(w)` in front of `∂_w^j δ(z,w) / j!`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OpeJson {
    pub families: Vec<String>,
    pub commutators: Vec<OpeCommutatorJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OpeCommutatorJson {
    pub left: String,
    pub right: String,
    pub terms: Vec<OpeTermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OpeTermJson {
    pub j: u32,
    pub family: String,
    pub poly: String,
}

impl OpeJson {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        from_json(path, &read(path)?)
    }

    pub fn at(&self, i: i64, j: i64) -> Result<Vec<OpeCommutator>, CliError> {
        let mut out = Vec::new();
        for (n, c) in self.commutators.iter().enumerate() {
            let mut terms = Vec::new();
            for (k, t) in c.terms.iter().enumerate() {
                let p = poly_at(&t.poly, &format!("commutators[{}].terms[{}].poly", n, k))?;
                terms.push(OpeTerm { j: t.j, value: Element::single(BasisKey::new(&t.family, i + j), p) });
            }
            out.push(OpeCommutator { left: BasisKey::new(&c.left, i), right: BasisKey::new(&c.right, j), terms });
        }
        Ok(out)
    }
}

/// A module given rule by rule; templates may use `i` and `m`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    #[serde(default)]
    pub graded: bool,
    #[serde(default)]
    pub units: Vec<String>,
    pub rules: Vec<RuleJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RuleJson {
    pub family: String,
    pub poly: String,
}

impl ModuleJson {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        from_json(path, &read(path)?)
    }

    pub fn to_table(&self) -> Result<ActionTable, CliError> {
        let units: Vec<&str> = self.units.iter().map(|s| s.as_str()).collect();
        let mut t = ActionTable::new(self.graded, &units);
        for (n, r) in self.rules.iter().enumerate() {
            let rule = ActionRule::template(&r.poly).map_err(|e| CliError::Input(format!("rules[{}].poly: {}", n, e)))?;
            t.set_rule(&r.family, rule);
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_round_trip_through_json() {
        for name in AlgebraSpec::BUILTIN_NAMES {
            let alg = AlgebraSpec::builtin(name).unwrap();
            let json = serde_json::to_string(&AlgebraJson::from_spec(&alg)).unwrap();
            let back: AlgebraJson = serde_json::from_str(&json).unwrap();
            assert_eq!(back.to_spec("x").unwrap(), alg);
        }
    }

    #[test]
    fn bad_poly_names_its_location() {
        let json = r#"{"families":["L"],"brackets":[{"left":"L","right":"L","out":[{"family":"L","poly":"d+*l"}]}]}"#;
        let a: AlgebraJson = serde_json::from_str(json).unwrap();
        let e = a.to_spec("x").unwrap_err().to_string();
        assert!(e.contains("brackets[0].out[0].poly"), "{}", e);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<AlgebraJson>(r#"{"families":[],"bracket":[]}"#).is_err());
    }
}
