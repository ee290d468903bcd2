use std::collections::BTreeMap;
use std::time::Instant;

use ck_core::cohomology::{check_cocycle, h2_sum};
use ck_core::conformal::{
    algebra_from_ope, jacobi_items, jacobi_residual, builtin_ope_table, skew_items, skew_residual, table_diff,
    AlgebraSpec, CheckItem, CheckReport, Window,
};
use ck_core::derivation::{check_derivation, d_vec, express_in_inner, outer_dimension};
use ck_core::linalg::Solution;
use ck_core::module::{
    check_module, graded_module, rank_one_module, solve_graded_extension_in, solve_rank_one_extension_at,
    GradedParams, Pattern, RankOneParams,
};
use ck_core::{MultiPoly, Rational};
use rayon::prelude::*;

use crate::config::{Command, ModuleFamily, RunConfig};
use crate::input::{load_algebra, AlgebraJson, ModuleJson, OpeJson};
use crate::report::{
    cocycle_json, derivation_json, Body, CheckJson, ClassificationJson, ConfigEcho, DegreeJson, OpeJsonReport, Report,
    SumJson, SCHEMA,
};
use crate::CliError;

pub const THREADS_VAR: &str = "CK_THREADS";

/// `config.threads`, else `CK_THREADS`, else the available parallelism.
pub fn thread_count(config: &RunConfig) -> Result<usize, CliError> {
    if let Some(n) = config.threads {
        return Ok(n.max(1));
    }
    match std::env::var(THREADS_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| CliError::Usage(format!("{} must be a positive integer, got `{}`", THREADS_VAR, v))),
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let threads = thread_count(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {}", e)))?;
    let start = Instant::now();
    let mut report = pool.install(|| dispatch(config))?;
    report.elapsed = Some(start.elapsed());
    Ok(report)
}

fn echo(config: &RunConfig) -> ConfigEcho {
    let (degrees, family, input) = match &config.command {
        Command::Derivations { degrees } => (Some(format!("{}..{}", degrees.0, degrees.1)), None, None),
        Command::Modules { family, rules } => {
            let f = match family {
                ModuleFamily::RankOne => "rank-one".to_string(),
                ModuleFamily::Uniform => "uniform".to_string(),
                ModuleFamily::Pattern(b) => format!("pattern {}", b),
                ModuleFamily::AllPatterns => "all-patterns".to_string(),
            };
            let f = if rules.is_some() { "rules".to_string() } else { f };
            (None, Some(f), rules.as_ref().map(|p| p.display().to_string()))
        }
        Command::Ope { file } => (None, None, file.as_ref().map(|p| p.display().to_string())),
        _ => (None, None, None),
    };
    ConfigEcho {
        algebra: config.algebra.clone(),
        window: config.window.to_string(),
        deg_bound: config.degbound,
        degrees,
        family,
        input,
    }
}

fn dispatch(config: &RunConfig) -> Result<Report, CliError> {
    let alg = load_algebra(&config.algebra)?;
    let w = config.window;
    let (passed, result) = match &config.command {
        Command::Verify => verify(&alg, w)?,
        Command::Derivations { degrees } => derivations(&alg, w, config.degbound, *degrees)?,
        Command::Cohomology => cohomology(&alg, w, config.degbound)?,
        Command::Modules { family, rules } => modules(&alg, w, config.degbound, family, rules.as_deref())?,
        Command::Ope { file } => ope(&alg, w, file.as_deref())?,
    };
    Ok(Report {
        schema: SCHEMA,
        command: config.command.name().to_string(),
        config: echo(config),
        passed,
        result,
        elapsed: None,
    })
}

fn collect_report<T: Sync, F>(name: &str, items: &[T], f: F) -> Result<CheckReport, CliError>
where
    F: Fn(&T) -> ck_core::Result<CheckItem> + Sync,
{
    let done: Vec<CheckItem> = items.par_iter().map(&f).collect::<ck_core::Result<_>>()?;
    let mut r = CheckReport::new(name);
    for i in done {
        r.push(i);
    }
    Ok(r)
}

pub fn verify(alg: &AlgebraSpec, w: Window) -> Result<(bool, Body), CliError> {
    let skew = collect_report("skew-symmetry", &skew_items(alg, w), |(a, b)| {
        let r = skew_residual(alg, a, b)?;
        Ok(CheckItem::from_residual(format!("({}, {})", a, b), &r, r.is_zero()))
    })?;
    let jac = collect_report("jacobi", &jacobi_items(alg, w), |(a, b, c)| {
        let r = jacobi_residual(alg, a, b, c)?;
        Ok(CheckItem::from_residual(format!("({}, {}, {})", a, b, c), &r, r.is_zero()))
    })?;
    let checks = vec![CheckJson::from_report(&skew), CheckJson::from_report(&jac)];
    Ok((checks.iter().all(|c| c.passed()), Body::Verify { checks }))
}

pub fn derivations(alg: &AlgebraSpec, w: Window, degbound: u32, degrees: (i64, i64)) -> Result<(bool, Body), CliError> {
    let cs: Vec<i64> = (degrees.0..=degrees.1).collect();
    let has_lm = alg.family("L").is_ok() && alg.family("M").is_ok();
    let out: Vec<DegreeJson> = cs
        .par_iter()
        .map(|&c| -> Result<DegreeJson, CliError> {
            let r = outer_dimension(alg, c, w, degbound)?;
            let mut checked = true;
            for t in &r.representatives {
                checked &= check_derivation(alg, t, w)?.passed();
            }
            let d_vec_inner = if has_lm {
                let a: BTreeMap<i64, Rational> = [(c, Rational::one())].into_iter().collect();
                let d = d_vec(&a, w);
                match check_derivation(alg, &d, w) {
                    Ok(rep) if rep.passed() => {
                        Some(!matches!(express_in_inner(alg, &d, c, w, degbound)?, Solution::Inconsistent))
                    }
                    _ => None,
                }
            } else {
                None
            };
            Ok(DegreeJson {
                c,
                solution_dim: r.solution_dim,
                inner_dim: r.inner_dim,
                outer_dim: r.dim,
                representatives: r.representatives.iter().map(derivation_json).collect(),
                representatives_checked: checked,
                d_vec_inner,
            })
        })
        .collect::<Result<_, _>>()?;
    let passed = out.iter().all(|d| d.representatives_checked);
    Ok((passed, Body::Derivations { degrees: out }))
}

pub fn cohomology(alg: &AlgebraSpec, w: Window, degbound: u32) -> Result<(bool, Body), CliError> {
    w.require_interior()?;
    let sums: Vec<i64> = w.indices().collect();
    let out: Vec<SumJson> = sums
        .par_iter()
        .map(|&s| -> Result<SumJson, CliError> {
            let q = h2_sum(alg, w, degbound, s)?;
            let mut checked = true;
            for t in &q.representatives {
                checked &= check_cocycle(alg, t, w)?.passed();
            }
            Ok(SumJson {
                sum: s,
                cocycle_dim: q.cocycle_dim,
                coboundary_dim: q.coboundary_dim,
                dim: q.dim,
                representatives: q.representatives.iter().map(cocycle_json).collect(),
                representatives_checked: checked,
            })
        })
        .collect::<Result<_, _>>()?;
    let passed = out.iter().all(|s| s.representatives_checked);
    Ok((passed, Body::Cohomology { sums: out }))
}

fn module_check(name: String, alg: &AlgebraSpec, t: &ck_core::module::ActionTable, w: Window) -> Result<CheckJson, CliError> {
    let mut r = check_module(alg, t, w)?;
    r.name = name;
    Ok(CheckJson::from_report(&r))
}

/// The classified normal form for the family: twist zero where `Y` exists.
fn expected_params(alg: &AlgebraSpec) -> (RankOneParams, GradedParams) {
    if alg.family("Y").is_ok() {
        (
            RankOneParams::symbolic().with_e(MultiPoly::zero()),
            GradedParams::uniform().with_c(MultiPoly::zero()),
        )
    } else {
        (RankOneParams::symbolic(), GradedParams::uniform())
    }
}

pub fn modules(
    alg: &AlgebraSpec,
    w: Window,
    degbound: u32,
    family: &ModuleFamily,
    rules: Option<&std::path::Path>,
) -> Result<(bool, Body), CliError> {
    if let Some(path) = rules {
        let t = ModuleJson::load(path)?.to_table()?;
        let ch = module_check("module".to_string(), alg, &t, w)?;
        return Ok((ch.passed(), Body::Modules { checks: vec![ch], classification: None }));
    }
    let name = alg.name().to_string();
    if !AlgebraSpec::BUILTIN_NAMES.contains(&name.as_str()) || name == "cv" {
        return Err(CliError::Usage("module families need --algebra chv, csv or csv-ext".to_string()));
    }
    let (rank, graded) = expected_params(alg);
    let pattern = |bits: &str| -> Result<Pattern, CliError> {
        let v: Vec<u8> = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(CliError::Usage(format!("pattern `{}` may only contain 0 and 1", bits))),
            })
            .collect::<Result<_, _>>()?;
        Ok(Pattern::from_bits(w.lo(), &v)?)
    };
    match family {
        ModuleFamily::AllPatterns => {
            let pats = Pattern::all(w);
            let checks: Vec<CheckJson> = pats
                .par_iter()
                .map(|a| {
                    let p = GradedParams { kind: ck_core::module::GradedKind::Pattern(a.clone()), ..graded.clone() };
                    module_check(format!("pattern {}", a), alg, &graded_module(&name, &p, w)?, w)
                })
                .collect::<Result<_, _>>()?;
            let passed = checks.iter().all(|c| c.passed());
            Ok((passed, Body::Modules { checks, classification: None }))
        }
        _ => {
            let (label, table, sym) = match family {
                ModuleFamily::RankOne => {
                    ("rank-one".to_string(), rank_one_module(&name, &rank)?, None)
                }
                ModuleFamily::Uniform => ("uniform".to_string(), graded_module(&name, &graded, w)?, Some(GradedParams::uniform())),
                ModuleFamily::Pattern(bits) => {
                    let a = pattern(bits)?;
                    let p = GradedParams { kind: ck_core::module::GradedKind::Pattern(a.clone()), ..graded.clone() };
                    (format!("pattern {}", a), graded_module(&name, &p, w)?, Some(GradedParams::pattern(a)))
                }
                ModuleFamily::AllPatterns => unreachable!(),
            };
            let (check, result) = rayon::join(
                || module_check(label.clone(), alg, &table, w),
                || match &sym {
                    None => solve_rank_one_extension_at(&name, &RankOneParams::symbolic(), w, degbound),
                    Some(p) => solve_graded_extension_in(&name, p, w, degbound),
                },
            );
            let check = check?;
            let result = result?;
            let passed = check.passed() && result.settled && result.round_trip;
            Ok((
                passed,
                Body::Modules { checks: vec![check], classification: Some(ClassificationJson::from_result(&result)) },
            ))
        }
    }
}

pub fn ope(alg: &AlgebraSpec, w: Window, file: Option<&std::path::Path>) -> Result<(bool, Body), CliError> {
    let data = file.map(OpeJson::load).transpose()?;
    let families: Vec<String> = match &data {
        Some(d) => d.families.clone(),
        None => alg.families().iter().map(|f| f.to_string()).collect(),
    };
    let fams: Vec<&str> = families.iter().map(|s| s.as_str()).collect();
    let pairs: Vec<(i64, i64)> =
        w.indices().flat_map(|i| w.indices().filter(move |j| w.contains(i + j)).map(move |j| (i, j))).collect();
    let results: Vec<(AlgebraSpec, Vec<String>)> = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<_, CliError> {
            let comms = match &data {
                Some(d) => d.at(i, j)?,
                None => builtin_ope_table(i, j),
            };
            let t = algebra_from_ope(alg.name(), &fams, &comms)?;
            let diff = table_diff(&t, alg).into_iter().map(|d| format!("(i, j) = ({}, {}): {}", i, j, d)).collect();
            Ok((t, diff))
        })
        .collect::<Result<_, _>>()?;
    let differences: Vec<String> = results.iter().flat_map(|(_, d)| d.iter().cloned()).collect();
    let table = results
        .first()
        .map(|(t, _)| serde_json::to_value(AlgebraJson::from_spec(t)).expect("table serialises"))
        .unwrap_or(serde_json::Value::Null);
    Ok((
        differences.is_empty(),
        Body::Ope(OpeJsonReport { index_pairs: pairs.len(), differences, table }),
    ))
}
