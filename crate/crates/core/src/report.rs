//! The command layer: run an engine operation against a parsed spec and
//! collect a deterministic, machine-readable report. The CLI binary and the
//! browser demo are both thin shells over these functions.
//!
//! Reports serialize deterministically for fixed inputs and seed: JSON maps
//! are sorted, nothing derives from wall-clock time (elapsed time is carried
//! in memory and printed to stderr only), and all sampling uses the seeded
//! splitmix generator.

use crate::algebra::{Algebra, ScalarMode};
use crate::diffop::{DPOp, VarCount};
use crate::filtration::{
    self, ad_criterion_subspace, check_multiplicative, commutative_filtration,
    commutative_filtration_z, default_n_max, noncommutative_filtration,
    noncommutative_filtration_z, FiltrationMode,
};
use crate::free::{
    check_multimorphism, codiagonal_kernel_check, example11_map, FreeAlgebra, FreeElement,
    HasseSchmidt, LinearEndo,
};
use crate::linalg::{IntegerLattice, RatMatrix, Subspace};
use crate::principal_parts;
use crate::scalar::{format_rat, parse_rat, Rat};
use crate::spec::{resolved_json, AlgebraSpec, SpecError};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt;

pub const DEFAULT_SEED: u64 = 1729;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!(
                "unknown format '{other}' (expected table, json or csv)"
            )),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub details: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckOutcome {
    fn pass(name: &str, details: impl Into<String>) -> CheckOutcome {
        CheckOutcome {
            name: name.into(),
            passed: true,
            details: details.into(),
            witness: None,
        }
    }

    fn fail(name: &str, details: impl Into<String>, witness: Option<String>) -> CheckOutcome {
        CheckOutcome {
            name: name.into(),
            passed: false,
            details: details.into(),
            witness,
        }
    }

    fn of(
        name: &str,
        passed: bool,
        details: impl Into<String>,
        witness: Option<String>,
    ) -> CheckOutcome {
        CheckOutcome {
            name: name.into(),
            passed,
            details: details.into(),
            witness,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraSummary {
    pub dim: usize,
    pub commutative: bool,
    pub scalars: String,
    pub labels: Vec<String>,
}

impl AlgebraSummary {
    fn of(a: &Algebra) -> AlgebraSummary {
        AlgebraSummary {
            dim: a.dim(),
            commutative: a.is_commutative(),
            scalars: a.scalar_mode().to_string(),
            labels: a.labels().to_vec(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSummary>,
    pub results: Value,
    pub checks: Vec<CheckOutcome>,
    /// Wall-clock time, never serialized: reports must be byte-identical
    /// across reruns.
    #[serde(skip)]
    pub elapsed_ms: Option<u128>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn emit(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => {
                let mut text = serde_json::to_string_pretty(self).expect("report serializes");
                text.push('\n');
                text
            }
            ReportFormat::Table => self.emit_table(),
            ReportFormat::Csv => self.emit_csv(),
        }
    }

    fn emit_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("seed: {}\n", self.seed));
        if let Some(a) = &self.algebra {
            out.push_str(&format!(
                "algebra: dim={} commutative={} scalars={} labels=[{}]\n",
                a.dim,
                a.commutative,
                a.scalars,
                a.labels.join(", ")
            ));
        }
        if !self.results.is_null() {
            out.push_str("results:\n");
            render_value(&self.results, 1, &mut out);
        }
        if !self.checks.is_empty() {
            out.push_str("checks:\n");
            for c in &self.checks {
                let mark = if c.passed { "pass" } else { "FAIL" };
                out.push_str(&format!("  [{mark}] {}: {}\n", c.name, c.details));
                if let Some(w) = &c.witness {
                    out.push_str(&format!("         witness: {w}\n"));
                }
            }
        }
        out.push_str(&format!(
            "status: {}\n",
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        out
    }

    fn emit_csv(&self) -> String {
        // One row per filtration level when present; otherwise one row per
        // check. Nested values are skipped so cells stay atomic.
        if let Some(levels) = self.results.get("levels").and_then(Value::as_array) {
            let mut columns: Vec<String> = Vec::new();
            for level in levels {
                if let Some(obj) = level.as_object() {
                    for (k, v) in obj {
                        if !v.is_array() && !v.is_object() && !columns.contains(k) {
                            columns.push(k.clone());
                        }
                    }
                }
            }
            columns.sort();
            let mut out = columns.join(",");
            out.push('\n');
            for level in levels {
                let row: Vec<String> = columns
                    .iter()
                    .map(|c| level.get(c).map(scalar_cell).unwrap_or_default())
                    .collect();
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        } else {
            let mut out = String::from("check,passed,details\n");
            for c in &self.checks {
                out.push_str(&format!(
                    "{},{},{}\n",
                    c.name,
                    c.passed,
                    c.details.replace(',', ";")
                ));
            }
            out
        }
    }
}

fn scalar_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn render_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) if !is_scalar_array(val) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(val, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", inline_value(val))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(map) => {
                        let fields: Vec<String> = map
                            .iter()
                            .map(|(k, v)| format!("{k}={}", inline_value(v)))
                            .collect();
                        out.push_str(&format!("{pad}- {}\n", fields.join(" ")));
                    }
                    other => out.push_str(&format!("{pad}- {}\n", inline_value(other))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline_value(other))),
    }
}

fn is_scalar_array(v: &Value) -> bool {
    matches!(v, Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()))
}

fn inline_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(inline_value).collect();
            format!("[{}]", inner.join(", "))
        }
        Value::Object(map) => {
            let inner: Vec<String> = map
                .iter()
                .map(|(k, v)| format!("{k}={}", inline_value(v)))
                .collect();
            format!("{{{}}}", inner.join(", "))
        }
        other => other.to_string(),
    }
}

#[derive(Clone, Debug)]
pub enum RunError {
    Spec(SpecError),
    Usage(String),
    Engine(String),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Spec(e) => write!(f, "{e}"),
            RunError::Usage(m) => write!(f, "{m}"),
            RunError::Engine(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<SpecError> for RunError {
    fn from(e: SpecError) -> Self {
        RunError::Spec(e)
    }
}

fn engine_err(command: &str, e: impl fmt::Display) -> RunError {
    RunError::Engine(format!("{command}: {e}"))
}

fn now() -> Option<std::time::Instant> {
    #[cfg(target_arch = "wasm32")]
    {
        None
    }
    #[cfg(not(target_arch = "wasm32"))]
    {
        Some(std::time::Instant::now())
    }
}

fn elapsed_of(start: Option<std::time::Instant>) -> Option<u128> {
    start.map(|s| s.elapsed().as_millis())
}

fn load_algebra(command: &str, spec_text: &str) -> Result<(AlgebraSpec, Algebra), RunError> {
    let spec = AlgebraSpec::parse(spec_text)?;
    let algebra = spec.build_validated().map_err(|e| match e {
        SpecError::InvalidAlgebra { .. } => RunError::Engine(format!("{command}: {e}")),
        other => RunError::Spec(other),
    })?;
    Ok((spec, algebra))
}

fn spec_value(spec: &AlgebraSpec, algebra: &Algebra) -> Value {
    json!({ "given": spec.echo_json(), "resolved": resolved_json(algebra) })
}

/// Operator matrices arrive as JSON arrays of rows, entries integers or
/// "n/d" strings; d×d against the algebra's dimension.
pub fn parse_operator_matrix(text: &str, dim: usize) -> Result<RatMatrix, RunError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| RunError::Usage(format!("operator matrix is not valid JSON: {e}")))?;
    let rows = value
        .as_array()
        .ok_or_else(|| RunError::Usage("operator matrix must be an array of rows".into()))?;
    if rows.len() != dim {
        return Err(RunError::Usage(format!(
            "operator matrix needs {dim} rows, found {}",
            rows.len()
        )));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for row in rows {
        let cells = row
            .as_array()
            .ok_or_else(|| RunError::Usage("operator matrix rows must be arrays".into()))?;
        if cells.len() != dim {
            return Err(RunError::Usage(format!(
                "operator matrix needs {dim} columns, found {}",
                cells.len()
            )));
        }
        for cell in cells {
            let r = match cell {
                Value::Number(n) => n.as_i64().map(crate::scalar::rat_int),
                Value::String(s) => parse_rat(s),
                _ => None,
            }
            .ok_or_else(|| {
                RunError::Usage("matrix entries must be integers or 'n/d' strings".into())
            })?;
            entries.push(r);
        }
    }
    RatMatrix::new(dim, dim, entries).map_err(|e| RunError::Usage(e.to_string()))
}

fn pick_mode(a: &Algebra, flag: Option<FiltrationMode>) -> Result<FiltrationMode, RunError> {
    match flag {
        Some(FiltrationMode::Commutative) if !a.is_commutative() => Err(RunError::Engine(
            "filtration: --mode comm requires a commutative algebra".into(),
        )),
        Some(m) => Ok(m),
        None => Ok(if a.is_commutative() {
            FiltrationMode::Commutative
        } else {
            FiltrationMode::Noncommutative
        }),
    }
}

fn matrix_value(d: usize, flat: &[Rat]) -> Value {
    let rows: Vec<Value> = (0..d)
        .map(|i| {
            Value::Array(
                (0..d)
                    .map(|j| json!(format_rat(&flat[i * d + j])))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

fn matrix_string(m: &RatMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let cells: Vec<String> = m.row(i).iter().map(format_rat).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

enum Levels {
    Rational(Vec<Subspace>, Option<Vec<Subspace>>),
    Lattice(Vec<IntegerLattice>, Option<Vec<IntegerLattice>>),
}

fn level_rows(levels: &Levels, include_bases: bool, d: usize) -> Vec<Value> {
    match levels {
        Levels::Rational(levels, primed) => levels
            .iter()
            .enumerate()
            .map(|(n, level)| {
                let mut row = serde_json::Map::new();
                row.insert("n".into(), json!(n));
                row.insert("dim".into(), json!(level.dim()));
                if let Some(primed) = primed {
                    row.insert("primed_dim".into(), json!(primed[n].dim()));
                }
                if include_bases {
                    let basis: Vec<Value> =
                        level.basis().iter().map(|v| matrix_value(d, v)).collect();
                    row.insert("basis".into(), Value::Array(basis));
                }
                Value::Object(row)
            })
            .collect(),
        Levels::Lattice(levels, primed) => levels
            .iter()
            .enumerate()
            .map(|(n, level)| {
                let mut row = serde_json::Map::new();
                row.insert("n".into(), json!(n));
                row.insert("rank".into(), json!(level.rank()));
                if let Some(primed) = primed {
                    row.insert("primed_rank".into(), json!(primed[n].rank()));
                }
                if include_bases {
                    let basis: Vec<Value> = level
                        .basis()
                        .iter()
                        .map(|v| {
                            let rows: Vec<Value> = (0..d)
                                .map(|i| {
                                    Value::Array(
                                        (0..d).map(|j| json!(v[i * d + j].to_string())).collect(),
                                    )
                                })
                                .collect();
                            Value::Array(rows)
                        })
                        .collect();
                    row.insert("basis".into(), Value::Array(basis));
                }
                Value::Object(row)
            })
            .collect(),
    }
}

fn compute_levels(
    command: &str,
    a: &Algebra,
    mode: FiltrationMode,
    n_max: usize,
) -> Result<(Levels, Option<usize>), RunError> {
    match (a.scalar_mode(), mode) {
        (ScalarMode::Rational, FiltrationMode::Commutative) => {
            let f = commutative_filtration(a, n_max).map_err(|e| engine_err(command, e))?;
            Ok((
                Levels::Rational(f.levels().to_vec(), None),
                f.stabilized_at(),
            ))
        }
        (ScalarMode::Rational, FiltrationMode::Noncommutative) => {
            let f = noncommutative_filtration(a, n_max).map_err(|e| engine_err(command, e))?;
            let primed = f.primed_levels().map(<[Subspace]>::to_vec);
            Ok((
                Levels::Rational(f.levels().to_vec(), primed),
                f.stabilized_at(),
            ))
        }
        (ScalarMode::Integer, FiltrationMode::Commutative) => {
            let f = commutative_filtration_z(a, n_max).map_err(|e| engine_err(command, e))?;
            Ok((
                Levels::Lattice(f.levels().to_vec(), None),
                f.stabilized_at(),
            ))
        }
        (ScalarMode::Integer, FiltrationMode::Noncommutative) => {
            let f = noncommutative_filtration_z(a, n_max).map_err(|e| engine_err(command, e))?;
            let primed = f.primed_levels().map(<[IntegerLattice]>::to_vec);
            Ok((
                Levels::Lattice(f.levels().to_vec(), primed),
                f.stabilized_at(),
            ))
        }
    }
}

fn chain_check(command: &str, levels: &Levels) -> Result<CheckOutcome, RunError> {
    let ok = match levels {
        Levels::Rational(levels, _) => {
            let mut ok = true;
            for n in 1..levels.len() {
                ok &= levels[n - 1]
                    .is_subspace_of(&levels[n])
                    .map_err(|e| engine_err(command, e))?;
            }
            ok
        }
        Levels::Lattice(levels, _) => {
            let mut ok = true;
            for n in 1..levels.len() {
                ok &= levels[n - 1]
                    .is_sublattice_of(&levels[n])
                    .map_err(|e| engine_err(command, e))?;
            }
            ok
        }
    };
    Ok(CheckOutcome::of(
        "nondecreasing_chain",
        ok,
        "D_{n-1} ⊆ D_n for every computed level",
        None,
    ))
}

pub fn run_validate(spec_text: &str, seed: u64) -> Result<Report, RunError> {
    let start = now();
    let spec = AlgebraSpec::parse(spec_text)?;
    let algebra = spec.build()?;
    let violations = algebra.validate();
    let violation_strings: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
    let check = if violations.is_empty() {
        CheckOutcome::pass("algebra_laws", "associativity and unit laws hold exactly")
    } else {
        CheckOutcome::fail(
            "algebra_laws",
            format!("{} violated law(s)", violations.len()),
            Some(violation_strings.join("; ")),
        )
    };
    Ok(Report {
        command: "validate".into(),
        seed,
        spec: Some(spec_value(&spec, &algebra)),
        algebra: Some(AlgebraSummary::of(&algebra)),
        results: json!({ "violations": violation_strings }),
        checks: vec![check],
        elapsed_ms: elapsed_of(start),
    })
}

pub fn run_filtration(
    spec_text: &str,
    mode_flag: Option<FiltrationMode>,
    n_max: Option<usize>,
    include_bases: bool,
    seed: u64,
) -> Result<Report, RunError> {
    let start = now();
    let (spec, algebra) = load_algebra("filtration", spec_text)?;
    let mode = pick_mode(&algebra, mode_flag)?;
    let n_max = n_max.unwrap_or_else(|| default_n_max(&algebra));
    let (levels, stabilized_at) = compute_levels("filtration", &algebra, mode, n_max)?;
    let checks = vec![chain_check("filtration", &levels)?];
    Ok(Report {
        command: format!("filtration --mode {mode} --nmax {n_max}"),
        seed,
        spec: Some(spec_value(&spec, &algebra)),
        algebra: Some(AlgebraSummary::of(&algebra)),
        results: json!({
            "mode": mode.to_string(),
            "n_max": n_max,
            "levels": level_rows(&levels, include_bases, algebra.dim()),
            "stabilized_at": stabilized_at,
        }),
        checks,
        elapsed_ms: elapsed_of(start),
    })
}

pub fn run_order(
    spec_text: &str,
    operator_text: &str,
    mode_flag: Option<FiltrationMode>,
    n_max: Option<usize>,
    seed: u64,
) -> Result<Report, RunError> {
    let start = now();
    let (spec, algebra) = load_algebra("order", spec_text)?;
    let mode = pick_mode(&algebra, mode_flag)?;
    let n_max = n_max.unwrap_or_else(|| default_n_max(&algebra));
    let operator = parse_operator_matrix(operator_text, algebra.dim())?;
    let order: Option<usize> = match algebra.scalar_mode() {
        ScalarMode::Rational => {
            let f = match mode {
                FiltrationMode::Commutative => commutative_filtration(&algebra, n_max),
                FiltrationMode::Noncommutative => noncommutative_filtration(&algebra, n_max),
            }
            .map_err(|e| engine_err("order", e))?;
            f.operator_order(&operator)
                .map_err(|e| engine_err("order", e))?
        }
        ScalarMode::Integer => {
            let f = match mode {
                FiltrationMode::Commutative => commutative_filtration_z(&algebra, n_max),
                FiltrationMode::Noncommutative => noncommutative_filtration_z(&algebra, n_max),
            }
            .map_err(|e| engine_err("order", e))?;
            f.operator_order(&operator)
                .map_err(|e| engine_err("order", e))?
        }
    };
    let order_value = match order {
        Some(n) => json!(n),
        None => json!("exceeds n_max"),
    };
    Ok(Report {
        command: format!("order --mode {mode} --nmax {n_max}"),
        seed,
        spec: Some(spec_value(&spec, &algebra)),
        algebra: Some(AlgebraSummary::of(&algebra)),
        results: json!({
            "operator": matrix_value(algebra.dim(), &operator.flatten()),
            "mode": mode.to_string(),
            "n_max": n_max,
            "order": order_value,
        }),
        checks: Vec::new(),
        elapsed_ms: elapsed_of(start),
    })
}

pub fn run_ad_test(
    spec_text: &str,
    operator_text: &str,
    n: usize,
    seed: u64,
) -> Result<Report, RunError> {
    let start = now();
    let (spec, algebra) = load_algebra("ad-test", spec_text)?;
    let operator = parse_operator_matrix(operator_text, algebra.dim())?;
    let passed = filtration::iterated_ad_test(&algebra, &operator, n)
        .map_err(|e| engine_err("ad-test", e))?;
    let details = format!(
        "every {}-fold iterated commutator with multiplications vanishes",
        n + 1
    );
    let check = CheckOutcome::of("iterated_ad_vanishes", passed, details, None);
    Ok(Report {
        command: format!("ad-test --n {n}"),
        seed,
        spec: Some(spec_value(&spec, &algebra)),
        algebra: Some(AlgebraSummary::of(&algebra)),
        results: json!({
            "operator": matrix_value(algebra.dim(), &operator.flatten()),
            "n": n,
            "is_order_at_most_n": passed,
        }),
        checks: vec![check],
        elapsed_ms: elapsed_of(start),
    })
}

pub fn run_principal_parts(spec_text: &str, n: usize, seed: u64) -> Result<Report, RunError> {
    let start = now();
    let (spec, algebra) = load_algebra("principal-parts", spec_text)?;
    if algebra.scalar_mode() != ScalarMode::Rational {
        return Err(RunError::Engine(
            "principal-parts: runs over Q; use scalars \"Q\"".into(),
        ));
    }
    let (tensor, _) = algebra.tensor_square();
    let j = principal_parts::mult_kernel(&algebra).map_err(|e| engine_err("principal-parts", e))?;
    let mut power_dims = Vec::new();
    for k in 1..=(n + 1) {
        let p = principal_parts::ideal_power(&tensor, &j, k)
            .map_err(|e| engine_err("principal-parts", e))?;
        power_dims.push(p.dim());
    }
    let pp = principal_parts::build(&algebra, n).map_err(|e| engine_err("principal-parts", e))?;
    let induced = principal_parts::induced_operators(&algebra, n)
        .map_err(|e| engine_err("principal-parts", e))?;

    let f = commutative_filtration(&algebra, n).map_err(|e| engine_err("principal-parts", e))?;
    let level = f.level(n).map_err(|e| engine_err("principal-parts", e))?;
    let agrees = &induced.operators == level;
    let checks = vec![CheckOutcome::of(
        "induced_equals_recursion_level",
        agrees,
        format!("operators from P^{n} coincide with level {n} of the commutator recursion"),
        None,
    )];
    Ok(Report {
        command: format!("principal-parts --n {n}"),
        seed,
        spec: Some(spec_value(&spec, &algebra)),
        algebra: Some(AlgebraSummary::of(&algebra)),
        results: json!({
            "n": n,
            "tensor_dim": tensor.dim(),
            "mult_kernel_dim": j.dim(),
            "ideal_power_dims": power_dims,
            "quotient_dim": pp.quotient_dim(),
            "hom_dim": induced.hom_dim,
            "induced_dim": induced.operators.dim(),
            "injective": induced.is_injective(),
        }),
        checks,
        elapsed_ms: elapsed_of(start),
    })
}

pub fn run_compare(spec_text: &str, n_max: Option<usize>, seed: u64) -> Result<Report, RunError> {
    let start = now();
    let (spec, algebra) = load_algebra("compare", spec_text)?;
    if !algebra.is_commutative() {
        return Err(RunError::Engine(
            "compare: the three-way comparison needs a commutative algebra".into(),
        ));
    }
    if algebra.scalar_mode() != ScalarMode::Rational {
        return Err(RunError::Engine(
            "compare: runs over Q; use scalars \"Q\"".into(),
        ));
    }
    let n_max = n_max.unwrap_or_else(|| default_n_max(&algebra));
    let comm = commutative_filtration(&algebra, n_max).map_err(|e| engine_err("compare", e))?;
    let nc = noncommutative_filtration(&algebra, n_max).map_err(|e| engine_err("compare", e))?;
    let mut levels = Vec::new();
    let mut recursion_vs_ad = true;
    let mut recursion_vs_induced = true;
    let mut recursion_vs_nc = true;
    for n in 0..=n_max {
        let level = comm.level(n).map_err(|e| engine_err("compare", e))?;
        let ad = ad_criterion_subspace(&algebra, n).map_err(|e| engine_err("compare", e))?;
        let induced = principal_parts::induced_operators(&algebra, n)
            .map_err(|e| engine_err("compare", e))?;
        let ad_ok = &ad == level;
        let induced_ok = &induced.operators == level;
        let nc_ok = nc.level(n).map_err(|e| engine_err("compare", e))? == level;
        recursion_vs_ad &= ad_ok;
        recursion_vs_induced &= induced_ok;
        recursion_vs_nc &= nc_ok;
        levels.push(json!({
            "n": n,
            "dim": level.dim(),
            "ad_criterion_agrees": ad_ok,
            "principal_parts_agrees": induced_ok,
            "noncommutative_agrees": nc_ok,
        }));
    }
    let checks = vec![
        CheckOutcome::of(
            "recursion_vs_ad_criterion",
            recursion_vs_ad,
            "commutator recursion = iterated-commutator criterion, level by level",
            None,
        ),
        CheckOutcome::of(
            "recursion_vs_principal_parts",
            recursion_vs_induced,
            "commutator recursion = operators induced from principal parts",
            None,
        ),
        CheckOutcome::of(
            "recursion_vs_noncommutative",
            recursion_vs_nc,
            "the general inductive definition reduces to the commutative one",
            None,
        ),
    ];
    Ok(Report {
        command: format!("compare --nmax {n_max}"),
        seed,
        spec: Some(spec_value(&spec, &algebra)),
        algebra: Some(AlgebraSummary::of(&algebra)),
        results: json!({ "n_max": n_max, "levels": levels }),
        checks,
        elapsed_ms: elapsed_of(start),
    })
}

pub fn run_multiplicative(
    spec_text: &str,
    r_max: usize,
    mode_flag: Option<FiltrationMode>,
    seed: u64,
) -> Result<Report, RunError> {
    let start = now();
    let (spec, algebra) = load_algebra("multiplicative", spec_text)?;
    let mode = pick_mode(&algebra, mode_flag)?;
    if algebra.scalar_mode() != ScalarMode::Rational {
        return Err(RunError::Engine(
            "multiplicative: runs over Q; use scalars \"Q\"".into(),
        ));
    }
    let f = match mode {
        FiltrationMode::Commutative => commutative_filtration(&algebra, r_max),
        FiltrationMode::Noncommutative => noncommutative_filtration(&algebra, r_max),
    }
    .map_err(|e| engine_err("multiplicative", e))?;
    let mut pairs = Vec::new();
    let mut all_hold = true;
    let mut witness = None;
    for r in 0..=r_max {
        for s in 0..=(r_max - r) {
            let check =
                check_multiplicative(&f, r, s).map_err(|e| engine_err("multiplicative", e))?;
            all_hold &= check.holds;
            if witness.is_none() {
                witness = check.witness.as_ref().map(matrix_string);
            }
            pairs.push(json!({ "r": r, "s": s, "holds": check.holds }));
        }
    }
    let checks = vec![CheckOutcome::of(
        "multiplicative_filtration",
        all_hold,
        format!("D_r·D_s ⊆ D_(r+s) for all r+s ≤ {r_max}"),
        witness,
    )];
    Ok(Report {
        command: format!("multiplicative --rmax {r_max} --mode {mode}"),
        seed,
        spec: Some(spec_value(&spec, &algebra)),
        algebra: Some(AlgebraSummary::of(&algebra)),
        results: json!({ "r_max": r_max, "mode": mode.to_string(), "pairs": pairs }),
        checks,
        elapsed_ms: elapsed_of(start),
    })
}

#[derive(Clone, Debug)]
pub enum PolyAction {
    Normalize { expr: String },
    Apply { expr: String, to: String },
    Compose { expr: String, with: String },
    AdMult { expr: String, with: String },
    Order { expr: String },
    Naive { expr: String },
}

fn var_count(vars: usize) -> Result<VarCount, RunError> {
    match vars {
        1 => Ok(VarCount::One),
        2 => Ok(VarCount::Two),
        other => Err(RunError::Usage(format!(
            "--vars must be 1 or 2, got {other}"
        ))),
    }
}

fn scalar_mode_flag(scalars: &str) -> Result<ScalarMode, RunError> {
    match scalars {
        "Q" => Ok(ScalarMode::Rational),
        "Z" => Ok(ScalarMode::Integer),
        other => Err(RunError::Usage(format!(
            "--scalars must be Q or Z, got {other}"
        ))),
    }
}

fn order_value(op: &DPOp) -> Value {
    match op.order() {
        None => json!(-1),
        Some(n) => json!(n),
    }
}

pub fn run_poly(
    action: PolyAction,
    vars: usize,
    scalars: &str,
    seed: u64,
) -> Result<Report, RunError> {
    let start = now();
    let vars = var_count(vars)?;
    let mode = scalar_mode_flag(scalars)?;
    let parse = |text: &str| -> Result<DPOp, RunError> {
        DPOp::parse(text, vars, mode).map_err(|e| engine_err("poly", e))
    };
    let (command, results, checks) = match &action {
        PolyAction::Normalize { expr } => {
            let op = parse(expr)?;
            (
                format!("poly normalize '{expr}'"),
                json!({ "input": expr, "normal_form": op.to_string(), "order": order_value(&op) }),
                Vec::new(),
            )
        }
        PolyAction::Apply { expr, to } => {
            let op = parse(expr)?;
            let target = DPOp::parse_poly(to, vars, mode).map_err(|e| engine_err("poly", e))?;
            let image = op.apply(&target).map_err(|e| engine_err("poly", e))?;
            (
                format!("poly apply '{expr}' to '{to}'"),
                json!({
                    "operator": op.to_string(),
                    "argument": target.to_string(),
                    "result": image.to_string(),
                }),
                Vec::new(),
            )
        }
        PolyAction::Compose { expr, with } => {
            let d1 = parse(expr)?;
            let d2 = parse(with)?;
            let composed = d1.compose(&d2).map_err(|e| engine_err("poly", e))?;
            (
                format!("poly compose '{expr}' with '{with}'"),
                json!({
                    "left": d1.to_string(),
                    "right": d2.to_string(),
                    "normal_form": composed.to_string(),
                    "order": order_value(&composed),
                }),
                Vec::new(),
            )
        }
        PolyAction::AdMult { expr, with } => {
            let op = parse(expr)?;
            let f = DPOp::parse_poly(with, vars, mode).map_err(|e| engine_err("poly", e))?;
            let bracket = op.ad_mult(&f).map_err(|e| engine_err("poly", e))?;
            let lowered = match (op.order(), bracket.order()) {
                (Some(former), Some(later)) => later < former,
                (_, None) => true,
                (None, Some(_)) => false,
            };
            let checks = vec![CheckOutcome::of(
                "ad_lowers_order",
                lowered,
                "the commutator with a multiplication drops the order by at least one",
                None,
            )];
            (
                format!("poly ad '{expr}' with '{with}'"),
                json!({
                    "operator": op.to_string(),
                    "polynomial": f.to_string(),
                    "commutator": bracket.to_string(),
                    "order": order_value(&bracket),
                }),
                checks,
            )
        }
        PolyAction::Order { expr } => {
            let op = parse(expr)?;
            (
                format!("poly order '{expr}'"),
                json!({ "normal_form": op.to_string(), "order": order_value(&op) }),
                Vec::new(),
            )
        }
        PolyAction::Naive { expr } => {
            let op = parse(expr)?;
            let naive = op.is_naive().map_err(|e| engine_err("poly", e))?;
            (
                format!("poly naive '{expr}'"),
                json!({ "normal_form": op.to_string(), "is_naive": naive }),
                Vec::new(),
            )
        }
    };
    Ok(Report {
        command,
        seed,
        spec: None,
        algebra: None,
        results: merge(results, json!({ "vars": vars.count(), "scalars": scalars })),
        checks,
        elapsed_ms: elapsed_of(start),
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        for (k, v) in e {
            b.insert(k, v);
        }
    }
    base
}

fn parse_generators(gens: &str) -> Vec<String> {
    gens.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

#[derive(Clone, Debug)]
pub enum FreeAction {
    Eval {
        gens: String,
        degree: usize,
        expr: String,
        times: Option<String>,
    },
    Codiag {
        gens: String,
        degree: usize,
    },
    Multimorphism {
        gens: String,
        x_count: usize,
        degree: usize,
        r: usize,
        substitutions: Vec<String>,
        samples: usize,
    },
}

pub fn run_free(action: FreeAction, seed: u64) -> Result<Report, RunError> {
    let start = now();
    match action {
        FreeAction::Eval {
            gens,
            degree,
            expr,
            times,
        } => {
            let alg = FreeAlgebra::new(parse_generators(&gens), degree)
                .map_err(|e| engine_err("free", e))?;
            let value = alg
                .parse_element(&expr)
                .map_err(|e| engine_err("free", e))?;
            let (result, command) = match &times {
                None => (
                    value.clone(),
                    format!("free eval --gens {gens} --degree {degree} '{expr}'"),
                ),
                Some(other) => {
                    let rhs = alg
                        .parse_element(other)
                        .map_err(|e| engine_err("free", e))?;
                    (
                        value.multiply(&rhs).map_err(|e| engine_err("free", e))?,
                        format!(
                            "free eval --gens {gens} --degree {degree} '{expr}' times '{other}'"
                        ),
                    )
                }
            };
            Ok(Report {
                command,
                seed,
                spec: None,
                algebra: None,
                results: json!({
                    "generators": alg.generators(),
                    "max_degree": degree,
                    "input": expr,
                    "times": times,
                    "result": result.to_string(),
                    "degree": result.degree(),
                }),
                checks: Vec::new(),
                elapsed_ms: elapsed_of(start),
            })
        }
        FreeAction::Codiag { gens, degree } => {
            let alg = FreeAlgebra::new(parse_generators(&gens), degree)
                .map_err(|e| engine_err("free", e))?;
            let check = codiagonal_kernel_check(&alg).map_err(|e| engine_err("free", e))?;
            let outcome = CheckOutcome::of(
                "kernel_equals_difference_ideal",
                check.matches,
                "ker(codiagonal) = two-sided ideal generated by the primed differences, up to truncation",
                None,
            );
            Ok(Report {
                command: format!("free codiag --gens {gens} --degree {degree}"),
                seed,
                spec: None,
                algebra: None,
                results: json!({
                    "generators": alg.generators(),
                    "max_degree": degree,
                    "kernel_dim": check.kernel_dim,
                    "ideal_dim": check.ideal_dim,
                }),
                checks: vec![outcome],
                elapsed_ms: elapsed_of(start),
            })
        }
        FreeAction::Multimorphism {
            gens,
            x_count,
            degree,
            r,
            substitutions,
            samples,
        } => {
            let names = parse_generators(&gens);
            if x_count > names.len() {
                return Err(RunError::Usage(format!(
                    "--xcount {x_count} exceeds the {} declared generators",
                    names.len()
                )));
            }
            let alg = FreeAlgebra::new(names, degree).map_err(|e| engine_err("free", e))?;
            let y_count = alg.generator_count() - x_count;
            if substitutions.len() != y_count {
                return Err(RunError::Usage(format!(
                    "expected {y_count} substitution(s) for the Y-generators, got {}",
                    substitutions.len()
                )));
            }
            let subst: Vec<FreeElement> = substitutions
                .iter()
                .map(|s| alg.parse_element(s).map_err(|e| engine_err("free", e)))
                .collect::<Result<_, _>>()?;
            let phi = example11_map(&alg, x_count, r, &subst).map_err(|e| engine_err("free", e))?;
            let witness = check_multimorphism(&phi, x_count, samples, seed)
                .map_err(|e| engine_err("free", e))?;
            let outcome = match &witness {
                None => CheckOutcome::pass(
                    "multimorphism_law_sampled",
                    format!("{samples} seeded samples of the interleaved product law"),
                ),
                Some(w) => CheckOutcome::fail(
                    "multimorphism_law_sampled",
                    format!("violated at shape n={}", w.shape),
                    Some(format!(
                        "outer=[{}] inner=[{}] lhs={} rhs={}",
                        w.outer
                            .iter()
                            .map(|e| e.to_string())
                            .collect::<Vec<_>>()
                            .join("; "),
                        w.inner
                            .iter()
                            .map(|e| e.to_string())
                            .collect::<Vec<_>>()
                            .join("; "),
                        w.lhs,
                        w.rhs
                    )),
                ),
            };
            Ok(Report {
                command: format!(
                    "free multimorphism --gens {gens} --xcount {x_count} --degree {degree} --r {r} --samples {samples}"
                ),
                seed,
                spec: None,
                algebra: None,
                results: json!({
                    "generators": alg.generators(),
                    "x_count": x_count,
                    "max_degree": degree,
                    "r": r,
                    "substitutions": substitutions,
                    "samples": samples,
                    "violated": witness.is_some(),
                }),
                checks: vec![outcome],
                elapsed_ms: elapsed_of(start),
            })
        }
    }
}

/// Parses "x=y, y=0"-style generator assignments; missing generators map to 0.
fn parse_derivation_images(alg: &FreeAlgebra, text: &str) -> Result<Vec<FreeElement>, RunError> {
    let mut images = vec![alg.zero(); alg.generator_count()];
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, expr) = part.split_once('=').ok_or_else(|| {
            RunError::Usage(format!(
                "derivation entry '{part}' is not of the form gen=expr"
            ))
        })?;
        let idx = alg
            .generator_index(name.trim())
            .ok_or_else(|| RunError::Usage(format!("unknown generator '{}'", name.trim())))?;
        images[idx] = alg
            .parse_element(expr.trim())
            .map_err(|e| engine_err("hs-check", e))?;
    }
    Ok(images)
}

pub fn run_hs_check(
    gens: &str,
    degree: usize,
    derivation: &str,
    order: usize,
    containment: bool,
    seed: u64,
) -> Result<Report, RunError> {
    let start = now();
    let alg =
        FreeAlgebra::new(parse_generators(gens), degree).map_err(|e| engine_err("hs-check", e))?;
    let images = parse_derivation_images(&alg, derivation)?;
    let d = LinearEndo::derivation_from_generator_images(&alg, images)
        .map_err(|e| engine_err("hs-check", e))?;
    let hs = HasseSchmidt::from_derivation(&d, order).map_err(|e| engine_err("hs-check", e))?;
    let violation = hs.violation().map_err(|e| engine_err("hs-check", e))?;
    let mut checks = vec![match &violation {
        None => CheckOutcome::pass(
            "hasse_schmidt_identity",
            format!(
                "the convolution Leibniz law holds exactly for all basis pairs up to level {order}"
            ),
        ),
        Some(v) => CheckOutcome::fail(
            "hasse_schmidt_identity",
            format!("violated at level {}", v.level),
            Some(format!(
                "t={} x={}",
                alg.word_label(&v.left),
                alg.word_label(&v.right)
            )),
        ),
    }];
    let mut level_rows = Vec::new();
    if containment {
        let algebra = alg
            .to_structure_algebra(ScalarMode::Rational)
            .map_err(|e| engine_err("hs-check", e))?;
        let f =
            noncommutative_filtration(&algebra, order).map_err(|e| engine_err("hs-check", e))?;
        let mut all_contained = true;
        for n in 0..=order {
            let matrix = hs.map(n).to_matrix();
            let found = f
                .operator_order(&matrix)
                .map_err(|e| engine_err("hs-check", e))?;
            let contained = matches!(found, Some(m) if m <= n);
            all_contained &= contained;
            level_rows.push(json!({
                "n": n,
                "operator_order": found.map_or(json!("exceeds n_max"), |m| json!(m)),
                "contained_in_level_n": contained,
            }));
        }
        checks.push(CheckOutcome::of(
            "partials_in_filtration_levels",
            all_contained,
            "each divided power of the derivation lies in the matching filtration level",
            None,
        ));
    }
    Ok(Report {
        command: format!("hs-check --gens {gens} --degree {degree} --order {order}"),
        seed,
        spec: None,
        algebra: None,
        results: json!({
            "generators": alg.generators(),
            "max_degree": degree,
            "derivation": derivation,
            "order": order,
            "violated": violation.is_some(),
            "levels": level_rows,
        }),
        checks,
        elapsed_ms: elapsed_of(start),
    })
}

/// The combined run: validate, filtration in the natural mode, the three-way
/// comparison when commutative, and the multiplicativity sweep.
pub fn run_report(spec_text: &str, n_max: Option<usize>, seed: u64) -> Result<Report, RunError> {
    let start = now();
    let (spec, algebra) = load_algebra("report", spec_text)?;
    let n_max = n_max.unwrap_or_else(|| default_n_max(&algebra).min(3));
    let mut checks = Vec::new();
    let mut sections = serde_json::Map::new();

    let validation = run_validate(spec_text, seed)?;
    checks.extend(validation.checks);

    let filt = run_filtration(spec_text, None, Some(n_max), false, seed)?;
    sections.insert("filtration".into(), filt.results.clone());
    checks.extend(filt.checks);

    if algebra.is_commutative() && algebra.scalar_mode() == ScalarMode::Rational {
        let cmp = run_compare(spec_text, Some(n_max), seed)?;
        sections.insert("compare".into(), cmp.results.clone());
        checks.extend(cmp.checks);
    }

    if algebra.scalar_mode() == ScalarMode::Rational {
        let mult = run_multiplicative(spec_text, n_max, None, seed)?;
        sections.insert("multiplicative".into(), mult.results.clone());
        checks.extend(mult.checks);
    }

    Ok(Report {
        command: format!("report --nmax {n_max}"),
        seed,
        spec: Some(spec_value(&spec, &algebra)),
        algebra: Some(AlgebraSummary::of(&algebra)),
        results: Value::Object(sections),
        checks,
        elapsed_ms: elapsed_of(start),
    })
}
