//! One function per subcommand, each producing a [`Report`].

use crate::report::{fmt_f64, json_f64, Report};
use crate::{CliError, Ctx};
use serde_json::Value;
use zerolab_core::arith::sieve_primes;
use zerolab_core::family::{
    nonvanishing_bounds, parse_rational, ratio_to_f64, second_order_shift, sieve_round_trip_check,
};
use zerolab_core::kernels::{gue_functional, kernel, kernel_by_label, pair, SymmetryClass};
use zerolab_core::lfun::{
    density_from_zeros, explicit_formula_density, parse_coefficients, parse_zeros,
};
use zerolab_core::rmt::{monte_carlo, GroupFamily, HaarDrawConfig, RmtError, Statistic};
use zerolab_core::testfn::{pair_from_spec, verify_pair, FourierPair};

fn test_fn(ctx: &Ctx) -> Result<FourierPair, CliError> {
    let spec = ctx.require("test-fn")?;
    pair_from_spec(&spec).map_err(|e| CliError::Input(e.to_string()))
}

fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))
}

fn classify_rmt(e: RmtError) -> CliError {
    match e {
        RmtError::StructureResidual { .. } | RmtError::AngleStructure { .. } => {
            CliError::Numeric(e.to_string())
        }
        other => CliError::Input(other.to_string()),
    }
}

fn rmt_run(ctx: &Ctx, name: &'static str) -> Result<Report, CliError> {
    let group: GroupFamily = ctx.parse("group")?;
    let dim: u32 = ctx.parse("dim")?;
    let draws: u64 = ctx.parse("draws")?;
    let seed: u64 = ctx.parse("seed")?;
    let statistic: Statistic = ctx.parse("stat")?;
    let fp = test_fn(ctx)?;
    let config = HaarDrawConfig {
        group,
        dim_parameter: dim,
        seed,
    };
    let summary = monte_carlo(&config, draws, statistic, &fp).map_err(classify_rmt)?;
    let target = match statistic {
        Statistic::OneLevel => pair(&kernel(group.symmetry_class()), &fp),
        Statistic::PairCorrelation => gue_functional(&fp),
    };
    let abs_dev = (summary.mean - target).abs();
    let n = group.matrix_size(dim);
    let mut report = Report::new(
        name,
        vec![
            "group", "n", "draws", "statistic", "mean", "stderr", "target", "abs_dev",
        ],
    );
    report.rows.push(vec![
        group.label().to_string(),
        n.to_string(),
        draws.to_string(),
        statistic.label().to_string(),
        fmt_f64(summary.mean),
        fmt_f64(summary.stderr),
        fmt_f64(target),
        fmt_f64(abs_dev),
    ]);
    report.json.insert("group".into(), Value::from(group.label()));
    report.json.insert("matrix_size".into(), Value::from(n));
    report.json.insert("dim_parameter".into(), Value::from(dim));
    report.json.insert("draws".into(), Value::from(draws));
    report.json.insert("seed".into(), Value::from(seed));
    report
        .json
        .insert("statistic".into(), Value::from(statistic.label()));
    report
        .json
        .insert("support".into(), json_f64(fp.support_radius()));
    report.json.insert("mean".into(), json_f64(summary.mean));
    report
        .json
        .insert("stderr".into(), json_f64(summary.stderr));
    report.json.insert("target".into(), json_f64(target));
    report.json.insert("abs_dev".into(), json_f64(abs_dev));
    Ok(report)
}

pub fn rmt_density(ctx: &Ctx) -> Result<Report, CliError> {
    rmt_run(ctx, "rmt-density")
}

pub fn rmt_paircorr(ctx: &Ctx) -> Result<Report, CliError> {
    rmt_run(ctx, "rmt-paircorr")
}

pub fn kernel_pair(ctx: &Ctx) -> Result<Report, CliError> {
    let class_spec = ctx.require("class")?;
    let fp = test_fn(ctx)?;
    let classes: Vec<SymmetryClass> = if class_spec == "all" {
        SymmetryClass::ALL.to_vec()
    } else {
        vec![
            kernel_by_label(&class_spec)
                .map_err(|e| CliError::Input(e.to_string()))?
                .class,
        ]
    };
    let mut report = Report::new("kernel-pair", vec!["class", "support", "pairing"]);
    let mut pairings = Vec::new();
    for class in classes {
        let value = pair(&kernel(class), &fp);
        report.rows.push(vec![
            class.label().to_string(),
            fmt_f64(fp.support_radius()),
            fmt_f64(value),
        ]);
        let mut entry = serde_json::Map::new();
        entry.insert("class".into(), Value::from(class.label()));
        entry.insert("pairing".into(), json_f64(value));
        pairings.push(Value::Object(entry));
    }
    report
        .json
        .insert("support".into(), json_f64(fp.support_radius()));
    report.json.insert("pairings".into(), Value::from(pairings));
    Ok(report)
}

pub fn indist_check(ctx: &Ctx) -> Result<Report, CliError> {
    let fp = test_fn(ctx)?;
    let tol: f64 = ctx.parse("tol")?;
    let r = zerolab_core::kernels::indistinguishability_report(&fp);
    let mut report = Report::new(
        "indist-check",
        vec![
            "support",
            "below_one",
            "orthogonal",
            "orthogonal_even",
            "orthogonal_odd",
            "max_spread",
            "symplectic",
            "unitary",
        ],
    );
    report.rows.push(vec![
        fmt_f64(r.support_radius),
        r.hypothesis_ok.to_string(),
        fmt_f64(r.orthogonal),
        fmt_f64(r.orthogonal_even),
        fmt_f64(r.orthogonal_odd),
        fmt_f64(r.max_orthogonal_spread),
        fmt_f64(r.symplectic),
        fmt_f64(r.unitary),
    ]);
    report
        .json
        .insert("support".into(), json_f64(r.support_radius));
    report
        .json
        .insert("below_one".into(), Value::from(r.hypothesis_ok));
    report
        .json
        .insert("orthogonal".into(), json_f64(r.orthogonal));
    report
        .json
        .insert("orthogonal_even".into(), json_f64(r.orthogonal_even));
    report
        .json
        .insert("orthogonal_odd".into(), json_f64(r.orthogonal_odd));
    report
        .json
        .insert("max_spread".into(), json_f64(r.max_orthogonal_spread));
    report
        .json
        .insert("symplectic".into(), json_f64(r.symplectic));
    report.json.insert("unitary".into(), json_f64(r.unitary));
    if r.hypothesis_ok && r.max_orthogonal_spread > tol {
        report.failure = Some(format!(
            "orthogonal pairings split by {} below support 1 (tolerance {tol})",
            r.max_orthogonal_spread
        ));
    }
    Ok(report)
}

pub fn ef_density(ctx: &Ctx) -> Result<Report, CliError> {
    let path = ctx.require("coefficients")?;
    let nu_max: u32 = ctx.parse("nu-max")?;
    let fp = test_fn(ctx)?;
    let rep = parse_coefficients(&read_file(&path)?)
        .map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    let density = explicit_formula_density(&rep, &fp, nu_max)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let mut report = Report::new(
        "ef-density",
        vec!["conductor", "support", "nu_max", "value", "tail_bound"],
    );
    report.rows.push(vec![
        fmt_f64(rep.conductor()),
        fmt_f64(fp.support_radius()),
        nu_max.to_string(),
        fmt_f64(density.value),
        fmt_f64(density.tail_bound),
    ]);
    report
        .json
        .insert("conductor".into(), json_f64(rep.conductor()));
    report
        .json
        .insert("support".into(), json_f64(fp.support_radius()));
    report.json.insert("nu_max".into(), Value::from(nu_max));
    report.json.insert("value".into(), json_f64(density.value));
    report
        .json
        .insert("tail_bound".into(), json_f64(density.tail_bound));
    report.json.insert(
        "per_nu".into(),
        Value::from(density.per_nu.iter().map(|&v| json_f64(v)).collect::<Vec<_>>()),
    );
    Ok(report)
}

pub fn density_from_zeros_cmd(ctx: &Ctx) -> Result<Report, CliError> {
    let path = ctx.require("zeros")?;
    let fp = test_fn(ctx)?;
    let record =
        parse_zeros(&read_file(&path)?).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    let value = density_from_zeros(&record, &fp).map_err(|e| CliError::Input(e.to_string()))?;
    let mut report = Report::new("density-from-zeros", vec!["conductor", "ordinates", "value"]);
    report.rows.push(vec![
        fmt_f64(record.conductor()),
        record.ordinates().len().to_string(),
        fmt_f64(value),
    ]);
    report
        .json
        .insert("conductor".into(), json_f64(record.conductor()));
    report
        .json
        .insert("ordinates".into(), Value::from(record.ordinates().len()));
    report.json.insert("value".into(), json_f64(value));
    Ok(report)
}

pub fn second_moment(ctx: &Ctx) -> Result<Report, CliError> {
    let log_c: f64 = ctx.parse("log-conductor")?;
    let fp = test_fn(ctx)?;
    let shift = second_order_shift(&fp, log_c).map_err(|e| CliError::Input(e.to_string()))?;
    let mut report = Report::new(
        "second-moment",
        vec!["log_conductor", "support", "sum", "target", "deviation"],
    );
    report.rows.push(vec![
        fmt_f64(log_c),
        fmt_f64(fp.support_radius()),
        fmt_f64(shift.sum),
        fmt_f64(shift.target),
        fmt_f64(shift.deviation),
    ]);
    report.json.insert("log_conductor".into(), json_f64(log_c));
    report
        .json
        .insert("support".into(), json_f64(fp.support_radius()));
    report.json.insert("sum".into(), json_f64(shift.sum));
    report.json.insert("target".into(), json_f64(shift.target));
    report
        .json
        .insert("deviation".into(), json_f64(shift.deviation));
    Ok(report)
}

pub fn sieve_check(ctx: &Ctx) -> Result<Report, CliError> {
    let q_max: u64 = ctx.parse("q-max")?;
    let vectors: u32 = ctx.parse("vectors")?;
    let seed: u64 = ctx.parse("seed")?;
    let checked = sieve_round_trip_check(q_max, vectors, seed)
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    let mut report = Report::new(
        "sieve-check",
        vec!["q_max", "vectors_per_q", "checked", "status"],
    );
    report.rows.push(vec![
        q_max.to_string(),
        vectors.to_string(),
        checked.to_string(),
        "all exact".to_string(),
    ]);
    report.json.insert("q_max".into(), Value::from(q_max));
    report
        .json
        .insert("vectors_per_q".into(), Value::from(vectors));
    report.json.insert("checked".into(), Value::from(checked));
    report
        .json
        .insert("status".into(), Value::from("all exact"));
    Ok(report)
}

pub fn nonvanish(ctx: &Ctx) -> Result<Report, CliError> {
    let raw = ctx.require("support")?;
    let support = parse_rational(&raw).map_err(|e| CliError::Input(e.to_string()))?;
    let r = nonvanishing_bounds(support).map_err(|e| CliError::Input(e.to_string()))?;
    let mut report = Report::new(
        "nonvanish",
        vec!["support", "multiplicity_bound", "p0_lower", "nontrivial"],
    );
    report.rows.push(vec![
        r.support.to_string(),
        r.multiplicity_bound.to_string(),
        r.p0_lower.to_string(),
        r.nontrivial.to_string(),
    ]);
    report
        .json
        .insert("support".into(), Value::from(r.support.to_string()));
    report.json.insert(
        "support_float".into(),
        json_f64(ratio_to_f64(r.support)),
    );
    report.json.insert(
        "multiplicity_bound".into(),
        Value::from(r.multiplicity_bound.to_string()),
    );
    report.json.insert(
        "multiplicity_bound_float".into(),
        json_f64(r.multiplicity_bound_f64()),
    );
    report
        .json
        .insert("p0_lower".into(), Value::from(r.p0_lower.to_string()));
    report
        .json
        .insert("p0_lower_float".into(), json_f64(r.p0_lower_f64()));
    report
        .json
        .insert("nontrivial".into(), Value::from(r.nontrivial));
    Ok(report)
}

pub fn primes(ctx: &Ctx) -> Result<Report, CliError> {
    let limit: u64 = ctx.parse("limit")?;
    let table = sieve_primes(limit).map_err(|e| CliError::Input(e.to_string()))?;
    let count = table.primes().len();
    let largest = table.primes().last().copied().unwrap_or(0);
    let mut report = Report::new("primes", vec!["limit", "count", "largest"]);
    report.rows.push(vec![
        limit.to_string(),
        count.to_string(),
        largest.to_string(),
    ]);
    report.json.insert("limit".into(), Value::from(limit));
    report.json.insert("count".into(), Value::from(count));
    report.json.insert("largest".into(), Value::from(largest));
    Ok(report)
}

pub fn verify_testfn(ctx: &Ctx) -> Result<Report, CliError> {
    let fp = test_fn(ctx)?;
    let tol: f64 = ctx.parse("tol")?;
    let v = verify_pair(&fp, tol);
    let mut report = Report::new(
        "verify-testfn",
        vec![
            "support",
            "evenness_dev",
            "support_dev",
            "transform_dev",
            "mass_dev",
            "hat_mass_dev",
            "tolerance",
            "pass",
        ],
    );
    report.rows.push(vec![
        fmt_f64(fp.support_radius()),
        fmt_f64(v.evenness_dev),
        fmt_f64(v.support_dev),
        fmt_f64(v.transform_dev),
        fmt_f64(v.mass_dev),
        fmt_f64(v.hat_mass_dev),
        fmt_f64(v.tolerance),
        v.pass.to_string(),
    ]);
    report
        .json
        .insert("support".into(), json_f64(fp.support_radius()));
    report
        .json
        .insert("evenness_dev".into(), json_f64(v.evenness_dev));
    report
        .json
        .insert("support_dev".into(), json_f64(v.support_dev));
    report
        .json
        .insert("transform_dev".into(), json_f64(v.transform_dev));
    report.json.insert("mass_dev".into(), json_f64(v.mass_dev));
    report
        .json
        .insert("hat_mass_dev".into(), json_f64(v.hat_mass_dev));
    report.json.insert("tolerance".into(), json_f64(v.tolerance));
    report.json.insert("pass".into(), Value::from(v.pass));
    if !v.pass {
        report.failure = Some(format!(
            "verification failed: worst deviation {} exceeds tolerance {tol}",
            v.evenness_dev
                .max(v.support_dev)
                .max(v.transform_dev)
                .max(v.mass_dev)
                .max(v.hat_mass_dev)
        ));
    }
    Ok(report)
}
