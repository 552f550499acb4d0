//! One function per subcommand. Each returns its output together with the
//! list of `--assert` violations it found.

use expfun::fundamental::FundamentalEvaluator;
use expfun::inequalities::{
    basis_combination, hankel_determinant_sign_changes, hankel_matrix_with_top, identity_residual, is_positive_definite,
    locate_critical_point, monotonicity_certificate, turan_ratio, turan_upper_bound, uniform_grid, verify_sign,
};
use expfun::moments::{
    hausdorff_check, moment_residuals, recover_measure, transform, DEFAULT_HAUSDORFF_TOL, DEFAULT_PIVOT_TOL,
};
use expfun::{build_evaluator, Error};

use crate::config::RunConfig;
use crate::error::{config_error, CliResult};
use crate::output::{Output, Value};

pub const DEFAULT_SAMPLES: usize = 65;
pub const DEFAULT_SIGN_TOL: f64 = 1e-12;
/// Search range for the critical point of an all-negative frequency vector.
pub const CRITICAL_SEARCH_LENGTH: f64 = 1024.0;

pub struct CommandResult {
    pub output: Output,
    pub violations: Vec<String>,
}

fn evaluator(config: &RunConfig) -> CliResult<FundamentalEvaluator> {
    Ok(build_evaluator(config.frequency_vector()?))
}

/// Sample points: explicit `points`, else `samples` evenly spaced over `interval`.
fn sample_points(config: &RunConfig) -> CliResult<Vec<f64>> {
    if let Some(points) = &config.points {
        if points.is_empty() || points.iter().any(|x| !x.is_finite()) {
            return Err(config_error("points must be a non-empty list of finite numbers"));
        }
        return Ok(points.clone());
    }
    let (lo, hi) = config.interval()?;
    Ok(uniform_grid(lo, hi, config.samples(DEFAULT_SAMPLES)?))
}

/// `Φ, Φ′, …, Φ^{(m)}` at each point, plus the dominance gap and identity
/// residual when a polynomial is given.
pub fn cmd_eval(config: &RunConfig) -> CliResult<CommandResult> {
    let e = evaluator(config)?;
    let m = config.m.unwrap_or(e.n());
    let r = config.polynomial()?;
    if let Some(r) = &r {
        if r.degree() > e.n() {
            return Err(config_error(format!("polynomial degree {} exceeds n = {}", r.degree(), e.n())));
        }
    }
    let mut columns = vec!["x".to_string()];
    columns.extend((0..=m).map(|j| format!("d{j}")));
    if r.is_some() {
        columns.extend(["dominance_gap".to_string(), "identity_residual".to_string()]);
    }

    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for x in sample_points(config)? {
        let mut row: Vec<Value> = vec![x.into()];
        row.extend(e.derivatives(x, m)?.into_iter().map(Value::from));
        if let Some(r) = &r {
            let lhs = basis_combination(&e, r, x)?;
            let residual = identity_residual(&e, r, x)?;
            let bound = 1e-8 * (1.0 + r.eval(x).abs() + lhs.abs());
            if residual > bound {
                violations.push(format!("identity residual {residual:e} exceeds {bound:e} at x = {x}"));
            }
            row.push((lhs - r.eval(x)).into());
            row.push(residual.into());
        }
        rows.push(row);
    }
    Ok(CommandResult { output: Output::Table { columns, rows }, violations })
}

/// Sign scan of `Φ^{(m)}` over the interval, `m` defaulting to `n + 1`.
pub fn cmd_verify(config: &RunConfig) -> CliResult<CommandResult> {
    let e = evaluator(config)?;
    let m = config.m.unwrap_or(e.n() + 1);
    let (lo, hi) = config.interval()?;
    let grid = config.grid()?;
    let tol = config.tol(DEFAULT_SIGN_TOL)?;
    let report = verify_sign(&e, m, lo, hi, grid, tol)?;
    let necessary = match e.freq().check_necessary() {
        Ok(b) => Value::Bool(b),
        Err(Error::NonRealFrequencySum { .. }) => Value::Empty,
        Err(other) => return Err(other.into()),
    };
    let status = if report.is_nonnegative() { "nonnegative" } else { "violated" };
    let mut violations = Vec::new();
    if !report.is_nonnegative() {
        violations.push(format!("derivative {m} is negative at x = {}", report.witness.unwrap_or(f64::NAN)));
    }
    let fields = vec![
        ("n".to_string(), e.n().into()),
        ("m".into(), m.into()),
        ("lo".into(), lo.into()),
        ("hi".into(), hi.into()),
        ("grid".into(), grid.into()),
        ("tol".into(), tol.into()),
        ("status".into(), status.into()),
        ("witness".into(), Value::opt_num(report.witness)),
        ("witness_value".into(), Value::opt_num(report.witness_value)),
        ("boundary".into(), Value::opt_num(report.boundary)),
        ("necessary_condition".into(), necessary),
    ];
    Ok(CommandResult { output: Output::Report(fields), violations })
}

/// Determinant and positive definiteness of the Hankel matrix on a sample
/// grid, followed by the refined sign changes of the determinant.
pub fn cmd_hankel(config: &RunConfig) -> CliResult<CommandResult> {
    let e = evaluator(config)?;
    let k = config.k.ok_or_else(|| config_error("missing field `k`"))?;
    let top = config.top.unwrap_or(e.n());
    if 2 * k > top {
        return Err(config_error(format!("Hankel order requires 2k <= top, got k = {k}, top = {top}")));
    }
    let (lo, hi) = config.interval()?;
    let grid = config.grid()?;
    let tol = config.tol(0.0)?;

    let columns = ["kind", "x", "det", "positive_definite"].map(String::from).to_vec();
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for x in sample_points(config)? {
        let h = hankel_matrix_with_top(&e, k, top, x)?;
        let pd = is_positive_definite(&h, tol);
        if !pd {
            violations.push(format!("Hankel matrix not positive definite at x = {x}"));
        }
        rows.push(vec!["sample".into(), x.into(), h.determinant().into(), pd.into()]);
    }
    for x in hankel_determinant_sign_changes(&e, k, top, lo, hi, grid)? {
        let h = hankel_matrix_with_top(&e, k, top, x)?;
        rows.push(vec!["sign_change".into(), x.into(), h.determinant().into(), Value::Empty]);
    }
    Ok(CommandResult { output: Output::Table { columns, rows }, violations })
}

/// `F = Φ′²/(Φ″Φ)` on the sample points with the bounds `1` and `n/(n−1)`.
pub fn cmd_turan(config: &RunConfig) -> CliResult<CommandResult> {
    let e = evaluator(config)?;
    let upper = turan_upper_bound(e.n());
    let columns = ["x", "F", "lower", "upper"].map(String::from).to_vec();
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for x in sample_points(config)? {
        let f = match turan_ratio(&e, x) {
            Ok(f) => Some(f),
            Err(Error::NearZeroDenominator { .. }) => None,
            Err(other) => return Err(other.into()),
        };
        if let (Some(f), true) = (f, x > 0.0) {
            let above = upper.map_or(true, |u| f < u + 1e-9);
            if f < 1.0 || !above {
                violations.push(format!("F({x}) = {f} outside [1, {}]", upper.map_or("inf".into(), |u| u.to_string())));
            }
        }
        rows.push(vec![x.into(), Value::opt_num(f), 1.0.into(), Value::opt_num(upper)]);
    }
    Ok(CommandResult { output: Output::Table { columns, rows }, violations })
}

/// Moment transform, Hausdorff conditions and a recovered atomic measure.
pub fn cmd_moments(config: &RunConfig) -> CliResult<CommandResult> {
    let e = evaluator(config)?;
    let mu = config.measure()?;
    let tol = config.tol(DEFAULT_HAUSDORFF_TOL)?;
    let s = transform(&e, &mu)?;
    let (a, b) = mu.support();

    let mut fields: Vec<(String, Value)> = vec![
        ("n".into(), e.n().into()),
        ("support_lo".into(), a.into()),
        ("support_hi".into(), b.into()),
        ("hypothesis_certified".into(), s.hypothesis_certified.map_or(Value::Empty, Value::Bool)),
    ];
    for (k, v) in s.values.iter().enumerate() {
        fields.push((format!("s{k}"), (*v).into()));
    }
    let report = hausdorff_check(&s, tol);
    for c in &report.conditions {
        fields.push((format!("hausdorff[{}].min_eigenvalue", c.name), c.min_eigenvalue.into()));
        fields.push((format!("hausdorff[{}].passed", c.name), c.passed.into()));
    }
    fields.push(("hausdorff_passed".into(), report.passed.into()));

    let mut violations = Vec::new();
    if !report.passed {
        violations.push("moment sequence fails the Hausdorff conditions".to_string());
    }
    match recover_measure(&s, DEFAULT_PIVOT_TOL) {
        Ok(nu) => {
            let atoms = nu.atom_list().unwrap_or(&[]);
            fields.push(("recovered_atoms".into(), atoms.len().into()));
            for (i, atom) in atoms.iter().enumerate() {
                fields.push((format!("atom{i}.location"), atom.location.into()));
                fields.push((format!("atom{i}.weight"), atom.weight.into()));
            }
            let worst = moment_residuals(&nu, &s).into_iter().fold(0.0, f64::max);
            fields.push(("max_moment_residual".into(), worst.into()));
        }
        Err(err) => {
            fields.push(("recovery_error".into(), err.to_string().into()));
            violations.push(format!("recovery failed: {err}"));
        }
    }
    Ok(CommandResult { output: Output::Report(fields), violations })
}

/// Monotonicity certificate; for all-negative vectors also the first
/// critical point of `Φ`.
pub fn cmd_certify(config: &RunConfig) -> CliResult<CommandResult> {
    let freq = config.frequency_vector()?;
    let cert = monotonicity_certificate(&freq)?;
    let e = build_evaluator(freq);
    let pairs = cert.pairs.iter().map(|(i, j)| format!("{i}:{j}")).collect::<Vec<_>>().join(" ");
    let mut fields: Vec<(String, Value)> = vec![
        ("n".into(), e.n().into()),
        ("tag".into(), cert.tag.name().into()),
        ("pairs".into(), pairs.into()),
        ("chain_length".into(), cert.chain_length().into()),
        ("certified_orders".into(), cert.certified_orders().map_or("all".into(), Value::from)),
        ("nonnegative_index".into(), cert.nonnegative_index.map_or(Value::Empty, Value::from)),
    ];
    match cert.counter {
        Some(counter) => {
            fields.push(("counter_certificate".into(), true.into()));
            fields.push(("counter_max_frequency".into(), counter.max_frequency.into()));
            let grid = config.grid()?;
            let critical = locate_critical_point(&e, CRITICAL_SEARCH_LENGTH, grid)?;
            fields.push(("critical_point".into(), Value::opt_num(critical)));
        }
        None => fields.push(("counter_certificate".into(), false.into())),
    }
    let violations = if cert.tag == expfun::inequalities::CertificateTag::None {
        vec!["no monotonicity certificate applies".to_string()]
    } else {
        Vec::new()
    };
    Ok(CommandResult { output: Output::Report(fields), violations })
}
