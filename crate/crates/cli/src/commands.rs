use gausspacket::verify::{run_verification, VerifyLevel, VerifyReport};
use gausspacket::wavepacket::auto_grid_span;
use gausspacket::{
    classical_trajectory, coherent_alpha, contractive_analysis, delta, evaluate_packet,
    grid_moments, moments, oracle_contractive_min, solve_squeeze, Error, GridSpec, PhaseTracker,
};
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};
use crate::output::{json_text, record, rounded, sci, Table};

/// Samples used when `contractive --oracle` scans `[0, 2 tau]`.
pub const ORACLE_SAMPLES: usize = 400;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::GridTooNarrow { .. }
            | Error::BoundaryLeak { .. }
            | Error::NotNormalized { .. }
            | Error::GridMismatch => 2,
            _ => 1,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub type CmdResult = Result<String, CliError>;

const MOMENT_COLUMNS: [&str; 5] = ["mean_x", "mean_p", "var_x", "var_p", "cov_xp"];

pub fn params(cfg: &RunConfig) -> CmdResult {
    let (sys, init) = (&cfg.system, &cfg.initial);
    let sq = solve_squeeze(sys, init)?;
    let alpha = coherent_alpha(sys, &sq, init.x0, init.p0).alpha;
    let m = moments(sys, init, 0.0)?;
    let mut table = Table::new(&["delta", "r", "theta", "alpha_re", "alpha_im"]);
    table.columns.extend(MOMENT_COLUMNS);
    table.push(vec![
        delta(sys, init),
        sq.r,
        sq.theta,
        alpha.re,
        alpha.im,
        m.mean_x,
        m.mean_p,
        m.var_x,
        m.var_p,
        m.cov_xp,
    ]);
    Ok(table.render(cfg.format, cfg.precision, true))
}

pub fn moment_table(cfg: &RunConfig, t0: f64, t1: f64, steps: usize) -> CmdResult {
    if !t0.is_finite() || !t1.is_finite() {
        return Err(CliError::invalid("t0 and t1 must be finite"));
    }
    if t1 < t0 {
        return Err(CliError::invalid(format!("t1 = {t1} must be >= t0 = {t0}")));
    }
    if steps == 0 {
        return Err(CliError::invalid("steps must be at least 1"));
    }
    let (sys, init) = (&cfg.system, &cfg.initial);
    let mut table = Table::new(&["t", "x_c", "p_c", "var_x", "var_p", "cov_xp", "S_c"]);
    for i in 0..steps {
        let t = if steps == 1 {
            t0
        } else {
            t0 + i as f64 * (t1 - t0) / (steps - 1) as f64
        };
        let m = moments(sys, init, t)?;
        let cl = classical_trajectory(sys, init.x0, init.p0, t);
        table.push(vec![
            t, cl.x_c, cl.p_c, m.var_x, m.var_p, m.cov_xp, cl.action,
        ]);
    }
    Ok(table.render(cfg.format, cfg.precision, false))
}

fn resolve_grid(cfg: &RunConfig, t: f64) -> Result<GridSpec, CliError> {
    let g = cfg.grid;
    if let (Some(lo), Some(hi), Some(n)) = (g.xmin, g.xmax, g.n) {
        return Ok(GridSpec::new(lo, hi, n)?);
    }
    let auto = auto_grid_span(&cfg.system, &cfg.initial, t.min(0.0), t.max(0.0))?;
    Ok(GridSpec::new(
        g.xmin.unwrap_or(auto.x_min),
        g.xmax.unwrap_or(auto.x_max),
        g.n.unwrap_or(auto.n),
    )?)
}

pub fn wavefield(cfg: &RunConfig, t: f64) -> CmdResult {
    if !t.is_finite() {
        return Err(CliError::invalid("t must be finite"));
    }
    let grid = resolve_grid(cfg, t)?;
    let wf = evaluate_packet(
        &cfg.system,
        &cfg.initial,
        t,
        &grid,
        &mut PhaseTracker::new(),
        cfg.strict,
    )?;
    let norm = wf.norm();
    // a too-narrow grid in lenient mode can leave the packet unnormalized
    let gm = grid_moments(&wf, cfg.system.hbar).ok();
    let d = cfg.precision;

    let mut table = Table::new(&["x", "re_psi", "im_psi", "density"]);
    for (x, v) in grid.points().zip(&wf.values) {
        table.push(vec![x, v.re, v.im, v.norm_sqr()]);
    }
    let moment_row = gm.map(|m| vec![m.mean_x, m.mean_p, m.var_x, m.var_p, m.cov_xp]);

    Ok(match cfg.format {
        Format::Csv => {
            let mut out = table.csv(d);
            out.push_str(&format!("# t={}\n", sci(t, d)));
            out.push_str(&format!("# norm={}\n", sci(norm, d)));
            out.push_str(&format!(
                "# grid x_min={} x_max={} n={}\n",
                sci(grid.x_min, d),
                sci(grid.x_max, d),
                grid.n
            ));
            match &moment_row {
                Some(row) => {
                    let cells: Vec<String> = MOMENT_COLUMNS
                        .iter()
                        .zip(row)
                        .map(|(c, &v)| format!("{c}={}", sci(v, d)))
                        .collect();
                    out.push_str(&format!("# grid_moments {}\n", cells.join(" ")));
                }
                None => out.push_str("# grid_moments unavailable\n"),
            }
            out
        }
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("t".into(), rounded(t, d));
            obj.insert("norm".into(), rounded(norm, d));
            obj.insert("grid".into(), json!({"x_min": rounded(grid.x_min, d), "x_max": rounded(grid.x_max, d), "n": grid.n}));
            obj.insert(
                "grid_moments".into(),
                moment_row.map_or(Value::Null, |row| record(&MOMENT_COLUMNS, &row, d)),
            );
            for (k, name) in table.columns.iter().enumerate() {
                let col = table.rows.iter().map(|r| rounded(r[k], d)).collect();
                obj.insert(name.to_string(), Value::Array(col));
            }
            json_text(&Value::Object(obj))
        }
    })
}

pub fn contractive(cfg: &RunConfig, oracle: bool) -> CmdResult {
    let (sys, init) = (&cfg.system, &cfg.initial);
    let ca = contractive_analysis(sys, init)?;
    let mut row = vec![ca.tau, ca.var_min, ca.t_return];
    let mut columns = vec!["tau", "var_min", "t_return"];
    if oracle {
        let om = oracle_contractive_min(sys, init, ca.t_return, ORACLE_SAMPLES)?;
        columns.extend(["t_star", "var_star", "var_gap"]);
        row.extend([om.t_star, om.var_star, (om.var_star - ca.var_min).abs()]);
    }
    let mut table = Table::new(&columns);
    table.push(row);
    Ok(table.render(cfg.format, cfg.precision, true))
}

pub fn verify(cfg: &RunConfig, level: VerifyLevel) -> CmdResult {
    let report = run_verification(&cfg.system, &cfg.initial, &cfg.tolerances, level)?;
    let text = match cfg.format {
        Format::Json => json_text(&verify_json(&report, cfg.precision)),
        Format::Csv => verify_table(&report),
    };
    match report.first_failure() {
        None => Ok(text),
        Some(c) => {
            print!("{text}");
            Err(CliError::numerical(format!(
                "verification failed: {} = {:e} (needs {})",
                c.name, c.value, c.threshold
            )))
        }
    }
}

fn verify_table(report: &VerifyReport) -> String {
    let mut out = format!(
        "{:<28} {:>12}  {:<16} {}\n",
        "check", "value", "threshold", "status"
    );
    for c in &report.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{:<28} {:>12.3e}  {:<16} {status}\n",
            c.name, c.value, c.threshold
        ));
    }
    out
}

fn verify_json(report: &VerifyReport, digits: usize) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "value": rounded(c.value, digits), "threshold": c.threshold, "passed": c.passed}))
        .collect();
    json!({"passed": report.all_passed(), "checks": checks})
}
