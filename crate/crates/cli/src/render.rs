//! JSON, CSV and plain-text renderings of a run.

use std::fmt::Write as _;

use serde::Serialize;

use crate::{Document, Outcome, RunConfig};

pub fn json(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serialises");
    s.push('\n');
    s
}

fn csv_rows<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("row serialises");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 csv")
}

#[derive(Serialize)]
struct VerifyRow {
    x: u64,
    sum: f64,
    main: f64,
    fitted: f64,
    residual: f64,
    bound_ratio: f64,
}

/// CSV with a leading `# config=` comment line carrying the run config.
pub fn csv(config: &RunConfig, outcome: &Outcome) -> String {
    let mut out = format!("# config={}\n", serde_json::to_string(config).expect("config serialises"));
    let body = match outcome {
        Outcome::Constant(r) => csv_rows(std::slice::from_ref(r)),
        Outcome::Cyclotomic(r) => csv_rows(std::slice::from_ref(r)),
        Outcome::Jordan(r) => csv_rows(std::slice::from_ref(r)),
        Outcome::Sum(rows) => csv_rows(rows),
        Outcome::Verify(r) => {
            let _ = writeln!(out, "# theorem={}", r.theorem);
            let _ = writeln!(out, "# main_coefficient={} error_bound={:e}", r.main_coefficient_decimal, r.main_coefficient_error);
            let _ = writeln!(out, "# fit_coefficients={:?} include_constant={}", r.fit.coefficients, r.fit.include_constant);
            for c in &r.checks {
                let _ = writeln!(out, "# check {}: value={:e} threshold={:e} pass={}", c.name, c.value, c.threshold, c.pass);
            }
            let rows: Vec<VerifyRow> = (0..r.x_grid.len())
                .map(|i| VerifyRow {
                    x: r.x_grid[i],
                    sum: r.sums[i],
                    main: r.predicted_main[i],
                    fitted: r.fitted[i],
                    residual: r.residuals[i],
                    bound_ratio: r.bound_ratios[i],
                })
                .collect();
            csv_rows(&rows)
        }
    };
    out.push_str(&body);
    out
}

pub fn text(outcome: &Outcome) -> String {
    let mut out = String::new();
    match outcome {
        Outcome::Constant(r) => {
            let _ = writeln!(out, "{} ({})", r.target, r.method);
            let _ = writeln!(out, "value        {}", r.value);
            if let Some(q) = &r.exact {
                let _ = writeln!(out, "exact        {q}");
            }
            let _ = writeln!(out, "error bound  {:e}", r.error_bound);
            let _ = writeln!(out, "factors      {}", r.factor_count);
            let _ = writeln!(out, "inputs       {}", r.inputs);
        }
        Outcome::Cyclotomic(r) => {
            let _ = writeln!(out, "Phi_{}({}) = {}   degree {}", r.n, r.z, r.value, r.degree);
            let _ = writeln!(out, "derivative {}   = {}", r.k, r.derivative);
            let _ = writeln!(out, "ratio        {} ≈ {}", r.ratio, r.ratio_decimal);
            let _ = writeln!(out, "normalized   {} ≈ {}", r.normalized, r.normalized_decimal);
        }
        Outcome::Jordan(r) => {
            let _ = writeln!(out, "J_{}({}) = {} ≈ {}   weight {}", r.e, r.n, r.value, r.decimal, r.weight);
        }
        Outcome::Sum(rows) => {
            for r in rows {
                match &r.exact {
                    Some(q) => writeln!(out, "x={}  {} ≈ {}", r.x, q, r.value),
                    None => writeln!(out, "x={}  {}", r.x, r.value),
                }
                .unwrap();
            }
        }
        Outcome::Verify(r) => {
            let _ = writeln!(out, "{}  x <= {}", r.theorem, r.x_grid.last().unwrap_or(&0));
            let _ = writeln!(out, "main coefficient {} (± {:e})", r.main_coefficient_decimal, r.main_coefficient_error);
            let _ = writeln!(out, "fitted log coefficients (estimates) {:?}", r.fit.coefficients);
            let _ = writeln!(
                out,
                "spot checks: {} sampled, {} against oracle, {} mismatches",
                r.spot_checks.sampled, r.spot_checks.oracle_checked, r.spot_checks.mismatches
            );
            for c in &r.checks {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "{verdict} {}: {:.4e} (threshold {:.4e})", c.name, c.value, c.threshold);
            }
        }
    }
    out
}
