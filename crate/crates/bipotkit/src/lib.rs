//! Command-line front end, configuration, sampling and verification suites
//! for `bipotkit-core`.

pub mod config;
pub mod error;
pub mod graph;
pub mod law;
pub mod report;
pub mod sampling;
pub mod suite;

pub use config::{ConfigFile, LawConfig, LawKind};
pub use error::CliError;
pub use law::Law;
pub use suite::Suite;

use bipotkit_core::Vector;

/// Parses `"1,0"`, `"(1, 0)"` or `"[1,0]"`.
pub fn parse_vector(input: &str) -> Result<Vector, CliError> {
    let err = |reason: String| CliError::Vector { input: input.to_owned(), reason };
    let inner = input.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    let coords = inner
        .split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|e| err(format!("{c:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Vector::new(coords).map_err(|e| err(e.to_string()))
}

/// `eval` output for one pair.
pub fn eval_report(cfg: &LawConfig, x: &Vector, y: &Vector) -> Result<report::EvalReport, CliError> {
    let e = cfg.law.evaluate(x, y, cfg.tol)?;
    Ok(report::EvalReport {
        law: cfg.law.name().to_owned(),
        b: report::Num(e.b),
        duality: e.duality,
        gap: report::Num(e.gap),
        critical: e.critical,
        regime: e.regime.to_owned(),
    })
}
