use std::io::Write;
use std::time::Instant;

use homport::matrixfn::{DEFAULT_PERMANENT_CAP, VANISHING_TOL_PER_DIM};
use homport::multiport::EPS_UNITARY;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct Tolerances {
    pub eps_unitary: f64,
    pub vanishing_tol_per_dim: f64,
    pub permanent_cap: usize,
}

/// Provenance block attached to every JSON document.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub tool_version: String,
    pub duration_ms: f64,
    pub tolerances: Tolerances,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Value, started: Instant) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            duration_ms: started.elapsed().as_secs_f64() * 1e3,
            tolerances: Tolerances {
                eps_unitary: EPS_UNITARY,
                vanishing_tol_per_dim: VANISHING_TOL_PER_DIM,
                permanent_cap: DEFAULT_PERMANENT_CAP,
            },
        }
    }
}

/// Shortest round-trip decimal, at most 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{:?}", x + 0.0)
}

pub fn write_json<T: Serialize>(out: &mut impl Write, manifest: RunManifest, body: T) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct Document<T> {
        manifest: RunManifest,
        #[serde(flatten)]
        body: T,
    }
    let doc = Document { manifest, body };
    serde_json::to_writer_pretty(&mut *out, &doc).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out).map_err(CliError::from)
}

pub fn write_csv(out: &mut impl Write, header: &[&str], rows: Vec<Vec<String>>) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for row in rows {
        writer.write_record(&row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    writer.flush().map_err(CliError::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(0.5), "0.5");
        assert_eq!(num(0.0), "0.0");
        assert_eq!(num(-0.0), "0.0");
        assert_eq!(num(1.0), "1.0");
        assert_eq!(num(1.0 / 3.0), "0.3333333333333333");
        assert_eq!(num(4e-34), "4e-34");
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &["a", "b"], vec![vec!["2 0".into(), num(0.5)]]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n2 0,0.5\n");
    }
}
