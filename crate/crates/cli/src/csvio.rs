//! Trace CSV writing and column reading.

use std::io::{Read, Write};

use proxkit::splitting::TraceRecord;

use crate::CliError;

pub const HEADER: [&str; 10] = ["k", "residual", "primal_value", "dual_value", "gap", "dist_to_ref", "tau", "sigma", "omega", "lambda"];

/// Shortest decimal that parses back to the same value.
pub fn format_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

fn row(r: &TraceRecord<f64>) -> [String; 10] {
    [
        r.k.to_string(),
        format_float(r.residual),
        opt(r.primal_value),
        opt(r.dual_value),
        opt(r.gap),
        opt(r.dist_to_ref),
        format_float(r.tau),
        opt(r.sigma),
        opt(r.omega),
        opt(r.lambda),
    ]
}

/// Writes every `log_every`-th record and always the last one.
pub fn write_trace<W: Write>(out: W, records: &[TraceRecord<f64>], log_every: usize) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER).map_err(CliError::io)?;
    let last = records.len().saturating_sub(1);
    for (i, r) in records.iter().enumerate() {
        if r.k % log_every.max(1) == 0 || i == last {
            w.write_record(row(r)).map_err(CliError::io)?;
        }
    }
    w.flush().map_err(|e| CliError::io(csv::Error::from(e)))?;
    Ok(())
}

/// (k, value) pairs of a named column; empty cells are skipped.
pub fn read_column<R: Read>(input: R, column: &str) -> Result<Vec<(usize, f64)>, CliError> {
    let mut rd = csv::Reader::from_reader(input);
    let headers = rd.headers().map_err(CliError::io)?.clone();
    let idx = headers
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| CliError::config(format!("column `{column}` not found; available: {}", headers.iter().collect::<Vec<_>>().join(", "))))?;
    let kidx = headers.iter().position(|h| h == "k").ok_or_else(|| CliError::config("column `k` not found"))?;
    let mut out = Vec::new();
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(CliError::io)?;
        let cell = rec.get(idx).unwrap_or("").trim();
        if cell.is_empty() {
            continue;
        }
        let bad = |what: &str| CliError::config(format!("row {}: cannot parse {what}", line + 2));
        let k: usize = rec.get(kidx).unwrap_or("").trim().parse().map_err(|_| bad("k"))?;
        let v: f64 = cell.parse().map_err(|_| bad(column))?;
        out.push((k, v));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0, 1e-20, -3.5e300, 123456.789, 2.0f64.sqrt(), 5e-324, 1e16, 0.00001] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(format_float(1e-20), "1e-20");
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(f64::INFINITY), "inf");
    }

    #[test]
    fn header_and_empty_fields() {
        let rec = TraceRecord {
            k: 1,
            residual: 0.5,
            primal_value: Some(2.0),
            dual_value: None,
            gap: None,
            dist_to_ref: None,
            tau: 1.0,
            sigma: None,
            omega: None,
            lambda: None,
        };
        let mut buf = Vec::new();
        write_trace(&mut buf, &[rec], 1).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "k,residual,primal_value,dual_value,gap,dist_to_ref,tau,sigma,omega,lambda\n1,0.5,2,,,,1,,,\n");
    }

    #[test]
    fn reads_a_column_skipping_blanks() {
        let text = "k,residual,gap\n1,0.5,\n2,0.25,1e-3\n3,0.125,inf\n";
        let col = read_column(text.as_bytes(), "gap").unwrap();
        assert_eq!(col, vec![(2, 1e-3), (3, f64::INFINITY)]);
        assert!(read_column(text.as_bytes(), "nope").is_err());
    }
}
