//! Price ingestion and return computation.
//!
//! The expected CSV dialect: comma separated, a header row whose first
//! column is the date label and remaining columns are tickers, ISO-8601
//! dates in the first column, dot-decimal positive prices everywhere else.
//! Malformed inputs are rejected with the offending row and column named —
//! never silently repaired.

use crate::error::{CliError, Result};
use chrono::NaiveDate;
use nalgebra::DMatrix;
use std::path::Path;

/// Validated price history.
#[derive(Debug, Clone)]
pub struct PriceTable {
    pub dates: Vec<NaiveDate>,
    pub tickers: Vec<String>,
    /// T x d, rows in date order.
    pub prices: DMatrix<f64>,
}

impl PriceTable {
    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn dim(&self) -> usize {
        self.tickers.len()
    }

    /// Columnwise daily log-differences: r_t = ln(P_t / P_{t-1}),
    /// a (T-1) x d matrix.
    pub fn log_returns(&self) -> Result<DMatrix<f64>> {
        let (t, d) = (self.len(), self.dim());
        if t < 2 {
            return Err(CliError::input(
                "need at least two price rows to form returns",
            ));
        }
        let mut r = DMatrix::zeros(t - 1, d);
        for j in 0..d {
            for i in 1..t {
                r[(i - 1, j)] = (self.prices[(i, j)] / self.prices[(i - 1, j)]).ln();
            }
        }
        Ok(r)
    }
}

/// Load and validate a price CSV.
pub fn load_prices_csv(path: &Path) -> Result<PriceTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::input(format!("bad header row: {e}")))?
        .clone();
    if headers.len() < 2 {
        return Err(CliError::input(
            "header must contain a date column plus at least one ticker",
        ));
    }
    let tickers: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
    let d = tickers.len();
    let mut dates = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        // 1-based data rows, after the header
        let line = row_idx + 2;
        let record =
            record.map_err(|e| CliError::input(format!("row {line}: parse error: {e}")))?;
        if record.len() != d + 1 {
            return Err(CliError::input(format!(
                "row {line}: expected {} fields, found {}",
                d + 1,
                record.len()
            )));
        }
        let date = NaiveDate::parse_from_str(&record[0], "%Y-%m-%d").map_err(|_| {
            CliError::input(format!(
                "row {line}: date {:?} is not ISO-8601 (YYYY-MM-DD)",
                &record[0]
            ))
        })?;
        if let Some(&prev) = dates.last() {
            if date <= prev {
                return Err(CliError::input(format!(
                    "row {line}: dates must be strictly ascending ({date} after {prev})"
                )));
            }
        }
        let mut row = Vec::with_capacity(d);
        for (col, field) in record.iter().skip(1).enumerate() {
            if field.is_empty() {
                return Err(CliError::input(format!(
                    "row {line}, column {:?}: missing price",
                    tickers[col]
                )));
            }
            let value: f64 = field.parse().map_err(|_| {
                CliError::input(format!(
                    "row {line}, column {:?}: {field:?} is not a number",
                    tickers[col]
                ))
            })?;
            if !(value > 0.0) || !value.is_finite() {
                return Err(CliError::input(format!(
                    "row {line}, column {:?}: nonpositive price {value}",
                    tickers[col]
                )));
            }
            row.push(value);
        }
        dates.push(date);
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::input("price file contains no data rows"));
    }
    let t = rows.len();
    let prices = DMatrix::from_fn(t, d, |i, j| rows[i][j]);
    Ok(PriceTable { dates, tickers, prices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_csv(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn well_formed_file_loads() {
        let f = write_csv("date,AAA,BBB\n2020-01-01,10,20\n2020-01-02,11,19\n2020-01-03,12,21\n");
        let t = load_prices_csv(f.path()).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.tickers, vec!["AAA", "BBB"]);
        let r = t.log_returns().unwrap();
        assert_eq!(r.nrows(), 2);
        assert!((r[(0, 0)] - (11f64 / 10.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn round_trip_prices_from_returns() {
        let f = write_csv("date,A\n2020-01-01,100\n2020-01-02,105\n2020-01-03,99.5\n");
        let t = load_prices_csv(f.path()).unwrap();
        let r = t.log_returns().unwrap();
        let mut p = t.prices[(0, 0)];
        for i in 0..r.nrows() {
            p *= r[(i, 0)].exp();
            assert!((p - t.prices[(i + 1, 0)]).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_malformed_inputs() {
        let zero = write_csv("date,A\n2020-01-01,100\n2020-01-02,0\n");
        let err = load_prices_csv(zero.path()).unwrap_err();
        assert!(err.to_string().contains("nonpositive price"), "{err}");
        assert!(err.to_string().contains("row 3"));

        let shuffled = write_csv("date,A\n2020-01-02,100\n2020-01-01,101\n");
        let err = load_prices_csv(shuffled.path()).unwrap_err();
        assert!(err.to_string().contains("ascending"), "{err}");

        let missing = write_csv("date,A,B\n2020-01-01,100,\n");
        let err = load_prices_csv(missing.path()).unwrap_err();
        assert!(err.to_string().contains("missing price"), "{err}");

        let text = write_csv("date,A\n2020-01-01,abc\n");
        let err = load_prices_csv(text.path()).unwrap_err();
        assert!(err.to_string().contains("not a number"), "{err}");

        let bad_date = write_csv("date,A\n01/02/2020,100\n");
        let err = load_prices_csv(bad_date.path()).unwrap_err();
        assert!(err.to_string().contains("ISO-8601"), "{err}");
    }
}
