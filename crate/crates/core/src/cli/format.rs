//! Locale-independent number rendering and the sweep CSV layout.

use std::fmt::Write as _;

/// Shortest decimal that parses back to the same `f64`.
///
/// Plain notation in `[1e-5, 1e16)`, exponent notation outside it so tiny
/// tail values do not print hundreds of zeros.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// One sweep row; `None` cells render empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub axis: f64,
    pub value: Option<f64>,
    pub bounds: Option<(f64, f64)>,
    pub method: Option<&'static str>,
    pub est_error: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub bounds: bool,
    pub diagnostics: bool,
}

impl Layout {
    pub fn header(&self) -> String {
        let mut h = String::from("axis,value");
        if self.bounds {
            h.push_str(",lower,upper");
        }
        if self.diagnostics {
            h.push_str(",method,est_error");
        }
        h
    }

    pub fn render(&self, row: &Row) -> String {
        let cell = |x: Option<f64>| x.map(num).unwrap_or_default();
        let mut line = format!("{},{}", num(row.axis), cell(row.value));
        if self.bounds {
            let _ = write!(line, ",{},{}", cell(row.bounds.map(|b| b.0)), cell(row.bounds.map(|b| b.1)));
        }
        if self.diagnostics {
            let _ = write!(line, ",{},{}", row.method.unwrap_or(""), cell(row.est_error));
        }
        line
    }
}

/// Parses the numeric columns of an emitted sweep; empty cells become `None`.
/// Comment lines (`#`) are skipped.
#[cfg(test)]
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<Option<f64>>>), String> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines.next().ok_or("empty CSV")?.split(',').map(str::to_owned).collect();
    let mut rows = Vec::new();
    for line in lines {
        let cells = line.split(',');
        let parsed = cells
            .zip(&header)
            .map(|(c, h)| {
                if c.is_empty() || h == "method" {
                    Ok(None)
                } else {
                    c.parse::<f64>().map(Some).map_err(|e| format!("bad cell '{c}': {e}"))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(parsed);
    }
    Ok((header, rows))
}
