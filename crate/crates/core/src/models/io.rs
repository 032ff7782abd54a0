//! Trajectory container and its CSV / binary encodings.
//!
//! CSV: an optional first line `# dt=<f64> t0=<f64>`, then a header
//! `t,<name>,...`, then one row per sample. Values are written with the
//! shortest representation that parses back to the same `f64`.
//!
//! Binary (all little-endian):
//!
//! ```text
//! offset  size  field
//! 0       5     magic "PHLK1"
//! 5       1     version (1)
//! 6       2     u16 column count C
//! 8       8     u64 row count R
//! 16      8     f64 t0
//! 24      8     f64 dt
//! 32      ...   C x (u16 name length L, L bytes UTF-8 name)
//! ...     8*C*R row-major f64 samples
//! ```

use std::fmt::Write as _;
use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};

pub const BINARY_MAGIC: &[u8; 5] = b"PHLK1";
const BINARY_VERSION: u8 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    names: Vec<String>,
    t0: f64,
    dt: f64,
    columns: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn new(names: Vec<String>, t0: f64, dt: f64, columns: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::InvalidInput(format!("{} names for {} columns", names.len(), columns.len())));
        }
        if let Some(first) = columns.first() {
            if columns.iter().any(|c| c.len() != first.len()) {
                return Err(Error::InvalidInput("columns differ in length".into()));
            }
        }
        if !(dt > 0.0) {
            return Err(Error::InvalidInput(format!("dt must be positive, got {dt}")));
        }
        if names.iter().any(|n| n == "t" || n.contains(',') || n.is_empty()) {
            return Err(Error::InvalidInput("column names must be non-empty, comma-free and not 't'".into()));
        }
        Ok(Self { names, t0, dt, columns })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.columns[i]
    }

    pub fn column_by_name(&self, name: &str) -> Option<&[f64]> {
        self.names.iter().position(|n| n == name).map(|i| self.columns[i].as_slice())
    }

    pub fn into_columns(self) -> Vec<Vec<f64>> {
        self.columns
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# dt={:?} t0={:?}", self.dt, self.t0)?;
        let mut line = String::from("t");
        for n in &self.names {
            line.push(',');
            line.push_str(n);
        }
        writeln!(w, "{line}")?;
        for i in 0..self.len() {
            line.clear();
            let _ = write!(line, "{:?}", self.time(i));
            for c in &self.columns {
                let _ = write!(line, ",{:?}", c[i]);
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    /// Parse the CSV layout. Without a `# dt=` line the interval is taken
    /// from the first two time stamps.
    pub fn read_csv<R: BufRead>(r: R) -> std::result::Result<Self, ParseError> {
        let mut dt = None;
        let mut t0 = None;
        let mut names: Option<Vec<String>> = None;
        let mut times = Vec::new();
        let mut columns: Vec<Vec<f64>> = Vec::new();
        for (idx, line) in r.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| ParseError::new(lineno, e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                for kv in meta.split_whitespace() {
                    if let Some((k, v)) = kv.split_once('=') {
                        let val: f64 =
                            v.parse().map_err(|_| ParseError::new(lineno, format!("bad value in `{kv}`")))?;
                        match k {
                            "dt" => dt = Some(val),
                            "t0" => t0 = Some(val),
                            _ => {}
                        }
                    }
                }
                continue;
            }
            match &names {
                None => {
                    let mut fields = line.split(',').map(str::trim);
                    if fields.next() != Some("t") {
                        return Err(ParseError::new(lineno, "header must start with column `t`"));
                    }
                    let n: Vec<String> = fields.map(String::from).collect();
                    if n.is_empty() {
                        return Err(ParseError::new(lineno, "header names no data columns"));
                    }
                    columns = vec![Vec::new(); n.len()];
                    names = Some(n);
                }
                Some(n) => {
                    let mut count = 0;
                    for (k, field) in line.split(',').enumerate() {
                        count += 1;
                        if k > n.len() {
                            break;
                        }
                        let v: f64 = field.trim().parse().map_err(|_| {
                            ParseError::new(lineno, format!("cannot parse `{}` as a number", field.trim()))
                        })?;
                        if !v.is_finite() {
                            return Err(ParseError::new(lineno, "non-finite value"));
                        }
                        if k == 0 {
                            times.push(v);
                        } else {
                            columns[k - 1].push(v);
                        }
                    }
                    if count != n.len() + 1 {
                        return Err(ParseError::new(lineno, format!("expected {} fields, found {count}", n.len() + 1)));
                    }
                }
            }
        }
        let names = names.ok_or_else(|| ParseError::new(0, "missing header"))?;
        let dt = match dt {
            Some(d) => d,
            None if times.len() >= 2 => times[1] - times[0],
            None => return Err(ParseError::new(0, "cannot infer sample interval from fewer than 2 rows")),
        };
        let t0 = t0.or_else(|| times.first().copied()).unwrap_or(0.0);
        Self::new(names, t0, dt, columns).map_err(|e| ParseError::new(0, e.to_string()))
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(BINARY_MAGIC)?;
        w.write_all(&[BINARY_VERSION])?;
        w.write_all(&(self.names.len() as u16).to_le_bytes())?;
        w.write_all(&(self.len() as u64).to_le_bytes())?;
        w.write_all(&self.t0.to_le_bytes())?;
        w.write_all(&self.dt.to_le_bytes())?;
        for n in &self.names {
            w.write_all(&(n.len() as u16).to_le_bytes())?;
            w.write_all(n.as_bytes())?;
        }
        for i in 0..self.len() {
            for c in &self.columns {
                w.write_all(&c[i].to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> std::result::Result<Self, ParseError> {
        fn take<const K: usize, R: Read>(r: &mut R, what: &str) -> std::result::Result<[u8; K], ParseError> {
            let mut buf = [0u8; K];
            r.read_exact(&mut buf).map_err(|_| ParseError::new(0, format!("truncated {what}")))?;
            Ok(buf)
        }
        let magic: [u8; 5] = take(&mut r, "magic")?;
        if &magic != BINARY_MAGIC {
            return Err(ParseError::new(0, "bad magic, expected PHLK1"));
        }
        let [version] = take::<1, _>(&mut r, "version")?;
        if version != BINARY_VERSION {
            return Err(ParseError::new(0, format!("unsupported version {version}")));
        }
        let n_cols = u16::from_le_bytes(take(&mut r, "column count")?) as usize;
        let n_rows = u64::from_le_bytes(take(&mut r, "row count")?) as usize;
        let t0 = f64::from_le_bytes(take(&mut r, "t0")?);
        let dt = f64::from_le_bytes(take(&mut r, "dt")?);
        let mut names = Vec::with_capacity(n_cols);
        for _ in 0..n_cols {
            let len = u16::from_le_bytes(take(&mut r, "name length")?) as usize;
            let mut buf = vec![0u8; len];
            r.read_exact(&mut buf).map_err(|_| ParseError::new(0, "truncated name"))?;
            names.push(String::from_utf8(buf).map_err(|_| ParseError::new(0, "name is not UTF-8"))?);
        }
        let mut columns = vec![Vec::with_capacity(n_rows); n_cols];
        for row in 0..n_rows {
            for c in columns.iter_mut() {
                let v = f64::from_le_bytes(
                    take(&mut r, "sample data").map_err(|_| ParseError::new(row + 1, "truncated sample data"))?,
                );
                c.push(v);
            }
        }
        Self::new(names, t0, dt, columns).map_err(|e| ParseError::new(0, e.to_string()))
    }
}

/// Input format violation; `line` is 1-based (row index for binary data),
/// 0 when the problem is not tied to a line.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self { line, message: message.into() }
    }
}
