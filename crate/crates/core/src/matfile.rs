//! Matrix file format shared by the library and the CLI.
//!
//! Text form: first non-comment line `q k n`, then k lines of n
//! whitespace-separated integer-encoded field elements. Anything after a `#`
//! is a comment. The JSON form carries the same fields.

use serde::{Deserialize, Serialize};

use crate::codes::FqMatrix;
use crate::error::{Error, Result};
use crate::gf::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub q: u64,
    pub k: usize,
    pub n: usize,
    pub entries: Vec<Vec<u64>>,
}

impl MatrixFile {
    pub fn from_matrix(f: &FieldSpec, m: &FqMatrix) -> Self {
        MatrixFile { q: f.q() as u64, k: m.rows(), n: m.cols(), entries: m.to_reps() }
    }

    /// Validates the entries against F_q and returns the field and matrix.
    pub fn to_matrix(&self) -> Result<(FieldSpec, FqMatrix)> {
        let f = FieldSpec::new(self.q)?;
        if self.entries.len() != self.k {
            return Err(Error::Parse(format!("expected {} rows, found {}", self.k, self.entries.len())));
        }
        if let Some(r) = self.entries.iter().find(|r| r.len() != self.n) {
            return Err(Error::Parse(format!("expected {} columns, found a row with {}", self.n, r.len())));
        }
        let mut m = FqMatrix::from_reps(&f, &self.entries)?;
        if self.k == 0 {
            m = FqMatrix::zeros(0, self.n);
        }
        Ok((f, m))
    }

    pub fn parse_text(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let nums = parse_ints(header)?;
        let [q, k, n] = nums[..] else {
            return Err(Error::Parse(format!("header must be `q k n`, got {header:?}")));
        };
        let (k, n) = (k as usize, n as usize);
        let entries = lines.map(parse_ints).collect::<Result<Vec<_>>>()?;
        let file = MatrixFile { q, k, n, entries };
        file.to_matrix()?;
        Ok(file)
    }

    /// Parses either form, choosing JSON when the first non-blank character is `{`.
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            let file: MatrixFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
            file.to_matrix()?;
            Ok(file)
        } else {
            Self::parse_text(s)
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.q, self.k, self.n);
        for row in &self.entries {
            let parts: Vec<String> = row.iter().map(u64::to_string).collect();
            out.push_str(&parts.join(" "));
            out.push('\n');
        }
        out
    }
}

fn parse_ints(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}"))))
        .collect()
}
