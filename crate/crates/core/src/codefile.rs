//! The JSON interchange format `{"q": int, "n": int, "generators": [...]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::PrimeField;
use crate::code::ConvolutionalCode;
use crate::error::{Error, Result};
use crate::polymat::PolyVector;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeFile {
    pub q: u64,
    pub n: usize,
    pub generators: Vec<Vec<Vec<u64>>>,
}

impl CodeFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn of(code: &ConvolutionalCode) -> Self {
        CodeFile { q: code.field().order() as u64, n: code.n(), generators: code.generator().to_coeff_lists() }
    }

    pub fn to_code(&self) -> Result<ConvolutionalCode> {
        let field = PrimeField::new(self.q).map_err(|_| Error::Parse(format!("field q: {} is not a prime", self.q)))?;
        if self.generators.is_empty() {
            return Err(Error::Parse("field generators: at least one row is required".into()));
        }
        for (i, row) in self.generators.iter().enumerate() {
            if row.len() != self.n {
                return Err(Error::Parse(format!("field generators[{i}]: expected {} entries, found {}", self.n, row.len())));
            }
        }
        let rows: Vec<PolyVector> = self.generators.iter().map(|r| PolyVector::from_coeffs(field, r)).collect();
        if let Some(i) = rows.iter().position(PolyVector::is_zero) {
            return Err(Error::Parse(format!("field generators[{i}]: row is zero")));
        }
        crate::code::new_code(field, self.n, &rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("code files serialize")
    }
}

pub fn load_code(path: &Path) -> Result<ConvolutionalCode> {
    CodeFile::load(path)?.to_code()
}
