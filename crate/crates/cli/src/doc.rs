//! Input document schemas. Quaternions are 4-arrays `[w, x, y, z]`; unknown
//! fields are rejected so fixtures stay honest over time.

use serde::Deserialize;

use quatspec::{QMatrix, Quaternion};

pub const SCHEMA: &str = "quatspec/1";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    #[serde(default)]
    pub schema: Option<String>,
    pub n: usize,
    pub entries: Vec<Vec<[f64; 4]>>,
}

impl MatrixDocument {
    pub fn validate(&self) -> Result<QMatrix, String> {
        if let Some(s) = &self.schema {
            if s != SCHEMA {
                return Err(format!("unsupported schema {s:?}, expected {SCHEMA:?}"));
            }
        }
        if self.n == 0 {
            return Err("matrix order must be positive".into());
        }
        if self.entries.len() != self.n {
            return Err(format!(
                "expected {} rows, found {}",
                self.n,
                self.entries.len()
            ));
        }
        let mut qs = Vec::with_capacity(self.n * self.n);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.n {
                return Err(format!("row {} has {} entries, expected {}", i + 1, row.len(), self.n));
            }
            for arr in row {
                let q = Quaternion::from_array(*arr);
                if !q.is_finite() {
                    return Err(format!("non-finite entry in row {}", i + 1));
                }
                qs.push(q);
            }
        }
        Ok(QMatrix::new(self.n, qs))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SylvesterDocument {
    #[serde(default)]
    pub schema: Option<String>,
    pub terms: Vec<[[f64; 4]; 2]>,
    pub rhs: [f64; 4],
}

impl SylvesterDocument {
    pub fn validate(&self) -> Result<(Vec<(Quaternion, Quaternion)>, Quaternion), String> {
        if let Some(s) = &self.schema {
            if s != SCHEMA {
                return Err(format!("unsupported schema {s:?}, expected {SCHEMA:?}"));
            }
        }
        if self.terms.is_empty() {
            return Err("at least one bilateral term is required".into());
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (i, [p, q]) in self.terms.iter().enumerate() {
            let p = Quaternion::from_array(*p);
            let q = Quaternion::from_array(*q);
            if !p.is_finite() || !q.is_finite() {
                return Err(format!("non-finite coefficient in term {}", i + 1));
            }
            terms.push((p, q));
        }
        let rhs = Quaternion::from_array(self.rhs);
        if !rhs.is_finite() {
            return Err("non-finite right-hand side".into());
        }
        Ok((terms, rhs))
    }
}
