//! JSON algebra files.
//!
//! ```json
//! {
//!   "name": "Z3 ring",
//!   "carrier": 3,
//!   "operations": [
//!     {"symbol": "+", "arity": 2, "table": [0,1,2, 1,2,0, 2,0,1]}
//!   ],
//!   "choe_order": ["+"]
//! }
//! ```
//!
//! Tables are row-major: the entry for `(a_1, .., a_n)` sits at
//! `a_1 * n^(k-1) + .. + a_k`. Unknown fields are rejected.

use serde::{Deserialize, Serialize};

use crate::algebra::{ChoeOrder, Element, FiniteAlgebra, Signature, Symbol};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub carrier: usize,
    pub operations: Vec<OperationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choe_order: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperationSpec {
    pub symbol: String,
    pub arity: usize,
    pub table: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedAlgebra {
    pub algebra: FiniteAlgebra,
    pub choe_order: Option<ChoeOrder>,
}

fn byte_offset(src: &str, line: usize, column: usize) -> usize {
    let start: usize = src
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    (start + column.saturating_sub(1)).min(src.len())
}

/// Parses and validates an algebra file.
pub fn parse_algebra(src: &str) -> Result<LoadedAlgebra> {
    let file: AlgebraFile = serde_json::from_str(src).map_err(|e| {
        let offset = byte_offset(src, e.line(), e.column());
        Error::Format(format!(
            "line {}, column {} (byte {offset}): {e}",
            e.line(),
            e.column()
        ))
    })?;
    file.into_algebra()
}

impl AlgebraFile {
    pub fn into_algebra(self) -> Result<LoadedAlgebra> {
        if self.carrier == 0 {
            return Err(Error::Format("carrier must be at least 1".into()));
        }
        let signature = Signature::new(
            self.operations
                .iter()
                .map(|op| Symbol::new(op.symbol.clone(), op.arity))
                .collect(),
        )?;
        let tables = self.operations.into_iter().map(|op| op.table).collect();
        let algebra = FiniteAlgebra::new(Some(self.name), self.carrier, signature, tables)?;
        let choe_order = self
            .choe_order
            .map(|names| ChoeOrder::from_names(algebra.signature(), &names))
            .transpose()?;
        Ok(LoadedAlgebra {
            algebra,
            choe_order,
        })
    }

    pub fn from_algebra(a: &FiniteAlgebra, order: Option<&ChoeOrder>) -> Self {
        let sig = a.signature();
        Self {
            name: a.name().unwrap_or("algebra").to_string(),
            carrier: a.carrier(),
            operations: sig
                .iter()
                .map(|(id, s)| OperationSpec {
                    symbol: s.name.clone(),
                    arity: s.arity,
                    table: a.table(id).to_vec(),
                })
                .collect(),
            choe_order: order.map(|o| {
                o.symbols()
                    .iter()
                    .map(|&id| sig.name(id).to_string())
                    .collect()
            }),
        }
    }
}

pub fn algebra_to_json(a: &FiniteAlgebra, order: Option<&ChoeOrder>) -> String {
    serde_json::to_string_pretty(&AlgebraFile::from_algebra(a, order))
        .expect("algebra files serialize")
}

pub fn load_algebra(path: &std::path::Path) -> Result<LoadedAlgebra> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    parse_algebra(&src)
}
