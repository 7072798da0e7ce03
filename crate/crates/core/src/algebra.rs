//! Signatures and finite algebras given by operation tables.
//!
//! Elements of an algebra with carrier size `n` are the indices `0..n`. An
//! operation of arity `k` is stored as a flat table of length `n^k`; the
//! argument tuple `(a_1, ..., a_k)` lives at index `sum a_i * n^(k-i)`
//! (row-major, first argument most significant).

use std::fmt;

use crate::error::{Error, Result};

/// A carrier element, addressed by its index.
pub type Element = usize;

/// Largest operation arity accepted anywhere in the crate.
pub const MAX_ARITY: usize = 4;

/// Index of a symbol within its [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Self {
            name: name.into(),
            arity,
        }
    }
}

/// True if `name` can be used as a symbol token in the term grammar.
pub fn is_valid_symbol_name(name: &str) -> bool {
    !name.is_empty()
        && name != "x"
        && !name.starts_with('#')
        && !name
            .chars()
            .any(|c| c.is_whitespace() || c == '(' || c == ')')
}

/// An ordered, finite list of operation symbols with unique names.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        for (i, sym) in symbols.iter().enumerate() {
            if !is_valid_symbol_name(&sym.name) {
                return Err(Error::InvalidSignature(format!(
                    "`{}` is not a valid symbol token",
                    sym.name
                )));
            }
            if sym.arity > MAX_ARITY {
                return Err(Error::InvalidSignature(format!(
                    "`{}` has arity {} (maximum is {MAX_ARITY})",
                    sym.name, sym.arity
                )));
            }
            if symbols[..i].iter().any(|s| s.name == sym.name) {
                return Err(Error::InvalidSignature(format!(
                    "duplicate symbol `{}`",
                    sym.name
                )));
            }
        }
        Ok(Self { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id.0]
    }

    pub fn arity(&self, id: SymbolId) -> usize {
        self.symbols[id.0].arity
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbols[id.0].name
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.symbols
            .iter()
            .position(|s| s.name == name)
            .map(SymbolId)
    }

    pub fn resolve(&self, name: &str) -> Result<SymbolId> {
        self.lookup(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = SymbolId> + '_ {
        (0..self.symbols.len()).map(SymbolId)
    }

    pub fn iter(&self) -> impl Iterator<Item = (SymbolId, &Symbol)> + '_ {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (SymbolId(i), s))
    }

    /// Symbols of exactly the given arity, in signature order.
    pub fn of_arity(&self, arity: usize) -> Vec<SymbolId> {
        self.iter()
            .filter(|(_, s)| s.arity == arity)
            .map(|(id, _)| id)
            .collect()
    }

    /// Largest arity of any symbol, or 0 for signatures without symbols.
    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }
}

/// Number of table entries for an operation of `arity` over `carrier` elements.
pub fn table_len(carrier: usize, arity: usize) -> usize {
    carrier.pow(arity as u32)
}

/// Row-major position of an argument tuple.
#[inline]
pub fn table_index(carrier: usize, args: &[Element]) -> usize {
    args.iter().fold(0, |acc, &a| acc * carrier + a)
}

/// Calls `f` on every tuple in `carrier^arity`, in lexicographic order.
pub fn for_each_tuple(carrier: usize, arity: usize, mut f: impl FnMut(&[Element])) {
    let mut tuple = vec![0; arity];
    loop {
        f(&tuple);
        let mut pos = arity;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < carrier {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// Like [`for_each_tuple`], stopping at the first tuple for which `f` returns
/// `Some`.
pub fn find_tuple<T>(
    carrier: usize,
    arity: usize,
    mut f: impl FnMut(&[Element]) -> Option<T>,
) -> Option<T> {
    let mut tuple = vec![0; arity];
    loop {
        if let Some(hit) = f(&tuple) {
            return Some(hit);
        }
        let mut pos = arity;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < carrier {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// A finite algebra: a carrier `{0, ..., n-1}` and one table per symbol.
///
/// Values are immutable once validated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    name: Option<String>,
    carrier: usize,
    signature: Signature,
    tables: Vec<Vec<Element>>,
}

impl FiniteAlgebra {
    pub fn new(
        name: Option<String>,
        carrier: usize,
        signature: Signature,
        tables: Vec<Vec<Element>>,
    ) -> Result<Self> {
        if carrier == 0 {
            return Err(Error::InvalidParams {
                kind: "algebra".into(),
                reason: "carrier must have at least one element".into(),
            });
        }
        if tables.len() != signature.len() {
            return Err(Error::InvalidSignature(format!(
                "{} symbols but {} tables",
                signature.len(),
                tables.len()
            )));
        }
        for ((_, sym), table) in signature.iter().zip(&tables) {
            let expected =
                carrier
                    .checked_pow(sym.arity as u32)
                    .ok_or_else(|| Error::InvalidTable {
                        symbol: sym.name.clone(),
                        reason: "table size overflows".into(),
                    })?;
            if table.len() != expected {
                return Err(Error::InvalidTable {
                    symbol: sym.name.clone(),
                    reason: format!("expected {expected} entries, found {}", table.len()),
                });
            }
            if let Some((pos, &e)) = table.iter().enumerate().find(|(_, &e)| e >= carrier) {
                return Err(Error::InvalidTable {
                    symbol: sym.name.clone(),
                    reason: format!("entry {pos} is {e}, carrier has {carrier} elements"),
                });
            }
        }
        Ok(Self {
            name,
            carrier,
            signature,
            tables,
        })
    }

    /// Builds an algebra by tabulating `op(symbol_index, args)` for every
    /// symbol in `symbols`.
    pub fn from_fn(
        name: impl Into<String>,
        carrier: usize,
        symbols: &[(&str, usize)],
        op: impl Fn(usize, &[Element]) -> Element,
    ) -> Result<Self> {
        let signature = Signature::new(
            symbols
                .iter()
                .map(|&(n, arity)| Symbol::new(n, arity))
                .collect(),
        )?;
        let tables = symbols
            .iter()
            .enumerate()
            .map(|(i, &(_, arity))| {
                let mut table = Vec::with_capacity(table_len(carrier, arity));
                for_each_tuple(carrier, arity, |args| table.push(op(i, args)));
                table
            })
            .collect();
        Self::new(Some(name.into()), carrier, signature, tables)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn table(&self, sym: SymbolId) -> &[Element] {
        &self.tables[sym.0]
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.carrier
    }

    /// Checked application of a symbol to arguments.
    pub fn apply(&self, sym: SymbolId, args: &[Element]) -> Result<Element> {
        if sym.0 >= self.signature.len() {
            return Err(Error::UnknownSymbol(format!("#{}", sym.0)));
        }
        let s = self.signature.symbol(sym);
        if args.len() != s.arity {
            return Err(Error::ArityMismatch {
                symbol: s.name.clone(),
                expected: s.arity,
                got: args.len(),
            });
        }
        if let Some(&bad) = args.iter().find(|&&a| a >= self.carrier) {
            return Err(Error::ElementOutOfRange {
                element: bad,
                carrier: self.carrier,
            });
        }
        Ok(self.value(sym, args))
    }

    pub fn apply_named(&self, name: &str, args: &[Element]) -> Result<Element> {
        let sym = self.signature.resolve(name)?;
        self.apply(sym, args)
    }

    /// Unchecked table lookup. Callers guarantee arity and range.
    #[inline]
    pub fn value(&self, sym: SymbolId, args: &[Element]) -> Element {
        self.tables[sym.0][table_index(self.carrier, args)]
    }

    /// The reduct keeping only `keep`, in the order given.
    pub fn reduct(&self, keep: &[SymbolId]) -> Result<Self> {
        let signature = Signature::new(
            keep.iter()
                .map(|&id| self.signature.symbol(id).clone())
                .collect(),
        )?;
        let tables = keep.iter().map(|&id| self.tables[id.0].clone()).collect();
        Self::new(self.name.clone(), self.carrier, signature, tables)
    }

    /// Same algebra with an additional operation.
    pub fn extended(&self, symbol: Symbol, table: Vec<Element>) -> Result<Self> {
        let mut symbols: Vec<Symbol> = self.signature.iter().map(|(_, s)| s.clone()).collect();
        symbols.push(symbol);
        let mut tables = self.tables.clone();
        tables.push(table);
        Self::new(
            self.name.clone(),
            self.carrier,
            Signature::new(symbols)?,
            tables,
        )
    }

    pub(crate) fn check_element(&self, e: Element) -> Result<()> {
        if e < self.carrier {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                element: e,
                carrier: self.carrier,
            })
        }
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (carrier {};",
            self.name.as_deref().unwrap_or("<unnamed>"),
            self.carrier
        )?;
        for (_, s) in self.signature.iter() {
            write!(f, " {}/{}", s.name, s.arity)?;
        }
        write!(f, ")")
    }
}

/// A linear order on the symbols of arity at least two, as used by the
/// distributivity conditions of [`crate::laws::check_choe_distributive`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoeOrder {
    order: Vec<SymbolId>,
}

impl ChoeOrder {
    /// `order` must list every symbol of arity `>= 2` exactly once, smallest
    /// first.
    pub fn new(signature: &Signature, order: Vec<SymbolId>) -> Result<Self> {
        let mut expected: Vec<SymbolId> = signature
            .iter()
            .filter(|(_, s)| s.arity >= 2)
            .map(|(id, _)| id)
            .collect();
        let mut given = order.clone();
        given.sort();
        expected.sort();
        if given != expected {
            let names = |ids: &[SymbolId]| {
                ids.iter()
                    .map(|&id| signature.name(id).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            return Err(Error::InvalidOrder(format!(
                "order [{}] is not a permutation of the symbols of arity >= 2 [{}]",
                names(&order),
                names(&expected)
            )));
        }
        Ok(Self { order })
    }

    pub fn from_names<S: AsRef<str>>(signature: &Signature, names: &[S]) -> Result<Self> {
        let ids = names
            .iter()
            .map(|n| {
                signature
                    .lookup(n.as_ref())
                    .ok_or_else(|| Error::InvalidOrder(format!("unknown symbol `{}`", n.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(signature, ids)
    }

    pub fn symbols(&self) -> &[SymbolId] {
        &self.order
    }

    /// Pairs `(lower, higher)` with `lower` strictly before `higher`.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (SymbolId, SymbolId)> + '_ {
        self.order
            .iter()
            .enumerate()
            .flat_map(move |(i, &lo)| self.order[i + 1..].iter().map(move |&hi| (lo, hi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z6() -> FiniteAlgebra {
        FiniteAlgebra::from_fn("Z6", 6, &[("+", 2), ("*", 2)], |op, a| match op {
            0 => (a[0] + a[1]) % 6,
            _ => (a[0] * a[1]) % 6,
        })
        .unwrap()
    }

    #[test]
    fn apply_reads_row_major_tables() {
        let a = z6();
        assert_eq!(a.apply_named("*", &[2, 4]).unwrap(), 2);
        for k in 0..6 {
            assert_eq!(a.apply_named("+", &[0, k]).unwrap(), k);
        }
        assert_eq!(table_index(6, &[2, 4]), 16);
        assert_eq!(a.table(SymbolId(1))[16], 2);
    }

    #[test]
    fn apply_errors() {
        let a = z6();
        assert!(matches!(
            a.apply_named("+", &[1]),
            Err(Error::ArityMismatch {
                expected: 2,
                got: 1,
                ..
            })
        ));
        assert!(matches!(
            a.apply_named("+", &[1, 6]),
            Err(Error::ElementOutOfRange {
                element: 6,
                carrier: 6
            })
        ));
        assert!(matches!(
            a.apply_named("-", &[1, 1]),
            Err(Error::UnknownSymbol(_))
        ));
    }

    #[test]
    fn validation_rejects_bad_tables() {
        let sig = Signature::new(vec![Symbol::new("f", 1)]).unwrap();
        assert!(FiniteAlgebra::new(None, 2, sig.clone(), vec![vec![0]]).is_err());
        assert!(FiniteAlgebra::new(None, 2, sig.clone(), vec![vec![0, 2]]).is_err());
        assert!(FiniteAlgebra::new(None, 0, sig, vec![vec![]]).is_err());
    }

    #[test]
    fn signature_rejects_bad_names() {
        assert!(Signature::new(vec![Symbol::new("x", 1)]).is_err());
        assert!(Signature::new(vec![Symbol::new("#1", 1)]).is_err());
        assert!(Signature::new(vec![Symbol::new("a b", 1)]).is_err());
        assert!(Signature::new(vec![Symbol::new("f", 1), Symbol::new("f", 2)]).is_err());
        assert!(Signature::new(vec![Symbol::new("f", 5)]).is_err());
        assert!(Signature::new(vec![]).is_ok());
    }

    #[test]
    fn tuples_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_tuple(2, 2, |t| seen.push(t.to_vec()));
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let mut n = 0;
        for_each_tuple(3, 0, |t| {
            assert!(t.is_empty());
            n += 1
        });
        assert_eq!(n, 1);
    }

    #[test]
    fn choe_order_must_be_a_permutation() {
        let a = z6();
        assert!(ChoeOrder::from_names(a.signature(), &["+", "*"]).is_ok());
        assert!(ChoeOrder::from_names(a.signature(), &["+"]).is_err());
        assert!(ChoeOrder::from_names(a.signature(), &["+", "+"]).is_err());
        let o = ChoeOrder::from_names(a.signature(), &["*", "+"]).unwrap();
        assert_eq!(
            o.strict_pairs().collect::<Vec<_>>(),
            vec![(SymbolId(1), SymbolId(0))]
        );
    }
}
