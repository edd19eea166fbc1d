use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Kind of a formal symbol.
///
/// `Hom` symbols are multiplicative: `phiJ(v^k) = phiJ(v)^k`.
/// `LogDeriv` symbols are additive on the multiplicative group:
/// `aR(v^k) = k·aR(v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SymbolKind {
    Hom,
    LogDeriv,
}

/// A formal symbol `phiJ(v)` or `aR(v)`; `base` numbers the formal
/// variable (`x = 1`, `y = 2`, `z = 3`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SymbolId {
    pub kind: SymbolKind,
    pub index: u32,
    pub base: u32,
}

impl SymbolId {
    pub fn hom(index: u32, base: u32) -> Self {
        SymbolId {
            kind: SymbolKind::Hom,
            index,
            base,
        }
    }

    pub fn log_deriv(index: u32, base: u32) -> Self {
        SymbolId {
            kind: SymbolKind::LogDeriv,
            index,
            base,
        }
    }

    pub fn with_base(self, base: u32) -> Self {
        SymbolId { base, ..self }
    }
}

pub fn base_var_name(base: u32) -> String {
    match base {
        1 => "x".into(),
        2 => "y".into(),
        3 => "z".into(),
        n => format!("x{n}"),
    }
}

impl fmt::Display for SymbolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = match self.kind {
            SymbolKind::Hom => "phi",
            SymbolKind::LogDeriv => "a",
        };
        write!(f, "{}{}({})", head, self.index, base_var_name(self.base))
    }
}

/// The declared variable set of a computation: formal symbols (sorted by
/// `(kind, index, base)`) and named unknown constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Universe {
    symbols: Vec<SymbolId>,
    unknowns: Vec<String>,
}

impl Universe {
    pub fn new(symbols: impl IntoIterator<Item = SymbolId>, unknowns: impl IntoIterator<Item = String>) -> Arc<Universe> {
        let mut symbols: Vec<SymbolId> = symbols.into_iter().collect();
        symbols.sort();
        symbols.dedup();
        let mut seen = Vec::new();
        for u in unknowns {
            if !seen.contains(&u) {
                seen.push(u);
            }
        }
        Arc::new(Universe {
            symbols,
            unknowns: seen,
        })
    }

    pub fn symbols(&self) -> &[SymbolId] {
        &self.symbols
    }

    pub fn unknowns(&self) -> &[String] {
        &self.unknowns
    }

    pub fn symbol_position(&self, s: &SymbolId) -> Option<usize> {
        self.symbols.binary_search(s).ok()
    }

    pub fn unknown_position(&self, name: &str) -> Option<usize> {
        self.unknowns.iter().position(|u| u == name)
    }

    /// Smallest universe containing both; unknowns of `self` keep their order.
    pub fn union(&self, other: &Universe) -> Arc<Universe> {
        Universe::new(
            self.symbols.iter().chain(&other.symbols).copied(),
            self.unknowns.iter().chain(&other.unknowns).cloned(),
        )
    }

    /// Copy of the universe where every symbol is also present on the given
    /// extra base variables.
    pub fn with_bases(&self, bases: &[u32]) -> Arc<Universe> {
        let extra = self
            .symbols
            .iter()
            .flat_map(|s| bases.iter().map(move |&b| s.with_base(b)))
            .collect::<Vec<_>>();
        Universe::new(self.symbols.iter().copied().chain(extra), self.unknowns.iter().cloned())
    }

    pub fn is_subset_of(&self, other: &Universe) -> bool {
        self.symbols.iter().all(|s| other.symbol_position(s).is_some())
            && self.unknowns.iter().all(|u| other.unknown_position(u).is_some())
    }
}
