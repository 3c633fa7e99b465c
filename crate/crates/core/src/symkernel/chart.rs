use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::KernelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoordKind {
    Independent,
    Dependent,
    Derivative,
}

/// Ordered, named coordinate system shared by every polynomial and form built over it.
#[derive(Clone, Debug)]
pub struct CoordChart {
    names: Vec<String>,
    kinds: Vec<CoordKind>,
    lookup: HashMap<String, usize>,
}

/// Charts are shared by reference between all values that live on them.
pub type Chart = Arc<CoordChart>;

impl CoordChart {
    pub fn new<S: AsRef<str>>(coords: &[(S, CoordKind)]) -> Result<Chart, KernelError> {
        let mut names = Vec::with_capacity(coords.len());
        let mut kinds = Vec::with_capacity(coords.len());
        let mut lookup = HashMap::new();
        for (i, (name, kind)) in coords.iter().enumerate() {
            let name = name.as_ref().to_string();
            if !is_identifier(&name) {
                return Err(KernelError::BadName(name));
            }
            if lookup.insert(name.clone(), i).is_some() {
                return Err(KernelError::DuplicateCoordinate(name));
            }
            names.push(name);
            kinds.push(*kind);
        }
        Ok(Arc::new(CoordChart { names, kinds, lookup }))
    }

    /// Chart where every coordinate is independent; handy for plain (x, y, z) manifolds.
    pub fn plain<S: AsRef<str>>(names: &[S]) -> Result<Chart, KernelError> {
        let coords: Vec<_> = names.iter().map(|n| (n.as_ref(), CoordKind::Independent)).collect();
        Self::new(&coords)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn kind(&self, idx: usize) -> CoordKind {
        self.kinds[idx]
    }

    /// Looks a coordinate up by name. Derivative names are accepted in any
    /// letter order (`u_xt` resolves to `u_tx`).
    pub fn index(&self, name: &str) -> Option<usize> {
        if let Some(&i) = self.lookup.get(name) {
            return Some(i);
        }
        let (head, letters) = name.rsplit_once('_')?;
        let order: Vec<char> = self
            .names
            .iter()
            .zip(&self.kinds)
            .filter(|(n, k)| **k == CoordKind::Independent && n.chars().count() == 1)
            .filter_map(|(n, _)| n.chars().next())
            .collect();
        let mut chars: Vec<char> = letters.chars().collect();
        if !chars.iter().all(|c| order.contains(c)) {
            return None;
        }
        chars.sort_by_key(|c| order.iter().position(|o| o == c));
        let canonical = format!("{head}_{}", chars.into_iter().collect::<String>());
        self.lookup.get(&canonical).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, KernelError> {
        self.index(name).ok_or_else(|| KernelError::UnknownCoordinate(name.to_string()))
    }

    pub fn same_as(&self, other: &CoordChart) -> bool {
        self.names == other.names
    }
}

impl PartialEq for CoordChart {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Display for CoordChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.names.join(", "))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Two charts are compatible when they are the same allocation or carry the same names.
pub fn compatible(a: &Chart, b: &Chart) -> bool {
    Arc::ptr_eq(a, b) || a.same_as(b)
}
