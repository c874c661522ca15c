//! Variable contexts: a parameter block `t` followed by an ordered coordinate block `x`.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered variable names. The first `n_params` names form the parameter block,
/// the rest the coordinate block `x_1, ..., x_n` (in projection order).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarContext {
    names: Vec<String>,
    n_params: usize,
}

impl VarContext {
    pub fn new<P, X>(params: P, coords: X) -> Result<Arc<Self>>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        X: IntoIterator,
        X::Item: Into<String>,
    {
        let mut names: Vec<String> = params.into_iter().map(Into::into).collect();
        let n_params = names.len();
        names.extend(coords.into_iter().map(Into::into));
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || names[..i].contains(n) {
                return Err(Error::Context(format!("duplicate or empty variable name {n:?}")));
            }
        }
        Ok(Arc::new(VarContext { names, n_params }))
    }

    /// Coordinates only.
    pub fn coords<X>(coords: X) -> Result<Arc<Self>>
    where
        X: IntoIterator,
        X::Item: Into<String>,
    {
        Self::new(Vec::<String>::new(), coords)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn n_coords(&self) -> usize {
        self.names.len() - self.n_params
    }

    pub fn param_indices(&self) -> std::ops::Range<usize> {
        0..self.n_params
    }

    /// Context index of the coordinate `x_i` (1-based).
    pub fn coord(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.n_coords(), "coordinate x_{i} out of range");
        self.n_params + i - 1
    }

    /// Context indices of `x_1, ..., x_i`.
    pub fn coord_prefix(&self, i: usize) -> Vec<usize> {
        (1..=i).map(|k| self.coord(k)).collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn is_param(&self, idx: usize) -> bool {
        idx < self.n_params
    }

    /// The context restricted to the coordinate block.
    pub fn coord_context(&self) -> Arc<Self> {
        Arc::new(VarContext {
            names: self.names[self.n_params..].to_vec(),
            n_params: 0,
        })
    }
}

pub(crate) fn same_context(a: &Arc<VarContext>, b: &Arc<VarContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
