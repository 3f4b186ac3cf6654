//! Finite labelled sets and dense partial tables.
//!
//! Every structure in this crate stores its elements as indices into a
//! [`FiniteSet`]. The order of the labels is the canonical order: it drives
//! iteration, representative choice and the order of report lines.

use std::collections::HashMap;
use std::fmt;

use crate::error::StructureError;

/// An ordered list of pairwise distinct string labels.
#[derive(Clone, Default)]
pub struct FiniteSet {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl FiniteSet {
    pub fn new<I, S>(labels: I) -> Result<Self, StructureError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut set = FiniteSet::default();
        for label in labels {
            let label = label.into();
            if set.index.contains_key(&label) {
                return Err(StructureError::DuplicateLabel(label));
            }
            set.index.insert(label.clone(), set.labels.len());
            set.labels.push(label);
        }
        Ok(set)
    }

    /// The one-point set `{*}`.
    pub fn point() -> Self {
        FiniteSet::new(["*"]).expect("single label")
    }

    /// Labels `prefix0, prefix1, ...`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        FiniteSet::new((0..n).map(|i| format!("{prefix}{i}"))).expect("distinct numbered labels")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        0..self.labels.len()
    }

    /// Resolves a label, failing with a context-tagged structural error.
    pub fn resolve(&self, label: &str, context: &str) -> Result<usize, StructureError> {
        self.index_of(label).ok_or_else(|| StructureError::UnknownLabel {
            context: context.to_string(),
            label: label.to_string(),
        })
    }

    /// The subset at `indices`, keeping the given order.
    pub fn restrict(&self, indices: &[usize]) -> FiniteSet {
        FiniteSet::new(indices.iter().map(|&i| self.labels[i].clone()))
            .expect("restriction of distinct labels is distinct")
    }
}

impl PartialEq for FiniteSet {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for FiniteSet {}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels.iter()).finish()
    }
}

/// Checks that `map` is a total map into a set of size `codomain`.
pub(crate) fn check_map(name: &str, map: &[usize], domain: usize, codomain: usize) -> Result<(), StructureError> {
    if map.len() != domain {
        return Err(StructureError::LengthMismatch {
            map: name.to_string(),
            expected: domain,
            found: map.len(),
        });
    }
    if let Some(&bad) = map.iter().find(|&&v| v >= codomain) {
        return Err(StructureError::OutOfRange {
            map: name.to_string(),
            index: bad,
        });
    }
    Ok(())
}

/// Dense partial binary table over `rows x cols`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table2 {
    cols: usize,
    entries: Vec<Option<usize>>,
}

impl Table2 {
    pub fn new(rows: usize, cols: usize) -> Self {
        Table2 {
            cols,
            entries: vec![None; rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<usize> {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Option<usize>) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn rows(&self) -> usize {
        self.entries.len().checked_div(self.cols).unwrap_or(0)
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub(crate) fn check_values(&self, name: &str, bound: usize) -> Result<(), StructureError> {
        match self.entries.iter().flatten().find(|&&v| v >= bound) {
            Some(&bad) => Err(StructureError::OutOfRange {
                map: name.to_string(),
                index: bad,
            }),
            None => Ok(()),
        }
    }

    /// Defined entries `(i, j, value)` in row-major order.
    pub fn defined(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let cols = self.cols;
        self.entries
            .iter()
            .enumerate()
            .filter_map(move |(k, v)| v.map(|v| (k / cols, k % cols, v)))
    }
}

/// Dense partial ternary table over `n x n x n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table3 {
    n: usize,
    entries: Vec<Option<usize>>,
}

impl Table3 {
    pub fn new(n: usize) -> Self {
        Table3 {
            n,
            entries: vec![None; n * n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Option<usize> {
        self.entries[(i * self.n + j) * self.n + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Option<usize>) {
        let n = self.n;
        self.entries[(i * n + j) * n + k] = value;
    }

    pub(crate) fn check_values(&self, name: &str, bound: usize) -> Result<(), StructureError> {
        match self.entries.iter().flatten().find(|&&v| v >= bound) {
            Some(&bad) => Err(StructureError::OutOfRange {
                map: name.to_string(),
                index: bad,
            }),
            None => Ok(()),
        }
    }

    /// Defined entries `(i, j, k, value)` in lexicographic order.
    pub fn defined(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        let n = self.n;
        self.entries
            .iter()
            .enumerate()
            .filter_map(move |(idx, v)| v.map(|v| (idx / (n * n), (idx / n) % n, idx % n, v)))
    }
}
