use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::SymbolicError;

/// An ordered, immutable list of variable names.
///
/// Every polynomial carries an `Arc<VarRegistry>`; the position of a name in
/// the registry is the position of its exponent in every monomial key.
#[derive(Clone)]
pub struct VarRegistry {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VarRegistry {
    pub fn new<I, S>(names: I) -> Result<Arc<Self>, SymbolicError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if !is_valid_name(name) {
                return Err(SymbolicError::InvalidVariableName(name.clone()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(SymbolicError::DuplicateVariable(name.clone()));
            }
        }
        Ok(Arc::new(Self { names, index }))
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

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, SymbolicError> {
        self.index_of(name)
            .ok_or_else(|| SymbolicError::UnknownVariable(name.to_string()))
    }

    /// LaTeX spelling of variable `i`: trailing digits become a subscript.
    pub fn latex_name(&self, i: usize) -> String {
        latex_name(&self.names[i])
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || self.names == other.names
    }
}

impl PartialEq for VarRegistry {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for VarRegistry {}

impl fmt::Debug for VarRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names.iter()).finish()
    }
}

fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn latex_name(name: &str) -> String {
    if name == "hbar" {
        return "\\hbar".to_string();
    }
    let split = name
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_ascii_digit())
        .last()
        .map(|(i, _)| i);
    match split {
        Some(i) if i > 0 => format!("{}_{{{}}}", &name[..i], &name[i..]),
        _ => name.to_string(),
    }
}
