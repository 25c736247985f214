use std::fmt;

use serde::Serialize;

/// A failed structural law together with the elements that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: String,
    pub elements: Vec<usize>,
}

impl Violation {
    pub fn new(law: impl Into<String>, elements: &[usize]) -> Violation {
        Violation {
            law: law.into(),
            elements: elements.to_vec(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elements.is_empty() {
            return write!(f, "{} fails", self.law);
        }
        let items: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        write!(f, "{} fails at ({})", self.law, items.join(", "))
    }
}

impl std::error::Error for Violation {}
