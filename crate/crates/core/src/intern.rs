//! Interned identifiers for constants and meta-variable names.
//!
//! Comparison is by identity of the interned id; the backing strings are
//! leaked once and live for the whole process.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// An interned identifier.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(u32);

struct Table {
    by_text: HashMap<&'static str, u32>,
    texts: Vec<&'static str>,
}

fn table() -> &'static Mutex<Table> {
    static TABLE: OnceLock<Mutex<Table>> = OnceLock::new();
    TABLE.get_or_init(|| {
        Mutex::new(Table {
            by_text: HashMap::new(),
            texts: Vec::new(),
        })
    })
}

impl Name {
    pub fn intern(text: &str) -> Name {
        let mut t = table().lock().unwrap();
        if let Some(&id) = t.by_text.get(text) {
            return Name(id);
        }
        let id = t.texts.len() as u32;
        let leaked: &'static str = Box::leak(text.to_owned().into_boxed_str());
        t.texts.push(leaked);
        t.by_text.insert(leaked, id);
        Name(id)
    }

    pub fn as_str(self) -> &'static str {
        table().lock().unwrap().texts[self.0 as usize]
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        let a = Name::intern("nat");
        let b = Name::intern("nat");
        let c = Name::intern("nat'");
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.as_str(), "nat");
        assert_eq!(c.as_str(), "nat'");
    }
}
