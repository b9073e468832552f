//! Navigation of JSON input with JSON-pointer error locations.

use serde_json::Value;
use thiserror::Error;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, Error)]
#[error("{message} (at {})", if pointer.is_empty() { "/" } else { pointer.as_str() })]
pub struct SchemaError {
    pub pointer: String,
    pub message: String,
}

/// Either malformed input or a mathematical failure reported by the core.
#[derive(Debug, Error)]
pub enum Failure {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Math(galdesc::Error),
}

pub type Res<T> = std::result::Result<T, Failure>;

#[derive(Clone, Debug)]
pub struct Node<'a> {
    value: &'a Value,
    pointer: String,
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

impl<'a> Node<'a> {
    pub fn root(value: &'a Value) -> Self {
        Node {
            value,
            pointer: String::new(),
        }
    }

    #[cfg(test)]
    pub fn pointer(&self) -> &str {
        &self.pointer
    }

    pub fn value(&self) -> &'a Value {
        self.value
    }

    pub fn err(&self, message: impl Into<String>) -> SchemaError {
        SchemaError {
            pointer: self.pointer.clone(),
            message: message.into(),
        }
    }

    /// Classifies a core error raised while building from this node.
    pub fn core<T>(&self, r: galdesc::Result<T>) -> Res<T> {
        r.map_err(|e| {
            if e.is_mathematical() {
                Failure::Math(e)
            } else {
                Failure::Schema(self.err(e.to_string()))
            }
        })
    }

    /// Like [`Node::core`] but every error counts as malformed input.
    pub fn schema<T>(&self, r: galdesc::Result<T>) -> Result<T, SchemaError> {
        r.map_err(|e| self.err(e.to_string()))
    }

    pub fn opt(&self, key: &str) -> Option<Node<'a>> {
        self.value.get(key).filter(|v| !v.is_null()).map(|value| Node {
            value,
            pointer: format!("{}/{}", self.pointer, escape(key)),
        })
    }

    pub fn get(&self, key: &str) -> Result<Node<'a>, SchemaError> {
        if !self.value.is_object() {
            return Err(self.err("expected an object"));
        }
        self.opt(key).ok_or_else(|| self.err(format!("missing key {key:?}")))
    }

    pub fn items(&self) -> Result<Vec<Node<'a>>, SchemaError> {
        let arr = self.value.as_array().ok_or_else(|| self.err("expected an array"))?;
        Ok(arr
            .iter()
            .enumerate()
            .map(|(i, value)| Node {
                value,
                pointer: format!("{}/{i}", self.pointer),
            })
            .collect())
    }

    pub fn entries(&self) -> Result<Vec<(&'a str, Node<'a>)>, SchemaError> {
        let obj = self.value.as_object().ok_or_else(|| self.err("expected an object"))?;
        Ok(obj
            .iter()
            .map(|(k, value)| {
                (
                    k.as_str(),
                    Node {
                        value,
                        pointer: format!("{}/{}", self.pointer, escape(k)),
                    },
                )
            })
            .collect())
    }

    pub fn str(&self) -> Result<&'a str, SchemaError> {
        self.value.as_str().ok_or_else(|| self.err("expected a string"))
    }

    pub fn usize(&self) -> Result<usize, SchemaError> {
        self.value
            .as_u64()
            .map(|n| n as usize)
            .ok_or_else(|| self.err("expected a non-negative integer"))
    }

    pub fn i64(&self) -> Result<i64, SchemaError> {
        self.value.as_i64().ok_or_else(|| self.err("expected an integer"))
    }

    pub fn check_version(&self) -> Result<(), SchemaError> {
        let v = self.get("schema_version")?;
        match v.value.as_u64() {
            Some(SCHEMA_VERSION) => Ok(()),
            _ => Err(v.err(format!("unsupported schema version, expected {SCHEMA_VERSION}"))),
        }
    }

    pub fn expect_kind(&self, allowed: &[&str]) -> Result<&'a str, SchemaError> {
        let k = self.get("kind")?;
        let s = k.str()?;
        if allowed.contains(&s) {
            Ok(s)
        } else {
            Err(k.err(format!("kind {s:?} is not one of {allowed:?}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn pointers_track_the_path() {
        let v = json!({"a": [{"b/c": 1}]});
        let root = Node::root(&v);
        let leaf = root.get("a").unwrap().items().unwrap()[0].get("b/c").unwrap();
        assert_eq!(leaf.pointer(), "/a/0/b~1c");
        assert_eq!(leaf.usize().unwrap(), 1);
        assert_eq!(leaf.str().unwrap_err().pointer, "/a/0/b~1c");
        assert_eq!(root.get("zz").unwrap_err().pointer, "");
    }

    #[test]
    fn version_is_checked() {
        let v = json!({"schema_version": 2});
        assert_eq!(Node::root(&v).check_version().unwrap_err().pointer, "/schema_version");
        let ok = json!({"schema_version": 1});
        Node::root(&ok).check_version().unwrap();
    }
}
