//! Flat `key: value` records shared by the text and structured output modes.

use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Field {
    One(String),
    Many(Vec<String>),
}

/// Ordered fields; a key appears at most once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Record {
    fields: Vec<(String, Field)>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.fields.push((key.into(), Field::One(value.to_string())));
        self
    }

    pub fn push_many<I, S>(&mut self, key: impl Into<String>, values: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        let values = values.into_iter().map(|v| v.to_string()).collect();
        self.fields.push((key.into(), Field::Many(values)));
        self
    }

    /// Appends another record's fields, prefixing their keys.
    pub fn extend_prefixed(&mut self, prefix: &str, other: Record) -> &mut Self {
        for (k, v) in other.fields {
            self.fields.push((format!("{prefix}{k}"), v));
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        match self.get(key)? {
            Field::One(s) => Some(s),
            Field::Many(_) => None,
        }
    }

    pub fn fields(&self) -> &[(String, Field)] {
        &self.fields
    }

    /// One `key: value` line per value; list fields repeat their key.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            match v {
                Field::One(s) => push_line(&mut out, k, s),
                Field::Many(items) => items.iter().for_each(|s| push_line(&mut out, k, s)),
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, v) in &self.fields {
            let value = match v {
                Field::One(s) => Value::String(s.clone()),
                Field::Many(items) => Value::Array(items.iter().cloned().map(Value::String).collect()),
            };
            map.insert(k.clone(), value);
        }
        Value::Object(map)
    }
}

fn push_line(out: &mut String, key: &str, value: &str) {
    out.push_str(key);
    out.push(':');
    if !value.is_empty() {
        out.push(' ');
        out.push_str(value);
    }
    out.push('\n');
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_agree() {
        let mut r = Record::new();
        r.push("kind", "conjugacy")
            .push_many("image", ["a (1 2)", "b ()"])
            .push("empty", "");
        assert_eq!(r.to_text(), "kind: conjugacy\nimage: a (1 2)\nimage: b ()\nempty:\n");
        let j = r.to_json();
        assert_eq!(j["kind"], "conjugacy");
        assert_eq!(j["image"][1], "b ()");
    }
}
