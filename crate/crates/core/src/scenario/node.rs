//! Position-carrying document tree over the TOML syntax.

use toml::de::{DeTable, DeValue};
use toml::Spanned;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Str(String),
    Int(i64),
    Float(String),
    Bool(bool),
    Array(Vec<Node>),
    /// Entries in document order.
    Table(Vec<(String, Node)>),
}

#[derive(Clone, Debug)]
pub struct Node {
    pub pos: Pos,
    pub value: Value,
}

/// Structural equality, ignoring positions.
impl PartialEq for Node {
    fn eq(&self, o: &Node) -> bool {
        self.value == o.value
    }
}

struct LineIndex(Vec<usize>);

impl LineIndex {
    fn new(text: &str) -> Self {
        let mut starts = vec![0];
        starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        LineIndex(starts)
    }

    fn pos(&self, text: &str, offset: usize) -> Pos {
        let line = self.0.partition_point(|&s| s <= offset);
        let start = self.0[line - 1];
        let column = text[start..offset.min(text.len())].chars().count() + 1;
        Pos { line, column }
    }
}

fn parse_int(text: &str, radix: u32) -> Option<i64> {
    let t = text.replace('_', "");
    let (neg, digits) = match t.strip_prefix('-') {
        Some(d) => (true, d.to_string()),
        None => (false, t.trim_start_matches('+').to_string()),
    };
    let v = i64::from_str_radix(&digits, radix).ok()?;
    Some(if neg { -v } else { v })
}

fn convert(text: &str, lines: &LineIndex, v: &Spanned<DeValue<'_>>) -> Result<Node> {
    let pos = lines.pos(text, v.span().start);
    let value = match v.get_ref() {
        DeValue::String(s) => Value::Str(s.to_string()),
        DeValue::Integer(i) => Value::Int(parse_int(i.as_str(), i.radix()).ok_or_else(|| Error::Parse {
            line: pos.line,
            column: pos.column,
            message: format!("integer `{}` does not fit in 64 bits", i.as_str()),
        })?),
        DeValue::Float(f) => Value::Float(f.as_str().to_string()),
        DeValue::Boolean(b) => Value::Bool(*b),
        DeValue::Datetime(_) => {
            return Err(Error::Parse { line: pos.line, column: pos.column, message: "dates are not supported".into() })
        }
        DeValue::Array(a) => Value::Array(a.iter().map(|x| convert(text, lines, x)).collect::<Result<_>>()?),
        DeValue::Table(t) => Value::Table(convert_table(text, lines, t)?),
    };
    Ok(Node { pos, value })
}

fn convert_table(text: &str, lines: &LineIndex, t: &DeTable<'_>) -> Result<Vec<(String, Node)>> {
    t.iter().map(|(k, v)| Ok((k.get_ref().to_string(), convert(text, lines, v)?))).collect()
}

pub fn parse_document(text: &str) -> Result<Node> {
    let lines = LineIndex::new(text);
    let doc = DeTable::parse(text).map_err(|e| {
        let pos = e.span().map(|s| lines.pos(text, s.start)).unwrap_or(Pos { line: 1, column: 1 });
        Error::Parse { line: pos.line, column: pos.column, message: e.message().trim().to_string() }
    })?;
    Ok(Node { pos: Pos { line: 1, column: 1 }, value: Value::Table(convert_table(text, &lines, doc.get_ref())?) })
}

impl Node {
    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.pos.line, column: self.pos.column, message: message.into() }
    }

    fn type_name(&self) -> &'static str {
        match self.value {
            Value::Str(_) => "string",
            Value::Int(_) => "integer",
            Value::Float(_) => "float",
            Value::Bool(_) => "boolean",
            Value::Array(_) => "array",
            Value::Table(_) => "table",
        }
    }

    fn expected(&self, what: &str) -> Error {
        self.error(format!("expected {what}, found {}", self.type_name()))
    }

    pub fn entries(&self) -> Result<&[(String, Node)]> {
        match &self.value {
            Value::Table(t) => Ok(t),
            _ => Err(self.expected("a table")),
        }
    }

    pub fn get(&self, key: &str) -> Option<&Node> {
        match &self.value {
            Value::Table(t) => t.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn req(&self, key: &str) -> Result<&Node> {
        self.get(key).ok_or_else(|| self.error(format!("missing key `{key}`")))
    }

    /// Reject keys outside `allowed`.
    pub fn only_keys(&self, allowed: &[&str]) -> Result<()> {
        for (k, v) in self.entries()? {
            if !allowed.contains(&k.as_str()) {
                return Err(v.error(format!("unknown key `{k}`")));
            }
        }
        Ok(())
    }

    pub fn as_str(&self) -> Result<&str> {
        match &self.value {
            Value::Str(s) => Ok(s),
            _ => Err(self.expected("a string")),
        }
    }

    pub fn as_int(&self) -> Result<i64> {
        match &self.value {
            Value::Int(i) => Ok(*i),
            _ => Err(self.expected("an integer")),
        }
    }

    pub fn as_u64(&self) -> Result<u64> {
        u64::try_from(self.as_int()?).map_err(|_| self.error("expected a non-negative integer"))
    }

    pub fn as_bool(&self) -> Result<bool> {
        match &self.value {
            Value::Bool(b) => Ok(*b),
            _ => Err(self.expected("a boolean")),
        }
    }

    pub fn as_array(&self) -> Result<&[Node]> {
        match &self.value {
            Value::Array(a) => Ok(a),
            _ => Err(self.expected("an array")),
        }
    }

    /// A scalar written either as an integer or as a string (e.g. `"1/2"`).
    pub fn as_text(&self) -> Result<String> {
        match &self.value {
            Value::Str(s) => Ok(s.clone()),
            Value::Int(i) => Ok(i.to_string()),
            _ => Err(self.expected("a number or string")),
        }
    }

    /// A string or an array of strings.
    pub fn as_str_list(&self) -> Result<Vec<&Node>> {
        match &self.value {
            Value::Str(_) => Ok(vec![self]),
            Value::Array(a) => {
                for x in a {
                    x.as_str()?;
                }
                Ok(a.iter().collect())
            }
            _ => Err(self.expected("a string or an array of strings")),
        }
    }

    pub fn to_toml(&self) -> toml::Value {
        match &self.value {
            Value::Str(s) => toml::Value::String(s.clone()),
            Value::Int(i) => toml::Value::Integer(*i),
            Value::Float(f) => toml::Value::Float(f.parse().unwrap_or(f64::NAN)),
            Value::Bool(b) => toml::Value::Boolean(*b),
            Value::Array(a) => toml::Value::Array(a.iter().map(Node::to_toml).collect()),
            Value::Table(t) => toml::Value::Table(t.iter().map(|(k, v)| (k.clone(), v.to_toml())).collect()),
        }
    }
}
