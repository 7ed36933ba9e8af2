//! The plain-text configuration format shared by every experiment.
//!
//! One `key = value` assignment per line; `#` starts a comment that runs to
//! the end of the line; blank lines are skipped. Values are:
//!
//! ```text
//! integers    tries = 100000
//! decimals    epsilon = 0.05          (scientific notation allowed)
//! complex     amp = 0.5-0.5i          (re+imi, or a bare imaginary 2i)
//! keywords    mode = coherent
//! lists       pre = [1+0i, 0+0i]
//! matrices    observable = [[1, 0], [0, -1]]
//! ```
//!
//! Keys are unique; duplicates are rejected with both line numbers. Errors
//! carry the line and column they were found at.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}, column {column}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },
    #[error("duplicate key `{key}` on line {second_line} (first defined on line {first_line})")]
    DuplicateKey {
        key: String,
        first_line: usize,
        second_line: usize,
    },
    #[error("missing key `{key}`")]
    MissingKey { key: String },
    #[error("key `{key}` (line {line}): expected {expected}")]
    WrongType {
        key: String,
        line: usize,
        expected: String,
    },
    #[error("unknown key `{key}` on line {line} for subcommand `{subcommand}`")]
    UnknownKey {
        key: String,
        line: usize,
        subcommand: String,
    },
}

/// A single parsed value.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Integer(i64),
    Real(f64),
    Complex(Complex64),
    Keyword(String),
}

impl Scalar {
    fn describe(&self) -> &'static str {
        match self {
            Scalar::Integer(_) => "an integer",
            Scalar::Real(_) => "a decimal",
            Scalar::Complex(_) => "a complex number",
            Scalar::Keyword(_) => "a keyword",
        }
    }

    fn as_complex(&self) -> Option<Complex64> {
        match self {
            Scalar::Integer(v) => Some(Complex64::new(*v as f64, 0.0)),
            Scalar::Real(v) => Some(Complex64::new(*v, 0.0)),
            Scalar::Complex(v) => Some(*v),
            Scalar::Keyword(_) => None,
        }
    }
}

/// A parsed right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(Scalar),
    List(Vec<Scalar>),
    Matrix(Vec<Vec<Scalar>>),
}

/// One assignment with its source line for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: Value,
    pub line: usize,
}

impl Entry {
    fn wrong_type(&self, expected: &str) -> ConfigError {
        ConfigError::WrongType {
            key: self.key.clone(),
            line: self.line,
            expected: expected.to_string(),
        }
    }

    pub fn as_f64(&self) -> Result<f64, ConfigError> {
        match &self.value {
            Value::Scalar(Scalar::Integer(v)) => Ok(*v as f64),
            Value::Scalar(Scalar::Real(v)) => Ok(*v),
            other => Err(self.wrong_type(&format!("a real number, got {}", describe(other)))),
        }
    }

    pub fn as_i64(&self) -> Result<i64, ConfigError> {
        match &self.value {
            Value::Scalar(Scalar::Integer(v)) => Ok(*v),
            other => Err(self.wrong_type(&format!("an integer, got {}", describe(other)))),
        }
    }

    pub fn as_u64(&self) -> Result<u64, ConfigError> {
        let v = self.as_i64()?;
        u64::try_from(v).map_err(|_| self.wrong_type("a non-negative integer"))
    }

    pub fn as_usize(&self) -> Result<usize, ConfigError> {
        let v = self.as_i64()?;
        usize::try_from(v).map_err(|_| self.wrong_type("a non-negative integer"))
    }

    pub fn as_i32(&self) -> Result<i32, ConfigError> {
        let v = self.as_i64()?;
        i32::try_from(v).map_err(|_| self.wrong_type("a small integer"))
    }

    pub fn as_keyword(&self) -> Result<&str, ConfigError> {
        match &self.value {
            Value::Scalar(Scalar::Keyword(word)) => Ok(word),
            other => Err(self.wrong_type(&format!("a keyword, got {}", describe(other)))),
        }
    }

    pub fn as_complex_vector(&self) -> Result<Vec<Complex64>, ConfigError> {
        match &self.value {
            Value::List(items) => items
                .iter()
                .map(|item| {
                    item.as_complex().ok_or_else(|| {
                        self.wrong_type(&format!(
                            "a list of numbers, got {} inside it",
                            item.describe()
                        ))
                    })
                })
                .collect(),
            other => Err(self.wrong_type(&format!("a bracketed list, got {}", describe(other)))),
        }
    }

    pub fn as_complex_matrix(&self) -> Result<Vec<Vec<Complex64>>, ConfigError> {
        match &self.value {
            Value::Matrix(rows) => rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|item| {
                            item.as_complex().ok_or_else(|| {
                                self.wrong_type(&format!(
                                    "a matrix of numbers, got {} inside it",
                                    item.describe()
                                ))
                            })
                        })
                        .collect()
                })
                .collect(),
            other => Err(self.wrong_type(&format!("a bracketed matrix, got {}", describe(other)))),
        }
    }
}

fn describe(value: &Value) -> String {
    match value {
        Value::Scalar(scalar) => scalar.describe().to_string(),
        Value::List(_) => "a list".to_string(),
        Value::Matrix(_) => "a matrix".to_string(),
    }
}

/// An ordered set of unique assignments.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigDocument {
    entries: Vec<Entry>,
}

impl ConfigDocument {
    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|entry| entry.key == key)
    }

    pub fn require(&self, key: &str) -> Result<&Entry, ConfigError> {
        self.get(key).ok_or_else(|| ConfigError::MissingKey {
            key: key.to_string(),
        })
    }
}

/// Parses a full configuration document.
pub fn parse_config(text: &str) -> Result<ConfigDocument, ConfigError> {
    let mut entries: Vec<Entry> = Vec::new();
    for (index, raw_line) in text.lines().enumerate() {
        let line_number = index + 1;
        let line = match raw_line.find('#') {
            Some(position) => &raw_line[..position],
            None => raw_line,
        };
        if line.trim().is_empty() {
            continue;
        }
        let entry = parse_line(line, line_number)?;
        if let Some(existing) = entries.iter().find(|e| e.key == entry.key) {
            return Err(ConfigError::DuplicateKey {
                key: entry.key,
                first_line: existing.line,
                second_line: line_number,
            });
        }
        entries.push(entry);
    }
    Ok(ConfigDocument { entries })
}

struct Scanner<'a> {
    chars: Vec<char>,
    position: usize,
    line: usize,
    text: &'a str,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Self {
            chars: text.chars().collect(),
            position: 0,
            line,
            text,
        }
    }

    fn column(&self) -> usize {
        self.position + 1
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.position).copied()
    }

    fn skip_spaces(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.position += 1;
        }
    }

    fn error(&self, expected: &str) -> ConfigError {
        let found = match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of line".to_string(),
        };
        ConfigError::Syntax {
            line: self.line,
            column: self.column(),
            expected: expected.to_string(),
            found,
        }
    }

    fn expect(&mut self, wanted: char) -> Result<(), ConfigError> {
        self.skip_spaces();
        if self.peek() == Some(wanted) {
            self.position += 1;
            Ok(())
        } else {
            Err(self.error(&format!("`{wanted}`")))
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_spaces();
        self.position >= self.chars.len()
    }

    fn identifier(&mut self) -> Result<String, ConfigError> {
        self.skip_spaces();
        let start = self.position;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                self.position += 1;
            }
            _ => return Err(self.error("an identifier")),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.position += 1;
        }
        Ok(self.chars[start..self.position].iter().collect())
    }

    /// Scans a number token: digits with an optional fraction, exponent and
    /// trailing `i`. Returns `(value, saw_fraction_or_exponent, imaginary)`.
    fn number(&mut self) -> Result<(f64, bool, bool), ConfigError> {
        self.skip_spaces();
        let start = self.position;
        if matches!(self.peek(), Some('+') | Some('-')) {
            self.position += 1;
        }
        let digits_start = self.position;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.position += 1;
        }
        let mut fractional = false;
        if self.peek() == Some('.') {
            fractional = true;
            self.position += 1;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.position += 1;
            }
        }
        if self.position == digits_start || (fractional && self.position == digits_start + 1) {
            self.position = start;
            return Err(self.error("a number"));
        }
        if matches!(self.peek(), Some('e') | Some('E')) {
            fractional = true;
            self.position += 1;
            if matches!(self.peek(), Some('+') | Some('-')) {
                self.position += 1;
            }
            let exponent_start = self.position;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.position += 1;
            }
            if self.position == exponent_start {
                return Err(self.error("an exponent"));
            }
        }
        let literal: String = self.chars[start..self.position].iter().collect();
        let value: f64 = literal.parse().map_err(|_| ConfigError::Syntax {
            line: self.line,
            column: start + 1,
            expected: "a number".to_string(),
            found: format!("`{literal}`"),
        })?;
        let imaginary = if self.peek() == Some('i') {
            self.position += 1;
            true
        } else {
            false
        };
        Ok((value, fractional, imaginary))
    }

    fn scalar(&mut self) -> Result<Scalar, ConfigError> {
        self.skip_spaces();
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                Ok(Scalar::Keyword(self.identifier()?))
            }
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' || c == '.' => {
                let (first, fractional, imaginary) = self.number()?;
                if imaginary {
                    return Ok(Scalar::Complex(Complex64::new(0.0, first)));
                }
                // A sign directly after the real part starts the imaginary
                // part of a complex literal, as in `1.5-0.5i`.
                if matches!(self.peek(), Some('+') | Some('-')) {
                    let (second, _, second_imaginary) = self.number()?;
                    if !second_imaginary {
                        return Err(self.error("`i` after the imaginary part"));
                    }
                    return Ok(Scalar::Complex(Complex64::new(first, second)));
                }
                if fractional {
                    Ok(Scalar::Real(first))
                } else {
                    Ok(Scalar::Integer(first as i64))
                }
            }
            _ => Err(self.error("a number, keyword or `[`")),
        }
    }

    fn scalar_list(&mut self) -> Result<Vec<Scalar>, ConfigError> {
        self.expect('[')?;
        let mut items = vec![self.scalar()?];
        loop {
            self.skip_spaces();
            match self.peek() {
                Some(',') => {
                    self.position += 1;
                    items.push(self.scalar()?);
                }
                Some(']') => {
                    self.position += 1;
                    return Ok(items);
                }
                _ => return Err(self.error("`,` or `]`")),
            }
        }
    }

    fn value(&mut self) -> Result<Value, ConfigError> {
        self.skip_spaces();
        if self.peek() != Some('[') {
            return Ok(Value::Scalar(self.scalar()?));
        }
        // Inspect the character after `[` to tell a matrix from a list.
        let checkpoint = self.position;
        self.position += 1;
        self.skip_spaces();
        let nested = self.peek() == Some('[');
        self.position = checkpoint;
        if !nested {
            return Ok(Value::List(self.scalar_list()?));
        }
        self.expect('[')?;
        let mut rows = vec![self.scalar_list()?];
        loop {
            self.skip_spaces();
            match self.peek() {
                Some(',') => {
                    self.position += 1;
                    let row = self.scalar_list()?;
                    if row.len() != rows[0].len() {
                        return Err(ConfigError::Syntax {
                            line: self.line,
                            column: self.column(),
                            expected: format!("a row of {} entries", rows[0].len()),
                            found: format!("a row of {} entries", row.len()),
                        });
                    }
                    rows.push(row);
                }
                Some(']') => {
                    self.position += 1;
                    return Ok(Value::Matrix(rows));
                }
                _ => return Err(self.error("`,` or `]`")),
            }
        }
    }

    fn rest(&self) -> &str {
        let consumed: usize = self.chars[..self.position]
            .iter()
            .map(|c| c.len_utf8())
            .sum();
        &self.text[consumed..]
    }
}

fn parse_line(line: &str, line_number: usize) -> Result<Entry, ConfigError> {
    let mut scanner = Scanner::new(line, line_number);
    let key = scanner.identifier()?;
    scanner.expect('=')?;
    let value = scanner.value()?;
    if !scanner.at_end() {
        return Err(ConfigError::Syntax {
            line: line_number,
            column: scanner.column(),
            expected: "end of line".to_string(),
            found: format!("`{}`", scanner.rest().trim()),
        });
    }
    Ok(Entry {
        key,
        value,
        line: line_number,
    })
}
