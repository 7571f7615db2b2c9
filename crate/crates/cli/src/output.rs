use std::collections::BTreeMap;

use degree_core::Rational;
use serde::Serialize;
use serde_json::{json, Value};

/// The single JSON document written per invocation.
#[derive(Debug, Serialize)]
pub struct OutputEnvelope {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: Vec<Value>,
    /// Set by verification commands only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_match: Option<bool>,
}

/// What a command produced: the JSON envelope, its line-oriented text form,
/// and whether every check it ran passed.
#[derive(Debug)]
pub struct Output {
    pub envelope: OutputEnvelope,
    pub lines: Vec<String>,
}

impl Output {
    pub fn new(command: &str) -> Self {
        Output {
            envelope: OutputEnvelope {
                command: command.to_string(),
                parameters: BTreeMap::new(),
                results: Vec::new(),
                all_match: None,
            },
            lines: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.envelope.parameters.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable"),
        );
        self
    }

    pub fn result(&mut self, value: Value) {
        self.envelope.results.push(value);
    }

    pub fn line(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    pub fn set_all_match(&mut self, all_match: bool) {
        self.envelope.all_match = Some(all_match);
        self.line(format!("all_match {all_match}"));
    }

    pub fn passed(&self) -> bool {
        self.envelope.all_match != Some(false)
    }
}

/// `p/q`, followed by the decimal approximation when one was requested.
pub fn rational_text(value: &Rational, decimals: Option<usize>) -> String {
    match decimals {
        Some(k) => format!("{value} {}", value.to_decimal_string(k)),
        None => value.to_string(),
    }
}

/// `{numerator, denominator, decimal}`; `decimal` is null unless requested.
pub fn rational_json(value: &Rational, decimals: Option<usize>) -> Value {
    json!({
        "numerator": value.numerator().to_string(),
        "denominator": value.denominator().to_string(),
        "decimal": decimals.map(|k| value.to_decimal_string(k)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_match_drives_passed() {
        let mut out = Output::new("verify test");
        assert!(out.passed());
        out.set_all_match(true);
        assert!(out.passed());
        out.set_all_match(false);
        assert!(!out.passed());
        assert_eq!(out.lines.last().unwrap(), "all_match false");
    }

    #[test]
    fn rational_forms() {
        let r = Rational::new(7, 4);
        assert_eq!(rational_text(&r, None), "7/4");
        assert_eq!(rational_text(&r, Some(3)), "7/4 1.750");
        assert_eq!(rational_text(&Rational::from_integer(3), None), "3");
        let v = rational_json(&Rational::from_integer(3), None);
        assert_eq!(v["numerator"], "3");
        assert_eq!(v["denominator"], "1");
        assert!(v["decimal"].is_null());
    }
}
