//! Function files.
//!
//! Two encodings are accepted:
//!
//! * text, one data line `n m : i_1 i_2 ... i_n` with **one-based** images;
//!   blank lines and lines starting with `#` are ignored,
//! * JSON, `{"domain": n, "codomain": m, "images": [...]}` with **zero-based**
//!   images.
//!
//! A document whose first non-blank character is `{` is read as JSON,
//! anything else as text. A `0` image in a text file is rejected rather than
//! reinterpreted, so zero-based data cannot slip through the one-based reader.

use serde::Deserialize;

use crate::{Error, FiniteFunction, Result};

pub fn parse_function(input: &str) -> Result<FiniteFunction> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

pub fn parse_json(input: &str) -> Result<FiniteFunction> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Raw {
        domain: usize,
        codomain: usize,
        images: Vec<usize>,
    }
    let raw: Raw = serde_json::from_str(input).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    FiniteFunction::new(raw.domain, raw.codomain, raw.images).map_err(|e| {
        let key = match e {
            Error::EmptySet if raw.domain == 0 => "\"domain\"",
            Error::EmptySet => "\"codomain\"",
            _ => "\"images\"",
        };
        let (line, column) = position_of(input, key);
        Error::Parse {
            line,
            column,
            message: e.to_string(),
        }
    })
}

/// One-based line and column of the first occurrence of `needle`.
fn position_of(input: &str, needle: &str) -> (usize, usize) {
    let offset = input.find(needle).unwrap_or(0);
    let before = &input[..offset];
    let line = before.matches('\n').count() + 1;
    let column = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

pub fn parse_text(input: &str) -> Result<FiniteFunction> {
    let mut data = input
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (line_idx, line) = data.next().ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        message: "no function line found".into(),
    })?;
    let line_no = line_idx + 1;
    if let Some((extra_idx, extra)) = data.next() {
        return Err(Error::Parse {
            line: extra_idx + 1,
            column: extra.len() - extra.trim_start().len() + 1,
            message: "expected a single function line".into(),
        });
    }
    let err = |column: usize, message: String| Error::Parse {
        line: line_no,
        column,
        message,
    };

    let tokens = tokenize(line);
    let colon = tokens
        .iter()
        .position(|(_, t)| *t == ":")
        .ok_or_else(|| err(line.len() + 1, "missing ':' separator".into()))?;
    if colon != 2 {
        let column = tokens.get(colon.min(2)).map_or(1, |(c, _)| *c);
        return Err(err(column, "expected `n m :` before the images".into()));
    }
    let number = |(column, token): &(usize, &str)| -> Result<usize> {
        token.parse::<usize>().map_err(|_| {
            err(
                *column,
                format!("expected a nonnegative integer, found `{token}`"),
            )
        })
    };
    let n = number(&tokens[0])?;
    let m = number(&tokens[1])?;
    if n == 0 || m == 0 {
        let column = if n == 0 { tokens[0].0 } else { tokens[1].0 };
        return Err(err(column, "set sizes must be positive".into()));
    }
    let image_tokens = &tokens[3..];
    if image_tokens.len() != n {
        let column = image_tokens.get(n).map_or(line.len() + 1, |(c, _)| *c);
        return Err(err(
            column,
            format!("expected {n} images, found {}", image_tokens.len()),
        ));
    }
    let mut images = Vec::with_capacity(n);
    for tok in image_tokens {
        let value = number(tok)?;
        if value == 0 {
            return Err(err(
                tok.0,
                "image 0 in a one-based text file (use the JSON form for zero-based images)".into(),
            ));
        }
        if value > m {
            return Err(err(
                tok.0,
                format!("image {value} exceeds codomain size {m}"),
            ));
        }
        images.push(value - 1);
    }
    FiniteFunction::new(n, m, images)
}

/// Text encoding, one-based.
pub fn to_text(f: &FiniteFunction) -> String {
    let images: Vec<String> = f.images().iter().map(|y| (y + 1).to_string()).collect();
    format!(
        "{} {} : {}",
        f.domain_size(),
        f.codomain_size(),
        images.join(" ")
    )
}

/// JSON encoding, zero-based.
pub fn to_json(f: &FiniteFunction) -> String {
    serde_json::to_string(f).expect("function serializes")
}

/// Splits on whitespace and isolates `:` as its own token, keeping one-based
/// columns.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() || ch == ':' {
            if let Some(s) = start.take() {
                tokens.push((s + 1, &line[s..i]));
            }
            if ch == ':' {
                tokens.push((i + 1, &line[i..i + 1]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push((s + 1, &line[s..]));
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse_err(input: &str) -> (usize, usize) {
        match parse_function(input) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn text_is_one_based() {
        let f = parse_function("3 3 : 1 1 2\n").unwrap();
        assert_eq!(f.images(), &[0, 0, 1]);
        let f = parse_function("# comment\n\n4 2: 1 1 1 2").unwrap();
        assert_eq!(f.images(), &[0, 0, 0, 1]);
    }

    #[test]
    fn json_is_zero_based() {
        let f = parse_function(r#"{"domain": 3, "codomain": 3, "images": [0, 0, 1]}"#).unwrap();
        assert_eq!(f.images(), &[0, 0, 1]);
    }

    #[test]
    fn text_errors_carry_positions() {
        assert_eq!(parse_err("3 3 : 1 0 2"), (1, 9));
        assert_eq!(parse_err("3 3 : 1 4 2"), (1, 9));
        assert_eq!(parse_err("3 3 : 1 x 2"), (1, 9));
        assert_eq!(parse_err("\n3 3 1 1 2"), (2, 10));
        assert_eq!(parse_err("3 3 : 1 1"), (1, 10));
        assert_eq!(parse_err("3 3 : 1 1 1 1"), (1, 13));
        assert_eq!(parse_err("0 3 :"), (1, 1));
        assert_eq!(parse_err("1 1 : 1\n1 1 : 1"), (2, 1));
        assert_eq!(parse_err(""), (1, 1));
    }

    #[test]
    fn json_errors_carry_positions() {
        let pos = parse_err("{\n\"domain\": 2,\n\"codomain\": 2,\n  \"images\": [0, 2]\n}");
        assert_eq!(pos, (4, 3));
        let pos = parse_err("{\"domain\": 0, \"codomain\": 2, \"images\": []}");
        assert_eq!(pos, (1, 2));
        let (line, _) = parse_err("{\n\"domain\": 2,\n\"codomain\": x}");
        assert_eq!(line, 3);
        parse_err(r#"{"domain": 2, "codomain": 2, "images": [0]}"#);
        parse_err(r#"{"domain": 1, "codomain": 1, "images": [0], "extra": 1}"#);
    }

    proptest! {
        #[test]
        fn both_encodings_round_trip(
            (n, m, images) in (1usize..10, 1usize..10)
                .prop_flat_map(|(n, m)| (Just(n), Just(m), proptest::collection::vec(0..m, n)))
        ) {
            let f = FiniteFunction::new(n, m, images).unwrap();
            prop_assert_eq!(parse_function(&to_text(&f)).unwrap(), f.clone());
            prop_assert_eq!(parse_function(&to_json(&f)).unwrap(), f);
        }
    }
}
