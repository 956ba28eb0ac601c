//! Plain-text instance files.
//!
//! ```text
//! n W
//! w p m
//! ...
//! ```
//!
//! `m` may be omitted on input (it defaults to 1); output always writes it.

use std::fmt::Write as _;
use std::path::Path;

use permknap::model::validate;
use permknap::{BoundedInstance, ItemType};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn number<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, FormatError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected {what}, found `{tok}`")))
}

/// Parses and validates an instance.
pub fn parse(text: &str) -> Result<BoundedInstance, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hl, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| syntax(1, "missing header `n W`"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(syntax(hl, "header must be `n W`"));
    }
    let n: usize = number(head[0], hl, "item count")?;
    let capacity: i64 = number(head[1], hl, "capacity")?;

    let mut items = Vec::with_capacity(n);
    for (ln, line) in lines {
        if line.is_empty() {
            continue;
        }
        if items.len() == n {
            return Err(syntax(ln, format!("more than {n} item lines")));
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 && toks.len() != 3 {
            return Err(syntax(ln, "item line must be `w p` or `w p m`"));
        }
        let w = number(toks[0], ln, "weight")?;
        let p = number(toks[1], ln, "profit")?;
        let m = match toks.get(2) {
            Some(t) => number(t, ln, "multiplicity")?,
            None => 1,
        };
        items.push(ItemType::new(w, p, m));
    }
    if items.len() != n {
        return Err(syntax(
            text.lines().count().max(1),
            format!("header announces {n} items, found {}", items.len()),
        ));
    }
    let instance = BoundedInstance::new(items, capacity);
    let violations = validate(&instance);
    if !violations.is_empty() {
        let msg = violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(FormatError::Invalid(msg));
    }
    Ok(instance)
}

/// Canonical form: single spaces, `m` always written, trailing newline.
pub fn serialize(instance: &BoundedInstance) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", instance.items.len(), instance.capacity).unwrap();
    for it in &instance.items {
        writeln!(out, "{} {} {}", it.weight, it.profit, it.multiplicity).unwrap();
    }
    out
}

pub fn read_file(path: &Path) -> Result<BoundedInstance, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

pub fn write_file(path: &Path, instance: &BoundedInstance) -> Result<(), FormatError> {
    std::fs::write(path, serialize(instance)).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicity_defaults_to_one() {
        let inst = parse("3 6\n2 6\n3 6\n4 4\n").unwrap();
        assert_eq!(inst.capacity, 6);
        assert!(inst.items.iter().all(|it| it.multiplicity == 1));
        assert_eq!(serialize(&inst), "3 6\n2 6 1\n3 6 1\n4 4 1\n");
    }

    #[test]
    fn canonical_round_trip() {
        let text = "2 8\n5 5 2\n4 3 2\n";
        assert_eq!(serialize(&parse(text).unwrap()), text);
    }

    #[test]
    fn empty_instance() {
        let inst = parse("0 10\n").unwrap();
        assert!(inst.items.is_empty());
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "",
            "3\n",
            "1 5\n2\n",
            "1 5\n2 x\n",
            "2 5\n1 1\n",
            "1 5\n1 1\n1 1\n",
            "1 5\n1 1 1 1\n",
        ] {
            assert!(
                matches!(parse(bad), Err(FormatError::Syntax { .. })),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn rejects_invalid_instance() {
        assert!(matches!(parse("1 5\n0 3\n"), Err(FormatError::Invalid(_))));
        assert!(matches!(parse("1 -1\n1 3\n"), Err(FormatError::Invalid(_))));
        assert!(matches!(
            parse("1 5\n2 3 0\n"),
            Err(FormatError::Invalid(_))
        ));
    }
}
