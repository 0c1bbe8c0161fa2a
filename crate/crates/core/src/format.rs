//! Plain-text instance format.
//!
//! ```text
//! # comment
//! n root
//! child parent w u
//! ...
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. With a non-zero
//! fixed-point scale `s`, lengths may carry up to `s` fractional digits and
//! are stored multiplied by `10^s`.

use std::collections::HashMap;

use thiserror::Error;

use crate::tree::{build_tree, EdgeRecord, NodeLabel, RootedTree, TreeError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: TreeError },
    #[error("{0}")]
    Tree(#[from] TreeError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses an instance with integral lengths.
pub fn parse_instance(text: &str) -> Result<RootedTree, FormatError> {
    parse_instance_scaled(text, 0)
}

pub fn parse_instance_scaled(text: &str, scale: u32) -> Result<RootedTree, FormatError> {
    let mut header: Option<(usize, NodeLabel)> = None;
    let mut records = Vec::new();
    let mut line_of: HashMap<NodeLabel, usize> = HashMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        match header {
            None => {
                let [n, root] = fields[..] else {
                    return Err(syntax(line, format!("expected `n root`, got `{body}`")));
                };
                header = Some((parse_count(n, line)?, parse_label(root, line)?));
            }
            Some(_) => {
                let [c, p, w, u] = fields[..] else {
                    return Err(syntax(
                        line,
                        format!("expected `child parent w u`, got `{body}`"),
                    ));
                };
                let rec = EdgeRecord::new(
                    parse_label(c, line)?,
                    parse_label(p, line)?,
                    parse_length(w, scale, line)?,
                    parse_length(u, scale, line)?,
                );
                line_of.entry(rec.child).or_insert(line);
                if line_of[&rec.child] != line {
                    return Err(FormatError::Invalid {
                        line,
                        source: TreeError::DuplicateChild { child: rec.child },
                    });
                }
                records.push(rec);
            }
        }
    }

    let Some((n, root)) = header else {
        return Err(syntax(text.lines().count().max(1), "missing `n root` header"));
    };
    if records.len() + 1 != n {
        return Err(syntax(
            text.lines().count().max(1),
            format!("header declares {n} nodes but found {} edge lines", records.len()),
        ));
    }
    build_tree(&records, root).map_err(|e| match offending_child(&e) {
        Some(c) if line_of.contains_key(&c) => FormatError::Invalid {
            line: line_of[&c],
            source: e,
        },
        _ => FormatError::Tree(e),
    })
}

fn offending_child(e: &TreeError) -> Option<NodeLabel> {
    match *e {
        TreeError::DuplicateChild { child }
        | TreeError::NegativeWeight { child }
        | TreeError::UpgradeBelowBase { child, .. } => Some(child),
        TreeError::CycleDetected { node } | TreeError::DisconnectedInput { node, .. } => {
            Some(node)
        }
        _ => None,
    }
}

fn parse_count(tok: &str, line: usize) -> Result<usize, FormatError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("`{tok}` is not a node count")))
}

fn parse_label(tok: &str, line: usize) -> Result<NodeLabel, FormatError> {
    match tok.parse::<NodeLabel>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(syntax(line, format!("`{tok}` is not a positive node id"))),
    }
}

fn parse_length(tok: &str, scale: u32, line: usize) -> Result<i64, FormatError> {
    let bad = || syntax(line, format!("`{tok}` is not a valid length"));
    let (neg, digits) = match tok.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, tok),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    if !frac.bytes().all(|b| b.is_ascii_digit()) || (digits.contains('.') && frac.is_empty()) {
        return Err(bad());
    }
    if frac.len() > scale as usize {
        return Err(syntax(
            line,
            format!("`{tok}` has more than {scale} fractional digits"),
        ));
    }
    let padded = format!("{int}{frac:0<width$}", width = scale as usize);
    let v: i64 = padded.parse().map_err(|_| bad())?;
    Ok(if neg { -v } else { v })
}

/// Canonical text of `tree`: header then one line per edge, ascending child.
pub fn emit_instance(tree: &RootedTree) -> String {
    let mut out = format!("{} {}\n", tree.node_count(), tree.root());
    for r in tree.records() {
        out.push_str(&format!("{} {} {} {}\n", r.child, r.parent, r.w, r.u));
    }
    out
}

/// Renders a scaled integer length with `scale` fractional digits.
pub fn format_length(value: u64, scale: u32) -> String {
    if scale == 0 {
        return value.to_string();
    }
    let p = 10u64.pow(scale);
    format!("{}.{:0width$}", value / p, value % p, width = scale as usize)
}
