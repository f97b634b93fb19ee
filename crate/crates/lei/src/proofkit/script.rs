//! Plain-text proof scripts.
//!
//! One line per derivation step:
//!
//! ```text
//! # comment
//! 1. [CTX: p; ~p] p & ~p  BY rule:Adj 1,2
//! 2. (p & q) -> p  BY axiom:A1 {phi = p, psi = q}
//! 3. ~p -> (p -> q)  BY macro:DT 5
//! ```
//!
//! The `[CTX: ...]` block is omitted when the context is empty. Premise
//! indices are written `3,4` after the rule or macro name, and an
//! explicit axiom substitution goes in braces. Blank lines and lines
//! starting with `#` are ignored. Line numbers must count up from 1.

use std::collections::BTreeSet;

use crate::formula::{parse, render, Formula};

use super::{Derivation, Justification, Line, ScriptError, Subst};

fn err(line: usize, message: impl Into<String>) -> ScriptError {
    ScriptError {
        line,
        message: message.into(),
    }
}

fn parse_formula(src: &str, line: usize) -> Result<Formula, ScriptError> {
    parse(src).map_err(|e| err(line, format!("cannot parse `{}`: {e}", src.trim())))
}

/// Splits off a leading `[CTX: ...]` block, honouring nested brackets
/// inside announcement operators. Returns the block's interior and the
/// rest of the line.
fn split_context(rest: &str) -> Option<(&str, &str)> {
    let body = rest.strip_prefix("[CTX:")?;
    let mut depth = 1usize;
    for (i, c) in body.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => {
                depth -= 1;
                if depth == 0 {
                    return Some((&body[..i], &body[i + 1..]));
                }
            }
            _ => {}
        }
    }
    None
}

fn parse_subst(block: &str, line: usize) -> Result<Subst, ScriptError> {
    let mut subst = Subst::default();
    for entry in block.split(',') {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        let Some((key, value)) = entry.split_once('=') else {
            return Err(err(
                line,
                format!("substitution entry `{entry}` is not `var = formula`"),
            ));
        };
        let key = key.trim();
        let value = parse_formula(value, line)?;
        match key {
            "phi" | "psi" | "chi" | "rho" => {
                if subst.formulas.insert(key.into(), value).is_some() {
                    return Err(err(line, format!("substitution binds `{key}` twice")));
                }
            }
            "p" | "q" => {
                let Formula::Atom(name) = value else {
                    return Err(err(
                        line,
                        format!("`{key}` is a schematic atom and must be bound to an atom"),
                    ));
                };
                if subst.atoms.insert(key.into(), name).is_some() {
                    return Err(err(line, format!("substitution binds `{key}` twice")));
                }
            }
            other => {
                return Err(err(
                    line,
                    format!(
                        "unknown substitution variable `{other}` (use phi, psi, chi, rho, p, q)"
                    ),
                ));
            }
        }
    }
    Ok(subst)
}

fn parse_premises(src: &str, line: usize) -> Result<Vec<usize>, ScriptError> {
    let src = src.trim();
    if src.is_empty() {
        return Ok(Vec::new());
    }
    src.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| err(line, format!("`{}` is not a line number", part.trim())))
        })
        .collect()
}

fn parse_justification(src: &str, line: usize) -> Result<Justification, ScriptError> {
    let src = src.trim();
    if src == "assume" {
        return Ok(Justification::Assume);
    }
    if let Some(rest) = src.strip_prefix("axiom:") {
        let (id, tail) = match rest.find(['{', ' ']) {
            Some(cut) => (&rest[..cut], rest[cut..].trim()),
            None => (rest, ""),
        };
        if id.is_empty() {
            return Err(err(line, "missing axiom scheme identifier after `axiom:`"));
        }
        let subst = if tail.is_empty() {
            None
        } else {
            let inner = tail
                .strip_prefix('{')
                .and_then(|t| t.strip_suffix('}'))
                .ok_or_else(|| err(line, "axiom substitution must be wrapped in `{...}`"))?;
            Some(parse_subst(inner, line)?)
        };
        return Ok(Justification::Axiom {
            scheme: id.into(),
            subst,
        });
    }
    for (prefix, is_macro) in [("rule:", false), ("macro:", true)] {
        if let Some(rest) = src.strip_prefix(prefix) {
            let (name, tail) = match rest.find(' ') {
                Some(cut) => (&rest[..cut], &rest[cut + 1..]),
                None => (rest, ""),
            };
            if name.is_empty() {
                return Err(err(line, format!("missing name after `{prefix}`")));
            }
            let premises = parse_premises(tail, line)?;
            return Ok(if is_macro {
                Justification::Macro {
                    name: name.into(),
                    premises,
                }
            } else {
                Justification::Rule {
                    name: name.into(),
                    premises,
                }
            });
        }
    }
    Err(err(line, format!("cannot read justification `{src}`")))
}

/// Parses a proof script into a [`Derivation`].
pub fn parse_script(src: &str) -> Result<Derivation, ScriptError> {
    let mut lines = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let source_line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((number, rest)) = trimmed.split_once('.') else {
            return Err(err(source_line, "expected `N. FORMULA  BY justification`"));
        };
        let number: usize = number.trim().parse().map_err(|_| {
            err(
                source_line,
                format!("`{}` is not a line number", number.trim()),
            )
        })?;
        if number != lines.len() + 1 {
            return Err(err(
                source_line,
                format!("expected line number {}, found {number}", lines.len() + 1),
            ));
        }
        let rest = rest.trim_start();
        let (context, rest) = if rest.starts_with("[CTX:") {
            let (inner, tail) = split_context(rest)
                .ok_or_else(|| err(source_line, "unterminated `[CTX: ...]` block"))?;
            let mut ctx = BTreeSet::new();
            for part in inner.split(';') {
                let part = part.trim();
                if part.is_empty() {
                    return Err(err(source_line, "empty formula in `[CTX: ...]`"));
                }
                ctx.insert(parse_formula(part, source_line)?);
            }
            (ctx, tail)
        } else {
            (BTreeSet::new(), rest)
        };
        let Some(split) = rest.rfind(" BY ") else {
            return Err(err(source_line, "missing ` BY ` before the justification"));
        };
        let formula = parse_formula(&rest[..split], source_line)?;
        let justification = parse_justification(&rest[split + 4..], source_line)?;
        lines.push(Line {
            context,
            formula,
            justification,
        });
    }
    Ok(Derivation { lines })
}

fn render_subst(subst: &Subst) -> String {
    let mut parts = Vec::new();
    for var in ["phi", "psi", "chi", "rho"] {
        if let Some(f) = subst.formulas.get(var) {
            parts.push(format!("{var} = {}", render(f)));
        }
    }
    for var in ["p", "q"] {
        if let Some(a) = subst.atoms.get(var) {
            parts.push(format!("{var} = {a}"));
        }
    }
    format!("{{{}}}", parts.join(", "))
}

fn render_premises(premises: &[usize]) -> String {
    if premises.is_empty() {
        String::new()
    } else {
        format!(
            " {}",
            premises
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Renders a derivation in the script format accepted by
/// [`parse_script`].
pub fn render_script(derivation: &Derivation) -> String {
    let mut out = String::new();
    for (i, line) in derivation.lines.iter().enumerate() {
        out.push_str(&format!("{}. ", i + 1));
        if !line.context.is_empty() {
            let parts: Vec<String> = line.context.iter().map(render).collect();
            out.push_str(&format!("[CTX: {}] ", parts.join("; ")));
        }
        out.push_str(&render(&line.formula));
        out.push_str("  BY ");
        match &line.justification {
            Justification::Assume => out.push_str("assume"),
            Justification::Axiom { scheme, subst } => {
                out.push_str(&format!("axiom:{scheme}"));
                if let Some(s) = subst {
                    out.push(' ');
                    out.push_str(&render_subst(s));
                }
            }
            Justification::Rule { name, premises } => {
                out.push_str(&format!("rule:{name}{}", render_premises(premises)));
            }
            Justification::Macro { name, premises } => {
                out.push_str(&format!("macro:{name}{}", render_premises(premises)));
            }
        }
        out.push('\n');
    }
    out
}
