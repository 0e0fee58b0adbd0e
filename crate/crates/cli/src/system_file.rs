//! The plain-text system format:
//!
//! ```text
//! # comment
//! vars: x1 x2 x3
//! weight: 3 4 7
//! g: x1^5 + x2^3 + x3^2 - 1
//! ```

use std::path::Path;

use globres::poly::{parse_polynomial, variables, PolyError};
use globres::{PolySystem, WeightVector};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SystemFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{generators} generators for {variables} variables")]
    Arity { generators: usize, variables: usize },
    #[error("missing 'vars:' line")]
    MissingVariables,
}

#[derive(Clone, Debug)]
pub struct SystemFile {
    pub system: PolySystem,
    pub weight: Option<WeightVector>,
}

impl SystemFile {
    /// SHA-256 of the canonical form (variables, weight, generators as
    /// printed), so formatting differences in the file do not matter.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.system.variables().join(" "));
        h.update("\n");
        if let Some(w) = &self.weight {
            h.update(format!("{:?}", w.as_slice()));
        }
        for g in self.system.generators() {
            h.update("\n");
            h.update(g.to_string());
        }
        hex::encode(h.finalize())
    }
}

pub fn parse_system_file(path: &Path) -> Result<SystemFile, SystemFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| SystemFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_system_text(&text)
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> SystemFileError {
    SystemFileError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_system_text(text: &str) -> Result<SystemFile, SystemFileError> {
    let mut names: Option<Vec<String>> = None;
    let mut weight: Option<(usize, Vec<i64>)> = None;
    let mut generators: Vec<(usize, usize, &str)> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once(':') else {
            let col = raw.len() - raw.trim_start().len() + 1;
            return Err(syntax(line, col, "expected 'vars:', 'weight:' or 'g:'"));
        };
        let value_col = key.len() + 2;
        match key.trim() {
            "vars" => {
                if names.is_some() {
                    return Err(syntax(line, 1, "duplicate 'vars:' line"));
                }
                let list: Vec<String> = value.split_whitespace().map(str::to_owned).collect();
                if list.is_empty() {
                    return Err(syntax(line, value_col, "no variables declared"));
                }
                if let Some(bad) = list.iter().find(|n| !is_name(n)) {
                    let col = value_col + value.find(bad.as_str()).unwrap_or(0);
                    return Err(syntax(line, col, format!("invalid variable name '{bad}'")));
                }
                names = Some(list);
            }
            "weight" => {
                if weight.is_some() {
                    return Err(syntax(line, 1, "duplicate 'weight:' line"));
                }
                let mut w = Vec::new();
                for tok in value.split_whitespace() {
                    let col = value_col + value.find(tok).unwrap_or(0);
                    match tok.parse::<i64>() {
                        Ok(v) if v > 0 => w.push(v),
                        _ => {
                            return Err(syntax(
                                line,
                                col,
                                format!("weight entry '{tok}' is not a positive integer"),
                            ))
                        }
                    }
                }
                weight = Some((line, w));
            }
            "g" => generators.push((line, value_col, value)),
            other => {
                let col = raw.find(other).unwrap_or(0) + 1;
                return Err(syntax(line, col, format!("unknown key '{other}'")));
            }
        }
    }

    let names = names.ok_or(SystemFileError::MissingVariables)?;
    let vars = variables(&names);
    let mut gens = Vec::with_capacity(generators.len());
    for (line, col, expr) in generators {
        let p = parse_polynomial(expr, &vars).map_err(|e| match e {
            PolyError::Syntax { position, message } => syntax(line, col + position, message),
            PolyError::UnknownVariable { name, position } => {
                syntax(line, col + position, format!("unknown variable '{name}'"))
            }
            other => syntax(line, col, other.to_string()),
        })?;
        if !p.is_polynomial() {
            return Err(syntax(line, col, "negative exponent in generator"));
        }
        gens.push(p);
    }
    if gens.len() != names.len() {
        return Err(SystemFileError::Arity {
            generators: gens.len(),
            variables: names.len(),
        });
    }
    let weight = match weight {
        Some((line, w)) => {
            if w.len() != names.len() {
                return Err(syntax(
                    line,
                    1,
                    format!("weight has {} entries for {} variables", w.len(), names.len()),
                ));
            }
            Some(WeightVector::new(w).map_err(|e| syntax(line, 1, e.to_string()))?)
        }
        None => None,
    };
    let system = PolySystem::new(vars, gens).map_err(|e| syntax(1, 1, e.to_string()))?;
    Ok(SystemFile { system, weight })
}
