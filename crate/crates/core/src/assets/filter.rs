//! The query filter DSL.
//!
//! | form        | meaning                                    |
//! |-------------|--------------------------------------------|
//! | `male`      | case-insensitive equality                  |
//! | `/guard/`   | case-insensitive regex search              |
//! | `>=5.0`     | numeric comparison (`>`, `>=`, `<`, `<=`, `=`) |

use std::fmt;

use regex::{Regex, RegexBuilder};
use serde_json::Value;

use super::AssetError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Gt,
    Ge,
    Lt,
    Le,
    Eq,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
        }
    }

    pub fn apply(self, lhs: f64, rhs: f64) -> bool {
        match self {
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Eq => lhs == rhs,
        }
    }
}

#[derive(Debug, Clone)]
pub enum FilterExpr {
    ExactMatch(String),
    Regex(Regex),
    NumericCmp(CmpOp, f64),
}

impl PartialEq for FilterExpr {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FilterExpr::ExactMatch(a), FilterExpr::ExactMatch(b)) => a == b,
            (FilterExpr::Regex(a), FilterExpr::Regex(b)) => a.as_str() == b.as_str(),
            (FilterExpr::NumericCmp(o1, v1), FilterExpr::NumericCmp(o2, v2)) => o1 == o2 && v1 == v2,
            _ => false,
        }
    }
}

impl fmt::Display for FilterExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterExpr::ExactMatch(s) => f.write_str(s),
            FilterExpr::Regex(r) => write!(f, "/{}/", r.as_str()),
            FilterExpr::NumericCmp(op, v) => write!(f, "{}{}", op.symbol(), v),
        }
    }
}

// Longest operators first so ">=" is not read as ">" followed by "=5".
const OPERATORS: [(&str, CmpOp); 5] = [
    (">=", CmpOp::Ge),
    ("<=", CmpOp::Le),
    (">", CmpOp::Gt),
    ("<", CmpOp::Lt),
    ("=", CmpOp::Eq),
];

pub fn parse_filter(raw: &str) -> Result<FilterExpr, AssetError> {
    let trimmed = raw.trim();
    if trimmed.len() >= 2 && trimmed.starts_with('/') && trimmed.ends_with('/') {
        let pattern = &trimmed[1..trimmed.len() - 1];
        let re = RegexBuilder::new(pattern)
            .case_insensitive(true)
            .build()
            .map_err(|e| AssetError::InvalidRegex {
                pattern: pattern.to_string(),
                reason: e.to_string(),
            })?;
        return Ok(FilterExpr::Regex(re));
    }
    for (sym, op) in OPERATORS {
        if let Some(rest) = trimmed.strip_prefix(sym) {
            let value: f64 = rest.trim().parse().map_err(|_| AssetError::UnparseableNumber(raw.to_string()))?;
            if !value.is_finite() {
                return Err(AssetError::UnparseableNumber(raw.to_string()));
            }
            return Ok(FilterExpr::NumericCmp(op, value));
        }
    }
    Ok(FilterExpr::ExactMatch(trimmed.to_string()))
}

/// Filters may arrive as JSON; numbers mean numeric equality, booleans
/// compare as text.
pub fn parse_filter_value(value: &Value) -> Result<FilterExpr, AssetError> {
    match value {
        Value::String(s) => parse_filter(s),
        Value::Number(n) => match n.as_f64() {
            Some(v) if v.is_finite() => Ok(FilterExpr::NumericCmp(CmpOp::Eq, v)),
            _ => Err(AssetError::UnparseableNumber(n.to_string())),
        },
        Value::Bool(b) => Ok(FilterExpr::ExactMatch(b.to_string())),
        other => Err(AssetError::InvalidFilter(format!("unsupported filter value {other}"))),
    }
}

/// Text form of a field value used by exact and regex matching.
pub fn render_field(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Number(n) => match (n.as_i64(), n.as_f64()) {
            (Some(i), _) => i.to_string(),
            (None, Some(f)) => f.to_string(),
            _ => n.to_string(),
        },
        Value::Bool(b) => b.to_string(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

impl FilterExpr {
    /// Whether `value` (the named field of one record) passes the filter.
    pub fn matches(&self, field: &str, value: &Value) -> Result<bool, AssetError> {
        match self {
            FilterExpr::ExactMatch(expected) => Ok(render_field(value).to_lowercase() == expected.to_lowercase()),
            FilterExpr::Regex(re) => Ok(re.is_match(&render_field(value))),
            FilterExpr::NumericCmp(op, rhs) => {
                let lhs = match value {
                    Value::Number(n) => n.as_f64(),
                    Value::String(s) => s.trim().parse::<f64>().ok().filter(|v| v.is_finite()),
                    _ => None,
                };
                match lhs {
                    Some(lhs) => Ok(op.apply(lhs, *rhs)),
                    None => Err(AssetError::NonNumericField {
                        field: field.to_string(),
                        value: render_field(value),
                    }),
                }
            }
        }
    }
}

/// Syntax help shared by every query instruction.
pub const SYNTAX_GUIDE: &str = "Filter syntax (all filters are AND-combined):\n\
  - plain text, e.g. \"male\": case-insensitive exact match\n\
  - /pattern/, e.g. \"/guard/\": case-insensitive regular-expression search\n\
  - numeric comparison, e.g. \">5.0\", \">=2\", \"<10\", \"<=3.5\", \"=3\": the field is read as a number";
