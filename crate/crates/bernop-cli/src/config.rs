//! Problem configs: a `[problem]` table in TOML syntax with the coefficient
//! functions quoted as expression strings (bare numbers also accepted).
//!
//! ```text
//! [problem]
//! P = "5"
//! Q = "3"
//! r = "exp(-x)"
//! alpha = 0
//! beta = 0
//! domain = [0, 1]
//! n = 6
//! exact = "..."        # optional closed-form solution for error reporting
//! ```
//!
//! Everything is validated up front so a bad config never reaches the
//! numerics; every error message names the offending key or position.

use bernop::basis::MAX_ORDER;
use bernop::expr::{parse, Expr, IntegrableFunction};
use bernop::solver::IVProblem;
use serde::Deserialize;
use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub struct ConfigError {
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(message: impl Into<String>) -> ConfigError {
    ConfigError {
        message: message.into(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    problem: RawProblem,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    #[serde(rename = "P")]
    p: ExprValue,
    #[serde(rename = "Q")]
    q: ExprValue,
    r: ExprValue,
    alpha: f64,
    beta: f64,
    domain: [f64; 2],
    n: usize,
    exact: Option<String>,
}

/// Coefficient entries may be written as `"exp(-x)"` or as bare numbers.
#[derive(Deserialize)]
#[serde(untagged)]
enum ExprValue {
    Number(f64),
    Text(String),
}

impl ExprValue {
    fn to_function(&self, key: &str) -> Result<IntegrableFunction, ConfigError> {
        match self {
            ExprValue::Number(v) => {
                if !v.is_finite() {
                    return Err(err(format!("key '{key}': value must be finite")));
                }
                Ok(IntegrableFunction::Constant(*v))
            }
            ExprValue::Text(s) => {
                let e = parse(s).map_err(|pe| {
                    err(format!(
                        "key '{key}': parse error at position {}: {}",
                        pe.position, pe.message
                    ))
                })?;
                Ok(IntegrableFunction::from_expr(e))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProblemConfig {
    pub problem: IVProblem,
    pub exact: Option<Expr>,
}

/// Validates a truncation order against the supported basis range; shared by
/// config ingestion and the `--n` override.
pub fn check_order(n: usize) -> Result<(), ConfigError> {
    if !(1..=MAX_ORDER).contains(&n) {
        return Err(err(format!(
            "key 'n': order {n} outside the supported range 1..={MAX_ORDER}"
        )));
    }
    Ok(())
}

pub fn parse_config(text: &str) -> Result<ProblemConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| err(e.to_string()))?;
    let rp = raw.problem;

    let p = rp.p.to_function("P")?;
    let q = rp.q.to_function("Q")?;
    let r = rp.r.to_function("r")?;
    if !rp.alpha.is_finite() {
        return Err(err("key 'alpha': value must be finite"));
    }
    if !rp.beta.is_finite() {
        return Err(err("key 'beta': value must be finite"));
    }
    let [a, b] = rp.domain;
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(err(format!(
            "key 'domain': [{a}, {b}] is not a finite interval with a < b"
        )));
    }
    check_order(rp.n)?;
    let exact = match &rp.exact {
        None => None,
        Some(s) => Some(parse(s).map_err(|pe| {
            err(format!(
                "key 'exact': parse error at position {}: {}",
                pe.position, pe.message
            ))
        })?),
    };

    Ok(ProblemConfig {
        problem: IVProblem {
            p,
            q,
            r,
            alpha: rp.alpha,
            beta: rp.beta,
            domain: (a, b),
            n: rp.n,
        },
        exact,
    })
}

pub fn load_config(path: &Path) -> Result<ProblemConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| err(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"
[problem]
P = "5"
Q = 3
r = "exp(-x)"
alpha = 0
beta = 0.5
domain = [0, 1]
n = 6
"#;

    #[test]
    fn parses_a_complete_config() {
        let cfg = parse_config(GOOD).unwrap();
        assert_eq!(cfg.problem.p.as_constant(), Some(5.0));
        assert_eq!(cfg.problem.q.as_constant(), Some(3.0));
        assert_eq!(cfg.problem.beta, 0.5);
        assert_eq!(cfg.problem.domain, (0.0, 1.0));
        assert_eq!(cfg.problem.n, 6);
        assert!(cfg.exact.is_none());
    }

    #[test]
    fn exact_key_is_optional_but_validated() {
        let cfg = parse_config(&format!("{GOOD}exact = \"sin(x)\"\n")).unwrap();
        assert!(cfg.exact.is_some());
        let e = parse_config(&format!("{GOOD}exact = \"sin(\"\n")).unwrap_err();
        assert!(e.message.contains("exact"), "{}", e.message);
        assert!(e.message.contains("position"), "{}", e.message);
    }

    #[test]
    fn unparseable_expression_names_key_and_position() {
        let bad = GOOD.replace("\"exp(-x)\"", "\"exp(-x\"");
        let e = parse_config(&bad).unwrap_err();
        assert!(e.message.contains("'r'"), "{}", e.message);
        assert!(e.message.contains("position"), "{}", e.message);
    }

    #[test]
    fn missing_key_is_named() {
        let bad = GOOD.replace("n = 6\n", "");
        let e = parse_config(&bad).unwrap_err();
        assert!(e.message.contains('n'), "{}", e.message);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let e = parse_config(&format!("{GOOD}order = 5\n")).unwrap_err();
        assert!(e.message.contains("order"), "{}", e.message);
    }

    #[test]
    fn order_range_is_enforced() {
        let e = parse_config(&GOOD.replace("n = 6", "n = 13")).unwrap_err();
        assert!(e.message.contains("range"), "{}", e.message);
        let e = parse_config(&GOOD.replace("n = 6", "n = 0")).unwrap_err();
        assert!(e.message.contains("range"), "{}", e.message);
    }

    #[test]
    fn backwards_domain_is_rejected() {
        let e = parse_config(&GOOD.replace("[0, 1]", "[1, 0]")).unwrap_err();
        assert!(e.message.contains("domain"), "{}", e.message);
    }

    #[test]
    fn toml_syntax_errors_carry_position() {
        let e = parse_config("[problem\nP = \"1\"").unwrap_err();
        assert!(e.message.contains("line"), "{}", e.message);
    }
}
