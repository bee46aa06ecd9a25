//! Linear combinations of basis labels written on the command line, such as
//! `-K`, `2*A`, `A - 1/2*K` or `3D1+D2`.

use mylab::tau::parse_rational;
use mylab::ClassVector;
use num_rational::BigRational;

use crate::error::CliError;

pub fn parse(flag: &str, text: &str) -> Result<ClassVector, CliError> {
    let bad = |why: &str| CliError::usage(flag, format!("cannot read class `{text}`: {why}"));
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad("empty"));
    }
    let mut pairs: Vec<(String, BigRational)> = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let mut negative = false;
        if let Some(r) = rest.strip_prefix('-') {
            negative = true;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if !pairs.is_empty() {
            return Err(bad("terms must be separated by + or -"));
        }
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let (term, tail) = rest.split_at(end);
        rest = tail;
        // the coefficient is the leading run of digits, '/' and '.', optionally followed by '*'
        let split = term.find(|c: char| !(c.is_ascii_digit() || c == '/' || c == '.')).unwrap_or(term.len());
        let (coef, label) = term.split_at(split);
        let label = label.strip_prefix('*').unwrap_or(label);
        if label.is_empty() {
            return Err(bad("a term has no label"));
        }
        let mut c = if coef.is_empty() {
            BigRational::from_integer(1.into())
        } else {
            parse_rational(coef).map_err(|_| bad("bad coefficient"))?
        };
        if negative {
            c = -c;
        }
        pairs.push((label.to_string(), c));
    }
    Ok(ClassVector::from_pairs(pairs))
}

pub fn parse_rational_flag(flag: &str, text: &str) -> Result<BigRational, CliError> {
    parse_rational(text).map_err(|_| CliError::usage(flag, format!("`{text}` is not a rational number p/q")))
}
