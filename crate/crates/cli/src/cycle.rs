//! Cycle syntax: `[x1] + 2[x2] - [x3]`, or a bare rational for a single symbol.

use std::sync::Arc;

use fqgamma::ffarith::parse_rational;
use fqgamma::gammaeval::{CycleElement, Level};

use crate::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn parse_cycle(text: &str, level: &Arc<Level>) -> Result<CycleElement, CliError> {
    let fq = level.field();
    let text = text.trim();
    if !text.contains('[') {
        return Ok(CycleElement::symbol(level, &parse_rational(text, fq)?)?);
    }
    let mut acc = CycleElement::zero(level);
    let mut rest = text;
    let mut first = true;
    while !rest.trim().is_empty() {
        rest = rest.trim_start();
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r.trim_start();
        } else if !first {
            return Err(usage(format!("expected + or - before {rest:?}")));
        }
        first = false;
        let open = rest.find('[').ok_or_else(|| usage(format!("expected [ in {rest:?}")))?;
        let coef_text = rest[..open].trim().trim_end_matches('*').trim();
        let coef: i64 = if coef_text.is_empty() {
            1
        } else {
            coef_text.parse().map_err(|_| usage(format!("bad multiplicity {coef_text:?}")))?
        };
        let close = rest.find(']').ok_or_else(|| usage("unbalanced ["))?;
        if close < open {
            return Err(usage("unbalanced ]"));
        }
        let x = parse_rational(&rest[open + 1..close], fq)?;
        let sym = CycleElement::symbol(level, &x)?.scale(sign * coef);
        acc = acc.try_add(&sym)?;
        rest = &rest[close + 1..];
    }
    Ok(acc)
}
