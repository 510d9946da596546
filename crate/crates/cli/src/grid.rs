//! Flag-value grammar: every numeric flag accepts a single value, an
//! inclusive range `lo:hi:n`, a comma list, or any mix of the three, so a
//! whole parameter sweep fits in one flag. Shape lists additionally accept
//! `inf`/`none` for degenerate (mark-free) fading.

use crate::UsageError;

/// Fading entry on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mark {
    Shape(f64),
    Degenerate,
}

impl Mark {
    /// Column text: the shape value, or `inf`.
    pub fn label(&self) -> String {
        match self {
            Mark::Shape(m) => format!("{m}"),
            Mark::Degenerate => "inf".into(),
        }
    }
}

fn bad(flag: &str, value: &str, want: &str) -> UsageError {
    UsageError(format!("--{flag} got {value:?}, expected {want}"))
}

fn scalar(flag: &str, tok: &str) -> Result<f64, UsageError> {
    tok.trim()
        .parse::<f64>()
        .map_err(|_| bad(flag, tok, "a number"))
}

// lo:hi:n with n evenly spaced points, endpoints included
fn range(flag: &str, tok: &str) -> Result<Vec<f64>, UsageError> {
    let parts: Vec<&str> = tok.split(':').collect();
    if parts.len() != 3 {
        return Err(bad(flag, tok, "lo:hi:n"));
    }
    let lo = scalar(flag, parts[0])?;
    let hi = scalar(flag, parts[1])?;
    let n: u64 = parts[2]
        .trim()
        .parse()
        .map_err(|_| bad(flag, tok, "an integer point count"))?;
    if n == 0 {
        return Err(bad(flag, tok, "at least one point"));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    // endpoint-pinned: i = n-1 lands exactly on hi
    let span = hi - lo;
    Ok((0..n)
        .map(|i| lo + span * i as f64 / (n - 1) as f64)
        .collect())
}

/// Comma list of scalars and/or `lo:hi:n` ranges.
pub fn reals(flag: &str, text: &str) -> Result<Vec<f64>, UsageError> {
    let mut out = Vec::new();
    for tok in text.split(',') {
        if tok.contains(':') {
            out.extend(range(flag, tok)?);
        } else {
            out.push(scalar(flag, tok)?);
        }
    }
    if out.is_empty() {
        Err(bad(flag, text, "a non-empty list"))
    } else {
        Ok(out)
    }
}

/// Like [`reals`] but entries may also be `inf` or `none` for degenerate fading.
pub fn marks(flag: &str, text: &str) -> Result<Vec<Mark>, UsageError> {
    let mut out = Vec::new();
    for tok in text.split(',') {
        let t = tok.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("none") {
            out.push(Mark::Degenerate);
        } else if t.contains(':') {
            out.extend(range(flag, t)?.into_iter().map(Mark::Shape));
        } else {
            out.push(Mark::Shape(scalar(flag, t)?));
        }
    }
    if out.is_empty() {
        Err(bad(flag, text, "a non-empty list"))
    } else {
        Ok(out)
    }
}

/// Single unsigned integer.
pub fn uint(flag: &str, text: &str) -> Result<u64, UsageError> {
    text.trim()
        .parse()
        .map_err(|_| bad(flag, text, "an unsigned integer"))
}

/// Single positive real.
pub fn positive(flag: &str, text: &str) -> Result<f64, UsageError> {
    let v = scalar(flag, text)?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(bad(flag, text, "a positive number"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_lists_expand() {
        let v = reals("s", "0.5,1:2:3,4").unwrap();
        assert_eq!(v, vec![0.5, 1.0, 1.5, 2.0, 4.0]);
    }

    #[test]
    fn single_point_range() {
        assert_eq!(reals("s", "2:9:1").unwrap(), vec![2.0]);
    }

    #[test]
    fn marks_accept_degenerate_spellings() {
        let v = marks("m", "1,2.5,inf,NONE").unwrap();
        assert_eq!(
            v,
            vec![
                Mark::Shape(1.0),
                Mark::Shape(2.5),
                Mark::Degenerate,
                Mark::Degenerate
            ]
        );
    }

    #[test]
    fn garbage_is_a_usage_error() {
        assert!(reals("s", "0.5;1").is_err());
        assert!(uint("seed", "xyz").is_err());
        assert!(positive("s", "-1").is_err());
        assert!(reals("s", "1:2").is_err());
    }
}
