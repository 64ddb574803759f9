//! Plain-text matrix exchange format.
//!
//! Line 1 is `dims: d1 d2 ...`; the following `total` lines each hold
//! `total` whitespace-separated complex tokens of the form `a`, `a+bi`, or
//! `a-bi` with decimal reals. Values are written with the shortest
//! round-tripping representation, so parse(serialize(x)) is exact.

use crate::error::{Error, Result};
use crate::operator::TensorOperator;
use crate::space::TensorSpace;
use nalgebra::DMatrix;
use num_complex::Complex64;

pub fn serialize(op: &TensorOperator) -> String {
    let dims: Vec<String> = op.space().dims().iter().map(|d| d.to_string()).collect();
    let mut out = format!("dims: {}\n", dims.join(" "));
    let n = op.space().total();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format_complex(op.entries()[(i, j)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn parse(text: &str) -> Result<TensorOperator> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse {
            line: 1,
            msg: "empty input".to_string(),
        })?;
    let rest = header.trim().strip_prefix("dims:").ok_or_else(|| Error::Parse {
        line: 1,
        msg: "expected a 'dims: d1 d2 ...' header".to_string(),
    })?;
    let dims: Vec<usize> = rest
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("bad dimension token '{t}'"),
            })
        })
        .collect::<Result<_>>()?;
    let space = TensorSpace::new(&dims)?;
    let total = space.total();

    let mut entries = DMatrix::from_element(total, total, Complex64::new(0.0, 0.0));
    let mut row = 0usize;
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if row >= total {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected {total} rows, found more"),
            });
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != total {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected {total} entries, got {}", tokens.len()),
            });
        }
        for (j, token) in tokens.iter().enumerate() {
            entries[(row, j)] = parse_complex(token).map_err(|msg| Error::Parse {
                line: line_no,
                msg: format!("bad token '{token}': {msg}"),
            })?;
        }
        row += 1;
    }
    if row != total {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {total} rows, got {row}"),
        });
    }
    TensorOperator::new(space, entries)
}

fn parse_complex(token: &str) -> std::result::Result<Complex64, String> {
    let finite = |x: f64| -> std::result::Result<f64, String> {
        if x.is_finite() {
            Ok(x)
        } else {
            Err("non-finite value".to_string())
        }
    };
    if let Some(body) = token.strip_suffix('i') {
        // split at the last sign that is not an exponent sign and not leading
        let bytes = body.as_bytes();
        let mut split = None;
        for pos in 1..bytes.len() {
            let c = bytes[pos];
            if (c == b'+' || c == b'-') && !matches!(bytes[pos - 1], b'e' | b'E') {
                split = Some(pos);
            }
        }
        let pos = split.ok_or("imaginary token needs the form a+bi or a-bi")?;
        let re: f64 = body[..pos]
            .parse()
            .map_err(|_| "bad real part".to_string())?;
        let sign = if bytes[pos] == b'-' { -1.0 } else { 1.0 };
        let mag: f64 = body[pos + 1..]
            .parse()
            .map_err(|_| "bad imaginary part".to_string())?;
        Ok(Complex64::new(finite(re)?, sign * finite(mag)?))
    } else {
        let re: f64 = token.parse().map_err(|_| "bad real value".to_string())?;
        Ok(Complex64::new(finite(re)?, 0.0))
    }
}
