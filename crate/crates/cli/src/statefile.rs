//! Line-oriented state files.
//!
//! ```text
//! dims: 2 2
//! kind: mixed
//! # one matrix row per line, entries "re,im"
//! 0.5,0 0,0 0,0 0.5,0
//! ...
//! ```
//!
//! Pure states list one amplitude per line. `#` starts a comment anywhere on
//! a line. Numbers are written in shortest round-trip form, so
//! `save(load(save(x)))` reproduces `save(x)` byte for byte.

use std::fmt::Write as _;

use pwent::{CMatrix, DensityMatrix, PureState, RegisterShape, C64};
use thiserror::Error;

#[derive(Debug, Clone)]
pub enum StateFile {
    Pure(PureState),
    Mixed(DensityMatrix),
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    At { line: usize, msg: String },
    #[error("{0}")]
    Whole(String),
}

fn at(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::At { line, msg: msg.into() }
}

impl StateFile {
    pub fn shape(&self) -> &RegisterShape {
        match self {
            StateFile::Pure(p) => p.shape(),
            StateFile::Mixed(m) => m.shape(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            StateFile::Pure(p) => p.to_density(),
            StateFile::Mixed(m) => m.clone(),
        }
    }

    pub fn pure(&self) -> Option<&PureState> {
        match self {
            StateFile::Pure(p) => Some(p),
            StateFile::Mixed(_) => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            StateFile::Pure(_) => "pure",
            StateFile::Mixed(_) => "mixed",
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let dims: Vec<String> = self.shape().dims().iter().map(|d| d.to_string()).collect();
        writeln!(out, "dims: {}", dims.join(" ")).unwrap();
        writeln!(out, "kind: {}", self.kind()).unwrap();
        match self {
            StateFile::Pure(p) => {
                for z in p.amplitudes() {
                    writeln!(out, "{}", entry(z)).unwrap();
                }
            }
            StateFile::Mixed(m) => {
                let mat = m.matrix();
                for r in 0..mat.rows() {
                    let row: Vec<String> = mat.row(r).iter().map(entry).collect();
                    writeln!(out, "{}", row.join(" ")).unwrap();
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (dims_line, dims_text) = lines.next().ok_or_else(|| ParseError::Whole("empty state file".into()))?;
        let dims_body = dims_text
            .strip_prefix("dims:")
            .ok_or_else(|| at(dims_line, "expected `dims: d1 d2 ...`"))?;
        let dims = dims_body
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| at(dims_line, format!("bad dimension `{t}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let shape = RegisterShape::new(dims).map_err(|e| at(dims_line, e.to_string()))?;

        let (kind_line, kind_text) = lines.next().ok_or_else(|| at(dims_line + 1, "missing `kind:` line"))?;
        let kind = kind_text
            .strip_prefix("kind:")
            .map(str::trim)
            .ok_or_else(|| at(kind_line, "expected `kind: pure|mixed`"))?;

        let d = shape.total_dim();
        let expected = match kind {
            "pure" => d,
            "mixed" => d * d,
            other => return Err(at(kind_line, format!("unknown kind `{other}`"))),
        };
        let mut values = Vec::with_capacity(expected);
        let mut last_line = kind_line;
        for (line, body) in lines {
            last_line = line;
            for token in body.split_whitespace() {
                if values.len() == expected {
                    return Err(at(line, format!("too many entries, expected {expected}")));
                }
                values.push(parse_entry(token).map_err(|msg| at(line, msg))?);
            }
        }
        if values.len() != expected {
            return Err(at(last_line, format!("found {} entries, expected {expected}", values.len())));
        }
        match kind {
            "pure" => PureState::new(shape, values)
                .map(StateFile::Pure)
                .map_err(|e| ParseError::Whole(e.to_string())),
            _ => {
                let mat = CMatrix::from_vec(d, d, values).map_err(|e| ParseError::Whole(e.to_string()))?;
                DensityMatrix::new(shape, mat)
                    .map(StateFile::Mixed)
                    .map_err(|e| ParseError::Whole(e.to_string()))
            }
        }
    }
}

fn entry(z: &C64) -> String {
    format!("{},{}", z.re, z.im)
}

fn parse_entry(token: &str) -> Result<C64, String> {
    let (re, im) = token.split_once(',').ok_or_else(|| format!("entry `{token}` is not `re,im`"))?;
    let parse = |s: &str| {
        s.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("bad number `{s}` in `{token}`"))
    };
    Ok(C64::new(parse(re)?, parse(im)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use pwent::states::{fig2b_state, make_ghz, random_density};

    #[test]
    fn round_trip_is_byte_identical() {
        let cases = [
            StateFile::Pure(make_ghz(3, 2).unwrap()),
            StateFile::Mixed(fig2b_state(0.37).unwrap()),
            StateFile::Mixed(random_density(&RegisterShape::new(vec![2, 3]).unwrap(), 3, 5)),
        ];
        for case in cases {
            let text = case.to_text();
            let again = StateFile::parse(&text).unwrap().to_text();
            assert_eq!(text, again);
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\ndims: 2\n\nkind: pure # trailing\n1,0\n0,0 # second\n";
        let s = StateFile::parse(text).unwrap();
        assert_eq!(s.shape().dims(), &[2]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = StateFile::parse("dims: 2\nkind: pure\n1,0\nx,0\n").unwrap_err();
        assert!(err.to_string().starts_with("line 4:"), "{err}");
        let err = StateFile::parse("dims: 2 two\n").unwrap_err();
        assert!(err.to_string().starts_with("line 1:"), "{err}");
        let err = StateFile::parse("dims: 2\nkind: fuzzy\n").unwrap_err();
        assert!(err.to_string().starts_with("line 2:"), "{err}");
        let err = StateFile::parse("dims: 2\nkind: pure\n1,0\n").unwrap_err();
        assert!(err.to_string().contains("expected 2"), "{err}");
        assert!(StateFile::parse("dims: 2\nkind: pure\n1,0\n1,0\n").is_err());
    }
}
