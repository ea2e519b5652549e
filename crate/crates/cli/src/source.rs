//! Named state families and `--state` resolution.

use std::path::Path;

use anyhow::{bail, Context, Result};
use pwent::states::{bell, fig1_state, fig2a_state, fig2b_state, make_ame5, make_ghz, make_w};

use crate::statefile::StateFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    Ghz,
    W,
    Bell,
    Ame5,
    Fig1,
    Fig2a,
    Fig2b,
}

#[derive(Debug, Clone, Default)]
pub struct FamilyArgs {
    pub parties: Option<usize>,
    pub dim: Option<usize>,
    pub p: Option<f64>,
    pub t: Option<f64>,
}

fn required(v: Option<f64>, name: &str, family: &str) -> Result<f64> {
    v.with_context(|| format!("family `{family}` needs --{name}"))
}

pub fn make(family: Family, args: &FamilyArgs) -> Result<StateFile> {
    let n = args.parties.unwrap_or(3);
    Ok(match family {
        Family::Ghz => StateFile::Pure(make_ghz(n, args.dim.unwrap_or(2))?),
        Family::W => StateFile::Pure(make_w(n)?),
        Family::Bell => StateFile::Pure(bell()),
        Family::Ame5 => StateFile::Pure(make_ame5()),
        Family::Fig1 => StateFile::Mixed(fig1_state(required(args.p, "p", "fig1")?, required(args.t, "t", "fig1")?)?),
        Family::Fig2a => StateFile::Mixed(fig2a_state(required(args.p, "p", "fig2a")?)?),
        Family::Fig2b => StateFile::Mixed(fig2b_state(required(args.p, "p", "fig2b")?)?),
    })
}

/// A file path, or a short name: `bell`, `ame5`, `ghz<n>`, `ghz<n>d<d>`,
/// `w<n>`, `fig1:<p>,<t>`, `fig2a:<p>`, `fig2b:<p>`.
pub fn resolve(spec: &str) -> Result<StateFile> {
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
        return StateFile::parse(&text).with_context(|| format!("in {spec}"));
    }
    let (name, params) = match spec.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (spec, None),
    };
    let numbers = || -> Result<Vec<f64>> {
        params
            .with_context(|| format!("`{name}` needs parameters, e.g. `{name}:0.5`"))?
            .split(',')
            .map(|x| x.trim().parse::<f64>().with_context(|| format!("bad parameter `{x}`")))
            .collect()
    };
    let mut args = FamilyArgs::default();
    let family = match name {
        "bell" => Family::Bell,
        "ame5" => Family::Ame5,
        "fig1" => {
            let v = numbers()?;
            if v.len() != 2 {
                bail!("fig1 takes two parameters `fig1:<p>,<t>`");
            }
            args.p = Some(v[0]);
            args.t = Some(v[1]);
            Family::Fig1
        }
        "fig2a" | "fig2b" => {
            let v = numbers()?;
            if v.len() != 1 {
                bail!("{name} takes one parameter `{name}:<p>`");
            }
            args.p = Some(v[0]);
            if name == "fig2a" {
                Family::Fig2a
            } else {
                Family::Fig2b
            }
        }
        _ if name.starts_with("ghz") => {
            let rest = &name[3..];
            let (n, d) = rest.split_once('d').unwrap_or((rest, "2"));
            args.parties = Some(n.parse().with_context(|| format!("bad party count in `{name}`"))?);
            args.dim = Some(d.parse().with_context(|| format!("bad dimension in `{name}`"))?);
            Family::Ghz
        }
        _ if name.starts_with('w') => {
            args.parties = Some(name[1..].parse().with_context(|| format!("bad party count in `{name}`"))?);
            Family::W
        }
        _ => bail!("`{spec}` is neither a file nor a known state name"),
    };
    make(family, &args)
}

/// Parties as letters (`A,B`, `AC`) or zero-based indices (`0,2`).
pub fn parse_parties(text: &str, n_parties: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Ok(i) = token.parse::<usize>() {
            out.push(i);
        } else if token.chars().all(|c| c.is_ascii_uppercase()) {
            out.extend(token.bytes().map(|b| (b - b'A') as usize));
        } else {
            bail!("bad party `{token}`: use letters A, B, ... or indices 0, 1, ...");
        }
    }
    if let Some(&bad) = out.iter().find(|&&p| p >= n_parties) {
        bail!("party {} out of range for a {n_parties}-party state", pwent::state::party_label(bad));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        assert_eq!(resolve("ghz3").unwrap().shape().dims(), &[2, 2, 2]);
        assert_eq!(resolve("ghz3d3").unwrap().shape().dims(), &[3, 3, 3]);
        assert_eq!(resolve("w4").unwrap().shape().n_parties(), 4);
        assert_eq!(resolve("fig2b:0.5").unwrap().kind(), "mixed");
        assert!(resolve("fig1:0.5").is_err());
        assert!(resolve("nonsense").is_err());
    }

    #[test]
    fn party_lists() {
        assert_eq!(parse_parties("A,B", 3).unwrap(), vec![0, 1]);
        assert_eq!(parse_parties("AC", 3).unwrap(), vec![0, 2]);
        assert_eq!(parse_parties("0,2", 3).unwrap(), vec![0, 2]);
        assert!(parse_parties("A,D", 3).is_err());
        assert!(parse_parties("a", 3).is_err());
    }
}
