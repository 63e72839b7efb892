use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::io::{apply_label_json, parse_graph};
use crate::graph::{
    a_prime, accordion, antiprism, circulant, complete, cycle, path, AccordionParams,
    CirculantParams, Graph,
};

/// A graph named on the command line, e.g. `accordion:10,5` or `file:g.g6`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GraphSpec {
    Accordion(AccordionParams),
    Antiprism(usize),
    /// `circulant:2n,a,b`, the order first.
    Circulant(CirculantParams),
    APrime(usize),
    Cycle(usize),
    Path(usize),
    Complete(usize),
    /// graph6 or DIMACS, with an optional `PATH.labels.json` sidecar.
    File(PathBuf),
}

fn bad(spec: &str, why: impl fmt::Display) -> Error {
    Error::Parse(format!("bad graph spec `{spec}`: {why}"))
}

fn numbers(spec: &str, args: &str, want: usize) -> Result<Vec<usize>> {
    let parts: Vec<&str> = args.split(',').map(str::trim).collect();
    if parts.len() != want {
        return Err(bad(
            spec,
            format!("expected {want} comma-separated integers, got `{args}`"),
        ));
    }
    parts
        .iter()
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| bad(spec, format!("`{p}` is not a non-negative integer")))
        })
        .collect()
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| bad(s, "expected KIND:ARGS"))?;
        let wrap = |e: Error| bad(s, e);
        Ok(match kind {
            "accordion" => {
                let v = numbers(s, args, 2)?;
                GraphSpec::Accordion(AccordionParams::new(v[0], v[1]).map_err(wrap)?)
            }
            "antiprism" => {
                let v = numbers(s, args, 1)?;
                AccordionParams::new(v[0], 1).map_err(wrap)?;
                GraphSpec::Antiprism(v[0])
            }
            "circulant" => {
                let v = numbers(s, args, 3)?;
                if v[0] % 2 == 1 {
                    return Err(bad(s, format!("order `{}` must be even", v[0])));
                }
                GraphSpec::Circulant(CirculantParams::new(v[0] / 2, v[1], v[2]).map_err(wrap)?)
            }
            "aprime" | "a_prime" => {
                let v = numbers(s, args, 1)?;
                if v[0] < 3 {
                    return Err(bad(s, format!("n = {} must be at least 3", v[0])));
                }
                GraphSpec::APrime(v[0])
            }
            "cycle" => GraphSpec::Cycle(numbers(s, args, 1)?[0]),
            "path" => GraphSpec::Path(numbers(s, args, 1)?[0]),
            "complete" => GraphSpec::Complete(numbers(s, args, 1)?[0]),
            "file" if !args.is_empty() => GraphSpec::File(PathBuf::from(args)),
            other => return Err(bad(s, format!("unknown kind `{other}`"))),
        })
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Accordion(p) => write!(f, "accordion:{},{}", p.n(), p.k()),
            GraphSpec::Antiprism(n) => write!(f, "antiprism:{n}"),
            GraphSpec::Circulant(p) => {
                let (a, b) = p.lengths();
                write!(f, "circulant:{},{a},{b}", p.order())
            }
            GraphSpec::APrime(n) => write!(f, "aprime:{n}"),
            GraphSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSpec::Path(n) => write!(f, "path:{n}"),
            GraphSpec::Complete(n) => write!(f, "complete:{n}"),
            GraphSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl TryFrom<String> for GraphSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GraphSpec> for String {
    fn from(s: GraphSpec) -> String {
        s.to_string()
    }
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphSpec::Accordion(p) => accordion(*p),
            GraphSpec::Antiprism(n) => antiprism(*n),
            GraphSpec::Circulant(p) => Ok(circulant(*p)),
            GraphSpec::APrime(n) => a_prime(*n),
            GraphSpec::Cycle(n) => cycle(*n),
            GraphSpec::Path(n) => path(*n),
            GraphSpec::Complete(n) => complete(*n),
            GraphSpec::File(p) => {
                let g = parse_graph(&std::fs::read_to_string(p)?)?;
                let mut sidecar = p.clone().into_os_string();
                sidecar.push(".labels.json");
                match std::fs::read_to_string(&sidecar) {
                    Ok(json) => apply_label_json(g, &json),
                    Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(g),
                    Err(e) => Err(e.into()),
                }
            }
        }
    }
}
