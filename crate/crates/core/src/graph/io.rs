//! Plain-text edge lists: a header line `n m`, then `m` lines `u v` with
//! 0-based indices. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;
use std::path::Path;

use super::{Graph, GraphBuilder};
use crate::error::{Error, Result};

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    let (n, m) = parse_pair(line, header)?;
    let mut b = GraphBuilder::new(n);
    let mut count = 0;
    for (line, l) in lines {
        let (u, v) = parse_pair(line, l)?;
        if u >= n || v >= n {
            return Err(Error::Parse {
                line,
                msg: format!("edge ({u}, {v}) out of range for n = {n}"),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line,
                msg: format!("self-loop at {u}"),
            });
        }
        b.add_edge(u, v);
        count += 1;
    }
    if count != m {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header declares {m} edges, found {count}"),
        });
    }
    Ok(b.build())
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse {
                line,
                msg: "expected two integers".into(),
            })?
            .parse()
            .map_err(|e| Error::Parse {
                line,
                msg: format!("{e}"),
            })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_edge_list(g))?;
    Ok(())
}
