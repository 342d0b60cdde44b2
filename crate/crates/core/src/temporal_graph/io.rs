//! Line-oriented graph files.
//!
//! ```text
//! tvg 1
//! n 3
//! t 2
//! undirected
//! e 0 0 1
//! ```
//!
//! `#` starts a comment. Undirected graphs are written with one line per
//! opposing pair (`u <= v`) and re-expanded on load.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{Edge, GraphError, TemporalGraph};

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize, GraphError> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

pub fn parse_graph(text: &str) -> Result<TemporalGraph, GraphError> {
    let mut header = false;
    let mut n = None;
    let mut t = None;
    let mut undirected = false;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let key = toks.next().unwrap_or_default();
        if !header {
            if key != "tvg" || toks.next() != Some("1") || toks.next().is_some() {
                return Err(parse_err(line, "expected header `tvg 1`"));
            }
            header = true;
            continue;
        }
        match key {
            "n" => n = Some(parse_usize(toks.next(), line, "vertex count")?),
            "t" => t = Some(parse_usize(toks.next(), line, "instant count")?),
            "undirected" => undirected = true,
            "e" => {
                let (Some(nv), Some(nt)) = (n, t) else {
                    return Err(parse_err(line, "edge before `n` and `t`"));
                };
                let et = parse_usize(toks.next(), line, "instant")?;
                let u = parse_usize(toks.next(), line, "source vertex")?;
                let v = parse_usize(toks.next(), line, "target vertex")?;
                if u >= nv || v >= nv {
                    return Err(parse_err(line, format!("vertex out of range for n = {nv}")));
                }
                if et + 1 >= nt {
                    return Err(parse_err(line, format!("departure instant {et} out of range for t = {nt}")));
                }
                edges.push(Edge::new(u, et, v));
            }
            other => return Err(parse_err(line, format!("unknown directive `{other}`"))),
        }
        if toks.next().is_some() {
            return Err(parse_err(line, "trailing tokens"));
        }
    }
    if !header {
        return Err(parse_err(1, "missing header `tvg 1`"));
    }
    let last = text.lines().count().max(1);
    let n = n.ok_or_else(|| parse_err(last, "missing `n`"))?;
    let t = t.ok_or_else(|| parse_err(last, "missing `t`"))?;
    TemporalGraph::new(n, t, edges, undirected)
}

pub fn write_graph<W: Write>(g: &TemporalGraph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "tvg 1")?;
    writeln!(out, "n {}", g.vertex_count())?;
    writeln!(out, "t {}", g.instant_count())?;
    if g.is_undirected() {
        writeln!(out, "undirected")?;
    }
    for e in g.edges() {
        if g.is_undirected() && e.u > e.v {
            continue;
        }
        writeln!(out, "e {} {} {}", e.t, e.u, e.v)?;
    }
    Ok(())
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<TemporalGraph, GraphError> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn store_graph(g: &TemporalGraph, path: impl AsRef<Path>) -> Result<(), GraphError> {
    let mut buf = Vec::new();
    write_graph(g, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal_graph::{complete_arrows, gen_static, path_arrows};

    fn roundtrip(g: &TemporalGraph) -> TemporalGraph {
        let mut buf = Vec::new();
        write_graph(g, &mut buf).unwrap();
        parse_graph(std::str::from_utf8(&buf).unwrap()).unwrap()
    }

    #[test]
    fn k3_roundtrip() {
        let g = gen_static(3, &complete_arrows(3), false, 4).unwrap();
        assert_eq!(roundtrip(&g), g);
        let u = gen_static(3, &path_arrows(3), true, 3).unwrap();
        assert_eq!(roundtrip(&u), u);
    }

    #[test]
    fn store_and_load_file() {
        let dir = std::env::temp_dir().join(format!("bbig-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("k3.tvg");
        let g = gen_static(3, &complete_arrows(3), false, 2).unwrap();
        store_graph(&g, &path).unwrap();
        assert_eq!(load_graph(&path).unwrap(), g);
        fs::remove_dir_all(dir).ok();
    }

    #[test]
    fn vertex_out_of_range_reports_line() {
        let text = "tvg 1\nn 2\nt 3\n# comment\ne 0 0 1\ne 1 0 2\n";
        match parse_graph(text) {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_edge_section() {
        let g = parse_graph("tvg 1 # header\nn 4\nt 2\n").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn malformed_inputs() {
        for text in ["", "tvg 2\nn 1\nt 1\n", "tvg 1\nn x\nt 1\n", "tvg 1\nn 2\nt 2\nq\n", "tvg 1\ne 0 0 1\n"] {
            assert!(matches!(parse_graph(text), Err(GraphError::Parse { .. })), "{text:?}");
        }
    }
}
