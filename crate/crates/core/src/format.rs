//! Text formats: `.dpo` for ranked posets and `.hg` for hypergraphs.
//!
//! Both are UTF-8 with LF newlines. A `.dpo` file looks like
//!
//! ```text
//! dpo 1 r=1 ranks=2
//! rank 0 1
//! 0:
//! rank 1 1
//! 0: 0
//! rank 2 2
//! 0: 0
//! 1: 0
//! ```
//!
//! where `ranks` is the top rank and each element line lists the sorted
//! indices it covers in the rank below.

use std::fmt::Write as _;

use crate::canon::canonical_poset;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::poset::{Level, RankedPoset};

pub fn write_dpo(p: &RankedPoset, canonical: bool) -> String {
    let owned;
    let p = if canonical {
        owned = canonical_poset(p);
        &owned
    } else {
        p
    };
    let mut s = String::new();
    let _ = writeln!(s, "dpo 1 r={} ranks={}", p.r(), p.top_rank());
    for (j, level) in p.down_levels().iter().enumerate() {
        let _ = writeln!(s, "rank {j} {}", level.len());
        for (i, covers) in level.iter().enumerate() {
            let _ = write!(s, "{i}:");
            for c in covers {
                let _ = write!(s, " {c}");
            }
            s.push('\n');
        }
    }
    s
}

fn parse_kv<'a>(tok: Option<&'a str>, key: &str, line: usize) -> Result<&'a str> {
    tok.and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| Error::parse(line, format!("expected `{key}=<value>`")))
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{s}`")))
}

pub fn read_dpo(text: &str) -> Result<RankedPoset> {
    let mut lines = text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)));
    let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("dpo") || toks.next() != Some("1") {
        return Err(Error::parse(ln, "expected header `dpo 1 r=<r> ranks=<N>`"));
    }
    let r: u32 = parse_num(parse_kv(toks.next(), "r", ln)?, ln, "r")?;
    let top: usize = parse_num(parse_kv(toks.next(), "ranks", ln)?, ln, "rank count")?;
    if toks.next().is_some() {
        return Err(Error::parse(ln, "trailing tokens in header"));
    }
    let mut down: Vec<Level> = Vec::with_capacity(top + 1);
    for j in 0..=top {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| Error::parse(ln + 1, format!("missing `rank {j}` line")))?;
        let mut toks = line.split_whitespace();
        if toks.next() != Some("rank") {
            return Err(Error::parse(ln, format!("expected `rank {j} <size>`")));
        }
        let idx: usize = parse_num(toks.next().unwrap_or(""), ln, "rank index")?;
        if idx != j {
            return Err(Error::parse(ln, format!("expected rank {j}, found {idx}")));
        }
        let size: usize = parse_num(toks.next().unwrap_or(""), ln, "level size")?;
        let mut level = Vec::with_capacity(size);
        for i in 0..size {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| Error::parse(ln + i + 1, "unexpected end of input"))?;
            let (head, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(ln, "expected `<i>: covers...`"))?;
            let k: usize = parse_num(head.trim(), ln, "element index")?;
            if k != i {
                return Err(Error::parse(ln, format!("expected element {i}, found {k}")));
            }
            let covers = rest
                .split_whitespace()
                .map(|t| parse_num(t, ln, "cover index"))
                .collect::<Result<Vec<u32>>>()?;
            level.push(covers);
        }
        down.push(level);
    }
    for (ln, line) in lines {
        if !line.trim().is_empty() {
            return Err(Error::parse(ln, "content after the last rank"));
        }
    }
    RankedPoset::new(r, down)
}

pub fn write_hg(h: &Hypergraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "hg r={} m={}", h.r(), h.edges().len());
    for e in h.edges() {
        let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    s
}

pub fn read_hg(text: &str) -> Result<Hypergraph> {
    let mut lines = text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)));
    let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("hg") {
        return Err(Error::parse(ln, "expected header `hg r=<r> m=<count>`"));
    }
    let r: u32 = parse_num(parse_kv(toks.next(), "r", ln)?, ln, "r")?;
    let m: usize = parse_num(parse_kv(toks.next(), "m", ln)?, ln, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| Error::parse(ln + 1, "missing hyperedge line"))?;
        edges.push(
            line.split_whitespace()
                .map(|t| parse_num(t, ln, "vertex"))
                .collect::<Result<Vec<u32>>>()?,
        );
    }
    for (ln, line) in lines {
        if !line.trim().is_empty() {
            return Err(Error::parse(ln, "content after the last hyperedge"));
        }
    }
    Hypergraph::new(r, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_cert;
    use crate::poset::{fibonacci_poset, young_lattice};

    #[test]
    fn dpo_layout() {
        let text = write_dpo(&young_lattice(2), false);
        assert_eq!(
            text,
            "dpo 1 r=1 ranks=2\nrank 0 1\n0:\nrank 1 1\n0: 0\nrank 2 2\n0: 0\n1: 0\n"
        );
        assert_eq!(read_dpo(&text).unwrap(), young_lattice(2));
    }

    #[test]
    fn dpo_round_trips() {
        for p in [young_lattice(6), fibonacci_poset(3, 3)] {
            let q = read_dpo(&write_dpo(&p, false)).unwrap();
            assert_eq!(q, p);
            let c = write_dpo(&p, true);
            let q = read_dpo(&c).unwrap();
            assert_eq!(canonical_cert(&q), canonical_cert(&p));
            assert_eq!(write_dpo(&q, true), c);
        }
    }

    #[test]
    fn dpo_errors_carry_line_numbers() {
        let bad = "dpo 1 r=1 ranks=1\nrank 0 1\n0:\nrank 1 1\n0: x\n";
        match read_dpo(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(read_dpo("dpo 2 r=1 ranks=0\n").is_err());
        assert!(read_dpo("dpo 1 r=1 ranks=0\nrank 0 1\n0:\nextra\n").is_err());
        // covers an element that does not exist
        assert!(read_dpo("dpo 1 r=1 ranks=1\nrank 0 1\n0:\nrank 1 1\n0: 3\n").is_err());
    }

    #[test]
    fn hg_round_trip() {
        let h =
            Hypergraph::new(4, vec![vec![1, 2, 3], vec![1, 4], vec![2, 4], vec![3, 4]]).unwrap();
        let text = write_hg(&h);
        assert_eq!(text, "hg r=4 m=4\n1 2 3\n1 4\n2 4\n3 4\n");
        assert_eq!(read_hg(&text).unwrap(), h);
        assert!(read_hg("hg r=2 m=2\n1 2\n").is_err());
    }
}
