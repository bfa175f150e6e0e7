//! DIMACS shortest-path graphs (`.gr`).
//!
//! ```text
//! c comment
//! p sp <n> <m>
//! a <u> <v> <w>
//! ```
//!
//! Vertices are numbered from 1 in the file and from 0 in [`Graph`].

use std::fmt::Write as _;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: negative weight {weight} on arc {u} -> {v}")]
    NegativeWeight { line: usize, u: u64, v: u64, weight: i64 },
}

/// Directed graph in compressed adjacency form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    offsets: Vec<usize>,
    heads: Vec<u32>,
    weights: Vec<u64>,
}

impl Graph {
    /// Arcs `(u, v, w)` on vertices `0..n`.
    pub fn from_arcs(n: usize, arcs: &[(u32, u32, u64)]) -> Graph {
        let mut offsets = vec![0usize; n + 1];
        for &(u, _, _) in arcs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut heads = vec![0u32; arcs.len()];
        let mut weights = vec![0u64; arcs.len()];
        for &(u, v, w) in arcs {
            let i = fill[u as usize];
            heads[i] = v;
            weights[i] = w;
            fill[u as usize] += 1;
        }
        Graph { n, offsets, heads, weights }
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> usize {
        self.heads.len()
    }

    /// `(head, weight)` of every arc leaving `u`.
    pub fn out(&self, u: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let r = self.offsets[u]..self.offsets[u + 1];
        self.heads[r.clone()].iter().zip(&self.weights[r]).map(|(&v, &w)| (v as usize, w))
    }

    pub fn parse(text: &str) -> Result<Graph, DimacsError> {
        let mut header: Option<(usize, usize)> = None;
        let mut arcs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| DimacsError::Syntax { line, msg };
            let tok: Vec<&str> = raw.split_whitespace().collect();
            match tok.first().copied() {
                None | Some("c") => {}
                Some("p") => {
                    if header.is_some() {
                        return Err(err("second problem line".into()));
                    }
                    if tok.len() != 4 || tok[1] != "sp" {
                        return Err(err("expected `p sp <n> <m>`".into()));
                    }
                    let n = tok[2].parse().map_err(|_| err(format!("bad vertex count `{}`", tok[2])))?;
                    let m = tok[3].parse().map_err(|_| err(format!("bad arc count `{}`", tok[3])))?;
                    header = Some((n, m));
                    arcs.reserve(m);
                }
                Some("a") => {
                    let (n, _) = header.ok_or_else(|| err("arc before the problem line".into()))?;
                    if tok.len() != 4 {
                        return Err(err("expected `a <u> <v> <w>`".into()));
                    }
                    let vertex = |s: &str| -> Result<u64, DimacsError> {
                        match s.parse::<u64>() {
                            Ok(x) if x >= 1 && x <= n as u64 => Ok(x),
                            _ => Err(err(format!("vertex `{s}` out of range 1..={n}"))),
                        }
                    };
                    let (u, v) = (vertex(tok[1])?, vertex(tok[2])?);
                    let w: i64 = tok[3].parse().map_err(|_| err(format!("bad weight `{}`", tok[3])))?;
                    if w < 0 {
                        return Err(DimacsError::NegativeWeight { line, u, v, weight: w });
                    }
                    arcs.push((u as u32 - 1, v as u32 - 1, w as u64));
                }
                Some(other) => return Err(err(format!("unknown line type `{other}`"))),
            }
        }
        let (n, m) = header.ok_or(DimacsError::Syntax { line: 0, msg: "missing problem line".into() })?;
        if arcs.len() != m {
            return Err(DimacsError::Syntax {
                line: 0,
                msg: format!("problem line promises {m} arcs, found {}", arcs.len()),
            });
        }
        Ok(Graph::from_arcs(n, &arcs))
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = String::with_capacity(self.arcs() * 16);
        let _ = writeln!(s, "p sp {} {}", self.n, self.arcs());
        for u in 0..self.n {
            for (v, w) in self.out(u) {
                let _ = writeln!(s, "a {} {} {w}", u + 1, v + 1);
            }
        }
        s
    }
}

/// `m` arcs with uniform random endpoints (no loops) and weights in
/// `1..=max_weight`.
pub fn random_graph(n: usize, m: usize, max_weight: u64, seed: u64) -> Graph {
    assert!(n >= 2 && max_weight >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arcs: Vec<(u32, u32, u64)> = (0..m)
        .map(|_| {
            let u = rng.random_range(0..n as u32);
            let mut v = rng.random_range(0..n as u32 - 1);
            if v >= u {
                v += 1;
            }
            (u, v, rng.random_range(1..=max_weight))
        })
        .collect();
    Graph::from_arcs(n, &arcs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let g = Graph::parse("c tiny\np sp 3 2\na 1 2 4\n\na 2 3 5\n").unwrap();
        assert_eq!((g.vertices(), g.arcs()), (3, 2));
        assert_eq!(g.out(0).collect::<Vec<_>>(), vec![(1, 4)]);
        assert_eq!(Graph::parse(&g.to_dimacs()).unwrap(), g);
    }

    #[test]
    fn rejects_bad_input() {
        let e = Graph::parse("p sp 2 1\na 1 2 -3\n").unwrap_err();
        assert!(matches!(e, DimacsError::NegativeWeight { line: 2, weight: -3, .. }));
        let e = Graph::parse("p sp 2 1\na 1 3 1\n").unwrap_err();
        assert!(matches!(e, DimacsError::Syntax { line: 2, .. }));
        assert!(Graph::parse("a 1 2 1\n").is_err());
        assert!(Graph::parse("p sp 2 2\na 1 2 1\n").is_err());
        assert!(Graph::parse("p sp 2 1\nx\n").unwrap_err().to_string().starts_with("line 2"));
    }

    #[test]
    fn random_graphs_are_reproducible() {
        let a = random_graph(50, 200, 100, 3);
        assert_eq!(a, random_graph(50, 200, 100, 3));
        assert_eq!(a.arcs(), 200);
        assert!((0..50).all(|u| a.out(u).all(|(v, w)| v != u && (1..=100).contains(&w))));
    }
}
