//! Kontsevich admissible graphs: aerial vertices `1..n` with ordered stars,
//! boundary vertices `1̄..n̄`, no short loops.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex of a graph. Indices are 0-based; the text form is 1-based
/// (`3` for the third aerial vertex, `b2` for the second boundary vertex).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Aerial(usize),
    Boundary(usize),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Aerial(k) => write!(f, "{}", k + 1),
            Vertex::Boundary(k) => write!(f, "b{}", k + 1),
        }
    }
}

impl FromStr for Vertex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad vertex {s:?}"));
        let (boundary, digits) = match s.strip_prefix('b') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let k: usize = digits.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        Ok(if boundary {
            Vertex::Boundary(k - 1)
        } else {
            Vertex::Aerial(k - 1)
        })
    }
}

/// Directed graph with ordered stars.
///
/// `stars[v]` lists the targets of the edges leaving vertex `v`, in order.
/// Aerial vertices come first (`0..n`), then boundary vertices
/// (`n..n+nbar`). Admissible graphs have empty boundary stars; the slots
/// exist so that non-admissible inputs can still be represented and
/// rejected.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    nbar: usize,
    stars: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Graph whose edges all start at aerial vertices.
    pub fn new(n: usize, nbar: usize, aerial_stars: Vec<Vec<Vertex>>) -> Self {
        let mut stars = aerial_stars;
        stars.resize(n.max(stars.len()) + nbar, Vec::new());
        Graph { n, nbar, stars }
    }

    /// Graph with an explicit star for every vertex, boundary ones included.
    pub fn with_all_stars(n: usize, nbar: usize, stars: Vec<Vec<Vertex>>) -> Self {
        Graph { n, nbar, stars }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nbar(&self) -> usize {
        self.nbar
    }

    pub fn star(&self, v: usize) -> &[Vertex] {
        &self.stars[v]
    }

    pub fn aerial_stars(&self) -> &[Vec<Vertex>] {
        &self.stars[..self.n.min(self.stars.len())]
    }

    pub fn edge_count(&self) -> usize {
        self.stars.iter().map(Vec::len).sum()
    }

    /// Edges in weight-form order: by source vertex, then star order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, Vertex)> + '_ {
        self.aerial_stars()
            .iter()
            .enumerate()
            .flat_map(|(v, st)| st.iter().map(move |&t| (v, t)))
    }

    /// The dimension count `2n + n̄ − 2` of the reduced configuration space.
    pub fn expected_edge_count(&self) -> Option<usize> {
        (2 * self.n + self.nbar).checked_sub(2)
    }

    pub fn has_parallel_edges(&self) -> bool {
        self.aerial_stars().iter().any(|st| {
            st.iter()
                .enumerate()
                .any(|(i, t)| st[i + 1..].contains(t))
        })
    }

    pub fn is_admissible(&self) -> bool {
        if 2 * self.n + self.nbar < 2 {
            return false;
        }
        if self.stars.len() != self.n + self.nbar {
            return false;
        }
        // edges start only at aerial vertices
        if self.stars[self.n..].iter().any(|s| !s.is_empty()) {
            return false;
        }
        for (v, st) in self.aerial_stars().iter().enumerate() {
            for t in st {
                match *t {
                    Vertex::Aerial(k) if k == v || k >= self.n => return false,
                    Vertex::Boundary(k) if k >= self.nbar => return false,
                    _ => {}
                }
            }
        }
        true
    }

    pub fn id(&self) -> Result<GraphId> {
        canonical_id(self)
    }
}

/// Canonical text identifier `<n>;<nbar>;[t,t],...,[t,t]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GraphId(String);

impl GraphId {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn parse(s: &str) -> Result<Self> {
        let g = parse_graph(s)?;
        canonical_id(&g)
    }

    pub fn graph(&self) -> Graph {
        parse_graph(&self.0).expect("GraphId always holds a valid serialization")
    }
}

impl FromStr for GraphId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GraphId::parse(s)
    }
}

impl TryFrom<String> for GraphId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        GraphId::parse(&s)
    }
}

impl From<GraphId> for String {
    fn from(id: GraphId) -> String {
        id.0
    }
}

impl fmt::Display for GraphId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn canonical_id(g: &Graph) -> Result<GraphId> {
    if !g.is_admissible() {
        return Err(Error::NotAdmissible);
    }
    let stars: Vec<String> = g
        .aerial_stars()
        .iter()
        .map(|st| {
            let ts: Vec<String> = st.iter().map(Vertex::to_string).collect();
            format!("[{}]", ts.join(","))
        })
        .collect();
    Ok(GraphId(format!("{};{};{}", g.n, g.nbar, stars.join(","))))
}

pub fn parse_graph(s: &str) -> Result<Graph> {
    let bad = |why: &str| Error::Parse(format!("bad graph id {s:?}: {why}"));
    let mut parts = s.trim().splitn(3, ';');
    let n: usize = parts
        .next()
        .and_then(|x| x.trim().parse().ok())
        .ok_or_else(|| bad("n"))?;
    let nbar: usize = parts
        .next()
        .and_then(|x| x.trim().parse().ok())
        .ok_or_else(|| bad("nbar"))?;
    let body = parts.next().ok_or_else(|| bad("missing stars"))?.trim();
    let mut stars = Vec::with_capacity(n);
    let mut rest = body;
    while !rest.is_empty() {
        let inner = rest.strip_prefix('[').ok_or_else(|| bad("expected '['"))?;
        let close = inner.find(']').ok_or_else(|| bad("unclosed star"))?;
        let star: Vec<Vertex> = if inner[..close].trim().is_empty() {
            Vec::new()
        } else {
            inner[..close]
                .split(',')
                .map(Vertex::from_str)
                .collect::<Result<_>>()?
        };
        stars.push(star);
        rest = inner[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(bad("trailing comma"));
            }
        } else if !rest.is_empty() {
            return Err(bad("expected ','"));
        }
    }
    if stars.len() != n {
        return Err(bad("star count differs from n"));
    }
    let g = Graph::new(n, nbar, stars);
    if !g.is_admissible() {
        return Err(Error::NotAdmissible);
    }
    Ok(g)
}

/// All labeled admissible graphs in `G_{n,n̄}` whose aerial vertices each
/// have exactly `out_degree` ordered edges, in lexicographic order of the
/// star lists. Parallel edges are allowed; self-loops are not.
pub fn enumerate(n: usize, nbar: usize, out_degree: usize) -> Result<Vec<Graph>> {
    if 2 * n + nbar < 2 {
        return Err(Error::InvalidCounts { n, nbar });
    }
    let targets_for = |v: usize| -> Vec<Vertex> {
        (0..n)
            .filter(|&k| k != v)
            .map(Vertex::Aerial)
            .chain((0..nbar).map(Vertex::Boundary))
            .collect()
    };
    // all ordered stars per vertex
    let per_vertex: Vec<Vec<Vec<Vertex>>> = (0..n)
        .map(|v| {
            let ts = targets_for(v);
            let mut stars = vec![Vec::new()];
            for _ in 0..out_degree {
                stars = stars
                    .into_iter()
                    .flat_map(|s| {
                        ts.iter().map(move |&t| {
                            let mut s2 = s.clone();
                            s2.push(t);
                            s2
                        })
                    })
                    .collect();
            }
            stars
        })
        .collect();

    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        let stars = (0..n).map(|v| per_vertex[v][choice[v]].clone()).collect();
        out.push(Graph::new(n, nbar, stars));
        // odometer, last vertex fastest
        let mut v = n;
        loop {
            if v == 0 {
                return Ok(out);
            }
            v -= 1;
            choice[v] += 1;
            if choice[v] < per_vertex[v].len() {
                break;
            }
            choice[v] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;
    use Vertex::{Aerial as A, Boundary as B};

    fn wedge() -> Graph {
        Graph::new(1, 2, vec![vec![B(0), B(1)]])
    }

    #[test]
    fn wedge_is_admissible() {
        assert!(wedge().is_admissible());
    }

    #[test]
    fn boundary_source_is_rejected() {
        let g = Graph::with_all_stars(1, 2, vec![vec![B(0), B(1)], vec![A(0)], vec![]]);
        assert!(!g.is_admissible());
    }

    #[test]
    fn self_loop_is_rejected() {
        let g = Graph::new(2, 2, vec![vec![B(0), A(0)], vec![B(0), B(1)]]);
        assert!(!g.is_admissible());
    }

    #[test]
    fn dangling_target_is_rejected() {
        assert!(!Graph::new(1, 2, vec![vec![B(0), B(2)]]).is_admissible());
        assert!(!Graph::new(1, 2, vec![vec![B(0), A(1)]]).is_admissible());
        assert!(!Graph::new(0, 1, vec![]).is_admissible());
    }

    #[test]
    fn enumerate_single_vertex() {
        let gs = enumerate(1, 2, 2).unwrap();
        let ids: Vec<String> = gs.iter().map(|g| g.id().unwrap().to_string()).collect();
        assert_eq!(ids, ["1;2;[b1,b1]", "1;2;[b1,b2]", "1;2;[b2,b1]", "1;2;[b2,b2]"]);
    }

    #[test]
    fn enumerate_empty_graph() {
        let gs = enumerate(0, 2, 2).unwrap();
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].edge_count(), 0);
        assert_eq!(gs[0].id().unwrap().as_str(), "0;2;");
        assert_eq!(GraphId::parse("0;2;").unwrap().graph(), gs[0]);
    }

    #[test]
    fn enumerate_rejects_invalid_counts() {
        assert!(enumerate(0, 1, 2).is_err());
        assert!(enumerate(0, 0, 2).is_err());
    }

    /// Exhaustive oracle: every assignment of ordered targets from all
    /// `n + nbar` vertices, filtered by admissibility.
    fn brute_force_count(n: usize, nbar: usize) -> usize {
        let all: Vec<Vertex> = (0..n).map(A).chain((0..nbar).map(B)).collect();
        let slots = 2 * n;
        let mut count = 0;
        let total = all.len().pow(slots as u32);
        for code in 0..total {
            let mut c = code;
            let mut stars = vec![Vec::new(); n];
            for s in 0..slots {
                stars[s / 2].push(all[c % all.len()]);
                c /= all.len();
            }
            if Graph::new(n, nbar, stars).is_admissible() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn enumeration_count_matches_oracle() {
        for n in 0..=3 {
            let gs = enumerate(n, 2, 2).unwrap();
            assert_eq!(gs.len(), brute_force_count(n, 2), "n = {n}");
            assert_eq!(gs.len(), (n + 1).pow(2 * n as u32));
            let ids: HashSet<_> = gs.iter().map(|g| g.id().unwrap()).collect();
            assert_eq!(ids.len(), gs.len());
            assert!(gs.iter().all(Graph::is_admissible));
        }
    }

    #[test]
    fn id_round_trip_and_injectivity() {
        for g in enumerate(2, 2, 2).unwrap() {
            let id = g.id().unwrap();
            assert_eq!(id.graph(), g);
            assert_eq!(GraphId::parse(id.as_str()).unwrap(), id);
        }
        let a = Graph::new(1, 2, vec![vec![B(0), B(1)]]).id().unwrap();
        let b = Graph::new(1, 2, vec![vec![B(1), B(0)]]).id().unwrap();
        assert_ne!(a, b);
        assert_eq!(a.as_str(), "1;2;[b1,b2]");
    }

    #[test]
    fn malformed_ids() {
        for s in ["", "1;2", "1;2;[b1,b2", "1;2;[b1,b2],", "1;2;[b1,b0]", "1;2;[1,b1]", "2;2;[b1,b2]"] {
            assert!(GraphId::parse(s).is_err(), "{s}");
        }
        assert!(canonical_id(&Graph::new(1, 2, vec![vec![A(0), B(0)]])).is_err());
    }

    #[test]
    fn parallel_edges_detected() {
        assert!(Graph::new(1, 2, vec![vec![B(0), B(0)]]).has_parallel_edges());
        assert!(!wedge().has_parallel_edges());
    }
}
