use crate::error::{Error, Result};
use crate::maps::{Injection, Surjection};

use super::{HStructure, HereditarySpecies};

/// The species with exactly one structure on every set.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sets;

impl HereditarySpecies for Sets {
    fn name(&self) -> &str {
        "sets"
    }

    fn structures(&self, n: usize) -> Vec<HStructure> {
        vec![HStructure::bare(n)]
    }

    fn validate(&self, x: &HStructure) -> Result<()> {
        if !x.payload.is_empty() {
            return Err(Error::InvalidStructure("sets carry no payload".into()));
        }
        Ok(())
    }

    fn restrict_along(&self, _x: &HStructure, i: &Injection) -> HStructure {
        HStructure::bare(i.source())
    }

    fn quotient_along(&self, _x: &HStructure, p: &Surjection) -> HStructure {
        HStructure::bare(p.target())
    }
}

/// Simple graphs. Restriction takes induced subgraphs; a quotient has an edge
/// between two blocks iff some edge of the original runs between them.
#[derive(Clone, Copy, Debug, Default)]
pub struct Graphs;

pub(crate) fn all_graphs(n: usize) -> Vec<HStructure> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut out: Vec<HStructure> = (0u64..(1 << pairs.len()))
        .map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, &e)| e).collect();
            HStructure::new(n, edges)
        })
        .collect();
    out.sort();
    out
}

fn validate_graph(x: &HStructure) -> Result<()> {
    for w in x.payload.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidStructure("edges not sorted or repeated".into()));
        }
    }
    for &(a, b) in &x.payload {
        if a >= b {
            return Err(Error::InvalidStructure(format!("edge ({a},{b}) is a loop or not normalized")));
        }
        if b >= x.n {
            return Err(Error::InvalidStructure(format!("edge ({a},{b}) outside {} vertices", x.n)));
        }
    }
    Ok(())
}

pub(crate) fn induced_subgraph(x: &HStructure, i: &Injection) -> HStructure {
    let pos = i.positions();
    let edges = x.payload.iter().filter_map(|&(a, b)| Some((pos[a]?, pos[b]?))).map(|(a, b)| (a.min(b), a.max(b))).collect();
    HStructure::new(i.source(), edges)
}

pub(crate) fn contracted_graph(x: &HStructure, p: &Surjection) -> HStructure {
    let edges = x
        .payload
        .iter()
        .map(|&(a, b)| (p.apply(a), p.apply(b)))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    HStructure::new(p.target(), edges)
}

impl HereditarySpecies for Graphs {
    fn name(&self) -> &str {
        "graphs"
    }

    fn structures(&self, n: usize) -> Vec<HStructure> {
        all_graphs(n)
    }

    fn validate(&self, x: &HStructure) -> Result<()> {
        validate_graph(x)
    }

    fn restrict_along(&self, x: &HStructure, i: &Injection) -> HStructure {
        induced_subgraph(x, i)
    }

    fn quotient_along(&self, x: &HStructure, p: &Surjection) -> HStructure {
        contracted_graph(x, p)
    }
}

/// Negative control: graphs whose quotient forgets every edge as soon as
/// two vertices are merged. Violates Beck–Chevalley.
#[derive(Clone, Copy, Debug, Default)]
pub struct EdgeDroppingGraphs;

impl HereditarySpecies for EdgeDroppingGraphs {
    fn name(&self) -> &str {
        "edge-dropping-graphs"
    }

    fn structures(&self, n: usize) -> Vec<HStructure> {
        all_graphs(n)
    }

    fn validate(&self, x: &HStructure) -> Result<()> {
        validate_graph(x)
    }

    fn restrict_along(&self, x: &HStructure, i: &Injection) -> HStructure {
        induced_subgraph(x, i)
    }

    fn quotient_along(&self, x: &HStructure, p: &Surjection) -> HStructure {
        if p.is_bijection() {
            contracted_graph(x, p)
        } else {
            HStructure::bare(p.target())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_counts() {
        assert_eq!(all_graphs(0).len(), 1);
        assert_eq!(all_graphs(3).len(), 8);
        assert_eq!(all_graphs(4).len(), 64);
        for g in all_graphs(4) {
            Graphs.validate(&g).unwrap();
        }
    }

    #[test]
    fn invalid_graphs_rejected() {
        assert!(Graphs.validate(&HStructure { n: 2, payload: vec![(1, 1)] }).is_err());
        assert!(Graphs.validate(&HStructure { n: 2, payload: vec![(0, 2)] }).is_err());
        assert!(Sets.validate(&HStructure { n: 2, payload: vec![(0, 1)] }).is_err());
    }
}
