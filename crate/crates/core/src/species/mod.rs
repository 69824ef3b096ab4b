//! Hereditary species: structures on finite ordinals, functorial
//! contravariantly in injections and covariantly in surjections.

mod instances;
pub mod laws;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{Injection, PartialSurjection, Surjection};
use crate::partitions::Partition;

pub use instances::{EdgeDroppingGraphs, Graphs, Sets};

/// A structure on the ordinal `n`. The payload is a sorted list of index
/// pairs whose meaning belongs to the species (edges for graphs, nothing
/// for sets).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HStructure {
    pub n: usize,
    pub payload: Vec<(usize, usize)>,
}

impl HStructure {
    pub fn new(n: usize, mut payload: Vec<(usize, usize)>) -> Self {
        payload.sort_unstable();
        payload.dedup();
        Self { n, payload }
    }

    pub fn bare(n: usize) -> Self {
        Self { n, payload: Vec::new() }
    }

    pub fn carrier(&self) -> usize {
        self.n
    }
}

pub trait HereditarySpecies: Send + Sync {
    fn name(&self) -> &str;

    /// Every structure on the ordinal `n`, in increasing order.
    fn structures(&self, n: usize) -> Vec<HStructure>;

    fn validate(&self, x: &HStructure) -> Result<()>;

    /// `H[i]`: restriction along `i: U ↣ carrier(x)`, landing on `U`.
    fn restrict_along(&self, x: &HStructure, i: &Injection) -> HStructure;

    /// `H[p]`: transport along `p: carrier(x) ↠ W`.
    fn quotient_along(&self, x: &HStructure, p: &Surjection) -> HStructure;

    /// Simple species have exactly one structure on a singleton.
    fn is_simple(&self) -> bool {
        self.structures(1).len() == 1
    }
}

pub type SpeciesRef = Arc<dyn HereditarySpecies>;

/// Names accepted by [`species_by_name`].
pub const REGISTERED: &[&str] = &["sets", "graphs"];

pub fn species_by_name(name: &str) -> Result<SpeciesRef> {
    match name {
        "sets" => Ok(Arc::new(Sets)),
        "graphs" => Ok(Arc::new(Graphs)),
        other => Err(Error::UnknownSpecies(other.to_string())),
    }
}

/// Covariant action of a partial surjection: restrict along the injective
/// leg, then transport along the surjective leg.
pub fn act(h: &dyn HereditarySpecies, a: &PartialSurjection, x: &HStructure) -> Result<HStructure> {
    if a.source() != x.n {
        return Err(Error::CarrierMismatch { expected: a.source(), found: x.n });
    }
    let restricted = h.restrict_along(x, a.leg_in());
    Ok(h.quotient_along(&restricted, a.leg_out()))
}

/// `x|U`, on the monotone relabeling of `U`.
pub fn restrict(h: &dyn HereditarySpecies, x: &HStructure, subset: &[usize]) -> Result<HStructure> {
    let i = Injection::from_subset(x.n, subset)
        .map_err(|_| Error::Precondition(format!("{subset:?} is not a subset of {}", x.n)))?;
    Ok(h.restrict_along(x, &i))
}

/// `x/π`, on the ordinal of blocks ordered by least element.
pub fn quotient(h: &dyn HereditarySpecies, x: &HStructure, pi: &Partition) -> Result<HStructure> {
    if pi.carrier() != x.n {
        return Err(Error::CarrierMismatch { expected: x.n, found: pi.carrier() });
    }
    Ok(h.quotient_along(x, &pi.canonical_surjection()))
}

/// The family `x|π` of blockwise restrictions.
pub fn restrict_blocks(h: &dyn HereditarySpecies, x: &HStructure, pi: &Partition) -> Result<Vec<HStructure>> {
    if pi.carrier() != x.n {
        return Err(Error::CarrierMismatch { expected: x.n, found: pi.carrier() });
    }
    Ok(pi.block_injections().iter().map(|i| h.restrict_along(x, i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> HStructure {
        HStructure::new(3, vec![(0, 1), (1, 2)])
    }

    #[test]
    fn identity_span_acts_trivially() {
        let g = path3();
        assert_eq!(act(&Graphs, &PartialSurjection::identity(3), &g).unwrap(), g);
    }

    #[test]
    fn induced_subgraph_on_endpoints() {
        let a = PartialSurjection::from_injection(Injection::new(3, vec![0, 2]).unwrap());
        assert_eq!(act(&Graphs, &a, &path3()).unwrap(), HStructure::bare(2));
    }

    #[test]
    fn contraction_of_a_path() {
        let a = PartialSurjection::from_surjection(Surjection::new(2, vec![0, 0, 1]).unwrap());
        assert_eq!(act(&Graphs, &a, &path3()).unwrap(), HStructure::new(2, vec![(0, 1)]));
        let pi = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(quotient(&Graphs, &path3(), &pi).unwrap(), HStructure::new(2, vec![(0, 1)]));
    }

    #[test]
    fn carrier_mismatch_is_an_error() {
        let a = PartialSurjection::identity(2);
        assert!(matches!(act(&Graphs, &a, &path3()), Err(Error::CarrierMismatch { .. })));
        assert!(restrict(&Graphs, &path3(), &[0, 5]).is_err());
        assert!(quotient(&Graphs, &path3(), &Partition::discrete(2)).is_err());
    }

    #[test]
    fn restriction_examples() {
        let g = path3();
        assert_eq!(restrict(&Graphs, &g, &[0, 1, 2]).unwrap(), g);
        let triangle = HStructure::new(3, vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(restrict(&Graphs, &triangle, &[0, 1]).unwrap(), HStructure::new(2, vec![(0, 1)]));
        assert_eq!(restrict(&Sets, &HStructure::bare(4), &[1, 3]).unwrap(), HStructure::bare(2));
    }

    #[test]
    fn quotient_examples() {
        let g = path3();
        assert_eq!(quotient(&Graphs, &g, &Partition::discrete(3)).unwrap(), g);
        let edgeless = HStructure::bare(4);
        for pi in crate::partitions::enumerate_partitions(4) {
            assert_eq!(quotient(&Graphs, &edgeless, &pi).unwrap(), HStructure::bare(pi.len()));
        }
    }

    #[test]
    fn registry() {
        assert_eq!(species_by_name("graphs").unwrap().name(), "graphs");
        assert!(species_by_name("sets").unwrap().is_simple());
        assert!(matches!(species_by_name("trees"), Err(Error::UnknownSpecies(_))));
    }
}
