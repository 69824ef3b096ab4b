//! Set partitions of ordinals, refinement, and fibres of surjections.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{Injection, Surjection};

/// A partition of `{0, .., n-1}` with blocks sorted internally and ordered by
/// their least element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in blocks.iter_mut() {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x >= n {
                    return Err(Error::InvalidPartition(format!("element {x} outside carrier {n}")));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidPartition(format!("element {x} in two blocks")));
                }
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("element {x} not covered")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { n, blocks })
    }

    /// Partition from a restricted growth string.
    fn from_rgs(rgs: &[usize]) -> Self {
        let k = rgs.iter().map(|&b| b + 1).max().unwrap_or(0);
        let mut blocks = vec![Vec::new(); k];
        for (x, &b) in rgs.iter().enumerate() {
            blocks[b].push(x);
        }
        Self { n: rgs.len(), blocks }
    }

    /// The partition into fibres of `s`.
    pub fn from_surjection(s: &Surjection) -> Self {
        let blocks = (0..s.target()).map(|i| s.preimage(i)).collect();
        Self::new(s.source(), blocks).expect("fibres of a surjection partition its source")
    }

    pub fn discrete(n: usize) -> Self {
        Self { n, blocks: (0..n).map(|x| vec![x]).collect() }
    }

    pub fn one_block(n: usize) -> Self {
        if n == 0 {
            return Self { n, blocks: vec![] };
        }
        Self { n, blocks: vec![(0..n).collect()] }
    }

    pub fn carrier(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of the block containing each element.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                out[x] = i;
            }
        }
        out
    }

    /// The canonical surjection onto the set of blocks.
    pub fn canonical_surjection(&self) -> Surjection {
        Surjection::new(self.blocks.len(), self.block_of()).expect("blocks are nonempty")
    }

    /// Monotone injections of the blocks.
    pub fn block_injections(&self) -> Vec<Injection> {
        self.blocks.iter().map(|b| Injection::new(self.n, b.clone()).expect("block")).collect()
    }

    /// Restriction to a subset, relabeled monotonically onto `{0, .., |subset|-1}`.
    pub fn restrict_to(&self, subset: &[usize]) -> Result<Partition> {
        let inj = Injection::from_subset(self.n, subset)?;
        let pos = inj.positions();
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().filter_map(|&x| pos[x]).collect::<Vec<_>>())
            .filter(|b: &Vec<usize>| !b.is_empty())
            .collect();
        Partition::new(inj.source(), blocks)
    }
}

/// All partitions of `n`, in restricted-growth-string order.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    if n == 0 {
        out.push(Partition { n: 0, blocks: vec![] });
        return out;
    }
    loop {
        out.push(Partition::from_rgs(&rgs));
        let mut k = n - 1;
        loop {
            if k == 0 {
                return out;
            }
            let prefix_max = rgs[..k].iter().copied().max().unwrap_or(0);
            if rgs[k] <= prefix_max {
                rgs[k] += 1;
                for r in rgs.iter_mut().skip(k + 1) {
                    *r = 0;
                }
                break;
            }
            k -= 1;
        }
    }
}

/// True iff every block of `tau` lies inside a block of `sigma`.
pub fn refines(tau: &Partition, sigma: &Partition) -> Result<bool> {
    if tau.n != sigma.n {
        return Err(Error::CarrierMismatch { expected: tau.n, found: sigma.n });
    }
    let of = sigma.block_of();
    Ok(tau.blocks.iter().all(|b| b.iter().all(|&x| of[x] == of[b[0]])))
}

/// The partition `sigma / tau` of the set of `tau`-blocks.
pub fn induced_partition(sigma: &Partition, tau: &Partition) -> Result<Partition> {
    if !refines(tau, sigma)? {
        return Err(Error::Precondition("tau does not refine sigma".into()));
    }
    let of = sigma.block_of();
    let mut blocks = vec![Vec::new(); sigma.len()];
    for (i, b) in tau.blocks.iter().enumerate() {
        blocks[of[b[0]]].push(i);
    }
    Partition::new(tau.len(), blocks)
}

/// Fibre of a surjection at a point: its size and the monotone injection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fibre {
    pub size: usize,
    pub inclusion: Injection,
}

pub fn fibres(s: &Surjection) -> Vec<Fibre> {
    (0..s.target())
        .map(|i| {
            let pre = s.preimage(i);
            Fibre { size: pre.len(), inclusion: Injection::new(s.source(), pre).expect("preimage") }
        })
        .collect()
}

/// The fibre map of `psi` with respect to `phi` at `i`: the surjection
/// `(phi∘psi)^{-1}(i) ↠ phi^{-1}(i)` between monotonically relabeled fibres.
pub fn fibre_map(psi: &Surjection, phi: &Surjection, i: usize) -> Result<Surjection> {
    if psi.target() != phi.source() {
        return Err(Error::NotComposable("fibre_map: psi and phi".into()));
    }
    if i >= phi.target() {
        return Err(Error::Precondition(format!("index {i} outside {}", phi.target())));
    }
    let upper = phi.preimage(i);
    let mut pos = vec![usize::MAX; phi.source()];
    for (k, &m) in upper.iter().enumerate() {
        pos[m] = k;
    }
    let values: Vec<usize> =
        (0..psi.source()).filter(|&l| phi.apply(psi.apply(l)) == i).map(|l| pos[psi.apply(l)]).collect();
    Surjection::new(upper.len(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: count set partitions by brute force over all functions
    /// `n -> n` modulo relabeling of their images.
    fn brute_force_count(n: usize) -> usize {
        use std::collections::BTreeSet;
        let mut seen = BTreeSet::new();
        let total = n.pow(n as u32).max(1);
        for code in 0..total {
            let mut c = code;
            let f: Vec<usize> = (0..n)
                .map(|_| {
                    let d = c % n.max(1);
                    c /= n.max(1);
                    d
                })
                .collect();
            let mut blocks: Vec<Vec<usize>> = vec![];
            for v in 0..n {
                let b: Vec<usize> = (0..n).filter(|&x| f[x] == v).collect();
                if !b.is_empty() {
                    blocks.push(b);
                }
            }
            blocks.sort();
            seen.insert(blocks);
        }
        seen.len()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_partitions(0).len(), 1);
        assert_eq!(enumerate_partitions(3).len(), 5);
        assert_eq!(enumerate_partitions(4).len(), 15);
        for n in 0..=7 {
            assert_eq!(enumerate_partitions(n).len(), brute_force_count(n), "n = {n}");
        }
        // Bell(8) = 4140
        assert_eq!(enumerate_partitions(8).len(), 4140);
    }

    #[test]
    fn enumeration_is_canonical_and_duplicate_free() {
        let ps = enumerate_partitions(5);
        let set: std::collections::BTreeSet<_> = ps.iter().cloned().collect();
        assert_eq!(set.len(), ps.len());
        for p in &ps {
            assert_eq!(&Partition::new(p.n, p.blocks.clone()).unwrap(), p);
        }
    }

    #[test]
    fn canonical_surjections() {
        assert!(Partition::discrete(3).canonical_surjection().is_identity());
        let p = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(p.canonical_surjection().values(), &[0, 0, 1]);
        assert_eq!(Partition::one_block(4).canonical_surjection().values(), &[0, 0, 0, 0]);
    }

    #[test]
    fn refinement_examples() {
        let a = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        let b = Partition::new(3, vec![vec![0, 2], vec![1]]).unwrap();
        assert!(refines(&a, &a).unwrap());
        assert!(refines(&Partition::discrete(3), &b).unwrap());
        assert!(!refines(&a, &b).unwrap());
        assert!(refines(&a, &Partition::one_block(3)).is_ok());
        assert!(refines(&a, &Partition::discrete(4)).is_err());
    }

    #[test]
    fn refinement_is_a_partial_order() {
        for n in 0..=5 {
            let ps = enumerate_partitions(n);
            for a in &ps {
                assert!(refines(a, a).unwrap());
                for b in &ps {
                    let ab = refines(a, b).unwrap();
                    if ab && refines(b, a).unwrap() {
                        assert_eq!(a, b);
                    }
                    if !ab {
                        continue;
                    }
                    for c in &ps {
                        if refines(b, c).unwrap() {
                            assert!(refines(a, c).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn induced_partition_examples() {
        let tau = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(induced_partition(&tau, &tau).unwrap(), Partition::discrete(2));
        let sigma = Partition::new(3, vec![vec![0, 2], vec![1]]).unwrap();
        assert_eq!(induced_partition(&sigma, &Partition::discrete(3)).unwrap(), sigma);
        let one = Partition::one_block(3);
        assert_eq!(induced_partition(&one, &tau).unwrap(), Partition::one_block(2));
        assert!(induced_partition(&tau, &sigma).is_err());
    }

    #[test]
    fn fibres_examples() {
        let id = Surjection::identity(3);
        assert!(fibres(&id).iter().all(|f| f.size == 1));
        let s = Surjection::new(2, vec![0, 0, 1]).unwrap();
        let fs = fibres(&s);
        assert_eq!(fs[0].inclusion.values(), &[0, 1]);
        assert_eq!(fs[1].inclusion.values(), &[2]);
        let t = Surjection::to_point(4).unwrap();
        assert_eq!(fibres(&t)[0].inclusion, Injection::identity(4));
    }

    #[test]
    fn fibres_recover_partition_blocks() {
        for n in 0..=5 {
            for p in enumerate_partitions(n) {
                let fs = fibres(&p.canonical_surjection());
                let blocks: Vec<Vec<usize>> = fs.iter().map(|f| f.inclusion.values().to_vec()).collect();
                assert_eq!(blocks, p.blocks());
            }
        }
    }

    #[test]
    fn fibre_map_examples() {
        let psi = Surjection::new(3, vec![0, 0, 1, 2]).unwrap();
        let to_point = Surjection::to_point(3).unwrap();
        assert_eq!(fibre_map(&psi, &to_point, 0).unwrap(), psi);
        let phi = Surjection::new(2, vec![0, 0, 1]).unwrap();
        let m = fibre_map(&psi, &phi, 0).unwrap();
        assert_eq!((m.source(), m.target()), (3, 2));
        assert_eq!(m.values(), &[0, 0, 1]);
        let id = Surjection::identity(3);
        for i in 0..2 {
            assert!(fibre_map(&id, &phi, i).unwrap().is_identity());
        }
        assert!(fibre_map(&psi, &phi, 2).is_err());
    }

    #[test]
    fn fibre_maps_are_transitive() {
        // The j-fibre map of the i-fibre map of h equals the (εj)-fibre map of h.
        for l in 1..=5 {
            for m in 1..=l {
                for n in 1..=m {
                    for h in Surjection::enumerate(l, m).iter().step_by(3) {
                        for g in Surjection::enumerate(m, n) {
                            for f_target in 1..=n {
                                for f in Surjection::enumerate(n, f_target).iter().take(4) {
                                    for i in 0..f_target {
                                        let hi = fibre_map(h, &g.then(f).unwrap(), i).unwrap();
                                        let gi = fibre_map(&g, f, i).unwrap();
                                        let eps = f.preimage(i);
                                        for (j, &ej) in eps.iter().enumerate() {
                                            let lhs = fibre_map(&hi, &gi, j).unwrap();
                                            let rhs = fibre_map(h, &g, ej).unwrap();
                                            assert_eq!(lhs, rhs);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
