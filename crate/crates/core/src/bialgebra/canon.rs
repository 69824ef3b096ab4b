//! Orbit minimization over carrier permutations.

use serde::{Deserialize, Serialize};

use crate::maps::Surjection;
use crate::species::{HStructure, HereditarySpecies};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IsoClass {
    pub rep: HStructure,
    pub aut: usize,
}

impl IsoClass {
    pub fn carrier(&self) -> usize {
        self.rep.n
    }
}

/// Visits every permutation of `0..n` as a value vector (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn perm(values: &[usize]) -> Surjection {
    Surjection::new(values.len(), values.to_vec()).expect("permutation")
}

/// The minimal relabeling of `x` together with one permutation reaching it
/// and the number of automorphisms.
pub fn canonical_with_iso(h: &dyn HereditarySpecies, x: &HStructure) -> (HStructure, Surjection, usize) {
    let mut best: Option<(HStructure, Vec<usize>)> = None;
    let mut aut = 0;
    for_each_permutation(x.n, |p| {
        let y = h.quotient_along(x, &perm(p));
        if &y == x {
            aut += 1;
        }
        match &best {
            Some((b, _)) if *b <= y => {}
            _ => best = Some((y, p.to_vec())),
        }
    });
    let (rep, p) = best.expect("at least the identity");
    (rep, perm(&p), aut)
}

pub fn canonical_form(h: &dyn HereditarySpecies, x: &HStructure) -> IsoClass {
    let (rep, _, aut) = canonical_with_iso(h, x);
    IsoClass { rep, aut }
}

/// Carrier permutations fixing `x`.
pub fn automorphisms(h: &dyn HereditarySpecies, x: &HStructure) -> Vec<Surjection> {
    let mut out = Vec::new();
    for_each_permutation(x.n, |p| {
        let s = perm(p);
        if &h.quotient_along(x, &s) == x {
            out.push(s);
        }
    });
    out
}

/// Isomorphism classes of structures on `n`, in increasing order.
pub fn iso_classes(h: &dyn HereditarySpecies, n: usize) -> Vec<IsoClass> {
    let mut out: Vec<IsoClass> = h.structures(n).iter().map(|x| canonical_form(h, x)).collect();
    out.sort();
    out.dedup();
    out
}
