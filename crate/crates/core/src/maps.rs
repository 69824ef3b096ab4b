//! Injections, surjections and partial surjections between finite ordinals.
//!
//! Ordinals are `{0, .., n-1}` internally; JSON and text formats are 1-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The finite ordinal `{0, .., n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Ordinal(pub usize);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Injection {
    target: usize,
    values: Vec<usize>,
}

impl Injection {
    pub fn new(target: usize, values: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; target];
        for &v in &values {
            if v >= target {
                return Err(Error::InvalidInjection(format!("value {v} outside target {target}")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidInjection(format!("value {v} repeated")));
            }
        }
        Ok(Self { target, values })
    }

    pub fn identity(n: usize) -> Self {
        Self { target: n, values: (0..n).collect() }
    }

    /// The unique monotone injection whose image is `subset`.
    pub fn from_subset(target: usize, subset: &[usize]) -> Result<Self> {
        let mut values = subset.to_vec();
        values.sort_unstable();
        values.dedup();
        if values.len() != subset.len() {
            return Err(Error::InvalidInjection("subset has repeated elements".into()));
        }
        Self::new(target, values)
    }

    pub fn source(&self) -> usize {
        self.values.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Injection) -> Result<Injection> {
        if self.target != other.source() {
            return Err(Error::NotComposable(format!(
                "injection into {} followed by injection from {}",
                self.target,
                other.source()
            )));
        }
        Ok(Injection { target: other.target, values: self.values.iter().map(|&v| other.values[v]).collect() })
    }

    /// Preimage lookup: `position[v] = Some(u)` iff `self(u) = v`.
    pub fn positions(&self) -> Vec<Option<usize>> {
        let mut pos = vec![None; self.target];
        for (u, &v) in self.values.iter().enumerate() {
            pos[v] = Some(u);
        }
        pos
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Surjection {
    target: usize,
    values: Vec<usize>,
}

impl Surjection {
    pub fn new(target: usize, values: Vec<usize>) -> Result<Self> {
        let mut hit = vec![false; target];
        for &v in &values {
            if v >= target {
                return Err(Error::InvalidSurjection(format!("value {v} outside target {target}")));
            }
            hit[v] = true;
        }
        if let Some(missed) = hit.iter().position(|h| !h) {
            return Err(Error::InvalidSurjection(format!("target element {missed} not hit")));
        }
        Ok(Self { target, values })
    }

    pub fn identity(n: usize) -> Self {
        Self { target: n, values: (0..n).collect() }
    }

    /// The map `n ↠ 1`. Only a surjection when `n > 0`.
    pub fn to_point(n: usize) -> Result<Self> {
        Self::new(1, vec![0; n])
    }

    pub fn source(&self) -> usize {
        self.values.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn is_bijection(&self) -> bool {
        self.values.len() == self.target
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Surjection) -> Result<Surjection> {
        if self.target != other.source() {
            return Err(Error::NotComposable(format!(
                "surjection onto {} followed by surjection from {}",
                self.target,
                other.source()
            )));
        }
        Ok(Surjection { target: other.target, values: self.values.iter().map(|&v| other.values[v]).collect() })
    }

    pub fn inverse(&self) -> Option<Surjection> {
        if !self.is_bijection() {
            return None;
        }
        let mut inv = vec![0; self.target];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v] = i;
        }
        Some(Surjection { target: self.values.len(), values: inv })
    }

    /// Preimage of `i`, in increasing order.
    pub fn preimage(&self, i: usize) -> Vec<usize> {
        self.values.iter().enumerate().filter(|(_, &v)| v == i).map(|(u, _)| u).collect()
    }

    /// All surjections `source ↠ target`, in lexicographic order of values.
    pub fn enumerate(source: usize, target: usize) -> Vec<Surjection> {
        let mut out = Vec::new();
        if source < target || (target == 0 && source > 0) {
            return out;
        }
        let mut values = vec![0; source];
        loop {
            if let Ok(s) = Surjection::new(target, values.clone()) {
                out.push(s);
            }
            let mut k = source;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                values[k] += 1;
                if values[k] < target {
                    break;
                }
                values[k] = 0;
            }
        }
    }

    /// All bijections of `n`.
    pub fn permutations(n: usize) -> Vec<Surjection> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        permute(&mut current, 0, &mut out);
        out.sort();
        out.into_iter().map(|values| Surjection { target: n, values }).collect()
    }
}

fn permute(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, out);
        v.swap(k, i);
    }
}

/// A partially defined surjection `V ⇀ W`: a subset `U ⊆ V` with a
/// surjection `U ↠ W`. The subset is kept sorted, which picks the canonical
/// representative of the span up to isomorphism (the monotone one).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialSurjection {
    leg_in: Injection,
    leg_out: Surjection,
}

impl PartialSurjection {
    pub fn new(leg_in: Injection, leg_out: Surjection) -> Result<Self> {
        if leg_in.source() != leg_out.source() {
            return Err(Error::CarrierMismatch { expected: leg_in.source(), found: leg_out.source() });
        }
        // Relabel U monotonically: sort the pairs (i(u), p(u)).
        let mut pairs: Vec<(usize, usize)> =
            leg_in.values().iter().copied().zip(leg_out.values().iter().copied()).collect();
        pairs.sort_unstable();
        let leg_in = Injection::new(leg_in.target(), pairs.iter().map(|p| p.0).collect())?;
        let leg_out = Surjection::new(leg_out.target(), pairs.iter().map(|p| p.1).collect())?;
        Ok(Self { leg_in, leg_out })
    }

    pub fn identity(n: usize) -> Self {
        Self { leg_in: Injection::identity(n), leg_out: Surjection::identity(n) }
    }

    pub fn from_surjection(s: Surjection) -> Self {
        Self { leg_in: Injection::identity(s.source()), leg_out: s }
    }

    pub fn from_injection(i: Injection) -> Self {
        let n = i.source();
        Self::new(i, Surjection::identity(n)).expect("monotone relabeling of a valid span")
    }

    pub fn leg_in(&self) -> &Injection {
        &self.leg_in
    }

    pub fn leg_out(&self) -> &Surjection {
        &self.leg_out
    }

    pub fn source(&self) -> usize {
        self.leg_in.target()
    }

    pub fn target(&self) -> usize {
        self.leg_out.target()
    }

    /// Pullback composition: first `self`, then `next`.
    pub fn then(&self, next: &PartialSurjection) -> Result<PartialSurjection> {
        if self.target() != next.source() {
            return Err(Error::NotComposable(format!(
                "partial surjection into {} followed by one from {}",
                self.target(),
                next.source()
            )));
        }
        let next_pos = next.leg_in.positions();
        let mut subset = Vec::new();
        let mut values = Vec::new();
        for u in 0..self.leg_in.source() {
            let w = self.leg_out.apply(u);
            if let Some(b) = next_pos[w] {
                subset.push(self.leg_in.apply(u));
                values.push(next.leg_out.apply(b));
            }
        }
        PartialSurjection::new(Injection::new(self.source(), subset)?, Surjection::new(next.target(), values)?)
    }

    /// All partial surjections `source ⇀ target`.
    pub fn enumerate(source: usize, target: usize) -> Vec<PartialSurjection> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << source) {
            let subset: Vec<usize> = (0..source).filter(|b| mask & (1 << b) != 0).collect();
            let inj = Injection::new(source, subset.clone()).expect("subset");
            for s in Surjection::enumerate(subset.len(), target) {
                out.push(PartialSurjection { leg_in: inj.clone(), leg_out: s });
            }
        }
        out
    }
}
