//! Raw simplices: lists of decorated chains of surjections, acted on by
//! relabelings, with canonical forms up to relabeling.

use std::sync::OnceLock;

use crate::bialgebra::for_each_permutation;
use crate::maps::Surjection;
use crate::species::{HStructure, HereditarySpecies};

/// A chain `V_0 ↠ V_1 ↠ ... ↠ V_{L-1}` of sets `{0..sets[t]}`, with
/// `maps[t]: V_t → V_{t+1}` and an optional structure on `V_0`. With no sets
/// the member is a point and a decoration lives on a singleton.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Member {
    pub sets: Vec<usize>,
    pub maps: Vec<Vec<usize>>,
    pub deco: Option<HStructure>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    pub members: Vec<Member>,
}

/// `x ↦ y` where member `m` of `x` goes to member `perm[m]` of `y` through
/// the bijections `members[m][t]` on its sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relabeling {
    pub perm: Vec<usize>,
    pub members: Vec<Vec<Vec<usize>>>,
}

pub type Species<'a> = Option<&'a dyn HereditarySpecies>;

pub(crate) fn bijection(values: &[usize]) -> Surjection {
    Surjection::new(values.len(), values.to_vec()).expect("bijection")
}

pub(crate) fn invert(values: &[usize]) -> Vec<usize> {
    let mut out = vec![0; values.len()];
    for (i, &v) in values.iter().enumerate() {
        out[v] = i;
    }
    out
}

impl Member {
    pub fn point(deco: Option<HStructure>) -> Self {
        Self { sets: Vec::new(), maps: Vec::new(), deco }
    }

    pub fn is_point(&self) -> bool {
        self.sets.is_empty()
    }

    /// `|V_0|`, or 1 for a point.
    pub fn base(&self) -> usize {
        self.sets.first().copied().unwrap_or(1)
    }

    /// `f'_t = β_{t+1} ∘ f_t ∘ β_t⁻¹`, decoration transported along `β_0`.
    pub fn relabel(&self, sp: Species, betas: &[Vec<usize>]) -> Member {
        let mut maps = Vec::with_capacity(self.maps.len());
        for (t, f) in self.maps.iter().enumerate() {
            let mut g = vec![0; f.len()];
            for (v, &w) in f.iter().enumerate() {
                g[betas[t][v]] = betas[t + 1][w];
            }
            maps.push(g);
        }
        let deco = match (&self.deco, self.sets.is_empty()) {
            (Some(d), false) => Some(sp.expect("species for a decorated simplex").quotient_along(d, &bijection(&betas[0]))),
            (d, _) => d.clone(),
        };
        Member { sets: self.sets.clone(), maps, deco }
    }

    pub fn identity_betas(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(|&n| (0..n).collect()).collect()
    }
}

fn permutations_of(n: usize) -> &'static [Vec<usize>] {
    static CACHE: OnceLock<Vec<Vec<Vec<usize>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        (0..=7)
            .map(|k| {
                let mut out = Vec::new();
                for_each_permutation(k, |p| out.push(p.to_vec()));
                out
            })
            .collect()
    });
    &cache[n]
}

/// Extends `β_0` to the whole chain so that every later set is numbered by
/// first appearance along the relabeled map before it. Any relabeling with
/// this `β_0` and first-appearance maps must be this one.
fn extend_from_base(m: &Member, beta0: &[usize]) -> Vec<Vec<usize>> {
    let mut betas = Vec::with_capacity(m.sets.len());
    betas.push(beta0.to_vec());
    for (t, f) in m.maps.iter().enumerate() {
        let order = invert(&betas[t]);
        let mut next = vec![usize::MAX; m.sets[t + 1]];
        let mut fresh = 0;
        for &v in &order {
            if next[f[v]] == usize::MAX {
                next[f[v]] = fresh;
                fresh += 1;
            }
        }
        betas.push(next);
    }
    betas
}

/// Minimal relabeling of a member, the bijections reaching it, and all
/// bijection tuples fixing the minimum.
///
/// Maps compare before the decoration, so the minimum has first-appearance
/// maps and only the permutations of the first set need to be tried.
pub fn canonical_member(sp: Species, m: &Member) -> (Member, Vec<Vec<usize>>, Vec<Vec<Vec<usize>>>) {
    if m.sets.is_empty() {
        return (m.clone(), Vec::new(), vec![Vec::new()]);
    }
    let mut best: Option<(Member, Vec<Vec<usize>>)> = None;
    let mut ties: Vec<Vec<Vec<usize>>> = Vec::new();
    for sigma in permutations_of(m.sets[0]) {
        let betas = extend_from_base(m, sigma);
        let y = m.relabel(sp, &betas);
        match &best {
            Some((b, _)) if *b < y => {}
            Some((b, _)) if *b == y => ties.push(betas),
            _ => {
                ties = vec![betas.clone()];
                best = Some((y, betas));
            }
        }
    }
    let (rep, to_canon) = best.expect("at least the identity");
    // Automorphisms of the representative: σ ∘ β⁻¹ for every tie σ, where β
    // is the chosen tie.
    let auts = ties
        .iter()
        .map(|tie| tie.iter().zip(&to_canon).map(|(s, b)| invert(b).iter().map(|&v| s[v]).collect()).collect())
        .collect();
    (rep, to_canon, auts)
}

impl Relabeling {
    pub fn identity(x: &Simplex) -> Self {
        Self { perm: (0..x.members.len()).collect(), members: x.members.iter().map(Member::identity_betas).collect() }
    }

    pub fn apply(&self, sp: Species, x: &Simplex) -> Simplex {
        let mut out: Vec<Option<Member>> = vec![None; x.members.len()];
        for (m, member) in x.members.iter().enumerate() {
            out[self.perm[m]] = Some(member.relabel(sp, &self.members[m]));
        }
        Simplex { members: out.into_iter().map(|m| m.expect("perm is a bijection")).collect() }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Relabeling) -> Relabeling {
        let perm = self.perm.iter().map(|&p| next.perm[p]).collect();
        let members = self
            .members
            .iter()
            .enumerate()
            .map(|(m, betas)| {
                betas.iter().zip(&next.members[self.perm[m]]).map(|(b, n)| b.iter().map(|&v| n[v]).collect()).collect()
            })
            .collect();
        Relabeling { perm, members }
    }

    pub fn inverse(&self) -> Relabeling {
        let inv = invert(&self.perm);
        let members = inv.iter().map(|&m| self.members[m].iter().map(|b| invert(b)).collect()).collect();
        Relabeling { perm: inv, members }
    }
}

/// Canonical form of a simplex and a relabeling onto it.
pub fn canonical_simplex(sp: Species, x: &Simplex) -> (Simplex, Relabeling) {
    let canon: Vec<(Member, Vec<Vec<usize>>)> = x
        .members
        .iter()
        .map(|m| {
            let (c, b, _) = canonical_member(sp, m);
            (c, b)
        })
        .collect();
    let mut order: Vec<usize> = (0..canon.len()).collect();
    order.sort_by(|&a, &b| canon[a].0.cmp(&canon[b].0).then(a.cmp(&b)));
    let mut perm = vec![0; canon.len()];
    for (pos, &m) in order.iter().enumerate() {
        perm[m] = pos;
    }
    let members = order.iter().map(|&m| canon[m].0.clone()).collect();
    let relabel = Relabeling { perm, members: canon.into_iter().map(|(_, b)| b).collect() };
    (Simplex { members }, relabel)
}

/// All automorphisms of a canonical simplex: permutations of equal members
/// combined with automorphisms of each member.
pub fn automorphisms(sp: Species, c: &Simplex) -> Vec<Relabeling> {
    let member_auts: Vec<Vec<Vec<Vec<usize>>>> = c.members.iter().map(|m| canonical_member(sp, m).2).collect();
    let n = c.members.len();
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && c.members[end] == c.members[start] {
            end += 1;
        }
        let run = end - start;
        let mut next = Vec::new();
        for p in &perms {
            for q in permutations_of(run) {
                let mut p2 = p.clone();
                p2.extend(q.iter().map(|&v| start + v));
                next.push(p2);
            }
        }
        perms = next;
        start = end;
    }
    let mut out = Vec::new();
    for perm in perms {
        let mut partial: Vec<Vec<Vec<Vec<usize>>>> = vec![Vec::new()];
        for auts in &member_auts {
            let mut next = Vec::with_capacity(partial.len() * auts.len());
            for p in &partial {
                for a in auts {
                    let mut p2 = p.clone();
                    p2.push(a.clone());
                    next.push(p2);
                }
            }
            partial = next;
        }
        for members in partial {
            out.push(Relabeling { perm: perm.clone(), members });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::species::Graphs;

    fn chain(sets: Vec<usize>, maps: Vec<Vec<usize>>) -> Member {
        Member { sets, maps, deco: None }
    }

    #[test]
    fn surjection_classes_from_three() {
        // Surjections from a 3-set up to isomorphism: 3↠1, 3↠2, 3↠3.
        let mut classes = std::collections::BTreeSet::new();
        for m in 1..=3 {
            for s in Surjection::enumerate(3, m) {
                let x = chain(vec![3, m], vec![s.values().to_vec()]);
                classes.insert(canonical_member(None, &x).0);
            }
        }
        assert_eq!(classes.len(), 3);
    }

    #[test]
    fn member_automorphism_counts() {
        let (_, _, auts) = canonical_member(None, &chain(vec![3, 2], vec![vec![0, 0, 1]]));
        assert_eq!(auts.len(), 2);
        let (_, _, auts) = canonical_member(None, &chain(vec![4], vec![]));
        assert_eq!(auts.len(), 24);
        let k2 = Member { sets: vec![2], maps: vec![], deco: Some(HStructure::new(2, vec![(0, 1)])) };
        assert_eq!(canonical_member(Some(&Graphs), &k2).2.len(), 2);
        let path = Member { sets: vec![3], maps: vec![], deco: Some(HStructure::new(3, vec![(0, 1), (1, 2)])) };
        assert_eq!(canonical_member(Some(&Graphs), &path).2.len(), 2);
    }

    #[test]
    fn canonical_relabeling_reaches_the_form() {
        let x = Simplex {
            members: vec![
                chain(vec![3, 2], vec![vec![1, 0, 1]]),
                Member::point(None),
                chain(vec![2, 1], vec![vec![0, 0]]),
            ],
        };
        let (c, r) = canonical_simplex(None, &x);
        assert_eq!(r.apply(None, &x), c);
        assert_eq!(r.inverse().apply(None, &c), x);
        assert_eq!(r.then(&r.inverse()), Relabeling::identity(&x));
        for a in automorphisms(None, &c) {
            assert_eq!(a.apply(None, &c), c);
        }
    }

    #[test]
    fn equal_members_are_permuted() {
        let two = Simplex { members: vec![chain(vec![2], vec![]), chain(vec![2], vec![])] };
        assert_eq!(automorphisms(None, &two).len(), 8);
        let points = Simplex { members: vec![Member::point(None); 4] };
        assert_eq!(automorphisms(None, &points).len(), 24);
    }
}
