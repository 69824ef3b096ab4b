//! Operators on raw simplices, together with their action on relabelings.

use crate::maps::{Injection, Surjection};

use super::simplex::{Member, Relabeling, Simplex, Species};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RawOp {
    /// Drop set `i` of every member: compose across it, or push the
    /// decoration forward when `i = 0`. A member with one set becomes a point.
    RemoveSet(usize),
    /// Insert an identity after set `i`.
    DuplicateSet(usize),
    /// Append the map to the terminal set; a point becomes the chain `[1]`.
    AppendTerminal,
    /// Replace each member by the family of its fibres over its last set.
    TopFibres,
    Forget,
    /// Family of chains with `L` sets to one chain with `L + 1` sets whose
    /// last set indexes the members. `L` is carried so that the empty family
    /// still lands in the right level.
    Union(usize),
}

/// For each set `t`, the image of each element in the last set.
fn projections(m: &Member) -> Vec<Vec<usize>> {
    let l = m.sets.len();
    let mut proj = vec![Vec::new(); l];
    proj[l - 1] = (0..m.sets[l - 1]).collect();
    for t in (0..l - 1).rev() {
        proj[t] = m.maps[t].iter().map(|&w| proj[t + 1][w]).collect();
    }
    proj
}

/// Position of each element within its fibre over the last set.
fn positions(proj: &[Vec<usize>], last: usize) -> Vec<Vec<usize>> {
    proj.iter()
        .map(|p| {
            let mut seen = vec![0usize; last];
            p.iter()
                .map(|&q| {
                    seen[q] += 1;
                    seen[q] - 1
                })
                .collect()
        })
        .collect()
}

fn fibres_of(sp: Species, m: &Member) -> Vec<Member> {
    let l = m.sets.len();
    let last = m.sets[l - 1];
    let proj = projections(m);
    let pos = positions(&proj, last);
    (0..last)
        .map(|q| {
            let fib: Vec<Vec<usize>> = (0..l - 1).map(|t| (0..m.sets[t]).filter(|&v| proj[t][v] == q).collect()).collect();
            let sets = fib.iter().map(Vec::len).collect();
            let maps = (0..l.saturating_sub(2))
                .map(|t| fib[t].iter().map(|&v| pos[t + 1][m.maps[t][v]]).collect())
                .collect();
            let deco = m.deco.as_ref().map(|d| {
                let sub = if l == 1 { vec![q] } else { fib[0].clone() };
                let h = sp.expect("species for a decorated simplex");
                h.restrict_along(d, &Injection::from_subset(d.n, &sub).expect("subset"))
            });
            Member { sets, maps, deco }
        })
        .collect()
}

fn remove_set(sp: Species, m: &Member, i: usize) -> Member {
    let l = m.sets.len();
    assert!(i < l, "no set {i} in a chain of {l}");
    let mut out = m.clone();
    if l == 1 {
        out.deco = m.deco.as_ref().map(|d| {
            let h = sp.expect("species for a decorated simplex");
            h.quotient_along(d, &Surjection::to_point(d.n).expect("non-empty"))
        });
        out.sets.clear();
        return out;
    }
    if i == 0 {
        out.deco = m.deco.as_ref().map(|d| {
            let h = sp.expect("species for a decorated simplex");
            h.quotient_along(d, &Surjection::new(m.sets[1], m.maps[0].clone()).expect("surjection"))
        });
        out.sets.remove(0);
        out.maps.remove(0);
    } else if i == l - 1 {
        out.sets.pop();
        out.maps.pop();
    } else {
        let composed = m.maps[i - 1].iter().map(|&w| m.maps[i][w]).collect();
        out.maps[i - 1] = composed;
        out.maps.remove(i);
        out.sets.remove(i);
    }
    out
}

impl RawOp {
    pub fn apply(self, sp: Species, x: &Simplex) -> Simplex {
        let members = match self {
            RawOp::RemoveSet(i) => x.members.iter().map(|m| remove_set(sp, m, i)).collect(),
            RawOp::DuplicateSet(i) => x
                .members
                .iter()
                .map(|m| {
                    let mut out = m.clone();
                    out.sets.insert(i + 1, m.sets[i]);
                    out.maps.insert(i, (0..m.sets[i]).collect());
                    out
                })
                .collect(),
            RawOp::AppendTerminal => x
                .members
                .iter()
                .map(|m| {
                    let mut out = m.clone();
                    if let Some(&last) = m.sets.last() {
                        out.maps.push(vec![0; last]);
                    }
                    out.sets.push(1);
                    out
                })
                .collect(),
            RawOp::TopFibres => x.members.iter().flat_map(|m| fibres_of(sp, m)).collect(),
            RawOp::Forget => x.members.iter().map(|m| Member { deco: None, ..m.clone() }).collect(),
            RawOp::Union(l) => {
                assert!(x.members.iter().all(|m| m.deco.is_none() && m.sets.len() == l), "union needs bare chains with {l} sets");
                let offsets = union_offsets(x, l);
                let mut sets: Vec<usize> = (0..l).map(|t| x.members.iter().map(|m| m.sets[t]).sum()).collect();
                sets.push(x.members.len());
                let mut maps = Vec::with_capacity(l);
                for t in 0..l {
                    let mut f = Vec::with_capacity(sets[t]);
                    for (k, m) in x.members.iter().enumerate() {
                        if t + 1 < l {
                            f.extend(m.maps[t].iter().map(|&w| offsets[t + 1][k] + w));
                        } else {
                            f.extend(std::iter::repeat(k).take(m.sets[t]));
                        }
                    }
                    maps.push(f);
                }
                vec![Member { sets, maps, deco: None }]
            }
        };
        Simplex { members }
    }

    /// The image of `r: x → r·x` under this operator, as a relabeling from
    /// `op(x)` to `op(r·x)`.
    pub fn apply_relabel(self, sp: Species, x: &Simplex, r: &Relabeling) -> Relabeling {
        match self {
            RawOp::RemoveSet(i) => Relabeling {
                perm: r.perm.clone(),
                members: r
                    .members
                    .iter()
                    .map(|b| {
                        let mut b = b.clone();
                        b.remove(i);
                        b
                    })
                    .collect(),
            },
            RawOp::DuplicateSet(i) => Relabeling {
                perm: r.perm.clone(),
                members: r
                    .members
                    .iter()
                    .map(|b| {
                        let mut b = b.clone();
                        b.insert(i + 1, b[i].clone());
                        b
                    })
                    .collect(),
            },
            RawOp::AppendTerminal => Relabeling {
                perm: r.perm.clone(),
                members: r
                    .members
                    .iter()
                    .map(|b| {
                        let mut b = b.clone();
                        b.push(vec![0]);
                        b
                    })
                    .collect(),
            },
            RawOp::Forget => r.clone(),
            RawOp::TopFibres => {
                let y = r.apply(sp, x);
                let offsets = |s: &Simplex| -> Vec<usize> {
                    let mut acc = 0;
                    s.members
                        .iter()
                        .map(|m| {
                            let o = acc;
                            acc += m.sets[m.sets.len() - 1];
                            o
                        })
                        .collect()
                };
                let (off_x, off_y) = (offsets(x), offsets(&y));
                let total: usize = x.members.iter().map(|m| m.sets[m.sets.len() - 1]).sum();
                let mut perm = vec![0; total];
                let mut members = vec![Vec::new(); total];
                for (m, mx) in x.members.iter().enumerate() {
                    let l = mx.sets.len();
                    let j = r.perm[m];
                    let my = &y.members[j];
                    let betas = &r.members[m];
                    let proj_x = projections(mx);
                    let pos_y = positions(&projections(my), my.sets[l - 1]);
                    for q in 0..mx.sets[l - 1] {
                        let q2 = betas[l - 1][q];
                        perm[off_x[m] + q] = off_y[j] + q2;
                        members[off_x[m] + q] = (0..l - 1)
                            .map(|t| {
                                (0..mx.sets[t])
                                    .filter(|&v| proj_x[t][v] == q)
                                    .map(|v| pos_y[t][betas[t][v]])
                                    .collect()
                            })
                            .collect();
                    }
                }
                Relabeling { perm, members }
            }
            RawOp::Union(l) => {
                let y = r.apply(sp, x);
                let (off_x, off_y) = (union_offsets(x, l), union_offsets(&y, l));
                let mut betas: Vec<Vec<usize>> = (0..l).map(|t| vec![0; x.members.iter().map(|m| m.sets[t]).sum()]).collect();
                for (m, b) in r.members.iter().enumerate() {
                    for t in 0..l {
                        for (v, &w) in b[t].iter().enumerate() {
                            betas[t][off_x[t][m] + v] = off_y[t][r.perm[m]] + w;
                        }
                    }
                }
                betas.push(r.perm.clone());
                Relabeling { perm: vec![0], members: vec![betas] }
            }
        }
    }
}

fn union_offsets(x: &Simplex, l: usize) -> Vec<Vec<usize>> {
    (0..l)
        .map(|t| {
            let mut acc = 0;
            x.members
                .iter()
                .map(|m| {
                    let o = acc;
                    acc += m.sets[t];
                    o
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::simplex::{automorphisms, canonical_simplex};
    use crate::species::{Graphs, HStructure};

    fn chain(sets: Vec<usize>, maps: Vec<Vec<usize>>) -> Member {
        Member { sets, maps, deco: None }
    }

    fn one(m: Member) -> Simplex {
        Simplex { members: vec![m] }
    }

    #[test]
    fn fibres_of_three_onto_two() {
        // blocks {1,2},{3}
        let x = one(chain(vec![3, 2], vec![vec![0, 0, 1]]));
        let f = RawOp::TopFibres.apply(None, &x);
        assert_eq!(f.members, vec![chain(vec![2], vec![]), chain(vec![1], vec![])]);
    }

    #[test]
    fn top_face_then_top_degeneracy() {
        let x = one(chain(vec![3, 2], vec![vec![1, 0, 1]]));
        let back = RawOp::TopFibres.apply(None, &RawOp::AppendTerminal.apply(None, &x));
        assert_eq!(back, x);
    }

    #[test]
    fn bottom_face_contracts_decoration() {
        let k2 = Member { sets: vec![2, 1], maps: vec![vec![0, 0]], deco: Some(HStructure::new(2, vec![(0, 1)])) };
        let y = RawOp::RemoveSet(0).apply(Some(&Graphs), &one(k2));
        assert_eq!(y.members[0].deco, Some(HStructure::bare(1)));
        assert_eq!(y.members[0].sets, vec![1]);
    }

    #[test]
    fn single_set_becomes_point() {
        let x = Simplex { members: vec![Member { sets: vec![2], maps: vec![], deco: Some(HStructure::new(2, vec![(0, 1)])) }] };
        let y = RawOp::RemoveSet(0).apply(Some(&Graphs), &x);
        assert_eq!(y.members, vec![Member::point(Some(HStructure::bare(1)))]);
        let z = RawOp::TopFibres.apply(Some(&Graphs), &x);
        assert_eq!(z.members, vec![Member::point(Some(HStructure::bare(1))); 2]);
    }

    #[test]
    fn union_of_fibres_recovers_the_chain() {
        let x = one(chain(vec![3, 2], vec![vec![0, 0, 1]]));
        let u = RawOp::Union(1).apply(None, &RawOp::TopFibres.apply(None, &x));
        assert_eq!(canonical_simplex(None, &u).0, canonical_simplex(None, &x).0);
    }

    // Functoriality of every operator on relabelings: op(r)·op(x) = op(r·x)
    // and op(s∘r) = op(s)∘op(r).
    #[test]
    fn operators_respect_relabelings() {
        let x = Simplex {
            members: vec![
                Member { sets: vec![3, 2, 1], maps: vec![vec![0, 1, 1], vec![0, 0]], deco: Some(HStructure::new(3, vec![(0, 2)])) },
                Member { sets: vec![2, 2, 1], maps: vec![vec![1, 0], vec![0, 0]], deco: Some(HStructure::new(2, vec![(0, 1)])) },
            ],
        };
        let sp = Some(&Graphs as &dyn crate::species::HereditarySpecies);
        let (c, to_c) = canonical_simplex(sp, &x);
        let ops = [
            RawOp::RemoveSet(0),
            RawOp::RemoveSet(1),
            RawOp::RemoveSet(2),
            RawOp::DuplicateSet(0),
            RawOp::DuplicateSet(2),
            RawOp::AppendTerminal,
            RawOp::TopFibres,
            RawOp::Forget,
        ];
        for op in ops {
            let ox = op.apply(sp, &x);
            let or = op.apply_relabel(sp, &x, &to_c);
            assert_eq!(or.apply(sp, &ox), op.apply(sp, &c), "{op:?}");
            for a in automorphisms(sp, &c) {
                let composite = to_c.then(&a);
                let lhs = op.apply_relabel(sp, &x, &composite);
                let rhs = or.then(&op.apply_relabel(sp, &c, &a));
                assert_eq!(lhs, rhs, "{op:?}");
            }
        }
        let bare = RawOp::Forget.apply(sp, &x);
        let (_, r) = canonical_simplex(None, &bare);
        let u = RawOp::Union(3).apply_relabel(None, &bare, &r);
        assert_eq!(u.apply(None, &RawOp::Union(3).apply(None, &bare)), RawOp::Union(3).apply(None, &r.apply(None, &bare)));
    }
}
