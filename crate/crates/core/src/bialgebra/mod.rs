//! The incidence bialgebra of a hereditary species: families of non-empty
//! structures, comultiplied by partitions.

mod canon;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::io::family_json;
use crate::partitions::enumerate_partitions;
use crate::rational::{q_int, LinComb, Q};
use crate::report::{Report, Tally};
use crate::species::{quotient, restrict_blocks, HStructure, HereditarySpecies};

pub use canon::{automorphisms, canonical_form, canonical_with_iso, for_each_permutation, iso_classes, IsoClass};

/// A sorted multiset of isomorphism classes. `Family` forbids empty
/// carriers; the comodule side reuses the same storage without that rule.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Family {
    members: Vec<IsoClass>,
}

impl Family {
    pub fn new(mut members: Vec<IsoClass>) -> Result<Self> {
        if let Some(m) = members.iter().find(|m| m.carrier() == 0) {
            return Err(Error::InvalidStructure(format!("empty member {:?} in a B-family", m.rep)));
        }
        members.sort();
        Ok(Self { members })
    }

    pub(crate) fn new_unchecked(mut members: Vec<IsoClass>) -> Self {
        members.sort();
        Self { members }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(c: IsoClass) -> Self {
        Self { members: vec![c] }
    }

    pub fn from_structures(h: &dyn HereditarySpecies, xs: &[HStructure]) -> Result<Self> {
        Self::new(xs.iter().map(|x| canonical_form(h, x)).collect())
    }

    pub fn members(&self) -> &[IsoClass] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Total carrier size.
    pub fn size(&self) -> usize {
        self.members.iter().map(IsoClass::carrier).sum()
    }
}

pub type Tensor2 = LinComb<(Family, Family)>;
pub type Tensor3 = LinComb<(Family, Family, Family)>;

pub fn multiply(f: &Family, g: &Family) -> Family {
    let mut members = f.members.clone();
    members.extend(g.members.iter().cloned());
    Family::new_unchecked(members)
}

/// `Δ` of one structure: `Σ_π (G|π) ⊗ (G/π)`.
pub fn comultiply_structure(h: &dyn HereditarySpecies, g: &HStructure) -> Tensor2 {
    let mut out = LinComb::zero();
    for pi in enumerate_partitions(g.n) {
        let left = Family::from_structures(h, &restrict_blocks(h, g, &pi).expect("carrier")).expect("blocks are non-empty");
        let right = Family::singleton(canonical_form(h, &quotient(h, g, &pi).expect("carrier")));
        out.add_term((left, right), q_int(1));
    }
    out
}

fn product2(a: &Tensor2, b: &Tensor2) -> Tensor2 {
    a.product(b, |(l1, r1), (l2, r2)| (multiply(l1, l2), multiply(r1, r2)))
}

/// Δ on a family: memberwise, multiplied out.
pub fn comultiply(h: &dyn HereditarySpecies, f: &Family) -> Tensor2 {
    let mut out = LinComb::basis((Family::empty(), Family::empty()));
    for m in &f.members {
        out = product2(&out, &comultiply_structure(h, &m.rep));
    }
    out
}

pub fn counit(f: &Family) -> Q {
    q_int(f.members.iter().all(|m| m.carrier() == 1) as i64)
}

/// All families of total size at most `n_max`, in increasing order.
pub fn families_up_to(h: &dyn HereditarySpecies, n_max: usize) -> Vec<Family> {
    let classes: Vec<IsoClass> = (1..=n_max).flat_map(|n| iso_classes(h, n)).collect();
    let weighted: Vec<(IsoClass, usize)> = classes.into_iter().map(|c| (c.clone(), c.carrier())).collect();
    let mut out: Vec<Family> = multisets(&weighted, n_max).into_iter().map(Family::new_unchecked).collect();
    out.sort();
    out
}

/// Multisets over `items` whose total weight is at most `budget`. Every
/// weight must be positive.
pub(crate) fn multisets<T: Clone>(items: &[(T, usize)], budget: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(items: &[(T, usize)], start: usize, budget: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        out.push(cur.clone());
        for i in start..items.len() {
            let (item, w) = &items[i];
            if *w <= budget {
                cur.push(item.clone());
                go(items, i, budget - w, cur, out);
                cur.pop();
            }
        }
    }
    assert!(items.iter().all(|(_, w)| *w > 0));
    let mut out = Vec::new();
    go(items, 0, budget, &mut Vec::new(), &mut out);
    out
}

fn pairs_json(h: &dyn HereditarySpecies, t: &Tensor2) -> serde_json::Value {
    crate::io::tensor2_json(h, t)
}

/// Coassociativity on all families of total size at most `n_max`.
pub fn check_coassociativity(h: &dyn HereditarySpecies, n_max: usize) -> Report {
    let mut report = Report::new("coassociativity", json!({ "species": h.name(), "nmax": n_max }));
    let mut tally = Tally::new("(Δ⊗id)Δ = (id⊗Δ)Δ");
    for f in families_up_to(h, n_max) {
        record_coassociativity(h, &f, &mut tally);
    }
    report.push_tally(tally);
    report
}

fn record_coassociativity(h: &dyn HereditarySpecies, f: &Family, tally: &mut Tally) {
    let d = comultiply(h, f);
    let mut lhs: Tensor3 = LinComb::zero();
    let mut rhs: Tensor3 = LinComb::zero();
    for ((a, b), c) in d.iter() {
        for ((a1, a2), c1) in comultiply(h, a).iter() {
            lhs.add_term((a1.clone(), a2.clone(), b.clone()), c * c1);
        }
        for ((b1, b2), c2) in comultiply(h, b).iter() {
            rhs.add_term((a.clone(), b1.clone(), b2.clone()), c * c2);
        }
    }
    tally.record(lhs == rhs, || {
        let diff = lhs.difference(&rhs);
        json!({
            "family": family_json(h, f),
            "differing_terms": diff.iter().take(4).map(|((a, b, c), k)| json!({
                "coefficient": crate::rational::format_q(k),
                "factors": [family_json(h, a), family_json(h, b), family_json(h, c)],
            })).collect::<Vec<_>>(),
        })
    });
}

/// Coassociativity, both counit laws, multiplicativity of Δ and ε, and the
/// unit laws, on families of total size at most `n_max`.
pub fn check_bialgebra(h: &dyn HereditarySpecies, n_max: usize) -> Report {
    let mut report = Report::new("bialgebra", json!({ "species": h.name(), "nmax": n_max }));
    let families = families_up_to(h, n_max);
    let mut coassoc = Tally::new("(Δ⊗id)Δ = (id⊗Δ)Δ");
    let mut left = Tally::new("(ε⊗id)Δ = id");
    let mut right = Tally::new("(id⊗ε)Δ = id");
    let mut mult = Tally::new("Δ(F·G) = Δ(F)·Δ(G)");
    let mut eps = Tally::new("ε(F·G) = ε(F)ε(G)");
    let mut unit = Tally::new("Δ(1) = 1⊗1, ε(1) = 1, F·1 = F");
    let one = Family::empty();
    unit.record(
        comultiply(h, &one) == LinComb::basis((one.clone(), one.clone())) && counit(&one) == q_int(1),
        || json!({ "family": [] }),
    );
    for f in &families {
        record_coassociativity(h, f, &mut coassoc);
        let d = comultiply(h, f);
        let expected = LinComb::basis(f.clone());
        let l: LinComb<Family> = d.map_linear(|(a, b)| {
            let mut t = LinComb::zero();
            t.add_term(b.clone(), counit(a));
            t
        });
        let r: LinComb<Family> = d.map_linear(|(a, b)| {
            let mut t = LinComb::zero();
            t.add_term(a.clone(), counit(b));
            t
        });
        left.record(l == expected, || json!({ "family": family_json(h, f), "delta": pairs_json(h, &d) }));
        right.record(r == expected, || json!({ "family": family_json(h, f), "delta": pairs_json(h, &d) }));
        unit.record(multiply(f, &one) == *f && multiply(&one, f) == *f, || json!({ "family": family_json(h, f) }));
        for g in &families {
            if f.size() + g.size() > n_max {
                continue;
            }
            let fg = multiply(f, g);
            let lhs = comultiply(h, &fg);
            let rhs = product2(&d, &comultiply(h, g));
            mult.record(lhs == rhs, || json!({ "left": family_json(h, f), "right": family_json(h, g) }));
            eps.record(counit(&fg) == counit(f) * counit(g), || {
                json!({ "left": family_json(h, f), "right": family_json(h, g) })
            });
        }
    }
    for t in [coassoc, left, right, mult, eps, unit] {
        report.push_tally(t);
    }
    report
}
