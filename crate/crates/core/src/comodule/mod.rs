//! The restriction bialgebra `A` on possibly empty structures and the
//! coaction of `B` on it.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bialgebra::{canonical_form, comultiply, counit, iso_classes, multiply, Family, IsoClass};
use crate::io::{structure_json, AsFactor, AsFactors, Factor};
use crate::partitions::enumerate_partitions;
use crate::rational::{q_int, LinComb, Q};
use crate::report::{Report, Tally};
use crate::species::{quotient, restrict, restrict_blocks, HStructure, HereditarySpecies};

/// A sorted multiset of isomorphism classes, empty carriers allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AFamily {
    members: Vec<IsoClass>,
}

impl AFamily {
    pub fn new(mut members: Vec<IsoClass>) -> Self {
        members.sort();
        Self { members }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(c: IsoClass) -> Self {
        Self { members: vec![c] }
    }

    pub fn from_structures(h: &dyn HereditarySpecies, xs: &[HStructure]) -> Self {
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

    /// Total carrier size plus the number of empty members.
    pub fn weight(&self) -> usize {
        self.members.iter().map(|m| m.carrier().max(1)).sum()
    }
}

impl AsFactor for AFamily {
    fn factor(&self) -> Factor {
        Factor::Family(self.members.iter().map(|m| m.rep.clone()).collect())
    }
}

impl AsFactors for AFamily {
    fn factors(&self) -> Vec<Factor> {
        vec![self.factor()]
    }
}

pub fn multiply_a(f: &AFamily, g: &AFamily) -> AFamily {
    let mut members = f.members.clone();
    members.extend(g.members.iter().cloned());
    AFamily::new(members)
}

/// `Σ_{U ⊆ V} G|U ⊗ G|(V∖U)`.
pub fn comultiply_a_structure(h: &dyn HereditarySpecies, g: &HStructure) -> LinComb<(IsoClass, IsoClass)> {
    let mut out = LinComb::zero();
    for mask in 0u64..(1 << g.n) {
        let (inside, outside): (Vec<usize>, Vec<usize>) = (0..g.n).partition(|&v| mask & (1 << v) != 0);
        let l = canonical_form(h, &restrict(h, g, &inside).expect("subset"));
        let r = canonical_form(h, &restrict(h, g, &outside).expect("subset"));
        out.add_term((l, r), q_int(1));
    }
    out
}

pub type ATensor2 = LinComb<(AFamily, AFamily)>;

fn product_a2(a: &ATensor2, b: &ATensor2) -> ATensor2 {
    a.product(b, |(l1, r1), (l2, r2)| (multiply_a(l1, l2), multiply_a(r1, r2)))
}

pub fn comultiply_a(h: &dyn HereditarySpecies, f: &AFamily) -> ATensor2 {
    let mut out = LinComb::basis((AFamily::empty(), AFamily::empty()));
    for m in &f.members {
        let d = comultiply_a_structure(h, &m.rep).map_basis(|(l, r)| (AFamily::singleton(l.clone()), AFamily::singleton(r.clone())));
        out = product_a2(&out, &d);
    }
    out
}

pub fn counit_a(f: &AFamily) -> Q {
    q_int(f.members.iter().all(|m| m.carrier() == 0) as i64)
}

/// Coaction of one structure, as a map `A → B ⊗ A` on generators.
pub type CoactionFn<'a> = dyn Fn(&dyn HereditarySpecies, &HStructure) -> LinComb<(Family, IsoClass)> + 'a;

/// `γ(G) = Σ_π (G|π) ⊗ (G/π)`; on the empty structure this is
/// `1_B ⊗ ∅` since the empty set has exactly one partition.
pub fn coact(h: &dyn HereditarySpecies, g: &HStructure) -> LinComb<(Family, IsoClass)> {
    let mut out = LinComb::zero();
    for pi in enumerate_partitions(g.n) {
        let left = Family::from_structures(h, &restrict_blocks(h, g, &pi).expect("carrier")).expect("blocks are non-empty");
        let right = canonical_form(h, &quotient(h, g, &pi).expect("carrier"));
        out.add_term((left, right), q_int(1));
    }
    out
}

/// Negative control: the blocks are kept but the quotient is replaced by
/// `G` itself.
pub fn coact_without_quotients(h: &dyn HereditarySpecies, g: &HStructure) -> LinComb<(Family, IsoClass)> {
    let mut out = LinComb::zero();
    let whole = canonical_form(h, g);
    for pi in enumerate_partitions(g.n) {
        let left = Family::from_structures(h, &restrict_blocks(h, g, &pi).expect("carrier")).expect("blocks are non-empty");
        out.add_term((left, whole.clone()), q_int(1));
    }
    out
}

pub type Coacted = LinComb<(Family, AFamily)>;

fn product_coacted(a: &Coacted, b: &Coacted) -> Coacted {
    a.product(b, |(l1, r1), (l2, r2)| (multiply(l1, l2), multiply_a(r1, r2)))
}

/// γ extended multiplicatively to families.
pub fn coact_free(h: &dyn HereditarySpecies, f: &AFamily) -> Coacted {
    coact_free_with(h, f, &coact)
}

pub fn coact_free_with(h: &dyn HereditarySpecies, f: &AFamily, gamma: &CoactionFn) -> Coacted {
    let mut out = LinComb::basis((Family::empty(), AFamily::empty()));
    for m in &f.members {
        let g = gamma(h, &m.rep).map_basis(|(b, a)| (b.clone(), AFamily::singleton(a.clone())));
        out = product_coacted(&out, &g);
    }
    out
}

/// All A-families of weight at most `n_max`, in increasing order.
pub fn a_families_up_to(h: &dyn HereditarySpecies, n_max: usize) -> Vec<AFamily> {
    let items: Vec<(IsoClass, usize)> =
        (0..=n_max).flat_map(|n| iso_classes(h, n)).map(|c| { let w = c.carrier().max(1); (c, w) }).collect();
    let mut out: Vec<AFamily> = crate::bialgebra::multisets(&items, n_max).into_iter().map(AFamily::new).collect();
    out.sort();
    out
}

fn afamily_json(h: &dyn HereditarySpecies, f: &AFamily) -> Value {
    json!(f.members.iter().map(|m| structure_json(h, &m.rep)).collect::<Vec<_>>())
}

fn diff_json<B: Ord + Clone + AsFactors>(h: &dyn HereditarySpecies, lhs: &LinComb<B>, rhs: &LinComb<B>) -> Value {
    let diff = lhs.difference(rhs);
    let ts: Vec<_> = crate::io::terms(&diff).into_iter().take(4).collect();
    crate::io::terms_json(h, &ts, None)
}

/// Coassociativity and counitality of γ as a left B-comodule.
pub fn check_comodule(h: &dyn HereditarySpecies, n_max: usize) -> Report {
    check_comodule_with(h, n_max, &coact)
}

pub fn check_comodule_with(h: &dyn HereditarySpecies, n_max: usize, gamma: &CoactionFn) -> Report {
    let mut report = Report::new("comodule", json!({ "species": h.name(), "nmax": n_max }));
    let mut coassoc = Tally::new("(Δ_B⊗id)γ = (id⊗γ)γ");
    let mut counital = Tally::new("(ε_B⊗id)γ = id");
    for f in a_families_up_to(h, n_max) {
        let g = coact_free_with(h, &f, gamma);
        let mut lhs = LinComb::zero();
        let mut rhs = LinComb::zero();
        let mut unit: LinComb<AFamily> = LinComb::zero();
        for ((b, a), c) in g.iter() {
            for ((b1, b2), c1) in comultiply(h, b).iter() {
                lhs.add_term((b1.clone(), b2.clone(), a.clone()), c * c1);
            }
            for ((b2, a2), c2) in coact_free_with(h, a, gamma).iter() {
                rhs.add_term((b.clone(), b2.clone(), a2.clone()), c * c2);
            }
            unit.add_term(a.clone(), c * counit(b));
        }
        coassoc.record(lhs == rhs, || json!({ "family": afamily_json(h, &f), "difference": diff_json(h, &lhs, &rhs) }));
        counital.record(unit == LinComb::basis(f.clone()), || json!({ "family": afamily_json(h, &f) }));
    }
    report.push_tally(coassoc);
    report.push_tally(counital);
    report
}

/// A is a bialgebra: coassociativity, both counit laws, multiplicativity of
/// Δ_A and ε_A.
pub fn check_a_bialgebra(h: &dyn HereditarySpecies, n_max: usize) -> Report {
    let mut report = Report::new("a-bialgebra", json!({ "species": h.name(), "nmax": n_max }));
    let families = a_families_up_to(h, n_max);
    let mut coassoc = Tally::new("(Δ_A⊗id)Δ_A = (id⊗Δ_A)Δ_A");
    let mut counit_laws = Tally::new("(ε_A⊗id)Δ_A = id = (id⊗ε_A)Δ_A");
    let mut mult = Tally::new("Δ_A(F·G) = Δ_A(F)·Δ_A(G), ε_A(F·G) = ε_A(F)ε_A(G)");
    for f in &families {
        let d = comultiply_a(h, f);
        let mut lhs = LinComb::zero();
        let mut rhs = LinComb::zero();
        let mut l: LinComb<AFamily> = LinComb::zero();
        let mut r: LinComb<AFamily> = LinComb::zero();
        for ((a, b), c) in d.iter() {
            for ((a1, a2), c1) in comultiply_a(h, a).iter() {
                lhs.add_term((a1.clone(), a2.clone(), b.clone()), c * c1);
            }
            for ((b1, b2), c2) in comultiply_a(h, b).iter() {
                rhs.add_term((a.clone(), b1.clone(), b2.clone()), c * c2);
            }
            l.add_term(b.clone(), c * counit_a(a));
            r.add_term(a.clone(), c * counit_a(b));
        }
        coassoc.record(lhs == rhs, || json!({ "family": afamily_json(h, f), "difference": diff_json(h, &lhs, &rhs) }));
        let id = LinComb::basis(f.clone());
        counit_laws.record(l == id && r == id, || json!({ "family": afamily_json(h, f) }));
        for g in families.iter().filter(|g| f.weight() + g.weight() <= n_max) {
            let fg = multiply_a(f, g);
            let ok = comultiply_a(h, &fg) == product_a2(&d, &comultiply_a(h, g)) && counit_a(&fg) == counit_a(f) * counit_a(g);
            mult.record(ok, || json!({ "left": afamily_json(h, f), "right": afamily_json(h, g) }));
        }
    }
    for t in [coassoc, counit_laws, mult] {
        report.push_tally(t);
    }
    report
}

/// Δ_A, ε_A, μ_A and η_A are B-comodule maps.
pub fn check_comodule_bialgebra(h: &dyn HereditarySpecies, n_max: usize) -> Report {
    check_comodule_bialgebra_with(h, n_max, &coact)
}

pub fn check_comodule_bialgebra_with(h: &dyn HereditarySpecies, n_max: usize, gamma: &CoactionFn) -> Report {
    let mut report = Report::new("comodule-bialgebra", json!({ "species": h.name(), "nmax": n_max }));
    let families = a_families_up_to(h, n_max);
    let mut delta = Tally::new("ω(γ⊗γ)Δ_A = (id_B⊗Δ_A)γ");
    let mut eps = Tally::new("η_B ε_A = (id_B⊗ε_A)γ");
    let mut mu = Tally::new("γ(F·G) = γ(F)·γ(G)");
    let mut eta = Tally::new("γ(1_A) = 1_B⊗1_A");
    eta.record(
        coact_free_with(h, &AFamily::empty(), gamma) == LinComb::basis((Family::empty(), AFamily::empty())),
        || json!({ "family": [] }),
    );
    for f in &families {
        let g = coact_free_with(h, f, gamma);

        // ω: swap the middle factors and multiply in B.
        let mut lhs = LinComb::zero();
        for ((a1, a2), c) in comultiply_a(h, f).iter() {
            let g1 = coact_free_with(h, a1, gamma);
            let g2 = coact_free_with(h, a2, gamma);
            for ((b1, x1), k1) in g1.iter() {
                for ((b2, x2), k2) in g2.iter() {
                    lhs.add_term((multiply(b1, b2), x1.clone(), x2.clone()), c * k1 * k2);
                }
            }
        }
        let mut rhs = LinComb::zero();
        for ((b, a), c) in g.iter() {
            for ((x1, x2), k) in comultiply_a(h, a).iter() {
                rhs.add_term((b.clone(), x1.clone(), x2.clone()), c * k);
            }
        }
        delta.record(lhs == rhs, || json!({ "family": afamily_json(h, f), "difference": diff_json(h, &lhs, &rhs) }));

        let mut square: LinComb<Family> = LinComb::zero();
        for ((b, a), c) in g.iter() {
            square.add_term(b.clone(), c * counit_a(a));
        }
        let mut expected = LinComb::zero();
        expected.add_term(Family::empty(), counit_a(f));
        eps.record(square == expected, || {
            json!({ "family": afamily_json(h, f), "via_coaction": crate::io::terms_json(h, &crate::io::terms(&square), None) })
        });

        for other in families.iter().filter(|o| f.weight() + o.weight() <= n_max) {
            let lhs = coact_free_with(h, &multiply_a(f, other), gamma);
            let rhs = product_coacted(&g, &coact_free_with(h, other, gamma));
            mu.record(lhs == rhs, || json!({ "left": afamily_json(h, f), "right": afamily_json(h, other) }));
        }
    }
    for t in [delta, eps, mu, eta] {
        report.push_tally(t);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::species::{Graphs, Sets};

    fn class(x: HStructure) -> IsoClass {
        canonical_form(&Graphs, &x)
    }

    fn empty() -> IsoClass {
        class(HStructure::bare(0))
    }

    fn dot() -> IsoClass {
        class(HStructure::bare(1))
    }

    fn k2() -> IsoClass {
        class(HStructure::new(2, vec![(0, 1)]))
    }

    fn fam(ms: Vec<IsoClass>) -> Family {
        Family::new(ms).unwrap()
    }

    #[test]
    fn delta_a_examples() {
        let d0 = comultiply_a_structure(&Graphs, &HStructure::bare(0));
        assert_eq!(d0, LinComb::basis((empty(), empty())));
        let d1 = comultiply_a_structure(&Graphs, &HStructure::bare(1));
        let mut e1 = LinComb::zero();
        e1.add_term((empty(), dot()), q_int(1));
        e1.add_term((dot(), empty()), q_int(1));
        assert_eq!(d1, e1);
        let d2 = comultiply_a_structure(&Graphs, &HStructure::new(2, vec![(0, 1)]));
        let mut e2 = LinComb::zero();
        e2.add_term((empty(), k2()), q_int(1));
        e2.add_term((dot(), dot()), q_int(2));
        e2.add_term((k2(), empty()), q_int(1));
        assert_eq!(d2, e2);
    }

    #[test]
    fn counit_a_examples() {
        assert_eq!(counit_a(&AFamily::singleton(empty())), q_int(1));
        assert_eq!(counit_a(&AFamily::singleton(dot())), q_int(0));
        assert_eq!(counit_a(&AFamily::new(vec![empty(), empty()])), q_int(1));
    }

    #[test]
    fn coact_examples() {
        assert_eq!(coact(&Graphs, &HStructure::bare(0)), LinComb::basis((Family::empty(), empty())));
        assert_eq!(coact(&Graphs, &HStructure::bare(1)), LinComb::basis((fam(vec![dot()]), dot())));
        let mut e = LinComb::zero();
        e.add_term((fam(vec![dot(), dot()]), k2()), q_int(1));
        e.add_term((fam(vec![k2()]), dot()), q_int(1));
        assert_eq!(coact(&Graphs, &HStructure::new(2, vec![(0, 1)])), e);
    }

    #[test]
    fn coact_free_examples() {
        assert_eq!(coact_free(&Graphs, &AFamily::empty()), LinComb::basis((Family::empty(), AFamily::empty())));
        let two_dots = AFamily::new(vec![dot(), dot()]);
        assert_eq!(coact_free(&Graphs, &two_dots), LinComb::basis((fam(vec![dot(), dot()]), two_dots)));
        let mut e = LinComb::zero();
        e.add_term((fam(vec![dot(), dot()]), AFamily::new(vec![k2(), empty()])), q_int(1));
        e.add_term((fam(vec![k2()]), AFamily::new(vec![dot(), empty()])), q_int(1));
        assert_eq!(coact_free(&Graphs, &AFamily::new(vec![k2(), empty()])), e);
    }

    // On non-empty structures, γ is Δ_B with the right factor read as a
    // single structure.
    #[test]
    fn coaction_agrees_with_delta_b() {
        for n in 1..=4 {
            for x in Graphs.structures(n) {
                let via_b = crate::bialgebra::comultiply_structure(&Graphs, &x);
                let via_gamma = coact(&Graphs, &x).map_basis(|(b, a)| (b.clone(), Family::singleton(a.clone())));
                assert_eq!(via_b, via_gamma);
            }
        }
    }

    #[test]
    fn a_family_weights() {
        // Sets: one class per size, so families of weight <= 2 are
        // (), (∅), (•), (∅∅), (∅•), (••), (2).
        assert_eq!(a_families_up_to(&Sets, 2).len(), 7);
    }

    #[test]
    fn vertex_comodule_bialgebra_by_hand() {
        let f = AFamily::singleton(dot());
        let mut rhs = LinComb::zero();
        for ((b, a), c) in coact_free(&Graphs, &f).iter() {
            for ((x1, x2), k) in comultiply_a(&Graphs, a).iter() {
                rhs.add_term((b.clone(), x1.clone(), x2.clone()), c * k);
            }
        }
        let mut expected = LinComb::zero();
        expected.add_term((fam(vec![dot()]), AFamily::singleton(empty()), AFamily::singleton(dot())), q_int(1));
        expected.add_term((fam(vec![dot()]), AFamily::singleton(dot()), AFamily::singleton(empty())), q_int(1));
        assert_eq!(rhs, expected);
    }

    #[test]
    fn graphs_comodule_laws() {
        for r in [
            check_comodule(&Graphs, 3),
            check_comodule(&Sets, 3),
            check_a_bialgebra(&Graphs, 3),
            check_comodule_bialgebra(&Graphs, 3),
        ] {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn omitting_quotients_breaks_the_diagram() {
        let r = check_comodule_bialgebra_with(&Graphs, 3, &coact_without_quotients);
        assert!(!r.passed());
        let first = r.first_failure().unwrap();
        assert!(first.witness.is_some());
    }
}
