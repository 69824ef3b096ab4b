//! Comparisons between spaces: the equivalence of chains with families, the
//! pseudo-simplicial identity on families, and the comultiplication read
//! off from the decorated space.

use serde_json::json;

use super::checks::top_faces_comparison;
use super::ops::RawOp;
use super::simplex::{canonical_simplex, Member, Simplex};
use super::space::{Induced, Kind, Space};
use crate::bialgebra::canonical_form;
use crate::bialgebra::{comultiply_structure, Family, Tensor2};
use crate::error::{Error, Result};
use crate::groupoid::{homotopy_fibre, is_equivalence, map_cardinality, FiniteGroupoid, GroupoidMap};
use crate::io::simplex_text;
use crate::maps::{Injection, Surjection};
use crate::rational::LinComb;
use crate::report::{Report, Tally};
use crate::species::{HStructure, HereditarySpecies, SpeciesRef};
use std::sync::Arc;

/// Each element carries the label it had in the original total set.
/// Restriction keeps labels; a quotient keeps the least label of a block.
struct Tracking;

impl HereditarySpecies for Tracking {
    fn name(&self) -> &str {
        "tracking"
    }

    fn structures(&self, _n: usize) -> Vec<HStructure> {
        Vec::new()
    }

    fn validate(&self, _x: &HStructure) -> Result<()> {
        Ok(())
    }

    fn restrict_along(&self, x: &HStructure, i: &Injection) -> HStructure {
        HStructure::new(i.source(), (0..i.source()).map(|j| (j, x.payload[i.apply(j)].1)).collect())
    }

    fn quotient_along(&self, x: &HStructure, p: &Surjection) -> HStructure {
        let mut least = vec![usize::MAX; p.target()];
        for &(v, label) in &x.payload {
            let w = p.apply(v);
            least[w] = least[w].min(label);
        }
        HStructure::new(p.target(), least.into_iter().enumerate().collect())
    }
}

fn tracked(a: &Simplex) -> Simplex {
    let mut offset = 0;
    let members = a
        .members
        .iter()
        .map(|m| {
            let b = m.base();
            let deco = HStructure::new(b, (0..b).map(|v| (v, offset + v)).collect());
            offset += b;
            Member { deco: Some(deco), ..m.clone() }
        })
        .collect();
    Simplex { members }
}

/// `d_⊤ d_⊤ ≅ d_⊤ d_{⊤-1}` on families with `L ≥ 2` sets per member. The
/// comparison must relate the two composites, both with the real decoration
/// and with every element tagged by its position in the total set.
pub fn check_pseudo_identity(x: &Space) -> Result<Report> {
    if !x.kind.is_family() {
        return Err(Error::Precondition(format!("{} is not a space of families", x.name())));
    }
    let mut report = Report::new("pseudo-identity", json!({ "space": x.name(), "k": x.k, "top": x.top }));
    let track: &dyn HereditarySpecies = &Tracking;
    for l in 2..=x.top {
        let mut t = Tally::new("pseudo-identity").level(l);
        let mut strict = 0;
        for a in &x.level(l).objects {
            let composites = |sp, a: &Simplex| {
                let one = RawOp::TopFibres.apply(sp, &RawOp::RemoveSet(l - 1).apply(sp, a));
                let two = RawOp::TopFibres.apply(sp, &RawOp::TopFibres.apply(sp, a));
                (one, two)
            };
            let kappa = top_faces_comparison(a);
            let (one, two) = composites(x.sp(), a);
            if one == two {
                strict += 1;
            }
            t.record(kappa.apply(x.sp(), &one) == two, || {
                json!({ "simplex": simplex_text(a), "first": simplex_text(&one), "second": simplex_text(&two) })
            });
            let (one, two) = composites(Some(track), &tracked(a));
            t.record(kappa.apply(Some(track), &one) == two, || {
                json!({ "simplex": simplex_text(a), "reason": "comparison moves an element of the total set" })
            });
        }
        report.push_tally(t);
        report.note(format!("level {l}: {strict} of {} composites agree on the nose", x.level(l).len()));
    }
    Ok(report)
}

/// Some `θ ∈ Aut(c)` with `θ ; g(u) = u ; θ` for every `u ∈ Aut(c)`, for a
/// skeletal endofunctor fixing `c`.
fn natural_component(g: &GroupoidMap, c: usize) -> bool {
    let gr = &g.source;
    let auts = gr.aut(c);
    auts.iter().any(|&theta| auts.iter().all(|&u| gr.then(theta, g.arrow(u)) == gr.then(u, theta)))
}

/// Fibres `NSur → S` and union `S → NSur` are levelwise equivalences and
/// mutually inverse up to natural isomorphism.
pub fn check_equivalence_nsur_s(k: usize, top: usize) -> Result<Report> {
    let nsur = Space::build(Kind::NSur, None, k, top)?;
    let s = Space::build(Kind::S, None, k, top)?;
    let mut report = Report::new("nsur-equivalence", json!({ "k": k, "top": top }));
    for n in 0..=top {
        let f = Induced::new(&nsur, n, &s, n, RawOp::TopFibres)?;
        let g = Induced::new(&s, n, &nsur, n, RawOp::Union(n))?;
        for (name, m) in [("fibres", &f), ("union", &g)] {
            let mut t = Tally::new("nsur-equivalence").level(n).square(format!("{name} is an equivalence"));
            let v = is_equivalence(&m.map);
            t.record(v.holds, || v.certificate.clone().unwrap_or_default());
            report.push_tally(t);
        }
        for (name, first, second) in [("union after fibres", &f, &g), ("fibres after union", &g, &f)] {
            let round = first.map.then(&second.map)?;
            let mut t = Tally::new("nsur-equivalence").level(n).square(format!("{name} ≅ id"));
            for c in 0..round.source.len() {
                let ok = round.object(c) == c && natural_component(&round, c);
                t.record(ok, || json!({ "object": round.source.label(c), "image": round.target.label(round.object(c)) }));
            }
            report.push_tally(t);
        }
        let empty = Simplex { members: vec![Member { sets: vec![0; n + 1], maps: vec![Vec::new(); n], deco: None }] };
        let mut t = Tally::new("nsur-equivalence").level(n).square("empty chain to empty family");
        let image = nsur.level(n).object_of(&empty).map(|c| &s.level(n).objects[f.image(c)]);
        t.record(image.is_some_and(|y| y.members.is_empty()), || json!({ "image": image.map(simplex_text) }));
        report.push_tally(t);
    }
    Ok(report)
}

fn family_of(h: &dyn HereditarySpecies, c: &Simplex) -> Family {
    let members = c.members.iter().map(|m| canonical_form(h, m.deco.as_ref().expect("decorated"))).collect();
    Family::new(members).expect("members of a level-one simplex are non-empty")
}

/// `Δ(G)` as the cardinality of `(d_2, d_0)` restricted to the fibre of
/// `d_1: H_2 → H_1` over `G`, inside a space with `k ≥ |G|` and top `≥ 2`.
pub fn groupoid_comultiply(h: &Space, g: &HStructure) -> Result<Tensor2> {
    let species = h.sp().ok_or_else(|| Error::Precondition("space is not decorated".into()))?;
    if h.kind != Kind::H || h.top < 2 || g.n > h.k || g.n == 0 {
        return Err(Error::Precondition(format!("{} cannot hold {}-element structures at level 2", h.name(), g.n)));
    }
    let member = Member { sets: vec![g.n], maps: Vec::new(), deco: Some(g.clone()) };
    let (canon, _) = canonical_simplex(h.sp(), &Simplex { members: vec![member] });
    let level1 = h.level(1);
    let target = level1.object_of(&canon).expect("structure is inside the truncation");
    let d1 = Induced::new(h, 2, h, 1, h.face(2, 1))?;
    let d2 = Induced::new(h, 2, h, 1, h.face(2, 2))?;
    let d0 = Induced::new(h, 2, h, 1, h.face(2, 0))?;
    let fibre = homotopy_fibre(&d1.map, target)?;
    let product = Arc::new(FiniteGroupoid::product(&level1.groupoid, &level1.groupoid));
    let pair = GroupoidMap::pair(&d2.map, &d0.map, product)?;
    let pushed = fibre.projection.then(&pair)?;
    let nb = level1.len();
    let mut out = LinComb::zero();
    for (obj, coeff) in map_cardinality(&pushed) {
        let (a, b) = (&level1.objects[obj / nb], &level1.objects[obj % nb]);
        out.add_term((family_of(species, a), family_of(species, b)), coeff);
    }
    Ok(out)
}

/// The comultiplication read off from the space agrees with the partition
/// formula on every structure with at most `n_max` elements.
pub fn check_schmitt_coincide(h: SpeciesRef, n_max: usize) -> Result<Report> {
    let space = Space::build(Kind::H, Some(h.clone()), n_max, 2)?;
    let mut report = Report::new("schmitt-coincide", json!({ "species": h.name(), "nmax": n_max }));
    for n in 1..=n_max {
        let mut t = Tally::new("schmitt-coincide").level(n);
        for c in crate::bialgebra::iso_classes(h.as_ref(), n) {
            let from_space = groupoid_comultiply(&space, &c.rep)?;
            let direct = comultiply_structure(h.as_ref(), &c.rep);
            t.record(from_space == direct, || {
                json!({
                    "structure": crate::io::structure_json(h.as_ref(), &c.rep),
                    "from_space": crate::io::tensor2_json(h.as_ref(), &from_space),
                    "direct": crate::io::tensor2_json(h.as_ref(), &direct),
                })
            });
        }
        report.push_tally(t);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::species::species_by_name;

    #[test]
    fn chains_and_families_are_equivalent() {
        let r = check_equivalence_nsur_s(2, 2).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
        let nsur = Space::build(Kind::NSur, None, 2, 1).unwrap();
        let s = Space::build(Kind::S, None, 2, 1).unwrap();
        let f = Induced::new(&nsur, 1, &s, 1, RawOp::TopFibres).unwrap();
        let chain = Simplex { members: vec![Member { sets: vec![2, 1], maps: vec![vec![0, 0]], deco: None }] };
        let image = &s.level(1).objects[f.image(nsur.level(1).object_of(&chain).unwrap())];
        assert_eq!(image, &Simplex { members: vec![Member { sets: vec![2], maps: Vec::new(), deco: None }] });
    }

    #[test]
    fn pseudo_identity_is_not_strict() {
        let s = Space::build(Kind::S, None, 3, 3).unwrap();
        let r = check_pseudo_identity(&s).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
        // (3 ↠ 2 ↠ 1) with blocks {1,3},{2}: fibres of fibres list 1,3 then
        // 2, while fibres of the composite surjection list 1,2,3.
        let a = Simplex { members: vec![Member { sets: vec![3, 2], maps: vec![vec![0, 1, 0]], deco: None }] };
        let one = RawOp::TopFibres.apply(None, &RawOp::RemoveSet(1).apply(None, &a));
        let two = RawOp::TopFibres.apply(None, &RawOp::TopFibres.apply(None, &a));
        assert_eq!(one, two, "points are indistinguishable without labels");
        let tracked_a = tracked(&a);
        let track: &dyn HereditarySpecies = &Tracking;
        let one = RawOp::TopFibres.apply(Some(track), &RawOp::RemoveSet(1).apply(Some(track), &tracked_a));
        let two = RawOp::TopFibres.apply(Some(track), &RawOp::TopFibres.apply(Some(track), &tracked_a));
        assert_ne!(one, two);
        assert_eq!(top_faces_comparison(&a).perm, vec![0, 2, 1]);
        assert_eq!(top_faces_comparison(&a).apply(Some(track), &one), two);
    }

    #[test]
    fn comultiplication_of_an_edge_from_the_space() {
        let g = species_by_name("graphs").unwrap();
        let h = Space::build(Kind::H, Some(g.clone()), 2, 2).unwrap();
        let k2 = HStructure::new(2, vec![(0, 1)]);
        let point = HStructure::bare(1);
        let fam = |xs: &[HStructure]| Family::from_structures(g.as_ref(), xs).unwrap();
        let mut expected = LinComb::zero();
        expected.add_term((fam(&[point.clone(), point.clone()]), fam(&[k2.clone()])), crate::rational::q_int(1));
        expected.add_term((fam(&[k2.clone()]), fam(&[point])), crate::rational::q_int(1));
        assert_eq!(groupoid_comultiply(&h, &k2).unwrap(), expected);
    }

    #[test]
    fn space_and_partition_formula_agree() {
        for name in ["sets", "graphs"] {
            let r = check_schmitt_coincide(species_by_name(name).unwrap(), 3).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.first_failure());
        }
    }
}
