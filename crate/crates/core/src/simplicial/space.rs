//! Skeletal levels of the truncated spaces and the maps they induce.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};

use super::ops::RawOp;
use super::simplex::{automorphisms, canonical_member, canonical_simplex, Member, Relabeling, Simplex, Species};
use crate::bialgebra::multisets;
use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupoidMap, SquareWithWitness};
use crate::species::SpeciesRef;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Chains of surjections between possibly empty sets.
    NSur,
    /// Families of chains between non-empty sets.
    S,
    /// `S` with a structure on the first set of each member.
    H,
    /// `NSur` with a structure on the first set.
    M,
}

impl Kind {
    pub fn is_family(self) -> bool {
        matches!(self, Kind::S | Kind::H)
    }

    pub fn is_decorated(self) -> bool {
        matches!(self, Kind::H | Kind::M)
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::NSur => "NSur",
            Kind::S => "S",
            Kind::H => "H",
            Kind::M => "M",
        }
    }
}

/// One level as a skeletal groupoid: canonical simplices and their
/// automorphisms.
#[derive(Debug)]
pub struct Level {
    pub n: usize,
    pub objects: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    arrows: Vec<(usize, Relabeling)>,
    arrow_index: HashMap<(usize, Relabeling), usize>,
    pub groupoid: Arc<FiniteGroupoid>,
}

impl Level {
    fn new(sp: Species, n: usize, mut objects: Vec<Simplex>, label: impl Fn(&Simplex) -> String) -> Result<Self> {
        objects.sort();
        objects.dedup();
        let index: HashMap<Simplex, usize> = objects.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect();
        let mut arrows = Vec::new();
        for (k, c) in objects.iter().enumerate() {
            let mut auts = automorphisms(sp, c);
            let id = Relabeling::identity(c);
            auts.sort_by_key(|a| *a != id);
            arrows.extend(auts.into_iter().map(|a| (k, a)));
        }
        let arrow_index = arrows.iter().enumerate().map(|(i, (k, a))| ((*k, a.clone()), i)).collect();
        let labels = objects.iter().map(label).collect();
        let data = arrows.iter().map(|(k, a)| (*k, *k, a.clone())).collect();
        let groupoid = Arc::new(FiniteGroupoid::from_elements(labels, data, |f, g| f.then(g))?);
        Ok(Self { n, objects, index, arrows, arrow_index, groupoid })
    }

    pub fn object_of(&self, c: &Simplex) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn arrow_of(&self, object: usize, r: &Relabeling) -> Option<usize> {
        self.arrow_index.get(&(object, r.clone())).copied()
    }

    pub fn relabeling(&self, arrow: usize) -> &Relabeling {
        &self.arrows[arrow].1
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }
}

/// A truncated space: levels `0..=top`, objects of weight at most `k`.
pub struct Space {
    pub kind: Kind,
    pub species: Option<SpeciesRef>,
    pub k: usize,
    pub top: usize,
    pub levels: Vec<Arc<Level>>,
}

/// Monotone surjections `a ↠ b` as value lists.
fn monotone_surjections(a: usize, b: usize) -> Vec<Vec<usize>> {
    if a == 0 || b == 0 {
        return if a == b { vec![Vec::new()] } else { Vec::new() };
    }
    if b > a {
        return Vec::new();
    }
    let mut out = Vec::new();
    // Choose which of the a-1 gaps start a new block.
    for mask in 0u32..(1 << (a - 1)) {
        if mask.count_ones() as usize != b - 1 {
            continue;
        }
        let mut v = vec![0];
        for g in 0..a - 1 {
            let last = *v.last().unwrap();
            v.push(if mask & (1 << g) != 0 { last + 1 } else { last });
        }
        out.push(v);
    }
    out
}

/// Chains with `len` sets whose first set has size `first`, all maps
/// monotone. Sets are non-empty unless `first = 0`.
fn monotone_chains(first: usize, len: usize) -> Vec<(Vec<usize>, Vec<Vec<usize>>)> {
    if len == 0 {
        return vec![(Vec::new(), Vec::new())];
    }
    let mut out = vec![(vec![first], Vec::new())];
    for _ in 1..len {
        let mut next = Vec::new();
        for (sets, maps) in &out {
            let a = *sets.last().unwrap();
            let lo = usize::from(a > 0);
            for b in lo..=a {
                for f in monotone_surjections(a, b) {
                    let mut s2 = sets.clone();
                    s2.push(b);
                    let mut m2 = maps.clone();
                    m2.push(f);
                    next.push((s2, m2));
                }
            }
        }
        out = next;
    }
    out
}

impl Space {
    pub fn sp(&self) -> Species<'_> {
        self.species.as_deref()
    }

    pub fn name(&self) -> String {
        match &self.species {
            Some(h) => format!("{}[{}]", self.kind.name(), h.name()),
            None => self.kind.name().to_string(),
        }
    }

    pub fn level(&self, n: usize) -> &Arc<Level> {
        &self.levels[n]
    }

    /// Total weight: `Σ |V_0|` over members, a point counting 1.
    pub fn weight(x: &Simplex) -> usize {
        x.members.iter().map(Member::base).sum()
    }

    pub fn face(&self, n: usize, i: usize) -> RawOp {
        assert!(n >= 1 && i <= n);
        if self.kind.is_family() && i == n {
            RawOp::TopFibres
        } else {
            RawOp::RemoveSet(i)
        }
    }

    pub fn degeneracy(&self, n: usize, i: usize) -> RawOp {
        assert!(i <= n);
        if self.kind.is_family() && i == n {
            RawOp::AppendTerminal
        } else {
            RawOp::DuplicateSet(i)
        }
    }

    pub fn build(kind: Kind, species: Option<SpeciesRef>, k: usize, top: usize) -> Result<Space> {
        if kind.is_decorated() != species.is_some() {
            return Err(Error::Precondition(format!("{} needs a species exactly when decorated", kind.name())));
        }
        let mut space = Space { kind, species, k, top, levels: Vec::new() };
        for n in 0..=top {
            let objects = space.enumerate(n);
            let label = |c: &Simplex| crate::io::simplex_text(c);
            let level = Level::new(space.sp(), n, objects, label)?;
            space.levels.push(Arc::new(level));
        }
        Ok(space)
    }

    fn decorations(&self, n: usize) -> Vec<Option<crate::species::HStructure>> {
        match self.sp() {
            Some(h) => h.structures(n).into_iter().map(Some).collect(),
            None => vec![None],
        }
    }

    fn enumerate(&self, n: usize) -> Vec<Simplex> {
        let sp = self.sp();
        if self.kind.is_family() {
            let mut classes: Vec<(Member, usize)> = Vec::new();
            for first in 1..=self.k {
                let shapes = if n == 0 { Vec::new() } else { monotone_chains(first, n) };
                for (sets, maps) in shapes {
                    for deco in self.decorations(first) {
                        let m = Member { sets: sets.clone(), maps: maps.clone(), deco };
                        classes.push((canonical_member(sp, &m).0, first));
                    }
                }
            }
            if n == 0 {
                classes.extend(self.decorations(1).into_iter().map(|d| (Member::point(d), 1)));
            }
            classes.sort();
            classes.dedup();
            multisets(&classes, self.k).into_iter().map(|members| Simplex { members }).collect()
        } else {
            let mut out = Vec::new();
            for first in 0..=self.k {
                for (sets, maps) in monotone_chains(first, n + 1) {
                    for deco in self.decorations(first) {
                        let x = Simplex { members: vec![Member { sets: sets.clone(), maps: maps.clone(), deco }] };
                        out.push(canonical_simplex(sp, &x).0);
                    }
                }
            }
            out
        }
    }
}

/// The skeletal map induced by a raw operator: `F(c) = canon(op(c))` with
/// `φ_c: op(c) → F(c)`, and `F(u) = φ_c ∘ op(u) ∘ φ_c⁻¹`.
pub struct Induced {
    pub src: Arc<Level>,
    pub tgt: Arc<Level>,
    src_species: Option<SpeciesRef>,
    tgt_species: Option<SpeciesRef>,
    pub op: RawOp,
    pub map: GroupoidMap,
    raw: Vec<Simplex>,
    phi: Vec<Relabeling>,
}

impl Induced {
    pub fn new(from: &Space, n: usize, to: &Space, m: usize, op: RawOp) -> Result<Induced> {
        let (src, tgt) = (from.level(n).clone(), to.level(m).clone());
        let (sp, tsp) = (from.sp(), to.sp());
        let mut raw = Vec::with_capacity(src.len());
        let mut phi = Vec::with_capacity(src.len());
        let mut objects = Vec::with_capacity(src.len());
        for c in &src.objects {
            let y = op.apply(sp, c);
            let (canon, to_canon) = canonical_simplex(tsp, &y);
            let k = tgt.object_of(&canon).ok_or_else(|| {
                Error::Precondition(format!("{op:?} leaves the truncation at {}", crate::io::simplex_text(c)))
            })?;
            objects.push(k);
            raw.push(y);
            phi.push(to_canon);
        }
        let mut arrows = Vec::with_capacity(src.groupoid.arrow_count());
        for (a, (c, u)) in src.arrows.iter().enumerate() {
            debug_assert_eq!(src.arrow_of(*c, u), Some(a));
            let image = phi[*c].inverse().then(&op.apply_relabel(sp, &src.objects[*c], u)).then(&phi[*c]);
            let k = tgt.arrow_of(objects[*c], &image).expect("conjugated automorphism");
            arrows.push(k);
        }
        let map = GroupoidMap::new(src.groupoid.clone(), tgt.groupoid.clone(), objects, arrows)?;
        Ok(Induced {
            src,
            tgt,
            src_species: from.species.clone(),
            tgt_species: to.species.clone(),
            op,
            map,
            raw,
            phi,
        })
    }

    pub fn image(&self, c: usize) -> usize {
        self.map.object(c)
    }
}

/// `Φ: next.op(op(c)) → next(self(c))` for the composite path through `self`
/// then `next`.
fn path_to_canon(first: &Induced, next: &Induced, c: usize) -> (Simplex, Relabeling) {
    let mid = first.image(c);
    let sp = first.tgt_species.as_deref();
    debug_assert_eq!(first.tgt_species.is_some(), next.src_species.is_some());
    let raw = next.op.apply(sp, &first.raw[c]);
    let lifted = next.op.apply_relabel(sp, &first.raw[c], &first.phi[c]);
    (raw, lifted.then(&next.phi[mid]))
}

/// Builds the square with its witness from the two raw composites. When
/// the composites differ, `kappa(a)` supplies the comparison from the
/// top-right raw value to the left-bottom one; without it the square does
/// not commute and the first such object is returned as a witness.
pub fn square(
    top: &Induced,
    left: &Induced,
    right: &Induced,
    bottom: &Induced,
    kappa: Option<&dyn Fn(&Simplex) -> Relabeling>,
) -> std::result::Result<SquareWithWitness, Value> {
    let mut witness = Vec::with_capacity(top.src.len());
    for (a, obj) in top.src.objects.iter().enumerate() {
        let (raw1, phi) = path_to_canon(top, right, a);
        let (raw2, psi) = path_to_canon(left, bottom, a);
        let comparison = if raw1 == raw2 {
            Relabeling::identity(&raw1)
        } else if let Some(kappa) = kappa {
            let k = kappa(obj);
            if k.apply(right.tgt_species.as_deref(), &raw1) != raw2 {
                return Err(json!({ "object": crate::io::simplex_text(obj), "reason": "comparison does not relate the composites" }));
            }
            k
        } else {
            return Err(json!({
                "object": crate::io::simplex_text(obj),
                "top_right": crate::io::simplex_text(&raw1),
                "left_bottom": crate::io::simplex_text(&raw2),
            }));
        };
        let theta = phi.inverse().then(&comparison).then(&psi);
        let d = &right.tgt;
        let target = right.image(top.image(a));
        if target != bottom.image(left.image(a)) {
            return Err(json!({ "object": crate::io::simplex_text(obj), "reason": "composites land in different classes" }));
        }
        witness.push(d.arrow_of(target, &theta).expect("comparison is an automorphism of the canonical object"));
    }
    Ok(SquareWithWitness {
        top: top.map.clone(),
        left: left.map.clone(),
        right: right.map.clone(),
        bottom: bottom.map.clone(),
        witness,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::homotopy_cardinality;
    use crate::rational::q;
    use crate::species::species_by_name;

    #[test]
    fn monotone_surjection_counts() {
        assert_eq!(monotone_surjections(4, 2).len(), 3);
        assert_eq!(monotone_surjections(0, 0).len(), 1);
        assert_eq!(monotone_surjections(2, 0).len(), 0);
    }

    #[test]
    fn nsur_level_zero() {
        let x = Space::build(Kind::NSur, None, 2, 1).unwrap();
        assert_eq!(x.level(0).len(), 3);
        assert_eq!(homotopy_cardinality(&x.level(0).groupoid), q(5, 2));
        // Surjections from a 2-set: onto 1 and onto 2.
        let from_two = x.level(1).objects.iter().filter(|c| c.members[0].sets[0] == 2).count();
        assert_eq!(from_two, 2);
    }

    #[test]
    fn h_level_one_for_graphs() {
        let graphs = species_by_name("graphs").unwrap();
        let h = Space::build(Kind::H, Some(graphs.clone()), 2, 1).unwrap();
        // (), (•), (••), (K2), (edgeless 2)
        assert_eq!(h.level(1).len(), 5);
        let m = Space::build(Kind::M, Some(graphs), 2, 0).unwrap();
        assert_eq!(m.level(0).len(), 4);
    }

    #[test]
    fn induced_maps_are_functors() {
        let graphs = species_by_name("graphs").unwrap();
        let h = Space::build(Kind::H, Some(graphs), 3, 2).unwrap();
        for n in 1..=2 {
            for i in 0..=n {
                let f = Induced::new(&h, n, &h, n - 1, h.face(n, i)).unwrap();
                f.map.validate().unwrap();
            }
            for i in 0..n {
                let s = Induced::new(&h, n - 1, &h, n, h.degeneracy(n - 1, i)).unwrap();
                s.map.validate().unwrap();
            }
        }
    }
}
