//! Homotopy fibres and pullbacks, equivalence testing, pullback squares and
//! homotopy cardinality.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::{FiniteGroupoid, GroupoidMap};
use crate::error::{Error, Result};
use crate::rational::Q;

/// Outcome of a decision procedure, with a counterexample when it fails.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    pub certificate: Option<Value>,
}

impl Verdict {
    pub fn pass() -> Self {
        Self { holds: true, certificate: None }
    }

    pub fn fail(certificate: Value) -> Self {
        Self { holds: false, certificate: Some(certificate) }
    }
}

/// The homotopy fibre with its projection to the source.
#[derive(Clone, Debug)]
pub struct Fibre {
    pub groupoid: Arc<FiniteGroupoid>,
    /// Object `k` of the fibre is `(x, α: p(x) → s)`.
    pub points: Vec<(usize, usize)>,
    pub projection: GroupoidMap,
}

pub fn homotopy_fibre(p: &GroupoidMap, s: usize) -> Result<Fibre> {
    let (x_grp, s_grp) = (&p.source, &p.target);
    if s >= s_grp.len() {
        return Err(Error::UnknownObject(format!("{s}")));
    }
    let mut points = Vec::new();
    for x in 0..x_grp.len() {
        for &a in s_grp.hom(p.object(x), s) {
            points.push((x, a));
        }
    }
    let mut by_source: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, &(x, _)) in points.iter().enumerate() {
        by_source.entry(x).or_default().push(k);
    }
    let mut arrows = Vec::new();
    for (k, &(x, a)) in points.iter().enumerate() {
        for x2 in 0..x_grp.len() {
            let Some(targets) = by_source.get(&x2) else { continue };
            for &u in x_grp.hom(x, x2) {
                let pu = p.arrow(u);
                for &k2 in targets {
                    // α′ ∘ p(u) = α
                    if s_grp.then(pu, points[k2].1) == a {
                        arrows.push((k, k2, u));
                    }
                }
            }
        }
    }
    let labels = points
        .iter()
        .map(|&(x, a)| format!("({}, #{a})", x_grp.label(x)))
        .collect();
    let arrow_map: Vec<usize> = arrows.iter().map(|a| a.2).collect();
    let groupoid = Arc::new(FiniteGroupoid::from_elements(labels, arrows, |&u, &v| x_grp.then(u, v))?);
    let projection = GroupoidMap::new(
        groupoid.clone(),
        x_grp.clone(),
        points.iter().map(|&(x, _)| x).collect(),
        arrow_map,
    )?;
    Ok(Fibre { groupoid, points, projection })
}

/// A square
/// ```text
///   A --top--> B
///   |          |
///  left      right
///   v          v
///   C -bottom-> D
/// ```
/// with `witness[a]: right(top(a)) → bottom(left(a))` in `D`.
#[derive(Clone, Debug)]
pub struct SquareWithWitness {
    pub top: GroupoidMap,
    pub left: GroupoidMap,
    pub right: GroupoidMap,
    pub bottom: GroupoidMap,
    pub witness: Vec<usize>,
}

impl SquareWithWitness {
    pub fn validate(&self) -> Result<()> {
        let share = |a: &Arc<FiniteGroupoid>, b: &Arc<FiniteGroupoid>| Arc::ptr_eq(a, b);
        if !share(&self.top.source, &self.left.source)
            || !share(&self.top.target, &self.right.source)
            || !share(&self.left.target, &self.bottom.source)
            || !share(&self.right.target, &self.bottom.target)
        {
            return Err(Error::InvalidMap("the four maps do not form a square".into()));
        }
        let (a, d) = (&self.top.source, &self.right.target);
        if self.witness.len() != a.len() {
            return Err(Error::NonNaturalWitness("witness has the wrong number of components".into()));
        }
        for (x, &t) in self.witness.iter().enumerate() {
            if t >= d.arrow_count()
                || d.source(t) != self.right.object(self.top.object(x))
                || d.target(t) != self.bottom.object(self.left.object(x))
            {
                return Err(Error::NonNaturalWitness(format!("component at object {x} has the wrong endpoints")));
            }
        }
        for u in 0..a.arrow_count() {
            let (x, y) = (a.source(u), a.target(u));
            let lhs = d.then(self.right.arrow(self.top.arrow(u)), self.witness[y]);
            let rhs = d.then(self.witness[x], self.bottom.arrow(self.left.arrow(u)));
            if lhs != rhs {
                return Err(Error::NonNaturalWitness(format!("{u}")));
            }
        }
        Ok(())
    }
}

/// The iso-comma groupoid of a cospan with its canonical square.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub groupoid: Arc<FiniteGroupoid>,
    /// Object `k` is `(x, y, α: f(x) → g(y))`.
    pub points: Vec<(usize, usize, usize)>,
    index: HashMap<(usize, usize, usize), usize>,
    arrow_index: HashMap<(usize, usize, (usize, usize)), usize>,
    pub square: SquareWithWitness,
}

impl Pullback {
    pub fn object_of(&self, x: usize, y: usize, alpha: usize) -> Option<usize> {
        self.index.get(&(x, y, alpha)).copied()
    }

    pub fn arrow_of(&self, p: usize, q: usize, u: usize, v: usize) -> Option<usize> {
        self.arrow_index.get(&(p, q, (u, v))).copied()
    }
}

pub fn homotopy_pullback(f: &GroupoidMap, g: &GroupoidMap) -> Result<Pullback> {
    if !Arc::ptr_eq(&f.target, &g.target) {
        return Err(Error::MismatchedTargets(format!("{} objects", f.target.len()), format!("{} objects", g.target.len())));
    }
    let (xg, yg, sg) = (&f.source, &g.source, &f.target);
    let mut points = Vec::new();
    for x in 0..xg.len() {
        for y in 0..yg.len() {
            for &a in sg.hom(f.object(x), g.object(y)) {
                points.push((x, y, a));
            }
        }
    }
    let index: HashMap<(usize, usize, usize), usize> = points.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    // g on arrows, inverted per hom-set, to solve g(v) = α′ ∘ f(u) ∘ α⁻¹.
    let mut g_pre: HashMap<usize, Vec<usize>> = HashMap::new();
    for v in 0..yg.arrow_count() {
        g_pre.entry(g.arrow(v)).or_default().push(v);
    }
    let mut by_first: Vec<Vec<usize>> = vec![Vec::new(); xg.len()];
    for (k, p) in points.iter().enumerate() {
        by_first[p.0].push(k);
    }
    let x_comp = xg.components();
    let mut arrows = Vec::new();
    for (k, &(x, y, a)) in points.iter().enumerate() {
        for x2 in (0..xg.len()).filter(|&x2| x_comp[x2] == x_comp[x]) {
            for &k2 in &by_first[x2] {
                let (_, y2, a2) = points[k2];
                for &u in xg.hom(x, x2) {
                    let needed = sg.then(sg.then(sg.inverse(a), f.arrow(u)), a2);
                    for &v in g_pre.get(&needed).map(Vec::as_slice).unwrap_or(&[]) {
                        if yg.source(v) == y && yg.target(v) == y2 {
                            arrows.push((k, k2, (u, v)));
                        }
                    }
                }
            }
        }
    }
    let labels = points
        .iter()
        .map(|&(x, y, a)| format!("({}, {}, #{a})", xg.label(x), yg.label(y)))
        .collect();
    let arrow_index = arrows.iter().enumerate().map(|(i, &(p, q, uv))| ((p, q, uv), i)).collect();
    let left_arrows: Vec<usize> = arrows.iter().map(|a| a.2 .0).collect();
    let right_arrows: Vec<usize> = arrows.iter().map(|a| a.2 .1).collect();
    let groupoid = Arc::new(FiniteGroupoid::from_elements(labels, arrows, |&(u, v), &(u2, v2)| {
        (xg.then(u, u2), yg.then(v, v2))
    })?);
    let top = GroupoidMap::new(groupoid.clone(), xg.clone(), points.iter().map(|p| p.0).collect(), left_arrows)?;
    let left = GroupoidMap::new(groupoid.clone(), yg.clone(), points.iter().map(|p| p.1).collect(), right_arrows)?;
    let square = SquareWithWitness {
        top,
        left,
        right: f.clone(),
        bottom: g.clone(),
        witness: points.iter().map(|p| p.2).collect(),
    };
    Ok(Pullback { groupoid, points, index, arrow_index, square })
}

/// Every hom-set map is a bijection.
pub fn is_fully_faithful(map: &GroupoidMap) -> Verdict {
    let (a, b) = (&map.source, &map.target);
    for x in 0..a.len() {
        for y in 0..a.len() {
            let (fx, fy) = (map.object(x), map.object(y));
            let hom = a.hom(x, y);
            let target_size = b.hom(fx, fy).len();
            let mut images: Vec<usize> = hom.iter().map(|&u| map.arrow(u)).collect();
            images.sort_unstable();
            images.dedup();
            if hom.len() != target_size || images.len() != hom.len() {
                return Verdict::fail(json!({
                    "reason": "not fully faithful",
                    "source_objects": [a.label(x), a.label(y)],
                    "source_hom_size": hom.len(),
                    "target_hom_size": target_size,
                    "distinct_images": images.len(),
                }));
            }
        }
    }
    Verdict::pass()
}

/// Fully faithful and essentially surjective.
pub fn is_equivalence(map: &GroupoidMap) -> Verdict {
    let ff = is_fully_faithful(map);
    if !ff.holds {
        return ff;
    }
    let (a, b) = (&map.source, &map.target);
    let comp = b.components();
    let mut hit = vec![false; b.len()];
    for x in 0..a.len() {
        hit[comp[map.object(x)]] = true;
    }
    if let Some(y) = (0..b.len()).find(|&y| !hit[comp[y]]) {
        return Verdict::fail(json!({ "reason": "not essentially surjective", "unhit_object": b.label(y) }));
    }
    Verdict::pass()
}

/// Compares the corner with the homotopy pullback of the cospan through the
/// induced comparison map.
pub fn is_pullback_square(sq: &SquareWithWitness) -> Result<Verdict> {
    sq.validate()?;
    let pb = homotopy_pullback(&sq.right, &sq.bottom)?;
    let a = &sq.top.source;
    let mut objects = Vec::with_capacity(a.len());
    for x in 0..a.len() {
        let k = pb
            .object_of(sq.top.object(x), sq.left.object(x), sq.witness[x])
            .expect("witness component is an object of the iso-comma");
        objects.push(k);
    }
    let mut arrows = Vec::with_capacity(a.arrow_count());
    for u in 0..a.arrow_count() {
        let (p, q) = (objects[a.source(u)], objects[a.target(u)]);
        let k = pb
            .arrow_of(p, q, sq.top.arrow(u), sq.left.arrow(u))
            .expect("natural witness makes the pair an iso-comma arrow");
        arrows.push(k);
    }
    let comparison = GroupoidMap::new(a.clone(), pb.groupoid.clone(), objects, arrows)?;
    Ok(is_equivalence(&comparison))
}

/// For each object `c` of the bottom-left corner, the induced map from the
/// fibre of `left` over `c` to the fibre of `right` over `bottom(c)` must be
/// an equivalence.
pub fn is_pullback_square_fibrewise(sq: &SquareWithWitness) -> Result<Verdict> {
    sq.validate()?;
    let d = &sq.right.target;
    for c in sq.left.target.representatives() {
        let lower = homotopy_fibre(&sq.left, c)?;
        let upper = homotopy_fibre(&sq.right, sq.bottom.object(c))?;
        let upper_index: HashMap<(usize, usize), usize> = upper.points.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let objects: Vec<usize> = lower
            .points
            .iter()
            .map(|&(x, beta)| {
                let gamma = d.then(sq.witness[x], sq.bottom.arrow(beta));
                upper_index[&(sq.top.object(x), gamma)]
            })
            .collect();
        let lg = &lower.groupoid;
        let mut arrows = Vec::with_capacity(lg.arrow_count());
        for w in 0..lg.arrow_count() {
            let u = lower.projection.arrow(w);
            let image = sq.top.arrow(u);
            let (p, q) = (objects[lg.source(w)], objects[lg.target(w)]);
            let k = upper
                .groupoid
                .hom(p, q)
                .iter()
                .copied()
                .find(|&k| upper.projection.arrow(k) == image)
                .expect("image of a fibre arrow lies in the fibre");
            arrows.push(k);
        }
        let comparison = GroupoidMap::new(lg.clone(), upper.groupoid.clone(), objects, arrows)?;
        let v = is_equivalence(&comparison);
        if !v.holds {
            return Ok(Verdict::fail(json!({
                "over": sq.left.target.label(c),
                "lower_fibre_cardinality": crate::rational::format_q(&homotopy_cardinality(lg)),
                "upper_fibre_cardinality": crate::rational::format_q(&homotopy_cardinality(&upper.groupoid)),
                "comparison": v.certificate,
            })));
        }
    }
    Ok(Verdict::pass())
}

pub fn homotopy_cardinality(x: &FiniteGroupoid) -> Q {
    x.representatives()
        .into_iter()
        .map(|r| Q::new(1.into(), (x.aut(r).len() as i64).into()))
        .fold(Q::zero(), |acc, t| acc + t)
}

/// `Σ_s |X_s| / |Aut s| δ_s` over representatives `s` of the target, using
/// `|X_s| / |Aut s| = Σ_{[x] : p(x) ≅ s} 1 / |Aut x|`.
pub fn map_cardinality(p: &GroupoidMap) -> Vec<(usize, Q)> {
    let target = &p.target;
    let comp = target.components();
    let reps = target.representatives();
    let mut coeff: HashMap<usize, Q> = reps.iter().map(|&r| (comp[r], Q::zero())).collect();
    for x in p.source.representatives() {
        *coeff.get_mut(&comp[p.object(x)]).expect("component") += Q::new(Q::one().numer().clone(), (p.source.aut(x).len() as i64).into());
    }
    reps.into_iter().map(|r| (r, coeff[&comp[r]].clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_int};

    fn arc(g: FiniteGroupoid) -> Arc<FiniteGroupoid> {
        Arc::new(g)
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|k| format!("o{k}")).collect()
    }

    /// Groupoid of the sets `{0..k}` for `k <= n` with all bijections.
    fn sets_upto(n: usize) -> FiniteGroupoid {
        let mut arrows = Vec::new();
        for k in 0..=n {
            crate::bialgebra::for_each_permutation(k, |p| arrows.push((k, k, p.to_vec())));
        }
        FiniteGroupoid::from_elements(labels(n + 1), arrows, |f, g| f.iter().map(|&i| g[i]).collect()).unwrap()
    }

    fn connected(n: usize) -> FiniteGroupoid {
        let mut arrows = Vec::new();
        for x in 0..n {
            for y in 0..n {
                arrows.push((x, y, ()));
            }
        }
        FiniteGroupoid::from_elements(labels(n), arrows, |_, _| ()).unwrap()
    }

    // Oracle for the explicit fibre: its cardinality over s, divided by |Aut s|.
    fn fibre_oracle(p: &GroupoidMap) -> Vec<(usize, Q)> {
        p.target
            .representatives()
            .into_iter()
            .map(|s| {
                let f = homotopy_fibre(p, s).unwrap();
                (s, homotopy_cardinality(&f.groupoid) / q_int(p.target.aut(s).len() as i64))
            })
            .collect()
    }

    #[test]
    fn cardinalities() {
        assert_eq!(homotopy_cardinality(&FiniteGroupoid::cyclic(2)), q(1, 2));
        let s = sets_upto(3);
        s.validate().unwrap();
        assert_eq!(homotopy_cardinality(&s), q(1, 1) + q(1, 1) + q(1, 2) + q(1, 6));
        assert_eq!(homotopy_cardinality(&sets_upto(2)), q(5, 2));
        assert_eq!(homotopy_cardinality(&connected(3)), q_int(1));
    }

    #[test]
    fn fibre_of_identity_is_contractible() {
        let bg = arc(FiniteGroupoid::cyclic(2));
        let f = homotopy_fibre(&GroupoidMap::identity(bg), 0).unwrap();
        f.groupoid.validate().unwrap();
        assert_eq!(f.groupoid.len(), 2);
        assert_eq!(f.groupoid.representatives().len(), 1);
        assert!(f.groupoid.is_locally_discrete());
        assert_eq!(homotopy_cardinality(&f.groupoid), q_int(1));
    }

    #[test]
    fn fibre_over_the_point_is_the_source() {
        let x = arc(FiniteGroupoid::cyclic(2));
        let f = homotopy_fibre(&GroupoidMap::to_point(x.clone()), 0).unwrap();
        assert_eq!(homotopy_cardinality(&f.groupoid), q(1, 2));
        assert!(is_equivalence(&f.projection).holds);
    }

    #[test]
    fn fibre_of_unknown_object() {
        let bg = arc(FiniteGroupoid::cyclic(2));
        assert!(homotopy_fibre(&GroupoidMap::identity(bg), 3).is_err());
    }

    #[test]
    fn pullback_of_points_into_bg() {
        let bg = arc(FiniteGroupoid::cyclic(2));
        let pt = arc(FiniteGroupoid::discrete(labels(1)));
        let f = GroupoidMap::new(pt.clone(), bg.clone(), vec![0], vec![0]).unwrap();
        let pb = homotopy_pullback(&f, &f).unwrap();
        pb.groupoid.validate().unwrap();
        assert_eq!(pb.groupoid.len(), 2);
        assert!(pb.groupoid.is_discrete());
        assert_eq!(homotopy_cardinality(&pb.groupoid), q_int(2));
        assert!(is_pullback_square(&pb.square).unwrap().holds);
    }

    #[test]
    fn pullback_along_identity() {
        let x = arc(sets_upto(2));
        let s = arc(FiniteGroupoid::cyclic(2));
        // The sign of a permutation of at most two elements.
        let arrows = (0..x.arrow_count()).map(|u| usize::from(x.source(u) == 2 && x.hom(2, 2)[1] == u)).collect();
        let f = GroupoidMap::new(x.clone(), s.clone(), vec![0; 3], arrows).unwrap();
        f.validate().unwrap();
        let pb = homotopy_pullback(&f, &GroupoidMap::identity(s)).unwrap();
        assert!(is_equivalence(&pb.square.top).holds);
        assert_eq!(homotopy_cardinality(&pb.groupoid), homotopy_cardinality(&x));
    }

    #[test]
    fn disjoint_points_have_empty_pullback() {
        let two = arc(FiniteGroupoid::discrete(labels(2)));
        let pt = arc(FiniteGroupoid::discrete(labels(1)));
        let f = GroupoidMap::new(pt.clone(), two.clone(), vec![0], vec![0]).unwrap();
        let g = GroupoidMap::new(pt, two.clone(), vec![1], vec![two.identity(1)]).unwrap();
        assert!(homotopy_pullback(&f, &g).unwrap().groupoid.is_empty());
    }

    #[test]
    fn mismatched_targets() {
        let a = arc(FiniteGroupoid::cyclic(2));
        let b = arc(FiniteGroupoid::cyclic(2));
        assert!(homotopy_pullback(&GroupoidMap::identity(a), &GroupoidMap::identity(b)).is_err());
    }

    #[test]
    fn equivalences() {
        let c = arc(connected(2));
        assert!(is_equivalence(&GroupoidMap::identity(c.clone())).holds);
        let pt = arc(FiniteGroupoid::discrete(labels(1)));
        let incl = GroupoidMap::new(pt, c, vec![0], vec![0]).unwrap();
        assert!(is_equivalence(&incl).holds);
        let two = arc(FiniteGroupoid::discrete(labels(2)));
        let v = is_equivalence(&GroupoidMap::to_point(two));
        assert!(!v.holds);
        let cert = v.certificate.unwrap();
        assert_eq!((cert["source_hom_size"].as_u64(), cert["target_hom_size"].as_u64()), (Some(0), Some(1)));
    }

    #[test]
    fn map_cardinality_examples() {
        let bg = arc(FiniteGroupoid::cyclic(2));
        let id = GroupoidMap::identity(bg);
        assert_eq!(map_cardinality(&id), vec![(0, q(1, 2))]);
        assert_eq!(map_cardinality(&id), fibre_oracle(&id));
        let three = arc(FiniteGroupoid::discrete(labels(3)));
        let to_pt = GroupoidMap::to_point(three);
        assert_eq!(map_cardinality(&to_pt), vec![(0, q_int(3))]);
        assert_eq!(map_cardinality(&to_pt), fibre_oracle(&to_pt));
    }

    #[test]
    fn non_natural_witness_rejected() {
        let bg = arc(FiniteGroupoid::cyclic(3));
        let id = GroupoidMap::identity(bg.clone());
        // Inversion on Z/3, paired with the identity witness.
        let twisted = GroupoidMap::new(bg.clone(), bg.clone(), vec![0], vec![0, 2, 1]).unwrap();
        twisted.validate().unwrap();
        let bad = SquareWithWitness {
            top: id.clone(),
            left: id.clone(),
            right: id,
            bottom: twisted,
            witness: vec![bg.identity(0)],
        };
        assert!(matches!(is_pullback_square(&bad), Err(Error::NonNaturalWitness(_))));
    }

    // Pasting an iso-comma square onto the left of another one gives a
    // pullback rectangle.
    #[test]
    fn pasted_pullbacks() {
        let s = arc(sets_upto(2));
        let pt = arc(FiniteGroupoid::discrete(labels(1)));
        let id = GroupoidMap::identity(s.clone());
        let pick = GroupoidMap::new(pt, s.clone(), vec![2], vec![s.identity(2)]).unwrap();
        let right = homotopy_pullback(&id, &id).unwrap();
        let left = homotopy_pullback(&right.square.left, &pick).unwrap();
        let rect = SquareWithWitness {
            top: left.square.top.then(&right.square.top).unwrap(),
            left: left.square.left.clone(),
            right: id.clone(),
            bottom: pick.then(&id).unwrap(),
            witness: left
                .points
                .iter()
                .map(|&(p, _, beta)| s.then(right.points[p].2, beta))
                .collect(),
        };
        assert!(is_pullback_square(&right.square).unwrap().holds);
        assert!(is_pullback_square(&left.square).unwrap().holds);
        assert!(is_pullback_square(&rect).unwrap().holds);
        assert!(is_pullback_square_fibrewise(&rect).unwrap().holds);
        assert_eq!(homotopy_cardinality(&left.groupoid), q_int(1));
    }

    #[test]
    fn fibrewise_detects_non_pullback() {
        // The square with corner a point over BG ← * → BG is not a pullback:
        // the true pullback has two components.
        let bg = arc(FiniteGroupoid::cyclic(2));
        let pt = arc(FiniteGroupoid::discrete(labels(1)));
        let f = GroupoidMap::new(pt.clone(), bg.clone(), vec![0], vec![0]).unwrap();
        let id_pt = GroupoidMap::identity(pt);
        let sq = SquareWithWitness { top: id_pt.clone(), left: id_pt, right: f.clone(), bottom: f, witness: vec![0] };
        assert!(!is_pullback_square(&sq).unwrap().holds);
        assert!(!is_pullback_square_fibrewise(&sq).unwrap().holds);
    }
}
