//! Finite groupoids stored extensionally, and maps between them.

mod constructions;

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use constructions::{
    homotopy_cardinality, homotopy_fibre, homotopy_pullback, is_equivalence, is_fully_faithful, is_pullback_square,
    is_pullback_square_fibrewise, map_cardinality, Fibre, Pullback, SquareWithWitness, Verdict,
};

/// Objects are `0..len`, arrows are `0..arrow_count`. Composition is total on
/// composable pairs and stored as a table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "GroupoidData", into = "GroupoidData")]
pub struct FiniteGroupoid {
    labels: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    identity: Vec<usize>,
    inverse: Vec<usize>,
    homs: HashMap<(usize, usize), Vec<usize>>,
    // Arrows out of each object, and each arrow's position in that list.
    out_of: Vec<Vec<usize>>,
    out_pos: Vec<usize>,
    // g ∘ f sits at comp[comp_start[f] + out_pos[g]] when tgt f = src g.
    comp_start: Vec<usize>,
    comp: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GroupoidData {
    objects: Vec<String>,
    morphisms: Vec<[usize; 2]>,
    /// Triples `[f, g, g∘f]`.
    composition: Vec<[usize; 3]>,
}

impl TryFrom<GroupoidData> for FiniteGroupoid {
    type Error = Error;

    fn try_from(d: GroupoidData) -> Result<Self> {
        let table: HashMap<(usize, usize), usize> = d.composition.iter().map(|t| ((t[0], t[1]), t[2])).collect();
        let arrows = d.morphisms.iter().map(|m| (m[0], m[1])).collect();
        let g = Self::from_table(d.objects, arrows, |f, g| table.get(&(f, g)).copied())?;
        g.validate()?;
        Ok(g)
    }
}

impl From<FiniteGroupoid> for GroupoidData {
    fn from(g: FiniteGroupoid) -> Self {
        let composition: Vec<[usize; 3]> = g.composable().map(|(f, h, c)| [f, h, c]).collect();
        GroupoidData {
            morphisms: g.src.iter().zip(&g.tgt).map(|(&s, &t)| [s, t]).collect(),
            objects: g.labels,
            composition,
        }
    }
}

impl FiniteGroupoid {
    /// Builds from an explicit table; `compose(f, g)` is `g ∘ f`. Identities
    /// and inverses are located; associativity is left to [`Self::validate`].
    pub fn from_table(
        labels: Vec<String>,
        arrows: Vec<(usize, usize)>,
        mut compose: impl FnMut(usize, usize) -> Option<usize>,
    ) -> Result<Self> {
        let n = labels.len();
        if let Some((k, _)) = arrows.iter().enumerate().find(|(_, &(s, t))| s >= n || t >= n) {
            return Err(Error::InvalidGroupoid(format!("arrow {k} has an endpoint outside the object list")));
        }
        let src: Vec<usize> = arrows.iter().map(|a| a.0).collect();
        let tgt: Vec<usize> = arrows.iter().map(|a| a.1).collect();
        let mut homs: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (k, &(s, t)) in arrows.iter().enumerate() {
            homs.entry((s, t)).or_default().push(k);
            out_of[s].push(k);
        }
        let mut out_pos = vec![0; arrows.len()];
        for list in &out_of {
            for (i, &f) in list.iter().enumerate() {
                out_pos[f] = i;
            }
        }
        let mut comp_start = Vec::with_capacity(arrows.len());
        let mut comp = Vec::new();
        for f in 0..arrows.len() {
            comp_start.push(comp.len());
            for &g in &out_of[tgt[f]] {
                let c = compose(f, g).ok_or_else(|| Error::InvalidGroupoid(format!("no composite for ({f}, {g})")))?;
                if c >= arrows.len() || src[c] != src[f] || tgt[c] != tgt[g] {
                    return Err(Error::InvalidGroupoid(format!("composite of ({f}, {g}) has the wrong endpoints")));
                }
                comp.push(c);
            }
        }
        let at = |f: usize, g: usize| comp[comp_start[f] + out_pos[g]];
        let mut identity = Vec::with_capacity(n);
        for x in 0..n {
            let loops = homs.get(&(x, x)).map(Vec::as_slice).unwrap_or(&[]);
            let e = loops
                .iter()
                .copied()
                .find(|&e| out_of[x].iter().all(|&f| at(e, f) == f))
                .ok_or_else(|| Error::InvalidGroupoid(format!("object {x} has no identity")))?;
            identity.push(e);
        }
        let mut inverse = Vec::with_capacity(arrows.len());
        for f in 0..arrows.len() {
            let back = homs.get(&(tgt[f], src[f])).map(Vec::as_slice).unwrap_or(&[]);
            let g = back
                .iter()
                .copied()
                .find(|&g| at(f, g) == identity[src[f]] && at(g, f) == identity[tgt[f]])
                .ok_or_else(|| Error::InvalidGroupoid(format!("arrow {f} has no inverse")))?;
            inverse.push(g);
        }
        Ok(Self { labels, src, tgt, identity, inverse, homs, out_of, out_pos, comp_start, comp })
    }

    /// Builds from arrows carrying data `M`, composed by `compose(f, g) = g ∘ f`.
    /// Arrows are identified by `(source, target, data)`.
    pub fn from_elements<M: Clone + Eq + Hash>(
        labels: Vec<String>,
        arrows: Vec<(usize, usize, M)>,
        compose: impl Fn(&M, &M) -> M,
    ) -> Result<Self> {
        let index: HashMap<(usize, usize, M), usize> =
            arrows.iter().enumerate().map(|(k, (s, t, m))| ((*s, *t, m.clone()), k)).collect();
        if index.len() != arrows.len() {
            return Err(Error::InvalidGroupoid("duplicate arrows".into()));
        }
        let plain = arrows.iter().map(|(s, t, _)| (*s, *t)).collect();
        Self::from_table(labels, plain, |f, g| {
            let (s, _, mf) = &arrows[f];
            let (_, t, mg) = &arrows[g];
            index.get(&(*s, *t, compose(mf, mg))).copied()
        })
    }

    pub fn discrete(labels: Vec<String>) -> Self {
        let arrows = (0..labels.len()).map(|x| (x, x, ())).collect();
        Self::from_elements(labels, arrows, |_, _| ()).expect("discrete groupoid")
    }

    /// The `n`-element subsets of `{0..=n}` with all bijections between them.
    /// Not skeletal: `n + 1` isomorphic objects.
    pub fn n_sets(n: usize) -> Self {
        let subsets: Vec<Vec<usize>> = (0..=n).map(|skip| (0..=n).filter(|&v| v != skip).collect()).collect();
        let labels = subsets
            .iter()
            .map(|s| format!("{{{}}}", s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        let mut arrows = Vec::new();
        for s in 0..=n {
            for t in 0..=n {
                crate::bialgebra::for_each_permutation(n, |p| arrows.push((s, t, p.to_vec())));
            }
        }
        // A bijection sends the i-th element of the source to the p[i]-th of the target.
        Self::from_elements(labels, arrows, |p: &Vec<usize>, q: &Vec<usize>| p.iter().map(|&i| q[i]).collect())
            .expect("groupoid of n-sets")
    }

    /// One object whose automorphism group is cyclic of order `order`.
    pub fn cyclic(order: usize) -> Self {
        assert!(order > 0);
        let arrows = (0..order).map(|k| (0, 0, k)).collect();
        Self::from_elements(vec!["*".into()], arrows, |a, b| (a + b) % order).expect("cyclic group")
    }

    /// Exhaustive scan of the groupoid axioms.
    pub fn validate(&self) -> Result<()> {
        for (f, g, gf) in self.composable() {
            for &h in &self.out_of[self.tgt[g]] {
                let left = self.then(gf, h);
                let right = self.then(f, self.then(g, h));
                if left != right {
                    return Err(Error::InvalidGroupoid(format!("composition of ({f}, {g}, {h}) is not associative")));
                }
            }
        }
        for f in 0..self.arrow_count() {
            if self.then(self.identity[self.src[f]], f) != f || self.then(f, self.identity[self.tgt[f]]) != f {
                return Err(Error::InvalidGroupoid(format!("identities do not fix arrow {f}")));
            }
        }
        Ok(())
    }

    /// Every composable pair `(f, g)` with `g ∘ f`.
    fn composable(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.arrow_count()).flat_map(move |f| self.out_of[self.tgt[f]].iter().map(move |&g| (f, g, self.then(f, g))))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn arrow_count(&self) -> usize {
        self.src.len()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn object_by_label(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownObject(label.to_string()))
    }

    pub fn source(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn target(&self, f: usize) -> usize {
        self.tgt[f]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    pub fn inverse(&self, f: usize) -> usize {
        self.inverse[f]
    }

    /// `g ∘ f`.
    pub fn compose(&self, f: usize, g: usize) -> Result<usize> {
        if f >= self.arrow_count() || g >= self.arrow_count() || self.tgt[f] != self.src[g] {
            return Err(Error::NotComposable(format!("target of {f} is not the source of {g}")));
        }
        Ok(self.then(f, g))
    }

    pub(crate) fn then(&self, f: usize, g: usize) -> usize {
        debug_assert_eq!(self.tgt[f], self.src[g]);
        self.comp[self.comp_start[f] + self.out_pos[g]]
    }

    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        self.homs.get(&(x, y)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn aut(&self, x: usize) -> &[usize] {
        self.hom(x, x)
    }

    /// Least object isomorphic to each object.
    fn least_isomorphic(&self) -> Vec<usize> {
        let mut least: Vec<usize> = (0..self.len()).collect();
        for (&s, &t) in self.src.iter().zip(&self.tgt) {
            least[t] = least[t].min(s);
        }
        least
    }

    /// Connected component index of every object, numbered by least member.
    pub fn components(&self) -> Vec<usize> {
        let least = self.least_isomorphic();
        let mut number = vec![usize::MAX; self.len()];
        let mut next = 0;
        least
            .iter()
            .map(|&r| {
                if number[r] == usize::MAX {
                    number[r] = next;
                    next += 1;
                }
                number[r]
            })
            .collect()
    }

    /// The least object of each component.
    pub fn representatives(&self) -> Vec<usize> {
        self.least_isomorphic().into_iter().enumerate().filter(|&(x, r)| x == r).map(|(x, _)| x).collect()
    }

    pub fn is_isomorphic(&self, x: usize, y: usize) -> bool {
        !self.hom(x, y).is_empty()
    }

    /// Every component is a single object with trivial automorphisms.
    pub fn is_discrete(&self) -> bool {
        self.arrow_count() == self.len() && self.is_locally_discrete()
    }

    /// Every automorphism group is trivial.
    pub fn is_locally_discrete(&self) -> bool {
        (0..self.len()).all(|x| self.aut(x).len() == 1)
    }

    pub fn product(a: &FiniteGroupoid, b: &FiniteGroupoid) -> FiniteGroupoid {
        let nb = b.len();
        let labels = (0..a.len() * nb).map(|k| format!("({}, {})", a.labels[k / nb], b.labels[k % nb])).collect();
        let mut arrows = Vec::with_capacity(a.arrow_count() * b.arrow_count());
        for f in 0..a.arrow_count() {
            for g in 0..b.arrow_count() {
                arrows.push((a.src[f] * nb + b.src[g], a.tgt[f] * nb + b.tgt[g], (f, g)));
            }
        }
        FiniteGroupoid::from_elements(labels, arrows, |&(f1, g1), &(f2, g2)| (a.then(f1, f2), b.then(g1, g2)))
            .expect("product of groupoids")
    }
}

/// A functor between finite groupoids, given on objects and arrows.
#[derive(Clone, Debug)]
pub struct GroupoidMap {
    pub source: Arc<FiniteGroupoid>,
    pub target: Arc<FiniteGroupoid>,
    objects: Vec<usize>,
    arrows: Vec<usize>,
}

impl GroupoidMap {
    /// Checks that endpoints are respected; functoriality is checked by
    /// [`Self::validate`].
    pub fn new(source: Arc<FiniteGroupoid>, target: Arc<FiniteGroupoid>, objects: Vec<usize>, arrows: Vec<usize>) -> Result<Self> {
        if objects.len() != source.len() || arrows.len() != source.arrow_count() {
            return Err(Error::InvalidMap("assignment sizes do not match the source".into()));
        }
        if let Some(&y) = objects.iter().find(|&&y| y >= target.len()) {
            return Err(Error::InvalidMap(format!("object {y} is not in the target")));
        }
        for (f, &g) in arrows.iter().enumerate() {
            if g >= target.arrow_count()
                || target.source(g) != objects[source.source(f)]
                || target.target(g) != objects[source.target(f)]
            {
                return Err(Error::InvalidMap(format!("arrow {f} is sent to an arrow with the wrong endpoints")));
            }
        }
        Ok(Self { source, target, objects, arrows })
    }

    pub fn identity(g: Arc<FiniteGroupoid>) -> Self {
        let objects = (0..g.len()).collect();
        let arrows = (0..g.arrow_count()).collect();
        Self { source: g.clone(), target: g, objects, arrows }
    }

    /// The unique map to the one-object trivial groupoid.
    pub fn to_point(g: Arc<FiniteGroupoid>) -> Self {
        let point = Arc::new(FiniteGroupoid::discrete(vec!["*".into()]));
        let objects = vec![0; g.len()];
        let arrows = vec![0; g.arrow_count()];
        Self { source: g, target: point, objects, arrows }
    }

    pub fn validate(&self) -> Result<()> {
        for x in 0..self.source.len() {
            if self.arrows[self.source.identity(x)] != self.target.identity(self.objects[x]) {
                return Err(Error::InvalidMap(format!("identity of object {x} is not preserved")));
            }
        }
        for (f, g, gf) in self.source.composable() {
            if self.arrows[gf] != self.target.then(self.arrows[f], self.arrows[g]) {
                return Err(Error::InvalidMap(format!("composite of ({f}, {g}) is not preserved")));
            }
        }
        Ok(())
    }

    pub fn object(&self, x: usize) -> usize {
        self.objects[x]
    }

    pub fn arrow(&self, f: usize) -> usize {
        self.arrows[f]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupoidMap) -> Result<GroupoidMap> {
        if !Arc::ptr_eq(&self.target, &next.source) {
            return Err(Error::NotComposable("target of the first map is not the source of the second".into()));
        }
        Ok(GroupoidMap {
            source: self.source.clone(),
            target: next.target.clone(),
            objects: self.objects.iter().map(|&y| next.objects[y]).collect(),
            arrows: self.arrows.iter().map(|&g| next.arrows[g]).collect(),
        })
    }

    /// `(f, g): X → A × B` into the given product.
    pub fn pair(f: &GroupoidMap, g: &GroupoidMap, product: Arc<FiniteGroupoid>) -> Result<GroupoidMap> {
        if !Arc::ptr_eq(&f.source, &g.source) {
            return Err(Error::InvalidMap("paired maps must share a source".into()));
        }
        let nb = g.target.len();
        let mb = g.target.arrow_count();
        if product.len() != f.target.len() * nb || product.arrow_count() != f.target.arrow_count() * mb {
            return Err(Error::InvalidMap("product groupoid does not match the targets".into()));
        }
        let objects = (0..f.source.len()).map(|x| f.objects[x] * nb + g.objects[x]).collect();
        let arrows = (0..f.source.arrow_count()).map(|u| f.arrows[u] * mb + g.arrows[u]).collect();
        GroupoidMap::new(f.source.clone(), product, objects, arrows)
    }
}
