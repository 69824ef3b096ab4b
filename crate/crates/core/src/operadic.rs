//! The operadic category of a simple hereditary species.
//!
//! Objects are structures `x ∈ H[n]` with `n ≥ 1`; an arrow `(m, y) → (n, x)`
//! is a surjection `s: m ↠ n` with `H[s](y) = x` on the nose. Fibres restrict
//! along the monotone enumeration of each preimage.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::structure_json;
use crate::maps::{Injection, Surjection};
use crate::report::{Report, Tally};
use crate::species::{species_by_name, HStructure, HereditarySpecies, SpeciesRef};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub source: HStructure,
    pub target: HStructure,
    pub map: Surjection,
}

/// How the elements of a fibre are numbered. `Reversed` is a deliberately
/// broken variant: fibres are listed backwards, so they are no longer
/// relabeled along the monotone inclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FibreRule {
    Monotone,
    Reversed,
}

pub struct OperadicCategory {
    species: SpeciesRef,
    n_max: usize,
    rule: FibreRule,
    objects: Vec<HStructure>,
    arrows: Vec<Arrow>,
    out_of: HashMap<HStructure, Vec<usize>>,
}

/// `ψ^φ_i` in finite sets: the map between the fibres of `φψ` and `φ` at
/// `i`, both numbered monotonically.
pub fn set_fibre_map(psi: &Surjection, phi: &Surjection, i: usize) -> Vec<usize> {
    let mi = phi.preimage(i);
    let composite: Vec<usize> = psi.values().iter().map(|&v| phi.apply(v)).collect();
    (0..composite.len())
        .filter(|&a| composite[a] == i)
        .map(|a| mi.iter().position(|&v| v == psi.apply(a)).expect("ψ maps the fibre into the fibre"))
        .collect()
}

impl OperadicCategory {
    pub fn build(h: SpeciesRef, n_max: usize) -> Result<Self> {
        if !h.is_simple() {
            return Err(Error::NotSimple(h.name().to_string()));
        }
        let objects: Vec<HStructure> = (1..=n_max).flat_map(|n| h.structures(n)).collect();
        let mut arrows = Vec::new();
        let mut out_of: HashMap<HStructure, Vec<usize>> = HashMap::new();
        for y in &objects {
            for n in 1..=y.n {
                for s in Surjection::enumerate(y.n, n) {
                    out_of.entry(y.clone()).or_default().push(arrows.len());
                    arrows.push(Arrow { source: y.clone(), target: h.quotient_along(y, &s), map: s });
                }
            }
        }
        Ok(Self { species: h, n_max, rule: FibreRule::Monotone, objects, arrows, out_of })
    }

    pub fn with_rule(mut self, rule: FibreRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn species(&self) -> &dyn HereditarySpecies {
        self.species.as_ref()
    }

    pub fn objects(&self) -> &[HStructure] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrows_from(&self, y: &HStructure) -> impl Iterator<Item = &Arrow> {
        self.out_of.get(y).into_iter().flatten().map(|&k| &self.arrows[k])
    }

    pub fn terminal(&self) -> HStructure {
        self.species.structures(1).remove(0)
    }

    pub fn cardinality(x: &HStructure) -> usize {
        x.n
    }

    /// The arrow with source `y` over `s`, if `H[s](y) = x`.
    pub fn arrow(&self, y: &HStructure, s: Surjection, x: &HStructure) -> Result<Arrow> {
        if s.source() != y.n || s.target() != x.n {
            return Err(Error::CarrierMismatch { expected: y.n, found: s.source() });
        }
        let image = self.species.quotient_along(y, &s);
        if image != *x {
            return Err(Error::Precondition(format!("{:?} does not carry the source onto the target", s.values())));
        }
        Ok(Arrow { source: y.clone(), target: x.clone(), map: s })
    }

    pub fn identity(&self, x: &HStructure) -> Arrow {
        Arrow { source: x.clone(), target: x.clone(), map: Surjection::identity(x.n) }
    }

    pub fn to_terminal(&self, y: &HStructure) -> Arrow {
        Arrow { source: y.clone(), target: self.terminal(), map: Surjection::to_point(y.n).expect("non-empty") }
    }

    /// `f` followed by `g`.
    pub fn then(&self, f: &Arrow, g: &Arrow) -> Result<Arrow> {
        if f.target != g.source {
            return Err(Error::NotComposable("target of the first arrow is not the source of the second".into()));
        }
        Ok(Arrow { source: f.source.clone(), target: g.target.clone(), map: f.map.then(&g.map)? })
    }

    fn enumerate_fibre(&self, phi: &Surjection, i: usize) -> Vec<usize> {
        let mut fib = phi.preimage(i);
        if self.rule == FibreRule::Reversed {
            fib.reverse();
        }
        fib
    }

    fn check_index(x: &HStructure, i: usize) -> Result<()> {
        if i >= x.n {
            return Err(Error::Precondition(format!("index {} outside cardinality {}", i + 1, x.n)));
        }
        Ok(())
    }

    /// `f^{-1}(i) = (|f|^{-1}(i), H[ε_i](y))`.
    pub fn fibre(&self, f: &Arrow, i: usize) -> Result<HStructure> {
        Self::check_index(&f.target, i)?;
        let fib = self.enumerate_fibre(&f.map, i);
        Ok(self.species.restrict_along(&f.source, &Injection::new(f.source.n, fib)?))
    }

    /// `g^f_i: (fg)^{-1}(i) → f^{-1}(i)`, for `g: Z → Y` and `f: Y → X`.
    pub fn fibre_map(&self, g: &Arrow, f: &Arrow, i: usize) -> Result<Arrow> {
        let fg = self.then(g, f)?;
        Self::check_index(&f.target, i)?;
        let (li, mi) = (self.enumerate_fibre(&fg.map, i), self.enumerate_fibre(&f.map, i));
        let values = li
            .iter()
            .map(|&a| mi.iter().position(|&v| v == g.map.apply(a)).expect("g maps the fibre into the fibre"))
            .collect();
        let gi = Surjection::new(mi.len(), values)?;
        let (zi, yi) = (self.fibre(&fg, i)?, self.fibre(f, i)?);
        self.arrow(&zi, gi, &yi)
    }

    /// Composable pairs `(g, f)` with `g: Z → Y`, `f: Y → X`.
    fn pairs(&self) -> impl Iterator<Item = (&Arrow, &Arrow)> {
        self.arrows.iter().flat_map(move |g| self.arrows_from(&g.target).map(move |f| (g, f)))
    }
}

fn arrow_json(h: &dyn HereditarySpecies, a: &Arrow) -> Value {
    json!({
        "source": structure_json(h, &a.source),
        "target": structure_json(h, &a.target),
        "map": a.map.values().iter().map(|v| v + 1).collect::<Vec<_>>(),
    })
}

fn outcome<T: PartialEq>(got: Result<T>, want: Result<T>) -> bool {
    matches!((got, want), (Ok(a), Ok(b)) if a == b)
}

/// A1–A5, functoriality of the fibre functors, and the unique-lift property,
/// over all objects with `n ≤ n_max` and all chains of up to `chain_len`
/// arrows (A5's second clause needs three).
pub fn check_axioms_of(cat: &OperadicCategory, chain_len: usize) -> Report {
    let h = cat.species();
    let mut report = Report::new(
        "operadic",
        json!({ "species": h.name(), "nmax": cat.n_max, "chain_len": chain_len, "fibres": format!("{:?}", cat.rule) }),
    );
    let terminal = cat.terminal();

    let mut a1 = Tally::new("operadic").square("A1");
    a1.record(OperadicCategory::cardinality(&terminal) == 1, || json!({ "terminal": structure_json(h, &terminal) }));
    for y in cat.objects() {
        let count = cat.arrows_from(y).filter(|a| a.target == terminal).count();
        a1.record(count == 1, || json!({ "object": structure_json(h, y), "arrows_to_terminal": count }));
    }
    report.push_tally(a1);
    report.note("every object maps to (1, 1), so the category is connected and (1, 1) is the only chosen terminal");

    let mut a2 = Tally::new("operadic").square("A2");
    for x in cat.objects() {
        for i in 0..x.n {
            let fib = cat.fibre(&cat.identity(x), i);
            a2.record(fib.as_ref() == Ok(&terminal), || json!({ "object": structure_json(h, x), "i": i + 1 }));
        }
    }
    report.push_tally(a2);

    let mut a3 = Tally::new("operadic").square("A3 objects");
    for f in cat.arrows() {
        for i in 0..f.target.n {
            let n = cat.fibre(f, i).map(|y| y.n);
            let want = f.map.preimage(i).len();
            a3.record(n == Ok(want), || json!({ "arrow": arrow_json(h, f), "i": i + 1, "fibre_size": want }));
        }
    }
    report.push_tally(a3);

    let mut a4 = Tally::new("operadic").square("A4");
    for y in cat.objects() {
        let fib = cat.fibre(&cat.to_terminal(y), 0);
        a4.record(fib.as_ref() == Ok(y), || json!({ "object": structure_json(h, y) }));
    }

    let mut a3_maps = Tally::new("operadic").square("A3 arrows");
    let mut a5 = Tally::new("operadic").square("A5 fibres of fibre maps");
    let mut functor = Tally::new("operadic").square("fibre functor identities");
    for (g, f) in cat.pairs() {
        for i in 0..f.target.n {
            let gi = cat.fibre_map(g, f, i);
            let want = set_fibre_map(&g.map, &f.map, i);
            let ok = matches!(&gi, Ok(a) if a.map.values() == want.as_slice());
            a3_maps.record(ok, || {
                json!({
                    "g": arrow_json(h, g),
                    "f": arrow_json(h, f),
                    "i": i + 1,
                    "fibre_map": gi.as_ref().map(|a| a.map.values().iter().map(|v| v + 1).collect::<Vec<_>>()).ok(),
                    "expected": want.iter().map(|v| v + 1).collect::<Vec<_>>(),
                })
            });
            let Ok(gi) = gi else { continue };
            let eps = f.map.preimage(i);
            for (j, &ej) in eps.iter().enumerate() {
                let ok = outcome(cat.fibre(&gi, j), cat.fibre(g, ej));
                a5.record(ok, || json!({ "g": arrow_json(h, g), "f": arrow_json(h, f), "i": i + 1, "j": j + 1 }));
            }
            if let Ok(fib) = cat.fibre(&cat.then(g, f).expect("composable"), i) {
                let id = cat.fibre_map(&cat.identity(&g.source), &cat.then(g, f).expect("composable"), i);
                functor.record(id.as_ref() == Ok(&cat.identity(&fib)), || json!({ "g": arrow_json(h, g), "f": arrow_json(h, f), "i": i + 1 }));
            }
        }
        if f.target == terminal && f.source.n >= 1 && *f == cat.to_terminal(&f.source) {
            let back = cat.fibre_map(g, f, 0);
            a4.record(back.as_ref() == Ok(g), || json!({ "g": arrow_json(h, g) }));
        }
    }
    report.push_tally(a3_maps);
    report.push_tally(a4);
    report.push_tally(a5);
    report.push_tally(functor);

    if chain_len >= 3 {
        let mut a5b = Tally::new("operadic").square("A5 fibre maps of fibre maps");
        let mut composition = Tally::new("operadic").square("fibre functor composition");
        for (g, f) in cat.pairs() {
            let fg = cat.then(g, f).expect("composable");
            for hh in cat.arrows().iter().filter(|a| a.target == g.source) {
                for i in 0..f.target.n {
                    let (Ok(gi), Ok(hi)) = (cat.fibre_map(g, f, i), cat.fibre_map(hh, &fg, i)) else {
                        a5b.record(false, || json!({ "reason": "fibre map undefined", "i": i + 1 }));
                        continue;
                    };
                    for (j, &ej) in f.map.preimage(i).iter().enumerate() {
                        let ok = outcome(cat.fibre_map(&hi, &gi, j), cat.fibre_map(hh, g, ej));
                        a5b.record(ok, || {
                            json!({ "h": arrow_json(h, hh), "g": arrow_json(h, g), "f": arrow_json(h, f), "i": i + 1, "j": j + 1 })
                        });
                    }
                    let hg = cat.then(hh, g).expect("composable");
                    let lhs = cat.fibre_map(&hg, f, i);
                    let rhs = cat.then(&hi, &gi);
                    composition.record(outcome(lhs, rhs), || json!({ "h": arrow_json(h, hh), "g": arrow_json(h, g), "f": arrow_json(h, f), "i": i + 1 }));
                }
            }
        }
        report.push_tally(a5b);
        report.push_tally(composition);
    } else {
        report.note("chains shorter than three arrows: the second clause of A5 was not checked");
    }

    let mut lifts = Tally::new("operadic").square("unique lifts");
    for y in cat.objects() {
        for n in 1..=y.n {
            for s in Surjection::enumerate(y.n, n) {
                let count = h.structures(n).iter().filter(|x| cat.arrow(y, s.clone(), x).is_ok()).count();
                lifts.record(count == 1, || json!({ "object": structure_json(h, y), "map": s.values(), "lifts": count }));
            }
        }
    }
    report.push_tally(lifts);
    report
}

pub fn check_axioms(h: SpeciesRef, n_max: usize, chain_len: usize) -> Result<Report> {
    Ok(check_axioms_of(&OperadicCategory::build(h, n_max)?, chain_len))
}

type StructureMap = Box<dyn Fn(&HStructure) -> HStructure + Send + Sync>;

/// A levelwise map of species `H′[n] → H[n]`.
pub struct Transformation {
    pub name: String,
    pub source: SpeciesRef,
    pub target: SpeciesRef,
    map: StructureMap,
}

impl Transformation {
    pub fn new(name: impl Into<String>, source: SpeciesRef, target: SpeciesRef, map: StructureMap) -> Self {
        Self { name: name.into(), source, target, map }
    }

    pub fn apply(&self, x: &HStructure) -> HStructure {
        (self.map)(x)
    }

    pub fn identity(h: SpeciesRef) -> Self {
        Self::new("identity", h.clone(), h, Box::new(|x| x.clone()))
    }

    /// Forget all structure: graphs to sets.
    pub fn collapse() -> Self {
        let g = species_by_name("graphs").expect("registered");
        let s = species_by_name("sets").expect("registered");
        Self::new("graphs-to-sets", g, s, Box::new(|x| HStructure::bare(x.n)))
    }

    /// Complement of the edge set; commutes with restriction but not with
    /// contraction.
    pub fn edge_complement() -> Self {
        let g = species_by_name("graphs").expect("registered");
        Self::new(
            "edge-complement",
            g.clone(),
            g,
            Box::new(|x| {
                let edges = (0..x.n)
                    .flat_map(|a| (a + 1..x.n).map(move |b| (a, b)))
                    .filter(|e| x.payload.binary_search(e).is_err())
                    .collect();
                HStructure::new(x.n, edges)
            }),
        )
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "identity" => Ok(Self::identity(species_by_name("graphs")?)),
            "graphs-to-sets" => Ok(Self::collapse()),
            "edge-complement" => Ok(Self::edge_complement()),
            other => Err(Error::Precondition(format!("unknown transformation `{other}`"))),
        }
    }
}

/// Naturality against every injection and every surjection between
/// ordinals of size at most `n_max`.
pub fn check_naturality(t: &Transformation, n_max: usize) -> Report {
    let (hs, ht) = (t.source.as_ref(), t.target.as_ref());
    let mut report = Report::new("naturality", json!({ "transformation": t.name, "nmax": n_max }));
    let mut inj = Tally::new("naturality").square("injections");
    let mut sur = Tally::new("naturality").square("surjections");
    for n in 0..=n_max {
        for x in hs.structures(n) {
            let fx = t.apply(&x);
            for u in 0..=n {
                for values in injections(u, n) {
                    let i = Injection::new(n, values).expect("injective");
                    let ok = t.apply(&hs.restrict_along(&x, &i)) == ht.restrict_along(&fx, &i);
                    inj.record(ok, || json!({ "structure": structure_json(hs, &x), "injection": i.values() }));
                }
                for s in Surjection::enumerate(n, u) {
                    let lhs = t.apply(&hs.quotient_along(&x, &s));
                    let rhs = ht.quotient_along(&fx, &s);
                    sur.record(lhs == rhs, || {
                        json!({
                            "structure": structure_json(hs, &x),
                            "surjection": s.values().iter().map(|v| v + 1).collect::<Vec<_>>(),
                            "transform_then_quotient": structure_json(ht, &rhs),
                            "quotient_then_transform": structure_json(ht, &lhs),
                        })
                    });
                }
            }
        }
    }
    report.push_tally(inj);
    report.push_tally(sur);
    report
}

/// Injective sequences of length `u` in `0..n`.
fn injections(u: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..u {
        let mut next = Vec::new();
        for v in &out {
            for c in (0..n).filter(|c| !v.contains(c)) {
                let mut w = v.clone();
                w.push(c);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Naturality first; then the induced functor must preserve the chosen
/// terminal, cardinality, fibres and fibre maps. A non-natural
/// transformation is rejected with the naturality report.
pub fn check_operadic_functor(t: &Transformation, n_max: usize) -> Result<Report> {
    let natural = check_naturality(t, n_max);
    if !natural.passed() {
        return Ok(natural);
    }
    let src = OperadicCategory::build(t.source.clone(), n_max)?;
    let tgt = OperadicCategory::build(t.target.clone(), n_max)?;
    let h = src.species();
    let mut report = Report::new("operadic-functor", json!({ "transformation": t.name, "nmax": n_max }));
    report.merge(natural);
    let on_arrow = |a: &Arrow| Arrow { source: t.apply(&a.source), target: t.apply(&a.target), map: a.map.clone() };
    let mut basic = Tally::new("operadic-functor").square("terminal, cardinality, arrows");
    basic.record(t.apply(&src.terminal()) == tgt.terminal(), || json!({ "reason": "terminal not preserved" }));
    for a in src.arrows() {
        let fa = on_arrow(a);
        let ok = OperadicCategory::cardinality(&fa.source) == OperadicCategory::cardinality(&a.source)
            && tgt.arrow(&fa.source, fa.map.clone(), &fa.target).is_ok();
        basic.record(ok, || json!({ "arrow": arrow_json(h, a) }));
    }
    report.push_tally(basic);
    let mut fibres = Tally::new("operadic-functor").square("fibres");
    let mut maps = Tally::new("operadic-functor").square("fibre maps");
    for (g, f) in src.pairs() {
        for i in 0..f.target.n {
            let ok = outcome(src.fibre(f, i).map(|y| t.apply(&y)), tgt.fibre(&on_arrow(f), i));
            fibres.record(ok, || json!({ "arrow": arrow_json(h, f), "i": i + 1 }));
            let ok = outcome(src.fibre_map(g, f, i).map(|a| on_arrow(&a)), tgt.fibre_map(&on_arrow(g), &on_arrow(f), i));
            maps.record(ok, || json!({ "g": arrow_json(h, g), "f": arrow_json(h, f), "i": i + 1 }));
        }
    }
    report.push_tally(fibres);
    report.push_tally(maps);
    Ok(report)
}
