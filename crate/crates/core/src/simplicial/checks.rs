//! Exhaustive checks of the square conditions on truncated spaces.
//!
//! Every square is oriented so that its top map preserves weight. The
//! fibrewise comparison then only meets objects inside the truncation.

use serde_json::{json, Value};

use super::ops::RawOp;
use super::simplex::{canonical_simplex, Relabeling, Simplex};
use super::space::{square, Induced, Space};
use crate::error::Result;
use crate::groupoid::{
    homotopy_cardinality, homotopy_fibre, homotopy_pullback, is_fully_faithful, is_pullback_square_fibrewise, GroupoidMap, SquareWithWitness,
};
use crate::io::simplex_text;
use crate::rational::format_q;
use crate::report::{Report, Tally};

fn bound(x: &Space) -> Value {
    json!({ "space": x.name(), "k": x.k, "top": x.top })
}

fn face(x: &Space, n: usize, i: usize) -> Result<Induced> {
    Induced::new(x, n, x, n - 1, x.face(n, i))
}

fn degeneracy(x: &Space, n: usize, i: usize) -> Result<Induced> {
    Induced::new(x, n, x, n + 1, x.degeneracy(n, i))
}

/// Records whether a square commutes and is a pullback.
fn record_pullback(tally: &mut Tally, sq: std::result::Result<SquareWithWitness, Value>) -> Result<()> {
    match sq {
        Err(w) => tally.record(false, || json!({ "reason": "square does not commute", "detail": w })),
        Ok(sq) => {
            let v = is_pullback_square_fibrewise(&sq)?;
            tally.record(v.holds, || v.certificate.clone().unwrap_or(Value::Null));
        }
    }
    Ok(())
}

/// `d_⊤ d_⊤ a` versus `d_⊤ d_{⊤-1} a` on families: the two composites list
/// the same fibres in different orders. Member `(m, p)` of the second goes
/// to the position of `p` among the elements of `V_{L-2}` ordered by image.
pub fn top_faces_comparison(a: &Simplex) -> Relabeling {
    let mut perm = Vec::new();
    let mut offset = 0;
    for m in &a.members {
        let l = m.sets.len();
        assert!(l >= 2, "comparison needs two sets per member");
        let f = &m.maps[l - 2];
        let mut order: Vec<usize> = (0..f.len()).collect();
        order.sort_by_key(|&p| (f[p], p));
        let mut rank = vec![0; f.len()];
        for (r, &p) in order.iter().enumerate() {
            rank[p] = r;
        }
        perm.extend(rank.iter().map(|&r| offset + r));
        offset += f.len();
    }
    let bare = RawOp::Forget.apply(None, a);
    let last = a.members.first().map_or(1, |m| m.sets.len() - 1);
    let y = RawOp::TopFibres.apply(None, &RawOp::RemoveSet(last).apply(None, &bare));
    Relabeling { perm, members: y.members.iter().map(|m| m.identity_betas()).collect() }
}

/// The four square families, for `0 ≤ k ≤ n` inside the truncation:
/// `s_{k+1}` over `s_k` and `d_{k+2}` over `d_{k+1}` with `d_0` on the sides,
/// `s_k` over `s_k` and `d_{k+1}` over `d_{k+1}` with `d_⊤` on the sides.
/// Degeneracy squares reach level `n + 2`, face squares level `n + 3`.
pub fn check_decomposition(x: &Space) -> Result<Report> {
    let mut report = Report::new("decomposition", bound(x));
    for n in 0..x.top.saturating_sub(1) {
        let named = |name: &str| Tally::new("decomposition").level(n).square(name.to_string());
        let (mut bottom, mut top) = (named("s_{k+1} / s_k, sides d_0"), named("s_k / s_k, sides d_top"));
        for k in 0..=n {
            let sq = square(&degeneracy(x, n + 1, k + 1)?, &face(x, n + 1, 0)?, &face(x, n + 2, 0)?, &degeneracy(x, n, k)?, None);
            record_pullback(&mut bottom, sq)?;
            let sq = square(&degeneracy(x, n + 1, k)?, &face(x, n + 1, n + 1)?, &face(x, n + 2, n + 2)?, &degeneracy(x, n, k)?, None);
            record_pullback(&mut top, sq)?;
        }
        report.push_tally(bottom);
        report.push_tally(top);
        if n + 3 > x.top {
            continue;
        }
        let (mut bottom, mut top) = (named("d_{k+2} / d_{k+1}, sides d_0"), named("d_{k+1} / d_{k+1}, sides d_top"));
        for k in 0..=n {
            let sq = square(&face(x, n + 3, k + 2)?, &face(x, n + 3, 0)?, &face(x, n + 2, 0)?, &face(x, n + 2, k + 1)?, None);
            record_pullback(&mut bottom, sq)?;
            let sq = square(&face(x, n + 3, k + 1)?, &face(x, n + 3, n + 3)?, &face(x, n + 2, n + 2)?, &face(x, n + 2, k + 1)?, None);
            record_pullback(&mut top, sq)?;
        }
        report.push_tally(bottom);
        report.push_tally(top);
    }
    Ok(report)
}

/// Segal squares `d_{n+1}` over `d_n` with `d_0` on both sides, for
/// `1 ≤ n < top`.
pub fn check_segal(x: &Space) -> Result<Report> {
    let mut report = Report::new("segal", bound(x));
    for n in 1..x.top {
        let mut t = Tally::new("segal").level(n).square(format!("d_{} / d_{n}, sides d_0", n + 1));
        let sq = square(&face(x, n + 1, n + 1)?, &face(x, n + 1, 0)?, &face(x, n, 0)?, &face(x, n, n)?, None);
        match sq {
            Err(w) => t.record(false, || json!({ "reason": "square does not commute", "detail": w })),
            Ok(sq) => {
                let v = is_pullback_square_fibrewise(&sq)?;
                t.record(v.holds, || v.certificate.clone().unwrap_or(Value::Null));
            }
        }
        report.push_tally(t);
    }
    Ok(report)
}

/// The comparison `X_2 → X_1 ×_{X_0} X_1` through the base square.
struct SegalComparison {
    pullback: crate::groupoid::Pullback,
    /// Image of each object of `X_2`.
    objects: Vec<usize>,
    d0: Induced,
    d1: Induced,
}

fn segal_comparison(x: &Space) -> Result<SegalComparison> {
    let (d0, d1) = (face(x, 1, 0)?, face(x, 1, 1)?);
    let pullback = homotopy_pullback(&d0.map, &d1.map)?;
    let sq = square(&face(x, 2, 2)?, &face(x, 2, 0)?, &d0, &d1, None)
        .map_err(|w| crate::Error::Precondition(format!("base square does not commute: {w}")))?;
    let objects = (0..sq.top.source.len())
        .map(|c| pullback.object_of(sq.top.object(c), sq.left.object(c), sq.witness[c]).expect("iso-comma object"))
        .collect();
    Ok(SegalComparison { pullback, objects, d0, d1 })
}

/// For a decorated space over its base, compares the fibre of `X_2 → B_2`
/// over each `c` with the fibre of `P_X → P_B` over the image of `c`, where
/// `P` is the Segal pullback. The Segal condition for `X` forces these to
/// agree; the first disagreement is the witness.
pub fn check_segal_over_base(x: &Space, base: &Space, forget: RawOp) -> Result<Report> {
    let mut report = Report::new("segal-over-base", json!({ "space": x.name(), "base": base.name(), "k": x.k }));
    let px = segal_comparison(x)?;
    let pb = segal_comparison(base)?;
    let f0 = Induced::new(x, 0, base, 0, forget)?;
    let f1 = Induced::new(x, 1, base, 1, forget)?;
    let f2 = Induced::new(x, 2, base, 2, forget)?;
    let nat0 = square(&f1, &px.d0, &pb.d0, &f0, None).map_err(|w| crate::Error::Precondition(w.to_string()))?;
    let nat1 = square(&f1, &px.d1, &pb.d1, &f0, None).map_err(|w| crate::Error::Precondition(w.to_string()))?;
    let s0 = &base.level(0).groupoid;
    let (gx, gb) = (&px.pullback.groupoid, &pb.pullback.groupoid);
    let mut objects = Vec::with_capacity(gx.len());
    for &(a, b, alpha) in &px.pullback.points {
        let beta = s0.then(s0.then(nat0.witness[a], f0.map.arrow(alpha)), s0.inverse(nat1.witness[b]));
        objects.push(pb.pullback.object_of(f1.image(a), f1.image(b), beta).expect("image in the iso-comma"));
    }
    let sq = &px.pullback.square;
    let mut arrows = Vec::with_capacity(gx.arrow_count());
    for w in 0..gx.arrow_count() {
        let (u, v) = (sq.top.arrow(w), sq.left.arrow(w));
        let (p, q) = (objects[gx.source(w)], objects[gx.target(w)]);
        arrows.push(pb.pullback.arrow_of(p, q, f1.map.arrow(u), f1.map.arrow(v)).expect("image of an iso-comma arrow"));
    }
    let on_pullbacks = GroupoidMap::new(gx.clone(), gb.clone(), objects, arrows)?;
    let mut t = Tally::new("segal-over-base").level(2);
    let mut order = base.level(2).groupoid.representatives();
    order.sort_by_key(|&c| Space::weight(&base.level(2).objects[c]));
    for c in order {
        let upstairs = homotopy_cardinality(&homotopy_fibre(&f2.map, c)?.groupoid);
        let downstairs = homotopy_cardinality(&homotopy_fibre(&on_pullbacks, pb.objects[c])?.groupoid);
        t.record(upstairs == downstairs, || {
            json!({
                "simplex": simplex_text(&base.level(2).objects[c]),
                "fibre_of_level_two": format_q(&upstairs),
                "fibre_of_pullback": format_q(&downstairs),
            })
        });
    }
    report.push_tally(t);
    Ok(report)
}

/// Culf: the squares of `f` against inner faces and all degeneracies are
/// pullbacks.
pub fn check_culf(y: &Space, x: &Space, op: RawOp) -> Result<Report> {
    let mut report = Report::new("culf", json!({ "source": y.name(), "target": x.name(), "k": y.k, "top": y.top }));
    let f: Vec<Induced> = (0..=y.top).map(|n| Induced::new(y, n, x, n, op)).collect::<Result<_>>()?;
    for n in 1..=y.top {
        for i in 1..n {
            let mut t = Tally::new("culf").level(n).square(format!("d_{i}"));
            let sq = square(&f[n], &face(y, n, i)?, &face(x, n, i)?, &f[n - 1], None);
            record_pullback(&mut t, sq)?;
            report.push_tally(t);
        }
    }
    for n in 0..y.top {
        for i in 0..=n {
            let mut t = Tally::new("culf").level(n).square(format!("s_{i}"));
            let sq = square(&f[n], &degeneracy(y, n, i)?, &degeneracy(x, n, i)?, &f[n + 1], None);
            record_pullback(&mut t, sq)?;
            report.push_tally(t);
        }
    }
    Ok(report)
}

fn is_degenerate(x: &Space, n: usize, c: &Simplex) -> bool {
    (0..n).any(|i| {
        let inner = x.face(n, i + 1).apply(x.sp(), c);
        let back = x.degeneracy(n - 1, i).apply(x.sp(), &inner);
        canonical_simplex(x.sp(), &back).0 == *c
    })
}

/// `s_0` is fully faithful, its fibres and those of `d_1: X_2 → X_1` are
/// discrete, and a nondegenerate simplex at level `n` has weight at least
/// `n`, so each long edge bounds the length of its nondegenerate fillers.
pub fn check_finiteness(x: &Space) -> Result<Report> {
    let mut report = Report::new("finiteness", bound(x));
    let s0 = degeneracy(x, 0, 0)?;
    let mut t = Tally::new("finiteness").level(0).square("s_0 fully faithful");
    let v = is_fully_faithful(&s0.map);
    t.record(v.holds, || v.certificate.clone().unwrap_or(Value::Null));
    report.push_tally(t);
    let mut maps = vec![("s_0", s0)];
    if x.top >= 2 {
        maps.push(("d_1", face(x, 2, 1)?));
    }
    for (name, m) in &maps {
        let mut t = Tally::new("finiteness").level(1).square(format!("{name} fibres discrete"));
        for c in m.tgt.groupoid.representatives() {
            let fib = homotopy_fibre(&m.map, c)?;
            let ok = fib.groupoid.is_locally_discrete();
            t.record(ok, || json!({ "over": simplex_text(&m.tgt.objects[c]), "fibre_objects": fib.groupoid.len() }));
        }
        report.push_tally(t);
    }
    for n in 1..=x.top {
        let mut t = Tally::new("finiteness").level(n).square("length bound");
        for c in &x.level(n).objects {
            let ok = Space::weight(c) >= n || is_degenerate(x, n, c);
            t.record(ok, || json!({ "simplex": simplex_text(c), "weight": Space::weight(c) }));
        }
        report.push_tally(t);
    }
    Ok(report)
}

/// Raw simplicial identities on canonical objects. For families the pair
/// `d_{n-1} d_n` against `d_{n-1} d_{n-1}` is skipped; it holds only up to
/// the comparison checked by [`crate::simplicial::compare::check_pseudo_identity`].
pub fn check_simplicial_identities(x: &Space) -> Report {
    let mut report = Report::new("simplicial-identities", bound(x));
    let sp = x.sp();
    let d = |n: usize, i: usize, c: &Simplex| x.face(n, i).apply(sp, c);
    let s = |n: usize, i: usize, c: &Simplex| x.degeneracy(n, i).apply(sp, c);
    for n in 0..=x.top {
        let mut t = Tally::new("simplicial-identities").level(n);
        for c in &x.level(n).objects {
            let mut check = |lhs: Simplex, rhs: Simplex, what: String| {
                t.record(lhs == rhs, || json!({ "simplex": simplex_text(c), "identity": what }));
            };
            for j in 1..=n {
                for i in 0..j {
                    if n < 2 || (x.kind.is_family() && i == n - 1 && j == n) {
                        continue;
                    }
                    check(d(n - 1, i, &d(n, j, c)), d(n - 1, j - 1, &d(n, i, c)), format!("d_{i} d_{j}"));
                }
            }
            if n < x.top {
                for j in 0..=n {
                    for i in 0..=n + 1 {
                        let lhs = d(n + 1, i, &s(n, j, c));
                        let rhs = match i {
                            _ if i == j || i == j + 1 => c.clone(),
                            _ if i < j => s(n - 1, j - 1, &d(n, i, c)),
                            _ => s(n - 1, j, &d(n, i - 1, c)),
                        };
                        check(lhs, rhs, format!("d_{i} s_{j}"));
                    }
                }
            }
            if n + 2 <= x.top {
                for j in 0..=n {
                    for i in 0..=j {
                        check(s(n + 1, i, &s(n, j, c)), s(n + 1, j + 1, &s(n, i, c)), format!("s_{i} s_{j}"));
                    }
                }
            }
        }
        report.push_tally(t);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::is_pullback_square;
    use crate::simplicial::simplex::Member;
    use crate::simplicial::space::Kind;
    use crate::species::species_by_name;

    fn spaces(k: usize, top: usize) -> Vec<Space> {
        let g = species_by_name("graphs").unwrap();
        vec![
            Space::build(Kind::NSur, None, k, top).unwrap(),
            Space::build(Kind::S, None, k, top).unwrap(),
            Space::build(Kind::H, Some(g.clone()), k, top).unwrap(),
            Space::build(Kind::M, Some(g), k, top).unwrap(),
        ]
    }

    #[test]
    fn top_face_of_a_surjection_lists_its_fibres() {
        let x = Simplex { members: vec![Member { sets: vec![3, 2], maps: vec![vec![0, 0, 1]], deco: None }] };
        let y = RawOp::TopFibres.apply(None, &x);
        let sizes: Vec<usize> = y.members.iter().map(|m| m.sets[0]).collect();
        assert_eq!(sizes, vec![2, 1]);
    }

    #[test]
    fn identities_hold_on_the_nose() {
        for x in spaces(3, 3) {
            let r = check_simplicial_identities(&x);
            assert!(r.passed(), "{}: {:?}", x.name(), r.first_failure());
        }
    }

    #[test]
    fn all_spaces_decompose() {
        for x in spaces(2, 3) {
            let r = check_decomposition(&x).unwrap();
            assert!(r.passed(), "{}: {:?}", x.name(), r.first_failure());
            assert_eq!(r.entries.iter().map(|e| e.cases).sum::<usize>(), 8);
        }
    }

    #[test]
    fn segal_holds_for_families_and_fails_for_graphs() {
        let xs = spaces(3, 2);
        assert!(check_segal(&xs[1]).unwrap().passed());
        let r = check_segal(&xs[2]).unwrap();
        assert!(!r.passed());
        assert_eq!(r.first_failure().unwrap().level, Some(1));
        let sets = species_by_name("sets").unwrap();
        let trivial = Space::build(Kind::H, Some(sets), 3, 2).unwrap();
        assert!(check_segal(&trivial).unwrap().passed());
    }

    #[test]
    fn global_and_fibrewise_pullback_tests_agree() {
        for x in spaces(3, 2) {
            let f = |m: usize, i: usize| Induced::new(&x, m, &x, m - 1, x.face(m, i)).unwrap();
            let sq = square(&f(2, 2), &f(2, 0), &f(1, 0), &f(1, 1), None).unwrap();
            assert_eq!(is_pullback_square(&sq).unwrap().holds, is_pullback_square_fibrewise(&sq).unwrap().holds, "{}", x.name());
        }
    }

    #[test]
    fn graph_fibre_count_against_the_pullback() {
        let xs = spaces(3, 2);
        let r = check_segal_over_base(&xs[2], &xs[1], RawOp::Forget).unwrap();
        let w = r.first_failure().unwrap().witness.clone().unwrap();
        assert_eq!(w["simplex"], "{3↠2(1,1,2)}");
        // Two graphs on the block {1,2}, and each of the two cross pairs
        // {1,3}, {2,3} may or may not be an edge: 2 · 2 · 2 labelled
        // decorations. The pullback only sees the block graph and whether
        // the quotient has an edge: 2 · 2.
        let upstairs = 2 * 2 * 2;
        let downstairs = 2 * 2;
        assert_eq!(w["fibre_of_level_two"], upstairs.to_string());
        assert_eq!(w["fibre_of_pullback"], downstairs.to_string());
        let sets = species_by_name("sets").unwrap();
        let trivial = Space::build(Kind::H, Some(sets), 3, 2).unwrap();
        assert!(check_segal_over_base(&trivial, &xs[1], RawOp::Forget).unwrap().passed());
    }

    #[test]
    fn culf_maps() {
        let xs = spaces(3, 3);
        for (y, x, op) in [(2, 1, RawOp::Forget), (0, 1, RawOp::TopFibres), (3, 2, RawOp::TopFibres)] {
            let r = check_culf(&xs[y], &xs[x], op).unwrap();
            assert!(r.passed(), "{} -> {}: {:?}", xs[y].name(), xs[x].name(), r.first_failure());
        }
    }

    #[test]
    fn finiteness_and_the_fibre_over_a_two_set() {
        for x in spaces(3, 3) {
            let r = check_finiteness(&x).unwrap();
            assert!(r.passed(), "{}: {:?}", x.name(), r.first_failure());
        }
        let s = Space::build(Kind::S, None, 3, 2).unwrap();
        let d1 = face(&s, 2, 1).unwrap();
        let two = Simplex { members: vec![Member { sets: vec![2], maps: Vec::new(), deco: None }] };
        let fib = homotopy_fibre(&d1.map, s.level(1).object_of(&two).unwrap()).unwrap();
        // 2 ↠ 1 and 2 ↠ 2, each with trivial automorphisms.
        assert_eq!(fib.groupoid.representatives().len(), 2);
        assert!(fib.groupoid.is_locally_discrete());
        assert_eq!(homotopy_cardinality(&fib.groupoid), crate::rational::q_int(2));
    }

    #[test]
    fn degenerate_simplices_are_recognised() {
        let s = Space::build(Kind::S, None, 3, 2).unwrap();
        let iso = Simplex { members: vec![Member { sets: vec![2, 2], maps: vec![vec![0, 1]], deco: None }] };
        let proper = Simplex { members: vec![Member { sets: vec![3, 2], maps: vec![vec![0, 0, 1]], deco: None }] };
        let to_point = Simplex { members: vec![Member { sets: vec![2, 1], maps: vec![vec![0, 0]], deco: None }] };
        assert!(is_degenerate(&s, 2, &iso));
        assert!(!is_degenerate(&s, 2, &proper));
        assert!(is_degenerate(&s, 2, &to_point));
    }
}
