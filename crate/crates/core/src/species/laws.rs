//! Exhaustive checks of the hereditary-species axioms on small carriers.

use serde_json::json;

use crate::bialgebra::{canonical_form, IsoClass};
use crate::io::structure_json;
use crate::maps::{Injection, PartialSurjection, Surjection};
use crate::partitions::{enumerate_partitions, induced_partition, refines, Partition};
use crate::report::{Report, Tally};

use super::{act, quotient, restrict_blocks, HStructure, HereditarySpecies};

fn span_json(a: &PartialSurjection) -> serde_json::Value {
    json!({
        "source": a.source(),
        "subset": a.leg_in().values().iter().map(|v| v + 1).collect::<Vec<_>>(),
        "map": a.leg_out().values().iter().map(|v| v + 1).collect::<Vec<_>>(),
    })
}

/// Identity and composition laws for the action of partial surjections,
/// on all composable pairs `V ⇀ W ⇀ X` with `|V|, |W|, |X| <= n_max`.
pub fn check_functoriality(h: &dyn HereditarySpecies, n_max: usize) -> Report {
    let mut report = Report::new("functoriality", json!({ "species": h.name(), "nmax": n_max }));
    let mut identity = Tally::new("identity span acts trivially");
    let mut composition = Tally::new("act(b∘a) = act(b)∘act(a)");
    let mut valid = Tally::new("results satisfy carrier invariants");
    for v in 0..=n_max {
        let structures = h.structures(v);
        for x in &structures {
            let y = act(h, &PartialSurjection::identity(v), x).expect("carrier");
            identity.record(&y == x, || json!({ "structure": structure_json(h, x) }));
        }
        for w in 0..=n_max {
            let firsts = PartialSurjection::enumerate(v, w);
            for a in &firsts {
                let images: Vec<HStructure> = structures.iter().map(|x| act(h, a, x).expect("carrier")).collect();
                for y in &images {
                    valid.record(y.n == w && h.validate(y).is_ok(), || json!({ "span": span_json(a) }));
                }
                for t in 0..=n_max {
                    for b in PartialSurjection::enumerate(w, t) {
                        let ba = a.then(&b).expect("composable");
                        for (x, ax) in structures.iter().zip(&images) {
                            let lhs = act(h, &ba, x).expect("carrier");
                            let rhs = act(h, &b, ax).expect("carrier");
                            composition.record(lhs == rhs, || {
                                json!({
                                    "structure": structure_json(h, x),
                                    "first": span_json(a),
                                    "second": span_json(&b),
                                    "composite": structure_json(h, &lhs),
                                    "stepwise": structure_json(h, &rhs),
                                })
                            });
                        }
                    }
                }
            }
        }
    }
    report.push_tally(identity);
    report.push_tally(composition);
    report.push_tally(valid);
    report
}

/// For every surjection `p: U ↠ V` with `|U| <= n_max`, every subset
/// `j: V' ↣ V` with pullback `i: U' ↣ U`, `p': U' ↠ V'`, and every
/// structure on `U`: `H[p'] H[i] = H[j] H[p]`.
pub fn check_beck_chevalley(h: &dyn HereditarySpecies, n_max: usize) -> Report {
    let mut report = Report::new("beck-chevalley", json!({ "species": h.name(), "nmax": n_max }));
    let mut tally = Tally::new("H[p']∘H[i] = H[j]∘H[p]");
    for u in 0..=n_max {
        let structures = h.structures(u);
        for v in 0..=u {
            for p in Surjection::enumerate(u, v) {
                for mask in 0u32..(1 << v) {
                    let sub: Vec<usize> = (0..v).filter(|b| mask & (1 << b) != 0).collect();
                    let j = Injection::new(v, sub).expect("subset");
                    let jpos = j.positions();
                    let upper: Vec<usize> = (0..u).filter(|&x| jpos[p.apply(x)].is_some()).collect();
                    let i = Injection::new(u, upper.clone()).expect("subset");
                    let p_prime = Surjection::new(j.source(), upper.iter().map(|&x| jpos[p.apply(x)].unwrap()).collect())
                        .expect("pullback of a surjection is a surjection");
                    for x in &structures {
                        let lhs = h.quotient_along(&h.restrict_along(x, &i), &p_prime);
                        let rhs = h.restrict_along(&h.quotient_along(x, &p), &j);
                        tally.record(lhs == rhs, || {
                            json!({
                                "structure": structure_json(h, x),
                                "p": p.values().iter().map(|v| v + 1).collect::<Vec<_>>(),
                                "j": j.values().iter().map(|v| v + 1).collect::<Vec<_>>(),
                                "restrict_then_quotient": structure_json(h, &lhs),
                                "quotient_then_restrict": structure_json(h, &rhs),
                            })
                        });
                    }
                }
            }
        }
    }
    report.push_tally(tally);
    report
}

fn classes(h: &dyn HereditarySpecies, xs: &[HStructure]) -> Vec<IsoClass> {
    let mut out: Vec<IsoClass> = xs.iter().map(|x| canonical_form(h, x)).collect();
    out.sort();
    out
}

/// `(G|σ)|τ`: restrict to the blocks of `σ`, then each block to `τ`.
fn restrict_twice(h: &dyn HereditarySpecies, g: &HStructure, sigma: &Partition, tau: &Partition) -> Vec<HStructure> {
    let mut out = Vec::new();
    for (block, gb) in sigma.blocks().iter().zip(restrict_blocks(h, g, sigma).expect("carrier")) {
        let tau_b = tau.restrict_to(block).expect("block");
        out.extend(restrict_blocks(h, &gb, &tau_b).expect("carrier"));
    }
    out
}

/// The three identities relating restriction and quotient along a pair of
/// partitions `τ <= σ`, compared on isomorphism classes.
pub fn check_schmitt_identities(h: &dyn HereditarySpecies, n_max: usize) -> Report {
    let mut report = Report::new("schmitt-identities", json!({ "species": h.name(), "nmax": n_max }));
    let mut first = Tally::new("[(G|σ)|τ] = [G|τ]");
    let mut second = Tally::new("[(G/τ)|(σ/τ)] = [(G|σ)/τ]");
    let mut third = Tally::new("[(G/τ)/(σ/τ)] = [G/σ]");
    for n in 0..=n_max {
        let parts = enumerate_partitions(n);
        for g in h.structures(n) {
            for sigma in &parts {
                let g_sigma = restrict_blocks(h, &g, sigma).expect("carrier");
                let g_mod_sigma = quotient(h, &g, sigma).expect("carrier");
                for tau in parts.iter().filter(|t| refines(t, sigma).unwrap()) {
                    let sigma_tau = induced_partition(sigma, tau).expect("refinement");
                    let g_mod_tau = quotient(h, &g, tau).expect("carrier");
                    let witness = || {
                        json!({
                            "structure": structure_json(h, &g),
                            "sigma": crate::io::partition_json(sigma),
                            "tau": crate::io::partition_json(tau),
                        })
                    };

                    let lhs = classes(h, &restrict_twice(h, &g, sigma, tau));
                    let rhs = classes(h, &restrict_blocks(h, &g, tau).expect("carrier"));
                    first.record(lhs == rhs, witness);

                    let lhs = classes(h, &restrict_blocks(h, &g_mod_tau, &sigma_tau).expect("carrier"));
                    let rhs_structures: Vec<HStructure> = sigma
                        .blocks()
                        .iter()
                        .zip(&g_sigma)
                        .map(|(block, gb)| quotient(h, gb, &tau.restrict_to(block).expect("block")).expect("carrier"))
                        .collect();
                    let rhs = classes(h, &rhs_structures);
                    second.record(lhs == rhs, witness);

                    let lhs = canonical_form(h, &quotient(h, &g_mod_tau, &sigma_tau).expect("carrier"));
                    let rhs = canonical_form(h, &g_mod_sigma);
                    third.record(lhs == rhs, witness);
                }
            }
        }
    }
    report.push_tally(first);
    report.push_tally(second);
    report.push_tally(third);
    report
}
