//! JSON and text encodings. Carrier elements are 1-based on the wire and
//! 0-based in memory.

use serde_json::{json, Value};

use crate::bialgebra::{Family, IsoClass};
use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::rational::{format_q, parse_q, LinComb, Q};
use crate::species::{HStructure, HereditarySpecies};

pub fn structure_json(h: &dyn HereditarySpecies, x: &HStructure) -> Value {
    let mut v = json!({ "species": h.name(), "n": x.n });
    if h.name() != "sets" {
        v["edges"] = json!(x.payload.iter().map(|&(a, b)| [a + 1, b + 1]).collect::<Vec<_>>());
    }
    v
}

pub fn partition_json(p: &Partition) -> Value {
    json!(p.blocks().iter().map(|b| b.iter().map(|v| v + 1).collect::<Vec<_>>()).collect::<Vec<_>>())
}

pub fn family_json(h: &dyn HereditarySpecies, f: &Family) -> Value {
    json!(f.members().iter().map(|m| structure_json(h, &m.rep)).collect::<Vec<_>>())
}

/// Reads `{"n": .., "edges": [[a, b], ..]}`; a `species` field, if present,
/// must name `h`.
pub fn parse_structure_json(h: &dyn HereditarySpecies, v: &Value) -> Result<HStructure> {
    let obj = v.as_object().ok_or_else(|| Error::Parse(format!("expected an object, found {v}")))?;
    if let Some(s) = obj.get("species") {
        if s.as_str() != Some(h.name()) {
            return Err(Error::Parse(format!("structure is for species {s}, expected {}", h.name())));
        }
    }
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing or non-integer field \"n\"".into()))? as usize;
    let mut payload = Vec::new();
    if let Some(edges) = obj.get("edges") {
        let edges = edges.as_array().ok_or_else(|| Error::Parse("\"edges\" must be an array".into()))?;
        for (k, e) in edges.iter().enumerate() {
            let pair = e
                .as_array()
                .filter(|p| p.len() == 2)
                .and_then(|p| Some((p[0].as_u64()? as usize, p[1].as_u64()? as usize)))
                .ok_or_else(|| Error::Parse(format!("edges[{k}] is not a pair of integers")))?;
            payload.push(one_based_pair(pair, n)?);
        }
    }
    let x = HStructure::new(n, payload);
    h.validate(&x)?;
    Ok(x)
}

fn one_based_pair((a, b): (usize, usize), n: usize) -> Result<(usize, usize)> {
    if a == 0 || b == 0 || a > n || b > n {
        return Err(Error::Parse(format!("edge {a}-{b} outside 1..={n}")));
    }
    Ok((a.min(b) - 1, a.max(b) - 1))
}

/// A factor of a tensor term, independent of which algebra it lives in.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Factor {
    Structure(HStructure),
    Family(Vec<HStructure>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coefficient: Q,
    pub factors: Vec<Factor>,
}

pub trait AsFactor {
    fn factor(&self) -> Factor;
}

impl AsFactor for HStructure {
    fn factor(&self) -> Factor {
        Factor::Structure(self.clone())
    }
}

impl AsFactor for IsoClass {
    fn factor(&self) -> Factor {
        Factor::Structure(self.rep.clone())
    }
}

impl AsFactor for Family {
    fn factor(&self) -> Factor {
        Factor::Family(self.members().iter().map(|m| m.rep.clone()).collect())
    }
}

pub trait AsFactors {
    fn factors(&self) -> Vec<Factor>;
}

macro_rules! single_factor {
    ($($t:ty),*) => {$(
        impl AsFactors for $t {
            fn factors(&self) -> Vec<Factor> {
                vec![self.factor()]
            }
        }
    )*};
}

single_factor!(HStructure, IsoClass, Family);

impl<A: AsFactor, B: AsFactor> AsFactors for (A, B) {
    fn factors(&self) -> Vec<Factor> {
        vec![self.0.factor(), self.1.factor()]
    }
}

impl<A: AsFactor, B: AsFactor, C: AsFactor> AsFactors for (A, B, C) {
    fn factors(&self) -> Vec<Factor> {
        vec![self.0.factor(), self.1.factor(), self.2.factor()]
    }
}

pub fn terms<B: Ord + Clone + AsFactors>(t: &LinComb<B>) -> Vec<Term> {
    t.iter().map(|(b, c)| Term { coefficient: c.clone(), factors: b.factors() }).collect()
}

pub fn structure_text(x: &HStructure) -> String {
    let edges: Vec<String> = x.payload.iter().map(|&(a, b)| format!("{}-{}", a + 1, b + 1)).collect();
    format!("{}[{}]", x.n, edges.join(","))
}

fn factor_text(f: &Factor) -> String {
    match f {
        Factor::Structure(x) => structure_text(x),
        Factor::Family(xs) => format!("({})", xs.iter().map(structure_text).collect::<Vec<_>>().join(" * ")),
    }
}

/// `COEF f1 ⊗ f2 + ...`, or `0` for the zero combination.
pub fn terms_text(ts: &[Term]) -> String {
    if ts.is_empty() {
        return "0".into();
    }
    ts.iter()
        .map(|t| {
            let fs: Vec<String> = t.factors.iter().map(factor_text).collect();
            format!("{} {}", format_q(&t.coefficient), fs.join(" ⊗ "))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn lincomb_text<B: Ord + Clone + AsFactors>(t: &LinComb<B>) -> String {
    terms_text(&terms(t))
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.s.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{tok}'")))
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn token(&mut self, allowed: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let len = rest.find(|c: char| !allowed(c)).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn number(&mut self) -> Result<usize> {
        self.token(|c| c.is_ascii_digit()).parse().map_err(|_| self.error("expected a number"))
    }

    fn structure(&mut self) -> Result<HStructure> {
        let n = self.number()?;
        self.expect("[")?;
        let mut payload = Vec::new();
        if !self.eat("]") {
            loop {
                let a = self.number()?;
                self.expect("-")?;
                let b = self.number()?;
                payload.push(one_based_pair((a, b), n)?);
                if self.eat("]") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(HStructure::new(n, payload))
    }

    fn factor(&mut self) -> Result<Factor> {
        if self.eat("(") {
            let mut xs = Vec::new();
            if !self.eat(")") {
                loop {
                    xs.push(self.structure()?);
                    if self.eat(")") {
                        break;
                    }
                    self.expect("*")?;
                }
            }
            Ok(Factor::Family(xs))
        } else {
            Ok(Factor::Structure(self.structure()?))
        }
    }
}

/// Inverse of [`terms_text`].
pub fn parse_terms_text(s: &str) -> Result<Vec<Term>> {
    let mut c = Cursor { s, pos: 0 };
    if s.trim() == "0" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    loop {
        let coef = c.token(|ch| ch.is_ascii_digit() || ch == '/' || ch == '-');
        let coefficient = parse_q(coef).ok_or_else(|| c.error("expected a coefficient"))?;
        let mut factors = vec![c.factor()?];
        while c.eat("⊗") {
            factors.push(c.factor()?);
        }
        out.push(Term { coefficient, factors });
        c.skip_ws();
        if c.rest().is_empty() {
            return Ok(out);
        }
        c.expect("+")?;
    }
}

fn factor_json(h: &dyn HereditarySpecies, f: &Factor) -> Value {
    match f {
        Factor::Structure(x) => structure_json(h, x),
        Factor::Family(xs) => json!(xs.iter().map(|x| structure_json(h, x)).collect::<Vec<_>>()),
    }
}

/// Two-factor terms become `{coefficient, left, right}`; other arities use
/// a `factors` array. `sides` labels which algebra each factor lives in.
pub fn terms_json(h: &dyn HereditarySpecies, ts: &[Term], sides: Option<&[&str]>) -> Value {
    let items: Vec<Value> = ts
        .iter()
        .map(|t| {
            let mut v = json!({ "coefficient": format_q(&t.coefficient) });
            if t.factors.len() == 2 {
                v["left"] = factor_json(h, &t.factors[0]);
                v["right"] = factor_json(h, &t.factors[1]);
            } else {
                v["factors"] = json!(t.factors.iter().map(|f| factor_json(h, f)).collect::<Vec<_>>());
            }
            if let Some(sides) = sides {
                v["sides"] = json!(sides);
            }
            v
        })
        .collect();
    json!(items)
}

pub fn tensor2_json<A, B>(h: &dyn HereditarySpecies, t: &LinComb<(A, B)>) -> Value
where
    A: Ord + Clone + AsFactor,
    B: Ord + Clone + AsFactor,
{
    terms_json(h, &terms(t), None)
}

fn parse_factor_json(h: &dyn HereditarySpecies, v: &Value) -> Result<Factor> {
    match v {
        Value::Array(xs) => Ok(Factor::Family(xs.iter().map(|x| parse_structure_json(h, x)).collect::<Result<_>>()?)),
        _ => Ok(Factor::Structure(parse_structure_json(h, v)?)),
    }
}

/// Inverse of [`terms_json`].
pub fn parse_terms_json(h: &dyn HereditarySpecies, v: &Value) -> Result<Vec<Term>> {
    let items = v.as_array().ok_or_else(|| Error::Parse("expected an array of terms".into()))?;
    items
        .iter()
        .enumerate()
        .map(|(k, item)| {
            let coefficient = item
                .get("coefficient")
                .and_then(Value::as_str)
                .and_then(parse_q)
                .ok_or_else(|| Error::Parse(format!("terms[{k}]: bad coefficient")))?;
            let factors = match (item.get("left"), item.get("right"), item.get("factors")) {
                (Some(l), Some(r), _) => vec![parse_factor_json(h, l)?, parse_factor_json(h, r)?],
                (_, _, Some(Value::Array(fs))) => fs.iter().map(|f| parse_factor_json(h, f)).collect::<Result<_>>()?,
                _ => return Err(Error::Parse(format!("terms[{k}]: missing factors"))),
            };
            Ok(Term { coefficient, factors })
        })
        .collect()
}

/// Compact label for a simplex: members like `3↠2(1,1,2) 3[1-2]`, a point
/// as `•`, joined in braces.
pub fn simplex_text(x: &crate::simplicial::simplex::Simplex) -> String {
    let members: Vec<String> = x
        .members
        .iter()
        .map(|m| {
            let mut s = if m.sets.is_empty() {
                "•".to_string()
            } else {
                m.sets.iter().map(|n| n.to_string()).collect::<Vec<_>>().join("↠")
            };
            if !m.maps.is_empty() {
                let maps: Vec<String> = m
                    .maps
                    .iter()
                    .map(|f| f.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(","))
                    .collect();
                s.push_str(&format!("({})", maps.join(" | ")));
            }
            if let Some(d) = &m.deco {
                s.push(' ');
                s.push_str(&structure_text(d));
            }
            s
        })
        .collect();
    format!("{{{}}}", members.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::{canonical_form, comultiply, Family};
    use crate::rational::q;
    use crate::species::{Graphs, Sets};

    #[test]
    fn structure_json_round_trip() {
        let v: Value = serde_json::from_str(r#"{"species":"graphs","n":3,"edges":[[1,2],[2,3]]}"#).unwrap();
        let x = parse_structure_json(&Graphs, &v).unwrap();
        assert_eq!(x, HStructure::new(3, vec![(0, 1), (1, 2)]));
        assert_eq!(structure_json(&Graphs, &x), v);
    }

    #[test]
    fn structure_json_errors() {
        let bad = [r#"{"n":2,"edges":[[1,3]]}"#, r#"{"edges":[]}"#, r#"{"n":2,"edges":[[1,1]]}"#, r#"[1]"#];
        for s in bad {
            let v: Value = serde_json::from_str(s).unwrap();
            assert!(parse_structure_json(&Graphs, &v).is_err(), "{s}");
        }
        let v: Value = serde_json::from_str(r#"{"species":"sets","n":2}"#).unwrap();
        assert!(parse_structure_json(&Graphs, &v).is_err());
        assert_eq!(parse_structure_json(&Sets, &v).unwrap(), HStructure::bare(2));
    }

    #[test]
    fn text_of_delta_k2() {
        let k2 = canonical_form(&Graphs, &HStructure::new(2, vec![(0, 1)]));
        let d = comultiply(&Graphs, &Family::new(vec![k2]).unwrap());
        assert_eq!(lincomb_text(&d), "1 (1[] * 1[]) ⊗ (2[1-2]) + 1 (2[1-2]) ⊗ (1[])");
    }

    #[test]
    fn text_and_json_round_trip() {
        for x in Graphs.structures(3) {
            let d = comultiply(&Graphs, &Family::new(vec![canonical_form(&Graphs, &x)]).unwrap());
            let ts = terms(&d);
            assert_eq!(parse_terms_text(&lincomb_text(&d)).unwrap(), ts);
            assert_eq!(parse_terms_json(&Graphs, &tensor2_json(&Graphs, &d)).unwrap(), ts);
        }
    }

    #[test]
    fn mixed_arity_and_fractions() {
        let ts = vec![
            Term { coefficient: q(-3, 4), factors: vec![Factor::Family(vec![]), Factor::Structure(HStructure::bare(0))] },
            Term {
                coefficient: q(2, 1),
                factors: vec![
                    Factor::Structure(HStructure::bare(1)),
                    Factor::Family(vec![HStructure::new(2, vec![(0, 1)])]),
                    Factor::Structure(HStructure::bare(1)),
                ],
            },
        ];
        let text = terms_text(&ts);
        assert_eq!(text, "-3/4 () ⊗ 0[] + 2 1[] ⊗ (2[1-2]) ⊗ 1[]");
        assert_eq!(parse_terms_text(&text).unwrap(), ts);
        assert_eq!(parse_terms_json(&Graphs, &terms_json(&Graphs, &ts, None)).unwrap(), ts);
        assert_eq!(parse_terms_text("0").unwrap(), vec![]);
        assert!(parse_terms_text("1 2[1-2").is_err());
    }
}
