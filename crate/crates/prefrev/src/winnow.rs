//! The winnow operator over finite instances, three ways, plus incremental
//! iterated evaluation.
//!
//! `winnow_generic` assumes nothing about the relation and tests dominance
//! pairwise. `winnow_bnl` keeps a window of current candidates and requires
//! an SPO. `winnow_weak` exploits the layer structure of a weak order and
//! compares each tuple against a single representative, so it performs at
//! most `2n` ground evaluations.

use std::fmt;

use crate::axioms::{classify, is_irreflexive, is_transitive};
use crate::error::{Error, Result};
use crate::exec;
use crate::formula::PrefRelation;
use crate::schema::{Schema, TupleValue};
use crate::solver::entails;

/// A finite set of schema-conformant tuples, in stable input order, with
/// optional per-tuple names (`t1`, `t2`, ...) for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationInstance {
    schema: Schema,
    tuples: Vec<TupleValue>,
    names: Option<Vec<String>>,
}

impl RelationInstance {
    /// Builds an instance, validating tuples and collapsing duplicates
    /// (set semantics); the first occurrence wins.
    pub fn new(schema: Schema, tuples: Vec<TupleValue>) -> Result<RelationInstance> {
        Self::build(schema, tuples, None)
    }

    pub fn with_names(schema: Schema, tuples: Vec<TupleValue>, names: Vec<String>) -> Result<RelationInstance> {
        if names.len() != tuples.len() {
            return Err(Error::InvalidTuple("one name per tuple required".into()));
        }
        Self::build(schema, tuples, Some(names))
    }

    fn build(schema: Schema, tuples: Vec<TupleValue>, names: Option<Vec<String>>) -> Result<RelationInstance> {
        let mut kept: Vec<TupleValue> = Vec::new();
        let mut kept_names: Vec<String> = Vec::new();
        for (i, t) in tuples.into_iter().enumerate() {
            TupleValue::new(&schema, t.values().to_vec())?;
            if kept.contains(&t) {
                continue;
            }
            if let Some(ns) = &names {
                kept_names.push(ns[i].clone());
            }
            kept.push(t);
        }
        Ok(RelationInstance {
            schema,
            tuples: kept,
            names: names.map(|_| kept_names),
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn tuples(&self) -> &[TupleValue] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn name_of(&self, index: usize) -> String {
        match &self.names {
            Some(ns) => ns[index].clone(),
            None => format!("t{}", index + 1),
        }
    }

    pub fn contains(&self, t: &TupleValue) -> bool {
        self.tuples.contains(t)
    }

    /// Keeps exactly the tuples at the flagged positions, in order.
    fn filtered(&self, keep: &[bool]) -> RelationInstance {
        let tuples = self
            .tuples
            .iter()
            .zip(keep)
            .filter_map(|(t, &k)| if k { Some(t.clone()) } else { None })
            .collect();
        let names = self.names.as_ref().map(|ns| {
            ns.iter()
                .zip(keep)
                .filter_map(|(n, &k)| if k { Some(n.clone()) } else { None })
                .collect()
        });
        RelationInstance { schema: self.schema.clone(), tuples, names }
    }

    /// Set equality, ignoring order and names.
    pub fn same_tuples(&self, other: &RelationInstance) -> bool {
        self.len() == other.len() && self.tuples.iter().all(|t| other.contains(t))
    }
}

impl fmt::Display for RelationInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tuples.iter().enumerate() {
            writeln!(f, "{} {}", self.name_of(i), t)?;
        }
        Ok(())
    }
}

/// Winnow with no assumptions on `p`: a tuple survives exactly when no other
/// tuple dominates it. Dominance tests across tuples run in parallel.
pub fn winnow_generic(p: &PrefRelation, r: &RelationInstance) -> Result<RelationInstance> {
    p.schema().check_same(r.schema())?;
    let tuples = r.tuples();
    let keep = exec::map_indices(tuples.len(), |i| {
        !tuples
            .iter()
            .enumerate()
            .any(|(j, other)| j != i && p.eval_unchecked(other, &tuples[i]))
    });
    Ok(r.filtered(&keep))
}

/// Block-nested-loops winnow. Requires an SPO; a mutual-domination pair
/// among window candidates is reported as a dominance cycle.
pub fn winnow_bnl(p: &PrefRelation, r: &RelationInstance) -> Result<RelationInstance> {
    p.schema().check_same(r.schema())?;
    let tuples = r.tuples();
    let mut window: Vec<usize> = Vec::new();
    for (i, t) in tuples.iter().enumerate() {
        let mut dominated = false;
        let mut survivors: Vec<usize> = Vec::new();
        for &w in &window {
            let wt = p.eval_unchecked(&tuples[w], t);
            let tw = p.eval_unchecked(t, &tuples[w]);
            if wt && tw {
                return Err(Error::DominanceCycle);
            }
            if wt {
                dominated = true;
                break;
            }
            if !tw {
                survivors.push(w);
            }
        }
        if !dominated {
            survivors.push(i);
            window = survivors;
        }
    }
    let mut keep = vec![false; tuples.len()];
    for w in window {
        keep[w] = true;
    }
    Ok(r.filtered(&keep))
}

/// Single-pass winnow for weak orders: the current top layer is represented
/// by one member, against which each incoming tuple is compared. At most
/// `2·|r|` ground evaluations. Correct only for weak orders; callers guard
/// with classification.
pub fn winnow_weak(p: &PrefRelation, r: &RelationInstance) -> Result<RelationInstance> {
    winnow_weak_counted(p, r).map(|(out, _)| out)
}

/// As [`winnow_weak`], also reporting the number of ground evaluations.
pub fn winnow_weak_counted(p: &PrefRelation, r: &RelationInstance) -> Result<(RelationInstance, usize)> {
    p.schema().check_same(r.schema())?;
    let tuples = r.tuples();
    let mut evals = 0usize;
    let mut layer: Vec<usize> = Vec::new();
    let mut rep: Option<usize> = None;
    for (i, t) in tuples.iter().enumerate() {
        match rep {
            None => {
                layer.push(i);
                rep = Some(i);
            }
            Some(top) => {
                evals += 1;
                if p.eval_unchecked(t, &tuples[top]) {
                    layer.clear();
                    layer.push(i);
                    rep = Some(i);
                    continue;
                }
                evals += 1;
                if !p.eval_unchecked(&tuples[top], t) {
                    layer.push(i);
                }
            }
        }
    }
    let mut keep = vec![false; tuples.len()];
    for i in layer {
        keep[i] = true;
    }
    Ok((r.filtered(&keep), evals))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WinnowAlgo {
    Generic,
    Bnl,
    Weak,
}

impl fmt::Display for WinnowAlgo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WinnowAlgo::Generic => write!(f, "generic"),
            WinnowAlgo::Bnl => write!(f, "bnl"),
            WinnowAlgo::Weak => write!(f, "weak"),
        }
    }
}

/// Classifies `p` once and dispatches: weak order to the single-pass
/// algorithm, SPO to BNL, anything else to the generic scan.
pub fn winnow_auto(p: &PrefRelation, r: &RelationInstance) -> Result<(RelationInstance, WinnowAlgo)> {
    let class = classify(p);
    if class.is_weak() {
        Ok((winnow_weak(p, r)?, WinnowAlgo::Weak))
    } else if class.is_spo() {
        Ok((winnow_bnl(p, r)?, WinnowAlgo::Bnl))
    } else {
        Ok((winnow_generic(p, r)?, WinnowAlgo::Generic))
    }
}

/// Iterated winnow along a monotone chain of SPOs, computed incrementally:
/// each stage winnows the previous result rather than the full instance.
/// Returns `[r, ω≻1(r), ω≻2(ω≻1(r)), ...]`.
///
/// Preconditions are verified: each relation must entail its successor and
/// each must be an SPO; violations are reported with the offending index.
pub fn iterate_winnow(chain: &[PrefRelation], r: &RelationInstance) -> Result<Vec<RelationInstance>> {
    for (i, p) in chain.iter().enumerate() {
        p.schema().check_same(r.schema())?;
        if !(is_irreflexive(p) && is_transitive(p)) {
            return Err(Error::ChainMemberNotSpo { index: i });
        }
    }
    for i in 0..chain.len().saturating_sub(1) {
        if !entails(chain[i].formula(), chain[i + 1].formula()) {
            return Err(Error::ChainNotMonotonic { index: i });
        }
    }
    let mut out = vec![r.clone()];
    for p in chain {
        let prev = out.last().unwrap();
        out.push(winnow_bnl(p, prev)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;
    use crate::rational::rat_int;
    use crate::schema::{AttrDomain, Value};

    fn car() -> Schema {
        Schema::new("Car", vec![("make", AttrDomain::D), ("year", AttrDomain::Q)]).unwrap()
    }

    fn tup(make: &str, year: i64) -> TupleValue {
        TupleValue::new(&car(), vec![Value::D(make.into()), Value::Q(rat_int(year))]).unwrap()
    }

    fn r1() -> RelationInstance {
        RelationInstance::new(car(), vec![tup("VW", 2002), tup("VW", 1997), tup("Kia", 1997)]).unwrap()
    }

    fn pref(text: &str) -> PrefRelation {
        parse_formula(text, &car()).unwrap()
    }

    fn c1() -> PrefRelation {
        pref("L.make = R.make and L.year > R.year")
    }

    fn cstar() -> PrefRelation {
        pref("L.make = R.make and L.year > R.year or L.make = 'VW' and R.make != 'VW' and L.year >= R.year")
    }

    fn c4() -> PrefRelation {
        pref("L.make = R.make and L.year > R.year or L.make = 'VW' and L.year >= 1999 and R.make = 'Kia' and R.year <= 1999")
    }

    #[test]
    fn generic_keeps_undominated() {
        let out = winnow_generic(&c1(), &r1()).unwrap();
        assert_eq!(out.tuples(), &[tup("VW", 2002), tup("Kia", 1997)]);
        let out = winnow_generic(&cstar(), &r1()).unwrap();
        assert_eq!(out.tuples(), &[tup("VW", 2002)]);
        let all = winnow_generic(&PrefRelation::empty(car()), &r1()).unwrap();
        assert_eq!(all.tuples(), r1().tuples());
    }

    #[test]
    fn bnl_matches_generic_on_spos() {
        let out = winnow_bnl(&c4(), &r1()).unwrap();
        assert_eq!(out.tuples(), &[tup("VW", 2002)]);
        let out = winnow_bnl(&c1(), &r1()).unwrap();
        assert_eq!(out.tuples(), &[tup("VW", 2002), tup("Kia", 1997)]);
        let single = RelationInstance::new(car(), vec![tup("VW", 1999)]).unwrap();
        let out = winnow_bnl(&c1(), &single).unwrap();
        assert_eq!(out.tuples(), single.tuples());
    }

    #[test]
    fn bnl_detects_two_cycles() {
        let sym = pref("L.make != R.make");
        assert!(matches!(winnow_bnl(&sym, &r1()), Err(Error::DominanceCycle)));
    }

    #[test]
    fn weak_single_pass() {
        let newer = pref("L.year > R.year");
        let (out, evals) = winnow_weak_counted(&newer, &r1()).unwrap();
        assert_eq!(out.tuples(), &[tup("VW", 2002)]);
        assert!(evals <= 2 * r1().len());
        let (all, _) = winnow_weak_counted(&PrefRelation::empty(car()), &r1()).unwrap();
        assert_eq!(all.tuples(), r1().tuples());
    }

    #[test]
    fn auto_dispatch() {
        let (_, algo) = winnow_auto(&pref("L.year > R.year"), &r1()).unwrap();
        assert_eq!(algo, WinnowAlgo::Weak);
        let (_, algo) = winnow_auto(&c1(), &r1()).unwrap();
        assert_eq!(algo, WinnowAlgo::Bnl);
        let (_, algo) = winnow_auto(&pref("L.year >= R.year"), &r1()).unwrap();
        assert_eq!(algo, WinnowAlgo::Generic);
    }

    #[test]
    fn iterate_example_chain() {
        let stages = iterate_winnow(&[c1(), cstar()], &r1()).unwrap();
        assert_eq!(stages.len(), 3);
        assert_eq!(stages[0].tuples(), r1().tuples());
        assert_eq!(stages[1].tuples(), &[tup("VW", 2002), tup("Kia", 1997)]);
        assert_eq!(stages[2].tuples(), &[tup("VW", 2002)]);
        // Incremental result equals winnow over the full instance.
        let direct = winnow_generic(&cstar(), &r1()).unwrap();
        assert!(stages[2].same_tuples(&direct));
    }

    #[test]
    fn iterate_rejects_bad_chains() {
        // Containment fails: C* does not entail C1.
        assert!(matches!(
            iterate_winnow(&[cstar(), c1()], &r1()),
            Err(Error::ChainNotMonotonic { index: 0 })
        ));
        // Non-SPO member.
        assert!(matches!(
            iterate_winnow(&[pref("L.year >= R.year")], &r1()),
            Err(Error::ChainMemberNotSpo { index: 0 })
        ));
    }

    #[test]
    fn duplicates_collapse() {
        let inst = RelationInstance::new(car(), vec![tup("VW", 2002), tup("VW", 2002)]).unwrap();
        assert_eq!(inst.len(), 1);
    }
}
