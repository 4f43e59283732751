//! Composition operators on preference relations and the transitive-closure
//! fixpoint.

use crate::dnf::{conjuncts_to_formula, dnf_conjuncts, simplify, Conjunct};
use crate::error::{Error, Result};
use crate::formula::{Formula, PrefRelation, TupleVar};
use crate::solver::{eliminate_exists, entails};

/// `t1 (≻1 ∪ ≻2) t2` iff `t1 ≻1 t2 ∨ t1 ≻2 t2`.
pub fn union_pref(p1: &PrefRelation, p2: &PrefRelation) -> Result<PrefRelation> {
    p1.schema().check_same(p2.schema())?;
    PrefRelation::new(
        p1.schema().clone(),
        Formula::or(p1.formula().clone(), p2.formula().clone()),
    )
}

/// The indifference relation generated by `p`: neither tuple is preferred.
pub fn indifference(p: &PrefRelation) -> PrefRelation {
    let swapped = p.formula().rename_vars(&[(TupleVar::L, TupleVar::R), (TupleVar::R, TupleVar::L)]);
    PrefRelation::new(
        p.schema().clone(),
        Formula::and(Formula::not(p.formula().clone()), Formula::not(swapped)),
    )
    .expect("indifference preserves well-formedness")
}

/// Prioritized composition `≻0 ▷ ≻`: the revising relation `p0` wins, and
/// `p` applies only between `p0`-indifferent tuples.
pub fn prioritized(p0: &PrefRelation, p: &PrefRelation) -> Result<PrefRelation> {
    p0.schema().check_same(p.schema())?;
    let indiff0 = indifference(p0);
    PrefRelation::new(
        p0.schema().clone(),
        Formula::or(
            p0.formula().clone(),
            Formula::and(indiff0.formula().clone(), p.formula().clone()),
        ),
    )
}

/// The inverse relation: `L` and `R` swapped.
pub fn inverse(p: &PrefRelation) -> PrefRelation {
    let swapped = p.formula().rename_vars(&[(TupleVar::L, TupleVar::R), (TupleVar::R, TupleVar::L)]);
    PrefRelation::new(p.schema().clone(), swapped).expect("inverse preserves well-formedness")
}

/// Set difference: `t1 (≻1 − ≻2) t2` iff `t1 ≻1 t2 ∧ ¬(t1 ≻2 t2)`.
pub fn difference(p1: &PrefRelation, p2: &PrefRelation) -> Result<PrefRelation> {
    p1.schema().check_same(p2.schema())?;
    PrefRelation::new(
        p1.schema().clone(),
        Formula::and(p1.formula().clone(), Formula::not(p2.formula().clone())),
    )
}

/// Relational composition `∃t3. t1 ≻1 t3 ∧ t3 ≻2 t2`. The bound tuple
/// variable is eliminated attribute by attribute, in schema order.
pub fn compose(p1: &PrefRelation, p2: &PrefRelation) -> Result<PrefRelation> {
    p1.schema().check_same(p2.schema())?;
    let schema = p1.schema().clone();
    let mid = TupleVar::Aux(0);
    let left = p1.formula().rename_vars(&[(TupleVar::R, mid)]);
    let right = p2.formula().rename_vars(&[(TupleVar::L, mid)]);
    let mut conjuncts = dnf_conjuncts(&Formula::and(left, right));
    for attr in 0..schema.arity() {
        let mut next: Vec<Conjunct> = Vec::new();
        for c in &conjuncts {
            next.extend(dnf_conjuncts(&eliminate_exists((mid, attr), c)));
        }
        conjuncts = simplify(next);
    }
    PrefRelation::new(schema, conjuncts_to_formula(&conjuncts))
}

pub const DEFAULT_TC_ITER: usize = 64;

/// Least fixpoint of `F₁ ∨ (F₁ ∘ Fₖ)`, i.e. the transitive closure of `p`.
///
/// Terminates for equality and rational-order constraint formulas; the
/// iteration cap turns anything else into an explicit error.
pub fn transitive_closure(p: &PrefRelation, max_iter: usize) -> Result<PrefRelation> {
    let schema = p.schema().clone();
    let base_conjuncts = dnf_conjuncts(p.formula());
    let base = PrefRelation::new(schema.clone(), conjuncts_to_formula(&base_conjuncts))?;
    let mut current = base.clone();
    for _ in 0..max_iter.max(1) {
        let step = compose(&base, &current)?;
        let next_formula = conjuncts_to_formula(&simplify(dnf_conjuncts(&Formula::or(
            base.formula().clone(),
            step.formula().clone(),
        ))));
        let next = PrefRelation::new(schema.clone(), next_formula)?;
        // The iterates form an increasing chain, so one entailment decides
        // equivalence.
        if entails(next.formula(), current.formula()) {
            return Ok(next);
        }
        current = next;
    }
    Err(Error::IterationCap { max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;
    use crate::rational::rat_int;
    use crate::schema::{AttrDomain, Schema, TupleValue, Value};
    use crate::solver::{equivalent, satisfiable};

    fn car() -> Schema {
        Schema::new("Car", vec![("make", AttrDomain::D), ("year", AttrDomain::Q)]).unwrap()
    }

    fn pref(text: &str) -> PrefRelation {
        parse_formula(text, &car()).unwrap()
    }

    fn c1() -> PrefRelation {
        pref("L.make = R.make and L.year > R.year")
    }

    fn c2() -> PrefRelation {
        pref("L.make = 'VW' and R.make != 'VW' and L.year = R.year")
    }

    fn c3() -> PrefRelation {
        pref("L.make = 'VW' and L.year = 1999 and R.make = 'Kia' and R.year = 1999")
    }

    fn c4() -> PrefRelation {
        pref("L.make = R.make and L.year > R.year or L.make = 'VW' and L.year >= 1999 and R.make = 'Kia' and R.year <= 1999")
    }

    fn cstar() -> PrefRelation {
        pref("L.make = R.make and L.year > R.year or L.make = 'VW' and R.make != 'VW' and L.year >= R.year")
    }

    fn tup(make: &str, year: i64) -> TupleValue {
        TupleValue::new(&car(), vec![Value::D(make.into()), Value::Q(rat_int(year))]).unwrap()
    }

    #[test]
    fn union_identity_and_idempotence() {
        let p = c1();
        let empty = PrefRelation::empty(car());
        assert!(equivalent(union_pref(&p, &empty).unwrap().formula(), p.formula()));
        assert!(equivalent(union_pref(&p, &p).unwrap().formula(), p.formula()));
    }

    #[test]
    fn union_rejects_schema_mismatch() {
        let other = Schema::new("Boat", vec![("name", AttrDomain::D)]).unwrap();
        let q = PrefRelation::empty(other);
        assert!(union_pref(&c1(), &q).is_err());
    }

    #[test]
    fn indifference_on_incomparable_pair() {
        // Both t1 and t3 survive winnow under C1: they are indifferent.
        let ind = indifference(&c1());
        assert!(ind.eval_ground(&tup("VW", 2002), &tup("Kia", 1997)).unwrap());
        assert!(!ind.eval_ground(&tup("VW", 2002), &tup("VW", 1997)).unwrap());
    }

    #[test]
    fn indifference_is_symmetric() {
        let ind = indifference(&c1());
        let swapped = inverse(&ind);
        assert!(equivalent(ind.formula(), swapped.formula()));
    }

    #[test]
    fn indifference_of_empty_is_total() {
        let ind = indifference(&PrefRelation::empty(car()));
        assert!(equivalent(ind.formula(), &Formula::True));
    }

    #[test]
    fn prioritized_with_empty_priority_is_original() {
        let p = c1();
        let empty = PrefRelation::empty(car());
        let r = prioritized(&empty, &p).unwrap();
        assert!(equivalent(r.formula(), p.formula()));
    }

    #[test]
    fn inverse_is_involution() {
        for p in [c1(), c2(), cstar()] {
            assert!(equivalent(inverse(&inverse(&p)).formula(), p.formula()));
        }
        let newer = pref("L.year > R.year");
        let older = pref("L.year < R.year");
        assert!(equivalent(inverse(&newer).formula(), older.formula()));
    }

    #[test]
    fn difference_basics() {
        let p = c1();
        let empty = PrefRelation::empty(car());
        assert!(!satisfiable(difference(&p, &p).unwrap().formula()));
        assert!(equivalent(difference(&p, &empty).unwrap().formula(), p.formula()));
    }

    #[test]
    fn compose_transitive_relation_is_itself() {
        let p = c1();
        let cc = compose(&p, &p).unwrap();
        assert!(equivalent(cc.formula(), p.formula()));
    }

    #[test]
    fn compose_with_empty_annihilates() {
        let p = c1();
        let empty = PrefRelation::empty(car());
        assert!(!satisfiable(compose(&p, &empty).unwrap().formula()));
        assert!(!satisfiable(compose(&empty, &p).unwrap().formula()));
    }

    #[test]
    fn compose_derives_off_database_chain() {
        // t1 ≻C1 (VW,1999) ≻C3 (Kia,1999) ≻C1 t3, with the two middle tuples
        // absent from the database.
        let step = compose(&compose(&c1(), &c3()).unwrap(), &c1()).unwrap();
        assert!(step.eval_ground(&tup("VW", 2002), &tup("Kia", 1997)).unwrap());
    }

    #[test]
    fn tc_of_union_c1_c2_is_cstar() {
        let u = union_pref(&c1(), &c2()).unwrap();
        let tc = transitive_closure(&u, DEFAULT_TC_ITER).unwrap();
        assert!(equivalent(tc.formula(), cstar().formula()));
    }

    #[test]
    fn tc_of_union_c1_c3_is_c4() {
        let u = union_pref(&c1(), &c3()).unwrap();
        let tc = transitive_closure(&u, DEFAULT_TC_ITER).unwrap();
        assert!(equivalent(tc.formula(), c4().formula()));
    }

    #[test]
    fn tc_of_empty_is_empty() {
        let empty = PrefRelation::empty(car());
        let tc = transitive_closure(&empty, DEFAULT_TC_ITER).unwrap();
        assert!(!satisfiable(tc.formula()));
    }

    #[test]
    fn tc_is_idempotent_and_contains_base() {
        let u = union_pref(&c1(), &c3()).unwrap();
        let tc = transitive_closure(&u, DEFAULT_TC_ITER).unwrap();
        let tc2 = transitive_closure(&tc, DEFAULT_TC_ITER).unwrap();
        assert!(equivalent(tc.formula(), tc2.formula()));
        assert!(crate::solver::entails(u.formula(), tc.formula()));
    }

    #[test]
    fn tc_iteration_cap_is_reported() {
        let u = union_pref(&c1(), &c3()).unwrap();
        match transitive_closure(&u, 1) {
            Err(Error::IterationCap { max_iter: 1 }) => {}
            other => panic!("expected iteration cap, got {other:?}"),
        }
    }
}
