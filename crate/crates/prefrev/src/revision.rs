//! Preference revision: conflicts, compatibility, refinement and overriding
//! revision with theorem-backed fast paths, and utility-function
//! combination.
//!
//! Semi-compatibility is decided by the condition
//! `≻0⁻¹ ∩ TC(≻ − ≻0⁻¹) = ∅`, which reproduces the worked hidden-conflict
//! example sequence; the prose chain definition is implemented separately in
//! the oracle as a cross-check.

use std::fmt;

use crate::algebra::{
    difference, inverse, prioritized, transitive_closure, union_pref, DEFAULT_TC_ITER,
};
use crate::axioms::{classify, has_scp_finite, OrderClass};
use crate::error::{Error, Result};
use crate::formula::{AtomKind, CompOp, Formula, PrefRelation, Term, TupleVar};
use crate::oracle::{materialize, GridOptions, GridUniverse};
use crate::rational::{render_rat, Rat};
use crate::schema::{AttrDomain, Schema, TupleValue};
use crate::solver::satisfiable;
use crate::winnow::RelationInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RevisionMode {
    Refine,
    Override,
}

impl fmt::Display for RevisionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RevisionMode::Refine => write!(f, "refine"),
            RevisionMode::Override => write!(f, "override"),
        }
    }
}

/// Which preservation result licensed the construction of the revision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FastPath {
    SpoUnionScp,
    SpoPriorityScp,
    SpoWeakUnion,
    SpoWeakPriority,
    WeakWeakUnion,
    WeakWeakPriority,
    GenericTc,
}

impl fmt::Display for FastPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FastPath::SpoUnionScp => "SPO_UNION_SCP",
            FastPath::SpoPriorityScp => "SPO_PRIORITY_SCP",
            FastPath::SpoWeakUnion => "SPO_WEAK_UNION",
            FastPath::SpoWeakPriority => "SPO_WEAK_PRIORITY",
            FastPath::WeakWeakUnion => "WEAK_WEAK_UNION",
            FastPath::WeakWeakPriority => "WEAK_WEAK_PRIORITY",
            FastPath::GenericTc => "GENERIC_TC",
        };
        write!(f, "{s}")
    }
}

/// How the caller vouches for the single-chain property of a relation.
/// There is no symbolic decision procedure for SCP, so it is either
/// asserted outright or verified on a supplied finite universe.
#[derive(Debug, Clone, Default)]
pub enum ScpHint {
    #[default]
    Unknown,
    Asserted,
    VerifyOn(RelationInstance),
}

#[derive(Debug, Clone, Default)]
pub struct ScpHints {
    /// Hint for the original relation `p`.
    pub base: ScpHint,
    /// Hint for the revising relation `p0`.
    pub revising: ScpHint,
}

impl ScpHints {
    pub fn assert_revising() -> ScpHints {
        ScpHints { base: ScpHint::Unknown, revising: ScpHint::Asserted }
    }

    pub fn assert_base() -> ScpHints {
        ScpHints { base: ScpHint::Asserted, revising: ScpHint::Unknown }
    }
}

fn scp_holds(p: &PrefRelation, hint: &ScpHint) -> bool {
    match hint {
        ScpHint::Unknown => false,
        ScpHint::Asserted => true,
        ScpHint::VerifyOn(universe) => has_scp_finite(p, universe).unwrap_or(false),
    }
}

/// Compatibility diagnostics for a `(p, p0)` pair.
#[derive(Debug, Clone)]
pub struct CompatReport {
    pub compatible: bool,
    pub semi_compatible: bool,
    /// Describes exactly the conflict pairs: `p0(L,R) ∧ p(R,L)`.
    pub conflict_formula: Formula,
    /// A ground conflict witness from a grid universe, when one exists.
    pub sample_conflict: Option<(TupleValue, TupleValue)>,
}

/// The outcome of a revision: the revised relation, which result licensed
/// it, the checked order class, and the compatibility diagnostics.
#[derive(Debug, Clone)]
pub struct RevisionReport {
    pub result: PrefRelation,
    pub mode: RevisionMode,
    pub fast_path: FastPath,
    pub result_class: OrderClass,
    pub compat: CompatReport,
    /// Whether the result is provably the least revision of the target
    /// class. Fast paths inherit this from their theorem; the generic path
    /// earns it only when the checked class confirms an SPO (the least
    /// transitive revision is then the least SPO one too).
    pub least: bool,
}

/// The conflicts between `p` and the revising `p0`: pairs preferred
/// oppositely, as the formula `p0(L,R) ∧ p(R,L)`.
pub fn conflicts(p: &PrefRelation, p0: &PrefRelation) -> Result<Formula> {
    p.schema().check_same(p0.schema())?;
    let reversed = p.formula().rename_vars(&[(TupleVar::L, TupleVar::R), (TupleVar::R, TupleVar::L)]);
    Ok(Formula::and(p0.formula().clone(), reversed))
}

/// No conflicts at all. Symmetric in its arguments.
pub fn is_compatible(p: &PrefRelation, p0: &PrefRelation) -> Result<bool> {
    Ok(!satisfiable(&conflicts(p, p0)?))
}

/// No hidden conflicts: `≻0⁻¹ ∩ TC(≻ − ≻0⁻¹) = ∅`.
pub fn is_semi_compatible(p: &PrefRelation, p0: &PrefRelation) -> Result<bool> {
    p.schema().check_same(p0.schema())?;
    let inv0 = inverse(p0);
    let reachable = transitive_closure(&difference(p, &inv0)?, DEFAULT_TC_ITER)?;
    let intersection = Formula::and(inv0.formula().clone(), reachable.formula().clone());
    Ok(!satisfiable(&intersection))
}

/// Full compatibility diagnostics, including a ground witness for the
/// conflict formula when one exists on a grid universe.
pub fn compat_report(p: &PrefRelation, p0: &PrefRelation) -> Result<CompatReport> {
    let conflict_formula = conflicts(p, p0)?;
    let compatible = !satisfiable(&conflict_formula);
    let semi_compatible = is_semi_compatible(p, p0)?;
    let sample_conflict = if compatible {
        None
    } else {
        conflict_witness(p.schema(), &conflict_formula)
    };
    Ok(CompatReport { compatible, semi_compatible, conflict_formula, sample_conflict })
}

fn conflict_witness(schema: &Schema, conflict: &Formula) -> Option<(TupleValue, TupleValue)> {
    let relation = PrefRelation::new(schema.clone(), conflict.clone()).ok()?;
    let grid = GridUniverse::build(schema, &[conflict], &[], &GridOptions::default()).ok()?;
    let edges = materialize(&relation, &grid).ok()?;
    let (i, j) = edges.pairs().into_iter().next()?;
    Some((grid.tuples()[i].clone(), grid.tuples()[j].clone()))
}

/// Refinement revision: the result contains `p ∪ p0`.
///
/// Fast paths, tried cheapest precondition first: compatible weak orders
/// combine by plain union into the least weak-order refinement; a
/// compatible SPO/weak-order pair combines by union into the least SPO
/// refinement; compatible SPOs where one side has the single-chain property
/// take `TC(p ∪ p0)` as the least SPO refinement. Anything else falls back
/// to `TC(p ∪ p0)`, the least transitive refinement, with its class checked
/// explicitly.
pub fn refine(p: &PrefRelation, p0: &PrefRelation, hints: &ScpHints) -> Result<RevisionReport> {
    p.schema().check_same(p0.schema())?;
    let class_p = classify(p);
    let class_p0 = classify(p0);
    let compat = compat_report(p, p0)?;
    let union = union_pref(p, p0)?;
    let (result, fast_path) = if compat.compatible && class_p.is_weak() && class_p0.is_weak() {
        (union, FastPath::WeakWeakUnion)
    } else if compat.compatible
        && ((class_p.is_spo() && class_p0.is_weak()) || (class_p.is_weak() && class_p0.is_spo()))
    {
        (union, FastPath::SpoWeakUnion)
    } else if compat.compatible
        && class_p.is_spo()
        && class_p0.is_spo()
        && (scp_holds(p, &hints.base) || scp_holds(p0, &hints.revising))
    {
        (transitive_closure(&union, DEFAULT_TC_ITER)?, FastPath::SpoUnionScp)
    } else {
        (transitive_closure(&union, DEFAULT_TC_ITER)?, FastPath::GenericTc)
    };
    let result_class = classify(&result);
    let least = fast_path != FastPath::GenericTc || result_class.is_spo();
    Ok(RevisionReport { result, mode: RevisionMode::Refine, fast_path, result_class, compat, least })
}

/// Overriding revision: the result contains `p0 ▷ p`, so conflicting
/// original preferences may be dropped.
///
/// Fast paths: a weak-order `p0` needs no compatibility at all — prioritized
/// composition is already the least weak-order (for weak `p`) or least SPO
/// (for SPO `p`) overriding revision. SPO pairs where `p0` has the
/// single-chain property and `p` is semi-compatible with `p0` take
/// `TC(p0 ▷ p)`. Anything else falls back to `TC(p0 ▷ p)` with explicit
/// checking.
pub fn override_with(p: &PrefRelation, p0: &PrefRelation, hints: &ScpHints) -> Result<RevisionReport> {
    p.schema().check_same(p0.schema())?;
    let class_p = classify(p);
    let class_p0 = classify(p0);
    let compat = compat_report(p, p0)?;
    let prior = prioritized(p0, p)?;
    let (result, fast_path) = if class_p0.is_weak() && class_p.is_weak() {
        (prior, FastPath::WeakWeakPriority)
    } else if class_p0.is_weak() && class_p.is_spo() {
        (prior, FastPath::SpoWeakPriority)
    } else if class_p0.is_spo()
        && class_p.is_spo()
        && scp_holds(p0, &hints.revising)
        && compat.semi_compatible
    {
        (transitive_closure(&prior, DEFAULT_TC_ITER)?, FastPath::SpoPriorityScp)
    } else {
        (transitive_closure(&prior, DEFAULT_TC_ITER)?, FastPath::GenericTc)
    };
    let result_class = classify(&result);
    let least = fast_path != FastPath::GenericTc || result_class.is_spo();
    Ok(RevisionReport { result, mode: RevisionMode::Override, fast_path, result_class, compat, least })
}

/// A linear utility over one tuple: rational coefficients on `Q`-attribute
/// reads and on 0/1 indicators `[attr = const]` over `D` attributes, plus a
/// constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityExpr {
    schema: Schema,
    terms: Vec<(Rat, UtilityBasis)>,
    constant: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum UtilityBasis {
    QAttr(usize),
    Indicator(usize, String),
}

impl UtilityExpr {
    pub fn new(schema: Schema, terms: Vec<(Rat, UtilityBasis)>, constant: Rat) -> Result<UtilityExpr> {
        for (_, basis) in &terms {
            let (idx, want) = match basis {
                UtilityBasis::QAttr(i) => (*i, AttrDomain::Q),
                UtilityBasis::Indicator(i, _) => (*i, AttrDomain::D),
            };
            if idx >= schema.arity() || schema.attr_domain(idx) != want {
                return Err(Error::InvalidSchema(format!(
                    "utility term over attribute index {idx} expects domain {want}"
                )));
            }
        }
        // Combine like terms; drop zeros.
        let mut merged: Vec<(UtilityBasis, Rat)> = Vec::new();
        for (coeff, basis) in terms {
            match merged.iter_mut().find(|(b, _)| *b == basis) {
                Some((_, c)) => *c += coeff,
                None => merged.push((basis, coeff)),
            }
        }
        merged.retain(|(_, c)| *c != Rat::from_integer(0.into()));
        merged.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(UtilityExpr {
            schema,
            terms: merged.into_iter().map(|(b, c)| (c, b)).collect(),
            constant,
        })
    }

    pub fn constant_only(schema: Schema, constant: Rat) -> UtilityExpr {
        UtilityExpr { schema, terms: Vec::new(), constant }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// Exact rational value on a ground tuple.
    pub fn eval(&self, t: &TupleValue) -> Rat {
        let mut total = self.constant.clone();
        for (coeff, basis) in &self.terms {
            match basis {
                UtilityBasis::QAttr(i) => {
                    if let crate::schema::Value::Q(q) = t.value(*i) {
                        total += coeff * q;
                    }
                }
                UtilityBasis::Indicator(i, c) => {
                    if let crate::schema::Value::D(s) = t.value(*i) {
                        if s == c {
                            total += coeff.clone();
                        }
                    }
                }
            }
        }
        total
    }

    /// Renders like `2·year + 3·[make='VW'] + 1`.
    pub fn render(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (coeff, basis) in &self.terms {
            let b = match basis {
                UtilityBasis::QAttr(i) => self.schema.attr_name(*i).to_string(),
                UtilityBasis::Indicator(i, c) => format!("[{}='{}']", self.schema.attr_name(*i), c),
            };
            parts.push(format!("{}·{}", render_rat(coeff), b));
        }
        if parts.is_empty() || self.constant != Rat::from_integer(0.into()) {
            parts.push(render_rat(&self.constant));
        }
        parts.join(" + ")
    }

    /// Constraint formula for `u(L) op u(R)` with `op ∈ {>, =}`.
    ///
    /// Expressible exactly when the utility is affine in a single `Q`
    /// attribute, or built from indicators alone; anything else would need
    /// arithmetic atoms the constraint language does not have.
    pub fn cmp_formula(&self, strict: bool) -> Result<Formula> {
        let q_terms: Vec<(&Rat, usize)> = self
            .terms
            .iter()
            .filter_map(|(c, b)| match b {
                UtilityBasis::QAttr(i) => Some((c, *i)),
                _ => None,
            })
            .collect();
        let ind_terms: Vec<(&Rat, usize, &String)> = self
            .terms
            .iter()
            .filter_map(|(c, b)| match b {
                UtilityBasis::Indicator(i, s) => Some((c, *i, s)),
                _ => None,
            })
            .collect();
        if !q_terms.is_empty() && !ind_terms.is_empty() {
            return Err(Error::InexpressibleUtility(
                "mixes a numeric attribute with indicator terms".into(),
            ));
        }
        if q_terms.len() > 1 {
            return Err(Error::InexpressibleUtility(
                "depends on more than one numeric attribute".into(),
            ));
        }
        if let Some((coeff, attr)) = q_terms.first() {
            let (l, r) = (Term::Attr(TupleVar::L, *attr), Term::Attr(TupleVar::R, *attr));
            let op = if strict {
                if crate::rational::is_positive(coeff) {
                    CompOp::Gt
                } else {
                    CompOp::Lt
                }
            } else {
                CompOp::Eq
            };
            return Ok(Formula::atom(AtomKind::OrdQ, op, l, r));
        }
        if ind_terms.is_empty() {
            // Constant utility: never strictly greater, always equal.
            return Ok(Formula::from_bool(!strict));
        }
        // Indicators only: enumerate the finitely many value patterns per
        // attribute (each named constant, or none of them) for both sides
        // and keep the pairs with the right value comparison.
        let mut attrs: Vec<(usize, Vec<(&String, &Rat)>)> = Vec::new();
        for (coeff, attr, name) in &ind_terms {
            match attrs.iter_mut().find(|(a, _)| a == attr) {
                Some((_, list)) => list.push((name, coeff)),
                None => attrs.push((*attr, vec![(name, coeff)])),
            }
        }
        let mut patterns: Vec<(Vec<(usize, Option<&String>)>, Rat)> =
            vec![(Vec::new(), Rat::from_integer(0.into()))];
        for (attr, consts) in &attrs {
            let mut next = Vec::new();
            for (pattern, value) in &patterns {
                for (name, coeff) in consts {
                    let mut p = pattern.clone();
                    p.push((*attr, Some(*name)));
                    next.push((p, value + *coeff));
                }
                let mut p = pattern.clone();
                p.push((*attr, None));
                next.push((p, value.clone()));
            }
            patterns = next;
        }
        let side_formula = |side: TupleVar, pattern: &[(usize, Option<&String>)]| {
            Formula::and_all(pattern.iter().map(|(attr, choice)| match choice {
                Some(name) => Formula::atom(
                    AtomKind::EqD,
                    CompOp::Eq,
                    Term::Attr(side, *attr),
                    Term::DConst((*name).clone()),
                ),
                None => Formula::and_all(
                    attrs
                        .iter()
                        .find(|(a, _)| a == attr)
                        .unwrap()
                        .1
                        .iter()
                        .map(|(name, _)| {
                            Formula::atom(
                                AtomKind::EqD,
                                CompOp::Ne,
                                Term::Attr(side, *attr),
                                Term::DConst((*name).clone()),
                            )
                        }),
                ),
            }))
        };
        let mut disjuncts = Vec::new();
        for (pl, vl) in &patterns {
            for (pr, vr) in &patterns {
                let keep = if strict { vl > vr } else { vl == vr };
                if keep {
                    disjuncts.push(Formula::and(
                        side_formula(TupleVar::L, pl),
                        side_formula(TupleVar::R, pr),
                    ));
                }
            }
        }
        Ok(Formula::or_all(disjuncts))
    }
}

/// `u'(x) = a·u(x) + b·u0(x) + c` with `a, b > 0`: represents the union of
/// the two weak orders whenever they are compatible and represented by `u`
/// and `u0`.
pub fn combine_utilities(u: &UtilityExpr, u0: &UtilityExpr, a: &Rat, b: &Rat, c: &Rat) -> Result<UtilityExpr> {
    u.schema.check_same(&u0.schema)?;
    if !crate::rational::is_positive(a) {
        return Err(Error::NonPositiveCoefficient(render_rat(a)));
    }
    if !crate::rational::is_positive(b) {
        return Err(Error::NonPositiveCoefficient(render_rat(b)));
    }
    let mut terms: Vec<(Rat, UtilityBasis)> = Vec::new();
    for (coeff, basis) in &u.terms {
        terms.push((a * coeff, basis.clone()));
    }
    for (coeff, basis) in &u0.terms {
        terms.push((b * coeff, basis.clone()));
    }
    let constant = a * &u.constant + b * &u0.constant + c;
    UtilityExpr::new(u.schema.clone(), terms, constant)
}

/// `u` represents `p` on the finite instance `r`: for every ordered pair,
/// `t1 ≻ t2` exactly when `u(t1) > u(t2)`.
pub fn represents(u: &UtilityExpr, p: &PrefRelation, r: &RelationInstance) -> Result<bool> {
    u.schema.check_same(p.schema())?;
    p.schema().check_same(r.schema())?;
    let values: Vec<Rat> = r.tuples().iter().map(|t| u.eval(t)).collect();
    for (i, t1) in r.tuples().iter().enumerate() {
        for (j, t2) in r.tuples().iter().enumerate() {
            if p.eval_unchecked(t1, t2) != (values[i] > values[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The hidden-attributes scenario: refine the weak order represented by `u`
/// with the tie-break `u(x) = u(y) ∧ u0(x) > u0(y)`. The result
/// `u(L) > u(R) ∨ (u(L) = u(R) ∧ u0(L) > u0(R))` is the least SPO
/// refinement.
pub fn refine_utility_scenario(u: &UtilityExpr, u0: &UtilityExpr) -> Result<PrefRelation> {
    u.schema.check_same(&u0.schema)?;
    let base = u.cmp_formula(true)?;
    let tie = Formula::and(u.cmp_formula(false)?, u0.cmp_formula(true)?);
    PrefRelation::new(u.schema.clone(), Formula::or(base, tie))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::OrderKind;
    use crate::parse::parse_formula;
    use crate::rational::{rat_int, rat_frac};
    use crate::schema::Value;
    use crate::solver::{entails, equivalent};

    fn car() -> Schema {
        Schema::new("Car", vec![("make", AttrDomain::D), ("year", AttrDomain::Q)]).unwrap()
    }

    fn el() -> Schema {
        Schema::new("El", vec![("v", AttrDomain::D)]).unwrap()
    }

    fn pref(text: &str) -> PrefRelation {
        parse_formula(text, &car()).unwrap()
    }

    fn elpref(text: &str) -> PrefRelation {
        parse_formula(text, &el()).unwrap()
    }

    /// Encodes a finite relation over one-attribute D tuples as a formula.
    fn finite(pairs: &[(&str, &str)]) -> PrefRelation {
        let f = Formula::or_all(pairs.iter().map(|(a, b)| {
            Formula::and(
                Formula::atom(AtomKind::EqD, CompOp::Eq, Term::Attr(TupleVar::L, 0), Term::DConst((*a).into())),
                Formula::atom(AtomKind::EqD, CompOp::Eq, Term::Attr(TupleVar::R, 0), Term::DConst((*b).into())),
            )
        }));
        PrefRelation::new(el(), f).unwrap()
    }

    fn el_universe(names: &[&str]) -> RelationInstance {
        RelationInstance::new(
            el(),
            names
                .iter()
                .map(|s| TupleValue::new(&el(), vec![Value::D((*s).into())]).unwrap())
                .collect(),
        )
        .unwrap()
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

    #[test]
    fn conflicts_examples() {
        // ≻0 = {(a,b)}, ≻ = {(b,a)} conflict on (a,b).
        let p = finite(&[("b", "a")]);
        let p0 = finite(&[("a", "b")]);
        let c = conflicts(&p, &p0).unwrap();
        assert!(satisfiable(&c));
        assert!(!is_compatible(&p, &p0).unwrap());
        // C1 and C2 are compatible.
        assert!(is_compatible(&c1(), &c2()).unwrap());
        // Anything is compatible with the empty relation.
        assert!(is_compatible(&c1(), &PrefRelation::empty(car())).unwrap());
    }

    #[test]
    fn compatibility_does_not_need_acyclicity_or_containment() {
        let p = finite(&[("a", "b"), ("c", "d")]);
        let p0 = finite(&[("b", "c"), ("d", "a")]);
        assert!(is_compatible(&p, &p0).unwrap());
        let p = finite(&[("a", "b"), ("b", "c"), ("a", "c")]);
        let p0 = finite(&[("a", "b"), ("a", "d")]);
        assert!(is_compatible(&p, &p0).unwrap());
    }

    #[test]
    fn semi_compatibility_example_sequence() {
        let p0 = finite(&[("a", "b")]);
        // Plain conflict, not hidden.
        assert!(is_semi_compatible(&finite(&[("b", "a")]), &p0).unwrap());
        // Adding (b,c),(c,a) hides it behind the chain b ≻ c ≻ a.
        let p = finite(&[("b", "a"), ("b", "c"), ("c", "a")]);
        assert!(!is_semi_compatible(&p, &p0).unwrap());
        // Adding (c,b) to ≻0 unhides it.
        assert!(is_semi_compatible(&p, &finite(&[("a", "b"), ("c", "b")])).unwrap());
        // So does adding (a,c).
        assert!(is_semi_compatible(&p, &finite(&[("a", "b"), ("a", "c")])).unwrap());
        // The empty revising relation has no conflicts at all.
        assert!(is_semi_compatible(&p, &PrefRelation::empty(el())).unwrap());
    }

    #[test]
    fn compat_report_carries_witness() {
        let p = finite(&[("b", "a")]);
        let p0 = finite(&[("a", "b")]);
        let report = compat_report(&p, &p0).unwrap();
        assert!(!report.compatible);
        let (t1, t2) = report.sample_conflict.expect("conflict witness");
        assert!(p0.eval_ground(&t1, &t2).unwrap());
        assert!(p.eval_ground(&t2, &t1).unwrap());
        // For SPO inputs compatibility implies semi-compatibility.
        let report = compat_report(&c1(), &c2()).unwrap();
        assert!(report.compatible && report.semi_compatible);
        assert!(report.sample_conflict.is_none());
    }

    #[test]
    fn refine_example_three_takes_scp_fast_path() {
        let report = refine(&c1(), &c3(), &ScpHints::assert_revising()).unwrap();
        assert_eq!(report.fast_path, FastPath::SpoUnionScp);
        assert!(equivalent(report.result.formula(), c4().formula()));
        assert_eq!(report.result_class.derived, OrderKind::Spo);
        assert!(report.least);
    }

    #[test]
    fn refine_examples_one_two_take_generic_path() {
        let report = refine(&c1(), &c2(), &ScpHints::default()).unwrap();
        assert_eq!(report.fast_path, FastPath::GenericTc);
        assert!(equivalent(report.result.formula(), cstar().formula()));
        assert_eq!(report.result_class.derived, OrderKind::Spo);
        assert!(report.compat.compatible);
        assert!(report.least);
    }

    #[test]
    fn refine_with_empty_is_tc() {
        let report = refine(&c1(), &PrefRelation::empty(car()), &ScpHints::default()).unwrap();
        assert!(equivalent(report.result.formula(), c1().formula()));
        // Refinement is monotonic: the union is always contained.
        assert!(entails(c1().formula(), report.result.formula()));
    }

    #[test]
    fn override_swap_example() {
        let p = finite(&[("a", "b"), ("b", "c"), ("a", "c")]);
        let p0 = finite(&[("b", "a")]);
        let universe = el_universe(&["a", "b", "c"]);
        let hints = ScpHints { base: ScpHint::Unknown, revising: ScpHint::VerifyOn(universe) };
        let report = override_with(&p, &p0, &hints).unwrap();
        assert_eq!(report.fast_path, FastPath::SpoPriorityScp);
        let expected = finite(&[("b", "a"), ("b", "c"), ("a", "c")]);
        // Equal on the three-element universe.
        for x in ["a", "b", "c"] {
            for y in ["a", "b", "c"] {
                let tx = TupleValue::new(&el(), vec![Value::D(x.into())]).unwrap();
                let ty = TupleValue::new(&el(), vec![Value::D(y.into())]).unwrap();
                assert_eq!(
                    report.result.eval_ground(&tx, &ty).unwrap(),
                    expected.eval_ground(&tx, &ty).unwrap(),
                    "pair ({x},{y})"
                );
            }
        }
        assert_eq!(report.result_class.derived, OrderKind::Spo);
        // Nonmonotonic: the overridden preference (a,b) is gone.
        let ta = TupleValue::new(&el(), vec![Value::D("a".into())]).unwrap();
        let tb = TupleValue::new(&el(), vec![Value::D("b".into())]).unwrap();
        assert!(!report.result.eval_ground(&ta, &tb).unwrap());
    }

    #[test]
    fn override_with_empty_revising() {
        let report = override_with(&c1(), &PrefRelation::empty(car()), &ScpHints::default()).unwrap();
        assert!(equivalent(report.result.formula(), c1().formula()));
    }

    #[test]
    fn compatible_override_equals_refine() {
        let r1 = refine(&c1(), &c2(), &ScpHints::default()).unwrap();
        let r2 = override_with(&c1(), &c2(), &ScpHints::default()).unwrap();
        assert!(equivalent(r1.result.formula(), r2.result.formula()));
    }

    #[test]
    fn weak_weak_union_fast_path() {
        let newer = pref("L.year > R.year");
        let report = refine(&newer, &newer, &ScpHints::default()).unwrap();
        assert_eq!(report.fast_path, FastPath::WeakWeakUnion);
        assert!(equivalent(report.result.formula(), newer.formula()));
        assert!(report.result_class.is_weak());
    }

    #[test]
    fn weak_override_needs_no_compatibility() {
        let newer = pref("L.year > R.year");
        let older = pref("L.year < R.year");
        // Maximal conflict, yet the prioritized composition is immediate.
        let report = override_with(&newer, &older, &ScpHints::default()).unwrap();
        assert_eq!(report.fast_path, FastPath::WeakWeakPriority);
        assert!(!report.compat.compatible);
        assert!(equivalent(report.result.formula(), older.formula()));
    }

    fn year_utility() -> UtilityExpr {
        UtilityExpr::new(car(), vec![(rat_int(1), UtilityBasis::QAttr(1))], rat_int(0)).unwrap()
    }

    fn vw_indicator(scale: i64) -> UtilityExpr {
        UtilityExpr::new(
            car(),
            vec![(rat_int(scale), UtilityBasis::Indicator(0, "VW".into()))],
            rat_int(0),
        )
        .unwrap()
    }

    #[test]
    fn combine_is_syntactic_linear_combination() {
        let u = year_utility();
        let u0 = vw_indicator(1);
        let combined = combine_utilities(&u, &u0, &rat_int(2), &rat_int(3), &rat_int(1)).unwrap();
        assert_eq!(combined.render(), "2·year + 3·[make='VW'] + 1");
        let sum = combine_utilities(&u, &u0, &rat_int(1), &rat_int(1), &rat_int(0)).unwrap();
        assert_eq!(sum.render(), "1·year + 1·[make='VW']");
        assert!(combine_utilities(&u, &u0, &rat_int(0), &rat_int(1), &rat_int(0)).is_err());
        assert!(combine_utilities(&u, &u0, &rat_int(1), &rat_frac(-1, 2), &rat_int(0)).is_err());
    }

    #[test]
    fn represents_examples() {
        let r1 = RelationInstance::new(
            car(),
            vec![
                TupleValue::new(&car(), vec![Value::D("VW".into()), Value::Q(rat_int(2002))]).unwrap(),
                TupleValue::new(&car(), vec![Value::D("VW".into()), Value::Q(rat_int(1997))]).unwrap(),
                TupleValue::new(&car(), vec![Value::D("Kia".into()), Value::Q(rat_int(1997))]).unwrap(),
            ],
        )
        .unwrap();
        let u = year_utility();
        assert!(represents(&u, &pref("L.year > R.year"), &r1).unwrap());
        // u distinguishes t1 and t3 but C1 leaves them indifferent.
        assert!(!represents(&u, &c1(), &r1).unwrap());
        let constant = UtilityExpr::constant_only(car(), rat_int(7));
        assert!(represents(&constant, &PrefRelation::empty(car()), &r1).unwrap());
    }

    #[test]
    fn utility_scenario_tie_break() {
        let u = year_utility();
        let u0 = vw_indicator(1);
        let p = refine_utility_scenario(&u, &u0).unwrap();
        let want = pref("L.year > R.year or L.year = R.year and L.make = 'VW' and R.make != 'VW'");
        assert!(equivalent(p.formula(), want.formula()));
        // Lexicographic year-then-flag: an SPO (here in fact a weak order,
        // since the indicator has only two levels).
        assert!(classify(&p).is_spo());
        // Constant tie-break leaves the base order.
        let none = UtilityExpr::constant_only(car(), rat_int(0));
        let p = refine_utility_scenario(&u, &none).unwrap();
        assert!(equivalent(p.formula(), pref("L.year > R.year").formula()));
        // Constant base: only the tie-break relation remains.
        let p = refine_utility_scenario(&none, &u0).unwrap();
        assert!(equivalent(p.formula(), pref("L.make = 'VW' and R.make != 'VW'").formula()));
    }

    #[test]
    fn inexpressible_utilities_are_rejected() {
        let two_q = Schema::new("T", vec![("a", AttrDomain::Q), ("b", AttrDomain::Q)]).unwrap();
        let u = UtilityExpr::new(
            two_q.clone(),
            vec![(rat_int(1), UtilityBasis::QAttr(0)), (rat_int(1), UtilityBasis::QAttr(1))],
            rat_int(0),
        )
        .unwrap();
        assert!(matches!(u.cmp_formula(true), Err(Error::InexpressibleUtility(_))));
        let mixed = combine_utilities(&year_utility(), &vw_indicator(3), &rat_int(1), &rat_int(1), &rat_int(0)).unwrap();
        assert!(matches!(mixed.cmp_formula(true), Err(Error::InexpressibleUtility(_))));
    }
}
