//! Decision procedures for the two constraint classes.
//!
//! Satisfiability reduces to DNF with per-conjunct canonicalization (see
//! [`crate::dnf`]); entailment `f ⊨ g` to unsatisfiability of `f ∧ ¬g`.
//! Existential elimination substitutes through equalities, drops
//! disequality-only variables (the domains are infinite), and runs
//! Fourier–Motzkin over the dense rational order otherwise.

use crate::dnf::{dnf_conjuncts_unsimplified, Conjunct};
use crate::formula::{Atom, AtomKind, CompOp, Formula, ScalarVar, Term};

/// Some assignment over the infinite domains satisfies all atoms.
pub fn sat_conjunct(c: &Conjunct) -> bool {
    c.canonicalize().is_some()
}

/// Some DNF conjunct of `f` is satisfiable.
pub fn satisfiable(f: &Formula) -> bool {
    !dnf_conjuncts_unsimplified(f).is_empty()
}

/// `f ⊨ g`: the relation defined by `f` is a subset of the one defined by
/// `g`. Decided as unsatisfiability of `f ∧ ¬g`.
pub fn entails(f: &Formula, g: &Formula) -> bool {
    !satisfiable(&Formula::and(f.clone(), Formula::not(g.clone())))
}

pub fn equivalent(f: &Formula, g: &Formula) -> bool {
    entails(f, g) && entails(g, f)
}

/// Quantifier-free formula equivalent to `∃v. c`, where `v` is a scalar
/// variable (one attribute of one tuple variable).
///
/// Equalities bind `v` directly and substitute through. A `D`-variable
/// constrained only by disequalities always has a fresh witness. A
/// `Q`-variable is eliminated by combining each lower bound with each upper
/// bound; density of the rationals means strictness is the only bookkeeping.
/// Disequalities on the eliminated `Q`-variable case-split into `<` or `>`,
/// so the result is a formula, not necessarily a single conjunct.
pub fn eliminate_exists(v: ScalarVar, c: &Conjunct) -> Formula {
    let Some(c) = c.canonicalize() else {
        return Formula::False;
    };
    let term = Term::Attr(v.0, v.1);
    if !c.atoms().iter().any(|a| a.lhs == term || a.rhs == term) {
        return c.to_formula();
    }
    // Substitute through an equality when one binds v.
    for a in c.atoms() {
        if a.op == CompOp::Eq && (a.lhs == term || a.rhs == term) {
            let other = if a.lhs == term { a.rhs.clone() } else { a.lhs.clone() };
            if other != term {
                return substitute(&c, &term, &other);
            }
        }
    }
    let (involved, rest): (Vec<&Atom>, Vec<&Atom>) =
        c.atoms().iter().partition(|a| a.lhs == term || a.rhs == term);
    let domain = involved[0].kind;
    if domain == AtomKind::EqD {
        // Only disequalities remain; the domain is infinite, so a witness
        // distinct from finitely many terms always exists.
        return Formula::and_all(rest.into_iter().cloned().map(Formula::Atom));
    }
    // Case-split a disequality on v, then recurse.
    if let Some(ne) = involved.iter().find(|a| a.op == CompOp::Ne) {
        let mut left: Vec<Atom> = c.atoms().to_vec();
        let mut right: Vec<Atom> = c.atoms().to_vec();
        let pos = c.atoms().iter().position(|a| *a == **ne).unwrap();
        left[pos] = Atom { kind: AtomKind::OrdQ, op: CompOp::Lt, lhs: ne.lhs.clone(), rhs: ne.rhs.clone() };
        right[pos] = Atom { kind: AtomKind::OrdQ, op: CompOp::Lt, lhs: ne.rhs.clone(), rhs: ne.lhs.clone() };
        return Formula::or(
            eliminate_exists(v, &Conjunct::new(left)),
            eliminate_exists(v, &Conjunct::new(right)),
        );
    }
    // Fourier–Motzkin over the dense order.
    let mut lowers: Vec<(Term, bool)> = Vec::new();
    let mut uppers: Vec<(Term, bool)> = Vec::new();
    for a in &involved {
        let strict = matches!(a.op, CompOp::Lt | CompOp::Gt);
        match a.op {
            CompOp::Lt | CompOp::Le => {
                if a.rhs == term {
                    lowers.push((a.lhs.clone(), strict));
                } else {
                    uppers.push((a.rhs.clone(), strict));
                }
            }
            CompOp::Gt | CompOp::Ge => {
                // Normalized conjuncts only carry > and >= against constants,
                // with the variable on the left.
                if a.lhs == term {
                    lowers.push((a.rhs.clone(), strict));
                } else {
                    uppers.push((a.lhs.clone(), strict));
                }
            }
            CompOp::Eq | CompOp::Ne => unreachable!("handled above"),
        }
    }
    let mut parts: Vec<Formula> = rest.into_iter().cloned().map(Formula::Atom).collect();
    for (l, ls) in &lowers {
        for (u, us) in &uppers {
            let op = if *ls || *us { CompOp::Lt } else { CompOp::Le };
            match Formula::atom(AtomKind::OrdQ, op, l.clone(), u.clone()) {
                Formula::True => {}
                Formula::False => return Formula::False,
                atom => parts.push(atom),
            }
        }
    }
    Formula::and_all(parts)
}

fn substitute(c: &Conjunct, from: &Term, to: &Term) -> Formula {
    let replace = |t: &Term| if t == from { to.clone() } else { t.clone() };
    Formula::and_all(
        c.atoms()
            .iter()
            .map(|a| Formula::atom(a.kind, a.op, replace(&a.lhs), replace(&a.rhs))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::TupleVar;
    use crate::rational::rat_int;

    const M: TupleVar = TupleVar::Aux(0);

    fn q(v: TupleVar) -> Term {
        Term::Attr(v, 1)
    }

    fn d(v: TupleVar) -> Term {
        Term::Attr(v, 0)
    }

    #[test]
    fn density_elimination() {
        // ∃x (L.y > x and x > R.y)  →  L.y > R.y
        let c = Conjunct::new(vec![
            Atom { kind: AtomKind::OrdQ, op: CompOp::Gt, lhs: q(TupleVar::L), rhs: q(M) },
            Atom { kind: AtomKind::OrdQ, op: CompOp::Gt, lhs: q(M), rhs: q(TupleVar::R) },
        ]);
        let out = eliminate_exists((M, 1), &c);
        let want = Formula::atom(AtomKind::OrdQ, CompOp::Gt, q(TupleVar::L), q(TupleVar::R));
        assert!(equivalent(&out, &want));
    }

    #[test]
    fn equality_chaining() {
        // ∃x (L.m = x and x = R.m)  →  L.m = R.m
        let c = Conjunct::new(vec![
            Atom { kind: AtomKind::EqD, op: CompOp::Eq, lhs: d(TupleVar::L), rhs: d(M) },
            Atom { kind: AtomKind::EqD, op: CompOp::Eq, lhs: d(M), rhs: d(TupleVar::R) },
        ]);
        let out = eliminate_exists((M, 0), &c);
        let want = Formula::atom(AtomKind::EqD, CompOp::Eq, d(TupleVar::L), d(TupleVar::R));
        assert!(equivalent(&out, &want));
    }

    #[test]
    fn disequality_only_variable_vanishes() {
        // ∃x (x != L.m)  →  true
        let c = Conjunct::new(vec![Atom {
            kind: AtomKind::EqD,
            op: CompOp::Ne,
            lhs: d(M),
            rhs: d(TupleVar::L),
        }]);
        assert_eq!(eliminate_exists((M, 0), &c), Formula::True);
    }

    #[test]
    fn ne_case_split_respects_window() {
        // ∃x (1 < x and x < 2 and x != L.y) is just true: density leaves room
        // on one side of L.y whatever its value... but only when the window
        // is nonempty, which it is here.
        let c = Conjunct::new(vec![
            Atom { kind: AtomKind::OrdQ, op: CompOp::Gt, lhs: q(M), rhs: Term::QConst(rat_int(1)) },
            Atom { kind: AtomKind::OrdQ, op: CompOp::Lt, lhs: q(M), rhs: Term::QConst(rat_int(2)) },
            Atom { kind: AtomKind::OrdQ, op: CompOp::Ne, lhs: q(M), rhs: q(TupleVar::L) },
        ]);
        let out = eliminate_exists((M, 1), &c);
        assert!(equivalent(&out, &Formula::True));
    }

    #[test]
    fn entails_is_reflexive() {
        let f = Formula::atom(AtomKind::OrdQ, CompOp::Gt, q(TupleVar::L), q(TupleVar::R));
        assert!(entails(&f, &f));
    }

    #[test]
    fn true_not_equivalent_false() {
        assert!(!equivalent(&Formula::True, &Formula::False));
        assert!(satisfiable(&Formula::True));
        assert!(!satisfiable(&Formula::False));
    }

    #[test]
    fn disjunction_of_point_values_sat() {
        // (x = 1 or x = 2)
        let f = Formula::or(
            Formula::atom(AtomKind::OrdQ, CompOp::Eq, q(TupleVar::L), Term::QConst(rat_int(1))),
            Formula::atom(AtomKind::OrdQ, CompOp::Eq, q(TupleVar::L), Term::QConst(rat_int(2))),
        );
        assert!(satisfiable(&f));
    }
}
