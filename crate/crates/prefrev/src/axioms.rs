//! Order-axiom checking and classification of symbolic preference relations.
//!
//! Each axiom is decided by instantiating the binary formula at fresh tuple
//! variables and reducing to unsatisfiability, the same move as checking
//! irreflexivity of a closed formula by testing `C(t,t)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::exec;
use crate::formula::{AtomKind, CompOp, Formula, PrefRelation, Term, TupleVar};
use crate::schema::AttrDomain;
use crate::solver::satisfiable;
use crate::winnow::RelationInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    None,
    Spo,
    Weak,
    Total,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderKind::None => write!(f, "NONE"),
            OrderKind::Spo => write!(f, "SPO"),
            OrderKind::Weak => write!(f, "WEAK"),
            OrderKind::Total => write!(f, "TOTAL"),
        }
    }
}

/// The four tested axioms and the class they derive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderClass {
    pub irreflexive: bool,
    pub transitive: bool,
    pub negatively_transitive: bool,
    pub connected: bool,
    pub derived: OrderKind,
}

impl OrderClass {
    pub fn from_flags(irreflexive: bool, transitive: bool, negatively_transitive: bool, connected: bool) -> OrderClass {
        let spo = irreflexive && transitive;
        let derived = if spo && connected {
            OrderKind::Total
        } else if spo && negatively_transitive {
            OrderKind::Weak
        } else if spo {
            OrderKind::Spo
        } else {
            OrderKind::None
        };
        OrderClass { irreflexive, transitive, negatively_transitive, connected, derived }
    }

    pub fn is_spo(&self) -> bool {
        self.irreflexive && self.transitive
    }

    pub fn is_weak(&self) -> bool {
        matches!(self.derived, OrderKind::Weak | OrderKind::Total)
    }
}

impl fmt::Display for OrderClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "\u{2713}" } else { "\u{2717}" };
        let label = match self.derived {
            OrderKind::Total => "TOTAL".to_string(),
            OrderKind::Weak => "WEAK (not total)".to_string(),
            OrderKind::Spo => "SPO (not weak)".to_string(),
            OrderKind::None => "NONE".to_string(),
        };
        write!(
            f,
            "{label}: irreflexive {} transitive {} neg-transitive {} connected {}",
            mark(self.irreflexive),
            mark(self.transitive),
            mark(self.negatively_transitive),
            mark(self.connected)
        )
    }
}

fn instantiate(p: &PrefRelation, x: TupleVar, y: TupleVar) -> Formula {
    p.formula().rename_vars(&[(TupleVar::L, x), (TupleVar::R, y)])
}

const X: TupleVar = TupleVar::Aux(1);
const Y: TupleVar = TupleVar::Aux(2);
const Z: TupleVar = TupleVar::Aux(3);

/// `∀x. ¬(x ≻ x)`: the diagonal substitution is unsatisfiable.
pub fn is_irreflexive(p: &PrefRelation) -> bool {
    !satisfiable(&p.formula().rename_vars(&[(TupleVar::R, TupleVar::L)]))
}

/// `∀x,y,z. (x ≻ y ∧ y ≻ z) ⇒ x ≻ z`.
pub fn is_transitive(p: &PrefRelation) -> bool {
    let counterexample = Formula::and_all([
        instantiate(p, X, Y),
        instantiate(p, Y, Z),
        Formula::not(instantiate(p, X, Z)),
    ]);
    !satisfiable(&counterexample)
}

/// `∀x,y,z. (x ⊁ y ∧ y ⊁ z) ⇒ x ⊁ z`.
pub fn is_negatively_transitive(p: &PrefRelation) -> bool {
    let counterexample = Formula::and_all([
        instantiate(p, X, Z),
        Formula::not(instantiate(p, X, Y)),
        Formula::not(instantiate(p, Y, Z)),
    ]);
    !satisfiable(&counterexample)
}

/// `∀x,y. x ≻ y ∨ y ≻ x ∨ x = y`. Tuple disequality is the disjunction of
/// attribute disequalities.
pub fn is_connected(p: &PrefRelation) -> bool {
    let schema = p.schema();
    let differ = Formula::or_all((0..schema.arity()).map(|i| {
        let kind = match schema.attr_domain(i) {
            AttrDomain::D => AtomKind::EqD,
            AttrDomain::Q => AtomKind::OrdQ,
        };
        Formula::atom(kind, CompOp::Ne, Term::Attr(X, i), Term::Attr(Y, i))
    }));
    let counterexample = Formula::and_all([
        differ,
        Formula::not(instantiate(p, X, Y)),
        Formula::not(instantiate(p, Y, X)),
    ]);
    !satisfiable(&counterexample)
}

/// Runs the four axiom checks and derives the order class.
pub fn classify(p: &PrefRelation) -> OrderClass {
    let (irr, tr, neg, conn) = exec::join4(
        || is_irreflexive(p),
        || is_transitive(p),
        || is_negatively_transitive(p),
        || is_connected(p),
    );
    OrderClass::from_flags(irr, tr, neg, conn)
}

/// Decides the single-chain property of `p` materialized on a finite
/// universe: at most one maximal chain with at least two elements.
///
/// Errors unless `p` is an SPO on the universe. This is a finite check only;
/// fast paths that need SCP symbolically take it as a caller assertion.
pub fn has_scp_finite(p: &PrefRelation, universe: &RelationInstance) -> Result<bool> {
    p.schema().check_same(universe.schema())?;
    let tuples = universe.tuples();
    let n = tuples.len();
    let mut edge = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            if p.eval_unchecked(&tuples[i], &tuples[j]) {
                edge[i * n + j] = true;
            }
        }
    }
    // SPO on the finite graph: irreflexive and transitive.
    for i in 0..n {
        if edge[i * n + i] {
            return Err(Error::NotSpoOnUniverse);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !edge[i * n + j] {
                continue;
            }
            for k in 0..n {
                if edge[j * n + k] && !edge[i * n + k] {
                    return Err(Error::NotSpoOnUniverse);
                }
            }
        }
    }
    // Cover edges: i ≻ j with nothing strictly between.
    let mut cover = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            if edge[i * n + j] && !(0..n).any(|k| edge[i * n + k] && edge[k * n + j]) {
                cover[i * n + j] = true;
            }
        }
    }
    // Maximal chains with >= 2 elements are cover paths from a top element
    // (no incoming edge) to a bottom element (no outgoing edge) with at
    // least one step. Count them, stopping at two.
    let mut count = 0usize;
    fn dfs(node: usize, n: usize, cover: &[bool], count: &mut usize) {
        if *count >= 2 {
            return;
        }
        let mut extended = false;
        for next in 0..n {
            if cover[node * n + next] {
                extended = true;
                dfs(next, n, cover, count);
                if *count >= 2 {
                    return;
                }
            }
        }
        if !extended {
            *count += 1;
        }
    }
    for top in 0..n {
        if (0..n).any(|i| edge[i * n + top]) {
            continue;
        }
        for next in 0..n {
            if cover[top * n + next] {
                dfs(next, n, &cover, &mut count);
                if count >= 2 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(count <= 1)
}
