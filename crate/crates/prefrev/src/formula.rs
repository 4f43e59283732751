//! Constraint formulas over tuple variables.
//!
//! A formula is a boolean combination of atoms of two kinds: equality
//! constraints between `D`-terms and order constraints between `Q`-terms.
//! Preference relations are formulas whose free tuple variables are exactly
//! `L` (the preferred tuple) and `R`; auxiliary variables appear transiently
//! inside axiom checks and quantifier elimination.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{render_rat, Rat};
use crate::schema::{AttrDomain, Schema, TupleValue, Value};

/// A tuple-level variable. `L` and `R` are the two sides of a preference
/// formula; `Aux` variables are introduced by composition and axiom checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TupleVar {
    L,
    R,
    Aux(u8),
}

impl fmt::Display for TupleVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TupleVar::L => write!(f, "L"),
            TupleVar::R => write!(f, "R"),
            TupleVar::Aux(i) => write!(f, "_v{i}"),
        }
    }
}

/// A scalar variable: one attribute of one tuple variable.
pub type ScalarVar = (TupleVar, usize);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// Attribute reference, by index into the ambient schema.
    Attr(TupleVar, usize),
    DConst(String),
    QConst(Rat),
}

impl Term {
    pub fn is_const(&self) -> bool {
        !matches!(self, Term::Attr(..))
    }

    pub fn scalar_var(&self) -> Option<ScalarVar> {
        match self {
            Term::Attr(v, a) => Some((*v, *a)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKind {
    /// Equality constraint over uninterpreted constants.
    EqD,
    /// Rational-order constraint.
    OrdQ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CompOp {
    /// The operator satisfied exactly when `self` is not.
    pub fn complement(self) -> CompOp {
        match self {
            CompOp::Eq => CompOp::Ne,
            CompOp::Ne => CompOp::Eq,
            CompOp::Lt => CompOp::Ge,
            CompOp::Le => CompOp::Gt,
            CompOp::Gt => CompOp::Le,
            CompOp::Ge => CompOp::Lt,
        }
    }

    /// The operator with swapped operands: `a op b` iff `b op.mirror() a`.
    pub fn mirror(self) -> CompOp {
        match self {
            CompOp::Eq => CompOp::Eq,
            CompOp::Ne => CompOp::Ne,
            CompOp::Lt => CompOp::Gt,
            CompOp::Le => CompOp::Ge,
            CompOp::Gt => CompOp::Lt,
            CompOp::Ge => CompOp::Le,
        }
    }

    pub fn eval<T: Ord>(self, a: &T, b: &T) -> bool {
        match self {
            CompOp::Eq => a == b,
            CompOp::Ne => a != b,
            CompOp::Lt => a < b,
            CompOp::Le => a <= b,
            CompOp::Gt => a > b,
            CompOp::Ge => a >= b,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CompOp::Eq => "=",
            CompOp::Ne => "!=",
            CompOp::Lt => "<",
            CompOp::Le => "<=",
            CompOp::Gt => ">",
            CompOp::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub kind: AtomKind,
    pub op: CompOp,
    pub lhs: Term,
    pub rhs: Term,
}

impl Atom {
    pub fn complement(&self) -> Atom {
        Atom {
            kind: self.kind,
            op: self.op.complement(),
            lhs: self.lhs.clone(),
            rhs: self.rhs.clone(),
        }
    }

    pub fn scalar_vars(&self) -> impl Iterator<Item = ScalarVar> + '_ {
        self.lhs.scalar_var().into_iter().chain(self.rhs.scalar_var())
    }

    fn eval_with(&self, resolve: &impl Fn(TupleVar, usize) -> Value) -> bool {
        let lhs = resolve_term(&self.lhs, resolve);
        let rhs = resolve_term(&self.rhs, resolve);
        match (lhs, rhs) {
            (Value::D(a), Value::D(b)) => self.op.eval(&a, &b),
            (Value::Q(a), Value::Q(b)) => self.op.eval(&a, &b),
            _ => false,
        }
    }
}

fn resolve_term(term: &Term, resolve: &impl Fn(TupleVar, usize) -> Value) -> Value {
    match term {
        Term::Attr(v, a) => resolve(*v, *a),
        Term::DConst(s) => Value::D(s.clone()),
        Term::QConst(q) => Value::Q(q.clone()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        match (a, b) {
            (Formula::False, _) | (_, Formula::False) => Formula::False,
            (Formula::True, f) | (f, Formula::True) => f,
            (a, b) => Formula::And(Box::new(a), Box::new(b)),
        }
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        match (a, b) {
            (Formula::True, _) | (_, Formula::True) => Formula::True,
            (Formula::False, f) | (f, Formula::False) => f,
            (a, b) => Formula::Or(Box::new(a), Box::new(b)),
        }
    }

    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            f => Formula::Not(Box::new(f)),
        }
    }

    pub fn and_all(fs: impl IntoIterator<Item = Formula>) -> Formula {
        fs.into_iter().fold(Formula::True, Formula::and)
    }

    pub fn or_all(fs: impl IntoIterator<Item = Formula>) -> Formula {
        fs.into_iter().fold(Formula::False, Formula::or)
    }

    /// Builds an atom, folding the trivial cases: comparisons between two
    /// constants and comparisons of a term with itself evaluate immediately.
    pub fn atom(kind: AtomKind, op: CompOp, lhs: Term, rhs: Term) -> Formula {
        match (&lhs, &rhs) {
            (Term::DConst(a), Term::DConst(b)) => return Formula::from_bool(op.eval(a, b)),
            (Term::QConst(a), Term::QConst(b)) => return Formula::from_bool(op.eval(a, b)),
            _ => {}
        }
        if lhs == rhs {
            return Formula::from_bool(matches!(op, CompOp::Eq | CompOp::Le | CompOp::Ge));
        }
        Formula::Atom(Atom { kind, op, lhs, rhs })
    }

    pub fn from_bool(b: bool) -> Formula {
        if b {
            Formula::True
        } else {
            Formula::False
        }
    }

    /// Free tuple variables of the formula.
    pub fn vars(&self) -> BTreeSet<TupleVar> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| {
            for (v, _) in a.scalar_vars() {
                out.insert(v);
            }
        });
        out
    }

    pub fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => f(a),
            Formula::Not(g) => g.visit_atoms(f),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
        }
    }

    /// Simultaneously renames tuple variables. Atoms that collapse onto a
    /// single term fold away, so substituting `R := L` into `L.y > R.y`
    /// yields `false`.
    pub fn rename_vars(&self, map: &[(TupleVar, TupleVar)]) -> Formula {
        let rename = |v: TupleVar| map.iter().find(|(from, _)| *from == v).map_or(v, |(_, to)| *to);
        let rename_term = |t: &Term| match t {
            Term::Attr(v, a) => Term::Attr(rename(*v), *a),
            other => other.clone(),
        };
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => Formula::atom(a.kind, a.op, rename_term(&a.lhs), rename_term(&a.rhs)),
            Formula::Not(g) => Formula::not(g.rename_vars(map)),
            Formula::And(a, b) => Formula::and(a.rename_vars(map), b.rename_vars(map)),
            Formula::Or(a, b) => Formula::or(a.rename_vars(map), b.rename_vars(map)),
        }
    }

    fn eval_with(&self, resolve: &impl Fn(TupleVar, usize) -> Value) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => a.eval_with(resolve),
            Formula::Not(g) => !g.eval_with(resolve),
            Formula::And(a, b) => a.eval_with(resolve) && b.eval_with(resolve),
            Formula::Or(a, b) => a.eval_with(resolve) || b.eval_with(resolve),
        }
    }

    /// Renders the formula in the concrete grammar, resolving attribute
    /// indices against `schema`.
    pub fn render(&self, schema: &Schema) -> String {
        let mut out = String::new();
        self.render_prec(schema, 0, &mut out);
        out
    }

    fn render_prec(&self, schema: &Schema, parent: u8, out: &mut String) {
        let prec = match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Not(..) => 3,
            _ => 4,
        };
        let parens = prec < parent;
        if parens {
            out.push('(');
        }
        match self {
            Formula::True => out.push_str("true"),
            Formula::False => out.push_str("false"),
            Formula::Atom(a) => {
                render_term(&a.lhs, schema, out);
                out.push(' ');
                out.push_str(a.op.as_str());
                out.push(' ');
                render_term(&a.rhs, schema, out);
            }
            Formula::Not(g) => {
                out.push_str("not ");
                g.render_prec(schema, 3, out);
            }
            Formula::And(a, b) => {
                a.render_prec(schema, 2, out);
                out.push_str(" and ");
                b.render_prec(schema, 2, out);
            }
            Formula::Or(a, b) => {
                a.render_prec(schema, 1, out);
                out.push_str(" or ");
                b.render_prec(schema, 1, out);
            }
        }
        if parens {
            out.push(')');
        }
    }
}

fn render_term(term: &Term, schema: &Schema, out: &mut String) {
    match term {
        Term::Attr(v, a) => {
            out.push_str(&v.to_string());
            out.push('.');
            out.push_str(schema.attr_name(*a));
        }
        Term::DConst(s) => {
            out.push('\'');
            out.push_str(s);
            out.push('\'');
        }
        Term::QConst(q) => out.push_str(&render_rat(q)),
    }
}

/// A preference relation: a schema together with a constraint formula whose
/// free variables are exactly among `{L, R}`. `L ≻ R` holds on a ground pair
/// when the formula does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefRelation {
    schema: Schema,
    formula: Formula,
}

impl PrefRelation {
    pub fn new(schema: Schema, formula: Formula) -> Result<PrefRelation> {
        for v in formula.vars() {
            if !matches!(v, TupleVar::L | TupleVar::R) {
                return Err(Error::InvalidSchema(format!(
                    "preference formula refers to variable `{v}`; only L and R are allowed"
                )));
            }
        }
        let mut bad = None;
        formula.visit_atoms(&mut |a| {
            if bad.is_some() {
                return;
            }
            for (_, idx) in a.scalar_vars() {
                if idx >= schema.arity() {
                    bad = Some(format!("attribute index {idx} out of range"));
                    return;
                }
                let dom = schema.attr_domain(idx);
                let want = match a.kind {
                    AtomKind::EqD => AttrDomain::D,
                    AtomKind::OrdQ => AttrDomain::Q,
                };
                if dom != want {
                    bad = Some(format!(
                        "attribute `{}` has domain {dom} but the atom expects {want}",
                        schema.attr_name(idx)
                    ));
                }
            }
        });
        if let Some(msg) = bad {
            return Err(Error::InvalidSchema(msg));
        }
        Ok(PrefRelation { schema, formula })
    }

    /// The empty preference relation (no tuple preferred to any other).
    pub fn empty(schema: Schema) -> PrefRelation {
        PrefRelation { schema, formula: Formula::False }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    /// `t1 ≻ t2`?
    pub fn eval_ground(&self, t1: &TupleValue, t2: &TupleValue) -> Result<bool> {
        TupleValue::new(&self.schema, t1.values().to_vec())?;
        TupleValue::new(&self.schema, t2.values().to_vec())?;
        Ok(self.formula.eval_with(&|v, a| match v {
            TupleVar::L => t1.value(a).clone(),
            TupleVar::R => t2.value(a).clone(),
            TupleVar::Aux(_) => unreachable!("preference formulas are binary"),
        }))
    }

    /// As `eval_ground` but without re-validating the tuples; used on hot
    /// paths where tuples come from a checked instance.
    pub(crate) fn eval_unchecked(&self, t1: &TupleValue, t2: &TupleValue) -> bool {
        self.formula.eval_with(&|v, a| match v {
            TupleVar::L => t1.value(a).clone(),
            TupleVar::R => t2.value(a).clone(),
            TupleVar::Aux(_) => unreachable!("preference formulas are binary"),
        })
    }

    pub fn render(&self) -> String {
        self.formula.render(&self.schema)
    }
}

impl fmt::Display for PrefRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn car() -> Schema {
        Schema::new("Car", vec![("make", AttrDomain::D), ("year", AttrDomain::Q)]).unwrap()
    }

    fn tup(schema: &Schema, make: &str, year: i64) -> TupleValue {
        TupleValue::new(schema, vec![Value::D(make.into()), Value::Q(rat_int(year))]).unwrap()
    }

    #[test]
    fn atom_folding() {
        let t = Formula::atom(
            AtomKind::OrdQ,
            CompOp::Lt,
            Term::QConst(rat_int(1)),
            Term::QConst(rat_int(2)),
        );
        assert_eq!(t, Formula::True);
        let same = Formula::atom(
            AtomKind::OrdQ,
            CompOp::Gt,
            Term::Attr(TupleVar::L, 1),
            Term::Attr(TupleVar::L, 1),
        );
        assert_eq!(same, Formula::False);
    }

    #[test]
    fn rename_folds_reflexive_atoms() {
        let gt = Formula::atom(
            AtomKind::OrdQ,
            CompOp::Gt,
            Term::Attr(TupleVar::L, 1),
            Term::Attr(TupleVar::R, 1),
        );
        let diag = gt.rename_vars(&[(TupleVar::R, TupleVar::L)]);
        assert_eq!(diag, Formula::False);
    }

    #[test]
    fn eval_ground_matches_semantics() {
        let schema = car();
        let same_make_newer = Formula::and(
            Formula::atom(
                AtomKind::EqD,
                CompOp::Eq,
                Term::Attr(TupleVar::L, 0),
                Term::Attr(TupleVar::R, 0),
            ),
            Formula::atom(
                AtomKind::OrdQ,
                CompOp::Gt,
                Term::Attr(TupleVar::L, 1),
                Term::Attr(TupleVar::R, 1),
            ),
        );
        let p = PrefRelation::new(schema.clone(), same_make_newer).unwrap();
        let t1 = tup(&schema, "VW", 2002);
        let t2 = tup(&schema, "VW", 1997);
        let t3 = tup(&schema, "Kia", 1997);
        assert!(p.eval_ground(&t1, &t2).unwrap());
        assert!(!p.eval_ground(&t1, &t3).unwrap());
        assert!(!p.eval_ground(&t1, &t1).unwrap());
    }

    #[test]
    fn rejects_aux_vars() {
        let schema = car();
        let f = Formula::atom(
            AtomKind::OrdQ,
            CompOp::Lt,
            Term::Attr(TupleVar::Aux(0), 1),
            Term::Attr(TupleVar::R, 1),
        );
        assert!(PrefRelation::new(schema, f).is_err());
    }
}
