//! Conjuncts, canonicalization, and disjunctive normal form.
//!
//! A [`Conjunct`] is an implicit conjunction of atoms. [`Conjunct::canonicalize`]
//! is the decision procedure for a single conjunct: it runs union-find over
//! the equality fragment and a strictness-tracking bound graph over the
//! rational-order fragment, returning `None` exactly when the conjunct is
//! unsatisfiable over the infinite domains. The canonical form rewrites
//! every scalar variable to its class representative, drops implied atoms,
//! and sorts, so equivalent conjuncts frequently become identical and can be
//! deduplicated cheaply.
//!
//! DNF construction folds negated subformulas into the positive part one
//! conjunct at a time, pruning unsatisfiable branches eagerly. This keeps
//! the usual `¬f` blowup in check for the formulas this crate manipulates
//! (unions of pinned conjuncts, prioritized compositions, axiom-check
//! instantiations).

use std::collections::BTreeMap;

use crate::formula::{Atom, AtomKind, CompOp, Formula, Term};

/// A conjunction of atoms, kept in a normalized orientation: constants on
/// the right-hand side, `>`/`>=` between two variables flipped to `<`/`<=`,
/// symmetric operators with sorted operands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Conjunct {
    atoms: Vec<Atom>,
}

fn normalize_atom(a: &Atom) -> Atom {
    let mut atom = a.clone();
    let flip = |atom: &Atom| Atom {
        kind: atom.kind,
        op: atom.op.mirror(),
        lhs: atom.rhs.clone(),
        rhs: atom.lhs.clone(),
    };
    if atom.lhs.is_const() && !atom.rhs.is_const() {
        atom = flip(&atom);
    }
    if !atom.lhs.is_const() && !atom.rhs.is_const() {
        match atom.op {
            CompOp::Gt | CompOp::Ge => atom = flip(&atom),
            CompOp::Eq | CompOp::Ne if atom.lhs > atom.rhs => atom = flip(&atom),
            _ => {}
        }
    }
    atom
}

/// Evaluates atoms whose truth does not depend on any variable.
fn trivial_eval(a: &Atom) -> Option<bool> {
    match (&a.lhs, &a.rhs) {
        (Term::DConst(x), Term::DConst(y)) => Some(a.op.eval(x, y)),
        (Term::QConst(x), Term::QConst(y)) => Some(a.op.eval(x, y)),
        _ if a.lhs == a.rhs => Some(matches!(a.op, CompOp::Eq | CompOp::Le | CompOp::Ge)),
        _ => None,
    }
}

impl Conjunct {
    pub fn new(atoms: Vec<Atom>) -> Conjunct {
        let mut atoms: Vec<Atom> = atoms.iter().map(normalize_atom).collect();
        atoms.sort();
        atoms.dedup();
        Conjunct { atoms }
    }

    pub fn empty() -> Conjunct {
        Conjunct { atoms: Vec::new() }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn to_formula(&self) -> Formula {
        Formula::and_all(self.atoms.iter().cloned().map(Formula::Atom))
    }

    /// Conjoins one more atom and canonicalizes; `None` when unsatisfiable.
    pub fn with_atom(&self, atom: Atom) -> Option<Conjunct> {
        let mut atoms = self.atoms.clone();
        atoms.push(normalize_atom(&atom));
        Conjunct { atoms }.canonicalize()
    }

    /// Conjunction of two conjuncts; `None` when unsatisfiable.
    pub fn merge(&self, other: &Conjunct) -> Option<Conjunct> {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Conjunct { atoms }.canonicalize()
    }

    /// Decision procedure for one conjunct. Returns the canonical equivalent
    /// conjunct, or `None` when no assignment over the infinite domains
    /// satisfies all atoms.
    pub fn canonicalize(&self) -> Option<Conjunct> {
        let mut d_atoms: Vec<Atom> = Vec::new();
        let mut q_atoms: Vec<Atom> = Vec::new();
        for raw in &self.atoms {
            let a = normalize_atom(raw);
            match trivial_eval(&a) {
                Some(true) => continue,
                Some(false) => return None,
                None => {}
            }
            match a.kind {
                AtomKind::EqD => d_atoms.push(a),
                AtomKind::OrdQ => q_atoms.push(a),
            }
        }
        let mut out: Vec<Atom> = Vec::new();
        canonicalize_d(&d_atoms, &mut out)?;
        canonicalize_q(&q_atoms, &mut out)?;
        let mut atoms: Vec<Atom> = out.iter().map(normalize_atom).collect();
        atoms.sort();
        atoms.dedup();
        Some(Conjunct { atoms })
    }

    /// `self ⊨ other`: every model of `self` satisfies `other`.
    pub fn entails(&self, other: &Conjunct) -> bool {
        other.atoms.iter().all(|a| self.with_atom(a.complement()).is_none())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn intern(nodes: &mut Vec<Term>, index: &mut BTreeMap<Term, usize>, t: &Term) -> usize {
    if let Some(&i) = index.get(t) {
        return i;
    }
    let i = nodes.len();
    nodes.push(t.clone());
    index.insert(t.clone(), i);
    i
}

/// Equality fragment: union-find with constant pinning.
fn canonicalize_d(atoms: &[Atom], out: &mut Vec<Atom>) -> Option<()> {
    if atoms.is_empty() {
        return Some(());
    }
    let mut nodes: Vec<Term> = Vec::new();
    let mut index: BTreeMap<Term, usize> = BTreeMap::new();
    let mut pairs: Vec<(usize, usize, CompOp)> = Vec::new();
    for a in atoms {
        let l = intern(&mut nodes, &mut index, &a.lhs);
        let r = intern(&mut nodes, &mut index, &a.rhs);
        pairs.push((l, r, a.op));
    }
    let mut uf = UnionFind::new(nodes.len());
    for &(l, r, op) in &pairs {
        if op == CompOp::Eq {
            uf.union(l, r);
        }
    }
    // One constant per class at most; two distinct constants are two distinct
    // interned nodes, so merging them is a contradiction.
    let mut pin: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, t) in nodes.iter().enumerate() {
        if t.is_const() {
            let root = uf.find(i);
            if let Some(&prev) = pin.get(&root) {
                if prev != i {
                    return None;
                }
            }
            pin.insert(root, i);
        }
    }
    for &(l, r, op) in &pairs {
        if op == CompOp::Ne && uf.find(l) == uf.find(r) {
            return None;
        }
    }
    // Rewrite: every class member points at the class representative.
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..nodes.len() {
        classes.entry(uf.find(i)).or_default().push(i);
    }
    let rep_term = |uf: &mut UnionFind, i: usize| -> Term {
        let root = uf.find(i);
        match pin.get(&root) {
            Some(&c) => nodes[c].clone(),
            None => {
                let members = &classes[&root];
                nodes[*members.iter().min_by_key(|&&m| &nodes[m]).unwrap()].clone()
            }
        }
    };
    for members in classes.values() {
        let root = members[0];
        let rep = rep_term(&mut uf, root);
        for &m in members {
            if nodes[m].is_const() || nodes[m] == rep {
                continue;
            }
            out.push(Atom { kind: AtomKind::EqD, op: CompOp::Eq, lhs: nodes[m].clone(), rhs: rep.clone() });
        }
    }
    for &(l, r, op) in &pairs {
        if op != CompOp::Ne {
            continue;
        }
        let a = Atom {
            kind: AtomKind::EqD,
            op: CompOp::Ne,
            lhs: rep_term(&mut uf, l),
            rhs: rep_term(&mut uf, r),
        };
        match trivial_eval(&a) {
            Some(true) => continue,
            Some(false) => return None,
            None => out.push(a),
        }
    }
    Some(())
}

/// Rational-order fragment: weighted digraph of bounds with strictness
/// tracking. An edge `u -> v` records that `u <= v` (or `u < v` when
/// strict); the rational order between constant nodes contributes implicit
/// strict edges. Unsatisfiable exactly when some cycle contains a strict
/// edge or a `!=` atom joins two provably equal nodes; density of the
/// rationals makes everything else realizable.
fn canonicalize_q(atoms: &[Atom], out: &mut Vec<Atom>) -> Option<()> {
    if atoms.is_empty() {
        return Some(());
    }
    let mut nodes: Vec<Term> = Vec::new();
    let mut index: BTreeMap<Term, usize> = BTreeMap::new();
    let mut edges: Vec<(usize, usize, bool)> = Vec::new();
    let mut ne_pairs: Vec<(usize, usize)> = Vec::new();
    let mut order_atoms: Vec<(usize, usize, CompOp)> = Vec::new();
    for a in atoms {
        let l = intern(&mut nodes, &mut index, &a.lhs);
        let r = intern(&mut nodes, &mut index, &a.rhs);
        match a.op {
            CompOp::Eq => {
                edges.push((l, r, false));
                edges.push((r, l, false));
            }
            CompOp::Ne => ne_pairs.push((l, r)),
            CompOp::Lt => {
                edges.push((l, r, true));
                order_atoms.push((l, r, CompOp::Lt));
            }
            CompOp::Le => {
                edges.push((l, r, false));
                order_atoms.push((l, r, CompOp::Le));
            }
            CompOp::Gt => {
                edges.push((r, l, true));
                order_atoms.push((r, l, CompOp::Lt));
            }
            CompOp::Ge => {
                edges.push((r, l, false));
                order_atoms.push((r, l, CompOp::Le));
            }
        }
    }
    // Implicit order among the constants that occur.
    let mut consts: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].is_const()).collect();
    consts.sort_by(|&a, &b| nodes[a].cmp(&nodes[b]));
    for w in consts.windows(2) {
        edges.push((w[0], w[1], true));
    }
    let n = nodes.len();
    let mut reach = vec![false; n * n];
    let mut strict = vec![false; n * n];
    for i in 0..n {
        reach[i * n + i] = true;
    }
    for &(u, v, s) in &edges {
        reach[u * n + v] = true;
        if s {
            strict[u * n + v] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if !reach[i * n + k] {
                continue;
            }
            for j in 0..n {
                if reach[k * n + j] {
                    reach[i * n + j] = true;
                    if strict[i * n + k] || strict[k * n + j] {
                        strict[i * n + j] = true;
                    }
                }
            }
        }
    }
    for i in 0..n {
        if strict[i * n + i] {
            return None;
        }
    }
    let same_class = |a: usize, b: usize| reach[a * n + b] && reach[b * n + a];
    for &(l, r) in &ne_pairs {
        if same_class(l, r) {
            return None;
        }
    }
    // Representatives: the pinned constant, else the least member term.
    let mut rep = vec![usize::MAX; n];
    for i in 0..n {
        let mut best = i;
        for j in 0..n {
            if same_class(i, j) {
                let better = match (nodes[j].is_const(), nodes[best].is_const()) {
                    (true, false) => true,
                    (false, true) => false,
                    _ => nodes[j] < nodes[best],
                };
                if better {
                    best = j;
                }
            }
        }
        rep[i] = best;
    }
    for i in 0..n {
        if rep[i] != i && !nodes[i].is_const() {
            out.push(Atom {
                kind: AtomKind::OrdQ,
                op: CompOp::Eq,
                lhs: nodes[i].clone(),
                rhs: nodes[rep[i]].clone(),
            });
        }
    }
    // Order atoms rewritten to representatives; implied ones vanish.
    let mut kept: Vec<(usize, usize, CompOp)> = Vec::new();
    for &(l, r, op) in &order_atoms {
        let (l, r) = (rep[l], rep[r]);
        if l == r {
            // `l <= l` is trivial; a strict self-loop would have been a
            // strict cycle above.
            continue;
        }
        if nodes[l].is_const() && nodes[r].is_const() {
            continue;
        }
        kept.push((l, r, op));
    }
    kept.sort();
    kept.dedup();
    // `x <= y` is implied by `x < y`.
    let kept: Vec<(usize, usize, CompOp)> = kept
        .iter()
        .copied()
        .filter(|&(l, r, op)| !(op == CompOp::Le && kept.contains(&(l, r, CompOp::Lt))))
        .collect();
    // Tightest constant bound per variable wins; looser ones are implied.
    let mut lower: BTreeMap<usize, (usize, bool)> = BTreeMap::new();
    let mut upper: BTreeMap<usize, (usize, bool)> = BTreeMap::new();
    let mut var_var: Vec<(usize, usize, CompOp)> = Vec::new();
    for &(l, r, op) in &kept {
        let s = op == CompOp::Lt;
        match (nodes[l].is_const(), nodes[r].is_const()) {
            (true, false) => {
                // const <= var: lower bound on r
                let e = lower.entry(r).or_insert((l, s));
                let tighter = nodes[l] > nodes[e.0] || (nodes[l] == nodes[e.0] && s);
                if tighter {
                    *e = (l, s);
                }
            }
            (false, true) => {
                let e = upper.entry(l).or_insert((r, s));
                let tighter = nodes[r] < nodes[e.0] || (nodes[r] == nodes[e.0] && s);
                if tighter {
                    *e = (r, s);
                }
            }
            _ => var_var.push((l, r, op)),
        }
    }
    for (l, r, op) in var_var {
        out.push(Atom { kind: AtomKind::OrdQ, op, lhs: nodes[l].clone(), rhs: nodes[r].clone() });
    }
    for (v, (c, s)) in lower {
        let op = if s { CompOp::Gt } else { CompOp::Ge };
        out.push(Atom { kind: AtomKind::OrdQ, op, lhs: nodes[v].clone(), rhs: nodes[c].clone() });
    }
    for (v, (c, s)) in upper {
        let op = if s { CompOp::Lt } else { CompOp::Le };
        out.push(Atom { kind: AtomKind::OrdQ, op, lhs: nodes[v].clone(), rhs: nodes[c].clone() });
    }
    // A `!=` between nodes already strictly separated is implied.
    for &(l, r) in &ne_pairs {
        let (l, r) = (rep[l], rep[r]);
        if strict[l * n + r] || strict[r * n + l] {
            continue;
        }
        let a = Atom { kind: AtomKind::OrdQ, op: CompOp::Ne, lhs: nodes[l].clone(), rhs: nodes[r].clone() };
        match trivial_eval(&a) {
            Some(true) => continue,
            Some(false) => return None,
            None => out.push(a),
        }
    }
    Some(())
}

/// DNF of a formula as a pruned, deduplicated, subsumption-reduced list of
/// canonical conjuncts. The empty list is `false`; a conjunct with no atoms
/// is `true`.
pub fn dnf_conjuncts(f: &Formula) -> Vec<Conjunct> {
    simplify(dnf_rec(f, true))
}

/// As [`dnf_conjuncts`] but without the final subsumption pass. Every
/// conjunct returned is individually satisfiable, so emptiness decides
/// satisfiability of the whole formula.
pub fn dnf_conjuncts_unsimplified(f: &Formula) -> Vec<Conjunct> {
    dnf_rec(f, true)
}

fn dnf_rec(f: &Formula, positive: bool) -> Vec<Conjunct> {
    match f {
        Formula::True => {
            if positive {
                vec![Conjunct::empty()]
            } else {
                vec![]
            }
        }
        Formula::False => {
            if positive {
                vec![]
            } else {
                vec![Conjunct::empty()]
            }
        }
        Formula::Atom(a) => {
            let atom = if positive { a.clone() } else { a.complement() };
            Conjunct::new(vec![atom]).canonicalize().into_iter().collect()
        }
        Formula::Not(g) => dnf_rec(g, !positive),
        Formula::And(..) | Formula::Or(..) => {
            let conjunctive = matches!(f, Formula::And(..)) == positive;
            if conjunctive {
                let mut pos: Vec<Vec<Conjunct>> = Vec::new();
                let mut neg: Vec<Vec<Conjunct>> = Vec::new();
                collect_chain(f, positive, &mut pos, &mut neg);
                let mut base = vec![Conjunct::empty()];
                // Most-constrained factors first so pruning bites early.
                pos.sort_by_key(|d| d.len());
                for d in pos {
                    base = product(&base, &d);
                    if base.is_empty() {
                        return base;
                    }
                }
                for d in neg {
                    base = refine_with_negated(base, &d);
                    if base.is_empty() {
                        return base;
                    }
                }
                base
            } else {
                let (a, b) = match f {
                    Formula::And(a, b) | Formula::Or(a, b) => (a, b),
                    _ => unreachable!(),
                };
                let mut out = dnf_rec(a, positive);
                out.extend(dnf_rec(b, positive));
                dedup(&mut out);
                out
            }
        }
    }
}

/// Flattens a conjunctive chain (`And` under positive polarity, `Or` under
/// negative) into positively-DNF'd factors and negated factors.
fn collect_chain(f: &Formula, positive: bool, pos: &mut Vec<Vec<Conjunct>>, neg: &mut Vec<Vec<Conjunct>>) {
    match f {
        Formula::And(a, b) if positive => {
            collect_chain(a, true, pos, neg);
            collect_chain(b, true, pos, neg);
        }
        Formula::Or(a, b) if !positive => {
            collect_chain(a, false, pos, neg);
            collect_chain(b, false, pos, neg);
        }
        Formula::Not(g) => collect_chain(g, !positive, pos, neg),
        _ => {
            if positive {
                pos.push(dnf_rec(f, true));
            } else {
                // ¬g folded incrementally against the positive part.
                neg.push(dnf_rec(f, true));
            }
        }
    }
}

fn product(a: &[Conjunct], b: &[Conjunct]) -> Vec<Conjunct> {
    let mut out = Vec::new();
    for ca in a {
        for cb in b {
            if let Some(c) = ca.merge(cb) {
                out.push(c);
            }
        }
    }
    dedup(&mut out);
    out
}

/// Conjoins `¬(n1 ∨ n2 ∨ ...)` onto a frontier of conjuncts, one negated
/// conjunct at a time, pruning dead branches.
fn refine_with_negated(base: Vec<Conjunct>, negated: &[Conjunct]) -> Vec<Conjunct> {
    let mut frontier = base;
    for n in negated {
        let mut next: Vec<Conjunct> = Vec::new();
        'each: for s in frontier {
            let mut branches: Vec<Conjunct> = Vec::new();
            for a in n.atoms() {
                match s.with_atom(a.complement()) {
                    None => {}
                    Some(s2) if s2 == s => {
                        // The complement is already implied: s ∧ ¬n ≡ s.
                        next.push(s);
                        continue 'each;
                    }
                    Some(s2) => branches.push(s2),
                }
            }
            next.extend(branches);
        }
        dedup(&mut next);
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    frontier
}

fn dedup(cs: &mut Vec<Conjunct>) {
    cs.sort();
    cs.dedup();
}

/// Deduplicates and drops conjuncts entailed by another conjunct.
pub fn simplify(mut cs: Vec<Conjunct>) -> Vec<Conjunct> {
    dedup(&mut cs);
    if cs.len() < 2 {
        return cs;
    }
    let mut dropped = vec![false; cs.len()];
    for i in 0..cs.len() {
        if dropped[i] {
            continue;
        }
        for j in 0..cs.len() {
            if i == j || dropped[j] {
                continue;
            }
            if cs[i].entails(&cs[j]) && (!cs[j].entails(&cs[i]) || j < i) {
                dropped[i] = true;
                break;
            }
        }
    }
    cs.into_iter()
        .zip(dropped)
        .filter_map(|(c, d)| if d { None } else { Some(c) })
        .collect()
}

pub fn conjuncts_to_formula(cs: &[Conjunct]) -> Formula {
    Formula::or_all(cs.iter().map(Conjunct::to_formula))
}

/// Equivalent disjunction of conjunctions of atoms, with `not` pushed onto
/// atoms and eliminated by operator complementation.
pub fn to_dnf(f: &Formula) -> Formula {
    conjuncts_to_formula(&dnf_conjuncts(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::TupleVar;
    use crate::rational::rat_int;

    fn qvar(v: TupleVar) -> Term {
        Term::Attr(v, 1)
    }

    fn dvar(v: TupleVar) -> Term {
        Term::Attr(v, 0)
    }

    fn qatom(op: CompOp, lhs: Term, rhs: Term) -> Atom {
        Atom { kind: AtomKind::OrdQ, op, lhs, rhs }
    }

    fn datom(op: CompOp, lhs: Term, rhs: Term) -> Atom {
        Atom { kind: AtomKind::EqD, op, lhs, rhs }
    }

    #[test]
    fn direct_contradiction_unsat() {
        // {x = y, x != y}
        let c = Conjunct::new(vec![
            datom(CompOp::Eq, dvar(TupleVar::L), dvar(TupleVar::R)),
            datom(CompOp::Ne, dvar(TupleVar::L), dvar(TupleVar::R)),
        ]);
        assert!(c.canonicalize().is_none());
    }

    #[test]
    fn empty_interval_unsat() {
        // {x > 5, x < 3}
        let c = Conjunct::new(vec![
            qatom(CompOp::Gt, qvar(TupleVar::L), Term::QConst(rat_int(5))),
            qatom(CompOp::Lt, qvar(TupleVar::L), Term::QConst(rat_int(3))),
        ]);
        assert!(c.canonicalize().is_none());
    }

    #[test]
    fn mixed_conjunct_sat() {
        // {L.m = R.m, L.y > R.y}
        let c = Conjunct::new(vec![
            datom(CompOp::Eq, dvar(TupleVar::L), dvar(TupleVar::R)),
            qatom(CompOp::Gt, qvar(TupleVar::L), qvar(TupleVar::R)),
        ]);
        assert!(c.canonicalize().is_some());
    }

    #[test]
    fn derived_equality_contradicts_ne() {
        // {x <= y, y <= x, x != y}
        let c = Conjunct::new(vec![
            qatom(CompOp::Le, qvar(TupleVar::L), qvar(TupleVar::R)),
            qatom(CompOp::Ge, qvar(TupleVar::L), qvar(TupleVar::R)),
            qatom(CompOp::Ne, qvar(TupleVar::L), qvar(TupleVar::R)),
        ]);
        assert!(c.canonicalize().is_none());
    }

    #[test]
    fn constant_window_with_ne_sat() {
        // {1 < x, x < 2, x != 3/2} — density leaves room
        let x = qvar(TupleVar::L);
        let c = Conjunct::new(vec![
            qatom(CompOp::Gt, x.clone(), Term::QConst(rat_int(1))),
            qatom(CompOp::Lt, x.clone(), Term::QConst(rat_int(2))),
            qatom(CompOp::Ne, x, Term::QConst(crate::rational::rat_frac(3, 2))),
        ]);
        assert!(c.canonicalize().is_some());
    }

    #[test]
    fn pinned_by_constants_unsat_with_ne() {
        // {1 <= x, x <= 1, x != 1}
        let x = qvar(TupleVar::L);
        let c = Conjunct::new(vec![
            qatom(CompOp::Ge, x.clone(), Term::QConst(rat_int(1))),
            qatom(CompOp::Le, x.clone(), Term::QConst(rat_int(1))),
            qatom(CompOp::Ne, x, Term::QConst(rat_int(1))),
        ]);
        assert!(c.canonicalize().is_none());
    }

    #[test]
    fn derived_constant_bound_violation() {
        // {x >= 2, x <= 1}
        let x = qvar(TupleVar::L);
        let c = Conjunct::new(vec![
            qatom(CompOp::Ge, x.clone(), Term::QConst(rat_int(2))),
            qatom(CompOp::Le, x, Term::QConst(rat_int(1))),
        ]);
        assert!(c.canonicalize().is_none());
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let c = Conjunct::new(vec![
            datom(CompOp::Eq, dvar(TupleVar::L), Term::DConst("VW".into())),
            datom(CompOp::Ne, dvar(TupleVar::L), Term::DConst("Kia".into())),
            qatom(CompOp::Gt, qvar(TupleVar::L), qvar(TupleVar::R)),
            qatom(CompOp::Ge, qvar(TupleVar::L), qvar(TupleVar::R)),
        ]);
        let once = c.canonicalize().unwrap();
        let twice = once.canonicalize().unwrap();
        assert_eq!(once, twice);
        // The Ne against Kia vanished: L.m = VW already implies it.
        assert!(!once.atoms().iter().any(|a| a.op == CompOp::Ne));
        // The non-strict bound is absorbed by the strict one.
        assert_eq!(once.atoms().iter().filter(|a| a.kind == AtomKind::OrdQ).count(), 1);
    }

    #[test]
    fn subsumption_drops_entailed_conjunct() {
        let narrow = Conjunct::new(vec![
            datom(CompOp::Eq, dvar(TupleVar::L), Term::DConst("VW".into())),
            qatom(CompOp::Gt, qvar(TupleVar::L), qvar(TupleVar::R)),
        ])
        .canonicalize()
        .unwrap();
        let wide = Conjunct::new(vec![qatom(CompOp::Gt, qvar(TupleVar::L), qvar(TupleVar::R))])
            .canonicalize()
            .unwrap();
        assert!(narrow.entails(&wide));
        assert!(!wide.entails(&narrow));
        let kept = simplify(vec![narrow, wide.clone()]);
        assert_eq!(kept, vec![wide]);
    }
}
