//! Brute-force ground truth on finite universes.
//!
//! The grid universe is a finite proxy for the infinite domains: it contains
//! every constant mentioned by the formulas and data, several witnesses
//! strictly between any two adjacent rational constants, several values
//! beyond both endpoints, and several fresh uninterpreted constants. Both
//! constraint classes are invariant under order- and equality-preserving
//! relabelings, so witness existence at the quantifier depths used by the
//! axiom checks is preserved; the faithfulness property tests pin this down
//! empirically.
//!
//! Everything here works on explicit edge sets with plain graph algorithms,
//! deliberately independent of the symbolic solver it cross-checks.

use crate::axioms::OrderClass;
use crate::error::{Error, Result};
use crate::exec;
use crate::formula::{Formula, PrefRelation, Term};
use crate::rational::{rat_int, Rat};
use crate::schema::{AttrDomain, Schema, TupleValue, Value};
use crate::winnow::RelationInstance;

#[derive(Debug, Clone)]
pub struct GridOptions {
    /// Witnesses inserted per gap between adjacent constants, and beyond
    /// each endpoint. Three covers the three-variable axiom instantiations.
    pub gap_points: usize,
    /// Fresh uninterpreted constants added to the D pool.
    pub fresh_d: usize,
    /// Hard cap on `|universe|²`.
    pub max_pairs: usize,
}

impl Default for GridOptions {
    fn default() -> GridOptions {
        GridOptions { gap_points: 3, fresh_d: 3, max_pairs: 10_000 }
    }
}

/// A finite cross-product universe of tuples faithful for the two
/// constraint classes.
#[derive(Debug, Clone)]
pub struct GridUniverse {
    schema: Schema,
    tuples: Vec<TupleValue>,
}

impl GridUniverse {
    pub fn build(
        schema: &Schema,
        formulas: &[&Formula],
        instances: &[&RelationInstance],
        opts: &GridOptions,
    ) -> Result<GridUniverse> {
        let mut q_consts: Vec<Rat> = Vec::new();
        let mut d_consts: Vec<String> = Vec::new();
        for f in formulas {
            f.visit_atoms(&mut |a| {
                for t in [&a.lhs, &a.rhs] {
                    match t {
                        Term::QConst(q) => q_consts.push(q.clone()),
                        Term::DConst(s) => d_consts.push(s.clone()),
                        Term::Attr(..) => {}
                    }
                }
            });
        }
        for inst in instances {
            for t in inst.tuples() {
                for v in t.values() {
                    match v {
                        Value::Q(q) => q_consts.push(q.clone()),
                        Value::D(s) => d_consts.push(s.clone()),
                    }
                }
            }
        }
        if q_consts.is_empty() {
            q_consts.push(rat_int(0));
            q_consts.push(rat_int(1));
        }
        q_consts.sort();
        q_consts.dedup();
        let k = opts.gap_points.max(1);
        let mut q_pool: Vec<Rat> = Vec::new();
        let min = q_consts.first().unwrap().clone();
        let max = q_consts.last().unwrap().clone();
        for i in 1..=k {
            q_pool.push(&min - rat_int(i as i64));
        }
        for w in q_consts.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let step = (b - a) / rat_int(k as i64 + 1);
            for i in 1..=k {
                q_pool.push(a + &step * rat_int(i as i64));
            }
        }
        for i in 1..=k {
            q_pool.push(&max + rat_int(i as i64));
        }
        q_pool.extend(q_consts);
        q_pool.sort();
        q_pool.dedup();

        d_consts.sort();
        d_consts.dedup();
        let mut fresh = 0usize;
        let mut added = 0usize;
        let mut d_pool = d_consts.clone();
        while added < opts.fresh_d {
            let candidate = format!("_x{fresh}");
            fresh += 1;
            if !d_pool.contains(&candidate) {
                d_pool.push(candidate);
                added += 1;
            }
        }
        d_pool.sort();

        let mut size: usize = 1;
        for attr in schema.attrs() {
            let pool = match attr.domain {
                AttrDomain::D => d_pool.len(),
                AttrDomain::Q => q_pool.len(),
            };
            size = size.saturating_mul(pool);
        }
        let pairs = size.saturating_mul(size);
        if pairs > opts.max_pairs {
            return Err(Error::UniverseTooLarge { pairs, cap: opts.max_pairs });
        }
        let mut tuples: Vec<TupleValue> = Vec::with_capacity(size);
        let mut stack: Vec<Value> = Vec::with_capacity(schema.arity());
        build_cross(schema, 0, &d_pool, &q_pool, &mut stack, &mut tuples);
        Ok(GridUniverse { schema: schema.clone(), tuples })
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

    pub fn index_of(&self, t: &TupleValue) -> Option<usize> {
        self.tuples.iter().position(|u| u == t)
    }

    /// The universe as a relation instance (for SCP checks and winnow).
    pub fn instance(&self) -> RelationInstance {
        RelationInstance::new(self.schema.clone(), self.tuples.clone()).expect("grid tuples conform")
    }
}

fn build_cross(
    schema: &Schema,
    attr: usize,
    d_pool: &[String],
    q_pool: &[Rat],
    stack: &mut Vec<Value>,
    out: &mut Vec<TupleValue>,
) {
    if attr == schema.arity() {
        out.push(TupleValue::new(schema, stack.clone()).expect("pool values conform"));
        return;
    }
    match schema.attr_domain(attr) {
        AttrDomain::D => {
            for v in d_pool {
                stack.push(Value::D(v.clone()));
                build_cross(schema, attr + 1, d_pool, q_pool, stack, out);
                stack.pop();
            }
        }
        AttrDomain::Q => {
            for v in q_pool {
                stack.push(Value::Q(v.clone()));
                build_cross(schema, attr + 1, d_pool, q_pool, stack, out);
                stack.pop();
            }
        }
    }
}

/// A set of ordered pairs over a universe of `n` tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSet {
    n: usize,
    bits: Vec<bool>,
}

impl EdgeSet {
    pub fn new(n: usize) -> EdgeSet {
        EdgeSet { n, bits: vec![false; n * n] }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> EdgeSet {
        let mut e = EdgeSet::new(n);
        for (i, j) in pairs {
            e.insert(i, j);
        }
        e
    }

    pub fn universe_size(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.bits[i * self.n + j] = true;
    }

    pub fn remove(&mut self, i: usize, j: usize) {
        self.bits[i * self.n + j] = false;
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.contains(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        assert_eq!(self.n, other.n);
        EdgeSet {
            n: self.n,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        assert_eq!(self.n, other.n);
        EdgeSet {
            n: self.n,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a && !b).collect(),
        }
    }

    pub fn symmetric_difference(&self, other: &EdgeSet) -> EdgeSet {
        assert_eq!(self.n, other.n);
        EdgeSet {
            n: self.n,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        assert_eq!(self.n, other.n);
        self.bits.iter().zip(&other.bits).all(|(a, b)| !a || *b)
    }
}

/// Every ground pair of the universe on which `p` holds.
pub fn materialize(p: &PrefRelation, u: &GridUniverse) -> Result<EdgeSet> {
    p.schema().check_same(u.schema())?;
    let n = u.len();
    let tuples = u.tuples();
    let bits = exec::map_indices(n * n, |k| p.eval_unchecked(&tuples[k / n], &tuples[k % n]));
    Ok(EdgeSet { n, bits })
}

/// Standard transitive closure on the finite graph.
pub fn graph_tc(e: &EdgeSet) -> EdgeSet {
    let n = e.n;
    let mut bits = e.bits.clone();
    for k in 0..n {
        for i in 0..n {
            if !bits[i * n + k] {
                continue;
            }
            for j in 0..n {
                if bits[k * n + j] {
                    bits[i * n + j] = true;
                }
            }
        }
    }
    EdgeSet { n, bits }
}

/// Direct set-theoretic checks of the four order axioms.
pub fn graph_axioms(e: &EdgeSet) -> OrderClass {
    let n = e.n;
    let irreflexive = (0..n).all(|i| !e.contains(i, i));
    let mut transitive = true;
    let mut negatively_transitive = true;
    'outer: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if e.contains(i, j) && e.contains(j, k) && !e.contains(i, k) {
                    transitive = false;
                }
                if !e.contains(i, j) && !e.contains(j, k) && e.contains(i, k) {
                    negatively_transitive = false;
                }
                if !transitive && !negatively_transitive {
                    break 'outer;
                }
            }
        }
    }
    let connected = (0..n).all(|i| (0..n).all(|j| i == j || e.contains(i, j) || e.contains(j, i)));
    OrderClass::from_flags(irreflexive, transitive, negatively_transitive, connected)
}

/// Ground prioritized composition `e0 ▷ e`.
pub fn prioritized_edges(e0: &EdgeSet, e: &EdgeSet) -> EdgeSet {
    let n = e.n;
    let mut out = e0.clone();
    for i in 0..n {
        for j in 0..n {
            if e.contains(i, j) && !e0.contains(i, j) && !e0.contains(j, i) {
                out.insert(i, j);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BruteMode {
    Refine,
    Override,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetClass {
    Spo,
    Weak,
}

/// Ground-truth least revision on a finite universe, or `None` when no
/// revision of the target class exists or no single closest one does.
///
/// Every candidate of either target class is transitive and contains the
/// mandated base, hence contains the base's graph transitive closure `M`;
/// so for SPO targets `M` decides the question outright. For weak-order
/// targets, when `M` itself is not weak, all weak orders on the universe
/// are enumerated as ranked layer assignments and compared by symmetric
/// difference with `e`.
pub fn least_revision_bruteforce(
    e: &EdgeSet,
    e0: &EdgeSet,
    mode: BruteMode,
    target: TargetClass,
) -> Result<Option<EdgeSet>> {
    let base = match mode {
        BruteMode::Refine => e.union(e0),
        BruteMode::Override => prioritized_edges(e0, e),
    };
    let closure = graph_tc(&base);
    let class = graph_axioms(&closure);
    match target {
        TargetClass::Spo => Ok(if class.is_spo() { Some(closure) } else { None }),
        TargetClass::Weak => {
            if class.is_weak() {
                return Ok(Some(closure));
            }
            if !class.irreflexive {
                // Weak orders are irreflexive and every candidate contains
                // the closure, so none exists.
                return Ok(None);
            }
            let n = e.n;
            if n > 7 {
                return Err(Error::EnumerationCap(format!(
                    "weak-order enumeration over {n} elements"
                )));
            }
            let candidates = weak_orders_containing(n, &base);
            let diffs: Vec<EdgeSet> = candidates.iter().map(|c| c.symmetric_difference(e)).collect();
            let least = (0..candidates.len())
                .find(|&i| (0..candidates.len()).all(|j| diffs[i].is_subset(&diffs[j])));
            Ok(least.map(|i| candidates[i].clone()))
        }
    }
}

/// All weak orders over `n` labeled elements that contain `base`. A weak
/// order is an ordered partition into indifference layers: enumerate set
/// partitions (restricted-growth strings) and every ordering of their
/// blocks.
fn weak_orders_containing(n: usize, base: &EdgeSet) -> Vec<EdgeSet> {
    let mut perms_by_len: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n + 1];
    for (m, slot) in perms_by_len.iter_mut().enumerate() {
        let mut perm: Vec<usize> = (0..m).collect();
        permutations(&mut perm, 0, slot);
    }
    let mut out = Vec::new();
    let mut assign = vec![0usize; n.max(1)];
    partition_rec(1, 1, n, &mut assign, &perms_by_len, base, &mut out);
    out
}

fn permutations(perm: &mut Vec<usize>, at: usize, out: &mut Vec<Vec<usize>>) {
    if at == perm.len() {
        out.push(perm.clone());
        return;
    }
    for i in at..perm.len() {
        perm.swap(at, i);
        permutations(perm, at + 1, out);
        perm.swap(at, i);
    }
}

fn partition_rec(
    pos: usize,
    blocks: usize,
    n: usize,
    assign: &mut Vec<usize>,
    perms_by_len: &[Vec<Vec<usize>>],
    base: &EdgeSet,
    out: &mut Vec<EdgeSet>,
) {
    if n == 0 {
        return;
    }
    if pos == n {
        for perm in &perms_by_len[blocks] {
            let mut cand = EdgeSet::new(n);
            let mut ok = true;
            for i in 0..n {
                for j in 0..n {
                    if perm[assign[i]] > perm[assign[j]] {
                        cand.insert(i, j);
                    }
                }
            }
            for (i, j) in base.pairs() {
                if !cand.contains(i, j) {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.push(cand);
            }
        }
        return;
    }
    for b in 0..=blocks {
        assign[pos] = b;
        partition_rec(pos + 1, blocks.max(b + 1), n, assign, perms_by_len, base, out);
    }
}

/// Hidden conflicts per the prose definition: pairs `(t1,t2)` preferred by
/// `e0` while a chain of at least two `e`-edges leads from `t2` back to
/// `t1`, no chain edge's reverse lying in `e0`.
pub fn hidden_conflicts_prose(e: &EdgeSet, e0: &EdgeSet) -> Vec<(usize, usize)> {
    let n = e.n;
    let mut allowed = EdgeSet::new(n);
    for i in 0..n {
        for j in 0..n {
            if e.contains(i, j) && !e0.contains(j, i) {
                allowed.insert(i, j);
            }
        }
    }
    let closure = graph_tc(&allowed);
    let mut out = Vec::new();
    for (t1, t2) in e0.pairs() {
        let chain = (0..n).any(|mid| allowed.contains(t2, mid) && closure.contains(mid, t1));
        if chain {
            out.push((t1, t2));
        }
    }
    out
}
