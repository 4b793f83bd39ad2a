//! The term systems `ψ⁺_ν(D) ⊇ ψ_ν(D)`, the collapse `π` with its partial
//! inverse, the functions `G` and `E` of a ν-collapse, and the range
//! condition.
//!
//! A term `ψ_α(a, σ)` stores `α`, the set `a` as a list sorted under the
//! term order, and a trace `σ` of `D` whose arity is `|a|`. Position `i` of
//! the trace refers to the `i`-th smallest element of `a`, so the pair
//! `(σ, a)` is exactly the normal form `D(e_a)(σ)`.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::check::Report;
use crate::dilator::{element_compare, is_trace, parse_trace_of_arity, trace_enumerate, DilElem, Nf, Predilator};
use crate::order::{merge_supports, sort_by_cmp, Element, LinearOrder, Nu, NuElem};
use crate::syntax::{parse_nu, Cursor, ParseError};

struct Node<T> {
    alpha: NuElem,
    children: Vec<PsiTerm<T>>,
    trace: T,
    l: usize,
    hash: u64,
}

/// A term `ψ_α(a, σ)` of `ψ⁺_ν(D)`; `T` is the trace type of `D`.
pub struct PsiTerm<T>(Arc<Node<T>>);

impl<T> Clone for PsiTerm<T> {
    fn clone(&self) -> Self {
        PsiTerm(Arc::clone(&self.0))
    }
}

impl<T: PartialEq> PartialEq for PsiTerm<T> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash
                && self.0.alpha == other.0.alpha
                && self.0.trace == other.0.trace
                && self.0.children == other.0.children)
    }
}

impl<T: Eq> Eq for PsiTerm<T> {}

impl<T> Hash for PsiTerm<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl<T: fmt::Debug> fmt::Debug for PsiTerm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p[{}](", self.0.alpha)?;
        f.debug_set().entries(&self.0.children).finish()?;
        write!(f, "; {:?})", self.0.trace)
    }
}

impl<T: Hash> PsiTerm<T> {
    fn build(alpha: NuElem, children: Vec<PsiTerm<T>>, trace: T) -> Self {
        let l = 1 + children.iter().map(|c| 2 * c.0.l).sum::<usize>();
        let mut h = DefaultHasher::new();
        alpha.hash(&mut h);
        trace.hash(&mut h);
        for c in &children {
            h.write_u64(c.0.hash);
        }
        PsiTerm(Arc::new(Node { alpha, children, trace, l, hash: h.finish() }))
    }
}

impl<T> PsiTerm<T> {
    pub fn alpha(&self) -> NuElem {
        self.0.alpha
    }

    /// The set `a`, in increasing order.
    pub fn children(&self) -> &[PsiTerm<T>] {
        &self.0.children
    }

    pub fn trace(&self) -> &T {
        &self.0.trace
    }

    /// `l(ψ_α(a,σ)) = 1 + Σ_{t∈a} 2·l(t)`.
    pub fn l_measure(&self) -> usize {
        self.0.l
    }

    pub fn same(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

/// The normal form `D(e_a)(σ)` of a term, read as an element of `D(ψ⁺)`.
pub type PsiNf<D> = Nf<D, PsiTerm<<D as Predilator>::Raw<usize>>>;

pub type Term<D> = PsiTerm<<D as Predilator>::Raw<usize>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PsiError {
    #[error("{0} is not below nu = {1}")]
    NotInNu(NuElem, NuElem),
    #[error("trace is not a full-support element of D({0})")]
    NotATrace(usize),
    #[error("the children of a term must be distinct")]
    DuplicateChild,
    #[error("term is not a member of the fixed point")]
    NotMember,
    #[error("only {produced} of {wanted} members found within the enumeration caps")]
    Exhausted { wanted: usize, produced: usize },
}

/// How membership unfolds `G⁺`; the second variant is an injected fault
/// that forgets the recursive union.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipRule {
    Full,
    DropUnion,
}

/// Enumeration caps: measure `l`, trace payload size, and the budget used to
/// enumerate `ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PsiCaps {
    pub max_l: usize,
    pub max_payload: usize,
    pub max_alpha: usize,
}

impl Default for PsiCaps {
    fn default() -> Self {
        PsiCaps { max_l: 9, max_payload: 6, max_alpha: 6 }
    }
}

/// `ψ⁺_ν(D)` with membership in `ψ_ν(D)`.
pub struct PsiSystem<D: Predilator> {
    pub nu: Nu,
    pub dil: D,
    rule: MembershipRule,
    caching: bool,
    cache: RwLock<HashMap<Term<D>, bool>>,
}

impl<D: Predilator> PsiSystem<D> {
    pub fn new(nu: Nu, dil: D) -> Self {
        PsiSystem { nu, dil, rule: MembershipRule::Full, caching: true, cache: RwLock::new(HashMap::new()) }
    }

    pub fn with_rule(mut self, rule: MembershipRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn without_cache(mut self) -> Self {
        self.caching = false;
        self
    }

    pub fn label(&self) -> String {
        format!("psi[{}]({})", self.nu.bound, self.dil.name())
    }

    /// Validates and builds `ψ_α(a, σ)`; `children` is a set in any order.
    pub fn make_term(
        &self,
        alpha: NuElem,
        mut children: Vec<Term<D>>,
        trace: D::Raw<usize>,
    ) -> Result<Term<D>, PsiError> {
        if !self.nu.contains(&alpha) {
            return Err(PsiError::NotInNu(alpha, self.nu.bound));
        }
        sort_by_cmp(&mut children, &mut |a, b| self.compare(a, b));
        if children.windows(2).any(|w| w[0] == w[1]) {
            return Err(PsiError::DuplicateChild);
        }
        if !is_trace(&self.dil, children.len(), &trace) {
            return Err(PsiError::NotATrace(children.len()));
        }
        Ok(PsiTerm::build(alpha, children, trace))
    }

    /// The order on `ψ⁺_ν(D)`: first by `α`, then `D(e_a)(σ)` against
    /// `D(e_b)(τ)` inside `D(a ∪ b)`.
    pub fn compare(&self, s: &Term<D>, t: &Term<D>) -> Ordering {
        if s.same(t) {
            return Ordering::Equal;
        }
        match s.alpha().cmp(&t.alpha()) {
            Ordering::Equal => {}
            other => return other,
        }
        let (union, pa, pb) = merge_supports(s.children(), t.children(), &mut |a, b| self.compare(a, b));
        self.dil.compare_at(union.len(), s.trace(), &pa, t.trace(), &pb)
    }

    /// `D(e_a)(σ)` for `t = ψ_α(a, σ)`.
    pub fn payload(&self, t: &Term<D>) -> PsiNf<D> {
        DilElem { trace: t.trace().clone(), support: t.children().to_vec() }
    }

    /// Compares two elements of `D(ψ⁺_ν(D))`.
    pub fn compare_nf(&self, a: &PsiNf<D>, b: &PsiNf<D>) -> Ordering {
        element_compare(&self.dil, self, a, b)
    }

    /// `G⁺_γ(t)`: the payloads of all subterms reachable through indices
    /// `≥ γ`.
    pub fn g_plus(&self, gamma: NuElem, t: &Term<D>) -> Vec<PsiNf<D>> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        self.g_plus_into(gamma, t, true, &mut out, &mut seen);
        out
    }

    fn g_plus_into(
        &self,
        gamma: NuElem,
        t: &Term<D>,
        deep: bool,
        out: &mut Vec<PsiNf<D>>,
        seen: &mut HashSet<Term<D>>,
    ) {
        if t.alpha() < gamma || !seen.insert(t.clone()) {
            return;
        }
        out.push(self.payload(t));
        if deep {
            for r in t.children() {
                self.g_plus_into(gamma, r, deep, out, seen);
            }
        }
    }

    /// Membership in `ψ_ν(D)`: every child is a member, and every element of
    /// `G⁺_α(r)` for a child `r` lies below `D(e_a)(σ)`.
    pub fn is_member(&self, t: &Term<D>) -> bool {
        if self.caching {
            if let Some(&b) = self.cache.read().expect("member cache").get(t) {
                return b;
            }
        }
        let b = self.decide_member(t);
        if self.caching {
            self.cache.write().expect("member cache").insert(t.clone(), b);
        }
        b
    }

    fn decide_member(&self, t: &Term<D>) -> bool {
        if !t.children().iter().all(|r| self.is_member(r)) {
            return false;
        }
        let top = self.payload(t);
        let deep = self.rule == MembershipRule::Full;
        let mut below = Vec::new();
        let mut seen = HashSet::new();
        for r in t.children() {
            self.g_plus_into(t.alpha(), r, deep, &mut below, &mut seen);
        }
        below.iter().all(|g| self.compare_nf(g, &top) == Ordering::Less)
    }

    /// `π(ψ_α(a,σ)) = (α, D(e_a)(σ))` on members.
    pub fn pi_collapse(&self, t: &Term<D>) -> Result<(NuElem, PsiNf<D>), PsiError> {
        if self.is_member(t) {
            Ok((t.alpha(), self.payload(t)))
        } else {
            Err(PsiError::NotMember)
        }
    }

    /// The partial inverse of `π`: the term `ψ_α(supp τ, σ)` when it is a
    /// member.
    pub fn psi_inverse(&self, alpha: NuElem, tau: &PsiNf<D>) -> Option<Term<D>> {
        if !tau.support.windows(2).all(|w| self.compare(&w[0], &w[1]) == Ordering::Less) {
            return None;
        }
        if !tau.support.iter().all(|s| self.is_member(s)) {
            return None;
        }
        let t = self.make_term(alpha, tau.support.clone(), tau.trace.clone()).ok()?;
        self.is_member(&t).then_some(t)
    }

    /// Terms generated level by level in `l`; within a level ordered by
    /// trace size, then by the term order. With `members_only`, children and
    /// results range over `ψ_ν(D)`. Stops after the first level at which
    /// `limit` terms exist. The flag reports whether `limit` was reached.
    pub fn generate(&self, caps: PsiCaps, members_only: bool, limit: Option<usize>) -> (Vec<Term<D>>, bool) {
        let mut alphas = self.nu.enumerate(caps.max_alpha);
        alphas.sort();
        let mut traces: HashMap<usize, Vec<D::Raw<usize>>> = HashMap::new();
        let mut out: Vec<Term<D>> = Vec::new();
        let mut by_l: Vec<(usize, Vec<Term<D>>)> = Vec::new();
        let max_arity = self.dil.max_arity(caps.max_payload);
        let max_target = caps.max_l.saturating_sub(1) / 2;
        // Candidate measure sums of child sets, each with the least number of
        // children reaching it; an over-approximation that lets generation
        // skip measures no child set can produce.
        let mut sums: BTreeMap<usize, usize> = BTreeMap::from([(0, 0)]);
        let mut target = 0;
        while caps.max_l >= 1 && target <= max_target {
            if limit.is_some_and(|n| out.len() >= n) {
                break;
            }
            let l = 2 * target + 1;
            let mut level = Vec::new();
            for arity in 0..=max_arity.min(target) {
                let ts = traces
                    .entry(arity)
                    .or_insert_with(|| trace_enumerate(&self.dil, arity, caps.max_payload));
                if ts.is_empty() {
                    continue;
                }
                for kids in child_sets(&by_l, arity, target) {
                    for tr in ts.iter() {
                        for &alpha in &alphas {
                            let Ok(t) = self.make_term(alpha, kids.clone(), tr.clone()) else {
                                continue;
                            };
                            if !members_only || self.is_member(&t) {
                                level.push(t);
                            }
                        }
                    }
                }
            }
            sort_by_cmp(&mut level, &mut |a, b| {
                self.dil.size(a.trace()).cmp(&self.dil.size(b.trace())).then_with(|| self.compare(a, b))
            });
            if !level.is_empty() {
                let snapshot: Vec<(usize, usize)> = sums.iter().map(|(s, c)| (*s, *c)).collect();
                for (s, c) in snapshot {
                    for k in 1..=max_arity.saturating_sub(c).min(level.len()) {
                        let v = s + k * l;
                        if v > max_target {
                            break;
                        }
                        let e = sums.entry(v).or_insert(c + k);
                        *e = (*e).min(c + k);
                    }
                }
                out.extend(level.iter().cloned());
                by_l.push((l, level));
            }
            match sums.range(target + 1..).next() {
                Some((&next, _)) => target = next,
                None => break,
            }
        }
        let reached = limit.map_or(true, |n| out.len() >= n);
        if let Some(n) = limit {
            out.truncate(n);
        }
        (out, reached)
    }

    /// The first `count` members in generation order. Generation order lists
    /// every child before its parents, and `enumerate(n)` is a prefix of
    /// `enumerate(n + 1)`.
    pub fn enumerate_members(&self, count: usize, caps: PsiCaps) -> Result<Vec<Term<D>>, PsiError> {
        let (v, reached) = self.generate(caps, true, Some(count));
        if reached {
            Ok(v)
        } else {
            Err(PsiError::Exhausted { wanted: count, produced: v.len() })
        }
    }

    /// Sorts terms under the term order.
    pub fn sorted(&self, terms: &[Term<D>]) -> Vec<Term<D>> {
        let mut v = terms.to_vec();
        sort_by_cmp(&mut v, &mut |a, b| self.compare(a, b));
        v
    }

    pub fn write_term(&self, t: &Term<D>, out: &mut String) {
        out.push_str(&format!("p[{}]({{", t.alpha()));
        for (i, c) in t.children().iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            self.write_term(c, out);
        }
        out.push_str("}; ");
        self.dil.write_trace(t.trace(), out);
        out.push(')');
    }

    pub fn term_text(&self, t: &Term<D>) -> String {
        let mut s = String::new();
        self.write_term(t, &mut s);
        s
    }

    /// Parses `p[α]({t1,…,tk}; σ)`, validating every subterm as a term of
    /// `ψ⁺_ν(D)`.
    pub fn parse_term(&self, c: &mut Cursor<'_>) -> Result<Term<D>, ParseError> {
        let start = c.pos();
        c.expect("p[")?;
        let alpha = parse_nu(c)?;
        c.expect("]")?;
        c.expect("(")?;
        c.expect("{")?;
        let children = c.list("}", &mut |c| self.parse_term(c))?;
        c.expect(";")?;
        let trace = parse_trace_of_arity(&self.dil, c, children.len())?;
        c.expect(")")?;
        self.make_term(alpha, children, trace).map_err(|e| ParseError::Invalid { pos: start, message: e.to_string() })
    }
}

// Every set of `arity` distinct terms, drawn from the levels, whose measures
// add up to `target`.
fn child_sets<T: Clone>(levels: &[(usize, Vec<T>)], arity: usize, target: usize) -> Vec<Vec<T>> {
    let pool: Vec<(usize, &T)> = levels.iter().flat_map(|(l, v)| v.iter().map(move |t| (*l, t))).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go<T: Clone>(
        pool: &[(usize, &T)],
        start: usize,
        left: usize,
        rest: usize,
        cur: &mut Vec<T>,
        out: &mut Vec<Vec<T>>,
    ) {
        if left == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for i in start..pool.len() {
            let (l, t) = pool[i];
            // Measures are non-decreasing along the pool.
            if l * left > rest {
                break;
            }
            cur.push(t.clone());
            go(pool, i + 1, left - 1, rest - l, cur, out);
            cur.pop();
        }
    }
    go(&pool, 0, arity, target, &mut cur, &mut out);
    out
}

impl<D: Predilator> LinearOrder for PsiSystem<D> {
    type Elem = Term<D>;

    fn compare(&self, a: &Term<D>, b: &Term<D>) -> Ordering {
        PsiSystem::compare(self, a, b)
    }

    fn contains(&self, a: &Term<D>) -> bool {
        self.is_member(a)
    }

    /// Members with `l ≤ budget` under default payload caps, in increasing
    /// order.
    fn enumerate(&self, budget: usize) -> Vec<Term<D>> {
        let caps = PsiCaps { max_l: budget, ..PsiCaps::default() };
        self.sorted(&self.generate(caps, true, None).0)
    }

    fn label(&self) -> String {
        PsiSystem::label(self)
    }
}

/// A ν-collapse: a linear order `X` with an embedding `π : X → ν × D(X)`
/// whose range is cut out by the condition `G_α(τ) ⊆ τ`.
pub trait Collapse: LinearOrder {
    type Dil: Predilator;

    fn dilator(&self) -> &Self::Dil;

    fn nu(&self) -> &Nu;

    /// `π(t)`, for elements of the order.
    fn pi(&self, t: &Self::Elem) -> (NuElem, Nf<Self::Dil, Self::Elem>);

    /// The partial inverse of `π`.
    fn psi_inv(&self, alpha: NuElem, tau: &Nf<Self::Dil, Self::Elem>) -> Option<Self::Elem>;

    /// The `⊲`-predecessors of `t`: the support of the `D`-component of
    /// `π(t)`.
    fn subterms(&self, t: &Self::Elem) -> Vec<Self::Elem> {
        self.pi(t).1.support
    }
}

impl<D: Predilator> Collapse for PsiSystem<D> {
    type Dil = D;

    fn dilator(&self) -> &D {
        &self.dil
    }

    fn nu(&self) -> &Nu {
        &self.nu
    }

    fn pi(&self, t: &Term<D>) -> (NuElem, PsiNf<D>) {
        (t.alpha(), self.payload(t))
    }

    fn psi_inv(&self, alpha: NuElem, tau: &PsiNf<D>) -> Option<Term<D>> {
        self.psi_inverse(alpha, tau)
    }

    fn subterms(&self, t: &Term<D>) -> Vec<Term<D>> {
        t.children().to_vec()
    }
}

type CNf<C> = Nf<<C as Collapse>::Dil, <C as LinearOrder>::Elem>;

fn push_new<T: Element>(out: &mut Vec<T>, seen: &mut HashSet<T>, v: T) {
    if seen.insert(v.clone()) {
        out.push(v);
    }
}

/// `G^D_γ(t) = {τ} ∪ G_γ(τ)` when `π(t) = (α, τ)` with `α ≥ γ`, else `∅`.
pub fn g_dil<C: Collapse>(c: &C, gamma: NuElem, t: &C::Elem) -> Vec<CNf<C>> {
    let mut out = Vec::new();
    g_dil_into(c, gamma, t, &mut out, &mut HashSet::new());
    out
}

/// `G_γ(τ) = ⋃ { G^D_γ(s) | s ∈ supp τ }`.
pub fn g_of<C: Collapse>(c: &C, gamma: NuElem, tau: &CNf<C>) -> Vec<CNf<C>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for s in &tau.support {
        g_dil_into(c, gamma, s, &mut out, &mut seen);
    }
    out
}

fn g_dil_into<C: Collapse>(c: &C, gamma: NuElem, t: &C::Elem, out: &mut Vec<CNf<C>>, seen: &mut HashSet<CNf<C>>) {
    let (alpha, tau) = c.pi(t);
    if alpha < gamma {
        return;
    }
    for s in &tau.support {
        g_dil_into(c, gamma, s, out, seen);
    }
    push_new(out, seen, tau);
}

/// `E^D_α(t) = {t}` when `π(t) = (γ, τ)` with `γ ≤ α`, else `E_α(τ)`.
pub fn e_dil<C: Collapse>(c: &C, alpha: NuElem, t: &C::Elem) -> Vec<C::Elem> {
    let mut out = Vec::new();
    e_dil_into(c, alpha, t, &mut out, &mut HashSet::new());
    out
}

/// `E_α(τ) = ⋃ { E^D_α(s) | s ∈ supp τ }`.
pub fn e_of<C: Collapse>(c: &C, alpha: NuElem, tau: &CNf<C>) -> Vec<C::Elem> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for s in &tau.support {
        e_dil_into(c, alpha, s, &mut out, &mut seen);
    }
    out
}

fn e_dil_into<C: Collapse>(c: &C, alpha: NuElem, t: &C::Elem, out: &mut Vec<C::Elem>, seen: &mut HashSet<C::Elem>) {
    let (gamma, tau) = c.pi(t);
    if gamma <= alpha {
        push_new(out, seen, t.clone());
        return;
    }
    for s in &tau.support {
        e_dil_into(c, alpha, s, out, seen);
    }
}

/// Whether `G_α(τ) ⊆ τ`, i.e. every element of `G_α(τ)` lies below `τ`.
pub fn range_condition<C: Collapse>(c: &C, alpha: NuElem, tau: &CNf<C>) -> bool {
    g_of(c, alpha, tau)
        .iter()
        .all(|g| element_compare(c.dilator(), c, g, tau) == Ordering::Less)
}

/// Checks, for each sampled pair, that `ψ⁻¹(α, τ)` is defined exactly when
/// the range condition holds, and that `π` sends the preimage back.
pub fn check_range_condition<C: Collapse>(c: &C, sample: &[(NuElem, CNf<C>)]) -> Report {
    let mut report = Report::new("range condition");
    for (alpha, tau) in sample {
        let inv = c.psi_inv(*alpha, tau);
        let cond = range_condition(c, *alpha, tau);
        report.record("preimage exists iff G_a(tau) below tau", inv.is_some() == cond, || {
            format!(
                "alpha={alpha}, tau={tau:?}: preimage {}, condition {}",
                if inv.is_some() { "defined" } else { "undefined" },
                cond
            )
        });
        if let Some(t) = inv {
            let (a2, t2) = c.pi(&t);
            report.record("pi inverts the preimage", a2 == *alpha && t2 == *tau, || {
                format!("pi(psi_inv({alpha}, {tau:?})) = ({a2}, {t2:?})")
            });
        }
    }
    report
}

/// The `(α, τ)` grid over a fragment: every `α` up to `max_alpha` in `ν`,
/// and every `τ` whose support is a set of fragment elements of size at most
/// `max_arity` and whose trace has payload size at most `max_payload`.
pub fn range_grid<C: Collapse>(
    c: &C,
    fragment: &[C::Elem],
    max_alpha: usize,
    max_arity: usize,
    max_payload: usize,
) -> Vec<(NuElem, CNf<C>)> {
    let mut alphas = c.nu().enumerate(max_alpha);
    alphas.sort();
    let mut sorted = fragment.to_vec();
    sort_by_cmp(&mut sorted, &mut |a, b| c.compare(a, b));
    let mut out = Vec::new();
    for arity in 0..=max_arity.min(sorted.len()) {
        let traces = trace_enumerate(c.dilator(), arity, max_payload);
        if traces.is_empty() {
            continue;
        }
        for idx in crate::order::all_embeddings(arity, sorted.len()) {
            let support: Vec<C::Elem> = idx.iter().map(|&i| sorted[i].clone()).collect();
            for tr in &traces {
                for &alpha in &alphas {
                    out.push((alpha, DilElem { trace: tr.clone(), support: support.clone() }));
                }
            }
        }
    }
    out
}

/// The E-basic properties on a fragment: (a) `s ∈ E^D_β(t)` and `α ≤ β`
/// give `E^D_α(s) ⊆ E^D_α(t)`; (b) `π(t) = (α, τ)` gives `E_α(τ)` below `t`;
/// (c) if `(α, τ)` is in the range of `π` then so is `(β, τ)` for `β ≥ α`.
pub fn check_e_basic<C: Collapse>(c: &C, fragment: &[C::Elem], max_alpha: usize) -> Report {
    let mut report = Report::new("E-basic properties");
    let mut alphas = c.nu().enumerate(max_alpha);
    alphas.sort();
    for t in fragment {
        let (at, tau) = c.pi(t);
        for (bi, &beta) in alphas.iter().enumerate() {
            let eb: Vec<C::Elem> = e_dil(c, beta, t);
            for &alpha in &alphas[..=bi] {
                let et: HashSet<C::Elem> = e_dil(c, alpha, t).into_iter().collect();
                for s in &eb {
                    let es = e_dil(c, alpha, s);
                    report.record("(a) E_a(s) within E_a(t)", es.iter().all(|r| et.contains(r)), || {
                        format!("s={s:?} in E_{beta}(t={t:?}) but E_{alpha}(s) not within E_{alpha}(t)")
                    });
                }
            }
        }
        let below = e_of(c, at, &tau);
        report.record("(b) E_a(tau) below t", below.iter().all(|r| c.less(r, t)), || {
            format!("pi(t)=({at}, {tau:?}) for t={t:?}")
        });
        for &beta in alphas.iter().filter(|b| **b >= at) {
            report.record("(c) range closed upwards in alpha", c.psi_inv(beta, &tau).is_some(), || {
                format!("({at}, tau) in range but ({beta}, tau) is not, t={t:?}")
            });
        }
    }
    report
}

/// Checks the collapse laws on a fragment of members: `π` is an order
/// embedding on all pairs, `⊲` is the support of the payload and is acyclic,
/// and `π` of each element lies in the range condition.
pub fn check_collapse_on<C: Collapse>(c: &C, fragment: &[C::Elem]) -> Report {
    let mut report = Report::new("collapse laws");
    let pis: Vec<(NuElem, CNf<C>)> = fragment.iter().map(|t| c.pi(t)).collect();
    for (i, s) in fragment.iter().enumerate() {
        for (j, t) in fragment.iter().enumerate() {
            let direct = c.compare(s, t);
            let via = pis[i].0.cmp(&pis[j].0).then_with(|| element_compare(c.dilator(), c, &pis[i].1, &pis[j].1));
            report.record("pi is an order embedding", direct == via, || {
                format!("{s:?} vs {t:?}: {direct:?} but images compare {via:?}")
            });
        }
    }
    for (t, (alpha, tau)) in fragment.iter().zip(&pis) {
        report.record("pi lands in the range", range_condition(c, *alpha, tau), || {
            format!("pi({t:?}) violates the range condition")
        });
        let mut stack = c.subterms(t);
        let mut steps = 0usize;
        let mut acyclic = true;
        while let Some(s) = stack.pop() {
            if s == *t {
                acyclic = false;
                break;
            }
            steps += 1;
            if steps > 1_000_000 {
                acyclic = false;
                break;
            }
            stack.extend(c.subterms(&s));
        }
        report.record("subterm relation is acyclic", acyclic, || format!("{t:?} is its own ancestor"));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilator::{Affine, Omega};
    use crate::syntax::parse_all;

    fn omega_sys() -> PsiSystem<Omega> {
        PsiSystem::new(Nu::omega_plus(1), Omega)
    }

    #[test]
    fn measures() {
        let p = omega_sys();
        let z = p.make_term(NuElem::ZERO, vec![], vec![]).unwrap();
        assert_eq!(z.l_measure(), 1);
        let one = p.make_term(NuElem::ZERO, vec![z.clone()], vec![0]).unwrap();
        assert_eq!(one.l_measure(), 3);
        let two = p.make_term(NuElem::ZERO, vec![z.clone(), one.clone()], vec![1, 0]).unwrap();
        assert_eq!(two.l_measure(), 9);
    }

    #[test]
    fn make_term_validates() {
        let p = omega_sys();
        let z = p.make_term(NuElem::ZERO, vec![], vec![]).unwrap();
        assert_eq!(p.make_term(NuElem::ZERO, vec![z.clone()], vec![1, 0]), Err(PsiError::NotATrace(1)));
        assert!(p.make_term(NuElem::ZERO, vec![z.clone()], vec![0, 0]).is_ok());
        assert!(p.make_term(NuElem::omega_plus(1, 1), vec![], vec![]).is_err());
        assert_eq!(p.make_term(NuElem::ZERO, vec![z.clone(), z], vec![1, 0]), Err(PsiError::DuplicateChild));
    }

    #[test]
    fn membership_examples() {
        let p = omega_sys();
        let t0 = p.make_term(NuElem::ZERO, vec![], vec![]).unwrap();
        let t1 = p.make_term(NuElem::nat(1), vec![], vec![]).unwrap();
        assert_eq!(p.compare(&t0, &t1), Ordering::Less);
        let s = p.make_term(NuElem::ZERO, vec![t1.clone()], vec![0]).unwrap();
        assert_eq!(p.compare(&t0, &s), Ordering::Less);
        assert!(p.is_member(&t0) && p.is_member(&s));
        assert_eq!(p.g_plus(NuElem::nat(2), &t1), vec![]);
        assert_eq!(p.g_plus(NuElem::ZERO, &t1), vec![p.payload(&t1)]);
        let g = p.g_plus(NuElem::ZERO, &s);
        assert_eq!(g.len(), 2);
        let bad = p.make_term(NuElem::ZERO, vec![s.clone()], vec![0]).unwrap();
        assert!(!p.is_member(&bad));
        assert!(p.psi_inverse(NuElem::ZERO, &p.payload(&bad)).is_none());
        assert!(p.psi_inverse(NuElem::nat(1), &p.payload(&bad)).is_some());
        let (a, tau) = p.pi_collapse(&s).unwrap();
        assert_eq!(a, NuElem::ZERO);
        assert_eq!(tau.support, vec![t1.clone()]);
        let g0 = g_of(&p, NuElem::ZERO, &DilElem { trace: vec![0], support: vec![t1.clone()] });
        assert_eq!(g0, vec![p.payload(&t1)]);
        let e0 = e_of(&p, NuElem::ZERO, &DilElem { trace: vec![0], support: vec![t1] });
        assert!(e0.is_empty());
    }

    #[test]
    fn cache_is_invisible() {
        let a = omega_sys();
        let b = omega_sys().without_cache();
        let caps = PsiCaps { max_l: 5, max_payload: 2, max_alpha: 2 };
        let (ta, _) = a.generate(caps, false, None);
        for t in &ta {
            assert_eq!(a.is_member(t), b.is_member(t));
        }
    }

    #[test]
    fn enumeration_is_prefix_stable_and_topological() {
        let p = PsiSystem::new(Nu::omega_plus(1), Omega);
        let caps = PsiCaps { max_l: 5, max_payload: 2, max_alpha: 2 };
        let a = p.enumerate_members(20, caps).unwrap();
        let b = p.enumerate_members(21, caps).unwrap();
        assert_eq!(&b[..20], &a[..]);
        for (i, t) in b.iter().enumerate() {
            for c in t.children() {
                assert!(b[..i].contains(c));
            }
        }
        let aff = PsiSystem::new(Nu::finite(1), Affine::new(1));
        let first = aff.enumerate_members(1, PsiCaps::default()).unwrap();
        assert!(first[0].children().is_empty());
    }

    #[test]
    fn text_roundtrip() {
        let p = omega_sys();
        let t = parse_all("p[w]({}; w[])", |c| p.parse_term(c)).unwrap();
        assert_eq!(t.alpha(), NuElem::omega_plus(1, 0));
        let s = parse_all("p[0]({p[1]({}; w[])}; w[0,0])", |c| p.parse_term(c)).unwrap();
        assert_eq!(p.term_text(&s), "p[0]({p[1]({}; w[])}; w[0,0])");
        assert!(parse_all("p[0]({}; w[0])", |c| p.parse_term(c)).is_err());
    }
}
