//! The term order Γ(X): strongly critical terms `Γ_x`, binary Veblen terms
//! `φ̄st`, and non-increasing sums `⟨t₀,…,t_{n−1}⟩`, together with the
//! comparison, supports, the functorial action, the total Veblen function,
//! addition, and `t ↦ ω·t`.
//!
//! Terms are kept in checked form. Every [`GammaTerm`] that leaves this
//! module satisfies the side conditions on `φ̄st` and on sums, so equality of
//! terms is syntactic equality.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use crate::order::{check_order_table, sort_by_cmp, sort_dedup, LinearOrder, OrderViolation};
use crate::syntax::{Cursor, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node<E> {
    Zero,
    Sc(E),
    Pv(Arc<(GammaTerm<E>, GammaTerm<E>)>),
    Seq(Arc<[GammaTerm<E>]>),
}

/// A member of Γ(X) over points of type `E`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaTerm<E>(Node<E>);

/// Borrowed view of a term's head constructor.
#[derive(Debug, Clone, Copy)]
pub enum View<'a, E> {
    Zero,
    Sc(&'a E),
    Pv(&'a GammaTerm<E>, &'a GammaTerm<E>),
    Seq(&'a [GammaTerm<E>]),
}

/// The relaxed term class: same shapes, no side conditions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PreTerm<E> {
    Zero,
    Sc(E),
    Pv(Box<PreTerm<E>>, Box<PreTerm<E>>),
    Seq(Vec<PreTerm<E>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("point {0} is not in the base order")]
    UnknownPoint(String),
    #[error("pv(s,t) needs h(t) <= s")]
    HeightTooLarge,
    #[error("pv(s,0) is not a term when s is strongly critical")]
    CriticalWithZero,
    #[error("sum entry {0} is not additively principal")]
    NotPrincipal(usize),
    #[error("sum entries increase at position {0}")]
    Increasing(usize),
    #[error("image of an embedding is not increasing")]
    NotEmbedding,
}

impl<E> GammaTerm<E> {
    pub const ZERO: GammaTerm<E> = GammaTerm(Node::Zero);

    pub fn view(&self) -> View<'_, E> {
        match &self.0 {
            Node::Zero => View::Zero,
            Node::Sc(x) => View::Sc(x),
            Node::Pv(p) => View::Pv(&p.0, &p.1),
            Node::Seq(v) => View::Seq(v),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Node::Zero)
    }

    /// Membership in the class SC of strongly critical terms.
    pub fn is_sc(&self) -> bool {
        matches!(self.0, Node::Sc(_))
    }

    /// Membership in the class H of additively principal terms.
    pub fn is_h(&self) -> bool {
        matches!(self.0, Node::Sc(_) | Node::Pv(_))
    }

    /// The entries of the term read as a sum: `0` is empty and an H-term is
    /// its own single entry.
    pub fn entries(&self) -> &[GammaTerm<E>] {
        match &self.0 {
            Node::Zero => &[],
            Node::Seq(v) => v,
            _ => std::slice::from_ref(self),
        }
    }

    pub fn l_measure(&self) -> usize {
        match &self.0 {
            Node::Zero | Node::Sc(_) => 0,
            Node::Pv(p) => p.0.l_measure() + p.1.l_measure() + 1,
            Node::Seq(v) => v.iter().map(GammaTerm::l_measure).sum::<usize>() + 1,
        }
    }

    /// Length of the longest sum occurring anywhere in the term.
    pub fn max_seq_len(&self) -> usize {
        match &self.0 {
            Node::Zero | Node::Sc(_) => 0,
            Node::Pv(p) => p.0.max_seq_len().max(p.1.max_seq_len()),
            Node::Seq(v) => v.iter().map(GammaTerm::max_seq_len).fold(v.len(), usize::max),
        }
    }
}

impl<E: Clone> GammaTerm<E> {
    pub fn sc(x: E) -> Self {
        GammaTerm(Node::Sc(x))
    }

    /// The value of `h`: `Γ_x` for `Γ_x`, `s` for `φ̄st`, `0` otherwise.
    pub fn h(&self) -> GammaTerm<E> {
        match &self.0 {
            Node::Sc(_) => self.clone(),
            Node::Pv(p) => p.0.clone(),
            _ => GammaTerm(Node::Zero),
        }
    }

    pub(crate) fn pv_unchecked(s: GammaTerm<E>, t: GammaTerm<E>) -> Self {
        GammaTerm(Node::Pv(Arc::new((s, t))))
    }

    /// Reassembles a term from sum entries; entries must be H-terms in
    /// non-increasing order.
    pub(crate) fn from_entries(mut entries: Vec<GammaTerm<E>>) -> Self {
        match entries.len() {
            0 => GammaTerm(Node::Zero),
            1 => entries.pop().unwrap(),
            _ => GammaTerm(Node::Seq(entries.into())),
        }
    }

    pub fn to_pre(&self) -> PreTerm<E> {
        match &self.0 {
            Node::Zero => PreTerm::Zero,
            Node::Sc(x) => PreTerm::Sc(x.clone()),
            Node::Pv(p) => PreTerm::Pv(Box::new(p.0.to_pre()), Box::new(p.1.to_pre())),
            Node::Seq(v) => PreTerm::Seq(v.iter().map(GammaTerm::to_pre).collect()),
        }
    }

    /// Structural relabeling; the action `Γ(f)` when `f` is an embedding.
    pub fn map<F>(&self, f: &mut dyn FnMut(&E) -> F) -> GammaTerm<F> {
        GammaTerm(match &self.0 {
            Node::Zero => Node::Zero,
            Node::Sc(x) => Node::Sc(f(x)),
            Node::Pv(p) => Node::Pv(Arc::new((p.0.map(f), p.1.map(f)))),
            Node::Seq(v) => Node::Seq(v.iter().map(|t| t.map(f)).collect()),
        })
    }

    /// Every point occurring in the term, with repetitions.
    pub fn points(&self) -> Vec<E> {
        let mut out = Vec::new();
        self.collect_points(&mut out);
        out
    }

    fn collect_points(&self, out: &mut Vec<E>) {
        match &self.0 {
            Node::Zero => {}
            Node::Sc(x) => out.push(x.clone()),
            Node::Pv(p) => {
                p.0.collect_points(out);
                p.1.collect_points(out);
            }
            Node::Seq(v) => v.iter().for_each(|t| t.collect_points(out)),
        }
    }

    /// Whether this is `nat(k)` for some `k ≥ 2`; returns `k`.
    fn as_long_nat(&self) -> Option<usize> {
        match &self.0 {
            Node::Seq(v) if v.iter().all(GammaTerm::is_phi00) => Some(v.len()),
            _ => None,
        }
    }

    fn is_phi00(&self) -> bool {
        matches!(&self.0, Node::Pv(p) if p.0.is_zero() && p.1.is_zero())
    }

    /// Prints the canonical text form.
    pub fn write(&self, out: &mut String, pt: &mut dyn FnMut(&E, &mut String)) {
        match &self.0 {
            Node::Zero => out.push('0'),
            Node::Sc(x) => {
                out.push_str("G(");
                pt(x, out);
                out.push(')');
            }
            Node::Pv(p) => {
                out.push_str("pv(");
                p.0.write(out, pt);
                out.push(',');
                p.1.write(out, pt);
                out.push(')');
            }
            Node::Seq(v) => {
                if let Some(k) = self.as_long_nat() {
                    out.push_str(&format!("n:{k}"));
                    return;
                }
                out.push('<');
                for (i, t) in v.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    t.write(out, pt);
                }
                out.push('>');
            }
        }
    }

    pub fn to_text(&self, pt: &mut dyn FnMut(&E, &mut String)) -> String {
        let mut s = String::new();
        self.write(&mut s, pt);
        s
    }
}

impl<E> PreTerm<E> {
    pub fn l_measure(&self) -> usize {
        match self {
            PreTerm::Zero | PreTerm::Sc(_) => 0,
            PreTerm::Pv(s, t) => s.l_measure() + t.l_measure() + 1,
            PreTerm::Seq(v) => v.iter().map(PreTerm::l_measure).sum::<usize>() + 1,
        }
    }

    pub fn map<F>(&self, f: &mut dyn FnMut(&E) -> F) -> PreTerm<F> {
        match self {
            PreTerm::Zero => PreTerm::Zero,
            PreTerm::Sc(x) => PreTerm::Sc(f(x)),
            PreTerm::Pv(s, t) => PreTerm::Pv(Box::new(s.map(f)), Box::new(t.map(f))),
            PreTerm::Seq(v) => PreTerm::Seq(v.iter().map(|t| t.map(f)).collect()),
        }
    }
}

/// Comparison results at two bits per pair.
struct PackedTable {
    n: usize,
    bits: Vec<u8>,
}

impl PackedTable {
    fn new(n: usize) -> Self {
        PackedTable { n, bits: vec![0; (n * n).div_ceil(4)] }
    }

    fn get(&self, i: usize, j: usize) -> Ordering {
        let k = i * self.n + j;
        match (self.bits[k / 4] >> (2 * (k % 4))) & 3 {
            0 => Ordering::Less,
            1 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    fn set(&mut self, i: usize, j: usize, o: Ordering) {
        let k = i * self.n + j;
        let v = (o as i8 + 1) as u8;
        let b = &mut self.bits[k / 4];
        *b = (*b & !(3 << (2 * (k % 4)))) | (v << (2 * (k % 4)));
    }
}

/// Γ(X) for a fixed base order `X`.
#[derive(Debug, Clone)]
pub struct Gamma<X> {
    pub base: X,
}

impl<X: LinearOrder> Gamma<X> {
    pub fn new(base: X) -> Self {
        Gamma { base }
    }

    pub fn compare(&self, s: &GammaTerm<X::Elem>, t: &GammaTerm<X::Elem>) -> Ordering {
        self.compare_step(s, t, &mut |a, b| self.compare(a, b))
    }

    pub fn less(&self, s: &GammaTerm<X::Elem>, t: &GammaTerm<X::Elem>) -> bool {
        self.compare(s, t) == Ordering::Less
    }

    pub fn leq(&self, s: &GammaTerm<X::Elem>, t: &GammaTerm<X::Elem>) -> bool {
        self.compare(s, t) != Ordering::Greater
    }

    /// One unfolding of the comparison clauses. Every recursive question is
    /// put to `sub`, and each of its arguments is `s`, `t`, or an immediate
    /// constituent (sum entry or `φ̄` argument) of one of them.
    fn compare_step<F>(&self, s: &GammaTerm<X::Elem>, t: &GammaTerm<X::Elem>, sub: &mut F) -> Ordering
    where
        F: FnMut(&GammaTerm<X::Elem>, &GammaTerm<X::Elem>) -> Ordering,
    {
        if let (Node::Seq(a), Node::Seq(b)) = (&s.0, &t.0) {
            if Arc::ptr_eq(a, b) {
                return Ordering::Equal;
            }
        }
        let (a, b) = (s.entries(), t.entries());
        for (x, y) in a.iter().zip(b) {
            let c = if s.is_h() && t.is_h() {
                self.compare_h(x, y, sub)
            } else {
                sub(x, y)
            };
            match c {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        a.len().cmp(&b.len())
    }

    // Both arguments are in H.
    fn compare_h<F>(&self, r: &GammaTerm<X::Elem>, u: &GammaTerm<X::Elem>, sub: &mut F) -> Ordering
    where
        F: FnMut(&GammaTerm<X::Elem>, &GammaTerm<X::Elem>) -> Ordering,
    {
        let less = |o: Ordering| o == Ordering::Less;
        let leq = |o: Ordering| o != Ordering::Greater;
        let lt = match (&r.0, &u.0) {
            (Node::Pv(p1), Node::Pv(p2)) if Arc::ptr_eq(p1, p2) => return Ordering::Equal,
            (Node::Sc(x), Node::Sc(y)) => return self.base.compare(x, y),
            (Node::Pv(p), Node::Sc(_)) => less(sub(&p.0, u)) && less(sub(&p.1, u)),
            (Node::Sc(_), Node::Pv(p)) => leq(sub(r, &p.0)) || leq(sub(r, &p.1)),
            // lhs = φ̄s't' against rhs = φ̄st: smaller when s' < s and
            // t' < φ̄st, or s' = s and t' < t, or φ̄s't' ≤ t.
            (Node::Pv(p1), Node::Pv(p2)) => {
                let (s1, t1, s2, t2) = (&p1.0, &p1.1, &p2.0, &p2.1);
                match sub(s1, s2) {
                    Ordering::Less => less(sub(t1, u)) || leq(sub(r, t2)),
                    Ordering::Equal => match sub(t1, t2) {
                        Ordering::Less => true,
                        Ordering::Equal => return Ordering::Equal,
                        Ordering::Greater => leq(sub(r, t2)),
                    },
                    Ordering::Greater => leq(sub(r, t2)),
                }
            }
            _ => unreachable!("compare_h on a term outside H"),
        };
        if lt {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Exhaustive linearity check on a finite set of distinct terms closed
    /// under immediate constituents. Comparisons are tabled: each pair is
    /// decided by one unfolding of the clauses whose recursive questions are
    /// looked up in the table, filled in order of increasing `L(s) + L(t)`.
    /// The table thus agrees with [`Gamma::compare`] on every pair.
    pub fn check_linear_exhaustive(
        &self,
        terms: &[GammaTerm<X::Elem>],
    ) -> Result<usize, OrderViolation<GammaTerm<X::Elem>>> {
        let n = terms.len();
        let mut index: HashMap<&GammaTerm<X::Elem>, u32> = HashMap::with_capacity(n);
        for (i, t) in terms.iter().enumerate() {
            if let Some(&j) = index.get(t) {
                return Err(OrderViolation::Irreflexive(terms[j as usize].clone()));
            }
            index.insert(t, i as u32);
        }
        let addr = |t: &GammaTerm<X::Elem>| t as *const GammaTerm<X::Elem> as usize;
        // For each term, the addresses of itself and its constituents.
        let mut slots: Vec<Vec<(usize, u32)>> = Vec::with_capacity(n);
        let mut by_l: Vec<Vec<u32>> = Vec::new();
        for (i, t) in terms.iter().enumerate() {
            let mut v = vec![(addr(t), i as u32)];
            let parts: &[GammaTerm<X::Elem>] = match &t.0 {
                Node::Pv(p) => std::slice::from_ref(&p.0),
                Node::Seq(e) => e,
                _ => &[],
            };
            let second = match &t.0 {
                Node::Pv(p) => Some(&p.1),
                _ => None,
            };
            for c in parts.iter().chain(second) {
                match index.get(c) {
                    Some(&k) => v.push((addr(c), k)),
                    None => return Err(OrderViolation::Inconsistent(t.clone(), c.clone())),
                }
            }
            slots.push(v);
            let l = t.l_measure();
            if by_l.len() <= l {
                by_l.resize(l + 1, Vec::new());
            }
            by_l[l].push(i as u32);
        }
        let mut table = PackedTable::new(n);
        let top = by_l.len();
        for sum in 0..(2 * top).max(1) {
            for la in 0..top.min(sum + 1) {
                let lb = sum - la;
                if lb >= top {
                    continue;
                }
                for &i in &by_l[la] {
                    for &j in &by_l[lb] {
                        let (si, sj) = (&slots[i as usize], &slots[j as usize]);
                        let find = |t: &GammaTerm<X::Elem>| {
                            let a = addr(t);
                            si.iter().chain(sj).find(|s| s.0 == a).map(|s| s.1)
                        };
                        let o = self.compare_step(&terms[i as usize], &terms[j as usize], &mut |a, b| {
                            match (find(a), find(b)) {
                                (Some(x), Some(y)) => table.get(x as usize, y as usize),
                                _ => self.compare(a, b),
                            }
                        });
                        table.set(i as usize, j as usize, o);
                    }
                }
            }
        }
        check_order_table(n, &|i, j| table.get(i, j), &|i, j| i != j, &|i| terms[i].clone())
    }

    /// Decides membership of a pre-term, returning the checked term.
    pub fn check(&self, pre: &PreTerm<X::Elem>) -> Result<GammaTerm<X::Elem>, GammaError> {
        match pre {
            PreTerm::Zero => Ok(GammaTerm(Node::Zero)),
            PreTerm::Sc(x) => {
                if self.base.contains(x) {
                    Ok(GammaTerm::sc(x.clone()))
                } else {
                    Err(GammaError::UnknownPoint(format!("{x:?}")))
                }
            }
            PreTerm::Pv(s, t) => {
                let s = self.check(s)?;
                let t = self.check(t)?;
                self.pv(s, t)
            }
            PreTerm::Seq(v) => {
                let entries = v.iter().map(|e| self.check(e)).collect::<Result<Vec<_>, _>>()?;
                self.seq(entries)
            }
        }
    }

    pub fn is_member(&self, pre: &PreTerm<X::Elem>) -> bool {
        self.check(pre).is_ok()
    }

    /// `φ̄st`, subject to `h(t) ≤ s` and `t ≠ 0 or s ∉ SC`.
    pub fn pv(
        &self,
        s: GammaTerm<X::Elem>,
        t: GammaTerm<X::Elem>,
    ) -> Result<GammaTerm<X::Elem>, GammaError> {
        if !self.leq(&t.h(), &s) {
            return Err(GammaError::HeightTooLarge);
        }
        if t.is_zero() && s.is_sc() {
            return Err(GammaError::CriticalWithZero);
        }
        Ok(GammaTerm::pv_unchecked(s, t))
    }

    /// `⟨t₀,…,t_{n−1}⟩`; lengths 0 and 1 are read as `0` and `t₀`.
    pub fn seq(&self, entries: Vec<GammaTerm<X::Elem>>) -> Result<GammaTerm<X::Elem>, GammaError> {
        for (i, e) in entries.iter().enumerate() {
            if !e.is_h() {
                return Err(GammaError::NotPrincipal(i));
            }
        }
        for (i, w) in entries.windows(2).enumerate() {
            if self.less(&w[0], &w[1]) {
                return Err(GammaError::Increasing(i + 1));
            }
        }
        Ok(GammaTerm::from_entries(entries))
    }

    /// `γ_X(x) = Γ_x`.
    pub fn embed(&self, x: X::Elem) -> GammaTerm<X::Elem> {
        GammaTerm::sc(x)
    }

    /// The support, sorted and without repetitions.
    pub fn support(&self, t: &GammaTerm<X::Elem>) -> Vec<X::Elem> {
        let mut pts = t.points();
        sort_dedup(&self.base, &mut pts);
        pts
    }

    /// The total Veblen function.
    pub fn phi(&self, s: &GammaTerm<X::Elem>, t: &GammaTerm<X::Elem>) -> GammaTerm<X::Elem> {
        if self.less(s, &t.h()) {
            t.clone()
        } else if s.is_sc() && t.is_zero() {
            s.clone()
        } else {
            GammaTerm::pv_unchecked(s.clone(), t.clone())
        }
    }

    pub fn add(&self, s: &GammaTerm<X::Elem>, t: &GammaTerm<X::Elem>) -> GammaTerm<X::Elem> {
        let (a, b) = (s.entries(), t.entries());
        let (m, n) = (a.len(), b.len());
        let i = if m == 0 || n == 0 || self.leq(&b[0], &a[m - 1]) {
            m
        } else {
            (0..m).find(|&i| self.less(&a[i], &b[0])).unwrap_or(m)
        };
        let mut out = a[..i].to_vec();
        out.extend_from_slice(b);
        GammaTerm::from_entries(out)
    }

    /// The natural number `n` as `n` copies of `φ̄00`.
    pub fn nat(&self, n: usize) -> GammaTerm<X::Elem> {
        let one = GammaTerm::pv_unchecked(GammaTerm::ZERO, GammaTerm::ZERO);
        GammaTerm::from_entries(vec![one; n])
    }

    pub fn omega_times(&self, t: &GammaTerm<X::Elem>) -> GammaTerm<X::Elem> {
        match &t.0 {
            Node::Zero | Node::Sc(_) => t.clone(),
            Node::Pv(p) if p.0.is_zero() => {
                let succ = self.add(&self.nat(1), &p.1);
                self.phi(&GammaTerm::ZERO, &succ)
            }
            Node::Pv(_) => t.clone(),
            Node::Seq(v) => GammaTerm::from_entries(v.iter().map(|e| self.omega_times(e)).collect()),
        }
    }

    /// `Γ(f)` with a check that `f` is increasing on the support.
    pub fn map_into<Y: LinearOrder>(
        &self,
        target: &Gamma<Y>,
        t: &GammaTerm<X::Elem>,
        f: &mut dyn FnMut(&X::Elem) -> Y::Elem,
    ) -> Result<GammaTerm<Y::Elem>, GammaError> {
        let supp = self.support(t);
        let images: Vec<Y::Elem> = supp.iter().map(&mut *f).collect();
        if images.windows(2).any(|w| !target.base.less(&w[0], &w[1])) {
            return Err(GammaError::NotEmbedding);
        }
        Ok(t.map(f))
    }

    /// All members of Γ(X) with support in `points`, `L ≤ max_l`, and no sum
    /// longer than `max_seq_len`, grouped by `L`.
    ///
    /// Sums of strongly critical terms have `L = 1` at any length, so the
    /// length cap is what makes the fragment finite.
    pub fn enumerate(
        &self,
        points: &[X::Elem],
        max_l: usize,
        max_seq_len: usize,
    ) -> Vec<GammaTerm<X::Elem>> {
        let mut levels: Vec<Vec<GammaTerm<X::Elem>>> = Vec::new();
        let mut level0 = vec![GammaTerm(Node::Zero)];
        level0.extend(points.iter().map(|x| GammaTerm::sc(x.clone())));
        levels.push(level0);
        for l in 1..=max_l {
            let mut cur = Vec::new();
            for ls in 0..l {
                let lt = l - 1 - ls;
                for s in &levels[ls] {
                    for t in &levels[lt] {
                        if let Ok(p) = self.pv(s.clone(), t.clone()) {
                            cur.push(p);
                        }
                    }
                }
            }
            // Sums: H-terms of smaller measure, in descending order.
            let mut hs: Vec<GammaTerm<X::Elem>> = levels[..l]
                .iter()
                .flatten()
                .filter(|t| t.is_h())
                .cloned()
                .collect();
            sort_by_cmp(&mut hs, &mut |a, b| self.compare(b, a));
            let mut stack = Vec::new();
            self.sums(&hs, 0, l - 1, max_seq_len, &mut stack, &mut cur);
            levels.push(cur);
        }
        levels.into_iter().flatten().collect()
    }

    fn sums(
        &self,
        hs: &[GammaTerm<X::Elem>],
        from: usize,
        budget: usize,
        cap: usize,
        stack: &mut Vec<GammaTerm<X::Elem>>,
        out: &mut Vec<GammaTerm<X::Elem>>,
    ) {
        if budget == 0 && stack.len() >= 2 {
            out.push(GammaTerm::from_entries(stack.clone()));
        }
        if stack.len() == cap {
            return;
        }
        for (j, h) in hs.iter().enumerate().skip(from) {
            let l = h.l_measure();
            if l <= budget {
                stack.push(h.clone());
                self.sums(hs, j, budget - l, cap, stack, out);
                stack.pop();
            }
        }
    }

    /// Every pre-term shape with `L ≤ max_l`, including non-members.
    pub fn enumerate_pre(
        &self,
        points: &[X::Elem],
        max_l: usize,
        max_seq_len: usize,
    ) -> Vec<PreTerm<X::Elem>> {
        let mut levels: Vec<Vec<PreTerm<X::Elem>>> = Vec::new();
        let mut level0 = vec![PreTerm::Zero];
        level0.extend(points.iter().map(|x| PreTerm::Sc(x.clone())));
        levels.push(level0);
        for l in 1..=max_l {
            let mut cur = Vec::new();
            for ls in 0..l {
                for s in &levels[ls] {
                    for t in &levels[l - 1 - ls] {
                        cur.push(PreTerm::Pv(Box::new(s.clone()), Box::new(t.clone())));
                    }
                }
            }
            let smaller: Vec<PreTerm<X::Elem>> = levels[..l].iter().flatten().cloned().collect();
            let mut stack = Vec::new();
            pre_sums(&smaller, l - 1, max_seq_len, &mut stack, &mut cur);
            levels.push(cur);
        }
        levels.into_iter().flatten().collect()
    }

    /// A pseudo-random member assembled from `0`, `Γ_x`, naturals, `φ`, `+`
    /// and `ω·`, which are total on Γ(X). `pick(n)` must return a value below
    /// `n`.
    pub fn random_member(
        &self,
        points: &[X::Elem],
        depth: usize,
        pick: &mut dyn FnMut(usize) -> usize,
    ) -> GammaTerm<X::Elem> {
        let leaf = |pick: &mut dyn FnMut(usize) -> usize| match pick(3) {
            0 => GammaTerm(Node::Zero),
            1 if !points.is_empty() => GammaTerm::sc(points[pick(points.len())].clone()),
            _ => self.nat(1 + pick(2)),
        };
        if depth == 0 {
            return leaf(pick);
        }
        match pick(5) {
            0 => leaf(pick),
            1 | 2 => {
                let s = self.random_member(points, depth - 1, pick);
                let t = self.random_member(points, depth - 1, pick);
                self.phi(&s, &t)
            }
            3 => {
                let s = self.random_member(points, depth - 1, pick);
                let t = self.random_member(points, depth - 1, pick);
                self.add(&s, &t)
            }
            _ => {
                let t = self.random_member(points, depth - 1, pick);
                self.omega_times(&t)
            }
        }
    }

    /// Parses the term grammar: `0`, `G(x)`, `pv(s,t)`, `<t1,...,tn>`,
    /// `phi(s,t)`, `add(s,t)`, `w*(t)`, `n:k`.
    pub fn parse(
        &self,
        c: &mut Cursor<'_>,
        pt: &mut dyn FnMut(&mut Cursor<'_>) -> Result<X::Elem, ParseError>,
    ) -> Result<GammaTerm<X::Elem>, ParseError> {
        let start = c.pos();
        let wrap = |e: GammaError| ParseError::Invalid { pos: start, message: e.to_string() };
        if c.eat("0") {
            Ok(GammaTerm::ZERO)
        } else if c.eat("G(") {
            let x = pt(c)?;
            c.expect(")")?;
            if !self.base.contains(&x) {
                return Err(wrap(GammaError::UnknownPoint(format!("{x:?}"))));
            }
            Ok(GammaTerm::sc(x))
        } else if c.eat("pv(") {
            let (s, t) = self.parse_pair(c, pt)?;
            self.pv(s, t).map_err(wrap)
        } else if c.eat("phi(") {
            let (s, t) = self.parse_pair(c, pt)?;
            Ok(self.phi(&s, &t))
        } else if c.eat("add(") {
            let (s, t) = self.parse_pair(c, pt)?;
            Ok(self.add(&s, &t))
        } else if c.eat("w*(") {
            let t = self.parse(c, pt)?;
            c.expect(")")?;
            Ok(self.omega_times(&t))
        } else if c.eat("n:") {
            Ok(self.nat(c.usize()?))
        } else if c.eat("<") {
            let entries = c.list(">", &mut |c| self.parse(c, pt))?;
            if entries.len() < 2 {
                return Err(c.invalid("a sum needs at least two entries"));
            }
            self.seq(entries).map_err(wrap)
        } else {
            Err(c.error("a term ('0', 'G(', 'pv(', 'phi(', 'add(', 'w*(', 'n:' or '<')"))
        }
    }

    fn parse_pair(
        &self,
        c: &mut Cursor<'_>,
        pt: &mut dyn FnMut(&mut Cursor<'_>) -> Result<X::Elem, ParseError>,
    ) -> Result<(GammaTerm<X::Elem>, GammaTerm<X::Elem>), ParseError> {
        let s = self.parse(c, pt)?;
        c.expect(",")?;
        let t = self.parse(c, pt)?;
        c.expect(")")?;
        Ok((s, t))
    }
}

fn pre_sums<E: Clone>(
    items: &[PreTerm<E>],
    budget: usize,
    cap: usize,
    stack: &mut Vec<PreTerm<E>>,
    out: &mut Vec<PreTerm<E>>,
) {
    if budget == 0 && stack.len() >= 2 {
        out.push(PreTerm::Seq(stack.clone()));
    }
    if stack.len() == cap {
        return;
    }
    for it in items {
        let l = it.l_measure();
        if l <= budget {
            stack.push(it.clone());
            pre_sums(items, budget - l, cap, stack, out);
            stack.pop();
        }
    }
}

impl<X: LinearOrder> LinearOrder for Gamma<X> {
    type Elem = GammaTerm<X::Elem>;

    fn compare(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering {
        Gamma::compare(self, a, b)
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        self.is_member(&a.to_pre())
    }

    fn enumerate(&self, budget: usize) -> Vec<Self::Elem> {
        let mut pts = self.base.enumerate(budget);
        sort_dedup(&self.base, &mut pts);
        let mut out = self.enumerate(&pts, budget, 3);
        let mut seen = HashSet::new();
        out.retain(|t| seen.insert(t.clone()));
        out
    }

    fn label(&self) -> String {
        format!("Gamma({})", self.base.label())
    }
}

/// Writes a point of a finite order as a variable `x{i}`.
pub fn write_var(i: &usize, out: &mut String) {
    out.push('x');
    out.push_str(&i.to_string());
}

/// Parses a variable `x{i}`.
pub fn parse_var(c: &mut Cursor<'_>) -> Result<usize, ParseError> {
    c.expect("x")?;
    c.usize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::FiniteOrder;
    use crate::syntax::parse_all;

    fn g2() -> Gamma<FiniteOrder> {
        Gamma::new(FiniteOrder::new(2))
    }

    fn text(t: &GammaTerm<usize>) -> String {
        t.to_text(&mut write_var)
    }

    fn parse(s: &str) -> Result<GammaTerm<usize>, ParseError> {
        let g = g2();
        parse_all(s, |c| g.parse(c, &mut parse_var))
    }

    #[test]
    fn l_measure_examples() {
        let g = g2();
        assert_eq!(GammaTerm::<usize>::ZERO.l_measure(), 0);
        assert_eq!(g.nat(1).l_measure(), 1);
        assert_eq!(g.nat(2).l_measure(), 3);
    }

    #[test]
    fn side_conditions() {
        let g = g2();
        let z = PreTerm::Zero;
        let pv = |s: PreTerm<usize>, t: PreTerm<usize>| PreTerm::Pv(Box::new(s), Box::new(t));
        assert!(!g.is_member(&pv(PreTerm::Sc(0), z.clone())));
        assert!(g.is_member(&pv(z.clone(), z.clone())));
        assert!(g.is_member(&pv(z.clone(), pv(z.clone(), z.clone()))));
        // h(φ̄(φ̄00)0) = φ̄00 is not below 0.
        let inner = pv(pv(z.clone(), z.clone()), z.clone());
        assert!(!g.is_member(&pv(z.clone(), inner)));
        assert!(!g.is_member(&PreTerm::Seq(vec![PreTerm::Sc(0), PreTerm::Sc(1)])));
        assert!(!g.is_member(&PreTerm::Sc(5)));
    }

    #[test]
    fn comparison_examples() {
        let g = g2();
        let one = g.nat(1);
        let s = GammaTerm::sc(0);
        let t = g.pv(s.clone(), one.clone()).unwrap();
        assert!(g.less(&GammaTerm::ZERO, &one));
        assert!(g.less(&s, &t) && g.less(&one, &t));
        assert!(g.less(&GammaTerm::sc(0), &GammaTerm::sc(1)));
        // φ̄ 0 (φ̄ Γ0 1) against φ̄ Γ0 1: s' < s and t' = φ̄st is not below φ̄st,
        // so the third bullet decides: φ̄s't' ≤ t fails and the result is GT.
        let u = g.pv(GammaTerm::ZERO, t.clone());
        assert!(u.is_err());
        let small = g.pv(GammaTerm::ZERO, one.clone()).unwrap();
        assert!(g.less(&small, &t));
    }

    #[test]
    fn h_values() {
        let g = g2();
        let x = GammaTerm::sc(1usize);
        assert_eq!(x.h(), x);
        let t = g.pv(x.clone(), g.nat(1)).unwrap();
        assert_eq!(t.h(), x);
        assert!(g.nat(2).h().is_zero());
    }

    #[test]
    fn support_and_map() {
        let g = g2();
        let t = g.pv(GammaTerm::sc(0), GammaTerm::sc(1)).unwrap_err();
        assert_eq!(t, GammaError::HeightTooLarge);
        let t = g.pv(GammaTerm::sc(1), GammaTerm::sc(0)).unwrap();
        assert_eq!(g.support(&t), vec![0, 1]);
        assert_eq!(g.support(&GammaTerm::ZERO), Vec::<usize>::new());
        let y = Gamma::new(FiniteOrder::new(4));
        let m = g.map_into(&y, &t, &mut |x| x + 2).unwrap();
        assert_eq!(y.support(&m), vec![2, 3]);
        assert!(g.map_into(&y, &t, &mut |x| 3 - x).is_err());
    }

    #[test]
    fn veblen_cases() {
        let g = g2();
        let x = GammaTerm::sc(0usize);
        assert_eq!(g.phi(&x, &GammaTerm::ZERO), x);
        assert_eq!(text(&g.phi(&GammaTerm::ZERO, &GammaTerm::ZERO)), "pv(0,0)");
        let big = g.phi(&g.nat(1), &GammaTerm::ZERO);
        assert_eq!(g.phi(&GammaTerm::ZERO, &big), big);
    }

    #[test]
    fn addition_and_naturals() {
        let g = g2();
        for m in 0..4 {
            for n in 0..4 {
                assert_eq!(g.add(&g.nat(m), &g.nat(n)), g.nat(m + n));
            }
        }
        let a = GammaTerm::sc(1usize);
        let b = GammaTerm::sc(0usize);
        assert_eq!(text(&g.add(&a, &b)), "<G(x1),G(x0)>");
        assert_eq!(g.add(&b, &a), a);
        assert_eq!(text(&g.nat(3)), "n:3");
    }

    #[test]
    fn omega_times_clauses() {
        let g = g2();
        assert!(g.omega_times(&GammaTerm::ZERO).is_zero());
        let z = GammaTerm::sc(1usize);
        assert_eq!(g.omega_times(&z), z);
        // ω·1 = φ̄0(1+0) = φ̄01
        let w = g.omega_times(&g.nat(1));
        assert_eq!(text(&w), "pv(0,pv(0,0))");
    }

    #[test]
    fn parse_print_and_rejections() {
        assert_eq!(text(&parse("pv(0,0)").unwrap()), "pv(0,0)");
        assert!(parse("pv(G(x0),0)").is_err());
        assert!(parse("<G(x0),G(x1)>").is_err());
        assert_eq!(text(&parse("phi(G(x0), 0)").unwrap()), "G(x0)");
        assert_eq!(text(&parse("add(n:2, n:3)").unwrap()), "n:5");
        assert!(parse("G(x7)").is_err());
        let err = parse("pv(0 0)").unwrap_err();
        assert!(err.to_string().contains("','"));
    }

    #[test]
    fn enumeration_counts_grow_and_are_members() {
        let g = g2();
        let small = g.enumerate(&[0, 1], 2, 3);
        let big = g.enumerate(&[0, 1], 3, 3);
        assert!(small.iter().all(|t| big.contains(t)));
        assert!(big.iter().all(|t| g.is_member(&t.to_pre())));
        let distinct: HashSet<_> = big.iter().collect();
        assert_eq!(distinct.len(), big.len());
    }
}
