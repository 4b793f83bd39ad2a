//! Coded linear orders, finite embeddings and the order combinators
//! (sum, product, non-increasing words) together with the Kleene-Brouwer
//! order on finite sequences.
//!
//! A [`LinearOrder`] is a decidable comparison plus a budgeted element
//! enumerator. Elements are ordinary Rust values, so sums, products and
//! words nest without any global numbering scheme.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use thiserror::Error;

/// Values that can live inside a coded order.
pub trait Element: Clone + Eq + Hash + Debug + Send + Sync + 'static {}

impl<T: Clone + Eq + Hash + Debug + Send + Sync + 'static> Element for T {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("element {elem} does not belong to {order}")]
    NotAnElement { elem: String, order: String },
    #[error("images are not strictly increasing at position {position}")]
    NotIncreasing { position: usize },
}

/// A linear order given by a total comparison and an enumerator.
///
/// `enumerate(b)` must be duplicate free and monotone in `b`.
pub trait LinearOrder: Send + Sync {
    type Elem: Element;

    fn compare(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;

    /// Decodes membership; values of the element type that the order does
    /// not contain (a position past the end of a finite order, say).
    fn contains(&self, _a: &Self::Elem) -> bool {
        true
    }

    fn enumerate(&self, budget: usize) -> Vec<Self::Elem>;

    fn label(&self) -> String;

    fn less(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.compare(a, b) == Ordering::Less
    }

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.compare(a, b) != Ordering::Greater
    }
}

impl<O: LinearOrder + ?Sized> LinearOrder for &O {
    type Elem = O::Elem;

    fn compare(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering {
        (**self).compare(a, b)
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        (**self).contains(a)
    }

    fn enumerate(&self, budget: usize) -> Vec<Self::Elem> {
        (**self).enumerate(budget)
    }

    fn label(&self) -> String {
        (**self).label()
    }
}

/// Compares two elements after checking that both belong to `x`.
pub fn compare_elements<X: LinearOrder>(
    x: &X,
    a: &X::Elem,
    b: &X::Elem,
) -> Result<Ordering, OrderError> {
    for e in [a, b] {
        if !x.contains(e) {
            return Err(OrderError::NotAnElement {
                elem: format!("{e:?}"),
                order: x.label(),
            });
        }
    }
    Ok(x.compare(a, b))
}

/// Stable merge sort under an arbitrary comparator.
///
/// Unlike `slice::sort_by` this never panics when the comparator fails to be
/// a total order, which matters for the law checkers that run against
/// deliberately broken comparisons.
pub fn sort_by_cmp<T: Clone>(items: &mut Vec<T>, cmp: &mut dyn FnMut(&T, &T) -> Ordering) {
    if items.len() < 2 {
        return;
    }
    let right = items.split_off(items.len() / 2);
    let mut left = std::mem::take(items);
    let mut right = right;
    sort_by_cmp(&mut left, cmp);
    sort_by_cmp(&mut right, cmp);
    let mut out = Vec::with_capacity(left.len() + right.len());
    let (mut i, mut j) = (0, 0);
    while i < left.len() && j < right.len() {
        if cmp(&right[j], &left[i]) == Ordering::Less {
            out.push(right[j].clone());
            j += 1;
        } else {
            out.push(left[i].clone());
            i += 1;
        }
    }
    out.extend_from_slice(&left[i..]);
    out.extend_from_slice(&right[j..]);
    *items = out;
}

/// Sorts and removes duplicates according to the order of `x`.
pub fn sort_dedup<X: LinearOrder>(x: &X, items: &mut Vec<X::Elem>) {
    sort_by_cmp(items, &mut |a, b| x.compare(a, b));
    items.dedup_by(|a, b| x.compare(a, b) == Ordering::Equal);
}

/// Merges two strictly increasing lists into their sorted union and returns
/// the positions of each input inside the union.
pub fn merge_supports<E: Clone>(
    a: &[E],
    b: &[E],
    cmp: &mut dyn FnMut(&E, &E) -> Ordering,
) -> (Vec<E>, Vec<usize>, Vec<usize>) {
    let mut union = Vec::with_capacity(a.len() + b.len());
    let mut pa = Vec::with_capacity(a.len());
    let mut pb = Vec::with_capacity(b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = if i == a.len() {
            Ordering::Greater
        } else if j == b.len() {
            Ordering::Less
        } else {
            cmp(&a[i], &b[j])
        };
        match ord {
            Ordering::Less => {
                pa.push(union.len());
                union.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                pb.push(union.len());
                union.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                pa.push(union.len());
                pb.push(union.len());
                union.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    (union, pa, pb)
}

/// The finite order `{0 < 1 < ... < size-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FiniteOrder {
    pub size: usize,
}

impl FiniteOrder {
    pub fn new(size: usize) -> Self {
        FiniteOrder { size }
    }

    pub fn elements(&self) -> Vec<usize> {
        (0..self.size).collect()
    }
}

impl LinearOrder for FiniteOrder {
    type Elem = usize;

    fn compare(&self, a: &usize, b: &usize) -> Ordering {
        a.cmp(b)
    }

    fn contains(&self, a: &usize) -> bool {
        *a < self.size
    }

    fn enumerate(&self, budget: usize) -> Vec<usize> {
        (0..self.size.min(budget.saturating_add(1))).collect()
    }

    fn label(&self) -> String {
        self.size.to_string()
    }
}

/// An ordinal below `ω²`, written `ω·omegas + units`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NuElem {
    pub omegas: u32,
    pub units: u32,
}

impl NuElem {
    pub const ZERO: NuElem = NuElem { omegas: 0, units: 0 };

    pub fn nat(n: u32) -> Self {
        NuElem { omegas: 0, units: n }
    }

    pub fn omega_plus(omegas: u32, units: u32) -> Self {
        NuElem { omegas, units }
    }

    fn code_size(&self) -> u64 {
        self.omegas as u64 + self.units as u64
    }
}

impl Display for NuElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.omegas, self.units) {
            (0, n) => write!(f, "{n}"),
            (1, 0) => write!(f, "w"),
            (1, n) => write!(f, "w+{n}"),
            (k, 0) => write!(f, "w{k}"),
            (k, n) => write!(f, "w{k}+{n}"),
        }
    }
}

/// The well order `ν` of all ordinals strictly below `bound`; covers the
/// finite orders, `ω`, `ω+n`, `ω·2` and `ω·2+n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Nu {
    pub bound: NuElem,
}

impl Nu {
    pub fn new(bound: NuElem) -> Self {
        Nu { bound }
    }

    pub fn finite(n: u32) -> Self {
        Nu::new(NuElem::nat(n))
    }

    pub fn omega() -> Self {
        Nu::new(NuElem::omega_plus(1, 0))
    }

    pub fn omega_plus(units: u32) -> Self {
        Nu::new(NuElem::omega_plus(1, units))
    }
}

impl LinearOrder for Nu {
    type Elem = NuElem;

    fn compare(&self, a: &NuElem, b: &NuElem) -> Ordering {
        a.cmp(b)
    }

    fn contains(&self, a: &NuElem) -> bool {
        *a < self.bound
    }

    fn enumerate(&self, budget: usize) -> Vec<NuElem> {
        let budget = budget as u64;
        let mut out = Vec::new();
        for omegas in 0..=self.bound.omegas {
            if omegas as u64 > budget {
                break;
            }
            let mut units = 0u32;
            loop {
                let e = NuElem { omegas, units };
                if !self.contains(&e) || e.code_size() > budget {
                    break;
                }
                out.push(e);
                units += 1;
            }
        }
        out.sort_by_key(|e| (e.code_size(), *e));
        out
    }

    fn label(&self) -> String {
        self.bound.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SumElem<A, B> {
    Left(A),
    Right(B),
}

/// `Z₀ + Z₁`: every left element lies below every right element.
#[derive(Debug, Clone)]
pub struct Sum<A, B> {
    pub left: A,
    pub right: B,
}

impl<A: LinearOrder, B: LinearOrder> Sum<A, B> {
    pub fn new(left: A, right: B) -> Self {
        Sum { left, right }
    }
}

impl<A: LinearOrder, B: LinearOrder> LinearOrder for Sum<A, B> {
    type Elem = SumElem<A::Elem, B::Elem>;

    fn compare(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering {
        match (a, b) {
            (SumElem::Left(x), SumElem::Left(y)) => self.left.compare(x, y),
            (SumElem::Right(x), SumElem::Right(y)) => self.right.compare(x, y),
            (SumElem::Left(_), SumElem::Right(_)) => Ordering::Less,
            (SumElem::Right(_), SumElem::Left(_)) => Ordering::Greater,
        }
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        match a {
            SumElem::Left(x) => self.left.contains(x),
            SumElem::Right(y) => self.right.contains(y),
        }
    }

    fn enumerate(&self, budget: usize) -> Vec<Self::Elem> {
        let mut out: Vec<_> = self.left.enumerate(budget).into_iter().map(SumElem::Left).collect();
        out.extend(self.right.enumerate(budget).into_iter().map(SumElem::Right));
        out
    }

    fn label(&self) -> String {
        format!("({} + {})", self.left.label(), self.right.label())
    }
}

/// `X × Y` ordered lexicographically with the first component dominant.
#[derive(Debug, Clone)]
pub struct Product<A, B> {
    pub first: A,
    pub second: B,
}

impl<A: LinearOrder, B: LinearOrder> Product<A, B> {
    pub fn new(first: A, second: B) -> Self {
        Product { first, second }
    }
}

impl<A: LinearOrder, B: LinearOrder> LinearOrder for Product<A, B> {
    type Elem = (A::Elem, B::Elem);

    fn compare(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering {
        self.first
            .compare(&a.0, &b.0)
            .then_with(|| self.second.compare(&a.1, &b.1))
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        self.first.contains(&a.0) && self.second.contains(&a.1)
    }

    fn enumerate(&self, budget: usize) -> Vec<Self::Elem> {
        let ys = self.second.enumerate(budget);
        let mut out = Vec::new();
        for x in self.first.enumerate(budget) {
            for y in &ys {
                out.push((x.clone(), y.clone()));
            }
        }
        out
    }

    fn label(&self) -> String {
        format!("({} x {})", self.first.label(), self.second.label())
    }
}

/// Lexicographic comparison of sequences where a proper prefix is smaller.
pub fn lex_compare<E>(a: &[E], b: &[E], cmp: &mut dyn FnMut(&E, &E) -> Ordering) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match cmp(x, y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// `ω(X)`: finite non-increasing sequences over `X`, ordered
/// lexicographically.
#[derive(Debug, Clone)]
pub struct Words<X> {
    pub base: X,
}

impl<X: LinearOrder> Words<X> {
    pub fn new(base: X) -> Self {
        Words { base }
    }

    /// All non-increasing words of length at most `max_len` over the given
    /// strictly increasing list of points.
    pub fn words_over(points: &[X::Elem], max_len: usize) -> Vec<Vec<X::Elem>> {
        let mut out = vec![Vec::new()];
        let mut frontier: Vec<(Vec<X::Elem>, usize)> = vec![(Vec::new(), points.len())];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (w, bound) in &frontier {
                for i in 0..*bound {
                    let mut v = w.clone();
                    v.push(points[i].clone());
                    next.push((v, i + 1));
                }
            }
            out.extend(next.iter().map(|(w, _)| w.clone()));
            frontier = next;
        }
        out
    }
}

impl<X: LinearOrder> LinearOrder for Words<X> {
    type Elem = Vec<X::Elem>;

    fn compare(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering {
        lex_compare(a, b, &mut |x, y| self.base.compare(x, y))
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.base.contains(x))
            && a.windows(2).all(|w| self.base.leq(&w[1], &w[0]))
    }

    fn enumerate(&self, budget: usize) -> Vec<Self::Elem> {
        let mut points = self.base.enumerate(budget);
        sort_dedup(&self.base, &mut points);
        let mut out = Self::words_over(&points, budget);
        let mut cmp = |a: &Vec<X::Elem>, b: &Vec<X::Elem>| {
            a.len().cmp(&b.len()).then_with(|| self.compare(a, b))
        };
        sort_by_cmp(&mut out, &mut cmp);
        out
    }

    fn label(&self) -> String {
        format!("w({})", self.base.label())
    }
}

/// A strictly increasing map from the finite order `n = images.len()` into
/// some coded order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteEmbedding<E> {
    images: Vec<E>,
}

impl<E: Element> FiniteEmbedding<E> {
    pub fn new<X: LinearOrder<Elem = E>>(x: &X, images: Vec<E>) -> Result<Self, OrderError> {
        for (i, w) in images.windows(2).enumerate() {
            if !x.less(&w[0], &w[1]) {
                return Err(OrderError::NotIncreasing { position: i + 1 });
            }
        }
        Ok(FiniteEmbedding { images })
    }

    pub fn identity(n: usize) -> FiniteEmbedding<usize> {
        FiniteEmbedding { images: (0..n).collect() }
    }

    pub fn domain_size(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[E] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> &E {
        &self.images[i]
    }

    pub fn into_images(self) -> Vec<E> {
        self.images
    }
}

/// The strictly increasing enumeration `e_a : |a| → X` with range `a`.
pub fn increasing_enumeration<X: LinearOrder>(x: &X, a: &[X::Elem]) -> FiniteEmbedding<X::Elem> {
    let mut images = a.to_vec();
    sort_dedup(x, &mut images);
    FiniteEmbedding { images }
}

/// All strictly increasing maps `n → m`, as image lists.
pub fn all_embeddings(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, left: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..m {
            if m - v < left {
                break;
            }
            cur.push(v);
            go(v + 1, left - 1, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n <= m {
        go(0, n, m, &mut Vec::new(), &mut out);
    }
    out
}

/// The Kleene-Brouwer order on finite sequences: a proper extension lies
/// below its prefix, and at the first difference the entries decide.
pub fn kb_compare<X: LinearOrder>(x: &X, s: &[X::Elem], t: &[X::Elem]) -> Ordering {
    for (a, b) in s.iter().zip(t) {
        match x.compare(a, b) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    t.len().cmp(&s.len())
}

/// Sequences of length at most `max_len` over `X` under [`kb_compare`].
#[derive(Debug, Clone)]
pub struct KleeneBrouwer<X> {
    pub base: X,
    pub max_len: usize,
}

impl<X: LinearOrder> LinearOrder for KleeneBrouwer<X> {
    type Elem = Vec<X::Elem>;

    fn compare(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering {
        kb_compare(&self.base, a, b)
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        a.len() <= self.max_len && a.iter().all(|e| self.base.contains(e))
    }

    fn enumerate(&self, budget: usize) -> Vec<Self::Elem> {
        let points = self.base.enumerate(budget);
        let mut out = vec![Vec::new()];
        let mut frontier = vec![Vec::new()];
        for _ in 0..self.max_len.min(budget) {
            let mut next = Vec::new();
            for w in &frontier {
                for p in &points {
                    let mut v: Vec<X::Elem> = w.clone();
                    v.push(p.clone());
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    fn label(&self) -> String {
        format!("KB({})", self.base.label())
    }
}

/// First failure found by [`check_linear_order`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderViolation<E> {
    Irreflexive(E),
    EqualButDistinct(E, E),
    Asymmetric(E, E),
    Intransitive(E, E, E),
    /// The ranks are inconsistent but no three-cycle was located within the
    /// search cap.
    Inconsistent(E, E),
}

impl<E: Debug> Display for OrderViolation<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderViolation::Irreflexive(a) => write!(f, "compare({a:?}, {a:?}) is not EQ"),
            OrderViolation::EqualButDistinct(a, b) => {
                write!(f, "{a:?} and {b:?} compare EQ but differ")
            }
            OrderViolation::Asymmetric(a, b) => {
                write!(f, "compare({a:?}, {b:?}) is not the reverse of compare({b:?}, {a:?})")
            }
            OrderViolation::Intransitive(a, b, c) => {
                write!(f, "{a:?} < {b:?} < {c:?} but not {a:?} < {c:?}")
            }
            OrderViolation::Inconsistent(a, b) => {
                write!(f, "ranks of {a:?} and {b:?} disagree with their comparison")
            }
        }
    }
}

/// Exhaustively decides whether `cmp` is a linear order on `elems` with
/// `EQ` meaning syntactic equality.
///
/// Transitivity is decided through ranks: a total antisymmetric relation is
/// transitive exactly when `a < b ⇔ rank(a) < rank(b)` for all pairs, where
/// `rank(a)` counts the elements below `a`. This costs `O(n²)` comparisons
/// instead of `O(n³)`.
pub fn check_linear_order<E: Clone + Eq + Debug>(
    elems: &[E],
    cmp: &mut dyn FnMut(&E, &E) -> Ordering,
) -> Result<usize, OrderViolation<E>> {
    let n = elems.len();
    let mut table = vec![Ordering::Equal; n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = cmp(&elems[i], &elems[j]);
        }
    }
    check_order_table(
        n,
        &|i, j| table[i * n + j],
        &|i, j| elems[i] != elems[j],
        &|i| elems[i].clone(),
    )
}

/// Bound on the work spent hunting for a concrete three-cycle once the
/// rank test has failed.
const CYCLE_SEARCH_CAP: u64 = 1 << 32;

/// Checks that a precomputed comparison table on `n` items is a linear
/// order, with `distinct(i, j)` deciding syntactic difference. Transitivity
/// is decided through ranks: a total antisymmetric relation is transitive
/// iff `i < j` coincides with `rank(i) < rank(j)`, where `rank` counts the
/// smaller items.
pub fn check_order_table<E>(
    n: usize,
    table: &dyn Fn(usize, usize) -> Ordering,
    distinct: &dyn Fn(usize, usize) -> bool,
    elem: &dyn Fn(usize) -> E,
) -> Result<usize, OrderViolation<E>> {
    let mut checks = 0usize;
    let mut rank = vec![0usize; n];
    for i in 0..n {
        if table(i, i) != Ordering::Equal {
            return Err(OrderViolation::Irreflexive(elem(i)));
        }
        for j in 0..n {
            checks += 1;
            let o = table(i, j);
            if o == Ordering::Equal && distinct(i, j) {
                return Err(OrderViolation::EqualButDistinct(elem(i), elem(j)));
            }
            if o != table(j, i).reverse() {
                return Err(OrderViolation::Asymmetric(elem(i), elem(j)));
            }
            if o == Ordering::Less {
                rank[j] += 1;
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let lt = table(i, j) == Ordering::Less;
            if lt != (rank[i] < rank[j]) {
                let mut budget = CYCLE_SEARCH_CAP;
                for a in 0..n {
                    for b in 0..n {
                        if table(a, b) != Ordering::Less {
                            continue;
                        }
                        for c in 0..n {
                            if table(b, c) == Ordering::Less && table(a, c) != Ordering::Less {
                                return Err(OrderViolation::Intransitive(elem(a), elem(b), elem(c)));
                            }
                        }
                        budget = budget.saturating_sub(n as u64);
                        if budget == 0 {
                            return Err(OrderViolation::Inconsistent(elem(i), elem(j)));
                        }
                    }
                }
                return Err(OrderViolation::Inconsistent(elem(i), elem(j)));
            }
        }
    }
    Ok(checks)
}
