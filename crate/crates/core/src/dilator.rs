//! Coded predilators.
//!
//! A predilator is given by its action on elements: a raw element of `D(X)`
//! is a value of type `D::Raw<X::Elem>`, from which the support can be read
//! off and to which an embedding can be applied by relabeling. Traces are raw
//! elements over a finite order `{0,…,n−1}` with full support, and a
//! [`DilElem`] is the normal form of an element: a trace together with the
//! increasing enumeration of its support.
//!
//! Comparison in `D(X)` for arbitrary `X` reduces to [`Predilator::compare_at`]
//! on positions inside a common finite order.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt::Debug;

use crate::check::Report;
use crate::gamma::{parse_var, write_var, Gamma, GammaTerm};
use crate::order::{
    all_embeddings, check_linear_order, merge_supports, sort_by_cmp, sort_dedup, Element,
    FiniteOrder, LinearOrder, OrderError, Words,
};
use crate::syntax::{parse_all, Cursor, ParseError};

pub type PointParser<'p, E> = dyn FnMut(&mut Cursor<'_>) -> Result<E, ParseError> + 'p;
pub type PointWriter<'p, E> = dyn FnMut(&E, &mut String) + 'p;

pub trait Predilator: Send + Sync {
    /// Raw elements of `D(X)` when the points of `X` have type `E`.
    type Raw<E: Element>: Element;

    fn name(&self) -> String;

    /// The points an element mentions, possibly with repetitions.
    fn support<E: Element>(&self, a: &Self::Raw<E>) -> Vec<E>;

    /// Relabels every point; this is `D(f)` when `f` is an embedding.
    fn map<A: Element, B: Element>(
        &self,
        a: &Self::Raw<A>,
        f: &mut dyn FnMut(&A) -> B,
    ) -> Self::Raw<B>;

    /// The order of `D(X)` on raw elements.
    fn compare_raw<X: LinearOrder>(
        &self,
        x: &X,
        a: &Self::Raw<X::Elem>,
        b: &Self::Raw<X::Elem>,
    ) -> Ordering;

    fn is_element<X: LinearOrder>(&self, x: &X, a: &Self::Raw<X::Elem>) -> bool;

    /// Payload size; preserved by [`Predilator::map`].
    fn size<E: Element>(&self, a: &Self::Raw<E>) -> usize;

    /// All elements of `D(X)` of size at most `budget` whose support lies in
    /// `points` (strictly increasing in `x`).
    fn raw_elements<X: LinearOrder>(
        &self,
        x: &X,
        points: &[X::Elem],
        budget: usize,
    ) -> Vec<Self::Raw<X::Elem>>;

    /// An upper bound on trace arities of size at most `budget`.
    fn max_arity(&self, budget: usize) -> usize;

    fn write_raw<E: Element>(&self, a: &Self::Raw<E>, out: &mut String, pt: &mut PointWriter<'_, E>);

    /// Parses and validates a raw element of `D(x)`.
    fn parse_raw<X: LinearOrder>(
        &self,
        x: &X,
        c: &mut Cursor<'_>,
        pt: &mut PointParser<'_, X::Elem>,
    ) -> Result<Self::Raw<X::Elem>, ParseError>;

    fn write_position(&self, i: &usize, out: &mut String) {
        out.push_str(&i.to_string());
    }

    fn parse_position(&self, c: &mut Cursor<'_>) -> Result<usize, ParseError> {
        c.usize()
    }

    /// Compares two traces placed at the given positions of the finite order
    /// `k`.
    fn compare_at(
        &self,
        k: usize,
        lhs: &Self::Raw<usize>,
        lpos: &[usize],
        rhs: &Self::Raw<usize>,
        rpos: &[usize],
    ) -> Ordering {
        let a = self.map(lhs, &mut |i| lpos[*i]);
        let b = self.map(rhs, &mut |i| rpos[*i]);
        self.compare_raw(&FiniteOrder::new(k), &a, &b)
    }

    fn write_trace(&self, t: &Self::Raw<usize>, out: &mut String) {
        self.write_raw(t, out, &mut |i, out| self.write_position(i, out));
    }

    fn parse_trace(&self, c: &mut Cursor<'_>) -> Result<Self::Raw<usize>, ParseError> {
        self.parse_raw(&FiniteOrder::new(usize::MAX), c, &mut |c| self.parse_position(c))
    }
}

/// Trace text of `t`.
pub fn trace_text<D: Predilator>(d: &D, t: &D::Raw<usize>) -> String {
    let mut s = String::new();
    d.write_trace(t, &mut s);
    s
}

/// Parses a trace of the given arity, checking full support.
pub fn parse_trace_of_arity<D: Predilator>(
    d: &D,
    c: &mut Cursor<'_>,
    arity: usize,
) -> Result<D::Raw<usize>, ParseError> {
    let start = c.pos();
    let t = d.parse_trace(c)?;
    if !is_trace(d, arity, &t) {
        return Err(ParseError::Invalid {
            pos: start,
            message: format!("not a trace of arity {arity}: support must be exactly 0..{arity}"),
        });
    }
    Ok(t)
}

pub fn parse_trace_str<D: Predilator>(d: &D, text: &str) -> Result<D::Raw<usize>, ParseError> {
    parse_all(text, |c| d.parse_trace(c))
}

/// Whether `(arity, t)` lies in the trace of `d`.
pub fn is_trace<D: Predilator>(d: &D, arity: usize, t: &D::Raw<usize>) -> bool {
    let x = FiniteOrder::new(arity);
    if !d.is_element(&x, t) {
        return false;
    }
    let mut s = d.support(t);
    s.sort_unstable();
    s.dedup();
    s.len() == arity && s.iter().enumerate().all(|(i, v)| i == *v)
}

/// All traces of the given arity with payload size at most `budget`.
pub fn trace_enumerate<D: Predilator>(d: &D, arity: usize, budget: usize) -> Vec<D::Raw<usize>> {
    let x = FiniteOrder::new(arity);
    let pts: Vec<usize> = (0..arity).collect();
    d.raw_elements(&x, &pts, budget)
        .into_iter()
        .filter(|t| is_trace(d, arity, t))
        .collect()
}

/// The normal form of an element: a trace and the increasing enumeration of
/// the support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DilElem<T, E> {
    pub trace: T,
    pub support: Vec<E>,
}

/// Normal forms of `D`-elements over points `E`.
pub type Nf<D, E> = DilElem<<D as Predilator>::Raw<usize>, E>;

impl<T, E> DilElem<T, E> {
    pub fn arity(&self) -> usize {
        self.support.len()
    }
}

pub fn normal_form<D: Predilator, X: LinearOrder>(
    d: &D,
    x: &X,
    raw: &D::Raw<X::Elem>,
) -> Nf<D, X::Elem> {
    let mut support = d.support(raw);
    sort_dedup(x, &mut support);
    let trace = d.map(raw, &mut |e| {
        support
            .binary_search_by(|p| x.compare(p, e))
            .expect("point lies in the support")
    });
    DilElem { trace, support }
}

/// The raw element a normal form denotes.
pub fn denote<D: Predilator, E: Element>(d: &D, a: &Nf<D, E>) -> D::Raw<E> {
    d.map(&a.trace, &mut |i| a.support[*i].clone())
}

/// Compares normal forms over `x` by placing both traces inside the union of
/// their supports.
pub fn element_compare<D: Predilator, X: LinearOrder>(
    d: &D,
    x: &X,
    a: &Nf<D, X::Elem>,
    b: &Nf<D, X::Elem>,
) -> Ordering {
    let (union, pa, pb) = merge_supports(&a.support, &b.support, &mut |p, q| x.compare(p, q));
    d.compare_at(union.len(), &a.trace, &pa, &b.trace, &pb)
}

/// Applies an embedding given on the support; fails when the images are not
/// strictly increasing in `y`.
pub fn apply_embedding<D: Predilator, A: Element, Y: LinearOrder>(
    _d: &D,
    y: &Y,
    f: &mut dyn FnMut(&A) -> Y::Elem,
    a: &Nf<D, A>,
) -> Result<Nf<D, Y::Elem>, OrderError> {
    let support: Vec<Y::Elem> = a.support.iter().map(f).collect();
    for (i, w) in support.windows(2).enumerate() {
        if !y.less(&w[0], &w[1]) {
            return Err(OrderError::NotIncreasing { position: i + 1 });
        }
    }
    Ok(DilElem { trace: a.trace.clone(), support })
}

/// `D(X)` as a coded order on raw elements.
pub struct Applied<'a, D: ?Sized, X> {
    pub dil: &'a D,
    pub base: &'a X,
}

impl<'a, D: ?Sized, X> Applied<'a, D, X> {
    pub fn new(dil: &'a D, base: &'a X) -> Self {
        Applied { dil, base }
    }
}

impl<D: Predilator, X: LinearOrder> LinearOrder for Applied<'_, D, X> {
    type Elem = D::Raw<X::Elem>;

    fn compare(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering {
        self.dil.compare_raw(self.base, a, b)
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        self.dil.is_element(self.base, a)
    }

    fn enumerate(&self, budget: usize) -> Vec<Self::Elem> {
        let mut pts = self.base.enumerate(budget);
        sort_dedup(self.base, &mut pts);
        let mut out = self.dil.raw_elements(self.base, &pts, budget);
        sort_by_cmp(&mut out, &mut |a, b| {
            self.dil.size(a).cmp(&self.dil.size(b)).then_with(|| self.compare(a, b))
        });
        out
    }

    fn label(&self) -> String {
        format!("{}({})", self.dil.name(), self.base.label())
    }
}

/// `D(X)` as a coded order on normal forms.
pub struct NormalForms<'a, D: ?Sized, X> {
    pub dil: &'a D,
    pub base: &'a X,
}

impl<'a, D: ?Sized, X> NormalForms<'a, D, X> {
    pub fn new(dil: &'a D, base: &'a X) -> Self {
        NormalForms { dil, base }
    }
}

impl<D: Predilator, X: LinearOrder> LinearOrder for NormalForms<'_, D, X> {
    type Elem = Nf<D, X::Elem>;

    fn compare(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering {
        element_compare(self.dil, self.base, a, b)
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        a.support.iter().all(|p| self.base.contains(p))
            && a.support.windows(2).all(|w| self.base.less(&w[0], &w[1]))
            && is_trace(self.dil, a.arity(), &a.trace)
    }

    fn enumerate(&self, budget: usize) -> Vec<Self::Elem> {
        Applied::new(self.dil, self.base)
            .enumerate(budget)
            .iter()
            .map(|r| normal_form(self.dil, self.base, r))
            .collect()
    }

    fn label(&self) -> String {
        format!("NF {}({})", self.dil.name(), self.base.label())
    }
}

/// `ω(X)`: finite non-increasing words, ordered lexicographically.
#[derive(Debug, Clone, Copy, Default)]
pub struct Omega;

impl Predilator for Omega {
    type Raw<E: Element> = Vec<E>;

    fn name(&self) -> String {
        "omega".to_string()
    }

    fn support<E: Element>(&self, a: &Vec<E>) -> Vec<E> {
        a.clone()
    }

    fn map<A: Element, B: Element>(&self, a: &Vec<A>, f: &mut dyn FnMut(&A) -> B) -> Vec<B> {
        a.iter().map(f).collect()
    }

    fn compare_raw<X: LinearOrder>(&self, x: &X, a: &Vec<X::Elem>, b: &Vec<X::Elem>) -> Ordering {
        Words::new(x).compare(a, b)
    }

    fn is_element<X: LinearOrder>(&self, x: &X, a: &Vec<X::Elem>) -> bool {
        Words::new(x).contains(a)
    }

    fn size<E: Element>(&self, a: &Vec<E>) -> usize {
        a.len()
    }

    fn raw_elements<X: LinearOrder>(&self, _x: &X, points: &[X::Elem], budget: usize) -> Vec<Vec<X::Elem>> {
        Words::<X>::words_over(points, budget)
    }

    fn max_arity(&self, budget: usize) -> usize {
        budget
    }

    fn write_raw<E: Element>(&self, a: &Vec<E>, out: &mut String, pt: &mut PointWriter<'_, E>) {
        out.push_str("w[");
        for (i, e) in a.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            pt(e, out);
        }
        out.push(']');
    }

    fn parse_raw<X: LinearOrder>(
        &self,
        x: &X,
        c: &mut Cursor<'_>,
        pt: &mut PointParser<'_, X::Elem>,
    ) -> Result<Vec<X::Elem>, ParseError> {
        c.expect("w[")?;
        let w = c.list("]", &mut |c| pt(c))?;
        if !self.is_element(x, &w) {
            return Err(c.invalid("word entries must be non-increasing points of the base order"));
        }
        Ok(w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AffineElem<E> {
    Zero,
    Succ(usize, E),
}

/// `1 + Y×X` for the finite order `Y = {0,…,y_size−1}`; the `Y`-coordinate
/// dominates.
#[derive(Debug, Clone, Copy)]
pub struct Affine {
    pub y_size: usize,
}

impl Affine {
    pub fn new(y_size: usize) -> Self {
        Affine { y_size }
    }
}

impl Predilator for Affine {
    type Raw<E: Element> = AffineElem<E>;

    fn name(&self) -> String {
        format!("affine:{}", self.y_size)
    }

    fn support<E: Element>(&self, a: &AffineElem<E>) -> Vec<E> {
        match a {
            AffineElem::Zero => Vec::new(),
            AffineElem::Succ(_, e) => vec![e.clone()],
        }
    }

    fn map<A: Element, B: Element>(&self, a: &AffineElem<A>, f: &mut dyn FnMut(&A) -> B) -> AffineElem<B> {
        match a {
            AffineElem::Zero => AffineElem::Zero,
            AffineElem::Succ(y, e) => AffineElem::Succ(*y, f(e)),
        }
    }

    fn compare_raw<X: LinearOrder>(&self, x: &X, a: &AffineElem<X::Elem>, b: &AffineElem<X::Elem>) -> Ordering {
        match (a, b) {
            (AffineElem::Zero, AffineElem::Zero) => Ordering::Equal,
            (AffineElem::Zero, _) => Ordering::Less,
            (_, AffineElem::Zero) => Ordering::Greater,
            (AffineElem::Succ(y, p), AffineElem::Succ(z, q)) => {
                y.cmp(z).then_with(|| x.compare(p, q))
            }
        }
    }

    fn is_element<X: LinearOrder>(&self, x: &X, a: &AffineElem<X::Elem>) -> bool {
        match a {
            AffineElem::Zero => true,
            AffineElem::Succ(y, p) => *y < self.y_size && x.contains(p),
        }
    }

    fn size<E: Element>(&self, a: &AffineElem<E>) -> usize {
        match a {
            AffineElem::Zero => 0,
            AffineElem::Succ(..) => 1,
        }
    }

    fn raw_elements<X: LinearOrder>(&self, _x: &X, points: &[X::Elem], budget: usize) -> Vec<AffineElem<X::Elem>> {
        let mut out = vec![AffineElem::Zero];
        if budget >= 1 {
            for y in 0..self.y_size {
                out.extend(points.iter().map(|p| AffineElem::Succ(y, p.clone())));
            }
        }
        out
    }

    fn max_arity(&self, budget: usize) -> usize {
        budget.min(1)
    }

    fn write_raw<E: Element>(&self, a: &AffineElem<E>, out: &mut String, pt: &mut PointWriter<'_, E>) {
        match a {
            AffineElem::Zero => out.push('o'),
            AffineElem::Succ(y, p) => {
                out.push_str(&format!("a({y},"));
                pt(p, out);
                out.push(')');
            }
        }
    }

    fn parse_raw<X: LinearOrder>(
        &self,
        x: &X,
        c: &mut Cursor<'_>,
        pt: &mut PointParser<'_, X::Elem>,
    ) -> Result<AffineElem<X::Elem>, ParseError> {
        let a = if c.eat("o") {
            AffineElem::Zero
        } else if c.eat("a(") {
            let y = c.usize()?;
            c.expect(",")?;
            let p = pt(c)?;
            c.expect(")")?;
            AffineElem::Succ(y, p)
        } else {
            return Err(c.error("'o' or 'a('"));
        };
        if !self.is_element(x, &a) {
            return Err(c.invalid(format!("not an element of {}", self.name())));
        }
        Ok(a)
    }

    fn write_trace(&self, t: &AffineElem<usize>, out: &mut String) {
        match t {
            AffineElem::Zero => out.push('o'),
            AffineElem::Succ(y, _) => out.push_str(&format!("a({y})")),
        }
    }

    fn parse_trace(&self, c: &mut Cursor<'_>) -> Result<AffineElem<usize>, ParseError> {
        if c.eat("o") {
            return Ok(AffineElem::Zero);
        }
        c.expect("a(")?;
        let y = c.usize()?;
        c.expect(")")?;
        if y >= self.y_size {
            return Err(c.invalid(format!("{y} is not a point of Y")));
        }
        Ok(AffineElem::Succ(y, 0))
    }
}

/// The Γ predilator; `max_seq_len` bounds sums during enumeration only.
#[derive(Debug, Clone, Copy)]
pub struct GammaDil {
    pub max_seq_len: usize,
}

impl Default for GammaDil {
    fn default() -> Self {
        GammaDil { max_seq_len: 3 }
    }
}

impl Predilator for GammaDil {
    type Raw<E: Element> = GammaTerm<E>;

    fn name(&self) -> String {
        format!("gamma:{}", self.max_seq_len)
    }

    fn support<E: Element>(&self, a: &GammaTerm<E>) -> Vec<E> {
        a.points()
    }

    fn map<A: Element, B: Element>(&self, a: &GammaTerm<A>, f: &mut dyn FnMut(&A) -> B) -> GammaTerm<B> {
        a.map(f)
    }

    fn compare_raw<X: LinearOrder>(&self, x: &X, a: &GammaTerm<X::Elem>, b: &GammaTerm<X::Elem>) -> Ordering {
        Gamma::new(x).compare(a, b)
    }

    fn is_element<X: LinearOrder>(&self, x: &X, a: &GammaTerm<X::Elem>) -> bool {
        Gamma::new(x).is_member(&a.to_pre())
    }

    fn size<E: Element>(&self, a: &GammaTerm<E>) -> usize {
        a.l_measure()
    }

    fn raw_elements<X: LinearOrder>(&self, x: &X, points: &[X::Elem], budget: usize) -> Vec<GammaTerm<X::Elem>> {
        Gamma::new(x).enumerate(points, budget, self.max_seq_len)
    }

    fn max_arity(&self, budget: usize) -> usize {
        // Leaves of a term with measure `l`: each constructor adds at most
        // `max(2, cap) - 1` leaves.
        1 + budget * self.max_seq_len.max(2)
    }

    fn write_raw<E: Element>(&self, a: &GammaTerm<E>, out: &mut String, pt: &mut PointWriter<'_, E>) {
        a.write(out, pt);
    }

    fn parse_raw<X: LinearOrder>(
        &self,
        x: &X,
        c: &mut Cursor<'_>,
        pt: &mut PointParser<'_, X::Elem>,
    ) -> Result<GammaTerm<X::Elem>, ParseError> {
        Gamma::new(x).parse(c, pt)
    }

    fn write_position(&self, i: &usize, out: &mut String) {
        write_var(i, out);
    }

    fn parse_position(&self, c: &mut Cursor<'_>) -> Result<usize, ParseError> {
        parse_var(c)
    }
}

/// `E∘D`: outer elements whose points are inner elements; the support is the
/// union of the inner supports.
#[derive(Debug, Clone, Copy)]
pub struct Compose<O, I> {
    pub outer: O,
    pub inner: I,
}

impl<O, I> Compose<O, I> {
    pub fn new(outer: O, inner: I) -> Self {
        Compose { outer, inner }
    }
}

impl<O: Predilator, I: Predilator> Predilator for Compose<O, I> {
    type Raw<E: Element> = O::Raw<I::Raw<E>>;

    fn name(&self) -> String {
        format!("compose({},{})", self.outer.name(), self.inner.name())
    }

    fn support<E: Element>(&self, a: &Self::Raw<E>) -> Vec<E> {
        self.outer
            .support(a)
            .iter()
            .flat_map(|p| self.inner.support(p))
            .collect()
    }

    fn map<A: Element, B: Element>(&self, a: &Self::Raw<A>, f: &mut dyn FnMut(&A) -> B) -> Self::Raw<B> {
        self.outer.map(a, &mut |p| self.inner.map(p, f))
    }

    fn compare_raw<X: LinearOrder>(&self, x: &X, a: &Self::Raw<X::Elem>, b: &Self::Raw<X::Elem>) -> Ordering {
        self.outer.compare_raw(&Applied::new(&self.inner, x), a, b)
    }

    fn is_element<X: LinearOrder>(&self, x: &X, a: &Self::Raw<X::Elem>) -> bool {
        self.outer.is_element(&Applied::new(&self.inner, x), a)
    }

    fn size<E: Element>(&self, a: &Self::Raw<E>) -> usize {
        self.outer.size(a)
            + self
                .outer
                .support(a)
                .iter()
                .map(|p| self.inner.size(p))
                .sum::<usize>()
    }

    fn raw_elements<X: LinearOrder>(&self, x: &X, points: &[X::Elem], budget: usize) -> Vec<Self::Raw<X::Elem>> {
        let applied = Applied::new(&self.inner, x);
        let mut inner = self.inner.raw_elements(x, points, budget);
        sort_by_cmp(&mut inner, &mut |a, b| applied.compare(a, b));
        self.outer
            .raw_elements(&applied, &inner, budget)
            .into_iter()
            .filter(|a| self.size(a) <= budget)
            .collect()
    }

    fn max_arity(&self, budget: usize) -> usize {
        self.outer.max_arity(budget) * self.inner.max_arity(budget)
    }

    fn write_raw<E: Element>(&self, a: &Self::Raw<E>, out: &mut String, pt: &mut PointWriter<'_, E>) {
        self.outer
            .write_raw(a, out, &mut |p, out| self.inner.write_raw(p, out, pt));
    }

    fn parse_raw<X: LinearOrder>(
        &self,
        x: &X,
        c: &mut Cursor<'_>,
        pt: &mut PointParser<'_, X::Elem>,
    ) -> Result<Self::Raw<X::Elem>, ParseError> {
        let applied = Applied::new(&self.inner, x);
        self.outer
            .parse_raw(&applied, c, &mut |c| self.inner.parse_raw(x, c, pt))
    }

    fn write_position(&self, i: &usize, out: &mut String) {
        self.inner.write_position(i, out);
    }

    fn parse_position(&self, c: &mut Cursor<'_>) -> Result<usize, ParseError> {
        self.inner.parse_position(c)
    }
}

/// A faulty ω whose coded comparison is reversed; the law harness must
/// reject it.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReversedOmega;

impl Predilator for ReversedOmega {
    type Raw<E: Element> = Vec<E>;

    fn name(&self) -> String {
        "reversed-omega".to_string()
    }

    fn support<E: Element>(&self, a: &Vec<E>) -> Vec<E> {
        Omega.support(a)
    }

    fn map<A: Element, B: Element>(&self, a: &Vec<A>, f: &mut dyn FnMut(&A) -> B) -> Vec<B> {
        Omega.map(a, f)
    }

    fn compare_raw<X: LinearOrder>(&self, x: &X, a: &Vec<X::Elem>, b: &Vec<X::Elem>) -> Ordering {
        Omega.compare_raw(x, a, b)
    }

    fn is_element<X: LinearOrder>(&self, x: &X, a: &Vec<X::Elem>) -> bool {
        Omega.is_element(x, a)
    }

    fn size<E: Element>(&self, a: &Vec<E>) -> usize {
        a.len()
    }

    fn raw_elements<X: LinearOrder>(&self, x: &X, points: &[X::Elem], budget: usize) -> Vec<Vec<X::Elem>> {
        Omega.raw_elements(x, points, budget)
    }

    fn max_arity(&self, budget: usize) -> usize {
        budget
    }

    fn write_raw<E: Element>(&self, a: &Vec<E>, out: &mut String, pt: &mut PointWriter<'_, E>) {
        Omega.write_raw(a, out, pt)
    }

    fn parse_raw<X: LinearOrder>(
        &self,
        x: &X,
        c: &mut Cursor<'_>,
        pt: &mut PointParser<'_, X::Elem>,
    ) -> Result<Vec<X::Elem>, ParseError> {
        Omega.parse_raw(x, c, pt)
    }

    fn compare_at(&self, k: usize, lhs: &Vec<usize>, lpos: &[usize], rhs: &Vec<usize>, rpos: &[usize]) -> Ordering {
        Omega.compare_at(k, lhs, lpos, rhs, rpos).reverse()
    }
}

fn show<D: Predilator>(d: &D, a: &D::Raw<usize>) -> String {
    let mut s = String::new();
    d.write_raw(a, &mut s, &mut |i, out| d.write_position(i, out));
    s
}

/// Exhaustive check of the predilator laws over all finite orders of size at
/// most `max_order`, all embeddings between them, and all elements of
/// payload size at most `budget`.
///
/// Besides functoriality, naturality of supports and both inclusions of the
/// support condition, it checks that each `D(n)` is linearly ordered, that
/// embeddings preserve the order, and that the coded comparison of normal
/// forms agrees with the order on raw elements.
pub fn check_predilator_laws<D: Predilator>(d: &D, max_order: usize, budget: usize) -> Report {
    let mut report = Report::new(format!("predilator laws for {}", d.name()));
    let elems: Vec<Vec<D::Raw<usize>>> = (0..=max_order)
        .map(|n| {
            let pts: Vec<usize> = (0..n).collect();
            d.raw_elements(&FiniteOrder::new(n), &pts, budget)
        })
        .collect();
    let sorted: Vec<Vec<D::Raw<usize>>> = (0..=max_order)
        .map(|n| {
            let x = FiniteOrder::new(n);
            let mut v = elems[n].clone();
            sort_by_cmp(&mut v, &mut |a, b| d.compare_raw(&x, a, b));
            v
        })
        .collect();

    for n in 0..=max_order {
        let x = FiniteOrder::new(n);
        let list = &elems[n];
        let distinct: HashSet<&D::Raw<usize>> = list.iter().collect();
        report.record("enumeration has no duplicates", distinct.len() == list.len(), || {
            format!("duplicates among elements of D({n})")
        });
        for a in list {
            report.record("enumerated values are elements", d.is_element(&x, a), || {
                format!("{} is not in D({n})", show(d, a))
            });
            report.record("enumeration respects the budget", d.size(a) <= budget, || {
                format!("{} exceeds size {budget}", show(d, a))
            });
        }
        if let Err(v) = check_linear_order(list, &mut |a, b| d.compare_raw(&x, a, b)) {
            report.fail("D(n) is linearly ordered", format!("over {n}: {v}"));
        } else {
            report.checked += 1;
        }

        let nfs: Vec<Nf<D, usize>> = list.iter().map(|a| normal_form(d, &x, a)).collect();
        for (a, nf) in list.iter().zip(&nfs) {
            report.record("normal form denotes the element", denote(d, nf) == *a, || {
                format!("{} over {n}", show(d, a))
            });
            report.record("normal form trace has full support", is_trace(d, nf.arity(), &nf.trace), || {
                format!("trace {} of arity {}", show(d, &nf.trace), nf.arity())
            });
        }
        // Coded comparison versus raw comparison, on every pair.
        for (i, a) in list.iter().enumerate() {
            for (j, b) in list.iter().enumerate() {
                let raw = d.compare_raw(&x, a, b);
                let coded = element_compare(d, &x, &nfs[i], &nfs[j]);
                if raw != coded {
                    report.fail(
                        "coded comparison agrees with D(n)",
                        format!(
                            "over {n}: {} vs {} is {raw:?} in D({n}) but compare_at says {coded:?}",
                            show(d, a),
                            show(d, b)
                        ),
                    );
                } else {
                    report.checked += 1;
                }
            }
        }
    }

    for n in 0..=max_order {
        for m in n..=max_order {
            let y = FiniteOrder::new(m);
            let image_set_budgeted: Vec<D::Raw<usize>> = elems[m].clone();
            for f in all_embeddings(n, m) {
                let mut images = HashSet::new();
                for a in &elems[n] {
                    let b = d.map(a, &mut |i| f[*i]);
                    report.record("D(f) lands in D(m)", d.is_element(&y, &b), || {
                        format!("D({f:?}) sends {} outside D({m})", show(d, a))
                    });
                    if n == m {
                        report.record("D(id) = id", b == *a, || {
                            format!("identity moves {}", show(d, a))
                        });
                    }
                    let mut lhs: Vec<usize> = d.support(&b);
                    lhs.sort_unstable();
                    lhs.dedup();
                    let mut rhs: Vec<usize> = d.support(a).iter().map(|i| f[*i]).collect();
                    rhs.sort_unstable();
                    rhs.dedup();
                    report.record("supports are natural", lhs == rhs, || {
                        format!("supp(D({f:?})({})) = {lhs:?} but f[supp] = {rhs:?}", show(d, a))
                    });
                    report.record("support condition: range within rng(f)", lhs.iter().all(|v| f.contains(v)), || {
                        format!("supp of image of {} leaves rng {f:?}", show(d, a))
                    });
                    let nf = normal_form(d, &FiniteOrder::new(n), a);
                    let coded = apply_embedding(d, &y, &mut |i| f[*i], &nf)
                        .map(|e| e == normal_form(d, &y, &b));
                    report.record("apply_embedding agrees with D(f)", coded == Ok(true), || {
                        format!("normal forms of D({f:?})({}) disagree", show(d, a))
                    });
                    images.insert(b);
                }
                for b in &image_set_budgeted {
                    let s = d.support(b);
                    if s.iter().all(|v| f.contains(v)) {
                        report.record("support condition: rng(f) covers", images.contains(b), || {
                            format!("{} has support in rng {f:?} but no preimage", show(d, b))
                        });
                    }
                }
                // Order preservation: the image of the sorted list is sorted.
                let mapped: Vec<D::Raw<usize>> =
                    sorted[n].iter().map(|a| d.map(a, &mut |i| f[*i])).collect();
                for (k, w) in mapped.windows(2).enumerate() {
                    report.record("D(f) preserves the order", d.compare_raw(&y, &w[0], &w[1]) == Ordering::Less, || {
                        format!(
                            "{} < {} in D({n}) but images are not increasing under {f:?}",
                            show(d, &sorted[n][k]),
                            show(d, &sorted[n][k + 1])
                        )
                    });
                }
                // Composition with every further embedding.
                for p in m..=max_order {
                    for g in all_embeddings(m, p) {
                        let gf: Vec<usize> = f.iter().map(|i| g[*i]).collect();
                        for a in &elems[n] {
                            let two = d.map(&d.map(a, &mut |i| f[*i]), &mut |i| g[*i]);
                            let one = d.map(a, &mut |i| gf[*i]);
                            report.record("D(g∘f) = D(g)∘D(f)", one == two, || {
                                format!("composition fails on {} for f={f:?} g={g:?}", show(d, a))
                            });
                        }
                    }
                }
            }
        }
    }
    report
}

/// The optional monotonicity lint: `f ≤ g` pointwise entails
/// `D(f)(σ) ≤ D(g)(σ)`. Predilators need not satisfy it.
pub fn girard_lint<D: Predilator>(d: &D, max_order: usize, budget: usize) -> Report {
    let mut report = Report::new(format!("monotonicity lint for {}", d.name()));
    for n in 0..=max_order {
        let pts: Vec<usize> = (0..n).collect();
        let elems = d.raw_elements(&FiniteOrder::new(n), &pts, budget);
        for m in n..=max_order {
            let y = FiniteOrder::new(m);
            let embs = all_embeddings(n, m);
            for f in &embs {
                for g in &embs {
                    if f.iter().zip(g).any(|(a, b)| a > b) {
                        continue;
                    }
                    for a in &elems {
                        let fa = d.map(a, &mut |i| f[*i]);
                        let ga = d.map(a, &mut |i| g[*i]);
                        report.record("f <= g gives D(f) <= D(g)", d.compare_raw(&y, &fa, &ga) != Ordering::Greater, || {
                            format!("{} under f={f:?}, g={g:?}", show(d, a))
                        });
                    }
                }
            }
        }
    }
    report
}

/// Debug rendering of a normal form as `trace@[points]`.
pub fn describe<D: Predilator, E: Debug>(d: &D, a: &Nf<D, E>) -> String {
    format!("{}@{:?}", trace_text(d, &a.trace), a.support)
}
