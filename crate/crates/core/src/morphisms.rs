//! Maps between collapses: the unique embedding between fixed points, the
//! explicit 1-collapse on `ω(Y)`, and the passages between 1-collapses of
//! `ω∘D` and Bachmann-Howard collapses for `D`.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt::Debug;
use std::sync::RwLock;

use thiserror::Error;

use crate::check::Report;
use crate::dilator::{
    denote, element_compare, normal_form, Affine, AffineElem, Compose, DilElem, Nf, Omega, Predilator,
};
use crate::order::{lex_compare, sort_by_cmp, FiniteOrder, LinearOrder, Nu, NuElem, Words};
use crate::psi::{g_of, range_condition, Collapse};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphError {
    #[error("the target collapse has no preimage for {0}")]
    Undefined(String),
    #[error("images of {0} are not increasing in the target")]
    NotIncreasing(String),
    #[error("{0} does not lie in the source collapse")]
    NotInSource(String),
}

/// The embedding `f : X → Y` between collapses with `κ∘f = (I × D(f))∘π`,
/// computed lazily by recursion along `⊲` and memoized.
pub struct InitialEmbedding<'a, S: Collapse, T: Collapse<Dil = S::Dil>> {
    pub src: &'a S,
    pub dst: &'a T,
    index: Box<dyn Fn(NuElem) -> NuElem + Send + Sync + 'a>,
    memo: RwLock<HashMap<S::Elem, T::Elem>>,
}

impl<'a, S: Collapse, T: Collapse<Dil = S::Dil>> InitialEmbedding<'a, S, T> {
    /// `index` is the increasing map `I : μ → ν`.
    pub fn new(src: &'a S, dst: &'a T, index: impl Fn(NuElem) -> NuElem + Send + Sync + 'a) -> Self {
        InitialEmbedding { src, dst, index: Box::new(index), memo: RwLock::new(HashMap::new()) }
    }

    pub fn index(&self, alpha: NuElem) -> NuElem {
        (self.index)(alpha)
    }

    /// `f(t) := κ⁻¹(I(α), D(f)(τ))` where `π(t) = (α, τ)`.
    pub fn apply(&self, t: &S::Elem) -> Result<T::Elem, MorphError> {
        if let Some(v) = self.memo.read().expect("embedding memo").get(t) {
            return Ok(v.clone());
        }
        let (alpha, tau) = self.src.pi(t);
        let support = tau
            .support
            .iter()
            .map(|s| self.apply(s))
            .collect::<Result<Vec<_>, _>>()?;
        if !support.windows(2).all(|w| self.dst.less(&w[0], &w[1])) {
            return Err(MorphError::NotIncreasing(format!("{t:?}")));
        }
        let image = DilElem { trace: tau.trace, support };
        let v = self
            .dst
            .psi_inv(self.index(alpha), &image)
            .ok_or_else(|| MorphError::Undefined(format!("{t:?}")))?;
        self.memo.write().expect("embedding memo").insert(t.clone(), v.clone());
        Ok(v)
    }

    /// Images of `pts`, in order.
    pub fn apply_all(&self, pts: &[S::Elem]) -> Result<Vec<T::Elem>, MorphError> {
        pts.iter().map(|t| self.apply(t)).collect()
    }
}

/// Checks the commuting square at every point and strict order preservation
/// on every pair.
pub fn check_commuting_square<S, T>(f: &InitialEmbedding<'_, S, T>, pts: &[S::Elem]) -> Report
where
    S: Collapse,
    T: Collapse<Dil = S::Dil>,
{
    let mut report = Report::new("commuting square");
    let mut images = Vec::with_capacity(pts.len());
    for t in pts {
        match f.apply(t) {
            Ok(v) => images.push(v),
            Err(e) => {
                report.fail("embedding is defined", format!("{t:?}: {e}"));
                return report;
            }
        }
    }
    for (t, v) in pts.iter().zip(&images) {
        let (alpha, tau) = f.src.pi(t);
        let (beta, rho) = f.dst.pi(v);
        let mapped: Result<Vec<T::Elem>, _> = tau.support.iter().map(|s| f.apply(s)).collect();
        let ok = beta == f.index(alpha)
            && mapped.is_ok_and(|m| m == rho.support)
            && rho.trace == tau.trace;
        report.record("kappa after f equals (I x D(f)) after pi", ok, || {
            format!("at {t:?}: kappa(f(t)) = ({beta}, {rho:?}) but pi(t) = ({alpha}, {tau:?})")
        });
    }
    for (i, s) in pts.iter().enumerate() {
        for (j, t) in pts.iter().enumerate() {
            let a = f.src.compare(s, t);
            let b = f.dst.compare(&images[i], &images[j]);
            report.record("f preserves the order", a == b, || {
                format!("{s:?} vs {t:?} is {a:?} but the images compare {b:?}")
            });
        }
    }
    report
}

/// `ω(Y)` as a 1-collapse of `1 + Y×X`: `π(⟨⟩) = 0` and
/// `π(⟨y₀,…,yₙ⟩) = 1 + (y₀, ⟨y₁,…,yₙ⟩)`.
#[derive(Debug, Clone)]
pub struct OmegaCollapse {
    pub dil: Affine,
    nu: Nu,
    words: Words<FiniteOrder>,
}

impl OmegaCollapse {
    pub fn new(y_size: usize) -> Self {
        OmegaCollapse { dil: Affine::new(y_size), nu: Nu::finite(1), words: Words::new(FiniteOrder::new(y_size)) }
    }

    pub fn y_size(&self) -> usize {
        self.dil.y_size
    }

    /// All words of length at most `max_len`, in increasing order.
    pub fn words(&self, max_len: usize) -> Vec<Vec<usize>> {
        let pts: Vec<usize> = (0..self.y_size()).collect();
        let mut v = Words::<FiniteOrder>::words_over(&pts, max_len);
        sort_by_cmp(&mut v, &mut |a, b| self.compare(a, b));
        v
    }
}

impl LinearOrder for OmegaCollapse {
    type Elem = Vec<usize>;

    fn compare(&self, a: &Vec<usize>, b: &Vec<usize>) -> Ordering {
        lex_compare(a, b, &mut |x, y| x.cmp(y))
    }

    fn contains(&self, a: &Vec<usize>) -> bool {
        self.words.contains(a)
    }

    fn enumerate(&self, budget: usize) -> Vec<Vec<usize>> {
        self.words(budget)
    }

    fn label(&self) -> String {
        format!("w({})", self.y_size())
    }
}

impl Collapse for OmegaCollapse {
    type Dil = Affine;

    fn dilator(&self) -> &Affine {
        &self.dil
    }

    fn nu(&self) -> &Nu {
        &self.nu
    }

    fn pi(&self, t: &Vec<usize>) -> (NuElem, Nf<Affine, Vec<usize>>) {
        let tau = match t.split_first() {
            None => DilElem { trace: AffineElem::Zero, support: vec![] },
            Some((y, rest)) => DilElem { trace: AffineElem::Succ(*y, 0), support: vec![rest.to_vec()] },
        };
        (NuElem::ZERO, tau)
    }

    /// `0 ↦ ⟨⟩`, and `1 + (y, w) ↦ y⌢w` when the head of `w` is at most `y`.
    fn psi_inv(&self, alpha: NuElem, tau: &Nf<Affine, Vec<usize>>) -> Option<Vec<usize>> {
        if alpha != NuElem::ZERO {
            return None;
        }
        match (&tau.trace, tau.support.as_slice()) {
            (AffineElem::Zero, []) => Some(vec![]),
            (AffineElem::Succ(y, 0), [w]) if *y < self.y_size() && self.contains(w) => {
                if w.first().map_or(true, |h| h <= y) {
                    let mut v = vec![*y];
                    v.extend_from_slice(w);
                    Some(v)
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

/// A Bachmann-Howard collapse `ϑ : D(Z) → Z`, defined on a fragment.
pub trait BhCollapse: Send + Sync {
    type Dil: Predilator;
    type Order: LinearOrder;

    fn dilator(&self) -> &Self::Dil;

    fn order(&self) -> &Self::Order;

    fn theta(&self, sigma: &BhNf<Self>) -> Result<BhElem<Self>, MorphError>;

    /// The `σ` with `ϑ(σ) = t`, if any.
    fn theta_inverse(&self, t: &BhElem<Self>) -> Option<BhNf<Self>>;
}

pub type BhElem<B> = <<B as BhCollapse>::Order as LinearOrder>::Elem;
pub type BhNf<B> = Nf<<B as BhCollapse>::Dil, BhElem<B>>;

type OuterWord<D, E> = Vec<<D as Predilator>::Raw<E>>;

/// `σ⁺ = ⟨σ₀,…,σ_{i(σ)−1}, σ⟩`, where `σ* = ⟨σ₀,…,σ_{n−1}⟩` is the largest
/// element of `{⟨⟩} ∪ G₀(⟨σ⟩)` and `i(σ)` is the least `i` with `σᵢ < σ`,
/// or `n`.
pub fn sigma_plus<C, D>(c: &C, sigma: &Nf<D, C::Elem>) -> Nf<Compose<Omega, D>, C::Elem>
where
    C: Collapse<Dil = Compose<Omega, D>>,
    D: Predilator,
{
    let comp = c.dilator();
    let inner = &comp.inner;
    let s_raw = denote(inner, sigma);
    let single: OuterWord<D, C::Elem> = vec![s_raw.clone()];
    let single_nf = normal_form(comp, c, &single);
    let mut star: OuterWord<D, C::Elem> = Vec::new();
    for g in g_of(c, NuElem::ZERO, &single_nf) {
        let w = denote(comp, &g);
        if comp.compare_raw(c, &w, &star) == Ordering::Greater {
            star = w;
        }
    }
    let i = star
        .iter()
        .position(|e| inner.compare_raw(c, e, &s_raw) == Ordering::Less)
        .unwrap_or(star.len());
    let mut plus = star[..i].to_vec();
    plus.push(s_raw);
    normal_form(comp, c, &plus)
}

/// `ϑ` read off a 1-collapse of `ω∘D`: `π(ϑ(σ)) = (0, σ⁺)`.
pub struct ThetaFromCollapse<'a, C: Collapse, D: Predilator> {
    pub collapse: &'a C,
    memo: RwLock<HashMap<Nf<D, C::Elem>, C::Elem>>,
}

impl<'a, C, D> ThetaFromCollapse<'a, C, D>
where
    C: Collapse<Dil = Compose<Omega, D>>,
    D: Predilator,
{
    pub fn new(collapse: &'a C) -> Self {
        ThetaFromCollapse { collapse, memo: RwLock::new(HashMap::new()) }
    }
}

impl<C, D> BhCollapse for ThetaFromCollapse<'_, C, D>
where
    C: Collapse<Dil = Compose<Omega, D>>,
    D: Predilator,
{
    type Dil = D;
    type Order = C;

    fn dilator(&self) -> &D {
        &self.collapse.dilator().inner
    }

    fn order(&self) -> &C {
        self.collapse
    }

    fn theta(&self, sigma: &Nf<D, C::Elem>) -> Result<C::Elem, MorphError> {
        if let Some(v) = self.memo.read().expect("theta memo").get(sigma) {
            return Ok(v.clone());
        }
        let plus = sigma_plus(self.collapse, sigma);
        let v = self
            .collapse
            .psi_inv(NuElem::ZERO, &plus)
            .ok_or_else(|| MorphError::Undefined(format!("{sigma:?}")))?;
        self.memo.write().expect("theta memo").insert(sigma.clone(), v.clone());
        Ok(v)
    }

    fn theta_inverse(&self, t: &C::Elem) -> Option<Nf<D, C::Elem>> {
        let (alpha, tau) = self.collapse.pi(t);
        if alpha != NuElem::ZERO {
            return None;
        }
        let word = denote(self.collapse.dilator(), &tau);
        let last = word.last()?;
        let sigma = normal_form(&self.collapse.dilator().inner, self.collapse, last);
        (self.theta(&sigma).ok().as_ref() == Some(t)).then_some(sigma)
    }
}

/// A broken `ϑ` that ignores its argument.
pub struct ConstantTheta<'a, B: BhCollapse> {
    pub inner: &'a B,
    pub value: BhElem<B>,
}

impl<B: BhCollapse> BhCollapse for ConstantTheta<'_, B> {
    type Dil = B::Dil;
    type Order = B::Order;

    fn dilator(&self) -> &B::Dil {
        self.inner.dilator()
    }

    fn order(&self) -> &B::Order {
        self.inner.order()
    }

    fn theta(&self, _sigma: &BhNf<B>) -> Result<BhElem<B>, MorphError> {
        Ok(self.value.clone())
    }

    fn theta_inverse(&self, _t: &BhElem<B>) -> Option<BhNf<B>> {
        None
    }
}

/// Verifies on a sample: (ii) `supp(σ)` lies below `ϑ(σ)`; (i) `σ < τ` and
/// `supp(σ)` below `ϑ(τ)` give `ϑ(σ) < ϑ(τ)`.
pub fn check_bh_collapse<B: BhCollapse>(bh: &B, sample: &[BhNf<B>]) -> Report {
    let mut report = Report::new("Bachmann-Howard collapse");
    let z = bh.order();
    let mut thetas = Vec::with_capacity(sample.len());
    for s in sample {
        match bh.theta(s) {
            Ok(v) => thetas.push(v),
            Err(e) => {
                report.fail("theta is defined", e.to_string());
                return report;
            }
        }
    }
    for (s, t) in sample.iter().zip(&thetas) {
        report.record("(ii) supp(sigma) below theta(sigma)", s.support.iter().all(|r| z.less(r, t)), || {
            format!("sigma={s:?}, theta(sigma)={t:?}")
        });
    }
    for (i, s) in sample.iter().enumerate() {
        for (j, t) in sample.iter().enumerate() {
            if element_compare(bh.dilator(), z, s, t) != Ordering::Less {
                continue;
            }
            if !s.support.iter().all(|r| z.less(r, &thetas[j])) {
                continue;
            }
            report.record("(i) theta is monotone below its values", z.less(&thetas[i], &thetas[j]), || {
                format!(
                    "sigma={s:?} < tau={t:?} with supp(sigma) below theta(tau), but theta(sigma)={:?}, theta(tau)={:?}",
                    thetas[i], thetas[j]
                )
            });
        }
    }
    report
}

/// The 1-collapse carved out of a Bachmann-Howard collapse: the suborder
/// generated by `t = ϑ(σ)` with `G(σ) ⊆ σ` and `supp(σ)` in the suborder,
/// with `π(ϑ(σ)) = (0, σ)`. Membership is decided lazily; [`Self::saturate`]
/// materializes a budgeted fragment.
pub struct BhOneCollapse<'a, B: BhCollapse> {
    pub bh: &'a B,
    nu: Nu,
    memo: RwLock<HashMap<BhElem<B>, bool>>,
}

impl<'a, B: BhCollapse> BhOneCollapse<'a, B> {
    pub fn new(bh: &'a B) -> Self {
        BhOneCollapse { bh, nu: Nu::finite(1), memo: RwLock::new(HashMap::new()) }
    }

    /// Rounds of saturation from the empty set: each round adds `ϑ(σ)` for
    /// every `σ` of payload size at most `payload` over the current elements
    /// that passes the range condition. Stops after `rounds` rounds or once
    /// `max_elems` elements exist; the flag is true when the last round
    /// added nothing.
    pub fn saturate(&self, rounds: usize, payload: usize, max_elems: usize) -> (Vec<BhElem<B>>, bool) {
        let dil = self.bh.dilator();
        let mut have: Vec<BhElem<B>> = Vec::new();
        let mut seen: HashSet<BhElem<B>> = HashSet::new();
        for _ in 0..rounds {
            let mut pts = have.clone();
            sort_by_cmp(&mut pts, &mut |a, b| self.compare(a, b));
            let mut added = false;
            for raw in dil.raw_elements(self, &pts, payload) {
                if have.len() >= max_elems {
                    return (have, false);
                }
                let sigma = normal_form(dil, self, &raw);
                if let Some(t) = self.psi_inv(NuElem::ZERO, &sigma) {
                    if seen.insert(t.clone()) {
                        have.push(t);
                        added = true;
                    }
                }
            }
            if !added {
                return (have, true);
            }
        }
        (have, false)
    }
}

impl<B: BhCollapse> LinearOrder for BhOneCollapse<'_, B> {
    type Elem = BhElem<B>;

    fn compare(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering {
        self.bh.order().compare(a, b)
    }

    fn contains(&self, t: &Self::Elem) -> bool {
        if let Some(&b) = self.memo.read().expect("suborder memo").get(t) {
            return b;
        }
        let b = match self.bh.theta_inverse(t) {
            Some(sigma) => {
                sigma.support.iter().all(|s| self.contains(s)) && range_condition(self, NuElem::ZERO, &sigma)
            }
            None => false,
        };
        self.memo.write().expect("suborder memo").insert(t.clone(), b);
        b
    }

    fn enumerate(&self, budget: usize) -> Vec<Self::Elem> {
        let (mut v, _) = self.saturate(budget, budget, usize::MAX);
        sort_by_cmp(&mut v, &mut |a, b| self.compare(a, b));
        v
    }

    fn label(&self) -> String {
        format!("1-collapse in {}", self.bh.order().label())
    }
}

impl<B: BhCollapse> Collapse for BhOneCollapse<'_, B> {
    type Dil = B::Dil;

    fn dilator(&self) -> &B::Dil {
        self.bh.dilator()
    }

    fn nu(&self) -> &Nu {
        &self.nu
    }

    /// `π = ϑ⁻¹` on the suborder; off it the value is a placeholder.
    fn pi(&self, t: &Self::Elem) -> (NuElem, BhNf<B>) {
        let sigma = self
            .bh
            .theta_inverse(t)
            .unwrap_or_else(|| DilElem { trace: placeholder_trace(self.bh.dilator()), support: vec![] });
        (NuElem::ZERO, sigma)
    }

    fn psi_inv(&self, alpha: NuElem, sigma: &BhNf<B>) -> Option<Self::Elem> {
        if alpha != NuElem::ZERO
            || !sigma.support.iter().all(|s| self.contains(s))
            || !sigma.support.windows(2).all(|w| self.less(&w[0], &w[1]))
            || !range_condition(self, NuElem::ZERO, sigma)
        {
            return None;
        }
        self.bh.theta(sigma).ok()
    }
}

// Some arity-0 trace; only reached for elements outside the suborder.
fn placeholder_trace<D: Predilator>(d: &D) -> D::Raw<usize> {
    crate::dilator::trace_enumerate(d, 0, usize::MAX >> 1)
        .into_iter()
        .next()
        .expect("the dilator has an element without support")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::{check_range_condition, range_grid, PsiCaps, PsiSystem};

    #[test]
    fn omega_collapse_pi_and_inverse() {
        let w = OmegaCollapse::new(3);
        assert_eq!(w.pi(&vec![]).1.trace, AffineElem::Zero);
        let (a, tau) = w.pi(&vec![2, 1]);
        assert_eq!(a, NuElem::ZERO);
        assert_eq!(tau.trace, AffineElem::Succ(2, 0));
        assert_eq!(tau.support, vec![vec![1]]);
        let bad = DilElem { trace: AffineElem::Succ(1, 0), support: vec![vec![2]] };
        assert_eq!(w.psi_inv(NuElem::ZERO, &bad), None);
        assert!(!range_condition(&w, NuElem::ZERO, &bad));
        let good = DilElem { trace: AffineElem::Succ(2, 0), support: vec![vec![1]] };
        assert_eq!(w.psi_inv(NuElem::ZERO, &good), Some(vec![2, 1]));
        let frag = w.words(2);
        let grid = range_grid(&w, &frag, 1, 1, 1);
        assert!(check_range_condition(&w, &grid).passed());
    }

    #[test]
    fn identity_embedding() {
        let p = PsiSystem::new(Nu::finite(2), Omega);
        let caps = PsiCaps { max_l: 5, max_payload: 2, max_alpha: 2 };
        let pts = p.enumerate_members(12, caps).unwrap();
        let f = InitialEmbedding::new(&p, &p, |a| a);
        assert_eq!(f.apply_all(&pts).unwrap(), pts);
        assert!(check_commuting_square(&f, &pts).passed());
    }

    #[test]
    fn affine_fixed_point_maps_to_words() {
        let p = PsiSystem::new(Nu::finite(1), Affine::new(2));
        let w = OmegaCollapse::new(2);
        let pts = p.enumerate_members(6, PsiCaps { max_l: 63, ..PsiCaps::default() }).unwrap();
        let f = InitialEmbedding::new(&p, &w, |a| a);
        assert_eq!(f.apply(&pts[0]).unwrap(), Vec::<usize>::new());
        assert!(check_commuting_square(&f, &pts).passed());
    }

    #[test]
    fn constant_theta_is_caught() {
        let p = PsiSystem::new(Nu::finite(1), Compose::new(Omega, Affine::new(1)));
        let caps = PsiCaps { max_l: 7, max_payload: 2, max_alpha: 1 };
        let pts = p.enumerate_members(8, caps).unwrap();
        let bh = ThetaFromCollapse::new(&p);
        let mut sample: Vec<Nf<Affine, _>> = vec![DilElem { trace: AffineElem::Zero, support: vec![] }];
        for t in &pts {
            sample.push(DilElem { trace: AffineElem::Succ(0, 0), support: vec![t.clone()] });
        }
        assert!(check_bh_collapse(&bh, &sample).passed());
        let zero = bh.theta(&sample[0]).unwrap();
        let bad = ConstantTheta { inner: &bh, value: zero };
        assert!(!check_bh_collapse(&bad, &sample).passed());
    }
}
