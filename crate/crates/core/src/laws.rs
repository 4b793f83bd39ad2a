//! Law batteries over bounded fragments, shared by the test suites and the
//! command line.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use crate::check::Report;
use crate::dilator::{Affine, AffineElem, Compose, DilElem, Nf, Omega, Predilator};
use crate::gamma::{Gamma, GammaTerm, View};
use crate::morphisms::{
    check_bh_collapse, check_commuting_square, BhCollapse, BhOneCollapse, InitialEmbedding, OmegaCollapse,
    ThetaFromCollapse,
};
use crate::order::{all_embeddings, FiniteOrder, LinearOrder, Nu, Words};
use crate::psi::{check_collapse_on, check_e_basic, check_range_condition, range_grid, PsiCaps, PsiSystem, Term};

type T = GammaTerm<usize>;

/// Linearity of Γ(X) on a fragment closed under constituents, plus
/// `s, t < φ̄st`, `t₀ < ⟨t₀,…⟩` and `h(t) ≤ t`.
pub fn gamma_order_suite(g: &Gamma<FiniteOrder>, fragment: &[T]) -> Report {
    let mut report = Report::new(format!("Gamma order on {} terms", fragment.len()));
    match g.check_linear_exhaustive(fragment) {
        Ok(n) => report.checked += n,
        Err(v) => report.fail("linear order", v.to_string()),
    }
    for t in fragment {
        match t.view() {
            View::Pv(s, u) => {
                report.record("s < pv(s,t)", g.less(s, t), || show(t));
                report.record("t < pv(s,t)", g.less(u, t), || show(t));
            }
            View::Seq(v) => {
                report.record("t0 < <t0,...>", g.less(&v[0], t), || show(t));
            }
            _ => {}
        }
        report.record("h(t) <= t", g.leq(&t.h(), t), || show(t));
    }
    report
}

fn show(t: &T) -> String {
    t.to_text(&mut |i, out| out.push_str(&i.to_string()))
}

fn lt(g: &Gamma<FiniteOrder>, a: &T, b: &T) -> bool {
    g.compare(a, b) == Ordering::Less
}

/// For each term, the largest first argument `t₀` among all ways to write
/// it as `φ(t₀, t₁)` with both arguments in the fragment.
pub fn veblen_representations(g: &Gamma<FiniteOrder>, fragment: &[T]) -> HashMap<T, T> {
    let mut reps: HashMap<T, T> = HashMap::new();
    for s in fragment {
        for t in fragment {
            let p = g.phi(s, t);
            match reps.get_mut(&p) {
                Some(best) => {
                    if lt(g, best, s) {
                        *best = s.clone();
                    }
                }
                None => {
                    reps.insert(p, s.clone());
                }
            }
        }
    }
    reps
}

/// The pair laws of the total Veblen function at `(s, t)`. With `reps`, the
/// fixed-point equivalence consults the representations found in a
/// fragment; without it, the canonical representation is used.
/// Also checks `φst < Γ_x ⇔ s < Γ_x ∧ t < Γ_x` for each of `points`.
pub fn veblen_pair(
    g: &Gamma<FiniteOrder>,
    s: &T,
    t: &T,
    points: &[usize],
    reps: Option<&HashMap<T, T>>,
    r: &mut Report,
) {
    let p = g.phi(s, t);
    for &x in points {
        let gx = g.embed(x);
        let below = lt(g, &p, &gx);
        r.record("phi(s,t) < G(x) iff s,t < G(x)", below == (lt(g, s, &gx) && lt(g, t, &gx)), || {
            format!("s={}, t={}, x={x}", show(s), show(t))
        });
    }
    r.record("phi lands in H", p.is_h(), || format!("phi({}, {})", show(s), show(t)));
    r.record("s <= phi(s,t)", g.leq(s, &p), || format!("s={}, t={}", show(s), show(t)));
    r.record("t <= phi(s,t)", g.leq(t, &p), || format!("s={}, t={}", show(s), show(t)));
    let rhs = (t.is_sc() && lt(g, s, t))
        || match reps {
            Some(m) => t.is_h() && m.get(t).is_some_and(|t0| lt(g, s, t0)),
            None => match t.view() {
                View::Pv(t0, _) => lt(g, s, t0),
                _ => false,
            },
        };
    r.record("fixed points in the second argument", (p == *t) == rhs, || {
        format!("phi({}, {}) = {}", show(s), show(t), show(&p))
    });
}

/// Monotonicity: `t' < t ⇒ φst' < φst` and `s' < s ⇒ φs't ≤ φst`.
pub fn veblen_monotone(g: &Gamma<FiniteOrder>, s: &T, t: &T, u: &T, r: &mut Report) {
    if lt(g, u, t) {
        r.record("strictly increasing in t", lt(g, &g.phi(s, u), &g.phi(s, t)), || {
            format!("s={}, t'={}, t={}", show(s), show(u), show(t))
        });
    }
    if lt(g, u, s) {
        r.record("weakly increasing in s", g.leq(&g.phi(u, t), &g.phi(s, t)), || {
            format!("s'={}, s={}, t={}", show(u), show(s), show(t))
        });
    }
}

/// The three-case comparison of `φs't'` with `φst`.
pub fn veblen_quad(g: &Gamma<FiniteOrder>, s1: &T, t1: &T, s: &T, t: &T, r: &mut Report) {
    let lhs = g.phi(s1, t1);
    let rhs_term = g.phi(s, t);
    let left = lt(g, &lhs, &rhs_term);
    let right = match g.compare(s1, s) {
        Ordering::Less => lt(g, t1, &rhs_term),
        Ordering::Equal => lt(g, t1, t),
        Ordering::Greater => lt(g, &lhs, t),
    };
    r.record("phi(s',t') < phi(s,t) three-case criterion", left == right, || {
        format!("s'={}, t'={}, s={}, t={}", show(s1), show(t1), show(s), show(t))
    });
}

/// Every Veblen law on a fragment: pairs from `pairs`, four-tuples from
/// `quads`, and the characterizations of H and SC.
pub fn veblen_suite(g: &Gamma<FiniteOrder>, points: &[usize], pairs: &[T], quads: &[T]) -> Report {
    let mut r = Report::new("total Veblen function");
    let reps = veblen_representations(g, pairs);
    for s in pairs {
        let fixed = g.phi(s, &GammaTerm::ZERO) == *s;
        r.record("SC = {s | phi(s,0) = s}", fixed == s.is_sc(), || show(s));
        if s.is_h() {
            r.record("H = range of phi", reps.contains_key(s), || show(s));
        }
        for t in pairs {
            veblen_pair(g, s, t, points, Some(&reps), &mut r);
        }
    }
    for s in quads {
        for t in quads {
            for u in quads {
                veblen_monotone(g, s, t, u, &mut r);
                for v in quads {
                    veblen_quad(g, u, v, s, t, &mut r);
                }
            }
        }
    }
    r
}

/// The Veblen laws on `count` random draws, each a quadruple of terms built
/// from `0`, `Γ_x`, naturals, `φ`, `+` and `ω·`.
pub fn veblen_random(
    g: &Gamma<FiniteOrder>,
    points: &[usize],
    count: usize,
    depth: usize,
    pick: &mut dyn FnMut(usize) -> usize,
) -> Report {
    let mut r = Report::new(format!("total Veblen function, {count} random draws"));
    for _ in 0..count {
        let v: Vec<T> = (0..4).map(|_| g.random_member(points, depth, pick)).collect();
        veblen_pair(g, &v[0], &v[1], points, None, &mut r);
        veblen_monotone(g, &v[0], &v[1], &v[2], &mut r);
        veblen_quad(g, &v[2], &v[3], &v[0], &v[1], &mut r);
        let fixed = g.phi(&v[0], &GammaTerm::ZERO) == v[0];
        r.record("SC = {s | phi(s,0) = s}", fixed == v[0].is_sc(), || show(&v[0]));
    }
    r
}

/// All triples `(r, s, t)` from `fragment` with `L(r) + L(s) + L(t) ≤ max_sum`.
pub fn triples_by_total_measure(fragment: &[T], max_sum: usize) -> Vec<(T, T, T)> {
    let mut out = Vec::new();
    for a in fragment {
        let la = a.l_measure();
        for b in fragment {
            let lb = b.l_measure();
            if la + lb > max_sum {
                continue;
            }
            for c in fragment {
                if la + lb + c.l_measure() <= max_sum {
                    out.push((a.clone(), b.clone(), c.clone()));
                }
            }
        }
    }
    out
}

/// Addition laws (associativity, units, monotonicity, the H-absorption law)
/// on triples, the support bounds, and the laws of `t ↦ ω·t` on pairs.
pub fn arithmetic_suite(g: &Gamma<FiniteOrder>, triples: &[(T, T, T)], pairs: &[T]) -> Report {
    let mut rep = Report::new(format!("Gamma arithmetic on {} triples", triples.len()));
    let zero = GammaTerm::ZERO;
    for (r, s, t) in triples {
        let d = || format!("r={}, s={}, t={}", show(r), show(s), show(t));
        rep.record("(r+s)+t = r+(s+t)", g.add(&g.add(r, s), t) == g.add(r, &g.add(s, t)), d);
        if lt(g, s, t) {
            rep.record("s<t gives r+s < r+t", lt(g, &g.add(r, s), &g.add(r, t)), d);
            rep.record("s<t gives s+r <= t+r", g.leq(&g.add(s, r), &g.add(t, r)), d);
        }
    }
    for t in pairs {
        rep.record("t+0 = t = 0+t", g.add(t, &zero) == *t && g.add(&zero, t) == *t, || show(t));
        let w = g.omega_times(t);
        rep.record("t <= w*t", g.leq(t, &w), || show(t));
        for m in 0..4 {
            let nm = g.nat(m);
            let expect = match (0..6).find(|&n| g.nat(n) == *t) {
                Some(n) => g.nat(m + n),
                None => t.clone(),
            };
            rep.record("m + t on naturals and beyond", g.add(&nm, t) == expect, || {
                format!("{m} + {}", show(t))
            });
        }
        for s in pairs {
            let d = || format!("s={}, t={}", show(s), show(t));
            if lt(g, s, t) {
                rep.record("w* is strictly increasing", lt(g, &g.omega_times(s), &w), d);
            }
            if lt(g, s, &w) {
                for n in 0..4 {
                    rep.record("s < w*t gives s+n < w*t", lt(g, &g.add(s, &g.nat(n)), &w), d);
                }
            }
            let mut both: HashSet<usize> = g.support(s).into_iter().collect();
            both.extend(g.support(t));
            let mut produced = g.support(&g.phi(s, t));
            produced.extend(g.support(&g.add(s, t)));
            produced.extend(g.support(&w));
            rep.record("support bounds", produced.iter().all(|x| both.contains(x)), d);
        }
    }
    rep
}

/// `t ∈ H`, `r < r' + t` and `s < t` give `r + s < r' + t`, on all
/// four-tuples from `fragment` with total measure at most `max_sum`.
pub fn absorption_suite(g: &Gamma<FiniteOrder>, fragment: &[T], max_sum: usize) -> Report {
    let mut rep = Report::new("absorption below additive principal terms");
    let by_l = ByMeasure::new(fragment);
    for t in by_l.upto(max_sum).iter().filter(|t| t.is_h()) {
        let used = t.l_measure();
        for r1 in by_l.upto(max_sum - used) {
            let bound = g.add(r1, t);
            let used = used + r1.l_measure();
            for r in by_l.upto(max_sum - used).iter().filter(|x| lt(g, x, &bound)) {
                let used = used + r.l_measure();
                for s in by_l.upto(max_sum - used).iter().filter(|x| lt(g, x, t)) {
                    rep.record("r + s < r' + t", lt(g, &g.add(r, s), &bound), || {
                        format!("r={}, r'={}, s={}, t={}", show(r), show(r1), show(s), show(t))
                    });
                }
            }
        }
    }
    rep
}

/// A fragment sorted by measure, sliced by measure bounds.
struct ByMeasure<'a> {
    terms: Vec<&'a T>,
}

impl<'a> ByMeasure<'a> {
    fn new(fragment: &'a [T]) -> Self {
        let mut terms: Vec<&T> = fragment.iter().collect();
        terms.sort_by_key(|t| t.l_measure());
        ByMeasure { terms }
    }

    fn upto(&self, l: usize) -> &[&'a T] {
        let end = self.terms.partition_point(|t| t.l_measure() <= l);
        &self.terms[..end]
    }
}

/// `r ≤ t ⇔ ∃ s. r + s = t`, with witnesses searched in the fragment among
/// terms of measure at most `L(t)`.
pub fn difference_suite(g: &Gamma<FiniteOrder>, fragment: &[T]) -> Report {
    let mut rep = Report::new("difference law");
    let by_l = ByMeasure::new(fragment);
    for r in fragment {
        for t in fragment {
            let witness = by_l.upto(t.l_measure()).iter().any(|s| g.add(r, s) == *t);
            rep.record("r <= t iff r + s = t for some s", g.leq(r, t) == witness, || {
                format!("r={}, t={}", show(r), show(t))
            });
        }
    }
    rep
}

/// Functoriality of Γ over all embeddings between orders of size at most
/// `max_order`: `Γ(f)` preserves and reflects membership of pre-terms,
/// preserves the order, commutes with supports; images of initial segments
/// are initial segments; and `s < Γ_x ⇔ supp(s) < x`.
pub fn gamma_functor_suite(max_order: usize, max_l: usize, max_seq_len: usize) -> Report {
    let mut rep = Report::new("Gamma as a functor");
    for n in 0..=max_order {
        let gx = Gamma::new(FiniteOrder::new(n));
        let pts: Vec<usize> = (0..n).collect();
        let terms = gx.enumerate(&pts, max_l, max_seq_len);
        let pre = gx.enumerate_pre(&pts, max_l, max_seq_len);
        for s in &terms {
            for &x in &pts {
                let below = gx.less(s, &gx.embed(x));
                let supp_below = gx.support(s).iter().all(|p| *p < x);
                rep.record("s < G(x) iff supp(s) < x", below == supp_below, || {
                    format!("s={}, x={x}", show(s))
                });
            }
        }
        for m in n..=max_order {
            let gy = Gamma::new(FiniteOrder::new(m));
            let y_pts: Vec<usize> = (0..m).collect();
            let y_terms = gy.enumerate(&y_pts, max_l, max_seq_len);
            for f in all_embeddings(n, m) {
                let d = |s: &T| format!("f={f:?}, s={}", show(s));
                for p in &pre {
                    let q = p.map(&mut |i| f[*i]);
                    rep.record("membership is invariant under f", gx.is_member(p) == gy.is_member(&q), || {
                        format!("f={f:?}, pre-term of measure {}", p.l_measure())
                    });
                }
                let images: Vec<T> = terms.iter().map(|s| s.map(&mut |i| f[*i])).collect();
                let image_set: HashSet<&T> = images.iter().collect();
                for (s, fs) in terms.iter().zip(&images) {
                    let mut a: Vec<usize> = gx.support(s).iter().map(|i| f[*i]).collect();
                    a.sort_unstable();
                    rep.record("supports are natural", a == gy.support(fs), || d(s));
                }
                for (i, s) in terms.iter().enumerate() {
                    for (j, t) in terms.iter().enumerate() {
                        rep.record("f preserves the order", gx.compare(s, t) == gy.compare(&images[i], &images[j]), || {
                            format!("{} and {}", d(s), show(t))
                        });
                    }
                }
                let initial = f.iter().enumerate().all(|(i, v)| i == *v);
                if initial {
                    for fs in &images {
                        for t in &y_terms {
                            if gy.less(t, fs) {
                                rep.record("initial segments map to initial segments", image_set.contains(t), || {
                                    format!("f={f:?}: {} below {}", show(t), show(fs))
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    rep
}

/// Parameters of a ψ-system conformance run.
#[derive(Debug, Clone, Copy)]
pub struct PsiSuiteParams {
    /// Caps for the exhaustive check of the term order on `ψ⁺`.
    pub plus_caps: PsiCaps,
    /// Caps for member enumeration.
    pub member_caps: PsiCaps,
    pub members: usize,
    /// The range grid uses supports of at most this size from the first
    /// `grid_prefix` members, and singletons from all members.
    pub grid_arity: usize,
    pub grid_prefix: usize,
    pub grid_payload: usize,
    pub grid_alpha: usize,
    /// Members generated under these caps also serve as singleton supports,
    /// reaching deep narrow terms the first members miss.
    pub deep_caps: Option<PsiCaps>,
}

/// Conformance of a ψ-system: linearity of `ψ⁺` on a bounded fragment,
/// member enumeration, `π` as an order embedding, `⊲` as the payload
/// support, the range condition in both directions on the induced grid, and
/// the E-basic properties.
pub fn psi_suite<D: Predilator>(sys: &PsiSystem<D>, p: PsiSuiteParams) -> Report {
    let mut rep = Report::new(format!("conformance of {}", sys.label()));
    let (plus, _) = sys.generate(p.plus_caps, false, None);
    match crate::order::check_linear_order(&plus, &mut |a, b| sys.compare(a, b)) {
        Ok(n) => rep.checked += n,
        Err(v) => rep.fail("psi+ is linearly ordered", format!("{v}")),
    }
    let members = match sys.enumerate_members(p.members, p.member_caps) {
        Ok(m) => m,
        Err(e) => {
            rep.fail("enumeration", e.to_string());
            return rep;
        }
    };
    for t in &members {
        let ok = sys.pi_collapse(t).is_ok_and(|(a, tau)| a == t.alpha() && tau.support == t.children());
        rep.record("pi(t) = (alpha, D(e_a)(sigma))", ok, || sys.term_text(t));
    }
    rep.absorb(check_collapse_on(sys, &members));
    let mut grid = range_grid(sys, &members, p.grid_alpha, 1, p.grid_payload);
    let prefix: Vec<Term<D>> = members.iter().take(p.grid_prefix).cloned().collect();
    grid.extend(
        range_grid(sys, &prefix, p.grid_alpha, p.grid_arity, p.grid_payload)
            .into_iter()
            .filter(|(_, tau)| tau.arity() >= 2),
    );
    if let Some(caps) = p.deep_caps {
        let (deep, _) = sys.generate(caps, true, None);
        grid.extend(
            range_grid(sys, &deep, p.grid_alpha.max(caps.max_alpha), 1, p.grid_payload)
                .into_iter()
                .filter(|(_, tau)| tau.arity() == 1),
        );
    }
    rep.absorb(check_range_condition(sys, &grid));
    rep.absorb(check_e_basic(sys, &members, p.grid_alpha));
    rep
}

/// Caps that let member enumeration run as deep as needed.
pub fn deep_member_caps(max_alpha: usize) -> PsiCaps {
    PsiCaps { max_l: 1 << 40, max_payload: 6, max_alpha }
}

/// The first `count` words of `ω(Y)` by length, then by the word order.
pub fn shortlex_words(y_size: usize, count: usize) -> Vec<Vec<usize>> {
    let w = OmegaCollapse::new(y_size);
    let pts: Vec<usize> = (0..y_size).collect();
    let mut len = 0;
    loop {
        let mut words = Words::<FiniteOrder>::words_over(&pts, len);
        if words.len() >= count || y_size == 0 {
            words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| w.compare(a, b)));
            words.truncate(count);
            return words;
        }
        len += 1;
    }
}

/// `ψ_1(affine(Y))` against the explicit 1-collapse `ω(Y)`: the initial
/// embeddings in both directions are mutually inverse on the first `count`
/// elements of each side, commute with the collapses, and the image of the
/// ψ side covers every word of length at most `cover_len`.
pub fn omega_crosscheck(y_size: usize, count: usize, cover_len: usize) -> Report {
    let mut rep = Report::new(format!("psi_1(affine({y_size})) against w({y_size})"));
    let p = PsiSystem::new(Nu::finite(1), Affine::new(y_size));
    let w = OmegaCollapse::new(y_size);
    let members = match p.enumerate_members(count, deep_member_caps(1)) {
        Ok(m) => m,
        Err(e) => {
            rep.fail("enumeration", e.to_string());
            return rep;
        }
    };
    let words = shortlex_words(y_size, count);
    let f = InitialEmbedding::new(&p, &w, |a| a);
    let g = InitialEmbedding::new(&w, &p, |a| a);
    rep.absorb(check_commuting_square(&f, &members));
    rep.absorb(check_commuting_square(&g, &words));
    let mut hit = HashSet::new();
    for t in &members {
        match f.apply(t).and_then(|v| g.apply(&v).map(|back| (v, back))) {
            Ok((v, back)) => {
                rep.record("g(f(t)) = t", back == *t, || p.term_text(t));
                hit.insert(v);
            }
            Err(e) => rep.fail("embedding defined", format!("{}: {e}", p.term_text(t))),
        }
    }
    for v in &words {
        let ok = g.apply(v).and_then(|t| f.apply(&t)).is_ok_and(|back| back == *v);
        rep.record("f(g(w)) = w", ok, || format!("{v:?}"));
    }
    let pts: Vec<usize> = (0..y_size).collect();
    for v in Words::<FiniteOrder>::words_over(&pts, cover_len) {
        rep.record("short words are hit", hit.contains(&v), || format!("{v:?}"));
    }
    rep
}

/// The initial embedding `ψ_μ(ω) → ψ_ν(ω)` for `μ ≤ ν` on the first
/// `count` members: defined, landing in members, order preserving with
/// commuting squares, and independent of evaluation order.
pub fn monotone_embedding(mu: Nu, nu: Nu, count: usize) -> Report {
    let mut rep = Report::new(format!("embedding psi_{}(omega) into psi_{}(omega)", mu.bound, nu.bound));
    let src = PsiSystem::new(mu, Omega);
    let dst = PsiSystem::new(nu, Omega);
    let alpha_cap = if mu.bound.omegas == 0 { mu.bound.units as usize } else { 3 };
    let members = match src.enumerate_members(count, deep_member_caps(alpha_cap)) {
        Ok(m) => m,
        Err(e) => {
            rep.fail("enumeration", e.to_string());
            return rep;
        }
    };
    let f = InitialEmbedding::new(&src, &dst, |a| a);
    rep.absorb(check_commuting_square(&f, &members));
    let images = f.apply_all(&members);
    let again = InitialEmbedding::new(&src, &dst, |a| a);
    let reversed: Result<Vec<_>, _> = members.iter().rev().map(|t| again.apply(t)).collect();
    match (images, reversed) {
        (Ok(a), Ok(mut b)) => {
            b.reverse();
            rep.record("evaluation order is irrelevant", a == b, String::new);
            for (t, v) in members.iter().zip(&a) {
                rep.record("images are members", dst.is_member(v), || src.term_text(t));
            }
        }
        (Err(e), _) | (_, Err(e)) => rep.fail("embedding defined", e.to_string()),
    }
    rep
}

/// Outcome of the Bachmann-Howard bridge.
#[derive(Debug, Clone)]
pub struct BridgeOutcome {
    pub collapse: Report,
    pub round_trip: Report,
    pub sample: usize,
    pub fragment: usize,
    pub closed: bool,
}

/// The `affine(Y)` sample `0`, `1 + (y, t)` over the given points, cut at
/// `count` elements.
pub fn affine_sample<E: Clone>(y_size: usize, points: &[E], count: usize) -> Vec<Nf<Affine, E>> {
    let mut sample = vec![DilElem { trace: AffineElem::Zero, support: vec![] }];
    for t in points {
        for y in 0..y_size {
            sample.push(DilElem { trace: AffineElem::Succ(y, 0), support: vec![t.clone()] });
        }
    }
    sample.truncate(count);
    sample
}

/// The collapse `ϑ` read off `ψ_1(ω∘affine(Y))`, checked on `count`
/// sample elements, and the 1-collapse it generates, checked for the range
/// condition on a saturated fragment.
pub fn bh_bridge(y_size: usize, count: usize, rounds: usize, payload: usize, max_elems: usize) -> BridgeOutcome {
    let p = PsiSystem::new(Nu::finite(1), Compose::new(Omega, Affine::new(y_size)));
    let members = p
        .enumerate_members(count.div_ceil(y_size.max(1)) + 1, deep_member_caps(1))
        .unwrap_or_default();
    let theta = ThetaFromCollapse::new(&p);
    let sample = affine_sample(y_size, &members, count);
    let collapse = check_bh_collapse(&theta, &sample);
    let (frag, closed, round_trip) = bh_round_trip(&theta, rounds, payload, max_elems);
    BridgeOutcome { collapse, round_trip, sample: sample.len(), fragment: frag, closed }
}

/// Saturates the 1-collapse generated by `bh` and checks the range condition
/// and the collapse laws on the result.
pub fn bh_round_trip<B: BhCollapse>(bh: &B, rounds: usize, payload: usize, max_elems: usize) -> (usize, bool, Report) {
    let one = BhOneCollapse::new(bh);
    let (frag, closed) = one.saturate(rounds, payload, max_elems);
    let mut rep = Report::new(format!("1-collapse generated by theta, {} elements", frag.len()));
    let grid = range_grid(&one, &frag, 1, 2, payload);
    rep.absorb(check_range_condition(&one, &grid));
    rep.absorb(check_collapse_on(&one, &frag));
    (frag.len(), closed, rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_batteries_pass() {
        let g = Gamma::new(FiniteOrder::new(2));
        let f2 = g.enumerate(&[0, 1], 2, 2);
        assert!(gamma_order_suite(&g, &f2).passed());
        let f1 = g.enumerate(&[0, 1], 1, 2);
        assert!(veblen_suite(&g, &[0, 1], &f2, &f1).passed());
        let triples = triples_by_total_measure(&f2, 2);
        assert!(arithmetic_suite(&g, &triples, &f2).passed());
        assert!(difference_suite(&g, &f1).passed());
        assert!(absorption_suite(&g, &f2, 3).passed());
        assert!(gamma_functor_suite(2, 1, 2).passed());
    }
}
