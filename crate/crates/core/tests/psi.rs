use std::cmp::Ordering;
use std::collections::HashSet;

use ordinal_collapse::dilator::{element_compare, Predilator};
use ordinal_collapse::laws::{self, PsiSuiteParams};
use ordinal_collapse::order::check_linear_order;
use ordinal_collapse::psi::{MembershipRule, PsiCaps, PsiError, PsiSystem, Term};
use ordinal_collapse::syntax::parse_all;
use ordinal_collapse::{Affine, Compose, GammaDil, Nu, NuElem, Omega};
use proptest::prelude::*;

/// Every subterm reachable from `t` through
/// indices at least `gamma`, `t` included.
fn reachable<D: Predilator>(gamma: NuElem, t: &Term<D>, out: &mut Vec<Term<D>>) {
    if t.alpha() >= gamma {
        out.push(t.clone());
        for r in t.children() {
            reachable::<D>(gamma, r, out);
        }
    }
}

fn member_oracle<D: Predilator>(p: &PsiSystem<D>, t: &Term<D>) -> bool {
    if !t.children().iter().all(|r| member_oracle(p, r)) {
        return false;
    }
    let mut below = Vec::new();
    for r in t.children() {
        reachable::<D>(t.alpha(), r, &mut below);
    }
    let top = p.payload(t);
    below.iter().all(|s| element_compare(&p.dil, p, &p.payload(s), &top) == Ordering::Less)
}

fn agrees<D: Predilator>(p: &PsiSystem<D>, caps: PsiCaps) -> (usize, usize) {
    let (all, _) = p.generate(caps, false, None);
    let mut members = 0;
    for t in &all {
        let m = member_oracle(p, t);
        assert_eq!(p.is_member(t), m, "{}", p.term_text(t));
        members += usize::from(m);
    }
    let (only, _) = p.generate(caps, true, None);
    assert_eq!(only.len(), members);
    (all.len(), members)
}

#[test]
fn membership_matches_oracle_and_counts_are_frozen() {
    let caps = PsiCaps { max_l: 21, max_payload: 3, max_alpha: 2 };
    assert_eq!(agrees(&PsiSystem::new(Nu::finite(1), Omega), caps), (224, 224));
    assert_eq!(agrees(&PsiSystem::new(Nu::finite(2), Omega), caps), (11506, 9051));
    assert_eq!(agrees(&PsiSystem::new(Nu::omega_plus(1), Omega), PsiCaps { max_l: 15, max_payload: 2, max_alpha: 3 }), (14730, 11456));
    let caps = PsiCaps { max_l: 21, max_payload: 1, max_alpha: 2 };
    assert_eq!(agrees(&PsiSystem::new(Nu::finite(2), Affine::new(2)), caps), (170, 99));
    assert_eq!(agrees(&PsiSystem::new(Nu::finite(1), Compose::new(Omega, Affine::new(2))), PsiCaps { max_l: 21, max_payload: 2, max_alpha: 1 }), (45, 30));
}

#[test]
fn psi_plus_is_linear() {
    let p = PsiSystem::new(Nu::omega_plus(1), Omega);
    let (all, _) = p.generate(PsiCaps { max_l: 7, max_payload: 2, max_alpha: 3 }, false, None);
    assert!(check_linear_order(&all, &mut |a, b| p.compare(a, b)).is_ok());
}

#[test]
fn cache_does_not_change_answers() {
    let caps = PsiCaps { max_l: 7, max_payload: 2, max_alpha: 2 };
    let a = PsiSystem::new(Nu::finite(2), GammaDil { max_seq_len: 2 });
    let b = PsiSystem::new(Nu::finite(2), GammaDil { max_seq_len: 2 }).without_cache();
    let (terms, _) = a.generate(caps, false, Some(400));
    for t in terms.iter().rev() {
        assert_eq!(a.is_member(t), b.is_member(t));
    }
}

#[test]
fn enumeration_prefixes_are_stable() {
    let p = PsiSystem::new(Nu::finite(2), Omega);
    let caps = PsiCaps { max_l: 1 << 20, max_payload: 3, max_alpha: 2 };
    let long = p.enumerate_members(60, caps).unwrap();
    for n in [1, 7, 30] {
        assert_eq!(p.enumerate_members(n, caps).unwrap(), long[..n]);
    }
    let mut seen = HashSet::new();
    for t in &long {
        assert!(t.children().iter().all(|c| seen.contains(c)));
        seen.insert(t.clone());
    }
}

#[test]
fn exhausted_caps_are_reported() {
    let p = PsiSystem::new(Nu::finite(1), Affine::new(1));
    let err = p.enumerate_members(1000, PsiCaps { max_l: 5, max_payload: 1, max_alpha: 1 }).unwrap_err();
    assert!(matches!(err, PsiError::Exhausted { wanted: 1000, .. }), "{err}");
}

#[test]
fn full_suite_on_a_small_system() {
    let sys = PsiSystem::new(Nu::finite(2), Omega);
    let r = laws::psi_suite(
        &sys,
        PsiSuiteParams {
            plus_caps: PsiCaps { max_l: 7, max_payload: 3, max_alpha: 2 },
            member_caps: laws::deep_member_caps(2),
            members: 80,
            grid_arity: 2,
            grid_prefix: 20,
            grid_payload: 2,
            grid_alpha: 2,
            deep_caps: None,
        },
    );
    assert!(r.passed(), "{r}");
}

#[test]
fn dropping_the_union_admits_non_members() {
    let good = PsiSystem::new(Nu::omega_plus(1), Omega);
    let bad = PsiSystem::new(Nu::omega_plus(1), Omega).with_rule(MembershipRule::DropUnion);
    let (all, _) = good.generate(PsiCaps { max_l: 15, max_payload: 1, max_alpha: 4 }, false, Some(5000));
    assert!(all.iter().any(|t| bad.is_member(t) && !good.is_member(t)));
    assert!(all.iter().all(|t| !good.is_member(t) || bad.is_member(t)));
}

fn omega_members() -> (PsiSystem<Omega>, Vec<Term<Omega>>) {
    let p = PsiSystem::new(Nu::omega_plus(1), Omega);
    let m = p.enumerate_members(150, laws::deep_member_caps(3)).unwrap();
    (p, m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn collapse_and_inverse_agree(i in 0usize..150) {
        let (p, m) = omega_members();
        let t = &m[i];
        let (alpha, tau) = p.pi_collapse(t).unwrap();
        prop_assert_eq!(p.psi_inverse(alpha, &tau), Some(t.clone()));
        let text = p.term_text(t);
        prop_assert_eq!(parse_all(&text, |c| p.parse_term(c)), Ok(t.clone()));
    }

    #[test]
    fn order_is_antisymmetric_on_members(i in 0usize..150, j in 0usize..150) {
        let (p, m) = omega_members();
        prop_assert_eq!(p.compare(&m[i], &m[j]), p.compare(&m[j], &m[i]).reverse());
        prop_assert_eq!(p.compare(&m[i], &m[j]) == Ordering::Equal, i == j);
    }

    #[test]
    fn children_may_be_given_in_any_order(i in 0usize..150, j in 0usize..150) {
        let (p, m) = omega_members();
        prop_assume!(i != j);
        let (a, b) = (m[i].clone(), m[j].clone());
        let (lo, hi) = if p.compare(&a, &b) == Ordering::Less { (a, b) } else { (b, a) };
        let x = p.make_term(NuElem::ZERO, vec![lo.clone(), hi.clone()], vec![1, 0]).unwrap();
        let y = p.make_term(NuElem::ZERO, vec![hi, lo], vec![1, 0]).unwrap();
        prop_assert_eq!(x, y);
    }
}
