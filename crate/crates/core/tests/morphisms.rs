use ordinal_collapse::laws;
use ordinal_collapse::morphisms::{check_commuting_square, InitialEmbedding, OmegaCollapse};
use ordinal_collapse::psi::{check_range_condition, range_grid, Collapse, PsiCaps, PsiSystem};
use ordinal_collapse::{Affine, LinearOrder, Nu, NuElem, Omega};
use proptest::prelude::*;

#[test]
fn omega_words_are_a_fixed_point() {
    for y in 1..4 {
        let w = OmegaCollapse::new(y);
        let frag = w.words(3);
        let grid = range_grid(&w, &frag, 1, 1, 1);
        let r = check_range_condition(&w, &grid);
        assert!(r.passed(), "{r}");
        for t in &frag {
            let (a, tau) = w.pi(t);
            assert_eq!(w.psi_inv(a, &tau).as_ref(), Some(t));
        }
    }
}

#[test]
fn affine_fixed_points_are_words() {
    for (y, n, cover) in [(1, 40, 6), (2, 150, 4), (3, 200, 3)] {
        let r = laws::omega_crosscheck(y, n, cover);
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn embeddings_compose() {
    let p1 = PsiSystem::new(Nu::finite(1), Omega);
    let p2 = PsiSystem::new(Nu::finite(2), Omega);
    let pw = PsiSystem::new(Nu::omega(), Omega);
    let pts = p1.enumerate_members(80, laws::deep_member_caps(1)).unwrap();
    let f = InitialEmbedding::new(&p1, &p2, |a| a);
    let g = InitialEmbedding::new(&p2, &pw, |a| NuElem::nat(a.units + 1));
    let gf = InitialEmbedding::new(&p1, &pw, |a| NuElem::nat(a.units + 1));
    let mid = f.apply_all(&pts).unwrap();
    assert_eq!(g.apply_all(&mid).unwrap(), gf.apply_all(&pts).unwrap());
    for r in [check_commuting_square(&f, &pts), check_commuting_square(&g, &mid), check_commuting_square(&gf, &pts)] {
        assert!(r.passed(), "{r}");
    }
    let r = laws::monotone_embedding(Nu::finite(1), Nu::finite(3), 100);
    assert!(r.passed(), "{r}");
}

#[test]
fn bachmann_howard_bridge_on_one_colour() {
    let b = laws::bh_bridge(1, 60, 10, 1, 120);
    assert!(b.collapse.passed(), "{}", b.collapse);
    assert!(b.round_trip.passed(), "{}", b.round_trip);
}

#[test]
fn initial_embeddings_reject_out_of_range_indices() {
    let p2 = PsiSystem::new(Nu::finite(2), Affine::new(1));
    let p1 = PsiSystem::new(Nu::finite(1), Affine::new(1));
    let pts = p2.enumerate_members(10, PsiCaps { max_l: 63, ..PsiCaps::default() }).unwrap();
    let f = InitialEmbedding::new(&p2, &p1, |a| a);
    assert!(pts.iter().any(|t| f.apply(t).is_err()));
}

proptest! {
    #[test]
    fn omega_collapse_order_is_lex(a in prop::collection::vec(0usize..3, 0..5), b in prop::collection::vec(0usize..3, 0..5)) {
        let w = OmegaCollapse::new(3);
        let mut a = a;
        let mut b = b;
        a.sort_unstable_by(|x, y| y.cmp(x));
        b.sort_unstable_by(|x, y| y.cmp(x));
        prop_assert!(w.contains(&a));
        prop_assert_eq!(w.compare(&a, &b), a.cmp(&b));
    }
}
