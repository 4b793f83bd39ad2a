use std::cmp::Ordering;

use ordinal_collapse::order::{
    all_embeddings, check_linear_order, kb_compare, KleeneBrouwer, OrderViolation, Product, Sum,
};
use ordinal_collapse::syntax::parse_nu_str;
use ordinal_collapse::{FiniteOrder, LinearOrder, Nu, NuElem, Words};
use proptest::prelude::*;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

// Padding with a symbol above every point turns the order into plain lex.
fn kb_oracle(s: &[usize], t: &[usize]) -> Ordering {
    let top = usize::MAX;
    let pad = |v: &[usize]| {
        let mut v = v.to_vec();
        v.push(top);
        v
    };
    pad(s).cmp(&pad(t))
}

// A word read as digits (point + 1) in base n + 1, right-padded with zeros.
fn word_key(w: &[usize], n: usize, len: usize) -> u64 {
    let mut key = 0u64;
    for i in 0..len {
        let d = w.get(i).map_or(0, |x| *x as u64 + 1);
        key = key * (n as u64 + 1) + d;
    }
    key
}

#[test]
fn kleene_brouwer_matches_padded_lex() {
    let kb = KleeneBrouwer { base: FiniteOrder::new(3), max_len: 4 };
    let all = kb.enumerate(4);
    assert_eq!(all.len(), 1 + 3 + 9 + 27 + 81);
    for s in &all {
        for t in &all {
            assert_eq!(kb_compare(&FiniteOrder::new(3), s, t), kb_oracle(s, t), "{s:?} {t:?}");
        }
    }
    assert!(check_linear_order(&all, &mut |a, b| kb.compare(a, b)).is_ok());
}

#[test]
fn word_counts_are_binomial() {
    for n in 0..5 {
        let pts: Vec<usize> = (0..n).collect();
        for len in 0..6 {
            assert_eq!(Words::<FiniteOrder>::words_over(&pts, len).len(), binomial(len + n, n));
        }
    }
}

#[test]
fn words_order_is_numeric_on_digit_keys() {
    let (n, len) = (3, 5);
    let pts: Vec<usize> = (0..n).collect();
    let words = Words::<FiniteOrder>::words_over(&pts, len);
    let w = Words::new(FiniteOrder::new(n));
    for a in &words {
        assert!(w.contains(a));
        for b in &words {
            assert_eq!(w.compare(a, b), word_key(a, n, len).cmp(&word_key(b, n, len)));
        }
    }
}

#[test]
fn enumerations_are_sorted_by_size_then_order() {
    let w = Words::new(FiniteOrder::new(2));
    let e = w.enumerate(3);
    for p in e.windows(2) {
        assert!(p[0].len() < p[1].len() || (p[0].len() == p[1].len() && w.less(&p[0], &p[1])));
    }
}

#[test]
fn cycles_are_reported() {
    let elems = vec![0, 1, 2];
    let mut rock_paper_scissors = |a: &i32, b: &i32| match (b - a).rem_euclid(3) {
        0 => Ordering::Equal,
        1 => Ordering::Less,
        _ => Ordering::Greater,
    };
    let err = check_linear_order(&elems, &mut rock_paper_scissors).unwrap_err();
    assert!(matches!(err, OrderViolation::Intransitive(..) | OrderViolation::Inconsistent(..)), "{err}");
}

#[test]
fn asymmetry_and_equality_are_reported() {
    let elems = vec![0, 1];
    let err = check_linear_order(&elems, &mut |_, _| Ordering::Less).unwrap_err();
    assert!(matches!(err, OrderViolation::Irreflexive(_) | OrderViolation::Asymmetric(..)));
    let err = check_linear_order(&elems, &mut |_, _| Ordering::Equal).unwrap_err();
    assert!(matches!(err, OrderViolation::EqualButDistinct(..)));
}

#[test]
fn all_embeddings_are_the_increasing_maps() {
    for n in 0..4 {
        for m in n..6 {
            let e = all_embeddings(n, m);
            assert_eq!(e.len(), binomial(m, n));
            assert!(e.iter().all(|f| f.windows(2).all(|w| w[0] < w[1]) && f.iter().all(|x| *x < m)));
        }
    }
}

#[test]
fn nu_orders() {
    let nu = Nu::omega_plus(2);
    assert!(nu.contains(&NuElem::omega_plus(1, 1)));
    assert!(!nu.contains(&NuElem::omega_plus(1, 2)));
    assert!(nu.less(&NuElem::nat(1000), &NuElem::omega_plus(1, 0)));
    assert_eq!(Nu::finite(3).enumerate(10), vec![NuElem::nat(0), NuElem::nat(1), NuElem::nat(2)]);
    let printed: Vec<String> = [(0, 3), (1, 0), (1, 1), (2, 0), (2, 1)]
        .iter()
        .map(|&(o, u)| NuElem::omega_plus(o, u).to_string())
        .collect();
    assert_eq!(printed, ["3", "w", "w+1", "w2", "w2+1"]);
}

#[test]
fn sums_and_products_are_linear() {
    let s = Sum::new(FiniteOrder::new(2), Words::new(FiniteOrder::new(2)));
    let e = s.enumerate(3);
    assert!(check_linear_order(&e, &mut |a, b| s.compare(a, b)).is_ok());
    let p = Product::new(FiniteOrder::new(3), FiniteOrder::new(2));
    let e = p.enumerate(3);
    assert_eq!(e.len(), 6);
    assert!(check_linear_order(&e, &mut |a, b| p.compare(a, b)).is_ok());
}

proptest! {
    #[test]
    fn nu_literals_roundtrip(o in 0u32..50, u in 0u32..50) {
        let e = NuElem::omega_plus(o, u);
        prop_assert_eq!(parse_nu_str(&e.to_string()), Ok(e));
    }

    #[test]
    fn kb_agrees_with_oracle(s in prop::collection::vec(0usize..4, 0..6), t in prop::collection::vec(0usize..4, 0..6)) {
        prop_assert_eq!(kb_compare(&FiniteOrder::new(4), &s, &t), kb_oracle(&s, &t));
    }

    #[test]
    fn embeddings_preserve_word_order(mut a in prop::collection::vec(0usize..3, 0..5), mut b in prop::collection::vec(0usize..3, 0..5), f in 0usize..10) {
        a.sort_unstable_by(|x, y| y.cmp(x));
        b.sort_unstable_by(|x, y| y.cmp(x));
        let f = &all_embeddings(3, 5)[f];
        let (x, y) = (Words::new(FiniteOrder::new(3)), Words::new(FiniteOrder::new(5)));
        let fa: Vec<usize> = a.iter().map(|i| f[*i]).collect();
        let fb: Vec<usize> = b.iter().map(|i| f[*i]).collect();
        prop_assert_eq!(x.compare(&a, &b), y.compare(&fa, &fb));
    }
}
