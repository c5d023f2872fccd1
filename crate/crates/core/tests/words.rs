use std::cmp::Ordering;

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use rotkit::word::{
    is_maximal, kappa_cocycle, lex_cmp, lyndon_words, max_maximal_below, max_rotation, CocycleSum,
    LexOrder, Maximality,
};
use rotkit::DigitWord;

// Long enough to separate any two words with preperiod and period ≤ 8.
const EXPAND: usize = 256;

fn expand(w: &DigitWord) -> Vec<u8> {
    w.prefix(EXPAND)
}

fn naive_cmp(a: &DigitWord, b: &DigitWord) -> Ordering {
    expand(a).cmp(&expand(b))
}

fn naive_maximal(w: &DigitWord) -> bool {
    let x = expand(w);
    x[0] == 2 && (1..EXPAND / 2).all(|r| x[r..r + EXPAND / 2] <= x[..EXPAND / 2])
}

fn word_strategy() -> impl Strategy<Value = DigitWord> {
    (
        prop::collection::vec(0u8..=2, 0..6),
        prop::collection::vec(0u8..=2, 1..6),
    )
        .prop_map(|(pre, per)| DigitWord::eventually_periodic(pre, per).unwrap())
}

fn top_word_strategy() -> impl Strategy<Value = DigitWord> {
    (
        prop::collection::vec(0u8..=2, 0..6),
        prop::collection::vec(0u8..=2, 1..6),
    )
        .prop_map(|(mut pre, per)| {
            pre.insert(0, 2);
            DigitWord::eventually_periodic(pre, per).unwrap()
        })
}

/// Every periodic maximal word with period at most 6.
fn small_maximal_words() -> Vec<DigitWord> {
    lyndon_words(6)
        .into_iter()
        .map(|l| DigitWord::periodic(max_rotation(&l)).unwrap())
        .filter(naive_maximal)
        .collect()
}

proptest! {
    #[test]
    fn lex_order_is_total_and_matches_expansion(a in word_strategy(), b in word_strategy()) {
        let got = lex_cmp(&a, &b);
        let want = match naive_cmp(&a, &b) {
            Ordering::Less => LexOrder::Less,
            Ordering::Equal => LexOrder::Equal,
            Ordering::Greater => LexOrder::Greater,
        };
        prop_assert_eq!(got, want);
        let back = lex_cmp(&b, &a);
        prop_assert_eq!(got.is_le() && back.is_le(), got == LexOrder::Equal);
    }

    #[test]
    fn maximality_matches_shift_oracle(w in top_word_strategy()) {
        prop_assert_eq!(is_maximal(&w) == Maximality::Yes, naive_maximal(&w));
    }

    #[test]
    fn max_maximal_below_is_idempotent_and_below(theta in top_word_strategy()) {
        let k = max_maximal_below(&theta).unwrap();
        prop_assert!(naive_maximal(&k));
        prop_assert!(naive_cmp(&k, &theta) != Ordering::Greater);
        let again = max_maximal_below(&k).unwrap();
        prop_assert_eq!(naive_cmp(&again, &k), Ordering::Equal);
    }

    #[test]
    fn max_maximal_below_is_monotone(a in top_word_strategy(), b in top_word_strategy()) {
        let (lo, hi) = if naive_cmp(&a, &b) == Ordering::Greater { (b, a) } else { (a, b) };
        let (klo, khi) = (max_maximal_below(&lo).unwrap(), max_maximal_below(&hi).unwrap());
        prop_assert!(naive_cmp(&klo, &khi) != Ordering::Greater);
    }

    #[test]
    fn kappa_is_additive(w in word_strategy(), r in 0usize..40, s in 0usize..40) {
        let whole = kappa_cocycle(&w, r + s).unwrap();
        let head = kappa_cocycle(&w, r).unwrap();
        let tail = kappa_cocycle(&w.shift(r), s).unwrap();
        prop_assert_eq!(whole, head.add(&tail));
        prop_assert_eq!(whole.len, (r + s) as u64);
    }
}

#[test]
fn max_maximal_below_dominates_small_maximal_words() {
    let suite = small_maximal_words();
    assert!(suite.len() > 50);
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for _ in 0..300 {
        let theta = top_word_strategy().new_tree(&mut runner).unwrap().current();
        let k = max_maximal_below(&theta).unwrap();
        for c in &suite {
            if naive_cmp(c, &theta) != Ordering::Greater {
                assert_ne!(
                    naive_cmp(c, &k),
                    Ordering::Greater,
                    "{c} ≤ {theta} but exceeds K = {k}"
                );
            }
        }
    }
}

#[test]
fn max_maximal_below_fixes_maximal_words() {
    for c in small_maximal_words() {
        assert_eq!(
            naive_cmp(&max_maximal_below(&c).unwrap(), &c),
            Ordering::Equal
        );
    }
}

#[test]
fn finite_kappa_refuses_to_overrun() {
    let w: DigitWord = "2102".parse().unwrap();
    assert_eq!(
        kappa_cocycle(&w, 4).unwrap(),
        CocycleSum {
            counts: [1, 1, 2],
            len: 4
        }
    );
    assert!(kappa_cocycle(&w, 5).is_err());
}
