use proptest::prelude::*;
use rotkit::infimax::{
    abelianization, build_goober, infimax_rational, pf_eigen, sturmian, subst_fixed_prefix,
    AbelMatrix, Substitution,
};
use rotkit::word::{is_maximal, kappa_cocycle, lyndon_words, max_rotation, Maximality};
use rotkit::{DigitWord, FreqVector};

fn subst_strategy() -> impl Strategy<Value = Substitution> {
    prop::array::uniform3(prop::collection::vec(0u8..=2, 1..4))
        .prop_map(|images| Substitution::new(images).unwrap())
}

fn counts(ds: &[u8]) -> [u64; 3] {
    let mut c = [0u64; 3];
    for &d in ds {
        c[d as usize] += 1;
    }
    c
}

proptest! {
    #[test]
    fn abelianization_is_a_homomorphism(a in subst_strategy(), b in subst_strategy()) {
        prop_assert_eq!(abelianization(&a.compose(&b)), abelianization(&a).multiply(&abelianization(&b)));
    }

    #[test]
    fn abelianization_counts_images(a in subst_strategy(), w in prop::collection::vec(0u8..=2, 0..12)) {
        prop_assert_eq!(counts(&a.apply(&w)), abelianization(&a).apply(counts(&w)));
    }

    #[test]
    fn sturmian_words_are_balanced(lambda in 0.0f64..1.0) {
        let s = sturmian(lambda, 100_000).unwrap();
        let mut prefix = vec![0i64; s.len() + 1];
        for (i, &b) in s.iter().enumerate() {
            prefix[i + 1] = prefix[i] + b as i64;
        }
        for len in [1usize, 2, 3, 5, 8, 13, 100, 1000] {
            let sums = (0..=s.len() - len).map(|i| prefix[i + len] - prefix[i]);
            let (lo, hi) = sums.fold((i64::MAX, i64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)));
            prop_assert!(hi - lo <= 1, "length {len}: {lo}..{hi}");
        }
    }
}

#[test]
fn kappa_of_iterated_images_follows_the_matrix() {
    let sub = Substitution::lambda(1);
    let a = abelianization(&sub);
    let mut image = vec![2u8];
    for i in 0..=12 {
        let w = DigitWord::finite(image.clone()).unwrap();
        let k = kappa_cocycle(&w, image.len()).unwrap();
        assert_eq!(k.counts, a.pow(i).apply([0, 0, 1]), "i = {i}");
        image = sub.apply(&image);
    }
}

#[test]
fn fixed_point_prefix_is_stable() {
    let sub = Substitution::lambda(1);
    let w = subst_fixed_prefix(&sub, 2, 5000).unwrap();
    let p = w.prefix(5000);
    assert_eq!(&sub.apply(&p)[..5000], &p[..]);
    assert_eq!(&p[..2], &[2, 0]);
}

#[test]
fn pf_data_of_lambda_one() {
    let a = abelianization(&Substitution::lambda(1));
    assert_eq!(a, AbelMatrix([[0, 2, 1], [1, 0, 0], [0, 1, 1]]));
    let pf = pf_eigen(&a).unwrap();
    // Independent check: λ₁ is a root of the characteristic polynomial.
    let [c2, c1, c0] = a.char_poly().map(|c| c as f64);
    let l = pf.lambda1;
    assert!((l.powi(3) + c2 * l * l + c1 * l + c0).abs() < 1e-9);
    assert!((pf.alpha.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(pf.nu() > 0.0 && pf.nu() < 1.0);
}

/// Brute-force infimax: the least maximal periodic word with the right counts,
/// scanning every Lyndon word of the right length.
fn infimax_oracle(c: [usize; 3]) -> DigitWord {
    let n = c.iter().sum::<usize>();
    lyndon_words(n)
        .into_iter()
        .filter(|l| l.len() == n && counts(l) == c.map(|x| x as u64))
        .map(|l| DigitWord::periodic(max_rotation(&l)).unwrap())
        .filter(|w| is_maximal(w) == Maximality::Yes)
        .min_by_key(|w| w.prefix(4 * n))
        .unwrap()
}

#[test]
fn infimax_matches_lyndon_oracle() {
    for q in 1..=7usize {
        for a0 in 0..=q {
            for a2 in 1..=q - a0 {
                let a1 = q - a0 - a2;
                if num_integer::gcd(num_integer::gcd(a0, a1), a2) != 1 {
                    continue;
                }
                let alpha: FreqVector = format!("{a0}/{q},{a1}/{q},{a2}/{q}").parse().unwrap();
                assert_eq!(
                    infimax_rational(&alpha).unwrap(),
                    infimax_oracle([a0, a1, a2]),
                    "{alpha}"
                );
            }
        }
    }
}

#[test]
fn goober_blocks_must_match() {
    assert!(build_goober(&[2, 0], &[2, 1, 1], 1, 1, 0.5, 100).is_err());
    let g = build_goober(&[2, 0], &[2, 1], 1, 1, 0.5, 100).unwrap();
    assert_eq!(g.q, 2);
    assert!((g.target.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}
