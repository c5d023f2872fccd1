use std::cmp::Ordering;

use num_integer::Integer;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rotkit::eight::{
    apply_f, apply_ft, ell, kneading_prefix, orbit_cocycle, orbit_trace, r_pt, return_f, theta,
    Circle, EightPoint,
};
use rotkit::pipeline::{pi_inverse, project_chart, project_pi};
use rotkit::polytope::Point;
use rotkit::rational::{int, rat, Rational};
use rotkit::{DigitWord, FreqVector};

fn t_strategy() -> impl Strategy<Value = Rational> {
    (1i64..=48).prop_flat_map(|q| (0..=q).prop_map(move |p| rat(p, q)))
}

fn s1(p: Rational) -> EightPoint {
    EightPoint::new(Circle::S1, p).unwrap()
}

fn cmp_prefix(a: &DigitWord, b: &DigitWord) -> Ordering {
    a.prefix(200).cmp(&b.prefix(200))
}

proptest! {
    #[test]
    fn return_map_is_a_first_return_of_f(num in 0i64..=1000) {
        // Sample the three return pieces uniformly.
        let pieces = [(rat(1, 3), rat(3, 5), 2), (int(2), rat(14, 5), 1), (int(3), int(4), 1)];
        let (a, b, iter) = &pieces[(num % 3) as usize];
        let x = a + (b - a) * rat(num, 1000);
        let p = s1(x);
        let mut y = apply_f(&p);
        if *iter == 2 {
            y = apply_f(&y);
        }
        prop_assert_eq!(return_f(&p).unwrap(), y);
    }

    #[test]
    fn kneading_is_monotone_in_t(a in t_strategy(), b in t_strategy()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (klo, khi) = (kneading_prefix(&lo, 64).unwrap(), kneading_prefix(&hi, 64).unwrap());
        prop_assert_ne!(cmp_prefix(&klo.kneading, &khi.kneading), Ordering::Greater, "t={} vs {}", lo, hi);
    }

    #[test]
    fn orbit_denominators_stay_bounded(t in t_strategy(), p in 0i64..80, c in any::<bool>()) {
        let x = if c { s1(rat(p % 50, 10)) } else { EightPoint::new(Circle::S2, rat(p % 30, 10)).unwrap() };
        let den = x.pos().denom().lcm(ell(&t).unwrap().pos().denom()).lcm(r_pt(&t).unwrap().pos().denom());
        let trace = orbit_trace(&t, &x, 200).unwrap();
        let mut y = x.clone();
        for step in &trace {
            prop_assert_eq!(&step.point, &y);
            prop_assert!((&den % step.point.pos().denom()) == 0.into());
            y = apply_ft(&t, &y).unwrap();
        }
        let fast = orbit_cocycle(&t, &x, 200).unwrap();
        let slow = trace.iter().fold((0, 0), |acc, s| (acc.0 + s.gamma.0, acc.1 + s.gamma.1));
        prop_assert_eq!(fast.sum, slow);
        prop_assert_eq!(fast.end, y);
    }
}

#[test]
fn pi_round_trips_on_random_points() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..1000 {
        let q: i64 = rng.gen_range(1..=60);
        let a0 = rng.gen_range(0..=q);
        let a2 = rng.gen_range(0..=q - a0);
        let alpha = FreqVector::new(rat(a0, q), rat(q - a0 - a2, q), rat(a2, q)).unwrap();
        let p = project_pi(&alpha);
        assert_eq!(pi_inverse(&p).unwrap(), alpha);
        // Closed form for the forward map.
        let want = Point::new(
            rat(a2, q) / (int(1) + rat(a0, q)),
            rat(a0, q) / (int(1) + rat(a0, q)),
        );
        assert_eq!(project_chart(&Point::new(rat(a0, q), rat(a2, q))), want);
    }
}

#[test]
fn kneading_anchors() {
    let k = |t: Rational| kneading_prefix(&t, 64).unwrap();
    assert_eq!(k(int(0)).kneading, "2(1)".parse().unwrap());
    assert_eq!(k(int(1)).kneading, "(2)".parse().unwrap());
    assert_eq!(
        theta(&rat(3, 4), 64).unwrap().word,
        "2220(2)".parse().unwrap()
    );
    assert_eq!(k(rat(3, 4)).kneading, "(2220)".parse().unwrap());
    for t in [rat(5, 6), rat(7, 8), rat(19, 20)] {
        assert_eq!(k(t).kneading, "(2)".parse().unwrap());
    }
}

#[test]
fn clip_interval_collapses() {
    let t = rat(3, 4);
    let image = apply_f(&ell(&t).unwrap());
    for x in [ell(&t).unwrap(), r_pt(&t).unwrap(), s1(int(4))] {
        assert_eq!(apply_ft(&t, &x).unwrap(), image);
    }
    assert_eq!(ell(&t).unwrap().pos(), &rat(149, 40));
}
