use proptest::prelude::*;
use rug::Rational;

use dni::approx::AuxiliaryFn;
use dni::dimfun::DimensionFunction;
use dni::experiments::covering::log2_block;
use dni::experiments::montecarlo::{gauss_kuzmin, sample_quotients};
use dni::experiments::{build_mass_distribution, enumerate_gifs, mc_lebesgue, GifsWord, MassDistribution};

fn unit() -> (Rational, Rational) {
    (Rational::from(0), Rational::from(1))
}

fn mass(n0: u32, n1: u32, b0: (Rational, Rational)) -> MassDistribution {
    let aux: AuxiliaryFn = "pow:1".parse().unwrap();
    let f: DimensionFunction = "power:2/3".parse().unwrap();
    build_mass_distribution(&aux, &f, b0, n0, n1, 0.6).unwrap()
}

/// `[0; b_1, ..., b_n]` by folding from the tail.
fn cf_value(word: &[u64]) -> Rational {
    let mut x = Rational::new();
    for &b in word.iter().rev() {
        x = Rational::from(1) / (x + b);
    }
    x
}

#[test]
fn gifs_small_cases() {
    let words: Vec<Vec<u64>> = enumerate_gifs(2, 1 << 10).unwrap().into_iter().map(|w| w.word).collect();
    assert_eq!(words, vec![vec![1], vec![1, 1], vec![2]]);
}

#[test]
fn gifs_words_follow_the_recurrence() {
    for w in enumerate_gifs(200, 1 << 10).unwrap() {
        let det = i128::from(w.q) * i128::from(w.p_prev) - i128::from(w.p) * i128::from(w.q_prev);
        assert_eq!(det.abs(), 1, "{:?}", w.word);
        assert_eq!(Rational::from((w.p, w.q)), cf_value(&w.word));
        assert!(w.q <= 200);
        let (lo, hi) = w.interval();
        assert!(lo >= 0 && hi <= 1 && lo < hi);
    }
}

#[test]
fn gifs_siblings_are_disjoint() {
    let q_max = 128;
    let mut parents = vec![GifsWord::empty()];
    parents.extend(enumerate_gifs(q_max, 1 << 10).unwrap());
    for parent in parents {
        let mut children: Vec<_> = (1..=parent.max_symbol(q_max))
            .map(|b| parent.extend(b).unwrap().interval())
            .collect();
        children.sort();
        for pair in children.windows(2) {
            assert!(pair[0].1 <= pair[1].0);
        }
    }
}

#[test]
fn gifs_count_grows_quadratically() {
    let count = |m: u32| enumerate_gifs(1 << m, 1 << 10).unwrap().len() as f64;
    let slope = (count(10) / count(5)).log2() / 5.0;
    assert!((slope - 2.0).abs() < 0.15, "slope {slope}");
}

#[test]
fn omega_matches_brute_force() {
    let (n0, n1) = (4, 8);
    let dist = mass(n0, n1, unit());
    // counts per bucket first; a naive running sum of ~10^7 terms drifts
    let mut counts = std::collections::BTreeMap::new();
    for w in enumerate_gifs((1 << (n1 + 1)) - 1, 1 << 10).unwrap() {
        let k = 63 - w.q.leading_zeros();
        if k < n0 || k > n1 {
            continue;
        }
        for a in 1..=w.q {
            let l = 63 - a.leading_zeros();
            *counts.entry((k, l)).or_insert(0u64) += 1;
        }
    }
    // rho = 2^-(2k+l) / Psi(2^(k+l)) with Psi(q) = q
    let oracle: f64 = counts
        .iter()
        .map(|(&(k, l), &c)| c as f64 * (-f64::from(3 * k + 2 * l)).exp2().powf(2.0 / 3.0))
        .sum();
    let omega = dist.omega().to_f64();
    assert!(((omega - oracle) / oracle).abs() < 1e-12, "{omega} vs {oracle}");
    assert_eq!(dist.total_mass(), 1);
}

#[test]
fn mass_outside_b0_vanishes() {
    let half = Rational::from((1, 2));
    let dist = mass(3, 6, (Rational::new(), half.clone()));
    assert_eq!(dist.mu(&Rational::new(), &half).unwrap(), 1);
    assert_eq!(dist.mu(&Rational::from((3, 4)), &Rational::from(1)).unwrap(), 0);
    assert_eq!(dist.total_mass(), 1);
}

#[test]
fn covering_blocks_match_direct_sum() {
    for &(tau, s) in &[(1.0, 0.5), (2.0, 0.4), (0.5, 0.9), (3.0, 0.2)] {
        for k in 1..30u32 {
            let kf = f64::from(k);
            let n = (tau * kf).ceil() as u32;
            let direct: f64 = (0..n)
                .map(|j| {
                    let j = f64::from(j);
                    ((2.0 * kf + j) * (1.0 - s) - (kf + j) * tau * s).exp2()
                })
                .sum();
            assert!((log2_block(tau, s, k) - direct.log2()).abs() < 1e-9);
        }
    }
}

#[test]
fn gauss_kuzmin_frequencies() {
    let draws = sample_quotients(11, 0, 200_000);
    for k in 1..=4u64 {
        let want = (1.0 + 1.0 / (k as f64 * (k as f64 + 2.0))).log2();
        let got = draws.iter().filter(|&&a| a == k).count() as f64 / draws.len() as f64;
        assert!((got - want).abs() < 0.005, "P(a = {k}) = {got}, want {want}");
    }
}

#[test]
fn monte_carlo_is_reproducible_and_antitone() {
    let windows = [(25, 50), (50, 100)];
    let small: AuxiliaryFn = "logpow:1".parse().unwrap();
    let large: AuxiliaryFn = "4*logpow:1".parse().unwrap();
    let a = mc_lebesgue(&small, 1000, 100, &windows, 5).unwrap();
    let b = mc_lebesgue(&small, 1000, 100, &windows, 5).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let c = mc_lebesgue(&large, 1000, 100, &windows, 5).unwrap();
    for (x, y) in a.rows.iter().zip(&c.rows) {
        assert!(y.hits <= x.hits);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn covering_blocks_decrease_in_s(tau in 0.1f64..6.0, s in 0.01f64..0.99, ds in 0.001f64..0.5, k in 1u32..200) {
        let t = (s + ds).min(1.0);
        prop_assert!(log2_block(tau, t, k) < log2_block(tau, s, k));
    }

    #[test]
    fn gauss_kuzmin_is_antitone(u in 1e-12f64..1.0, v in 1e-12f64..1.0) {
        let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
        prop_assert!(gauss_kuzmin(lo) >= gauss_kuzmin(hi));
        prop_assert!(gauss_kuzmin(hi) >= 1);
    }

    #[test]
    fn mass_is_additive(a in 0u32..=1000, b in 0u32..=1000, c in 0u32..=1000) {
        let dist = mass(2, 5, unit());
        let mut v = [a, b, c];
        v.sort();
        let [lo, mid, hi] = v.map(|x| Rational::from((x, 1000)));
        let left = dist.mu(&lo, &mid).unwrap();
        let right = dist.mu(&mid, &hi).unwrap();
        let whole = dist.mu(&lo, &hi).unwrap();
        prop_assert_eq!(left + right, whole.clone());
        prop_assert!((0..=1).contains(&whole));
    }
}

