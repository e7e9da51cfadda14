use proptest::prelude::*;

use dni::approx::AuxiliaryFn;
use dni::dimfun::DimensionFunction;
use dni::series::{eval_series, Cutoff, PRange, SeriesKind, SeriesSpec, SeriesVerdict};

fn aux(s: &str) -> AuxiliaryFn {
    s.parse().unwrap()
}

fn f(s: &str) -> DimensionFunction {
    s.parse().unwrap()
}

fn blocks(spec: &SeriesSpec) -> Vec<(u64, f64)> {
    eval_series(spec).unwrap().blocks.iter().map(|b| (b.k, b.block)).collect()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn kw_condensed_blocks() {
    let spec = SeriesSpec::blocks(SeriesKind::Kw, None, aux("logpow:1"), 30);
    for (k, b) in blocks(&spec) {
        // 2^k a(2^k) with Psi(2^k) = k ln 2
        let psi = k as f64 * std::f64::consts::LN_2;
        assert!(rel(b, psi.ln() / psi) < 1e-12, "k = {k}");
    }
}

#[test]
fn direct_sums_match_float_loops() {
    let n = 5000u64;
    let mut spec = SeriesSpec::new(SeriesKind::Kw, None, aux("logpow:1"), Cutoff::Terms(n));
    spec.start = Some(3);
    let total = eval_series(&spec).unwrap().total().unwrap().to_f64();
    let oracle: f64 = (3..=n).map(|q| {
        let l = (q as f64).ln();
        l.ln() / (q as f64 * l)
    }).sum();
    assert!(rel(total, oracle) < 1e-9, "{total} vs {oracle}");

    let mut spec = SeriesSpec::new(SeriesKind::Jarnik, Some(f("power:1/2")), aux("pow:1"), Cutoff::Terms(n));
    spec.start = Some(1);
    let total = eval_series(&spec).unwrap().total().unwrap().to_f64();
    let oracle: f64 = (1..=n).map(|q| 1.0 / (q as f64).sqrt()).sum();
    assert!(rel(total, oracle) < 1e-9);
}

#[test]
fn pq_direct_matches_double_loop() {
    let n = 300u64;
    for (range, restricted) in [(PRange::Full, false), (PRange::Restricted, true)] {
        let mut spec = SeriesSpec::new(SeriesKind::Pq(range), Some(f("power:1/2")), aux("pow:1/2"), Cutoff::Terms(n));
        spec.start = Some(1);
        let total = eval_series(&spec).unwrap().total().unwrap().to_f64();
        let mut oracle = 0.0;
        for q in 1..=n {
            let psi = (q as f64).sqrt();
            for p in 1..=q {
                if restricted && (p as f64) <= q as f64 / psi {
                    continue;
                }
                oracle += (1.0 / (p as f64 * q as f64 * psi)).sqrt();
            }
        }
        assert!(rel(total, oracle) < 1e-9, "{range:?}: {total} vs {oracle}");
    }
}

#[test]
fn scaling_f_scales_every_block() {
    let base = SeriesSpec::blocks(SeriesKind::Main, Some(f("power:1/2")), aux("pow:1"), 20);
    let scaled = SeriesSpec::blocks(SeriesKind::Main, Some(f("3*power:1/2")), aux("pow:1"), 20);
    for ((k, a), (_, b)) in blocks(&base).into_iter().zip(blocks(&scaled)) {
        assert!(rel(b, 3.0 * a) < 1e-12, "k = {k}");
    }
}

#[test]
fn degenerate_psi_is_trivially_convergent() {
    // Psi < 2 everywhere leaves the inner MAIN range empty
    let spec = SeriesSpec::blocks(SeriesKind::Main, Some(f("power:1/2")), aux("const:1"), 20);
    let r = eval_series(&spec).unwrap();
    assert!(r.trivially_zero);
    assert_eq!(r.verdict, SeriesVerdict::ConvergesEvidence);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn main_power_blocks_match_closed_form(s in 0.2f64..1.0, tau_num in 2u32..9) {
        let tau = f64::from(tau_num) / 2.0;
        let spec = SeriesSpec::blocks(
            SeriesKind::Main,
            Some(DimensionFunction::power(rug::Rational::from_f64(s).unwrap()).unwrap()),
            aux(&format!("pow:{tau_num}/2")),
            16,
        );
        for (k, b) in blocks(&spec) {
            let k = k as f64;
            let mut oracle = 0.0;
            let mut j = 0.0;
            while j < tau * k {
                oracle += ((2.0 * k + j) * (1.0 - s) - (k + j) * tau * s).exp2();
                j += 1.0;
            }
            prop_assert!(rel(b, oracle) < 1e-10, "k = {}: {} vs {}", k, b, oracle);
        }
    }

    #[test]
    fn main_verdict_follows_critical_exponent(tau in prop::sample::select(vec![1u32, 2, 4]), offset in 0.08f64..0.3, above in any::<bool>()) {
        let critical = 2.0 / (2.0 + f64::from(tau));
        let s = if above { critical + offset } else { critical - offset };
        prop_assume!(s > 0.05 && s <= 1.0);
        let spec = SeriesSpec::blocks(
            SeriesKind::Main,
            Some(DimensionFunction::power(rug::Rational::from_f64(s).unwrap()).unwrap()),
            aux(&format!("pow:{tau}")),
            40,
        );
        let want = if above { SeriesVerdict::ConvergesEvidence } else { SeriesVerdict::DivergesEvidence };
        prop_assert_eq!(eval_series(&spec).unwrap().verdict, want);
    }
}
