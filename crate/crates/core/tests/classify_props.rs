use proptest::prelude::*;
use rug::{Integer, Rational};

use dni::approx::AuxiliaryFn;
use dni::cf::{expand, PartialQuotients, RealInput};
use dni::classify::{check_k3psi, classify_point, detect_events, order_statistic, EventKind, K3Outcome, PointVerdict};

fn aux(s: &str) -> AuxiliaryFn {
    s.parse().unwrap()
}

/// Partial quotients of `e - 2` from Euclid on the rational `sum_{k<=n} 1/k! - 2`.
fn e_minus_two_by_euclid(count: usize) -> Vec<Integer> {
    let mut e = Rational::new();
    let mut fact = Integer::from(1);
    for k in 0..80u32 {
        if k > 0 {
            fact *= k;
        }
        e += Rational::from((Integer::from(1), fact.clone()));
    }
    let mut x = e - 2u32;
    let mut out = Vec::new();
    for _ in 0..count {
        let r = Rational::from(x.recip_ref());
        let a = Integer::from(r.floor_ref());
        x = r - &a;
        out.push(a);
    }
    out
}

#[test]
fn e_minus_two_events_match_brute_force() {
    let depth = 40;
    let truth = e_minus_two_by_euclid(depth + 1);
    let a = expand(&"gen:e-2".parse::<RealInput>().unwrap(), depth + 1).unwrap();
    assert_eq!(a.entries(), &truth[..]);
    let ev = detect_events(&a, &aux("const:10"), depth).unwrap();
    for r in &ev {
        let (an, an1) = (&truth[r.n - 1], &truth[r.n]);
        let product = Integer::from(an * an1);
        let want = if *an1 > 10 {
            EventKind::G1
        } else if product > 10 {
            EventKind::G
        } else if Integer::from(&product * 4u32) <= 10 {
            EventKind::Witness
        } else {
            EventKind::Band
        };
        assert_eq!(r.kind, want, "n = {}", r.n);
    }
    assert!(ev.iter().any(|r| r.kind.is_g_event()));
}

#[test]
fn linear_generator_events_from_logs() {
    let depth = 50;
    let a = expand(&"gen:linear".parse::<RealInput>().unwrap(), depth + 1).unwrap();
    let ev = detect_events(&a, &aux("logpow:1"), depth).unwrap();
    let (mut q0, mut q1) = (Integer::from(0), Integer::from(1));
    for n in 1..=depth {
        let next = Integer::from(&q1 * n as u32) + &q0;
        q0 = std::mem::replace(&mut q1, next);
        let (m, e) = q1.to_f64_exp();
        let ln_q = m.ln() + f64::from(e) * std::f64::consts::LN_2;
        let product = (n * (n + 1)) as f64;
        assert_eq!(ev[n - 1].qn, q1);
        assert_eq!(ev[n - 1].kind.is_g_event(), product > ln_q, "n = {n}");
    }
}

#[test]
fn order_statistic_bounded_quotients_decay() {
    let a = PartialQuotients::from_slice(&[5; 301]).unwrap();
    let o = order_statistic(&a, 300, 150).unwrap();
    let t = o.tau_hat.unwrap();
    assert!(t > 0.0 && t < 0.03, "{t}");
    let golden = expand(&RealInput::golden(), 101).unwrap();
    assert_eq!(order_statistic(&golden, 100, 50).unwrap().tau_hat, Some(0.0));
}

#[test]
fn reports_are_deterministic() {
    let a = expand(&"gen:e-2".parse::<RealInput>().unwrap(), 61).unwrap();
    let r1 = classify_point("gen:e-2", &a, &aux("logpow:1"), 60, None).unwrap();
    let r2 = classify_point("gen:e-2", &a, &aux("logpow:1"), 60, None).unwrap();
    assert_eq!(serde_json::to_string(&r1).unwrap(), serde_json::to_string(&r2).unwrap());
}

#[test]
fn json_schema_fields() {
    let a = expand(&RealInput::golden(), 11).unwrap();
    let r = classify_point("golden", &a, &aux("const:1"), 10, None).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    for key in ["point_spec", "depth", "events", "verdict", "tau_hat"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let e = &v["events"][0];
    for key in ["n", "an", "an1", "qn_digits", "kind"] {
        assert!(e.get(key).is_some(), "{key}");
    }
    assert_eq!(v["verdict"], "inconclusive");
}

fn address() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(prop_oneof![4 => 1u64..5, 1 => 5u64..2000], 8..40)
}

proptest! {
    #[test]
    fn g1_events_are_g_events(a in address(), c in 1u32..50) {
        let pq = PartialQuotients::from_slice(&a).unwrap();
        let ev = detect_events(&pq, &aux(&format!("const:{c}")), a.len() - 1).unwrap();
        for r in ev {
            let product = Integer::from(&r.an * &r.an1);
            if r.kind == EventKind::G1 {
                prop_assert!(r.an1 > c && product > c);
            }
            if r.kind.is_g_event() {
                prop_assert!(product > c);
            }
        }
    }

    #[test]
    fn events_are_antitone_in_psi(a in address(), c1 in 1u32..40, extra in 0u32..40, t in 1u32..8) {
        let pq = PartialQuotients::from_slice(&a).unwrap();
        let depth = a.len() - 1;
        let pairs = [
            (format!("const:{c1}"), format!("const:{}", c1 + extra)),
            (format!("pow:{}/10", t), format!("pow:{}/10", t + extra % 5)),
            ("logpow:1".to_string(), format!("{}*logpow:1", 1 + extra)),
        ];
        for (small, large) in pairs {
            let lo = detect_events(&pq, &aux(&small), depth).unwrap();
            let hi = detect_events(&pq, &aux(&large), depth).unwrap();
            for (x, y) in lo.iter().zip(&hi) {
                if y.kind.is_g_event() {
                    prop_assert!(x.kind.is_g_event(), "n = {}: {} vs {}", x.n, small, large);
                }
            }
        }
    }

    #[test]
    fn k3_success_implies_g1(a in address(), spec in prop_oneof![
        (1u32..30).prop_map(|c| format!("const:{c}")),
        (1u32..10).prop_map(|t| format!("pow:{t}/10")),
    ]) {
        let pq = PartialQuotients::from_slice(&a).unwrap();
        let depth = a.len() - 1;
        let psi = aux(&spec);
        let k3 = check_k3psi(&pq, &psi, depth).unwrap();
        let ev = detect_events(&pq, &psi, depth).unwrap();
        let mut successes = 0;
        for r in &k3 {
            if r.outcome == K3Outcome::Satisfied {
                successes += 1;
                let e = &ev[r.n - 1];
                prop_assert_eq!(e.kind, EventKind::G1, "n = {}", r.n);
            }
        }
        let g1 = ev.iter().filter(|e| e.kind == EventKind::G1).count();
        prop_assert!(g1 >= successes);
    }

    #[test]
    fn verdict_follows_tail_window(a in address(), c in 1u32..20) {
        let pq = PartialQuotients::from_slice(&a).unwrap();
        let depth = a.len() - 1;
        let r = classify_point("x", &pq, &aux(&format!("const:{c}")), depth, None).unwrap();
        let tail: Vec<_> = r.tail().collect();
        match r.verdict {
            PointVerdict::NonImprovableEvidence => prop_assert!(tail.iter().any(|e| e.kind.is_g_event())),
            PointVerdict::ImprovableEvidence => prop_assert!(tail.iter().all(|e| e.kind == EventKind::Witness)),
            PointVerdict::Inconclusive => {
                prop_assert!(!tail.iter().any(|e| e.kind.is_g_event()));
                prop_assert!(!tail.iter().all(|e| e.kind == EventKind::Witness));
            }
        }
    }
}
