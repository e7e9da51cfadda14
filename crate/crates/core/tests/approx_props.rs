use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use dni::approx::{aux_to_psi, psi_to_aux, ApproximatingFn, ApproximatingPair, AuxiliaryFn};

const PREC: u32 = 256;

fn rational(num: u32, den: u32) -> Rational {
    Rational::from((num, den))
}

// q^r = exp(r ln q), far above the working precision
fn powr(ln: &Float, r: &Rational) -> Float {
    Float::with_val(1024, ln * r).exp()
}

fn rel_err(a: &Float, b: &Float) -> Float {
    let d = Float::with_val(PREC, a - b);
    Float::with_val(PREC, d / b).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn psi_aux_psi_round_trip(num in 1u32..100, den in 1u32..100, log2_t in 4u32..60) {
        prop_assume!(num < den);
        let psi: ApproximatingFn = format!("recip:{num}/{den}").parse().unwrap();
        let pair = psi_to_aux(psi.clone(), Rational::from(3)).unwrap();
        let back = aux_to_psi(pair.aux().clone(), Rational::from(3)).unwrap();
        let t = Float::with_val(PREC, Float::u_exp(1, log2_t as i32)) + 1u32;
        let want = psi.eval(&t).unwrap();
        let got = back.psi().eval(&t).unwrap();
        let bound = Float::with_val(PREC, Float::u_exp(1, -200));
        prop_assert!(rel_err(&got, &want) < bound);
    }

    #[test]
    fn reciprocal_aux_is_constant(num in 1u32..100, den in 1u32..100, q in 2u64..1_000_000) {
        // t psi = c gives Psi = c / (1 - c)
        prop_assume!(num < den);
        let psi: ApproximatingFn = format!("recip:{num}/{den}").parse().unwrap();
        let pair = psi_to_aux(psi, Rational::from(3)).unwrap();
        let want = Rational::from((num, den - num));
        let enc = pair.aux().enclose(&Integer::from(q), PREC).unwrap();
        prop_assert!(enc.lo <= want && want <= enc.hi);
    }

    #[test]
    fn enclosures_contain_the_value(q in 3u64..u64::MAX, tau_num in 1u32..8, tau_den in 1u32..5, s in 1u32..4) {
        let qf = Float::with_val(1024, q);
        let ln = Float::with_val(1024, qf.ln_ref());
        let cases = [
            (format!("pow:{tau_num}/{tau_den}"), powr(&ln, &rational(tau_num, tau_den))),
            (format!("logpow:{s}"), Float::with_val(1024, ln.clone().pow(s))),
            (format!("3/2*pow:{tau_num}/{tau_den}"), powr(&ln, &rational(tau_num, tau_den)) * 3u32 / 2u32),
        ];
        for (spec, value) in cases {
            let aux: AuxiliaryFn = spec.parse().unwrap();
            let enc = aux.enclose(&Integer::from(q), PREC).unwrap();
            // the oracle itself carries about 2^-1000 relative error
            let slack = Float::with_val(1024, &value >> 1000u32);
            let lo = Float::with_val(1024, &enc.lo - &slack);
            let hi = Float::with_val(1024, &enc.hi + &slack);
            prop_assert!(lo <= value && value <= hi, "{}: [{}, {}] misses {}", spec, enc.lo, enc.hi, value);
            prop_assert!(enc.lo <= enc.hi);
        }
    }

    #[test]
    fn aux_display_round_trips(c in 1u32..50, tau_num in 1u32..20, tau_den in 1u32..8, fam in 0usize..4) {
        let body = match fam {
            0 => format!("const:{c}"),
            1 => format!("logpow:{tau_num}/{tau_den}"),
            2 => format!("pow:{tau_num}/{tau_den}"),
            _ => format!("loglogpow:{tau_num}/{tau_den}"),
        };
        for spec in [body.clone(), format!("{c}/7*{body}")] {
            let aux: AuxiliaryFn = spec.parse().unwrap();
            let again: AuxiliaryFn = aux.to_string().parse().unwrap();
            prop_assert_eq!(aux.to_string(), again.to_string());
        }
    }
}

#[test]
fn pair_specs_parse_and_echo() {
    for spec in ["Psi=pow:1", "Psi=logpow:2", "psi=recip:1/2", "psi=logdeficit"] {
        let pair = ApproximatingPair::parse(spec).unwrap();
        let again = ApproximatingPair::parse(&pair.spec()).unwrap();
        assert_eq!(pair.spec(), again.spec(), "{spec}");
    }
}

#[test]
fn malformed_specs_are_rejected() {
    for spec in ["", "pow", "pow:", "zeta:1", "-1*pow:1", "pow:1/0", "const:x"] {
        assert!(spec.parse::<AuxiliaryFn>().is_err(), "{spec:?}");
    }
    for spec in ["recip:2", "recip", "shift:", "nope:1"] {
        let parsed = spec.parse::<ApproximatingFn>();
        let paired = parsed.and_then(|p| psi_to_aux(p, Rational::from(3)));
        assert!(paired.is_err(), "{spec:?}");
    }
}

#[test]
fn log_deficit_flags_hold_on_the_tail() {
    let pair = ApproximatingPair::parse("psi=logdeficit").unwrap();
    let flags = pair.flags();
    assert!(flags.t_psi_below_one.is_some());
    assert!(flags.psi_nonincreasing.is_some());
    assert!(flags.aux_nondecreasing.is_some());
}
