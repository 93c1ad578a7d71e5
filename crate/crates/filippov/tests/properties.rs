//! Randomized structural invariants over generated fields.

use proptest::prelude::*;

use filippov::envelope::envelope;
use filippov::{build_field, parse_field, time_of_flight, Field, TimeOfFlight, Window};

fn field(text: &str, lo: f64, hi: f64) -> Field {
    build_field(&parse_field(text).expect("parse"), Window::new(lo, hi)).expect("build")
}

fn finite_time(f: &Field, a: f64, b: f64) -> f64 {
    match time_of_flight(f, a, b).expect("inside the window") {
        TimeOfFlight::Finite { value, .. } => value,
        other => panic!("travel time from {a} to {b} must be finite, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // splitting the journey anywhere must not change the total
    #[test]
    fn travel_time_is_additive(
        c0 in 1.2f64..3.0,
        c1 in 0.0f64..0.5,
        c2 in 0.0f64..0.5,
        s in 0.0f64..1.0,
        u in 0.0f64..1.0,
    ) {
        let text = format!("on (-inf, inf): {c0} - {c1} * x + {c2} * x * x");
        let f = field(&text, -1.0, 1.0);
        let p = -0.9 + 1.8 * s.min(u);
        let r = -0.9 + 1.8 * s.max(u);
        let q = 0.5 * (p + r);
        let whole = finite_time(&f, p, r);
        let split = finite_time(&f, p, q) + finite_time(&f, q, r);
        prop_assert!(
            (whole - split).abs() < 1e-9,
            "{text}: {whole} vs {split} over [{p}, {r}]"
        );
    }

    // a single step: the envelope spans both limits at the jump and
    // collapses to the one-sided value everywhere else
    #[test]
    fn step_field_envelope_is_the_two_limit_hull(
        s in -0.8f64..0.8,
        u in -2.0f64..2.0,
        v in -2.0f64..2.0,
    ) {
        prop_assume!((u - v).abs() > 1e-6);
        let text = format!("on (-inf, {s}): {u}; on [{s}, inf): {v}");
        let f = field(&text, -1.0, 1.0);
        let at = envelope(&f, s).expect("jump is inside the window");
        prop_assert!((at.lo - u.min(v)).abs() < 1e-12);
        prop_assert!((at.hi - u.max(v)).abs() < 1e-12);
        for d in [1e-3, 1e-2, 0.1] {
            for (y, want) in [(s - d, u), (s + d, v)] {
                if y <= -1.0 || y >= 1.0 {
                    continue;
                }
                let e = envelope(&f, y).expect("probe is inside the window");
                prop_assert!(e.hi - e.lo <= 1e-9, "{text}: fat envelope at {y}");
                prop_assert!((e.hi - want).abs() <= 1e-9, "{text}: wrong value at {y}");
            }
        }
    }
}
