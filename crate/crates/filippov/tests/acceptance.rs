//! Acceptance gate: one test per criterion, each printing a single pass
//! line. Tolerances are pinned here and nowhere else; run with
//! `cargo test -p filippov --test acceptance -- --nocapture` to see the
//! lines.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use filippov::field::{build_field_with, FatCantorUnion, OracleRegistry};
use filippov::uniqueness::{ConditionA, NonUniquenessCause, OsgoodStatus, UniquenessStatus};
use filippov::{
    build_field, classical_select, envelope::envelope, parse_field, reachable_funnel,
    solve_classical, solve_filippov, time_of_flight, uniqueness_verdict, validate_trajectory,
    witnesses_condition_a, witnesses_condition_b, zero_set, Envelope, Field, PointOverride,
    TimeOfFlight, Trajectory, Window,
};

const SQRT: &str = "on (-inf, inf): abs(x)^0.5";
const HEAVISIDE: &str = "on (-inf, 0): 0; on [0, inf): 1";
const ONE_PLUS_SQRT: &str = "on (-inf, inf): 1 + abs(x)^0.5";
const XLOG: &str = "on (-inf, inf): 0 - x * log(abs(x))";
const NEG_SIGN: &str = "on (-inf, inf): -sign(x)";
const DENSE_PAIR: &str =
    "dense on [0, 1]: {1, 2} measure builtin-fat-cantor; on (-inf, 0): 1; on (1, inf): 2";

fn field(text: &str, lo: f64, hi: f64) -> Field {
    build_field(&parse_field(text).expect("parse"), Window::new(lo, hi)).expect("build")
}

/// Uniform output grid: multiples of `dt` up to and then exactly `t_end`.
fn uniform(t_end: f64, dt: f64) -> Vec<f64> {
    let mut g = Vec::new();
    let mut k = 0u64;
    loop {
        let t = k as f64 * dt;
        if t >= t_end {
            break;
        }
        g.push(t);
        k += 1;
    }
    g.push(t_end);
    g
}

fn assert_not_inconclusive(v: &filippov::UniquenessVerdict, name: &str) {
    assert!(v.status != UniquenessStatus::Inconclusive, "{name}: inconclusive verdict");
    assert!(
        !matches!(v.condition_a, ConditionA::Inconclusive { .. }),
        "{name}: inconclusive jump-set decision"
    );
    for zc in &v.zero_points_checked {
        assert!(
            zc.verdict.status != OsgoodStatus::Inconclusive,
            "{name}: inconclusive zero check at {}",
            zc.point
        );
    }
}

#[test]
fn criterion_1_verdict_table() {
    let v = uniqueness_verdict(&field(SQRT, -2.0, 2.0));
    assert_eq!(v.status, UniquenessStatus::NonUnique, "root field must be non-unique");
    match &v.cause {
        Some(NonUniquenessCause::ConditionBFails { point, verdict }) => {
            assert!(point.abs() <= 1e-9, "root field fails at {point}, not the origin");
            assert_eq!(verdict.status, OsgoodStatus::NotOsgood);
        }
        other => panic!("root field: wrong cause {other:?}"),
    }
    assert_not_inconclusive(&v, "root field");

    let v = uniqueness_verdict(&field(HEAVISIDE, -2.0, 2.0));
    assert_eq!(v.status, UniquenessStatus::NonUnique, "step field must be non-unique");
    match &v.cause {
        Some(NonUniquenessCause::ConditionBFails { point, verdict }) => {
            assert!(point.abs() <= 1e-9, "step field fails at {point}, not the origin");
            assert_eq!(verdict.status, OsgoodStatus::NotOsgood);
        }
        other => panic!("step field: wrong cause {other:?}"),
    }
    assert_not_inconclusive(&v, "step field");

    let v = uniqueness_verdict(&field(ONE_PLUS_SQRT, -2.0, 2.0));
    assert_eq!(v.status, UniquenessStatus::Unique, "lifted root field must be unique");
    assert_not_inconclusive(&v, "lifted root field");

    let v = uniqueness_verdict(&field(XLOG, -2.0, 2.0));
    assert_eq!(v.status, UniquenessStatus::Unique, "log decay field must be unique");
    let origin = v
        .zero_points_checked
        .iter()
        .find(|zc| zc.point.abs() <= 1e-9)
        .expect("log decay field has a zero at the origin");
    assert_eq!(origin.verdict.status, OsgoodStatus::Osgood, "origin zero must pass by modulus");
    assert_not_inconclusive(&v, "log decay field");

    let v = uniqueness_verdict(&field(DENSE_PAIR, -1.0, 2.0));
    assert_eq!(v.status, UniquenessStatus::NonUnique, "two-valued segment must be non-unique");
    assert!(
        matches!(v.cause, Some(NonUniquenessCause::ConditionAFails { .. })),
        "two-valued segment: wrong cause {:?}",
        v.cause
    );
    assert_not_inconclusive(&v, "two-valued segment");

    println!("acceptance criterion 1 (verdict table): pass");
}

/// Classic fixed-step fourth-order integrator, independent of the solver.
fn rk4(f: impl Fn(f64) -> f64, x0: f64, t_end: f64, steps: usize) -> f64 {
    let h = t_end / steps as f64;
    let mut x = x0;
    for _ in 0..steps {
        let k1 = f(x);
        let k2 = f(x + 0.5 * h * k1);
        let k3 = f(x + 0.5 * h * k2);
        let k4 = f(x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    x
}

#[test]
fn criterion_2_closed_form_trajectories() {
    let tol = 1e-6;

    let f = field("on (-inf, inf): 1", -1.0, 3.0);
    let tr = solve_filippov(&f, 0.0, 1.5, &uniform(1.5, 1.5 / 999.0), false).unwrap();
    assert_eq!(tr.samples.len(), 1000);
    for &(t, x) in &tr.samples {
        assert!((x - t).abs() < tol, "unit drift at t = {t}: {x}");
    }

    let f = field(NEG_SIGN, -2.0, 2.0);
    let tr = solve_filippov(&f, 1.0, 2.0, &uniform(2.0, 2.0 / 999.0), false).unwrap();
    assert_eq!(tr.samples.len(), 1000);
    for &(t, x) in &tr.samples {
        let want = (1.0 - t).max(0.0);
        assert!((x - want).abs() < tol, "attracting jump at t = {t}: {x} vs {want}");
    }

    let f = field(XLOG, -2.0, 2.0);
    let tr = solve_filippov(&f, 0.5, 1.0, &uniform(1.0, 1.0 / 999.0), false).unwrap();
    assert_eq!(tr.samples.len(), 1000);
    let closed = |t: f64| ((0.5f64).ln() * (-t).exp()).exp();
    for &(t, x) in &tr.samples {
        assert!((x - closed(t)).abs() < tol, "log decay at t = {t}: {x} vs {}", closed(t));
    }
    // cross-check the closed form itself with an independent integrator
    let oracle = rk4(|x: f64| -x * x.abs().ln(), 0.5, 1.0, 4096);
    assert!(
        (oracle - closed(1.0)).abs() < 1e-9,
        "closed form disagrees with the reference integrator: {oracle} vs {}",
        closed(1.0)
    );
    assert!((tr.samples.last().unwrap().1 - closed(1.0)).abs() < tol);

    println!("acceptance criterion 2 (closed-form trajectories): pass");
}

#[test]
fn criterion_3_travel_time_integrals() {
    let f = field(ONE_PLUS_SQRT, -2.0, 2.0);
    match time_of_flight(&f, 0.0, 1.0).unwrap() {
        TimeOfFlight::Finite { value, .. } => {
            let want = 2.0 - 2.0 * std::f64::consts::LN_2;
            assert!((value - want).abs() < 1e-9, "travel time {value} vs {want}");
        }
        other => panic!("lifted root travel time must be finite, got {other:?}"),
    }

    let f = field("on (-inf, inf): x", -2.0, 2.0);
    match time_of_flight(&f, 0.0, 1.0).unwrap() {
        TimeOfFlight::PlusInfinity => {}
        other => panic!("linear zero must certify a divergent travel time, got {other:?}"),
    }

    println!("acceptance criterion 3 (travel-time integrals): pass");
}

#[test]
fn criterion_4_witness_families() {
    let tol = 1e-8;
    let dt = 1e-3;

    // square-root escapes: rest for the delay, then the extremal parabola
    let f = field(SQRT, -2.0, 2.0);
    let grid = uniform(2.0, dt);
    let offsets = [0.5, 1.0];
    let ws = witnesses_condition_b(&f, 0.0, &offsets, 2.0, &grid).unwrap();
    assert_eq!(ws.len(), 3);
    for (i, w) in ws.iter().enumerate() {
        let rep = validate_trajectory(&f, w, tol).unwrap();
        assert!(rep.passed(), "root witness {i} violates the envelope: {:?}", rep.violations);
    }
    for (k, &c) in offsets.iter().enumerate() {
        for &(t, x) in &ws[k + 1].samples {
            let want = if t <= c { 0.0 } else { ((t - c) / 2.0) * ((t - c) / 2.0) };
            assert!(
                (x - want).abs() < tol,
                "root witness with delay {c} at t = {t}: {x} vs {want}"
            );
        }
    }

    // step-field escapes: rest, then unit speed
    let f = field(HEAVISIDE, -2.0, 2.0);
    let grid = uniform(1.5, dt);
    let ws = witnesses_condition_b(&f, 0.0, &[0.5], 1.5, &grid).unwrap();
    assert_eq!(ws.len(), 2);
    for (i, w) in ws.iter().enumerate() {
        let rep = validate_trajectory(&f, w, tol).unwrap();
        assert!(rep.passed(), "step witness {i} violates the envelope: {:?}", rep.violations);
    }
    for &(t, x) in &ws[1].samples {
        let want = (t - 0.5).max(0.0);
        assert!((x - want).abs() < tol, "step witness at t = {t}: {x} vs {want}");
    }

    // two-valued segment: the two extreme constant selections, slopes exact
    let f = field(DENSE_PAIR, -1.0, 2.0);
    let grid = uniform(0.9, dt);
    let [w1, w2] = witnesses_condition_a(&f, Some(0.0), 0.9, &grid).unwrap();
    for (i, w) in [&w1, &w2].into_iter().enumerate() {
        let rep = validate_trajectory(&f, w, tol).unwrap();
        assert!(rep.passed(), "slope witness {i} violates the envelope: {:?}", rep.violations);
    }
    for &(t, x) in &w1.samples {
        assert!(x == t, "lower selection must move at slope exactly 1: ({t}, {x})");
    }
    for &(t, x) in &w2.samples {
        if t < 0.5 {
            assert!(x == 2.0 * t, "upper selection must move at slope exactly 2: ({t}, {x})");
        }
    }

    println!("acceptance criterion 4 (witness families): pass");
}

#[test]
fn criterion_5_funnels_bound_every_trajectory() {
    let slack = 1e-9;

    struct Instance {
        field: Field,
        x0: f64,
        t_end: f64,
        trajectories: Vec<Trajectory>,
    }

    let mut instances = Vec::new();

    let f = field("on (-inf, inf): 1", -1.0, 3.0);
    let tr = solve_filippov(&f, 0.0, 1.5, &uniform(1.5, 1e-2), false).unwrap();
    instances.push(Instance { field: f, x0: 0.0, t_end: 1.5, trajectories: vec![tr] });

    let f = field(SQRT, -2.0, 2.0);
    let grid = uniform(2.0, 1e-2);
    let mut trajs = witnesses_condition_b(&f, 0.0, &[0.5, 1.0], 2.0, &grid).unwrap();
    trajs.push(solve_filippov(&f, 0.0, 2.0, &grid, true).unwrap());
    instances.push(Instance { field: f, x0: 0.0, t_end: 2.0, trajectories: trajs });

    let f = field(HEAVISIDE, -2.0, 2.0);
    let grid = uniform(1.5, 1e-2);
    let mut trajs = witnesses_condition_b(&f, 0.0, &[0.5], 1.5, &grid).unwrap();
    trajs.push(solve_filippov(&f, 0.0, 1.5, &grid, true).unwrap());
    instances.push(Instance { field: f, x0: 0.0, t_end: 1.5, trajectories: trajs });

    let f = field(NEG_SIGN, -2.0, 2.0);
    let tr = solve_filippov(&f, 1.0, 2.0, &uniform(2.0, 1e-2), false).unwrap();
    instances.push(Instance { field: f, x0: 1.0, t_end: 2.0, trajectories: vec![tr] });

    let f = field(ONE_PLUS_SQRT, -2.0, 2.0);
    let tr = solve_filippov(&f, 0.0, 1.0, &uniform(1.0, 1e-2), false).unwrap();
    instances.push(Instance { field: f, x0: 0.0, t_end: 1.0, trajectories: vec![tr] });

    let f = field(XLOG, -2.0, 2.0);
    let tr = solve_filippov(&f, 0.5, 1.0, &uniform(1.0, 1e-2), false).unwrap();
    instances.push(Instance { field: f, x0: 0.5, t_end: 1.0, trajectories: vec![tr] });

    let f = field(DENSE_PAIR, -1.0, 2.0);
    let grid = uniform(0.9, 1e-2);
    let sf = classical_select(&f).unwrap();
    let mut trajs = vec![solve_classical(&sf, 0.0, 0.9, &grid).unwrap()];
    let [w1, w2] = witnesses_condition_a(&f, Some(0.0), 0.9, &grid).unwrap();
    trajs.push(w1);
    trajs.push(w2);
    instances.push(Instance { field: f, x0: 0.0, t_end: 0.9, trajectories: trajs });

    for inst in &instances {
        for &(dt, dx) in &[(1e-2, 1e-2), (1e-3, 1e-3)] {
            let fun = reachable_funnel(&inst.field, inst.x0, inst.t_end, dt, dx).unwrap();
            for (i, tr) in inst.trajectories.iter().enumerate() {
                for &(t, x) in &tr.samples {
                    assert!(
                        fun.encloses(t, x, slack),
                        "trajectory {i} leaves the funnel at ({t}, {x}) with dt = {dt}"
                    );
                }
            }
        }
    }

    // contraction where the flow is unique
    for (text, x0) in [(NEG_SIGN, 1.0), (ONE_PLUS_SQRT, 0.0), (XLOG, 0.5)] {
        let f = field(text, -2.0, 2.0);
        let w = reachable_funnel(&f, x0, 1.0, 1e-4, 1e-4).unwrap().end_width();
        assert!(w < 1e-3, "funnel stays {w} wide at the horizon for {text}");
    }

    // persistent spread at the escaping zero, no matter how fine
    let f = field(SQRT, -2.0, 2.0);
    for &(dt, dx) in &[(1e-2, 1e-2), (1e-3, 1e-3), (1e-4, 1e-4)] {
        let w = reachable_funnel(&f, 0.0, 2.0, dt, dx).unwrap().end_width();
        assert!(w >= 0.9, "escape cone collapsed to {w} at dt = {dt}");
    }

    println!("acceptance criterion 5 (funnel sandwich): pass");
}

#[test]
fn criterion_6_envelope_regularity_and_null_set_blindness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0C0FFEE);

    // (text, window, jump sites with their minimum envelope gap)
    let corpus: [(&str, f64, f64, &[(f64, f64)]); 6] = [
        (SQRT, -2.0, 2.0, &[]),
        (HEAVISIDE, -2.0, 2.0, &[(0.0, 1.0)]),
        (ONE_PLUS_SQRT, -2.0, 2.0, &[]),
        (XLOG, -2.0, 2.0, &[]),
        (NEG_SIGN, -2.0, 2.0, &[(0.0, 2.0)]),
        (DENSE_PAIR, -1.0, 2.0, &[(0.0, 1.0), (1.0, 1.0)]),
    ];

    // finite probing cannot resolve one-sided limits closer than this
    let guard = 3e-5;
    let deltas = [1e-2, 1e-3, 1e-4, 1e-5];

    for &(text, lo, hi, sites) in &corpus {
        let f = field(text, lo, hi);
        let dense: Vec<(f64, f64)> = f.dense_spans().map(|(a, b, _)| (a, b)).collect();
        let zs = zero_set(&f);

        for site in sites {
            let k = envelope(&f, site.0).unwrap();
            assert!(
                k.hi - k.lo >= site.1 - 1e-6,
                "{text}: jump at {} has gap {} instead of {}",
                site.0,
                k.hi - k.lo,
                site.1
            );
        }

        for _ in 0..1700 {
            let x = rng.gen_range(lo + 1e-3..hi - 1e-3);
            let e = envelope(&f, x).unwrap();
            assert!(e.lo <= e.hi, "{text}: inverted envelope at {x}");

            let near_jump = sites.iter().any(|s| (x - s.0).abs() < guard);
            let in_dense = dense.iter().any(|&(a, b)| a - guard < x && x < b + guard);
            let interior_dense = dense.iter().any(|&(a, b)| a + guard < x && x < b - guard);

            if interior_dense {
                // two-valued everywhere: a genuine discontinuity
                assert!(e.hi - e.lo > 1e-9, "{text}: thin envelope inside the segment at {x}");
                assert!(
                    f.value_ae(x).is_err(),
                    "{text}: a single a.e. value inside the two-valued segment at {x}"
                );
            } else if !near_jump && !in_dense {
                // continuity point: thin envelope agreeing with the value
                assert!(
                    e.hi - e.lo <= 1e-7,
                    "{text}: fat envelope ({} to {}) at the continuity point {x}",
                    e.lo,
                    e.hi
                );
                let v = f.value_ae(x).unwrap();
                assert!((v - e.hi).abs() <= 1e-7, "{text}: envelope misses the value at {x}");

                // zero-freeness propagates to a whole neighborhood
                if !e.contains(0.0) {
                    let d = zs
                        .iter()
                        .map(|z| {
                            if z.contains(x) {
                                0.0
                            } else {
                                (x - z.lo).abs().min((x - z.hi).abs())
                            }
                        })
                        .fold(f64::INFINITY, f64::min);
                    assert!(d > 0.0, "{text}: zero-free point {x} sits on the zero set");
                    let delta = (0.5 * d).min(0.01);
                    for k in 1..=4 {
                        for s in [-1.0, 1.0] {
                            let y = x + s * delta * k as f64 / 4.0;
                            if y <= lo || y >= hi {
                                continue;
                            }
                            let ey = envelope(&f, y).unwrap();
                            assert!(
                                !ey.contains(0.0),
                                "{text}: zero re-enters the envelope at {y} near {x}"
                            );
                        }
                    }
                }
            }

            // one-sided limits bound the envelope from the right sides:
            // some probe radius sees nearby upper values at most M and
            // nearby lower values at least m, up to the local modulus
            if !near_jump {
                let mut upper_ok = false;
                let mut lower_ok = false;
                for &delta in &deltas {
                    let mut sup = f64::NEG_INFINITY;
                    let mut inf = f64::INFINITY;
                    let mut seen = false;
                    for k in 1..=4 {
                        for s in [-1.0, 1.0] {
                            let y = x + s * delta * k as f64 / 4.0;
                            if y <= lo || y >= hi {
                                continue;
                            }
                            if let Some(ey) = envelope(&f, y) {
                                sup = sup.max(ey.hi);
                                inf = inf.min(ey.lo);
                                seen = true;
                            }
                        }
                    }
                    if !seen {
                        continue;
                    }
                    let allow = 2.0 * delta.sqrt() + 1e-9;
                    if sup <= e.hi + allow {
                        upper_ok = true;
                    }
                    if inf >= e.lo - allow {
                        lower_ok = true;
                    }
                }
                assert!(upper_ok, "{text}: upper envelope jumps up near {x}");
                assert!(lower_ok, "{text}: lower envelope jumps down near {x}");
            }
        }
    }

    // changing the field on a finite point set changes no envelope value
    for &(text, lo, hi, _) in &corpus {
        let base_spec = parse_field(text).unwrap();
        let f0 = build_field(&base_spec, Window::new(lo, hi)).unwrap();
        let xs: Vec<f64> = (0..200).map(|_| rng.gen_range(lo + 1e-6..hi - 1e-6)).collect();
        let base: Vec<Option<Envelope>> = xs.iter().map(|&x| envelope(&f0, x)).collect();
        for _ in 0..2 {
            let mut spec = base_spec.clone();
            for _ in 0..10 {
                spec.overrides.push(PointOverride {
                    x: rng.gen_range(lo + 1e-6..hi - 1e-6),
                    value: rng.gen_range(-3.0..3.0),
                });
            }
            let probes: Vec<f64> =
                spec.overrides.iter().map(|o| o.x).chain(xs.iter().copied()).collect();
            let f1 = build_field(&spec, Window::new(lo, hi)).unwrap();
            for &x in &probes {
                let a = envelope(&f0, x);
                let b = envelope(&f1, x);
                assert_eq!(a, b, "{text}: overrides moved the envelope at {x}");
            }
            for (&x, a) in xs.iter().zip(&base) {
                assert_eq!(&envelope(&f1, x), a, "{text}: overrides moved the envelope at {x}");
            }
        }
    }

    println!("acceptance criterion 6 (envelope regularity, null-set blindness): pass");
}

#[test]
fn criterion_7_classical_selection_is_truncation_invariant() {
    let tol = 1e-9;
    let win = Window::new(-9.5, 9.5);
    let text = "dense on (-10, 10): {1, 2} measure builtin-fat-cantor";
    let f = build_field(&parse_field(text).unwrap(), win).unwrap();
    let sf = classical_select(&f).unwrap();
    let grid = uniform(2.0, 0.05);
    let tr = solve_classical(&sf, 0.0, 2.0, &grid).unwrap();
    assert_eq!(tr.samples.len(), grid.len());
    for &(t, x) in tr.samples.iter().skip(1) {
        let g = time_of_flight(&f, 0.0, x).unwrap().finite().expect("travel time is finite");
        assert!((g - t).abs() < 10.0 * tol, "round trip drifts at t = {t}: G = {g}");
    }

    // the same union truncated deeper: trajectories must not notice
    let mut reg = OracleRegistry::default();
    reg.register("deep", Arc::new(FatCantorUnion::with_min_sets(-10.0, 10.0, 64)));
    let deep_text = "dense on (-10, 10): {1, 2} measure deep";
    let f2 = build_field_with(&parse_field(deep_text).unwrap(), win, &reg).unwrap();
    let sf2 = classical_select(&f2).unwrap();
    let tr2 = solve_classical(&sf2, 0.0, 2.0, &grid).unwrap();
    assert_eq!(tr.samples.len(), tr2.samples.len());
    for (&(t, x1), &(_, x2)) in tr.samples.iter().zip(tr2.samples.iter()) {
        assert!(
            (x1 - x2).abs() < 10.0 * tol,
            "truncation depth shows through at t = {t}: {x1} vs {x2}"
        );
    }

    println!("acceptance criterion 7 (classical selection, truncation invariance): pass");
}

#[test]
fn criterion_8_flows_preserve_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for (text, lo, hi) in [(NEG_SIGN, -2.0, 2.0), (ONE_PLUS_SQRT, -2.0, 2.0), (XLOG, -2.0, 2.0)] {
        let f = field(text, lo, hi);
        let grid = uniform(1.0, 0.02);
        let mut pairs = 0;
        while pairs < 50 {
            let a = rng.gen_range(lo + 0.1..hi - 0.1);
            let b = rng.gen_range(lo + 0.1..hi - 0.1);
            if a == b {
                continue;
            }
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            let ta = solve_filippov(&f, a, 1.0, &grid, false).unwrap();
            let tb = solve_filippov(&f, b, 1.0, &grid, false).unwrap();
            let n = ta.samples.len().min(tb.samples.len());
            for i in 0..n {
                let (t, xa) = ta.samples[i];
                let (t2, xb) = tb.samples[i];
                assert_eq!(t, t2, "{text}: sample grids diverge");
                assert!(
                    xa <= xb + 1e-9,
                    "{text}: order flips at t = {t} for starts {a} < {b}: {xa} > {xb}"
                );
            }
            pairs += 1;
        }
    }

    println!("acceptance criterion 8 (order preservation): pass");
}
