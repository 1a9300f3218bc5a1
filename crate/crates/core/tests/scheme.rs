use hisd::dynamics::{
    drift_v, drift_x, integrate, integrate_unconstrained, prepare_initial_state, retract, step, transport, SaddleParams,
    SolverState,
};
use hisd::energy::{EnergyLandscape, FourWellEnergy, QuadraticSphereEnergy, RosenbrockChainEnergy};
use hisd::harness::random_initial_state;
use hisd::linalg::{distance, dot, norm};
use hisd::{FourWell32, SaddleParams32};
use proptest::prelude::*;

fn four_well_start() -> SolverState<f64> {
    let s = 0.5f64.sqrt();
    prepare_initial_state(&[s, s], &[vec![-s, s]]).unwrap()
}

#[test]
fn full_index_drift_is_negative_tangential_force() {
    // With k = d - 1 the frame spans the whole tangent space, so the reflected
    // force equals minus its tangential part.
    let e = RosenbrockChainEnergy::new(2.0, -9.8);
    let r29 = 29f64.sqrt();
    let state = prepare_initial_state(&[2.0 / r29, -3.0 / r29, 4.0 / r29], &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]])
        .unwrap();
    let tau = 0.01;
    let p = SaddleParams::new(2, 1.0, 1.0, tau, 1.0).unwrap();
    let xt = drift_x(&e, &state, &p).unwrap();
    let f = e.force(&state.x).unwrap();
    let xf = dot(&state.x, &f);
    for i in 0..3 {
        let tangential = f[i] - xf * state.x[i];
        let expected = state.x[i] - tau * tangential;
        assert!((xt[i] - expected).abs() < 1e-12, "{xt:?}");
    }
}

#[test]
fn constrained_and_unconstrained_runs_differ() {
    let e = FourWellEnergy::new(5.0, 1.0);
    let tau = 1.0 / 256.0;
    let p = SaddleParams::new(1, 1.0, 1.0, tau, 1.0).unwrap();
    let a = integrate(&e, &four_well_start(), &p, 256).unwrap();
    let b = integrate_unconstrained(&e, &four_well_start(), &p, 256).unwrap();
    let gap = distance(&a.final_state().x, &b.final_state().x);
    assert!(gap > 10.0 * tau, "{gap}");
    assert!((norm(&a.final_state().x) - 1.0).abs() < 1e-12);
    assert!((norm(&b.final_state().x) - 1.0).abs() > 1e-3);
}

#[test]
fn per_step_defects_shrink_quadratically() {
    let e = QuadraticSphereEnergy::new(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    let start = random_initial_state::<f64>(5, 2, 9).unwrap();
    let mut prev: Option<[f64; 7]> = None;
    for m in 7..=9 {
        let p = SaddleParams::new(2, 1.0, 1.0, 2f64.powi(-m), 1.0).unwrap();
        let (_, probes) = step(&e, &start, &p).unwrap();
        let now = probes.values();
        if let Some(before) = prev {
            for (j, (b, a)) in before.iter().zip(now).enumerate() {
                let ratio = b / a;
                assert!((3.0..=5.0).contains(&ratio), "field {j}: ratio {ratio}");
            }
        }
        prev = Some(now);
    }
}

#[test]
fn single_precision_run_stays_on_the_sphere() {
    let s = 0.5f32.sqrt();
    let start = prepare_initial_state(&[s, s], &[vec![-s, s]]).unwrap();
    let p = SaddleParams32::new(1, 1.0, 1.0, 1.0 / 64.0, 1.0).unwrap();
    let traj = integrate(&FourWell32::new(5.0, 1.0), &start, &p, 8).unwrap();
    let end = traj.final_state();
    assert!((norm(&end.x) - 1.0).abs() < 1e-5);
    assert!(dot(&end.x, &end.frame[0]).abs() < 1e-5);

    let start64 = four_well_start();
    let p64 = SaddleParams::new(1, 1.0, 1.0, 1.0 / 64.0, 1.0).unwrap();
    let t64 = integrate(&FourWellEnergy::new(5.0, 1.0), &start64, &p64, 64).unwrap();
    for (a, b) in end.x.iter().zip(&t64.final_state().x) {
        assert!((f64::from(*a) - b).abs() < 1e-4);
    }
}

#[test]
fn invalid_shapes_are_rejected() {
    let e = FourWellEnergy::new(5.0, 1.0);
    let p = SaddleParams::new(2, 1.0, 1.0, 0.1, 1.0).unwrap();
    assert!(step(&e, &four_well_start(), &p).is_err());
    assert!(SaddleParams::new(1, 1.0, 1.0, 0.3, 1.0).unwrap().steps().is_err());
    assert!(SaddleParams::new(1, -1.0, 1.0, 0.1, 1.0).is_err());
    assert!(prepare_initial_state(&[1.0, 0.0], &[vec![1.0, 0.0]]).is_err());
}

fn unit(v: Vec<f64>) -> Option<Vec<f64>> {
    let n = norm(&v);
    (n > 0.1).then(|| v.iter().map(|c| c / n).collect())
}

proptest! {
    #[test]
    fn reflection_preserves_norm(a in prop::collection::vec(-1.0f64..1.0, 4), b in prop::collection::vec(-1.0f64..1.0, 4)) {
        // I - 2 v v^T is an isometry for unit v.
        let Some(v) = unit(b) else { return Ok(()) };
        let c = dot(&a, &v);
        let r: Vec<f64> = a.iter().zip(&v).map(|(x, y)| x - 2.0 * c * y).collect();
        prop_assert!((norm(&r) - norm(&a)).abs() < 1e-12);
    }

    #[test]
    fn transport_yields_tangent_vectors(v in prop::collection::vec(-2.0f64..2.0, 5), x in prop::collection::vec(-1.0f64..1.0, 5)) {
        let Some(x) = unit(x) else { return Ok(()) };
        let t = transport(&v, &x).unwrap();
        prop_assert!(dot(&t, &x).abs() < 1e-14);
        prop_assert!(retract(&x).is_ok());
    }

    #[test]
    fn steps_preserve_invariants(seed in 0u64..500, k in 1usize..5, m in 4i32..9) {
        let d = 6;
        let e = QuadraticSphereEnergy::<f64>::integer_spectrum(d);
        let p = SaddleParams::new(k, 0.5, 0.5, 2f64.powi(-m), 1.0).unwrap();
        let mut state = random_initial_state::<f64>(d, k, seed).unwrap();
        for _ in 0..10 {
            let (next, probes) = step(&e, &state, &p).unwrap();
            prop_assert!(next.defects().within(&p));
            prop_assert!(probes.values().iter().all(|v| v.is_finite() && *v >= 0.0));
            state = next;
        }
        // drift_v is a pure function of the old state.
        let a = drift_v(&e, &state, 0, &p).unwrap();
        let b = drift_v(&e, &state, 0, &p).unwrap();
        prop_assert_eq!(a, b);
    }
}
