//! Hand-written reference computations compared against the library.

use chaosctl_core::analysis::{find_fixed_point, local_cstar};
use chaosctl_core::controls::{apply_control, target_for_state};
use chaosctl_core::dynamics::iterate_orbit;
use chaosctl_core::linalg::spectral_radius;
use chaosctl_core::models::{ricker_lift, unfold_delay_line, Lpa, LpaParams, RickerParams};
use chaosctl_core::{ControlConfig, DomainSpec, Error, FnMap, MapModel, StateVector};

fn sv(v: &[f64]) -> StateVector {
    StateVector::from_slice(v).unwrap()
}

fn lpa_direct(x: [f64; 3]) -> [f64; 3] {
    let (b, cel, cea, cpa, ml, ma) = (10.45, 0.01731, 0.01310, 0.35, 0.2, 0.96);
    let [l, p, a] = x;
    [
        b * a * (-cel * l - cea * a).exp(),
        (1.0 - ml) * l,
        p * (-cpa * a).exp() + (1.0 - ma) * a,
    ]
}

#[test]
fn vmtoc_step_on_lpa_matches_direct_formula() {
    let f = Lpa::default();
    let t = [30.0, 30.0, 30.0];
    let c = 0.5;
    let cfg = ControlConfig::vmtoc(c, sv(&t)).unwrap();
    let got = apply_control(&f, &cfg, &sv(&[10.0, 10.0, 10.0])).unwrap();
    let fx = lpa_direct([10.0, 10.0, 10.0]);
    for j in 0..3 {
        let expected = c * t[j] + (1.0 - c) * fx[j];
        assert!(
            (got[j] - expected).abs() < 1e-12,
            "{j}: {} vs {expected}",
            got[j]
        );
    }
    // 10.45·10·e^{−0.3041} = 77.1050..., halfway to 30 gives 53.55...
    assert!((got[0] - 0.5 * (30.0 + 104.5 * (-0.3041f64).exp())).abs() < 1e-12);
}

#[test]
fn target_for_state_on_lpa() {
    let k = [30.0, 30.0, 30.0];
    let fk = lpa_direct(k);
    // On the orthant α = 1.5 overshoots: T_L = 45 − 0.5·f_L(K) < 0.
    assert!(1.5 * k[0] - 0.5 * fk[0] < 0.0);
    assert_eq!(
        target_for_state(&Lpa::default(), &sv(&k), 1.5),
        Err(Error::AlphaTooLarge)
    );
    // Same formula on the whole space, where every target is admissible.
    let open = FnMap::new(DomainSpec::full(3), |x, out| {
        out.copy_from_slice(&lpa_direct([x[0], x[1], x[2]]))
    });
    for (map, alpha) in [
        (&open as &dyn MapModel, 1.5),
        (&Lpa::default() as &dyn MapModel, 1.1),
    ] {
        let (c, t) = target_for_state(map, &sv(&k), alpha).unwrap();
        assert!((c - 1.0 / alpha).abs() < 1e-15);
        for j in 0..3 {
            let expected = alpha * k[j] + (1.0 - alpha) * fk[j];
            assert!((t[j] - expected).abs() < 1e-12);
        }
        let cfg = ControlConfig::vmtoc(c, t).unwrap();
        let kk = apply_control(map, &cfg, &sv(&k)).unwrap();
        for j in 0..3 {
            assert!((kk[j] - k[j]).abs() < 1e-12);
        }
    }
}

#[test]
fn ricker_lift_reproduces_scalar_recursion() {
    for d in [2usize, 3, 4] {
        let r = 2.0;
        let f = ricker_lift(RickerParams { r, delay: d }).unwrap();
        // u_{n+1} = u_n·exp(r − u_{n−d+1}) from history u_0..u_{d−1}.
        let mut u: Vec<f64> = (0..d).map(|i| 0.4 + 0.1 * i as f64).collect();
        let x0: Vec<f64> = u.iter().rev().copied().collect();
        let n = 60 * d;
        let orbit = iterate_orbit(&f, None, &sv(&x0), 0, n).unwrap();
        while u.len() < d + n {
            let m = u.len();
            u.push(u[m - 1] * (r - u[m - d]).exp());
        }
        let series = unfold_delay_line(&orbit);
        assert_eq!(series.len(), n);
        for (i, v) in series.iter().enumerate() {
            let expected = u[i + 1];
            assert!(
                (v - expected).abs() <= 1e-9 * (1.0 + expected.abs()),
                "d={d} i={i}"
            );
        }
    }
}

#[test]
fn lpa_fixed_point_and_threshold() {
    let f = Lpa::default();
    let k = find_fixed_point(&f, &sv(&[20.0, 20.0, 5.0]), 1e-10).unwrap();
    for (got, want) in k.iter().zip([28.0120, 22.4096, 4.6251]) {
        assert!((got - want).abs() < 1e-3);
    }
    let rho = spectral_radius(&f.jacobian(k.as_slice())).unwrap();
    assert!((rho - 1.3803).abs() < 1e-3);
    assert!((local_cstar(rho) - 0.2756).abs() < 1e-3);
    assert_eq!(f.params(), &LpaParams::default());
}

#[test]
fn lpa_jacobian_has_characteristic_polynomial_roots() {
    // At K the Jacobian is [[a, 0, b], [m, 0, 0], [0, e, h]]; its
    // characteristic polynomial is λ³ − (a + h)λ² + ahλ − bme.
    let f = Lpa::default();
    let k = find_fixed_point(&f, &sv(&[20.0, 20.0, 5.0]), 1e-12).unwrap();
    let j = f.jacobian(k.as_slice());
    let (a, b, m, e, h) = (j[(0, 0)], j[(0, 2)], j[(1, 0)], j[(2, 1)], j[(2, 2)]);
    let p = |z: f64| z * z * z - (a + h) * z * z + a * h * z - b * m * e;
    let rho = spectral_radius(&f.jacobian(k.as_slice())).unwrap();
    // Some root has modulus rho; if it is real, p(±rho) = 0.
    let real_root = p(rho).abs() < 1e-9 || p(-rho).abs() < 1e-9;
    // Otherwise it is a complex pair with |z|² = rho², and the third root
    // r satisfies r·rho² = bme.
    let r = b * m * e / (rho * rho);
    assert!(real_root || p(r).abs() < 1e-9);
}
