//! Randomized properties of the index algebra, inversion and the lift.

use kkforms_core::catalog::{build, Family, Params};
use kkforms_core::lift::{lift, reduce, LiftedMetric};
use kkforms_core::linalg::metric_inverse;
use kkforms_core::tensor::{antisym_pair, contract};
use kkforms_core::verify::sample_points;
use kkforms_core::{jet_eval, ChartPoint, ClosedForm, Scalar, SmoothField, Tensor, TensorValue, Valence};
use proptest::prelude::*;

/// Integer entries and quarter-integer coefficients keep every sum exact.
fn small_tensor(valence: Valence, d: usize) -> impl Strategy<Value = TensorValue> {
    let len = d.pow((valence.cov + valence.contra) as u32);
    prop::collection::vec(-8i32..=8, len)
        .prop_map(move |v| Tensor::from_data(valence, d, v.into_iter().map(f64::from).collect()).unwrap())
}

fn quarter() -> impl Strategy<Value = f64> {
    (-8i32..=8).prop_map(|n| n as f64 / 4.0)
}

fn combine(a: f64, x: &TensorValue, b: f64, y: &TensorValue) -> TensorValue {
    x.scaled(a).axpy(b, y).unwrap()
}

fn signature(d: usize) -> impl Strategy<Value = TensorValue> {
    prop::collection::vec(prop::bool::ANY, d).prop_map(move |neg| {
        let mut m = TensorValue::zeros(Valence::new(2, 0), d);
        for (i, n) in neg.iter().enumerate() {
            m.set(&[i, i], if *n { -1.0 } else { 1.0 });
        }
        m
    })
}

/// A symmetric matrix with a dominant diagonal of random signs.
fn metric(d: usize) -> impl Strategy<Value = TensorValue> {
    (prop::collection::vec(-1.0f64..1.0, d * d), prop::collection::vec(prop::bool::ANY, d)).prop_map(
        move |(off, neg)| {
            let mut g = TensorValue::zeros(Valence::new(0, 2), d);
            for i in 0..d {
                for j in 0..d {
                    let v = if i == j {
                        (if neg[i] { -1.0 } else { 1.0 }) * (d as f64 + 1.0 + off[i * d + i].abs())
                    } else {
                        0.5 * (off[i * d + j] + off[j * d + i])
                    };
                    g.set(&[i, j], v);
                }
            }
            g
        },
    )
}

/// `x₀² x₁ + sin(x₁) x₂ + exp(0.3 x₀)` and two more components.
struct Poly;

impl ClosedForm for Poly {
    fn dim(&self) -> usize {
        3
    }
    fn len(&self) -> usize {
        3
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        out[0] = x[0] * x[0] * x[1] + x[1].sin() * x[2] + x[0].scale(0.3).exp();
        out[1] = x[2] * x[2] * x[2];
        out[2] = (x[0] * x[1]).cos();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn contraction_is_linear(
        (x, y) in (small_tensor(Valence::new(2, 1), 3), small_tensor(Valence::new(2, 1), 3)),
        a in quarter(),
        b in quarter(),
    ) {
        // slot 0 is covariant, slot 2 contravariant: a plain trace
        let lhs = contract(&combine(a, &x, b, &y), 0, 2, None).unwrap();
        let rhs = combine(a, &contract(&x, 0, 2, None).unwrap(), b, &contract(&y, 0, 2, None).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn metric_contraction_is_linear(
        (x, y) in (small_tensor(Valence::new(2, 0), 4), small_tensor(Valence::new(2, 0), 4)),
        eta in signature(4),
        a in quarter(),
        b in quarter(),
    ) {
        let lhs = contract(&combine(a, &x, b, &y), 0, 1, Some(&eta)).unwrap();
        let rhs = combine(a, &contract(&x, 0, 1, Some(&eta)).unwrap(), b, &contract(&y, 0, 1, Some(&eta)).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn antisymmetrization_is_linear_and_idempotent(
        (x, y) in (small_tensor(Valence::new(3, 0), 3), small_tensor(Valence::new(3, 0), 3)),
        a in quarter(),
        b in quarter(),
    ) {
        let lhs = antisym_pair(&combine(a, &x, b, &y), 0, 2).unwrap();
        let rhs = combine(a, &antisym_pair(&x, 0, 2).unwrap(), b, &antisym_pair(&y, 0, 2).unwrap());
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(antisym_pair(&lhs, 0, 2).unwrap(), lhs);
    }

    #[test]
    fn metric_inverse_is_an_involution(g in (2usize..=6).prop_flat_map(metric)) {
        let d = g.dim();
        let inv = metric_inverse(&g).unwrap();
        let back = metric_inverse(&Tensor::from_data(Valence::new(0, 2), d, inv.data().to_vec()).unwrap()).unwrap();
        for (u, v) in back.data().iter().zip(g.data()) {
            prop_assert!((u - v).abs() <= 1e-12 * g.max_abs());
        }
        // g^{μκ} g_{κν} = δ
        for m in 0..d {
            for n in 0..d {
                let s: f64 = (0..d).map(|k| inv.get(&[m, k]) * g.get(&[k, n])).sum();
                let want = if m == n { 1.0 } else { 0.0 };
                prop_assert!((s - want).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn jets_follow_the_chain_rule(x in prop::collection::vec(-1.0f64..1.0, 3)) {
        let f = SmoothField::from_form(Valence::new(1, 0), Poly).unwrap();
        let j = jet_eval(&f, &ChartPoint::new(x.clone()).unwrap(), 2).unwrap();
        let (a, b, c) = (x[0], x[1], x[2]);
        let e = (0.3 * a).exp();
        let want = [2.0 * a * b + 0.3 * e, a * a + b.cos() * c, b.sin()];
        for (i, w) in want.iter().enumerate() {
            prop_assert!((j.first(i, 0) - w).abs() <= 1e-13);
        }
        prop_assert!((j.second(0, 0, 0) - (2.0 * b + 0.09 * e)).abs() <= 1e-13);
        prop_assert!((j.second(0, 1, 0) - 2.0 * a).abs() <= 1e-13);
        prop_assert!((j.second(1, 1, 0) + b.sin() * c).abs() <= 1e-13);
        prop_assert!((j.second(2, 2, 1) - 6.0 * c).abs() <= 1e-13);
        prop_assert!((j.second(0, 1, 2) + (a * b).cos() * a * b + (a * b).sin()).abs() <= 1e-13);
    }

    #[test]
    fn reduce_inverts_lift(k in 0.2f64..5.0, big_l in 0.05f64..1.0, eps in prop::bool::ANY, seed in 0u64..1000) {
        let eps = if eps { 1.0 } else { -1.0 };
        let inst = build(Family::CKink3, &Params::new().with("K", k).with("L", big_l).with("tau", 1.0)).unwrap();
        let lifted = lift(&inst.g, &inst.a, eps).unwrap();
        let pts = sample_points(&inst.domain, 4, seed).unwrap();
        let (g, a) = reduce(&lifted).unwrap();
        // the wrapped form forgets the base and reduces numerically
        let probes: Vec<ChartPoint> = pts.iter().map(|p| p.extended(-0.4)).collect();
        let wrapped = LiftedMetric::from_total(lifted.metric().clone(), &probes).unwrap();
        prop_assert_eq!(wrapped.eps_d(), eps);
        let (gw, aw) = reduce(&wrapped).unwrap();
        for p in &pts {
            let (g0, a0) = (inst.g.value(p).unwrap(), inst.a.value(p).unwrap());
            prop_assert_eq!(&g.value(p).unwrap(), &g0);
            prop_assert_eq!(&a.value(p).unwrap(), &a0);
            for (u, v) in gw.value(p).unwrap().data().iter().zip(g0.data()) {
                prop_assert!((u - v).abs() <= 1e-12 * g0.max_abs());
            }
            for (u, v) in aw.value(p).unwrap().data().iter().zip(a0.data()) {
                prop_assert!((u - v).abs() <= 1e-12 * a0.max_abs().max(1.0));
            }
        }
    }

    #[test]
    fn sampling_is_reproducible(seed in 0u64..10_000, n in 1usize..20) {
        let inst = build(Family::Kink2, &Params::new().with("k", 1.5)).unwrap();
        let a = sample_points(&inst.domain, n, seed).unwrap();
        prop_assert_eq!(&a, &sample_points(&inst.domain, n, seed).unwrap());
        prop_assert!(a.iter().all(|p| inst.domain.contains(p)));
    }
}
