//! Catalog solutions against the residual evaluators, the lift and the
//! constants each family asserts.

use kkforms_core::catalog::{
    build, ckink_gap_boundary, default_grid, make_ckink, make_cpx_space_form, make_kink, make_kk_nullity_one,
    make_real_space_form, Family, Params, SolutionInstance,
};
use kkforms_core::curvature::curvature_bundle;
use kkforms_core::lift::{lift, reduce, weyl_vanishing, LiftedMetric};
use kkforms_core::linalg::{numerical_rank, signature_index};
use kkforms_core::verify::{
    bianchi_residual, curvature_identity_residual, estimate_k, fundamental_forms, gj_residual, killing_check,
    kink_ode_residual, sample_points, structure_residual, structure_residual_with, suite, traceless_kink_residual,
};
use kkforms_core::{ChartPoint, ClosedForm, Error, Scalar, SmoothField, Valence};

const TOL: f64 = 1e-7;

fn grid() -> Vec<SolutionInstance> {
    default_grid().into_iter().map(|(f, p)| build(f, &p).unwrap()).collect()
}

fn field_strength(inst: &SolutionInstance, p: &ChartPoint) -> Vec<f64> {
    let j = kkforms_core::jet_eval(&inst.a, p, 1).unwrap();
    let d = inst.dim();
    let mut f = vec![0.0; d * d];
    for m in 0..d {
        for n in 0..d {
            f[m * d + n] = j.first(m, n) - j.first(n, m);
        }
    }
    f
}

#[test]
fn every_grid_instance_passes_every_check() {
    for inst in grid() {
        let pts = sample_points(&inst.domain, 50, 42).unwrap();
        for rep in suite::run(&inst, &pts, 42, TOL).unwrap() {
            assert!(rep.pass, "{} {}: max_rel {:e}", inst.label(), rep.equation, rep.max_rel);
            assert_eq!(rep.points, 50);
        }
    }
}

#[test]
fn opposite_branch_passes_and_negates_scalar_curvature() {
    for inst in grid() {
        let opp = inst.opposite();
        let pts = sample_points(&inst.domain, 10, 5).unwrap();
        for rep in suite::run(&opp, &pts, 5, TOL).unwrap() {
            assert!(rep.pass, "opposite {} {}: {:e}", inst.label(), rep.equation, rep.max_rel);
        }
        for p in &pts {
            let s = curvature_bundle(&inst.g, p).unwrap().scalar;
            let so = curvature_bundle(&opp.g, p).unwrap().scalar;
            assert!((s + so).abs() <= 1e-9 * s.abs().max(1.0));
            let a = gj_residual(&inst.normalized_metric(), &inst.a, p).unwrap();
            let b = gj_residual(&opp.normalized_metric(), &opp.a, p).unwrap();
            assert!((a.weyl.abs() - b.weyl.abs()).abs() <= 1e-9);
            assert!((a.ricci.abs() - b.ricci.abs()).abs() <= 1e-9);
            assert!((a.field.abs() - b.field.abs()).abs() <= 1e-9);
            let la = lift(&inst.g, &inst.a, inst.eps_d()).unwrap().weyl_at(p).unwrap();
            let lb = lift(&opp.g, &opp.a, opp.eps_d()).unwrap().weyl_at(p).unwrap();
            assert!((la.abs() - lb.abs()).abs() <= 1e-9 * la.scale);
        }
    }
}

#[test]
fn declared_rank_and_signature_match_numerics() {
    for inst in grid() {
        let d = inst.dim();
        for p in sample_points(&inst.domain, 20, 9).unwrap() {
            let f = field_strength(&inst, &p);
            for m in 0..d {
                for n in 0..d {
                    assert_eq!(f[m * d + n], -f[n * d + m]);
                }
            }
            assert_eq!(numerical_rank(d, &f, 1e-8), inst.expected.rank, "{}", inst.label());
            let g = inst.g.value(&p).unwrap();
            assert_eq!(signature_index(d, g.data()), inst.expected.signature_index, "{}", inst.label());
        }
        assert_eq!(inst.expected.rank + inst.expected.nullity, d);
        assert_eq!(inst.expected.rank % 2, 0);
    }
}

#[test]
fn estimated_k_is_constant_and_matches_closed_forms() {
    for inst in grid() {
        let pts = sample_points(&inst.domain, 30, 3).unwrap();
        let est = estimate_k(&inst.normalized_metric(), &inst.a, &pts).unwrap();
        let k = inst.expected.k;
        assert!((est.mean - k).abs() <= TOL * k.abs().max(1.0), "{}: {} vs {k}", inst.label(), est.mean);
        assert!(est.spread() <= TOL * k.abs().max(1.0), "{}", inst.label());
    }
    // complex space forms: k = −(d+2)F²/(8d)
    for (rp, s, sigma, f2) in [(2, 0, 1.0, 8.0), (3, 1, 1.0, 30.0), (2, 1, -1.0, -0.8)] {
        let inst = make_cpx_space_form(rp, s, sigma, f2).unwrap();
        let d = 2.0 * rp as f64;
        let want = -(d + 2.0) * f2 / (8.0 * d);
        let est = estimate_k(&inst.g, &inst.a, &sample_points(&inst.domain, 20, 1).unwrap()).unwrap();
        assert!((est.mean - want).abs() <= TOL * want.abs() && est.spread() <= TOL * want.abs());
    }
    // c-kinks: k = K + 3L/4
    for (kk, ll, tau) in [(2.0, 0.5, 1.0), (2.0, -0.5, -1.0), (5.0, 1.0, 1.0)] {
        let inst = make_ckink(kk, ll, tau, 1.0, 1.0, false).unwrap();
        let want = kk + 0.75 * ll;
        let est = estimate_k(&inst.g, &inst.a, &sample_points(&inst.domain, 20, 1).unwrap()).unwrap();
        assert!((est.mean - want).abs() <= TOL * want && est.spread() <= TOL * want);
    }
}

#[test]
fn kink_system_holds_and_approaches_its_asymptote() {
    for k in [0.5, 2.0, 8.0] {
        let kink = make_kink(k, 1.0, false).unwrap();
        let (kc, sigma) = kink.system_constants();
        let b = (k / 2.0).sqrt();
        for i in 0..40 {
            let xi = -2.9 / b + i as f64 * (5.8 / b) / 39.0;
            if (b * xi).tanh().abs() < 0.05 {
                continue;
            }
            let p = ChartPoint::new(vec![0.2, xi]).unwrap();
            let r = kink_ode_residual(&kink.g, &*kink.phi, kc, sigma, &p).unwrap();
            for res in [&r.curvature, &r.field, &r.hessian] {
                assert!(res.rel() <= 1e-8, "k={k} ξ={xi}: {:e}", res.rel());
            }
        }
        for xi in [10.0 / k.sqrt(), -10.0 / k.sqrt()] {
            let p = ChartPoint::new(vec![0.0, xi]).unwrap();
            let r = curvature_bundle(&kink.g, &p).unwrap().scalar;
            assert!((r / (-4.0 * k) - 1.0).abs() <= 1e-4, "k={k}: R={r}");
        }
    }
}

#[test]
fn kink_killing_vector_is_the_time_translation() {
    for k in [0.5, 2.0] {
        let inst = build(Family::Kink2, &Params::new().with("k", k)).unwrap();
        for p in sample_points(&inst.domain, 10, 2).unwrap() {
            let kc = killing_check(&inst.g, &inst.a, &p).unwrap();
            let xi = p.coords()[1];
            let want = k * k / ((k / 2.0).sqrt() * xi).cosh().powi(4);
            assert!((kc.vector[0].abs() - want).abs() <= 1e-8 * want);
            assert!(kc.residual.rel() <= 1e-8);
        }
    }
}

#[test]
fn ckink_gap_boundary_is_where_the_profile_vanishes() {
    for (kk, ll) in [(2.0, -0.5), (5.0, -3.0), (1.0, -1.9)] {
        let inst = make_ckink(kk, ll, -1.0, 1.0, 1.0, false).unwrap();
        let phi = &inst.kink.as_ref().unwrap().phi;
        let at = |x: f64| {
            let mut o = [0.0];
            phi.eval_f64(&[0.0, x], &mut o);
            o[0]
        };
        // bisection between the last non-finite point and the first real one
        let (mut lo, mut hi) = (0.0f64, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if at(mid).is_finite() && at(mid).abs() > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((ckink_gap_boundary(kk, ll) - hi).abs() <= 1e-10, "K={kk} L={ll}");
        assert!(!inst.domain.admits(&[0.0, 0.5 * hi, 0.0]));
    }
}

#[test]
fn ckink_tends_to_the_kink_as_l_vanishes() {
    let k = 2.0;
    let ck = make_ckink(k, 1e-6, 1.0, 1.0, 1.0, false).unwrap();
    let kink = make_kink(k, 1.0, false).unwrap();
    let cd = ck.kink.as_ref().unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..=60 {
        let xi = -3.0 + 0.1 * i as f64;
        // 3τl²/φ⁴ grows like L/ξ⁴ in the core, where the limit is not uniform
        if xi.abs() < 0.3 {
            continue;
        }
        let p = ChartPoint::new(vec![0.0, xi]).unwrap();
        let (mut a, mut b) = ([0.0], [0.0]);
        cd.phi.eval_f64(p.coords(), &mut a);
        kink.phi.eval_f64(p.coords(), &mut b);
        let ra = curvature_bundle(&cd.g2, &p).unwrap().scalar;
        let rb = curvature_bundle(&kink.g, &p).unwrap().scalar;
        // the deformed profile is the even branch, so compare |φ|
        worst = worst.max((a[0].abs() - b[0].abs()).abs()).max((ra - rb).abs());
    }
    assert!(worst <= 1e-3, "{worst:e}");
}

#[test]
fn complex_structures_have_the_right_index() {
    for (rp, s, sigma, f2) in
        [(2, 0, 1.0, 8.0), (2, 1, 1.0, 2.0), (3, 2, 1.0, 6.0), (2, 0, -1.0, -1.0), (3, 1, -1.0, -3.0)]
    {
        let inst = make_cpx_space_form(rp, s, sigma, f2).unwrap();
        let d = 2 * rp;
        for p in sample_points(&inst.domain, 20, 4).unwrap() {
            let st = structure_residual(&inst.g, &inst.a, sigma, &p).unwrap();
            for r in [&st.square, &st.hermitian, &st.parallel, &st.holomorphic] {
                assert!(r.rel() <= 1e-8, "{}: {:e}", inst.label(), r.rel());
            }
            if sigma > 0.0 {
                assert_eq!(st.signature_index % 2, 0);
            } else {
                assert_eq!(2 * st.signature_index, d);
            }
        }
    }
}

#[test]
fn structure_needs_a_nonzero_invariant() {
    let inst = make_real_space_form(4, 0, 1.0).unwrap();
    let p = ChartPoint::new(vec![0.1, 0.0, 0.2, 0.0]).unwrap();
    assert!(matches!(structure_residual(&inst.g, &inst.a, 1.0, &p), Err(Error::NullStructure)));
    assert!(structure_residual(&inst.g, &inst.a, 0.5, &p).is_err());
}

#[test]
fn kink_structure_is_parallel_while_its_field_is_not() {
    let kink = make_kink(2.0, 1.0, false).unwrap();
    let (_, sigma) = kink.system_constants();
    let p = ChartPoint::new(vec![0.3, 0.8]).unwrap();
    let phi2 = {
        let mut o = [0.0];
        kink.phi.eval_f64(p.coords(), &mut o);
        o[0] * o[0]
    };
    let st = structure_residual_with(&kink.g, &kink.a, sigma, 0.0, &p).unwrap();
    assert!(st.square.rel() <= 1e-10 && st.hermitian.rel() <= 1e-10 && st.parallel.rel() <= 1e-10);
    let div = killing_check(&kink.g.clone(), &kink.a, &p);
    // in two dimensions the divergence is the nonzero Killing vector
    assert!(div.map(|k| k.vector.iter().any(|v| v.abs() > 1e-3)).unwrap_or(true));
    assert!(phi2 > 0.0);
}

#[test]
fn fundamental_forms_on_block_families() {
    for inst in grid() {
        let Some(block) = &inst.block else { continue };
        let n = inst.expected.nullity;
        for p in sample_points(&inst.domain, 20, 8).unwrap() {
            let ff = fundamental_forms(block, &inst.a, &p).unwrap();
            assert!(ff.umbilicity.rel() <= TOL, "{}", inst.label());
            if let Some(t) = &ff.trace {
                assert!(t.rel() <= TOL, "{}: trace {:e}", inst.label(), t.rel());
            }
            let g = ff.gauge_form.as_ref().expect("gauge form");
            if n > 1 {
                assert!(ff.f.iter().all(|v| *v == 0.0), "{}", inst.label());
            } else {
                assert!(g.rel() <= TOL, "{}", inst.label());
                let l2 = inst.expected.l2.unwrap();
                let lm = ff.l_measured.unwrap();
                assert!((lm * lm - l2).abs() <= TOL * l2.max(1.0), "{}: {lm} vs {l2}", inst.label());
            }
            // antisymmetric part of Ê is h_ij f^j / 2
            let r = block.external_dim();
            let parts = block.parts_at(&p).unwrap();
            let (lam, c) = (parts.warp, &parts.internal);
            for i in 0..n {
                for a in 0..r {
                    for b in 0..r {
                        let anti = 0.5 * (ff.e_hat[(i * r + a) * r + b] - ff.e_hat[(i * r + b) * r + a]);
                        let want: f64 = (0..n).map(|j| 0.5 * lam * c[i * n + j] * ff.f[(j * r + a) * r + b]).sum();
                        assert!((anti - want).abs() <= 1e-12 * want.abs().max(1.0));
                    }
                }
            }
        }
    }
}

#[test]
fn perturbations_are_detected() {
    for inst in grid() {
        let pts = sample_points(&inst.domain, 10, 42).unwrap();
        let g = inst.normalized_metric();
        let a2 = inst.a.scaled(1.01);
        let has_field = inst.expected.rank > 0;
        let (mut worst_a, mut worst_k): (f64, f64) = (0.0, 0.0);
        for p in &pts {
            let r = gj_residual(&g, &a2, p).unwrap();
            worst_a = worst_a.max(r.weyl.rel()).max(r.ricci.rel()).max(r.field.rel());
            let c = curvature_identity_residual(&g, &inst.a, inst.expected.k + 0.1, p).unwrap();
            worst_k = worst_k.max(c.riemann.rel()).max(c.ricci.rel()).max(c.scalar.rel());
        }
        if has_field {
            assert!(worst_a > 1e-3, "{}: A×1.01 gives {worst_a:e}", inst.label());
        }
        assert!(worst_k > 1e-3, "{}: k+0.1 gives {worst_k:e}", inst.label());
        if inst.family != Family::RealSpaceForm {
            let wrong = lift(&inst.g, &inst.a, -inst.eps_d()).unwrap();
            let w = weyl_vanishing(&wrong, &pts, 42, TOL).unwrap();
            assert!(w.max_rel > 1e-3, "{}: wrong ε gives {:e}", inst.label(), w.max_rel);
        }
    }
}

#[test]
fn individual_evaluators_agree_with_the_suite() {
    let inst = build(Family::KinkWarped, &Params::new().with("k", 1.0).with("n", 2.0)).unwrap();
    let p = sample_points(&inst.domain, 1, 1).unwrap().remove(0);
    let k = inst.expected.k;
    let tk = traceless_kink_residual(&inst.g, &inst.a, k, &p).unwrap();
    assert!(tk.traceless.rel() <= TOL && tk.kink.rel() <= TOL);
    assert!(bianchi_residual(&inst.g, &inst.a, k, &p).unwrap().rel() <= TOL);
    assert!(bianchi_residual(&inst.g, &inst.a, k + 0.3, &p).is_ok());
}

#[test]
fn lift_round_trip_and_branch_symmetry() {
    for inst in grid() {
        let l = lift(&inst.g, &inst.a, inst.eps_d()).unwrap();
        let (g, a) = reduce(&l).unwrap();
        let pts = sample_points(&inst.domain, 5, 6).unwrap();
        for p in &pts {
            assert_eq!(g.value(p).unwrap(), inst.g.value(p).unwrap());
            assert_eq!(a.value(p).unwrap(), inst.a.value(p).unwrap());
        }
        // opposite metric with opposite ε passes as well
        let opp = lift(&inst.g.scaled(-1.0), &inst.a, -inst.eps_d()).unwrap();
        assert!(weyl_vanishing(&opp, &pts, 6, TOL).unwrap().pass, "{}", inst.label());
    }
}

#[test]
fn numeric_reduction_recovers_base_fields() {
    let inst = build(Family::CKink3, &Params::new().with("K", 2.0).with("L", 0.5).with("tau", 1.0)).unwrap();
    let l = lift(&inst.g, &inst.a, 1.0).unwrap();
    let probes: Vec<ChartPoint> = sample_points(&inst.domain, 4, 1).unwrap().iter().map(|p| p.extended(0.7)).collect();
    let wrapped = LiftedMetric::from_total(l.metric().clone(), &probes).unwrap();
    assert_eq!(wrapped.eps_d(), 1.0);
    let (g, a) = reduce(&wrapped).unwrap();
    for p in sample_points(&inst.domain, 5, 2).unwrap() {
        let (gv, av) = (g.value(&p).unwrap(), a.value(&p).unwrap());
        let (gw, aw) = (inst.g.value(&p).unwrap(), inst.a.value(&p).unwrap());
        for (x, y) in gv.data().iter().zip(gw.data()) {
            assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
        }
        for (x, y) in av.data().iter().zip(aw.data()) {
            assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
        }
    }
}

/// `ĝ` on four coordinates whose `(0,0)` entry grows with the last one.
struct Drifting;

impl ClosedForm for Drifting {
    fn dim(&self) -> usize {
        4
    }
    fn len(&self) -> usize {
        16
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = if i % 5 == 0 { S::one() } else { S::zero() };
        }
        out[0] = S::one() + x[3].scale(0.1);
    }
}

#[test]
fn lift_rejections() {
    let kink = make_kink(1.0, 1.0, false).unwrap();
    assert!(matches!(lift(&kink.g, &kink.a, 1.0), Err(Error::WeylDimension(2))));
    let inst = make_real_space_form(3, 0, 1.0).unwrap();
    assert!(lift(&inst.g, &inst.a, 0.5).is_err());
    let drifting = SmoothField::from_form(Valence::new(0, 2), Drifting).unwrap();
    let probes = vec![ChartPoint::new(vec![0.0, 0.1, 0.2, 0.3]).unwrap()];
    assert!(matches!(LiftedMetric::from_total(drifting, &probes), Err(Error::DependsOnExtraCoordinate(_))));
    // A = 0 lifts and reduces back to A = 0
    let l = lift(&inst.g, &inst.a, -1.0).unwrap();
    let (_, a) = reduce(&l).unwrap();
    let p = ChartPoint::new(vec![0.1, 0.2, 0.3]).unwrap();
    assert!(a.value(&p).unwrap().data().iter().all(|v| *v == 0.0));
}

#[test]
fn gj_rejects_two_dimensions() {
    let kink = make_kink(1.0, 1.0, false).unwrap();
    let p = ChartPoint::new(vec![0.0, 1.0]).unwrap();
    assert!(matches!(gj_residual(&kink.g, &kink.a, &p), Err(Error::WeylDimension(2))));
}

#[test]
fn nullity_one_tends_to_the_product_as_l_vanishes() {
    let a = make_kk_nullity_one(1, 0, 1.0, 4.0, 1e-6, 1.0, 1.0).unwrap();
    let b = make_kk_nullity_one(1, 0, 1.0, 4.0, 0.0, 1.0, 1.0).unwrap();
    // at l = 0 the metric is the Kähler factor plus a flat line
    let c = make_cpx_space_form(1, 0, 1.0, 4.0).unwrap();
    for p in sample_points(&a.domain, 10, 3).unwrap() {
        let (ga, gb) = (a.g.value(&p).unwrap(), b.g.value(&p).unwrap());
        let gc = c.g.value(&ChartPoint::new(p.coords()[..2].to_vec()).unwrap()).unwrap();
        for i in 0..9 {
            assert!((ga.data()[i] - gb.data()[i]).abs() <= 1e-4);
            let want = match (i / 3, i % 3) {
                (2, 2) => 1.0,
                (2, _) | (_, 2) => 0.0,
                (m, n) => gc.get(&[m, n]).to_owned(),
            };
            assert!((gb.data()[i] - want).abs() <= 1e-12);
        }
    }
}

#[test]
fn parameter_validation_names_the_violated_constraint() {
    let err = build(Family::CKink3, &Params::new().with("K", 2.0).with("L", -0.5).with("tau", 1.0)).unwrap_err();
    assert!(err.to_string().contains("τ·L > 0"), "{err}");
    let err =
        build(Family::CpxSpaceForm, &Params::new().with("rp", 2.0).with("F2", 1.0).with("sigma", -1.0)).unwrap_err();
    assert!(err.to_string().contains("σ must equal the sign of F²"), "{err}");
    assert!(build(Family::RealSpaceForm, &Params::new().with("d", 3.0).with("k", 1.0).with("bogus", 1.0)).is_err());
    assert!(build(Family::RealSpaceForm, &Params::new().with("d", 2.5).with("k", 1.0)).is_err());
    assert!(build(Family::Kink2, &Params::new().with("k", -1.0)).is_err());
}

#[test]
fn sampling_is_seeded_and_in_domain() {
    for inst in grid() {
        let a = sample_points(&inst.domain, 25, 9).unwrap();
        let b = sample_points(&inst.domain, 25, 9).unwrap();
        let c = sample_points(&inst.domain, 25, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().all(|p| inst.domain.contains(p)));
    }
}
