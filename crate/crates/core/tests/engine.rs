//! Curvature engine against closed forms, finite differences and
//! identities that hold for any metric.

use kkforms_core::catalog::{build, default_grid, make_real_space_form};
use kkforms_core::curvature::{christoffel, curvature_bundle, second_bianchi, CurvatureBundle};
use kkforms_core::field::jet_eval;
use kkforms_core::linalg::invert;
use kkforms_core::verify::sample_points;
use kkforms_core::{ChartPoint, ClosedForm, Scalar, SmoothField, TensorValue, Valence};

/// A generic non-symmetric-space metric: `η + 0.15 S(x)` with smooth `S`.
struct Wobbly {
    eta: Vec<f64>,
}

impl ClosedForm for Wobbly {
    fn dim(&self) -> usize {
        self.eta.len()
    }
    fn len(&self) -> usize {
        self.eta.len() * self.eta.len()
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let d = self.eta.len();
        for i in 0..d {
            for j in 0..d {
                let a = (x[i] + x[j].scale(2.0)).sin() + (x[j] + x[i].scale(2.0)).sin();
                let b = (x[(i + j) % d].scale(0.7)).cos() * x[i] * x[j];
                let mut v = (a + b).scale(0.075);
                if i == j {
                    v = v + S::cst(self.eta[i]);
                }
                out[i * d + j] = v;
            }
        }
    }
}

/// `Ω² g` with `Ω = 1 + 0.1 sin(x¹)`.
struct Conformal {
    base: Wobbly,
}

impl ClosedForm for Conformal {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn len(&self) -> usize {
        self.base.len()
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        self.base.eval(x, out);
        let om = S::one() + x[1].sin().scale(0.1);
        let om2 = om * om;
        for o in out.iter_mut() {
            *o = *o * om2;
        }
    }
}

fn wobbly(eta: &[f64]) -> SmoothField {
    SmoothField::from_form(Valence::new(0, 2), Wobbly { eta: eta.to_vec() }).unwrap()
}

fn points(d: usize, n: usize) -> Vec<ChartPoint> {
    (0..n)
        .map(|i| {
            let x = (0..d).map(|j| 0.4 * ((i * 7 + j * 3) as f64 * 0.618).sin()).collect();
            ChartPoint::new(x).unwrap()
        })
        .collect()
}

/// Central differences at `h`, `h/2`, `h/4` combined by two Richardson steps.
fn richardson(f: impl Fn(f64) -> Vec<f64>, h: f64) -> Vec<f64> {
    let cd = |h: f64| -> Vec<f64> {
        let (p, m) = (f(h), f(-h));
        p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * h)).collect()
    };
    let (d1, d2, d3) = (cd(h), cd(h / 2.0), cd(h / 4.0));
    (0..d1.len())
        .map(|i| {
            let r1 = (4.0 * d2[i] - d1[i]) / 3.0;
            let r2 = (4.0 * d3[i] - d2[i]) / 3.0;
            (16.0 * r2 - r1) / 15.0
        })
        .collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn metric_values(g: &SmoothField, x: &[f64]) -> Vec<f64> {
    g.value(&ChartPoint::new(x.to_vec()).unwrap()).unwrap().into_data()
}

/// Christoffel symbols `[μ][ν][λ]` from finite differences of the metric.
fn fd_christoffel(g: &SmoothField, x: &[f64]) -> Vec<f64> {
    let d = x.len();
    let dg: Vec<Vec<f64>> = (0..d)
        .map(|a| {
            richardson(
                |h| {
                    let mut y = x.to_vec();
                    y[a] += h;
                    metric_values(g, &y)
                },
                1e-3,
            )
        })
        .collect();
    let ginv = invert(d, &metric_values(g, x)).unwrap();
    let mut out = vec![0.0; d * d * d];
    for m in 0..d {
        for n in 0..d {
            for l in 0..d {
                let mut acc = 0.0;
                for s in 0..d {
                    acc += 0.5 * ginv[l * d + s] * (dg[m][s * d + n] + dg[n][s * d + m] - dg[s][m * d + n]);
                }
                out[(m * d + n) * d + l] = acc;
            }
        }
    }
    out
}

#[test]
fn christoffel_and_riemann_match_richardson_differences() {
    for eta in [vec![1.0, 1.0, 1.0], vec![-1.0, 1.0, 1.0, 1.0]] {
        let g = wobbly(&eta);
        let d = eta.len();
        for p in points(d, 4) {
            let x = p.coords();
            let gam = christoffel(&g, &p).unwrap();
            let fd = fd_christoffel(&g, x);
            assert!(max_diff(gam.data(), &fd) <= 1e-5 * max_abs(gam.data()).max(1.0));

            // R_{μνκ}^λ with ∂Γ from differences of the finite-difference Γ
            let dgam: Vec<Vec<f64>> = (0..d)
                .map(|a| {
                    richardson(
                        |h| {
                            let mut y = x.to_vec();
                            y[a] += h;
                            fd_christoffel(&g, &y)
                        },
                        1e-3,
                    )
                })
                .collect();
            let gi = |l: usize, m: usize, n: usize| fd[(m * d + n) * d + l];
            let b = curvature_bundle(&g, &p).unwrap();
            let mut worst: f64 = 0.0;
            for m in 0..d {
                for n in 0..d {
                    for k in 0..d {
                        for l in 0..d {
                            let mut r = dgam[m][(n * d + k) * d + l] - dgam[n][(m * d + k) * d + l];
                            for s in 0..d {
                                r += gi(l, m, s) * gi(s, n, k) - gi(l, n, s) * gi(s, m, k);
                            }
                            worst = worst.max((r - b.riemann_up.get(&[m, n, k, l])).abs());
                        }
                    }
                }
            }
            assert!(worst <= 1e-5 * max_abs(b.riemann_up.data()).max(1.0), "worst {worst:e}");
        }
    }
}

#[test]
fn jets_match_richardson_differences_on_catalog_metrics() {
    for (fam, ps) in default_grid() {
        let inst = build(fam, &ps).unwrap();
        let d = inst.dim();
        for p in sample_points(&inst.domain, 3, 7).unwrap() {
            let j = jet_eval(&inst.g, &p, 2).unwrap();
            for a in 0..d {
                let first = richardson(|h| metric_values(&inst.g, p.shifted(a, h).coords()), 1e-3);
                let second = richardson(
                    |h| {
                        let q = p.shifted(a, h);
                        let jq = jet_eval(&inst.g, &q, 1).unwrap();
                        (0..jq.len()).map(|c| jq.first(a, c)).collect()
                    },
                    1e-3,
                );
                for c in 0..j.len() {
                    let s1 = j.first(a, c).abs().max(j.value(c).abs()).max(1.0);
                    assert!((first[c] - j.first(a, c)).abs() <= 1e-5 * s1, "{} first", inst.label());
                    let s2 = j.second(a, a, c).abs().max(s1);
                    assert!((second[c] - j.second(a, a, c)).abs() <= 1e-5 * s2, "{} second", inst.label());
                }
            }
        }
    }
}

#[test]
fn mixed_partials_are_symmetric() {
    for (fam, ps) in default_grid() {
        let inst = build(fam, &ps).unwrap();
        let d = inst.dim();
        for p in sample_points(&inst.domain, 100, 3).unwrap() {
            for field in [&inst.g, &inst.a] {
                let j = jet_eval(field, &p, 3).unwrap();
                for c in 0..j.len() {
                    let scale = (0..d)
                        .flat_map(|a| (0..d).map(move |b| (a, b)))
                        .fold(1e-300f64, |m, (a, b)| m.max(j.second(a, b, c).abs()));
                    for a in 0..d {
                        for b in 0..d {
                            assert!((j.second(a, b, c) - j.second(b, a, c)).abs() <= 1e-12 * scale);
                            for e in 0..d {
                                let t = j.third(a, b, e, c);
                                assert!((t - j.third(e, a, b, c)).abs() <= 1e-12 * t.abs().max(scale));
                            }
                        }
                    }
                }
            }
        }
    }
}

fn check_symmetries(b: &CurvatureBundle, ginv: &[f64], tol: f64) {
    let d = b.riemann.dim();
    let r = &b.riemann;
    let scale = r.max_abs().max(1e-300);
    let mut worst: f64 = 0.0;
    for m in 0..d {
        for n in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let v = r.get(&[m, n, k, l]);
                    worst = worst
                        .max((v + r.get(&[n, m, k, l])).abs())
                        .max((v + r.get(&[m, n, l, k])).abs())
                        .max((v - r.get(&[k, l, m, n])).abs())
                        .max((v + r.get(&[n, k, m, l]) + r.get(&[k, m, n, l])).abs());
                }
            }
            worst = worst.max((b.ricci.get(&[m, n]) - b.ricci.get(&[n, m])).abs());
        }
    }
    assert!(worst <= tol * scale, "Riemann symmetries off by {:e}", worst / scale);
    if let Some(c) = &b.weyl {
        let mut tr: f64 = 0.0;
        for m in 0..d {
            for n in 0..d {
                for pair in [(0, 3), (0, 2), (1, 3)] {
                    let mut acc = 0.0;
                    for a in 0..d {
                        for bb in 0..d {
                            let mut i = [0usize; 4];
                            let free = (0..4).filter(|s| *s != pair.0 && *s != pair.1).collect::<Vec<_>>();
                            i[pair.0] = a;
                            i[pair.1] = bb;
                            i[free[0]] = m;
                            i[free[1]] = n;
                            acc += ginv[a * d + bb] * c.get(&i);
                        }
                    }
                    tr = tr.max(acc.abs());
                }
            }
        }
        assert!(tr <= tol * scale * max_abs(ginv).max(1.0) * d as f64, "Weyl trace {tr:e}");
    }
}

#[test]
fn curvature_symmetries_hold_on_catalog() {
    for (fam, ps) in default_grid() {
        let inst = build(fam, &ps).unwrap();
        for p in sample_points(&inst.domain, 50, 42).unwrap() {
            let b = curvature_bundle(&inst.g, &p).unwrap();
            let ginv = invert(inst.dim(), inst.g.value(&p).unwrap().data()).unwrap();
            check_symmetries(&b, &ginv, 1e-10);
        }
    }
}

#[test]
fn curvature_symmetries_hold_on_generic_metric() {
    let eta = [-1.0, 1.0, 1.0, 1.0];
    let g = wobbly(&eta);
    for p in points(4, 10) {
        let b = curvature_bundle(&g, &p).unwrap();
        let ginv = invert(4, g.value(&p).unwrap().data()).unwrap();
        check_symmetries(&b, &ginv, 1e-10);
    }
}

#[test]
fn space_form_has_constant_curvature_and_positive_sphere_scalar() {
    for (d, s, k) in [(3, 0, 0.7), (4, 1, -1.3), (5, 2, 2.0)] {
        let inst = make_real_space_form(d, s, k).unwrap();
        for p in sample_points(&inst.domain, 10, 1).unwrap() {
            let b = curvature_bundle(&inst.g, &p).unwrap();
            let g = inst.g.value(&p).unwrap();
            let mut worst: f64 = 0.0;
            for m in 0..d {
                for n in 0..d {
                    for kk in 0..d {
                        for l in 0..d {
                            let want = k * (g.get(&[m, l]) * g.get(&[kk, n]) - g.get(&[m, kk]) * g.get(&[l, n]));
                            worst = worst.max((b.riemann.get(&[m, n, kk, l]) - want).abs());
                        }
                    }
                    let ric = (d as f64 - 1.0) * k * g.get(&[m, n]);
                    worst = worst.max((b.ricci.get(&[m, n]) - ric).abs());
                }
            }
            assert!(worst <= 1e-12 * k.abs() * g.max_abs().powi(2));
            let scalar = d as f64 * (d as f64 - 1.0) * k;
            assert!((b.scalar - scalar).abs() <= 1e-12 * scalar.abs());
        }
    }
    // the round 3-sphere: positive scalar curvature
    let inst = make_real_space_form(3, 0, 1.0).unwrap();
    let p = ChartPoint::new(vec![0.1, -0.2, 0.3]).unwrap();
    assert!(curvature_bundle(&inst.g, &p).unwrap().scalar > 0.0);
}

#[test]
fn opposite_curvature_sign_negates_scalar() {
    let a = make_real_space_form(4, 1, 0.8).unwrap();
    let b = make_real_space_form(4, 1, -0.8).unwrap();
    let p = ChartPoint::new(vec![0.05, 0.1, -0.1, 0.2]).unwrap();
    let sa = curvature_bundle(&a.g, &p).unwrap().scalar;
    let sb = curvature_bundle(&b.g, &p).unwrap().scalar;
    assert!((sa + sb).abs() <= 1e-9 * sa.abs());
}

#[test]
fn weyl_vanishes_identically_in_three_dimensions() {
    let g = wobbly(&[1.0, -1.0, 1.0]);
    for p in points(3, 10) {
        let b = curvature_bundle(&g, &p).unwrap();
        let c = b.weyl.unwrap();
        assert!(c.max_abs() <= 1e-9 * b.riemann.max_abs());
    }
}

fn weyl_mixed(b: &CurvatureBundle, ginv: &[f64]) -> TensorValue {
    let c = b.weyl.as_ref().unwrap();
    let d = c.dim();
    let mut out = TensorValue::zeros(Valence::new(3, 1), d);
    for m in 0..d {
        for n in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let v: f64 = (0..d).map(|s| c.get(&[m, n, k, s]) * ginv[s * d + l]).sum();
                    out.set(&[m, n, k, l], v);
                }
            }
        }
    }
    out
}

#[test]
fn mixed_weyl_is_conformally_invariant() {
    let eta = vec![-1.0, 1.0, 1.0, 1.0];
    let g = wobbly(&eta);
    let h = SmoothField::from_form(Valence::new(0, 2), Conformal { base: Wobbly { eta } }).unwrap();
    for p in points(4, 10) {
        let bg = curvature_bundle(&g, &p).unwrap();
        let bh = curvature_bundle(&h, &p).unwrap();
        let cg = weyl_mixed(&bg, &invert(4, g.value(&p).unwrap().data()).unwrap());
        let ch = weyl_mixed(&bh, &invert(4, h.value(&p).unwrap().data()).unwrap());
        let diff = max_diff(cg.data(), ch.data());
        assert!(diff <= 1e-8 * cg.max_abs(), "diff {diff:e}");
    }
}

#[test]
fn second_bianchi_identity_holds() {
    let g = wobbly(&[-1.0, 1.0, 1.0, 1.0]);
    for p in points(4, 5) {
        let (res, scale) = second_bianchi(&g, &p).unwrap();
        assert!(res.max_abs() <= 1e-7 * scale);
    }
    for (fam, ps) in default_grid() {
        let inst = build(fam, &ps).unwrap();
        for p in sample_points(&inst.domain, 5, 11).unwrap() {
            let (res, scale) = second_bianchi(&inst.g, &p).unwrap();
            assert!(res.max_abs() <= 1e-7 * scale.max(1e-30), "{}", inst.label());
        }
    }
}
