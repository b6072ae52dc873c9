mod common;

use std::f64::consts::TAU;

use common::{c, EXPRESSIONS};
use proptest::prelude::*;
use surflab::classify::{classify_point, gauss_map_fold_point, Criteria, SingularityType};
use surflab::cmc::{closedness_from_point, harmonicity_from_jets, k_e_cmc, omega_from_g};
use surflab::exprlang::{
    eval_jet, eval_value, parse, validate_holomorphic, BinOp, DomainSpec, Expr, ExprKind, Func, RealOp, Span,
};
use surflab::invariants::{fold_symmetry_test, kappa_general_point, kappa_s_closed_point, project, xi_f_norm_closed};
use surflab::maxface::{k_e, k_l, psi_report};
use surflab::surface_core::{omega_formula, Pipeline, PointData, SurfaceData, Tolerances, Vec3};
use surflab::wirtinger::{fd_oracle, Complex, Elementary, Jet};

fn complex(scale: f64) -> impl Strategy<Value = Complex> {
    (-scale..scale, -scale..scale).prop_map(|(a, b)| c(a, b))
}

fn jet(order: usize) -> impl Strategy<Value = Jet> {
    let n = (order + 1) * (order + 2) / 2;
    prop::collection::vec(complex(3.0), n).prop_map(move |v| {
        let mut k = 0;
        Jet::from_partials(order, |_, _| {
            k += 1;
            v[k - 1]
        })
    })
}

fn sample_point() -> impl Strategy<Value = Complex> {
    (0.3..2.0, -1.0..1.0).prop_map(|(u, v)| c(u, v))
}

fn leaf() -> impl Strategy<Value = ExprKind> {
    prop_oneof![
        (0.0..100.0f64).prop_map(ExprKind::Real),
        Just(ExprKind::ImagUnit),
        Just(ExprKind::Z),
        Just(ExprKind::Zbar),
    ]
}

fn node(kind: ExprKind) -> Expr {
    Expr::new(kind, Span::default())
}

fn expr_tree() -> impl Strategy<Value = Expr> {
    leaf().prop_map(node).prop_recursive(5, 48, 2, |inner| {
        let ops = prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)];
        let funcs = prop_oneof![
            prop::sample::select(Elementary::ALL.to_vec()).prop_map(Func::Elementary),
            prop::sample::select(RealOp::ALL.to_vec()).prop_map(Func::Real),
        ];
        prop_oneof![
            inner.clone().prop_map(|e| node(ExprKind::Neg(Box::new(e)))),
            (ops, inner.clone(), inner.clone()).prop_map(|(op, l, r)| node(ExprKind::Binary {
                op,
                lhs: Box::new(l),
                rhs: Box::new(r)
            })),
            (inner.clone(), -4i32..=4).prop_map(|(b, n)| node(ExprKind::Pow { base: Box::new(b), exponent: n })),
            (funcs, inner).prop_map(|(func, a)| node(ExprKind::Call { func, arg: Box::new(a) })),
        ]
    })
}

/// Maxface data `g = z exp(a z)`, `ω̂ = exp(b z)` on a disk, with a point projected onto
/// the singular set from angle `t`.
fn singular_maxface(a: Complex, b: Complex, t: f64) -> Option<(SurfaceData, PointData)> {
    let g = parse(&format!("z*exp(({} + {}*i)*z)", a.re, a.im)).unwrap();
    let w = parse(&format!("exp(({} + {}*i)*z)", b.re, b.im)).unwrap();
    let data = SurfaceData::holomorphic(g, w, DomainSpec::Disk { center: [0.0, 0.0], radius: 2.0 }).ok()?;
    let z = project(&data, Complex::from_polar(1.0, t), &Tolerances::default()).ok()?;
    let p = data.point(z).ok()?;
    Some((data, p))
}

fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= (rel * a.abs().max(b.abs())).max(abs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn conjugation_is_an_involution(j in jet(3)) {
        let cj = j.conj();
        prop_assert!(cj.conj() == j);
        for (a, b, v) in j.partials() {
            prop_assert_eq!(cj.partial(b, a), v.conj());
        }
    }

    #[test]
    fn autodiff_matches_finite_differences(k in 0..EXPRESSIONS.len(), z in sample_point()) {
        let e = parse(EXPRESSIONS[k]).unwrap();
        let auto = eval_jet(&e, z, 3).unwrap();
        let fd = fd_oracle(|w| eval_value(&e, w).unwrap(), z, 2e-4);
        for (a, b, v) in fd.partials() {
            let got = auto.partial(a, b);
            let scale = (0..=a + b).map(|k| auto.partial(a + b - k, k).norm()).fold(0.0, f64::max);
            let err = (got - v).norm();
            prop_assert!(err <= (1e-6 * scale).max(1e-8), "{} ({a},{b}) at {z}: {got} vs {v}", EXPRESSIONS[k]);
        }
    }

    #[test]
    fn holomorphic_expressions_have_zero_zbar_partials(k in 0..EXPRESSIONS.len(), z in sample_point()) {
        let e = parse(EXPRESSIONS[k]).unwrap();
        prop_assume!(validate_holomorphic(&e).is_ok());
        let j = eval_jet(&e, z, 3).unwrap();
        for (_, b, v) in j.partials() {
            if b > 0 {
                prop_assert_eq!(v, Complex::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn printing_round_trips(e in expr_tree()) {
        let text = e.to_string();
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &e, "{}", text);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn frame_identities(z in complex(1.5), a in complex(0.3), b in complex(0.5)) {
        let g = parse(&format!("z*exp(({} + {}*i)*z)", a.re, a.im)).unwrap();
        let w = parse(&format!("exp(({} + {}*i)*z)", b.re, b.im)).unwrap();
        let data = SurfaceData::holomorphic(g, w, DomainSpec::Disk { center: [0.0, 0.0], radius: 2.0 }).unwrap();
        prop_assume!(z.norm() < 1.9);
        let p = data.point(z).unwrap();
        let nu = p.normal();
        let fz = p.f_z();
        let dot = fz[0] * nu[0] + fz[1] * nu[1] + fz[2] * nu[2];
        prop_assert!(dot.norm() < 1e-10);
        for (k, jet) in p.f_z_jets().iter().enumerate() {
            let fzbar = jet.conj();
            prop_assert_eq!(fzbar.value(), fz[k].conj());
        }
        prop_assert!(close(p.lambda_det(), p.lambda(), 1e-9, 1e-12), "{} {}", p.lambda_det(), p.lambda());
        if p.lambda_hat().abs() > 1e-12 {
            prop_assert_eq!(p.lambda().signum(), p.lambda_hat().signum());
        }
        if p.g_z().norm() > 1e-9 {
            prop_assert!(k_e(&p).unwrap() < 0.0);
        }
        if p.lambda_hat().abs() > 1e-8 {
            prop_assert!(k_l(&p, 1e-8).unwrap() >= 0.0);
        }
    }

    #[test]
    fn first_kind_invariants(a in complex(0.25), b in complex(0.6), t in 0.0..TAU) {
        let Some((_, p)) = singular_maxface(a, b, t) else { return Ok(()) };
        let tol = Tolerances::default();
        let phi = p.phi().unwrap();
        prop_assume!(phi.im.abs() > 1e-3 && p.g_z().norm() > 1e-3);
        let closed = kappa_s_closed_point(&p, &tol).unwrap();
        let s = kappa_general_point(&p, &tol).unwrap();
        prop_assert!(closed < 0.0 && s.kappa_s < 0.0);
        prop_assert!(close(closed, s.kappa_s, 1e-7, 0.0), "{closed} {}", s.kappa_s);
        prop_assert!(s.kappa_nu.abs() < 1e-8);
        prop_assert_eq!(s.epsilon_gamma, -1.0);
        prop_assert_eq!(k_e(&p).unwrap().signum(), closed.signum());
        prop_assert!(close(s.xi_f_norm, xi_f_norm_closed(&p).unwrap(), 1e-10, 1e-12));
        let g = p.g_value();
        let dir = p.normal().cross(&s.xi_f).normalize();
        let want = Vec3::new(0.0, -g.im, g.re);
        prop_assert!((dir - want).norm() < 1e-9 || (dir + want).norm() < 1e-9);
        let fold = gauss_map_fold_point(&p, &tol).unwrap();
        prop_assert!((fold.det + p.g_z().norm_sqr()).abs() < 1e-10);
    }

    #[test]
    fn psi_and_cusp_quantities(a in complex(0.25), b in complex(0.6), t in 0.0..TAU) {
        let Some((_, p)) = singular_maxface(a, b, t) else { return Ok(()) };
        prop_assume!(p.g_z().norm() > 1e-3);
        let r = psi_report(&p, &Tolerances::default()).unwrap();
        prop_assert!((r.psi_det - 2.0 * r.psi_closed).abs() < 1e-8 * (1.0 + r.psi_closed.abs()));
        prop_assert!(r.normal_z_mismatch < 1e-10);
        if r.conditions.iter().all(|x| x.abs() < 1e-10) {
            prop_assert!(r.a_value.abs() < 1e-8);
        }
    }

    #[test]
    fn classification_is_exhaustive(a in complex(0.25), b in complex(0.6), t in 0.0..TAU) {
        let Some((data, p)) = singular_maxface(a, b, t) else { return Ok(()) };
        let tol = Tolerances::default();
        let report = classify_point(&p, &tol).unwrap();
        if report.singularity == SingularityType::Unclassified {
            let banded = report.conditions.values().any(|v| {
                let x = v.abs();
                x >= tol.zero && x <= tol.zero * tol.guard_factor
            });
            prop_assert!(banded, "{report:?}");
        }
        // the CMC form of the criteria reduces to the holomorphic one
        let cmc = match &data {
            SurfaceData::Holomorphic { .. } => PointData::new(p.z, p.g, p.omega, Pipeline::Cmc { h: 2.0 }).unwrap(),
            _ => unreachable!(),
        };
        let crit = Criteria::at(&cmc, &tol).unwrap();
        prop_assert!(crit.zbar_terms() < 1e-12);
        let base = Criteria::at(&p, &tol).unwrap();
        prop_assert!((crit.cmc_swallowtail() - base.s1.re).abs() < 1e-12);
        prop_assert!((crit.cmc_cross_cap() - base.s1.im).abs() < 1e-12);
        prop_assert!((crit.cmc_butterfly() - base.s2.im).abs() < 1e-12);
    }

    #[test]
    fn formula_weight_vanishes_for_holomorphic_g(k in 0..EXPRESSIONS.len(), z in sample_point()) {
        let e = parse(EXPRESSIONS[k]).unwrap();
        prop_assume!(validate_holomorphic(&e).is_ok());
        let g = eval_jet(&e, z, 3).unwrap();
        let tol = Tolerances::default();
        prop_assume!((g.value().norm_sqr() - 1.0).abs() > 1e-3);
        prop_assert_eq!(omega_from_g(&g, z, &tol).unwrap(), Complex::new(0.0, 0.0));
    }

    #[test]
    fn closedness_tracks_harmonicity(g in jet(3), z in complex(1.0), offset in prop::option::of(complex(1.0))) {
        let g0 = g.value();
        let m = 1.0 - g0.norm_sqr();
        prop_assume!(m.abs() > 0.05 && g.partial(1, 0).norm() > 1e-2);
        let harmonic = -2.0 * g0.conj() * g.partial(1, 0) * g.partial(0, 1) / m;
        let shift = offset.filter(|d| d.norm() > 1e-2).unwrap_or_default();
        let g = Jet::from_partials(3, |a, b| if (a, b) == (1, 1) { harmonic + shift } else { g.partial(a, b) });
        let tol = Tolerances::default();
        let omega = omega_formula(&g, z, tol.on_set).unwrap();
        prop_assume!(omega.value().norm() > 1e-3);
        let report = harmonicity_from_jets(&g, omega.value(), &tol);
        prop_assert!((report.residual - shift).norm() < 1e-9 * (1.0 + harmonic.norm()));
        let p = PointData::new(z, g, omega, Pipeline::Cmc { h: 1.5 }).unwrap();
        let closed = closedness_from_point(&p).magnitude();
        if shift == Complex::default() {
            prop_assert!(closed < 1e-8, "{closed}");
        } else {
            prop_assert!(closed > 1e-8, "{closed}");
        }
    }

    #[test]
    fn cmc_xi_f_at_synthetic_singular_jets(
        theta in 0.0..TAU, gz in complex(2.0), rest in jet(3), w in jet(2), h in prop_oneof![-3.0..-0.2, 0.2..3.0],
    ) {
        prop_assume!(gz.norm() > 1e-2 && w.value().norm() > 1e-2);
        let g = Jet::from_partials(3, |a, b| match (a, b) {
            (0, 0) => Complex::from_polar(1.0, theta),
            (1, 0) => gz,
            (0, 1) | (1, 1) => Complex::default(),
            _ => rest.partial(a, b),
        });
        let p = PointData::new(c(0.0, 0.0), g, w, Pipeline::Cmc { h }).unwrap();
        let phi = p.phi().unwrap();
        let zeta = Complex::i() * (gz / g.value()).conj();
        let xi_f = p.f_z().map(|v| 2.0 * (zeta * v).re);
        let gv = g.value();
        let want = Vec3::new(-1.0, gv.re, gv.im) * (4.0 * w.value().norm_sqr() / h * phi.im);
        prop_assert!((xi_f - want).norm() < 1e-10 * (1.0 + want.norm()), "{xi_f} {want}");
    }

    #[test]
    fn cmc_gaussian_curvature_sign(g in jet(3), w in jet(2), h in 0.2..3.0f64) {
        let (gz, gzb) = (g.partial(1, 0).norm_sqr(), g.partial(0, 1).norm_sqr());
        prop_assume!((gz - gzb).abs() > 1e-6 && w.value().norm() > 1e-2);
        let p = PointData::new(c(0.0, 0.0), g, w, Pipeline::Cmc { h }).unwrap();
        let k = k_e_cmc(&p, h).unwrap();
        prop_assert_eq!(k.signum(), (gzb - gz).signum());
    }

    #[test]
    fn fold_test_separates_even_and_odd(a in 0.1..2.0f64, b in 0.1..2.0f64, s in -1.0..1.0f64) {
        let p = [0.0, 0.0];
        let even = fold_symmetry_test(|[u, v]| Vec3::new(u, v * v, b * v.powi(4) + s * u * v * v), p, 0.5, 1e-9).unwrap();
        prop_assert!(even.is_symmetric(), "{even:?}");
        let odd = fold_symmetry_test(|[u, v]| Vec3::new(u, v * v, a * v.powi(3)), p, 0.5, 1e-9).unwrap();
        prop_assert!(!odd.is_symmetric());
        let again = fold_symmetry_test(|[u, v]| Vec3::new(u, v * v, a * v.powi(3)), p, 0.5, 1e-9).unwrap();
        prop_assert_eq!(odd, again);
    }
}
