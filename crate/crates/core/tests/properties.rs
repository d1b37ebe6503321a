mod common;

use common::{norm, request};
use normweingarten::io::{profile_csv_string, read_profile_csv};
use normweingarten::norm_geometry::{birkhoff_normal, phi, slope_weight, NormParameter};
use normweingarten::profile_solver::{classify, slope_from_weight, solve, SolveOptions};
use normweingarten::singular_quadrature::{EndpointKind, ProfileSample};
use normweingarten::surface_assembler::mesh::revolve;
use normweingarten::verifier::residual_scan;
use normweingarten::BranchSign;
use proptest::prelude::*;

fn m_strategy() -> impl Strategy<Value = u32> {
    1u32..=4
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_absolutely_homogeneous(m in m_strategy(), x in prop::array::uniform3(-5.0f64..5.0), t in -3.0f64..3.0) {
        let p = norm(m);
        let scaled = [t * x[0], t * x[1], t * x[2]];
        let lhs = normweingarten::norm_geometry::norm(p, scaled);
        let rhs = t.abs() * normweingarten::norm_geometry::norm(p, x);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn birkhoff_normal_is_unit(m in m_strategy(), da in -10.0f64..10.0, db in -10.0f64..10.0, v in 0.0f64..6.3) {
        prop_assume!(da.abs() + db.abs() > 1e-6);
        let frame = birkhoff_normal(norm(m), da, db, v).unwrap();
        prop_assert!((phi(norm(m), frame.eta) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn slope_and_weight_are_inverse(m in m_strategy(), w in -0.999f64..0.999) {
        let p = norm(m);
        let du = slope_from_weight(p, w);
        prop_assert_eq!(du.signum(), w.signum());
        // The weight is recovered up to sign.
        prop_assert!((slope_weight(p, du) - w.abs()).abs() < 1e-12);
    }

    #[test]
    fn admissible_intervals_have_unit_bounded_weight(
        m in 2u32..=3,
        lambda in -4.0f64..4.0,
        mu in prop_oneof![Just(-1.0), Just(1.0)],
        c in -2.0f64..2.0,
    ) {
        prop_assume!(lambda.abs() > 1e-3 && (lambda + 1.0).abs() > 1e-3);
        let req = request(m, lambda, mu, c);
        let Ok(cls) = classify(&req) else { return Ok(()) };
        for piece in &cls.pieces {
            let d = piece.domain;
            let upper = if d.upper.is_finite() { d.upper } else { d.lower.max(1.0) * 10.0 };
            for k in 1..16 {
                let a = d.lower + (upper - d.lower) * k as f64 / 16.0;
                let w = cls.law.weight(a);
                prop_assert!(w.abs() < 1.0 + 1e-9, "{:?} at {a}: w = {w}", piece.tag);
            }
            for (end, kind) in [(d.lower, d.lower_kind), (d.upper, d.upper_kind)] {
                if kind == EndpointKind::SimpleRoot {
                    prop_assert!((cls.law.weight(end).abs() - 1.0).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn csv_round_trip(rows in prop::collection::vec((1e-6f64..1e3, -1e3f64..1e3, -1e6f64..1e6), 1..40)) {
        let mut alpha = 0.0;
        let samples: Vec<ProfileSample> = rows
            .iter()
            .map(|&(step, u, du)| {
                alpha += step;
                ProfileSample { alpha, u, du }
            })
            .collect();
        let back = read_profile_csv(profile_csv_string(&samples).as_bytes()).unwrap();
        prop_assert_eq!(back.len(), samples.len());
        for (a, b) in samples.iter().zip(&back) {
            prop_assert!((a.alpha - b.alpha).abs() <= 1e-13 * a.alpha.abs());
            prop_assert!((a.u - b.u).abs() <= 1e-13 * a.u.abs());
            prop_assert!((a.du - b.du).abs() <= 1e-13 * a.du.abs());
        }
    }

    #[test]
    fn revolved_disks_and_loops_have_fixed_euler_characteristic(n in 3usize..30, segments in 3usize..40) {
        let disk: Vec<(f64, f64)> = (0..n).map(|i| (i as f64, (i * i) as f64 * 0.1)).collect();
        prop_assert_eq!(revolve(&disk, false, segments).euler_characteristic(), 1);
        let ring: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                (3.0 + t.cos(), t.sin())
            })
            .collect();
        let torus = revolve(&ring, true, segments);
        prop_assert!(torus.is_closed());
        prop_assert_eq!(torus.euler_characteristic(), 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn homogeneous_branches_satisfy_the_relation(m in 2u32..=3, lambda in -3.0f64..3.0, c2 in 0.5f64..2.0) {
        prop_assume!(lambda.abs() > 0.05);
        let req = request(m, lambda, 0.0, c2);
        for b in solve(&req, &SolveOptions::with_samples(96)).unwrap() {
            let r = residual_scan(&b, 1e-3).unwrap();
            prop_assert!(r.max < 1e-6, "{:?} λ={lambda}: {}", b.tag, r.max);
        }
    }

    #[test]
    fn signs_mirror_each_other(m in 2u32..=3, lambda in 0.2f64..2.0, c in 0.05f64..0.4) {
        let p: NormParameter = norm(m);
        let plus = request(m, lambda, -1.0, c);
        let minus = plus.with_sign(BranchSign::Minus);
        let (Ok(a), Ok(b)) = (solve(&plus, &SolveOptions::with_samples(32)), solve(&minus, &SolveOptions::with_samples(32))) else {
            return Ok(());
        };
        prop_assert_eq!(p.m(), m);
        for (x, y) in a.iter().zip(&b) {
            for (s, t) in x.samples.iter().zip(&y.samples) {
                prop_assert_eq!(s.alpha, t.alpha);
                prop_assert!(s.du == -t.du || (s.du.is_infinite() && t.du.is_infinite()));
                prop_assert!((s.u + t.u).abs() <= 1e-12 * (1.0 + s.u.abs()));
            }
        }
    }
}
