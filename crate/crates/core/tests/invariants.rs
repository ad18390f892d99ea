use pesinlab_core::cocycle::{finite_time_exponents, orbit_jacobians};
use pesinlab_core::livshitz::{periodic_sum, reconstruct_transfer, Observable, POTENTIALS};
use pesinlab_core::manifolds::hausdorff_distance;
use pesinlab_core::pesin::{classify_block, PesinParams};
use pesinlab_core::shadowing::{close_orbit, newton_shadow, PseudoOrbit};
use pesinlab_core::{MapSystem, Point};
use proptest::prelude::*;

fn torus_point() -> impl Strategy<Value = Point> {
    (0.0f64..1.0, 0.0f64..1.0).prop_map(|(x, y)| [x, y])
}

fn systems() -> Vec<MapSystem> {
    vec![
        MapSystem::cat(),
        MapSystem::perturbed_cat(0.05).unwrap(),
        MapSystem::standard(0.9).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inverse_undoes_forward(p in torus_point()) {
        for sys in systems() {
            let q = sys.inverse(sys.forward(p));
            prop_assert!(sys.distance(p, q) < 1e-10, "{} {p:?} -> {q:?}", sys.name());
        }
    }

    #[test]
    fn exponents_sum_to_mean_log_det(p in torus_point(), n in 10usize..200) {
        for sys in systems() {
            let spec = finite_time_exponents(&sys, p, n).unwrap();
            let log_det: f64 = orbit_jacobians(&sys, p, n)
                .unwrap()
                .iter()
                .map(|j| j.det().abs().ln())
                .sum::<f64>() / n as f64;
            prop_assert!((spec.bottom() + spec.top() - log_det).abs() < 1e-9);
            prop_assert!(spec.bottom() <= spec.top());
        }
    }

    #[test]
    fn true_orbit_is_its_own_shadow(p in torus_point(), lengths in prop::collection::vec(3usize..15, 1..5)) {
        let sys = MapSystem::perturbed_cat(0.05).unwrap();
        let mut segs = Vec::new();
        let mut x = p;
        for n in &lengths {
            segs.push((x, *n));
            x = sys.iterate(x, *n).unwrap();
        }
        let pseudo = PseudoOrbit::from_segments(&sys, segs, false, 1e-9).unwrap();
        let r = newton_shadow(&sys, &pseudo, 1e-10, 5).unwrap();
        prop_assert!(r.converged);
        prop_assert!(r.max_deviation() < 1e-9);
    }

    #[test]
    fn block_membership_is_nested(p in torus_point()) {
        let sys = MapSystem::perturbed_cat(0.05).unwrap();
        let params = PesinParams::new(3, 0.8, 8, 8).unwrap();
        let v = classify_block(&sys, p, &params).unwrap();
        for k in 1..8 {
            prop_assert!(!v.in_block(k) || v.in_block(k + 1));
        }
    }

    #[test]
    fn coboundary_sums_vanish_on_closed_orbits(p in torus_point(), n in 1usize..6) {
        let sys = MapSystem::perturbed_cat(0.05).unwrap();
        if let Ok(z) = close_orbit(&sys, p, n, 1e-12, 30) {
            if z.orbit_residual < 1e-11 {
                for g in POTENTIALS {
                    let s = periodic_sum(&sys, &Observable::coboundary(&sys, g), &z).unwrap();
                    prop_assert!(s.abs() < 1e-9 * n as f64, "{g:?} {s}");
                }
            }
        }
    }

    #[test]
    fn transfer_function_telescopes(p in torus_point()) {
        let sys = MapSystem::cat();
        for g in POTENTIALS {
            let table = reconstruct_transfer(&sys, &Observable::coboundary(&sys, g), p, 500).unwrap();
            for s in &table.samples {
                prop_assert!((s.psi - (g.eval(s.point) - g.eval(p))).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn hausdorff_is_symmetric(a in prop::collection::vec(torus_point(), 2..12), b in prop::collection::vec(torus_point(), 2..12)) {
        let d = hausdorff_distance(&a, &b);
        prop_assert!((d - hausdorff_distance(&b, &a)).abs() < 1e-15);
        prop_assert!(hausdorff_distance(&a, &a) < 1e-15);
    }
}

#[test]
fn periodic_point_counts_match_the_census_oracle() {
    let cat = MapSystem::cat();
    // |det(Aⁿ − I)| = tr(Aⁿ) − 2 with tr(Aⁿ) = L_{2n}, the Lucas numbers.
    let mut lucas = vec![2u128, 1];
    for i in 2..=24 {
        let next = lucas[i - 1] + lucas[i - 2];
        lucas.push(next);
    }
    for n in 1..=12 {
        assert_eq!(cat.periodic_point_count(n), Some(lucas[2 * n] - 2), "n={n}");
    }
    assert_eq!(MapSystem::henon(1.4, 0.3).unwrap().periodic_point_count(1), None);
}
