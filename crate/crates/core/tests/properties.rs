use proptest::prelude::*;

use nilscroll::construct::{example_gallery, Example};
use nilscroll::grid::Grid;
use nilscroll::io::ScalarSpec;
use nilscroll::minkowski::{boost, is_special_lorentz, rotation};
use nilscroll::nil3_core::{group_inv, group_mul, left_translate_velocity_fd, lie_exp, lie_log, metric};
use nilscroll::{FrameVector, Nil3Point, ParaComplex};

fn pc() -> impl Strategy<Value = ParaComplex> {
    (-4.0..4.0f64, -4.0..4.0f64).prop_map(|(re, im)| ParaComplex::new(re, im))
}

fn point() -> impl Strategy<Value = Nil3Point> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b, c)| Nil3Point::new(a, b, c))
}

fn vector() -> impl Strategy<Value = FrameVector> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b, c)| FrameVector::new(a, b, c))
}

proptest! {
    #[test]
    fn para_complex_ring_laws(a in pc(), b in pc(), c in pc()) {
        prop_assert!(((a * b) * c).max_abs_diff(a * (b * c)) < 1e-11);
        prop_assert_eq!(a * b, b * a);
        prop_assert!((a * (b + c)).max_abs_diff(a * b + a * c) < 1e-12);
        prop_assert!((a * b).conj().max_abs_diff(a.conj() * b.conj()) < 1e-12);
        prop_assert!(((a * b).norm_sq() - a.norm_sq() * b.norm_sq()).abs() < 1e-9);
    }

    #[test]
    fn null_parts_multiply_componentwise(a in pc(), b in pc()) {
        let ((a1, a2), (b1, b2)) = (a.null_parts(), b.null_parts());
        let (p1, p2) = (a * b).null_parts();
        prop_assert!((p1 - a1 * b1).abs() < 1e-12 && (p2 - a2 * b2).abs() < 1e-12);
        prop_assert_eq!(ParaComplex::from_null(a1, a2).max_abs_diff(a) < 1e-15, true);
    }

    #[test]
    fn sqrt_exists_exactly_on_the_closed_cone(a in -5.0..5.0f64, b in -5.0..5.0f64) {
        let z = ParaComplex::from_null(a, b);
        match z.sqrt() {
            Ok(r) => {
                prop_assert!(a >= 0.0 && b >= 0.0);
                prop_assert!((r * r).max_abs_diff(z) < 1e-12);
                let (r1, r2) = r.null_parts();
                prop_assert!(r1 >= 0.0 && r2 >= 0.0);
            }
            Err(_) => prop_assert!(a < 0.0 || b < 0.0),
        }
    }

    #[test]
    fn inverse_exists_off_the_light_cone(z in pc()) {
        match z.inverse() {
            Ok(w) => prop_assert!((z * w).max_abs_diff(ParaComplex::real(1.0)) < 1e-6 * (1.0 + 1.0 / z.norm_sq().abs())),
            Err(_) => prop_assert_eq!(z.norm_sq(), 0.0),
        }
    }

    #[test]
    fn exp_is_a_homomorphism(a in pc(), b in pc()) {
        let lhs = (a + b).exp();
        let scale = lhs.re.abs().max(lhs.im.abs()).max(1.0);
        prop_assert!(lhs.max_abs_diff(a.exp() * b.exp()) / scale < 1e-12);
    }

    #[test]
    fn group_laws(p in point(), q in point(), r in point()) {
        prop_assert!(group_mul(group_mul(p, q), r).max_abs_diff(group_mul(p, group_mul(q, r))) < 1e-12);
        prop_assert!(group_mul(p, group_inv(p)).max_abs_diff(Nil3Point::IDENTITY) < 1e-15);
        prop_assert!(group_mul(group_inv(p), p).max_abs_diff(Nil3Point::IDENTITY) < 1e-15);
        prop_assert_eq!(group_mul(p, Nil3Point::IDENTITY), p);
        prop_assert!(lie_exp(lie_log(p)).max_abs_diff(p) < 1e-15);
    }

    #[test]
    fn one_parameter_subgroups_have_constant_frame_velocity(p in point(), v in vector(), s in -1.0..1.0f64) {
        let curve = |x: f64| group_mul(p, lie_exp(v * x));
        let w = left_translate_velocity_fd(curve, s, 1e-5);
        prop_assert!(w.max_abs_diff(v) < 1e-8);
        prop_assert!((metric(w, w) - metric(v, v)).abs() < 1e-7);
    }

    #[test]
    fn boosts_and_rotations_stay_in_so21(a in -2.0..2.0f64, b in -2.0..2.0f64, th in -3.2..3.2f64) {
        prop_assert!(is_special_lorentz(&(boost(1, a) * rotation(th) * boost(2, b))));
    }

    #[test]
    fn circle_scroll_is_minimal_everywhere(s in -1.0..1.0f64, t in -1.0..1.0f64) {
        let f = example_gallery(Example::Circle).scroll;
        let d = f.fundamental_data(s, t).unwrap();
        prop_assume!(d.g12.abs() > 1e-6);
        prop_assert!(d.mean_curvature.abs() < 1e-8);
    }

    #[test]
    fn scalar_specs_round_trip(a in -10.0..10.0f64, w in 0.1..5.0f64, kind in 0usize..5) {
        let spec = match kind {
            0 => ScalarSpec::Const(a),
            1 => ScalarSpec::Linear(a, w),
            2 => ScalarSpec::Reciprocal(w),
            3 => ScalarSpec::Sin(a, w),
            _ => ScalarSpec::Tanh(a, w),
        };
        let back: ScalarSpec = spec.to_string().parse().unwrap();
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn grids_parse_and_span(s0 in -5.0..0.0f64, s1 in 0.1..5.0f64, ns in 2usize..50, nt in 2usize..50) {
        let g: Grid = format!("{s0}:{s1}:{ns},0:1:{nt}").parse().unwrap();
        prop_assert_eq!(g, Grid::new((s0, s1), ns, (0.0, 1.0), nt));
        prop_assert_eq!(g.points().len(), ns * nt);
        prop_assert_eq!(g.s_at(0), s0);
        prop_assert!((g.s_at(ns - 1) - s1).abs() < 1e-12);
    }
}
