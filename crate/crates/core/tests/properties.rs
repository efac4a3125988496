use elopt::analysis::{check_el, check_feasible, theorem1_bound};
use elopt::construct::constructions_for;
use elopt::{Curve2D, ElExpr, Hyperplane, OrthantFunction, Point, SSurface, Side};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = ElExpr> {
    (0.1f64..5.0, 0.1f64..5.0).prop_map(|(a, b)| ElExpr::linear(vec![a, b]).unwrap())
}

/// Random expression trees built from the closure operations.
fn tree() -> impl Strategy<Value = ElExpr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| ElExpr::sum(l, r).unwrap()),
            (0.0f64..3.0, inner.clone()).prop_map(|(k, e)| ElExpr::scale(k, e).unwrap()),
            (0.0f64..3.0, inner.clone()).prop_map(|(m, e)| ElExpr::truncate(m, e).unwrap()),
            (0.1f64..3.0, 0.1f64..3.0, inner)
                .prop_map(|(a, b, e)| ElExpr::clamp(Point::new(vec![a, b]).unwrap(), e).unwrap()),
        ]
    })
}

/// Curves of every family with randomized parameters.
fn curve() -> impl Strategy<Value = Curve2D> {
    let ab = (0.3f64..3.0, 0.3f64..3.0);
    prop_oneof![
        // |c2| a^2 < b keeps the quadratic strictly decreasing on [0, a]
        (ab.clone(), 0.05f64..0.95, any::<bool>()).prop_map(|((a, b), f, convex)| {
            let c2 = f * b / (a * a);
            Curve2D::quadratic(a, b, if convex { c2 } else { -c2 }).unwrap()
        }),
        (ab, 0.05f64..3.0).prop_map(|((a, b), s)| Curve2D::hyperbola(a, b, s).unwrap()),
    ]
}

fn plane() -> impl Strategy<Value = Hyperplane> {
    (prop::collection::vec(0.1f64..10.0, 2..=4), 0.5f64..5.0).prop_map(|(c, m)| Hyperplane::new(c, m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trees_are_el(e in tree(), seed in any::<u64>()) {
        let bbox = Point::new(vec![3.0, 3.0]).unwrap();
        let r = check_el(&e, &bbox, 512, seed).unwrap();
        let failed: Vec<_> = r.failures().map(|v| (v.property, v.worst_violation)).collect();
        prop_assert!(r.passed, "{failed:?}");
    }

    #[test]
    fn left_partial_dominates_right(e in tree(), x in 0.0f64..3.0, y in 0.0f64..3.0) {
        let g = e.one_sided_partials(&Point::new(vec![x, y]).unwrap()).unwrap();
        for d in 0..2 {
            prop_assert!(g.right[d] >= 0.0);
            if let Some(l) = g.left[d] {
                prop_assert!(l >= g.right[d] - 1e-12);
            }
        }
    }

    #[test]
    fn serde_round_trip_is_bit_identical(e in tree(), pts in prop::collection::vec((0.0f64..4.0, 0.0f64..4.0), 100)) {
        let back: ElExpr = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        for (x, y) in pts {
            prop_assert_eq!(back.value(&[x, y]).to_bits(), e.value(&[x, y]).to_bits());
        }
    }

    #[test]
    fn beta_inverts_alpha(c in curve(), f in 0.0f64..=1.0) {
        let x = f * c.a();
        let y = c.alpha(x);
        prop_assert!((c.beta(y).unwrap() - x).abs() <= 1e-9 * c.a().max(1.0));
        prop_assert!((c.beta_bisect(y).unwrap() - x).abs() <= 1e-9 * c.a().max(1.0));
    }

    #[test]
    fn curve_constructions_are_tight(c in curve()) {
        let s = SSurface::Curve(c);
        let bound = theorem1_bound(&s).unwrap().value;
        let built = constructions_for(&s).unwrap();
        prop_assert!(!built.is_empty());
        for r in built {
            prop_assert!((r.expr.cost() - bound).abs() <= 1e-9 * bound.max(1.0), "{:?}: {} vs {bound}", r.kind, r.expr.cost());
        }
    }

    #[test]
    fn plane_constructions_are_tight(h in plane()) {
        let s = SSurface::Hyperplane(h.clone());
        let r = &constructions_for(&s).unwrap()[0];
        prop_assert!((r.expr.cost() - h.c_max() / h.c_min()).abs() <= 1e-9 * r.expr.cost());
        let feas = check_feasible(&r.expr, &s, 200, 0).unwrap();
        prop_assert!((feas.min_jump - 1.0).abs() <= 1e-9);
    }

    /// Adding any EL function keeps a feasible function feasible, and no
    /// feasible function beats the normal-ratio bound.
    #[test]
    fn feasible_functions_respect_the_bound(c in curve(), extra in tree(), seed in any::<u64>()) {
        let s = SSurface::Curve(c);
        let bound = theorem1_bound(&s).unwrap().value;
        for r in constructions_for(&s).unwrap() {
            let f = ElExpr::sum(r.expr, extra.clone()).unwrap();
            let feas = check_feasible(&f, &s, 200, seed).unwrap();
            prop_assert!(feas.feasible, "min jump {}", feas.min_jump);
            prop_assert!(f.cost() >= bound - 1e-6);
        }
    }

    #[test]
    fn partials_of_scaled_tree_scale(e in tree(), k in 0.0f64..4.0, x in 0.01f64..3.0, y in 0.01f64..3.0) {
        let s = ElExpr::scale(k, e.clone()).unwrap();
        for d in 0..2 {
            for side in [Side::Left, Side::Right] {
                let a = s.partial(&[x, y], d, side);
                let b = k * e.partial(&[x, y], d, side);
                prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
    }
}
