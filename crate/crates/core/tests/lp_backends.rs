use elopt::analysis::theorem1_bound;
use elopt::construct::constructions_for;
use elopt::lp::{build_lp, build_lp_in, restriction_witness, solve_lp_with, Backend, LpSolution, LpStatus, SolveOptions};
use elopt::{Curve2D, Hyperplane, SSurface};

fn surfaces() -> Vec<SSurface> {
    vec![
        SSurface::Hyperplane(Hyperplane::new(vec![1.0, 2.0], 1.0).unwrap()),
        SSurface::Hyperplane(Hyperplane::new(vec![3.0, 0.5], 2.0).unwrap()),
        SSurface::Curve(Curve2D::quadratic(1.0, 1.0, 0.5).unwrap()),
        SSurface::Curve(Curve2D::quadratic(1.0, 1.0, -0.5).unwrap()),
        SSurface::Curve(Curve2D::quadratic(2.0, 0.7, 0.1).unwrap()),
        SSurface::Curve(Curve2D::hyperbola(2.0, 1.0, 0.4).unwrap()),
        SSurface::Curve(Curve2D::hyperbola(1.0, 1.5, 2.0).unwrap()),
    ]
}

fn solve(lp: &elopt::lp::GridLp, backend: Backend) -> LpSolution {
    let opts = SolveOptions {
        backend,
        ..Default::default()
    };
    let s = solve_lp_with(lp, &opts).unwrap();
    assert_eq!(s.status, LpStatus::Optimal);
    s
}

#[test]
fn backends_agree_on_anisotropic_boxes() {
    for s in surfaces() {
        let b = s.intercept_box();
        for (m, scale) in [(6, (1.0, 1.5)), (9, (1.7, 1.1)), (12, (1.3, 1.3))] {
            let lp = build_lp_in(&s, m, (scale.0 * b[0], scale.1 * b[1])).unwrap();
            let a = solve(&lp, Backend::Simplex);
            let i = solve(&lp, Backend::InteriorPoint);
            assert!((a.value - i.value).abs() <= 1e-6 * a.value.max(1.0), "{s:?} m={m}: {} vs {}", a.value, i.value);
        }
    }
}

#[test]
fn grid_values_never_exceed_the_bound() {
    for s in surfaces() {
        let bound = theorem1_bound(&s).unwrap().value;
        for m in [5, 8, 13, 20] {
            let lp = build_lp(&s, m).unwrap();
            let v = solve(&lp, Backend::Auto).value;
            assert!(v <= bound + 1e-6, "{s:?} m={m}: {v} > {bound}");
        }
    }
}

#[test]
fn constructions_restrict_to_feasible_points() {
    for s in surfaces() {
        for c in constructions_for(&s).unwrap() {
            for m in [7, 16, 30] {
                let lp = build_lp(&s, m).unwrap();
                let r = restriction_witness(&lp, &c.expr);
                assert!(r.max_violation <= 1e-9, "{s:?} {:?} m={m}: {r:?}", c.kind);
                assert!(r.objective <= c.expr.cost() + 1e-9);
            }
        }
    }
}

#[test]
fn simplex_solutions_are_reproducible() {
    for s in surfaces() {
        let lp = build_lp(&s, 10).unwrap();
        let a = solve(&lp, Backend::Simplex);
        let b = solve(&lp, Backend::Simplex);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.basis, b.basis);
        let mut z = a.assignment.clone();
        z.push(a.value);
        assert!(lp.max_violation(&z) <= 1e-9);
    }
}
