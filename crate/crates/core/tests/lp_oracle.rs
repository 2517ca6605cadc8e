//! The simplex against brute-force vertex enumeration on small bounded LPs.

mod common;

use common::{bounded_lp, vertex_optimum};
use fuzzydea::lp::{solve, LpStatus};
use proptest::prelude::*;

const TOL: f64 = 1e-7;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn simplex_matches_vertex_enumeration(lp in bounded_lp()) {
        let sol = solve(&lp).unwrap();
        match vertex_optimum(&lp) {
            Some(best) => {
                prop_assert_eq!(sol.status, LpStatus::Optimal);
                prop_assert!((sol.objective_value - best).abs() <= TOL, "simplex {} vs oracle {}", sol.objective_value, best);
                prop_assert!(lp.max_violation(&sol.primal) <= TOL);
            }
            None => prop_assert_eq!(sol.status, LpStatus::Infeasible),
        }
    }

    #[test]
    fn row_scaling_leaves_optimum_unchanged(
        lp in bounded_lp(),
        factors in prop::collection::vec(0.01f64..100.0, 5),
    ) {
        let mut scaled = lp.clone();
        for (c, k) in scaled.constraints.iter_mut().zip(&factors) {
            c.coefficients.iter_mut().for_each(|a| *a *= k);
            c.rhs *= k;
        }
        let (a, b) = (solve(&lp).unwrap(), solve(&scaled).unwrap());
        prop_assert_eq!(a.status, b.status);
        if a.status == LpStatus::Optimal {
            prop_assert!((a.objective_value - b.objective_value).abs() <= TOL);
        }
    }

    #[test]
    fn shifted_lower_bounds_match_oracle(lp in bounded_lp(), shift in prop::collection::vec(0i32..=2, 6)) {
        let mut lp = lp;
        for (k, s) in shift.iter().take(lp.num_vars).enumerate() {
            lp.set_lower_bound(k, f64::from(*s));
        }
        let sol = solve(&lp).unwrap();
        match vertex_optimum(&lp) {
            Some(best) => {
                prop_assert_eq!(sol.status, LpStatus::Optimal);
                prop_assert!((sol.objective_value - best).abs() <= TOL);
                prop_assert!(sol.primal.iter().zip(&lp.lower_bounds).all(|(x, l)| *x >= l - TOL));
            }
            None => prop_assert_eq!(sol.status, LpStatus::Infeasible),
        }
    }
}
