//! Interior-point backend (clarabel) for grids too large for a dense tableau.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT};

use super::{Backend, GridLp, LpSolution, LpStatus};
use crate::error::{Error, Result};

pub(super) fn solve(lp: &GridLp) -> Result<LpSolution> {
    let n = lp.n_vars();
    // clarabel form: A z + s = b with s in a cone. Equality rows go first
    // (zero cone), `row >= rhs` becomes `-row + s = -rhs` (non-negative cone).
    let mut order: Vec<usize> = (0..lp.rows.len()).filter(|&r| lp.rows[r].equality).collect();
    let n_eq = order.len();
    order.extend((0..lp.rows.len()).filter(|&r| !lp.rows[r].equality));

    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut b = Vec::with_capacity(order.len());
    for (k, &r) in order.iter().enumerate() {
        let row = &lp.rows[r];
        let sign = if row.equality { 1.0 } else { -1.0 };
        for &(v, a) in &row.terms {
            cols[v].push((k, sign * a));
        }
        b.push(sign * row.rhs);
    }
    let mut colptr = Vec::with_capacity(n + 1);
    let mut rowval = Vec::new();
    let mut nzval = Vec::new();
    colptr.push(0);
    for col in &mut cols {
        col.sort_by_key(|e| e.0);
        for &(r, a) in col.iter() {
            rowval.push(r);
            nzval.push(a);
        }
        colptr.push(rowval.len());
    }
    let a = CscMatrix::new(order.len(), n, colptr, rowval, nzval);
    let p = CscMatrix::zeros((n, n));
    let mut q = vec![0.0; n];
    q[lp.t_var()] = 1.0;
    let cones = [
        SupportedConeT::ZeroConeT(n_eq),
        SupportedConeT::NonnegativeConeT(order.len() - n_eq),
    ];
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .build()
        .map_err(|e| Error::Solver(e.to_string()))?;
    let mut solver =
        DefaultSolver::new(&p, &q, &a, &b, &cones, settings).map_err(|e| Error::Solver(format!("{e:?}")))?;
    solver.solve();

    let sol = &solver.solution;
    let status = match sol.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => LpStatus::Optimal,
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => LpStatus::Infeasible,
        SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => LpStatus::Unbounded,
        SolverStatus::MaxIterations | SolverStatus::MaxTime => {
            return Err(Error::Solver(format!("interior point stopped: {:?}", sol.status)))
        }
        other => return Err(Error::Solver(format!("interior point failed: {other:?}"))),
    };
    let t = lp.t_var();
    Ok(LpSolution {
        status,
        value: if status == LpStatus::Optimal { sol.x[t] } else { f64::INFINITY },
        assignment: sol.x[..t].to_vec(),
        backend: Backend::InteriorPoint,
        iterations: sol.iterations as usize,
        basis: None,
    })
}
