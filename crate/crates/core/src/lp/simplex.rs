//! Revised simplex on the dual of the grid LP.
//!
//! The primal is `min c'z` subject to `A z >= b`, `z >= 0` (node `(0, 0)`
//! is fixed at 0 and dropped). Its dual `max b'y` subject to `A'y <= c`,
//! `y >= 0` starts from the all-slack basis because `c >= 0`. The primal
//! solution is minus the simplex multipliers of the final basis.
//!
//! Pricing is Dantzig's rule (most negative reduced cost). After a run of
//! degenerate pivots it switches to Bland's rule (lowest index on both the
//! entering and the leaving choice) until the objective moves again, so any
//! cycle would have to run under Bland's rule, which cannot cycle. The dense
//! basis inverse is rebuilt from scratch at a fixed pivot interval to keep
//! round-off from accumulating.
//!
//! `c = e_t` makes the dual massively degenerate, so a first phase runs on a
//! fixed small perturbation of `c`; the second phase restores `c` and
//! continues from the first phase's basis, usually with no further pivots.

use super::{Backend, GridLp, LpSolution, LpStatus};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_PIVOTS: usize = 200_000;

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-10;
const RATIO_TIE: f64 = 1e-12;
const PIVOT_REL: f64 = 1e-7;
const HARRIS_TOL: f64 = 1e-11;
/// Consecutive degenerate pivots before pricing switches to Bland's rule.
const STALL_LIMIT: usize = 64;
const REFACTOR_EVERY: usize = 64;
/// Scale of the right-hand-side perturbation of the first phase.
const PERTURB: f64 = 1e-7;

struct Dual {
    /// Rows of the dual system (primal variables except node 0).
    nr: usize,
    /// Structural columns (primal inequality rows), sparse.
    cols: Vec<Vec<(usize, f64)>>,
    /// Minimization cost of each structural column, `-b`.
    cost: Vec<f64>,
}

impl Dual {
    fn n_cols(&self) -> usize {
        self.cols.len() + self.nr
    }

    /// Calls `g(row, value)` on the entries of column `j`; slacks follow
    /// the structural columns.
    fn for_col(&self, j: usize, mut g: impl FnMut(usize, f64)) {
        if j < self.cols.len() {
            for &(i, v) in &self.cols[j] {
                g(i, v);
            }
        } else {
            g(j - self.cols.len(), 1.0);
        }
    }

    fn cost(&self, j: usize) -> f64 {
        self.cost.get(j).copied().unwrap_or(0.0)
    }
}

/// Dense inverse of the basis matrix by Gauss-Jordan with partial pivoting.
fn invert(dual: &Dual, basis: &[usize]) -> Result<Vec<f64>> {
    let n = dual.nr;
    let mut a = vec![0.0; n * n];
    for (k, &j) in basis.iter().enumerate() {
        dual.for_col(j, |i, v| a[i * n + k] = v);
    }
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for c in 0..n {
        let p = (c..n)
            .max_by(|&p, &q| a[p * n + c].abs().total_cmp(&a[q * n + c].abs()).then(q.cmp(&p)))
            .unwrap();
        let piv = a[p * n + c];
        if piv.abs() < 1e-12 {
            return Err(Error::Solver("singular basis".into()));
        }
        if p != c {
            for j in 0..n {
                a.swap(p * n + j, c * n + j);
                inv.swap(p * n + j, c * n + j);
            }
        }
        for j in 0..n {
            a[c * n + j] /= piv;
            inv[c * n + j] /= piv;
        }
        for i in 0..n {
            let f = a[i * n + c];
            if i != c && f != 0.0 {
                for j in 0..n {
                    a[i * n + j] -= f * a[c * n + j];
                    inv[i * n + j] -= f * inv[c * n + j];
                }
            }
        }
    }
    Ok(inv)
}

struct State<'a> {
    dual: &'a Dual,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Vec<f64>,
    rhs: Vec<f64>,
    /// Basic solution `B^-1 rhs`.
    x: Vec<f64>,
    pi: Vec<f64>,
    u: Vec<f64>,
    pivots: usize,
    since_refactor: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl State<'_> {
    fn refactor(&mut self) -> Result<()> {
        let nr = self.dual.nr;
        self.binv = invert(self.dual, &self.basis)?;
        for r in 0..nr {
            self.x[r] = (0..nr).map(|i| self.binv[r * nr + i] * self.rhs[i]).sum();
        }
        self.since_refactor = 0;
        Ok(())
    }

    /// `pi = w_B B^-1`.
    fn multipliers(&mut self) {
        let nr = self.dual.nr;
        self.pi.iter_mut().for_each(|p| *p = 0.0);
        for (k, &j) in self.basis.iter().enumerate() {
            let w = self.dual.cost(j);
            if w != 0.0 {
                for (p, b) in self.pi.iter_mut().zip(&self.binv[k * nr..(k + 1) * nr]) {
                    *p += w * b;
                }
            }
        }
    }

    fn run(&mut self, max_pivots: usize) -> Result<Outcome> {
        let dual = self.dual;
        let nr = dual.nr;
        let mut stall = 0;
        loop {
            self.multipliers();
            let bland = stall >= STALL_LIMIT;
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..dual.n_cols() {
                if self.in_basis[j] {
                    continue;
                }
                let mut d = dual.cost(j);
                dual.for_col(j, |i, v| d -= self.pi[i] * v);
                if d < -COST_TOL {
                    if bland {
                        entering = Some((j, d));
                        break;
                    }
                    if entering.is_none_or(|(_, best)| d < best) {
                        entering = Some((j, d));
                    }
                }
            }
            let Some((k, _)) = entering else {
                return Ok(Outcome::Optimal);
            };

            // u = B^-1 a_k
            let u = &mut self.u;
            u.iter_mut().for_each(|v| *v = 0.0);
            dual.for_col(k, |i, v| {
                for (r, ur) in u.iter_mut().enumerate() {
                    *ur += self.binv[r * nr + i] * v;
                }
            });
            // Harris two-pass ratio test: bound the step with a small primal
            // tolerance, then take the largest pivot among rows within it
            // (lowest basis index under Bland's rule).
            let umax = u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let tol = PIVOT_TOL.max(PIVOT_REL * umax);
            let xr = |r: usize| self.x[r].max(0.0);
            let mut bound = f64::INFINITY;
            for (r, &ur) in u.iter().enumerate() {
                if ur > tol {
                    bound = bound.min((xr(r) + HARRIS_TOL) / ur);
                }
            }
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..nr {
                if u[r] > tol && xr(r) / u[r] <= bound {
                    let better = match leave {
                        None => true,
                        Some((l, _)) if bland => self.basis[r] < self.basis[l],
                        Some((l, _)) => u[r] > u[l],
                    };
                    if better {
                        leave = Some((r, xr(r) / u[r]));
                    }
                }
            }
            let Some((p, step)) = leave else {
                return Ok(Outcome::Unbounded);
            };
            if self.pivots == max_pivots {
                return Err(Error::Solver(format!("simplex iteration cap of {max_pivots} pivots exceeded")));
            }
            self.pivots += 1;
            stall = if step > RATIO_TIE { 0 } else { stall + 1 };

            self.in_basis[self.basis[p]] = false;
            self.in_basis[k] = true;
            self.basis[p] = k;
            self.since_refactor += 1;
            if self.since_refactor == REFACTOR_EVERY {
                self.refactor()?;
                continue;
            }
            let up = u[p];
            for v in &mut self.binv[p * nr..(p + 1) * nr] {
                *v /= up;
            }
            self.x[p] /= up;
            let xp = self.x[p];
            let (before, rest) = self.binv.split_at_mut(p * nr);
            let (prow, after) = rest.split_at_mut(nr);
            let others = before
                .chunks_exact_mut(nr)
                .enumerate()
                .chain(after.chunks_exact_mut(nr).enumerate().map(|(r, row)| (r + p + 1, row)));
            for (r, row) in others {
                let f = u[r];
                if f != 0.0 {
                    for (a, b) in row.iter_mut().zip(prow.iter()) {
                        *a -= f * b;
                    }
                    self.x[r] -= f * xp;
                }
            }
        }
    }
}

pub(super) fn solve(lp: &GridLp, max_pivots: usize) -> Result<LpSolution> {
    let n = lp.n_vars();
    let t = lp.t_var();
    let nr = n - 1;
    let mut cols = Vec::new();
    let mut cost = Vec::new();
    for row in lp.rows.iter().filter(|r| !r.equality) {
        cols.push(row.terms.iter().filter(|e| e.0 != 0).map(|&(v, a)| (v - 1, a)).collect());
        cost.push(-row.rhs);
    }
    let dual = Dual { nr, cols, cost };
    let ny = dual.cols.len();

    let mut exact = vec![0.0; nr];
    exact[t - 1] = 1.0;
    // fixed, distinct perturbations break the degeneracy of `c = e_t`
    let perturbed: Vec<f64> = (0..nr)
        .map(|i| exact[i] + PERTURB * (1.0 + ((i * 7919) % nr) as f64 / nr as f64))
        .collect();
    let basis: Vec<usize> = (ny..ny + nr).collect();
    let mut in_basis = vec![false; dual.n_cols()];
    for &j in &basis {
        in_basis[j] = true;
    }
    let mut st = State {
        dual: &dual,
        basis,
        in_basis,
        binv: Vec::new(),
        rhs: perturbed,
        x: vec![0.0; nr],
        pi: vec![0.0; nr],
        u: vec![0.0; nr],
        pivots: 0,
        since_refactor: 0,
    };
    st.refactor()?;
    let mut outcome = st.run(max_pivots)?;
    if let Outcome::Optimal = outcome {
        st.rhs = exact;
        st.refactor()?;
        outcome = st.run(max_pivots)?;
    }
    if let Outcome::Unbounded = outcome {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            value: f64::INFINITY,
            assignment: Vec::new(),
            backend: Backend::Simplex,
            iterations: st.pivots,
            basis: None,
        });
    }

    // node 0 is pinned by the pointed row and was dropped from the dual
    let z: Vec<f64> = std::iter::once(0.0).chain(st.pi.iter().take(n - 1).map(|p| (-p).max(0.0))).collect();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        value: z[t],
        assignment: z[..t].to_vec(),
        backend: Backend::Simplex,
        iterations: st.pivots,
        basis: Some(st.basis),
    })
}
