//! Grid LP lower bound on the optimum for planar surfaces.
//!
//! Variables are the values `f(i, j)` at the grid nodes `(i h_x, j h_y)`,
//! `0 <= i, j <= m`, plus the objective scalar `t`. Every row is a
//! restriction of an EL or feasibility condition to the grid, so the LP value
//! never exceeds the cost of an S-feasible EL function:
//!
//! * per-axis concavity puts the backward quotient on the cell left of a
//!   crossing above `f_d^-(c)` and the forward quotient on the cell right of
//!   it below `f_d^+(c)`; a jump of at least 1 then gives the crossing row;
//! * `f(h e_d) / h_d <= f_d^+(0)` by concavity, so `t` underestimates cost.

mod ipm;
mod simplex;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::el::OrthantFunction;
use crate::error::{Error, Result};
use crate::surface::SSurface;

pub use simplex::DEFAULT_MAX_PIVOTS;

/// Smallest supported grid.
pub const MIN_M: usize = 4;
/// Largest supported grid.
pub const MAX_M: usize = 96;
/// Crossing coordinates within this of a node count as on the node.
pub const CROSSING_TIE: f64 = 1e-12;
/// Largest `m` the automatic backend sends to the simplex.
pub const SIMPLEX_MAX_M: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Pointed,
    Monotone,
    Submodular,
    Concavity,
    Crossing,
    Objective,
}

/// `sum terms >= rhs`, or `= rhs` for the pointedness row.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub kind: RowKind,
    pub terms: Vec<(usize, f64)>,
    pub rhs: f64,
    pub equality: bool,
}

impl Row {
    fn ge(kind: RowKind, terms: Vec<(usize, f64)>, rhs: f64) -> Self {
        Row {
            kind,
            terms,
            rhs,
            equality: false,
        }
    }

    pub fn activity(&self, z: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, a)| a * z[v]).sum()
    }

    /// Amount by which `z` violates the row, 0 if satisfied.
    pub fn violation(&self, z: &[f64]) -> f64 {
        let act = self.activity(z);
        if self.equality {
            (act - self.rhs).abs()
        } else {
            (self.rhs - act).max(0.0)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridLp {
    pub m: usize,
    pub hx: f64,
    pub hy: f64,
    pub rows: Vec<Row>,
    pub warnings: Vec<String>,
}

impl GridLp {
    pub fn n_vars(&self) -> usize {
        (self.m + 1) * (self.m + 1) + 1
    }

    pub fn node(&self, i: usize, j: usize) -> usize {
        i * (self.m + 1) + j
    }

    pub fn t_var(&self) -> usize {
        self.n_vars() - 1
    }

    pub fn count(&self, kind: RowKind) -> usize {
        self.rows.iter().filter(|r| r.kind == kind).count()
    }

    /// Largest row violation of the full variable vector `z`.
    pub fn max_violation(&self, z: &[f64]) -> f64 {
        self.rows.iter().map(|r| r.violation(z)).fold(0.0, f64::max)
    }

    /// The problem in CPLEX LP format. Node `(i, j)` is `f_i_j`.
    pub fn to_lp_format(&self) -> String {
        let name = |v: usize| {
            if v == self.t_var() {
                "t".to_string()
            } else {
                format!("f_{}_{}", v / (self.m + 1), v % (self.m + 1))
            }
        };
        let mut out = String::new();
        writeln!(out, "\\ grid LP, m = {}, hx = {:e}, hy = {:e}", self.m, self.hx, self.hy).unwrap();
        out.push_str("Minimize\n obj: t\nSubject To\n");
        for (r, row) in self.rows.iter().enumerate() {
            write!(out, " r{r}:").unwrap();
            for &(v, a) in &row.terms {
                let sign = if a < 0.0 { '-' } else { '+' };
                write!(out, " {sign} {:?} {}", a.abs(), name(v)).unwrap();
            }
            let op = if row.equality { "=" } else { ">=" };
            writeln!(out, " {op} {:?}", row.rhs).unwrap();
        }
        // all variables default to [0, +inf)
        out.push_str("End\n");
        out
    }
}

/// Grid LP over the surface's intercept box.
pub fn build_lp(surface: &SSurface, m: usize) -> Result<GridLp> {
    let bx = surface.intercept_box();
    build_lp_in(surface, m, (bx.first().copied().unwrap_or(0.0), bx.get(1).copied().unwrap_or(0.0)))
}

/// Grid LP over the box `[0, X] x [0, Y]`, which must contain the surface.
pub fn build_lp_in(surface: &SSurface, m: usize, (bx, by): (f64, f64)) -> Result<GridLp> {
    if surface.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: surface.dim(),
        });
    }
    let report = surface.validate();
    if !report.valid {
        return Err(Error::InvalidSurface(report.violations.join("; ")));
    }
    if !(MIN_M..=MAX_M).contains(&m) {
        return Err(Error::Config(format!("grid size {m} outside [{MIN_M}, {MAX_M}]")));
    }
    let ib = surface.intercept_box();
    if !(bx.is_finite() && by.is_finite()) || ib[0] > bx * (1.0 + 1e-12) || ib[1] > by * (1.0 + 1e-12) {
        return Err(Error::InvalidSurface(format!(
            "surface exits the grid box [0, {bx}] x [0, {by}]"
        )));
    }

    let (hx, hy) = (bx / m as f64, by / m as f64);
    let mut lp = GridLp {
        m,
        hx,
        hy,
        rows: Vec::new(),
        warnings: Vec::new(),
    };
    let id = |i: usize, j: usize| i * (m + 1) + j;

    lp.rows.push(Row {
        kind: RowKind::Pointed,
        terms: vec![(id(0, 0), 1.0)],
        rhs: 0.0,
        equality: true,
    });
    for i in 0..=m {
        for j in 0..=m {
            if i < m {
                lp.rows.push(Row::ge(RowKind::Monotone, vec![(id(i + 1, j), 1.0), (id(i, j), -1.0)], 0.0));
            }
            if j < m {
                lp.rows.push(Row::ge(RowKind::Monotone, vec![(id(i, j + 1), 1.0), (id(i, j), -1.0)], 0.0));
            }
        }
    }
    for i in 0..m {
        for j in 0..m {
            lp.rows.push(Row::ge(
                RowKind::Submodular,
                vec![(id(i + 1, j), 1.0), (id(i, j + 1), 1.0), (id(i, j), -1.0), (id(i + 1, j + 1), -1.0)],
                0.0,
            ));
        }
    }
    for i in 0..=m {
        for j in 0..=m {
            if i + 2 <= m {
                lp.rows.push(Row::ge(
                    RowKind::Concavity,
                    vec![(id(i + 1, j), 2.0), (id(i, j), -1.0), (id(i + 2, j), -1.0)],
                    0.0,
                ));
            }
            if j + 2 <= m {
                lp.rows.push(Row::ge(
                    RowKind::Concavity,
                    vec![(id(i, j + 1), 2.0), (id(i, j), -1.0), (id(i, j + 2), -1.0)],
                    0.0,
                ));
            }
        }
    }

    // crossings along x on the horizontal lines, then along y on the vertical ones
    for j in 1..m {
        if let Some(c) = crossing(surface, 0, j as f64 * hy) {
            if let Some(k) = crossing_cell(c, hx, m) {
                lp.rows.push(Row::ge(
                    RowKind::Crossing,
                    vec![(id(k, j), 1.0), (id(k - 1, j), -1.0), (id(k + 2, j), -1.0), (id(k + 1, j), 1.0)],
                    hx,
                ));
            }
        }
    }
    for i in 1..m {
        if let Some(c) = crossing(surface, 1, i as f64 * hx) {
            if let Some(k) = crossing_cell(c, hy, m) {
                lp.rows.push(Row::ge(
                    RowKind::Crossing,
                    vec![(id(i, k), 1.0), (id(i, k - 1), -1.0), (id(i, k + 2), -1.0), (id(i, k + 1), 1.0)],
                    hy,
                ));
            }
        }
    }
    if lp.count(RowKind::Crossing) == 0 {
        lp.warnings.push(format!("m = {m} hosts no crossing rows; the bound is 0"));
    }

    let t = lp.t_var();
    lp.rows.push(Row::ge(RowKind::Objective, vec![(t, 1.0), (id(1, 0), -1.0 / hx)], 0.0));
    lp.rows.push(Row::ge(RowKind::Objective, vec![(t, 1.0), (id(0, 1), -1.0 / hy)], 0.0));
    Ok(lp)
}

/// Where the line moving along axis `d` at the other coordinate `o` meets
/// the surface, if it does.
fn crossing(surface: &SSurface, d: usize, o: f64) -> Option<f64> {
    match surface {
        SSurface::Hyperplane(h) => {
            let rest = h.m - h.c[1 - d] * o;
            (rest > 0.0).then(|| rest / h.c[d])
        }
        SSurface::Curve(c) => {
            if d == 0 {
                (o < c.b()).then(|| c.beta_unchecked(o))
            } else {
                (o < c.a()).then(|| c.alpha(o))
            }
        }
    }
}

/// Cell index `k` with `k h <= c < (k + 1) h`, if the row's stencil
/// `k - 1 ..= k + 2` fits on the grid.
fn crossing_cell(c: f64, h: f64, m: usize) -> Option<usize> {
    let k = (c / h + CROSSING_TIE).floor();
    (k >= 1.0 && k + 2.0 <= m as f64).then_some(k as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Simplex up to [`SIMPLEX_MAX_M`], interior point above.
    Auto,
    /// Dense tableau simplex on the dual, Bland's rule.
    Simplex,
    /// Interior point (clarabel).
    InteriorPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: f64,
    /// `f(i, j)` at index `i (m + 1) + j`.
    pub assignment: Vec<f64>,
    pub backend: Backend,
    pub iterations: usize,
    /// Final dual basis (row indices), simplex backend only.
    pub basis: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub backend: Backend,
    pub max_pivots: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            backend: Backend::Auto,
            max_pivots: DEFAULT_MAX_PIVOTS,
        }
    }
}

pub fn solve_lp(lp: &GridLp) -> Result<LpSolution> {
    solve_lp_with(lp, &SolveOptions::default())
}

pub fn solve_lp_with(lp: &GridLp, opts: &SolveOptions) -> Result<LpSolution> {
    let backend = match opts.backend {
        Backend::Auto if lp.m <= SIMPLEX_MAX_M => Backend::Simplex,
        Backend::Auto => Backend::InteriorPoint,
        b => b,
    };
    let sol = match backend {
        Backend::Simplex => simplex::solve(lp, opts.max_pivots)?,
        _ => ipm::solve(lp)?,
    };
    Ok(sol)
}

/// A function sampled onto the grid, with `t` at its smallest feasible value.
pub fn restrict<F: OrthantFunction + ?Sized>(lp: &GridLp, f: &F) -> Vec<f64> {
    let mut z = vec![0.0; lp.n_vars()];
    for i in 0..=lp.m {
        for j in 0..=lp.m {
            z[lp.node(i, j)] = f.value(&[i as f64 * lp.hx, j as f64 * lp.hy]);
        }
    }
    z[lp.t_var()] = (z[lp.node(1, 0)] / lp.hx).max(z[lp.node(0, 1)] / lp.hy);
    z
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictionReport {
    pub max_violation: f64,
    pub worst_row: Option<usize>,
    pub objective: f64,
}

/// Checks every LP row on the grid restriction of `f`.
pub fn restriction_witness<F: OrthantFunction + ?Sized>(lp: &GridLp, f: &F) -> RestrictionReport {
    let z = restrict(lp, f);
    let mut worst = (0.0, None);
    for (r, row) in lp.rows.iter().enumerate() {
        let v = row.violation(&z);
        if v > worst.0 {
            worst = (v, Some(r));
        }
    }
    RestrictionReport {
        max_violation: worst.0,
        worst_row: worst.1,
        objective: z[lp.t_var()],
    }
}
