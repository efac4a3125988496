use crate::el::{OrthantFunction, Side};

/// Finite-difference step at `x`: `1e-5 * max(1, |x|_inf)`.
pub fn fd_step(x: &[f64]) -> f64 {
    1e-5 * x.iter().fold(1.0_f64, |m, v| m.max(v.abs()))
}

/// One-sided partial of `f` along `d` from values only, with the
/// second-order one-sided stencil
/// `(-3 f(x) + 4 f(x + h) - f(x + 2h)) / 2h` (mirrored for the left side).
///
/// Returns `None` for a left quotient that would leave the orthant.
pub fn fd_partial<F: OrthantFunction + ?Sized>(f: &F, x: &[f64], d: usize, side: Side) -> Option<f64> {
    let h = fd_step(x);
    let s = match side {
        Side::Right => 1.0,
        Side::Left => -1.0,
    };
    if side == Side::Left && x[d] < 2.0 * h {
        return None;
    }
    let at = |k: f64| {
        let mut p = x.to_vec();
        p[d] += s * k * h;
        f.value(&p)
    };
    Some(s * (-3.0 * at(0.0) + 4.0 * at(1.0) - at(2.0)) / (2.0 * h))
}

/// Wraps a plain closure; partials come from [`fd_partial`]. Used to run the
/// property suite on functions outside the expression language.
pub struct FnFunction<G> {
    dim: usize,
    g: G,
}

impl<G: Fn(&[f64]) -> f64 + Sync> FnFunction<G> {
    pub fn new(dim: usize, g: G) -> Self {
        FnFunction { dim, g }
    }
}

impl<G: Fn(&[f64]) -> f64 + Sync> OrthantFunction for FnFunction<G> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.g)(x)
    }

    fn partial(&self, x: &[f64], d: usize, side: Side) -> f64 {
        fd_partial(self, x, d, side).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencil_is_second_order() {
        let f = FnFunction::new(1, |x: &[f64]| x[0].sqrt());
        let x = [0.5];
        let exact = 0.5 / 0.5f64.sqrt();
        let r = fd_partial(&f, &x, 0, Side::Right).unwrap();
        let l = fd_partial(&f, &x, 0, Side::Left).unwrap();
        assert!((r - exact).abs() < 1e-9, "{r} vs {exact}");
        assert!((l - exact).abs() < 1e-9);
    }

    #[test]
    fn sides_differ_at_a_kink() {
        let f = FnFunction::new(1, |x: &[f64]| x[0].min(1.0));
        assert!((fd_partial(&f, &[1.0], 0, Side::Left).unwrap() - 1.0).abs() < 1e-9);
        assert!(fd_partial(&f, &[1.0], 0, Side::Right).unwrap().abs() < 1e-9);
        assert!(fd_partial(&f, &[0.0], 0, Side::Left).is_none());
    }
}
