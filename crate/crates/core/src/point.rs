use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the non-negative orthant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Malformed("point needs at least one coordinate".into()));
        }
        for (index, &value) in coords.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::OutsideOrthant { index, value });
            }
        }
        Ok(Point(coords))
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![0.0; dim.max(1)])
    }

    /// The unit vector along coordinate `i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        Point(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Coordinatewise minimum (lattice meet).
    pub fn meet(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a.min(*b)).collect())
    }

    /// Coordinatewise maximum (lattice join).
    pub fn join(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a.max(*b)).collect())
    }

    pub fn le(&self, other: &Point) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn sup_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Deref for Point {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Vec<f64> {
        p.0
    }
}

/// Left and right partial derivatives at a point, one pair per coordinate.
///
/// `left[i]` is `None` where the coordinate is zero: the left derivative
/// only exists for `x_i > 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneSidedGrad {
    pub left: Vec<Option<f64>>,
    pub right: Vec<f64>,
}

impl OneSidedGrad {
    pub fn dim(&self) -> usize {
        self.right.len()
    }

    /// `left[i] - right[i]`, if the left derivative is defined.
    pub fn jump(&self, i: usize) -> Option<f64> {
        self.left[i].map(|l| l - self.right[i])
    }

    pub fn defined_left(&self, i: usize) -> bool {
        self.left[i].is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_and_nan() {
        assert!(matches!(
            Point::new(vec![1.0, -0.5]),
            Err(Error::OutsideOrthant { index: 1, .. })
        ));
        assert!(Point::new(vec![f64::NAN]).is_err());
        assert!(Point::new(vec![]).is_err());
    }

    #[test]
    fn lattice_ops() {
        let x = Point::new(vec![1.0, 3.0]).unwrap();
        let y = Point::new(vec![2.0, 0.5]).unwrap();
        assert_eq!(x.meet(&y).coords(), &[1.0, 0.5]);
        assert_eq!(x.join(&y).coords(), &[2.0, 3.0]);
        assert!(x.meet(&y).le(&x));
        assert!(!x.le(&y));
    }

    #[test]
    fn serde_rejects_outside_orthant() {
        assert!(serde_json::from_str::<Point>("[0.5, -1]").is_err());
        let p: Point = serde_json::from_str("[0.5, 1]").unwrap();
        assert_eq!(p.dim(), 2);
    }
}
