//! Numeric abstraction shared by plain inference (`f64`) and training
//! (`Dual`, forward-mode derivatives over the trainable parameters).

use std::ops::{Add, Mul, Sub};

pub trait Scalar: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn constant(v: f64) -> Self;
    fn value(&self) -> f64;
    fn div(self, rhs: &Self) -> Self;
    /// Clamp into `[0, 1]`; derivative passes through on the closed interval.
    fn clamp01(self) -> Self;
    /// Larger operand; ties keep `self`.
    fn max_with(self, other: Self) -> Self;
    /// Smaller operand; ties keep `self`.
    fn min_with(self, other: Self) -> Self;
    /// Records that a branch was taken by comparing this value to `threshold`.
    fn note_branch(&mut self, _threshold: f64) {}
}

impl Scalar for f64 {
    fn constant(v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn div(self, rhs: &Self) -> Self {
        self / rhs
    }
    fn clamp01(self) -> Self {
        self.clamp(0.0, 1.0)
    }
    fn max_with(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
    fn min_with(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

/// Value with a dense gradient and the distance to the nearest kink
/// (clamp boundary, max/min tie, branch threshold) it passed through.
///
/// An empty gradient stands for all zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Dual {
    pub value: f64,
    pub grad: Vec<f64>,
    pub margin: f64,
}

impl Dual {
    /// The `index`-th of `len` independent variables.
    pub fn variable(value: f64, index: usize, len: usize) -> Self {
        let mut grad = vec![0.0; len];
        grad[index] = 1.0;
        Dual { value, grad, margin: f64::INFINITY }
    }

    pub fn gradient(&self, len: usize) -> Vec<f64> {
        if self.grad.is_empty() {
            vec![0.0; len]
        } else {
            self.grad.clone()
        }
    }

    fn combine(a: &[f64], b: &[f64], fa: f64, fb: f64) -> Vec<f64> {
        match (a.is_empty(), b.is_empty()) {
            (true, true) => Vec::new(),
            (false, true) => a.iter().map(|x| fa * x).collect(),
            (true, false) => b.iter().map(|x| fb * x).collect(),
            (false, false) => a.iter().zip(b).map(|(x, y)| fa * x + fb * y).collect(),
        }
    }

    fn with_margin(mut self, margin: f64) -> Self {
        self.margin = self.margin.min(margin);
        self
    }

    fn is_flat(&self) -> bool {
        self.grad.iter().all(|g| *g == 0.0)
    }

    /// Two sides of a max/min with the same slope join without a kink.
    fn same_slope(&self, other: &Dual) -> bool {
        match (self.is_flat(), other.is_flat()) {
            (true, true) => true,
            (false, false) => self.grad == other.grad,
            _ => false,
        }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        Dual {
            value: self.value + rhs.value,
            grad: Dual::combine(&self.grad, &rhs.grad, 1.0, 1.0),
            margin: self.margin.min(rhs.margin),
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        Dual {
            value: self.value - rhs.value,
            grad: Dual::combine(&self.grad, &rhs.grad, 1.0, -1.0),
            margin: self.margin.min(rhs.margin),
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        Dual {
            value: self.value * rhs.value,
            grad: Dual::combine(&self.grad, &rhs.grad, rhs.value, self.value),
            margin: self.margin.min(rhs.margin),
        }
    }
}

impl Scalar for Dual {
    fn constant(v: f64) -> Self {
        Dual { value: v, grad: Vec::new(), margin: f64::INFINITY }
    }

    fn value(&self) -> f64 {
        self.value
    }

    fn div(self, rhs: &Self) -> Self {
        let q = self.value / rhs.value;
        Dual {
            value: q,
            grad: Dual::combine(&self.grad, &rhs.grad, 1.0 / rhs.value, -q / rhs.value),
            margin: self.margin.min(rhs.margin),
        }
    }

    fn clamp01(self) -> Self {
        let v = self.value;
        let margin = if self.is_flat() { f64::INFINITY } else { v.abs().min((v - 1.0).abs()) };
        if v < 0.0 {
            Dual::constant(0.0).with_margin(self.margin.min(margin))
        } else if v > 1.0 {
            Dual::constant(1.0).with_margin(self.margin.min(margin))
        } else {
            self.with_margin(margin)
        }
    }

    fn max_with(self, other: Self) -> Self {
        let gap = if self.same_slope(&other) { f64::INFINITY } else { (self.value - other.value).abs() };
        if other.value > self.value {
            other.with_margin(gap)
        } else {
            self.with_margin(gap)
        }
    }

    fn min_with(self, other: Self) -> Self {
        let gap = if self.same_slope(&other) { f64::INFINITY } else { (self.value - other.value).abs() };
        if other.value < self.value {
            other.with_margin(gap)
        } else {
            self.with_margin(gap)
        }
    }

    fn note_branch(&mut self, threshold: f64) {
        if self.is_flat() {
            return;
        }
        self.margin = self.margin.min((self.value - threshold).abs());
    }
}
