//! First-order jets: forward-mode differentiation over an arbitrary scalar
//! ring. Nesting `Jet<Jet<GaussianRational>>` yields exact mixed second
//! partials, which is all the 1-form calculus downstream ever needs.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Scalar};

/// Value plus a vector of first-order partials.
///
/// Constants carry an empty partials vector; arithmetic pads the shorter
/// operand with zeros, so jets of different arity mix without bookkeeping.
#[derive(Clone, Debug)]
pub struct Jet<R: Scalar> {
    pub value: R,
    pub partials: Vec<R>,
}

impl<R: Scalar> Jet<R> {
    pub fn constant(value: R) -> Self {
        Jet {
            value,
            partials: Vec::new(),
        }
    }

    /// Seed for variable `var_index` out of `n_vars`: unit partial vector.
    pub fn lift(value: R, var_index: usize, n_vars: usize) -> Result<Self> {
        if var_index >= n_vars {
            return Err(Error::IndexOutOfRange {
                index: var_index,
                bound: n_vars,
            });
        }
        let mut partials = vec![R::zero(); n_vars];
        partials[var_index] = R::one();
        Ok(Jet { value, partials })
    }

    pub fn partial(&self, k: usize) -> R {
        self.partials.get(k).cloned().unwrap_or_else(R::zero)
    }
}

fn zip_with<R: Scalar>(a: &[R], b: &[R], f: impl Fn(R, R) -> R) -> Vec<R> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            f(
                a.get(k).cloned().unwrap_or_else(R::zero),
                b.get(k).cloned().unwrap_or_else(R::zero),
            )
        })
        .collect()
}

impl<R: Scalar> PartialEq for Jet<R> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
            && zip_with(&self.partials, &other.partials, |a, b| a - b)
                .iter()
                .all(|d| d.is_zero())
    }
}

impl<R: Scalar> Add for Jet<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Jet {
            value: self.value + rhs.value,
            partials: zip_with(&self.partials, &rhs.partials, |a, b| a + b),
        }
    }
}

impl<R: Scalar> Sub for Jet<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Jet {
            value: self.value - rhs.value,
            partials: zip_with(&self.partials, &rhs.partials, |a, b| a - b),
        }
    }
}

impl<R: Scalar> Mul for Jet<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        // product rule on the partials
        let pa: Vec<R> = self
            .partials
            .iter()
            .map(|p| p.clone() * rhs.value.clone())
            .collect();
        let pb: Vec<R> = rhs
            .partials
            .iter()
            .map(|p| p.clone() * self.value.clone())
            .collect();
        Jet {
            value: self.value * rhs.value,
            partials: zip_with(&pa, &pb, |a, b| a + b),
        }
    }
}

impl<R: Scalar> Neg for Jet<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet {
            value: -self.value,
            partials: self.partials.into_iter().map(|p| -p).collect(),
        }
    }
}

impl<R: Scalar> Scalar for Jet<R> {
    fn zero() -> Self {
        Jet::constant(R::zero())
    }
    fn one() -> Self {
        Jet::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.partials.iter().all(|p| p.is_zero())
    }
    fn inv(&self) -> Option<Self> {
        // 1/(v + e p) = 1/v - e p/v^2
        let vinv = self.value.inv()?;
        let neg_vinv_sq = -(vinv.clone() * vinv.clone());
        Some(Jet {
            value: vinv,
            partials: self
                .partials
                .iter()
                .map(|p| p.clone() * neg_vinv_sq.clone())
                .collect(),
        })
    }
    fn embed(c: &GaussianRational) -> Self {
        Jet::constant(R::embed(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    fn int(k: i64) -> Q {
        Q::from_int(k)
    }

    #[test]
    fn lift_seeds_unit_vector() {
        let j = Jet::lift(int(5), 0, 2).unwrap();
        assert_eq!(j.value, int(5));
        assert_eq!(j.partials, vec![int(1), int(0)]);
    }

    #[test]
    fn lift_rejects_bad_index() {
        assert_eq!(
            Jet::lift(int(1), 3, 2).unwrap_err(),
            Error::IndexOutOfRange { index: 3, bound: 2 }
        );
    }

    #[test]
    fn constant_multiple_scales_partials() {
        let j = Jet::lift(int(7), 1, 3).unwrap();
        let m = Jet::constant(int(4)) * j;
        assert_eq!(m.partials, vec![int(0), int(4), int(0)]);
    }

    #[test]
    fn derivative_of_square() {
        // d/dz z^2 at z = 3/2 is 3
        let z = Jet::lift(Q::from_frac(3, 2), 0, 1).unwrap();
        let sq = z.clone() * z;
        assert_eq!(sq.value, Q::from_frac(9, 4));
        assert_eq!(sq.partial(0), int(3));
    }

    #[test]
    fn inverse_rule() {
        // d/dz 1/z at z = 2 is -1/4
        let z = Jet::lift(int(2), 0, 1).unwrap();
        let inv = z.inv().unwrap();
        assert_eq!(inv.value, Q::from_frac(1, 2));
        assert_eq!(inv.partial(0), Q::from_frac(-1, 4));
    }

    #[test]
    fn mixed_arity_arithmetic() {
        let j = Jet::lift(int(2), 0, 2).unwrap();
        let c = Jet::constant(int(3));
        let s = j.clone() + c;
        assert_eq!(s.value, int(5));
        assert_eq!(s.partial(0), int(1));
        assert_eq!(s.partial(1), int(0));
    }

    #[test]
    fn nested_jets_give_second_partials() {
        // f(x, y) = x^2 y: f_xy = 2x, at (3, 5) -> 6
        type J = Jet<Jet<Q>>;
        // outer level differentiates in x, inner level in y
        let x: J = Jet::lift(Jet::constant(int(3)), 0, 1).unwrap();
        let y: J = Jet::constant(Jet::lift(int(5), 0, 1).unwrap());
        let f = x.clone() * x * y;
        // outer partial = d/dx(x^2 y) = 2xy (a jet in y); its inner partial is 2x
        assert_eq!(f.partial(0).partial(0), int(6));
    }
}
