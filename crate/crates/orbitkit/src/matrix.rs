//! Square matrices over an exact scalar ring: the gl_n layer.
//!
//! Everything here is pure and exact. Inverses use Gauss-Jordan with
//! invertibility-checked pivots so the same code works over jets, where a
//! pivot is invertible iff its value part is.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::BigInt;

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Rational, Scalar};

#[derive(Clone, PartialEq)]
pub struct Matrix<R: Scalar> {
    n: usize,
    data: Vec<R>,
}

impl<R: Scalar> Matrix<R> {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![R::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = R::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must be square");
        Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Elementary matrix e_{ij}: the root vector of epsilon_i - epsilon_j.
    pub fn elementary(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m[(i, j)] = R::one();
        m
    }

    pub fn diagonal(entries: &[R]) -> Self {
        let n = entries.len();
        Matrix::from_fn(n, |i, j| if i == j { entries[i].clone() } else { R::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn map<S: Scalar>(&self, mut f: impl FnMut(&R) -> S) -> Matrix<S> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|x| f(x)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.n, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn trace(&self) -> R {
        (0..self.n).fold(R::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Gauss-Jordan inverse; `None` when no invertible pivot can be found.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| a[(r, col)].inv().is_some())?;
            if pivot_row != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot_row * n + j);
                    inv.data.swap(col * n + j, pivot_row * n + j);
                }
            }
            let p = a[(col, col)].inv().expect("pivot chosen invertible");
            for j in 0..n {
                a[(col, j)] = a[(col, j)].clone() * p.clone();
                inv[(col, j)] = inv[(col, j)].clone() * p.clone();
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(col, j)].clone();
                    inv[(r, j)] = inv[(r, j)].clone() - f.clone() * inv[(col, j)].clone();
                }
            }
        }
        if a == Self::identity(n) {
            Some(inv)
        } else {
            None
        }
    }

    /// Determinant by elimination; requires invertible pivots wherever a
    /// column is nonzero, which holds over fields and over jets whose value
    /// part is a field element.
    pub fn det(&self) -> R {
        let n = self.n;
        let mut a = self.clone();
        let mut det = R::one();
        for col in 0..n {
            let Some(pivot_row) = (col..n).find(|&r| a[(r, col)].inv().is_some()) else {
                // no invertible pivot: over a field this column is zero below the diagonal
                if (col..n).all(|r| a[(r, col)].is_zero()) {
                    return R::zero();
                }
                // jets with zero value but nonzero partials: determinant value is 0
                // but partials are not recoverable this way; fall back to expansion
                return self.det_by_expansion();
            };
            if pivot_row != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot_row * n + j);
                }
                det = -det;
            }
            let p = a[(col, col)].clone();
            let pinv = p.inv().expect("pivot invertible");
            det = det * p;
            for r in (col + 1)..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone() * pinv.clone();
                for j in col..n {
                    a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(col, j)].clone();
                }
            }
        }
        det
    }

    fn det_by_expansion(&self) -> R {
        let n = self.n;
        if n == 1 {
            return self[(0, 0)].clone();
        }
        let mut acc = R::zero();
        for j in 0..n {
            if self[(0, j)].is_zero() {
                continue;
            }
            let minor = Matrix::from_fn(n - 1, |r, c| {
                let cc = if c < j { c } else { c + 1 };
                self[(r + 1, cc)].clone()
            });
            let term = self[(0, j)].clone() * minor.det_by_expansion();
            acc = if j % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }
}

impl<R: Scalar> std::ops::Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.n + j]
    }
}

impl<R: Scalar> std::ops::IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.n + j]
    }
}

impl<R: Scalar> Add for &Matrix<R> {
    type Output = Matrix<R>;
    fn add(self, rhs: Self) -> Matrix<R> {
        self.check_dim(rhs).expect("dimension mismatch");
        Matrix::from_fn(self.n, |i, j| self[(i, j)].clone() + rhs[(i, j)].clone())
    }
}

impl<R: Scalar> Sub for &Matrix<R> {
    type Output = Matrix<R>;
    fn sub(self, rhs: Self) -> Matrix<R> {
        self.check_dim(rhs).expect("dimension mismatch");
        Matrix::from_fn(self.n, |i, j| self[(i, j)].clone() - rhs[(i, j)].clone())
    }
}

impl<R: Scalar> Mul for &Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, rhs: Self) -> Matrix<R> {
        self.check_dim(rhs).expect("dimension mismatch");
        let n = self.n;
        Matrix::from_fn(n, |i, j| {
            (0..n).fold(R::zero(), |acc, k| {
                acc + self[(i, k)].clone() * rhs[(k, j)].clone()
            })
        })
    }
}

impl<R: Scalar> Neg for &Matrix<R> {
    type Output = Matrix<R>;
    fn neg(self) -> Matrix<R> {
        self.map(|x| -x.clone())
    }
}

impl<R: Scalar> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.n {
            write!(f, "  [")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Lie bracket [A, B] = AB - BA.
pub fn bracket<R: Scalar>(a: &Matrix<R>, b: &Matrix<R>) -> Result<Matrix<R>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(&(a * b) - &(b * a))
}

/// The trace form B(A, B) = tr(AB), the invariant pairing identifying
/// gl_n with its dual.
pub fn trace_form<R: Scalar>(a: &Matrix<R>, b: &Matrix<R>) -> Result<R> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let n = a.dim();
    let mut acc = R::zero();
    for i in 0..n {
        for k in 0..n {
            acc = acc + a[(i, k)].clone() * b[(k, i)].clone();
        }
    }
    Ok(acc)
}

fn factorial_inverse(k: usize) -> GaussianRational {
    let mut f = BigInt::from(1);
    for i in 2..=k {
        f *= BigInt::from(i);
    }
    GaussianRational::from_rational(Rational::new(BigInt::from(1), f))
}

/// exp of a nilpotent matrix: the finite sum of N^k / k!.
pub fn exp_nilpotent<R: Scalar>(nil: &Matrix<R>) -> Result<Matrix<R>> {
    let n = nil.dim();
    if !nil.pow(n).is_zero() {
        return Err(Error::NotNilpotent);
    }
    let mut acc = Matrix::identity(n);
    let mut power = Matrix::identity(n);
    for k in 1..n {
        power = &power * nil;
        if power.is_zero() {
            break;
        }
        acc = &acc + &power.scale(&R::embed(&factorial_inverse(k)));
    }
    Ok(acc)
}

/// log of a unipotent matrix: the finite alternating sum of (U - I)^k / k.
pub fn log_unipotent<R: Scalar>(uni: &Matrix<R>) -> Result<Matrix<R>> {
    let n = uni.dim();
    let m = uni - &Matrix::identity(n);
    if !m.pow(n).is_zero() {
        return Err(Error::NotUnipotent);
    }
    let mut acc = Matrix::zeros(n);
    let mut power = Matrix::identity(n);
    for k in 1..n {
        power = &power * &m;
        if power.is_zero() {
            break;
        }
        let coeff = GaussianRational::from_frac(if k % 2 == 1 { 1 } else { -1 }, k as i64);
        acc = &acc + &power.scale(&R::embed(&coeff));
    }
    Ok(acc)
}

/// Coadjoint action under the trace-form identification: g F g^{-1}.
pub fn coadjoint<R: Scalar>(g: &Matrix<R>, f: &Matrix<R>) -> Result<Matrix<R>> {
    if g.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            left: g.dim(),
            right: f.dim(),
        });
    }
    let ginv = g.inverse().ok_or(Error::SingularMatrix)?;
    Ok(&(g * f) * &ginv)
}

/// Solve A x = b over a field-like scalar by row reduction, with free
/// variables set to zero. `None` when the system is inconsistent.
pub fn solve_linear<R: Scalar>(a: &Matrix<R>, b: &[R]) -> Option<Vec<R>> {
    let n = a.dim();
    assert_eq!(b.len(), n);
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let mut pivot_cols: Vec<Option<usize>> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| m[(r, col)].inv().is_some()) else {
            // column must be zero below `row`, otherwise the scalar ring
            // has non-invertible nonzeros and elimination cannot proceed
            continue;
        };
        if p != row {
            for j in 0..n {
                let tmp = m[(row, j)].clone();
                m[(row, j)] = m[(p, j)].clone();
                m[(p, j)] = tmp;
            }
            rhs.swap(row, p);
        }
        let pinv = m[(row, col)].inv().expect("pivot invertible");
        for j in 0..n {
            m[(row, j)] = m[(row, j)].clone() * pinv.clone();
        }
        rhs[row] = rhs[row].clone() * pinv;
        for r in 0..n {
            if r == row || m[(r, col)].is_zero() {
                continue;
            }
            let f = m[(r, col)].clone();
            for j in 0..n {
                m[(r, j)] = m[(r, j)].clone() - f.clone() * m[(row, j)].clone();
            }
            rhs[r] = rhs[r].clone() - f * rhs[row].clone();
        }
        pivot_cols.push(Some(col));
        row += 1;
        if row == n {
            break;
        }
    }
    // consistency: rows past the rank must have zero rhs
    for r in row..n {
        if !rhs[r].is_zero() {
            return None;
        }
    }
    let mut x = vec![R::zero(); n];
    for (r, col) in pivot_cols.iter().enumerate() {
        if let Some(c) = col {
            x[*c] = rhs[r].clone();
        }
    }
    Some(x)
}

#[derive(serde::Serialize, serde::Deserialize)]
struct MatrixRepr {
    n: usize,
    entries: Vec<Vec<GaussianRational>>,
}

impl serde::Serialize for Matrix<GaussianRational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].clone()).collect())
            .collect();
        MatrixRepr { n: self.n, entries }.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Matrix<GaussianRational> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::deserialize(d)?;
        if repr.entries.len() != repr.n || repr.entries.iter().any(|r| r.len() != repr.n) {
            return Err(D::Error::custom("entries must be an n x n array"));
        }
        Ok(Matrix::from_rows(repr.entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    fn int(k: i64) -> Q {
        Q::from_int(k)
    }

    fn mat(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&k| int(k)).collect()).collect())
    }

    #[test]
    fn sl2_triple_bracket() {
        let e = Matrix::elementary(2, 0, 1);
        let f = Matrix::elementary(2, 1, 0);
        let h = bracket(&e, &f).unwrap();
        assert_eq!(h, mat(&[&[1, 0], &[0, -1]]));
    }

    #[test]
    fn bracket_with_diagonal_is_root_eigenrelation() {
        let d = Matrix::diagonal(&[int(4), int(1), int(-2)]);
        let e13 = Matrix::elementary(3, 0, 2);
        assert_eq!(bracket(&d, &e13).unwrap(), e13.scale(&int(6)));
    }

    #[test]
    fn bracket_antisymmetry() {
        let a = mat(&[&[1, 2], &[3, 4]]);
        assert!(bracket(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn trace_form_of_dual_root_vectors() {
        let e = Matrix::<Q>::elementary(3, 1, 0);
        let f = Matrix::<Q>::elementary(3, 0, 1);
        assert_eq!(trace_form(&e, &f).unwrap(), int(1));
    }

    #[test]
    fn trace_form_identity() {
        let i: Matrix<Q> = Matrix::identity(3);
        assert_eq!(trace_form(&i, &i).unwrap(), int(3));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a: Matrix<Q> = Matrix::identity(2);
        let b: Matrix<Q> = Matrix::identity(3);
        assert!(matches!(bracket(&a, &b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(trace_form(&a, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn exp_of_zero() {
        let z: Matrix<Q> = Matrix::zeros(3);
        assert_eq!(exp_nilpotent(&z).unwrap(), Matrix::identity(3));
    }

    #[test]
    fn exp_gl3_matches_closed_form() {
        // exp(z e12 + w e23 + v e13) has (1,3) entry v + zw/2
        let (z, w, v) = (int(2), int(5), int(7));
        let mut nil = Matrix::zeros(3);
        nil[(0, 1)] = z.clone();
        nil[(1, 2)] = w.clone();
        nil[(0, 2)] = v.clone();
        let u = exp_nilpotent(&nil).unwrap();
        assert_eq!(u[(0, 1)], z.clone());
        assert_eq!(u[(1, 2)], w.clone());
        assert_eq!(u[(0, 2)], v + Q::from_frac(1, 2) * z * w);
    }

    #[test]
    fn exp_rejects_non_nilpotent() {
        let i: Matrix<Q> = Matrix::identity(2);
        assert_eq!(exp_nilpotent(&i).unwrap_err(), Error::NotNilpotent);
    }

    #[test]
    fn log_of_identity() {
        let i: Matrix<Q> = Matrix::identity(4);
        assert!(log_unipotent(&i).unwrap().is_zero());
    }

    #[test]
    fn log_rejects_non_unipotent() {
        let m = mat(&[&[2, 0], &[0, 1]]);
        assert_eq!(log_unipotent(&m).unwrap_err(), Error::NotUnipotent);
    }

    #[test]
    fn exp_log_round_trip() {
        let mut nil = Matrix::zeros(4);
        nil[(0, 1)] = Q::from_frac(3, 2);
        nil[(0, 3)] = int(-4);
        nil[(1, 2)] = Q::from_frac(-1, 5);
        nil[(2, 3)] = int(9);
        nil[(0, 2)] = int(1);
        let u = exp_nilpotent(&nil).unwrap();
        assert_eq!(log_unipotent(&u).unwrap(), nil);
        assert_eq!(exp_nilpotent(&log_unipotent(&u).unwrap()).unwrap(), u);
    }

    #[test]
    fn inverse_exact() {
        let a = mat(&[&[2, 1, 0], &[0, 1, 3], &[5, 0, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(3));
    }

    #[test]
    fn singular_has_no_inverse() {
        let a = mat(&[&[1, 2], &[2, 4]]);
        assert!(a.inverse().is_none());
    }

    #[test]
    fn coadjoint_by_identity_fixes() {
        let f = mat(&[&[1, 2], &[3, 4]]);
        assert_eq!(coadjoint(&Matrix::identity(2), &f).unwrap(), f);
    }

    #[test]
    fn coadjoint_fixes_lambda_under_levi() {
        // block-diagonal g commuting with diag(2,2,-1) fixes it
        let lam = Matrix::diagonal(&[int(2), int(2), int(-1)]);
        let g = mat(&[&[1, 2, 0], &[1, 3, 0], &[0, 0, 5]]);
        assert_eq!(coadjoint(&g, &lam).unwrap(), lam);
    }

    #[test]
    fn coadjoint_rejects_singular() {
        let f = mat(&[&[1, 0], &[0, 1]]);
        let g = mat(&[&[1, 1], &[1, 1]]);
        assert_eq!(coadjoint(&g, &f).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn det_matches_expansion() {
        let a = mat(&[&[2, 1, 7], &[0, 3, -1], &[4, 4, 4]]);
        assert_eq!(a.det(), a.det_by_expansion());
        assert_eq!(a.det(), int(2 * (3 * 4 + 4) - 1 * (0 + 4) + 7 * (0 - 12)));
    }

    #[test]
    fn solve_linear_recovers_solution() {
        let a = mat(&[&[2, 1], &[1, 3]]);
        let b = vec![int(5), int(10)];
        let x = solve_linear(&a, &b).unwrap();
        assert_eq!(int(2) * x[0].clone() + x[1].clone(), int(5));
        assert_eq!(x[0].clone() + int(3) * x[1].clone(), int(10));
    }

    #[test]
    fn solve_linear_detects_inconsistency() {
        let a = mat(&[&[1, 1], &[1, 1]]);
        assert!(solve_linear(&a, &[int(1), int(2)]).is_none());
        assert!(solve_linear(&a, &[int(1), int(1)]).is_some());
    }
}
