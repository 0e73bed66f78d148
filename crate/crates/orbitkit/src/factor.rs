//! The big-cell factorization g = u u^- t and chart membership dispatch.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::parabolic::ParabolicData;
use crate::scalar::{GaussianRational, Scalar};
use crate::weyl::WeylCoset;

/// The unique triple with g = u * u_minus * t: u block-upper unipotent
/// (support Delta(u)), u_minus block-lower unipotent, t invertible
/// block-diagonal.
#[derive(Clone, PartialEq, Debug)]
pub struct UulFactorization<R: Scalar> {
    pub u: Matrix<R>,
    pub u_minus: Matrix<R>,
    pub t: Matrix<R>,
}

impl<R: Scalar> UulFactorization<R> {
    pub fn product(&self) -> Matrix<R> {
        &(&self.u * &self.u_minus) * &self.t
    }
}

fn block_range(p: &ParabolicData, b: usize) -> std::ops::Range<usize> {
    let start: usize = p.block_sizes()[..b].iter().sum();
    start..start + p.block_sizes()[b]
}

/// Factor g into u * u_minus * t by block elimination: eliminate the
/// above-diagonal blocks column by column from the right, pivoting on the
/// diagonal blocks. A non-invertible pivot means g lies outside the big
/// cell U U^- L.
pub fn factor_uul<R: Scalar>(g: &Matrix<R>, p: &ParabolicData) -> Result<UulFactorization<R>> {
    let n = p.dim();
    if g.dim() != n {
        return Err(Error::DimensionMismatch {
            left: g.dim(),
            right: n,
        });
    }
    let nb = p.block_sizes().len();
    let mut lower = g.clone();
    let mut u: Matrix<R> = Matrix::identity(n);

    for bj in (0..nb).rev() {
        let cols = block_range(p, bj);
        let bs = cols.len();
        let pivot = Matrix::from_fn(bs, |r, c| lower[(cols.start + r, cols.start + c)].clone());
        let pivot_inv = pivot.inverse().ok_or(Error::OutsideBigCell)?;
        for bi in 0..bj {
            let rows = block_range(p, bi);
            // coefficient block C = lower[bi, bj] * pivot^{-1}
            let rs = rows.len();
            let mut c = vec![vec![R::zero(); bs]; rs];
            for r in 0..rs {
                for k in 0..bs {
                    let mut acc = R::zero();
                    for m in 0..bs {
                        acc = acc
                            + lower[(rows.start + r, cols.start + m)].clone()
                                * pivot_inv[(m, k)].clone();
                    }
                    c[r][k] = acc;
                }
            }
            // record into u and clear the block by the row operation
            // row(bi) -= C * row(bj)
            for r in 0..rs {
                for k in 0..bs {
                    u[(rows.start + r, cols.start + k)] = c[r][k].clone();
                }
            }
            for col in 0..n {
                for r in 0..rs {
                    let mut acc = lower[(rows.start + r, col)].clone();
                    for k in 0..bs {
                        acc = acc - c[r][k].clone() * lower[(cols.start + k, col)].clone();
                    }
                    lower[(rows.start + r, col)] = acc;
                }
            }
        }
    }

    // lower is now block-lower triangular with invertible diagonal blocks
    let mut t = Matrix::zeros(n);
    for b in 0..nb {
        let r = block_range(p, b);
        for i in r.clone() {
            for j in r.clone() {
                t[(i, j)] = lower[(i, j)].clone();
            }
        }
    }
    let t_inv = t.inverse().ok_or(Error::OutsideBigCell)?;
    let u_minus = &lower * &t_inv;
    Ok(UulFactorization { u, u_minus, t })
}

/// First chart (in atlas order) whose big cell contains g, together with
/// the factorization of sigma^{-1} g. Always succeeds for invertible g:
/// the Bruhat cells of the minimal representatives cover the group.
pub fn locate_chart(
    g: &Matrix<GaussianRational>,
    atlas: &[WeylCoset],
    p: &ParabolicData,
) -> Result<(usize, UulFactorization<GaussianRational>)> {
    for (idx, coset) in atlas.iter().enumerate() {
        let rep_inv = coset
            .representative()
            .inverse()
            .ok_or(Error::SingularMatrix)?;
        let h = &rep_inv * g;
        if let Ok(fac) = factor_uul(&h, p) {
            return Ok((idx, fac));
        }
    }
    Err(Error::SingularMatrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::{build_parabolic, WeightLambda};
    use crate::scalar::GaussianRational as Q;
    use crate::weyl::weyl_cosets;

    fn parab(vals: &[i64]) -> ParabolicData {
        build_parabolic(&WeightLambda::new(
            vals.iter().map(|&k| Q::from_int(k)).collect(),
        ))
        .unwrap()
    }

    fn mat(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&k| Q::from_int(k)).collect())
                .collect(),
        )
    }

    #[test]
    fn identity_factors_trivially() {
        let p = parab(&[2, 0, -1]);
        let fac = factor_uul(&Matrix::<Q>::identity(3), &p).unwrap();
        assert_eq!(fac.u, Matrix::identity(3));
        assert_eq!(fac.u_minus, Matrix::identity(3));
        assert_eq!(fac.t, Matrix::identity(3));
    }

    #[test]
    fn sl2_generic_factors() {
        let p = parab(&[1, -1]);
        let g = mat(&[&[2, 3], &[4, 7]]);
        let fac = factor_uul(&g, &p).unwrap();
        assert_eq!(fac.product(), g);
        // u upper unitriangular, u_minus lower unitriangular, t diagonal
        assert_eq!(fac.u[(1, 0)], Q::zero());
        assert_eq!(fac.u[(0, 0)], Q::one());
        assert_eq!(fac.u_minus[(0, 1)], Q::zero());
        assert_eq!(fac.t[(0, 1)], Q::zero());
        assert_eq!(fac.t[(1, 0)], Q::zero());
    }

    #[test]
    fn antidiagonal_is_outside_big_cell() {
        let p = parab(&[1, -1]);
        let g = mat(&[&[0, 1], &[1, 0]]);
        assert_eq!(factor_uul(&g, &p).unwrap_err(), Error::OutsideBigCell);
    }

    #[test]
    fn factor_recovers_random_factors() {
        let p = parab(&[3, 1, 0]);
        let u = mat(&[&[1, 2, 5], &[0, 1, -3], &[0, 0, 1]]);
        let um = mat(&[&[1, 0, 0], &[4, 1, 0], &[-2, 7, 1]]);
        let t = mat(&[&[3, 0, 0], &[0, -2, 0], &[0, 0, 5]]);
        let g = &(&u * &um) * &t;
        let fac = factor_uul(&g, &p).unwrap();
        assert_eq!(fac.u, u);
        assert_eq!(fac.u_minus, um);
        assert_eq!(fac.t, t);
    }

    #[test]
    fn block_case_respects_block_structure() {
        let p = parab(&[1, 1, -1, -1]);
        let g = mat(&[
            &[2, 1, 3, 0],
            &[1, 1, 0, 2],
            &[0, 1, 4, 1],
            &[1, 0, 1, 3],
        ]);
        let fac = factor_uul(&g, &p).unwrap();
        assert_eq!(fac.product(), g);
        // u unit on the diagonal blocks
        for i in 0..4 {
            assert_eq!(fac.u[(i, i)], Q::one());
        }
        assert_eq!(fac.u[(0, 1)], Q::zero());
        assert_eq!(fac.u[(2, 3)], Q::zero());
    }

    #[test]
    fn permutation_matrix_locates_its_own_coset() {
        let p = parab(&[3, 1, 0]);
        let atlas = weyl_cosets(&p);
        let w = mat(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        let (idx, fac) = locate_chart(&w, &atlas, &p).unwrap();
        let sigma = atlas[idx].representative();
        assert_eq!(&(sigma * &fac.product()), &w);
    }

    #[test]
    fn locate_chart_on_identity() {
        let p = parab(&[1, -1]);
        let atlas = weyl_cosets(&p);
        let (idx, fac) = locate_chart(&Matrix::identity(2), &atlas, &p).unwrap();
        assert_eq!(idx, 0);
        assert_eq!(fac.product(), Matrix::identity(2));
    }
}
