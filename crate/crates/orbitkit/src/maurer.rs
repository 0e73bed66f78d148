//! Maurer-Cartan coefficients of the chart parametrization: the matrix
//! C[beta][alpha] of E_beta-coefficients of u_z^{-1} d/dz^alpha u_z,
//! computed exactly by differentiating the nilpotent exponential with jets.

use crate::matrix::Matrix;
use crate::parabolic::ParabolicData;
use crate::scalar::{GaussianRational, Scalar};

/// C[beta][alpha] indexed along `delta_u` in (height, lex) order, computed
/// from the adjoint series
/// u_z^{-1} du_z/dz^alpha = sum_k (-ad_N)^k(E_alpha) / (k+1)!
/// which terminates because ad_N raises root height.
///
/// C is unitriangular with respect to height: C[alpha][alpha] = 1 and
/// C[beta][alpha] = 0 unless height(beta) > height(alpha) or beta = alpha.
pub fn maurer_cartan_coeffs<R: Scalar>(p: &ParabolicData, z: &[R]) -> Vec<Vec<R>> {
    let n = p.dim();
    let m = p.chart_dim();
    let mut nmat: Matrix<R> = Matrix::zeros(n);
    for (k, root) in p.delta_u().iter().enumerate() {
        nmat[(root.i, root.j)] = z[k].clone();
    }
    let mut coeffs = vec![vec![R::zero(); m]; m];
    for (alpha, ra) in p.delta_u().iter().enumerate() {
        let mut ad_pow: Matrix<R> = Matrix::elementary(n, ra.i, ra.j);
        let mut theta = ad_pow.clone();
        let mut factorial: i64 = 1;
        for k in 1..n {
            ad_pow = &(&nmat * &ad_pow) - &(&ad_pow * &nmat);
            if ad_pow.is_zero() {
                break;
            }
            factorial *= (k + 1) as i64;
            let c = GaussianRational::from_frac(if k % 2 == 0 { 1 } else { -1 }, factorial);
            theta = &theta + &ad_pow.scale(&R::embed(&c));
        }
        for (beta, rb) in p.delta_u().iter().enumerate() {
            coeffs[beta][alpha] = theta[(rb.i, rb.j)].clone();
        }
    }
    coeffs
}
