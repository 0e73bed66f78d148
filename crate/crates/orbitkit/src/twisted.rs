//! The twisted moment map: the key-relation solver, local maps into the
//! coadjoint orbit, the affine fiber action, chart transitions, the glued
//! global map and its inverse.

use serde::{Deserialize, Serialize};

use crate::chart::{u_from_z, u_minus_from_w, w_from_u_minus, z_from_u, ChartPoint};
use crate::error::{Error, Result};
use crate::matrix::{coadjoint, Matrix};
use crate::maurer::maurer_cartan_coeffs;
use crate::parabolic::ParabolicData;
use crate::scalar::{GaussianRational, Scalar};
use crate::weyl::WeylCoset;

/// A point of the coadjoint orbit under the trace-form identification:
/// the matrix F = g lambda^vee g^{-1}, optionally with the group element
/// that produced it (needed to invert the moment map).
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct OrbitPoint {
    pub matrix: Matrix<GaussianRational>,
    pub witness: Option<Matrix<GaussianRational>>,
}

/// Solve the key relation for w: given chart coordinates (z, xi), find the
/// unique coefficients w with
/// xi = -<Ad*(u^-_w) lambda, u_z^{-1} d u_z>.
///
/// Stage 1 back-substitutes the unitriangular system C(z)^T y = -xi in
/// height order. Stage 2 solves Ad(u^-) lambda^vee = lambda^vee + Y
/// entrywise via the matrix equation u^- lambda^vee = (lambda^vee + Y) u^-,
/// again by height induction; w is then read off through the logarithm.
pub fn solve_w<R: Scalar>(p: &ParabolicData, z: &[R], xi: &[R]) -> Vec<R> {
    let m = p.chart_dim();
    let roots = p.delta_u();
    let coeffs = maurer_cartan_coeffs(p, z);

    // stage 1: y along delta_u, highest height first
    let mut y = vec![R::zero(); m];
    for a in (0..m).rev() {
        let mut acc = -xi[a].clone();
        for b in (a + 1)..m {
            if roots[b].height() > roots[a].height() {
                acc = acc - coeffs[b][a].clone() * y[b].clone();
            }
        }
        y[a] = acc;
    }

    // stage 2: M = u^- - I with M_{ji}(lambda_i - lambda_j) = (Y + Y M)_{ji}
    let n = p.dim();
    let mut y_mat = Matrix::zeros(n);
    for (k, root) in roots.iter().enumerate() {
        y_mat[(root.j, root.i)] = y[k].clone();
    }
    let mut m_mat: Matrix<R> = Matrix::zeros(n);
    for root in roots {
        let (row, col) = (root.j, root.i);
        let mut acc = y_mat[(row, col)].clone();
        for k in 0..n {
            if !y_mat[(row, k)].is_zero() && !m_mat[(k, col)].is_zero() {
                acc = acc + y_mat[(row, k)].clone() * m_mat[(k, col)].clone();
            }
        }
        let gap_inv = R::embed(&p.lambda_gap(root))
            .inv()
            .expect("lambda gaps are nonzero on Delta(u)");
        m_mat[(row, col)] = acc * gap_inv;
    }
    let u_minus = &Matrix::identity(n) + &m_mat;
    w_from_u_minus(p, &u_minus).expect("solution has support in -Delta(u)")
}

/// The inverse direction of the key relation:
/// xi_alpha = -tr( Ad(u^-_w) lambda^vee * theta_alpha ).
pub fn xi_from_w<R: Scalar>(p: &ParabolicData, z: &[R], w: &[R]) -> Vec<R> {
    let u_minus = u_minus_from_w(p, w);
    let neg_w: Vec<R> = w.iter().map(|x| -x.clone()).collect();
    let u_minus_inv = u_minus_from_w(p, &neg_w);
    let ad_lambda = &(&u_minus * &p.lambda_matrix()) * &u_minus_inv;
    let coeffs = maurer_cartan_coeffs(p, z);
    let roots = p.delta_u();
    let m = p.chart_dim();
    (0..m)
        .map(|a| {
            let mut acc = R::zero();
            for (b, root) in roots.iter().enumerate() {
                if !coeffs[b][a].is_zero() {
                    // tr(F E_beta) picks the (j, i) entry
                    acc = acc + coeffs[b][a].clone() * ad_lambda[(root.j, root.i)].clone();
                }
            }
            -acc
        })
        .collect()
}

/// mu in chart coordinates over any scalar ring; returns (F, witness).
pub fn mu_local_in<R: Scalar>(
    p: &ParabolicData,
    rep_sigma: &Matrix<R>,
    z: &[R],
    xi: &[R],
) -> (Matrix<R>, Matrix<R>) {
    let w = solve_w(p, z, xi);
    let a = &(rep_sigma * &u_from_z(p, z)) * &u_minus_from_w(p, &w);
    // invert a factorwise: unipotent inverses are exponentials of -N
    let neg = |v: &[R]| v.iter().map(|x| -x.clone()).collect::<Vec<R>>();
    let rep_inv = rep_sigma.inverse().expect("representative invertible");
    let a_inv = &(&u_minus_from_w(p, &neg(&w)) * &u_from_z(p, &neg(z))) * &rep_inv;
    let f = &(&a * &p.lambda_matrix()) * &a_inv;
    (f, a)
}

/// The local twisted moment map: F = Ad*(sigma u_z u^-_w) lambda.
pub fn mu_local(p: &ParabolicData, cp: &ChartPoint) -> OrbitPoint {
    let (f, a) = mu_local_in(p, &cp.sigma.representative_in(), &cp.z, &cp.xi);
    OrbitPoint {
        matrix: f,
        witness: Some(a),
    }
}

/// The glued map: dispatches to the chart the point carries. Well defined
/// on overlaps by the compatibility of the local maps.
pub fn mu_global(p: &ParabolicData, cp: &ChartPoint) -> OrbitPoint {
    mu_local(p, cp)
}

/// The affine fiber action in coordinates: factor
/// tau^{-1} g sigma u_z u^-_w = u' u^-' t' and read the image chart point
/// off the primed factors.
pub fn psi_affine_coords<R: Scalar>(
    p: &ParabolicData,
    g: &Matrix<R>,
    rep_sigma: &Matrix<R>,
    z: &[R],
    xi: &[R],
    rep_tau: &Matrix<R>,
) -> Result<(Vec<R>, Vec<R>)> {
    let w = solve_w(p, z, xi);
    let tau_inv = rep_tau.inverse().ok_or(Error::SingularMatrix)?;
    let moved = &(&(&tau_inv * g) * &(rep_sigma * &u_from_z(p, z))) * &u_minus_from_w(p, &w);
    let fac = crate::factor::factor_uul(&moved, p).map_err(|_| Error::OutsideChart)?;
    let z2 = z_from_u(p, &fac.u)?;
    let w2 = w_from_u_minus(p, &fac.u_minus)?;
    let xi2 = xi_from_w(p, &z2, &w2);
    Ok((z2, xi2))
}

/// psi_lambda(g) from the chart of `cp` into the chart of `tau`.
pub fn psi_affine(
    p: &ParabolicData,
    g: &Matrix<GaussianRational>,
    cp: &ChartPoint,
    tau: &WeylCoset,
) -> Result<ChartPoint> {
    let (z2, xi2) = psi_affine_coords(
        p,
        g,
        cp.sigma.representative(),
        &cp.z,
        &cp.xi,
        tau.representative(),
    )?;
    Ok(ChartPoint::new(tau.clone(), z2, xi2))
}

/// Checks psi(g)(psi(h) xi) = psi(gh) xi within the chart of `cp`.
pub fn psi_cocycle_check(
    p: &ParabolicData,
    g: &Matrix<GaussianRational>,
    h: &Matrix<GaussianRational>,
    cp: &ChartPoint,
) -> Result<bool> {
    let sigma = cp.sigma.clone();
    let step = psi_affine(p, h, cp, &sigma)?;
    let lhs = psi_affine(p, g, &step, &sigma)?;
    let rhs = psi_affine(p, &(g * h), cp, &sigma)?;
    Ok(lhs == rhs)
}

/// Chart transition: the same bundle point expressed in the tau chart.
/// Involutive, and the identity when tau = sigma.
pub fn transition(p: &ParabolicData, cp: &ChartPoint, tau: &WeylCoset) -> Result<ChartPoint> {
    let id = Matrix::identity(p.dim());
    let (z2, xi2) = psi_affine_coords(
        p,
        &id,
        cp.sigma.representative(),
        &cp.z,
        &cp.xi,
        tau.representative(),
    )
    .map_err(|e| match e {
        Error::OutsideChart => Error::OutsideOverlap,
        other => other,
    })?;
    Ok(ChartPoint::new(tau.clone(), z2, xi2))
}

/// The global action Psi_lambda(g): move the point and land in the first
/// atlas chart containing the image.
pub fn psi_global(
    p: &ParabolicData,
    atlas: &[WeylCoset],
    g: &Matrix<GaussianRational>,
    cp: &ChartPoint,
) -> Result<ChartPoint> {
    for tau in atlas {
        match psi_affine(p, g, cp, tau) {
            Ok(out) => return Ok(out),
            Err(Error::OutsideChart) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::OutsideChart)
}

/// Invert mu on a witnessed orbit point: locate the chart of the witness,
/// factor it, and read the chart coordinates off the factors.
pub fn mu_inverse(
    p: &ParabolicData,
    atlas: &[WeylCoset],
    orbit_point: &OrbitPoint,
) -> Result<ChartPoint> {
    let witness = orbit_point
        .witness
        .as_ref()
        .ok_or_else(|| Error::Config("mu_inverse requires a witnessed orbit point".into()))?;
    let expected = coadjoint(witness, &p.lambda_matrix()).map_err(|_| Error::SingularMatrix)?;
    if expected != orbit_point.matrix {
        return Err(Error::Config(
            "witness does not reproduce the orbit point".into(),
        ));
    }
    let (idx, fac) = crate::factor::locate_chart(witness, atlas, p)?;
    let z = z_from_u(p, &fac.u)?;
    let w = w_from_u_minus(p, &fac.u_minus)?;
    let xi = xi_from_w(p, &z, &w);
    Ok(ChartPoint::new(atlas[idx].clone(), z, xi))
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

    fn frac(n: i64, d: i64) -> Q {
        Q::from_frac(n, d)
    }

    #[test]
    fn zero_xi_gives_zero_w() {
        let p = parab(&[3, 1, 0]);
        let z = vec![frac(1, 2), frac(-3, 4), frac(5, 1)];
        let xi = vec![Q::zero(); 3];
        assert!(solve_w(&p, &z, &xi).iter().all(|w| w.is_zero()));
    }

    #[test]
    fn zero_w_gives_zero_xi() {
        let p = parab(&[2, 1, -1, -2]);
        let z: Vec<Q> = (0..p.chart_dim()).map(|k| frac(k as i64, 7)).collect();
        let w = vec![Q::zero(); p.chart_dim()];
        assert!(xi_from_w(&p, &z, &w).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn sl2_xi_is_minus_s_w() {
        // lambda = (s/2, -s/2) with s = 4
        let p = parab(&[2, -2]);
        let z = vec![frac(3, 5)];
        let w = vec![frac(-7, 2)];
        let xi = xi_from_w(&p, &z, &w);
        assert_eq!(xi[0], frac(14, 1)); // -s w = -4 * (-7/2)
        assert_eq!(solve_w(&p, &z, &xi), w);
    }

    #[test]
    fn grassmannian_w_is_scaled_xi_transpose() {
        // (p, q) = (2, 1), s = 3: lambda = (1, 1, -2)
        let p = parab(&[1, 1, -2]);
        let z = vec![frac(1, 3), frac(-2, 5)];
        let xi = vec![frac(4, 7), frac(9, 2)];
        let w = solve_w(&p, &z, &xi);
        for k in 0..2 {
            assert_eq!(w[k], -xi[k].clone() * frac(1, 3));
        }
    }

    #[test]
    fn gl3_key_relation_closed_form() {
        // the printed closed forms with lambda_{i,j} = lambda_i - lambda_j
        let p = parab(&[3, 1, 0]);
        let (l12, l23, l13) = (frac(2, 1), frac(1, 1), frac(3, 1));
        let z12 = frac(1, 2);
        let z23 = frac(-2, 3);
        let xi12 = frac(3, 4);
        let xi23 = frac(-1, 5);
        let xi13 = frac(7, 6);
        let z = {
            let mut z = vec![Q::zero(); 3];
            z[p.root_index(0, 1).unwrap()] = z12.clone();
            z[p.root_index(1, 2).unwrap()] = z23.clone();
            z[p.root_index(0, 2).unwrap()] = frac(11, 9);
            z
        };
        let mut xi = vec![Q::zero(); 3];
        xi[p.root_index(0, 1).unwrap()] = xi12.clone();
        xi[p.root_index(1, 2).unwrap()] = xi23.clone();
        xi[p.root_index(0, 2).unwrap()] = xi13.clone();

        let w = solve_w(&p, &z, &xi);

        let half = frac(1, 2);
        let w12 = (-xi12.clone() + half.clone() * xi13.clone() * z23.clone()) / l12.clone();
        let w23 = (-xi23.clone() - half.clone() * xi13.clone() * z12.clone()) / l23.clone();
        let w13 = (-xi13.clone()
            - half.clone() * ((l12.clone() - l23.clone()) / (l12 * l23))
                * (-xi12 + half.clone() * xi13.clone() * z23)
                * (-xi23 - half * xi13 * z12))
            / l13;
        assert_eq!(w[p.root_index(0, 1).unwrap()], w12);
        assert_eq!(w[p.root_index(1, 2).unwrap()], w23);
        assert_eq!(w[p.root_index(0, 2).unwrap()], w13);
    }

    #[test]
    fn key_relation_round_trip() {
        for lambda in [vec![1, -1], vec![3, 1, 0], vec![1, 1, -1, -1], vec![2, 1, 1, 0]] {
            let p = parab(&lambda);
            let m = p.chart_dim();
            let z: Vec<Q> = (0..m).map(|k| frac(k as i64 - 1, 2)).collect();
            let xi: Vec<Q> = (0..m).map(|k| frac(3 * k as i64 + 1, 5)).collect();
            let w = solve_w(&p, &z, &xi);
            assert_eq!(xi_from_w(&p, &z, &w), xi, "lambda = {lambda:?}");
            assert_eq!(solve_w(&p, &z, &xi_from_w(&p, &z, &w)), w);
        }
    }

    #[test]
    fn mu_at_base_point_is_lambda() {
        let p = parab(&[3, 1, 0]);
        let cp = ChartPoint::origin(&p, WeylCoset::identity(3));
        let f = mu_local(&p, &cp);
        assert_eq!(f.matrix, p.lambda_matrix());
    }

    #[test]
    fn sl2_mu_matches_printed_matrix() {
        // lambda = (s/2, -s/2), s = 6
        let s = frac(6, 1);
        let p = parab(&[3, -3]);
        let z = frac(2, 3);
        let xi = frac(-5, 4);
        let w = -xi.clone() / s.clone();
        let cp = ChartPoint::new(WeylCoset::identity(2), vec![z.clone()], vec![xi]);
        let f = mu_local(&p, &cp).matrix;
        let half_s = s * frac(1, 2);
        let two = frac(2, 1);
        let one = frac(1, 1);
        let zw = z.clone() * w.clone();
        assert_eq!(f[(0, 0)], half_s.clone() * (one.clone() + two.clone() * zw.clone()));
        assert_eq!(
            f[(0, 1)],
            half_s.clone() * (-two.clone()) * z.clone() * (one.clone() + zw.clone())
        );
        assert_eq!(f[(1, 0)], half_s.clone() * two.clone() * w);
        assert_eq!(f[(1, 1)], -(half_s * (one + two * zw)));
    }

    #[test]
    fn psi_identity_is_identity() {
        let p = parab(&[1, -1]);
        let cp = ChartPoint::new(WeylCoset::identity(2), vec![frac(1, 2)], vec![frac(3, 4)]);
        let out = psi_affine(&p, &Matrix::identity(2), &cp, &cp.sigma).unwrap();
        assert_eq!(out, cp);
    }

    #[test]
    fn sl2_psi_closed_form() {
        // xi' = (cz+d)^2 xi - s c (cz+d) for g = [[a,b],[c,d]] in the e chart
        let s = frac(4, 1);
        let p = parab(&[2, -2]);
        let (a, b, c, d) = (frac(2, 1), frac(1, 1), frac(3, 1), frac(2, 1));
        let g = Matrix::from_rows(vec![vec![a, b], vec![c.clone(), d.clone()]]);
        let z = frac(1, 5);
        let xi = frac(-2, 7);
        let cp = ChartPoint::new(WeylCoset::identity(2), vec![z.clone()], vec![xi.clone()]);
        let out = psi_affine(&p, &g, &cp, &cp.sigma).unwrap();
        let czd = c.clone() * z + d;
        assert_eq!(out.xi[0], czd.clone() * czd.clone() * xi - s * c * czd);
    }

    #[test]
    fn sl2_coset_swap_formula() {
        // with the signed sl2 representative: xi_sigma = z^2 xi - s z
        let s = frac(4, 1);
        let p = parab(&[2, -2]);
        let sigma = WeylCoset::with_representative(
            vec![1, 0],
            Matrix::from_rows(vec![
                vec![Q::zero(), Q::one()],
                vec![-Q::one(), Q::zero()],
            ]),
        );
        let z = frac(2, 3);
        let xi = frac(5, 7);
        let cp = ChartPoint::new(WeylCoset::identity(2), vec![z.clone()], vec![xi.clone()]);
        let out = transition(&p, &cp, &sigma).unwrap();
        assert_eq!(out.z[0], -z.inv().unwrap());
        assert_eq!(out.xi[0], z.clone() * z * xi - s * cp.z[0].clone());
    }

    #[test]
    fn transition_involutive() {
        let p = parab(&[3, 1, 0]);
        let atlas = weyl_cosets(&p);
        let cp = ChartPoint::new(
            atlas[0].clone(),
            vec![frac(1, 2), frac(2, 3), frac(-1, 4)],
            vec![frac(1, 5), frac(-3, 2), frac(2, 7)],
        );
        for tau in &atlas[1..] {
            let Ok(moved) = transition(&p, &cp, tau) else {
                continue;
            };
            let back = transition(&p, &moved, &atlas[0]).unwrap();
            assert_eq!(back, cp);
        }
    }

    #[test]
    fn equivariance_small() {
        let p = parab(&[1, -1]);
        let atlas = weyl_cosets(&p);
        let g = Matrix::from_rows(vec![
            vec![frac(1, 1), frac(2, 1)],
            vec![frac(1, 2), frac(3, 1)],
        ]);
        let cp = ChartPoint::new(atlas[0].clone(), vec![frac(1, 3)], vec![frac(-2, 5)]);
        let moved = psi_global(&p, &atlas, &g, &cp).unwrap();
        let lhs = mu_global(&p, &moved).matrix;
        let rhs = coadjoint(&g, &mu_global(&p, &cp).matrix).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mu_inverse_round_trip() {
        let p = parab(&[1, 1, -1, -1]);
        let atlas = weyl_cosets(&p);
        let m = p.chart_dim();
        let cp = ChartPoint::new(
            atlas[0].clone(),
            (0..m).map(|k| frac(k as i64 + 1, 3)).collect(),
            (0..m).map(|k| frac(2 * k as i64 - 3, 5)).collect(),
        );
        let f = mu_global(&p, &cp);
        let back = mu_inverse(&p, &atlas, &f).unwrap();
        assert_eq!(back, cp);
        assert_eq!(mu_global(&p, &back), f);
    }

    #[test]
    fn mu_inverse_requires_witness() {
        let p = parab(&[1, -1]);
        let atlas = weyl_cosets(&p);
        let op = OrbitPoint {
            matrix: p.lambda_matrix(),
            witness: None,
        };
        assert!(matches!(
            mu_inverse(&p, &atlas, &op),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn mu_inverse_at_base_point() {
        let p = parab(&[2, -2]);
        let atlas = weyl_cosets(&p);
        let op = OrbitPoint {
            matrix: p.lambda_matrix(),
            witness: Some(Matrix::identity(2)),
        };
        let cp = mu_inverse(&p, &atlas, &op).unwrap();
        assert!(cp.sigma.is_identity());
        assert!(cp.z.iter().all(|v| v.is_zero()));
        assert!(cp.xi.iter().all(|v| v.is_zero()));
    }
}
