//! Symplectic structure on both sides of the moment map: the canonical
//! chart form sum dz wedge dxi, the KKS form on the orbit, pushforwards,
//! and the affine correction to the classical cotangent moment map.

use crate::chart::{u_from_z, ChartPoint};
use crate::error::{Error, Result};
use crate::factor::factor_uul;
use crate::jet::Jet;
use crate::matrix::{bracket, solve_linear, trace_form, Matrix};
use crate::parabolic::ParabolicData;
use crate::scalar::{GaussianRational, Scalar};
use crate::twisted::{mu_local, mu_local_in, psi_affine_coords};

/// A tangent vector to the chart at a fixed point: (dz, dxi) components
/// along `delta_u`.
#[derive(Clone, PartialEq, Debug)]
pub struct ChartTangent {
    pub dz: Vec<GaussianRational>,
    pub dxi: Vec<GaussianRational>,
}

impl ChartTangent {
    pub fn new(dz: Vec<GaussianRational>, dxi: Vec<GaussianRational>) -> Self {
        ChartTangent { dz, dxi }
    }
}

/// omega(v1, v2) for omega = sum_alpha dz^alpha wedge dxi_alpha.
pub fn omega_chart(v1: &ChartTangent, v2: &ChartTangent) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for k in 0..v1.dz.len() {
        acc = acc + v1.dz[k].clone() * v2.dxi[k].clone()
            - v2.dz[k].clone() * v1.dxi[k].clone();
    }
    acc
}

/// The KKS form under the trace identification:
/// omega_F(ad*_X1 F, ad*_X2 F) = -tr(F [X1, X2]).
pub fn omega_orbit(
    f: &Matrix<GaussianRational>,
    x1: &Matrix<GaussianRational>,
    x2: &Matrix<GaussianRational>,
) -> Result<GaussianRational> {
    let minus_f = -f;
    trace_form(&minus_f, &bracket(x1, x2)?)
}

/// Find X with F X - X F = V, i.e. an infinitesimal generator whose orbit
/// direction at F is V. Fails with `NotTangent` when V is not tangent to
/// the orbit at F.
pub fn solve_generator(
    f: &Matrix<GaussianRational>,
    v: &Matrix<GaussianRational>,
) -> Result<Matrix<GaussianRational>> {
    let n = f.dim();
    if v.dim() != n {
        return Err(Error::DimensionMismatch {
            left: v.dim(),
            right: n,
        });
    }
    let flat = |i: usize, j: usize| i * n + j;
    let mut a: Matrix<GaussianRational> = Matrix::zeros(n * n);
    for i in 0..n {
        for j in 0..n {
            let row = flat(i, j);
            for k in 0..n {
                let cur = a[(row, flat(k, j))].clone() + f[(i, k)].clone();
                a[(row, flat(k, j))] = cur;
            }
            for l in 0..n {
                let cur = a[(row, flat(i, l))].clone() - f[(l, j)].clone();
                a[(row, flat(i, l))] = cur;
            }
        }
    }
    let b: Vec<GaussianRational> = (0..n * n).map(|k| v[(k / n, k % n)].clone()).collect();
    let x = solve_linear(&a, &b).ok_or(Error::NotTangent)?;
    Ok(Matrix::from_fn(n, |i, j| x[flat(i, j)].clone()))
}

/// d(mu) along every coordinate direction at once: returns the 2m matrices
/// dF/dz^alpha, dF/dxi_alpha (in that order).
pub fn pushforward_all(
    p: &ParabolicData,
    cp: &ChartPoint,
) -> Vec<Matrix<GaussianRational>> {
    let m = p.chart_dim();
    let lift = |v: &GaussianRational, k: usize| {
        Jet::lift(v.clone(), k, 2 * m).expect("index within arity")
    };
    let zj: Vec<Jet<GaussianRational>> =
        cp.z.iter().enumerate().map(|(k, v)| lift(v, k)).collect();
    let xij: Vec<Jet<GaussianRational>> =
        cp.xi.iter().enumerate().map(|(k, v)| lift(v, m + k)).collect();
    let (fj, _) = mu_local_in(p, &cp.sigma.representative_in(), &zj, &xij);
    (0..2 * m)
        .map(|k| fj.map(|e| e.partial(k)))
        .collect()
}

/// The image of a single chart tangent under d(mu).
pub fn pushforward_mu(
    p: &ParabolicData,
    cp: &ChartPoint,
    v: &ChartTangent,
) -> Matrix<GaussianRational> {
    let lift = |val: &GaussianRational, d: &GaussianRational| Jet {
        value: val.clone(),
        partials: vec![d.clone()],
    };
    let zj: Vec<Jet<GaussianRational>> =
        cp.z.iter().zip(&v.dz).map(|(a, b)| lift(a, b)).collect();
    let xij: Vec<Jet<GaussianRational>> =
        cp.xi.iter().zip(&v.dxi).map(|(a, b)| lift(a, b)).collect();
    let (fj, _) = mu_local_in(p, &cp.sigma.representative_in(), &zj, &xij);
    fj.map(|e| e.partial(0))
}

/// One mismatch found while comparing the two sides of the pullback
/// identity on a pair of tangents.
#[derive(Clone, PartialEq, Debug)]
pub struct PullbackFailure {
    pub a: usize,
    pub b: usize,
    pub lhs: GaussianRational,
    pub rhs: GaussianRational,
}

#[derive(Clone, PartialEq, Debug)]
pub struct PullbackReport {
    pub pairs_checked: usize,
    pub failures: Vec<PullbackFailure>,
}

impl PullbackReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check mu^* omega_orbit = omega_chart on every pair from `tangents`:
/// push each tangent forward, lift to a generator, and compare the KKS
/// pairing with the chart pairing exactly.
///
/// The generators are solved in the frame of the group witness a with
/// F = a lambda^vee a^{-1}: there the condition becomes division by the
/// diagonal gaps lambda_i - lambda_j, and the KKS pairing collapses to
/// -tr(lambda^vee [Y1, Y2]).
pub fn verify_pullback(
    p: &ParabolicData,
    cp: &ChartPoint,
    tangents: &[ChartTangent],
) -> Result<PullbackReport> {
    let n = p.dim();
    let m = p.chart_dim();
    let witness = mu_local(p, cp)
        .witness
        .expect("mu_local always records its witness");
    let witness_inv = witness.inverse().ok_or(Error::SingularMatrix)?;
    let basis = pushforward_all(p, cp);
    let combine = |v: &ChartTangent| {
        let mut acc: Matrix<GaussianRational> = Matrix::zeros(n);
        for k in 0..m {
            if !v.dz[k].is_zero() {
                acc = &acc + &basis[k].scale(&v.dz[k]);
            }
            if !v.dxi[k].is_zero() {
                acc = &acc + &basis[m + k].scale(&v.dxi[k]);
            }
        }
        acc
    };
    let lambda = p.lambda();
    let generator_frame = |v: &ChartTangent| -> Result<Matrix<GaussianRational>> {
        let conj = &(&witness_inv * &combine(v)) * &witness;
        let mut y: Matrix<GaussianRational> = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let gap = lambda[i].clone() - lambda[j].clone();
                if gap.is_zero() {
                    if !conj[(i, j)].is_zero() {
                        return Err(Error::NotTangent);
                    }
                } else {
                    y[(i, j)] = conj[(i, j)].clone() * gap.inv().expect("nonzero gap");
                }
            }
        }
        Ok(y)
    };
    let generators: Vec<Matrix<GaussianRational>> = tangents
        .iter()
        .map(generator_frame)
        .collect::<Result<_>>()?;
    // -tr(lambda^vee [Y1, Y2])
    let pair = |y1: &Matrix<GaussianRational>, y2: &Matrix<GaussianRational>| {
        let mut acc = GaussianRational::zero();
        for i in 0..n {
            for k in 0..n {
                acc = acc
                    + lambda[i].clone()
                        * (y2[(i, k)].clone() * y1[(k, i)].clone()
                            - y1[(i, k)].clone() * y2[(k, i)].clone());
            }
        }
        acc
    };
    let mut failures = Vec::new();
    let mut pairs_checked = 0;
    for a in 0..tangents.len() {
        for b in (a + 1)..tangents.len() {
            pairs_checked += 1;
            let lhs = omega_chart(&tangents[a], &tangents[b]);
            let rhs = pair(&generators[a], &generators[b]);
            if lhs != rhs {
                failures.push(PullbackFailure { a, b, lhs, rhs });
            }
        }
    }
    Ok(PullbackReport {
        pairs_checked,
        failures,
    })
}

/// The chart vector field induced by X through the action: the derivative
/// at t = 0 of the coordinates of psi(I - tX) applied to the point.
pub fn vector_field_chart(
    p: &ParabolicData,
    cp: &ChartPoint,
    x: &Matrix<GaussianRational>,
) -> Result<ChartTangent> {
    let n = p.dim();
    let t: Jet<GaussianRational> =
        Jet::lift(GaussianRational::zero(), 0, 1).expect("index within arity");
    let g = Matrix::from_fn(n, |i, j| {
        let id = if i == j { Jet::one() } else { Jet::zero() };
        id - t.clone() * Jet::constant(x[(i, j)].clone())
    });
    let rep = cp.sigma.representative_in();
    let zj: Vec<Jet<GaussianRational>> = cp.z.iter().map(|v| Jet::constant(v.clone())).collect();
    let xij: Vec<Jet<GaussianRational>> = cp.xi.iter().map(|v| Jet::constant(v.clone())).collect();
    let (z2, xi2) = psi_affine_coords(p, &g, &rep, &zj, &xij, &rep)?;
    Ok(ChartTangent {
        dz: z2.iter().map(|e| e.partial(0)).collect(),
        dxi: xi2.iter().map(|e| e.partial(0)).collect(),
    })
}

/// The naive cotangent moment of X at the point: sum_alpha xi_alpha times
/// the z-component of the vector field of X.
pub fn classical_moment_of(
    p: &ParabolicData,
    cp: &ChartPoint,
    x: &Matrix<GaussianRational>,
) -> Result<GaussianRational> {
    let vf = vector_field_chart(p, cp, x)?;
    let mut acc = GaussianRational::zero();
    for (xi, dz) in cp.xi.iter().zip(&vf.dz) {
        acc = acc + xi.clone() * dz.clone();
    }
    Ok(acc)
}

/// The affine correction to the classical moment of X: the pairing of
/// lambda with the block-diagonal part of the action path's derivative,
/// tr(lambda^vee t'(0) t(0)^{-1}) for the factorization of (I - tX) acting
/// on the point's group witness.
pub fn affine_correction_of(
    p: &ParabolicData,
    cp: &ChartPoint,
    x: &Matrix<GaussianRational>,
) -> Result<GaussianRational> {
    let n = p.dim();
    let t: Jet<GaussianRational> =
        Jet::lift(GaussianRational::zero(), 0, 1).expect("index within arity");
    let g = Matrix::from_fn(n, |i, j| {
        let id = if i == j { Jet::one() } else { Jet::zero() };
        id - t.clone() * Jet::constant(x[(i, j)].clone())
    });
    let rep: Matrix<Jet<GaussianRational>> = cp.sigma.representative_in();
    let rep_inv = rep.inverse().ok_or(Error::SingularMatrix)?;
    let w = crate::twisted::solve_w(p, &cp.z, &cp.xi);
    let zj: Vec<Jet<GaussianRational>> = cp.z.iter().map(|v| Jet::constant(v.clone())).collect();
    let wj: Vec<Jet<GaussianRational>> = w.iter().map(|v| Jet::constant(v.clone())).collect();
    let moved = &(&(&rep_inv * &g) * &(&rep * &u_from_z(p, &zj)))
        * &crate::chart::u_minus_from_w(p, &wj);
    let fac = factor_uul(&moved, p).map_err(|_| Error::OutsideChart)?;
    let t_val = fac.t.map(|e| e.value.clone());
    let t_dot = fac.t.map(|e| e.partial(0));
    let t_inv = t_val.inverse().ok_or(Error::SingularMatrix)?;
    trace_form(&p.lambda_matrix(), &(&t_dot * &t_inv))
}

/// The correction 1-form of a fixed group element in the identity chart:
/// component alpha is tr(lambda^vee (d_alpha t') t'^{-1}) where
/// g u_z = u' u^-' t'. Generic in the scalars so closedness can be checked
/// with nested jets.
pub fn correction_form<R: Scalar>(
    p: &ParabolicData,
    g: &Matrix<R>,
    z: &[R],
) -> Result<Vec<R>> {
    let m = p.chart_dim();
    let zj: Vec<Jet<R>> = z
        .iter()
        .enumerate()
        .map(|(k, v)| Jet::lift(v.clone(), k, m).expect("index within arity"))
        .collect();
    let gj = g.map(|e| Jet::constant(e.clone()));
    let moved = &gj * &u_from_z(p, &zj);
    let fac = factor_uul(&moved, p).map_err(|_| Error::OutsideChart)?;
    let t_val = fac.t.map(|e| e.value.clone());
    let t_inv = t_val.inverse().ok_or(Error::SingularMatrix)?;
    let lam: Matrix<R> = p.lambda_matrix();
    (0..m)
        .map(|alpha| {
            let t_dot = fac.t.map(|e| e.partial(alpha));
            trace_form(&lam, &(&t_dot * &t_inv))
        })
        .collect()
}
