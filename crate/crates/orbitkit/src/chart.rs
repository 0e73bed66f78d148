//! Chart coordinates: the exponential parametrizations of U and U^- and
//! the bundle-side point representation (sigma, z, xi).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{exp_nilpotent, log_unipotent, Matrix};
use crate::parabolic::ParabolicData;
use crate::scalar::{GaussianRational, Scalar};
use crate::weyl::WeylCoset;

/// A point of the twisted cotangent bundle in a fixed chart: coset index,
/// base coordinates z and covector coordinates xi, both along `delta_u`.
#[derive(Clone, PartialEq, Debug)]
pub struct ChartPoint {
    pub sigma: WeylCoset,
    pub z: Vec<GaussianRational>,
    pub xi: Vec<GaussianRational>,
}

impl ChartPoint {
    pub fn new(sigma: WeylCoset, z: Vec<GaussianRational>, xi: Vec<GaussianRational>) -> Self {
        ChartPoint { sigma, z, xi }
    }

    pub fn origin(p: &ParabolicData, sigma: WeylCoset) -> Self {
        ChartPoint {
            sigma,
            z: vec![GaussianRational::zero(); p.chart_dim()],
            xi: vec![GaussianRational::zero(); p.chart_dim()],
        }
    }
}

/// u_z = exp(sum z^alpha E_alpha).
pub fn u_from_z<R: Scalar>(p: &ParabolicData, z: &[R]) -> Matrix<R> {
    let mut nil = Matrix::zeros(p.dim());
    for (k, root) in p.delta_u().iter().enumerate() {
        nil[(root.i, root.j)] = z[k].clone();
    }
    exp_nilpotent(&nil).expect("strictly block-upper matrix is nilpotent")
}

/// u^-_w = exp(sum w_alpha E_{-alpha}).
pub fn u_minus_from_w<R: Scalar>(p: &ParabolicData, w: &[R]) -> Matrix<R> {
    let mut nil = Matrix::zeros(p.dim());
    for (k, root) in p.delta_u().iter().enumerate() {
        nil[(root.j, root.i)] = w[k].clone();
    }
    exp_nilpotent(&nil).expect("strictly block-lower matrix is nilpotent")
}

fn coords_from_log<R: Scalar>(
    p: &ParabolicData,
    log: &Matrix<R>,
    lower: bool,
) -> Result<Vec<R>> {
    let n = p.dim();
    let mut coords = vec![R::zero(); p.chart_dim()];
    for i in 0..n {
        for j in 0..n {
            let entry = log[(i, j)].clone();
            if entry.is_zero() {
                continue;
            }
            let idx = if lower {
                p.root_index(j, i)
            } else {
                p.root_index(i, j)
            };
            match idx {
                Some(k) => coords[k] = entry,
                None => return Err(Error::WrongSupport),
            }
        }
    }
    Ok(coords)
}

/// Inverse of `u_from_z`; errors if u is not unipotent with support in
/// Delta(u).
pub fn z_from_u<R: Scalar>(p: &ParabolicData, u: &Matrix<R>) -> Result<Vec<R>> {
    let log = log_unipotent(u).map_err(|_| Error::WrongSupport)?;
    coords_from_log(p, &log, false)
}

/// Inverse of `u_minus_from_w`.
pub fn w_from_u_minus<R: Scalar>(p: &ParabolicData, u_minus: &Matrix<R>) -> Result<Vec<R>> {
    let log = log_unipotent(u_minus).map_err(|_| Error::WrongSupport)?;
    coords_from_log(p, &log, true)
}

/// Wire format for chart points: sigma as a permutation array, z and xi as
/// sparse maps keyed by "i,j" root labels (0-based).
#[derive(Serialize, Deserialize)]
pub struct ChartPointJson {
    pub sigma: Vec<usize>,
    pub z: BTreeMap<String, GaussianRational>,
    pub xi: BTreeMap<String, GaussianRational>,
}

impl ChartPoint {
    pub fn to_json(&self, p: &ParabolicData) -> ChartPointJson {
        let key = |r: &crate::parabolic::Root| format!("{},{}", r.i, r.j);
        let pack = |v: &[GaussianRational]| {
            p.delta_u()
                .iter()
                .zip(v)
                .filter(|(_, x)| !x.is_zero())
                .map(|(r, x)| (key(r), x.clone()))
                .collect()
        };
        ChartPointJson {
            sigma: self.sigma.permutation().to_vec(),
            z: pack(&self.z),
            xi: pack(&self.xi),
        }
    }

    pub fn from_json(p: &ParabolicData, json: &ChartPointJson) -> Result<Self> {
        if json.sigma.len() != p.dim() {
            return Err(Error::Config(format!(
                "sigma permutation has length {}, expected {}",
                json.sigma.len(),
                p.dim()
            )));
        }
        let unpack = |m: &BTreeMap<String, GaussianRational>| -> Result<Vec<GaussianRational>> {
            let mut v = vec![GaussianRational::zero(); p.chart_dim()];
            for (k, x) in m {
                let parts: Vec<&str> = k.split(',').collect();
                let parse = |s: &str| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Config(format!("bad root key {k:?}")))
                };
                if parts.len() != 2 {
                    return Err(Error::Config(format!("bad root key {k:?}")));
                }
                let (i, j) = (parse(parts[0])?, parse(parts[1])?);
                let idx = p
                    .root_index(i, j)
                    .ok_or_else(|| Error::Config(format!("({i},{j}) is not a root of Delta(u)")))?;
                v[idx] = x.clone();
            }
            Ok(v)
        };
        Ok(ChartPoint {
            sigma: WeylCoset::from_permutation(json.sigma.clone()),
            z: unpack(&json.z)?,
            xi: unpack(&json.xi)?,
        })
    }
}
