//! Weight data and the parabolic it determines: block structure, the
//! nilradical root set Delta(u), and root heights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{GaussianRational, Scalar};

/// A positive root epsilon_i - epsilon_j of gl_n, i < j. Its root vector is
/// the elementary matrix e_{ij}; the opposite root vector is e_{ji}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

impl Root {
    pub fn height(&self) -> usize {
        self.j - self.i
    }
}

/// The diagonal weight: lambda^vee = diag(values), lambda its trace-form dual.
#[derive(Clone, PartialEq, Debug)]
pub struct WeightLambda {
    values: Vec<GaussianRational>,
}

impl WeightLambda {
    pub fn new(values: Vec<GaussianRational>) -> Self {
        WeightLambda { values }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[GaussianRational] {
        &self.values
    }
}

/// Everything derived from a block-sorted weight: block sizes, Delta(u)
/// ordered by (height, lex), and index lookups used by the chart solvers.
#[derive(Clone, PartialEq, Debug)]
pub struct ParabolicData {
    n: usize,
    lambda: Vec<GaussianRational>,
    block_sizes: Vec<usize>,
    block_of: Vec<usize>,
    delta_u: Vec<Root>,
}

/// Blocks are maximal runs of equal lambda entries; U is then literally
/// block-upper unitriangular, which makes the big-cell factorization a
/// block elimination.
pub fn build_parabolic(lambda: &WeightLambda) -> Result<ParabolicData> {
    let vals = lambda.values();
    let n = vals.len();
    if n == 0 || vals.iter().all(|v| *v == vals[0]) {
        return Err(Error::ConstantLambda);
    }
    let mut block_sizes = Vec::new();
    let mut block_of = vec![0usize; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && vals[end] == vals[start] {
            end += 1;
        }
        for k in start..end {
            block_of[k] = block_sizes.len();
        }
        block_sizes.push(end - start);
        start = end;
    }
    // block-sorted means a value never recurs in a later block
    for b in 0..block_sizes.len() {
        for c in (b + 1)..block_sizes.len() {
            let ib = block_of.iter().position(|&x| x == b).unwrap();
            let ic = block_of.iter().position(|&x| x == c).unwrap();
            if vals[ib] == vals[ic] {
                return Err(Error::NotBlockSorted);
            }
        }
    }
    let mut delta_u: Vec<Root> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| block_of[i] < block_of[j])
        .map(|(i, j)| Root { i, j })
        .collect();
    delta_u.sort_by_key(|r| (r.height(), r.i, r.j));
    Ok(ParabolicData {
        n,
        lambda: vals.to_vec(),
        block_sizes,
        block_of,
        delta_u,
    })
}

impl ParabolicData {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &[GaussianRational] {
        &self.lambda
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn block_of(&self, index: usize) -> usize {
        self.block_of[index]
    }

    /// Roots of the nilradical opposite, ordered by (height, lex); this is
    /// the induction order of the key-relation solver.
    pub fn delta_u(&self) -> &[Root] {
        &self.delta_u
    }

    pub fn root_index(&self, i: usize, j: usize) -> Option<usize> {
        self.delta_u.iter().position(|r| r.i == i && r.j == j)
    }

    /// dim(G/Q) = |Delta(u)|.
    pub fn chart_dim(&self) -> usize {
        self.delta_u.len()
    }

    /// lambda^vee as a matrix over any scalar ring.
    pub fn lambda_matrix<R: Scalar>(&self) -> Matrix<R> {
        Matrix::from_fn(self.n, |i, j| {
            if i == j {
                R::embed(&self.lambda[i])
            } else {
                R::zero()
            }
        })
    }

    /// lambda_i - lambda_j for a root of Delta(u); nonzero by construction.
    pub fn lambda_gap(&self, root: &Root) -> GaussianRational {
        self.lambda[root.i].clone() - self.lambda[root.j].clone()
    }

    /// lambda scaled by a constant; used by the CLI scale flag.
    pub fn scaled(&self, c: &GaussianRational) -> Result<ParabolicData> {
        build_parabolic(&WeightLambda::new(
            self.lambda.iter().map(|v| v.clone() * c.clone()).collect(),
        ))
    }
}
