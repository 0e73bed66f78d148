//! The chart atlas index: minimal-length representatives of W/W_lambda.

use itertools::Itertools;

use crate::matrix::Matrix;
use crate::parabolic::ParabolicData;
use crate::scalar::{GaussianRational, Scalar};

/// A coset of W/W_lambda with a fixed representative matrix.
///
/// The default representative is the plain permutation matrix of the
/// minimal-length permutation; tests for printed fixtures may override it
/// (the construction is representative-consistent, not canonical).
#[derive(Clone, PartialEq, Debug)]
pub struct WeylCoset {
    perm: Vec<usize>,
    rep: Matrix<GaussianRational>,
}

impl WeylCoset {
    pub fn from_permutation(perm: Vec<usize>) -> Self {
        let n = perm.len();
        let rep = Matrix::from_fn(n, |i, j| {
            if perm[j] == i {
                GaussianRational::one()
            } else {
                GaussianRational::zero()
            }
        });
        WeylCoset { perm, rep }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_permutation((0..n).collect())
    }

    /// Same coset, different fixed representative (e.g. a signed matrix).
    pub fn with_representative(perm: Vec<usize>, rep: Matrix<GaussianRational>) -> Self {
        WeylCoset { perm, rep }
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn representative(&self) -> &Matrix<GaussianRational> {
        &self.rep
    }

    pub fn representative_in<R: Scalar>(&self) -> Matrix<R> {
        self.rep.map(R::embed)
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }
}

/// Wire format for a weight together with its chart atlas.
#[derive(serde::Serialize, serde::Deserialize)]
pub struct AtlasJson {
    pub lambda: Vec<GaussianRational>,
    pub blocks: Vec<usize>,
    pub delta_u: Vec<[usize; 2]>,
    pub cosets: Vec<Vec<usize>>,
}

pub fn atlas_json(p: &ParabolicData, atlas: &[WeylCoset]) -> AtlasJson {
    AtlasJson {
        lambda: p.lambda().to_vec(),
        blocks: p.block_sizes().to_vec(),
        delta_u: p.delta_u().iter().map(|r| [r.i, r.j]).collect(),
        cosets: atlas.iter().map(|c| c.permutation().to_vec()).collect(),
    }
}

/// All minimal-length coset representatives, in lexicographic order of the
/// underlying permutation. A permutation is minimal in its coset iff it is
/// increasing on each lambda-block.
pub fn weyl_cosets(p: &ParabolicData) -> Vec<WeylCoset> {
    let n = p.dim();
    (0..n)
        .permutations(n)
        .filter(|perm| {
            (1..n).all(|k| p.block_of(k - 1) != p.block_of(k) || perm[k - 1] < perm[k])
        })
        .sorted()
        .map(WeylCoset::from_permutation)
        .collect()
}
