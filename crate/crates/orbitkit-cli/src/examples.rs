//! Regression fixtures for the worked examples: closed-form values next to
//! the library's output, with an agreement flag on every record.

use anyhow::{bail, Result};
use serde_json::{json, Value};

use orbitkit::chart::ChartPoint;
use orbitkit::matrix::Matrix;
use orbitkit::parabolic::{build_parabolic, ParabolicData, WeightLambda};
use orbitkit::scalar::GaussianRational;
use orbitkit::twisted::{mu_local, solve_w, transition};
use orbitkit::weyl::WeylCoset;

use crate::{emit, ExamplesArgs};

type Q = GaussianRational;

fn frac(n: i64, d: i64) -> Q {
    Q::from_frac(n, d)
}

fn parab(vals: Vec<Q>) -> ParabolicData {
    build_parabolic(&WeightLambda::new(vals)).expect("fixture weight is valid")
}

fn qjson(x: &Q) -> Value {
    serde_json::to_value(x).expect("scalar serializes")
}

fn mjson(m: &Matrix<Q>) -> Value {
    serde_json::to_value(m).expect("matrix serializes")
}

/// The rank-one fixtures: the moment-map matrix in both charts and the
/// coordinate transition between them, against the closed forms.
fn sl2_fixture() -> Value {
    // lambda = (s/2, -s/2) with s = 2
    let s = frac(2, 1);
    let p = parab(vec![frac(1, 1), frac(-1, 1)]);
    let sigma = WeylCoset::with_representative(
        vec![1, 0],
        Matrix::from_rows(vec![
            vec![Q::zero(), Q::one()],
            vec![-Q::one(), Q::zero()],
        ]),
    );
    let points = [
        (frac(1, 2), frac(3, 4)),
        (frac(-2, 3), frac(5, 1)),
        (frac(7, 5), frac(-1, 6)),
    ];
    let mut records = Vec::new();
    let mut all_ok = true;
    for (z, xi) in points {
        let w = -xi.clone() * s.inv().unwrap();
        let cp = ChartPoint::new(WeylCoset::identity(2), vec![z.clone()], vec![xi.clone()]);
        let computed = mu_local(&p, &cp).matrix;
        let half_s = s.clone() * frac(1, 2);
        let two = frac(2, 1);
        let one = Q::one();
        let zw = z.clone() * w.clone();
        let closed = Matrix::from_rows(vec![
            vec![
                half_s.clone() * (one.clone() + two.clone() * zw.clone()),
                half_s.clone() * (-two.clone()) * z.clone() * (one.clone() + zw.clone()),
            ],
            vec![
                half_s.clone() * two.clone() * w.clone(),
                -(half_s.clone() * (one.clone() + two.clone() * zw.clone())),
            ],
        ]);
        // transition fixtures: z_sigma = -1/z, w_sigma = z^2 w + z,
        // xi_sigma = z^2 xi - s z
        let moved = transition(&p, &cp, &sigma).expect("nonzero z is in the overlap");
        let z_sigma = -z.inv().unwrap();
        let w_sigma = z.clone() * z.clone() * w.clone() + z.clone();
        let xi_sigma = z.clone() * z.clone() * xi.clone() - s.clone() * z.clone();
        let w_sigma_computed = solve_w(&p, &moved.z, &moved.xi)[0].clone();
        let ok = computed == closed
            && moved.z[0] == z_sigma
            && moved.xi[0] == xi_sigma
            && w_sigma_computed == w_sigma;
        all_ok &= ok;
        records.push(json!({
            "z": qjson(&z),
            "xi": qjson(&xi),
            "w": qjson(&w),
            "mu": mjson(&computed),
            "mu_closed_form": mjson(&closed),
            "z_sigma": qjson(&moved.z[0]),
            "z_sigma_closed_form": qjson(&z_sigma),
            "w_sigma": qjson(&w_sigma_computed),
            "w_sigma_closed_form": qjson(&w_sigma),
            "xi_sigma": qjson(&moved.xi[0]),
            "xi_sigma_closed_form": qjson(&xi_sigma),
            "agree": ok,
        }));
    }
    json!({
        "schema": "1",
        "command": "examples",
        "case": "sl2",
        "s": qjson(&s),
        "lambda": [qjson(&frac(1, 1)), qjson(&frac(-1, 1))],
        "records": records,
        "passed": all_ok,
    })
}

/// The regular gl3 fixture: the solved w against the printed closed forms.
fn gl3_fixture() -> Value {
    let p = parab(vec![frac(3, 1), frac(1, 1), frac(0, 1)]);
    let (l12, l23, l13) = (frac(2, 1), frac(1, 1), frac(3, 1));
    let points = [
        ([frac(1, 2), frac(-2, 3), frac(1, 5)], [frac(3, 4), frac(-1, 5), frac(7, 6)]),
        ([frac(2, 7), frac(1, 3), frac(-3, 2)], [frac(-4, 9), frac(5, 2), frac(1, 8)]),
    ];
    let half = frac(1, 2);
    let mut records = Vec::new();
    let mut all_ok = true;
    for (zv, xiv) in points {
        let i = |a: usize, b: usize| p.root_index(a, b).unwrap();
        let mut z = vec![Q::zero(); 3];
        let mut xi = vec![Q::zero(); 3];
        z[i(0, 1)] = zv[0].clone();
        z[i(1, 2)] = zv[1].clone();
        z[i(0, 2)] = zv[2].clone();
        xi[i(0, 1)] = xiv[0].clone();
        xi[i(1, 2)] = xiv[1].clone();
        xi[i(0, 2)] = xiv[2].clone();
        let w = solve_w(&p, &z, &xi);
        let w12 = (-xiv[0].clone() + half.clone() * xiv[2].clone() * zv[1].clone()) / l12.clone();
        let w23 = (-xiv[1].clone() - half.clone() * xiv[2].clone() * zv[0].clone()) / l23.clone();
        let w13 = (-xiv[2].clone()
            - half.clone() * ((l12.clone() - l23.clone()) / (l12.clone() * l23.clone()))
                * (-xiv[0].clone() + half.clone() * xiv[2].clone() * zv[1].clone())
                * (-xiv[1].clone() - half.clone() * xiv[2].clone() * zv[0].clone()))
            / l13.clone();
        let ok = w[i(0, 1)] == w12 && w[i(1, 2)] == w23 && w[i(0, 2)] == w13;
        all_ok &= ok;
        records.push(json!({
            "z": zv.iter().map(qjson).collect::<Vec<_>>(),
            "xi": xiv.iter().map(qjson).collect::<Vec<_>>(),
            "w": [qjson(&w[i(0, 1)]), qjson(&w[i(1, 2)]), qjson(&w[i(0, 2)])],
            "w_closed_form": [qjson(&w12), qjson(&w23), qjson(&w13)],
            "agree": ok,
        }));
    }
    json!({
        "schema": "1",
        "command": "examples",
        "case": "gl3",
        "lambda": [qjson(&frac(3, 1)), qjson(&frac(1, 1)), qjson(&frac(0, 1))],
        "records": records,
        "passed": all_ok,
    })
}

/// Grassmannian fixtures: w = -xi^T / s and the block form of mu at z = 0
/// for (p, q) in {(1,1), (2,1), (2,2)} with s = p + q.
fn supq_fixture() -> Value {
    let mut records = Vec::new();
    let mut all_ok = true;
    for (bp, bq) in [(1usize, 1usize), (2, 1), (2, 2)] {
        let s = frac((bp + bq) as i64, 1);
        let mut vals = vec![frac(bq as i64, 1); bp];
        vals.extend(vec![frac(-(bp as i64), 1); bq]);
        let par = parab(vals.clone());
        let m = par.chart_dim();
        let xi: Vec<Q> = (0..m).map(|k| frac(2 * k as i64 + 1, 3)).collect();
        let z = vec![Q::zero(); m];
        let w = solve_w(&par, &z, &xi);
        let w_ok = w
            .iter()
            .zip(&xi)
            .all(|(wv, xv)| *wv == -xv.clone() * s.inv().unwrap());
        // the block matrix: lambda^vee plus -xi^T in the lower-left block
        let mut closed: Matrix<Q> = par.lambda_matrix();
        for (k, root) in par.delta_u().iter().enumerate() {
            closed[(root.j, root.i)] = -xi[k].clone();
        }
        let cp = ChartPoint::new(WeylCoset::identity(par.dim()), z, xi.clone());
        let computed = mu_local(&par, &cp).matrix;
        let ok = w_ok && computed == closed;
        all_ok &= ok;
        records.push(json!({
            "p": bp,
            "q": bq,
            "s": qjson(&s),
            "lambda": vals.iter().map(qjson).collect::<Vec<_>>(),
            "xi": xi.iter().map(qjson).collect::<Vec<_>>(),
            "w": w.iter().map(qjson).collect::<Vec<_>>(),
            "mu_at_z0": mjson(&computed),
            "mu_at_z0_closed_form": mjson(&closed),
            "agree": ok,
        }));
    }
    json!({
        "schema": "1",
        "command": "examples",
        "case": "supq",
        "records": records,
        "passed": all_ok,
    })
}

pub fn run(args: &ExamplesArgs) -> Result<()> {
    let value = match args.case.as_str() {
        "sl2" => sl2_fixture(),
        "gl3" => gl3_fixture(),
        "supq" => supq_fixture(),
        other => bail!("unknown case {other:?}; expected sl2, gl3, or supq"),
    };
    if value["passed"] != Value::Bool(true) {
        emit(&args.common.output, &value)?;
        bail!("fixture disagreement in case {}", args.case);
    }
    emit(&args.common.output, &value)
}
