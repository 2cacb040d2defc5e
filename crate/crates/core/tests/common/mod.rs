//! Random generators and independent reference computations shared by the
//! integration tests. Nothing here calls the solvers under test.
#![allow(dead_code)]

use genspectra::{Matrix, SymMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<f64>>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_dense(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Dense {
    (0..r)
        .map(|_| (0..c).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect()
}

pub fn random_sym_dense(rng: &mut ChaCha8Rng, d: usize) -> Dense {
    let mut a = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in i..d {
            let v = rng.random_range(-1.0..1.0);
            a[i][j] = v;
            a[j][i] = v;
        }
    }
    a
}

pub fn to_matrix(a: &Dense) -> Matrix {
    Matrix::from_rows(a).unwrap()
}

pub fn to_sym(a: &Dense) -> SymMatrix {
    SymMatrix::from_rows(a).unwrap()
}

pub fn dense(m: &Matrix) -> Dense {
    m.to_rows()
}

pub fn random_sym(rng: &mut ChaCha8Rng, d: usize) -> SymMatrix {
    to_sym(&random_sym_dense(rng, d))
}

/// Triple-loop product.
pub fn naive_matmul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut c = vec![vec![0.0; m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut s = 0.0;
            for t in 0..k {
                s += a[i][t] * b[t][j];
            }
            c[i][j] = s;
        }
    }
    c
}

pub fn naive_transpose(a: &Dense) -> Dense {
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j]).collect())
        .collect()
}

pub fn naive_trace(a: &Dense) -> f64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

pub fn max_abs_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .fold(0.0, |m, (x, y)| f64::max(m, (x - y).abs()))
}

pub fn frob(a: &Dense) -> f64 {
    a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

/// Leibniz formula over all permutations.
pub fn leibniz_det(a: &Dense) -> f64 {
    fn permute(k: usize, p: &mut Vec<usize>, sign: f64, a: &Dense, acc: &mut f64) {
        let n = p.len();
        if k == n {
            *acc += sign * (0..n).map(|i| a[i][p[i]]).product::<f64>();
            return;
        }
        for i in k..n {
            p.swap(k, i);
            permute(k + 1, p, if i == k { sign } else { -sign }, a, acc);
            p.swap(k, i);
        }
    }
    let mut acc = 0.0;
    permute(0, &mut (0..a.len()).collect(), 1.0, a, &mut acc);
    acc
}

fn inner(x: &[f64], y: &[f64], g: Option<&Dense>) -> f64 {
    match g {
        None => x.iter().zip(y).map(|(a, b)| a * b).sum(),
        Some(g) => {
            let mut s = 0.0;
            for i in 0..x.len() {
                for j in 0..y.len() {
                    s += x[i] * g[i][j] * y[j];
                }
            }
            s
        }
    }
}

/// Modified Gram-Schmidt on the columns of `frame` (a list of columns) in the
/// inner product `xᵀGy` (Euclidean when `g` is `None`).
pub fn orthonormalize(frame: &[Vec<f64>], g: Option<&Dense>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in frame {
        let mut v = v.clone();
        for _ in 0..2 {
            for u in &out {
                let c = inner(u, &v, g);
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = inner(&v, &v, g).sqrt();
        v.iter_mut().for_each(|x| *x /= n);
        out.push(v);
    }
    out
}

/// Random orthogonal matrix (columns from Gram-Schmidt of a random matrix).
pub fn random_orthogonal(rng: &mut ChaCha8Rng, d: usize) -> Dense {
    let cols = orthonormalize(&random_dense(rng, d, d), None);
    naive_transpose(&cols)
}

/// `Q diag(s) Qᵀ` with `s` log-uniform in `[1, cond]`.
pub fn random_spd_dense(rng: &mut ChaCha8Rng, d: usize, cond: f64) -> Dense {
    let q = random_orthogonal(rng, d);
    let s: Vec<f64> = (0..d)
        .map(|i| match i {
            0 => 1.0,
            1 => cond,
            _ => cond.powf(rng.random_range(0.0..1.0)),
        })
        .collect();
    let mut qs = q.clone();
    for row in qs.iter_mut() {
        for (j, x) in row.iter_mut().enumerate() {
            *x *= s[j];
        }
    }
    let m = naive_matmul(&qs, &naive_transpose(&q));
    symmetrized(&m)
}

pub fn symmetrized(m: &Dense) -> Dense {
    let d = m.len();
    (0..d)
        .map(|i| (0..d).map(|j| 0.5 * (m[i][j] + m[j][i])).collect())
        .collect()
}

/// Random frame of `p` columns of length `n`.
pub fn random_frame(rng: &mut ChaCha8Rng, n: usize, p: usize) -> Vec<Vec<f64>> {
    random_dense(rng, p, n)
}

/// `Σ_k f_kᵀ A f_k` for a list of columns.
pub fn trace_objective(a: &Dense, frame: &[Vec<f64>]) -> f64 {
    frame.iter().map(|f| inner(f, f, Some(a))).sum()
}

pub fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    let v = random_dense(rng, 1, d).remove(0);
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

/// `Σ_k v_k v_kᵀ / ‖v_k‖²`-free projector for orthonormalized columns.
pub fn projector(columns: &[Vec<f64>]) -> Dense {
    let q = orthonormalize(columns, None);
    let d = q[0].len();
    let mut p = vec![vec![0.0; d]; d];
    for c in &q {
        for i in 0..d {
            for j in 0..d {
                p[i][j] += c[i] * c[j];
            }
        }
    }
    p
}

/// Sorted ascending copy.
pub fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// Two-pass covariance `Σ_k (x_k − μ)(x_k − μ)ᵀ` for samples given as columns.
pub fn naive_covariance(x: &Dense) -> Dense {
    let d = x.len();
    let n = x[0].len();
    let mu: Vec<f64> = x.iter().map(|r| r.iter().sum::<f64>() / n as f64).collect();
    let mut s = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..n {
                s[i][j] += (x[i][k] - mu[i]) * (x[j][k] - mu[j]);
            }
        }
    }
    s
}

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

pub fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Runs the `genspectra` binary; `{name.csv}` arguments are resolved as fixtures.
pub fn cli(args: &[&str]) -> Run {
    let resolved: Vec<String> = args
        .iter()
        .map(|a| match a.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
            Some(name) => fixture(name),
            None => a.to_string(),
        })
        .collect();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_genspectra"))
        .args(&resolved)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn json(run: &Run) -> serde_json::Value {
    serde_json::from_slice(&run.stdout).expect("JSON document")
}

/// Every command with fixture inputs, for determinism checks.
pub const COMMANDS: &[&[&str]] = &[
    &["eig", "{sym3.csv}"],
    &["eig", "{sym3.csv}", "--format", "csv", "--order", "asc"],
    &["geig", "{a_diag.csv}", "{b_diag.csv}"],
    &["geig", "{sym3.csv}", "{sym3.csv}", "--method", "quick_dirty"],
    &["geig", "{a_pair.csv}", "{b_singular.csv}", "--method", "quick_dirty"],
    &["geig", "{a_pair.csv}", "{b_singular.csv}", "--method", "rigorous", "--format", "csv"],
    &["pca", "{data.csv}", "-p", "2"],
    &["fda", "{labeled.csv}", "-p", "2"],
    &["fda", "{labeled.csv}", "--label-column", "species", "--format", "csv"],
    &["kspca", "{labeled.csv}", "-p", "2"],
    &["kspca", "{labeled.csv}", "-p", "1", "--kernel", "polynomial", "--degree", "3"],
    &["rayleigh", "{sym3.csv}", "--direction", "min", "-p", "2"],
    &["rayleigh", "{a_diag.csv}", "--b", "{b_diag.csv}"],
    &["rayleigh", "{a_diag.csv}", "--vector", "{vector.csv}"],
];

/// Malformed inputs and the location each error message must name.
pub const MALFORMED: &[(&[&str], &str)] = &[
    (&["eig", "{ragged.csv}"], "row 2"),
    (&["eig", "{nonnumeric.csv}"], "row 2, column 2"),
    (&["eig", "{empty.csv}"], "no data rows"),
    (&["eig", "{trailing_comma.csv}"], "row 2"),
    (&["fda", "{duplicate_header.csv}"], "duplicate column name \"a\""),
    (&["fda", "{labeled.csv}", "--label-column", "genus"], "label column \"genus\""),
    (&["pca", "{nonnumeric.csv}"], "row 2, column 2"),
    (&["geig", "{a_diag.csv}", "{missing.csv}"], "missing.csv"),
];
