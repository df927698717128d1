//! Reference implementations written straight from the definitions, on full
//! antisymmetric arrays, with no code shared with the library.

#![allow(dead_code)]

use hcf_core::{Bracket, Matrix, C64};

pub struct Full {
    pub n: usize,
    pub data: Vec<C64>,
}

impl Full {
    pub fn from_bracket(mu: &Bracket) -> Self {
        let n = mu.dim();
        let mut data = vec![C64::new(0.0, 0.0); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i < j {
                        let v = mu.get(i, j, k);
                        data[(i * n + j) * n + k] = v;
                        data[(j * n + i) * n + k] = -v;
                    }
                }
            }
        }
        Self { n, data }
    }

    pub fn at(&self, i: usize, j: usize, k: usize) -> C64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    pub fn to_bracket(&self) -> Bracket {
        let n = self.n;
        let mut out = Bracket::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    out.set(i, j, k, self.at(i, j, k));
                }
            }
        }
        out
    }
}

/// `K_ab = ½ Σ_{i<j} μ_ij^a conj(μ_ij^b)`.
pub fn k_oracle(mu: &Bracket) -> Matrix {
    let f = Full::from_bracket(mu);
    let n = f.n;
    Matrix::from_fn(n, n, |a, b| {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in i + 1..n {
                acc += f.at(i, j, a) * f.at(i, j, b).conj();
            }
        }
        acc * 0.5
    })
}

/// `(π(A)μ)(e_i, e_j) = Aμ(e_i, e_j) − μ(Ae_i, e_j) − μ(e_i, Ae_j)`.
pub fn pi_oracle(a: &Matrix, mu: &Bracket) -> Bracket {
    let f = Full::from_bracket(mu);
    let n = f.n;
    let mut out = Full { n, data: vec![C64::new(0.0, 0.0); n * n * n] };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for m in 0..n {
                    acc += a[(k, m)] * f.at(i, j, m);
                    acc -= a[(m, i)] * f.at(m, j, k);
                    acc -= a[(m, j)] * f.at(i, m, k);
                }
                out.data[(i * n + j) * n + k] = acc;
            }
        }
    }
    out.to_bracket()
}

/// `Σ_{i<j,k} μ_ij^k conj(λ_ij^k)`.
pub fn inner_oracle(mu: &Bracket, lambda: &Bracket) -> C64 {
    let n = mu.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                acc += mu.get(i, j, k) * lambda.get(i, j, k).conj();
            }
        }
    }
    acc
}

/// `tr(A Bᴴ)`.
pub fn endo_inner_oracle(a: &Matrix, b: &Matrix) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(i, j)].conj();
        }
    }
    acc
}

pub fn norm_sq_oracle(mu: &Bracket) -> f64 {
    inner_oracle(mu, mu).re
}

/// Rank by Gaussian elimination with partial pivoting.
pub fn rank_oracle(mut rows: Vec<Vec<C64>>, tol: f64) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let pivot = (rank..rows.len()).max_by(|&x, &y| rows[x][c].norm().total_cmp(&rows[y][c].norm()));
        let Some(p) = pivot else { break };
        if rows[p][c].norm() <= tol {
            continue;
        }
        rows.swap(rank, p);
        let pv = rows[rank][c];
        for r in 0..rows.len() {
            if r != rank {
                let factor = rows[r][c] / pv;
                if factor.norm() > 0.0 {
                    for cc in c..cols {
                        let sub = factor * rows[rank][cc];
                        rows[r][cc] -= sub;
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `dim Der(μ)` as `n² − rank` of the linear map `A ↦ π(A)μ`.
pub fn der_dim_oracle(mu: &Bracket) -> usize {
    let n = mu.dim();
    let pairs = n * (n - 1) / 2;
    let mut rows = vec![vec![C64::new(0.0, 0.0); n * n]; pairs * n];
    for a in 0..n {
        for b in 0..n {
            let mut e = Matrix::zeros(n, n);
            e[(a, b)] = C64::new(1.0, 0.0);
            let img = pi_oracle(&e, mu);
            let mut r = 0;
            for i in 0..n {
                for j in i + 1..n {
                    for k in 0..n {
                        rows[r][a * n + b] = img.get(i, j, k);
                        r += 1;
                    }
                }
            }
        }
    }
    n * n - rank_oracle(rows, 1e-9)
}

/// Matrix exponential by scaling and squaring of a Taylor series.
pub fn expm_oracle(a: &Matrix) -> Matrix {
    let n = a.nrows();
    let norm = a.iter().map(|z| z.norm()).sum::<f64>();
    let squarings = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let scaled = a * C64::new(0.5f64.powi(squarings), 0.0);
    let mut term = Matrix::identity(n, n);
    let mut sum = Matrix::identity(n, n);
    for k in 1..30 {
        term = &term * &scaled * C64::new(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}
