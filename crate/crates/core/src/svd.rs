//! One-sided Jacobi singular value decomposition.
//!
//! Hestenes' method: repeatedly rotate pairs of columns of the working matrix
//! until all columns are mutually orthogonal, accumulating the rotations in V.
//! Column norms are then the singular values and the normalized columns form
//! U. The method is deterministic, handles rank-deficient input exactly (zero
//! columns stay zero) and reaches near-machine relative accuracy, which the
//! 1e-10 invariants elsewhere in the crate depend on.

use crate::error::{Error, Result};

/// Thin SVD of a `rows × cols` row-major matrix: `a = u · diag(s) · vt` with
/// `u: rows × k`, `vt: k × cols`, `k = min(rows, cols)`, all row-major;
/// singular values sorted descending.
pub(crate) struct ThinSvd {
    pub rows: usize,
    pub cols: usize,
    pub u: Vec<f64>,
    pub s: Vec<f64>,
    pub vt: Vec<f64>,
}

const MAX_SWEEPS: usize = 100;

pub(crate) fn jacobi_svd(rows: usize, cols: usize, data: &[f64]) -> Result<ThinSvd> {
    assert_eq!(data.len(), rows * cols);
    if rows >= cols {
        let (u_cols, s, v_cols) = one_sided(rows, cols, &to_columns(rows, cols, data))?;
        Ok(ThinSvd {
            rows,
            cols,
            u: columns_to_row_major(rows, &u_cols),
            s,
            vt: columns_to_row_major_transposed(cols, &v_cols),
        })
    } else {
        // factor the transpose and swap factors: a = (u' s v'ᵗ)ᵗ = v' s u'ᵗ
        let transposed = transpose(rows, cols, data);
        let (u_cols, s, v_cols) = one_sided(cols, rows, &to_columns(cols, rows, &transposed))?;
        Ok(ThinSvd {
            rows,
            cols,
            u: columns_to_row_major(rows, &v_cols),
            s,
            vt: columns_to_row_major_transposed(cols, &u_cols),
        })
    }
}

/// Core iteration for `m >= n`. Takes and returns column-major storage.
#[allow(clippy::type_complexity)]
fn one_sided(
    m: usize,
    n: usize,
    a_cols: &[Vec<f64>],
) -> Result<(Vec<Vec<f64>>, Vec<f64>, Vec<Vec<f64>>)> {
    let mut g: Vec<Vec<f64>> = a_cols.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut col = vec![0.0; n];
            col[j] = 1.0;
            col
        })
        .collect();

    let tol = 1e-14;
    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut changed = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..m {
                    alpha += g[p][i] * g[p][i];
                    beta += g[q][i] * g[q][i];
                    gamma += g[p][i] * g[q][i];
                }
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                changed = true;
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let mut alpha_new = 0.0;
                let mut beta_new = 0.0;
                for i in 0..m {
                    let gp = g[p][i];
                    let gq = g[q][i];
                    g[p][i] = c * gp - s * gq;
                    g[q][i] = s * gp + c * gq;
                    alpha_new += g[p][i] * g[p][i];
                    beta_new += g[q][i] * g[q][i];
                }
                for i in 0..n {
                    let vp = v[p][i];
                    let vq = v[q][i];
                    v[p][i] = c * vp - s * vq;
                    v[q][i] = s * vp + c * vq;
                }
                // A column annihilated by the rotation (pair was numerically
                // rank one) is left as pure rounding noise parallel to its
                // partner; flush it to exact zero so the sweep terminates.
                if beta_new <= 1e-30 * alpha_new {
                    g[q] = vec![0.0; m];
                } else if alpha_new <= 1e-30 * beta_new {
                    g[p] = vec![0.0; m];
                }
            }
        }
        if !changed {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Factorization(format!(
            "one-sided Jacobi SVD did not converge within {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = g.iter().map(|col| col.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap().then(a.cmp(&b)));

    let mut u_out: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut s_out: Vec<f64> = Vec::with_capacity(n);
    let mut v_out: Vec<Vec<f64>> = Vec::with_capacity(n);
    for &j in &order {
        s_out.push(norms[j]);
        v_out.push(v[j].clone());
        if norms[j] > 0.0 {
            u_out.push(g[j].iter().map(|x| x / norms[j]).collect());
        } else {
            u_out.push(vec![0.0; m]); // completed below
        }
    }
    for j in 0..n {
        if s_out[j] == 0.0 {
            u_out[j] = complete_orthonormal(&u_out[..j], m)?;
        }
    }
    Ok((u_out, s_out, v_out))
}

/// Deterministically picks a unit vector orthogonal to the given columns:
/// the standard basis vector with the largest residual after projection,
/// Gram-Schmidt applied twice.
fn complete_orthonormal(existing: &[Vec<f64>], m: usize) -> Result<Vec<f64>> {
    let orthogonalize = |cand: &mut Vec<f64>| {
        for col in existing {
            let proj: f64 = col.iter().zip(cand.iter()).map(|(a, b)| a * b).sum();
            for (c, e) in cand.iter_mut().zip(col) {
                *c -= proj * e;
            }
        }
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    for basis in 0..m {
        let mut cand = vec![0.0; m];
        cand[basis] = 1.0;
        orthogonalize(&mut cand);
        let norm: f64 = cand.iter().map(|x| x * x).sum::<f64>().sqrt();
        if best.as_ref().is_none_or(|(n, _)| norm > *n) {
            best = Some((norm, cand));
        }
    }
    let (norm, mut cand) = best.expect("m >= 1");
    if norm < 1e-6 {
        return Err(Error::Factorization("could not complete orthonormal basis".into()));
    }
    for c in &mut cand {
        *c /= norm;
    }
    orthogonalize(&mut cand);
    let norm2: f64 = cand.iter().map(|x| x * x).sum::<f64>().sqrt();
    for c in &mut cand {
        *c /= norm2;
    }
    Ok(cand)
}

fn to_columns(rows: usize, cols: usize, row_major: &[f64]) -> Vec<Vec<f64>> {
    (0..cols)
        .map(|j| (0..rows).map(|i| row_major[i * cols + j]).collect())
        .collect()
}

fn transpose(rows: usize, cols: usize, row_major: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            out[j * rows + i] = row_major[i * cols + j];
        }
    }
    out
}

/// Stacks length-`rows` columns side by side into a `rows × k` row-major buffer.
fn columns_to_row_major(rows: usize, cols: &[Vec<f64>]) -> Vec<f64> {
    let k = cols.len();
    let mut out = vec![0.0; rows * k];
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            out[i * k + j] = *x;
        }
    }
    out
}

/// Lays length-`n` columns out as rows of a `k × n` row-major buffer.
fn columns_to_row_major_transposed(n: usize, cols: &[Vec<f64>]) -> Vec<f64> {
    let mut out = Vec::with_capacity(cols.len() * n);
    for col in cols {
        debug_assert_eq!(col.len(), n);
        out.extend_from_slice(col);
    }
    out
}
