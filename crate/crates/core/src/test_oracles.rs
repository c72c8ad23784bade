//! Brute-force reference implementations used only by unit tests.
//!
//! These deliberately avoid the production code paths they are used to check:
//! contraction is an explicit loop over all index values, singular values come
//! from a symmetric eigendecomposition of the Gram matrix, and dense chain
//! reconstruction multiplies site tensors entry by entry.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::tensor::{DenseTensor, Index};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random tensor with entries uniform in [-1, 1) and labels `x0..x{n-1}`.
pub fn rng_tensor(rng: &mut ChaCha8Rng, dims: &[usize]) -> DenseTensor {
    let indices: Vec<Index> = dims
        .iter()
        .enumerate()
        .map(|(k, &d)| Index::bond(format!("x{k}"), d))
        .collect();
    let size: usize = dims.iter().product();
    let data: Vec<f64> = (0..size).map(|_| rng.random_range(-1.0..1.0)).collect();
    DenseTensor::new(indices, data).unwrap()
}

/// Contraction by explicit summation over every index value.
pub fn brute_force_contract(
    a: &DenseTensor,
    b: &DenseTensor,
    pairs: &[(usize, usize)],
) -> DenseTensor {
    let a_dims = a.dims();
    let b_dims = b.dims();
    let a_surv: Vec<usize> =
        (0..a.ndim()).filter(|p| pairs.iter().all(|(pa, _)| pa != p)).collect();
    let b_surv: Vec<usize> =
        (0..b.ndim()).filter(|p| pairs.iter().all(|(_, pb)| pb != p)).collect();

    let out_indices: Vec<Index> = a_surv
        .iter()
        .map(|&p| a.index(p).clone())
        .chain(b_surv.iter().map(|&p| b.index(p).clone()))
        .collect();
    let out_dims: Vec<usize> = out_indices.iter().map(|i| i.dim).collect();
    let out_size: usize = out_dims.iter().product();
    let shared_dims: Vec<usize> = pairs.iter().map(|&(pa, _)| a_dims[pa]).collect();
    let shared_size: usize = shared_dims.iter().product();

    let mut out = vec![0.0f64; out_size];
    let mut out_multi = vec![0usize; out_dims.len()];
    for slot in out.iter_mut() {
        let mut shared_multi = vec![0usize; pairs.len()];
        for _ in 0..shared_size {
            let mut am = vec![0usize; a.ndim()];
            for (k, &p) in a_surv.iter().enumerate() {
                am[p] = out_multi[k];
            }
            for (k, &(pa, _)) in pairs.iter().enumerate() {
                am[pa] = shared_multi[k];
            }
            let mut bm = vec![0usize; b.ndim()];
            for (k, &p) in b_surv.iter().enumerate() {
                bm[p] = out_multi[a_surv.len() + k];
            }
            for (k, &(_, pb)) in pairs.iter().enumerate() {
                bm[pb] = shared_multi[k];
            }
            *slot += a.get(&am) * b.get(&bm);
            crate::tensor::increment_multi(&mut shared_multi, &shared_dims);
        }
        crate::tensor::increment_multi(&mut out_multi, &out_dims);
    }
    DenseTensor::new(out_indices, out).unwrap()
}

/// Singular values of a 2-index tensor via a two-sided Jacobi eigenvalue
/// iteration on the Gram matrix — a different algorithm and code path than the
/// one-sided SVD used by `truncated_factorize`.
pub fn singular_values_by_gram(m: &DenseTensor) -> Vec<f64> {
    assert_eq!(m.ndim(), 2);
    let rows = m.index(0).dim;
    let cols = m.index(1).dim;
    let k = rows.min(cols);
    // gram = m·mᵀ or mᵀ·m, whichever is smaller
    let mut gram = vec![0.0f64; k * k];
    for a in 0..k {
        for b in 0..k {
            let mut acc = 0.0;
            if rows <= cols {
                for j in 0..cols {
                    acc += m.data()[a * cols + j] * m.data()[b * cols + j];
                }
            } else {
                for i in 0..rows {
                    acc += m.data()[i * cols + a] * m.data()[i * cols + b];
                }
            }
            gram[a * k + b] = acc;
        }
    }
    let mut s: Vec<f64> = symmetric_jacobi_eigenvalues(k, &mut gram)
        .into_iter()
        .map(|v| v.max(0.0).sqrt())
        .collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Eigenvalues of a symmetric matrix by classical two-sided Jacobi rotations.
fn symmetric_jacobi_eigenvalues(n: usize, a: &mut [f64]) -> Vec<f64> {
    for _sweep in 0..200 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].abs());
            }
        }
        let scale = (0..n).map(|i| a[i * n + i].abs()).fold(0.0f64, f64::max);
        if off <= 1e-15 * scale.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = a[p * n + i];
                    let aqi = a[q * n + i];
                    a[p * n + i] = c * api - s * aqi;
                    a[q * n + i] = s * api + c * aqi;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}
