//! Dense tensors with labeled indices, plus the re-layout, contraction and
//! factorization primitives every other module builds on.
//!
//! A [`DenseTensor`] is an n-index array of `f64` stored flat in row-major
//! order over its index order. Indices carry a label, a dimension and a
//! [`IndexRole`]. All operations are pure: they validate their inputs, build a
//! new tensor and never mutate their arguments.

use crate::error::{Error, Result};
use crate::svd::jacobi_svd;

/// What an index means inside a larger network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexRole {
    /// Feeds activations into a layer.
    Input,
    /// Carries activations out of a layer.
    Output,
    /// Internal index summed over inside a tensor network.
    Bond,
}

impl IndexRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            IndexRole::Input => "input",
            IndexRole::Output => "output",
            IndexRole::Bond => "bond",
        }
    }

    pub fn parse(s: &str) -> Result<IndexRole> {
        match s {
            "input" => Ok(IndexRole::Input),
            "output" => Ok(IndexRole::Output),
            "bond" => Ok(IndexRole::Bond),
            other => Err(Error::InvalidArgument(format!("unknown index role `{other}`"))),
        }
    }
}

/// One labeled dimension of a tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Index {
    pub label: String,
    pub dim: usize,
    pub role: IndexRole,
}

impl Index {
    pub fn new(label: impl Into<String>, dim: usize, role: IndexRole) -> Self {
        Index { label: label.into(), dim, role }
    }

    pub fn input(label: impl Into<String>, dim: usize) -> Self {
        Index::new(label, dim, IndexRole::Input)
    }

    pub fn output(label: impl Into<String>, dim: usize) -> Self {
        Index::new(label, dim, IndexRole::Output)
    }

    pub fn bond(label: impl Into<String>, dim: usize) -> Self {
        Index::new(label, dim, IndexRole::Bond)
    }
}

/// An n-index array of 64-bit floats, row-major over the index order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    indices: Vec<Index>,
    data: Vec<f64>,
}

impl DenseTensor {
    /// Builds a tensor, enforcing the type invariants: every dim ≥ 1, labels
    /// unique, `data.len()` equal to the product of dims, all elements finite.
    pub fn new(indices: Vec<Index>, data: Vec<f64>) -> Result<Self> {
        for idx in &indices {
            if idx.dim == 0 {
                return Err(Error::InvalidArgument(format!(
                    "index `{}` has dimension 0; dims must be >= 1",
                    idx.label
                )));
            }
        }
        for (i, a) in indices.iter().enumerate() {
            for b in indices.iter().skip(i + 1) {
                if a.label == b.label {
                    return Err(Error::Label(format!("duplicate index label `{}`", a.label)));
                }
            }
        }
        let size: usize = indices.iter().map(|i| i.dim).product();
        if data.len() != size {
            return Err(Error::ShapeMismatch(format!(
                "data length {} does not match index-product {}",
                data.len(),
                size
            )));
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("non-finite element {bad}")));
        }
        Ok(DenseTensor { indices, data })
    }

    /// A 0-index tensor holding a single value.
    pub fn scalar(value: f64) -> Result<Self> {
        DenseTensor::new(vec![], vec![value])
    }

    pub fn zeros(indices: Vec<Index>) -> Result<Self> {
        let size: usize = indices.iter().map(|i| i.dim).product();
        DenseTensor::new(indices, vec![0.0; size])
    }

    /// Builds a tensor by evaluating `f` at every multi-index.
    pub fn from_fn(indices: Vec<Index>, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let dims: Vec<usize> = indices.iter().map(|i| i.dim).collect();
        let size: usize = dims.iter().product();
        let mut data = Vec::with_capacity(size);
        let mut multi = vec![0usize; dims.len()];
        for _ in 0..size {
            data.push(f(&multi));
            increment_multi(&mut multi, &dims);
        }
        DenseTensor::new(indices, data)
    }

    pub fn indices(&self) -> &[Index] {
        &self.indices
    }

    pub fn index(&self, position: usize) -> &Index {
        &self.indices[position]
    }

    pub fn ndim(&self) -> usize {
        self.indices.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i.dim).collect()
    }

    pub fn size(&self) -> usize {
        self.data.len()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn position_of(&self, label: &str) -> Option<usize> {
        self.indices.iter().position(|i| i.label == label)
    }

    /// Element access by multi-index (row-major).
    pub fn get(&self, multi: &[usize]) -> f64 {
        self.data[self.flat_offset(multi)]
    }

    fn flat_offset(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.ndim());
        let mut off = 0usize;
        for (m, idx) in multi.iter().zip(&self.indices) {
            debug_assert!(*m < idx.dim);
            off = off * idx.dim + m;
        }
        off
    }

    /// Frobenius norm of the flattened data.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &DenseTensor) -> Result<f64> {
        if self.dims() != other.dims() {
            return Err(Error::ShapeMismatch(format!(
                "cannot compare shapes {:?} and {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// ‖self − other‖_F / max(‖other‖_F, eps-floor).
    pub fn rel_fro_diff(&self, other: &DenseTensor) -> Result<f64> {
        if self.dims() != other.dims() {
            return Err(Error::ShapeMismatch(format!(
                "cannot compare shapes {:?} and {:?}",
                self.dims(),
                other.dims()
            )));
        }
        let diff: f64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        Ok(diff / other.frobenius_norm().max(f64::MIN_POSITIVE))
    }

    /// Replaces the label of one index; the new label must stay unique.
    pub fn relabel(&self, position: usize, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if position >= self.ndim() {
            return Err(Error::InvalidArgument(format!("position {position} out of range")));
        }
        for (p, idx) in self.indices.iter().enumerate() {
            if p != position && idx.label == label {
                return Err(Error::Label(format!("label `{label}` already present")));
            }
        }
        let mut indices = self.indices.clone();
        indices[position].label = label;
        Ok(DenseTensor { indices, data: self.data.clone() })
    }

    /// Replaces the full index metadata; dims must match the existing layout.
    pub fn with_indices(&self, indices: Vec<Index>) -> Result<Self> {
        let new_dims: Vec<usize> = indices.iter().map(|i| i.dim).collect();
        if new_dims != self.dims() {
            return Err(Error::ShapeMismatch(format!(
                "replacement indices have dims {:?}, tensor has {:?}",
                new_dims,
                self.dims()
            )));
        }
        DenseTensor::new(indices, self.data.clone())
    }

    /// Applies `f` elementwise. The result must still be finite.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        DenseTensor::new(self.indices.clone(), self.data.iter().map(|v| f(*v)).collect())
    }

    /// Reorders indices by `order`; applying the inverse permutation restores
    /// the tensor bit-exactly.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        let n = self.ndim();
        if order.len() != n || !is_permutation(order, n) {
            return Err(Error::InvalidArgument(format!(
                "order {order:?} is not a permutation of 0..{n}"
            )));
        }
        if order.iter().enumerate().all(|(i, o)| i == *o) {
            return Ok(self.clone());
        }
        let old_dims = self.dims();
        let new_indices: Vec<Index> = order.iter().map(|&o| self.indices[o].clone()).collect();
        let new_dims: Vec<usize> = order.iter().map(|&o| old_dims[o]).collect();

        // old strides mapped into new index order
        let mut old_strides = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            old_strides[k] = old_strides[k + 1] * old_dims[k + 1];
        }
        let strides_in_new_order: Vec<usize> = order.iter().map(|&o| old_strides[o]).collect();

        let mut data = vec![0.0; self.data.len()];
        let mut multi = vec![0usize; n];
        let mut src = 0usize;
        for slot in data.iter_mut() {
            *slot = self.data[src];
            // odometer increment, tracking the source offset
            for k in (0..n).rev() {
                multi[k] += 1;
                src += strides_in_new_order[k];
                if multi[k] < new_dims[k] {
                    break;
                }
                src -= strides_in_new_order[k] * new_dims[k];
                multi[k] = 0;
            }
        }
        DenseTensor::new(new_indices, data)
    }

    /// Fuses groups of indices into single indices. `groups`, concatenated,
    /// must be a partition of all index positions; the tensor is first
    /// permuted into that order, then each group collapses to one index whose
    /// dim is the product of member dims and whose label is the member labels
    /// joined by `·`. Element values are a pure re-layout.
    pub fn fuse_indices(&self, groups: &[Vec<usize>]) -> Result<Self> {
        let n = self.ndim();
        let mut seen = vec![false; n];
        let mut flat = Vec::with_capacity(n);
        for g in groups {
            if g.is_empty() {
                return Err(Error::InvalidArgument("empty fuse group".into()));
            }
            for &p in g {
                if p >= n {
                    return Err(Error::InvalidArgument(format!("position {p} out of range")));
                }
                if seen[p] {
                    return Err(Error::InvalidArgument(format!("position {p} duplicated")));
                }
                seen[p] = true;
                flat.push(p);
            }
        }
        if flat.len() != n {
            return Err(Error::InvalidArgument(
                "groups do not cover every index position".into(),
            ));
        }
        let permuted = self.permute(&flat)?;
        let mut indices = Vec::with_capacity(groups.len());
        let mut at = 0usize;
        for g in groups {
            let members = &permuted.indices[at..at + g.len()];
            indices.push(fused_index(members));
            at += g.len();
        }
        DenseTensor::new(indices, permuted.data)
    }

    /// Splits the index at `position` into several indices with the given
    /// dims and labels (row-major sub-index order); inverse of a fuse.
    pub fn split_index(&self, position: usize, dims: &[usize], labels: &[String]) -> Result<Self> {
        if position >= self.ndim() {
            return Err(Error::InvalidArgument(format!("position {position} out of range")));
        }
        if dims.len() != labels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} dims but {} labels",
                dims.len(),
                labels.len()
            )));
        }
        if dims.is_empty() {
            return Err(Error::InvalidArgument("cannot split into zero indices".into()));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidArgument("split dims must be >= 1".into()));
        }
        let prod: usize = dims.iter().product();
        if prod != self.indices[position].dim {
            return Err(Error::ShapeMismatch(format!(
                "split dims {:?} multiply to {}, index dim is {}",
                dims, prod, self.indices[position].dim
            )));
        }
        let role = self.indices[position].role;
        let mut indices = Vec::with_capacity(self.ndim() - 1 + dims.len());
        indices.extend_from_slice(&self.indices[..position]);
        for (d, l) in dims.iter().zip(labels) {
            indices.push(Index::new(l.clone(), *d, role));
        }
        indices.extend_from_slice(&self.indices[position + 1..]);
        // splitting a row-major index in place is metadata-only
        DenseTensor::new(indices, self.data.clone())
    }

    /// Permutes-then-fuses into a 2-index tensor with `row_positions` as the
    /// row group and `col_positions` as the column group. An empty group
    /// yields a singleton dimension.
    pub fn matricize(&self, row_positions: &[usize], col_positions: &[usize]) -> Result<Self> {
        let n = self.ndim();
        let mut seen = vec![false; n];
        for &p in row_positions.iter().chain(col_positions) {
            if p >= n {
                return Err(Error::InvalidArgument(format!("position {p} out of range")));
            }
            if seen[p] {
                return Err(Error::InvalidArgument(format!(
                    "position {p} appears in both row and column groups"
                )));
            }
            seen[p] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument(
                "row and column groups must cover every index position".into(),
            ));
        }
        let order: Vec<usize> = row_positions.iter().chain(col_positions).copied().collect();
        let permuted = self.permute(&order)?;
        let row_members = &permuted.indices[..row_positions.len()];
        let col_members = &permuted.indices[row_positions.len()..];
        let row_idx = fused_index(row_members);
        let col_idx = fused_index(col_members);
        if row_idx.label == col_idx.label {
            return Err(Error::Label(format!(
                "matricization groups fuse to the same label `{}`",
                row_idx.label
            )));
        }
        DenseTensor::new(vec![row_idx, col_idx], permuted.data)
    }

    /// Contracts `self` with `other` over the given `(position_in_self,
    /// position_in_other)` pairs. Surviving indices keep their original order:
    /// `self`'s survivors first, then `other`'s. An empty pair list is the
    /// tensor (outer) product.
    ///
    /// Implemented as permute → matricize → matrix multiply → split.
    pub fn contract_pair(&self, other: &DenseTensor, pairs: &[(usize, usize)]) -> Result<Self> {
        let na = self.ndim();
        let nb = other.ndim();
        let mut used_a = vec![false; na];
        let mut used_b = vec![false; nb];
        for &(pa, pb) in pairs {
            if pa >= na || pb >= nb {
                return Err(Error::InvalidArgument(format!(
                    "contraction pair ({pa},{pb}) out of range"
                )));
            }
            if used_a[pa] || used_b[pb] {
                return Err(Error::InvalidArgument(format!(
                    "position repeated in contraction pairs ({pa},{pb})"
                )));
            }
            used_a[pa] = true;
            used_b[pb] = true;
            if self.indices[pa].dim != other.indices[pb].dim {
                return Err(Error::ShapeMismatch(format!(
                    "contracted dims differ: `{}` has {}, `{}` has {}",
                    self.indices[pa].label,
                    self.indices[pa].dim,
                    other.indices[pb].label,
                    other.indices[pb].dim
                )));
            }
        }
        let a_surv: Vec<usize> = (0..na).filter(|p| !used_a[*p]).collect();
        let b_surv: Vec<usize> = (0..nb).filter(|p| !used_b[*p]).collect();

        let mut surv_indices: Vec<Index> = Vec::with_capacity(a_surv.len() + b_surv.len());
        surv_indices.extend(a_surv.iter().map(|&p| self.indices[p].clone()));
        surv_indices.extend(b_surv.iter().map(|&p| other.indices[p].clone()));
        for (i, x) in surv_indices.iter().enumerate() {
            for y in surv_indices.iter().skip(i + 1) {
                if x.label == y.label {
                    return Err(Error::Label(format!(
                        "surviving indices share label `{}`",
                        x.label
                    )));
                }
            }
        }

        // permute self to (survivors, contracted), other to (contracted, survivors)
        let a_order: Vec<usize> =
            a_surv.iter().copied().chain(pairs.iter().map(|p| p.0)).collect();
        let b_order: Vec<usize> =
            pairs.iter().map(|p| p.1).chain(b_surv.iter().copied()).collect();
        let a_perm = self.permute(&a_order)?;
        let b_perm = other.permute(&b_order)?;

        let rows: usize = a_surv.iter().map(|&p| self.indices[p].dim).product();
        let shared: usize = pairs.iter().map(|&(pa, _)| self.indices[pa].dim).product();
        let cols: usize = b_surv.iter().map(|&p| other.indices[p].dim).product();

        let mut out = vec![0.0f64; rows * cols];
        for i in 0..rows {
            let arow = &a_perm.data[i * shared..(i + 1) * shared];
            let orow = &mut out[i * cols..(i + 1) * cols];
            for (k, &av) in arow.iter().enumerate() {
                if av != 0.0 {
                    let brow = &b_perm.data[k * cols..(k + 1) * cols];
                    for (o, &bv) in orow.iter_mut().zip(brow) {
                        *o += av * bv;
                    }
                }
            }
        }
        DenseTensor::new(surv_indices, out)
    }

    /// Truncated singular value decomposition of a 2-index tensor.
    ///
    /// Keeps the smallest rank `k ≤ chi_max` whose discarded weight
    /// √(Σ discarded s²) is at most `tol·‖m‖_F` (at least one value is always
    /// kept; on exact ties the smaller rank wins). `chi_max = None` means
    /// unbounded.
    pub fn truncated_factorize(&self, chi_max: Option<usize>, tol: f64) -> Result<FactorResult> {
        if self.ndim() != 2 {
            return Err(Error::InvalidArgument(format!(
                "truncated_factorize needs a 2-index tensor, got {} indices",
                self.ndim()
            )));
        }
        if let Some(0) = chi_max {
            return Err(Error::InvalidArgument("chi_max must be >= 1".into()));
        }
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tol must be finite and >= 0, got {tol}")));
        }
        let rows = self.indices[0].dim;
        let cols = self.indices[1].dim;
        let svd = jacobi_svd(rows, cols, &self.data)?;
        let s = &svd.s;
        if s.iter().any(|v| !v.is_finite()) {
            return Err(Error::Factorization("backend produced non-finite singular values".into()));
        }
        let k_full = s.len();

        // suffix sums of squared singular values
        let mut tail = vec![0.0f64; k_full + 1];
        for k in (0..k_full).rev() {
            tail[k] = tail[k + 1] + s[k] * s[k];
        }
        let fro = tail[0].sqrt();
        let budget = tol * fro;
        let hard_cap = chi_max.unwrap_or(k_full).min(k_full).max(1);
        let mut rank = hard_cap;
        for k in 1..=hard_cap {
            if tail[k].sqrt() <= budget {
                rank = k;
                break;
            }
        }
        let discarded_weight = tail[rank].sqrt();

        let bond_label = unique_bond_label(&self.indices[0].label, &self.indices[1].label);
        let mut left_data = Vec::with_capacity(rows * rank);
        for r in 0..rows {
            for c in 0..rank {
                left_data.push(svd.u[r * k_full + c]);
            }
        }
        let mut right_data = Vec::with_capacity(rank * cols);
        right_data.extend_from_slice(&svd.vt[..rank * cols]);
        let left = DenseTensor::new(
            vec![self.indices[0].clone(), Index::bond(bond_label.clone(), rank)],
            left_data,
        )?;
        let right = DenseTensor::new(
            vec![Index::bond(bond_label, rank), self.indices[1].clone()],
            right_data,
        )?;
        Ok(FactorResult {
            left,
            singular_values: s[..rank].to_vec(),
            right,
            discarded_weight,
        })
    }
}

/// Result of a truncated matrix factorization: `left · diag(s) · right`
/// reconstructs the input up to `discarded_weight` in Frobenius norm.
#[derive(Debug, Clone)]
pub struct FactorResult {
    /// 2-index tensor with orthonormal columns.
    pub left: DenseTensor,
    /// Retained singular values, descending, all ≥ 0.
    pub singular_values: Vec<f64>,
    /// 2-index tensor with orthonormal rows.
    pub right: DenseTensor,
    /// √(Σ of squared discarded singular values).
    pub discarded_weight: f64,
}

impl FactorResult {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    /// `left · diag(s) · right` as a dense 2-index tensor.
    pub fn reconstruct(&self) -> Result<DenseTensor> {
        let scaled = scale_rows(&self.right, &self.singular_values)?;
        self.left.contract_pair(&scaled, &[(1, 0)])
    }
}

/// Multiplies row `r` of a 2-index tensor by `factors[r]`.
pub(crate) fn scale_rows(t: &DenseTensor, factors: &[f64]) -> Result<DenseTensor> {
    if t.ndim() != 2 || t.indices[0].dim != factors.len() {
        return Err(Error::ShapeMismatch(format!(
            "scale_rows: tensor rows {} vs {} factors",
            t.indices[0].dim,
            factors.len()
        )));
    }
    let cols = t.indices[1].dim;
    let mut data = t.data.clone();
    for (r, f) in factors.iter().enumerate() {
        for v in &mut data[r * cols..(r + 1) * cols] {
            *v *= f;
        }
    }
    DenseTensor::new(t.indices.clone(), data)
}

/// `n_indices`-way Kronecker delta of dimension `dim`: entry 1 where all
/// indices are equal, else 0.
pub fn delta_tensor(n_indices: usize, dim: usize) -> Result<DenseTensor> {
    if n_indices == 0 {
        return Err(Error::InvalidArgument("delta_tensor needs n_indices >= 1".into()));
    }
    if dim == 0 {
        return Err(Error::InvalidArgument("delta_tensor needs dim >= 1".into()));
    }
    let indices: Vec<Index> =
        (0..n_indices).map(|k| Index::bond(format!("d{k}"), dim)).collect();
    let mut t = DenseTensor::zeros(indices)?;
    let mut stride_sum = 0usize;
    let mut stride = 1usize;
    for _ in 0..n_indices {
        stride_sum += stride;
        stride *= dim;
    }
    // flat offset of (e, e, ..., e) is e * Σ strides
    let _ = stride;
    for e in 0..dim {
        t.data[e * stride_sum] = 1.0;
    }
    Ok(t)
}

fn fused_index(members: &[Index]) -> Index {
    let dim: usize = members.iter().map(|i| i.dim).product();
    let label = members.iter().map(|i| i.label.as_str()).collect::<Vec<_>>().join("·");
    let role = members.first().map(|i| i.role).unwrap_or(IndexRole::Bond);
    Index::new(label, dim, role)
}

fn unique_bond_label(a: &str, b: &str) -> String {
    let mut label = "bond".to_string();
    while label == a || label == b {
        label.push('\'');
    }
    label
}

fn is_permutation(order: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    for &o in order {
        if o >= n || seen[o] {
            return false;
        }
        seen[o] = true;
    }
    order.len() == n
}

pub(crate) fn increment_multi(multi: &mut [usize], dims: &[usize]) {
    for k in (0..multi.len()).rev() {
        multi[k] += 1;
        if multi[k] < dims[k] {
            return;
        }
        multi[k] = 0;
    }
}
