use crate::error::{Error, Result};

/// Ordered, labeled tensor factors of a Hilbert space.
///
/// Position `0` is the most significant factor in the row-major flat index,
/// so `|i⟩_A ⊗ |j⟩_B` sits at flat index `i * dim(B) + j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemShape {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl SubsystemShape {
    pub fn new<S: Into<String>>(parts: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let (labels, dims): (Vec<String>, Vec<usize>) = parts.into_iter().map(|(l, d)| (l.into(), d)).unzip();
        if let Some(i) = dims.iter().position(|&d| d == 0) {
            return Err(Error::Labeling(format!("subsystem `{}` has dimension 0", labels[i])));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Labeling(format!("label `{l}` appears twice")));
            }
        }
        Ok(Self { dims, labels })
    }

    /// One subsystem.
    pub fn single(label: &str, dim: usize) -> Self {
        Self::new([(label, dim)]).expect("single positive-dimensional subsystem")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.dims[self.position(label)?])
    }

    /// Positions of `labels`, sorted into the shape's own order.
    pub fn positions(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let mut pos = labels.iter().map(|l| self.position(l)).collect::<Result<Vec<_>>>()?;
        pos.sort_unstable();
        if pos.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Labeling(format!("repeated label in {labels:?}")));
        }
        Ok(pos)
    }

    /// Shape restricted to `positions`, in the given order.
    pub fn select(&self, positions: &[usize]) -> Self {
        Self {
            dims: positions.iter().map(|&p| self.dims[p]).collect(),
            labels: positions.iter().map(|&p| self.labels[p].clone()).collect(),
        }
    }

    /// Dimension of the subsystems at `positions`.
    pub fn dim_at(&self, positions: &[usize]) -> usize {
        positions.iter().map(|&p| self.dims[p]).product()
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        Self::new(
            self.labels
                .iter()
                .cloned()
                .zip(self.dims.iter().copied())
                .chain(other.labels.iter().cloned().zip(other.dims.iter().copied())),
        )
    }

    /// Replaces the subsystem at `pos` by the given parts, in place.
    pub fn replace(&self, pos: usize, parts: &[(&str, usize)]) -> Result<Self> {
        let mut out: Vec<(String, usize)> = Vec::with_capacity(self.len() + parts.len());
        for (i, (l, &d)) in self.labels.iter().zip(&self.dims).enumerate() {
            if i == pos {
                out.extend(parts.iter().map(|&(l, d)| (l.to_string(), d)));
            } else {
                out.push((l.clone(), d));
            }
        }
        Self::new(out)
    }

    pub fn relabel(&self, labels: &[&str]) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::Labeling(format!("{} labels for {} subsystems", labels.len(), self.len())));
        }
        Self::new(labels.iter().copied().zip(self.dims.iter().copied()))
    }

    /// Position permutation that brings the listed labels into that order.
    pub fn order_of(&self, labels: &[&str]) -> Result<Vec<usize>> {
        if labels.len() != self.len() {
            return Err(Error::Labeling(format!("reordering needs all {} labels, got {labels:?}", self.len())));
        }
        let order = labels.iter().map(|l| self.position(l)).collect::<Result<Vec<_>>>()?;
        let mut seen = order.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != order.len() {
            return Err(Error::Labeling(format!("repeated label in {labels:?}")));
        }
        Ok(order)
    }
}

/// Flat-index map for reordering tensor factors.
///
/// `order[k]` is the old position of the factor that lands at new position
/// `k`. The returned table sends each new flat index to its old flat index.
/// Every subsystem reshuffle in the crate goes through this routine.
pub fn permutation_index_map(dims: &[usize], order: &[usize]) -> Vec<usize> {
    debug_assert_eq!(dims.len(), order.len());
    let n = dims.len();
    let mut old_strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        old_strides[k] = old_strides[k + 1] * dims[k + 1];
    }
    let new_dims: Vec<usize> = order.iter().map(|&p| dims[p]).collect();
    let total: usize = dims.iter().product();
    let mut map = Vec::with_capacity(total);
    let mut digits = vec![0usize; n];
    for _ in 0..total {
        map.push(digits.iter().zip(order).map(|(&d, &p)| d * old_strides[p]).sum());
        for k in (0..n).rev() {
            digits[k] += 1;
            if digits[k] < new_dims[k] {
                break;
            }
            digits[k] = 0;
        }
    }
    map
}
