//! Labeled direct sums of tensor spaces with a flat coordinate layout.

use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::CVec;
use crate::tensor::s2_dim;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub label: String,
    pub dim: usize,
    pub offset: usize,
}

/// Ordered direct sum of labeled components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAmbient {
    components: Vec<Component>,
    total_dim: usize,
}

impl GradedAmbient {
    pub fn new(parts: &[(&str, usize)]) -> Result<Self> {
        let mut components = Vec::with_capacity(parts.len());
        let mut offset = 0;
        for &(label, dim) in parts {
            if dim == 0 {
                return Err(Error::invalid(format!("component {label} has dimension 0")));
            }
            if components.iter().any(|c: &Component| c.label == label) {
                return Err(Error::invalid(format!("duplicate component label {label}")));
            }
            components.push(Component { label: label.to_string(), dim, offset });
            offset += dim;
        }
        Ok(GradedAmbient { components, total_dim: offset })
    }

    /// `U⊗W` for the Segre cone.
    pub fn segre(dim_u: usize, dim_w: usize) -> Result<Self> {
        GradedAmbient::new(&[("U⊗W", dim_u * dim_w)])
    }

    /// `(U⊗Q) ⊕ S²U` with `dim U = k`, `dim Q = 2m`.
    pub fn symplectic(k: usize, m: usize) -> Result<Self> {
        GradedAmbient::new(&[("U⊗Q", 2 * k * m), ("S²U", s2_dim(k))])
    }

    /// `g-1 ⊕ g-2 ⊕ g-3 ⊕ g-4 = E*⊗Q ⊕ E⊗S²Q ⊕ Q ⊕ E*`.
    pub fn f4() -> Self {
        GradedAmbient::new(&[("g-1", 6), ("g-2", 9), ("g-3", 2), ("g-4", 3)])
            .expect("static layout")
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn range(&self, label: &str) -> Result<Range<usize>> {
        self.components
            .iter()
            .find(|c| c.label == label)
            .map(|c| c.offset..c.offset + c.dim)
            .ok_or_else(|| Error::invalid(format!("no component labeled {label}")))
    }
}

/// Coordinates together with the ambient they live in.
#[derive(Debug, Clone)]
pub struct AmbientVector {
    pub coords: CVec,
    pub ambient: Arc<GradedAmbient>,
}

impl AmbientVector {
    pub fn new(ambient: Arc<GradedAmbient>, coords: CVec) -> Result<Self> {
        if coords.len() != ambient.total_dim() {
            return Err(Error::invalid(format!(
                "{} coordinates for an ambient of dimension {}",
                coords.len(),
                ambient.total_dim()
            )));
        }
        Ok(AmbientVector { coords, ambient })
    }

    pub fn block(&self, label: &str) -> Result<CVec> {
        let r = self.ambient.range(label)?;
        Ok(self.coords.rows(r.start, r.len()).into_owned())
    }
}
