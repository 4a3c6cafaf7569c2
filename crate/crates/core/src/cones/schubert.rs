//! Smooth Schubert varieties `{E : F_a ⊂ E ⊂ F_b}` of the symplectic
//! Grassmannian `Gr_ω(k, 2ℓ)`, sorted by the listed smooth cases.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SchubertShape {
    pub k: usize,
    pub l: usize,
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchubertClass {
    /// Homogeneous, given by a sub-diagram of the marked Dynkin diagram.
    HomogeneousSubdiagram,
    /// Odd symplectic Grassmannian `(C_rank, α_first, α_second)`.
    OddSymplectic { rank: usize, marks: (usize, usize) },
    /// Linear space `P^dim`.
    LinearSpace { dim: usize },
    NotSmoothListed,
}

impl SchubertClass {
    pub fn label(&self) -> String {
        match self {
            SchubertClass::HomogeneousSubdiagram => "homogeneous".into(),
            SchubertClass::OddSymplectic { rank, marks } => {
                format!("odd-symplectic(C{rank},a{},a{})", marks.0, marks.1)
            }
            SchubertClass::LinearSpace { dim } => format!("linear(P{dim})"),
            SchubertClass::NotSmoothListed => "not-listed".into(),
        }
    }
}

impl SchubertShape {
    /// Requires `1 < k < ℓ` and `0 <= a < k < b <= 2ℓ - a`.
    pub fn new(k: usize, l: usize, a: usize, b: usize) -> Result<Self> {
        if !(1 < k && k < l) {
            return Err(Error::invalid(format!("need 1 < k < l, got k={k}, l={l}")));
        }
        if !(a < k && k < b && b + a <= 2 * l) {
            return Err(Error::invalid(format!(
                "need 0 <= a < k < b <= 2l - a, got a={a}, k={k}, b={b}, l={l}"
            )));
        }
        Ok(SchubertShape { k, l, a, b })
    }

    /// Checks the homogeneous case first, then the linear case, then the
    /// odd symplectic one. The linear and odd symplectic cases meet at
    /// `a = k - 1, b = 2ℓ - k`, where the variety is `P^{2ℓ-2k}` and is
    /// reported as linear.
    pub fn classify(&self) -> SchubertClass {
        let SchubertShape { k, l, a, b } = *self;
        if (k < b && b <= l) || b == 2 * l - a {
            return SchubertClass::HomogeneousSubdiagram;
        }
        if a + 1 == k && l < b && b + k <= 2 * l {
            return SchubertClass::LinearSpace { dim: b - k };
        }
        if b + a + 1 == 2 * l {
            return SchubertClass::OddSymplectic { rank: l - 1, marks: (k - a, k - a - 1) };
        }
        SchubertClass::NotSmoothListed
    }

    /// All valid shapes with `ℓ <= max_l`.
    pub fn enumerate(max_l: usize) -> Vec<SchubertShape> {
        let mut out = Vec::new();
        for l in 3..=max_l {
            for k in 2..l {
                for a in 0..k {
                    for b in k + 1..=2 * l - a {
                        out.push(SchubertShape { k, l, a, b });
                    }
                }
            }
        }
        out
    }
}

pub fn schubert_classify(shape: &SchubertShape) -> SchubertClass {
    shape.classify()
}
