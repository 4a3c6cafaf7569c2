//! The root system of F4 and the grading of its Lie algebra by the
//! coefficient of `α₃`.

use std::collections::BTreeMap;

use nalgebra::{Matrix4, Vector4};

/// Simple roots in the standard orthonormal realization; `α₃`, `α₄` are
/// short.
pub fn simple_roots() -> [Vector4<f64>; 4] {
    [
        Vector4::new(0.0, 1.0, -1.0, 0.0),
        Vector4::new(0.0, 0.0, 1.0, -1.0),
        Vector4::new(0.0, 0.0, 0.0, 1.0),
        Vector4::new(0.5, -0.5, -0.5, -0.5),
    ]
}

/// The 48 roots: `±eᵢ±eⱼ`, `±eᵢ` and `½(±1,±1,±1,±1)`.
pub fn roots() -> Vec<Vector4<f64>> {
    let mut out = Vec::with_capacity(48);
    for i in 0..4 {
        for j in i + 1..4 {
            for si in [1.0, -1.0] {
                for sj in [1.0, -1.0] {
                    let mut v = Vector4::zeros();
                    v[i] = si;
                    v[j] = sj;
                    out.push(v);
                }
            }
        }
    }
    for i in 0..4 {
        for s in [1.0, -1.0] {
            let mut v = Vector4::zeros();
            v[i] = s;
            out.push(v);
        }
    }
    for mask in 0..16u32 {
        let sign = |b: u32| if mask & (1 << b) == 0 { 0.5 } else { -0.5 };
        out.push(Vector4::new(sign(0), sign(1), sign(2), sign(3)));
    }
    out
}

/// Integer coefficients of `β` in the simple-root basis.
pub fn simple_coefficients(beta: &Vector4<f64>) -> [i64; 4] {
    let s = simple_roots();
    let m = Matrix4::from_columns(&s);
    let x = m.lu().solve(beta).expect("simple roots form a basis");
    let mut out = [0; 4];
    for i in 0..4 {
        let r = x[i].round();
        assert!((x[i] - r).abs() < 1e-9, "non-integral coefficient");
        out[i] = r as i64;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F4Grading {
    /// `dim g_k` for `k = -4..=4`.
    pub dims: BTreeMap<i64, usize>,
    /// `Σ β(H_{α₃})` over the roots of positive grade.
    pub c1: i64,
    /// The positive-grade contributions to `c1`, by grade.
    pub coroot_sums: BTreeMap<i64, i64>,
    pub num_roots: usize,
}

impl F4Grading {
    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }
}

/// Grade every root by its `α₃` coefficient. The grade-zero part adds the
/// rank 4 of the Cartan subalgebra.
pub fn f4_root_grading() -> F4Grading {
    let a3 = simple_roots()[2];
    let a3_sq = a3.dot(&a3);
    let mut dims: BTreeMap<i64, usize> = (-4..=4).map(|k| (k, 0)).collect();
    let mut coroot_sums: BTreeMap<i64, i64> = (1..=4).map(|k| (k, 0)).collect();
    let all = roots();
    for beta in &all {
        let k = simple_coefficients(beta)[2];
        *dims.get_mut(&k).expect("grade within [-4, 4]") += 1;
        if k > 0 {
            let pairing = 2.0 * beta.dot(&a3) / a3_sq;
            let r = pairing.round();
            assert!((pairing - r).abs() < 1e-9, "non-integral coroot pairing");
            *coroot_sums.get_mut(&k).expect("positive grade") += r as i64;
        }
    }
    *dims.get_mut(&0).expect("grade zero") += 4;
    let c1 = coroot_sums.values().sum();
    F4Grading { dims, c1, coroot_sums, num_roots: all.len() }
}
