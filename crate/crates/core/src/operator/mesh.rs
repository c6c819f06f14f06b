use num_traits::Float;

use crate::error::{Error, Result};

/// Node count used throughout unless a caller asks otherwise.
pub const DEFAULT_NODES: usize = 4096;
/// First positive node of the default mesh.
pub const DEFAULT_FIRST_NODE: f64 = 1e-9;

pub(crate) fn cast<F: Float>(v: f64) -> F {
    F::from(v).expect("f64 value representable in the target float")
}

/// Linear interpolation data for `f(u)` at one point `u`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Lerp<F> {
    pub index: usize,
    pub weight: F,
}

impl<F: Float> Lerp<F> {
    #[inline(always)]
    pub fn apply(&self, values: &[F]) -> F {
        let a = values[self.index];
        if self.weight == F::zero() {
            return a;
        }
        a + self.weight * (values[self.index + 1] - a)
    }
}

/// Precomputed inverse-branch data for one node `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Stencil<F> {
    /// Interpolation at `x / (1 + x)`.
    pub left: Lerp<F>,
    /// Interpolation at `1 / (1 + x)`.
    pub right: Lerp<F>,
    /// `1 / (1 + x)`.
    pub w_left: F,
    /// `x / (1 + x)`.
    pub w_right: F,
    /// `1 / (1 + x)^2`.
    pub jacobian: F,
}

/// Strictly increasing nodes `0 = x_0 < … < x_M = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh<F> {
    nodes: Vec<F>,
    stencils: Vec<Stencil<F>>,
}

impl<F: Float> Mesh<F> {
    /// Geometric nodes from `first` up to `1/2`, uniform nodes on `[1/2, 1]`,
    /// with the split chosen so the relative spacing is continuous at `1/2`.
    pub fn graded(count: usize, first: f64) -> Result<Self> {
        if count < 8 {
            return Err(Error::invalid("mesh needs at least 8 nodes"));
        }
        if !(first > 0.0 && first < 0.25) {
            return Err(Error::invalid("first node must lie in (0, 1/4)"));
        }
        let span = (0.5 / first).ln();
        // s = index of the node 1/2, u = number of uniform cells on [1/2, 1].
        let mut best = (f64::INFINITY, 2usize);
        for s in 2..count - 2 {
            let u = count - 1 - s;
            let geometric = (span / (s - 1) as f64).exp_m1();
            let uniform = 1.0 / u as f64;
            let cost = geometric.max(uniform);
            if cost < best.0 {
                best = (cost, s);
            }
        }
        let s = best.1;
        let u = count - 1 - s;
        let mut nodes = Vec::with_capacity(count);
        nodes.push(0.0);
        for i in 1..s {
            nodes.push(first * (span * (i - 1) as f64 / (s - 1) as f64).exp());
        }
        for j in 0..=u {
            nodes.push(0.5 + 0.5 * j as f64 / u as f64);
        }
        Self::from_nodes(nodes)
    }

    /// The default 4096-node mesh.
    pub fn standard() -> Self {
        Self::graded(DEFAULT_NODES, DEFAULT_FIRST_NODE).expect("default mesh parameters are valid")
    }

    pub fn uniform(count: usize) -> Result<Self> {
        if count < 3 {
            return Err(Error::invalid("mesh needs at least 3 nodes"));
        }
        Self::from_nodes((0..count).map(|i| i as f64 / (count - 1) as f64).collect())
    }

    /// Mesh from explicit nodes, which must run strictly from 0 to 1.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 || nodes[0] != 0.0 || *nodes.last().unwrap() != 1.0 {
            return Err(Error::invalid("mesh must start at 0, end at 1 and have 3+ nodes"));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("mesh nodes must be strictly increasing"));
        }
        let stencils = nodes
            .iter()
            .map(|&x| {
                let left = locate(&nodes, x / (1.0 + x));
                let right = locate(&nodes, 1.0 / (1.0 + x));
                Stencil {
                    left: Lerp { index: left.0, weight: cast(left.1) },
                    right: Lerp { index: right.0, weight: cast(right.1) },
                    w_left: cast(1.0 / (1.0 + x)),
                    w_right: cast(x / (1.0 + x)),
                    jacobian: cast(1.0 / ((1.0 + x) * (1.0 + x))),
                }
            })
            .collect();
        let nodes = nodes.into_iter().map(cast).collect();
        Ok(Self { nodes, stencils })
    }

    pub fn nodes(&self) -> &[F] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub(crate) fn stencils(&self) -> &[Stencil<F>] {
        &self.stencils
    }

    /// Interpolation data for an arbitrary point (clamped to `[0, 1]`).
    pub(crate) fn lerp_at(&self, x: F) -> Lerp<F> {
        let nodes = &self.nodes;
        let last = nodes.len() - 1;
        if x <= nodes[0] {
            return Lerp { index: 0, weight: F::zero() };
        }
        if x >= nodes[last] {
            return Lerp { index: last - 1, weight: F::one() };
        }
        let i = nodes.partition_point(|&v| v <= x) - 1;
        Lerp {
            index: i,
            weight: (x - nodes[i]) / (nodes[i + 1] - nodes[i]),
        }
    }
}

fn locate(nodes: &[f64], x: f64) -> (usize, f64) {
    let last = nodes.len() - 1;
    if x <= 0.0 {
        return (0, 0.0);
    }
    if x >= 1.0 {
        return (last - 1, 1.0);
    }
    let i = nodes.partition_point(|&v| v <= x) - 1;
    let t = (x - nodes[i]) / (nodes[i + 1] - nodes[i]);
    (i, t.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_mesh_shape() {
        let m = Mesh::<f64>::standard();
        let x = m.nodes();
        assert_eq!(x.len(), DEFAULT_NODES);
        assert_eq!((x[0], x[x.len() - 1]), (0.0, 1.0));
        assert!((x[1] - DEFAULT_FIRST_NODE).abs() < 1e-24);
        assert!(x.contains(&0.5));
        assert!(x.windows(2).all(|w| w[0] < w[1]));
        // Relative spacing stays small everywhere past the first cell.
        let worst = x[1..].windows(2).map(|w| w[1] / w[0] - 1.0).fold(0.0, f64::max);
        assert!(worst < 0.006, "{worst}");
    }

    #[test]
    fn lerp_hits_nodes() {
        let m = Mesh::<f64>::uniform(5).unwrap();
        let l = m.lerp_at(0.5);
        assert_eq!((l.index, l.weight), (2, 0.0));
        let l = m.lerp_at(1.0);
        assert_eq!(l.apply(&[0.0, 1.0, 2.0, 3.0, 4.0]), 4.0);
        assert!(Mesh::<f64>::from_nodes(vec![0.0, 0.5, 0.5, 1.0]).is_err());
    }
}
