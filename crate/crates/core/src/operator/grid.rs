use std::sync::Arc;

use num_traits::Float;

use super::density::Density;
use super::mesh::Mesh;
use crate::error::{Error, Result};

/// A function on `[0, 1]` stored by node values, linearly interpolated.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<F> {
    mesh: Arc<Mesh<F>>,
    values: Vec<F>,
}

impl<F: Float> GridFunction<F> {
    pub fn new(mesh: Arc<Mesh<F>>, values: Vec<F>) -> Result<Self> {
        if values.len() != mesh.len() {
            return Err(Error::invalid("value count differs from node count"));
        }
        Ok(Self { mesh, values })
    }

    pub fn from_fn(mesh: Arc<Mesh<F>>, f: impl Fn(F) -> F) -> Self {
        let values = mesh.nodes().iter().map(|&x| f(x)).collect();
        Self { mesh, values }
    }

    pub fn from_density<D: Density<F>>(mesh: Arc<Mesh<F>>, f: &D) -> Self {
        Self::from_fn(mesh, |x| f.eval(&x))
    }

    pub fn mesh(&self) -> &Arc<Mesh<F>> {
        &self.mesh
    }

    pub fn nodes(&self) -> &[F] {
        self.mesh.nodes()
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    /// Interpolated value; exact at nodes.
    pub fn eval(&self, x: F) -> F {
        self.mesh.lerp_at(x).apply(&self.values)
    }

    /// `T̂f(x) = [f(x/(1+x)) + x·f(1/(1+x))] / (1+x)` at every node.
    pub fn transfer(&self) -> Self {
        let mut out = self.clone();
        self.transfer_into(&mut out.values);
        out
    }

    /// As [`transfer`](Self::transfer), writing into a buffer of node values.
    pub fn transfer_into(&self, out: &mut [F]) {
        let v = &self.values;
        for (o, s) in out.iter_mut().zip(self.mesh.stencils()) {
            *o = s.left.apply(v) * s.w_left + s.right.apply(v) * s.w_right;
        }
    }

    /// Replace `self` by `T̂ⁿ self`, reusing one scratch buffer.
    pub fn iterate_transfer(&mut self, n: u64) {
        let mut scratch = self.values.clone();
        for _ in 0..n {
            self.transfer_into(&mut scratch);
            std::mem::swap(&mut self.values, &mut scratch);
        }
    }

    /// `P̂g(x) = [g(x/(1+x)) + g(1/(1+x))] / (1+x)^2` at every node.
    pub fn perron_frobenius(&self) -> Self {
        let v = &self.values;
        let values = self
            .mesh
            .stencils()
            .iter()
            .map(|s| (s.left.apply(v) + s.right.apply(v)) * s.jacobian)
            .collect();
        Self { mesh: self.mesh.clone(), values }
    }

    /// `a·self + b·other` on the same mesh.
    pub fn combine(&self, a: F, other: &Self, b: F) -> Result<Self> {
        if !Arc::ptr_eq(&self.mesh, &other.mesh) && self.mesh != other.mesh {
            return Err(Error::invalid("grid functions live on different meshes"));
        }
        let values = self.values.iter().zip(&other.values).map(|(&u, &v)| a * u + b * v).collect();
        Ok(Self { mesh: self.mesh.clone(), values })
    }

    /// `∫ f dμ = ∫ f(x)/x dx`: the head `[0, x_1]` is integrated for the
    /// linear interpolant (infinite when `f(0) > 0`), the rest by composite
    /// Simpson on the graded nodes.
    pub fn integral_mu(&self) -> f64 {
        let x: Vec<f64> = self.nodes().iter().map(|v| v.to_f64().unwrap()).collect();
        let f: Vec<f64> = self.values.iter().map(|v| v.to_f64().unwrap()).collect();
        if f[0] != 0.0 {
            return if f[0] > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        let g: Vec<f64> = (0..x.len()).map(|i| if i == 0 { 0.0 } else { f[i] / x[i] }).collect();
        let mut total = f[1];
        let mut i = 1;
        while i + 2 < x.len() {
            let (h0, h1) = (x[i + 1] - x[i], x[i + 2] - x[i + 1]);
            total += (h0 + h1) / 6.0
                * ((2.0 - h1 / h0) * g[i] + (h0 + h1) * (h0 + h1) / (h0 * h1) * g[i + 1] + (2.0 - h0 / h1) * g[i + 2]);
            i += 2;
        }
        if i + 1 < x.len() {
            total += 0.5 * (x[i + 1] - x[i]) * (g[i] + g[i + 1]);
        }
        total
    }

    /// Single precision copy.
    pub fn to_f32(&self) -> GridFunction<f32> {
        let nodes = self.nodes().iter().map(|v| v.to_f64().unwrap()).collect();
        let mesh = Arc::new(Mesh::from_nodes(nodes).expect("valid mesh"));
        let values = self.values.iter().map(|v| v.to_f32().unwrap()).collect();
        GridFunction { mesh, values }
    }
}

impl<F: Float> Density<F> for GridFunction<F> {
    fn eval(&self, x: &F) -> F {
        GridFunction::eval(self, *x)
    }
}

/// `T̂f` sampled at the nodes of `mesh`, evaluating `f` directly.
pub fn apply_transfer_mu<F: Float, D: Density<F>>(f: &D, mesh: Arc<Mesh<F>>) -> GridFunction<F> {
    GridFunction::from_fn(mesh, |x| {
        let w = F::one() / (F::one() + x);
        (f.eval(&(x * w)) + x * f.eval(&w)) * w
    })
}

/// `P̂g` sampled at the nodes of `mesh`, evaluating `g` directly.
pub fn apply_pf_lambda<F: Float, D: Density<F>>(g: &D, mesh: Arc<Mesh<F>>) -> GridFunction<F> {
    GridFunction::from_fn(mesh, |x| {
        let w = F::one() / (F::one() + x);
        (g.eval(&(x * w)) + g.eval(&w)) * w * w
    })
}

/// Fresh shared copy of the standard mesh at precision `F`.
pub fn standard_mesh<F: Float>() -> Arc<Mesh<F>> {
    Arc::new(Mesh::standard())
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::ClosedFormDensity;

    #[test]
    fn transfer_fixes_constants() {
        let g = GridFunction::from_fn(standard_mesh::<f64>(), |_| 1.0);
        let t = g.transfer();
        assert!(t.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        let t32 = g.to_f32().transfer();
        assert!(t32.values().iter().all(|v| (v - 1.0).abs() < 1e-6));
    }

    #[test]
    fn transfer_of_identity() {
        let mesh = standard_mesh::<f64>();
        let g = GridFunction::from_fn(mesh.clone(), |x| x);
        let t = g.transfer();
        for (&x, &v) in mesh.nodes().iter().zip(t.values()) {
            assert!((v - 2.0 * x / ((1.0 + x) * (1.0 + x))).abs() < 1e-12);
        }
        assert_eq!(t.eval(1.0), 0.5);
        let direct = apply_transfer_mu(&ClosedFormDensity::<f64>::Identity, mesh);
        for (a, b) in direct.values().iter().zip(t.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn perron_frobenius_examples() {
        let mesh = standard_mesh::<f64>();
        let one = GridFunction::from_fn(mesh.clone(), |_| 1.0).perron_frobenius();
        let id = GridFunction::from_fn(mesh.clone(), |x| x).perron_frobenius();
        for ((&x, &a), &b) in mesh.nodes().iter().zip(one.values()).zip(id.values()) {
            let j = 1.0 / ((1.0 + x) * (1.0 + x));
            assert!((a - 2.0 * j).abs() < 1e-12);
            assert!((b - j).abs() < 1e-12);
        }
    }

    #[test]
    fn linearity_and_positivity() {
        let mesh = standard_mesh::<f64>();
        let f = GridFunction::from_fn(mesh.clone(), |x| x.sqrt());
        let g = GridFunction::from_fn(mesh.clone(), |x| 1.0 - x);
        let lhs = f.combine(2.0, &g, 3.0).unwrap().transfer();
        let rhs = f.transfer().combine(2.0, &g.transfer(), 3.0).unwrap();
        for (a, b) in lhs.values().iter().zip(rhs.values()) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(f.transfer().values().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn mu_integral_is_preserved() {
        let g = GridFunction::from_fn(standard_mesh::<f64>(), |x| x);
        assert!((g.integral_mu() - 1.0).abs() < 1e-12);
        let t = g.transfer();
        assert!((t.integral_mu() - 1.0).abs() < 1e-6, "{}", t.integral_mu());
        assert_eq!(GridFunction::from_fn(standard_mesh::<f64>(), |_| 1.0).integral_mu(), f64::INFINITY);
    }
}
