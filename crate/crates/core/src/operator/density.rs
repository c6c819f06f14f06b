use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Anything that can be evaluated pointwise on `[0, 1]`.
pub trait Density<S> {
    fn eval(&self, x: &S) -> S;
}

impl<S, D: Density<S> + ?Sized> Density<S> for &D {
    fn eval(&self, x: &S) -> S {
        (**self).eval(x)
    }
}

/// Densities with an analytic formula.
#[derive(Clone)]
pub enum ClosedFormDensity<S> {
    /// `f ≡ 1`.
    One,
    /// `f(x) = x`.
    Identity,
    /// `f(x) = intercept + slope·x`.
    Affine { intercept: S, slope: S },
    /// `f(x) = θ·x^θ`, normalised so that `∫ f dμ = 1`.
    Power { theta: f64 },
    Custom(Arc<dyn Fn(&S) -> S + Send + Sync>),
}

impl<S: fmt::Debug> fmt::Debug for ClosedFormDensity<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::One => f.write_str("One"),
            Self::Identity => f.write_str("Identity"),
            Self::Affine { intercept, slope } => {
                f.debug_struct("Affine").field("intercept", intercept).field("slope", slope).finish()
            }
            Self::Power { theta } => f.debug_struct("Power").field("theta", theta).finish(),
            Self::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl<S> ClosedFormDensity<S> {
    pub fn power(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::invalid(format!("power exponent {theta} outside (0, 1]")));
        }
        Ok(Self::Power { theta })
    }

    pub fn custom(f: impl Fn(&S) -> S + Send + Sync + 'static) -> Self {
        Self::Custom(Arc::new(f))
    }

    /// Canonical text form, as accepted by [`FromStr`].
    pub fn label(&self) -> String {
        match self {
            Self::One => "one".into(),
            Self::Identity => "id".into(),
            Self::Affine { .. } => "affine".into(),
            Self::Power { theta } => format!("power:{theta}"),
            Self::Custom(_) => "custom".into(),
        }
    }
}

impl<S: Scalar> Density<S> for ClosedFormDensity<S> {
    fn eval(&self, x: &S) -> S {
        match self {
            Self::One => S::one(),
            Self::Identity => x.clone(),
            Self::Affine { intercept, slope } => intercept.clone() + slope.clone() * x.clone(),
            Self::Power { theta } => S::from_f64(theta * x.as_f64().powf(*theta)),
            Self::Custom(f) => f(x),
        }
    }
}

impl<S> FromStr for ClosedFormDensity<S> {
    type Err = Error;

    /// `one`, `id` or `power:θ` with `θ ∈ (0, 1]`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" => Ok(Self::One),
            "id" => Ok(Self::Identity),
            _ => {
                let theta = s
                    .strip_prefix("power:")
                    .and_then(|t| t.parse::<f64>().ok())
                    .ok_or_else(|| Error::invalid(format!("unknown density `{s}`")))?;
                Self::power(theta)
            }
        }
    }
}
