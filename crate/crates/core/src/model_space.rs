//! Compact rank-one symmetric spaces and their curvature data.

use std::fmt;

use crate::error::{FoliateError, Result};
use crate::scalar::Real;

/// Family of a compact rank-one symmetric space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Sphere,
    RealProjective,
    ComplexProjective,
    QuaternionicProjective,
    CayleyPlane,
}

impl Family {
    /// Real dimension of the division algebra (1, 1, 2, 4, 8).
    pub fn field_dim(self) -> usize {
        match self {
            Family::Sphere | Family::RealProjective => 1,
            Family::ComplexProjective => 2,
            Family::QuaternionicProjective => 4,
            Family::CayleyPlane => 8,
        }
    }

    /// Number `ν` of structure endomorphisms `J_s`.
    pub fn nu(self) -> usize {
        self.field_dim() - 1
    }

    pub fn tag(self) -> &'static str {
        match self {
            Family::Sphere => "S",
            Family::RealProjective => "RP",
            Family::ComplexProjective => "CP",
            Family::QuaternionicProjective => "HP",
            Family::CayleyPlane => "CaP",
        }
    }

    fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "S" => Family::Sphere,
            "RP" => Family::RealProjective,
            "CP" => Family::ComplexProjective,
            "HP" => Family::QuaternionicProjective,
            "CaP" => Family::CayleyPlane,
            _ => return None,
        })
    }
}

/// A model space with curvature scale `λ`.
///
/// Spheres and real projective spaces have constant curvature `λ`; the other
/// families have holomorphic / quaternionic / Cayley sectional curvature `4λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpace<T> {
    family: Family,
    m: usize,
    lambda: T,
}

impl<T: Real> ModelSpace<T> {
    pub fn new(family: Family, m: usize, lambda: T) -> Result<Self> {
        if !(lambda > T::zero()) || !lambda.is_finite() {
            return Err(FoliateError::InvalidSpace(format!("lambda must be positive, got {lambda:?}")));
        }
        let ok = match family {
            Family::Sphere | Family::RealProjective => m >= 2,
            Family::ComplexProjective | Family::QuaternionicProjective => m >= 1,
            Family::CayleyPlane => m == 2,
        };
        if !ok {
            return Err(FoliateError::InvalidSpace(format!("{}:{m} is not a valid index", family.tag())));
        }
        Ok(Self { family, m, lambda })
    }

    pub fn sphere(m: usize, lambda: T) -> Result<Self> {
        Self::new(Family::Sphere, m, lambda)
    }

    pub fn real_projective(m: usize, lambda: T) -> Result<Self> {
        Self::new(Family::RealProjective, m, lambda)
    }

    pub fn complex_projective(m: usize, lambda: T) -> Result<Self> {
        Self::new(Family::ComplexProjective, m, lambda)
    }

    pub fn quaternionic_projective(m: usize, lambda: T) -> Result<Self> {
        Self::new(Family::QuaternionicProjective, m, lambda)
    }

    pub fn cayley_plane(lambda: T) -> Result<Self> {
        Self::new(Family::CayleyPlane, 2, lambda)
    }

    /// Parses `S:m`, `RP:m`, `CP:m`, `HP:m` or `CaP2`.
    pub fn parse(text: &str, lambda: T) -> Result<Self> {
        let text = text.trim();
        if text == "CaP2" {
            return Self::cayley_plane(lambda);
        }
        let (tag, index) = text
            .split_once(':')
            .ok_or_else(|| FoliateError::Parse(format!("space `{text}`: expected FAMILY:m or CaP2")))?;
        let family = Family::from_tag(tag)
            .filter(|f| *f != Family::CayleyPlane)
            .ok_or_else(|| FoliateError::Parse(format!("unknown space family `{tag}`")))?;
        let m = index
            .parse::<usize>()
            .map_err(|_| FoliateError::Parse(format!("space index `{index}` is not an integer")))?;
        Self::new(family, m, lambda)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    /// Same family and index at another curvature scale.
    pub fn with_lambda(&self, lambda: T) -> Result<Self> {
        Self::new(self.family, self.m, lambda)
    }

    /// Real dimension `n`.
    pub fn dim(&self) -> usize {
        match self.family {
            Family::CayleyPlane => 16,
            f => f.field_dim() * self.m,
        }
    }

    pub fn nu(&self) -> usize {
        self.family.nu()
    }

    /// Spectrum of `R_u` on `u^⊥` as `(eigenvalue, multiplicity)`:
    /// `4λ` on the `ν` directions `J_s u`, `λ` on the rest.
    pub fn jacobi_spectrum(&self) -> Vec<(T, usize)> {
        let n = self.dim();
        let nu = self.nu();
        let four = T::lit(4.0);
        let mut spec = Vec::with_capacity(2);
        if nu > 0 {
            spec.push((four * self.lambda, nu));
        }
        if n - 1 - nu > 0 {
            spec.push((self.lambda, n - 1 - nu));
        }
        spec
    }

    /// Ricci curvature `Ric(u, u) = (n − 1 + 3ν)λ` of a unit vector.
    pub fn ricci(&self) -> T {
        self.jacobi_spectrum().into_iter().fold(T::zero(), |acc, (k, mult)| acc + k * T::from_count(mult))
    }

    /// Scalar curvature `τ = n(n − 1 + 3ν)λ`.
    pub fn scalar_curvature(&self) -> T {
        T::from_count(self.dim()) * T::from_count(self.dim() - 1 + 3 * self.nu()) * self.lambda
    }

    /// Mixed scalar curvature of a `q`-dimensional distribution.
    ///
    /// On constant-curvature spaces and for invariant distributions on the
    /// projective families this is `q(n−q)λ`. Line fields and hyperplane
    /// fields (`q = 1` or `q = n − 1`) are accepted on every family: there
    /// `s_mix = Ric(V, V) = τ/n`, since all catalog spaces are Einstein.
    pub fn mixed_scalar_curvature(&self, q: usize) -> Result<T> {
        let n = self.dim();
        if q == 0 || q > n {
            return Err(FoliateError::InvalidArgument(format!("q={q} outside 1..={n}")));
        }
        if q == n {
            return Ok(T::zero());
        }
        let step = self.nu() + 1;
        if !q.is_multiple_of(step) {
            if q == 1 || q == n - 1 {
                return Ok(self.ricci());
            }
            return Err(FoliateError::NotInvariant { space: self.to_string(), q, step });
        }
        Ok(T::from_count(q) * T::from_count(n - q) * self.lambda)
    }

    /// `true` for the constant-curvature families.
    pub fn is_constant_curvature(&self) -> bool {
        matches!(self.family, Family::Sphere | Family::RealProjective) || self.dim() <= 2
    }
}

impl<T: Real> fmt::Display for ModelSpace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::CayleyPlane => write!(f, "CaP2"),
            fam => write!(f, "{}:{}", fam.tag(), self.m),
        }
    }
}
