//! Principal curvatures and volume densities of distance tubes.
//!
//! Along a unit-speed geodesic normal to a focal variety, each eigenspace of
//! the Jacobi operator carries a scalar Jacobi field `f'' + κ f = 0`. Directions
//! normal to the focal variety start with `f(0) = 0, f'(0) = 1`; directions
//! tangent to a totally geodesic focal variety start with `f(0) = 1, f'(0) = 0`.
//! The principal curvatures of the tube `P(r)` are `α = f'/f` and the tube
//! volume density is `θ = Π f^mult`.
//!
//! Sign convention: `α = f'/f` is the opposite sign of the shape operator
//! eigenvalue taken with respect to `∇r`. Only `α²` and products of pairs of
//! `α` enter the bending and curvature integrals, so nothing downstream
//! depends on it.

use std::fmt;

use crate::error::{FoliateError, Result};
use crate::model_space::{Family, ModelSpace};
use crate::scalar::Real;
use crate::torsion::TorsionCoefficients;

/// Initial data of a scalar Jacobi field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitKind {
    /// `f(0) = 0, f'(0) = 1`: direction normal to the focal variety.
    Normal,
    /// `f(0) = 1, f'(0) = 0`: direction tangent to a totally geodesic focal variety.
    Tangent,
}

impl fmt::Display for InitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitKind::Normal => "normal",
            InitKind::Tangent => "tangent",
        })
    }
}

/// Closed-form solution of `f'' + κ f = 0` for `κ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiSolution<T> {
    kappa: T,
    root: T,
    init: InitKind,
}

impl<T: Real> JacobiSolution<T> {
    pub fn new(kappa: T, init: InitKind) -> Result<Self> {
        if !(kappa >= T::zero()) || !kappa.is_finite() {
            return Err(FoliateError::InvalidArgument(format!("Jacobi eigenvalue must be >= 0, got {kappa:?}")));
        }
        Ok(Self { kappa, root: kappa.sqrt(), init })
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn init(&self) -> InitKind {
        self.init
    }

    pub fn f(&self, r: T) -> T {
        let zero = self.kappa == T::zero();
        match (self.init, zero) {
            (InitKind::Normal, true) => r,
            (InitKind::Normal, false) => (self.root * r).sin() / self.root,
            (InitKind::Tangent, true) => T::one(),
            (InitKind::Tangent, false) => (self.root * r).cos(),
        }
    }

    pub fn f_prime(&self, r: T) -> T {
        match self.init {
            InitKind::Normal => (self.root * r).cos(),
            InitKind::Tangent => -self.root * (self.root * r).sin(),
        }
    }

    /// `α = f'/f`, evaluated without forming the quotient of two small numbers.
    pub fn alpha(&self, r: T) -> T {
        let zero = self.kappa == T::zero();
        match (self.init, zero) {
            (InitKind::Normal, true) => r.recip(),
            (InitKind::Normal, false) => self.root / (self.root * r).tan(),
            (InitKind::Tangent, true) => T::zero(),
            (InitKind::Tangent, false) => -self.root * (self.root * r).tan(),
        }
    }
}

/// Integrates `f'' + κ f = 0` from `0` to `r` with classical fixed-step RK4.
///
/// Independent of [`JacobiSolution`]; the global error is `O(steps⁻⁴)`.
pub fn jacobi_ode_oracle<T: Real>(kappa: T, init: InitKind, r: T, steps: usize) -> Result<T> {
    if steps < 16 {
        return Err(FoliateError::InvalidArgument(format!("need at least 16 steps, got {steps}")));
    }
    if !(r >= T::zero()) {
        return Err(FoliateError::InvalidArgument("radius must be non-negative".into()));
    }
    let (mut f, mut fp) = match init {
        InitKind::Normal => (T::zero(), T::one()),
        InitKind::Tangent => (T::one(), T::zero()),
    };
    let h = r / T::from_count(steps);
    let half = T::lit(0.5);
    let sixth = T::lit(1.0 / 6.0);
    let two = T::lit(2.0);
    for _ in 0..steps {
        let (k1f, k1p) = (fp, -kappa * f);
        let (k2f, k2p) = (fp + half * h * k1p, -kappa * (f + half * h * k1f));
        let (k3f, k3p) = (fp + half * h * k2p, -kappa * (f + half * h * k2f));
        let (k4f, k4p) = (fp + h * k3p, -kappa * (f + h * k3f));
        f = f + h * sixth * (k1f + two * k2f + two * k3f + k4f);
        fp = fp + h * sixth * (k1p + two * k2p + two * k3p + k4p);
    }
    Ok(f)
}

/// Singular leaf of a tubular foliation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FocalVariety {
    Point,
    /// Totally geodesic `KP^k` (or `S^k`) embedded in the ambient space.
    TotallyGeodesic {
        family: Family,
        index: usize,
    },
}

impl FocalVariety {
    /// Parses `point`, `sub:S:k`, `sub:RP:k`, `sub:CP:p` or `sub:HP:p`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "point" {
            return Ok(FocalVariety::Point);
        }
        let rest = text
            .strip_prefix("sub:")
            .ok_or_else(|| FoliateError::Parse(format!("focal `{text}`: expected `point` or `sub:FAMILY:k`")))?;
        let (tag, index) =
            rest.split_once(':').ok_or_else(|| FoliateError::Parse(format!("focal `{text}`: missing index")))?;
        let family = match tag {
            "S" => Family::Sphere,
            "RP" => Family::RealProjective,
            "CP" => Family::ComplexProjective,
            "HP" => Family::QuaternionicProjective,
            _ => return Err(FoliateError::Parse(format!("unknown focal family `{tag}`"))),
        };
        let index = index
            .parse::<usize>()
            .map_err(|_| FoliateError::Parse(format!("focal index `{index}` is not an integer")))?;
        Ok(FocalVariety::TotallyGeodesic { family, index })
    }
}

impl fmt::Display for FocalVariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FocalVariety::Point => f.write_str("point"),
            FocalVariety::TotallyGeodesic { family, index } => write!(f, "sub:{}:{}", family.tag(), index),
        }
    }
}

/// One eigenvalue branch of the tube shape operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiBranch<T> {
    pub kappa: T,
    pub multiplicity: usize,
    pub init: InitKind,
}

/// A principal-curvature profile of the tubes around a focal variety.
#[derive(Debug, Clone, PartialEq)]
pub struct TubeProfile<T> {
    space: ModelSpace<T>,
    focal: FocalVariety,
    branches: Vec<JacobiBranch<T>>,
    solutions: Vec<JacobiSolution<T>>,
    mu: T,
    volume_constant: Option<T>,
}

/// One row of a sampled profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSample<T> {
    pub r: T,
    pub alphas: Vec<T>,
    pub theta: T,
}

/// Area `ω_d` of the unit `d`-sphere.
pub fn unit_sphere_area<T: Real>(d: usize) -> T {
    let two_pi = T::PI() + T::PI();
    let mut even = T::lit(2.0);
    let mut odd = two_pi;
    if d == 0 {
        return even;
    }
    if d == 1 {
        return odd;
    }
    for k in 2..=d {
        let next = two_pi / T::from_count(k - 1);
        if k % 2 == 0 {
            even = even * next;
        } else {
            odd = odd * next;
        }
    }
    if d.is_multiple_of(2) {
        even
    } else {
        odd
    }
}

impl<T: Real> TubeProfile<T> {
    /// Builds the profile of tubes around `focal` in `space`.
    ///
    /// Computable pairs: spheres and real projective spaces around a point or
    /// a totally geodesic `S^k` / `RP^k`; `CP^m` around a point or `CP^p`;
    /// `HP^m` around a point or `HP^p`; the Cayley plane around a point.
    pub fn new(space: ModelSpace<T>, focal: FocalVariety) -> Result<Self> {
        let lambda = space.lambda();
        let four_lambda = T::lit(4.0) * lambda;
        let m = space.m();
        let half_period = T::FRAC_PI_2() / lambda.sqrt();
        let out_of_catalog = || FoliateError::OutOfCatalog { space: space.to_string(), focal: focal.to_string() };
        let not_computable = || FoliateError::NotComputable { space: space.to_string(), focal: focal.to_string() };

        // (κ, multiplicity, init) before dropping empty branches.
        let (raw, mu, volume_constant): (Vec<(T, usize, InitKind)>, T, Option<T>) = match (space.family(), focal) {
            (Family::Sphere, FocalVariety::Point) => {
                (vec![(lambda, m - 1, InitKind::Normal)], T::PI() / lambda.sqrt(), Some(unit_sphere_area(m - 1)))
            }
            (Family::RealProjective, FocalVariety::Point) => {
                (vec![(lambda, m - 1, InitKind::Normal)], half_period, Some(unit_sphere_area(m - 1)))
            }
            (fam @ (Family::Sphere | Family::RealProjective), FocalVariety::TotallyGeodesic { family, index: k })
                if family == fam =>
            {
                if k >= m {
                    return Err(out_of_catalog());
                }
                let focal_volume = unit_sphere_area::<T>(k) / lambda.powi(k as i32).sqrt();
                let mut c = focal_volume * unit_sphere_area(m - k - 1);
                if fam == Family::RealProjective {
                    c = c * T::lit(0.5);
                }
                (vec![(lambda, m - k - 1, InitKind::Normal), (lambda, k, InitKind::Tangent)], half_period, Some(c))
            }
            (Family::ComplexProjective, FocalVariety::TotallyGeodesic { family: Family::RealProjective, index })
                if index == m =>
            {
                return Err(not_computable())
            }
            (
                Family::QuaternionicProjective,
                FocalVariety::TotallyGeodesic { family: Family::ComplexProjective, index },
            ) if index == m => return Err(not_computable()),
            (fam @ (Family::ComplexProjective | Family::QuaternionicProjective), focal) => {
                let p = match focal {
                    FocalVariety::Point => 0,
                    FocalVariety::TotallyGeodesic { family, index } if family == fam && index < m => index,
                    _ => return Err(out_of_catalog()),
                };
                let d = fam.field_dim();
                (
                    vec![
                        (four_lambda, d - 1, InitKind::Normal),
                        (lambda, d * (m - p) - d, InitKind::Normal),
                        (lambda, d * p, InitKind::Tangent),
                    ],
                    half_period,
                    None,
                )
            }
            (Family::CayleyPlane, FocalVariety::Point) => {
                (vec![(four_lambda, 7, InitKind::Normal), (lambda, 8, InitKind::Normal)], half_period, None)
            }
            _ => return Err(out_of_catalog()),
        };

        let branches: Vec<JacobiBranch<T>> = raw
            .into_iter()
            .filter(|(_, mult, _)| *mult > 0)
            .map(|(kappa, multiplicity, init)| JacobiBranch { kappa, multiplicity, init })
            .collect();
        debug_assert_eq!(branches.iter().map(|b| b.multiplicity).sum::<usize>(), space.dim() - 1);
        let solutions = branches.iter().map(|b| JacobiSolution::new(b.kappa, b.init)).collect::<Result<Vec<_>>>()?;
        Ok(Self { space, focal, branches, solutions, mu, volume_constant })
    }

    pub fn space(&self) -> &ModelSpace<T> {
        &self.space
    }

    pub fn focal(&self) -> FocalVariety {
        self.focal
    }

    pub fn branches(&self) -> &[JacobiBranch<T>] {
        &self.branches
    }

    pub fn solutions(&self) -> &[JacobiSolution<T>] {
        &self.solutions
    }

    /// Cut distance: first positive zero of `θ`.
    pub fn mu(&self) -> T {
        self.mu
    }

    /// Constant `c` with tube area `A(r) = c·θ(r)`, where it is known in closed form.
    pub fn volume_constant(&self) -> Option<T> {
        self.volume_constant
    }

    pub fn theta(&self, r: T) -> T {
        self.weighted(|s| s.f(r).powi(1), |v, mult| v.powi(mult as i32), |a, b| a * b, T::one())
    }

    pub fn alpha(&self, branch: usize, r: T) -> T {
        self.solutions[branch].alpha(r)
    }

    /// `Σ mult·α`, which equals `θ'/θ`.
    pub fn sum_alpha(&self, r: T) -> T {
        self.weighted(|s| s.alpha(r), |v, mult| v * T::from_count(mult), |a, b| a + b, T::zero())
    }

    /// `Σ mult·α²`.
    pub fn sum_alpha_sq(&self, r: T) -> T {
        self.weighted(|s| s.alpha(r), |v, mult| v * v * T::from_count(mult), |a, b| a + b, T::zero())
    }

    /// Bending density `½ Σ mult·α² θ` per unit of the volume constant.
    pub fn bending_density(&self, r: T) -> T {
        T::lit(0.5) * self.sum_alpha_sq(r) * self.theta(r)
    }

    /// Second mean curvature of the tube `P(r)`: `½[(Σ mα)² − Σ mα²]`.
    pub fn second_mean_curvature(&self, r: T) -> T {
        let s = self.sum_alpha(r);
        T::lit(0.5) * (s * s - self.sum_alpha_sq(r))
    }

    /// Pointwise torsion of the radial foliation at radius `r`: `q = 1` with a
    /// diagonal horizontal block listing every principal curvature.
    pub fn radial_coefficients(&self, r: T) -> Result<TorsionCoefficients<T>> {
        let values: Vec<T> = self
            .branches
            .iter()
            .zip(&self.solutions)
            .flat_map(|(b, s)| std::iter::repeat_n(s.alpha(r), b.multiplicity))
            .collect();
        TorsionCoefficients::diagonal_horizontal(&values)
    }

    /// `count` samples at the midpoints of a uniform partition of `(0, μ)`.
    pub fn sample(&self, count: usize) -> Vec<ProfileSample<T>> {
        (0..count)
            .map(|i| {
                let r = self.mu * (T::from_count(i) + T::lit(0.5)) / T::from_count(count);
                ProfileSample { r, alphas: self.solutions.iter().map(|s| s.alpha(r)).collect(), theta: self.theta(r) }
            })
            .collect()
    }

    fn weighted<V>(
        &self,
        eval: impl Fn(&JacobiSolution<T>) -> T,
        weight: impl Fn(T, usize) -> V,
        combine: impl Fn(V, V) -> V,
        init: V,
    ) -> V {
        self.solutions
            .iter()
            .zip(&self.branches)
            .fold(init, |acc, (s, b)| combine(acc, weight(eval(s), b.multiplicity)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn profile(space: &str, focal: &str) -> Result<TubeProfile<f64>> {
        TubeProfile::new(ModelSpace::parse(space, 1.0)?, FocalVariety::parse(focal)?)
    }

    #[test]
    fn closed_forms() {
        let n = JacobiSolution::new(1.0, InitKind::Normal).unwrap();
        assert_relative_eq!(n.f(0.3), 0.3f64.sin());
        let flat = JacobiSolution::new(0.0, InitKind::Normal).unwrap();
        assert_eq!(flat.f(2.0), 2.0);
        assert_eq!(flat.alpha(2.0), 0.5);
        let t = JacobiSolution::new(4.0, InitKind::Tangent).unwrap();
        assert_relative_eq!(t.f(0.3), 0.6f64.cos());
        assert_relative_eq!(t.alpha(0.3), -2.0 * 0.6f64.tan());
        assert!(JacobiSolution::new(-1.0, InitKind::Normal).is_err());
    }

    #[test]
    fn ode_oracle_examples() {
        let v = jacobi_ode_oracle(1.0, InitKind::Normal, PI / 2.0, 1024).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        let v = jacobi_ode_oracle(4.0, InitKind::Normal, PI / 4.0, 1024).unwrap();
        assert!((v - 0.5).abs() < 1e-10);
        let v = jacobi_ode_oracle(1.0, InitKind::Tangent, 1.0, 1024).unwrap();
        assert!((v - 1.0f64.cos()).abs() < 1e-10);
        assert!(jacobi_ode_oracle(1.0, InitKind::Normal, 1.0, 8).is_err());
    }

    #[test]
    fn sphere_areas() {
        assert_relative_eq!(unit_sphere_area::<f64>(0), 2.0);
        assert_relative_eq!(unit_sphere_area::<f64>(1), 2.0 * PI);
        assert_relative_eq!(unit_sphere_area::<f64>(2), 4.0 * PI);
        assert_relative_eq!(unit_sphere_area::<f64>(3), 2.0 * PI * PI);
        assert_relative_eq!(unit_sphere_area::<f64>(4), 8.0 * PI * PI / 3.0);
    }

    #[test]
    fn sphere_point_profile() {
        let p = profile("S:4", "point").unwrap();
        assert_eq!(p.branches().len(), 1);
        assert_eq!(p.branches()[0].multiplicity, 3);
        assert_relative_eq!(p.mu(), PI);
        assert_relative_eq!(p.theta(0.7), 0.7f64.sin().powi(3));
        assert_relative_eq!(p.alpha(0, 0.7), 1.0 / 0.7f64.tan());
    }

    #[test]
    fn complex_projective_point_profile() {
        let p = profile("CP:3", "point").unwrap();
        let mults: Vec<_> = p.branches().iter().map(|b| (b.kappa, b.multiplicity)).collect();
        assert_eq!(mults, vec![(4.0, 1), (1.0, 4)]);
        assert_relative_eq!(p.mu(), PI / 2.0);
        assert_relative_eq!(p.alpha(0, 0.4), 2.0 / 0.8f64.tan());
        assert!(p.theta(p.mu()).abs() < 1e-15);
    }

    #[test]
    fn sphere_around_totally_geodesic_sphere() {
        let p = profile("S:5", "sub:S:2").unwrap();
        let b: Vec<_> = p.branches().iter().map(|b| (b.multiplicity, b.init)).collect();
        assert_eq!(b, vec![(2, InitKind::Normal), (2, InitKind::Tangent)]);
        assert_relative_eq!(p.mu(), PI / 2.0);
    }

    #[test]
    fn catalog_rejections() {
        assert!(matches!(profile("CP:3", "sub:RP:3"), Err(FoliateError::NotComputable { .. })));
        assert!(matches!(profile("HP:2", "sub:CP:2"), Err(FoliateError::NotComputable { .. })));
        assert!(matches!(profile("CP:3", "sub:HP:1"), Err(FoliateError::OutOfCatalog { .. })));
        assert!(matches!(profile("S:4", "sub:S:4"), Err(FoliateError::OutOfCatalog { .. })));
        assert!(matches!(profile("CaP2", "sub:HP:1"), Err(FoliateError::OutOfCatalog { .. })));
        assert!(FocalVariety::parse("line").is_err());
        assert!(FocalVariety::parse("sub:QP:1").is_err());
    }

    #[test]
    fn radial_coefficients_match_profile_mu_h() {
        let p = profile("HP:2", "point").unwrap();
        let r = 0.6;
        let xi = p.radial_coefficients(r).unwrap();
        let d = xi.derive();
        assert_relative_eq!(d.mu_h, p.second_mean_curvature(r), max_relative = 1e-13);
        assert_relative_eq!(d.sigma_h, p.sum_alpha_sq(r), max_relative = 1e-13);
        assert_eq!(xi.dims().n(), 8);
    }
}
