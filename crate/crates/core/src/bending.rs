//! Total bending and energy of the cataloged foliations.
//!
//! On an isoparametric tubular foliation the principal curvatures are
//! constant on each tube, so the bending integral collapses to a radial one:
//!
//! `B = ½ Σ_a mult_a ∫_0^μ α_a(r)² A(r) dr`,  `A(r) = c·θ(r)`.
//!
//! Results are reported per unit volume, `B / Vol = ½∫Σmα²θ / ∫θ`, where the
//! unknown constant `c` cancels. Absolute values are attached whenever `c` is
//! known in closed form.

use std::fmt;

use crate::error::{FoliateError, Result};
use crate::model_space::ModelSpace;
use crate::quadrature::{integrate, integrate_singular, Endpoint, QuadOutcome, QuadratureConfig};
use crate::scalar::Real;
use crate::torsion::{SplitDims, TorsionCoefficients};
use crate::tube::{FocalVariety, TubeProfile};

/// A foliation whose bending the engine can evaluate.
#[derive(Debug, Clone, PartialEq)]
pub enum FoliationSpec<T> {
    /// Tubes around a point or totally geodesic submanifold (and the orthogonal
    /// radial foliation, which has the same bending).
    RadialOrTubular { space: ModelSpace<T>, focal: FocalVariety },
    /// The two-dimensional foliation spanned by `∇r` and `J∇r` around a point of `CP^m`.
    ComplexRadial { m: usize, lambda: T },
    /// Level sets of the height function on a rotational torus with radii `R > r`.
    TorusIsoparametric { big_r: T, small_r: T },
    /// A tubular foliation collapsed to the trivial distribution outside a
    /// symmetric radial window of half-angle `epsilon`.
    EpsilonDeformation { space: ModelSpace<T>, focal: FocalVariety, epsilon: T },
}

impl<T: Real> fmt::Display for FoliationSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoliationSpec::RadialOrTubular { space, focal } => write!(f, "radial {space} {focal}"),
            FoliationSpec::ComplexRadial { m, .. } => write!(f, "complex-radial CP:{m}"),
            FoliationSpec::TorusIsoparametric { big_r, small_r } => {
                write!(f, "torus R={:?} r={:?}", big_r, small_r)
            }
            FoliationSpec::EpsilonDeformation { space, focal, epsilon } => {
                write!(f, "epsilon-deformation {space} {focal} eps={:?}", epsilon)
            }
        }
    }
}

/// Bending per unit volume: finite with an error estimate, or divergent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BendingResult<T> {
    Finite { value: T, error_estimate: T },
    Divergent { endpoint: Endpoint, exponent_estimate: T },
}

impl<T: Real> BendingResult<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            BendingResult::Finite { value, .. } => Some(*value),
            BendingResult::Divergent { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BendingResult::Finite { .. })
    }

    pub fn scaled(&self, factor: T) -> Self {
        match *self {
            BendingResult::Finite { value, error_estimate } => {
                BendingResult::Finite { value: value * factor, error_estimate: error_estimate * factor.abs() }
            }
            d => d,
        }
    }
}

/// Bending of a foliation together with the volume of the ambient space, when known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bending<T> {
    pub per_volume: BendingResult<T>,
    pub volume: Option<T>,
}

impl<T: Real> Bending<T> {
    /// Absolute total bending `B`, available when the volume is known.
    pub fn absolute(&self) -> Option<BendingResult<T>> {
        self.volume.map(|v| self.per_volume.scaled(v))
    }
}

/// Energy `E = (n/2)·Vol + B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energy<T> {
    /// `n/2 + B/Vol`, or the divergence verdict of `B`.
    pub per_volume: BendingResult<T>,
    pub volume: Option<T>,
}

impl<T: Real> Energy<T> {
    pub fn absolute(&self) -> Option<BendingResult<T>> {
        self.volume.map(|v| self.per_volume.scaled(v))
    }
}

fn ratio_result<T: Real>(num: QuadOutcome<T>, den_value: T, den_error: T) -> BendingResult<T> {
    match num {
        QuadOutcome::Finite(i) => {
            let value = i.value / den_value;
            let error = i.error / den_value + i.value.abs() * den_error / (den_value * den_value);
            BendingResult::Finite { value, error_estimate: error }
        }
        QuadOutcome::Divergent { endpoint, exponent } => {
            BendingResult::Divergent { endpoint, exponent_estimate: exponent }
        }
    }
}

/// `∫_0^μ θ`, the volume of the ambient space in units of the volume constant.
pub fn profile_volume_integral<T: Real>(profile: &TubeProfile<T>, cfg: &QuadratureConfig<T>) -> Result<(T, T)> {
    let i = integrate(&|r| profile.theta(r), T::zero(), profile.mu(), cfg)?;
    Ok((i.value, i.error))
}

/// Bending of a tubular (equivalently radial) foliation.
pub fn total_bending<T: Real>(profile: &TubeProfile<T>, cfg: &QuadratureConfig<T>) -> Result<Bending<T>> {
    let density = |r: T| profile.bending_density(r);
    let num = integrate_singular(&density, T::zero(), profile.mu(), cfg)?;
    let (den, den_err) = profile_volume_integral(profile, cfg)?;
    Ok(Bending { per_volume: ratio_result(num, den, den_err), volume: profile.volume_constant().map(|c| c * den) })
}

/// Radial window `[μ/2 − με/π, μ/2 + μ ε/π]` kept by the ε-deformation.
pub fn deformation_window<T: Real>(mu: T, epsilon: T) -> (T, T) {
    let half = T::lit(0.5) * mu;
    let w = mu * epsilon / T::PI();
    (half - w, half + w)
}

/// Bending of the ε-deformation of a tubular foliation.
///
/// `ε = 0` is the trivial distribution (bending exactly 0); `ε = π/2`
/// reproduces [`total_bending`].
pub fn epsilon_deformed_bending<T: Real>(
    profile: &TubeProfile<T>,
    epsilon: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Bending<T>> {
    if !(epsilon >= T::zero() && epsilon <= T::FRAC_PI_2()) {
        return Err(FoliateError::InvalidArgument(format!("epsilon must lie in [0, π/2], got {epsilon:?}")));
    }
    if epsilon == T::FRAC_PI_2() {
        return total_bending(profile, cfg);
    }
    let (den, den_err) = profile_volume_integral(profile, cfg)?;
    let volume = profile.volume_constant().map(|c| c * den);
    if epsilon == T::zero() {
        return Ok(Bending {
            per_volume: BendingResult::Finite { value: T::zero(), error_estimate: T::zero() },
            volume,
        });
    }
    let (lo, hi) = deformation_window(profile.mu(), epsilon);
    let density = |r: T| profile.bending_density(r);
    let num = integrate_singular(&density, lo, hi, cfg)?;
    Ok(Bending { per_volume: ratio_result(num, den, den_err), volume })
}

/// Pointwise torsion coefficients of the complex radial foliation on `CP^m`
/// at a point where the horizontal principal curvature equals `alpha`.
///
/// Vertical frame `(γ', Jγ')`; horizontal frame ordered in complex pairs
/// `(e_i, J e_i)`. The vertical block vanishes (the foliation is totally
/// geodesic); the horizontal block is `ξ_jk^{γ'} = α δ_jk` and
/// `ξ_jk^{Jγ'} = α g(E_k, J E_j)`.
pub fn complex_radial_coefficients<T: Real>(m: usize, alpha: T) -> Result<TorsionCoefficients<T>> {
    if m < 2 {
        return Err(FoliateError::InvalidArgument(format!("complex radial foliation needs m >= 2, got {m}")));
    }
    let dims = SplitDims::new(2 * m, 2)?;
    let mut xi = TorsionCoefficients::zeros(dims);
    for j in 0..dims.h() {
        xi.set_xi_h(j, j, 0, alpha);
        // J e_i = E_{2i+1}, J(J e_i) = −E_{2i}
        if j % 2 == 0 {
            xi.set_xi_h(j, j + 1, 1, alpha);
        } else {
            xi.set_xi_h(j, j - 1, 1, -alpha);
        }
    }
    Ok(xi)
}

/// Number of unit-magnitude torsion components per point: `Σ_V + Σ_H` at `α = 1`.
pub fn complex_radial_component_count<T: Real>(m: usize) -> Result<T> {
    let d = complex_radial_coefficients(m, T::one())?.derive();
    Ok(d.sigma_v + d.sigma_h)
}

/// Bending of the complex radial foliation around a point of `CP^m(λ)`.
pub fn complex_radial_bending<T: Real>(m: usize, lambda: T, cfg: &QuadratureConfig<T>) -> Result<Bending<T>> {
    let profile = TubeProfile::new(ModelSpace::complex_projective(m, lambda)?, FocalVariety::Point)?;
    let count = complex_radial_component_count::<T>(m)?;
    let horizontal = horizontal_branch(&profile);
    let density = |r: T| {
        let a = profile.alpha(horizontal, r);
        T::lit(0.5) * count * a * a * profile.theta(r)
    };
    let num = integrate_singular(&density, T::zero(), profile.mu(), cfg)?;
    let (den, den_err) = profile_volume_integral(&profile, cfg)?;
    Ok(Bending { per_volume: ratio_result(num, den, den_err), volume: None })
}

/// Index of the `κ = λ` normal branch of a `CP^m` point profile.
pub(crate) fn horizontal_branch<T: Real>(profile: &TubeProfile<T>) -> usize {
    let lambda = profile.space().lambda();
    profile.branches().iter().position(|b| b.kappa == lambda).expect("CP^m point profile has a κ = λ branch")
}

/// Torus bending and its closed-form upper bound `2(π/(R−r))²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusBending<T> {
    pub value: T,
    pub error_estimate: T,
    pub upper_bound: T,
}

/// `½ ∫_0^{2π}∫_0^{2π} sin²θ/(R + r cos θ)² dθ dφ` for the height-function
/// foliation of the rotational torus. With `area_weighted` the integrand is
/// multiplied by the area element `r(R + r cos θ)`.
pub fn torus_bending<T: Real>(
    big_r: T,
    small_r: T,
    area_weighted: bool,
    cfg: &QuadratureConfig<T>,
) -> Result<TorusBending<T>> {
    if !(small_r > T::zero() && small_r < big_r) {
        return Err(FoliateError::InvalidArgument(format!(
            "torus radii need 0 < r < R, got R={big_r:?}, r={small_r:?}"
        )));
    }
    let f = |t: T| {
        let s = t.sin();
        let w = big_r + small_r * t.cos();
        if area_weighted {
            s * s * small_r / w
        } else {
            s * s / (w * w)
        }
    };
    let two_pi = T::PI() + T::PI();
    let half_pi = T::FRAC_PI_2();
    let breaks = [half_pi, T::PI(), T::PI() + half_pi];
    let inner = crate::quadrature::integrate_with_breaks(&f, T::zero(), two_pi, &breaks, cfg)?;
    // ½ · ∫dφ = π
    let gap = T::PI() / (big_r - small_r);
    Ok(TorusBending {
        value: T::PI() * inner.value,
        error_estimate: T::PI() * inner.error,
        upper_bound: T::lit(2.0) * gap * gap,
    })
}

/// Area `4π² R r` of the rotational torus.
pub fn torus_area<T: Real>(big_r: T, small_r: T) -> T {
    T::lit(4.0) * T::PI() * T::PI() * big_r * small_r
}

/// Bending of any [`FoliationSpec`].
pub fn bending<T: Real>(spec: &FoliationSpec<T>, cfg: &QuadratureConfig<T>) -> Result<Bending<T>> {
    match spec {
        FoliationSpec::RadialOrTubular { space, focal } => total_bending(&TubeProfile::new(*space, *focal)?, cfg),
        FoliationSpec::ComplexRadial { m, lambda } => complex_radial_bending(*m, *lambda, cfg),
        FoliationSpec::TorusIsoparametric { big_r, small_r } => {
            let t = torus_bending(*big_r, *small_r, false, cfg)?;
            let area = torus_area(*big_r, *small_r);
            Ok(Bending {
                per_volume: BendingResult::Finite { value: t.value / area, error_estimate: t.error_estimate / area },
                volume: Some(area),
            })
        }
        FoliationSpec::EpsilonDeformation { space, focal, epsilon } => {
            epsilon_deformed_bending(&TubeProfile::new(*space, *focal)?, *epsilon, cfg)
        }
    }
}

/// Ambient dimension of the manifold carrying `spec`.
pub fn ambient_dim<T: Real>(spec: &FoliationSpec<T>) -> usize {
    match spec {
        FoliationSpec::RadialOrTubular { space, .. } | FoliationSpec::EpsilonDeformation { space, .. } => space.dim(),
        FoliationSpec::ComplexRadial { m, .. } => 2 * m,
        FoliationSpec::TorusIsoparametric { .. } => 2,
    }
}

/// Energy `E = (n/2)·Vol + B`, per unit volume and absolute where possible.
pub fn energy<T: Real>(spec: &FoliationSpec<T>, cfg: &QuadratureConfig<T>) -> Result<Energy<T>> {
    let b = bending(spec, cfg)?;
    let half_n = T::from_count(ambient_dim(spec)) * T::lit(0.5);
    let per_volume = match b.per_volume {
        BendingResult::Finite { value, error_estimate } => {
            BendingResult::Finite { value: half_n + value, error_estimate }
        }
        d => d,
    };
    Ok(Energy { per_volume, volume: b.volume })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::default().with_rel_tol(1e-11)
    }

    fn radial(space: &str, focal: &str) -> Bending<f64> {
        let profile =
            TubeProfile::new(ModelSpace::parse(space, 1.0).unwrap(), FocalVariety::parse(focal).unwrap()).unwrap();
        total_bending(&profile, &cfg()).unwrap()
    }

    #[test]
    fn sphere_three_point() {
        let b = radial("S:3", "point");
        let v = b.per_volume.value().unwrap();
        assert!((v - 1.0).abs() < 1e-9, "{v}");
        // Vol(S³) = 2π²
        assert!((b.volume.unwrap() - 2.0 * PI * PI).abs() < 1e-9);
    }

    #[test]
    fn cayley_plane_point() {
        let v = radial("CaP2", "point").per_volume.value().unwrap();
        assert!((v - 139.0 / 21.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn complex_projective_point_diverges_logarithmically() {
        match radial("CP:2", "point").per_volume {
            BendingResult::Divergent { endpoint, exponent_estimate } => {
                assert_eq!(endpoint, Endpoint::Upper);
                assert!((exponent_estimate - 1.0).abs() < 0.1);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn sphere_five_around_two_sphere() {
        let v = radial("S:5", "sub:S:2").per_volume.value().unwrap();
        assert!((v - 6.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn epsilon_endpoints() {
        let p = TubeProfile::new(ModelSpace::sphere(4, 1.0).unwrap(), FocalVariety::Point).unwrap();
        let zero = epsilon_deformed_bending(&p, 0.0, &cfg()).unwrap();
        assert_eq!(zero.per_volume.value(), Some(0.0));
        let full = epsilon_deformed_bending(&p, PI / 2.0, &cfg()).unwrap();
        assert_eq!(full, total_bending(&p, &cfg()).unwrap());
        assert!(epsilon_deformed_bending(&p, 2.0, &cfg()).is_err());
        assert!(epsilon_deformed_bending(&p, -0.1, &cfg()).is_err());
    }

    #[test]
    fn two_sphere_epsilon_window() {
        let p = TubeProfile::new(ModelSpace::sphere(2, 1.0).unwrap(), FocalVariety::Point).unwrap();
        let b = epsilon_deformed_bending(&p, PI / 6.0, &cfg()).unwrap();
        let value = b.absolute().unwrap().value().unwrap();
        let expected = PI * (3.0f64.ln() - 1.0);
        assert!((value - expected).abs() < 1e-10, "{value} vs {expected}");
    }

    #[test]
    fn complex_radial_count_and_value() {
        assert_eq!(complex_radial_component_count::<f64>(2).unwrap(), 4.0);
        assert_eq!(complex_radial_component_count::<f64>(3).unwrap(), 8.0);
        let b = complex_radial_bending(2, 1.0, &cfg()).unwrap();
        assert!((b.per_volume.value().unwrap() - 2.0).abs() < 1e-9);
        assert!(complex_radial_coefficients(1, 1.0).is_err());
    }

    #[test]
    fn complex_radial_coefficients_are_horizontally_umbilical() {
        let xi = complex_radial_coefficients(3, 0.7).unwrap();
        let f = xi.classify(1e-12);
        assert!(f.v_geodesic && f.v_integrable);
        assert!(f.h_umbilical);
        assert!(!f.h_integrable);
    }

    #[test]
    fn torus_small_tube_limit_and_bound() {
        let t = torus_bending(2.0, 1.0, false, &cfg()).unwrap();
        assert!(t.value <= t.upper_bound);
        let thin = torus_bending(1.0, 1e-6, false, &cfg()).unwrap();
        assert!((thin.value - PI * PI).abs() < 1e-4);
        assert!(torus_bending(1.0, 1.0, false, &cfg()).is_err());
        let weighted = torus_bending(2.0, 1.0, true, &cfg()).unwrap();
        assert!(weighted.value > 0.0);
    }

    #[test]
    fn energy_per_volume() {
        let s3 =
            FoliationSpec::RadialOrTubular { space: ModelSpace::sphere(3, 1.0).unwrap(), focal: FocalVariety::Point };
        let e = energy(&s3, &cfg()).unwrap();
        assert!((e.per_volume.value().unwrap() - 2.5).abs() < 1e-9);
        let trivial = FoliationSpec::EpsilonDeformation {
            space: ModelSpace::sphere(3, 1.0).unwrap(),
            focal: FocalVariety::Point,
            epsilon: 0.0,
        };
        assert_eq!(energy(&trivial, &cfg()).unwrap().per_volume.value(), Some(1.5));
        let cr = FoliationSpec::ComplexRadial { m: 2, lambda: 1.0 };
        assert!((energy(&cr, &cfg()).unwrap().per_volume.value().unwrap() - 4.0).abs() < 1e-9);
    }
}
