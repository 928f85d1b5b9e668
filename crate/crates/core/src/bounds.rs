//! Lower bounds for the total bending, the integral formula for the mixed
//! scalar curvature, and the closed-form catalog of radial foliations.

use std::fmt;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::bending::{
    complex_radial_coefficients, horizontal_branch, profile_volume_integral, total_bending, BendingResult,
};
use crate::error::{FoliateError, Result};
use crate::model_space::{Family, ModelSpace};
use crate::quadrature::{integrate_singular, QuadOutcome, QuadratureConfig};
use crate::scalar::Real;
use crate::tube::{FocalVariety, TubeProfile};

/// Relative tolerance for a catalog row to count as reproduced.
pub const TABLE1_REL_TOL: f64 = 1e-5;

/// Which branch of the lower-bound theorem applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundCaseKind {
    /// `q = 1`.
    IQ1,
    /// `q = n − 1`.
    ICodim1,
    /// `2q = n`.
    IIHalf,
    /// `1 < q < n/2` with `σ` umbilical.
    IIILowUmbilical,
    /// `n/2 < q < n − 1` with `σ^⊥` umbilical.
    IIIHighUmbilical,
}

impl fmt::Display for BoundCaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundCaseKind::IQ1 => "I (q=1)",
            BoundCaseKind::ICodim1 => "I (q=n-1)",
            BoundCaseKind::IIHalf => "II (2q=n)",
            BoundCaseKind::IIILowUmbilical => "III (1<q<n/2, umbilical)",
            BoundCaseKind::IIIHighUmbilical => "III (n/2<q<n-1, complement umbilical)",
        })
    }
}

/// A bound case checked against the dimensions of its space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCase<T> {
    kind: BoundCaseKind,
    space: ModelSpace<T>,
    q: usize,
}

impl<T: Real> BoundCase<T> {
    pub fn new(kind: BoundCaseKind, space: ModelSpace<T>, q: usize) -> Result<Self> {
        let n = space.dim();
        let ok = n >= 3
            && match kind {
                BoundCaseKind::IQ1 => q == 1,
                BoundCaseKind::ICodim1 => q + 1 == n,
                BoundCaseKind::IIHalf => 2 * q == n,
                BoundCaseKind::IIILowUmbilical => 1 < q && 2 * q < n,
                BoundCaseKind::IIIHighUmbilical => 2 * q > n && q + 1 < n,
            };
        if !ok {
            return Err(FoliateError::InvalidBoundCase { case: kind.to_string(), n, q });
        }
        Ok(Self { kind, space, q })
    }

    /// Resolves a roman-numeral case label (`I`, `II`, `III`) using `q`.
    pub fn from_label(label: &str, space: ModelSpace<T>, q: usize) -> Result<Self> {
        let n = space.dim();
        let kind = match label.trim() {
            "I" if q + 1 == n && q != 1 => BoundCaseKind::ICodim1,
            "I" => BoundCaseKind::IQ1,
            "II" => BoundCaseKind::IIHalf,
            "III" if 2 * q > n => BoundCaseKind::IIIHighUmbilical,
            "III" => BoundCaseKind::IIILowUmbilical,
            other => return Err(FoliateError::Parse(format!("unknown bound case `{other}`; expected I, II or III"))),
        };
        Self::new(kind, space, q)
    }

    pub fn kind(&self) -> BoundCaseKind {
        self.kind
    }

    pub fn space(&self) -> &ModelSpace<T> {
        &self.space
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Coefficient multiplying `s_mix` in the bound.
    pub fn coefficient(&self) -> T {
        let n = self.space.dim();
        let two = T::lit(2.0);
        match self.kind {
            BoundCaseKind::IQ1 | BoundCaseKind::ICodim1 => T::one() / (two * T::from_count(n - 2)),
            BoundCaseKind::IIHalf => T::one() / T::from_count(n - 2),
            BoundCaseKind::IIILowUmbilical => T::one() / (two * T::from_count(n - self.q - 1)),
            BoundCaseKind::IIIHighUmbilical => T::one() / (two * T::from_count(self.q - 1)),
        }
    }

    /// `true` when the case rests on an umbilicity hypothesis the caller must supply.
    pub fn hypothesis_assumed(&self) -> bool {
        matches!(self.kind, BoundCaseKind::IIILowUmbilical | BoundCaseKind::IIIHighUmbilical)
    }
}

/// A lower bound on `B/Vol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound<T> {
    pub coefficient: T,
    pub s_mix: T,
    pub value: T,
    pub hypothesis_assumed: bool,
}

/// Lower bound on the bending per unit volume: case coefficient times `s_mix`.
pub fn lower_bound<T: Real>(case: &BoundCase<T>) -> Result<LowerBound<T>> {
    let s_mix = case.space.mixed_scalar_curvature(case.q)?;
    let coefficient = case.coefficient();
    Ok(LowerBound { coefficient, s_mix, value: coefficient * s_mix, hypothesis_assumed: case.hypothesis_assumed() })
}

/// Bound `τ / (2n(n − 2))` for unit vector fields on an Einstein space.
pub fn einstein_bound<T: Real>(space: &ModelSpace<T>) -> Result<T> {
    let n = space.dim();
    if n < 3 {
        return Err(FoliateError::InvalidBoundCase { case: "Einstein".into(), n, q: 1 });
    }
    Ok(space.scalar_curvature() / (T::lit(2.0) * T::from_count(n) * T::from_count(n - 2)))
}

/// Outcome of the integral-formula check, per unit volume.
#[derive(Debug, Clone, PartialEq)]
pub enum IntegralCheck<T> {
    Gap { lhs: T, rhs: T, relative_gap: T },
    NotApplicable { reason: String },
}

impl<T: Real> IntegralCheck<T> {
    pub fn relative_gap(&self) -> Option<T> {
        match self {
            IntegralCheck::Gap { relative_gap, .. } => Some(*relative_gap),
            IntegralCheck::NotApplicable { .. } => None,
        }
    }
}

fn gap<T: Real>(lhs: T, rhs: T) -> IntegralCheck<T> {
    IntegralCheck::Gap { lhs, rhs, relative_gap: (lhs - rhs).abs() / lhs.abs() }
}

/// Compares `∫ s_mix` with `2∫(μ_V + μ_H)` on a radial foliation (`q = 1`, `μ_V = 0`).
pub fn integral_formula_check<T: Real>(
    profile: &TubeProfile<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<IntegralCheck<T>> {
    if let BendingResult::Divergent { .. } = total_bending(profile, cfg)?.per_volume {
        return Ok(IntegralCheck::NotApplicable { reason: "total bending is infinite".into() });
    }
    let lhs = profile.space().mixed_scalar_curvature(1)?;
    let integrand = |r: T| profile.second_mean_curvature(r) * profile.theta(r);
    let (den, _) = profile_volume_integral(profile, cfg)?;
    match integrate_singular(&integrand, T::zero(), profile.mu(), cfg)? {
        QuadOutcome::Finite(i) => Ok(gap(lhs, T::lit(2.0) * i.value / den)),
        QuadOutcome::Divergent { .. } => {
            Ok(IntegralCheck::NotApplicable { reason: "second mean curvature is not integrable".into() })
        }
    }
}

/// The integral-formula check for the complex radial foliation on `CP^m` (`q = 2`).
pub fn complex_radial_integral_check<T: Real>(
    m: usize,
    lambda: T,
    cfg: &QuadratureConfig<T>,
) -> Result<IntegralCheck<T>> {
    let space = ModelSpace::complex_projective(m, lambda)?;
    let profile = TubeProfile::new(space, FocalVariety::Point)?;
    let unit = complex_radial_coefficients(m, T::one())?.derive();
    let mu_unit = unit.mu_v + unit.mu_h;
    let horizontal = horizontal_branch(&profile);
    let integrand = |r: T| {
        let a = profile.alpha(horizontal, r);
        mu_unit * a * a * profile.theta(r)
    };
    let lhs = space.mixed_scalar_curvature(2)?;
    let (den, _) = profile_volume_integral(&profile, cfg)?;
    match integrate_singular(&integrand, T::zero(), profile.mu(), cfg)? {
        QuadOutcome::Finite(i) => Ok(gap(lhs, T::lit(2.0) * i.value / den)),
        QuadOutcome::Divergent { .. } => {
            Ok(IntegralCheck::NotApplicable { reason: "second mean curvature is not integrable".into() })
        }
    }
}

/// Closed-form `B/Vol` of a catalog row, as a multiple of `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    Finite(Rational64),
    Infinite,
}

impl ClosedForm {
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            ClosedForm::Finite(r) => r.to_f64(),
            ClosedForm::Infinite => None,
        }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedForm::Finite(r) => write!(f, "{r}·λ"),
            ClosedForm::Infinite => f.write_str("∞"),
        }
    }
}

fn rat(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

fn finite(num: Rational64, den: Rational64) -> ClosedForm {
    if den == rat(0) {
        ClosedForm::Infinite
    } else {
        ClosedForm::Finite(num / den)
    }
}

/// Closed-form `B/Vol` (in units of `λ`) for tubes around `focal` in `space`.
///
/// For tubes around a totally geodesic `KP^{m−p−1}` the formulas use
/// `δ = (m−1)/2 − p`, evaluated exactly.
pub fn closed_form<T: Real>(space: &ModelSpace<T>, focal: &FocalVariety) -> Result<ClosedForm> {
    let m = space.m() as i64;
    let out_of_catalog = || FoliateError::OutOfCatalog { space: space.to_string(), focal: focal.to_string() };
    let not_computable = || FoliateError::NotComputable { space: space.to_string(), focal: focal.to_string() };
    let delta = |p: i64| Rational64::new(m - 1, 2) - rat(p);
    let sphere_like = |mm: i64| finite(rat(mm - 1), rat(2 * (mm - 2)));
    match (space.family(), *focal) {
        (Family::Sphere | Family::RealProjective, FocalVariety::Point) => Ok(sphere_like(m)),
        (Family::Sphere, FocalVariety::TotallyGeodesic { family: Family::Sphere, index })
        | (Family::RealProjective, FocalVariety::TotallyGeodesic { family: Family::RealProjective, index }) => {
            let k = index as i64;
            if k > m - 1 {
                return Err(out_of_catalog());
            }
            if k == m - 1 || k == 0 {
                return Ok(sphere_like(m));
            }
            if k == m - 2 || k == 1 {
                return Ok(ClosedForm::Infinite);
            }
            let d = delta(m - k - 1);
            let d2 = d * d;
            let mm1 = rat(m - 1);
            Ok(finite(mm1 * (rat(4) * d2 - mm1 * mm1 + rat(4)), rat(2) * (rat(4) * d2 - rat((m - 3) * (m - 3)))))
        }
        (Family::ComplexProjective, FocalVariety::Point) => Ok(ClosedForm::Infinite),
        (Family::ComplexProjective, FocalVariety::TotallyGeodesic { family: Family::ComplexProjective, index }) => {
            let k = index as i64;
            if k > m - 1 {
                return Err(out_of_catalog());
            }
            if k == 0 || k == m - 1 {
                return Ok(ClosedForm::Infinite);
            }
            let d2 = delta(m - k - 1) * delta(m - k - 1);
            Ok(finite(rat(m - 1) * (rat(4) * d2 - rat(m * m + 1)), rat(4) * d2 - rat((m - 1) * (m - 1))))
        }
        (Family::QuaternionicProjective, FocalVariety::Point) => Ok(finite(rat(6 * m * m - 5 * m + 2), rat(2 * m - 1))),
        (
            Family::QuaternionicProjective,
            FocalVariety::TotallyGeodesic { family: Family::QuaternionicProjective, index },
        ) => {
            let k = index as i64;
            if k > m - 1 {
                return Err(out_of_catalog());
            }
            if k == 0 || k == m - 1 {
                return Ok(finite(rat(6 * m * m - 5 * m + 2), rat(2 * m - 1)));
            }
            let d2 = delta(m - k - 1) * delta(m - k - 1);
            Ok(finite(rat(8 * (m - 1)) * d2 - rat(m * (2 * m * m + 1)), rat(4) * d2 - rat(m * m)))
        }
        (Family::CayleyPlane, FocalVariety::Point) => Ok(ClosedForm::Finite(Rational64::new(139, 21))),
        (Family::ComplexProjective, FocalVariety::TotallyGeodesic { family: Family::RealProjective, index })
        | (
            Family::QuaternionicProjective,
            FocalVariety::TotallyGeodesic { family: Family::ComplexProjective, index },
        ) if index as i64 == m => Err(not_computable()),
        _ => Err(out_of_catalog()),
    }
}

/// Closed forms of the two rows whose tubes have non-constant principal
/// curvature structure: `CP^m` around `RP^m` and `HP^m` around `CP^m`.
pub fn exceptional_closed_form(family: Family, m: usize) -> Option<ClosedForm> {
    let m = m as i64;
    match family {
        Family::ComplexProjective => Some(ClosedForm::Infinite),
        Family::QuaternionicProjective if m > 1 => {
            Some(ClosedForm::Finite(Rational64::new(10 * m * m - 6 * m - 1, m - 1)))
        }
        _ => None,
    }
}

/// Verdict for one catalog row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowStatus {
    Reproduced,
    DivergenceConfirmed,
    NotComputable { reason: String },
    Mismatch { reason: String },
}

impl RowStatus {
    pub fn label(&self) -> &'static str {
        match self {
            RowStatus::Reproduced => "Reproduced",
            RowStatus::DivergenceConfirmed => "DivergenceConfirmed",
            RowStatus::NotComputable { .. } => "NotComputable",
            RowStatus::Mismatch { .. } => "Mismatch",
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, RowStatus::Mismatch { .. })
    }
}

/// One row of the catalog report.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row<T> {
    pub space: ModelSpace<T>,
    pub focal: FocalVariety,
    pub closed_form: Option<ClosedForm>,
    pub numeric: Option<BendingResult<T>>,
    pub relative_error: Option<T>,
    pub status: RowStatus,
}

/// The `(space, focal)` pairs covered by the report, in report order.
pub fn table1_catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        ("S:3", "point"),
        ("S:4", "point"),
        ("S:5", "point"),
        ("S:6", "point"),
        ("RP:3", "point"),
        ("RP:4", "point"),
        ("S:4", "sub:S:3"),
        ("S:4", "sub:S:2"),
        ("S:4", "sub:S:1"),
        ("S:5", "sub:S:3"),
        ("S:5", "sub:S:2"),
        ("S:5", "sub:S:1"),
        ("S:6", "sub:S:2"),
        ("CP:2", "point"),
        ("CP:3", "point"),
        ("CP:3", "sub:CP:1"),
        ("CP:4", "sub:CP:1"),
        ("CP:3", "sub:CP:2"),
        ("HP:2", "point"),
        ("HP:3", "point"),
        ("HP:3", "sub:HP:1"),
        ("HP:2", "sub:HP:1"),
        ("CaP2", "point"),
        ("CP:3", "sub:RP:3"),
        ("HP:2", "sub:CP:2"),
    ]
}

/// Evaluates one catalog row.
pub fn table1_row<T: Real>(space: ModelSpace<T>, focal: FocalVariety, cfg: &QuadratureConfig<T>) -> Table1Row<T> {
    let mut row = Table1Row {
        space,
        focal,
        closed_form: None,
        numeric: None,
        relative_error: None,
        status: RowStatus::Reproduced,
    };
    let form = match closed_form(&space, &focal) {
        Ok(form) => form,
        Err(err) => {
            if let FocalVariety::TotallyGeodesic { .. } = focal {
                row.closed_form = exceptional_closed_form(space.family(), space.m());
            }
            row.status = RowStatus::NotComputable { reason: err.to_string() };
            return row;
        }
    };
    row.closed_form = Some(form);
    let numeric = TubeProfile::new(space, focal).and_then(|p| total_bending(&p, cfg));
    let numeric = match numeric {
        Ok(b) => b.per_volume,
        Err(err) => {
            row.status = RowStatus::Mismatch { reason: err.to_string() };
            return row;
        }
    };
    row.numeric = Some(numeric);
    row.status = match (form, numeric) {
        (ClosedForm::Finite(r), BendingResult::Finite { value, .. }) => {
            let expected = T::lit(r.to_f64().unwrap_or(f64::NAN)) * space.lambda();
            let rel = (value - expected).abs() / expected.abs();
            row.relative_error = Some(rel);
            if rel <= T::lit(TABLE1_REL_TOL) {
                RowStatus::Reproduced
            } else {
                RowStatus::Mismatch { reason: format!("relative error {rel:?} exceeds {TABLE1_REL_TOL:e}") }
            }
        }
        (ClosedForm::Infinite, BendingResult::Divergent { .. }) => RowStatus::DivergenceConfirmed,
        (ClosedForm::Infinite, BendingResult::Finite { .. }) => {
            RowStatus::Mismatch { reason: "expected divergence, quadrature converged".into() }
        }
        (ClosedForm::Finite(_), BendingResult::Divergent { .. }) => {
            RowStatus::Mismatch { reason: "expected a finite value, quadrature diverged".into() }
        }
    };
    row
}

/// Evaluates the whole catalog at curvature scale `λ`. Rows are computed in
/// parallel and returned in catalog order.
pub fn table1_report<T: Real>(lambda: T, cfg: &QuadratureConfig<T>) -> Result<Vec<Table1Row<T>>> {
    let entries = table1_catalog()
        .into_iter()
        .map(|(s, f)| Ok((ModelSpace::parse(s, lambda)?, FocalVariety::parse(f)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(entries.into_par_iter().map(|(space, focal)| table1_row(space, focal, cfg)).collect())
}

/// How the radial foliation compares with the case-I lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinimizerVerdict {
    /// The bound is attained.
    Equality,
    /// The bending is finite and strictly above the bound.
    Strict,
    /// The bending is infinite, so the bound says nothing.
    Vacuous,
}

/// Comparison of the radial foliation around a point with the case-I bound.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimizerReport<T> {
    pub space: ModelSpace<T>,
    pub bound: T,
    pub bending: BendingResult<T>,
    /// All principal curvatures of the tubes agree.
    pub umbilical: bool,
    /// The horizontal distribution (the tubes) is integrable.
    pub integrable: bool,
    pub verdict: MinimizerVerdict,
}

/// Relative tolerance used to declare equality with the bound.
pub const MINIMIZER_REL_TOL: f64 = 1e-8;

pub fn minimizer_report<T: Real>(space: ModelSpace<T>, cfg: &QuadratureConfig<T>) -> Result<MinimizerReport<T>> {
    let bound = lower_bound(&BoundCase::new(BoundCaseKind::IQ1, space, 1)?)?.value;
    let profile = TubeProfile::new(space, FocalVariety::Point)?;
    let bending = total_bending(&profile, cfg)?.per_volume;
    let first = profile.branches()[0];
    let umbilical = profile.branches().iter().all(|b| b.kappa == first.kappa && b.init == first.init);
    let verdict = match bending {
        BendingResult::Divergent { .. } => MinimizerVerdict::Vacuous,
        BendingResult::Finite { value, .. } => {
            if (value - bound).abs() <= T::lit(MINIMIZER_REL_TOL) * bound.abs() {
                MinimizerVerdict::Equality
            } else {
                MinimizerVerdict::Strict
            }
        }
    };
    Ok(MinimizerReport { space, bound, bending, umbilical, integrable: true, verdict })
}
