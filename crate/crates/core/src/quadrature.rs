//! Adaptive Gauss–Kronrod quadrature with endpoint power-law diagnostics.
//!
//! Every integrand handled by this crate behaves like `C·d^{-s}` (possibly with
//! `s ≤ 0`) at distance `d` from an endpoint. Divergence is decided by fitting
//! `s` to the sums over geometrically shrinking panels next to the endpoint:
//! for `g(d) ~ C d^{-s}` the panel `[d/2, d]` contributes `~ d^{1-s}`, so the
//! log–log slope of the panel sums is `1 - s`. A fitted `s` within
//! `divergence_tolerance` of 1 (or above) is reported as divergent.
//!
//! Panels are evaluated serially and reduced in ascending order of their left
//! endpoint with compensated summation, so results are bit-reproducible.

use std::fmt;

use crate::error::{FoliateError, Result};
use crate::scalar::{compensated_sum, Real};

/// Tolerances and limits for [`integrate`] and [`integrate_singular`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    /// Maximum bisection depth of a single panel.
    pub max_depth: usize,
    /// Fraction of the interval examined next to each endpoint for divergence.
    pub divergence_window: T,
    /// Number of geometric panels toward a possibly singular endpoint.
    pub endpoint_levels: usize,
    /// Number of innermost panel sums used in the power-law fit.
    pub fit_points: usize,
    /// Exponents `s ≥ 1 − divergence_tolerance` are reported as divergent.
    pub divergence_tolerance: T,
    /// Hard cap on the number of panels kept by one adaptive integration.
    pub max_panels: usize,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        let eps = T::epsilon().to_f64().unwrap_or(f64::EPSILON);
        let levels = (-eps.sqrt().log2()).floor() as usize + 4;
        Self {
            rel_tol: T::lit(1e-8),
            abs_tol: T::lit(1e-12),
            max_depth: 40,
            divergence_window: T::lit(1e-2),
            endpoint_levels: levels,
            fit_points: 12,
            divergence_tolerance: T::lit(0.05),
            max_panels: 20_000,
        }
    }
}

impl<T: Real> QuadratureConfig<T> {
    pub fn with_rel_tol(mut self, rel_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: T) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_depth(mut self, max_depth: usize) -> Self {
        self.max_depth = max_depth;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [self.rel_tol, self.abs_tol, self.divergence_window, self.divergence_tolerance]
            .iter()
            .all(|v| *v > T::zero() && v.is_finite());
        if !positive || self.divergence_window >= T::lit(0.5) {
            return Err(FoliateError::InvalidArgument("quadrature tolerances must be positive".into()));
        }
        if self.max_depth == 0 || self.endpoint_levels < 4 || self.fit_points < 3 {
            return Err(FoliateError::InvalidArgument("quadrature limits too small".into()));
        }
        if self.fit_points > self.endpoint_levels {
            return Err(FoliateError::InvalidArgument("fit_points exceeds endpoint_levels".into()));
        }
        Ok(())
    }
}

/// A finite integral with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error: T,
}

/// Which endpoint(s) an integrand diverges at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Lower,
    Upper,
    Both,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Endpoint::Lower => "lower",
            Endpoint::Upper => "upper",
            Endpoint::Both => "both",
        })
    }
}

/// Result of integrating a possibly singular integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadOutcome<T> {
    Finite(Integral<T>),
    Divergent { endpoint: Endpoint, exponent: T },
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for the 7-point rule, matching XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    abs_value: T,
    depth: usize,
}

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, depth: usize) -> Panel<T> {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let hl = half * (b - a);
    let fc = f(center);
    let mut res_k = fc * T::lit(WGK[7]);
    let mut res_g = fc * T::lit(WG[3]);
    let mut res_abs = res_k.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = hl * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        res_k = res_k + w * (f1 + f2);
        res_abs = res_abs + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g = res_g + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let mean = res_k * half;
    let mut res_asc = T::lit(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * hl;
    let res_abs = res_abs * hl.abs();
    let res_asc = res_asc * hl.abs();
    let mut err = ((res_k - res_g) * hl).abs();
    if res_asc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / res_asc).powf(T::lit(1.5));
        err = if scale < T::one() { res_asc * scale } else { res_asc };
    }
    let floor = T::lit(50.0) * T::epsilon() * res_abs;
    if floor > err {
        err = floor;
    }
    Panel { a, b, value, error: err, abs_value: res_abs, depth }
}

fn totals<T: Real>(panels: &[Panel<T>]) -> (T, T, T) {
    let value = compensated_sum(panels.iter().map(|p| p.value));
    let error = compensated_sum(panels.iter().map(|p| p.error));
    let abs_value = compensated_sum(panels.iter().map(|p| p.abs_value));
    (value, error, abs_value)
}

/// Adaptive integration of `f` over `[a, b]` starting from the partition
/// given by `breaks` (strictly inside `(a, b)`, ascending).
pub fn integrate_with_breaks<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    breaks: &[T],
    cfg: &QuadratureConfig<T>,
) -> Result<Integral<T>> {
    cfg.validate()?;
    if !(a < b) {
        if a == b {
            return Ok(Integral { value: T::zero(), error: T::zero() });
        }
        return Err(FoliateError::InvalidArgument("integration bounds must satisfy a <= b".into()));
    }
    let mut nodes = Vec::with_capacity(breaks.len() + 2);
    nodes.push(a);
    nodes.extend(breaks.iter().copied().filter(|x| *x > a && *x < b));
    nodes.push(b);
    let mut panels: Vec<Panel<T>> = nodes.windows(2).map(|w| gk15(f, w[0], w[1], 0)).collect();

    loop {
        let (value, error, abs_value) = totals(&panels);
        if !value.is_finite() || !error.is_finite() {
            return Err(FoliateError::Undecided {
                a: a.to_f64().unwrap_or(f64::NAN),
                b: b.to_f64().unwrap_or(f64::NAN),
                reason: "integrand produced a non-finite value".into(),
            });
        }
        let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        let roundoff = T::lit(50.0) * T::epsilon() * abs_value;
        if error <= target || error <= roundoff {
            return Ok(Integral { value, error });
        }
        let (worst, _) = panels.iter().enumerate().fold((0usize, T::neg_infinity()), |(bi, be), (i, p)| {
            if p.error > be {
                (i, p.error)
            } else {
                (bi, be)
            }
        });
        let p = panels[worst];
        if p.depth >= cfg.max_depth || panels.len() >= cfg.max_panels {
            return Err(FoliateError::Undecided {
                a: a.to_f64().unwrap_or(f64::NAN),
                b: b.to_f64().unwrap_or(f64::NAN),
                reason: format!(
                    "error {:e} above target {:e} at depth {}",
                    error.to_f64().unwrap_or(f64::NAN),
                    target.to_f64().unwrap_or(f64::NAN),
                    p.depth
                ),
            });
        }
        let mid = T::lit(0.5) * (p.a + p.b);
        panels[worst] = gk15(f, p.a, mid, p.depth + 1);
        panels.insert(worst + 1, gk15(f, mid, p.b, p.depth + 1));
    }
}

/// Adaptive integration of a regular integrand over `[a, b]`.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, cfg: &QuadratureConfig<T>) -> Result<Integral<T>> {
    integrate_with_breaks(f, a, b, &[], cfg)
}

/// Power-law exponent `s` of `f ~ C·d^{-s}` at one endpoint, fitted from
/// geometric panel sums. `None` when the integrand vanishes identically there.
pub fn endpoint_exponent<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    at_upper: bool,
    cfg: &QuadratureConfig<T>,
) -> Result<Option<T>> {
    cfg.validate()?;
    let width = cfg.divergence_window * (b - a);
    let half = T::lit(0.5);
    let mut logs: Vec<(T, T)> = Vec::with_capacity(cfg.endpoint_levels);
    let mut d = width;
    for _ in 0..cfg.endpoint_levels {
        let (lo, hi) = if at_upper { (b - d, b - d * half) } else { (a + d * half, a + d) };
        let sum = gk15(f, lo, hi, 0).value.abs();
        if sum > T::zero() && sum.is_finite() {
            logs.push((d.ln(), sum.ln()));
        }
        d = d * half;
    }
    if logs.len() < 3 {
        return Ok(None);
    }
    let tail = &logs[logs.len().saturating_sub(cfg.fit_points)..];
    let k = T::from_count(tail.len());
    let mx = tail.iter().fold(T::zero(), |s, (x, _)| s + *x) / k;
    let my = tail.iter().fold(T::zero(), |s, (_, y)| s + *y) / k;
    let (sxy, sxx) = tail
        .iter()
        .fold((T::zero(), T::zero()), |(sxy, sxx), (x, y)| (sxy + (*x - mx) * (*y - my), sxx + (*x - mx) * (*x - mx)));
    let slope = sxy / sxx;
    Ok(Some(T::one() - slope))
}

/// Integrates a non-negative integrand that may blow up at either endpoint.
///
/// Both endpoints are first classified by [`endpoint_exponent`]; if neither
/// diverges, the integral is computed adaptively on a partition graded
/// geometrically toward both ends.
pub fn integrate_singular<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    cfg: &QuadratureConfig<T>,
) -> Result<QuadOutcome<T>> {
    cfg.validate()?;
    let threshold = T::one() - cfg.divergence_tolerance;
    let lower = endpoint_exponent(f, a, b, false, cfg)?;
    let upper = endpoint_exponent(f, a, b, true, cfg)?;
    let diverges = |s: Option<T>| s.is_some_and(|s| s >= threshold);
    let endpoint = match (diverges(lower), diverges(upper)) {
        (true, true) => Some(Endpoint::Both),
        (true, false) => Some(Endpoint::Lower),
        (false, true) => Some(Endpoint::Upper),
        (false, false) => None,
    };
    if let Some(endpoint) = endpoint {
        let exponent = match endpoint {
            Endpoint::Lower => lower,
            Endpoint::Upper => upper,
            Endpoint::Both => lower.zip(upper).map(|(l, u)| l.max(u)),
        }
        .expect("diverging endpoint has an exponent");
        return Ok(QuadOutcome::Divergent { endpoint, exponent });
    }
    let breaks = graded_breaks(a, b, cfg.endpoint_levels);
    integrate_with_breaks(f, a, b, &breaks, cfg).map(QuadOutcome::Finite)
}

/// Breakpoints at distances `L/4, L/8, …` from both ends of `[a, b]`.
fn graded_breaks<T: Real>(a: T, b: T, levels: usize) -> Vec<T> {
    let len = b - a;
    let half = T::lit(0.5);
    let mut d = len * T::lit(0.25);
    let mut lower = Vec::with_capacity(levels);
    let mut upper = Vec::with_capacity(levels);
    for _ in 0..levels {
        lower.push(a + d);
        upper.push(b - d);
        d = d * half;
    }
    lower.reverse();
    lower.extend(upper);
    lower.dedup();
    lower
}
