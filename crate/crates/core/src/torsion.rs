//! Pointwise algebra of intrinsic-torsion coefficients.
//!
//! A split `TM = V ⊕ H` with `dim V = q` is described at a point by the two
//! coefficient families
//!
//! * `ξ_ab^j = g(ξ_{E_a} E_b, E_{q+j})` (vertical block, `a, b < q`, `j < n - q`)
//! * `ξ_jk^a = g(ξ_{E_{q+j}} E_{q+k}, E_a)` (horizontal block)
//!
//! in an adapted orthonormal frame. Everything here is an index sum over those
//! arrays, evaluated in lexicographic order with compensated accumulation, and
//! works unchanged over exact rationals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FoliateError, Result};
use crate::scalar::{compensated_sum, Real, Scalar};

/// Ambient dimension `n` and vertical dimension `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitDims {
    n: usize,
    q: usize,
}

impl SplitDims {
    pub fn new(n: usize, q: usize) -> Result<Self> {
        if n < 2 || q < 1 || q > n {
            return Err(FoliateError::InvalidDims { n, q });
        }
        Ok(Self { n, q })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Horizontal dimension `n - q`.
    pub fn h(&self) -> usize {
        self.n - self.q
    }

    fn vertical_len(&self) -> usize {
        self.q * self.q * self.h()
    }

    fn horizontal_len(&self) -> usize {
        self.h() * self.h() * self.q
    }
}

/// Which block of the split a construction or query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    Vertical,
    Horizontal,
}

/// Dense coefficient arrays of the intrinsic torsion at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionCoefficients<T> {
    dims: SplitDims,
    xi_v: Vec<T>,
    xi_h: Vec<T>,
}

/// Squared norms and second mean curvatures derived from the coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedTensors<T> {
    pub sigma_v: T,
    pub sigma_h: T,
    pub norm_xi_sq: T,
    pub hv_sq: T,
    pub hh_sq: T,
    pub av_sq: T,
    pub ah_sq: T,
    pub mean_v_sq: T,
    pub mean_h_sq: T,
    pub mu_v: T,
    pub mu_h: T,
}

/// Geodesic / integrable / umbilical flags for both blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BlockFlags {
    pub v_geodesic: bool,
    pub v_integrable: bool,
    pub v_umbilical: bool,
    pub h_geodesic: bool,
    pub h_integrable: bool,
    pub h_umbilical: bool,
}

/// Default relative tolerance for [`TorsionCoefficients::classify`].
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-12;

/// View of one block as a family of `p × p` matrices indexed by `s < r`:
/// entry `(x, y, s)` is `ξ_xy^s`. Both blocks share every formula through it.
struct BlockView<'a, T> {
    data: &'a [T],
    p: usize,
    r: usize,
}

impl<T: Scalar> BlockView<'_, T> {
    fn at(&self, x: usize, y: usize, s: usize) -> T {
        self.data[(x * self.p + y) * self.r + s].clone()
    }

    fn sum_sq(&self) -> T {
        compensated_sum(self.data.iter().map(|v| v.clone() * v.clone()))
    }

    /// `‖h‖²` (sign = 1) or `‖A‖²` (sign = -1) of the block.
    fn sym_part_sq(&self, sign: T) -> T {
        let half = T::one() / T::from_count(2);
        let mut terms = Vec::with_capacity(self.data.len());
        for x in 0..self.p {
            for y in 0..self.p {
                for s in 0..self.r {
                    let v = half.clone() * (self.at(x, y, s) + sign.clone() * self.at(y, x, s));
                    terms.push(v.clone() * v);
                }
            }
        }
        compensated_sum(terms)
    }

    /// `‖H‖² = Σ_s (Σ_x ξ_xx^s)²`.
    fn mean_sq(&self) -> T {
        compensated_sum((0..self.r).map(|s| {
            let tr = compensated_sum((0..self.p).map(|x| self.at(x, x, s)));
            tr.clone() * tr
        }))
    }

    /// `μ = Σ_s Σ_{x<y} (ξ_xx^s ξ_yy^s − ξ_xy^s ξ_yx^s)`.
    fn second_mean(&self) -> T {
        let mut terms = Vec::new();
        for s in 0..self.r {
            for x in 0..self.p {
                for y in (x + 1)..self.p {
                    terms.push(self.at(x, x, s) * self.at(y, y, s) - self.at(x, y, s) * self.at(y, x, s));
                }
            }
        }
        compensated_sum(terms)
    }

    /// Nonnegative quadratic form equal to `(p-1)Σ − 2μ`, summed over `s`:
    /// `Σ_{x<y}(ξ_xx − ξ_yy)² + Σ_{x<y}(ξ_xy + ξ_yx)² + (p−2)Σ_{x≠y} ξ_xy²`.
    fn sigma_gap_form(&self) -> T {
        let mut terms = Vec::new();
        let pm2 = T::from_count(self.p.saturating_sub(2));
        for s in 0..self.r {
            for x in 0..self.p {
                for y in (x + 1)..self.p {
                    let d = self.at(x, x, s) - self.at(y, y, s);
                    let e = self.at(x, y, s) + self.at(y, x, s);
                    terms.push(d.clone() * d + e.clone() * e);
                }
                for y in 0..self.p {
                    if x != y {
                        let v = self.at(x, y, s);
                        terms.push(pm2.clone() * v.clone() * v);
                    }
                }
            }
        }
        compensated_sum(terms)
    }

    fn flags(&self, thr: &T) -> (bool, bool, bool) {
        let small = |v: T| v.abs() <= *thr;
        let mut geodesic = true;
        let mut integrable = true;
        let mut umbilical = true;
        for s in 0..self.r {
            for x in 0..self.p {
                for y in 0..self.p {
                    let xy = self.at(x, y, s);
                    let yx = self.at(y, x, s);
                    geodesic &= small(xy.clone() + yx.clone());
                    integrable &= small(xy.clone() - yx.clone());
                    if x != y {
                        umbilical &= small(xy + yx);
                        umbilical &= small(self.at(x, x, s) - self.at(y, y, s));
                    }
                }
            }
        }
        (geodesic, integrable, umbilical)
    }
}

impl<T: Scalar> TorsionCoefficients<T> {
    /// Builds coefficients from flat arrays laid out as `xi_v[a][b][j]` and
    /// `xi_h[j][k][a]` (row-major).
    pub fn from_arrays(dims: SplitDims, xi_v: Vec<T>, xi_h: Vec<T>) -> Result<Self> {
        if xi_v.len() != dims.vertical_len() {
            return Err(FoliateError::ShapeMismatch { name: "xi_v", expected: dims.vertical_len(), got: xi_v.len() });
        }
        if xi_h.len() != dims.horizontal_len() {
            return Err(FoliateError::ShapeMismatch { name: "xi_h", expected: dims.horizontal_len(), got: xi_h.len() });
        }
        if !xi_v.iter().chain(xi_h.iter()).all(Scalar::is_finite_value) {
            return Err(FoliateError::NonFinite);
        }
        Ok(Self { dims, xi_v, xi_h })
    }

    pub fn zeros(dims: SplitDims) -> Self {
        Self { dims, xi_v: vec![T::zero(); dims.vertical_len()], xi_h: vec![T::zero(); dims.horizontal_len()] }
    }

    pub fn dims(&self) -> SplitDims {
        self.dims
    }

    /// `ξ_ab^j` (zero-based indices).
    pub fn xi_v(&self, a: usize, b: usize, j: usize) -> &T {
        &self.xi_v[(a * self.dims.q + b) * self.dims.h() + j]
    }

    /// `ξ_jk^a` (zero-based indices).
    pub fn xi_h(&self, j: usize, k: usize, a: usize) -> &T {
        &self.xi_h[(j * self.dims.h() + k) * self.dims.q + a]
    }

    pub fn set_xi_v(&mut self, a: usize, b: usize, j: usize, value: T) {
        let h = self.dims.h();
        self.xi_v[(a * self.dims.q + b) * h + j] = value;
    }

    pub fn set_xi_h(&mut self, j: usize, k: usize, a: usize, value: T) {
        let (h, q) = (self.dims.h(), self.dims.q);
        self.xi_h[(j * h + k) * q + a] = value;
    }

    fn vertical(&self) -> BlockView<'_, T> {
        BlockView { data: &self.xi_v, p: self.dims.q, r: self.dims.h() }
    }

    fn horizontal(&self) -> BlockView<'_, T> {
        BlockView { data: &self.xi_h, p: self.dims.h(), r: self.dims.q }
    }

    /// Full `(1,2)` tensor `g(ξ_{E_i} E_j, E_k)` as an `n³` array, including the
    /// skew-adjoint components `ξ_U X` and `ξ_X U` implied by the coefficients.
    pub fn full_tensor(&self) -> Vec<T> {
        let n = self.dims.n;
        let q = self.dims.q;
        let h = self.dims.h();
        let mut t = vec![T::zero(); n * n * n];
        let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
        for a in 0..q {
            for b in 0..q {
                for j in 0..h {
                    let v = self.xi_v(a, b, j).clone();
                    t[idx(a, b, q + j)] = v.clone();
                    t[idx(a, q + j, b)] = -v;
                }
            }
        }
        for j in 0..h {
            for k in 0..h {
                for a in 0..q {
                    let v = self.xi_h(j, k, a).clone();
                    t[idx(q + j, q + k, a)] = v.clone();
                    t[idx(q + j, a, q + k)] = -v;
                }
            }
        }
        t
    }

    /// Every derived quantity by its literal index sum.
    ///
    /// `norm_xi_sq` is taken over the full tensor from [`Self::full_tensor`],
    /// not from `Σ_V + Σ_H`, so `‖ξ‖² = 2(Σ_V + Σ_H)` remains a real check.
    pub fn derive(&self) -> DerivedTensors<T> {
        let v = self.vertical();
        let h = self.horizontal();
        let one = T::one();
        DerivedTensors {
            sigma_v: v.sum_sq(),
            sigma_h: h.sum_sq(),
            norm_xi_sq: compensated_sum(self.full_tensor().into_iter().map(|x| x.clone() * x)),
            hv_sq: v.sym_part_sq(one.clone()),
            hh_sq: h.sym_part_sq(one.clone()),
            av_sq: v.sym_part_sq(-one.clone()),
            ah_sq: h.sym_part_sq(-one),
            mean_v_sq: v.mean_sq(),
            mean_h_sq: h.mean_sq(),
            mu_v: v.second_mean(),
            mu_h: h.second_mean(),
        }
    }

    /// `(2μ_V − ‖H_V‖² − ‖A_V‖² + ‖h_V‖², 2μ_H − ‖H_H‖² − ‖A_H‖² + ‖h_H‖²)`.
    pub fn mu_identity_residual(&self) -> (T, T) {
        let d = self.derive();
        let two = T::from_count(2);
        (two.clone() * d.mu_v - d.mean_v_sq - d.av_sq + d.hv_sq, two * d.mu_h - d.mean_h_sq - d.ah_sq + d.hh_sq)
    }

    /// `(Σ_V − 2μ_V/(q−1), Σ_H − 2μ_H/(n−q−1))`.
    ///
    /// A block of dimension 1 (or 0) has `μ = 0` and the quotient is taken to
    /// be zero, so its slack is `Σ` itself.
    pub fn sigma_inequality_slack(&self) -> (T, T) {
        let d = self.derive();
        (Self::block_slack(d.sigma_v, d.mu_v, self.dims.q), Self::block_slack(d.sigma_h, d.mu_h, self.dims.h()))
    }

    fn block_slack(sigma: T, mu: T, p: usize) -> T {
        if p < 2 {
            return sigma;
        }
        let two = T::from_count(2);
        sigma - two * mu / T::from_count(p - 1)
    }

    /// The slack of [`Self::sigma_inequality_slack`] written as the explicit
    /// sum of squares `{Σ_{a<b}(ξ_aa−ξ_bb)² + Σ_{a<b}(ξ_ab+ξ_ba)² + (q−2)Σ_{a≠b}ξ_ab²}/(q−1)`.
    pub fn sigma_slack_sum_of_squares(&self) -> (T, T) {
        let form = |view: BlockView<'_, T>, p: usize| {
            if p < 2 {
                view.sum_sq()
            } else {
                view.sigma_gap_form() / T::from_count(p - 1)
            }
        };
        (form(self.vertical(), self.dims.q), form(self.horizontal(), self.dims.h()))
    }

    /// `((n+2)²/8)‖ξ‖² − ‖H_V + H_H‖²`, with `‖H_V + H_H‖² = ‖H_V‖² + ‖H_H‖²`.
    pub fn mean_curvature_bound_slack(&self) -> T {
        let d = self.derive();
        let np2 = T::from_count(self.dims.n + 2);
        np2.clone() * np2 / T::from_count(8) * d.norm_xi_sq - (d.mean_v_sq + d.mean_h_sq)
    }

    /// Sharper per-block forms `((q+1)Σ_V − ‖H_V‖², (n−q+1)Σ_H − ‖H_H‖²)`.
    pub fn block_mean_curvature_slacks(&self) -> (T, T) {
        let d = self.derive();
        (
            T::from_count(self.dims.q + 1) * d.sigma_v - d.mean_v_sq,
            T::from_count(self.dims.h() + 1) * d.sigma_h - d.mean_h_sq,
        )
    }

    /// Largest coefficient magnitude (zero for the zero array).
    pub fn max_abs(&self) -> T {
        self.xi_v.iter().chain(self.xi_h.iter()).map(|v| v.abs()).fold(T::zero(), |m, v| if v > m { v } else { m })
    }

    /// Tests the defining linear conditions to within `tol` relative to the
    /// largest coefficient magnitude.
    pub fn classify(&self, tol: T) -> BlockFlags {
        let thr = tol * self.max_abs();
        let (v_geodesic, v_integrable, v_umbilical) = self.vertical().flags(&thr);
        let (h_geodesic, h_integrable, h_umbilical) = self.horizontal().flags(&thr);
        BlockFlags { v_geodesic, v_integrable, v_umbilical, h_geodesic, h_integrable, h_umbilical }
    }

    /// Coefficients of a codimension-one split (`q = 1`) whose horizontal block
    /// is diagonal: `ξ_jj^1 = values[j]`. This is the pointwise torsion of a
    /// radial foliation in a frame of principal directions.
    pub fn diagonal_horizontal(values: &[T]) -> Result<Self> {
        let dims = SplitDims::new(values.len() + 1, 1)?;
        let mut xi = Self::zeros(dims);
        for (j, v) in values.iter().enumerate() {
            xi.set_xi_h(j, j, 0, v.clone());
        }
        Ok(xi)
    }

    /// Entries `k / 2^bits` with `k` uniform in `[−2^bits, 2^bits]`.
    ///
    /// Dyadic values are exact in every scalar type, so the same draw can be
    /// replayed in floating point and in rational arithmetic.
    pub fn random_dyadic(dims: SplitDims, seed: u64, bits: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = 1i64 << bits;
        let denom = T::from_i64(scale).expect("dyadic denominator");
        let mut draw = || T::from_i64(rng.gen_range(-scale..=scale)).expect("dyadic") / denom.clone();
        let xi_v = (0..dims.vertical_len()).map(|_| draw()).collect();
        let xi_h = (0..dims.horizontal_len()).map(|_| draw()).collect();
        Self { dims, xi_v, xi_h }
    }

    /// Replaces one block with an umbilical pattern: `ξ_aa^j = d_j` and
    /// `ξ_ab^j = −ξ_ba^j` off the diagonal; the off-diagonal part is zeroed
    /// when `integrable` is requested. Values are dyadic draws from `seed`.
    pub fn make_umbilical(mut self, block: Block, integrable: bool, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = 1i64 << 16;
        let denom = T::from_i64(scale).expect("dyadic denominator");
        let mut draw = || T::from_i64(rng.gen_range(-scale..=scale)).expect("dyadic") / denom.clone();
        let (p, r) = match block {
            Block::Vertical => (self.dims.q, self.dims.h()),
            Block::Horizontal => (self.dims.h(), self.dims.q),
        };
        for s in 0..r {
            let diag = draw();
            for x in 0..p {
                for y in x..p {
                    let (vxy, vyx) = if x == y {
                        (diag.clone(), diag.clone())
                    } else if integrable {
                        (T::zero(), T::zero())
                    } else {
                        let w = draw();
                        (w.clone(), -w)
                    };
                    match block {
                        Block::Vertical => {
                            self.set_xi_v(x, y, s, vxy);
                            self.set_xi_v(y, x, s, vyx);
                        }
                        Block::Horizontal => {
                            self.set_xi_h(x, y, s, vxy);
                            self.set_xi_h(y, x, s, vyx);
                        }
                    }
                }
            }
        }
        self
    }
}

impl<T: Real> TorsionCoefficients<T> {
    /// Entries drawn uniformly from `[−1, 1]` with a seeded generator.
    pub fn random(dims: SplitDims, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || T::lit(rng.gen_range(-1.0..=1.0));
        let xi_v = (0..dims.vertical_len()).map(|_| draw()).collect();
        let xi_h = (0..dims.horizontal_len()).map(|_| draw()).collect();
        Self { dims, xi_v, xi_h }
    }

    /// Magnitude scale of the summands entering the derived norms, used to
    /// size round-off tolerances: `Σ |coefficient|²` times the block size.
    pub fn roundoff_scale(&self) -> T {
        let s: T = compensated_sum(self.xi_v.iter().chain(self.xi_h.iter()).map(|v| *v * *v));
        s * T::from_count(self.dims.n)
    }
}
