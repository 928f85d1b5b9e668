//! Torsion invariants, tube geometry and total bending of singular
//! Riemannian foliations on compact rank-one symmetric spaces.
//!
//! The numerical core is generic over the scalar type. Torsion algebra also
//! runs over exact rationals; everything that needs transcendental functions
//! is bounded by [`Real`]. Concrete `f64` aliases are provided below.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bending;
pub mod bounds;
pub mod error;
pub mod model_space;
pub mod quadrature;
pub mod scalar;
pub mod torsion;
pub mod tube;

pub use bending::{
    bending, complex_radial_bending, energy, epsilon_deformed_bending, torus_bending, total_bending, Bending,
    BendingResult, Energy, FoliationSpec, TorusBending,
};
pub use bounds::{
    closed_form, einstein_bound, integral_formula_check, lower_bound, minimizer_report, table1_report, BoundCase,
    BoundCaseKind, ClosedForm, IntegralCheck, LowerBound, MinimizerReport, MinimizerVerdict, RowStatus, Table1Row,
};
pub use error::{FoliateError, Result};
pub use model_space::{Family, ModelSpace};
pub use quadrature::{Endpoint, Integral, QuadOutcome, QuadratureConfig};
pub use scalar::{CompensatedSum, Real, Scalar};
pub use torsion::{Block, BlockFlags, DerivedTensors, SplitDims, TorsionCoefficients};
pub use tube::{FocalVariety, InitKind, JacobiBranch, JacobiSolution, TubeProfile};

pub type TorsionCoefficientsF64 = TorsionCoefficients<f64>;
pub type TorsionCoefficientsRational = TorsionCoefficients<num_rational::Rational64>;
pub type ModelSpaceF64 = ModelSpace<f64>;
pub type TubeProfileF64 = TubeProfile<f64>;
pub type QuadratureConfigF64 = QuadratureConfig<f64>;
pub type BendingResultF64 = BendingResult<f64>;
pub type FoliationSpecF64 = FoliationSpec<f64>;
pub type Table1RowF64 = Table1Row<f64>;
