//! Angular functions `φ_t(η)` and the rotation-averaged fidelity, computed by
//! three independent routes: the closed-form coefficient table, the Dicke-state
//! linear system, and direct quadrature over rotation axes.

mod closed_form;
mod dicke;
mod quadrature;
mod table;

pub use closed_form::{
    average_fidelity, combinatorial_identity_check, fidelity_from_purities, write_curve_csv,
    CurvePoint,
};
pub use dicke::{dicke_average_fidelity, phi_via_dicke, DickeSystem};
pub use quadrature::{
    averaged_variance, compare_routes, generalized_quadrature_fidelity, quadrature_fidelity,
    quadrature_fidelity_curve, Generator, QuadratureGrid, RouteComparison,
};
pub use table::{angular_table, coeff_a, phi, AngularTable};
