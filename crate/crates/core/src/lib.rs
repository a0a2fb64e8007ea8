//! Exact computations with knot Floer standard complexes: the γ₀ sequence,
//! closed forms for (2,q)-cables and sums with T(2,q), involutive basis checks,
//! and SVG drawings.

pub mod algebra;
mod bunch;
pub mod complex;
pub mod error;
pub mod involutive;
pub mod knots;
pub mod standard;
pub mod suite;
pub mod svg;

pub use algebra::{
    alexander_torus, laurent_mul, ring_add, ring_mul, LaurentPoly, Mode, Mono, RingElem,
};
pub use complex::{
    dual, max_alexander, quotient_uv, reduce, tensor, validate, vertical_homology, Chain,
    ChainComplex, Endomorphism, Generator, Grading, VerticalHomology, Violation,
};
pub use error::{Error, Result};
pub use involutive::{
    basic_involution, build_xyz_basis, phi_psi, tensor_involution, verify_basis_identities,
    BasisFamily, BasisReport, CoefficientRule, IotaData,
};
pub use knots::{
    cable2, cable_genus, eval, locally_equivalent, p_knot, parse_expr, staircase_from_alexander,
    sum_with_t2, tau_cable_formula, CableRegime, Evaluation, KnotExpr, Regime,
};
pub use standard::{
    decompose, epsilon, extract_gamma0, gamma0_pipeline, normalize_seq, seq_to_complex, sharpness,
    simplify_basis, tau, top_alexander, Gamma0, ParamSeq, SharpnessReport,
};
pub use svg::render_svg;
