//! Two-dimensional Robin problem on the cross-section: meshing, affine
//! assembly in the weight `1 − ξ·y`, ground state, shape functions and the
//! moment tensors of the perturbed eigenvalue.

mod assembly;
mod field;
mod ground;
mod mesh;
mod perturb;
mod shape;
mod tensors;

pub use assembly::{assemble_robin, edge_mass, min_weight, shape_gradients, weighted_mass, RobinPencil};
pub use field::{boundary_pairing, gradients, inner, integral, ScalarField2D};
pub(crate) use ground::smallest_pairs;
pub use ground::{boundary_flux, solve_ground_state, CrossSection, GroundState, MomentRoute, CROSS_TOL};
pub use mesh::{mesh_domain, BoundaryEdge, CrossSectionMesh, DomainShape, GammaMap, Point};
pub use perturb::{
    error_functional, lambda0_perturbed, m_eps, perturbed_gap, quasi_eigenvector_residual, QuasiEigenvector,
    WEIGHT_FLOOR,
};
pub use shape::{boundary_load, solve_shape_functions, variational_load, ShapeFunctions};
pub use tensors::{
    boundary_tensor, compute_m0, lemma_forms, lemma_threshold, variational_tensor, LemmaCheck, PerturbationTensors, LEMMA_HARD,
};
