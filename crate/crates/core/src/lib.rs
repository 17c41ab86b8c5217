//! Certified gluing-equation solving, volumes, Dehn filling and surgery
//! homology for cusped hyperbolic 3-manifolds.

pub mod certify;
pub mod diagram;
pub mod filling;
pub mod hexfloat;
pub mod homology;
pub mod linalg;
pub mod perm;
pub mod scalar;
pub mod solver;
pub mod triangulation;
pub mod volume;

pub use filling::Slope;
pub use perm::Perm4;
pub use scalar::Real;
pub use triangulation::{
    gluing_system, parse_triangulation, serialize_triangulation, validate, GluingSystem, IdealTriangulation,
    ValidationReport,
};
pub use certify::{krawczyk_certify, Certificate};
pub use diagram::{octahedral_triangulation, parse_pd, PDCode};
pub use filling::{complete, fill, sweep};
pub use homology::{surgery_homology, AbelianGroup, LinkingMatrix};
pub use volume::volume;

/// Double-precision shape assignment.
pub type Shapes = solver::ShapeAssignment<f64>;
pub type Shapes32 = solver::ShapeAssignment<f32>;
pub type Volume = volume::VolumeResult<f64>;
pub type SolveOptions = solver::SolveOptions<f64>;
