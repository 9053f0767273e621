pub mod ambient;
pub mod bvh;
pub mod hausdorff;
pub mod intersect;
pub mod mesh;
pub mod multiplicity;
pub mod obj;
pub mod polyline;
pub mod tri;
pub mod vec3;

pub use ambient::{Ambient, Parallelepiped};
pub use mesh::{EdgeSlot, Tri, TriSurfaceMesh};
pub use polyline::ClosedPolyline;
pub use vec3::{Point3, ShiftVec, ZERO_SHIFT};
pub use intersect::{self_intersections, surface_intersection, IntersectionCurve};
pub use hausdorff::hausdorff_distance;
pub use multiplicity::boundary_multiplicity;
