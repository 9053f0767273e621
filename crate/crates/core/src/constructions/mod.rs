//! Builders for the example curves and candidate surfaces, plus the bridge
//! and surgery operations that combine them.

pub mod build;
pub mod example1;
pub mod example2;
pub mod example3;

pub use build::MeshBuilder;
pub use example1::{
    bridge_curves, build_bridged_curve, build_ehat_mesh, build_gamma1, build_sigmahat_init, build_tau,
    build_tau_and_e, mirror_curve, reflect, sigmahat_init_area, ExampleIParams, MirrorPlane,
};
pub use example2::{
    build_dc_mesh, build_gamma_c, build_parallelepiped, build_sigma_c_mesh, example2_ambient, gamma_at, mesh_surgery,
    rim_polygon_area, rim_prism_area, surgery_inputs, surgery_layout, ExampleIIParams, HandleSide, SurgeryLayout,
};
pub use example3::{
    build_alpha_d, build_gamma_c_iiib, build_iiib_surfaces, build_sphere_circles, catenoid_mesh, circle,
    example3b_ambient, frustum_mesh, revolution_mesh, slant_hole_intervals, slant_slice_area, ExampleIIIBParams,
    SPHERE_CIRCLE_HEIGHTS,
};
