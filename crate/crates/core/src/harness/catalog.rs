//! Descriptions of every check a pipeline can emit. Names ending in `[*]`
//! are emitted once per sweep value or variant.

use serde::Serialize;

use super::ExampleId;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub example: ExampleId,
    pub name: &'static str,
    pub description: &'static str,
}

const fn e(example: ExampleId, name: &'static str, description: &'static str) -> CatalogEntry {
    CatalogEntry { example, name, description }
}

use ExampleId::{I, II, IIIA, IIIB};

const CATALOG: &[CatalogEntry] = &[
    e(I, "a.ehat_below_sigma_hat[eps=*]", "closed-form strip disk area below the embedded competitor's"),
    e(I, "b.converged[eps=*]", "solve from the strip disk reaches the gradient tolerance"),
    e(I, "b.monotone[eps=*]", "area never increases during that solve"),
    e(I, "b.area_below_ehat_area[eps=*]", "its minimizer's area is below the closed-form strip disk area"),
    e(I, "b.area_below_start[eps=*]", "its minimizer's area is below the meshed strip disk"),
    e(I, "b.self_intersections[eps=*]", "its minimizer has at least one self-intersecting triangle pair"),
    e(I, "c.converged[eps=*]", "solve from the bridged pair reaches the gradient tolerance"),
    e(I, "c.monotone[eps=*]", "area never increases during that solve"),
    e(I, "c.self_intersections[eps=*]", "its minimizer is embedded"),
    e(I, "c.area_near_sigma_hat[eps=*]", "its area is within 10% of the closed-form competitor area"),
    e(I, "c.sigma_hat_within_1.1[eps=*]", "closed-form competitor area at most 1.1 times its area"),
    e(I, "c.area_above_D[eps=*]", "its area exceeds that of the strip disk minimizer"),
    e(I, "d.hausdorff_non_increasing", "Hausdorff distance between strip disk and its minimizer shrinks with eps"),
    e(I, "ratio_grows_as_eps_shrinks", "ratio of the two closed-form areas grows as eps shrinks"),
    e(II, "a.balance_residual[*]", "cup area at the balance height equals the slice area"),
    e(II, "a.c0_inside_range[*]", "balance height strictly between h/3 and 2h/3"),
    e(II, "a.surgery_gain_positive[*]", "tube is shorter than the disk radius, so surgery saves area"),
    e(II, "c.surgery_layout_fits", "emitted (failing) only when the surgery disk does not fit"),
    e(II, "b.slice_area", "meshed slice area matches the ledger to 1e-6"),
    e(II, "b.cup_area", "meshed cup area matches the ledger to 1e-6"),
    e(II, "b.slice_multiplicity", "slice boundary covers the curve once"),
    e(II, "b.cup_multiplicity", "cup boundary covers the curve once"),
    e(II, "c.connected", "surgered surface is connected"),
    e(II, "c.coherently_oriented", "surgered surface is coherently oriented"),
    e(II, "c.multiplicity", "surgered boundary covers the curve twice"),
    e(II, "c.area_below_two_slices", "surgered area below twice the slice area minus 0.9 times the gain"),
    e(II, "d.coherently_oriented", "reversed-handle surface is coherently oriented"),
    e(II, "d.multiplicity", "reversed-handle boundary multiplicities cancel"),
    e(II, "e.decomposition_violated", "twice the slice is beaten by a connected surface"),
    e(II, "relax.converged", "perturbed slice relaxes to the gradient tolerance"),
    e(II, "relax.monotone", "area never increases during that solve"),
    e(II, "relax.area", "relaxed slice area within 0.5% of the ledger"),
    e(IIIA, "a.fit_residual[pair=*]", "fitted catenoid passes through both circles"),
    e(IIIA, "b.disk_sum", "the two spanning disks have area 1.95 pi"),
    e(IIIA, "b.annulus_below_disks", "catenoid annulus area below the disk sum"),
    e(IIIA, "b.mirror_pair_same_area", "both circle pairs span annuli of equal area"),
    e(IIIA, "c.converged", "solve from the frustum reaches the gradient tolerance"),
    e(IIIA, "c.monotone", "area never increases during that solve"),
    e(IIIA, "c.area_matches_catenoid", "solved annulus area within 1% of the catenoid"),
    e(IIIA, "d.loop_count", "the two annuli meet in one curve"),
    e(IIIA, "d.closed_loops", "that curve is closed"),
    e(IIIA, "d.loop_in_plane", "it lies on the mirror plane"),
    e(IIIA, "d.loop_radius", "its radius matches the catenoid waist"),
    e(IIIB, "a.delta_below_limit", "cube margin below the threshold"),
    e(IIIB, "a.slice_minimizes", "slice area below the cross-section disk area"),
    e(IIIB, "mesh.slice_area", "meshed horizontal slice area is exact"),
    e(IIIB, "mesh.slant_area", "meshed slanted slice area is exact"),
    e(IIIB, "b.curve_distance", "cross-section curve and slanted-slice curves are disjoint"),
    e(IIIB, "c.loop_count", "the slices meet in one curve"),
    e(IIIB, "c.closed_loops", "that curve is closed"),
    e(IIIB, "c.line_y_deviation", "it lies at y = d - c"),
    e(IIIB, "c.line_z_deviation", "it lies at z = c"),
    e(IIIB, "d.alpha_components", "slanted-slice curves number one or two as d dictates"),
    e(IIIB, "relax.converged[*]", "perturbed slice relaxes to the gradient tolerance"),
    e(IIIB, "relax.monotone[*]", "area never increases during that solve"),
    e(IIIB, "relax.area[*]", "relaxed slice area within 0.5% of the exact area"),
];

/// All checks, optionally restricted to one example.
pub fn check_catalog(example: Option<ExampleId>) -> Vec<CatalogEntry> {
    CATALOG.iter().filter(|c| example.map_or(true, |x| c.example == x)).copied().collect()
}

/// Whether a concrete check name is described by a catalog pattern.
pub fn catalog_matches(pattern: &str, name: &str) -> bool {
    match pattern.strip_suffix("[*]") {
        Some(stem) => name.strip_prefix(stem).is_some_and(|rest| rest.starts_with('[') && rest.ends_with(']')),
        None => pattern.strip_suffix("=*]").map_or(pattern == name, |stem| {
            name.strip_prefix(stem).is_some_and(|rest| rest.starts_with('=') && rest.ends_with(']'))
        }),
    }
}
