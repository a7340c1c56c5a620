//! Builders for the deconvolution and sparse-view tomography experiments.

mod bessel;
mod ct;
mod deconv;
mod phantom;
pub mod pgm;

pub use bessel::{airy_kernel, bessel_j1};
pub use ct::{
    beam_pixel_intersections, build_ct_matrix, chord_length, sinogram_image, synthesize_sinogram, CtEntryScale,
    CtGeometry, Sinogram,
};
pub use deconv::{
    build_deconv_problem, deconv_matrix, default_t_points, grid, sigmoid_truth, DeconvProblem, DeconvSpec,
    KernelPreset, TruthSpec, BEAMS_KAPPA, DEFAULT_M, DEFAULT_N, PAPER_KAPPA,
};
pub use phantom::Phantom;
