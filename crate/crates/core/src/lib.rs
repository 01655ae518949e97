//! Time-reversal spatiotemporal focusing simulator.
//!
//! - [`signal`]: waveforms, chirps, convolution, resampling, channel sounding
//! - [`channel`]: synthetic diffuse-field cavities and their CIR ensembles
//! - [`precoding`]: TR filter banks and the frequency-domain MRT view
//! - [`link`]: received space-time fields, TRDMA and OOK links
//! - [`metrics`]: resolution, gain and interference figures
//! - [`experiment`]: presets and seeded Monte-Carlo campaigns

// NaN-rejecting `!(x > 0.0)` guards are intentional.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod experiment;
pub mod link;
pub mod metrics;
pub mod precoding;
pub mod signal;

pub use num_complex::Complex64 as C64;

pub use channel::{
    build_ensemble, correlation_half_power_width, draw_paths, spatial_correlation_theory,
    synthesize_cir, CavityParams, ChannelEnsemble, Path, PathSet, RxGrid,
};
pub use error::{Error, Result};
pub use experiment::{
    run_campaign, run_trial, Campaign, CsiMode, Figure, GridSpec, Preset, Scenario, ScenarioConfig,
    Summary,
};
pub use link::{focus_field, ook_link, trdma_link, SpaceTimeField, TrdmaResult};
pub use metrics::{
    focusing_gain, sir, spatial_profile, temporal_fwhm, FocusingReport, SpatialProfile,
};
pub use precoding::{equivalence_residual, mrt_weights, tr_filters, MrtWeights, TrFilterBank};
pub use signal::{
    convolve, gen_chirp, resample_rational, time_reverse_conjugate, wiener_deconvolve, Cir,
    Waveform,
};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
