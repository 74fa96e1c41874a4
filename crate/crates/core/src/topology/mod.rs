//! Exceptional points, spectral winding numbers and phase diagrams.

mod ep;
mod phase;
mod winding;

pub use ep::{
    dimer_ep_lines, dimer_ep_zplane, discriminant, find_eps_k, find_eps_z, min_discriminant,
    normalized_discriminant, DimerEpLines, EpLine, EpLocation, ExceptionalPoint, EP_SCAN_SAMPLES,
};
pub use phase::{phase_diagram, Axis, Boundary, Cell, PhaseDiagram, SweepOptions};
pub use winding::{
    boundary_references, classify, total_braid_index, winding_number, BoundaryScan, BraidIndex,
    Classification, WindingResult, MAX_WINDING_SAMPLES,
};
