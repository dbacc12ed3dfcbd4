//! Robustness of the Robinson structure under defects: defect graphs,
//! Delaunay triangulations, n-frames, domain decompositions and measured
//! deficits against their bounds.

mod delaunay;
mod domains;
mod frames;
mod measure;

pub use delaunay::{defect_graph, delaunay, incircle, linf, orient, DefectGraph, DelaunayTriangulation, Point};
pub use domains::{decompose, largest_level, DomainDecomposition, LevelDomains};
pub use frames::{
    border_intersection_sweep, count_frame_cuts, frame_cut_sweep, Frame, FrameSet, LevelCuts, SweepResult,
};
pub use measure::{
    best_reference_total, bound_rhs, inject_defects, measure_deficits, run_trials, DeficitReport, LevelDeficit,
    TrialRecord,
};
