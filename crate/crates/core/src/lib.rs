//! Fuzzy c-means clustering of CIELAB color sets, seeded from dominant
//! reference colors.
//!
//! ```
//! use fuzzycolor::{ClusterConfig, ColorSet, Lab, run_fcm};
//!
//! let colors = ColorSet::new(vec![
//!     Lab::new(41.01, 45.03, 20.65),
//!     Lab::new(5.00, 2.27, 1.52),
//!     Lab::new(80.70, -5.76, 70.55),
//!     Lab::new(38.00, 50.00, 25.00),
//! ]).unwrap();
//! let partition = run_fcm(&colors, &ClusterConfig::new(3)).unwrap();
//! assert!(partition.converged);
//! ```

pub mod color;
pub mod error;
pub mod fcm;
pub mod parallel;
pub mod reference;

pub use color::{
    lab_distance, lab_to_srgb, load_colorset_csv, parse_colorset, srgb_to_lab, ColorSet, Lab,
};
pub use error::{Error, Result};
pub use fcm::{
    has_converged, nearest_centroids, objective, run_fcm, run_fcm_with, run_from_centroids,
    seed_centroids, seed_centroids_with, update_centroids, update_memberships, ClusterConfig,
    FuzzyPartition, InitMode, MembershipMatrix, Seed,
};
pub use reference::{
    builtin_references, dominant_colors, initial_centroids, membership_vector, point_memberships,
    scan_colorset, seed_from_references, sort_references, DominantColorSet, RankedReference,
    ReferenceColor, ReferenceSeed, ReferenceSeeding, ReferenceSet, SortedReferences,
};
