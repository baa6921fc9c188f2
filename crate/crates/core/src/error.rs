use thiserror::Error;

use crate::geometry::Point;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("point ({}, {}) lies outside the free space", .0.x, .0.y)]
    OutsideFreeSpace(Point),

    #[error("disk {id} has its center ({}, {}) outside the free space", .center.x, .center.y)]
    DiskOutsideFreeSpace { id: usize, center: Point },

    #[error("disk {0} has a negative or non-finite radius")]
    InvalidRadius(usize),

    #[error("duplicate disk id {0}")]
    DuplicateDisk(usize),

    #[error("unknown disk id {0}")]
    UnknownDisk(usize),

    #[error("unknown site index {0}")]
    UnknownSite(usize),

    #[error("no path between sites {0} and {1}; free space is not connected")]
    Unreachable(usize, usize),

    #[error("degenerate segment at ({}, {})", .0.x, .0.y)]
    DegenerateSegment(Point),

    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    InvalidEpsilon(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("inconsistent path system: paths of edges ({}, {}) and ({}, {}) meet in more than one component", .first.0, .first.1, .second.0, .second.1)]
    InconsistentPaths {
        first: (usize, usize),
        second: (usize, usize),
    },

    #[error("graph is not planar under the given rotation system (euler characteristic mismatch)")]
    NonPlanar,

    #[error("instance has {0} disks, brute force is limited to {1}")]
    TooLarge(usize, usize),

    #[error("instance schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("generator failed: {0}")]
    Generator(String),

    #[error("snapshot format error on line {line}: {message}")]
    Snapshot { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
