//! Geodesic disk graphs in polygons with holes: clique-based separators,
//! a hop-distance oracle with additive error one, and q-coloring.

pub mod bench;
pub mod coloring;
pub mod disk_graph;
pub mod drawing;
pub mod error;
pub mod geometry;
pub mod instance;
pub mod metric;
pub mod oracle;
pub mod plane;
pub mod render;
pub mod separator;

pub use disk_graph::{build_intersection_graph, disks_intersect, GeodesicDisk, IntersectionGraph};
pub use error::{Error, Result};
pub use geometry::{Point, PolygonWithHoles, Segment};
pub use metric::{GeodesicMetric, GeodesicPath, VisibilityGraph};
