//! Metric pipeline on triangulated spaces: covers, nerves, geodesic
//! graphs, cycle projection, cones, neck sweeps and region decomposition,
//! assembled by [`pipeline_fill`].

mod cone;
mod cover;
mod decompose;
mod graph;
mod metric;
mod neck;
pub mod paths;
mod pipeline;
mod project;

pub use cone::{cone_fill, ConeFill};
pub use cover::{ball_cover, nerve, Cover, CoverSet, SetKind};
pub use decompose::{decompose_cycle, Decomposition, Piece};
pub use graph::{geodesic_graph, GeodesicGraph, GraphEdge};
pub use metric::{heron, MetricComplex, Regions};
pub use neck::{neck_contract, NeckSweep};
pub use pipeline::{pipeline_fill, pipeline_fill_with, FillingReport, MeasuredConstants, PipelineOptions};
pub use project::{project_cycle_to_graph, Projection};
