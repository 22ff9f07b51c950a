//! Speedup curves s(n) = t(ref)/t(n), the optimal worker count
//! N = argmax s(n), and the scalability predicate.

use std::ops::RangeInclusive;

use crate::core_model::{gi_step_time, GraphWorkload, HardwareSpec, TimeBreakdown};
use crate::error::{Error, Result};
use crate::graph_partition::{estimate_partition, DegreeSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingMode {
    /// Fixed total input, growing worker count; reference is n = 1.
    Strong,
    /// Input grows with workers; times are per instance, reference is
    /// a user-chosen worker count.
    Weak,
}

/// One evaluated point of a speedup curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub n: u32,
    pub t_cp: f64,
    pub t_cm: f64,
    pub t_total: f64,
    pub speedup: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedupCurve {
    pub mode: ScalingMode,
    pub reference_n: u32,
    pub points: Vec<CurvePoint>,
}

fn build_curve(
    model: &impl Fn(u32) -> TimeBreakdown,
    range: RangeInclusive<u32>,
    mode: ScalingMode,
    reference_n: u32,
) -> Result<SpeedupCurve> {
    let t_ref = model(reference_n).t_total;
    if t_ref <= 0.0 {
        return Err(Error::DegenerateModel(reference_n));
    }
    let mut points = Vec::new();
    for n in range {
        let tb = model(n);
        if tb.t_total <= 0.0 {
            return Err(Error::DegenerateModel(n));
        }
        points.push(CurvePoint {
            n,
            t_cp: tb.t_cp,
            t_cm: tb.t_cm,
            t_total: tb.t_total,
            speedup: t_ref / tb.t_total,
        });
    }
    Ok(SpeedupCurve {
        mode,
        reference_n,
        points,
    })
}

/// Strong-scaling curve: s(n) = t(1)/t(n). The n = 1 reference carries
/// no communication by the single-worker rule of the time model.
pub fn strong_scaling_curve(
    model: impl Fn(u32) -> TimeBreakdown,
    range: RangeInclusive<u32>,
) -> Result<SpeedupCurve> {
    build_curve(&model, range, ScalingMode::Strong, 1)
}

/// Weak-scaling curve relative to `reference_n`, which must lie inside
/// the swept range.
pub fn weak_scaling_curve(
    model: impl Fn(u32) -> TimeBreakdown,
    range: RangeInclusive<u32>,
    reference_n: u32,
) -> Result<SpeedupCurve> {
    if !range.contains(&reference_n) {
        return Err(Error::ReferenceOutOfRange {
            reference_n,
            n_min: *range.start(),
            n_max: *range.end(),
        });
    }
    build_curve(&model, range, ScalingMode::Weak, reference_n)
}

/// Strong-scaling curve for a graph-inference workload: per-worker
/// edge counts come from seeded Monte-Carlo partitioning (exactly E at
/// n = 1).
///
/// With shared memory there is no communication term and the hardware
/// rate is a pure scale factor of every time, so the speedup is
/// computed directly as the ratio of edge-count work; it cancels F
/// exactly rather than to within rounding.
pub fn graph_inference_curve(
    workload: &GraphWorkload,
    degrees: &DegreeSequence,
    hw: &HardwareSpec,
    trials: u32,
    seed: u64,
    range: RangeInclusive<u32>,
) -> Result<SpeedupCurve> {
    let total_edges = degrees.num_edges() as f64;
    let max_edges_at = |n: u32| -> Result<f64> {
        if n == 1 {
            Ok(total_edges)
        } else {
            Ok(estimate_partition(degrees, n, trials, seed)?.mean_max_edges)
        }
    };
    // F-free work per superstep, used for shared-memory speedups
    let work_at = |n: u32, max_edges: f64| -> f64 {
        if workload.literal_divide_by_n {
            max_edges / n as f64
        } else {
            max_edges
        }
    };
    let t_ref = gi_step_time(workload, total_edges, hw, 1);
    if t_ref.t_total <= 0.0 {
        return Err(Error::DegenerateModel(1));
    }
    let work_ref = work_at(1, total_edges);
    let mut points = Vec::new();
    for n in range {
        let max_edges = max_edges_at(n)?;
        let tb = gi_step_time(workload, max_edges, hw, n);
        if tb.t_total <= 0.0 {
            return Err(Error::DegenerateModel(n));
        }
        let speedup = if workload.shared_memory {
            work_ref / work_at(n, max_edges)
        } else {
            t_ref.t_total / tb.t_total
        };
        points.push(CurvePoint {
            n,
            t_cp: tb.t_cp,
            t_cm: tb.t_cm,
            t_total: tb.t_total,
            speedup,
        });
    }
    Ok(SpeedupCurve {
        mode: ScalingMode::Strong,
        reference_n: 1,
        points,
    })
}

/// Worker count with the highest speedup; ties break to the smallest n.
pub fn optimal_nodes(curve: &SpeedupCurve) -> Result<u32> {
    let mut best: Option<&CurvePoint> = None;
    for p in &curve.points {
        if best.is_none_or(|b| p.speedup > b.speedup) {
            best = Some(p);
        }
    }
    best.map(|p| p.n).ok_or(Error::EmptyCurve)
}

/// True when some point beyond the reference shows s > 1, over the
/// swept range only.
pub fn is_scalable(curve: &SpeedupCurve) -> bool {
    curve
        .points
        .iter()
        .any(|p| p.n > curve.reference_n && p.speedup > 1.0)
}
