//! Closed-form computation and communication time formulas for one
//! superstep of each workload family.
//!
//! Times are seconds; computation cost is counted in multiply-add
//! operations against an effective throughput of `peak × efficiency`.

use crate::error::{Error, Result};

/// Hardware parameters of one worker plus the interconnect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardwareSpec {
    peak_ops_per_sec: f64,
    efficiency: f64,
    bandwidth_bits_per_sec: f64,
}

impl HardwareSpec {
    pub fn new(peak_ops_per_sec: f64, efficiency: f64, bandwidth_bits_per_sec: f64) -> Result<Self> {
        if !(peak_ops_per_sec > 0.0) || !peak_ops_per_sec.is_finite() {
            return Err(Error::InvalidHardware(format!(
                "peak_ops_per_sec must be > 0, got {peak_ops_per_sec}"
            )));
        }
        if !(efficiency > 0.0 && efficiency <= 1.0) {
            return Err(Error::InvalidHardware(format!(
                "efficiency must be in (0, 1], got {efficiency}"
            )));
        }
        if !(bandwidth_bits_per_sec > 0.0) || !bandwidth_bits_per_sec.is_finite() {
            return Err(Error::InvalidHardware(format!(
                "bandwidth_bits_per_sec must be > 0, got {bandwidth_bits_per_sec}"
            )));
        }
        Ok(Self {
            peak_ops_per_sec,
            efficiency,
            bandwidth_bits_per_sec,
        })
    }

    /// Achievable throughput: peak rate times the efficiency fraction.
    pub fn effective_ops_per_sec(&self) -> f64 {
        self.peak_ops_per_sec * self.efficiency
    }

    pub fn peak_ops_per_sec(&self) -> f64 {
        self.peak_ops_per_sec
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    pub fn bandwidth_bits_per_sec(&self) -> f64 {
        self.bandwidth_bits_per_sec
    }
}

/// Communication cost family for parameter exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyVariant {
    /// No communication (shared memory or single process).
    None,
    /// Cost grows linearly with the worker count.
    Linear,
    /// Binary aggregation tree, `stages` passes over it.
    LogTree,
    /// Torrent-like broadcast plus two-wave square-root aggregation.
    SparkHybrid,
}

/// A communication topology together with message-width parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommTopology {
    variant: TopologyVariant,
    stages: u32,
    bits_per_param: u32,
}

impl CommTopology {
    pub fn new(variant: TopologyVariant, stages: u32, bits_per_param: u32) -> Result<Self> {
        if stages < 1 {
            return Err(Error::InvalidTopology("stages must be >= 1".into()));
        }
        if bits_per_param != 32 && bits_per_param != 64 {
            return Err(Error::InvalidTopology(format!(
                "bits_per_param must be 32 or 64, got {bits_per_param}"
            )));
        }
        Ok(Self {
            variant,
            stages,
            bits_per_param,
        })
    }

    pub fn none() -> Self {
        Self {
            variant: TopologyVariant::None,
            stages: 1,
            bits_per_param: 32,
        }
    }

    pub fn linear(bits_per_param: u32) -> Result<Self> {
        Self::new(TopologyVariant::Linear, 1, bits_per_param)
    }

    pub fn log_tree(stages: u32, bits_per_param: u32) -> Result<Self> {
        Self::new(TopologyVariant::LogTree, stages, bits_per_param)
    }

    pub fn spark_hybrid(bits_per_param: u32) -> Result<Self> {
        Self::new(TopologyVariant::SparkHybrid, 1, bits_per_param)
    }

    pub fn variant(&self) -> TopologyVariant {
        self.variant
    }

    pub fn stages(&self) -> u32 {
        self.stages
    }

    pub fn bits_per_param(&self) -> u32 {
        self.bits_per_param
    }

    /// Time in seconds to exchange `num_params` model parameters among
    /// `n` workers. A single worker sends no messages, so n = 1 is
    /// always zero regardless of variant.
    pub fn comm_time(&self, n: u32, num_params: u64, hw: &HardwareSpec) -> f64 {
        if n <= 1 {
            return 0.0;
        }
        let volume = self.bits_per_param as f64 * num_params as f64 / hw.bandwidth_bits_per_sec();
        let nf = n as f64;
        match self.variant {
            TopologyVariant::None => 0.0,
            TopologyVariant::Linear => volume * nf,
            TopologyVariant::LogTree => self.stages as f64 * volume * nf.log2(),
            TopologyVariant::SparkHybrid => volume * nf.log2() + 2.0 * volume * nf.sqrt().ceil(),
        }
    }
}

/// Gradient-descent workload: cost per data point, batch size, and the
/// parameter count exchanged each step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientDescentModel {
    pub cost_per_point_ops: f64,
    pub batch_size: u64,
    pub num_params: u64,
}

impl GradientDescentModel {
    pub fn new(cost_per_point_ops: f64, batch_size: u64, num_params: u64) -> Result<Self> {
        if !(cost_per_point_ops >= 0.0) || !cost_per_point_ops.is_finite() {
            return Err(Error::InvalidWorkload(format!(
                "cost_per_point_ops must be >= 0, got {cost_per_point_ops}"
            )));
        }
        Ok(Self {
            cost_per_point_ops,
            batch_size,
            num_params,
        })
    }
}

/// Graph-inference workload over a vertex-partitioned graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphWorkload {
    pub num_vertices: u64,
    pub num_edges: u64,
    pub num_states: u64,
    pub replication_factor: f64,
    pub shared_memory: bool,
    /// Apply the extra division by n from the belief-propagation form
    /// of the compute term. Off by default: max_i(E_i) already shrinks
    /// with n under random partitioning.
    pub literal_divide_by_n: bool,
}

impl GraphWorkload {
    pub fn new(
        num_vertices: u64,
        num_edges: u64,
        num_states: u64,
        replication_factor: f64,
        shared_memory: bool,
        literal_divide_by_n: bool,
    ) -> Result<Self> {
        if num_vertices < 1 {
            return Err(Error::InvalidWorkload("num_vertices must be >= 1".into()));
        }
        if num_states < 1 {
            return Err(Error::InvalidWorkload("num_states must be >= 1".into()));
        }
        if !(replication_factor >= 0.0) || !replication_factor.is_finite() {
            return Err(Error::InvalidWorkload(format!(
                "replication_factor must be >= 0, got {replication_factor}"
            )));
        }
        Ok(Self {
            num_vertices,
            num_edges,
            num_states,
            replication_factor,
            shared_memory,
            literal_divide_by_n,
        })
    }
}

/// Per-superstep time split into compute and communication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeBreakdown {
    pub t_cp: f64,
    pub t_cm: f64,
    pub t_total: f64,
}

impl TimeBreakdown {
    pub fn new(t_cp: f64, t_cm: f64) -> Self {
        Self {
            t_cp,
            t_cm,
            t_total: t_cp + t_cm,
        }
    }
}

/// One strong-scaling gradient-descent step: the total batch is split
/// across `n` workers, followed by a parameter exchange.
pub fn gd_step_time(
    m: &GradientDescentModel,
    hw: &HardwareSpec,
    topo: &CommTopology,
    n: u32,
) -> TimeBreakdown {
    debug_assert!(n >= 1);
    let t_cp =
        m.cost_per_point_ops * m.batch_size as f64 / (hw.effective_ops_per_sec() * n as f64);
    let t_cm = topo.comm_time(n, m.num_params, hw);
    TimeBreakdown::new(t_cp, t_cm)
}

/// Weak-scaling per-instance breakdown: each worker processes its own
/// mini-batch of `batch_size` examples, so the effective batch grows
/// with n and the step time is amortized over it.
pub fn per_instance_breakdown(
    m: &GradientDescentModel,
    hw: &HardwareSpec,
    topo: &CommTopology,
    n: u32,
) -> TimeBreakdown {
    debug_assert!(n >= 1);
    let nf = n as f64;
    let t_cp = m.cost_per_point_ops * m.batch_size as f64 / hw.effective_ops_per_sec() / nf;
    let t_cm = topo.comm_time(n, m.num_params, hw) / nf;
    TimeBreakdown::new(t_cp, t_cm)
}

/// Weak-scaling time to process one training instance.
pub fn per_instance_time(
    m: &GradientDescentModel,
    hw: &HardwareSpec,
    topo: &CommTopology,
    n: u32,
) -> f64 {
    per_instance_breakdown(m, hw, topo, n).t_total
}

/// Belief-propagation multiply-add count per edge for a variable with
/// `num_states` states: S + 2·(S + S²).
pub fn bp_ops_per_edge(num_states: u64) -> u64 {
    num_states + 2 * (num_states + num_states * num_states)
}

/// One graph-inference superstep. `max_edges` is the estimated maximum
/// per-worker edge count (equal to E when n = 1).
pub fn gi_step_time(
    w: &GraphWorkload,
    max_edges: f64,
    hw: &HardwareSpec,
    n: u32,
) -> TimeBreakdown {
    debug_assert!(n >= 1);
    let ops_per_edge = bp_ops_per_edge(w.num_states) as f64;
    let mut t_cp = max_edges * ops_per_edge / hw.effective_ops_per_sec();
    if w.literal_divide_by_n {
        t_cp /= n as f64;
    }
    let t_cm = if w.shared_memory || n <= 1 {
        0.0
    } else {
        32.0 / hw.bandwidth_bits_per_sec()
            * w.replication_factor
            * w.num_vertices as f64
            * w.num_states as f64
    };
    TimeBreakdown::new(t_cp, t_cm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hw(peak: f64, eff: f64, bw: f64) -> HardwareSpec {
        HardwareSpec::new(peak, eff, bw).unwrap()
    }

    #[test]
    fn effective_throughput_spark_cluster() {
        assert_eq!(hw(105.6e9, 0.8, 1e9).effective_ops_per_sec(), 84.48e9);
    }

    #[test]
    fn effective_throughput_k40() {
        assert_eq!(hw(4.28e12, 0.5, 1e9).effective_ops_per_sec(), 2.14e12);
    }

    #[test]
    fn effective_throughput_identity() {
        assert_eq!(hw(1.0, 1.0, 1.0).effective_ops_per_sec(), 1.0);
    }

    #[test]
    fn hardware_invariants_enforced() {
        assert!(HardwareSpec::new(0.0, 0.5, 1.0).is_err());
        assert!(HardwareSpec::new(1.0, 0.0, 1.0).is_err());
        assert!(HardwareSpec::new(1.0, 1.1, 1.0).is_err());
        assert!(HardwareSpec::new(1.0, 0.5, -1.0).is_err());
    }

    #[test]
    fn topology_rejects_bad_bits() {
        assert!(CommTopology::log_tree(2, 16).is_err());
        assert!(CommTopology::new(TopologyVariant::LogTree, 0, 32).is_err());
    }

    #[test]
    fn comm_time_log_tree() {
        let h = hw(1.0, 1.0, 1e9);
        let topo = CommTopology::log_tree(2, 32).unwrap();
        let t = topo.comm_time(4, 12_000_000, &h);
        assert!((t - 1.536).abs() < 1e-12, "got {t}");
    }

    #[test]
    fn comm_time_spark_hybrid() {
        let h = hw(1.0, 1.0, 1e9);
        let topo = CommTopology::spark_hybrid(64).unwrap();
        let t = topo.comm_time(9, 12_000_000, &h);
        // 0.768·log2(9) + 2·0.768·3
        let expected = 0.768 * 9f64.log2() + 2.0 * 0.768 * 3.0;
        assert!((t - expected).abs() < 1e-12);
        assert!((t - 7.0425).abs() < 5e-4, "got {t}");
    }

    #[test]
    fn comm_time_single_worker_is_zero() {
        let h = hw(1.0, 1.0, 1e9);
        for topo in [
            CommTopology::none(),
            CommTopology::linear(32).unwrap(),
            CommTopology::log_tree(2, 32).unwrap(),
            CommTopology::spark_hybrid(64).unwrap(),
        ] {
            assert_eq!(topo.comm_time(1, 12_000_000, &h), 0.0);
        }
    }

    #[test]
    fn gd_step_time_spark_dense() {
        let h = hw(105.6e9, 0.8, 1e9);
        let m = GradientDescentModel::new(72e6, 60_000, 12_000_000).unwrap();
        let topo = CommTopology::spark_hybrid(64).unwrap();

        let tb = gd_step_time(&m, &h, &topo, 9);
        assert!((tb.t_cp - 5.682).abs() < 1e-3, "t_cp {}", tb.t_cp);
        assert!((tb.t_cm - 7.043).abs() < 1e-3, "t_cm {}", tb.t_cm);
        assert!((tb.t_total - 12.725).abs() < 2e-3);

        let tb1 = gd_step_time(&m, &h, &topo, 1);
        assert!((tb1.t_cp - 51.14).abs() < 1e-2);
        assert_eq!(tb1.t_cm, 0.0);
    }

    #[test]
    fn gd_step_time_empty_batch() {
        let h = hw(1.0, 1.0, 1.0);
        let m = GradientDescentModel::new(10.0, 0, 1).unwrap();
        let tb = gd_step_time(&m, &h, &CommTopology::none(), 3);
        assert_eq!(tb.t_cp, 0.0);
    }

    #[test]
    fn per_instance_time_conv_cluster() {
        let h = hw(4.28e12, 0.5, 1e9);
        let m = GradientDescentModel::new(15e9, 128, 25_000_000).unwrap();
        let topo = CommTopology::log_tree(2, 32).unwrap();
        assert!((per_instance_time(&m, &h, &topo, 50) - 0.19855).abs() < 1e-5);
        assert!((per_instance_time(&m, &h, &topo, 100) - 0.11527).abs() < 1e-5);
        assert!((per_instance_time(&m, &h, &topo, 1) - 0.8972).abs() < 1e-4);
    }

    #[test]
    fn bp_cost_per_edge() {
        assert_eq!(bp_ops_per_edge(2), 14);
        assert_eq!(bp_ops_per_edge(1), 5);
        assert_eq!(bp_ops_per_edge(0), 0);
    }

    #[test]
    fn gi_step_time_shared_memory() {
        let h = hw(1e3, 1.0, 1e9);
        let w = GraphWorkload::new(100, 1000, 2, 0.0, true, false).unwrap();
        let tb = gi_step_time(&w, 1000.0, &h, 4);
        assert_eq!(tb.t_cp, 14.0);
        assert_eq!(tb.t_cm, 0.0);

        let w2 = GraphWorkload::new(100, 1000, 2, 0.0, true, true).unwrap();
        let tb2 = gi_step_time(&w2, 1000.0, &h, 2);
        assert_eq!(tb2.t_cp, 7.0);
    }

    #[test]
    fn gi_step_time_comm() {
        let h = hw(1e3, 1.0, 1e9);
        let w = GraphWorkload::new(1_000_000, 5_000_000, 2, 1.0, false, false).unwrap();
        let tb = gi_step_time(&w, 100.0, &h, 4);
        assert!((tb.t_cm - 0.064).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn comm_time_zero_at_n1(bits in prop::sample::select(vec![32u32, 64]),
                                stages in 1u32..4,
                                params in 1u64..1_000_000_000) {
            let h = hw(1.0, 1.0, 1e9);
            for topo in [
                CommTopology::none(),
                CommTopology::linear(bits).unwrap(),
                CommTopology::log_tree(stages, bits).unwrap(),
                CommTopology::spark_hybrid(bits).unwrap(),
            ] {
                prop_assert_eq!(topo.comm_time(1, params, &h), 0.0);
            }
        }

        #[test]
        fn comm_time_nondecreasing(n in 2u32..1024, params in 1u64..1_000_000_000) {
            let h = hw(1.0, 1.0, 1e9);
            for topo in [
                CommTopology::linear(32).unwrap(),
                CommTopology::log_tree(2, 32).unwrap(),
                CommTopology::spark_hybrid(64).unwrap(),
            ] {
                prop_assert!(topo.comm_time(n + 1, params, &h) >= topo.comm_time(n, params, &h));
            }
        }

        #[test]
        fn gd_compute_work_is_conserved(n in 1u32..10_000,
                                        c in 1.0f64..1e12,
                                        s in 1u64..1_000_000) {
            let h = hw(105.6e9, 0.8, 1e9);
            let m = GradientDescentModel::new(c, s, 1).unwrap();
            let tb = gd_step_time(&m, &h, &CommTopology::none(), n);
            let serial = c * s as f64 / h.effective_ops_per_sec();
            prop_assert!((tb.t_cp * n as f64 - serial).abs() <= 1e-9 * serial);
            if n > 1 {
                prop_assert!(tb.t_cp < gd_step_time(&m, &h, &CommTopology::none(), n - 1).t_cp);
            }
        }

        #[test]
        fn breakdown_total_is_exact_sum(cp in 0.0f64..1e9, cm in 0.0f64..1e9) {
            let tb = TimeBreakdown::new(cp, cm);
            prop_assert_eq!(tb.t_total, tb.t_cp + tb.t_cm);
            prop_assert!(tb.t_total >= 0.0);
        }

        #[test]
        fn weak_scaling_doubling_improves(n in 2u32..512) {
            let h = hw(4.28e12, 0.5, 1e9);
            let m = GradientDescentModel::new(15e9, 128, 25_000_000).unwrap();
            let topo = CommTopology::log_tree(2, 32).unwrap();
            prop_assert!(per_instance_time(&m, &h, &topo, 2 * n)
                < per_instance_time(&m, &h, &topo, n));
        }
    }
}
