//! Deterministic privacy mappings over discrete distributions.
//!
//! A joint distribution of private attributes `S` and public attributes `X`
//! is released through a mapping `Y = f(X)`. The library greedily coarsens
//! `X` to trade disclosure `I(X;Y)` against leakage `I(S;Y)`:
//!
//! * [`greedy_funnel`] minimizes leakage subject to a disclosure floor;
//! * [`greedy_bottleneck`] minimizes disclosure subject to a leakage floor,
//!   which traces the upper side of the achievable region;
//! * [`oracle`] enumerates every deterministic mapping of small alphabets;
//! * [`threat`] relates leakage to the cost gain of an inferring adversary.
//!
//! All numerics are generic over [`Real`] (`f64` or `f32`); the `*64`
//! aliases below fix the usual choice. Information quantities are in bits
//! unless a name says otherwise.
//!
//! ```
//! use privacy_funnel::{greedy_funnel, Joint64};
//!
//! let joint = Joint64::new(vec![vec![0.4, 0.1, 0.0], vec![0.0, 0.1, 0.4]]).unwrap();
//! let out = greedy_funnel(&joint, 0.9).unwrap();
//! assert!(out.ixy() >= 0.9 - 1e-9);
//! assert!(out.isy() <= out.ixy());
//! ```

pub mod curve;
pub mod dist;
pub mod error;
pub mod ingest;
pub mod merge;
pub mod oracle;
pub mod partition;
pub mod sample;
pub mod scalar;
pub mod threat;

pub use curve::{envelope_gap, CurvePoint, Envelope, GapPoint, TradeoffCurve};
pub use dist::{
    compose, cross_entropy, entropy, entropy_in, entropy_of, kl_divergence, mutual_information,
    mutual_information_in, pinsker_check, tv_distance, Channel, Dist, Joint, LogBase,
};
pub use error::{Error, Result};
pub use ingest::{census_preset, load_csv, EmpiricalJoint, MissingPolicy, SchemaConfig};
pub use merge::{
    greedy_bottleneck, greedy_funnel, sweep_bottleneck, sweep_funnel, GreedyOutcome, MergeState,
    MergeTraceEntry, MergedPosteriors,
};
pub use oracle::{
    enumerate_partitions, exact_funnel_optimum, exact_region, PartitionPoint, DEFAULT_CAP,
};
pub use partition::Partition;
pub use scalar::Real;
pub use threat::{
    inference_gain, leakage_gain_bound, logloss_identity_check, verify_gain_bound, CostSpec,
    CustomCost, ErrorProbability, GainBoundCheck, Information, LocalBound, LogLoss,
    LoglossIdentity, ThreatReport,
};

pub type Dist64 = Dist<f64>;
pub type Dist32 = Dist<f32>;
pub type Joint64 = Joint<f64>;
pub type Joint32 = Joint<f32>;
pub type Channel64 = Channel<f64>;
pub type Channel32 = Channel<f32>;
pub type MergeState64 = MergeState<f64>;
pub type MergeState32 = MergeState<f32>;
pub type GreedyOutcome64 = GreedyOutcome<f64>;
pub type GreedyOutcome32 = GreedyOutcome<f32>;
pub type TradeoffCurve64 = TradeoffCurve<f64>;
pub type TradeoffCurve32 = TradeoffCurve<f32>;
pub type ThreatReport64 = ThreatReport<f64>;
