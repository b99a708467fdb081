//! Takagi–Sugeno fuzzy inference systems trained with ANFIS hybrid learning
//! and tuned with an inertia-weight particle swarm.
//!
//! Core math is generic over [`Scalar`] (`f32` or `f64`). The `*F64` and
//! `*F32` aliases below name the concrete instantiations; the experiment
//! pipeline and CLI use the `f64` ones.

pub mod dataset;
pub mod encode;
pub mod error;
pub mod fis;
pub mod gen;
mod linalg;
pub mod metrics;
pub mod pipeline;
pub mod pso;
pub mod scalar;
pub mod train;

pub use dataset::{load_bupa, parse_bupa, Dataset, SplitMode, SplitSpec, TargetMode};
pub use encode::{decode_fis, encode_fis, Decoded, ParamSlot, ParamVector};
pub use error::{Error, Result};
pub use fis::{normalize_weights, Fis, MembershipFunction, RuleConsequent, TNorm};
pub use gen::{fis_from_clusters, generate, grid_partition, subtractive_clustering, GenConfig, GenMethod};
pub use metrics::{classify, confusion, evaluate, summarize, ClassificationSummary, ConfusionMatrix, Rate};
pub use pipeline::{
    config_digest, run_anfis, run_anfis_pso, Candidate, ClassificationReport, Experiment, ExperimentReport, MethodHistory,
    MethodReport, MethodResult, PipelineOptions, RunMeta, REPORT_SCHEMA_VERSION,
};
pub use pso::{convergence_csv, pso_init, pso_init_seeded, pso_optimize, pso_optimize_seeded, pso_step, Bounds, PsoConfig, PsoOutcome, SwarmState};
pub use scalar::Scalar;
pub use train::{lse_consequents, premise_gradients, train_anfis, TrainConfig, TrainHistory};

pub type DatasetF64 = Dataset<f64>;
pub type DatasetF32 = Dataset<f32>;
pub type FisF64 = Fis<f64>;
pub type FisF32 = Fis<f32>;
pub type MembershipFunctionF64 = MembershipFunction<f64>;
pub type MembershipFunctionF32 = MembershipFunction<f32>;
pub type BoundsF64 = Bounds<f64>;
pub type BoundsF32 = Bounds<f32>;
pub type SwarmStateF64 = SwarmState<f64>;
pub type SwarmStateF32 = SwarmState<f32>;
pub type ParamVectorF64 = ParamVector<f64>;
pub type ParamVectorF32 = ParamVector<f32>;
pub type ExperimentF64 = Experiment<f64>;
pub type ExperimentF32 = Experiment<f32>;
