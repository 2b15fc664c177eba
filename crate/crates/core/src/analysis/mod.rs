//! Feature statistics: correlations, per-emotion t-tests and t-SNE.

mod correlation;
pub mod special;
mod tsne;
mod ttest;

pub use correlation::{correlation_matrix, CorrelationMatrix};
pub use tsne::{
    conditional_affinities, joint_affinities, kl_divergence, tsne_embed, ConditionalAffinities, Embedding2D, TsneParams,
};
pub use ttest::{significance_summary, welch_t_test, ClassSignificance, SignificanceSummary, TTestResult, WelchTest};
