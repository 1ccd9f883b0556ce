//! Compass observables: reaction yields, the angular figure of merit, the
//! reaction-averaged coherence and the Monte Carlo correlation study.

mod ensemble;
mod stats;
mod sweep;
mod yields;

pub use ensemble::{
    evaluate_sample, read_ensemble_csv, run_ensemble, write_ensemble_csv, EnsembleConfig, EnsembleRecord, EnsembleRun,
    SampleFailure, ENSEMBLE_CSV_HEADER,
};
pub use stats::{
    band_correlations, exchange_bins, histogram, mean_and_std, pearson, spearman, BandCorrelation,
    EnsembleStats, ExchangeConfig, Histogram, JBin, KdStats,
};
pub use sweep::{angular_sweep, SweepConfig, SweepResult};
pub use yields::{mean_coherence, singlet_yield, singlet_yield_quadrature, singlet_yield_resolvent, YieldMethod, Yields};
