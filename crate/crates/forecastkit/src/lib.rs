//! Time-series modeling and forecasting toolkit.
//!
//! The crate covers three model families and the machinery around them:
//!
//! - [`stochastic`] — seasonal ARIMA models with Yule-Walker and conditional
//!   least-squares estimation, forecasting, simulation, and an automated
//!   order search in the Box-Jenkins style.
//! - [`neural`] — small feed-forward networks for autoregression: lagged
//!   inputs (contiguous or hand-picked), and a seasonal variant that maps one
//!   season to the next. Trained by full-batch gradient descent from a seeded
//!   initialization.
//! - [`svm`] — least-squares support vector regression with an RBF kernel,
//!   including exact incremental add/prune updates for rolling windows and a
//!   validation grid search.
//!
//! Supporting modules: [`series`] (data container and plain-text I/O),
//! [`transform`] (invertible preprocessing pipelines), [`diagnostics`]
//! (correlograms and a unit-root check), [`metrics`] (forecast accuracy
//! measures), [`numerics`] (dense linear algebra, simplex optimization,
//! polynomial roots), and [`bench`] (six embedded benchmark datasets plus a
//! harness that reruns published experiments and compares the results).
//!
//! # Example
//!
//! ```
//! use forecastkit::series::TimeSeries;
//! use forecastkit::stochastic::{fit_ar_yule_walker, forecast};
//!
//! let values: Vec<f64> = (0..40).map(|t| (t as f64 * 0.4).sin() + 2.0).collect();
//! let series = TimeSeries::new("demo", values);
//! let (train, test) = series.split(36).unwrap();
//! let model = fit_ar_yule_walker(&train, 2).unwrap();
//! let predicted = forecast(&model, &train, test.len()).unwrap();
//! assert_eq!(predicted.len(), 4);
//! ```

pub mod bench;
pub mod diagnostics;
pub mod error;
pub mod metrics;
pub mod neural;
pub mod numerics;
pub mod series;
pub mod stochastic;
pub mod svm;
pub mod transform;

pub use error::{ForecastError, Result};
pub use series::TimeSeries;
