//! Event-driven simulation of a continuous double-auction market.
//!
//! A population of sentiment-driven agents deposits, cancels and executes
//! orders in a limit order book with price-time priority. Agents observe a
//! smoothed public snapshot of the book once per step (mid price, perceived
//! volatility, liquidity), mix it with private Gaussian noise into a market
//! sentiment, and act through a probabilistic gate. The [`analytics`] module
//! provides the estimators used to characterise the resulting series:
//! detrended fluctuation analysis, autocorrelation, kurtosis, impact curves,
//! average book shape and block-bootstrap errors.
//!
//! The numeric estimators and filters are generic over the scalar type via
//! [`numeric::Real`]; the exchange itself works in integer ticks and lots.
//! Simulation state uses the crate-level [`Scalar`] alias.

pub mod agents;
pub mod analytics;
pub mod config;
pub mod information;
pub mod io;
pub mod matching_engine;
pub mod numeric;
pub mod simulator;

/// Scalar type used by the simulation itself.
pub type Scalar = f64;

/// EMA filter state at simulation precision.
pub type Ema = information::EmaState<Scalar>;

/// DFA estimate at simulation precision.
pub type DfaResult = analytics::DfaResult<Scalar>;

pub use config::SimConfig;
pub use matching_engine::{Book, Direction, Fill, Order, Price, Side, Volume};
pub use simulator::{SimOutput, Simulation, StepRecord};
