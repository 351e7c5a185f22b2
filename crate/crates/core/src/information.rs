//! Public information shared by all agents.
//!
//! Once per step, before any agent acts, the raw book indicators are filtered
//! into a [`PublicSnapshot`]: the perceived volatility is the square root of
//! an exponential moving average of squared one-step mid returns, the
//! cancellation probability grows with that volatility, and the liquidity
//! proxy is the filled fraction of the book. Intra-step events never refresh
//! the snapshot.

use thiserror::Error;

use crate::matching_engine::{Book, Price};
use crate::numeric::Real;
use crate::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InfoError {
    #[error("non-finite input rejected")]
    NonFinite,
    #[error("EMA memory length must be at least 1")]
    ZeroLength,
}

/// Exponential moving average with memory length `L`:
/// `current' = x / L + (1 - 1/L) * current`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmaState<F> {
    current: F,
    length: usize,
}

impl<F: Real> EmaState<F> {
    pub fn new(initial: F, length: usize) -> Result<Self, InfoError> {
        if length < 1 {
            return Err(InfoError::ZeroLength);
        }
        if !initial.is_finite() {
            return Err(InfoError::NonFinite);
        }
        Ok(Self {
            current: initial,
            length,
        })
    }

    pub fn current(&self) -> F {
        self.current
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Fold one observation into the average.
    pub fn update(&mut self, x: F) -> Result<F, InfoError> {
        if !x.is_finite() {
            return Err(InfoError::NonFinite);
        }
        let l = F::from_len(self.length);
        self.current = x / l + (F::one() - F::one() / l) * self.current;
        Ok(self.current)
    }
}

/// Update the EMA of squared returns with `r` and report the perceived
/// volatility `max(sqrt(ema), nu_floor)`.
pub fn perceived_volatility<F: Real>(
    r2_ema: &mut EmaState<F>,
    r: F,
    nu_floor: F,
) -> Result<F, InfoError> {
    let ema = r2_ema.update(r * r)?;
    Ok(ema.sqrt().max(nu_floor))
}

/// Volatility-driven cancellation probability `1 - exp(-gamma * nu_hat)`,
/// strictly increasing in `nu_hat` and always in `[0, 1)`. Clamped one ulp
/// below 1 where the exponential underflows, so the complementary
/// volatility-risk factor stays positive.
pub fn cancellation_probability<F: Real>(nu_hat: F, gamma: F) -> F {
    debug_assert!(nu_hat >= F::zero());
    debug_assert!(gamma > F::zero());
    (F::one() - (-gamma * nu_hat).exp()).min(F::one() - F::epsilon())
}

/// Liquidity proxy: resting order count over the agent population.
pub fn liquidity_proxy<F: Real>(n_bar: usize, n_agents: usize) -> F {
    debug_assert!(n_bar <= n_agents);
    F::from_len(n_bar) / F::from_len(n_agents)
}

/// Parameters the snapshot builder needs from the simulation config.
#[derive(Debug, Clone, Copy)]
pub struct InfoParams {
    pub gamma: Scalar,
    pub nu_floor: Scalar,
    pub n_agents: usize,
}

/// Per-step public information, computed from the step-start book and the
/// return realised over the previous step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublicSnapshot {
    pub step: u64,
    /// Placement reference price: the book mid, or the last defined mid when
    /// a side is empty.
    pub mid: Scalar,
    /// One-step mid return realised over the previous step.
    pub ret: Scalar,
    /// Perceived volatility in ticks, floored at `nu_floor`.
    pub nu_hat: Scalar,
    /// Liquidity proxy in `[0, 1]`.
    pub eta: Scalar,
    /// Cancellation probability in `[0, 1)`.
    pub psi: Scalar,
    pub best_bid: Option<Price>,
    pub best_ask: Option<Price>,
    pub spread: Option<i64>,
    /// Resting order count.
    pub n_bar: usize,
}

impl PublicSnapshot {
    /// Build the snapshot for `step`, folding the previous return into the
    /// shared volatility EMA.
    pub fn compute(
        step: u64,
        book: &Book,
        reference_mid: Scalar,
        prev_ret: Scalar,
        r2_ema: &mut EmaState<Scalar>,
        params: &InfoParams,
    ) -> Self {
        let nu_hat = perceived_volatility(r2_ema, prev_ret, params.nu_floor)
            .expect("returns are finite");
        let n_bar = book.order_count();
        PublicSnapshot {
            step,
            mid: book.mid_price().unwrap_or(reference_mid),
            ret: prev_ret,
            nu_hat,
            eta: liquidity_proxy(n_bar, params.n_agents),
            psi: cancellation_probability(nu_hat, params.gamma),
            best_bid: book.best_bid(),
            best_ask: book.best_ask(),
            spread: book.spread(),
            n_bar,
        }
    }
}
