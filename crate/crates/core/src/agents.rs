//! Per-agent decision pipeline.
//!
//! Agents with a live order only evaluate cancellation (time-out, then one
//! Bernoulli draw at the shared probability). Everyone else runs the entry
//! pipeline: private signal, market sentiment, trading-probability gate,
//! direction, then order generation (price placement, limit/market
//! classification, volume and liquidity checks). Agents holding an open
//! position pass through the same gate but their direction is forced to the
//! closing one and their volume is capped at the position size.
//!
//! Random draws are consumed in a fixed order so runs replay bit-identically
//! per seed: for a resting agent one uniform (skipped on time-out); for an
//! entrant one standard normal (private signal), one uniform (gate), then if
//! the gate passes one log-normal draw (placement), one uniform only when
//! the price lands exactly on the opposite best (classification coin), and
//! one log-normal draw (volume).

use rand::Rng;
use rand_distr::{Distribution, LogNormal, StandardNormal};

use crate::config::SimConfig;
use crate::information::PublicSnapshot;
use crate::matching_engine::{AgentId, Book, Direction, OrderId, Price, Volume};
use crate::Scalar;

/// Identifier plus the lifecycle state of one agent.
///
/// `live_order` and `position` are orthogonal: a partially filled resting
/// order leaves the agent with both a queued remainder and an open position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentState {
    pub id: AgentId,
    /// Risk aversion, fixed at initialisation.
    pub kappa: Scalar,
    /// The single live order this agent may have in the book.
    pub live_order: Option<LiveOrder>,
    /// Signed open position in lots; 0 means flat.
    pub position: Volume,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiveOrder {
    pub order_id: OrderId,
    pub submit_step: u64,
}

impl AgentState {
    pub fn new(id: AgentId, kappa: Scalar) -> Self {
        AgentState {
            id,
            kappa,
            live_order: None,
            position: 0,
        }
    }

    /// Direction that reduces the open position. `None` when flat.
    pub fn closing_direction(&self) -> Option<Direction> {
        match self.position {
            0 => None,
            p if p > 0 => Some(Direction::Sell),
            _ => Some(Direction::Buy),
        }
    }
}

/// Inputs of the multiplicative sentiment signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SentimentInputs {
    pub phi_0: Scalar,
    pub kappa: Scalar,
    /// `1 - psi`, the volatility risk factor.
    pub psi_star: Scalar,
    /// Liquidity proxy in `[0, 1]`.
    pub eta: Scalar,
    /// Private signal in ticks.
    pub epsilon: Scalar,
}

/// Fully specified order an agent submits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderSpec {
    pub direction: Direction,
    pub kind: OrderKind,
    pub volume: Volume,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    Limit { price: Price },
    Market,
}

/// What one agent does in one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    None,
    Cancel(OrderId),
    Submit(OrderSpec),
}

/// Model parameters the pipeline needs, derived once from the config.
#[derive(Debug, Clone, Copy)]
pub struct AgentParams {
    pub phi_0: Scalar,
    pub t_max: u64,
    pub n_min: Volume,
    /// Shared log-normal for placement offsets and volumes.
    pub lognormal: LogNormal<Scalar>,
    /// The rounded q-quantile the placement offset is centred on.
    pub q_offset: i64,
}

impl AgentParams {
    pub fn from_config(config: &SimConfig) -> Self {
        let (mu, sigma) = config.lognormal_params();
        AgentParams {
            phi_0: config.phi_0,
            t_max: config.t_max,
            n_min: config.n_min(),
            lognormal: LogNormal::new(mu, sigma).expect("validated parameters"),
            q_offset: config.q_offset_ticks(),
        }
    }
}

/// Private information: a Gaussian signal with standard deviation equal to
/// the perceived volatility.
pub fn sample_private_info<R: Rng>(nu_hat: Scalar, rng: &mut R) -> Scalar {
    debug_assert!(nu_hat > 0.0);
    let g: Scalar = StandardNormal.sample(rng);
    nu_hat * g
}

/// Market sentiment: the product of strength, risk aversion, volatility
/// risk, liquidity and the private signal. Its sign is the sign of the
/// private signal.
pub fn market_sentiment(inputs: &SentimentInputs) -> Scalar {
    inputs.phi_0 * inputs.kappa * inputs.psi_star * inputs.eta * inputs.epsilon
}

/// Transfer function mapping sentiment to an action probability:
/// `(2/pi) * |atan(phi)|`, even in `phi` and increasing in `|phi|`.
pub fn trading_probability(phi: Scalar) -> Scalar {
    core::f64::consts::FRAC_2_PI * phi.atan().abs()
}

/// Trade direction carried by the sentiment sign. Callers guarantee
/// `phi != 0`; an agent with zero sentiment never passes the gate.
pub fn trade_direction(phi: Scalar) -> Direction {
    debug_assert!(phi != 0.0);
    if phi > 0.0 {
        Direction::Buy
    } else {
        Direction::Sell
    }
}

/// Cancellation decision for a resting order: forced at the time-out age,
/// otherwise one Bernoulli draw at probability `psi`.
pub fn evaluate_cancellation<R: Rng>(
    submit_step: u64,
    step: u64,
    t_max: u64,
    psi: Scalar,
    rng: &mut R,
) -> bool {
    if step.saturating_sub(submit_step) >= t_max {
        return true;
    }
    rng.random::<Scalar>() < psi
}

/// Draw one placement offset: a log-normal sample rounded up to ticks.
pub fn sample_placement_offset<R: Rng>(lognormal: &LogNormal<Scalar>, rng: &mut R) -> i64 {
    lognormal.sample(rng).ceil() as i64
}

/// Submission price relative to the own-side best: buys at
/// `best_bid - (xi - Q)`, sells at `best_ask + (xi - Q)`, clamped to one
/// tick. Offsets below the quantile land inside the spread or across it.
pub fn generate_submission_price(
    direction: Direction,
    reference_best: Price,
    xi: i64,
    q_offset: i64,
) -> Price {
    let price = reference_best - direction.sign() * (xi - q_offset);
    price.max(1)
}

/// Order type from the submission price's position relative to the bests:
/// beyond the opposite best is a market order, exactly on it is a fair coin,
/// anything else (including an undefined opposite best) rests as a limit.
pub fn classify_order<R: Rng>(
    direction: Direction,
    price: Price,
    best_bid: Option<Price>,
    best_ask: Option<Price>,
    rng: &mut R,
) -> OrderKind {
    let opposite_best = match direction {
        Direction::Buy => best_ask,
        Direction::Sell => best_bid,
    };
    let Some(best) = opposite_best else {
        return OrderKind::Limit { price };
    };
    let beyond = match direction {
        Direction::Buy => price > best,
        Direction::Sell => price < best,
    };
    if beyond {
        OrderKind::Market
    } else if price == best {
        if rng.random::<Scalar>() < 0.5 {
            OrderKind::Market
        } else {
            OrderKind::Limit { price }
        }
    } else {
        OrderKind::Limit { price }
    }
}

/// Draw an order volume: log-normal rounded to the nearest lot with floor 1,
/// capped strictly below a quarter of the opposite-side resting volume.
/// Returns `None` (abstain) when the cap leaves no room.
pub fn generate_order_volume<R: Rng>(
    opposite_total: Volume,
    lognormal: &LogNormal<Scalar>,
    rng: &mut R,
) -> Option<Volume> {
    let raw = lognormal.sample(rng);
    let volume = (raw.round() as Volume).max(1);
    let upper = (opposite_total + 3) / 4 - 1;
    if upper < 1 {
        return None;
    }
    Some(volume.min(upper))
}

/// Liquidity check before a market order: abstain when the requested side
/// holds `n_min` lots or fewer.
pub fn liquidity_check_market(opposite_total: Volume, n_min: Volume) -> bool {
    opposite_total > n_min
}

/// One agent's decision for this step, given the step-start snapshot and the
/// live book. The book reflects earlier submissions within the same step;
/// the snapshot does not.
pub fn agent_step<R: Rng>(
    agent: &AgentState,
    snapshot: &PublicSnapshot,
    book: &Book,
    params: &AgentParams,
    rng: &mut R,
) -> Action {
    if let Some(live) = agent.live_order {
        if evaluate_cancellation(live.submit_step, snapshot.step, params.t_max, snapshot.psi, rng)
        {
            return Action::Cancel(live.order_id);
        }
        return Action::None;
    }

    let epsilon = sample_private_info(snapshot.nu_hat, rng);
    let holder_eta = match std::env::var("HOLDER_MODE").as_deref() {
        Ok("eta_one") if agent.position != 0 => 1.0,
        Ok("eta_pow") if agent.position != 0 => {
            let a: f64 = std::env::var("HOLDER_ETA_POW")
                .ok()
                .and_then(|s| s.parse().ok())
                .unwrap_or(0.5);
            snapshot.eta.powf(a)
        }
        _ => snapshot.eta,
    };
    let phi = market_sentiment(&SentimentInputs {
        phi_0: params.phi_0,
        kappa: agent.kappa,
        psi_star: 1.0 - snapshot.psi,
        eta: holder_eta,
        epsilon,
    });
    let p = trading_probability(phi);
    let gate: Scalar = rng.random();
    let holders_always_close = std::env::var("HOLDER_MODE").as_deref() == Ok("always");
    if !(gate < p) && !(holders_always_close && agent.position != 0) {
        return Action::None;
    }

    let direction = agent
        .closing_direction()
        .unwrap_or_else(|| trade_direction(phi));

    let own_best = match direction {
        Direction::Buy => book.best_bid(),
        Direction::Sell => book.best_ask(),
    };
    let reference = own_best.unwrap_or_else(|| snapshot.mid.round() as Price);
    let xi = sample_placement_offset(&params.lognormal, rng);
    let price = generate_submission_price(direction, reference, xi, params.q_offset);
    let kind = classify_order(direction, price, book.best_bid(), book.best_ask(), rng);

    let opposite_total = book.side_total(direction.opposite_side());
    if kind == OrderKind::Market && !liquidity_check_market(opposite_total, params.n_min) {
        return Action::None;
    }
    let Some(mut volume) = generate_order_volume(opposite_total, &params.lognormal, rng) else {
        return Action::None;
    };
    if agent.position != 0 {
        volume = volume.min(agent.position.abs());
    }
    Action::Submit(OrderSpec {
        direction,
        kind,
        volume,
    })
}
