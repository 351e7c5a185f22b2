//! The simulation loop.
//!
//! Each step runs four phases. Phase 0 builds the public snapshot from the
//! step-start book and the previous return. Phase 1 visits the agents that
//! had a live order at step start in a seeded random permutation and applies
//! their cancellations. Phase 2 visits the remaining agents in a second
//! permutation; every submission mutates the book immediately, so later
//! agents see earlier fills while the snapshot indicators stay fixed.
//! Phase 3 records the step observables.
//!
//! A run is fully determined by `(config, seed)`. The RNG stream is consumed
//! in a fixed order: per-agent risk aversion at initialisation, then per
//! step the two permutations and the per-agent draws documented in
//! [`crate::agents`].

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{agent_step, Action, AgentParams, AgentState, LiveOrder, OrderKind};
use crate::config::{ConfigError, SimConfig};
use crate::information::{EmaState, InfoParams, PublicSnapshot};
use crate::io::EventWriter;
use crate::matching_engine::{
    AgentId, Book, BookError, DepthProfile, Direction, Fill, Order, OrderId, Volume,
};
use crate::Scalar;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("event log write failed: {0}")]
    EventLog(#[from] std::io::Error),
}

/// Observables recorded at the end of each step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: u64,
    /// End-of-step mid price (last defined mid when a side is empty).
    pub mid: Scalar,
    /// One-step mid return in ticks.
    pub ret: Scalar,
    /// Lots executed during the step.
    pub volume: Volume,
    /// End-of-step spread; empty when a side is empty.
    pub spread: Option<i64>,
    /// Volume imbalance: resting bid lots minus ask lots.
    pub delta_v: Volume,
    /// Resting order count.
    pub n_bar: usize,
}

/// Signed executed volume of one market order with the instantaneous mid
/// change it caused.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpactRecord {
    pub step: u64,
    pub signed_volume: Volume,
    pub mid_change: Scalar,
}

/// Everything one run produces. Step records, impact records and depth
/// snapshots cover the post-warm-up window only.
#[derive(Debug, Clone)]
pub struct SimOutput {
    pub config: SimConfig,
    pub seed: u64,
    pub records: Vec<StepRecord>,
    pub impacts: Vec<ImpactRecord>,
    pub depth_snapshots: Vec<(u64, DepthProfile)>,
    /// Market orders rejected by the engine's own liquidity re-check.
    pub rejected_market_orders: u64,
}

impl SimOutput {
    pub fn returns(&self) -> Vec<Scalar> {
        self.records.iter().map(|r| r.ret).collect()
    }

    pub fn abs_returns(&self) -> Vec<Scalar> {
        self.records.iter().map(|r| r.ret.abs()).collect()
    }

    pub fn traded_volumes(&self) -> Vec<Scalar> {
        self.records.iter().map(|r| r.volume as Scalar).collect()
    }

    /// Spread series, skipping steps where it was undefined.
    pub fn spreads(&self) -> Vec<Scalar> {
        self.records
            .iter()
            .filter_map(|r| r.spread.map(|s| s as Scalar))
            .collect()
    }

    pub fn imbalances(&self) -> Vec<Scalar> {
        self.records.iter().map(|r| r.delta_v as Scalar).collect()
    }

    pub fn zero_return_fraction(&self) -> Scalar {
        if self.records.is_empty() {
            return 0.0;
        }
        let zeros = self.records.iter().filter(|r| r.ret == 0.0).count();
        zeros as Scalar / self.records.len() as Scalar
    }
}

/// Running totals of order-flow events, for diagnostics and audits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FlowCounters {
    /// Limit submissions that left a resting order.
    pub limit_deposits: u64,
    /// Limit submissions fully executed on arrival (crossing or at-touch).
    pub limit_executed: u64,
    pub market_orders: u64,
    pub cancels_timeout: u64,
    pub cancels_strategic: u64,
    /// Resting orders fully consumed by incoming flow.
    pub filled_out: u64,
}

/// Simulation state; one logical thread owns it for the whole run.
pub struct Simulation {
    config: SimConfig,
    agent_params: AgentParams,
    info_params: InfoParams,
    book: Book,
    agents: Vec<AgentState>,
    r2_ema: EmaState<Scalar>,
    /// Last defined mid price; the placement reference and return base.
    last_mid: Scalar,
    prev_ret: Scalar,
    step: u64,
    next_order_id: OrderId,
    rng: ChaCha8Rng,
    events: Option<EventWriter>,
    rejected_market_orders: u64,
    flow: FlowCounters,
    /// Impact records of the current step; promoted after the warm-up.
    pending_impacts: Vec<ImpactRecord>,
    impacts: Vec<ImpactRecord>,
    // scratch buffers reused across steps
    resting_ids: Vec<AgentId>,
    entrant_ids: Vec<AgentId>,
}

/// How often the full agent/book cross-audit runs.
const AUDIT_EVERY: u64 = 1_000;

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self, SimError> {
        Self::with_seed(config, None)
    }

    /// Build a simulation overriding the config seed (used by ensembles).
    pub fn with_seed(config: SimConfig, seed: Option<u64>) -> Result<Self, SimError> {
        config.validate()?;
        let seed = seed.unwrap_or(config.seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut run_config = config.clone();
        run_config.seed = seed;

        let agents: Vec<AgentState> = (0..config.n_agents as AgentId)
            .map(|id| {
                let kappa = rng.random_range(config.kappa_min..=config.kappa_max);
                AgentState::new(id, kappa)
            })
            .collect();

        let mut sim = Simulation {
            agent_params: AgentParams::from_config(&config),
            info_params: InfoParams {
                gamma: config.gamma,
                nu_floor: config.nu_floor,
                n_agents: config.n_agents,
            },
            book: Book::new(),
            agents,
            r2_ema: EmaState::new(config.nu_0 * config.nu_0, config.ema_length)
                .expect("validated ema length"),
            last_mid: config.p0 as Scalar,
            prev_ret: 0.0,
            step: 0,
            next_order_id: 0,
            rng,
            events: None,
            rejected_market_orders: 0,
            flow: FlowCounters::default(),
            pending_impacts: Vec::new(),
            impacts: Vec::new(),
            resting_ids: Vec::with_capacity(config.n_agents),
            entrant_ids: Vec::with_capacity(config.n_agents),
            config: run_config,
        };
        sim.seed_book();
        Ok(sim)
    }

    /// Attach an event log sink; every deposition, market order, cancel and
    /// fill is appended as a CSV row.
    pub fn set_event_writer(&mut self, writer: EventWriter) {
        self.events = Some(writer);
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn book(&self) -> &Book {
        &self.book
    }

    /// Order-flow totals since the start of the run.
    pub fn flow_counters(&self) -> FlowCounters {
        self.flow
    }

    /// Deposit the initial book around `p0`: the entry gate scales with both
    /// the resting-order count and the perceived volatility, so a completely
    /// empty book would never leave the no-trade fixed point. Seed orders
    /// use the model's own placement and volume distributions (offsets
    /// clamped outside the spread) and carry staggered nominal submit steps
    /// so they time out gradually instead of as one cohort.
    fn seed_book(&mut self) {
        let per_side = self.config.initial_orders_per_side;
        for j in 0..per_side {
            let bid_agent = j as AgentId;
            let ask_agent = (per_side + j) as AgentId;
            let nominal_step = j as u64 % self.config.t_max;
            self.deposit_seed_order(bid_agent, Direction::Buy, nominal_step);
            self.deposit_seed_order(ask_agent, Direction::Sell, nominal_step);
        }
    }

    fn deposit_seed_order(&mut self, agent: AgentId, direction: Direction, nominal_step: u64) {
        let stretch: f64 = std::env::var("SEED_STRETCH")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(1.0);
        let depth = (self.agent_params.lognormal.sample(&mut self.rng) * stretch).ceil() as i64;
        let price = self.config.p0 - direction.sign() * depth;
        let volume = self
            .agent_params
            .lognormal
            .sample(&mut self.rng)
            .round()
            .max(1.0) as Volume;
        let id = self.next_order_id;
        self.next_order_id += 1;
        let order = Order {
            id,
            agent,
            direction,
            price: price.max(1),
            volume,
            submit_step: nominal_step,
        };
        let outcome = self.book.submit_limit(order).expect("seed order is valid");
        debug_assert!(outcome.fills.is_empty(), "seed book must not cross");
        self.agents[agent as usize].live_order = Some(LiveOrder {
            order_id: id,
            submit_step: nominal_step,
        });
    }

    /// Advance one step and return its record.
    pub fn step(&mut self) -> StepRecord {
        let step = self.step;
        let mut seq: u64 = 0;
        let mut traded: Volume = 0;

        // Phase 0: public snapshot from the step-start book.
        let mut snapshot = PublicSnapshot::compute(
            step,
            &self.book,
            self.last_mid,
            self.prev_ret,
            &mut self.r2_ema,
            &self.info_params,
        );
        // experiment: warmup life support via env LIFE_SUPPORT=nu_min,eta_min
        if step < self.config.warmup_steps {
            if let Ok(spec) = std::env::var("LIFE_SUPPORT") {
                let mut parts = spec.split(',');
                let nu_min: f64 = parts.next().unwrap().parse().unwrap();
                let eta_min: f64 = parts.next().unwrap().parse().unwrap();
                snapshot.nu_hat = snapshot.nu_hat.max(nu_min);
                snapshot.eta = snapshot.eta.max(eta_min);
                snapshot.psi =
                    crate::information::cancellation_probability(snapshot.nu_hat, self.config.gamma);
            }
        }

        // Step-start partition of the population; phase 1 cancellations do
        // not make an agent eligible for entry within the same step.
        self.resting_ids.clear();
        self.entrant_ids.clear();
        for agent in &self.agents {
            if agent.live_order.is_some() {
                self.resting_ids.push(agent.id);
            } else {
                self.entrant_ids.push(agent.id);
            }
        }

        // Phase 1: cancellations.
        let mut resting = std::mem::take(&mut self.resting_ids);
        resting.shuffle(&mut self.rng);
        for &agent_id in &resting {
            let agent = self.agents[agent_id as usize];
            let action = agent_step(
                &agent,
                &snapshot,
                &self.book,
                &self.agent_params,
                &mut self.rng,
            );
            if let Action::Cancel(order_id) = action {
                let order = self.book.cancel(order_id).expect("live order is in book");
                if step.saturating_sub(order.submit_step) >= self.config.t_max {
                    self.flow.cancels_timeout += 1;
                } else {
                    self.flow.cancels_strategic += 1;
                }
                self.agents[agent_id as usize].live_order = None;
                self.log_event(step, &mut seq, 'C', agent_id, order.direction, Some(order.price), order.volume);
            }
        }
        self.resting_ids = resting;

        // Phase 2: entries, applied to the book as they happen.
        let mut entrants = std::mem::take(&mut self.entrant_ids);
        entrants.shuffle(&mut self.rng);
        for &agent_id in &entrants {
            let agent = self.agents[agent_id as usize];
            let action = agent_step(
                &agent,
                &snapshot,
                &self.book,
                &self.agent_params,
                &mut self.rng,
            );
            if let Action::Submit(spec) = action {
                traded += self.apply_submission(agent_id, spec.direction, spec.kind, spec.volume, step, &mut seq);
            }
        }
        self.entrant_ids = entrants;

        // Phase 3: record end-of-step observables.
        let new_mid = self.book.mid_price().unwrap_or(self.last_mid);
        let ret = new_mid - self.last_mid;
        self.last_mid = new_mid;
        self.prev_ret = ret;
        self.step += 1;

        if step % AUDIT_EVERY == 0 {
            self.cross_audit();
        }

        StepRecord {
            step,
            mid: new_mid,
            ret,
            volume: traded,
            spread: self.book.spread(),
            delta_v: self.book.volume_imbalance(),
            n_bar: self.book.order_count(),
        }
    }

    /// Apply one submission; returns the lots it executed.
    fn apply_submission(
        &mut self,
        agent_id: AgentId,
        direction: Direction,
        kind: OrderKind,
        volume: Volume,
        step: u64,
        seq: &mut u64,
    ) -> Volume {
        match kind {
            OrderKind::Market => {
                let mid_before = self.book.mid_price().unwrap_or(self.last_mid);
                match self.book.submit_market(direction, volume, agent_id, step) {
                    Ok(fills) => {
                        self.flow.market_orders += 1;
                        self.log_event(step, seq, 'M', agent_id, direction, None, volume);
                        let executed = self.settle_fills(&fills, direction, step, seq);
                        let mid_after = self.book.mid_price().unwrap_or(self.last_mid);
                        self.pending_impacts.push(ImpactRecord {
                            step,
                            signed_volume: direction.sign() * executed,
                            mid_change: mid_after - mid_before,
                        });
                        executed
                    }
                    Err(BookError::InsufficientLiquidity { .. }) => {
                        self.rejected_market_orders += 1;
                        0
                    }
                    Err(err) => panic!("market submission rejected: {err}"),
                }
            }
            OrderKind::Limit { price } => {
                let id = self.next_order_id;
                self.next_order_id += 1;
                let order = Order {
                    id,
                    agent: agent_id,
                    direction,
                    price,
                    volume,
                    submit_step: step,
                };
                self.log_event(step, seq, 'L', agent_id, direction, Some(price), volume);
                let outcome = self.book.submit_limit(order).expect("generated order is valid");
                let executed = self.settle_fills(&outcome.fills, direction, step, seq);
                if outcome.resting.is_some() {
                    self.flow.limit_deposits += 1;
                } else {
                    self.flow.limit_executed += 1;
                }
                if outcome.resting.is_some() {
                    self.agents[agent_id as usize].live_order = Some(LiveOrder {
                        order_id: id,
                        submit_step: step,
                    });
                }
                executed
            }
        }
    }

    /// Position bookkeeping for both sides of a batch of fills, plus fill
    /// events. Returns the total executed volume.
    fn settle_fills(
        &mut self,
        fills: &[Fill],
        taker_direction: Direction,
        step: u64,
        seq: &mut u64,
    ) -> Volume {
        let mut executed = 0;
        for fill in fills {
            executed += fill.volume;
            let maker = &mut self.agents[fill.maker_agent as usize];
            maker.position += fill.maker_direction.sign() * fill.volume;
            if !self.book.contains(fill.maker_order) {
                maker.live_order = None;
                self.flow.filled_out += 1;
            }
            let taker = &mut self.agents[fill.taker_agent as usize];
            taker.position += taker_direction.sign() * fill.volume;
            self.log_event(
                step,
                seq,
                'F',
                fill.taker_agent,
                taker_direction,
                Some(fill.price),
                fill.volume,
            );
        }
        executed
    }

    fn log_event(
        &mut self,
        step: u64,
        seq: &mut u64,
        kind: char,
        agent: AgentId,
        direction: Direction,
        price: Option<i64>,
        volume: Volume,
    ) {
        let this_seq = *seq;
        *seq += 1;
        if let Some(events) = &mut self.events {
            events
                .write_event(step, this_seq, kind, agent, direction, price, volume)
                .expect("event log write");
        }
    }

    /// Every resting order belongs to exactly one agent that knows about it,
    /// and the book's internal invariants hold.
    fn cross_audit(&self) {
        self.book.audit().expect("book audit");
        let mut live_orders = 0;
        for agent in &self.agents {
            if let Some(live) = agent.live_order {
                live_orders += 1;
                let order = self
                    .book
                    .get(live.order_id)
                    .unwrap_or_else(|| panic!("agent {} lost order {}", agent.id, live.order_id));
                assert_eq!(order.agent, agent.id, "order owned by wrong agent");
            }
        }
        assert_eq!(
            live_orders,
            self.book.order_count(),
            "agent live orders out of sync with the book"
        );
    }

    /// Run to completion, returning post-warm-up records.
    pub fn run(mut self) -> SimOutput {
        let warmup = self.config.warmup_steps;
        let steps = self.config.steps;
        let depth_every = self.config.depth_every;
        let mut records = Vec::with_capacity((steps - warmup) as usize);
        let mut depth_snapshots = Vec::new();

        for step in 0..steps {
            self.pending_impacts.clear();
            let record = self.step();
            if step < warmup {
                continue;
            }
            records.push(record);
            self.impacts.extend(self.pending_impacts.drain(..));
            if depth_every > 0 && (step - warmup) % depth_every == 0 {
                if let Some(profile) = self.book.depth_profile() {
                    depth_snapshots.push((step, profile));
                }
            }
        }

        let seed = self.config.seed;
        SimOutput {
            config: self.config,
            seed,
            records,
            impacts: self.impacts,
            depth_snapshots,
            rejected_market_orders: self.rejected_market_orders,
        }
    }
}

/// Run one simulation from a config.
pub fn run(config: SimConfig) -> Result<SimOutput, SimError> {
    Ok(Simulation::new(config)?.run())
}

/// Run one simulation per seed, in parallel. Outputs are ordered like the
/// seed list regardless of scheduling.
pub fn run_ensemble(config: &SimConfig, seeds: &[u64]) -> Result<Vec<SimOutput>, SimError> {
    seeds
        .par_iter()
        .map(|&seed| Ok(Simulation::with_seed(config.clone(), Some(seed))?.run()))
        .collect()
}
