//! Limit order book with price-time priority matching.
//!
//! Two price-ordered ladders of FIFO queues hold the resting limit orders.
//! Incoming volume is matched best-price-first, oldest-first within a price
//! level. Crossing limit orders are matched generically rather than rejected,
//! so the book can never end up crossed or locked regardless of how the
//! caller classified the order. The mid price is the exact mean of the best
//! bid and best ask (half-tick resolution) and is reported as undefined when
//! a side is empty.

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

/// Monotonically increasing order identifier.
pub type OrderId = u64;
/// Agent identifier.
pub type AgentId = u32;
/// Price in integer ticks (tick size 1).
pub type Price = i64;
/// Volume in integer lots.
pub type Volume = i64;

/// Book side a limit order rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Bid,
    Ask,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Bid => Side::Ask,
            Side::Ask => Side::Bid,
        }
    }
}

/// Trade direction: +1 buy, -1 sell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Buy,
    Sell,
}

impl Direction {
    pub fn sign(self) -> i64 {
        match self {
            Direction::Buy => 1,
            Direction::Sell => -1,
        }
    }

    pub fn flip(self) -> Direction {
        match self {
            Direction::Buy => Direction::Sell,
            Direction::Sell => Direction::Buy,
        }
    }

    /// Side this direction's limit orders rest on.
    pub fn rest_side(self) -> Side {
        match self {
            Direction::Buy => Side::Bid,
            Direction::Sell => Side::Ask,
        }
    }

    /// Side this direction consumes when trading aggressively.
    pub fn opposite_side(self) -> Side {
        self.rest_side().opposite()
    }
}

/// A resting or incoming intention to trade.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Order {
    pub id: OrderId,
    pub agent: AgentId,
    pub direction: Direction,
    /// Limit price in ticks.
    pub price: Price,
    /// Remaining volume in lots; always >= 1 while the order is in the book.
    pub volume: Volume,
    /// Step the order was submitted at.
    pub submit_step: u64,
}

/// One execution against a resting order. The price is always the maker's
/// limit price.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fill {
    pub maker_order: OrderId,
    pub maker_agent: AgentId,
    pub maker_direction: Direction,
    pub taker_agent: AgentId,
    pub price: Price,
    pub volume: Volume,
    pub step: u64,
}

/// Outcome of a limit submission: fills from any crossing portion plus the
/// id of the deposited remainder, if any volume rested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitOutcome {
    pub fills: Vec<Fill>,
    pub resting: Option<OrderId>,
}

/// Resting volume per distance from the mid price, one vector per side,
/// sorted by increasing distance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DepthProfile {
    pub bid: Vec<(f64, Volume)>,
    pub ask: Vec<(f64, Volume)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BookError {
    #[error("order volume must be at least 1 lot, got {0}")]
    InvalidVolume(Volume),
    #[error("limit price must be a positive tick, got {0}")]
    InvalidPrice(Price),
    #[error("unknown order id {0}")]
    UnknownOrder(OrderId),
    #[error("duplicate order id {0}")]
    DuplicateOrder(OrderId),
    #[error("insufficient liquidity: requested {requested} lots, {available} resting")]
    InsufficientLiquidity { requested: Volume, available: Volume },
    #[error("book audit failed: {0}")]
    AuditFailure(String),
}

/// The limit order book. All mutating operations keep the book uncrossed and
/// the incremental side totals consistent with a full recount.
#[derive(Debug, Default, Clone)]
pub struct Book {
    bids: BTreeMap<Price, VecDeque<OrderId>>,
    asks: BTreeMap<Price, VecDeque<OrderId>>,
    orders: HashMap<OrderId, Order>,
    bid_volume: Volume,
    ask_volume: Volume,
}

impl Book {
    pub fn new() -> Self {
        Self::default()
    }

    /// Submit a limit order. If the price crosses the opposite best the order
    /// is matched (best price first, oldest first) until it no longer crosses
    /// or is exhausted; any remainder is appended to the FIFO queue at its
    /// price.
    pub fn submit_limit(&mut self, order: Order) -> Result<LimitOutcome, BookError> {
        if order.volume < 1 {
            return Err(BookError::InvalidVolume(order.volume));
        }
        if order.price < 1 {
            return Err(BookError::InvalidPrice(order.price));
        }
        if self.orders.contains_key(&order.id) {
            return Err(BookError::DuplicateOrder(order.id));
        }

        let (fills, remaining) = self.match_against(
            order.direction,
            Some(order.price),
            order.volume,
            order.agent,
            order.submit_step,
        );

        let resting = if remaining > 0 {
            let mut rest = order;
            rest.volume = remaining;
            self.deposit(rest);
            Some(order.id)
        } else {
            None
        };
        Ok(LimitOutcome { fills, resting })
    }

    /// Execute a market order: walk the opposite side best-price-first, FIFO
    /// within each level, until the requested volume is filled. Requests
    /// exceeding the resting opposite volume are rejected whole and leave the
    /// book unchanged.
    pub fn submit_market(
        &mut self,
        direction: Direction,
        volume: Volume,
        taker: AgentId,
        step: u64,
    ) -> Result<Vec<Fill>, BookError> {
        if volume < 1 {
            return Err(BookError::InvalidVolume(volume));
        }
        let available = self.side_total(direction.opposite_side());
        if available < volume {
            return Err(BookError::InsufficientLiquidity {
                requested: volume,
                available,
            });
        }
        let (fills, remaining) = self.match_against(direction, None, volume, taker, step);
        debug_assert_eq!(remaining, 0);
        Ok(fills)
    }

    /// Remove a resting order, deleting its price level if it empties.
    /// Returns the removed order with its remaining volume.
    pub fn cancel(&mut self, id: OrderId) -> Result<Order, BookError> {
        let order = self.orders.remove(&id).ok_or(BookError::UnknownOrder(id))?;
        let ladder = self.ladder_mut(order.direction.rest_side());
        let level = ladder
            .get_mut(&order.price)
            .expect("resting order has a price level");
        let pos = level
            .iter()
            .position(|&oid| oid == id)
            .expect("resting order is queued at its level");
        level.remove(pos);
        if level.is_empty() {
            ladder.remove(&order.price);
        }
        *self.side_volume_mut(order.direction.rest_side()) -= order.volume;
        Ok(order)
    }

    pub fn best_bid(&self) -> Option<Price> {
        self.bids.last_key_value().map(|(p, _)| *p)
    }

    pub fn best_ask(&self) -> Option<Price> {
        self.asks.first_key_value().map(|(p, _)| *p)
    }

    /// Mean of the best bid and best ask, at half-tick resolution.
    /// Undefined when either side is empty.
    pub fn mid_price(&self) -> Option<f64> {
        match (self.best_bid(), self.best_ask()) {
            (Some(b), Some(a)) => Some((b + a) as f64 / 2.0),
            _ => None,
        }
    }

    /// Best ask minus best bid; undefined when either side is empty.
    pub fn spread(&self) -> Option<i64> {
        match (self.best_bid(), self.best_ask()) {
            (Some(b), Some(a)) => Some(a - b),
            _ => None,
        }
    }

    /// Total resting bid volume minus total resting ask volume.
    pub fn volume_imbalance(&self) -> Volume {
        self.bid_volume - self.ask_volume
    }

    pub fn side_total(&self, side: Side) -> Volume {
        match side {
            Side::Bid => self.bid_volume,
            Side::Ask => self.ask_volume,
        }
    }

    /// Number of resting orders.
    pub fn order_count(&self) -> usize {
        self.orders.len()
    }

    pub fn contains(&self, id: OrderId) -> bool {
        self.orders.contains_key(&id)
    }

    pub fn get(&self, id: OrderId) -> Option<&Order> {
        self.orders.get(&id)
    }

    pub fn iter_orders(&self) -> impl Iterator<Item = &Order> {
        self.orders.values()
    }

    /// Resting volume per price level keyed by distance from the current
    /// mid. Undefined when the mid is undefined.
    pub fn depth_profile(&self) -> Option<DepthProfile> {
        let mid = self.mid_price()?;
        let level_volume = |ids: &VecDeque<OrderId>| -> Volume {
            ids.iter().map(|id| self.orders[id].volume).sum()
        };
        let bid = self
            .bids
            .iter()
            .rev()
            .map(|(p, ids)| ((mid - *p as f64).abs(), level_volume(ids)))
            .collect();
        let ask = self
            .asks
            .iter()
            .map(|(p, ids)| ((*p as f64 - mid).abs(), level_volume(ids)))
            .collect();
        Some(DepthProfile { bid, ask })
    }

    /// Full-recount consistency check: side totals, FIFO arrival order,
    /// level/index agreement, and the uncrossed-book invariant.
    pub fn audit(&self) -> Result<(), BookError> {
        let fail = |msg: String| Err(BookError::AuditFailure(msg));
        if let (Some(b), Some(a)) = (self.best_bid(), self.best_ask()) {
            if b >= a {
                return fail(format!("crossed book: best bid {b} >= best ask {a}"));
            }
        }
        let mut seen = 0usize;
        for (side, ladder) in [(Side::Bid, &self.bids), (Side::Ask, &self.asks)] {
            let mut total = 0;
            for (&price, ids) in ladder {
                if ids.is_empty() {
                    return fail(format!("empty level at {price}"));
                }
                let mut last_id = None;
                for &id in ids {
                    let Some(order) = self.orders.get(&id) else {
                        return fail(format!("queued order {id} missing from index"));
                    };
                    if order.price != price || order.direction.rest_side() != side {
                        return fail(format!("order {id} indexed at wrong location"));
                    }
                    if order.volume < 1 {
                        return fail(format!("order {id} has volume {}", order.volume));
                    }
                    if let Some(prev) = last_id {
                        if id <= prev {
                            return fail(format!("FIFO order broken at level {price}"));
                        }
                    }
                    last_id = Some(id);
                    total += order.volume;
                    seen += 1;
                }
            }
            if total != self.side_total(side) {
                return fail(format!(
                    "side total mismatch on {side:?}: recount {total}, incremental {}",
                    self.side_total(side)
                ));
            }
        }
        if seen != self.orders.len() {
            return fail(format!(
                "order index holds {} orders, ladders hold {seen}",
                self.orders.len()
            ));
        }
        Ok(())
    }

    /// Match `volume` lots in `direction` against the opposite side.
    /// `limit` of `None` walks the book unconditionally (market order);
    /// `Some(price)` stops once the best opposite level no longer crosses.
    /// Returns the fills and the unmatched remainder.
    fn match_against(
        &mut self,
        direction: Direction,
        limit: Option<Price>,
        volume: Volume,
        taker: AgentId,
        step: u64,
    ) -> (Vec<Fill>, Volume) {
        let mut fills = Vec::new();
        let mut remaining = volume;
        let opposite = direction.opposite_side();
        while remaining > 0 {
            let Some(best) = self.best(opposite) else { break };
            if let Some(px) = limit {
                let crosses = match direction {
                    Direction::Buy => px >= best,
                    Direction::Sell => px <= best,
                };
                if !crosses {
                    break;
                }
            }
            remaining = self.match_level(opposite, best, remaining, taker, step, &mut fills);
        }
        (fills, remaining)
    }

    /// Consume makers at one price level FIFO until `volume` is exhausted or
    /// the level empties. Returns the unmatched remainder.
    fn match_level(
        &mut self,
        side: Side,
        price: Price,
        mut volume: Volume,
        taker: AgentId,
        step: u64,
        fills: &mut Vec<Fill>,
    ) -> Volume {
        while volume > 0 {
            let Some(&maker_id) = self.ladder_mut(side).get(&price).and_then(|q| q.front())
            else {
                break;
            };
            let maker = self.orders.get_mut(&maker_id).expect("queued order exists");
            let take = volume.min(maker.volume);
            maker.volume -= take;
            volume -= take;
            fills.push(Fill {
                maker_order: maker_id,
                maker_agent: maker.agent,
                maker_direction: maker.direction,
                taker_agent: taker,
                price,
                volume: take,
                step,
            });
            *self.side_volume_mut(side) -= take;
            if self.orders[&maker_id].volume == 0 {
                self.orders.remove(&maker_id);
                let level = self.ladder_mut(side).get_mut(&price).expect("level exists");
                level.pop_front();
                if level.is_empty() {
                    self.ladder_mut(side).remove(&price);
                    break;
                }
            }
        }
        volume
    }

    fn deposit(&mut self, order: Order) {
        *self.side_volume_mut(order.direction.rest_side()) += order.volume;
        self.ladder_mut(order.direction.rest_side())
            .entry(order.price)
            .or_default()
            .push_back(order.id);
        self.orders.insert(order.id, order);
    }

    fn best(&self, side: Side) -> Option<Price> {
        match side {
            Side::Bid => self.best_bid(),
            Side::Ask => self.best_ask(),
        }
    }

    fn ladder_mut(&mut self, side: Side) -> &mut BTreeMap<Price, VecDeque<OrderId>> {
        match side {
            Side::Bid => &mut self.bids,
            Side::Ask => &mut self.asks,
        }
    }

    fn side_volume_mut(&mut self, side: Side) -> &mut Volume {
        match side {
            Side::Bid => &mut self.bid_volume,
            Side::Ask => &mut self.ask_volume,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(id: OrderId, direction: Direction, price: Price, volume: Volume) -> Order {
        Order {
            id,
            agent: id as AgentId,
            direction,
            price,
            volume,
            submit_step: 0,
        }
    }

    fn book_with_asks(levels: &[(Price, Volume)]) -> (Book, OrderId) {
        let mut book = Book::new();
        let mut id = 0;
        for &(price, volume) in levels {
            id += 1;
            book.submit_limit(order(id, Direction::Sell, price, volume))
                .unwrap();
        }
        (book, id)
    }

    #[test]
    fn limit_into_empty_book_rests() {
        let mut book = Book::new();
        let out = book.submit_limit(order(1, Direction::Buy, 100, 5)).unwrap();
        assert!(out.fills.is_empty());
        assert_eq!(out.resting, Some(1));
        assert_eq!(book.best_bid(), Some(100));
        assert_eq!(book.side_total(Side::Bid), 5);
    }

    #[test]
    fn non_crossing_limit_deposits() {
        let (mut book, _) = book_with_asks(&[(101, 5)]);
        let out = book.submit_limit(order(10, Direction::Buy, 100, 3)).unwrap();
        assert!(out.fills.is_empty());
        assert_eq!(book.best_bid(), Some(100));
        assert_eq!(book.best_ask(), Some(101));
        assert_eq!(book.spread(), Some(1));
    }

    #[test]
    fn crossing_limit_fills_at_maker_price() {
        let (mut book, ask_id) = book_with_asks(&[(101, 5)]);
        let out = book.submit_limit(order(10, Direction::Buy, 101, 2)).unwrap();
        assert_eq!(out.fills.len(), 1);
        let fill = out.fills[0];
        assert_eq!(fill.maker_order, ask_id);
        assert_eq!(fill.price, 101);
        assert_eq!(fill.volume, 2);
        assert_eq!(out.resting, None);
        assert_eq!(book.side_total(Side::Ask), 3);
        book.audit().unwrap();
    }

    #[test]
    fn crossing_limit_remainder_rests_without_locking() {
        let (mut book, _) = book_with_asks(&[(101, 5)]);
        let out = book.submit_limit(order(10, Direction::Buy, 101, 8)).unwrap();
        assert_eq!(out.fills.iter().map(|f| f.volume).sum::<Volume>(), 5);
        assert_eq!(out.resting, Some(10));
        // Ask level 101 was consumed, so the remainder at 101 does not lock.
        assert_eq!(book.best_bid(), Some(101));
        assert_eq!(book.best_ask(), None);
        book.audit().unwrap();
    }

    #[test]
    fn market_order_walks_levels_fifo() {
        // Asks: 101 x5, then at 102 a 6-lot (older) and a 4-lot (newer).
        let mut book = Book::new();
        book.submit_limit(order(1, Direction::Sell, 101, 5)).unwrap();
        book.submit_limit(order(2, Direction::Sell, 102, 6)).unwrap();
        book.submit_limit(order(3, Direction::Sell, 102, 4)).unwrap();
        let fills = book.submit_market(Direction::Buy, 8, 99, 1).unwrap();
        assert_eq!(
            fills
                .iter()
                .map(|f| (f.maker_order, f.price, f.volume))
                .collect::<Vec<_>>(),
            vec![(1, 101, 5), (2, 102, 3)]
        );
        assert_eq!(book.side_total(Side::Ask), 3 + 4);
        assert_eq!(book.get(2).unwrap().volume, 3);
        book.audit().unwrap();
    }

    #[test]
    fn market_partial_level() {
        let mut book = Book::new();
        book.submit_limit(order(1, Direction::Buy, 100, 10)).unwrap();
        let fills = book.submit_market(Direction::Sell, 1, 99, 1).unwrap();
        assert_eq!(fills.len(), 1);
        assert_eq!(fills[0].price, 100);
        assert_eq!(book.side_total(Side::Bid), 9);
    }

    #[test]
    fn market_exceeding_liquidity_rejected_book_unchanged() {
        let (mut book, _) = book_with_asks(&[(101, 5), (102, 7)]);
        let before = book.clone();
        let err = book.submit_market(Direction::Buy, 100, 99, 1).unwrap_err();
        assert_eq!(
            err,
            BookError::InsufficientLiquidity {
                requested: 100,
                available: 12
            }
        );
        assert_eq!(book.side_total(Side::Ask), before.side_total(Side::Ask));
        assert_eq!(book.order_count(), before.order_count());
    }

    #[test]
    fn market_into_empty_side_rejected() {
        let mut book = Book::new();
        let err = book.submit_market(Direction::Buy, 1, 99, 1).unwrap_err();
        assert!(matches!(err, BookError::InsufficientLiquidity { .. }));
    }

    #[test]
    fn cancel_only_order_removes_level() {
        let (mut book, id) = book_with_asks(&[(101, 5)]);
        book.cancel(id).unwrap();
        assert_eq!(book.best_ask(), None);
        assert_eq!(book.side_total(Side::Ask), 0);
        assert_eq!(book.order_count(), 0);
    }

    #[test]
    fn cancel_middle_preserves_fifo() {
        let mut book = Book::new();
        book.submit_limit(order(1, Direction::Sell, 101, 1)).unwrap();
        book.submit_limit(order(2, Direction::Sell, 101, 2)).unwrap();
        book.submit_limit(order(3, Direction::Sell, 101, 3)).unwrap();
        book.cancel(2).unwrap();
        let fills = book.submit_market(Direction::Buy, 4, 99, 1).unwrap();
        assert_eq!(
            fills.iter().map(|f| f.maker_order).collect::<Vec<_>>(),
            vec![1, 3]
        );
        book.audit().unwrap();
    }

    #[test]
    fn cancel_resubmit_ranks_last() {
        let mut book = Book::new();
        book.submit_limit(order(1, Direction::Sell, 101, 1)).unwrap();
        book.submit_limit(order(2, Direction::Sell, 101, 1)).unwrap();
        book.cancel(1).unwrap();
        book.submit_limit(order(3, Direction::Sell, 101, 1)).unwrap();
        let fills = book.submit_market(Direction::Buy, 2, 99, 1).unwrap();
        assert_eq!(
            fills.iter().map(|f| f.maker_order).collect::<Vec<_>>(),
            vec![2, 3]
        );
    }

    #[test]
    fn cancel_unknown_is_error() {
        let mut book = Book::new();
        assert_eq!(book.cancel(7).unwrap_err(), BookError::UnknownOrder(7));
    }

    #[test]
    fn mid_and_spread_queries() {
        let mut book = Book::new();
        book.submit_limit(order(1, Direction::Buy, 100, 1)).unwrap();
        book.submit_limit(order(2, Direction::Sell, 101, 1)).unwrap();
        assert_eq!(book.mid_price(), Some(100.5));
        assert_eq!(book.spread(), Some(1));

        let mut wide = Book::new();
        wide.submit_limit(order(1, Direction::Buy, 98, 1)).unwrap();
        wide.submit_limit(order(2, Direction::Sell, 103, 1)).unwrap();
        assert_eq!(wide.mid_price(), Some(100.5));
        assert_eq!(wide.spread(), Some(5));
    }

    #[test]
    fn one_sided_book_has_undefined_mid() {
        let mut book = Book::new();
        book.submit_limit(order(1, Direction::Buy, 100, 1)).unwrap();
        assert_eq!(book.best_ask(), None);
        assert_eq!(book.mid_price(), None);
        assert_eq!(book.spread(), None);
    }

    #[test]
    fn volume_imbalance_cases() {
        let mut book = Book::new();
        assert_eq!(book.volume_imbalance(), 0);
        book.submit_limit(order(1, Direction::Buy, 100, 30)).unwrap();
        book.submit_limit(order(2, Direction::Sell, 105, 30)).unwrap();
        assert_eq!(book.volume_imbalance(), 0);
        book.submit_limit(order(3, Direction::Buy, 99, 10)).unwrap();
        book.submit_limit(order(4, Direction::Sell, 106, 5)).unwrap();
        // bids 40, asks 35, minus 10 more asks cancelled below
        book.cancel(4).unwrap();
        assert_eq!(book.volume_imbalance(), 40 - 30);
    }

    #[test]
    fn depth_profile_distances() {
        let mut book = Book::new();
        book.submit_limit(order(1, Direction::Buy, 100, 5)).unwrap();
        book.submit_limit(order(2, Direction::Sell, 101, 7)).unwrap();
        let depth = book.depth_profile().unwrap();
        assert_eq!(depth.bid, vec![(0.5, 5)]);
        assert_eq!(depth.ask, vec![(0.5, 7)]);
    }

    #[test]
    fn depth_profile_matches_full_scan() {
        let mut book = Book::new();
        let levels = [
            (Direction::Buy, 100, 5),
            (Direction::Buy, 100, 2),
            (Direction::Buy, 97, 4),
            (Direction::Sell, 102, 1),
            (Direction::Sell, 105, 9),
        ];
        for (i, &(d, p, v)) in levels.iter().enumerate() {
            book.submit_limit(order(i as OrderId + 1, d, p, v)).unwrap();
        }
        let mid = book.mid_price().unwrap();
        assert_eq!(mid, 101.0);
        let depth = book.depth_profile().unwrap();
        assert_eq!(depth.bid, vec![(1.0, 7), (4.0, 4)]);
        assert_eq!(depth.ask, vec![(1.0, 1), (4.0, 9)]);
        let scan: Volume = depth.bid.iter().chain(&depth.ask).map(|&(_, v)| v).sum();
        let total: Volume = book.iter_orders().map(|o| o.volume).sum();
        assert_eq!(scan, total);
    }

    #[test]
    fn rejects_invalid_orders() {
        let mut book = Book::new();
        assert!(matches!(
            book.submit_limit(order(1, Direction::Buy, 100, 0)),
            Err(BookError::InvalidVolume(0))
        ));
        assert!(matches!(
            book.submit_limit(order(1, Direction::Buy, 0, 5)),
            Err(BookError::InvalidPrice(0))
        ));
        book.submit_limit(order(1, Direction::Buy, 100, 5)).unwrap();
        assert!(matches!(
            book.submit_limit(order(1, Direction::Buy, 99, 5)),
            Err(BookError::DuplicateOrder(1))
        ));
    }
}
