//! Windowed order-flow accounting to inspect the book's birth/death balance.

use lobsim::simulator::Simulation;
use lobsim::SimConfig;

fn main() {
    let mut args = std::env::args().skip(1);
    let per_side: usize = args.next().map(|a| a.parse().unwrap()).unwrap_or(1000);
    let nu_0: f64 = args.next().map(|a| a.parse().unwrap()).unwrap_or(2.0);
    let phi_0: f64 = args.next().map(|a| a.parse().unwrap()).unwrap_or(0.165);
    let config = SimConfig {
        n_agents: 10_000,
        steps: 4000,
        warmup_steps: 1,
        initial_orders_per_side: per_side,
        nu_0,
        phi_0,
        ..SimConfig::default()
    };
    let mut sim = Simulation::new(config).unwrap();
    let mut prev = sim.flow_counters();
    let window = 100u64;
    println!("win_end | deposits execL markets | tout strat filled | net/step n_bar spread");
    for w in 0..40 {
        let mut last = None;
        for _ in 0..window {
            last = Some(sim.step());
        }
        let last = last.unwrap();
        let now = sim.flow_counters();
        let dep = now.limit_deposits - prev.limit_deposits;
        let exl = now.limit_executed - prev.limit_executed;
        let mkt = now.market_orders - prev.market_orders;
        let tout = now.cancels_timeout - prev.cancels_timeout;
        let strat = now.cancels_strategic - prev.cancels_strategic;
        let fout = now.filled_out - prev.filled_out;
        let net = dep as f64 - (tout + strat + fout) as f64;
        println!(
            "{:7} | {:8} {:5} {:7} | {:4} {:5} {:6} | {:+8.2} {:5} {:?}",
            (w + 1) * window, dep, exl, mkt, tout, strat, fout, net / window as f64,
            last.n_bar, last.spread
        );
        prev = now;
        if last.n_bar == 0 { break; }
    }
}
