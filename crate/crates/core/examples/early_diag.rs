//! Trace of early-step dynamics: mid, volumes and book population.

use lobsim::{simulator, SimConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let n_agents: usize = args.next().map(|a| a.parse().unwrap()).unwrap_or(2000);
    let steps: u64 = args.next().map(|a| a.parse().unwrap()).unwrap_or(400);
    let per_side: usize = args.next().map(|a| a.parse().unwrap()).unwrap_or(250);
    let config = SimConfig {
        n_agents,
        steps,
        warmup_steps: 1,
        initial_orders_per_side: per_side,
        ..SimConfig::default()
    };
    let out = simulator::run(config).unwrap();
    let stride = (steps as usize / 25).max(1);
    for r in out.records.iter().step_by(stride) {
        println!(
            "step {:5} mid {:8.1} ret {:6.2} vol {:4} spread {:?} n_bar {:5} dv {:6}",
            r.step, r.mid, r.ret, r.volume, r.spread, r.n_bar, r.delta_v
        );
    }
    let zeros = out.records.iter().filter(|r| r.ret == 0.0).count();
    println!(
        "zero fraction {:.3}, impacts {}",
        zeros as f64 / out.records.len() as f64,
        out.impacts.len()
    );
}
