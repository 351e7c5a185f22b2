//! Life-support experiment: does a live attractor persist after warmup?
use lobsim::{simulator, SimConfig};
fn main() {
    let mut args = std::env::args().skip(1);
    let per_side: usize = args.next().map(|a| a.parse().unwrap()).unwrap_or(1000);
    let nu_0: f64 = args.next().map(|a| a.parse().unwrap()).unwrap_or(2.0);
    let config = SimConfig {
        n_agents: 10_000,
        steps: 20_000,
        warmup_steps: 18_000,
        initial_orders_per_side: per_side,
        nu_0,
        ..SimConfig::default()
    };
    let out = simulator::run(config).unwrap();
    for r in out.records.iter().step_by(500) {
        println!(
            "step {:5} mid {:8.1} ret {:6.2} vol {:4} spread {:?} n_bar {:5}",
            r.step, r.mid, r.ret, r.volume, r.spread, r.n_bar
        );
    }
    let zeros = out.records.iter().filter(|x| x.ret == 0.0).count();
    println!("post-warmup zero fraction {:.3}", zeros as f64 / out.records.len() as f64);
}
