use lobsim::{simulator, SimConfig};
fn main() {
    let mut args = std::env::args().skip(1);
    let per_side: usize = args.next().map(|a| a.parse().unwrap()).unwrap_or(1250);
    let nu_0: f64 = args.next().map(|a| a.parse().unwrap()).unwrap_or(2.0);
    let config = SimConfig { n_agents: 10000, steps: 3000, warmup_steps: 1, initial_orders_per_side: per_side, nu_0, ..SimConfig::default() };
    let out = simulator::run(config.clone()).unwrap();
    let mut ema = nu_0 * nu_0;
    let mut trade_steps = 0;
    for (i, r) in out.records.iter().enumerate() {
        ema = r.ret * r.ret / 5.0 + 0.8 * ema;
        if r.volume > 0 { trade_steps += 1; }
        if i % 25 == 0 {
            println!(
                "step {:4} ret {:6.2} vol {:4} nu_hat {:6.2} psi {:5.3} spread {:?} n_bar {:5}",
                r.step, r.ret, r.volume, ema.sqrt().max(0.1), 1.0 - (-0.02 * ema.sqrt().max(0.1)).exp(), r.spread, r.n_bar
            );
        }
        if i > 700 { break; }
    }
    println!("steps with trades: {trade_steps}/700");
}
