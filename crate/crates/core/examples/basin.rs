use lobsim::{simulator, SimConfig};
fn main() {
    let mut args = std::env::args().skip(1);
    let n_agents: usize = args.next().map(|a| a.parse().unwrap()).unwrap_or(10000);
    let per_side: usize = args.next().map(|a| a.parse().unwrap()).unwrap_or(1250);
    let nu_0: f64 = args.next().map(|a| a.parse().unwrap()).unwrap_or(10.0);
    let phi_0: f64 = args.next().map(|a| a.parse().unwrap()).unwrap_or(0.165);
    let config = SimConfig { n_agents, steps: 20000, warmup_steps: 1, initial_orders_per_side: per_side, nu_0, phi_0, ..SimConfig::default() };
    let out = simulator::run(config).unwrap();
    for r in out.records.iter().step_by(800) {
        println!("step {:5} mid {:8.1} ret {:6.2} vol {:5} spread {:?} n_bar {:5}", r.step, r.mid, r.ret, r.volume, r.spread, r.n_bar);
    }
    let zeros = out.records.iter().filter(|x| x.ret == 0.0).count();
    println!("zero fraction {:.3}", zeros as f64 / out.records.len() as f64);
}
