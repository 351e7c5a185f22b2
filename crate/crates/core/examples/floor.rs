use lobsim::analytics::{autocorrelation, cross_correlation, kurtosis};
use lobsim::numeric::{mean, std_dev};
use lobsim::{simulator, SimConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let nu_floor: f64 = args.next().map(|a| a.parse().unwrap()).unwrap_or(1.0);
    let phi_0: f64 = args.next().map(|a| a.parse().unwrap()).unwrap_or(0.165);
    let n_agents: usize = args.next().map(|a| a.parse().unwrap()).unwrap_or(10000);
    let steps: u64 = args.next().map(|a| a.parse().unwrap()).unwrap_or(30000);
    let config = SimConfig { n_agents, steps, phi_0, nu_floor, nu_0: nu_floor.max(1.0), initial_orders_per_side: n_agents.min(10000)/10, ..SimConfig::default() };
    let start = std::time::Instant::now();
    let out = simulator::run(config).unwrap();
    let rets = out.returns();
    let abs_rets = out.abs_returns();
    let vols = out.traded_volumes();
    let n_bars: Vec<f64> = out.records.iter().map(|r| r.n_bar as f64).collect();
    println!("nu_floor={nu_floor} phi_0={phi_0} N={n_agents} ({:.1?})", start.elapsed());
    println!("zero-return fraction: {:.4}", out.zero_return_fraction());
    match kurtosis(&rets) { Ok(k) => println!("kurtosis: {:.3}", k), Err(e) => println!("kurtosis err: {e}") }
    println!("mean |ret| {:.4}  mean n_bar {:.1}  mean V {:.2}  std dv {:.1}",
        mean(&abs_rets), mean(&n_bars), mean(&vols), std_dev(&out.imbalances()));
    if let Ok(rho) = autocorrelation(&rets, 3) { println!("acf(r) 1..3: {:.3} {:.3} {:.3}", rho[1], rho[2], rho[3]); }
    if let Ok(rv) = autocorrelation(&abs_rets, 100) { println!("acf(|r|) @ 10/50/100: {:.3} {:.3} {:.3}", rv[10], rv[50], rv[100]); }
    if let (Ok(c), ) = (cross_correlation(&abs_rets, &vols), ) { println!("cross-corr(|r|,V): {:.3}", c); }
}
