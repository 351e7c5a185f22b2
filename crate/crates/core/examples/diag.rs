//! Quick diagnostic run: prints the headline statistics of one simulation.

use lobsim::analytics::{autocorrelation, cross_correlation, kurtosis};
use lobsim::numeric::{mean, std_dev};
use lobsim::{simulator, SimConfig};

fn main() {
    let mut config = SimConfig::default();
    let mut args = std::env::args().skip(1);
    if let Some(n) = args.next() {
        config.n_agents = n.parse().unwrap();
    }
    if let Some(steps) = args.next() {
        config.steps = steps.parse().unwrap();
    }
    if let Some(phi) = args.next() {
        config.phi_0 = phi.parse().unwrap();
    }

    let start = std::time::Instant::now();
    let out = simulator::run(config.clone()).unwrap();
    let elapsed = start.elapsed();

    let rets = out.returns();
    let abs_rets = out.abs_returns();
    let vols = out.traded_volumes();
    let spreads = out.spreads();
    let n_bars: Vec<f64> = out.records.iter().map(|r| r.n_bar as f64).collect();
    let imb = out.imbalances();

    println!(
        "run: N={} steps={} phi_0={} ({:.1?})",
        config.n_agents, config.steps, config.phi_0, elapsed
    );
    println!("zero-return fraction: {:.4}", out.zero_return_fraction());
    println!("kurtosis(returns):    {:.3}", kurtosis(&rets).unwrap());
    println!("mean |ret|:           {:.4}", mean(&abs_rets));
    println!("mean n_bar:           {:.1}", mean(&n_bars));
    println!("mean spread:          {:.3}", mean(&spreads));
    println!("mean traded volume:   {:.3}", mean(&vols));
    println!("std delta_v:          {:.1} (mean {:.1})", std_dev(&imb), mean(&imb));
    println!("market orders:        {} (rejected {})", out.impacts.len(), out.rejected_market_orders);
    let rho = autocorrelation(&rets, 5).unwrap();
    println!("acf(returns) 1..5:    {:?}", &rho[1..].iter().map(|r| (r * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    let rho_v = autocorrelation(&abs_rets, 100).unwrap();
    println!("acf(|ret|) @ 10/50/100: {:.3} {:.3} {:.3}", rho_v[10], rho_v[50], rho_v[100]);
    println!(
        "cross-corr(|r|, V):   {:.3}",
        cross_correlation(&abs_rets, &vols).unwrap()
    );
    let final_mid = out.records.last().unwrap().mid;
    println!("final mid: {final_mid}");
}
