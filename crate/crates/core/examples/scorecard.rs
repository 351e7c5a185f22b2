//! Full acceptance-oriented scorecard for one simulation configuration.

use lobsim::analytics::{
    autocorrelation, average_book_shape, cross_correlation, dfa_hurst, impact_function,
    kurtosis, noise_band, remove_zeros,
};
use lobsim::numeric::{mean, std_dev, weighted_linear_fit};
use lobsim::{simulator, SimConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn hurst(label: &str, series: &[f64]) {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    if series.len() < 64 {
        println!("  H({label}): series too short");
        return;
    }
    match dfa_hurst(series, 8, series.len() / 8, 12, &mut rng) {
        Ok(r) => println!("  H({label}) = {:.3} +- {:.3}", r.hurst, r.stderr),
        Err(e) => println!("  H({label}): {e}"),
    }
}

fn main() {
    let mut args = std::env::args().skip(1);
    let phi_0: f64 = args.next().map(|a| a.parse().unwrap()).unwrap_or(0.165);
    let n_agents: usize = args.next().map(|a| a.parse().unwrap()).unwrap_or(10_000);
    let steps: u64 = args.next().map(|a| a.parse().unwrap()).unwrap_or(30_000);
    let seed: u64 = args.next().map(|a| a.parse().unwrap()).unwrap_or(1);
    let config = SimConfig {
        n_agents,
        steps,
        phi_0,
        seed,
        initial_orders_per_side: n_agents / 10,
        ..SimConfig::default()
    };
    let start = std::time::Instant::now();
    let out = simulator::run(config).unwrap();
    println!(
        "phi_0={phi_0} N={n_agents} steps={steps} seed={seed} ({:.0?})",
        start.elapsed()
    );

    let rets = out.returns();
    let abs_rets = out.abs_returns();
    let vols = out.traded_volumes();
    let spreads = out.spreads();
    let imb = out.imbalances();

    println!("[6] zero-return fraction: {:.4} (target 0.30+-0.07)", out.zero_return_fraction());
    match kurtosis(&rets) {
        Ok(k) => println!("[7] kurtosis: {:.3} (target >4 at 0.165; 2.5-3.5 at 1.65)", k),
        Err(e) => { println!("[7] kurtosis: {e} -- DEAD MARKET"); return; }
    }
    hurst("returns [1: 0.44-0.55]", &rets);
    hurst("returns-nozeros [1]", &remove_zeros(&rets));
    hurst("|returns| [3: 0.55-0.67]", &abs_rets);
    hurst("volume [4: 0.62-0.78]", &vols);
    hurst("spread [5: 0.50-0.62]", &spreads);
    let rho = autocorrelation(&rets, 3).unwrap();
    println!("[2] rho(1) = {:.3} (< -{:.4})", rho[1], noise_band::<f64>(rets.len()));
    let rv = autocorrelation(&abs_rets, 100).unwrap();
    let band = noise_band::<f64>(abs_rets.len());
    let below = (1..=100).filter(|&l| rv[l] <= band).count();
    println!("[3] vol ACF: lag10 {:.4} lag50 {:.4} lag100 {:.4}; lags<=100 below band: {below}", rv[10], rv[50], rv[100]);
    println!("[8] cross-corr(|r|,V) = {:.3} (target > 0.30)", cross_correlation(&abs_rets, &vols).unwrap());

    // [9] impact
    let impacts: Vec<(f64, f64)> = out.impacts.iter().map(|i| (i.signed_volume as f64, i.mid_change)).collect();
    if !impacts.is_empty() {
        let curve = impact_function(&impacts, 41).unwrap();
        let occupied: Vec<_> = curve.occupied().filter(|b| b.count >= 20).collect();
        let mono = occupied.windows(2).filter(|w| w[1].mean_change + 1e-12 >= w[0].mean_change).count();
        println!("[9] impact bins(>=20): {}, nondecreasing pairs {}/{}", occupied.len(), mono, occupied.len().saturating_sub(1));
        let mut absv: Vec<f64> = impacts.iter().map(|r| r.0.abs()).collect();
        absv.sort_by(f64::total_cmp);
        let p20 = absv[absv.len() / 5] / curve.max_volume;
        let small: Vec<_> = occupied.iter().filter(|b| b.center.abs() <= p20).collect();
        if small.len() >= 3 {
            let x: Vec<f64> = small.iter().map(|b| b.center).collect();
            let y: Vec<f64> = small.iter().map(|b| b.mean_change).collect();
            let w: Vec<f64> = small.iter().map(|b| b.count as f64).collect();
            let (slope, _, r2) = weighted_linear_fit(&x, &y, &w);
            println!("    small-|V| linear fit: slope {:.3} r2 {:.3} (target r2 > 0.8)", slope, r2);
            let p80 = absv[absv.len() * 4 / 5] / curve.max_volume;
            let big: Vec<_> = occupied.iter().filter(|b| b.center.abs() >= p80).collect();
            if big.len() >= 2 {
                let bx: Vec<f64> = big.iter().map(|b| b.center).collect();
                let by: Vec<f64> = big.iter().map(|b| b.mean_change).collect();
                let bw: Vec<f64> = big.iter().map(|b| b.count as f64).collect();
                let (bslope, _, _) = weighted_linear_fit(&bx, &by, &bw);
                println!("    top-quintile slope {:.3} vs small slope {:.3} (must be smaller)", bslope, slope);
            }
        }
    } else {
        println!("[9] impact: no market orders");
    }

    // [10] book shape
    let profiles: Vec<_> = out.depth_snapshots.iter().map(|(_, p)| p.clone()).collect();
    if !profiles.is_empty() {
        let shape: Vec<(i64, f64)> = average_book_shape(&profiles).unwrap();
        let peak = shape.iter().cloned().fold((0i64, 0.0f64), |a, b| if b.1 > a.1 { b } else { a });
        let tail_min = shape.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min);
        println!("[10] book shape: peak {:.1} lots at distance {}, min {:.2}, buckets {}", peak.1, peak.0, tail_min, shape.len());
        let head: Vec<String> = shape.iter().take(12).map(|(d, v)| format!("{d}:{v:.1}")).collect();
        println!("     head: {}", head.join(" "));
    }

    // [11] imbalance
    println!("[11] dV: |mean| {:.2} vs 0.05*std {:.2}", mean(&imb).abs(), 0.05 * std_dev(&imb));
    let ri = autocorrelation(&imb, 2000).unwrap();
    let crossing = (1..ri.len()).find(|&l| ri[l] < noise_band::<f64>(imb.len()));
    println!("     dV ACF first sub-band lag: {:?}", crossing);
}
