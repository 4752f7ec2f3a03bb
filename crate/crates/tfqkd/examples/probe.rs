use tfqkd::channel::ChannelParams;
use tfqkd::decoy::{bound_yields, IntensityConfig};

fn main() {
    // refinement-property probe at the test's setting
    let params = ChannelParams::new(8e-8, 0.145, 0.2, 0.0, 1.15).unwrap();
    let ints = IntensityConfig::new(0.1, &[0.0, 0.002, 0.005, 1.3], &[0.0, 0.002, 0.005]).unwrap();
    let gains = params.build_gain_table(&ints, 120.0).unwrap();
    let coarse = bound_yields(&gains, &ints, 8).unwrap();
    let fine = bound_yields(&gains, &ints, 10).unwrap();
    let mut worst = 0.0f64;
    for n in 0..=8u32 {
        for m in 0..=8u32 {
            let d_hi = fine.upper(n, m).value() - coarse.upper(n, m).value();
            let d_lo = coarse.lower(n, m).value() - fine.lower(n, m).value();
            let v = d_hi.max(d_lo);
            if v > 1e-9 {
                println!("({n},{m}): hi {:.3e}->{:.3e} (d={d_hi:.2e}) lo {:.3e}->{:.3e} (d={d_lo:.2e})",
                    coarse.upper(n,m).value(), fine.upper(n,m).value(),
                    coarse.lower(n,m).value(), fine.lower(n,m).value());
            }
            worst = worst.max(v);
        }
    }
    println!("worst widening {worst:.3e}");

    // soundness re-probe at the hard point
    let params = ChannelParams::new(5e-8, 0.85, 0.2, 0.015, 1.15).unwrap();
    let ints = IntensityConfig::new(0.3, &[0.0, 0.002, 0.005], &[0.0, 0.002, 0.005]).unwrap();
    let gains = params.build_gain_table(&ints, 470.0).unwrap();
    let yb = bound_yields(&gains, &ints, 10).unwrap();
    let mut violation = 0.0f64;
    for n in 0..=10u32 {
        for m in 0..=10u32 {
            let t = params.fock_yield(n, m, 470.0).unwrap().value();
            let v = (yb.lower(n, m).value() - t).max(t - yb.upper(n, m).value());
            violation = violation.max(v);
        }
    }
    println!("max bracketing violation at 470km: {violation:.3e}");
    for (n,m) in [(0u32,1u32),(1,1),(2,2),(2,3)] {
        println!("  Y({n},{m}): true={:.3e} lp=[{:.3e},{:.3e}]",
            params.fock_yield(n, m, 470.0).unwrap().value(),
            yb.lower(n, m).value(), yb.upper(n, m).value());
    }
}
