//! Prints the measured gmc profile of the marked-Goldstine machine together
//! with the sqrt and linear fits. Handy when tuning the batch constant.

use nonreg::efa::build_sqrt_efa;
use nonreg::oracle::{growth_fit, GrowthFamily};
use nonreg::Limits;

fn main() {
    let n_max: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(60);
    let machine = build_sqrt_efa();
    let start = std::time::Instant::now();
    let limits = Limits {
        search_nodes: 200_000_000,
        ..Limits::default()
    };
    let profile = machine.gmc_profile(n_max, &limits).expect("profile");
    eprintln!("profile to {n_max} took {:?}", start.elapsed());
    print!("{}", profile.to_csv());
    for family in [GrowthFamily::Sqrt, GrowthFamily::Linear] {
        match growth_fit(&profile, family, 4, 0.15) {
            Ok(fit) => println!(
                "{}: C={:.4} max_resid={:.4} bigO_consistent={} omega_C={:.4} points={}",
                fit.family,
                fit.constant,
                fit.max_abs_residual,
                fit.consistent_with_big_o,
                fit.omega_constant,
                fit.points_used
            ),
            Err(e) => println!("{family}: {e}"),
        }
    }
}
