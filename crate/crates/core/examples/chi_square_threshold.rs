//! Critical values used by the training stop rule.
//!
//! ```sh
//! cargo run --example chi_square_threshold
//! ```

use chi2nn::stats::{chi2_cdf, chi2_quantile, ChiSquareCritical, EpsilonMode};

fn main() {
    println!("{:>4} {:>10} {:>10} {:>10} {:>10}", "df", "α=0.5", "α=0.1", "α=0.05", "α=0.01");
    for df in [1u32, 2, 3, 5, 10, 31, 64] {
        let row: Vec<String> = [0.5, 0.1, 0.05, 0.01]
            .iter()
            .map(|&a| format!("{:>10.4}", chi2_quantile(df, a).unwrap()))
            .collect();
        println!("{df:>4} {}", row.join(" "));
    }

    // the quantile inverts the CDF
    let q = chi2_quantile(7, 0.05).unwrap();
    println!("\nP(χ²(7) <= {q:.6}) = {:.9}", chi2_cdf(q, 7).unwrap());

    for mode in [EpsilonMode::default(), EpsilonMode::DfMean] {
        let c = ChiSquareCritical::resolve(15, mode).unwrap();
        println!("{mode:?}: ε = {:.4} at df = {}", c.value, c.df);
    }
}
