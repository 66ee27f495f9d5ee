//! Compares the analytic gradient of the sigmoid-output relaxation with
//! central differences on a random instance.
//!
//! ```sh
//! cargo run --example gradient_check
//! ```

use chi2nn::binning::{BinGrid, BinStats};
use chi2nn::chi2nn::smooth::{soft_error, soft_gradients};
use chi2nn::chi2nn::{GradientMode, SectionedRows};
use chi2nn::network::SingleHiddenLayer;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = Array2::from_shape_fn((16, 2), |_| rng.random_range(-1.0..1.0));
    let y: Vec<u8> = (0..16).map(|_| rng.random_range(0..=1)).collect();
    let grid = BinGrid::fit(x.view(), 2).unwrap();
    let sections = grid.assign(x.view()).unwrap();
    let stats = BinStats::from_assignments(&sections, &y, grid.sections()).unwrap();
    let rows = SectionedRows::new(x.view(), &sections);
    let net = SingleHiddenLayer::random(2, 3, 9, 1.0);

    let grad = soft_gradients(&net, rows, &stats, GradientMode::Corrected).unwrap();
    let h = 1e-5;
    println!("{:>3} {:>14} {:>14}", "#", "analytic", "numeric");
    for (i, &g) in grad.params().enumerate() {
        let (mut plus, mut minus) = (net.clone(), net.clone());
        *plus.params_mut().nth(i).unwrap() += h;
        *minus.params_mut().nth(i).unwrap() -= h;
        let fd = (soft_error(&plus, rows, &stats) - soft_error(&minus, rows, &stats)) / (2.0 * h);
        println!("{i:>3} {g:>14.6e} {fd:>14.6e}");
    }
}
