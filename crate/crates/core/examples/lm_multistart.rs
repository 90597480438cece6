//! Levenberg-Marquardt from random starts on the 63 matrix entries.

use hepta::numlab::{multistart, LmOptions};

pub fn main() {
    let opts = LmOptions::default();
    let runs = multistart(7, 8, &opts).unwrap();
    for r in &runs {
        println!(
            "seed {:>20}  iterations {:>4}  residual {:.3e}  converged {}",
            r.seed, r.iterations, r.residual, r.converged
        );
    }
    let ok = runs.iter().filter(|r| r.converged).count();
    println!("{ok}/{} runs below {:e}", runs.len(), opts.tol);
}
