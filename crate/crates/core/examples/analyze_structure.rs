//! Edge-vector structure in numerical solutions: the float-cast ansatz, a
//! perturbed copy of it, and a few Levenberg-Marquardt solutions.

use hepta::ansatz::default_vandermonde;
use hepta::numlab::system::to_matrices;
use hepta::numlab::{aggregate, analyze, analyze_matrices, ansatz_point, multistart, AnalysisOptions, LmOptions};
use hepta::scalars::FieldConfig;

pub fn main() {
    let opts = AnalysisOptions::default();
    let ps = default_vandermonde(FieldConfig::Rational, 7).unwrap();
    let mut ms = to_matrices(&ansatz_point(&ps).unwrap());
    let r = analyze_matrices(&ms, &opts).unwrap();
    println!(
        "ansatz: global rank {}, permitted {}, local ranks {:?}, properties {:?}",
        r.global_rank, r.permitted_dim, r.local_ranks, r.properties
    );
    ms[0][0][0] += 0.1;
    println!("perturbed: all properties = {}", analyze_matrices(&ms, &opts).unwrap().properties.all());

    let runs = multistart(7, 6, &LmOptions::default()).unwrap();
    let reports: Vec<_> = runs.iter().filter(|r| r.converged).map(|r| analyze(r, &opts).unwrap()).collect();
    for rep in &reports {
        println!("seed {:>20}: zero entries {:>2}, all properties {}", rep.seed.unwrap(), rep.zero_entries, rep.properties.all());
    }
    println!("{:?}", aggregate(&reports));
}
