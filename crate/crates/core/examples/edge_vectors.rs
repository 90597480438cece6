//! Runs every exact edge-vector check on one parameter set.

use hepta::ansatz::ParameterSet;
use hepta::edgevectors::{global_span_rank, run_suite, Check};
use hepta::scalars::FieldConfig;

pub fn main() {
    let (ps, _) = ParameterSet::random(FieldConfig::Rational, 7, 2).unwrap();
    let report = run_suite(&ps, &Check::ALL).unwrap();
    for check in Check::ALL {
        let (ok, total) = report.count(check);
        println!("{check:?}: {ok}/{total}");
    }
    let g = global_span_rank(&ps).unwrap();
    println!("edge vectors span rank {} of a {}-dimensional permitted space", g.edge_rank, g.permitted_dim);
    println!("all pass: {}", report.all_pass());
}
