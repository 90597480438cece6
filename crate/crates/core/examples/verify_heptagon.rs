//! Exact check of the heptagon relation over the rationals and over F_10007.

use hepta::ansatz::{default_vandermonde, ParameterSet};
use hepta::combinatorics::Move;
use hepta::relations::verify_relation;
use hepta::scalars::FieldConfig;

pub fn main() {
    let ps = default_vandermonde(FieldConfig::Rational, 7).unwrap();
    let report = verify_relation(Move::Heptagon, &ps).unwrap();
    println!("Vandermonde t = 1..7: equal = {}", report.equal);
    println!("first row of the 6x6 product:");
    let row: Vec<String> = report.sides.0.matrix.row(0).iter().map(ToString::to_string).collect();
    println!("  [{}]", row.join(", "));

    for field in [FieldConfig::Rational, FieldConfig::Prime { p: 10007 }] {
        let mut equal = 0;
        for seed in 0..20 {
            let (ps, _) = ParameterSet::random(field, 7, seed).unwrap();
            equal += verify_relation(Move::Heptagon, &ps).unwrap().equal as usize;
        }
        println!("{field}: {equal}/20 random parameter sets satisfy the relation");
    }
}
