//! The pentagon analogue: 2x2 matrices `d_{jlp} / d_{ijp}` and vertex vectors.

use hepta::ansatz::{default_vandermonde, ParameterSet};
use hepta::combinatorics::{legs_of, Move};
use hepta::edgevectors::{check_permitted, generalized_coloring};
use hepta::relations::verify_relation;
use hepta::scalars::FieldConfig;
use hepta::transfer_matrix;

pub fn main() {
    let ps = default_vandermonde(FieldConfig::Rational, 5).unwrap();
    for p in 1..=5 {
        let (ins, outs) = legs_of(Move::Pentagon, p).unwrap();
        let a = transfer_matrix(Move::Pentagon, p, &ins, &outs, &ps).unwrap();
        let rows: Vec<String> = a
            .entries
            .to_rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        let names = |fs: &[hepta::FaceId]| fs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        println!("A^({p}) in ({}) out ({}): [{}]", names(&ins), names(&outs), rows.join("; "));
    }
    println!("pentagon holds: {}", verify_relation(Move::Pentagon, &ps).unwrap().equal);

    let (ps, _) = ParameterSet::random(FieldConfig::Rational, 5, 11).unwrap();
    for i in 1..=5 {
        let e = generalized_coloring(&[i], &ps).unwrap();
        println!("e_{i} permitted: {}", check_permitted(&e, &ps).unwrap().all_pass());
    }
}
