//! The wiring diagrams of both relations as JSON, and a search confirming
//! that no other ordering of step outputs makes the two sides agree.

use hepta::ansatz::ParameterSet;
use hepta::combinatorics::{wiring, Move, Side};
use hepta::relations::search_wirings;
use hepta::scalars::FieldConfig;

pub fn main() {
    for mv in [Move::Heptagon, Move::Pentagon] {
        for side in [Side::Lhs, Side::Rhs] {
            println!("{}", serde_json::to_string(&wiring(mv, side)).unwrap());
        }
        let (ps, _) = ParameterSet::random(FieldConfig::Rational, mv.n_vertices() as usize, 0).unwrap();
        println!("{mv}: {} agreeing wiring pair(s)", search_wirings(mv, &ps).unwrap().len());
    }
}
