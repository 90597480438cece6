//! Vectors of `(n-5)/2`-simplices: edges for n = 7, vertices for n = 5.

use hepta::ansatz::{generalized_vector, ParameterSet};
use hepta::combinatorics::all_faces;
use hepta::edgevectors::{check_permitted, edge_vector, generalized_coloring};
use hepta::scalars::FieldConfig;

pub fn main() {
    let (ps7, _) = ParameterSet::random(FieldConfig::Rational, 7, 1).unwrap();
    let mut agree = 0;
    for e in all_faces(7) {
        let dd = edge_vector(e.lo(), e.hi(), &ps7).unwrap();
        for v in all_faces(7) {
            agree += (generalized_vector(7, &[e.lo(), e.hi()], v, &ps7).unwrap() == *dd.get(v)) as usize;
        }
    }
    println!("n = 7: {agree}/441 components agree with the edge-vector formula");

    let (ps5, _) = ParameterSet::random(FieldConfig::Prime { p: 10007 }, 5, 1).unwrap();
    for i in 1..=5 {
        let c = generalized_coloring(&[i], &ps5).unwrap();
        println!("n = 5: e_{i} = {:?} permitted {}", c.support_map(), check_permitted(&c, &ps5).unwrap().all_pass());
    }
}
