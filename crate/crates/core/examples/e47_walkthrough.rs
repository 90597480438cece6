//! The edge vector `e_47` and the colors it induces on the left-hand side.

use hepta::ansatz::default_vandermonde;
use hepta::edgevectors::walkthrough;
use hepta::scalars::FieldConfig;

pub fn main() {
    let ps = default_vandermonde(FieldConfig::Rational, 7).unwrap();
    let w = walkthrough(4, 7, &ps).unwrap();
    for step in &w.lhs.steps {
        let show = |legs: &[(hepta::FaceId, hepta::Scalar)]| {
            legs.iter().map(|(f, v)| format!("{f}={v}")).collect::<Vec<_>>().join(" ")
        };
        println!("A^({}): {}  ->  {}", step.simplex, show(&step.inputs), show(&step.outputs));
    }
    println!(
        "zeros exactly where 4 or 7 occurs: {}, consistent on both sides: {}",
        w.zero_pattern_ok, w.consistent
    );
}
