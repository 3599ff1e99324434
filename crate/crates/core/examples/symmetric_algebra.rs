//! Components of the quantum symmetric algebra, shuffle products and deconcatenation.

use qtrace::braid::{self, Builtin};
use qtrace::symmetric::{component_basis, deconcat, grade_profile, shuffle_product};

fn main() {
    let b = Builtin::SlExterior.build(2);
    let profile = grade_profile(&b, 4).unwrap();
    println!("sl-exterior N=2: dims {:?}, top {:?}", profile.dims, profile.top);
    println!("flip on 2 letters: dims {:?}", grade_profile(&braid::flip(2), 4).unwrap().dims);

    let s1 = component_basis(&b, 1).unwrap();
    let x = s1.vectors()[0].clone();
    let y = s1.vectors()[1].clone();
    let xy = shuffle_product(&b, &x, &y);
    let yx = shuffle_product(&b, &y, &x);
    let s2 = component_basis(&b, 2).unwrap();
    println!("x*y in S^2 coordinates: {:?}", s2.project(&xy).iter().map(|s| s.to_string()).collect::<Vec<_>>());
    println!("y*x in S^2 coordinates: {:?}", s2.project(&yx).iter().map(|s| s.to_string()).collect::<Vec<_>>());

    let split = deconcat(&xy, 1, 1).unwrap();
    println!("Delta_(1,1)(x*y) has {} nonzero pairs", split.pairs().len());
}
