//! Composition, convolution and the third product on End(S).

use qtrace::endo::{conv_exp, EndoContext, GradedEndo};
use qtrace::random::EntryShape;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn main() {
    let ctx = EndoContext::sl_exterior(2).unwrap();
    println!("context: {}", ctx.descriptor());

    for (p, x) in ctx.star_powers(&ctx.identity_matrix(1)).unwrap().iter().enumerate() {
        println!("I_1^(*{p}) = ({}) I_{p}", x[(0, 0)]);
    }

    let mut rng = StdRng::seed_from_u64(1);
    let a = GradedEndo::random(&ctx, &mut rng, &EntryShape::default());
    let b = GradedEndo::random(&ctx, &mut rng, &EntryShape::default());
    let unit = GradedEndo::unit(&ctx);

    let third = a.third_product(&b).unwrap();
    let via_alpha = a.alpha().compose(&b.alpha()).unwrap().alpha_inv();
    println!("A x B = alpha^-1(alpha A o alpha B): {}", third == via_alpha);
    println!("I_0 is the unit of x: {}", unit.third_product(&a).unwrap() == a);
    println!("alpha(I_0) = exp(I_1): {}", unit.alpha() == conv_exp(&ctx, &ctx.identity_matrix(1)).unwrap());
    println!("support of A x B: {:?}", third.support());
}
