//! The q-trace is an algebra morphism for the third product.

use qtrace::endo::{EndoContext, GradedEndo};
use qtrace::random::EntryShape;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn main() {
    let ctx = EndoContext::sl_exterior(2).unwrap();
    for p in 0..=ctx.max_grade() {
        println!("Tr_q(I_{p}) = {}", GradedEndo::grade_identity(&ctx, p).q_trace().unwrap());
    }
    println!("Tr_q(identity) = {}", GradedEndo::identity(&ctx).q_trace().unwrap());

    let mut rng = StdRng::seed_from_u64(3);
    let shape = EntryShape { density: 0.3, ..EntryShape::default() };
    let a = GradedEndo::random(&ctx, &mut rng, &shape);
    let b = GradedEndo::random(&ctx, &mut rng, &shape);
    let (ta, tb) = (a.q_trace().unwrap(), b.q_trace().unwrap());
    let tab = a.third_product(&b).unwrap().q_trace().unwrap();
    println!("Tr_q(A) = {ta}");
    println!("Tr_q(B) = {tb}");
    println!("Tr_q(A x B) = Tr_q(A) Tr_q(B): {}", tab == &ta * &tb);
}
