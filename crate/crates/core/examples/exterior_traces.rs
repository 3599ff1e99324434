//! Type-A traces on the quantum exterior algebra: closed formulas, powers,
//! partial traces and the comparison with the quantum trace.

use qtrace::exterior::{
    partial_trace_chain, q_trace_closed, q_trace_powers, quantum_trace, ExteriorContext, PowerMode, WedgeEndo,
    WedgeIndex,
};
use qtrace::random::{random_matrix, EntryShape};
use qtrace::scalar::Scalar;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn main() {
    let n = 2;
    let ext = ExteriorContext::new(n).unwrap();
    let mut rng = StdRng::seed_from_u64(11);

    println!("grade-2 wedge basis: {}", WedgeIndex::all(n + 1, 2).iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", "));

    for p in 0..=n + 1 {
        let a = WedgeEndo::random(n + 1, p, &mut rng, &EntryShape::default());
        let generic = ext.generic_q_trace(&a).unwrap();
        let tr = quantum_trace(&a).unwrap();
        let chain = &(-Scalar::q()).pow((p * p.saturating_sub(1)) as i32) * &partial_trace_chain(&a).unwrap();
        println!("p = {p}:");
        println!("  Tr_q          = {generic}");
        println!("  closed form   = {}", q_trace_closed(&a) == generic);
        println!("  partial chain = {}", chain == generic);
        println!("  Tr_q / tr_q   = {}", &generic / &tr);
    }

    let a = random_matrix(&mut rng, n + 1, &EntryShape { density: 1.0, ..EntryShape::default() });
    for p in 0..=n + 1 {
        println!(
            "Tr_q(A^(*{p})) = {}, Tr_q(A^{p}) = {}",
            q_trace_powers(&a, p, PowerMode::Convolution).unwrap(),
            q_trace_powers(&a, p, PowerMode::Composition).unwrap()
        );
    }
}
