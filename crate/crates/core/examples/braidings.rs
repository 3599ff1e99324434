//! Builtin braidings, their axioms, and the symmetrizers they produce.

use qtrace::braid::{builtin_c, builtin_c_dual, symmetrizers_up_to, Builtin};
use qtrace::scalar::q_factorial;

fn main() {
    let n = 2;
    for (label, b) in [("c", builtin_c(n)), ("c^dual", builtin_c_dual(n))] {
        let (l1, l2) = b.eigenvalues();
        println!("{label}: dim {}, roots {l1} and {l2}, axioms hold: {}", b.dim(), b.check_axioms().all_hold());
        println!("  Hecke form: {:?}", b.require_hecke().map(|nu| nu.to_string()));
    }

    // The generic machinery wants roots (-1, nu); the sl-exterior builtin is -c.
    let b = Builtin::SlExterior.build(n);
    let nu = b.require_hecke().unwrap();
    println!("sl-exterior: nu = {nu}");
    let syms = symmetrizers_up_to(&b, 4, 7).unwrap();
    for (p, a) in syms.iter().enumerate() {
        let ok = a.compose(a) == a.scale(&q_factorial(p as u32, &nu));
        println!("  A^({p}) on V^(x{p}) (V of dim {}): (A^({p}))^2 = ({p})_nu! A^({p}): {ok}", a.dim());
    }
}
