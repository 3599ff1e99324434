//! Exact arithmetic in Q(q): canonical forms, q-integers and evaluation.

use qtrace::scalar::{q_binomial, q_factorial, q_int, Rational, Scalar};

fn main() {
    let nu = Scalar::q_pow(-2);
    for n in 0..=4 {
        println!("({n})_nu   = {}", q_int(n, &nu));
    }
    println!("(3)_nu!  = {}", q_factorial(3, &nu));
    println!("[4 2]_nu = {}", q_binomial(4, 2, &nu));

    let x: Scalar = "(q^2 - 1) / (q - 1)".parse().unwrap();
    println!("(q^2 - 1)/(q - 1) = {x}");
    let y: Scalar = "1 / (1 + q^-2)".parse().unwrap();
    println!("1/(1 + q^-2) = {y}, times (1 + q^-2) = {}", &y * &"1 + q^-2".parse().unwrap());

    let q0 = Rational::from_integer(2.into());
    println!("[4 2]_nu at q = 2: {}", q_binomial(4, 2, &nu).eval_at(&q0).unwrap());
}
