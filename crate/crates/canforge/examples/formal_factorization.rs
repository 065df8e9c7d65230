//! Completion-sensitive factorization: the same polynomial refuses to split
//! over the rationals but splits after adjoining i, certified by exact
//! truncated multiplication.
//!
//! Run: cargo run --example formal_factorization

use canforge::factor::{formal_factor_quadratic, verify_factorization, QuadraticSplit};
use canforge::field::{rat_int, Field};
use canforge::parse::parse_poly;
use canforge::poly::Vars;

fn main() {
    let text = "x^2 + x^3 + y^2";
    for field in [
        Field::rationals(),
        Field::extension("i", vec![rat_int(1), rat_int(0)]).unwrap(),
    ] {
        let f = parse_poly(text, &Vars::xy(), &field).unwrap();
        println!("f = {text} over {}:", field.descriptor());
        match formal_factor_quadratic(&f, 8, &field).unwrap() {
            QuadraticSplit::Split(fac) => {
                println!("  splits modulo degrees above {}:", fac.order);
                for g in &fac.factors {
                    println!("    {}", g.to_string_grlex());
                }
                println!("  product re-verified: {}", verify_factorization(&f, &fac));
            }
            QuadraticSplit::IrreducibleOverField { obstruction } => {
                println!("  irreducible over this field; obstruction: {obstruction:?}");
            }
            QuadraticSplit::Unsupported { y_degree } => {
                println!("  unsupported regularity degree {y_degree}");
            }
        }
        println!();
    }
}
