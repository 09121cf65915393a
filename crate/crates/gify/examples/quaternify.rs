//! Inducing the sign action of {1, -1} up the quaternion group Q_8
//! reproduces the Hamilton quaternions: the 4x4 sign pattern, the
//! noncommutative convolution, and the Euclidean norm.

use gify::induced::{quaternification, InducedElement};
use gify::linalg::{eye, scalar};
use gify::matrix_form::{build_tables, matrix_form, template};
use gify::norm::level_norm;
use gify::space::scalar_basis;

fn element(vals: &[f64]) -> InducedElement {
    InducedElement {
        coeffs: vals.iter().map(|&v| eye(1) * scalar(v)).collect(),
    }
}

fn reals(phi: &InducedElement) -> Vec<f64> {
    phi.coeffs.iter().map(|c| c[(0, 0)].re).collect()
}

fn main() -> gify::Result<()> {
    let ctx = quaternification(scalar_basis(), 1)?;
    let tables = build_tables(&ctx)?;

    println!("quaternion block pattern:");
    print!(
        "{}",
        template(&ctx.group, &ctx.subgroup)?.render_ascii(&ctx.group, &ctx.subgroup)
    );

    let one = element(&[1.0, 0.0, 0.0, 0.0]);
    let i = element(&[0.0, 1.0, 0.0, 0.0]);
    let j = element(&[0.0, 0.0, 1.0, 0.0]);
    println!("\ni * j = {:?}", reals(&ctx.convolve(&i, &j)?));
    println!(
        "j * i = {:?} (noncommutative)",
        reals(&ctx.convolve(&j, &i)?)
    );
    println!("i * i = {:?}", reals(&ctx.convolve(&i, &i)?));
    println!("unit:   {:?}", reals(&ctx.convolve(&one, &i)?));

    let q = element(&[1.0, 1.0, 1.0, 1.0]);
    println!("\nmatrix form of 1 + i + j + k:");
    print!(
        "{}",
        gify::linalg::display(&matrix_form(&ctx, &tables, &q).matrix)
    );
    println!("norm: {}", level_norm(&ctx, &tables, &[vec![q.clone()]])?);
    println!("conjugate (involution): {:?}", reals(&ctx.involute(&q)?));
    Ok(())
}
