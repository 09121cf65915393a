//! The convolution algebra over the commutant of the action, its operator
//! representation on the induced Hilbert space, and the homomorphism
//! identities the realization satisfies.

use gify::induced::{quaternification, InducedSpace};
use gify::linalg::{approx_eq, max_abs};
use gify::matrix_form::{build_tables, matrix_form};
use gify::norm::{sample_element, sample_rng};
use gify::space::{commutant_space, full_matrix_basis, scalar_basis};
use gify::verify::check_algebra;

fn main() -> gify::Result<()> {
    let ctx = quaternification(scalar_basis(), 1)?;
    let tables = build_tables(&ctx)?;

    let mut rng = sample_rng(11, 0);
    let a = sample_element(&ctx, &mut rng);
    let b = sample_element(&ctx, &mut rng);
    let product = ctx.convolve(&a, &b)?;

    let ma = matrix_form(&ctx, &tables, &a).matrix;
    let mb = matrix_form(&ctx, &tables, &b).matrix;
    let mab = matrix_form(&ctx, &tables, &product).matrix;
    println!(
        "matrix form is multiplicative: {}",
        approx_eq(&mab, &(&ma * &mb), 1e-9)
    );
    let ca = ctx.convolution_operator(&a)?;
    println!(
        "convolution operator agrees with the matrix form: {}",
        approx_eq(&ca, &ma, 1e-9)
    );
    let star = ctx.convolution_operator(&ctx.involute(&a)?)?;
    println!(
        "involution becomes the adjoint: {}",
        max_abs(&(star - ca.adjoint())) < 1e-9
    );

    // over matrix coefficients, the commutant of the sign action is the
    // full matrix algebra, and the same identities hold there
    let base = quaternification(full_matrix_basis(2), 2)?;
    let comm = commutant_space(&base.space)?;
    println!(
        "\ncommutant of the sign action on M_2 has dimension {}",
        comm.dim()
    );
    let cctx = InducedSpace::new(base.group.clone(), base.subgroup.clone(), comm)?;
    let report = check_algebra(&cctx, 50, 1e-9, 11)?;
    println!("algebra suite over the commutant:");
    for d in &report.details {
        println!("  {}: value {:.3e} (ok = {})", d.description, d.value, d.ok);
    }
    println!("  pass: {}", report.pass);
    Ok(())
}
