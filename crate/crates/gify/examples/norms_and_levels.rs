//! Norms at matrix levels and the sampled reasonableness harness: the
//! automorphism action preserves the induced norm at every level.

use gify::group::automorphisms_fixing;
use gify::induced::{complexification, quaternification, InducedElement, XMap};
use gify::linalg::{eye, scalar};
use gify::matrix_form::build_tables;
use gify::norm::{isometry_check, level_norm, reasonableness_check, sample_level, sample_rng};
use gify::space::{full_matrix_basis, scalar_basis};

fn element(vals: &[f64]) -> InducedElement {
    InducedElement {
        coeffs: vals.iter().map(|&v| eye(1) * scalar(v)).collect(),
    }
}

fn main() -> gify::Result<()> {
    let ctx = complexification(scalar_basis(), 1)?;
    let tables = build_tables(&ctx)?;

    let phi = element(&[3.0, 4.0]);
    println!(
        "level-1 norm of (3, 4): {}",
        level_norm(&ctx, &tables, &[vec![phi.clone()]])?
    );
    let diag = vec![vec![phi.clone(), ctx.zero()], vec![ctx.zero(), phi.clone()]];
    println!(
        "level-2 norm of diag((3,4), (3,4)): {}",
        level_norm(&ctx, &tables, &diag)?
    );
    let coupled = vec![
        vec![phi.clone(), element(&[1.0, -2.0])],
        vec![ctx.zero(), phi.clone()],
    ];
    println!(
        "level-2 norm with coupling: {}",
        level_norm(&ctx, &tables, &coupled)?
    );

    let mut rng = sample_rng(7, 0);
    let random = sample_level(&ctx, 3, &mut rng);
    println!(
        "a seeded random level-3 norm: {}",
        level_norm(&ctx, &tables, &random)?
    );

    // 2x2 matrix coefficients over the quaternions
    let ctx = quaternification(full_matrix_basis(2), 2)?;
    let tables = build_tables(&ctx)?;
    let gamma = automorphisms_fixing(&ctx.group, &ctx.subgroup)?;
    println!(
        "\nreasonableness of the quaternification of M_2, {} automorphisms:",
        gamma.len()
    );
    let report = reasonableness_check(&ctx, &tables, &gamma, 25, 2, 1e-9, 7)?;
    for d in &report.details {
        println!("  {}: {:.3e}", d.description, d.value);
    }
    println!("  pass: {}", report.pass);

    let twice = XMap::scaled(&ctx.space, 2.0);
    let (_, class) = isometry_check(&ctx, &tables, |p| ctx.induce_map(&twice, p), 10, 2, 1e-9, 7)?;
    println!("\nscaling by 2 classifies as: {}", class.as_str());
    Ok(())
}
