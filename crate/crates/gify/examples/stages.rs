//! Induction in stages: inducing from Z_2 straight up Z_8 gives the same
//! norms as first inducing to Z_4 and then inducing the result to Z_8.

use gify::group::{make_cyclic, Subgroup};
use gify::induced::InducedSpace;
use gify::linalg::op_norm;
use gify::matrix_form::{build_tables, matrix_form};
use gify::norm::{sample_element, sample_rng};
use gify::space::{make_sign_action, scalar_basis, Field};
use gify::verify::{check_stages, stage_contexts};

fn main() -> gify::Result<()> {
    let g = make_cyclic(8)?;
    let h1 = Subgroup::from_elements(&g, &[0, 4])?;
    let h2 = Subgroup::from_elements(&g, &[0, 2, 4, 6])?;
    let space = make_sign_action(Field::Real, 1, scalar_basis())?;

    let direct = InducedSpace::new(g.clone(), h1.clone(), space.clone())?;
    let direct_tables = build_tables(&direct)?;
    let stage = stage_contexts(&g, &h1, &h2, &space)?;
    println!(
        "direct induction: {} cosets of size-1 blocks; staged: {} cosets of size-{} blocks",
        direct.m(),
        stage.outer.m(),
        stage.outer.d(),
    );

    let mut rng = sample_rng(3, 0);
    let phi = sample_element(&direct, &mut rng);
    let staged = stage.matched_element(&direct, &phi);
    let n_direct = op_norm(&matrix_form(&direct, &direct_tables, &phi).matrix)?;
    let n_staged = op_norm(&matrix_form(&stage.outer, &stage.outer_tables, &staged).matrix)?;
    println!("one sampled element: direct norm {n_direct}, staged norm {n_staged}");

    let report = check_stages(&g, &h1, &h2, &space, 50, 1e-9, 3)?;
    println!("\nfifty seeded samples at levels 1..2:");
    for d in &report.details {
        println!("  {}: {:.3e}", d.description, d.value);
    }
    println!("  pass: {}", report.pass);
    Ok(())
}
