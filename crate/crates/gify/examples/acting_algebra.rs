//! The algebra that acts on an induced space is itself an induced space:
//! the span of the action unitaries, induced up the group. Its size depends
//! on how the subgroup is represented, not just on the subgroup.

use nalgebra::Complex;

use gify::group::{make_cyclic, Subgroup};
use gify::induced::{quaternification, InducedSpace};
use gify::matrix_form::build_tables;
use gify::space::{
    diagonal_matrix_basis, make_diagonal_action, make_root_of_unity_action, scalar_basis, Field,
};
use gify::verify::{acting_algebra, check_tensor_identity};

fn main() -> gify::Result<()> {
    // sign action: the acting algebra is one-dimensional, and the induced
    // algebra is the scalar block pattern (the quaternions, for Q_8)
    let ctx = quaternification(scalar_basis(), 1)?;
    let tables = build_tables(&ctx)?;
    let alg = acting_algebra(&ctx, &tables, 1)?;
    println!(
        "sign action on the reals: acting algebra dim {}, induced dim {}",
        alg.dim_algebra, alg.dim_induced_algebra
    );
    let tensor = check_tensor_identity(&ctx, &tables, 50, 1e-9, 1)?;
    println!(
        "norm agrees with the scalar-pattern tensor arrangement: {}",
        tensor.pass
    );

    // two faithful ergodic actions of the same subgroup with different
    // acting algebras
    let g = make_cyclic(25)?;
    let h = Subgroup::from_elements(&g, &[0, 5, 10, 15, 20])?;

    let scalar_action = make_root_of_unity_action(5, Field::Complex, 1, scalar_basis())?;
    let ctx = InducedSpace::new(g.clone(), h.clone(), scalar_action)?;
    let tables = build_tables(&ctx)?;
    let alg = acting_algebra(&ctx, &tables, 1)?;
    println!(
        "\nfifth roots of unity on the complex scalars: dims ({}, {})",
        alg.dim_algebra, alg.dim_induced_algebra
    );

    let z = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI / 5.0);
    let vandermonde = make_diagonal_action(
        make_cyclic(5)?,
        &[z, z.powu(2), z.powu(3), z.powu(4)],
        Field::Complex,
        4,
        diagonal_matrix_basis(4),
    )?;
    let ctx = InducedSpace::new(g, h, vandermonde)?;
    let tables = build_tables(&ctx)?;
    let alg = acting_algebra(&ctx, &tables, 1)?;
    println!(
        "the same group acting diagonally on four-dimensional diagonals: dims ({}, {})",
        alg.dim_algebra, alg.dim_induced_algebra
    );
    println!("(the distinct powers of the generator span a full Vandermonde system)");
    Ok(())
}
