//! The smallest induction: Z_2 acting by sign on the reals, induced up to
//! Z_4. The result is the complex numbers with their operator norm, the
//! convolution is complex multiplication, and the nontrivial automorphism
//! is conjugation.

use gify::group::{automorphisms_fixing, make_cyclic, Subgroup};
use gify::induced::{InducedElement, InducedSpace};
use gify::linalg::eye;
use gify::linalg::scalar;
use gify::matrix_form::{build_tables, matrix_form, template};
use gify::norm::level_norm;
use gify::space::{make_sign_action, scalar_basis, Field};

fn element(vals: &[f64]) -> InducedElement {
    InducedElement {
        coeffs: vals.iter().map(|&v| eye(1) * scalar(v)).collect(),
    }
}

fn reals(phi: &InducedElement) -> Vec<f64> {
    phi.coeffs.iter().map(|c| c[(0, 0)].re).collect()
}

fn main() -> gify::Result<()> {
    let g = make_cyclic(4)?;
    let h = Subgroup::from_elements(&g, &[0, 2])?;
    let space = make_sign_action(Field::Real, 1, scalar_basis())?;
    let ctx = InducedSpace::new(g, h, space)?;
    let tables = build_tables(&ctx)?;

    println!("block pattern of the induced space:");
    print!(
        "{}",
        template(&ctx.group, &ctx.subgroup)?.render_ascii(&ctx.group, &ctx.subgroup)
    );

    let phi = element(&[3.0, 4.0]);
    println!("\ncoefficients (3, 4) realize as:");
    print!(
        "{}",
        gify::linalg::display(&matrix_form(&ctx, &tables, &phi).matrix)
    );
    println!("norm: {}", level_norm(&ctx, &tables, &[vec![phi.clone()]])?);

    let psi = element(&[1.0, 2.0]);
    let product = ctx.convolve(&phi, &psi)?;
    println!("(3 + 4i) * (1 + 2i) via convolution: {:?}", reals(&product));

    let gamma = automorphisms_fixing(&ctx.group, &ctx.subgroup)?;
    let conj = gamma
        .iter()
        .find(|s| !s.is_identity())
        .expect("conjugation");
    println!(
        "conjugation of (3, 4): {:?}",
        reals(&ctx.apply_aut(conj, &phi)?)
    );
    println!("involution of (3, 4):  {:?}", reals(&ctx.involute(&phi)?));
    Ok(())
}
