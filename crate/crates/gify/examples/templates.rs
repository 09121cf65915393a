//! The structured block patterns for the standard small pairs, as ASCII
//! grids: letters name coefficients, a leading minus is the sign twist.

use gify::group::{make_cyclic, make_dihedral, make_quaternion, FiniteGroup, Subgroup};
use gify::matrix_form::template;

fn show(g: &FiniteGroup, h_elements: &[usize]) -> gify::Result<()> {
    let h = Subgroup::from_elements(g, h_elements)?;
    let t = template(g, &h)?;
    println!(
        "{} over a subgroup of order {} (m = {}):",
        g.name(),
        h.len(),
        t.m
    );
    print!("{}", t.render_ascii(g, &h));
    println!();
    Ok(())
}

fn main() -> gify::Result<()> {
    show(&make_cyclic(4)?, &[0, 2])?;
    show(&make_quaternion(), &[0, 1])?;
    show(&make_dihedral(4)?, &[0, 2])?;
    show(&make_cyclic(8)?, &[0, 4])?;
    show(&make_cyclic(6)?, &[0, 3])?;
    // a subgroup of order four: twists are labeled, not just signs
    show(&make_cyclic(8)?, &[0, 2, 4, 6])?;
    Ok(())
}
