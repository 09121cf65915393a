//! Recognizing induced spaces: a modular matrix space with a balanced,
//! aligned automorphism action is the induction of its averaged fixed
//! space. Averaging the conjugation action over the inner automorphisms of
//! Q_8 recovers the embedded base space exactly.

use gify::group::inner_automorphisms;
use gify::induced::quaternification;
use gify::matrix_form::{build_tables, matrix_form};
use gify::space::full_matrix_basis;
use gify::verify::{canonical_gmodular, check_aligned, recover_base, span_distance};

fn main() -> gify::Result<()> {
    let ctx = quaternification(full_matrix_basis(2), 2)?;
    let tables = build_tables(&ctx)?;
    let inn = inner_automorphisms(&ctx.group);
    println!(
        "modular space of dimension {} inside matrices of size {}",
        ctx.dim(),
        ctx.m() * ctx.d()
    );

    let (y, action) = canonical_gmodular(&ctx, &tables, &inn)?;
    let aligned = check_aligned(&ctx.group, &ctx.subgroup, &y, &action, 5)?;
    println!("alignment clauses:");
    for d in &aligned.details {
        println!("  {} -> ok = {}", d.description, d.ok);
    }

    let outcome = recover_base(&ctx.group, &ctx.subgroup, &y, &action, 50, 5)?;
    println!("\nrecovery checks:");
    for d in &outcome.report.details {
        println!("  {}: value {:.3e} (ok = {})", d.description, d.value, d.ok);
    }
    println!("recovered base dimension: {}", outcome.base.len());

    let embedded: Vec<_> = ctx
        .space
        .basis
        .iter()
        .map(|b| matrix_form(&ctx, &tables, &ctx.embed(b).unwrap()).matrix)
        .collect();
    println!(
        "distance between the recovered and the embedded base spans: {:.3e}",
        span_distance(&outcome.base, &embedded)?
    );
    Ok(())
}
