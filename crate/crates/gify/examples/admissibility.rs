//! Classifying pairs (G, H): which central subgroups admit the unique
//! reasonable induced norm, and which automorphism families witness it.

use gify::group::{
    automorphisms_fixing, inner_automorphisms, is_admissible, is_balanced, make_cyclic,
    make_dihedral, make_quaternion, FiniteGroup, Subgroup,
};

fn classify(g: &FiniteGroup, h_elements: &[usize]) -> gify::Result<()> {
    let h = Subgroup::from_elements(g, h_elements)?;
    let fixing = automorphisms_fixing(g, &h)?;
    let verdict = is_admissible(g, &h, &fixing)?;
    print!(
        "({:>6}, H of order {}): admissible = {:<5}",
        g.name(),
        h.len(),
        verdict.admissible
    );
    if let Some((ge, he)) = verdict.witness {
        print!(
            "  witness: no automorphism displaces {} onto {}",
            g.label(ge),
            g.label(he)
        );
    }
    println!();
    Ok(())
}

fn main() -> gify::Result<()> {
    println!("powers of two over the sign subgroup:");
    for n in [2usize, 4, 8, 16] {
        let g = make_cyclic(n)?;
        let h: Vec<usize> = if n == 2 { vec![0, 1] } else { vec![0, n / 2] };
        classify(&g, &h)?;
    }

    println!("\nprime squares over their prime subgroup:");
    classify(&make_cyclic(9)?, &[0, 3, 6])?;
    classify(&make_cyclic(25)?, &[0, 5, 10, 15, 20])?;

    println!("\nthe six-element failures:");
    classify(&make_cyclic(6)?, &[0, 3])?;
    classify(&make_cyclic(6)?, &[0, 2, 4])?;

    println!("\nnonabelian pairs:");
    classify(&make_dihedral(4)?, &[0, 2])?;
    let q8 = make_quaternion();
    classify(&q8, &[0, 1])?;

    // the inner automorphisms alone already witness the quaternion pair,
    // and they form a balanced family
    let h = Subgroup::from_elements(&q8, &[0, 1])?;
    let inn = inner_automorphisms(&q8);
    println!(
        "\nQ8 via its {} inner automorphisms: admissible = {}, balanced = {}",
        inn.len(),
        is_admissible(&q8, &h, &inn)?.admissible,
        is_balanced(&q8, &h, &inn)?.balanced,
    );
    Ok(())
}
