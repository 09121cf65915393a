//! Bulk admissibility classification over the built-in group families.

use crate::group::{
    automorphisms, center, direct_product, generated_subgroup, inner_automorphisms, is_admissible,
    is_balanced, make_cyclic, make_dihedral, make_quaternion, FiniteGroup, Subgroup,
};
use crate::report::CatalogRow;
use crate::{Error, Result};

/// Cyclic groups, dihedral groups, the quaternion group, and products of two
/// cyclic groups, up to the given order.
pub fn builtin_families(max_order: usize) -> Vec<FiniteGroup> {
    let mut out = Vec::new();
    for n in 2..=max_order {
        out.push(make_cyclic(n).expect("positive order"));
    }
    for k in 2..=max_order / 2 {
        out.push(make_dihedral(k).expect("k >= 2"));
    }
    if max_order >= 8 {
        out.push(make_quaternion());
    }
    for a in 2..=max_order / 2 {
        for b in a..=max_order / a {
            if a * b <= max_order {
                out.push(direct_product(
                    &make_cyclic(a).unwrap(),
                    &make_cyclic(b).unwrap(),
                ));
            }
        }
    }
    out
}

/// All subgroups of an abelian subgroup, by saturating pairwise joins of
/// cyclic subgroups.
fn subgroups_of(g: &FiniteGroup, ambient: &Subgroup) -> Vec<Vec<usize>> {
    let mut found: Vec<Vec<usize>> = vec![vec![0]];
    for &z in ambient.elements() {
        let cyc = generated_subgroup(g, &[z]);
        if !found.contains(&cyc) {
            found.push(cyc);
        }
    }
    loop {
        let mut grew = false;
        let snapshot = found.clone();
        for a in &snapshot {
            for b in &snapshot {
                let gens: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
                let join = generated_subgroup(g, &gens);
                if join.iter().all(|e| ambient.contains(*e)) && !found.contains(&join) {
                    found.push(join);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    found.sort();
    found
}

/// One row per (group, nontrivial central subgroup) pair.
pub fn catalog(max_order: usize) -> Result<Vec<CatalogRow>> {
    if max_order > 32 {
        return Err(Error::Precondition(format!(
            "catalog order cap is 32, got {max_order}"
        )));
    }
    let mut rows = Vec::new();
    for g in builtin_families(max_order) {
        let z = center(&g);
        let auts = automorphisms(&g)?;
        let inn = inner_automorphisms(&g);
        for elements in subgroups_of(&g, &z) {
            if elements.len() <= 1 {
                continue;
            }
            let h = Subgroup::from_elements(&g, &elements)?;
            let fixing: Vec<_> = auts
                .iter()
                .filter(|a| a.fixes_pointwise(&h))
                .cloned()
                .collect();
            let admissible_aut = is_admissible(&g, &h, &fixing)?.admissible;
            let admissible_inn = is_admissible(&g, &h, &inn)?.admissible;
            let balanced_inn = is_balanced(&g, &h, &inn)?.balanced;
            rows.push(CatalogRow {
                group_name: g.name().to_string(),
                order: g.order(),
                subgroup_elements: elements,
                is_central: true,
                admissible_aut,
                admissible_inn,
                balanced_inn,
                aut_order: auts.len(),
                inn_order: inn.len(),
            });
        }
    }
    rows.sort_by(|a, b| {
        (a.order, &a.group_name, &a.subgroup_elements).cmp(&(
            b.order,
            &b.group_name,
            &b.subgroup_elements,
        ))
    });
    Ok(rows)
}

/// CSV rendering with a header row; element lists are quoted.
pub fn to_csv(rows: &[CatalogRow]) -> String {
    let mut out = String::from(
        "groupName,order,subgroupElements,isCentral,admissibleAut,admissibleInn,balancedInn,autOrder,innOrder\n",
    );
    for r in rows {
        let elems = r
            .subgroup_elements
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&format!(
            "{},{},\"{}\",{},{},{},{},{},{}\n",
            r.group_name,
            r.order,
            elems,
            r.is_central,
            r.admissible_aut,
            r.admissible_inn,
            r.balanced_inn,
            r.aut_order,
            r.inn_order
        ));
    }
    out
}
