//! The structured matrix realization of an induced space inside `M_m(X)`.
//!
//! With coset representatives `g_1 = e, g_2, ..., g_m`, the tables `r`, `h`
//! solve `g_i g_j^{-1} = g_{r[i][j]} h[i][j]`, and an induced element with
//! coefficients `(x_1, ..., x_m)` is realized as the block matrix whose
//! `(i, j)` block is `theta(h[i][j])^{-1} x_{r[i][j]}`. The first block
//! column reads the coefficients back off. The block unitaries `V_k`
//! implement left translation by `g_k`.

use serde::Serialize;

use crate::group::{coset_system, Automorphism, FiniteGroup, Subgroup};
use crate::induced::{InducedElement, InducedSpace, XMap};
use crate::linalg::{self, approx_eq, block_of, eye, max_abs, scalar, Mat};
use crate::{Error, Result, DEFAULT_TOL};

/// Coset multiplication tables and the block unitaries they induce.
#[derive(Debug, Clone)]
pub struct CosetTables {
    pub m: usize,
    /// r[i][j]: coset index of g_i g_j^{-1}.
    pub r: Vec<Vec<usize>>,
    /// h[i][j]: subgroup index with g_i g_j^{-1} = g_{r[i][j]} h[i][j].
    pub h: Vec<Vec<usize>>,
    /// V_k = [ delta(r[i][j] = k) theta(h[i][j])^{-1} ], unitary.
    pub vk: Vec<Mat>,
    /// Side length of each block.
    pub block_dim: usize,
}

/// An element realized as a block matrix, with its coefficients attached.
#[derive(Debug, Clone)]
pub struct MatrixFormElement {
    pub matrix: Mat,
    pub coeffs: Vec<Mat>,
}

/// Builds the coset tables for a context; the subgroup must be central.
pub fn build_tables(ctx: &InducedSpace) -> Result<CosetTables> {
    if let Some((elem, with)) = ctx.subgroup.centrality_violation(&ctx.group) {
        return Err(Error::NotCentral { elem, with });
    }
    let m = ctx.m();
    let d = ctx.d();
    let mut r = vec![vec![0; m]; m];
    let mut h = vec![vec![0; m]; m];
    for i in 0..m {
        for j in 0..m {
            let gij = ctx
                .group
                .mul(ctx.cosets.reps[i], ctx.group.inv(ctx.cosets.reps[j]));
            let (k, hi) = ctx.cosets.coset_of[gij];
            r[i][j] = k;
            h[i][j] = hi;
        }
    }
    let mut vk = Vec::with_capacity(m);
    for k in 0..m {
        let mut blocks = vec![vec![linalg::zeros(d, d); m]; m];
        for i in 0..m {
            for j in 0..m {
                if r[i][j] == k {
                    blocks[i][j] = ctx.space.theta_inv(h[i][j]).clone();
                }
            }
        }
        vk.push(linalg::block_matrix(&blocks));
    }
    let tables = CosetTables {
        m,
        r,
        h,
        vk,
        block_dim: d,
    };
    validate_tables(ctx, &tables)?;
    Ok(tables)
}

fn validate_tables(ctx: &InducedSpace, t: &CosetTables) -> Result<()> {
    let m = t.m;
    for i in 0..m {
        // r[i][i] is the identity coset, h[i][i] and h[i][0] are trivial,
        // and the first column reads off the coset index
        if t.r[i][i] != 0 || t.h[i][i] != 0 || t.h[i][0] != 0 || t.r[i][0] != i {
            return Err(Error::InvalidGroup(format!(
                "coset table conventions fail at row {i}"
            )));
        }
        let mut row = t.r[i].clone();
        row.sort_unstable();
        let mut col: Vec<usize> = (0..m).map(|j| t.r[j][i]).collect();
        col.sort_unstable();
        if row != (0..m).collect::<Vec<_>>() || col != (0..m).collect::<Vec<_>>() {
            return Err(Error::InvalidGroup(format!(
                "coset table row or column {i} is not a permutation"
            )));
        }
    }
    for i in 0..m {
        for j in 0..m {
            let lhs = ctx
                .group
                .mul(ctx.cosets.reps[i], ctx.group.inv(ctx.cosets.reps[j]));
            let rhs = ctx.group.mul(
                ctx.cosets.reps[t.r[i][j]],
                ctx.subgroup.elements()[t.h[i][j]],
            );
            if lhs != rhs {
                return Err(Error::InvalidGroup(format!(
                    "coset reconstruction fails at ({i}, {j})"
                )));
            }
        }
    }
    let n = m * t.block_dim;
    for (k, v) in t.vk.iter().enumerate() {
        if !approx_eq(&(v.adjoint() * v), &eye(n), DEFAULT_TOL) {
            return Err(Error::InvalidSpace(format!(
                "block matrix {k} is not unitary"
            )));
        }
    }
    Ok(())
}

/// Realizes an induced element as its block matrix.
pub fn matrix_form(
    ctx: &InducedSpace,
    tables: &CosetTables,
    phi: &InducedElement,
) -> MatrixFormElement {
    let (m, d) = (tables.m, tables.block_dim);
    let _ = d;
    let blocks: Vec<Vec<Mat>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| ctx.space.theta_inv(tables.h[i][j]) * &phi.coeffs[tables.r[i][j]])
                .collect()
        })
        .collect();
    MatrixFormElement {
        matrix: linalg::block_matrix(&blocks),
        coeffs: phi.coeffs.clone(),
    }
}

/// Reads an induced element back from a block matrix, rejecting matrices
/// outside the structured subspace.
pub fn inverse_matrix_form(
    ctx: &InducedSpace,
    tables: &CosetTables,
    matrix: &Mat,
) -> Result<InducedElement> {
    let (m, d) = (tables.m, tables.block_dim);
    if matrix.shape() != (m * d, m * d) {
        return Err(Error::Dimension(format!(
            "expected {0}x{0}, got {1}x{2}",
            m * d,
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    // the first block column is untwisted: block (i, 0) = x_i
    let coeffs: Vec<Mat> = (0..m).map(|i| block_of(matrix, i, 0, d)).collect();
    for (i, x) in coeffs.iter().enumerate() {
        let r = ctx.space.membership(x)?;
        if r > DEFAULT_TOL {
            return Err(Error::Precondition(format!(
                "block ({i}, 0) is not in the space (residual {r:.3e})"
            )));
        }
    }
    let phi = InducedElement { coeffs };
    let rebuilt = matrix_form(ctx, tables, &phi);
    let residual = max_abs(&(&rebuilt.matrix - matrix));
    if residual > DEFAULT_TOL {
        return Err(Error::Precondition(format!(
            "matrix is not in the structured subspace (residual {residual:.3e})"
        )));
    }
    Ok(phi)
}

/// The averaging projection of `M_m(X)` onto the structured subspace:
/// `E(a) = (1/m) sum_k Phi(V_k^* a) V_k` with `Phi` the normalized block
/// trace placed on the diagonal.
pub fn expectation(ctx: &InducedSpace, tables: &CosetTables, a: &Mat) -> Result<MatrixFormElement> {
    let (m, d) = (tables.m, tables.block_dim);
    if a.shape() != (m * d, m * d) {
        return Err(Error::Dimension(format!(
            "expected {0}x{0}, got {1}x{2}",
            m * d,
            a.nrows(),
            a.ncols()
        )));
    }
    for i in 0..m {
        for j in 0..m {
            let r = ctx.space.membership(&block_of(a, i, j, d))?;
            if r > DEFAULT_TOL {
                return Err(Error::NotMember { residual: r });
            }
        }
    }
    let block_average = |x: &Mat| -> Mat {
        let mut avg = linalg::zeros(d, d);
        for k in 0..m {
            avg += block_of(x, k, k, d);
        }
        avg /= scalar(m as f64);
        let mut out = linalg::zeros(m * d, m * d);
        for k in 0..m {
            out.view_mut((k * d, k * d), (d, d)).copy_from(&avg);
        }
        out
    };
    // the 1/m normalization lives inside the block average; the outer sum
    // must stay unnormalized for E to fix the structured subspace
    let mut e = linalg::zeros(m * d, m * d);
    for vk in &tables.vk {
        e += block_average(&(vk.adjoint() * a)) * vk;
    }
    let phi = inverse_matrix_form(ctx, tables, &e)?;
    Ok(MatrixFormElement {
        matrix: e,
        coeffs: phi.coeffs,
    })
}

/// Applies an automorphism to a matrix-form element through the coefficient
/// realization.
pub fn aut_on_matrix_form(
    ctx: &InducedSpace,
    tables: &CosetTables,
    sigma: &Automorphism,
    element: &MatrixFormElement,
) -> Result<MatrixFormElement> {
    let phi = inverse_matrix_form(ctx, tables, &element.matrix)?;
    let moved = ctx.apply_aut(sigma, &phi)?;
    Ok(matrix_form(ctx, tables, &moved))
}

/// Applies a lifted linear map blockwise through the coefficient realization.
pub fn map_on_matrix_form(
    ctx: &InducedSpace,
    tables: &CosetTables,
    t: &XMap,
    element: &MatrixFormElement,
) -> Result<MatrixFormElement> {
    let phi = inverse_matrix_form(ctx, tables, &element.matrix)?;
    let moved = ctx.induce_map(t, &phi)?;
    Ok(matrix_form(ctx, tables, &moved))
}

/// The symbolic block pattern of a pair: entry `(i, j)` names the
/// coefficient index `r[i][j]` and the twisting subgroup element `h[i][j]`.
#[derive(Debug, Clone, Serialize)]
pub struct Template {
    pub m: usize,
    pub grid: Vec<Vec<TemplateEntry>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TemplateEntry {
    /// 1-based coefficient index.
    pub coef: usize,
    /// Label of the twisting subgroup element.
    pub twist: String,
}

/// Builds the symbolic pattern for a central pair; no action is needed.
pub fn template(group: &FiniteGroup, subgroup: &Subgroup) -> Result<Template> {
    if let Some((elem, with)) = subgroup.centrality_violation(group) {
        return Err(Error::NotCentral { elem, with });
    }
    let cosets = coset_system(group, subgroup)?;
    let m = cosets.m();
    let mut grid = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(m);
        for j in 0..m {
            let gij = group.mul(cosets.reps[i], group.inv(cosets.reps[j]));
            let (k, hi) = cosets.coset_of[gij];
            row.push(TemplateEntry {
                coef: k + 1,
                twist: group.label(subgroup.elements()[hi]).to_string(),
            });
        }
        grid.push(row);
    }
    Ok(Template { m, grid })
}

fn coefficient_name(k: usize, m: usize) -> String {
    if m <= 26 {
        char::from(b'a' + (k - 1) as u8).to_string()
    } else {
        format!("x{k}")
    }
}

impl Template {
    /// One row per line, entries comma-separated. An order-2 twist renders
    /// as a leading minus sign; other twists as a label prefix.
    pub fn render_ascii(&self, group: &FiniteGroup, subgroup: &Subgroup) -> String {
        let two = subgroup.len() == 2;
        let mut out = String::new();
        for row in &self.grid {
            let cells: Vec<String> = row
                .iter()
                .map(|e| {
                    let name = coefficient_name(e.coef, self.m);
                    let trivial = e.twist == group.label(0);
                    if trivial {
                        name
                    } else if two {
                        format!("-{name}")
                    } else {
                        format!("{}·{name}", e.twist)
                    }
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{inner_automorphisms, make_cyclic, make_dihedral, make_quaternion};
    use crate::induced::{complexification, quaternification};
    use crate::linalg::{op_norm, rand_mat, stack_columns, vec_of};
    use crate::space::{full_matrix_basis, make_sign_action, scalar_basis, Field};
    use crate::NULLSPACE_RTOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx_z4() -> InducedSpace {
        complexification(scalar_basis(), 1).unwrap()
    }

    fn ctx_q8() -> InducedSpace {
        quaternification(scalar_basis(), 1).unwrap()
    }

    fn ctx_z6() -> InducedSpace {
        let g = make_cyclic(6).unwrap();
        let h = Subgroup::from_elements(&g, &[0, 3]).unwrap();
        let space = make_sign_action(Field::Real, 1, scalar_basis()).unwrap();
        InducedSpace::new(g, h, space).unwrap()
    }

    fn from_reals(vals: &[f64]) -> InducedElement {
        InducedElement {
            coeffs: vals.iter().map(|&v| eye(1) * scalar(v)).collect(),
        }
    }

    #[test]
    fn complexification_tables() {
        let ctx = ctx_z4();
        let t = build_tables(&ctx).unwrap();
        assert_eq!(t.m, 2);
        let expected_v2 =
            Mat::from_row_slice(2, 2, &[scalar(0.0), scalar(-1.0), scalar(1.0), scalar(0.0)]);
        assert!(approx_eq(&t.vk[1], &expected_v2, 1e-12));
    }

    #[test]
    fn whole_group_gives_a_single_identity_block() {
        let g = make_cyclic(2).unwrap();
        let h = Subgroup::whole(&g);
        let space = make_sign_action(Field::Real, 1, scalar_basis()).unwrap();
        let ctx = InducedSpace::new(g, h, space).unwrap();
        let t = build_tables(&ctx).unwrap();
        assert_eq!(t.m, 1);
        assert!(approx_eq(&t.vk[0], &eye(1), 1e-12));
    }

    #[test]
    fn non_central_subgroup_is_rejected() {
        // Z_2 generated by the reflection s is not central in D_4
        let d4 = make_dihedral(4).unwrap();
        let h = Subgroup::from_elements(&d4, &[0, 4]).unwrap();
        let space = make_sign_action(Field::Real, 1, scalar_basis()).unwrap();
        let ctx = InducedSpace::new(d4, h, space).unwrap();
        assert!(matches!(build_tables(&ctx), Err(Error::NotCentral { .. })));
    }

    #[test]
    fn matrix_form_matches_the_complexification_pattern() {
        let ctx = ctx_z4();
        let t = build_tables(&ctx).unwrap();
        let phi = from_reals(&[3.0, 4.0]);
        let m = matrix_form(&ctx, &t, &phi).matrix;
        let expected =
            Mat::from_row_slice(2, 2, &[scalar(3.0), scalar(-4.0), scalar(4.0), scalar(3.0)]);
        assert!(approx_eq(&m, &expected, 1e-12));
    }

    #[test]
    fn matrix_form_matches_the_quaternion_pattern() {
        let ctx = ctx_q8();
        let t = build_tables(&ctx).unwrap();
        let m = matrix_form(&ctx, &t, &from_reals(&[1.0, 2.0, 3.0, 4.0])).matrix;
        #[rustfmt::skip]
        let expected = Mat::from_row_slice(4, 4, &[
            scalar(1.0), scalar(-2.0), scalar(-3.0), scalar(-4.0),
            scalar(2.0), scalar(1.0), scalar(-4.0), scalar(3.0),
            scalar(3.0), scalar(4.0), scalar(1.0), scalar(-2.0),
            scalar(4.0), scalar(-3.0), scalar(2.0), scalar(1.0),
        ]);
        assert!(approx_eq(&m, &expected, 1e-12));
    }

    #[test]
    fn matrix_form_matches_the_z6_pattern() {
        let ctx = ctx_z6();
        let t = build_tables(&ctx).unwrap();
        let m = matrix_form(&ctx, &t, &from_reals(&[1.0, 2.0, 3.0])).matrix;
        #[rustfmt::skip]
        let expected = Mat::from_row_slice(3, 3, &[
            scalar(1.0), scalar(-3.0), scalar(-2.0),
            scalar(2.0), scalar(1.0), scalar(-3.0),
            scalar(3.0), scalar(2.0), scalar(1.0),
        ]);
        assert!(approx_eq(&m, &expected, 1e-12));
    }

    #[test]
    fn inverse_matrix_form_round_trips_and_rejects() {
        let ctx = ctx_q8();
        let t = build_tables(&ctx).unwrap();
        let phi = from_reals(&[1.0, -0.5, 2.0, 0.25]);
        let mf = matrix_form(&ctx, &t, &phi);
        let back = inverse_matrix_form(&ctx, &t, &mf.matrix).unwrap();
        for k in 0..4 {
            assert!(approx_eq(&back.coeffs[k], &phi.coeffs[k], 1e-12));
        }
        // identity matrix corresponds to the embedded identity
        let id = inverse_matrix_form(&ctx, &t, &eye(4)).unwrap();
        assert!(approx_eq(&id.coeffs[0], &eye(1), 1e-12));
        for k in 1..4 {
            assert!(max_abs(&id.coeffs[k]) < 1e-12);
        }
        // perturbing one block leaves the structured subspace
        let mut bad = mf.matrix.clone();
        bad[(0, 1)] += scalar(0.5);
        assert!(inverse_matrix_form(&ctx, &t, &bad).is_err());
    }

    #[test]
    fn translation_unitaries_match_the_block_unitaries() {
        for ctx in [ctx_z4(), ctx_q8(), ctx_z6()] {
            let t = build_tables(&ctx).unwrap();
            for (k, &rep) in ctx.cosets.reps.iter().enumerate() {
                assert!(approx_eq(&ctx.translation_unitary(rep), &t.vk[k], 1e-12));
            }
            // subgroup elements act block-diagonally
            for (hi, &h) in ctx.subgroup.elements().iter().enumerate() {
                let expected = linalg::kron(&eye(t.m), &ctx.space.theta[hi]);
                assert!(approx_eq(&ctx.translation_unitary(h), &expected, 1e-12));
            }
        }
    }

    #[test]
    fn translation_matrices_implement_left_translation() {
        let ctx = ctx_q8();
        let t = build_tables(&ctx).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let phi = InducedElement {
            coeffs: (0..4).map(|_| rand_mat(&mut rng, 1, 1, false)).collect(),
        };
        let m = matrix_form(&ctx, &t, &phi).matrix;
        for g in 0..8 {
            let lhs = matrix_form(&ctx, &t, &ctx.left_translate(g, &phi)).matrix;
            let rhs = ctx.translation_unitary(g) * &m;
            assert!(approx_eq(&lhs, &rhs, 1e-12));
        }
    }

    #[test]
    fn structured_subspace_is_a_direct_sum_over_block_columns() {
        let d = 2;
        let ctx = quaternification(full_matrix_basis(d), d).unwrap();
        let t = build_tables(&ctx).unwrap();
        // the map coefficients -> matrix form is injective with the expected rank
        let mut cols = Vec::new();
        for k in 0..ctx.m() {
            for b in 0..ctx.space.dim() {
                let e = ctx.basis_element(k, b);
                cols.push(vec_of(&matrix_form(&ctx, &t, &e).matrix));
            }
        }
        let stacked = stack_columns(&cols);
        assert_eq!(linalg::rank(&stacked, NULLSPACE_RTOL), ctx.dim());
    }

    #[test]
    fn matrix_form_is_multiplicative_and_star_preserving() {
        let d = 2;
        let ctx = quaternification(full_matrix_basis(d), d).unwrap();
        let t = build_tables(&ctx).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let rand_el = |rng: &mut ChaCha8Rng| InducedElement {
            coeffs: (0..4).map(|_| rand_mat(rng, d, d, false)).collect(),
        };
        let (a, b) = (rand_el(&mut rng), rand_el(&mut rng));
        let lhs = matrix_form(&ctx, &t, &ctx.convolve(&a, &b).unwrap()).matrix;
        let rhs = matrix_form(&ctx, &t, &a).matrix * matrix_form(&ctx, &t, &b).matrix;
        assert!(approx_eq(&lhs, &rhs, 1e-9));
        let lhs = matrix_form(&ctx, &t, &ctx.involute(&a).unwrap()).matrix;
        let rhs = matrix_form(&ctx, &t, &a).matrix.adjoint();
        assert!(approx_eq(&lhs, &rhs, 1e-9));
    }

    #[test]
    fn lifted_maps_act_blockwise() {
        let d = 2;
        let ctx = complexification(full_matrix_basis(d), d).unwrap();
        let t = build_tables(&ctx).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let phi = InducedElement {
            coeffs: (0..2).map(|_| rand_mat(&mut rng, d, d, false)).collect(),
        };
        let tmap = XMap::scaled(&ctx.space, -1.5);
        let mf = matrix_form(&ctx, &t, &phi);
        let lhs = map_on_matrix_form(&ctx, &t, &tmap, &mf).unwrap().matrix;
        // blockwise application of T to every block of the matrix form
        let rhs = &mf.matrix * scalar(-1.5);
        assert!(approx_eq(&lhs, &rhs, 1e-9));

        // conjugation by a rotation is an intertwiner of the sign action;
        // its lift acts blockwise, i.e. by conjugation with I_m kron u
        let angle = 0.7f64;
        let u = Mat::from_row_slice(
            2,
            2,
            &[
                scalar(angle.cos()),
                scalar(-angle.sin()),
                scalar(angle.sin()),
                scalar(angle.cos()),
            ],
        );
        let images = ctx
            .space
            .basis
            .iter()
            .map(|b| &u * b * u.transpose())
            .collect();
        let conj = XMap::new(&ctx.space, images).unwrap();
        conj.check_intertwiner(&ctx.space).unwrap();
        let lhs = map_on_matrix_form(&ctx, &t, &conj, &mf).unwrap().matrix;
        let big_u = linalg::kron(&eye(2), &u);
        let rhs = &big_u * &mf.matrix * big_u.transpose();
        assert!(approx_eq(&lhs, &rhs, 1e-9));
    }

    #[test]
    fn expectation_is_an_idempotent_contraction_fixing_the_subspace() {
        let ctx = ctx_q8();
        let t = build_tables(&ctx).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        // fixes the structured subspace
        let phi = InducedElement {
            coeffs: (0..4).map(|_| rand_mat(&mut rng, 1, 1, false)).collect(),
        };
        let mf = matrix_form(&ctx, &t, &phi);
        let fixed = expectation(&ctx, &t, &mf.matrix).unwrap();
        assert!(approx_eq(&fixed.matrix, &mf.matrix, 1e-9));
        // idempotent and contractive on random block matrices
        for _ in 0..50 {
            let a = rand_mat(&mut rng, 4, 4, false);
            let e = expectation(&ctx, &t, &a).unwrap();
            let ee = expectation(&ctx, &t, &e.matrix).unwrap();
            assert!(approx_eq(&ee.matrix, &e.matrix, 1e-9));
            assert!(op_norm(&e.matrix).unwrap() <= op_norm(&a).unwrap() + 1e-9);
        }
        // zero maps to zero
        let z = expectation(&ctx, &t, &linalg::zeros(4, 4)).unwrap();
        assert!(max_abs(&z.matrix) < 1e-12);
    }

    #[test]
    fn expectation_of_a_single_offdiagonal_block() {
        // hand oracle for the complexification, expanding the two terms:
        // V_1 = I, V_2 = [[0,-1],[1,0]], a = x E_{12};
        // Phi(V_1* a) = 0, V_2* a = [[0,0],[0,-x]], Phi(V_2* a) = -(x/2) I,
        // so E(a) = -(x/2) V_2 = [[0, x/2], [-x/2, 0]].
        let ctx = ctx_z4();
        let t = build_tables(&ctx).unwrap();
        let x = 0.8;
        let mut a = linalg::zeros(2, 2);
        a[(0, 1)] = scalar(x);
        let e = expectation(&ctx, &t, &a).unwrap();
        #[rustfmt::skip]
        let expected = Mat::from_row_slice(2, 2, &[
            scalar(0.0), scalar(x / 2.0),
            scalar(-x / 2.0), scalar(0.0),
        ]);
        assert!(approx_eq(&e.matrix, &expected, 1e-12));
    }

    #[test]
    fn automorphisms_rearrange_matrix_forms_isometrically() {
        let ctx = ctx_q8();
        let t = build_tables(&ctx).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let phi = InducedElement {
            coeffs: (0..4).map(|_| rand_mat(&mut rng, 1, 1, false)).collect(),
        };
        let mf = matrix_form(&ctx, &t, &phi);
        for sigma in inner_automorphisms(&ctx.group) {
            let moved = aut_on_matrix_form(&ctx, &t, &sigma, &mf).unwrap();
            let before = op_norm(&mf.matrix).unwrap();
            let after = op_norm(&moved.matrix).unwrap();
            assert!((before - after).abs() < 1e-9);
        }
        let id = Automorphism::identity(8);
        let same = aut_on_matrix_form(&ctx, &t, &id, &mf).unwrap();
        assert!(approx_eq(&same.matrix, &mf.matrix, 1e-12));
    }

    #[test]
    fn conjugation_on_complexification_transposes_the_pattern() {
        let ctx = ctx_z4();
        let t = build_tables(&ctx).unwrap();
        let phi = from_reals(&[3.0, 4.0]);
        let mf = matrix_form(&ctx, &t, &phi);
        let sigma = Automorphism {
            perm: vec![0, 3, 2, 1],
        };
        let conj = aut_on_matrix_form(&ctx, &t, &sigma, &mf).unwrap();
        assert!(approx_eq(&conj.matrix, &mf.matrix.transpose(), 1e-12));
    }

    #[test]
    fn template_fixtures() {
        let cases: Vec<(FiniteGroup, Vec<usize>, &str)> = vec![
            (
                make_cyclic(4).unwrap(),
                vec![0, 2],
                include_str!("../fixtures/templates/z4_z2.txt"),
            ),
            (
                make_quaternion(),
                vec![0, 1],
                include_str!("../fixtures/templates/q8_z2.txt"),
            ),
            (
                make_dihedral(4).unwrap(),
                vec![0, 2],
                include_str!("../fixtures/templates/d4_z2.txt"),
            ),
            (
                make_cyclic(8).unwrap(),
                vec![0, 4],
                include_str!("../fixtures/templates/z8_z2.txt"),
            ),
            (
                make_cyclic(6).unwrap(),
                vec![0, 3],
                include_str!("../fixtures/templates/z6_z2.txt"),
            ),
        ];
        for (g, hels, fixture) in cases {
            let h = Subgroup::from_elements(&g, &hels).unwrap();
            let t = template(&g, &h).unwrap();
            assert_eq!(t.render_ascii(&g, &h), fixture, "group {}", g.name());
        }
    }

    #[test]
    fn template_with_larger_subgroup_uses_label_prefixes() {
        let g = make_cyclic(8).unwrap();
        let h = Subgroup::from_elements(&g, &[0, 2, 4, 6]).unwrap();
        let t = template(&g, &h).unwrap();
        let ascii = t.render_ascii(&g, &h);
        assert!(ascii.contains("·"));
        assert_eq!(t.m, 2);
    }
}
