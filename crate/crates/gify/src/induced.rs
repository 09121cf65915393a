//! The induced space of `H`-equivariant functions `G -> X`, stored by coset
//! coefficients.
//!
//! An element is the tuple `(x_1, ..., x_m)` of its values at the coset
//! representatives; the value anywhere else is recovered from the defining
//! covariance `phi(g_k h) = theta(h)^{-1} x_k`. This module provides the
//! embedding of `X`, evaluation, left/right translations, the automorphism
//! action, lifted linear maps, the convolution product, the involution, and
//! the convolution-operator representation on the induced Hilbert space.

use crate::group::{coset_system, Automorphism, CosetSystem, FiniteGroup, Subgroup};
use crate::linalg::{
    self, approx_eq, block_of, eye, max_abs, nullspace, realify_span, scalar, stack_columns,
    stack_rows, vec_of, CVec, LstSq, Mat,
};
use crate::space::{check_h_centric, check_left_involutive, commutant, Field, ModularSpace};
use crate::{Error, Result, DEFAULT_TOL, NULLSPACE_RTOL};

/// An element of the induced space: one coefficient in `X` per coset.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedElement {
    pub coeffs: Vec<Mat>,
}

/// A vector in the induced Hilbert space, stored by coset values in `F^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedVector {
    pub coeffs: Vec<CVec>,
}

/// Everything needed to compute inside one induced space: the pair
/// `H <= G`, its coset system, and the modular space being induced.
pub struct InducedSpace {
    pub group: FiniteGroup,
    pub subgroup: Subgroup,
    pub cosets: CosetSystem,
    pub space: ModularSpace,
    /// For each group element, its position in the subgroup (if any).
    h_index: Vec<Option<usize>>,
    commutant_span: LstSq,
}

impl InducedSpace {
    /// Requires a central modular space whose abstract group matches the
    /// subgroup structure (same sorted-element multiplication table).
    pub fn new(group: FiniteGroup, subgroup: Subgroup, space: ModularSpace) -> Result<Self> {
        if !space.is_central() {
            return Err(Error::InvalidSpace(
                "induction requires a central action (the unitaries must commute with the span)"
                    .into(),
            ));
        }
        let abstract_h = subgroup.as_group(&group);
        if abstract_h.table() != space.h_group.table() {
            return Err(Error::InvalidSpace(
                "the space's acting group does not match the subgroup structure".into(),
            ));
        }
        let cosets = coset_system(&group, &subgroup)?;
        let mut h_index = vec![None; group.order()];
        for (i, &e) in subgroup.elements().iter().enumerate() {
            h_index[e] = Some(i);
        }
        let comm = commutant(&space);
        let commutant_span =
            LstSq::new(stack_columns(&comm.iter().map(vec_of).collect::<Vec<_>>()))?;
        Ok(InducedSpace {
            group,
            subgroup,
            cosets,
            space,
            h_index,
            commutant_span,
        })
    }

    /// Number of cosets.
    pub fn m(&self) -> usize {
        self.cosets.m()
    }

    /// Ambient dimension of the coefficient matrices.
    pub fn d(&self) -> usize {
        self.space.ambient_dim
    }

    /// Dimension of the induced space: m * dim X.
    pub fn dim(&self) -> usize {
        self.m() * self.space.dim()
    }

    pub fn zero(&self) -> InducedElement {
        InducedElement {
            coeffs: vec![linalg::zeros(self.d(), self.d()); self.m()],
        }
    }

    fn check_shape(&self, phi: &InducedElement) -> Result<()> {
        if phi.coeffs.len() != self.m() {
            return Err(Error::Dimension(format!(
                "{} coefficients for {} cosets",
                phi.coeffs.len(),
                self.m()
            )));
        }
        for (k, x) in phi.coeffs.iter().enumerate() {
            if x.shape() != (self.d(), self.d()) {
                return Err(Error::Dimension(format!(
                    "coefficient {k} has the wrong shape"
                )));
            }
        }
        Ok(())
    }

    /// Membership check for every coefficient; returns the worst residual.
    pub fn membership(&self, phi: &InducedElement) -> Result<f64> {
        self.check_shape(phi)?;
        let mut worst = 0.0f64;
        for x in &phi.coeffs {
            worst = worst.max(self.space.membership(x)?);
        }
        Ok(worst)
    }

    /// The canonical embedding of `X`: x at the identity coset, 0 elsewhere.
    pub fn embed(&self, x: &Mat) -> Result<InducedElement> {
        let r = self.space.membership(x)?;
        if r > DEFAULT_TOL {
            return Err(Error::NotMember { residual: r });
        }
        let mut coeffs = vec![linalg::zeros(self.d(), self.d()); self.m()];
        coeffs[0] = x.clone();
        Ok(InducedElement { coeffs })
    }

    /// Value at an arbitrary group element: decompose g = g_k h and twist.
    pub fn evaluate(&self, phi: &InducedElement, g: usize) -> Mat {
        let (k, h) = self.cosets.coset_of[g];
        self.space.theta_inv(h) * &phi.coeffs[k]
    }

    /// Left translation: (g . phi)(k) = phi(g^{-1} k).
    pub fn left_translate(&self, g: usize, phi: &InducedElement) -> InducedElement {
        let ginv = self.group.inv(g);
        let coeffs = self
            .cosets
            .reps
            .iter()
            .map(|&rep| self.evaluate(phi, self.group.mul(ginv, rep)))
            .collect();
        InducedElement { coeffs }
    }

    /// Right translation: (phi . g)(k) = phi(k g). Requires a central
    /// subgroup, otherwise the result need not be equivariant.
    pub fn right_translate(&self, phi: &InducedElement, g: usize) -> Result<InducedElement> {
        if let Some((elem, with)) = self.subgroup.centrality_violation(&self.group) {
            return Err(Error::NotCentral { elem, with });
        }
        let coeffs = self
            .cosets
            .reps
            .iter()
            .map(|&rep| self.evaluate(phi, self.group.mul(rep, g)))
            .collect();
        Ok(InducedElement { coeffs })
    }

    /// Automorphism action: (sigma . phi) = phi o sigma^{-1}. The
    /// automorphism must fix the subgroup pointwise.
    pub fn apply_aut(&self, sigma: &Automorphism, phi: &InducedElement) -> Result<InducedElement> {
        if !sigma.fixes_pointwise(&self.subgroup) {
            return Err(Error::InvalidGamma(
                "automorphism does not restrict to the identity on the subgroup".into(),
            ));
        }
        let inv = sigma.inverse();
        let coeffs = self
            .cosets
            .reps
            .iter()
            .map(|&rep| self.evaluate(phi, inv.apply(rep)))
            .collect();
        Ok(InducedElement { coeffs })
    }

    /// Lifts an intertwining linear map on `X` to the induced space by
    /// applying it coefficientwise.
    pub fn induce_map(&self, t: &XMap, phi: &InducedElement) -> Result<InducedElement> {
        t.check_intertwiner(&self.space)?;
        let coeffs = phi.coeffs.iter().map(|x| t.apply(&self.space, x)).collect();
        Ok(InducedElement { coeffs })
    }

    /// True when the span is product-closed and the action is compatible
    /// with multiplication, the preconditions of the convolution product.
    pub fn convolution_ready(&self) -> Result<()> {
        let report = check_h_centric(&self.space)?;
        if !report.pass {
            return Err(Error::Precondition(
                "the action is not by left-module maps; convolution is undefined".into(),
            ));
        }
        Ok(())
    }

    /// Convolution product, normalized by |H|.
    pub fn convolve(&self, phi: &InducedElement, psi: &InducedElement) -> Result<InducedElement> {
        self.convolution_ready()?;
        let n = self.group.order();
        let h = self.subgroup.len() as f64;
        let mut coeffs = Vec::with_capacity(self.m());
        for &rep in &self.cosets.reps {
            let mut acc = linalg::zeros(self.d(), self.d());
            for k in 0..n {
                let left = self.evaluate(phi, k);
                let right = self.evaluate(psi, self.group.mul(self.group.inv(k), rep));
                acc += left * right;
            }
            acc /= scalar(h);
            let r = self.space.membership(&acc)?;
            if r > DEFAULT_TOL {
                return Err(Error::NotMember { residual: r });
            }
            coeffs.push(acc);
        }
        Ok(InducedElement { coeffs })
    }

    /// The involution phi*(g) = phi(g^{-1})*. Requires a central subgroup
    /// and an adjoint-compatible action.
    pub fn involute(&self, phi: &InducedElement) -> Result<InducedElement> {
        if let Some((elem, with)) = self.subgroup.centrality_violation(&self.group) {
            return Err(Error::NotCentral { elem, with });
        }
        let report = check_left_involutive(&self.space)?;
        if !report.pass {
            return Err(Error::Precondition(
                "the action is not adjoint-compatible; the involution leaves the space".into(),
            ));
        }
        let coeffs = self
            .cosets
            .reps
            .iter()
            .map(|&rep| self.evaluate(phi, self.group.inv(rep)).adjoint())
            .collect();
        Ok(InducedElement { coeffs })
    }

    /// Reads off the identity-coset coefficient and re-embeds it; the
    /// idempotent onto the embedded copy of `X`.
    pub fn expect_identity_coset(&self, phi: &InducedElement) -> Result<InducedElement> {
        self.embed(&phi.coeffs[0].clone())
    }

    // ---- coordinates -------------------------------------------------

    /// Flat coordinates: coefficients of each coset in the basis of X,
    /// concatenated in coset order.
    pub fn coords(&self, phi: &InducedElement) -> CVec {
        let s = self.space.dim();
        let mut v = CVec::zeros(self.dim());
        for (k, x) in phi.coeffs.iter().enumerate() {
            let c = self.space.coords(x);
            for b in 0..s {
                v[k * s + b] = c[b];
            }
        }
        v
    }

    pub fn from_coords(&self, v: &CVec) -> InducedElement {
        let s = self.space.dim();
        let coeffs = (0..self.m())
            .map(|k| {
                let c = CVec::from_fn(s, |b, _| v[k * s + b]);
                self.space.from_coords(&c)
            })
            .collect();
        InducedElement { coeffs }
    }

    /// Basis element with coefficient `basis[b]` at coset `k`.
    pub fn basis_element(&self, k: usize, b: usize) -> InducedElement {
        let mut e = self.zero();
        e.coeffs[k] = self.space.basis[b].clone();
        e
    }

    /// Matrix of a linear operation in the flat coordinates.
    pub fn op_matrix<F>(&self, mut f: F) -> Result<Mat>
    where
        F: FnMut(&InducedElement) -> Result<InducedElement>,
    {
        let n = self.dim();
        let s = self.space.dim();
        let mut cols = Vec::with_capacity(n);
        for k in 0..self.m() {
            for b in 0..s {
                let image = f(&self.basis_element(k, b))?;
                cols.push(self.coords(&image));
            }
        }
        Ok(stack_columns(&cols))
    }

    /// Basis of the joint fixed space of a set of automorphism actions,
    /// with its dimension.
    pub fn fixed_points_of_aut(
        &self,
        gamma: &[Automorphism],
    ) -> Result<(Vec<InducedElement>, usize)> {
        let n = self.dim();
        let mut systems = Vec::new();
        for sigma in gamma {
            let a = self.op_matrix(|phi| self.apply_aut(sigma, phi))?;
            systems.push(a - eye(n));
        }
        let stacked = stack_rows(&systems);
        let mut ns = nullspace(&stacked, NULLSPACE_RTOL);
        if self.space.field == Field::Real {
            ns = realify_span(&ns, NULLSPACE_RTOL);
        }
        let dim = ns.len();
        Ok((ns.iter().map(|v| self.from_coords(v)).collect(), dim))
    }

    // ---- the induced Hilbert space -----------------------------------

    /// Value of an induced vector at an arbitrary group element.
    pub fn evaluate_vector(&self, xi: &InducedVector, g: usize) -> CVec {
        let (k, h) = self.cosets.coset_of[g];
        self.space.theta_inv(h) * &xi.coeffs[k]
    }

    pub fn vector_from_flat(&self, v: &CVec) -> InducedVector {
        let d = self.d();
        let coeffs = (0..self.m())
            .map(|k| CVec::from_fn(d, |i, _| v[k * d + i]))
            .collect();
        InducedVector { coeffs }
    }

    pub fn vector_to_flat(&self, xi: &InducedVector) -> CVec {
        let d = self.d();
        CVec::from_fn(self.m() * d, |i, _| xi.coeffs[i / d][i % d])
    }

    /// Matrix of the convolution operator of `psi` on the induced Hilbert
    /// space, in the coordinates `(xi(g_1), ..., xi(g_m))`.
    ///
    /// The coefficients must lie in the commutant of the action.
    pub fn convolution_operator(&self, psi: &InducedElement) -> Result<Mat> {
        self.check_shape(psi)?;
        for (k, x) in psi.coeffs.iter().enumerate() {
            let r = self.commutant_span.residual(&vec_of(x));
            if r > DEFAULT_TOL {
                return Err(Error::Precondition(format!(
                    "coefficient {k} is outside the commutant (residual {r:.3e})"
                )));
            }
        }
        let (m, d) = (self.m(), self.d());
        let n = self.group.order();
        let hsize = self.subgroup.len() as f64;
        let mut blocks = vec![vec![linalg::zeros(d, d); m]; m];
        for (i, &gi) in self.cosets.reps.iter().enumerate() {
            for k in 0..n {
                let (j, h) = self.cosets.coset_of[self.group.mul(self.group.inv(k), gi)];
                let term = self.evaluate(psi, k) * self.space.theta_inv(h);
                blocks[i][j] += term / scalar(hsize);
            }
        }
        Ok(linalg::block_matrix(&blocks))
    }

    /// Unitary matrix of left translation by `g` on the induced Hilbert
    /// space coordinates. The same matrix implements left translation on
    /// matrix forms by left multiplication.
    pub fn translation_unitary(&self, g: usize) -> Mat {
        let (m, d) = (self.m(), self.d());
        let ginv = self.group.inv(g);
        let mut blocks = vec![vec![linalg::zeros(d, d); m]; m];
        for (i, &gi) in self.cosets.reps.iter().enumerate() {
            let (j, h) = self.cosets.coset_of[self.group.mul(ginv, gi)];
            blocks[i][j] = self.space.theta_inv(h).clone();
        }
        linalg::block_matrix(&blocks)
    }

    /// Unitary of the automorphism action xi -> xi o sigma^{-1} on the
    /// induced Hilbert space coordinates.
    pub fn aut_unitary(&self, sigma: &Automorphism) -> Result<Mat> {
        if !sigma.fixes_pointwise(&self.subgroup) {
            return Err(Error::InvalidGamma(
                "automorphism does not restrict to the identity on the subgroup".into(),
            ));
        }
        let (m, d) = (self.m(), self.d());
        let inv = sigma.inverse();
        let mut blocks = vec![vec![linalg::zeros(d, d); m]; m];
        for (i, &gi) in self.cosets.reps.iter().enumerate() {
            let (j, h) = self.cosets.coset_of[inv.apply(gi)];
            blocks[i][j] = self.space.theta_inv(h).clone();
        }
        Ok(linalg::block_matrix(&blocks))
    }

    /// Whether a group element lies in the subgroup.
    pub fn in_subgroup(&self, g: usize) -> bool {
        self.h_index[g].is_some()
    }
}

/// A linear map on the modular space, given by images of the basis.
pub struct XMap {
    images: Vec<Mat>,
}

impl XMap {
    pub fn new(space: &ModularSpace, images: Vec<Mat>) -> Result<Self> {
        if images.len() != space.dim() {
            return Err(Error::Dimension(format!(
                "{} images for a basis of size {}",
                images.len(),
                space.dim()
            )));
        }
        for (i, m) in images.iter().enumerate() {
            let r = space.membership(m)?;
            if r > DEFAULT_TOL {
                return Err(Error::NotMember { residual: r });
            }
            let _ = i;
        }
        Ok(XMap { images })
    }

    pub fn identity(space: &ModularSpace) -> Self {
        XMap {
            images: space.basis.clone(),
        }
    }

    pub fn scaled(space: &ModularSpace, factor: f64) -> Self {
        XMap {
            images: space.basis.iter().map(|b| b * scalar(factor)).collect(),
        }
    }

    pub fn apply(&self, space: &ModularSpace, x: &Mat) -> Mat {
        let c = space.coords(x);
        let mut out = linalg::zeros(space.ambient_dim, space.ambient_dim);
        for (b, img) in self.images.iter().enumerate() {
            out += img * c[b];
        }
        out
    }

    /// Verifies T(h.x) = h.T(x) on the basis.
    pub fn check_intertwiner(&self, space: &ModularSpace) -> Result<()> {
        for h in 0..space.h_group.order() {
            for (b, basis) in space.basis.iter().enumerate() {
                let lhs = self.apply(space, &(&space.theta[h] * basis));
                let rhs = &space.theta[h] * self.apply(space, basis);
                let dev = max_abs(&(lhs - rhs));
                if dev > DEFAULT_TOL {
                    return Err(Error::NotIntertwiner {
                        h,
                        basis: b,
                        residual: dev,
                    });
                }
            }
        }
        Ok(())
    }

    /// Whether T(x*) = T(x)* on the basis.
    pub fn is_star_map(&self, space: &ModularSpace) -> bool {
        space.basis.iter().all(|b| {
            approx_eq(
                &self.apply(space, &b.adjoint()),
                &self.apply(space, b).adjoint(),
                DEFAULT_TOL,
            )
        })
    }
}

/// Block (i, j) of a square block matrix.
pub fn block(m: &Mat, i: usize, j: usize, d: usize) -> Mat {
    block_of(m, i, j, d)
}

/// Builds the canonical complexification context: Z_4 over Z_2 acting by
/// sign on the given real span.
pub fn complexification(basis: Vec<Mat>, d: usize) -> Result<InducedSpace> {
    let g = crate::group::make_cyclic(4)?;
    let h = Subgroup::from_elements(&g, &[0, 2])?;
    let space = crate::space::make_sign_action(Field::Real, d, basis)?;
    InducedSpace::new(g, h, space)
}

/// Builds the canonical quaternification context: Q_8 over {1, -1} acting
/// by sign on the given real span.
pub fn quaternification(basis: Vec<Mat>, d: usize) -> Result<InducedSpace> {
    let g = crate::group::make_quaternion();
    let h = Subgroup::from_elements(&g, &[0, 1])?;
    let space = crate::space::make_sign_action(Field::Real, d, basis)?;
    InducedSpace::new(g, h, space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{automorphisms_fixing, inner_automorphisms, make_cyclic};
    use crate::space::{make_sign_action, scalar_basis};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cpx() -> InducedSpace {
        complexification(scalar_basis(), 1).unwrap()
    }

    fn quat() -> InducedSpace {
        quaternification(scalar_basis(), 1).unwrap()
    }

    fn from_reals(_ctx: &InducedSpace, vals: &[f64]) -> InducedElement {
        InducedElement {
            coeffs: vals.iter().map(|&v| eye(1) * scalar(v)).collect(),
        }
    }

    fn to_reals(phi: &InducedElement) -> Vec<f64> {
        phi.coeffs.iter().map(|m| m[(0, 0)].re).collect()
    }

    #[test]
    fn embed_and_evaluate() {
        let ctx = cpx();
        let zero = ctx.embed(&linalg::zeros(1, 1)).unwrap();
        assert!(to_reals(&zero).iter().all(|&v| v == 0.0));

        let phi = ctx.embed(&eye(1)).unwrap();
        assert_eq!(to_reals(&phi), vec![1.0, 0.0]);
        // evaluate at h in H: theta(h)^{-1} x
        let at_two = ctx.evaluate(&phi, 2);
        assert!((at_two[(0, 0)].re + 1.0).abs() < 1e-12);
        // evaluate at coset representatives reads the coefficients
        let psi = from_reals(&ctx, &[0.5, -2.0]);
        assert!((ctx.evaluate(&psi, 1)[(0, 0)].re + 2.0).abs() < 1e-12);
    }

    #[test]
    fn quaternion_evaluation_decomposes_via_the_table() {
        let ctx = quat();
        let phi = from_reals(&ctx, &[1.0, 2.0, 3.0, 4.0]);
        // -i = i * (-1): evaluating at -i gives -x_(coset of i)
        let v = ctx.evaluate(&phi, 3);
        assert!((v[(0, 0)].re + 2.0).abs() < 1e-12);
    }

    #[test]
    fn left_translation_on_complexification_is_rotation() {
        let ctx = cpx();
        let phi = from_reals(&ctx, &[3.0, 4.0]);
        assert_eq!(to_reals(&ctx.left_translate(0, &phi)), vec![3.0, 4.0]);
        // g = 1 acts like multiplication by i: (a, b) -> (-b, a)
        let rotated = ctx.left_translate(1, &phi);
        assert_eq!(to_reals(&rotated), vec![-4.0, 3.0]);
        // h in H scales every coefficient by theta(h)^{-1}
        let negated = ctx.left_translate(2, &phi);
        assert_eq!(to_reals(&negated), vec![-3.0, -4.0]);
    }

    #[test]
    fn right_translation_identities() {
        let ctx = quat();
        let phi = from_reals(&ctx, &[1.0, -1.0, 0.5, 2.0]);
        let same = ctx.right_translate(&phi, 0).unwrap();
        assert_eq!(to_reals(&same), to_reals(&phi));
        // left and right translations commute when H is central
        for g in 0..8 {
            for k in 0..8 {
                let a = ctx
                    .right_translate(&ctx.left_translate(g, &phi), k)
                    .unwrap();
                let b = ctx.left_translate(g, &ctx.right_translate(&phi, k).unwrap());
                assert_eq!(to_reals(&a), to_reals(&b));
            }
        }
    }

    #[test]
    fn right_translation_matches_left_on_abelian_groups() {
        let ctx = cpx();
        let phi = from_reals(&ctx, &[1.0, 2.0]);
        for g in 0..4 {
            let right = ctx.right_translate(&phi, g).unwrap();
            let left = ctx.left_translate(ctx.group.inv(g), &phi);
            assert_eq!(to_reals(&right), to_reals(&left));
        }
    }

    #[test]
    fn automorphism_action_is_conjugation_on_complexification() {
        let ctx = cpx();
        let sigma = Automorphism {
            perm: vec![0, 3, 2, 1],
        };
        let phi = from_reals(&ctx, &[3.0, 4.0]);
        let conj = ctx.apply_aut(&sigma, &phi).unwrap();
        assert_eq!(to_reals(&conj), vec![3.0, -4.0]);
        // identity automorphism leaves elements alone
        let id = Automorphism::identity(4);
        assert_eq!(to_reals(&ctx.apply_aut(&id, &phi).unwrap()), vec![3.0, 4.0]);
    }

    #[test]
    fn automorphism_action_is_a_left_action() {
        let ctx = quat();
        let phi = from_reals(&ctx, &[1.0, 2.0, 3.0, 4.0]);
        let auts = inner_automorphisms(&ctx.group);
        for a in &auts {
            for b in &auts {
                let ab = a.compose(b);
                let lhs = ctx.apply_aut(&ab, &phi).unwrap();
                let rhs = ctx.apply_aut(a, &ctx.apply_aut(b, &phi).unwrap()).unwrap();
                assert_eq!(to_reals(&lhs), to_reals(&rhs));
            }
        }
    }

    #[test]
    fn convolution_on_complexification_is_complex_multiplication() {
        let ctx = cpx();
        // oracle frozen from the literal product formula
        let cases = [
            ([1.0, 0.0], [0.0, 1.0]),
            ([3.0, 4.0], [-2.0, 0.5]),
            ([0.7, -1.3], [2.2, 0.9]),
        ];
        for (p, q) in cases {
            let phi = from_reals(&ctx, &p);
            let psi = from_reals(&ctx, &q);
            let conv = ctx.convolve(&phi, &psi).unwrap();
            let expected = [p[0] * q[0] - p[1] * q[1], p[0] * q[1] + p[1] * q[0]];
            let got = to_reals(&conv);
            assert!(
                (got[0] - expected[0]).abs() < 1e-12,
                "{got:?} vs {expected:?}"
            );
            assert!((got[1] - expected[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn convolution_on_quaternification_is_quaternion_multiplication() {
        let ctx = quat();
        let p = [1.0, 2.0, 3.0, 4.0];
        let q = [0.5, -1.0, 2.0, 0.25];
        let phi = from_reals(&ctx, &p);
        let psi = from_reals(&ctx, &q);
        let got = to_reals(&ctx.convolve(&phi, &psi).unwrap());
        // Hamilton product oracle
        let expected = [
            p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
            p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
            p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
            p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0],
        ];
        for (g, e) in got.iter().zip(expected.iter()) {
            assert!((g - e).abs() < 1e-12, "{got:?} vs {expected:?}");
        }
    }

    #[test]
    fn embedding_is_a_unital_homomorphism() {
        let d = 2;
        let ctx = quaternification(crate::space::full_matrix_basis(d), d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = linalg::rand_mat(&mut rng, d, d, false);
        let y = linalg::rand_mat(&mut rng, d, d, false);
        let lhs = ctx
            .convolve(&ctx.embed(&x).unwrap(), &ctx.embed(&y).unwrap())
            .unwrap();
        let rhs = ctx.embed(&(&x * &y)).unwrap();
        for (a, b) in lhs.coeffs.iter().zip(rhs.coeffs.iter()) {
            assert!(approx_eq(a, b, 1e-9));
        }
        // identity embeds to a two-sided unit
        let unit = ctx.embed(&eye(d)).unwrap();
        let phi = InducedElement {
            coeffs: (0..4)
                .map(|_| linalg::rand_mat(&mut rng, d, d, false))
                .collect(),
        };
        let left = ctx.convolve(&unit, &phi).unwrap();
        let right = ctx.convolve(&phi, &unit).unwrap();
        for k in 0..4 {
            assert!(approx_eq(&left.coeffs[k], &phi.coeffs[k], 1e-9));
            assert!(approx_eq(&right.coeffs[k], &phi.coeffs[k], 1e-9));
        }
    }

    #[test]
    fn convolution_is_associative_and_modular() {
        let ctx = quat();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rand_el = |rng: &mut ChaCha8Rng| InducedElement {
            coeffs: (0..4).map(|_| linalg::rand_mat(rng, 1, 1, false)).collect(),
        };
        let (a, b, c) = (rand_el(&mut rng), rand_el(&mut rng), rand_el(&mut rng));
        let left = ctx.convolve(&ctx.convolve(&a, &b).unwrap(), &c).unwrap();
        let right = ctx.convolve(&a, &ctx.convolve(&b, &c).unwrap()).unwrap();
        for k in 0..4 {
            assert!(approx_eq(&left.coeffs[k], &right.coeffs[k], 1e-9));
        }
        // translation is a module map on either side
        for g in 0..8 {
            let lhs = ctx.left_translate(g, &ctx.convolve(&a, &b).unwrap());
            let rhs = ctx.convolve(&ctx.left_translate(g, &a), &b).unwrap();
            for k in 0..4 {
                assert!(approx_eq(&lhs.coeffs[k], &rhs.coeffs[k], 1e-9));
            }
            let lhs = ctx
                .right_translate(&ctx.convolve(&a, &b).unwrap(), g)
                .unwrap();
            let rhs = ctx
                .convolve(&a, &ctx.right_translate(&b, g).unwrap())
                .unwrap();
            for k in 0..4 {
                assert!(approx_eq(&lhs.coeffs[k], &rhs.coeffs[k], 1e-9));
            }
        }
    }

    #[test]
    fn involution_cases() {
        let ctx = cpx();
        let phi = from_reals(&ctx, &[3.0, 4.0]);
        let star = ctx.involute(&phi).unwrap();
        assert_eq!(to_reals(&star), vec![3.0, -4.0]);
        let back = ctx.involute(&star).unwrap();
        assert_eq!(to_reals(&back), vec![3.0, 4.0]);

        // the embedding is a *-map
        let d = 2;
        let ctx = complexification(crate::space::full_matrix_basis(d), d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = linalg::rand_mat(&mut rng, d, d, false);
        let lhs = ctx.involute(&ctx.embed(&x).unwrap()).unwrap();
        let rhs = ctx.embed(&x.adjoint()).unwrap();
        for k in 0..2 {
            assert!(approx_eq(&lhs.coeffs[k], &rhs.coeffs[k], 1e-12));
        }
    }

    #[test]
    fn induced_map_examples() {
        let ctx = cpx();
        let phi = from_reals(&ctx, &[3.0, 4.0]);
        let id = XMap::identity(&ctx.space);
        assert_eq!(
            to_reals(&ctx.induce_map(&id, &phi).unwrap()),
            vec![3.0, 4.0]
        );
        // scaling acts on real and imaginary coefficients alike
        let twice = XMap::scaled(&ctx.space, 2.0);
        assert_eq!(
            to_reals(&ctx.induce_map(&twice, &phi).unwrap()),
            vec![6.0, 8.0]
        );
        // a *-map commutes with the involution
        assert!(twice.is_star_map(&ctx.space));
        let lhs = ctx
            .involute(&ctx.induce_map(&twice, &phi).unwrap())
            .unwrap();
        let rhs = ctx
            .induce_map(&twice, &ctx.involute(&phi).unwrap())
            .unwrap();
        assert_eq!(to_reals(&lhs), to_reals(&rhs));
    }

    #[test]
    fn intertwiner_violation_is_reported() {
        // Z_4 root-of-unity action on C^2 diagonal: swap map fails to intertwine
        let s = crate::space::make_diagonal_action(
            make_cyclic(4).unwrap(),
            &[nalgebra::Complex::new(0.0, 1.0), scalar(1.0)],
            Field::Complex,
            2,
            crate::space::diagonal_matrix_basis(2),
        )
        .unwrap();
        let swap = XMap::new(&s, vec![s.basis[1].clone(), s.basis[0].clone()]).unwrap();
        assert!(matches!(
            swap.check_intertwiner(&s),
            Err(Error::NotIntertwiner { .. })
        ));
    }

    #[test]
    fn polarization_identity() {
        let ctx = quat();
        let phi = from_reals(&ctx, &[1.0, -2.0, 0.3, 4.0]);
        let mut sum = ctx.zero();
        for &rep in ctx.cosets.reps.iter() {
            let pulled = ctx.left_translate(ctx.group.inv(rep), &phi);
            let embedded = ctx.expect_identity_coset(&pulled).unwrap();
            let pushed = ctx.left_translate(rep, &embedded);
            for k in 0..ctx.m() {
                let acc = sum.coeffs[k].clone() + &pushed.coeffs[k];
                sum.coeffs[k] = acc;
            }
        }
        assert_eq!(to_reals(&sum), to_reals(&phi));
    }

    #[test]
    fn sum_zero_for_admissible_ergodic_pairs() {
        let ctx = cpx();
        let gamma = automorphisms_fixing(&ctx.group, &ctx.subgroup).unwrap();
        for g in 0..4 {
            if ctx.in_subgroup(g) {
                continue;
            }
            let mut total = linalg::zeros(ctx.dim(), ctx.dim());
            for sigma in &gamma {
                total += ctx
                    .op_matrix(|phi| Ok(ctx.left_translate(sigma.apply(g), phi)))
                    .unwrap();
            }
            assert!(max_abs(&total) < 1e-12, "g = {g}");
        }
    }

    #[test]
    fn fixed_points_dimensions() {
        // admissible ergodic pair: fixed points = embedded copy of X
        let ctx = cpx();
        let gamma = automorphisms_fixing(&ctx.group, &ctx.subgroup).unwrap();
        let (basis, dim) = ctx.fixed_points_of_aut(&gamma).unwrap();
        assert_eq!(dim, 1);
        // the fixed vector is supported on the identity coset
        assert!(max_abs(&basis[0].coeffs[1]) < 1e-9);

        // non-admissible pair: dimension doubles
        let g = make_cyclic(6).unwrap();
        let h = Subgroup::from_elements(&g, &[0, 3]).unwrap();
        let space = make_sign_action(Field::Real, 1, scalar_basis()).unwrap();
        let ctx6 = InducedSpace::new(g, h, space).unwrap();
        let gamma6 = automorphisms_fixing(&ctx6.group, &ctx6.subgroup).unwrap();
        let (_, dim6) = ctx6.fixed_points_of_aut(&gamma6).unwrap();
        assert_eq!(dim6, 2);

        // identity-only gamma fixes everything
        let (_, all) = ctx
            .fixed_points_of_aut(&[Automorphism::identity(4)])
            .unwrap();
        assert_eq!(all, ctx.dim());
    }

    #[test]
    fn convolution_operator_is_a_homomorphism() {
        let ctx = quat();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rand_el = |rng: &mut ChaCha8Rng| InducedElement {
            coeffs: (0..4).map(|_| linalg::rand_mat(rng, 1, 1, false)).collect(),
        };
        let (phi, psi) = (rand_el(&mut rng), rand_el(&mut rng));
        let lhs = ctx
            .convolution_operator(&ctx.convolve(&phi, &psi).unwrap())
            .unwrap();
        let rhs = ctx.convolution_operator(&phi).unwrap() * ctx.convolution_operator(&psi).unwrap();
        assert!(approx_eq(&lhs, &rhs, 1e-9));

        // star preservation
        let lhs = ctx
            .convolution_operator(&ctx.involute(&phi).unwrap())
            .unwrap();
        let rhs = ctx.convolution_operator(&phi).unwrap().adjoint();
        assert!(approx_eq(&lhs, &rhs, 1e-9));

        // embedding realizes coefficientwise application
        let t = eye(1) * scalar(1.5);
        let op = ctx.convolution_operator(&ctx.embed(&t).unwrap()).unwrap();
        assert!(approx_eq(&op, &(eye(4) * scalar(1.5)), 1e-9));
    }

    #[test]
    fn convolution_operator_is_equivariant_and_injective() {
        let ctx = quat();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let phi = InducedElement {
            coeffs: (0..4)
                .map(|_| linalg::rand_mat(&mut rng, 1, 1, false))
                .collect(),
        };
        for g in 0..8 {
            let lhs = ctx
                .convolution_operator(&ctx.left_translate(g, &phi))
                .unwrap();
            let rhs = ctx.translation_unitary(g) * ctx.convolution_operator(&phi).unwrap();
            assert!(approx_eq(&lhs, &rhs, 1e-9), "g = {g}");
        }
        // injectivity as a rank statement on the linear map coeffs -> operator
        let mut cols = Vec::new();
        for k in 0..ctx.m() {
            for b in 0..ctx.space.dim() {
                let e = ctx.basis_element(k, b);
                cols.push(vec_of(&ctx.convolution_operator(&e).unwrap()));
            }
        }
        let stacked = stack_columns(&cols);
        assert_eq!(linalg::rank(&stacked, NULLSPACE_RTOL), ctx.dim());
    }

    #[test]
    fn aut_unitary_conjugates_convolution_operators() {
        let ctx = quat();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let phi = InducedElement {
            coeffs: (0..4)
                .map(|_| linalg::rand_mat(&mut rng, 1, 1, false))
                .collect(),
        };
        for sigma in inner_automorphisms(&ctx.group) {
            let u = ctx.aut_unitary(&sigma).unwrap();
            let uinv = ctx.aut_unitary(&sigma.inverse()).unwrap();
            let lhs = ctx
                .convolution_operator(&ctx.apply_aut(&sigma, &phi).unwrap())
                .unwrap();
            let rhs = &u * ctx.convolution_operator(&phi).unwrap() * &uinv;
            assert!(approx_eq(&lhs, &rhs, 1e-9));
        }
    }

    #[test]
    fn embed_rejects_matrices_outside_the_span() {
        let ctx = complexification(crate::space::diagonal_matrix_basis(2), 2).unwrap();
        let mut off = linalg::zeros(2, 2);
        off[(0, 1)] = scalar(1.0);
        assert!(matches!(ctx.embed(&off), Err(Error::NotMember { .. })));
    }

    #[test]
    fn convolution_operator_matches_its_defining_formula_on_vectors() {
        // oracle straight from the definition: apply the |H|-normalized sum
        // over the group to an equivariant vector, then compare with the
        // assembled operator acting on flat coordinates
        let d = 2;
        let ctx = quaternification(crate::space::full_matrix_basis(d), d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let psi = InducedElement {
            coeffs: (0..4)
                .map(|_| linalg::rand_mat(&mut rng, d, d, false))
                .collect(),
        };
        let xi = InducedVector {
            coeffs: (0..4)
                .map(|_| {
                    let m = linalg::rand_mat(&mut rng, d, 1, false);
                    CVec::from_column_slice(m.as_slice())
                })
                .collect(),
        };
        let op = ctx.convolution_operator(&psi).unwrap();
        let applied = &op * ctx.vector_to_flat(&xi);
        let n = ctx.group.order();
        let h = ctx.subgroup.len() as f64;
        for (i, &rep) in ctx.cosets.reps.iter().enumerate() {
            let mut expected = CVec::zeros(d);
            for k in 0..n {
                let value = ctx.evaluate(&psi, k);
                let vector = ctx.evaluate_vector(&xi, ctx.group.mul(ctx.group.inv(k), rep));
                expected += value * vector;
            }
            expected /= scalar(h);
            for r in 0..d {
                assert!((applied[i * d + r] - expected[r]).norm() < 1e-9);
            }
        }
        // the result is again equivariant: evaluating the output vector at
        // g_k h twists by the action
        let out = ctx.vector_from_flat(&applied);
        let z = 1usize; // the central sign element of Q_8
        for &rep in &ctx.cosets.reps {
            let twisted = ctx.evaluate_vector(&out, ctx.group.mul(rep, z));
            let direct = ctx.space.theta_inv(1) * ctx.evaluate_vector(&out, rep);
            for r in 0..d {
                assert!((twisted[r] - direct[r]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn translation_duality() {
        // left and right translation spans have equal dimension, the
        // correspondence L_g -> R_{g^{-1}} respects linear relations, and it
        // reverses products
        let ctx = quat();
        let mut lmats = Vec::new();
        let mut rmats = Vec::new();
        for g in 0..8 {
            lmats.push(ctx.op_matrix(|p| Ok(ctx.left_translate(g, p))).unwrap());
            rmats.push(
                ctx.op_matrix(|p| ctx.right_translate(p, ctx.group.inv(g)))
                    .unwrap(),
            );
        }
        let lspan = stack_columns(&lmats.iter().map(vec_of).collect::<Vec<_>>());
        let rspan = stack_columns(&rmats.iter().map(vec_of).collect::<Vec<_>>());
        let dl = linalg::rank(&lspan, NULLSPACE_RTOL);
        let dr = linalg::rank(&rspan, NULLSPACE_RTOL);
        assert_eq!(dl, dr);
        // identical linear relations on both sides
        let joint = stack_rows(&[lspan.clone(), rspan.clone()]);
        assert_eq!(linalg::rank(&joint, NULLSPACE_RTOL), dl);
        // antihomomorphism under matrix product
        for g in 0..8 {
            for k in 0..8 {
                let lhs = &rmats[ctx.group.mul(g, k)];
                let rhs = &rmats[k] * &rmats[g];
                // R marks g -> R_{g^{-1}}: J(L_g L_k) = J(L_k) J(L_g) reversed
                assert!(approx_eq(lhs, &rhs, 1e-9));
            }
        }
    }
}
