//! Concrete modular matrix spaces: a span `X ⊂ M_d(F)` together with a
//! unitary action of a finite abelian group `H`.
//!
//! The action is given by unitaries `theta[h]`; a space is *central* when
//! every `theta[h]` commutes with every member of the span. Ergodicity,
//! faithfulness, commutants, and the compatibility predicates needed for the
//! convolution algebra all reduce to small dense linear systems.

use nalgebra::Complex;

use crate::group::{make_cyclic, FiniteGroup};
use crate::linalg::{
    self, approx_eq, column_space, eye, is_finite, max_abs, nullspace, realify_span, scalar,
    stack_columns, stack_rows, unvec, vec_of, CVec, LstSq, Mat,
};
use crate::report::{Verdict, VerdictReport};
use crate::{Error, Result, DEFAULT_TOL, NULLSPACE_RTOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn is_complex(self) -> bool {
        matches!(self, Field::Complex)
    }
}

/// A matrix span with a unitary `H`-action.
#[derive(Clone)]
pub struct ModularSpace {
    pub field: Field,
    /// Ambient dimension d: members live in M_d.
    pub ambient_dim: usize,
    /// Linearly independent d x d matrices spanning the space.
    pub basis: Vec<Mat>,
    /// The acting group, abstract (identity at index 0).
    pub h_group: FiniteGroup,
    /// Unitary per group element.
    pub theta: Vec<Mat>,
    span: LstSq,
    central: bool,
}

fn real_entries(m: &Mat) -> bool {
    m.iter().all(|z| z.im.abs() <= 1e-14)
}

impl ModularSpace {
    /// Validates dimensions, independence, the unitary representation
    /// property, and invariance of the span under the action. Centrality is
    /// recorded but not required.
    pub fn new(
        field: Field,
        ambient_dim: usize,
        basis: Vec<Mat>,
        h_group: FiniteGroup,
        theta: Vec<Mat>,
    ) -> Result<Self> {
        let d = ambient_dim;
        for (i, b) in basis.iter().enumerate() {
            if b.shape() != (d, d) {
                return Err(Error::Dimension(format!("basis matrix {i} is not {d}x{d}")));
            }
            if !is_finite(b) {
                return Err(Error::NonFinite(format!("basis matrix {i}")));
            }
            if field == Field::Real && !real_entries(b) {
                return Err(Error::InvalidSpace(format!(
                    "basis matrix {i} has complex entries in a real space"
                )));
            }
        }
        if theta.len() != h_group.order() {
            return Err(Error::Dimension(format!(
                "{} action matrices for a group of order {}",
                theta.len(),
                h_group.order()
            )));
        }
        for (h, t) in theta.iter().enumerate() {
            if t.shape() != (d, d) {
                return Err(Error::Dimension(format!(
                    "action matrix {h} is not {d}x{d}"
                )));
            }
            if !approx_eq(&(t.adjoint() * t), &eye(d), DEFAULT_TOL) {
                return Err(Error::InvalidSpace(format!(
                    "action matrix {h} is not unitary"
                )));
            }
        }
        if !approx_eq(&theta[0], &eye(d), DEFAULT_TOL) {
            return Err(Error::InvalidSpace(
                "identity must act as the identity".into(),
            ));
        }
        for a in 0..theta.len() {
            for b in 0..theta.len() {
                let ab = h_group.mul(a, b);
                if !approx_eq(&(&theta[a] * &theta[b]), &theta[ab], DEFAULT_TOL) {
                    return Err(Error::InvalidSpace(format!(
                        "action is not a representation at ({a}, {b})"
                    )));
                }
            }
        }
        let span = LstSq::new(stack_columns(&basis.iter().map(vec_of).collect::<Vec<_>>()))?;
        for (h, t) in theta.iter().enumerate() {
            for (i, b) in basis.iter().enumerate() {
                let moved = t * b;
                let r = span.residual(&vec_of(&moved));
                if r > DEFAULT_TOL {
                    return Err(Error::InvalidSpace(format!(
                        "span is not invariant: action element {h} moves basis {i} out (residual {r:.3e})"
                    )));
                }
            }
        }
        let central = theta.iter().all(|t| {
            basis
                .iter()
                .all(|b| approx_eq(&(t * b), &(b * t), DEFAULT_TOL))
        });
        Ok(ModularSpace {
            field,
            ambient_dim,
            basis,
            h_group,
            theta,
            span,
            central,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_central(&self) -> bool {
        self.central
    }

    /// Whether h.x = x for all x forces h = identity.
    pub fn is_faithful(&self) -> bool {
        (1..self.theta.len()).all(|h| {
            self.basis
                .iter()
                .any(|b| !approx_eq(&(&self.theta[h] * b), b, DEFAULT_TOL))
        })
    }

    pub fn is_ergodic(&self) -> bool {
        fixed_subspace(self).is_empty()
    }

    /// Least-squares distance from `x` to the span.
    pub fn membership(&self, x: &Mat) -> Result<f64> {
        if x.shape() != (self.ambient_dim, self.ambient_dim) {
            return Err(Error::Dimension(format!(
                "expected {0}x{0}, got {1}x{2}",
                self.ambient_dim,
                x.nrows(),
                x.ncols()
            )));
        }
        Ok(self.span.residual(&vec_of(x)))
    }

    /// Coordinates in the stored basis (least squares).
    pub fn coords(&self, x: &Mat) -> CVec {
        self.span.coords(&vec_of(x))
    }

    pub fn from_coords(&self, c: &CVec) -> Mat {
        unvec(&self.span.combine(c), self.ambient_dim, self.ambient_dim)
    }

    /// Orthogonal projection of an arbitrary matrix onto the span.
    pub fn project(&self, x: &Mat) -> Mat {
        unvec(
            &self.span.project(&vec_of(x)),
            self.ambient_dim,
            self.ambient_dim,
        )
    }

    pub fn theta_inv(&self, h: usize) -> &Mat {
        &self.theta[self.h_group.inv(h)]
    }
}

/// The sign action of Z_2: the nontrivial element acts by x -> -x.
///
/// Always central; ergodic and faithful exactly when the span is nonzero.
pub fn make_sign_action(field: Field, ambient_dim: usize, basis: Vec<Mat>) -> Result<ModularSpace> {
    let d = ambient_dim;
    let theta = vec![eye(d), -eye(d)];
    ModularSpace::new(field, d, basis, make_cyclic(2)?, theta)
}

/// Z_n acting by k.x = e^{2 pi i k / n} x. Real scalars only make sense for
/// n <= 2; larger n is rejected over the real field.
pub fn make_root_of_unity_action(
    n: usize,
    field: Field,
    ambient_dim: usize,
    basis: Vec<Mat>,
) -> Result<ModularSpace> {
    if n == 0 {
        return Err(Error::InvalidGroup("order must be positive".into()));
    }
    if n > 2 && field == Field::Real {
        return Err(Error::InvalidSpace(
            "a root-of-unity action of order above 2 needs complex scalars".into(),
        ));
    }
    let d = ambient_dim;
    let theta: Vec<Mat> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
            eye(d) * Complex::new(angle.cos(), angle.sin())
        })
        .collect();
    ModularSpace::new(field, d, basis, make_cyclic(n)?, theta)
}

/// A cyclic group acting by powers of a fixed diagonal unitary.
///
/// Validates that the generator has order dividing |H| and that the resulting
/// action is span-invariant and central, reporting the offending action
/// element and basis index otherwise.
pub fn make_diagonal_action(
    h_group: FiniteGroup,
    diag: &[Complex<f64>],
    field: Field,
    ambient_dim: usize,
    basis: Vec<Mat>,
) -> Result<ModularSpace> {
    let d = ambient_dim;
    if diag.len() != d {
        return Err(Error::Dimension(format!(
            "{} diagonal entries for d = {d}",
            diag.len()
        )));
    }
    if diag.iter().any(|z| (z.norm() - 1.0).abs() > DEFAULT_TOL) {
        return Err(Error::InvalidSpace(
            "diagonal entries must be unimodular".into(),
        ));
    }
    let n = h_group.order();
    let gen = Mat::from_fn(d, d, |i, j| if i == j { diag[i] } else { scalar(0.0) });
    let mut theta = vec![eye(d); n];
    // h_group is cyclic with generator at index 1 when n > 1
    let mut pow = eye(d);
    for slot in theta.iter_mut() {
        *slot = pow.clone();
        pow *= &gen;
    }
    if !approx_eq(&pow, &eye(d), DEFAULT_TOL) {
        return Err(Error::InvalidSpace(
            "generator order does not divide the group order".into(),
        ));
    }
    let space = ModularSpace::new(field, d, basis, h_group, theta)?;
    // pinpoint violations the generic constructor reports only coarsely
    for h in 0..space.theta.len() {
        for (i, b) in space.basis.iter().enumerate() {
            let lhs = &space.theta[h] * b;
            let rhs = b * &space.theta[h];
            if !approx_eq(&lhs, &rhs, DEFAULT_TOL) {
                return Err(Error::NotIntertwiner {
                    h,
                    basis: i,
                    residual: max_abs(&(lhs - rhs)),
                });
            }
        }
    }
    Ok(space)
}

/// Convenience spans.
pub fn scalar_basis() -> Vec<Mat> {
    vec![eye(1)]
}

pub fn full_matrix_basis(d: usize) -> Vec<Mat> {
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut m = linalg::zeros(d, d);
            m[(i, j)] = scalar(1.0);
            out.push(m);
        }
    }
    out
}

pub fn diagonal_matrix_basis(d: usize) -> Vec<Mat> {
    (0..d)
        .map(|i| {
            let mut m = linalg::zeros(d, d);
            m[(i, i)] = scalar(1.0);
            m
        })
        .collect()
}

/// Matrix of the action of `theta[h]` on span coordinates.
fn action_on_coords(space: &ModularSpace, h: usize) -> Mat {
    let cols: Vec<CVec> = space
        .basis
        .iter()
        .map(|b| space.coords(&(&space.theta[h] * b)))
        .collect();
    stack_columns(&cols)
}

/// Basis of the fixed subspace {x in X : h.x = x for all h}, extracted from
/// the range of the averaging projector.
pub fn fixed_subspace(space: &ModularSpace) -> Vec<Mat> {
    let s = space.dim();
    if s == 0 {
        return Vec::new();
    }
    let n = space.h_group.order() as f64;
    let mut avg = linalg::zeros(s, s);
    for h in 0..space.h_group.order() {
        avg += action_on_coords(space, h);
    }
    avg /= scalar(n);
    let mut range = column_space(&avg, NULLSPACE_RTOL);
    if space.field == Field::Real {
        range = realify_span(&range, NULLSPACE_RTOL);
    }
    range.iter().map(|c| space.from_coords(c)).collect()
}

/// Basis of the commutant {T in M_d : T theta(h) = theta(h) T for all h}.
pub fn commutant(space: &ModularSpace) -> Vec<Mat> {
    let d = space.ambient_dim;
    let systems: Vec<Mat> = (0..space.h_group.order())
        .map(|h| {
            let t = &space.theta[h];
            linalg::kron(&t.transpose(), &eye(d)) - linalg::kron(&eye(d), t)
        })
        .collect();
    let stacked = stack_rows(&systems);
    let mut ns = nullspace(&stacked, NULLSPACE_RTOL);
    if space.field == Field::Real && space.theta.iter().all(real_entries) {
        ns = realify_span(&ns, NULLSPACE_RTOL);
    }
    ns.iter().map(|v| unvec(v, d, d)).collect()
}

/// The commutant packaged as a modular space under the same action.
pub fn commutant_space(space: &ModularSpace) -> Result<ModularSpace> {
    let field = if space.theta.iter().all(real_entries) && space.field == Field::Real {
        Field::Real
    } else {
        Field::Complex
    };
    ModularSpace::new(
        field,
        space.ambient_dim,
        commutant(space),
        space.h_group.clone(),
        space.theta.clone(),
    )
}

/// Checks that the action consists of left-module maps for the span's
/// multiplication: h.(xy) = x (h.y) on all basis pairs.
///
/// Errors if the span is not closed under products.
pub fn check_h_centric(space: &ModularSpace) -> Result<VerdictReport> {
    let mut v = Verdict::new("h-centric", 0);
    for (i, a) in space.basis.iter().enumerate() {
        for (j, b) in space.basis.iter().enumerate() {
            let r = space.membership(&(a * b))?;
            if r > DEFAULT_TOL {
                return Err(Error::Precondition(format!(
                    "span is not product-closed: basis pair ({i}, {j}) has residual {r:.3e}"
                )));
            }
        }
    }
    let mut worst = 0.0f64;
    let mut witness = None;
    for h in 0..space.h_group.order() {
        for (i, x) in space.basis.iter().enumerate() {
            for (j, y) in space.basis.iter().enumerate() {
                let lhs = &space.theta[h] * (x * y);
                let rhs = x * (&space.theta[h] * y);
                let dev = max_abs(&(lhs - rhs));
                if dev > worst {
                    worst = dev;
                    witness = Some((h, i, j));
                }
            }
        }
    }
    v.push("max deviation of h.(xy) = x(h.y)", worst, DEFAULT_TOL);
    if let Some(w) = witness {
        v.witness(serde_json::json!({"action": w.0, "left_basis": w.1, "right_basis": w.2}));
    }
    Ok(v.finish())
}

/// Checks (h.x)* = h^{-1}.x* on all basis elements.
///
/// Errors if the span is not closed under conjugate transpose.
pub fn check_left_involutive(space: &ModularSpace) -> Result<VerdictReport> {
    let mut v = Verdict::new("left-involutive", 0);
    for (i, b) in space.basis.iter().enumerate() {
        let r = space.membership(&b.adjoint())?;
        if r > DEFAULT_TOL {
            return Err(Error::Precondition(format!(
                "span is not adjoint-closed: basis {i} has residual {r:.3e}"
            )));
        }
    }
    let mut worst = 0.0f64;
    let mut witness = None;
    for h in 0..space.h_group.order() {
        let hinv = space.h_group.inv(h);
        for (i, x) in space.basis.iter().enumerate() {
            let lhs = (&space.theta[h] * x).adjoint();
            let rhs = &space.theta[hinv] * x.adjoint();
            let dev = max_abs(&(lhs - rhs));
            if dev > worst {
                worst = dev;
                witness = Some((h, i));
            }
        }
    }
    v.push("max deviation of (h.x)* = h^{-1}.x*", worst, DEFAULT_TOL);
    if let Some(w) = witness {
        v.witness(serde_json::json!({"action": w.0, "basis": w.1}));
    }
    Ok(v.finish())
}
