//! Rectangular absolute values, block constructions (direct sums, corner
//! embeddings, suspensions, scalar actions) and the order-unit matrix norm.

use crate::absolute::{self, abs_sa};
use crate::element::{Element, SelfAdjoint};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};

/// |v| = (v^* v)^{1/2} in M_n(V), blockwise. Always positive.
pub fn abs_rect(v: &Element) -> Result<SelfAdjoint> {
    let tol = *v.tol();
    let (_, n) = v.shape();
    let blocks: Result<Vec<CMat>> = v
        .blocks()
        .iter()
        .map(|b| linalg::psd_sqrt(&b.adjoint().mul(b).hermitize(), &tol))
        .collect();
    SelfAdjoint::new(Element::new(v.model().clone(), n, n, blocks?)?)
}

/// |v^*| in M_m(V).
pub fn abs_rect_star(v: &Element) -> Result<SelfAdjoint> {
    abs_rect(&v.adjoint())
}

/// Block-diagonal direct sum M_{m,n}(V) x M_{r,s}(V) -> M_{m+r,n+s}(V).
pub fn oplus(v: &Element, w: &Element) -> Result<Element> {
    if !v.same_model(w) {
        return Err(Error::ModelMismatch);
    }
    let (m, n) = v.shape();
    let (r, s) = w.shape();
    let blocks = v
        .blocks()
        .iter()
        .zip(w.blocks())
        .map(|(a, b)| a.direct_sum(b))
        .collect();
    Element::new(v.model().clone(), m + r, n + s, blocks)
}

/// Zero-padded embedding of v at V-index offset (row_off, col_off) inside a
/// total_rows x total_cols level.
pub fn corner_embed(
    v: &Element,
    row_off: usize,
    col_off: usize,
    total_rows: usize,
    total_cols: usize,
) -> Result<Element> {
    let (m, n) = v.shape();
    if row_off + m > total_rows || col_off + n > total_cols {
        return Err(Error::ShapeError(format!(
            "cannot place a {m}x{n} element at offset ({row_off}, {col_off}) inside {total_rows}x{total_cols}"
        )));
    }
    let dims = v.model().block_dims().to_vec();
    let blocks = v
        .blocks()
        .iter()
        .zip(&dims)
        .map(|(b, &d)| {
            let mut out = CMat::zeros(total_rows * d, total_cols * d);
            out.paste(row_off * d, col_off * d, b);
            out
        })
        .collect();
    Element::new(v.model().clone(), total_rows, total_cols, blocks)
}

/// Extract the rows x cols corner at V-index offset (row_off, col_off).
pub fn corner_extract(
    v: &Element,
    row_off: usize,
    col_off: usize,
    rows: usize,
    cols: usize,
) -> Result<Element> {
    let (m, n) = v.shape();
    if row_off + rows > m || col_off + cols > n {
        return Err(Error::ShapeError(format!(
            "cannot extract a {rows}x{cols} corner at ({row_off}, {col_off}) from {m}x{n}"
        )));
    }
    let dims = v.model().block_dims().to_vec();
    let blocks = v
        .blocks()
        .iter()
        .zip(&dims)
        .map(|(b, &d)| b.slice(row_off * d, col_off * d, rows * d, cols * d))
        .collect();
    Element::new(v.model().clone(), rows, cols, blocks)
}

/// Vertical stack [u; v] in M_{2m,n}(V).
pub fn stack_rows(u: &Element, v: &Element) -> Result<Element> {
    let (m, n) = u.shape();
    if v.shape() != (m, n) {
        return Err(Error::ShapeError("stack: shapes differ".into()));
    }
    let top = corner_embed(u, 0, 0, 2 * m, n)?;
    let bottom = corner_embed(v, m, 0, 2 * m, n)?;
    top.add(&bottom)
}

/// Horizontal stack [u v] in M_{m,2n}(V).
pub fn stack_cols(u: &Element, v: &Element) -> Result<Element> {
    let (m, n) = u.shape();
    if v.shape() != (m, n) {
        return Err(Error::ShapeError("stack: shapes differ".into()));
    }
    let left = corner_embed(u, 0, 0, m, 2 * n)?;
    let right = corner_embed(v, 0, n, m, 2 * n)?;
    left.add(&right)
}

/// The self-adjoint suspension [[0, v],[v^*, 0]] in M_{m+n}(V).
pub fn suspension(v: &Element) -> Result<SelfAdjoint> {
    let (m, n) = v.shape();
    let top = corner_embed(v, 0, m, m + n, m + n)?;
    SelfAdjoint::new(top.add(&top.adjoint())?)
}

/// Scalar action alpha v beta with complex matrices acting by amplification
/// (alpha (x) I_{d_j} on each block).
pub fn scalar_act(alpha: &CMat, v: &Element, beta: &CMat) -> Result<Element> {
    let (m, n) = v.shape();
    if alpha.cols() != m || beta.rows() != n {
        return Err(Error::ShapeError(format!(
            "scalar action shapes: alpha is {:?}, beta is {:?}, element is {:?}",
            alpha.shape(),
            beta.shape(),
            v.shape()
        )));
    }
    let dims = v.model().block_dims().to_vec();
    let blocks = v
        .blocks()
        .iter()
        .zip(&dims)
        .map(|(b, &d)| alpha.kron_identity(d).mul(b).mul(&beta.kron_identity(d)))
        .collect();
    Element::new(v.model().clone(), alpha.rows(), beta.cols(), blocks)
}

/// Left scalar action alpha v.
pub fn scalar_left(alpha: &CMat, v: &Element) -> Result<Element> {
    let n = v.shape().1;
    scalar_act(alpha, v, &CMat::identity(n))
}

/// Right scalar action v beta.
pub fn scalar_right(v: &Element, beta: &CMat) -> Result<Element> {
    let m = v.shape().0;
    scalar_act(&CMat::identity(m), v, beta)
}

/// Orthogonality of rectangular elements, decided on the suspensions.
pub fn ortho_rect(u: &Element, v: &Element) -> Result<bool> {
    if !u.same_model(v) {
        return Err(Error::ModelMismatch);
    }
    if u.shape() != v.shape() {
        return Err(Error::ShapeError("orthogonality needs equal shapes".into()));
    }
    absolute::ortho_general_sa(&suspension(u)?, &suspension(v)?)
}

/// The order-unit matrix norm by bisection:
/// ||v|| = inf { k > 0 : [[k e, v],[v^*, k e]] positive }.
///
/// The PSD test runs at the sharp eps_offdiag threshold rather than eps_psd;
/// an eps_psd-sized slack would bias the infimum by ~eps_psd * ||v||, which
/// is above the 1e-8 agreement demanded against the singular-value route.
pub fn order_unit_norm(v: &Element) -> Result<f64> {
    let tol = *v.tol();
    let psd_at = |k: f64| -> bool {
        v.blocks().iter().all(|b| {
            let (rows, cols) = b.shape();
            let mut s = CMat::zeros(rows + cols, rows + cols);
            for i in 0..rows {
                s.set(i, i, num_complex::Complex64::new(k, 0.0));
            }
            for i in 0..cols {
                s.set(rows + i, rows + i, num_complex::Complex64::new(k, 0.0));
            }
            s.paste(0, rows, b);
            s.paste(rows, 0, &b.adjoint());
            linalg::is_psd_with(&s, &tol, tol.eps_offdiag)
        })
    };

    let upper = v.spectral_norm() + 1.0;
    if psd_at(0.0) {
        return Ok(0.0);
    }
    let mut lo = 0.0f64;
    let mut hi = upper;
    if !psd_at(hi) {
        return Err(Error::NoConvergence {
            sweeps: 0,
            off_mass: hi,
        });
    }
    let width = 1e-10 * upper.max(1.0);
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if psd_at(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Outcome of the orthogonality characterization for rectangular pairs.
#[derive(Debug, Clone)]
pub struct Prop5Report {
    pub orthogonal: bool,
    /// |u +/- v| = |u| + |v| and |u^* +/- v^*| = |u^*| + |v^*|.
    pub norm_identities: bool,
    /// |[u; v]| = |u| + |v| and |[u v]| = |u| (+) |v|; only evaluated on
    /// orthogonal pairs.
    pub stack_identities: Option<bool>,
    pub consistent: bool,
    pub worst_defect: f64,
}

pub fn check_prop5(u: &Element, v: &Element) -> Result<Prop5Report> {
    let eps = u.tol().eps_eq;
    let orthogonal = ortho_rect(u, v)?;

    let abs_u = abs_rect(u)?;
    let abs_v = abs_rect(v)?;
    let abs_us = abs_rect_star(u)?;
    let abs_vs = abs_rect_star(v)?;
    let sum = abs_u.add(&abs_v)?;
    let sum_star = abs_us.add(&abs_vs)?;

    let mut worst = 0.0f64;
    let mut norm_identities = true;
    for sgn in [1.0, -1.0] {
        let d = abs_rect(&u.add(&v.scale_re(sgn))?)?.eq_defect(&sum)?;
        let ds = abs_rect_star(&u.add(&v.scale_re(sgn))?)?.eq_defect(&sum_star)?;
        norm_identities &= d <= eps && ds <= eps;
        if norm_identities {
            worst = worst.max(d.max(ds));
        }
    }

    let stack_identities = if orthogonal {
        let col = abs_rect(&stack_rows(u, v)?)?;
        let d_col = col.eq_defect(&sum)?;
        let row = abs_rect(&stack_cols(u, v)?)?;
        let block_sum = SelfAdjoint::new(oplus(abs_u.element(), abs_v.element())?)?;
        let d_row = row.eq_defect(&block_sum)?;
        worst = worst.max(d_col.max(d_row));
        Some(d_col <= eps && d_row <= eps)
    } else {
        None
    };

    let consistent = orthogonal == norm_identities && stack_identities.unwrap_or(true);
    Ok(Prop5Report {
        orthogonal,
        norm_identities,
        stack_identities,
        consistent,
        worst_defect: worst,
    })
}

/// v = 0 iff |v| = 0 iff |v^*| = 0.
#[derive(Debug, Clone)]
pub struct ZeroPropReport {
    pub element_zero: bool,
    pub abs_zero: bool,
    pub abs_star_zero: bool,
    pub consistent: bool,
}

pub fn check_zero_prop(v: &Element) -> Result<ZeroPropReport> {
    let element_zero = v.is_zero();
    let abs_zero = abs_rect(v)?.is_zero();
    let abs_star_zero = abs_rect_star(v)?.is_zero();
    Ok(ZeroPropReport {
        element_zero,
        abs_zero,
        abs_star_zero,
        consistent: element_zero == abs_zero && abs_zero == abs_star_zero,
    })
}

/// || |v| || = ||v|| = || |v^*| ||, all via the bisection norm.
#[derive(Debug, Clone)]
pub struct NormPropReport {
    pub norm: f64,
    pub abs_norm: f64,
    pub abs_star_norm: f64,
    pub max_deviation: f64,
    pub within: bool,
}

pub const NORM_AGREEMENT_TOL: f64 = 1e-8;

pub fn check_norm_prop(v: &Element) -> Result<NormPropReport> {
    let norm = order_unit_norm(v)?;
    let abs_norm = order_unit_norm(abs_rect(v)?.element())?;
    let abs_star_norm = order_unit_norm(abs_rect_star(v)?.element())?;
    let max_deviation = (norm - abs_norm).abs().max((norm - abs_star_norm).abs());
    Ok(NormPropReport {
        norm,
        abs_norm,
        abs_star_norm,
        max_deviation,
        within: max_deviation <= NORM_AGREEMENT_TOL,
    })
}

/// Defects of the five structural absolute-value identities for one element:
/// isometry invariance, the suspension identity, the positive 2x2 block, and
/// the two zero-padding identities.
#[derive(Debug, Clone)]
pub struct StructuralReport {
    pub defects: [f64; 5],
    pub pass: bool,
}

pub fn check_structural_identities(
    v: &Element,
    alpha: &CMat,
    row_pad: usize,
    col_pad: usize,
) -> Result<StructuralReport> {
    let tol = *v.tol();
    let eps = tol.eps_eq;
    let (m, n) = v.shape();

    // alpha^* alpha = I  =>  |alpha v| = |v|
    let iso_defect = alpha
        .adjoint()
        .mul(alpha)
        .sub(&CMat::identity(m))
        .fro_norm();
    if iso_defect > eps * (m as f64).sqrt().max(1.0) {
        return Err(Error::NotIsometry { defect: iso_defect });
    }
    let d1 = abs_rect(&scalar_left(alpha, v)?)?.eq_defect(&abs_rect(v)?)?;

    // |[[0, v],[v^*, 0]]| = |v^*| (+) |v|
    let susp = suspension(v)?;
    let expected = SelfAdjoint::new(oplus(abs_rect_star(v)?.element(), abs_rect(v)?.element())?)?;
    let d2 = abs_sa(&susp)?.eq_defect(&expected)?;

    // [[|v^*|, v],[v^*, |v|]] positive
    let corner = {
        let top = corner_embed(v, 0, m, m + n, m + n)?;
        let diag = oplus(abs_rect_star(v)?.element(), abs_rect(v)?.element())?;
        SelfAdjoint::new(diag.add(&top)?.add(&top.adjoint())?)?
    };
    let d3 = if corner.is_positive() {
        0.0
    } else {
        f64::INFINITY
    };

    // |v| = |[v; 0]|
    let padded_rows = corner_embed(v, 0, 0, m + row_pad, n)?;
    let d4 = abs_rect(&padded_rows)?.eq_defect(&abs_rect(v)?)?;

    // |v| (+) 0_s = |[v 0]|
    let padded_cols = corner_embed(v, 0, 0, m, n + col_pad)?;
    let zero_pad = v.model().zero(col_pad, col_pad);
    let expected = SelfAdjoint::new(oplus(abs_rect(v)?.element(), &zero_pad)?)?;
    let d5 = abs_rect(&padded_cols)?.eq_defect(&expected)?;

    let defects = [d1, d2, d3, d4, d5];
    Ok(StructuralReport {
        pass: defects.iter().all(|&d| d <= eps),
        defects,
    })
}

/// Direct sums of positives are orthogonal exactly componentwise, and the
/// rectangular relation agrees with its two-sided absolute-value form.
#[derive(Debug, Clone)]
pub struct SumOrthoReport {
    pub oplus_ortho: bool,
    pub componentwise: bool,
    pub rect_relation: bool,
    pub abs_form: bool,
    pub consistent: bool,
}

pub fn check_sum_orthogonality(
    u1: &SelfAdjoint,
    u2: &SelfAdjoint,
    v1: &SelfAdjoint,
    v2: &SelfAdjoint,
    rect_pair: (&Element, &Element),
) -> Result<SumOrthoReport> {
    let lhs1 = SelfAdjoint::new(oplus(u1.element(), v1.element())?)?;
    let lhs2 = SelfAdjoint::new(oplus(u2.element(), v2.element())?)?;
    let oplus_ortho = absolute::ortho_pos(&lhs1, &lhs2)?;
    let componentwise = absolute::ortho_pos(u1, u2)? && absolute::ortho_pos(v1, v2)?;

    let (x, y) = rect_pair;
    let rect_relation = ortho_rect(x, y)?;
    let abs_form = absolute::ortho_pos(&abs_rect(x)?, &abs_rect(y)?)?
        && absolute::ortho_pos(&abs_rect_star(x)?, &abs_rect_star(y)?)?;

    Ok(SumOrthoReport {
        oplus_ortho,
        componentwise,
        rect_relation,
        abs_form,
        consistent: oplus_ortho == componentwise && rect_relation == abs_form,
    })
}
