//! Order projections, partial isometries and the element classes of the
//! model: classification predicates, certified wrappers, orthogonal sums,
//! conjugation, and seeded generators.
//!
//! Certified wrappers keep the worst verification residual so suites can
//! report margins instead of bare booleans.

use crate::absolute::{self, abs_sa};
use crate::element::{Element, Model, SelfAdjoint};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::matrix::{self, abs_rect, abs_rect_star};
use crate::sample;
use rand_chacha::ChaCha8Rng;

/// The element classes decidable from absolute-value identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementClass {
    Normal,
    Unitary,
    Symmetry,
    OrderProjection,
    PartialUnitary,
    PartialSymmetry,
    PartialIsometry,
    Isometry,
    CoIsometry,
}

impl ElementClass {
    pub fn label(&self) -> &'static str {
        match self {
            ElementClass::Normal => "normal",
            ElementClass::Unitary => "unitary",
            ElementClass::Symmetry => "symmetry",
            ElementClass::OrderProjection => "order-projection",
            ElementClass::PartialUnitary => "partial-unitary",
            ElementClass::PartialSymmetry => "partial-symmetry",
            ElementClass::PartialIsometry => "partial-isometry",
            ElementClass::Isometry => "isometry",
            ElementClass::CoIsometry => "co-isometry",
        }
    }

    pub fn from_label(label: &str) -> Option<ElementClass> {
        Some(match label {
            "normal" => ElementClass::Normal,
            "unitary" => ElementClass::Unitary,
            "symmetry" => ElementClass::Symmetry,
            "order-projection" => ElementClass::OrderProjection,
            "partial-unitary" => ElementClass::PartialUnitary,
            "partial-symmetry" => ElementClass::PartialSymmetry,
            "partial-isometry" => ElementClass::PartialIsometry,
            "isometry" => ElementClass::Isometry,
            "co-isometry" => ElementClass::CoIsometry,
            _ => return None,
        })
    }
}

/// A certified order projection: |2p - e| = e within eps_eq.
#[derive(Debug, Clone)]
pub struct Projection {
    element: SelfAdjoint,
    residual: f64,
}

impl Projection {
    pub fn element(&self) -> &SelfAdjoint {
        &self.element
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn level(&self) -> usize {
        self.element.level()
    }

    pub fn model(&self) -> &Model {
        self.element.model()
    }

    pub fn zero(model: &Model, n: usize) -> Projection {
        Projection {
            element: SelfAdjoint::zero(model, n),
            residual: 0.0,
        }
    }

    pub fn unit(model: &Model, n: usize) -> Projection {
        Projection {
            element: SelfAdjoint::unit(model, n),
            residual: 0.0,
        }
    }

    /// e^n - p, again a certified projection.
    pub fn complement(&self) -> Result<Projection> {
        let unit = SelfAdjoint::unit(self.model(), self.level());
        is_order_projection(&unit.sub(&self.element)?)
    }
}

/// A certified partial isometry: |v| and |v^*| are both order projections.
#[derive(Debug, Clone)]
pub struct PartialIsometry {
    element: Element,
    range_proj: Projection,
    support_proj: Projection,
}

impl PartialIsometry {
    pub fn element(&self) -> &Element {
        &self.element
    }

    /// |v^*|, the projection in M_m(V).
    pub fn range_proj(&self) -> &Projection {
        &self.range_proj
    }

    /// |v|, the projection in M_n(V).
    pub fn support_proj(&self) -> &Projection {
        &self.support_proj
    }

    pub fn residual(&self) -> f64 {
        self.range_proj.residual.max(self.support_proj.residual)
    }

    pub fn shape(&self) -> (usize, usize) {
        self.element.shape()
    }

    pub fn adjoint(&self) -> PartialIsometry {
        PartialIsometry {
            element: self.element.adjoint(),
            range_proj: self.support_proj.clone(),
            support_proj: self.range_proj.clone(),
        }
    }
}

/// Certify the order-projection identity |2p - e| = e, cross-checked with
/// p orthogonal to (e - p).
pub fn is_order_projection(p: &SelfAdjoint) -> Result<Projection> {
    let n = p.level();
    let unit = SelfAdjoint::unit(p.model(), n);
    let doubled = p.scale_re(2.0).sub(&unit)?;
    let residual = abs_sa(&doubled)?.eq_defect(&unit)?;
    if residual > p.tol().eps_eq {
        return Err(Error::NotProjection { residual });
    }
    let complement = unit.sub(p)?;
    let cross = p.is_positive() && complement.is_positive() && absolute::ortho_pos(p, &complement)?;
    if !cross {
        return Err(Error::NotProjection { residual });
    }
    Ok(Projection {
        element: p.clone(),
        residual,
    })
}

/// Certify that |v| and |v^*| are order projections.
pub fn certify_partial_isometry(v: &Element) -> Result<PartialIsometry> {
    let support_proj = is_order_projection(&abs_rect(v)?)?;
    let range_proj = is_order_projection(&abs_rect_star(v)?)?;
    Ok(PartialIsometry {
        element: v.clone(),
        range_proj,
        support_proj,
    })
}

/// Every class label that applies to `v`, each decided by its defining
/// absolute-value identity.
pub fn classify(v: &Element) -> Result<Vec<ElementClass>> {
    let (m, n) = v.shape();
    let abs = abs_rect(v)?;
    let abs_star = abs_rect_star(v)?;
    let abs_proj = is_order_projection(&abs).is_ok();
    let abs_star_proj = is_order_projection(&abs_star).is_ok();

    let mut classes = Vec::new();
    if m == n {
        let unit = SelfAdjoint::unit(v.model(), n);
        let normal = abs.approx_eq(&abs_star)?;
        let abs_is_unit = abs.approx_eq(&unit)?;
        let selfadj = SelfAdjoint::new(v.clone()).ok();
        if normal {
            classes.push(ElementClass::Normal);
            if abs_is_unit {
                classes.push(ElementClass::Unitary);
            }
            if abs_proj {
                classes.push(ElementClass::PartialUnitary);
            }
        }
        if let Some(sa) = selfadj {
            if abs_is_unit {
                classes.push(ElementClass::Symmetry);
            }
            if is_order_projection(&sa).is_ok() {
                classes.push(ElementClass::OrderProjection);
            }
            if abs_proj {
                classes.push(ElementClass::PartialSymmetry);
            }
        }
    }
    if abs_proj && abs_star_proj {
        classes.push(ElementClass::PartialIsometry);
        let unit_n = SelfAdjoint::unit(v.model(), n);
        if abs.approx_eq(&unit_n)? {
            classes.push(ElementClass::Isometry);
        }
        let unit_m = SelfAdjoint::unit(v.model(), m);
        if abs_star.approx_eq(&unit_m)? {
            classes.push(ElementClass::CoIsometry);
        }
    }
    classes.sort();
    Ok(classes)
}

/// Split a partial symmetry into its certified positive and negative
/// projection parts: v = v^+ - v^- with v^+ orthogonal to v^-.
pub fn ps_decompose(v: &SelfAdjoint) -> Result<(Projection, Projection)> {
    if !classify(v.element())?.contains(&ElementClass::PartialSymmetry) {
        return Err(Error::NotPartialSymmetry);
    }
    let plus = is_order_projection(&absolute::pos_part(v)?)
        .map_err(|e| Error::CertificationFailed(format!("positive part: {e}")))?;
    let minus = is_order_projection(&absolute::neg_part(v)?)
        .map_err(|e| Error::CertificationFailed(format!("negative part: {e}")))?;
    Ok((plus, minus))
}

/// Sum of pairwise-orthogonal partial isometries, certified, with
/// |sum v_i| = sum |v_i| verified.
pub fn pi_orthogonal_sum(vs: &[PartialIsometry]) -> Result<PartialIsometry> {
    if vs.is_empty() {
        return Err(Error::PreconditionViolated("empty family".into()));
    }
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            if !matrix::ortho_rect(vs[i].element(), vs[j].element())? {
                return Err(Error::NotOrthogonal);
            }
        }
    }
    let mut sum = vs[0].element().clone();
    let mut abs_sum = vs[0].support_proj().element().clone();
    for v in &vs[1..] {
        sum = sum.add(v.element())?;
        abs_sum = abs_sum.add(v.support_proj().element())?;
    }
    let out = certify_partial_isometry(&sum)
        .map_err(|e| Error::CertificationFailed(format!("orthogonal sum: {e}")))?;
    let defect = out.support_proj().element().eq_defect(&abs_sum)?;
    if defect > sum.tol().eps_eq {
        return Err(Error::CertificationFailed(format!(
            "absolute value of the sum deviates from the sum of absolute values by {defect:.3e}"
        )));
    }
    Ok(out)
}

/// p (+) q, certified in M_{m+n}(V).
pub fn proj_direct_sum(p: &Projection, q: &Projection) -> Result<Projection> {
    if p.model() != q.model() {
        return Err(Error::ModelMismatch);
    }
    let sum = matrix::oplus(p.element().element(), q.element().element())?;
    is_order_projection(&SelfAdjoint::new(sum)?)
}

/// Split a block-diagonal projection on M_{m+n}(V) back into certified
/// corner projections; fails if the off-diagonal corners are nonzero.
pub fn proj_split(r: &Projection, m: usize, n: usize) -> Result<(Projection, Projection)> {
    if r.level() != m + n {
        return Err(Error::ShapeError(format!(
            "projection level {} does not split as {m}+{n}",
            r.level()
        )));
    }
    let e = r.element().element();
    let off = matrix::corner_extract(e, 0, m, m, n)?;
    if !off.is_zero() {
        return Err(Error::PreconditionViolated(
            "projection is not block diagonal".into(),
        ));
    }
    let top = matrix::corner_extract(e, 0, 0, m, m)?;
    let bottom = matrix::corner_extract(e, m, m, n, n)?;
    Ok((
        is_order_projection(&SelfAdjoint::new(top)?)?,
        is_order_projection(&SelfAdjoint::new(bottom)?)?,
    ))
}

fn unitary_defect(alpha: &CMat) -> f64 {
    if !alpha.is_square() {
        return f64::INFINITY;
    }
    let n = alpha.rows();
    let id = CMat::identity(n);
    alpha
        .adjoint()
        .mul(alpha)
        .sub(&id)
        .fro_norm()
        .max(alpha.mul(&alpha.adjoint()).sub(&id).fro_norm())
}

fn isometry_defect(alpha: &CMat) -> f64 {
    alpha
        .adjoint()
        .mul(alpha)
        .sub(&CMat::identity(alpha.cols()))
        .fro_norm()
}

/// |alpha^* v alpha| = alpha^* |v| alpha for a scalar unitary alpha.
#[derive(Debug, Clone)]
pub struct ConjAbsReport {
    pub defect: f64,
    pub pass: bool,
}

pub fn unitary_conj_abs(alpha: &CMat, v: &Element) -> Result<ConjAbsReport> {
    let eps = v.tol().eps_eq;
    let d = unitary_defect(alpha);
    if d > eps * (alpha.rows() as f64).sqrt().max(1.0) {
        return Err(Error::NotUnitary { defect: d });
    }
    let alpha_star = alpha.adjoint();
    let lhs = abs_rect(&matrix::scalar_act(&alpha_star, v, alpha)?)?;
    let rhs = matrix::scalar_act(&alpha_star, abs_rect(v)?.element(), alpha)?;
    let defect = lhs.element().eq_defect(&rhs)?;
    Ok(ConjAbsReport {
        defect,
        pass: defect <= eps,
    })
}

/// alpha p alpha^* for a scalar isometry alpha (alpha^* alpha = I), certified.
pub fn isometry_conj_proj(alpha: &CMat, p: &Projection) -> Result<Projection> {
    let eps = p.element().tol().eps_eq;
    let d = isometry_defect(alpha);
    if d > eps * (alpha.cols() as f64).sqrt().max(1.0) {
        return Err(Error::NotIsometry { defect: d });
    }
    let conj = matrix::scalar_act(alpha, p.element().element(), &alpha.adjoint())?;
    is_order_projection(&SelfAdjoint::new(conj)?)
}

/// Conjugation by an isometry preserves orthogonality of positives.
pub fn conj_preserves_ortho(alpha: &CMat, u: &SelfAdjoint, v: &SelfAdjoint) -> Result<bool> {
    let cu = SelfAdjoint::new(matrix::scalar_act(alpha, u.element(), &alpha.adjoint())?)?;
    let cv = SelfAdjoint::new(matrix::scalar_act(alpha, v.element(), &alpha.adjoint())?)?;
    absolute::ortho_pos(&cu, &cv)
}

/// Complete a partial unitary to a unitary: u = v + (e - |v|), certified,
/// with v orthogonal to the completion.
pub fn complete_partial_unitary(v: &Element) -> Result<Element> {
    if !classify(v)?.contains(&ElementClass::PartialUnitary) {
        return Err(Error::NotPartialUnitary);
    }
    let n = v.shape().0;
    let unit = SelfAdjoint::unit(v.model(), n);
    let tail = unit.sub(&abs_rect(v)?)?;
    let u = v.add(tail.element())?;
    if !classify(&u)?.contains(&ElementClass::Unitary) {
        return Err(Error::CertificationFailed(
            "completion is not unitary".into(),
        ));
    }
    if !matrix::ortho_rect(v, tail.element())? {
        return Err(Error::CertificationFailed(
            "completion is not an ortho-complement".into(),
        ));
    }
    Ok(u)
}

/// Seeded projection with prescribed per-block ranks: Q diag(1^r, 0) Q^*.
pub fn random_projection_rng(
    model: &Model,
    n: usize,
    ranks: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<Projection> {
    if ranks.len() != model.block_count() {
        return Err(Error::ShapeError(format!(
            "expected {} ranks, got {}",
            model.block_count(),
            ranks.len()
        )));
    }
    let mut blocks = Vec::with_capacity(ranks.len());
    for (&rank, &d) in ranks.iter().zip(model.block_dims()) {
        let size = n * d;
        if rank > size {
            return Err(Error::RankOutOfRange { rank, dim: size });
        }
        let q = sample::haar_unitary_rng(size, rng);
        let mut diag = CMat::zeros(size, size);
        for i in 0..rank {
            diag.set(i, i, num_complex::Complex64::new(1.0, 0.0));
        }
        blocks.push(q.mul(&diag).mul(&q.adjoint()).hermitize());
    }
    let e = Element::new(model.clone(), n, n, blocks)?;
    is_order_projection(&SelfAdjoint::new(e)?)
}

pub fn random_projection(
    model: &Model,
    n: usize,
    ranks: &[usize],
    seed: u64,
) -> Result<Projection> {
    random_projection_rng(model, n, ranks, &mut sample::rng(seed))
}

/// Seeded partial isometry with prescribed per-block ranks, built as a
/// truncated product of Haar unitary frames.
pub fn random_partial_isometry_rng(
    model: &Model,
    m: usize,
    n: usize,
    ranks: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<PartialIsometry> {
    if ranks.len() != model.block_count() {
        return Err(Error::ShapeError(format!(
            "expected {} ranks, got {}",
            model.block_count(),
            ranks.len()
        )));
    }
    let mut blocks = Vec::with_capacity(ranks.len());
    for (&rank, &d) in ranks.iter().zip(model.block_dims()) {
        let rows = m * d;
        let cols = n * d;
        let cap = rows.min(cols);
        if rank > cap {
            return Err(Error::RankOutOfRange { rank, dim: cap });
        }
        let u = sample::haar_unitary_rng(rows, rng);
        let w = sample::haar_unitary_rng(cols, rng);
        let mut block = CMat::zeros(rows, cols);
        if rank > 0 {
            let u_r = u.slice(0, 0, rows, rank);
            let w_r = w.slice(0, 0, cols, rank);
            block = u_r.mul(&w_r.adjoint());
        }
        blocks.push(block);
    }
    let e = Element::new(model.clone(), m, n, blocks)?;
    certify_partial_isometry(&e)
}

pub fn random_partial_isometry(
    model: &Model,
    m: usize,
    n: usize,
    ranks: &[usize],
    seed: u64,
) -> Result<PartialIsometry> {
    random_partial_isometry_rng(model, m, n, ranks, &mut sample::rng(seed))
}

/// The four equivalent conditions on a pair of projections:
/// p + q <= e, p orthogonal to q, p + q a projection, p inf-orthogonal to q
/// (the last only when both are nonzero).
#[derive(Debug, Clone)]
pub struct ProjectionPairReport {
    pub sum_dominated: bool,
    pub orthogonal: bool,
    pub sum_is_projection: bool,
    pub inf_orthogonal: Option<bool>,
    pub all_equivalent: bool,
}

pub fn check_projection_pair(p: &Projection, q: &Projection) -> Result<ProjectionPairReport> {
    let unit = SelfAdjoint::unit(p.model(), p.level());
    let sum = p.element().add(q.element())?;
    let sum_dominated = unit.sub(&sum)?.is_positive();
    let orthogonal = absolute::ortho_pos(p.element(), q.element())?;
    let sum_is_projection = is_order_projection(&sum).is_ok();
    let inf_orthogonal = if p.element().is_zero() || q.element().is_zero() {
        None
    } else {
        Some(absolute::ortho_inf(p.element(), q.element())?)
    };
    let all_equivalent = sum_dominated == orthogonal
        && orthogonal == sum_is_projection
        && inf_orthogonal.is_none_or(|x| x == orthogonal);
    Ok(ProjectionPairReport {
        sum_dominated,
        orthogonal,
        sum_is_projection,
        inf_orthogonal,
        all_equivalent,
    })
}

/// If 0 <= u, v <= e, u + v is a projection and u is orthogonal to v, then
/// u and v are projections.
pub fn check_ortho_sum_projections(u: &SelfAdjoint, v: &SelfAdjoint) -> Result<bool> {
    let unit = SelfAdjoint::unit(u.model(), u.level());
    let bounded = u.is_positive()
        && v.is_positive()
        && unit.sub(u)?.is_positive()
        && unit.sub(v)?.is_positive();
    if !bounded {
        return Err(Error::PreconditionViolated(
            "inputs must lie in [0, e]".into(),
        ));
    }
    let sum = u.add(v)?;
    if is_order_projection(&sum).is_err() || !absolute::ortho_pos(u, v)? {
        return Err(Error::PreconditionViolated(
            "u + v must be a projection with u orthogonal to v".into(),
        ));
    }
    Ok(is_order_projection(u).is_ok() && is_order_projection(v).is_ok())
}

/// The three equivalent partial-isometry certificates for a rectangular v:
/// v itself, the diagonal suspension diag(v^*, v), and the off-diagonal
/// suspension (a partial symmetry), plus the shared absolute-value identity.
#[derive(Debug, Clone)]
pub struct SuspensionReport {
    pub direct: bool,
    pub diagonal: bool,
    pub off_diagonal: bool,
    pub abs_identity: bool,
    pub consistent: bool,
}

pub fn check_suspension_equivalence(v: &Element) -> Result<SuspensionReport> {
    let direct = certify_partial_isometry(v).is_ok();
    let diag = matrix::oplus(&v.adjoint(), v)?;
    let diagonal = certify_partial_isometry(&diag).is_ok();
    let susp = matrix::suspension(v)?;
    let off_diagonal = classify(susp.element())?.contains(&ElementClass::PartialSymmetry);

    let expected = SelfAdjoint::new(matrix::oplus(
        abs_rect_star(v)?.element(),
        abs_rect(v)?.element(),
    )?)?;
    let defect = abs_sa(&susp)?
        .eq_defect(&expected)?
        .max(abs_rect(&diag)?.eq_defect(&expected)?);
    let abs_identity = defect <= v.tol().eps_eq;

    let consistent = direct == diagonal && diagonal == off_diagonal;
    Ok(SuspensionReport {
        direct,
        diagonal,
        off_diagonal,
        abs_identity,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn m2() -> Model {
        Model::with_default_tol(vec![2]).unwrap()
    }

    fn e12(model: &Model) -> Element {
        let mut b = CMat::zeros(2, 2);
        b.set(0, 1, Complex64::new(1.0, 0.0));
        Element::new(model.clone(), 1, 1, vec![b]).unwrap()
    }

    fn sa_diag(model: &Model, d: &[f64]) -> SelfAdjoint {
        let e = Element::new(model.clone(), 1, 1, vec![CMat::diag_real(d)]).unwrap();
        SelfAdjoint::new(e).unwrap()
    }

    #[test]
    fn classify_e12() {
        let m = m2();
        let classes = classify(&e12(&m)).unwrap();
        assert_eq!(classes, vec![ElementClass::PartialIsometry]);
    }

    #[test]
    fn classify_swap_symmetry() {
        let m = m2();
        let b = CMat::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let v = Element::new(m.clone(), 1, 1, vec![b]).unwrap();
        let classes = classify(&v).unwrap();
        for c in [
            ElementClass::Normal,
            ElementClass::Unitary,
            ElementClass::Symmetry,
            ElementClass::PartialUnitary,
            ElementClass::PartialSymmetry,
            ElementClass::PartialIsometry,
            ElementClass::Isometry,
            ElementClass::CoIsometry,
        ] {
            assert!(classes.contains(&c), "missing {c:?}");
        }
        assert!(!classes.contains(&ElementClass::OrderProjection));
    }

    #[test]
    fn classify_unit() {
        let m = m2();
        let classes = classify(&m.unit(2)).unwrap();
        assert!(classes.contains(&ElementClass::OrderProjection));
        assert!(classes.contains(&ElementClass::Unitary));
        assert!(classes.contains(&ElementClass::Normal));
    }

    #[test]
    fn order_projection_certification() {
        let m = m2();
        assert!(is_order_projection(&sa_diag(&m, &[1.0, 0.0])).is_ok());
        let half = SelfAdjoint::unit(&m, 1).scale_re(0.5);
        assert!(matches!(
            is_order_projection(&half),
            Err(Error::NotProjection { .. })
        ));
        // spectral projection of a seeded Hermitian certifies
        let p = random_projection(&m, 2, &[2], 5).unwrap();
        assert!(p.residual() <= 1e-9);
    }

    #[test]
    fn spectral_projection_certifies() {
        // Oracle: the projection onto the positive eigenspace of a Hermitian
        // matrix is built directly from its eigenvectors.
        let m = Model::with_default_tol(vec![3]).unwrap();
        let h = sample::gaussian_hermitian(3, 61);
        let eig = crate::linalg::herm_eig(&h, m.tol()).unwrap();
        let mut block = CMat::zeros(3, 3);
        for (k, &l) in eig.values.iter().enumerate() {
            if l > 0.0 {
                let col = eig.vectors.column(k);
                for (a, &x) in col.iter().enumerate() {
                    for (b, &y) in col.iter().enumerate() {
                        let z = block.get(a, b) + x * y.conj();
                        block.set(a, b, z);
                    }
                }
            }
        }
        let sa = SelfAdjoint::new(Element::new(m, 1, 1, vec![block.hermitize()]).unwrap()).unwrap();
        let p = is_order_projection(&sa).unwrap();
        assert!(p.residual() <= 1e-9);
    }

    #[test]
    fn ps_decompose_cases() {
        let m = m2();
        let v = sa_diag(&m, &[1.0, -1.0]);
        let (plus, minus) = ps_decompose(&v).unwrap();
        assert!(plus.element().approx_eq(&sa_diag(&m, &[1.0, 0.0])).unwrap());
        assert!(minus
            .element()
            .approx_eq(&sa_diag(&m, &[0.0, 1.0]))
            .unwrap());

        // a projection decomposes as (p, 0)
        let p = sa_diag(&m, &[1.0, 0.0]);
        let (plus, minus) = ps_decompose(&p).unwrap();
        assert!(plus.element().approx_eq(&p).unwrap());
        assert!(minus.element().is_zero());

        // conjugated symmetry decomposes into certified parts
        let q = sample::haar_unitary(2, 9);
        let sym = q
            .mul(&CMat::diag_real(&[1.0, -1.0]))
            .mul(&q.adjoint())
            .hermitize();
        let v = SelfAdjoint::new(Element::new(m.clone(), 1, 1, vec![sym]).unwrap()).unwrap();
        let (plus, minus) = ps_decompose(&v).unwrap();
        assert!(plus.residual() <= 1e-9 && minus.residual() <= 1e-9);

        // non partial symmetry is rejected
        let bad = sa_diag(&m, &[2.0, -1.0]);
        assert!(matches!(ps_decompose(&bad), Err(Error::NotPartialSymmetry)));
    }

    #[test]
    fn orthogonal_sum_of_matrix_units() {
        let m = m2();
        let v = certify_partial_isometry(&e12(&m)).unwrap();
        let w = certify_partial_isometry(&e12(&m).adjoint()).unwrap();
        let sum = pi_orthogonal_sum(&[v.clone(), w]).unwrap();
        // the sum is the swap unitary
        assert!(classify(sum.element())
            .unwrap()
            .contains(&ElementClass::Unitary));
        // singleton family returns itself
        let solo = pi_orthogonal_sum(std::slice::from_ref(&v)).unwrap();
        assert!(solo.element().approx_eq(v.element()).unwrap());
        // non-orthogonal family is rejected
        assert!(matches!(
            pi_orthogonal_sum(&[v.clone(), v]),
            Err(Error::NotOrthogonal)
        ));
    }

    #[test]
    fn three_disjoint_matrix_units() {
        let m = Model::with_default_tol(vec![3]).unwrap();
        let unit = |i: usize, j: usize| {
            let mut b = CMat::zeros(3, 3);
            b.set(i, j, Complex64::new(1.0, 0.0));
            certify_partial_isometry(&Element::new(m.clone(), 1, 1, vec![b]).unwrap()).unwrap()
        };
        let sum = pi_orthogonal_sum(&[unit(0, 1), unit(1, 2), unit(2, 0)]).unwrap();
        assert!(classify(sum.element())
            .unwrap()
            .contains(&ElementClass::Unitary));
    }

    #[test]
    fn direct_sum_and_split() {
        let m = m2();
        let p = random_projection(&m, 1, &[1], 7).unwrap();
        let q = random_projection(&m, 2, &[3], 8).unwrap();
        let sum = proj_direct_sum(&p, &q).unwrap();
        assert_eq!(sum.level(), 3);
        let (p2, q2) = proj_split(&sum, 1, 2).unwrap();
        assert!(p2.element().approx_eq(p.element()).unwrap());
        assert!(q2.element().approx_eq(q.element()).unwrap());
    }

    #[test]
    fn conjugation_checks() {
        let m = m2();
        let v = sample::element(&m, 2, 2, 70);
        let alpha = sample::haar_unitary(2, 71);
        let rep = unitary_conj_abs(&alpha, &v).unwrap();
        assert!(rep.pass, "defect {}", rep.defect);

        // permutation unitary on a diagonal element permutes the absolute value
        let perm = CMat::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let rep = unitary_conj_abs(&perm, &v).unwrap();
        assert!(rep.pass);

        // non-unitary rejected
        let bad = CMat::diag_real(&[2.0, 1.0]);
        assert!(matches!(
            unitary_conj_abs(&bad, &v),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn isometry_conjugation() {
        let m = m2();
        let p = random_projection(&m, 1, &[1], 73).unwrap();
        // alpha = [I; 0] embeds p as p (+) 0
        let mut alpha = CMat::zeros(3, 1);
        alpha.set(0, 0, Complex64::new(1.0, 0.0));
        let conj = isometry_conj_proj(&alpha, &p).unwrap();
        assert_eq!(conj.level(), 3);

        let id = CMat::identity(1);
        let same = isometry_conj_proj(&id, &p).unwrap();
        assert!(same.element().approx_eq(p.element()).unwrap());

        let alpha = sample::haar_isometry(3, 2, 74);
        let q = random_projection(&m, 2, &[2], 75).unwrap();
        let conj = isometry_conj_proj(&alpha, &q).unwrap();
        assert!(conj.residual() <= 1e-9);

        // orthogonality preserved
        let (u, v) = sample::orthogonal_positive_pair(&m, 2, 76);
        assert!(conj_preserves_ortho(&alpha, &u, &v).unwrap());
    }

    #[test]
    fn partial_unitary_completion() {
        let m = m2();
        // unitary completes to itself
        let u = sample::haar_unitary(2, 80);
        let ue = Element::new(m.clone(), 1, 1, vec![u]).unwrap();
        let completed = complete_partial_unitary(&ue).unwrap();
        assert!(completed.approx_eq(&ue).unwrap());

        // zero completes to the unit
        let z = m.zero(2, 2);
        let completed = complete_partial_unitary(&z).unwrap();
        assert!(completed.approx_eq(&m.unit(2)).unwrap());

        // a diagonal-block partial unitary completes
        let b = CMat::diag_real(&[1.0, 0.0]);
        let v = Element::new(m.clone(), 1, 1, vec![b]).unwrap();
        let completed = complete_partial_unitary(&v).unwrap();
        assert!(classify(&completed)
            .unwrap()
            .contains(&ElementClass::Unitary));

        // partial isometry that is not a partial unitary is rejected
        assert!(matches!(
            complete_partial_unitary(&e12(&m)),
            Err(Error::NotPartialUnitary)
        ));
    }

    #[test]
    fn random_generators_certify() {
        let m = Model::with_default_tol(vec![1, 2]).unwrap();
        let zero = random_projection(&m, 2, &[0, 0], 90).unwrap();
        assert!(zero.element().is_zero());
        let full = random_projection(&m, 2, &[2, 4], 91).unwrap();
        assert!(full.element().approx_eq(&SelfAdjoint::unit(&m, 2)).unwrap());
        let p = random_projection(&m, 2, &[1, 2], 5).unwrap();
        assert!(p.residual() <= 1e-9);
        assert!(matches!(
            random_projection(&m, 1, &[2, 1], 92),
            Err(Error::RankOutOfRange { .. })
        ));

        let v = random_partial_isometry(&m, 2, 3, &[1, 3], 93).unwrap();
        assert!(v.residual() <= 1e-9);
        assert!(matches!(
            random_partial_isometry(&m, 1, 2, &[2, 1], 94),
            Err(Error::RankOutOfRange { .. })
        ));
    }

    #[test]
    fn projection_pair_equivalences() {
        let m = m2();
        // orthogonal pair: all four conditions true
        let base = random_projection(&m, 2, &[4], 95).unwrap();
        let _ = base;
        let q = sample::haar_unitary(4, 96);
        let diag = |d: &[f64]| {
            let mm = q.mul(&CMat::diag_real(d)).mul(&q.adjoint()).hermitize();
            is_order_projection(
                &SelfAdjoint::new(Element::new(m.clone(), 2, 2, vec![mm]).unwrap()).unwrap(),
            )
            .unwrap()
        };
        let p1 = diag(&[1.0, 1.0, 0.0, 0.0]);
        let p2 = diag(&[0.0, 0.0, 1.0, 0.0]);
        let rep = check_projection_pair(&p1, &p2).unwrap();
        assert!(rep.all_equivalent && rep.orthogonal);

        // overlapping pair: all four conditions false
        let p3 = diag(&[1.0, 0.0, 1.0, 0.0]);
        let rep = check_projection_pair(&p1, &p3).unwrap();
        assert!(rep.all_equivalent && !rep.orthogonal);
    }

    #[test]
    fn ortho_sum_projection_halves() {
        let m = m2();
        let q = sample::haar_unitary(2, 97);
        let d = |v: &[f64]| {
            SelfAdjoint::new(
                Element::new(
                    m.clone(),
                    1,
                    1,
                    vec![q.mul(&CMat::diag_real(v)).mul(&q.adjoint()).hermitize()],
                )
                .unwrap(),
            )
            .unwrap()
        };
        let u = d(&[1.0, 0.0]);
        let v = d(&[0.0, 1.0]);
        assert!(check_ortho_sum_projections(&u, &v).unwrap());
        // precondition violation: parts not dominated by e
        let big = d(&[2.0, 0.0]);
        assert!(check_ortho_sum_projections(&big, &v).is_err());
    }

    #[test]
    fn suspension_equivalence() {
        let m = m2();
        let rep = check_suspension_equivalence(&e12(&m)).unwrap();
        assert!(rep.consistent && rep.direct && rep.abs_identity);

        // generic element: all three certificates fail together
        let g = sample::element(&m, 1, 1, 98);
        let rep = check_suspension_equivalence(&g).unwrap();
        assert!(rep.consistent && !rep.direct);
    }
}
