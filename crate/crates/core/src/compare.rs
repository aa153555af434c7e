//! Comparison of order projections: partial-isometric equivalence with
//! constructive witnesses, sub-equivalence, unitary equivalence, the (H) and
//! (T) constructions, witness splitting and composition, and the relation
//! laws built on them.
//!
//! No witness is trusted by construction: every returned witness re-certifies
//! its absolute-value identities from scratch.

use num_complex::Complex64;

use crate::absolute;
use crate::element::{Element, SelfAdjoint};
use crate::error::{Error, Result};
use crate::isometry::{
    certify_partial_isometry, is_order_projection, proj_direct_sum, ElementClass, PartialIsometry,
    Projection,
};
use crate::linalg::{self, CMat};
use crate::matrix::{self, abs_rect, abs_rect_star};

/// Eigenvalues above this count as 1 when reading ranks off a certified
/// projection; its spectrum sits within eps_psd of {0, 1}.
const RANK_THRESHOLD: f64 = 0.5;

/// Per-block ranks of a certified projection.
pub fn ranks(p: &Projection) -> Result<Vec<usize>> {
    let tol = *p.element().tol();
    let mut out = Vec::new();
    for b in p.element().element().blocks() {
        let eig = linalg::herm_eig(b, &tol)?;
        out.push(eig.values.iter().filter(|&&l| l > RANK_THRESHOLD).count());
    }
    Ok(out)
}

fn lex_less(a: &[Complex64], b: &[Complex64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x.re != y.re {
            return x.re < y.re;
        }
        if x.im != y.im {
            return x.im < y.im;
        }
    }
    false
}

/// Orthonormal basis of the range of each block of a certified projection:
/// eigenvectors with eigenvalue above 1/2, ordered by descending eigenvalue
/// with a lexicographic tie-break on phase-normalized coordinates.
pub fn range_basis(p: &Projection) -> Result<Vec<Vec<Vec<Complex64>>>> {
    let tol = *p.element().tol();
    let mut out = Vec::new();
    for b in p.element().element().blocks() {
        let eig = linalg::herm_eig(b, &tol)?;
        let mut pairs: Vec<(f64, Vec<Complex64>)> = eig
            .values
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l > RANK_THRESHOLD)
            .map(|(k, &l)| (l, eig.vectors.column(k)))
            .collect();
        pairs.sort_by(|(la, ca), (lb, cb)| {
            if (la - lb).abs() > 1e-9 {
                lb.partial_cmp(la).unwrap()
            } else if lex_less(ca, cb) {
                std::cmp::Ordering::Less
            } else if lex_less(cb, ca) {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        out.push(pairs.into_iter().map(|(_, c)| c).collect());
    }
    Ok(out)
}

/// A certified witness of p ~ q: a partial isometry v with |v^*| = p and
/// |v| = q.
#[derive(Debug, Clone)]
pub struct EquivalenceWitness {
    v: PartialIsometry,
    p: Projection,
    q: Projection,
}

impl EquivalenceWitness {
    /// Re-certify the defining identities from scratch and wrap the result.
    pub fn certify(element: &Element, p: &Projection, q: &Projection) -> Result<Self> {
        let v = certify_partial_isometry(element)
            .map_err(|e| Error::CertificationFailed(format!("witness element: {e}")))?;
        let eps = element.tol().eps_eq;
        let d_range = abs_rect_star(element)?.eq_defect(p.element())?;
        let d_support = abs_rect(element)?.eq_defect(q.element())?;
        if d_range > eps || d_support > eps {
            return Err(Error::CertificationFailed(format!(
                "witness absolute values deviate from the endpoints by {:.3e}",
                d_range.max(d_support)
            )));
        }
        Ok(EquivalenceWitness {
            v,
            p: p.clone(),
            q: q.clone(),
        })
    }

    pub fn witness(&self) -> &PartialIsometry {
        &self.v
    }

    pub fn p(&self) -> &Projection {
        &self.p
    }

    pub fn q(&self) -> &Projection {
        &self.q
    }

    pub fn residual(&self) -> f64 {
        self.v.residual()
    }

    /// The adjoint witness certifies q ~ p.
    pub fn adjoint(&self) -> Result<EquivalenceWitness> {
        EquivalenceWitness::certify(&self.v.element().adjoint(), &self.q, &self.p)
    }
}

/// Decide p ~ q blockwise by rank and construct the canonical witness
/// v = sum_i xi_i eta_i^* over paired range bases.
pub fn equivalent(p: &Projection, q: &Projection) -> Result<EquivalenceWitness> {
    if p.model() != q.model() {
        return Err(Error::ModelMismatch);
    }
    let p_ranks = ranks(p)?;
    let q_ranks = ranks(q)?;
    if p_ranks != q_ranks {
        return Err(Error::NotEquivalent { p_ranks, q_ranks });
    }
    let p_basis = range_basis(p)?;
    let q_basis = range_basis(q)?;
    let m = p.level();
    let n = q.level();
    let dims = p.model().block_dims().to_vec();
    let mut blocks = Vec::with_capacity(dims.len());
    for (j, &d) in dims.iter().enumerate() {
        let mut block = CMat::zeros(m * d, n * d);
        for (xi, eta) in p_basis[j].iter().zip(&q_basis[j]) {
            for (r, &x) in xi.iter().enumerate() {
                for (c, &y) in eta.iter().enumerate() {
                    let z = block.get(r, c) + x * y.conj();
                    block.set(r, c, z);
                }
            }
        }
        blocks.push(block);
    }
    let v = Element::new(p.model().clone(), m, n, blocks)?;
    EquivalenceWitness::certify(&v, p, q)
}

fn dominance_defect(big: &SelfAdjoint, small: &SelfAdjoint) -> Result<f64> {
    let gap = big.sub(small)?;
    Ok((-gap.element().min_eigenvalue()?).max(0.0))
}

/// Condition (H): cut a partial isometry u along a sub-projection p of its
/// support, u_1 = u p, and certify u_1, its orthogonal complement in u, and
/// |u_1| = p.
pub fn cond_h_witness(u: &PartialIsometry, p: &Projection) -> Result<PartialIsometry> {
    let tol = u.element().tol().eps_psd;
    let defect = dominance_defect(u.support_proj().element(), p.element())?;
    if defect > tol {
        return Err(Error::NotDominated { defect });
    }
    let u1 = u.element().mul(p.element().element())?;
    let cut = certify_partial_isometry(&u1)
        .map_err(|e| Error::CertificationFailed(format!("cut u p: {e}")))?;
    let rest = u.element().sub(&u1)?;
    if !matrix::ortho_rect(&u1, &rest)? {
        return Err(Error::CertificationFailed(
            "cut is not orthogonal to the remainder".into(),
        ));
    }
    let eps = u.element().tol().eps_eq;
    let d = cut.support_proj().element().eq_defect(p.element())?;
    if d > eps {
        return Err(Error::CertificationFailed(format!(
            "support of the cut deviates from p by {d:.3e}"
        )));
    }
    Ok(cut)
}

/// Condition (T): for partial isometries with equal support, w = v u^* is a
/// partial isometry with |w| = |u^*| and |w^*| = |v^*| (equivalently
/// w^* w = u u^* and w w^* = v v^*).
pub fn cond_t_witness(u: &PartialIsometry, v: &PartialIsometry) -> Result<PartialIsometry> {
    if !u
        .support_proj()
        .element()
        .approx_eq(v.support_proj().element())?
    {
        return Err(Error::SupportMismatch);
    }
    let w = v.element().mul(&u.element().adjoint())?;
    let out = certify_partial_isometry(&w)
        .map_err(|e| Error::CertificationFailed(format!("composite v u^*: {e}")))?;
    let eps = u.element().tol().eps_eq;
    let d_support = out
        .support_proj()
        .element()
        .eq_defect(u.range_proj().element())?;
    let d_range = out
        .range_proj()
        .element()
        .eq_defect(v.range_proj().element())?;
    if d_support > eps || d_range > eps {
        return Err(Error::CertificationFailed(format!(
            "composite absolute values deviate by {:.3e}",
            d_support.max(d_range)
        )));
    }
    Ok(out)
}

/// Split a witness of p ~ q along p_1 <= p into certified witnesses
/// p_1 ~ q_1 and (p - p_1) ~ (q - q_1), cutting on the p side: v_1 = p_1 v.
pub fn lemma13_split(
    w: &EquivalenceWitness,
    p1: &Projection,
) -> Result<(Projection, EquivalenceWitness, EquivalenceWitness)> {
    let defect = dominance_defect(w.p().element(), p1.element())?;
    if defect > w.p().element().tol().eps_psd {
        return Err(Error::NotDominated { defect });
    }
    let v = w.witness().element();
    let v1 = p1.element().element().mul(v)?;
    let q1 = is_order_projection(&abs_rect(&v1)?)
        .map_err(|e| Error::CertificationFailed(format!("cut support: {e}")))?;
    let w1 = EquivalenceWitness::certify(&v1, p1, &q1)?;

    let p2 = is_order_projection(&w.p().element().sub(p1.element())?)
        .map_err(|e| Error::CertificationFailed(format!("complement of the cut: {e}")))?;
    let q2 = is_order_projection(&w.q().element().sub(q1.element())?)
        .map_err(|e| Error::CertificationFailed(format!("complement support: {e}")))?;
    let w2 = EquivalenceWitness::certify(&v.sub(&v1)?, &p2, &q2)?;

    if dominance_defect(w.q().element(), q1.element())? > w.q().element().tol().eps_psd {
        return Err(Error::CertificationFailed(
            "cut support is not dominated by q".into(),
        ));
    }
    Ok((q1, w1, w2))
}

/// A certified witness of p <~ q: p ~ r <= q, together with the complement
/// p_0 = q - r and a witness of q ~ p (+) p_0.
#[derive(Debug, Clone)]
pub struct SubEquivalenceWitness {
    pub r: Projection,
    pub inner: EquivalenceWitness,
    pub complement: Projection,
    pub roundtrip: EquivalenceWitness,
}

/// Decide p <~ q blockwise by rank; r is spanned by rank(p_j) eigenvectors
/// of q_j, so r <= q holds by construction and is re-checked.
pub fn subequivalent(p: &Projection, q: &Projection) -> Result<SubEquivalenceWitness> {
    if p.model() != q.model() {
        return Err(Error::ModelMismatch);
    }
    let p_ranks = ranks(p)?;
    let q_ranks = ranks(q)?;
    if p_ranks.iter().zip(&q_ranks).any(|(rp, rq)| rp > rq) {
        return Err(Error::NotSubEquivalent { p_ranks, q_ranks });
    }
    let q_basis = range_basis(q)?;
    let n = q.level();
    let dims = q.model().block_dims().to_vec();
    let mut blocks = Vec::with_capacity(dims.len());
    for (j, &d) in dims.iter().enumerate() {
        let mut block = CMat::zeros(n * d, n * d);
        for eta in q_basis[j].iter().take(p_ranks[j]) {
            for (r, &x) in eta.iter().enumerate() {
                for (c, &y) in eta.iter().enumerate() {
                    let z = block.get(r, c) + x * y.conj();
                    block.set(r, c, z);
                }
            }
        }
        blocks.push(block.hermitize());
    }
    let r = is_order_projection(&SelfAdjoint::new(Element::new(
        q.model().clone(),
        n,
        n,
        blocks,
    )?)?)?;
    if dominance_defect(q.element(), r.element())? > q.element().tol().eps_psd {
        return Err(Error::CertificationFailed(
            "selected sub-projection is not dominated by q".into(),
        ));
    }
    let inner = equivalent(p, &r)?;
    let complement = is_order_projection(&q.element().sub(r.element())?)?;
    let direct = proj_direct_sum(p, &complement)?;
    let roundtrip = equivalent(q, &direct)?;
    Ok(SubEquivalenceWitness {
        r,
        inner,
        complement,
        roundtrip,
    })
}

/// A certified unitary equivalence: u = v + w with v an ortho-component of
/// the unitary u, |v^*| = p, |v| = q, and w matching the complements.
#[derive(Debug, Clone)]
pub struct UnitaryEquivalence {
    pub unitary: Element,
    pub component: EquivalenceWitness,
    pub complement_component: EquivalenceWitness,
}

/// Decide p ~u q on one level via the two rank equalities (p ~ q and
/// e - p ~ e - q) and build the unitary u = v + w from the two witnesses.
pub fn unitarily_equivalent(p: &Projection, q: &Projection) -> Result<UnitaryEquivalence> {
    if p.level() != q.level() {
        return Err(Error::ShapeError(
            "unitary equivalence needs a common level".into(),
        ));
    }
    let pc = p.complement()?;
    let qc = q.complement()?;
    if ranks(p)? != ranks(q)? || ranks(&pc)? != ranks(&qc)? {
        return Err(Error::NotUnitarilyEquivalent);
    }
    let component = equivalent(p, q)?;
    let complement_component = equivalent(&pc, &qc)?;
    let u = component
        .witness()
        .element()
        .add(complement_component.witness().element())?;
    if !crate::isometry::classify(&u)?.contains(&ElementClass::Unitary) {
        return Err(Error::CertificationFailed(
            "assembled element is not unitary".into(),
        ));
    }
    if !matrix::ortho_rect(
        component.witness().element(),
        complement_component.witness().element(),
    )? {
        return Err(Error::CertificationFailed(
            "assembled components are not orthogonal".into(),
        ));
    }
    Ok(UnitaryEquivalence {
        unitary: u,
        component,
        complement_component,
    })
}

/// Compose witnesses of p ~ q and q ~ r into a certified witness of p ~ r
/// through the condition (T) construction.
pub fn transitive_witness(
    w_pq: &EquivalenceWitness,
    w_qr: &EquivalenceWitness,
) -> Result<EquivalenceWitness> {
    if !w_pq.q().element().approx_eq(w_qr.p().element())? {
        return Err(Error::SupportMismatch);
    }
    // w_qr's adjoint shares support |.| = q with w_pq's witness.
    let flipped = w_qr.witness().adjoint();
    let composite = cond_t_witness(w_pq.witness(), &flipped)?;
    EquivalenceWitness::certify(&composite.element().adjoint(), w_pq.p(), w_qr.q())
}

/// Clause-by-clause outcome of the algebra of ~ on direct sums.
#[derive(Debug, Clone)]
pub struct Prop15Report {
    /// (1) p ~ p (+) 0 and p ~ 0 (+) p.
    pub padding: bool,
    /// (2) orthogonal sums of equivalent pairs are equivalent.
    pub orthogonal_sum: bool,
    /// (3) direct sums of equivalent pairs are equivalent.
    pub direct_sum: bool,
    /// (4) p (+) q ~ q (+) p via the swap witness.
    pub swap: bool,
    /// (5) p + q ~ p (+) q for orthogonal p, q.
    pub sum_vs_direct_sum: bool,
    /// (6) associativity of (+), exact.
    pub associative: bool,
    pub pass: bool,
    pub worst_residual: f64,
}

/// Verify the six direct-sum clauses on (p, q, p_perp, q_perp), where
/// rank(p) = rank(q), rank(p_perp) = rank(q_perp), p is orthogonal to
/// p_perp and q is orthogonal to q_perp.
pub fn check_prop15(
    p: &Projection,
    q: &Projection,
    p_perp: &Projection,
    q_perp: &Projection,
) -> Result<Prop15Report> {
    // preconditions for clauses (2) and (5)
    if !absolute::ortho_pos(p.element(), p_perp.element())?
        || !absolute::ortho_pos(q.element(), q_perp.element())?
    {
        return Err(Error::PreconditionViolated(
            "clause (2) needs p orthogonal to p_perp and q orthogonal to q_perp".into(),
        ));
    }

    let mut worst = 0.0f64;
    // A clause holds when every witness it names certifies; the residual of
    // certified witnesses feeds the report margin.
    let mut clause = |witnesses: Result<Vec<EquivalenceWitness>>| -> bool {
        match witnesses {
            Ok(ws) => {
                for w in ws {
                    worst = worst.max(w.residual());
                }
                true
            }
            Err(_) => false,
        }
    };

    // (1) witnesses [p; 0] and [0; p]
    let m = p.level();
    let pad = q.level();
    let padding = clause((|| {
        let zero_pad = Projection::zero(p.model(), pad);
        let stacked = matrix::corner_embed(p.element().element(), 0, 0, m + pad, m)?;
        let w_top = EquivalenceWitness::certify(&stacked, &proj_direct_sum(p, &zero_pad)?, p)?;
        let stacked_low = matrix::corner_embed(p.element().element(), pad, 0, pad + m, m)?;
        let w_low = EquivalenceWitness::certify(&stacked_low, &proj_direct_sum(&zero_pad, p)?, p)?;
        Ok(vec![w_top, w_low])
    })());

    // (2) sum of witnesses
    let orthogonal_sum = clause((|| {
        let w1 = equivalent(p, q)?;
        let w2 = equivalent(p_perp, q_perp)?;
        let sum_el = w1.witness().element().add(w2.witness().element())?;
        let p_sum = is_order_projection(&p.element().add(p_perp.element())?)?;
        let q_sum = is_order_projection(&q.element().add(q_perp.element())?)?;
        Ok(vec![EquivalenceWitness::certify(&sum_el, &p_sum, &q_sum)?])
    })());

    // (3) direct sum of witnesses
    let direct_sum = clause((|| {
        let w1 = equivalent(p, q)?;
        let w2 = equivalent(p_perp, q_perp)?;
        Ok(vec![EquivalenceWitness::certify(
            &matrix::oplus(w1.witness().element(), w2.witness().element())?,
            &proj_direct_sum(p, p_perp)?,
            &proj_direct_sum(q, q_perp)?,
        )?])
    })());

    // (4) swap witness [[0, q],[p, 0]]
    let swap = clause((|| {
        let n = q.level();
        let swap_el = matrix::corner_embed(q.element().element(), 0, m, n + m, m + n)?.add(
            &matrix::corner_embed(p.element().element(), n, 0, n + m, m + n)?,
        )?;
        Ok(vec![EquivalenceWitness::certify(
            &swap_el,
            &proj_direct_sum(q, p)?,
            &proj_direct_sum(p, q)?,
        )?])
    })());

    // (5) stack witness [p; p_perp], using the orthogonal same-level pair
    let sum_vs_direct_sum = clause((|| {
        let stack = matrix::stack_rows(p.element().element(), p_perp.element().element())?;
        Ok(vec![EquivalenceWitness::certify(
            &stack,
            &proj_direct_sum(p, p_perp)?,
            &is_order_projection(&p.element().add(p_perp.element())?)?,
        )?])
    })());

    // (6) associativity is exact block bookkeeping
    let left = matrix::oplus(
        &matrix::oplus(p.element().element(), q.element().element())?,
        p_perp.element().element(),
    )?;
    let right = matrix::oplus(
        p.element().element(),
        &matrix::oplus(q.element().element(), p_perp.element().element())?,
    )?;
    let associative = left.eq_defect(&right)? == 0.0;

    let pass = padding && orthogonal_sum && direct_sum && swap && sum_vs_direct_sum && associative;
    Ok(Prop15Report {
        padding,
        orthogonal_sum,
        direct_sum,
        swap,
        sum_vs_direct_sum,
        associative,
        pass,
        worst_residual: worst,
    })
}

/// Relation laws of ~ and <~ over a sample of projections on one model.
#[derive(Debug, Clone)]
pub struct PreorderReport {
    pub cases: usize,
    pub failures: usize,
    pub worst_residual: f64,
}

impl PreorderReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Check reflexivity and symmetry of ~, reflexivity of <~, and transitivity
/// of both relations on every applicable pair and triple from the sample.
/// Witnesses are composed through cond_t_witness and lemma13_split.
pub fn check_preorder(ps: &[Projection]) -> Result<PreorderReport> {
    let mut cases = 0usize;
    let mut failures = 0usize;
    let mut worst = 0.0f64;
    let mut run = |r: Result<f64>| match r {
        Ok(res) => {
            cases += 1;
            if res > 1.0 {
                failures += 1;
            } else {
                worst = worst.max(res);
            }
        }
        Err(_) => {
            cases += 1;
            failures += 1;
        }
    };

    for p in ps {
        // reflexivity of ~ with the identity witness v = p
        run((|| {
            let w = EquivalenceWitness::certify(p.element().element(), p, p)?;
            Ok(w.residual())
        })());
        // reflexivity of <~
        run((|| {
            let s = subequivalent(p, p)?;
            Ok(s.inner.residual())
        })());
    }

    for a in ps {
        for b in ps {
            if ranks(a)? == ranks(b)? {
                // symmetry via the adjoint witness
                run((|| {
                    let w = equivalent(a, b)?;
                    let back = w.adjoint()?;
                    Ok(w.residual().max(back.residual()))
                })());
            }
        }
    }

    for a in ps {
        for b in ps {
            for c in ps {
                let (ra, rb, rc) = (ranks(a)?, ranks(b)?, ranks(c)?);
                if ra == rb && rb == rc {
                    // transitivity of ~ through condition (T)
                    run((|| {
                        let w1 = equivalent(a, b)?;
                        let w2 = equivalent(b, c)?;
                        let w = transitive_witness(&w1, &w2)?;
                        Ok(w.residual())
                    })());
                }
                let le = |x: &Vec<usize>, y: &Vec<usize>| x.iter().zip(y).all(|(i, j)| i <= j);
                if le(&ra, &rb) && le(&rb, &rc) {
                    // transitivity of <~ through lemma 13
                    run((|| {
                        let s_ab = subequivalent(a, b)?;
                        let s_bc = subequivalent(b, c)?;
                        let (q1, w_cut, _) = lemma13_split(&s_bc.inner, &s_ab.r)?;
                        // a ~ r_ab ~ q1 <= r_bc <= c
                        let w_a_q1 = transitive_witness(&s_ab.inner, &w_cut)?;
                        let dom = dominance_defect(c.element(), q1.element())?;
                        if dom > c.element().tol().eps_psd {
                            return Err(Error::NotDominated { defect: dom });
                        }
                        Ok(w_a_q1.residual())
                    })());
                }
            }
        }
    }

    Ok(PreorderReport {
        cases,
        failures,
        worst_residual: worst,
    })
}

/// p (+) q <~ r (+) s whenever p <~ r and q <~ s.
pub fn check_sub_oplus(
    p: &Projection,
    r: &Projection,
    q: &Projection,
    s: &Projection,
) -> Result<f64> {
    let wp = subequivalent(p, r)?;
    let wq = subequivalent(q, s)?;
    let combined = EquivalenceWitness::certify(
        &matrix::oplus(wp.inner.witness().element(), wq.inner.witness().element())?,
        &proj_direct_sum(p, q)?,
        &proj_direct_sum(&wp.r, &wq.r)?,
    )?;
    let big = proj_direct_sum(r, s)?;
    let dom = dominance_defect(big.element(), proj_direct_sum(&wp.r, &wq.r)?.element())?;
    if dom > big.element().tol().eps_psd {
        return Err(Error::NotDominated { defect: dom });
    }
    Ok(combined.residual())
}

/// Unitary-equivalence under scalar conjugation: p ~u delta^* p delta via
/// the ortho-component v = delta^* p of the unitary delta^* e.
#[derive(Debug, Clone)]
pub struct ScalarConjReport {
    pub conjugate: Projection,
    pub equivalence: UnitaryEquivalence,
    pub residual: f64,
}

pub fn scalar_unitary_conj_equiv(p: &Projection, delta: &CMat) -> Result<ScalarConjReport> {
    let n = p.level();
    let eps = p.element().tol().eps_eq;
    let defect = {
        let id = CMat::identity(n);
        delta
            .adjoint()
            .mul(delta)
            .sub(&id)
            .fro_norm()
            .max(delta.mul(&delta.adjoint()).sub(&id).fro_norm())
    };
    if !delta.is_square() || delta.rows() != n || defect > eps * (n as f64).sqrt().max(1.0) {
        return Err(Error::NotUnitary { defect });
    }
    let conj_el = matrix::scalar_act(&delta.adjoint(), p.element().element(), delta)?;
    let conjugate = is_order_projection(&SelfAdjoint::new(conj_el)?)?;

    // The canonical component is v = delta^* p with |v| = p, |v^*| = q; the
    // assembled unitary is checked through the generic round-trip.
    let v = matrix::scalar_left(&delta.adjoint(), p.element().element())?;
    let w_direct = EquivalenceWitness::certify(&v, &conjugate, p)?;
    let equivalence = unitarily_equivalent(p, &conjugate)?;
    Ok(ScalarConjReport {
        residual: w_direct.residual().max(equivalence.component.residual()),
        conjugate,
        equivalence,
    })
}

/// The isometry corollary: alpha p alpha^* ~ p for alpha with
/// alpha^* alpha = I, witnessed by v = alpha p.
pub fn isometry_conj_equiv(p: &Projection, alpha: &CMat) -> Result<EquivalenceWitness> {
    let conj = crate::isometry::isometry_conj_proj(alpha, p)?;
    let v = matrix::scalar_left(alpha, p.element().element())?;
    EquivalenceWitness::certify(&v, &conj, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::Model;
    use crate::isometry::random_projection;
    use crate::sample;

    fn m2() -> Model {
        Model::with_default_tol(vec![2]).unwrap()
    }

    fn diag_proj(model: &Model, d: &[f64]) -> Projection {
        let e = Element::new(model.clone(), 1, 1, vec![CMat::diag_real(d)]).unwrap();
        is_order_projection(&SelfAdjoint::new(e).unwrap()).unwrap()
    }

    #[test]
    fn ranks_by_eigenvalue_threshold() {
        let m = Model::with_default_tol(vec![1, 2]).unwrap();
        let p = random_projection(&m, 2, &[1, 3], 100).unwrap();
        assert_eq!(ranks(&p).unwrap(), vec![1, 3]);
    }

    #[test]
    fn equivalent_swap_projections() {
        let m = m2();
        let p = diag_proj(&m, &[1.0, 0.0]);
        let q = diag_proj(&m, &[0.0, 1.0]);
        let w = equivalent(&p, &q).unwrap();
        // the witness is e_12-shaped: |v^*| = p, |v| = q
        assert!(w.residual() <= 1e-9);
        assert!(abs_rect_star(w.witness().element())
            .unwrap()
            .approx_eq(p.element())
            .unwrap());
    }

    #[test]
    fn equivalent_reflexive_and_rank_mismatch() {
        let m = m2();
        let p = random_projection(&m, 2, &[2], 101).unwrap();
        let w = equivalent(&p, &p).unwrap();
        assert!(w.residual() <= 1e-9);

        let q = random_projection(&m, 2, &[1], 102).unwrap();
        assert!(matches!(
            equivalent(&p, &q),
            Err(Error::NotEquivalent { .. })
        ));
    }

    #[test]
    fn cond_h_cases() {
        let m = m2();
        let u = crate::isometry::random_partial_isometry(&m, 2, 2, &[3], 103).unwrap();
        // p = |u| gives back u
        let cut = cond_h_witness(&u, u.support_proj()).unwrap();
        assert!(cut.element().approx_eq(u.element()).unwrap());
        // p = 0 gives 0
        let zero = Projection::zero(&m, 2);
        let cut = cond_h_witness(&u, &zero).unwrap();
        assert!(cut.element().is_zero());
        // random sub-projection of |u|: build from the support's range basis
        let sub = {
            let basis = range_basis(u.support_proj()).unwrap();
            let d = m.block_dims()[0];
            let size = 2 * d;
            let mut block = CMat::zeros(size, size);
            for eta in basis[0].iter().take(2) {
                for (r, &x) in eta.iter().enumerate() {
                    for (c, &y) in eta.iter().enumerate() {
                        let z = block.get(r, c) + x * y.conj();
                        block.set(r, c, z);
                    }
                }
            }
            is_order_projection(
                &SelfAdjoint::new(Element::new(m.clone(), 2, 2, vec![block]).unwrap()).unwrap(),
            )
            .unwrap()
        };
        let cut = cond_h_witness(&u, &sub).unwrap();
        assert!(cut
            .support_proj()
            .element()
            .approx_eq(sub.element())
            .unwrap());
        // non-dominated projection is rejected
        let full = Projection::unit(&m, 2);
        assert!(matches!(
            cond_h_witness(&u, &full),
            Err(Error::NotDominated { .. })
        ));
    }

    #[test]
    fn cond_t_cases() {
        let m = m2();
        let u = crate::isometry::random_partial_isometry(&m, 2, 2, &[2], 104).unwrap();
        // v = u: w = u u^* is the range projection
        let w = cond_t_witness(&u, &u).unwrap();
        assert!(w
            .support_proj()
            .element()
            .approx_eq(u.range_proj().element())
            .unwrap());

        // common support built from one frame
        let p = random_projection(&m, 2, &[2], 105).unwrap();
        let a = equivalent(&p, &random_projection(&m, 2, &[2], 106).unwrap()).unwrap();
        let b = equivalent(&p, &random_projection(&m, 2, &[2], 107).unwrap()).unwrap();
        // both a^* and b^* have support |.| = p after flipping
        let w = cond_t_witness(
            a.adjoint().unwrap().witness(),
            b.adjoint().unwrap().witness(),
        );
        assert!(w.is_ok());

        // support mismatch rejected
        let q = random_projection(&m, 2, &[1], 108).unwrap();
        let other = crate::isometry::random_partial_isometry(&m, 2, 2, &[1], 109).unwrap();
        let _ = q;
        assert!(matches!(
            cond_t_witness(&u, &other),
            Err(Error::SupportMismatch)
        ));
    }

    #[test]
    fn lemma13_cases() {
        let m = m2();
        let p = random_projection(&m, 2, &[3], 110).unwrap();
        let q = random_projection(&m, 2, &[3], 111).unwrap();
        let w = equivalent(&p, &q).unwrap();

        // full cut returns (q, w-like, zero)
        let (q1, w1, w2) = lemma13_split(&w, &p).unwrap();
        assert!(q1.element().approx_eq(q.element()).unwrap());
        assert!(w1.residual() <= 1e-9);
        assert!(w2.witness().element().is_zero());

        // zero cut returns (0, zero, w-like)
        let zero = Projection::zero(&m, 2);
        let (q1, w1, w2) = lemma13_split(&w, &zero).unwrap();
        assert!(q1.element().is_zero());
        assert!(w1.witness().element().is_zero());
        assert!(w2.residual() <= 1e-9);

        // rank-1 cut of a rank-3 equivalence
        let sub = {
            let basis = range_basis(&p).unwrap();
            let d = m.block_dims()[0];
            let size = 2 * d;
            let mut block = CMat::zeros(size, size);
            let eta = &basis[0][0];
            for (r, &x) in eta.iter().enumerate() {
                for (c, &y) in eta.iter().enumerate() {
                    block.set(r, c, x * y.conj());
                }
            }
            is_order_projection(
                &SelfAdjoint::new(Element::new(m.clone(), 2, 2, vec![block]).unwrap()).unwrap(),
            )
            .unwrap()
        };
        let (q1, w1, w2) = lemma13_split(&w, &sub).unwrap();
        assert_eq!(ranks(&q1).unwrap(), vec![1]);
        assert!(w1.residual() <= 1e-9 && w2.residual() <= 1e-9);
    }

    #[test]
    fn subequivalent_cases() {
        let m = m2();
        let p = random_projection(&m, 2, &[1], 112).unwrap();
        let q = random_projection(&m, 2, &[3], 113).unwrap();
        let s = subequivalent(&p, &q).unwrap();
        assert_eq!(ranks(&s.r).unwrap(), vec![1]);
        assert_eq!(ranks(&s.complement).unwrap(), vec![2]);
        assert!(s.inner.residual() <= 1e-9);
        assert!(s.roundtrip.residual() <= 1e-9);

        // (p, p): r = p-ranked sub of p itself
        let s = subequivalent(&p, &p).unwrap();
        assert!(s.complement.element().is_zero());

        // rank 3 vs rank 1 fails
        assert!(matches!(
            subequivalent(&q, &p),
            Err(Error::NotSubEquivalent { .. })
        ));
    }

    #[test]
    fn unitary_equivalence_cases() {
        let m = m2();
        let p = diag_proj(&m, &[1.0, 0.0]);
        let q = diag_proj(&m, &[0.0, 1.0]);
        let ue = unitarily_equivalent(&p, &q).unwrap();
        assert!(crate::isometry::classify(&ue.unitary)
            .unwrap()
            .contains(&ElementClass::Unitary));

        // (p, p)
        let ue = unitarily_equivalent(&p, &p).unwrap();
        assert!(ue.component.residual() <= 1e-9);

        // rank mismatch
        let full = Projection::unit(&m, 1);
        assert!(matches!(
            unitarily_equivalent(&p, &full),
            Err(Error::NotUnitarilyEquivalent)
        ));
    }

    #[test]
    fn prop15_on_seeded_projections() {
        let m = m2();
        // orthogonal pairs with matching ranks, levels 1 and 2
        let (a, b) = sample::orthogonal_positive_pair(&m, 2, 120);
        let _ = (a, b);
        let q_frame = sample::haar_unitary(4, 121);
        let mk = |cols: std::ops::Range<usize>| {
            let mut block = CMat::zeros(4, 4);
            for k in cols {
                let col = q_frame.column(k);
                for (r, &x) in col.iter().enumerate() {
                    for (c, &y) in col.iter().enumerate() {
                        let z = block.get(r, c) + x * y.conj();
                        block.set(r, c, z);
                    }
                }
            }
            is_order_projection(
                &SelfAdjoint::new(Element::new(m.clone(), 2, 2, vec![block.hermitize()]).unwrap())
                    .unwrap(),
            )
            .unwrap()
        };
        let p = mk(0..1);
        let p_perp = mk(1..3);
        let frame2 = sample::haar_unitary(4, 122);
        let mk2 = |cols: std::ops::Range<usize>| {
            let mut block = CMat::zeros(4, 4);
            for k in cols {
                let col = frame2.column(k);
                for (r, &x) in col.iter().enumerate() {
                    for (c, &y) in col.iter().enumerate() {
                        let z = block.get(r, c) + x * y.conj();
                        block.set(r, c, z);
                    }
                }
            }
            is_order_projection(
                &SelfAdjoint::new(Element::new(m.clone(), 2, 2, vec![block.hermitize()]).unwrap())
                    .unwrap(),
            )
            .unwrap()
        };
        let q = mk2(0..1);
        let q_perp = mk2(1..3);
        let rep = check_prop15(&p, &q, &p_perp, &q_perp).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.worst_residual <= 1e-9);
    }

    #[test]
    fn preorder_on_sample() {
        let m = m2();
        let ps: Vec<Projection> = [(123u64, 1usize), (124, 2), (125, 2), (126, 3)]
            .iter()
            .map(|&(seed, rank)| random_projection(&m, 2, &[rank], seed).unwrap())
            .collect();
        let rep = check_preorder(&ps).unwrap();
        assert!(rep.passed(), "{rep:?}");

        // singleton: reflexivity only
        let rep = check_preorder(&ps[..1]).unwrap();
        assert!(rep.passed() && rep.cases >= 2);
    }

    #[test]
    fn scalar_conjugation_equivalences() {
        let m = m2();
        let p = random_projection(&m, 2, &[2], 130).unwrap();
        // identity
        let rep = scalar_unitary_conj_equiv(&p, &CMat::identity(2)).unwrap();
        assert!(rep.residual <= 1e-9);
        // permutation
        let perm = CMat::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let rep = scalar_unitary_conj_equiv(&p, &perm).unwrap();
        assert!(rep.residual <= 1e-9);
        // Haar unitary
        let u = sample::haar_unitary(2, 131);
        let rep = scalar_unitary_conj_equiv(&p, &u).unwrap();
        assert!(rep.residual <= 1e-9);
        // non-unitary rejected
        let bad = CMat::diag_real(&[2.0, 1.0]);
        assert!(matches!(
            scalar_unitary_conj_equiv(&p, &bad),
            Err(Error::NotUnitary { .. })
        ));

        // isometry corollary
        let alpha = sample::haar_isometry(3, 2, 132);
        let w = isometry_conj_equiv(&p, &alpha).unwrap();
        assert!(w.residual() <= 1e-9);
    }

    #[test]
    fn corollary_chain_padding() {
        // p ~ q iff p (+) 0 ~u q (+) 0 iff 0 (+) p ~u 0 (+) q
        let m = m2();
        let p = random_projection(&m, 1, &[1], 140).unwrap();
        let q = random_projection(&m, 1, &[1], 141).unwrap();
        assert!(equivalent(&p, &q).is_ok());
        let zero = Projection::zero(&m, 1);
        let p0 = proj_direct_sum(&p, &zero).unwrap();
        let q0 = proj_direct_sum(&q, &zero).unwrap();
        assert!(unitarily_equivalent(&p0, &q0).is_ok());
        let zp = proj_direct_sum(&zero, &p).unwrap();
        let zq = proj_direct_sum(&zero, &q).unwrap();
        assert!(unitarily_equivalent(&zp, &zq).is_ok());

        // and a genuine failure: ranks 1 vs 2 at level 2
        let p2 = random_projection(&m, 2, &[1], 142).unwrap();
        let q2 = random_projection(&m, 2, &[2], 143).unwrap();
        assert!(unitarily_equivalent(
            &proj_direct_sum(&p2, &zero).unwrap(),
            &proj_direct_sum(&q2, &zero).unwrap()
        )
        .is_err());
    }
}
