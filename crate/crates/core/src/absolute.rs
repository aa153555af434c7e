//! Absolute value and orthogonality on self-adjoint elements, together with
//! checkers for the absolutely-ordered-space axioms.
//!
//! The absolute value is the blockwise spectral map f(l) = |l|. Orthogonality
//! comes in three flavours that must agree in this model: the order-theoretic
//! |u - v| = u + v, the algebraic u v = 0, and norm additivity
//! ||u + k v|| = max(||u||, ||k v||).

use crate::element::{Model, SelfAdjoint};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use num_complex::Complex64;

/// Blockwise spectral calculus: apply `f` to the eigenvalues of each block.
pub fn spectral_map(v: &SelfAdjoint, f: impl Fn(f64) -> f64) -> Result<SelfAdjoint> {
    let tol = *v.tol();
    let mut blocks = Vec::with_capacity(v.element().blocks().len());
    for b in v.element().blocks() {
        let eig = linalg::herm_eig(b, &tol)?;
        let size = b.rows();
        let mut out = CMat::zeros(size, size);
        for (k, &l) in eig.values.iter().enumerate() {
            let fl = f(l);
            if fl == 0.0 {
                continue;
            }
            let col = eig.vectors.column(k);
            for i in 0..size {
                for j in 0..size {
                    let z = out.get(i, j) + col[i] * col[j].conj() * Complex64::new(fl, 0.0);
                    out.set(i, j, z);
                }
            }
        }
        blocks.push(out.hermitize());
    }
    let e = crate::element::Element::new(v.model().clone(), v.level(), v.level(), blocks)?;
    SelfAdjoint::new(e)
}

/// |v|: the spectral absolute value, a positive element.
pub fn abs_sa(v: &SelfAdjoint) -> Result<SelfAdjoint> {
    spectral_map(v, f64::abs)
}

/// Square root of a positive element; fails with NotPsd on genuine negativity.
pub fn sqrt_positive(v: &SelfAdjoint) -> Result<SelfAdjoint> {
    let tol = *v.tol();
    let mut blocks = Vec::with_capacity(v.element().blocks().len());
    for b in v.element().blocks() {
        blocks.push(linalg::psd_sqrt(b, &tol)?);
    }
    let e = crate::element::Element::new(v.model().clone(), v.level(), v.level(), blocks)?;
    SelfAdjoint::new(e)
}

/// v^+ = (|v| + v)/2.
pub fn pos_part(v: &SelfAdjoint) -> Result<SelfAdjoint> {
    Ok(abs_sa(v)?.add(v)?.scale_re(0.5))
}

/// v^- = (|v| - v)/2.
pub fn neg_part(v: &SelfAdjoint) -> Result<SelfAdjoint> {
    Ok(abs_sa(v)?.sub(v)?.scale_re(0.5))
}

fn require_positive(u: &SelfAdjoint) -> Result<()> {
    if !u.is_positive() {
        return Err(Error::NotPositive {
            min_eigenvalue: u.element().min_eigenvalue()?,
        });
    }
    Ok(())
}

/// Order-theoretic orthogonality of positives: |u - v| = u + v.
pub fn ortho_pos(u: &SelfAdjoint, v: &SelfAdjoint) -> Result<bool> {
    require_positive(u)?;
    require_positive(v)?;
    let diff_abs = abs_sa(&u.sub(v)?)?;
    diff_abs.approx_eq(&u.add(v)?)
}

/// Algebraic orthogonality of positives: u v = 0 blockwise.
pub fn ortho_alg(u: &SelfAdjoint, v: &SelfAdjoint) -> Result<bool> {
    require_positive(u)?;
    require_positive(v)?;
    let tol = u.tol();
    for (a, b) in u.element().blocks().iter().zip(v.element().blocks()) {
        let prod = a.mul(b);
        let bound = tol.eps_eq * (linalg::op_norm(a, tol) * linalg::op_norm(b, tol)).max(1.0);
        if prod.fro_norm() > bound {
            return Ok(false);
        }
    }
    Ok(true)
}

const INF_GRID: [f64; 14] = [
    -8.0, -4.0, -2.0, -1.0, -0.5, -0.25, -0.125, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0,
];

/// Norm-additivity orthogonality of nonzero positives:
/// || u/||u|| + v/||v|| || = 1, cross-checked on a dyadic grid of k with
/// || u + k v || = max(||u||, ||k v||).
pub fn ortho_inf(u: &SelfAdjoint, v: &SelfAdjoint) -> Result<bool> {
    require_positive(u)?;
    require_positive(v)?;
    if u.is_zero() || v.is_zero() {
        return Err(Error::ZeroElement);
    }
    let tol = u.tol();
    let nu = u.spectral_norm();
    let nv = v.spectral_norm();
    let unit_sum = u
        .scale_re(1.0 / nu)
        .add(&v.scale_re(1.0 / nv))?
        .spectral_norm();
    if (unit_sum - 1.0).abs() > tol.eps_eq {
        return Ok(false);
    }
    for &k in &INF_GRID {
        let combo = u.add(&v.scale_re(k))?.spectral_norm();
        let expected = nu.max(k.abs() * nv);
        if (combo - expected).abs() > tol.eps_eq * expected.max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Orthogonality of general self-adjoint elements: |u| orthogonal to |v|.
pub fn ortho_general_sa(u: &SelfAdjoint, v: &SelfAdjoint) -> Result<bool> {
    ortho_pos(&abs_sa(u)?, &abs_sa(v)?)
}

/// Outcome of the three-way orthogonality characterization on a pair.
#[derive(Debug, Clone)]
pub struct Prop1Report {
    /// u orthogonal to v.
    pub orthogonal: bool,
    /// u^+, u^-, v^+, v^- mutually orthogonal.
    pub parts_mutually_orthogonal: bool,
    /// |u +/- v| = |u| + |v|.
    pub abs_additive: bool,
    /// All three conditions agree.
    pub consistent: bool,
    /// Worst defect among the additivity identities when they hold.
    pub worst_defect: f64,
}

pub fn check_prop1(u: &SelfAdjoint, v: &SelfAdjoint) -> Result<Prop1Report> {
    let orthogonal = ortho_general_sa(u, v)?;

    let up = pos_part(u)?;
    let un = neg_part(u)?;
    let vp = pos_part(v)?;
    let vn = neg_part(v)?;
    let pairs = [
        (&up, &un),
        (&up, &vp),
        (&up, &vn),
        (&un, &vp),
        (&un, &vn),
        (&vp, &vn),
    ];
    let mut parts_mutually_orthogonal = true;
    for (a, b) in pairs {
        if !ortho_pos(a, b)? {
            parts_mutually_orthogonal = false;
            break;
        }
    }

    let abs_u = abs_sa(u)?;
    let abs_v = abs_sa(v)?;
    let total = abs_u.add(&abs_v)?;
    let plus = abs_sa(&u.add(v)?)?;
    let minus = abs_sa(&u.sub(v)?)?;
    let d_plus = plus.eq_defect(&total)?;
    let d_minus = minus.eq_defect(&total)?;
    let eps = u.tol().eps_eq;
    let abs_additive = d_plus <= eps && d_minus <= eps;

    let consistent = orthogonal == parts_mutually_orthogonal && orthogonal == abs_additive;
    Ok(Prop1Report {
        orthogonal,
        parts_mutually_orthogonal,
        abs_additive,
        consistent,
        worst_defect: if abs_additive {
            d_plus.max(d_minus)
        } else {
            0.0
        },
    })
}

/// Pass/fail tallies for one axiom across a sample.
#[derive(Debug, Clone)]
pub struct AxiomStat {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub worst_residual: f64,
}

/// Report of the absolutely-ordered-space axiom suite.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub stats: Vec<AxiomStat>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.stats.iter().all(|s| s.failures == 0)
    }

    pub fn worst_residual(&self) -> f64 {
        self.stats
            .iter()
            .map(|s| s.worst_residual)
            .fold(0.0, f64::max)
    }
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: 0,
            worst: 0.0,
        }
    }

    fn record(&mut self, ok: bool, residual: f64) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        } else {
            self.worst = self.worst.max(residual);
        }
    }

    fn into_stat(self) -> AxiomStat {
        AxiomStat {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            worst_residual: self.worst,
        }
    }
}

/// Split a common eigenbasis of `u` (per block) into two index groups and
/// place positive diagonals on them: the first output is supported on group A,
/// the last two share group B. Deterministic given the inputs.
fn basis_split_positive(
    u: &SelfAdjoint,
    v: &SelfAdjoint,
    w: &SelfAdjoint,
) -> Result<(SelfAdjoint, SelfAdjoint, SelfAdjoint)> {
    let tol = *u.tol();
    let n = u.level();
    let mut a_blocks = Vec::new();
    let mut b_blocks = Vec::new();
    let mut c_blocks = Vec::new();
    for (j, block) in u.element().blocks().iter().enumerate() {
        let eig = linalg::herm_eig(block, &tol)?;
        let size = block.rows();
        let split = size / 2 + 1; // group A = [0, split), nonempty
        let ev = |sa: &SelfAdjoint, i: usize| -> Result<f64> {
            let e = linalg::herm_eig(sa.element().block(j), &tol)?;
            Ok(e.values[i].abs() + 0.1)
        };
        let mut da = CMat::zeros(size, size);
        let mut db = CMat::zeros(size, size);
        let mut dc = CMat::zeros(size, size);
        for i in 0..size {
            if i < split {
                da.set(i, i, Complex64::new(ev(u, i)?, 0.0));
            } else {
                db.set(i, i, Complex64::new(ev(v, i)?, 0.0));
                dc.set(i, i, Complex64::new(ev(w, i)?, 0.0));
            }
        }
        let q = &eig.vectors;
        let conj = |d: &CMat| q.mul(d).mul(&q.adjoint()).hermitize();
        a_blocks.push(conj(&da));
        b_blocks.push(conj(&db));
        c_blocks.push(conj(&dc));
    }
    let model = u.model().clone();
    let make = |blocks| -> Result<SelfAdjoint> {
        SelfAdjoint::new(crate::element::Element::new(model.clone(), n, n, blocks)?)
    };
    Ok((make(a_blocks)?, make(b_blocks)?, make(c_blocks)?))
}

/// Run the absolute-value and orthogonality axioms over a sample of
/// self-adjoint triples sharing one model.
pub fn check_abs_axioms(
    model: &Model,
    sample: &[(SelfAdjoint, SelfAdjoint, SelfAdjoint)],
) -> Result<AxiomReport> {
    let eps = model.tol().eps_eq;
    let mut fixes = Tally::new("abs fixes positives");
    let mut dominates = Tally::new("abs dominates +/- v");
    let mut homogeneous = Tally::new("abs homogeneous");
    let mut hereditary_abs = Tally::new("orthogonality hereditary (abs form)");
    let mut calculus_abs = Tally::new("orthogonality calculus (abs form)");
    let mut zero_orth = Tally::new("orthogonal to zero");
    let mut symmetric = Tally::new("orthogonality symmetric");
    let mut scaled = Tally::new("orthogonality scale invariant");
    let mut unique = Tally::new("unique orthogonal decomposition");
    let mut hereditary_rel = Tally::new("orthogonality hereditary (relation form)");
    let mut calculus_rel = Tally::new("orthogonality calculus (relation form)");

    for (u, v, w) in sample {
        if u.model() != model || v.model() != model || w.model() != model {
            return Err(Error::ModelMismatch);
        }

        // |v| = v on positives
        let a = pos_part(u)?;
        let d = abs_sa(&a)?.eq_defect(&a)?;
        fixes.record(d <= eps, d);

        // |v| +/- v positive
        for x in [u, v, w] {
            let ax = abs_sa(x)?;
            let ok = ax.add(x)?.is_positive() && ax.sub(x)?.is_positive();
            dominates.record(ok, 0.0);
        }

        // |k v| = |k| |v|
        for k in [-2.0, 1.5] {
            let lhs = abs_sa(&v.scale_re(k))?;
            let rhs = abs_sa(v)?.scale_re(k.abs());
            let d = lhs.eq_defect(&rhs)?;
            homogeneous.record(d <= eps, d);
        }

        // hereditary: u^+ orthogonal to u^-, and 0 <= w' <= u^- implies
        // u^+ orthogonal to w'
        let b = neg_part(u)?;
        let contraction = {
            let sq = SelfAdjoint::new(w.element().mul(w.element())?)?;
            sq.scale_re(1.0 / sq.spectral_norm().max(1.0))
        };
        let sqrt_b = sqrt_positive(&b)?;
        let dominated = SelfAdjoint::new(
            sqrt_b
                .element()
                .mul(contraction.element())?
                .mul(sqrt_b.element())?,
        )?;
        let d = abs_sa(&a.sub(&dominated)?)?.eq_defect(&a.add(&dominated)?)?;
        hereditary_abs.record(d <= eps, d);
        hereditary_rel.record(ortho_pos(&a, &dominated)?, 0.0);

        // calculus: a orthogonal to b1 and b2 implies a orthogonal to |b1 +/- b2|
        let (oa, b1, b2) = basis_split_positive(u, v, w)?;
        let mut ok_abs = true;
        let mut worst = 0.0f64;
        for sgn in [1.0, -1.0] {
            let mix = abs_sa(&b1.add(&b2.scale_re(sgn))?)?;
            let d = abs_sa(&oa.sub(&mix)?)?.eq_defect(&oa.add(&mix)?)?;
            worst = worst.max(d);
            ok_abs &= d <= eps;
            calculus_rel.record(ortho_pos(&oa, &mix)?, 0.0);
        }
        calculus_abs.record(ok_abs, worst);

        // relation axioms on constructed orthogonal positives
        let zero = SelfAdjoint::zero(model, u.level());
        zero_orth.record(ortho_pos(&a, &zero)?, 0.0);
        symmetric.record(ortho_pos(&oa, &b1)? && ortho_pos(&b1, &oa)?, 0.0);
        scaled.record(ortho_pos(&oa.scale_re(2.5), &b1.scale_re(2.5))?, 0.0);

        // uniqueness: for constructed x = a0 - b0 with a0 orthogonal to b0,
        // the canonical parts recover a0 and b0
        let x = oa.sub(&b1)?;
        let da = pos_part(&x)?.eq_defect(&oa)?;
        let dbn = neg_part(&x)?.eq_defect(&b1)?;
        unique.record(da <= eps && dbn <= eps, da.max(dbn));
    }

    Ok(AxiomReport {
        stats: vec![
            fixes.into_stat(),
            dominates.into_stat(),
            homogeneous.into_stat(),
            hereditary_abs.into_stat(),
            calculus_abs.into_stat(),
            zero_orth.into_stat(),
            symmetric.into_stat(),
            scaled.into_stat(),
            unique.into_stat(),
            hereditary_rel.into_stat(),
            calculus_rel.into_stat(),
        ],
    })
}
