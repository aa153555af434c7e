//! Finiteness of projections in the matrix model.
//!
//! In finite dimensions every projection is finite and every isometry is
//! unitary. Rather than returning vacuous truths, the deciders actively
//! sample falsification candidates: dominated equal-rank sub-projections
//! must coincide with the original, which doubles as a regression test for
//! the comparison machinery.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::compare::{range_basis, ranks};
use crate::element::{Element, SelfAdjoint};
use crate::error::{Error, Result};
use crate::isometry::{classify, is_order_projection, ElementClass, Projection};
use crate::linalg::CMat;
use crate::sample;

/// Outcome of falsification sampling on one projection.
#[derive(Debug, Clone)]
pub struct FinitenessReport {
    pub finite: bool,
    pub samples: usize,
    /// Worst deviation of a sampled dominated equal-rank candidate from p.
    pub max_deviation: f64,
}

/// Sample dominated projections of equal rank under p; each is obtained by
/// rotating an orthonormal basis of range(p) by a random unitary, so it must
/// reproduce p itself.
pub fn is_finite_matrix(p: &Projection, samples: usize, seed: u64) -> Result<FinitenessReport> {
    let mut rng = sample::rng(seed);
    let basis = range_basis(p)?;
    let model = p.model().clone();
    let n = p.level();
    let dims = model.block_dims().to_vec();
    let eps = p.element().tol().eps_eq;

    let mut max_deviation = 0.0f64;
    let mut finite = true;
    for _ in 0..samples {
        let mut blocks = Vec::with_capacity(dims.len());
        for (j, &d) in dims.iter().enumerate() {
            let size = n * d;
            let r = basis[j].len();
            let mut block = CMat::zeros(size, size);
            if r > 0 {
                let frame = CMat::from_columns(size, &basis[j]);
                let rotated = frame.mul(&sample::haar_unitary_rng(r, &mut rng));
                for k in 0..r {
                    let col = rotated.column(k);
                    for (a, &x) in col.iter().enumerate() {
                        for (b, &y) in col.iter().enumerate() {
                            let z = block.get(a, b) + x * y.conj();
                            block.set(a, b, z);
                        }
                    }
                }
            }
            blocks.push(block.hermitize());
        }
        let q = SelfAdjoint::new(Element::new(model.clone(), n, n, blocks)?)?;
        let candidate = is_order_projection(&q)?;
        if ranks(&candidate)? != ranks(p)? {
            finite = false;
            continue;
        }
        let deviation = candidate.element().eq_defect(p.element())?;
        max_deviation = max_deviation.max(deviation);
        if deviation > eps {
            finite = false;
        }
    }
    Ok(FinitenessReport {
        finite,
        samples,
        max_deviation,
    })
}

/// Every isometry in M_n(V) is unitary.
#[derive(Debug, Clone)]
pub struct IsometryUnitaryReport {
    pub unitary: bool,
    /// Deviation of |v^*| from the unit.
    pub residual: f64,
}

pub fn verify_isometry_unitary(v: &Element) -> Result<IsometryUnitaryReport> {
    let classes = classify(v)?;
    if !classes.contains(&ElementClass::Isometry) {
        return Err(Error::NotIsometry {
            defect: crate::matrix::abs_rect(v)?
                .eq_defect(&SelfAdjoint::unit(v.model(), v.shape().1))?,
        });
    }
    let unit = SelfAdjoint::unit(v.model(), v.shape().0);
    let residual = crate::matrix::abs_rect_star(v)?.eq_defect(&unit)?;
    Ok(IsometryUnitaryReport {
        unitary: classes.contains(&ElementClass::Unitary),
        residual,
    })
}

/// Finiteness is hereditary: sub-projections and orthogonal sums of
/// sub-projections of a finite projection are finite.
#[derive(Debug, Clone)]
pub struct HereditaryReport {
    pub q_finite: bool,
    pub p1_finite: bool,
    pub p2_finite: bool,
    pub sum_finite: bool,
    /// No contradiction with heredity was observed.
    pub consistent: bool,
}

pub fn check_finiteness_hereditary(
    p1: &Projection,
    p2: &Projection,
    q: &Projection,
    samples: usize,
    seed: u64,
) -> Result<HereditaryReport> {
    let eps_psd = q.element().tol().eps_psd;
    let dominated = |small: &Projection| -> Result<bool> {
        let gap = q.element().sub(small.element())?;
        Ok(gap.element().min_eigenvalue()? >= -eps_psd)
    };
    if !dominated(p1)? || !dominated(p2)? {
        return Err(Error::PreconditionViolated(
            "p1 and p2 must be dominated by q".into(),
        ));
    }
    if !crate::absolute::ortho_pos(p1.element(), p2.element())? {
        return Err(Error::PreconditionViolated(
            "p1 must be orthogonal to p2".into(),
        ));
    }
    let sum = is_order_projection(&p1.element().add(p2.element())?)?;
    let q_finite = is_finite_matrix(q, samples, seed)?.finite;
    let p1_finite = is_finite_matrix(p1, samples, seed.wrapping_add(1))?.finite;
    let p2_finite = is_finite_matrix(p2, samples, seed.wrapping_add(2))?.finite;
    let sum_finite = is_finite_matrix(&sum, samples, seed.wrapping_add(3))?.finite;
    let consistent = !q_finite || (p1_finite && p2_finite && sum_finite);
    Ok(HereditaryReport {
        q_finite,
        p1_finite,
        p2_finite,
        sum_finite,
        consistent,
    })
}

/// Seeded square isometry in M_n(V): a Haar unitary per block (in finite
/// dimensions every isometry is one; the classifier re-checks that).
pub fn random_square_isometry_rng(
    model: &crate::element::Model,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Element> {
    let blocks = model
        .block_dims()
        .iter()
        .map(|&d| {
            let u = sample::haar_unitary_rng(n * d, rng);
            // a random global phase exercises the non-self-adjoint paths
            let phase =
                Complex64::from_polar(1.0, rand::Rng::gen_range(rng, 0.0..std::f64::consts::TAU));
            u.scale(phase)
        })
        .collect();
    Element::new(model.clone(), n, n, blocks)
}
