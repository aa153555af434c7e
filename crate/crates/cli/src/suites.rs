//! Seeded verification suites, one per statement-level check.
//!
//! Every case derives its own sub-seed from (master seed, case index), so
//! serial and parallel runs produce identical reports.

use amou::absolute;
use amou::cardinal::{self, ExtNat};
use amou::compare;
use amou::element::{Element, Model, SelfAdjoint};
use amou::error::Result as CoreResult;
use amou::finite;
use amou::isometry::{self, Projection};
use amou::linalg::{CMat, TolerancePolicy};
use amou::matrix;
use amou::sample;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::document::F17;
use crate::report::{FailureRecord, SuiteReport};

/// Suite identifiers and what each one verifies.
pub const SUITES: &[(&str, &str)] = &[
    (
        "prop1",
        "three-way orthogonality characterization for self-adjoint pairs",
    ),
    (
        "prop5",
        "rectangular orthogonality: norm identities and stacking identities",
    ),
    ("prop6", "v = 0 iff |v| = 0 iff |v*| = 0"),
    (
        "norm",
        "order-unit norm by bisection vs singular values; |||v||| = ||v|| = |||v*|||",
    ),
    (
        "remark3",
        "structural absolute-value identities: isometry invariance, suspension, padding",
    ),
    (
        "remark4",
        "direct-sum orthogonality is componentwise; rectangular relation via both absolute values",
    ),
    (
        "remark7",
        "four-way equivalence for projection pairs; orthogonal sums certify parts",
    ),
    (
        "remark8",
        "partial-isometry suspension equivalences and stacking",
    ),
    (
        "prop9",
        "partial symmetries split into orthogonal projection parts",
    ),
    (
        "cor10",
        "orthogonal families of partial isometries sum to partial isometries",
    ),
    ("prop11", "direct sums of projections certify and split"),
    (
        "lemma12",
        "scalar unitary conjugation commutes with the absolute value",
    ),
    (
        "conj",
        "scalar isometry conjugation preserves projections and orthogonality",
    ),
    (
        "H",
        "condition (H): cuts of partial isometries along dominated projections",
    ),
    (
        "T",
        "condition (T): composites of partial isometries with equal support",
    ),
    (
        "lemma13",
        "splitting an equivalence witness along a sub-projection",
    ),
    (
        "prop14",
        "partial isometric equivalence is an equivalence relation",
    ),
    (
        "prop15",
        "algebra of ~ under sums and direct sums (six clauses)",
    ),
    (
        "prop16",
        "sub-equivalence is a preorder and respects direct sums",
    ),
    ("prop17", "p <~ q iff q ~ p (+) p0"),
    ("prop18", "p ~u q iff p ~ q and e-p ~ e-q"),
    (
        "cor-u",
        "p ~ q iff the zero-padded pairs are unitarily equivalent",
    ),
    (
        "prop19",
        "p ~u d* p d for scalar unitaries; a p a* ~ p for scalar isometries",
    ),
    (
        "sec5-matrix",
        "finite-dimensional rigidity: isometries are unitary, projections are finite",
    ),
    (
        "sec5-cardinal",
        "exhaustive infinite-projection laws on the (rank, corank) model",
    ),
];

pub fn describe(id: &str) -> Option<&'static str> {
    SUITES.iter().find(|(s, _)| *s == id).map(|(_, d)| *d)
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub dims: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
    pub eps_eq: f64,
    pub eps_psd: f64,
    pub serial: bool,
}

impl SuiteConfig {
    pub fn new(suite: &str) -> SuiteConfig {
        SuiteConfig {
            suite: suite.to_string(),
            seed: 0,
            cases: 200,
            dims: vec![1, 2, 3],
            blocks: vec![vec![2], vec![3], vec![1, 2]],
            eps_eq: 1e-9,
            eps_psd: 1e-8,
            serial: false,
        }
    }

    fn tolerance(&self) -> TolerancePolicy {
        TolerancePolicy {
            eps_eq: self.eps_eq,
            eps_psd: self.eps_psd,
            ..TolerancePolicy::default()
        }
    }
}

struct CaseOutcome {
    pass: bool,
    operation: &'static str,
    residual: f64,
    detail: String,
}

impl CaseOutcome {
    fn ok(operation: &'static str, residual: f64) -> CaseOutcome {
        CaseOutcome {
            pass: true,
            operation,
            residual,
            detail: String::new(),
        }
    }

    fn fail(operation: &'static str, residual: f64, detail: String) -> CaseOutcome {
        CaseOutcome {
            pass: false,
            operation,
            residual,
            detail,
        }
    }

    fn from_flag(operation: &'static str, pass: bool, residual: f64, detail: String) -> Self {
        if pass {
            CaseOutcome::ok(operation, residual)
        } else {
            CaseOutcome::fail(operation, residual, detail)
        }
    }
}

const SHAPES: [(usize, usize); 4] = [(1, 1), (2, 1), (2, 2), (3, 2)];

struct CaseCtx {
    model: Model,
    level: usize,
    shape: (usize, usize),
    rng: ChaCha8Rng,
}

fn random_ranks(model: &Model, n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    model
        .block_dims()
        .iter()
        .map(|&d| rng.gen_range(0..=(n * d)))
        .collect()
}

fn random_proj(model: &Model, n: usize, rng: &mut ChaCha8Rng) -> CoreResult<Projection> {
    let ranks = random_ranks(model, n, rng);
    isometry::random_projection_rng(model, n, &ranks, rng)
}

/// Build a projection from selected columns of a frame, per block.
fn frame_projection(
    model: &Model,
    n: usize,
    frames: &[CMat],
    pick: impl Fn(usize, usize) -> bool,
) -> CoreResult<Projection> {
    let dims = model.block_dims().to_vec();
    let mut blocks = Vec::with_capacity(dims.len());
    for (j, &d) in dims.iter().enumerate() {
        let size = n * d;
        let mut block = CMat::zeros(size, size);
        for k in 0..size {
            if pick(j, k) {
                let col = frames[j].column(k);
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
    isometry::is_order_projection(&SelfAdjoint::new(Element::new(
        model.clone(),
        n,
        n,
        blocks,
    )?)?)
}

/// Rectangular pair with disjoint left and right frame columns; always
/// orthogonal, with optional nontrivial coefficients.
fn orthogonal_rect_pair(
    model: &Model,
    m: usize,
    n: usize,
    rng: &mut ChaCha8Rng,
    scaled: bool,
) -> CoreResult<(Element, Element)> {
    let dims = model.block_dims().to_vec();
    let mut blocks_u = Vec::new();
    let mut blocks_v = Vec::new();
    for &d in &dims {
        let rows = m * d;
        let cols = n * d;
        let k = rows.min(cols);
        let x = sample::haar_unitary_rng(rows, rng);
        let y = sample::haar_unitary_rng(cols, rng);
        let split = rng.gen_range(0..=k);
        let mut bu = CMat::zeros(rows, cols);
        let mut bv = CMat::zeros(rows, cols);
        for i in 0..k {
            let target = if i < split { &mut bu } else { &mut bv };
            let c = if scaled { rng.gen_range(0.2..2.0) } else { 1.0 };
            let xc = x.column(i);
            let yc = y.column(i);
            for (a, &xa) in xc.iter().enumerate() {
                for (b, &yb) in yc.iter().enumerate() {
                    let z = target.get(a, b) + xa * yb.conj() * Complex64::new(c, 0.0);
                    target.set(a, b, z);
                }
            }
        }
        blocks_u.push(bu);
        blocks_v.push(bv);
    }
    Ok((
        Element::new(model.clone(), m, n, blocks_u)?,
        Element::new(model.clone(), m, n, blocks_v)?,
    ))
}

/// A partial symmetry: Q diag(+1/-1/0) Q^* per block.
fn random_partial_symmetry(
    model: &Model,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> CoreResult<SelfAdjoint> {
    let dims = model.block_dims().to_vec();
    let mut blocks = Vec::new();
    for &d in &dims {
        let size = n * d;
        let q = sample::haar_unitary_rng(size, rng);
        let mut diag = CMat::zeros(size, size);
        for i in 0..size {
            let v = match rng.gen_range(0..3) {
                0 => 1.0,
                1 => -1.0,
                _ => 0.0,
            };
            diag.set(i, i, Complex64::new(v, 0.0));
        }
        blocks.push(q.mul(&diag).mul(&q.adjoint()).hermitize());
    }
    SelfAdjoint::new(Element::new(model.clone(), n, n, blocks)?)
}

/// Quadruple for the direct-sum algebra: orthogonal pairs (p, p_perp) and
/// (q, q_perp) with matching blockwise ranks.
fn prop15_quadruple(
    model: &Model,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> CoreResult<(Projection, Projection, Projection, Projection)> {
    let dims = model.block_dims().to_vec();
    let splits: Vec<(usize, usize)> = dims
        .iter()
        .map(|&d| {
            let size = n * d;
            let r = rng.gen_range(0..=size);
            let s = rng.gen_range(0..=(size - r));
            (r, s)
        })
        .collect();
    let frame_a: Vec<CMat> = dims
        .iter()
        .map(|&d| sample::haar_unitary_rng(n * d, rng))
        .collect();
    let frame_b: Vec<CMat> = dims
        .iter()
        .map(|&d| sample::haar_unitary_rng(n * d, rng))
        .collect();
    let p = frame_projection(model, n, &frame_a, |j, k| k < splits[j].0)?;
    let p_perp = frame_projection(model, n, &frame_a, |j, k| {
        k >= splits[j].0 && k < splits[j].0 + splits[j].1
    })?;
    let q = frame_projection(model, n, &frame_b, |j, k| k < splits[j].0)?;
    let q_perp = frame_projection(model, n, &frame_b, |j, k| {
        k >= splits[j].0 && k < splits[j].0 + splits[j].1
    })?;
    Ok((p, q, p_perp, q_perp))
}

/// Sub-projection of p spanned by a prefix of its range basis.
fn sub_projection(p: &Projection, rng: &mut ChaCha8Rng) -> CoreResult<Projection> {
    let basis = compare::range_basis(p)?;
    let model = p.model().clone();
    let n = p.level();
    let dims = model.block_dims().to_vec();
    let mut blocks = Vec::new();
    for (cols, &d) in basis.iter().zip(&dims) {
        let size = n * d;
        let keep = if cols.is_empty() {
            0
        } else {
            rng.gen_range(0..=cols.len())
        };
        let mut block = CMat::zeros(size, size);
        for col in cols.iter().take(keep) {
            for (a, &x) in col.iter().enumerate() {
                for (b, &y) in col.iter().enumerate() {
                    let z = block.get(a, b) + x * y.conj();
                    block.set(a, b, z);
                }
            }
        }
        blocks.push(block.hermitize());
    }
    isometry::is_order_projection(&SelfAdjoint::new(Element::new(model, n, n, blocks)?)?)
}

fn run_case(cfg: &SuiteConfig, index: usize) -> CoreResult<CaseOutcome> {
    let case_seed = sample::derive_seed(cfg.seed, index as u64);
    let model = Model::new(
        cfg.blocks[index % cfg.blocks.len()].clone(),
        cfg.tolerance(),
    )?;
    let mut ctx = CaseCtx {
        model,
        level: cfg.dims[index % cfg.dims.len()],
        shape: SHAPES[index % SHAPES.len()],
        rng: sample::rng(case_seed),
    };
    match cfg.suite.as_str() {
        "prop1" => case_prop1(&mut ctx, index),
        "prop5" => case_prop5(&mut ctx, index),
        "prop6" => case_prop6(&mut ctx, index),
        "norm" => case_norm(&mut ctx),
        "remark3" => case_remark3(&mut ctx),
        "remark4" => case_remark4(&mut ctx, index),
        "remark7" => case_remark7(&mut ctx, index),
        "remark8" => case_remark8(&mut ctx, index),
        "prop9" => case_prop9(&mut ctx),
        "cor10" => case_cor10(&mut ctx),
        "prop11" => case_prop11(&mut ctx),
        "lemma12" => case_lemma12(&mut ctx),
        "conj" => case_conj(&mut ctx),
        "H" => case_cond_h(&mut ctx),
        "T" => case_cond_t(&mut ctx),
        "lemma13" => case_lemma13(&mut ctx),
        "prop14" => case_prop14(&mut ctx),
        "prop15" => case_prop15(&mut ctx),
        "prop16" => case_prop16(&mut ctx),
        "prop17" => case_prop17(&mut ctx),
        "prop18" => case_prop18(&mut ctx, index),
        "cor-u" => case_cor_u(&mut ctx),
        "prop19" => case_prop19(&mut ctx),
        "sec5-matrix" => case_sec5_matrix(&mut ctx),
        "sec5-cardinal" => case_sec5_cardinal(index),
        other => Err(amou::Error::PreconditionViolated(format!(
            "unknown suite {other}"
        ))),
    }
}

fn case_prop1(ctx: &mut CaseCtx, index: usize) -> CoreResult<CaseOutcome> {
    let constructed = index.is_multiple_of(2);
    let (u, v) = if constructed {
        sample::orthogonal_selfadjoint_pair(&ctx.model, ctx.level, ctx.rng.gen())
    } else {
        (
            sample::selfadjoint_rng(&ctx.model, ctx.level, &mut ctx.rng),
            sample::selfadjoint_rng(&ctx.model, ctx.level, &mut ctx.rng),
        )
    };
    let rep = absolute::check_prop1(&u, &v)?;
    let pass = rep.consistent && (!constructed || rep.orthogonal);
    Ok(CaseOutcome::from_flag(
        "check_prop1",
        pass,
        rep.worst_defect,
        format!(
            "orthogonal={} parts={} additive={}",
            rep.orthogonal, rep.parts_mutually_orthogonal, rep.abs_additive
        ),
    ))
}

fn case_prop5(ctx: &mut CaseCtx, index: usize) -> CoreResult<CaseOutcome> {
    let (m, n) = ctx.shape;
    let constructed = index.is_multiple_of(2);
    let (u, v) = if constructed {
        orthogonal_rect_pair(&ctx.model, m, n, &mut ctx.rng, true)?
    } else {
        (
            sample::element_rng(&ctx.model, m, n, &mut ctx.rng),
            sample::element_rng(&ctx.model, m, n, &mut ctx.rng),
        )
    };
    let rep = matrix::check_prop5(&u, &v)?;
    let pass = rep.consistent && (!constructed || rep.orthogonal);
    Ok(CaseOutcome::from_flag(
        "check_prop5",
        pass,
        rep.worst_defect,
        format!("{rep:?}"),
    ))
}

fn case_prop6(ctx: &mut CaseCtx, index: usize) -> CoreResult<CaseOutcome> {
    let (m, n) = ctx.shape;
    let v = if index.is_multiple_of(5) {
        ctx.model.zero(m, n)
    } else {
        sample::element_rng(&ctx.model, m, n, &mut ctx.rng)
    };
    let rep = matrix::check_zero_prop(&v)?;
    Ok(CaseOutcome::from_flag(
        "check_zero_prop",
        rep.consistent,
        0.0,
        format!("{rep:?}"),
    ))
}

fn case_norm(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let (m, n) = ctx.shape;
    let v = sample::element_rng(&ctx.model, m, n, &mut ctx.rng);
    let bisect = matrix::order_unit_norm(&v)?;
    let oracle = v.spectral_norm();
    let deviation = (bisect - oracle).abs();
    let rep = matrix::check_norm_prop(&v)?;
    let pass = deviation <= matrix::NORM_AGREEMENT_TOL && rep.within;
    Ok(CaseOutcome::from_flag(
        "order_unit_norm",
        pass,
        deviation.max(rep.max_deviation),
        format!("bisect={bisect} oracle={oracle} norm_prop={:?}", rep.within),
    ))
}

fn case_remark3(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let (m, n) = ctx.shape;
    let v = sample::element_rng(&ctx.model, m, n, &mut ctx.rng);
    let extra = 1 + ctx.rng.gen_range(0..2usize);
    let alpha = sample::haar_isometry_rng(m + extra, m, &mut ctx.rng);
    let rep = matrix::check_structural_identities(&v, &alpha, extra, 1)?;
    let worst = rep
        .defects
        .iter()
        .copied()
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max);
    Ok(CaseOutcome::from_flag(
        "check_structural_identities",
        rep.pass,
        worst,
        format!("defects {:?}", rep.defects),
    ))
}

fn case_remark4(ctx: &mut CaseCtx, index: usize) -> CoreResult<CaseOutcome> {
    let n = ctx.level;
    let (u1, u2) = if index.is_multiple_of(2) {
        sample::orthogonal_positive_pair(&ctx.model, n, ctx.rng.gen())
    } else {
        (
            sample::positive_rng(&ctx.model, n, &mut ctx.rng),
            sample::positive_rng(&ctx.model, n, &mut ctx.rng),
        )
    };
    let (v1, v2) = if index.is_multiple_of(3) {
        sample::orthogonal_positive_pair(&ctx.model, 1, ctx.rng.gen())
    } else {
        (
            sample::positive_rng(&ctx.model, 1, &mut ctx.rng),
            sample::positive_rng(&ctx.model, 1, &mut ctx.rng),
        )
    };
    let (m2, n2) = ctx.shape;
    let (x, y) = if index.is_multiple_of(2) {
        orthogonal_rect_pair(&ctx.model, m2, n2, &mut ctx.rng, true)?
    } else {
        (
            sample::element_rng(&ctx.model, m2, n2, &mut ctx.rng),
            sample::element_rng(&ctx.model, m2, n2, &mut ctx.rng),
        )
    };
    let rep = matrix::check_sum_orthogonality(&u1, &u2, &v1, &v2, (&x, &y))?;
    Ok(CaseOutcome::from_flag(
        "check_sum_orthogonality",
        rep.consistent,
        0.0,
        format!("{rep:?}"),
    ))
}

fn case_remark7(ctx: &mut CaseCtx, index: usize) -> CoreResult<CaseOutcome> {
    let n = ctx.level;
    let p = random_proj(&ctx.model, n, &mut ctx.rng)?;
    let q = if index.is_multiple_of(2) {
        // orthogonal by construction: a sub-projection of the complement
        sub_projection(&p.complement()?, &mut ctx.rng)?
    } else {
        random_proj(&ctx.model, n, &mut ctx.rng)?
    };
    let rep = isometry::check_projection_pair(&p, &q)?;
    let mut pass = rep.all_equivalent && (!index.is_multiple_of(2) || rep.orthogonal);

    // orthogonal decompositions certify their parts
    if index.is_multiple_of(2) {
        let r = random_proj(&ctx.model, n, &mut ctx.rng)?;
        let u = sub_projection(&r, &mut ctx.rng)?;
        let v = isometry::is_order_projection(&r.element().sub(u.element())?)?;
        pass &= isometry::check_ortho_sum_projections(u.element(), v.element())?;
    }
    Ok(CaseOutcome::from_flag(
        "check_projection_pair",
        pass,
        p.residual().max(q.residual()),
        format!("{rep:?}"),
    ))
}

fn case_remark8(ctx: &mut CaseCtx, index: usize) -> CoreResult<CaseOutcome> {
    let (m, n) = ctx.shape;
    let v = if index.is_multiple_of(2) {
        let caps: Vec<usize> = ctx
            .model
            .block_dims()
            .iter()
            .map(|&d| ctx.rng.gen_range(0..=(m * d).min(n * d)))
            .collect();
        isometry::random_partial_isometry_rng(&ctx.model, m, n, &caps, &mut ctx.rng)?
            .element()
            .clone()
    } else {
        sample::element_rng(&ctx.model, m, n, &mut ctx.rng)
    };
    let rep = isometry::check_suspension_equivalence(&v)?;
    let mut pass = rep.consistent && (!index.is_multiple_of(2) || (rep.direct && rep.abs_identity));

    if index.is_multiple_of(2) {
        // stacking orthogonal partial isometries stays partial isometric
        let (a, b) = orthogonal_rect_pair(&ctx.model, m, n, &mut ctx.rng, false)?;
        pass &= isometry::certify_partial_isometry(&matrix::stack_rows(&a, &b)?).is_ok();
        pass &= isometry::certify_partial_isometry(&matrix::stack_cols(&a, &b)?).is_ok();
        // padding a rectangular partial isometry to a square one
        if m != n {
            let square = m.max(n);
            let padded = matrix::corner_embed(&v, 0, 0, square, square)?;
            pass &= isometry::certify_partial_isometry(&padded).is_ok();
        }
    }
    Ok(CaseOutcome::from_flag(
        "check_suspension_equivalence",
        pass,
        0.0,
        format!("{rep:?}"),
    ))
}

fn case_prop9(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let v = random_partial_symmetry(&ctx.model, ctx.level, &mut ctx.rng)?;
    let (plus, minus) = isometry::ps_decompose(&v)?;
    let recombined = plus.element().sub(minus.element())?;
    let defect = recombined.eq_defect(&v)?;
    let pass =
        defect <= ctx.model.tol().eps_eq && absolute::ortho_pos(plus.element(), minus.element())?;
    Ok(CaseOutcome::from_flag(
        "ps_decompose",
        pass,
        plus.residual().max(minus.residual()).max(defect),
        String::new(),
    ))
}

fn case_cor10(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let (m, n) = ctx.shape;
    let (a, b) = orthogonal_rect_pair(&ctx.model, m, n, &mut ctx.rng, false)?;
    let pa = isometry::certify_partial_isometry(&a)?;
    let pb = isometry::certify_partial_isometry(&b)?;
    let sum = isometry::pi_orthogonal_sum(&[pa, pb])?;
    Ok(CaseOutcome::ok("pi_orthogonal_sum", sum.residual()))
}

fn case_prop11(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let a = ctx.level;
    let b = 1 + (a % 2);
    let p = random_proj(&ctx.model, a, &mut ctx.rng)?;
    let q = random_proj(&ctx.model, b, &mut ctx.rng)?;
    let sum = isometry::proj_direct_sum(&p, &q)?;
    let (p2, q2) = isometry::proj_split(&sum, a, b)?;
    let defect = p2
        .element()
        .eq_defect(p.element())?
        .max(q2.element().eq_defect(q.element())?);
    Ok(CaseOutcome::from_flag(
        "proj_direct_sum",
        defect <= ctx.model.tol().eps_eq,
        sum.residual().max(defect),
        String::new(),
    ))
}

fn case_lemma12(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let n = ctx.level;
    let v = sample::element_rng(&ctx.model, n, n, &mut ctx.rng);
    let alpha = sample::haar_unitary_rng(n, &mut ctx.rng);
    let rep = isometry::unitary_conj_abs(&alpha, &v)?;
    Ok(CaseOutcome::from_flag(
        "unitary_conj_abs",
        rep.pass,
        rep.defect,
        String::new(),
    ))
}

fn case_conj(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let n = ctx.level;
    let m = n + 1 + ctx.rng.gen_range(0..2usize);
    let alpha = sample::haar_isometry_rng(m, n, &mut ctx.rng);
    let p = random_proj(&ctx.model, n, &mut ctx.rng)?;
    let conj = isometry::isometry_conj_proj(&alpha, &p)?;
    let (u, v) = sample::orthogonal_positive_pair(&ctx.model, n, ctx.rng.gen());
    let preserved = isometry::conj_preserves_ortho(&alpha, &u, &v)?;
    Ok(CaseOutcome::from_flag(
        "isometry_conj_proj",
        preserved,
        conj.residual(),
        String::new(),
    ))
}

fn case_cond_h(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let (m, n) = ctx.shape;
    let caps: Vec<usize> = ctx
        .model
        .block_dims()
        .iter()
        .map(|&d| ctx.rng.gen_range(0..=(m * d).min(n * d)))
        .collect();
    let u = isometry::random_partial_isometry_rng(&ctx.model, m, n, &caps, &mut ctx.rng)?;
    let p = sub_projection(u.support_proj(), &mut ctx.rng)?;
    let cut = compare::cond_h_witness(&u, &p)?;
    let rest = u.element().sub(cut.element())?;
    let pass = matrix::ortho_rect(cut.element(), &rest)?
        && cut.support_proj().element().eq_defect(p.element())? <= ctx.model.tol().eps_eq;
    Ok(CaseOutcome::from_flag(
        "cond_h_witness",
        pass,
        cut.residual(),
        String::new(),
    ))
}

fn case_cond_t(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let n = ctx.level;
    let support = random_proj(&ctx.model, n, &mut ctx.rng)?;
    let q1 = {
        let r = compare::ranks(&support)?;
        isometry::random_projection_rng(&ctx.model, n, &r, &mut ctx.rng)?
    };
    let q2 = {
        let r = compare::ranks(&support)?;
        isometry::random_projection_rng(&ctx.model, n, &r, &mut ctx.rng)?
    };
    let a = compare::equivalent(&support, &q1)?.adjoint()?;
    let b = compare::equivalent(&support, &q2)?.adjoint()?;
    let w = compare::cond_t_witness(a.witness(), b.witness())?;
    let pass = w.support_proj().element().approx_eq(q1.element())?
        && w.range_proj().element().approx_eq(q2.element())?;
    Ok(CaseOutcome::from_flag(
        "cond_t_witness",
        pass,
        w.residual(),
        String::new(),
    ))
}

fn case_lemma13(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let n = ctx.level;
    let p = random_proj(&ctx.model, n, &mut ctx.rng)?;
    let q = {
        let r = compare::ranks(&p)?;
        isometry::random_projection_rng(&ctx.model, n, &r, &mut ctx.rng)?
    };
    let w = compare::equivalent(&p, &q)?;
    let p1 = sub_projection(&p, &mut ctx.rng)?;
    let (q1, w1, w2) = compare::lemma13_split(&w, &p1)?;
    let dominated =
        q.element().sub(q1.element())?.element().min_eigenvalue()? >= -ctx.model.tol().eps_psd;
    Ok(CaseOutcome::from_flag(
        "lemma13_split",
        dominated,
        w1.residual().max(w2.residual()),
        String::new(),
    ))
}

fn case_prop14(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let n = ctx.level;
    let ranks = random_ranks(&ctx.model, n, &mut ctx.rng);
    let p = isometry::random_projection_rng(&ctx.model, n, &ranks, &mut ctx.rng)?;
    let q = isometry::random_projection_rng(&ctx.model, n, &ranks, &mut ctx.rng)?;
    let r = isometry::random_projection_rng(&ctx.model, n, &ranks, &mut ctx.rng)?;
    // reflexivity with the identity witness
    let refl = compare::EquivalenceWitness::certify(p.element().element(), &p, &p)?;
    // symmetry via the adjoint
    let w_pq = compare::equivalent(&p, &q)?;
    let back = w_pq.adjoint()?;
    // transitivity through condition (T)
    let w_qr = compare::equivalent(&q, &r)?;
    let w_pr = compare::transitive_witness(&w_pq, &w_qr)?;
    let residual = refl.residual().max(back.residual()).max(w_pr.residual());
    Ok(CaseOutcome::ok("equivalence relation laws", residual))
}

fn case_prop15(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let (p, q, p_perp, q_perp) = prop15_quadruple(&ctx.model, ctx.level, &mut ctx.rng)?;
    let rep = compare::check_prop15(&p, &q, &p_perp, &q_perp)?;
    Ok(CaseOutcome::from_flag(
        "check_prop15",
        rep.pass,
        rep.worst_residual,
        format!("{rep:?}"),
    ))
}

fn case_prop16(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let n = ctx.level;
    // a <~ b <~ c by construction: nested rank vectors
    let rc = random_ranks(&ctx.model, n, &mut ctx.rng);
    let rb: Vec<usize> = rc.iter().map(|&r| ctx.rng.gen_range(0..=r)).collect();
    let ra: Vec<usize> = rb.iter().map(|&r| ctx.rng.gen_range(0..=r)).collect();
    let a = isometry::random_projection_rng(&ctx.model, n, &ra, &mut ctx.rng)?;
    let b = isometry::random_projection_rng(&ctx.model, n, &rb, &mut ctx.rng)?;
    let c = isometry::random_projection_rng(&ctx.model, n, &rc, &mut ctx.rng)?;
    // reflexivity
    let s_aa = compare::subequivalent(&a, &a)?;
    // transitivity through lemma 13
    let s_ab = compare::subequivalent(&a, &b)?;
    let s_bc = compare::subequivalent(&b, &c)?;
    let (q1, w_cut, _) = compare::lemma13_split(&s_bc.inner, &s_ab.r)?;
    let w_aq1 = compare::transitive_witness(&s_ab.inner, &w_cut)?;
    let dominated =
        c.element().sub(q1.element())?.element().min_eigenvalue()? >= -ctx.model.tol().eps_psd;
    // direct sums respect the preorder
    let oplus_res = compare::check_sub_oplus(&a, &b, &a, &c)?;
    Ok(CaseOutcome::from_flag(
        "subequivalence preorder",
        dominated,
        s_aa.inner.residual().max(w_aq1.residual()).max(oplus_res),
        String::new(),
    ))
}

fn case_prop17(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let n = ctx.level;
    let rq = random_ranks(&ctx.model, n, &mut ctx.rng);
    let rp: Vec<usize> = rq.iter().map(|&r| ctx.rng.gen_range(0..=r)).collect();
    let p = isometry::random_projection_rng(&ctx.model, n, &rp, &mut ctx.rng)?;
    let q = isometry::random_projection_rng(&ctx.model, n, &rq, &mut ctx.rng)?;
    let s = compare::subequivalent(&p, &q)?;
    // round trip: q ~ p (+) p0 implies p <~ q via the split
    let direct = isometry::proj_direct_sum(&p, &s.complement)?;
    let again = compare::equivalent(&q, &direct)?;
    Ok(CaseOutcome::ok(
        "subequivalent",
        s.inner
            .residual()
            .max(s.roundtrip.residual())
            .max(again.residual()),
    ))
}

fn case_prop18(ctx: &mut CaseCtx, index: usize) -> CoreResult<CaseOutcome> {
    let n = ctx.level;
    let ra = random_ranks(&ctx.model, n, &mut ctx.rng);
    let p = isometry::random_projection_rng(&ctx.model, n, &ra, &mut ctx.rng)?;
    let q = if index.is_multiple_of(2) {
        isometry::random_projection_rng(&ctx.model, n, &ra, &mut ctx.rng)?
    } else {
        random_proj(&ctx.model, n, &mut ctx.rng)?
    };
    let both = compare::equivalent(&p, &q).is_ok()
        && compare::equivalent(&p.complement()?, &q.complement()?).is_ok();
    let unitary = compare::unitarily_equivalent(&p, &q);
    let pass = unitary.is_ok() == both;
    let residual = unitary.map(|u| u.component.residual()).unwrap_or(0.0);
    Ok(CaseOutcome::from_flag(
        "unitarily_equivalent",
        pass,
        residual,
        String::new(),
    ))
}

fn case_cor_u(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let n = ctx.level;
    let p = random_proj(&ctx.model, n, &mut ctx.rng)?;
    let q = random_proj(&ctx.model, n, &mut ctx.rng)?;
    let zero = Projection::zero(&ctx.model, n);
    let plain = compare::equivalent(&p, &q).is_ok();
    let tail = compare::unitarily_equivalent(
        &isometry::proj_direct_sum(&p, &zero)?,
        &isometry::proj_direct_sum(&q, &zero)?,
    )
    .is_ok();
    let front = compare::unitarily_equivalent(
        &isometry::proj_direct_sum(&zero, &p)?,
        &isometry::proj_direct_sum(&zero, &q)?,
    )
    .is_ok();
    Ok(CaseOutcome::from_flag(
        "padding corollary chain",
        plain == tail && tail == front,
        0.0,
        format!("plain={plain} tail={tail} front={front}"),
    ))
}

fn case_prop19(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let n = ctx.level;
    let p = random_proj(&ctx.model, n, &mut ctx.rng)?;
    let delta = sample::haar_unitary_rng(n, &mut ctx.rng);
    let rep = compare::scalar_unitary_conj_equiv(&p, &delta)?;
    let alpha = sample::haar_isometry_rng(n + 1, n, &mut ctx.rng);
    let w = compare::isometry_conj_equiv(&p, &alpha)?;
    Ok(CaseOutcome::ok(
        "scalar_unitary_conj_equiv",
        rep.residual.max(w.residual()),
    ))
}

fn case_sec5_matrix(ctx: &mut CaseCtx) -> CoreResult<CaseOutcome> {
    let n = ctx.level;
    let p = random_proj(&ctx.model, n, &mut ctx.rng)?;
    let fin = finite::is_finite_matrix(&p, 10, ctx.rng.gen())?;
    let v = finite::random_square_isometry_rng(&ctx.model, n, &mut ctx.rng)?;
    let iso = finite::verify_isometry_unitary(&v)?;

    // hereditary check on a nested orthogonal triple
    let q = random_proj(&ctx.model, n, &mut ctx.rng)?;
    let p1 = sub_projection(&q, &mut ctx.rng)?;
    let p2 = isometry::is_order_projection(&q.element().sub(p1.element())?)?;
    let hered = finite::check_finiteness_hereditary(&p1, &p2, &q, 5, ctx.rng.gen())?;

    let pass = fin.finite && iso.unitary && hered.consistent;
    Ok(CaseOutcome::from_flag(
        "finiteness",
        pass,
        fin.max_deviation.max(iso.residual),
        format!(
            "finite={} unitary={} hereditary={}",
            fin.finite, iso.unitary, hered.consistent
        ),
    ))
}

fn case_sec5_cardinal(index: usize) -> CoreResult<CaseOutcome> {
    let top = 1 + (index % 5) as u64;
    let mut grid: Vec<ExtNat> = (0..=top).map(ExtNat::Fin).collect();
    grid.push(ExtNat::Omega);
    let rep = cardinal::card_check_section5(&grid)?;
    Ok(CaseOutcome::from_flag(
        "card_check_section5",
        rep.passed(),
        0.0,
        format!("{:?}", rep.stats),
    ))
}

/// Run a suite to a deterministic report.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport, String> {
    if describe(&cfg.suite).is_none() {
        return Err(format!("unknown suite id: {}", cfg.suite));
    }
    if cfg.dims.is_empty() || cfg.blocks.is_empty() {
        return Err("dims and blocks must be nonempty".to_string());
    }
    let outcomes: Vec<(usize, CoreResult<CaseOutcome>)> = if cfg.serial {
        (0..cfg.cases).map(|i| (i, run_case(cfg, i))).collect()
    } else {
        (0..cfg.cases)
            .into_par_iter()
            .map(|i| (i, run_case(cfg, i)))
            .collect()
    };

    let mut passes = 0usize;
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (i, outcome) in outcomes {
        let case_seed = sample::derive_seed(cfg.seed, i as u64);
        match outcome {
            Ok(o) if o.pass => {
                passes += 1;
                worst = worst.max(o.residual);
            }
            Ok(o) => failures.push(FailureRecord {
                case: i,
                case_seed,
                operation: o.operation.to_string(),
                residual: F17(o.residual),
                detail: o.detail,
            }),
            Err(e) => failures.push(FailureRecord {
                case: i,
                case_seed,
                operation: "error".to_string(),
                residual: F17(f64::NAN),
                detail: e.to_string(),
            }),
        }
    }

    Ok(SuiteReport {
        suite: cfg.suite.clone(),
        seed: cfg.seed,
        cases: cfg.cases,
        passes,
        worst_residual: F17(worst),
        dims: cfg.dims.clone(),
        block_dims: cfg.blocks.clone(),
        eps_eq: F17(cfg.eps_eq),
        eps_psd: F17(cfg.eps_psd),
        failures,
        timestamp: now_rfc3339ish(),
    })
}

/// Wall-clock timestamp; the only nondeterministic report field.
fn now_rfc3339ish() -> String {
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .unwrap_or_default();
    format!("unix:{}.{:03}", now.as_secs(), now.subsec_millis())
}
