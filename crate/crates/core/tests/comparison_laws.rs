//! Round-trip laws of the comparison machinery: witness re-certification,
//! rank-decidability and its stability, sub-equivalence and unitary
//! equivalence round trips, and the padding corollary chain.

use amou::compare::{self, equivalent, subequivalent, unitarily_equivalent, EquivalenceWitness};
use amou::element::{Model, SelfAdjoint};
use amou::error::Error;
use amou::isometry::{proj_direct_sum, random_partial_isometry, random_projection, Projection};
use amou::sample;

fn models() -> Vec<Model> {
    [vec![2], vec![3], vec![1, 2]]
        .into_iter()
        .map(|d| Model::with_default_tol(d).unwrap())
        .collect()
}

#[test]
fn equivalence_is_rank_decidable_and_witnessed() {
    let models = models();
    for case in 0..100u64 {
        let model = &models[(case % 3) as usize];
        let n = 1 + (case as usize / 3) % 2;
        let mut rng = sample::rng(sample::derive_seed(10_000, case));
        let rank_of = |rng: &mut rand_chacha::ChaCha8Rng| {
            model
                .block_dims()
                .iter()
                .map(|&d| rand::Rng::gen_range(rng, 0..=(n * d)))
                .collect::<Vec<usize>>()
        };
        let rp = rank_of(&mut rng);
        let rq = rank_of(&mut rng);
        let p = amou::isometry::random_projection_rng(model, n, &rp, &mut rng).unwrap();
        let q = amou::isometry::random_projection_rng(model, n, &rq, &mut rng).unwrap();
        match equivalent(&p, &q) {
            Ok(w) => {
                assert_eq!(rp, rq, "witness produced for mismatched ranks");
                assert!(w.residual() <= 1e-9);
            }
            Err(Error::NotEquivalent { p_ranks, q_ranks }) => {
                assert_eq!(p_ranks, rp);
                assert_eq!(q_ranks, rq);
                assert_ne!(rp, rq);
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}

#[test]
fn equivalence_decision_is_stable_under_perturbation() {
    let model = Model::with_default_tol(vec![2]).unwrap();
    for case in 0..30u64 {
        let mut rng = sample::rng(sample::derive_seed(10_100, case));
        let p = amou::isometry::random_projection_rng(&model, 2, &[2], &mut rng).unwrap();
        let q = amou::isometry::random_projection_rng(&model, 2, &[3], &mut rng).unwrap();
        // an eps-sized Hermitian perturbation must not flip the decision
        let noise = sample::selfadjoint_rng(&model, 2, &mut rng).scale_re(1e-10);
        let p2 = amou::isometry::is_order_projection(&p.element().add(&noise).unwrap()).unwrap();
        assert!(matches!(
            equivalent(&p2, &q),
            Err(Error::NotEquivalent { .. })
        ));
        assert!(equivalent(&p2, &p).is_ok());
    }
}

#[test]
fn condition_h_and_t_on_random_instances() {
    let models = models();
    for case in 0..60u64 {
        let model = &models[(case % 3) as usize];
        let mut rng = sample::rng(sample::derive_seed(10_200, case));
        let caps: Vec<usize> = model
            .block_dims()
            .iter()
            .map(|&d| rand::Rng::gen_range(&mut rng, 0..=2 * d))
            .collect();
        let u = amou::isometry::random_partial_isometry_rng(model, 2, 2, &caps, &mut rng).unwrap();
        // cut along a random sub-projection of the support
        let basis = compare::range_basis(u.support_proj()).unwrap();
        let keep: Vec<usize> = basis
            .iter()
            .map(|cols| {
                if cols.is_empty() {
                    0
                } else {
                    rand::Rng::gen_range(&mut rng, 0..=cols.len())
                }
            })
            .collect();
        let sub = {
            let dims = model.block_dims().to_vec();
            let blocks: Vec<amou::linalg::CMat> = basis
                .iter()
                .zip(&dims)
                .zip(&keep)
                .map(|((cols, &d), &k)| {
                    let size = 2 * d;
                    let mut block = amou::linalg::CMat::zeros(size, size);
                    for col in cols.iter().take(k) {
                        for (a, &x) in col.iter().enumerate() {
                            for (b, &y) in col.iter().enumerate() {
                                let z = block.get(a, b) + x * y.conj();
                                block.set(a, b, z);
                            }
                        }
                    }
                    block.hermitize()
                })
                .collect();
            amou::isometry::is_order_projection(
                &SelfAdjoint::new(
                    amou::element::Element::new(model.clone(), 2, 2, blocks).unwrap(),
                )
                .unwrap(),
            )
            .unwrap()
        };
        let cut = compare::cond_h_witness(&u, &sub).unwrap();
        assert!(cut.residual() <= 1e-9, "case {case}");

        // condition (T): two witnesses sharing the support u.support_proj()
        let q1 = amou::isometry::random_projection_rng(model, 2, &caps, &mut rng).unwrap();
        let q2 = amou::isometry::random_projection_rng(model, 2, &caps, &mut rng).unwrap();
        let a = equivalent(u.support_proj(), &q1)
            .unwrap()
            .adjoint()
            .unwrap();
        let b = equivalent(u.support_proj(), &q2)
            .unwrap()
            .adjoint()
            .unwrap();
        let composite = compare::cond_t_witness(a.witness(), b.witness()).unwrap();
        assert!(composite.residual() <= 1e-9, "case {case}");
        assert!(composite
            .support_proj()
            .element()
            .approx_eq(q1.element())
            .unwrap());
        assert!(composite
            .range_proj()
            .element()
            .approx_eq(q2.element())
            .unwrap());
    }
}

#[test]
fn prop17_roundtrip() {
    let models = models();
    for case in 0..60u64 {
        let model = &models[(case % 3) as usize];
        let mut rng = sample::rng(sample::derive_seed(10_300, case));
        let small: Vec<usize> = model
            .block_dims()
            .iter()
            .map(|&d| rand::Rng::gen_range(&mut rng, 0..=d))
            .collect();
        let big: Vec<usize> = model
            .block_dims()
            .iter()
            .zip(&small)
            .map(|(&d, &s)| rand::Rng::gen_range(&mut rng, s..=2 * d))
            .collect();
        let p = amou::isometry::random_projection_rng(model, 2, &small, &mut rng).unwrap();
        let q = amou::isometry::random_projection_rng(model, 2, &big, &mut rng).unwrap();
        let s = subequivalent(&p, &q).unwrap();
        // q ~ p (+) p0 certifies and implies p <~ q again
        assert!(s.roundtrip.residual() <= 1e-9);
        let direct = proj_direct_sum(&p, &s.complement).unwrap();
        assert!(equivalent(&q, &direct).is_ok(), "case {case}");
        // and conversely the padded equivalence restores sub-equivalence
        assert!(subequivalent(&p, &q).is_ok());
    }
}

#[test]
fn prop18_roundtrip() {
    let models = models();
    for case in 0..60u64 {
        let model = &models[(case % 3) as usize];
        let mut rng = sample::rng(sample::derive_seed(10_400, case));
        let ranks_a: Vec<usize> = model
            .block_dims()
            .iter()
            .map(|&d| rand::Rng::gen_range(&mut rng, 0..=2 * d))
            .collect();
        let p = amou::isometry::random_projection_rng(model, 2, &ranks_a, &mut rng).unwrap();
        let q = if case % 2 == 0 {
            amou::isometry::random_projection_rng(model, 2, &ranks_a, &mut rng).unwrap()
        } else {
            let other: Vec<usize> = model
                .block_dims()
                .iter()
                .map(|&d| rand::Rng::gen_range(&mut rng, 0..=2 * d))
                .collect();
            amou::isometry::random_projection_rng(model, 2, &other, &mut rng).unwrap()
        };
        let both = equivalent(&p, &q).is_ok()
            && equivalent(&p.complement().unwrap(), &q.complement().unwrap()).is_ok();
        assert_eq!(
            unitarily_equivalent(&p, &q).is_ok(),
            both,
            "case {case}: round trip broken"
        );
    }
}

#[test]
fn padding_corollary_chain() {
    let model = Model::with_default_tol(vec![2]).unwrap();
    for case in 0..30u64 {
        let mut rng = sample::rng(sample::derive_seed(10_500, case));
        let ra = rand::Rng::gen_range(&mut rng, 0..=4usize);
        let rb = rand::Rng::gen_range(&mut rng, 0..=4usize);
        let p = amou::isometry::random_projection_rng(&model, 2, &[ra], &mut rng).unwrap();
        let q = amou::isometry::random_projection_rng(&model, 2, &[rb], &mut rng).unwrap();
        let zero = Projection::zero(&model, 2);
        let plain = equivalent(&p, &q).is_ok();
        let padded = unitarily_equivalent(
            &proj_direct_sum(&p, &zero).unwrap(),
            &proj_direct_sum(&q, &zero).unwrap(),
        )
        .is_ok();
        let padded_front = unitarily_equivalent(
            &proj_direct_sum(&zero, &p).unwrap(),
            &proj_direct_sum(&zero, &q).unwrap(),
        )
        .is_ok();
        assert_eq!(plain, padded, "case {case}");
        assert_eq!(plain, padded_front, "case {case}");
    }
}

#[test]
fn witnesses_recertify_from_scratch() {
    let model = Model::with_default_tol(vec![3]).unwrap();
    let p = random_projection(&model, 1, &[2], 10_600).unwrap();
    let q = random_projection(&model, 1, &[2], 10_601).unwrap();
    let w = equivalent(&p, &q).unwrap();
    // rebuilding the witness from its raw element re-runs all checks
    let again = EquivalenceWitness::certify(w.witness().element(), &p, &q).unwrap();
    assert!(again.residual() <= 1e-9);
    // a corrupted element fails certification
    let bad = w
        .witness()
        .element()
        .add(&model.unit(1).scale_re(0.1))
        .unwrap();
    assert!(EquivalenceWitness::certify(&bad, &p, &q).is_err());

    // adjoint of a genuine partial isometry stays certified
    let v = random_partial_isometry(&model, 2, 1, &[2], 10_602).unwrap();
    assert!(amou::isometry::certify_partial_isometry(&v.element().adjoint()).is_ok());
}
