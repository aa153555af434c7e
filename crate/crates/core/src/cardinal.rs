//! A symbolic model of projections on l2: extended-natural (rank, corank)
//! pairs. Equivalence is rank equality, sub-equivalence is rank order, and
//! the infinite phenomena (infinite and properly infinite projections,
//! decreasing sequences) are decidable and checked exhaustively over grids.
//!
//! Complements are always stored, never computed by subtraction, so no
//! omega-minus-omega expression ever arises. A consequence of keeping only
//! (rank, corank) signatures: when rank and corank are both omega, a proper
//! sub-projection can share the signature of its parent; strictness is then
//! witnessed by an explicitly stored nonzero gap rather than by signature
//! inequality.

use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};

/// Extended natural number: a finite count or omega.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Fin(u64),
    Omega,
}

impl ExtNat {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtNat::Fin(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtNat::Fin(0))
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, other: ExtNat) -> ExtNat {
        match (self, other) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => ExtNat::Fin(a + b),
            _ => ExtNat::Omega,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(k) => write!(f, "{k}"),
            ExtNat::Omega => write!(f, "w"),
        }
    }
}

/// A projection on a space of dimension rank + corank, identified by its
/// range dimension and complement dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CardProj {
    pub rank: ExtNat,
    pub corank: ExtNat,
}

impl CardProj {
    pub fn new(rank: ExtNat, corank: ExtNat) -> CardProj {
        CardProj { rank, corank }
    }

    pub fn ambient(&self) -> ExtNat {
        self.rank + self.corank
    }

    pub fn is_zero(&self) -> bool {
        self.rank.is_zero()
    }
}

impl fmt::Display for CardProj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.rank, self.corank)
    }
}

fn same_ambient(p: &CardProj, q: &CardProj) -> Result<()> {
    if p.ambient() != q.ambient() {
        return Err(Error::AmbientMismatch);
    }
    Ok(())
}

/// Murray-von Neumann equivalence within one ambient space: equal rank.
pub fn card_equiv(p: &CardProj, q: &CardProj) -> Result<bool> {
    same_ambient(p, q)?;
    Ok(p.rank == q.rank)
}

/// Sub-equivalence within one ambient space: rank order.
pub fn card_subequiv(p: &CardProj, q: &CardProj) -> Result<bool> {
    same_ambient(p, q)?;
    Ok(p.rank <= q.rank)
}

/// The cross-ambient comparisons on the union of all levels; p compares to q
/// after zero-padding into a common ambient, which reduces to rank order.
pub fn card_equiv_infty(p: &CardProj, q: &CardProj) -> bool {
    p.rank == q.rank
}

pub fn card_subequiv_infty(p: &CardProj, q: &CardProj) -> bool {
    p.rank <= q.rank
}

/// Is q realizable as a sub-projection of p?
pub fn card_le(q: &CardProj, p: &CardProj) -> Result<bool> {
    same_ambient(q, p)?;
    Ok(q.rank <= p.rank && p.corank <= q.corank)
}

/// Direct sum; ambients add.
pub fn card_oplus(p: &CardProj, q: &CardProj) -> CardProj {
    CardProj {
        rank: p.rank + q.rank,
        corank: p.corank + q.corank,
    }
}

/// Infiniteness: a strictly smaller equivalent sub-projection exists exactly
/// when the rank is omega. The witness drops one dimension of the range;
/// with an omega corank its signature coincides with p, and strictness is
/// carried by the dropped rank-one gap.
pub fn card_is_infinite(p: &CardProj) -> (bool, Option<CardProj>) {
    if p.rank == ExtNat::Omega {
        let witness = CardProj {
            rank: ExtNat::Omega,
            corank: p.corank + ExtNat::Fin(1),
        };
        (true, Some(witness))
    } else {
        (false, None)
    }
}

/// Properly infinite: two orthogonal copies of p fit under p. Decided by the
/// definition (orthogonal equivalent halves) and by the doubling criterion
/// p (+) p <~ p; the two must agree.
pub fn card_is_properly_infinite(p: &CardProj) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroProjection);
    }
    // definition: r + s <= p with r ~ p ~ s needs rank r = rank s = rank p
    // and rank r + rank s <= rank p
    let by_definition = p.rank + p.rank <= p.rank;
    // doubling criterion via cross-ambient comparison
    let by_doubling = card_subequiv_infty(&card_oplus(p, p), p);
    if by_definition != by_doubling {
        return Err(Error::CertificationFailed(format!(
            "properly-infinite criteria disagree on {p}"
        )));
    }
    Ok(by_definition)
}

/// A strictly decreasing chain of infinite projections below p with stored
/// rank-one gaps.
#[derive(Debug, Clone)]
pub struct DecreasingSequence {
    pub steps: Vec<CardProj>,
    pub gaps: Vec<CardProj>,
}

/// r_1 = p, r_{i+1} drops one more range dimension; every step is infinite
/// and equivalent to p, every gap has rank one.
pub fn card_decreasing_sequence(p: &CardProj, length: usize) -> Result<DecreasingSequence> {
    if !card_is_infinite(p).0 {
        return Err(Error::NotInfinite);
    }
    let mut steps = Vec::with_capacity(length);
    let mut gaps = Vec::with_capacity(length.saturating_sub(1));
    for i in 0..length {
        steps.push(CardProj {
            rank: ExtNat::Omega,
            corank: p.corank + ExtNat::Fin(i as u64),
        });
        if i > 0 {
            gaps.push(CardProj {
                rank: ExtNat::Fin(1),
                corank: ExtNat::Omega,
            });
        }
    }
    Ok(DecreasingSequence { steps, gaps })
}

/// The default verification grid {0..5, omega}.
pub fn default_grid() -> Vec<ExtNat> {
    let mut g: Vec<ExtNat> = (0..=5).map(ExtNat::Fin).collect();
    g.push(ExtNat::Omega);
    g
}

/// Tally for one exhaustive law.
#[derive(Debug, Clone)]
pub struct LawStat {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

#[derive(Debug, Clone)]
pub struct Section5Report {
    pub stats: Vec<LawStat>,
}

impl Section5Report {
    pub fn passed(&self) -> bool {
        self.stats.iter().all(|s| s.failures == 0)
    }

    pub fn cases(&self) -> usize {
        self.stats.iter().map(|s| s.cases).sum()
    }
}

struct Law {
    name: &'static str,
    cases: usize,
    failures: usize,
}

impl Law {
    fn new(name: &'static str) -> Law {
        Law {
            name,
            cases: 0,
            failures: 0,
        }
    }

    fn check(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn stat(self) -> LawStat {
        LawStat {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
        }
    }
}

/// Exhaustively verify the infinite-projection laws over all signatures with
/// rank and corank drawn from `grid`. Every check is exact; enumeration is
/// the oracle.
pub fn card_check_section5(grid: &[ExtNat]) -> Result<Section5Report> {
    let projs: Vec<CardProj> = grid
        .iter()
        .flat_map(|&r| grid.iter().map(move |&c| CardProj::new(r, c)))
        .collect();
    let nonzero_ranks: Vec<ExtNat> = grid.iter().copied().filter(|r| !r.is_zero()).collect();

    let mut characterization = Law::new("infinite-characterization");
    let mut lemma21 = Law::new("equivalence preserves infiniteness");
    let mut prop23 = Law::new("mutual subequivalence preserves proper infiniteness");
    let mut finite_hereditary = Law::new("subequivalence preserves finiteness");
    let mut finite_antisym = Law::new("mutual subequivalence with a finite side is equivalence");
    let mut proper_sum = Law::new("orthogonal sums of properly infinite are properly infinite");
    let mut thm22 = Law::new("properly infinite iff doubling fits");
    let mut equiv_rel = Law::new("equivalence relation laws");
    let mut sub_preorder = Law::new("subequivalence preorder laws");
    let mut oplus_infinite = Law::new("direct sum with an infinite summand is infinite");
    let mut decreasing = Law::new("decreasing sequences of infinite projections");

    for p in &projs {
        // (1) infinite, (2) orthogonal decomposition p = q + r with p ~ q,
        // (6) p (+) q <~ p for a nonzero q
        let infinite = card_is_infinite(p).0;
        let item2 = nonzero_ranks.iter().any(|&rr| p.rank + rr == p.rank);
        let item6 = nonzero_ranks.iter().any(|&qr| {
            let padded = CardProj::new(p.rank + qr, p.corank);
            card_subequiv_infty(&padded, p)
        });
        characterization.check(infinite == item2 && item2 == item6);
        if let (true, Some(w)) = card_is_infinite(p) {
            // the witness is an equivalent sub-projection
            characterization
                .check(card_equiv_infty(&w, p) && w.rank <= p.rank && p.corank <= w.corank);
        }

        // Theorem: properly infinite iff p (+) p <~ p
        if !p.is_zero() {
            let proper = card_is_properly_infinite(p)?;
            thm22.check(proper == card_subequiv_infty(&card_oplus(p, p), p));
            // properly infinite implies infinite
            thm22.check(!proper || infinite);
        }

        // decreasing sequences below every infinite projection
        if infinite {
            let seq = card_decreasing_sequence(p, 6)?;
            let mut ok = seq.steps.len() == 6;
            for (i, r) in seq.steps.iter().enumerate() {
                ok &= card_is_infinite(r).0 && card_equiv_infty(r, p);
                if i + 1 < seq.steps.len() {
                    ok &= r.corank <= seq.steps[i + 1].corank;
                }
            }
            for gap in &seq.gaps {
                // nonzero gaps witness strictness
                ok &= gap.rank == ExtNat::Fin(1);
            }
            for pair in seq.gaps.windows(2) {
                ok &= card_equiv_infty(&pair[0], &pair[1]);
            }
            // with a finite corank the signatures themselves strictly decrease
            if p.corank.is_finite() {
                for pair in seq.steps.windows(2) {
                    ok &= pair[0].corank < pair[1].corank;
                }
            }
            decreasing.check(ok);
        }
    }

    for p in &projs {
        for q in &projs {
            if p.ambient() != q.ambient() {
                // cross-ambient: direct-sum infiniteness remark
                let sum = card_oplus(p, q);
                let either = card_is_infinite(p).0 || card_is_infinite(q).0;
                oplus_infinite.check(card_is_infinite(&sum).0 == either);
                continue;
            }
            let pq = card_subequiv(p, q)?;
            let qp = card_subequiv(q, p)?;
            let eq = card_equiv(p, q)?;

            // equivalence transports infiniteness
            if eq {
                lemma21.check(card_is_infinite(p).0 == card_is_infinite(q).0);
            }
            // p <~ q with q finite forces p finite
            if pq && !card_is_infinite(q).0 {
                finite_hereditary.check(!card_is_infinite(p).0);
            }
            // mutual subequivalence with one side finite forces equivalence
            if pq && qp && (!card_is_infinite(p).0 || !card_is_infinite(q).0) {
                finite_antisym.check(eq);
            }
            // mutual subequivalence transports proper infiniteness
            if pq && qp && !p.is_zero() && !q.is_zero() {
                let pp = card_is_properly_infinite(p)?;
                let qq = card_is_properly_infinite(q)?;
                prop23.check(!pp || qq);
            }
            // orthogonal sum of properly infinite summands, over every
            // corank the grid allows for the sum
            if !p.is_zero()
                && !q.is_zero()
                && card_is_properly_infinite(p)?
                && card_is_properly_infinite(q)?
                && p.rank + q.rank <= p.ambient()
            {
                for &c in grid {
                    let sum = CardProj::new(p.rank + q.rank, c);
                    if sum.ambient() == p.ambient() {
                        proper_sum.check(card_is_properly_infinite(&sum)?);
                    }
                }
            }
            // direct-sum infiniteness remark, same-ambient case
            let sum = card_oplus(p, q);
            let either = card_is_infinite(p).0 || card_is_infinite(q).0;
            oplus_infinite.check(card_is_infinite(&sum).0 == either);

            // relation laws: symmetry
            equiv_rel.check(eq == card_equiv(q, p)?);
        }
        // reflexivity
        equiv_rel.check(card_equiv(p, p)?);
        sub_preorder.check(card_subequiv(p, p)?);
    }

    // transitivity over ambient-matched triples
    for p in &projs {
        for q in &projs {
            for r in &projs {
                if p.ambient() != q.ambient() || q.ambient() != r.ambient() {
                    continue;
                }
                if card_equiv(p, q)? && card_equiv(q, r)? {
                    equiv_rel.check(card_equiv(p, r)?);
                }
                if card_subequiv(p, q)? && card_subequiv(q, r)? {
                    sub_preorder.check(card_subequiv(p, r)?);
                }
            }
        }
    }

    Ok(Section5Report {
        stats: vec![
            characterization.stat(),
            lemma21.stat(),
            prop23.stat(),
            finite_hereditary.stat(),
            finite_antisym.stat(),
            proper_sum.stat(),
            thm22.stat(),
            equiv_rel.stat(),
            sub_preorder.stat(),
            oplus_infinite.stat(),
            decreasing.stat(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ExtNat::{Fin, Omega};

    #[test]
    fn extnat_arithmetic_and_order() {
        assert_eq!(Fin(2) + Fin(3), Fin(5));
        assert_eq!(Fin(2) + Omega, Omega);
        assert_eq!(Omega + Omega, Omega);
        assert!(Fin(4) < Omega);
        assert!(Fin(3) <= Fin(3));
        assert!(Omega <= Omega);
    }

    #[test]
    fn equiv_and_subequiv() {
        let a = CardProj::new(Fin(2), Omega);
        let b = CardProj::new(Fin(2), Omega);
        assert!(card_equiv(&a, &b).unwrap());
        // the shift pair: both rank omega in the same ambient
        let s0 = CardProj::new(Omega, Fin(0));
        let s1 = CardProj::new(Omega, Fin(1));
        assert!(card_equiv(&s0, &s1).unwrap());
        let c = CardProj::new(Fin(1), Omega);
        assert!(!card_equiv(&c, &a).unwrap());
        assert!(card_subequiv(&c, &a).unwrap());
        assert!(card_subequiv(&c, &CardProj::new(Omega, Fin(3))).unwrap());
        assert!(!card_subequiv(&CardProj::new(Omega, Fin(3)), &c).unwrap());
        // ambient mismatch
        let small = CardProj::new(Fin(1), Fin(1));
        assert!(matches!(
            card_equiv(&small, &a),
            Err(Error::AmbientMismatch)
        ));
    }

    #[test]
    fn oplus_addition() {
        let a = CardProj::new(Fin(1), Fin(1));
        let b = CardProj::new(Fin(2), Fin(0));
        assert_eq!(card_oplus(&a, &b), CardProj::new(Fin(3), Fin(1)));
        let w = CardProj::new(Omega, Fin(2));
        assert_eq!(card_oplus(&a, &w), CardProj::new(Omega, Fin(3)));
    }

    #[test]
    fn infiniteness_and_witness() {
        let p = CardProj::new(Omega, Fin(0));
        let (inf, w) = card_is_infinite(&p);
        assert!(inf);
        let w = w.unwrap();
        assert_eq!(w, CardProj::new(Omega, Fin(1)));
        assert!(card_le(&w, &p).unwrap());
        assert!(card_equiv(&w, &p).unwrap());
        assert_ne!(w, p);

        assert!(!card_is_infinite(&CardProj::new(Fin(3), Omega)).0);
        assert!(!card_is_infinite(&CardProj::new(Fin(0), Fin(2))).0);
    }

    #[test]
    fn properly_infinite() {
        assert!(card_is_properly_infinite(&CardProj::new(Omega, Fin(0))).unwrap());
        assert!(!card_is_properly_infinite(&CardProj::new(Fin(3), Omega)).unwrap());
        assert!(matches!(
            card_is_properly_infinite(&CardProj::new(Fin(0), Omega)),
            Err(Error::ZeroProjection)
        ));
    }

    #[test]
    fn decreasing_sequence_coranks() {
        let p = CardProj::new(Omega, Fin(0));
        let seq = card_decreasing_sequence(&p, 4).unwrap();
        let coranks: Vec<ExtNat> = seq.steps.iter().map(|r| r.corank).collect();
        assert_eq!(coranks, vec![Fin(0), Fin(1), Fin(2), Fin(3)]);
        assert_eq!(seq.gaps.len(), 3);
        for g in &seq.gaps {
            assert_eq!(g.rank, Fin(1));
        }
        // k = 1 returns just p
        let seq = card_decreasing_sequence(&p, 1).unwrap();
        assert_eq!(seq.steps, vec![p]);
        assert!(seq.gaps.is_empty());
        // finite projections are rejected
        assert!(matches!(
            card_decreasing_sequence(&CardProj::new(Fin(2), Fin(1)), 3),
            Err(Error::NotInfinite)
        ));
    }

    #[test]
    fn exhaustive_grid_passes() {
        let rep = card_check_section5(&default_grid()).unwrap();
        assert!(rep.passed(), "{:?}", rep.stats);
        assert!(rep.cases() >= 300);
    }

    #[test]
    fn degenerate_grids_pass() {
        let rep = card_check_section5(&[Fin(0)]).unwrap();
        assert!(rep.passed());
        let rep = card_check_section5(&[Omega]).unwrap();
        assert!(rep.passed());
    }
}
