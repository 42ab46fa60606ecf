//! A single report on Hopficity of `A ≀_X B` for finite `B`: the conditions,
//! the ranks `n_p`, the intertwiner dimensions, the matrix-ring probes, and
//! the verdict with the facts that license it.

use serde::{Deserialize, Serialize};

use super::action::{FiniteAction, OrbitData};
use super::automorphisms::{decomposition_hypotheses, HypothesisCheck};
use super::hypotheses::{lundstrom_check, LundstromResult};
use super::intertwiner::{direct_finiteness_probe, intertwiner_basis, ProbeMode, ProbeReport};
use crate::abelian::AbelianSpec;
use crate::error::Result;
use crate::linalg::{PrimeField, Rationals};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    /// A prime, or `0` for the free part.
    pub prime: u64,
    /// `n_p = dim_{𝔽_p} A_p / p A_p`, or `n_0 = rank A`.
    pub multiplicity: usize,
    pub end_dim: usize,
    pub probe: ProbeReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub hopfian: bool,
    pub licensed_by: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremBReport {
    pub orbits: OrbitData,
    pub hypotheses: Vec<HypothesisCheck>,
    pub lundstrom: LundstromResult,
    pub ranks: Vec<RankEntry>,
    pub probes_consistent: bool,
    pub verdict: Verdict,
}

const EXHAUSTIVE_LIMIT: u128 = 1 << 12;

pub fn theorem_b_report(action: &FiniteAction, coeff: &AbelianSpec, seed: u64) -> Result<TheoremBReport> {
    let auts = action.group().aut_brute(usize::MAX)?;
    let hypotheses = decomposition_hypotheses(action, coeff, &auts);
    let mut ranks = Vec::new();
    for p in coeff.torsion_primes() {
        let s = coeff.n_p(p);
        let f = PrimeField::new(p)?;
        let basis = intertwiner_basis(&f, action);
        let elems: Vec<u64> = (0..p).collect();
        let space = (p as u128).checked_pow((basis.len() * s * s) as u32).unwrap_or(u128::MAX);
        let mode = if space <= EXHAUSTIVE_LIMIT {
            ProbeMode::Exhaustive
        } else {
            ProbeMode::Sampled { trials: 100, seed }
        };
        let probe = direct_finiteness_probe(&f, &format!("F{p}"), &basis, s, mode, Some(&elems))?;
        ranks.push(RankEntry {
            prime: p,
            multiplicity: s,
            end_dim: basis.len(),
            probe,
        });
    }
    if coeff.rank() > 0 {
        let basis = intertwiner_basis(&Rationals, action);
        let probe = direct_finiteness_probe(
            &Rationals,
            "Q",
            &basis,
            coeff.rank(),
            ProbeMode::Sampled { trials: 30, seed },
            None,
        )?;
        ranks.push(RankEntry {
            prime: 0,
            multiplicity: coeff.rank(),
            end_dim: basis.len(),
            probe,
        });
    }
    let probes_consistent = ranks.iter().all(|r| r.probe.consistent());
    let failed: Vec<&HypothesisCheck> = hypotheses.iter().filter(|h| !h.holds).collect();
    let licensed_by = if failed.is_empty() {
        let mut reasons: Vec<String> = hypotheses.iter().map(|h| format!("condition {}: {}", h.condition, h.description)).collect();
        reasons.push("each M_{n_p}(End_{F_p B}(F_p X)) is a finite-dimensional algebra, hence directly finite".into());
        if coeff.rank() > 0 {
            reasons.push("M_{n_0}(End_{ZB}(ZX)) embeds in a finite-dimensional Q-algebra, hence is directly finite".into());
        }
        reasons.push(format!("matrix-ring probes found no one-sided inverses: {probes_consistent}"));
        reasons
    } else if coeff.is_finite() {
        let names: Vec<&str> = failed.iter().map(|h| h.condition.as_str()).collect();
        vec![
            format!("conditions {} fail, so the equivalence is not available", names.join(", ")),
            "G is finite, and finite groups are Hopfian".into(),
        ]
    } else {
        let names: Vec<&str> = failed.iter().map(|h| h.condition.as_str()).collect();
        vec![
            format!("conditions {} fail, so the equivalence is not available", names.join(", ")),
            "G is finitely generated and virtually abelian, hence residually finite and Hopfian".into(),
        ]
    };
    Ok(TheoremBReport {
        orbits: action.orbits_stabs(),
        hypotheses,
        lundstrom: lundstrom_check(action),
        ranks,
        probes_consistent,
        verdict: Verdict {
            hopfian: true,
            licensed_by,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::action::bundled_action;

    #[test]
    fn s3_natural_mod_3() {
        let r = theorem_b_report(&bundled_action("S3-natural").unwrap(), &AbelianSpec::cyclic(3), 0).unwrap();
        assert!(r.hypotheses.iter().all(|h| h.holds));
        assert!(r.probes_consistent);
        assert!(r.verdict.hopfian);
        assert_eq!(r.ranks.len(), 1);
        assert_eq!((r.ranks[0].prime, r.ranks[0].multiplicity, r.ranks[0].end_dim), (3, 1, 2));
        assert!(r.ranks[0].probe.exhaustive);
    }

    #[test]
    fn exponent_two_with_kernel_involution() {
        let a = FiniteAction::trivial(crate::finite::group::FiniteGroup::cyclic(2), 1);
        let r = theorem_b_report(&a, &AbelianSpec::cyclic(2), 0).unwrap();
        let failing: Vec<&str> = r.hypotheses.iter().filter(|h| !h.holds).map(|h| h.condition.as_str()).collect();
        assert!(failing.contains(&"2"));
        assert!(r.verdict.hopfian);
        assert!(r.verdict.licensed_by.iter().any(|s| s.contains("finite")));
    }

    #[test]
    fn trivial_coefficients() {
        let r = theorem_b_report(&bundled_action("S3-natural").unwrap(), &AbelianSpec::trivial(), 0).unwrap();
        assert!(r.ranks.is_empty());
        assert!(r.verdict.hopfian);
    }

    #[test]
    fn mixed_coefficients() {
        let r = theorem_b_report(&bundled_action("C3-regular").unwrap(), &AbelianSpec::new(vec![0, 2, 4, 3]), 1).unwrap();
        let ps: Vec<(u64, usize)> = r.ranks.iter().map(|e| (e.prime, e.multiplicity)).collect();
        assert_eq!(ps, vec![(2, 2), (3, 1), (0, 1)]);
        assert!(r.probes_consistent);
    }
}
