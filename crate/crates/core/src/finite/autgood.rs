//! Permutations `ψ(σ)` of `X` compatible with an automorphism `σ` of `B`, and
//! the module maps `ν_b` they induce.

use serde::{Deserialize, Serialize};

use super::action::FiniteAction;
use super::group::{perm_compose, perm_inverse, Perm};
use crate::error::{Error, Result};

/// A permutation `ψ` with `ψ(g * x) = σ(g) * ψ(x)`.
///
/// Orbit `i` goes to the least orbit `j` not yet used whose stabilizer is
/// conjugate to `σ(H_i)`, with `x_i ↦ g₀ * x_j` for the least `g₀` satisfying
/// `σ(H_i) = g₀ H_j g₀⁻¹`.
pub fn psi_construct(action: &FiniteAction, sigma: &[usize]) -> Result<Perm> {
    let g = action.group();
    let data = action.orbits_stabs();
    let mut used = vec![false; data.orbits.len()];
    let mut psi = vec![usize::MAX; action.num_points()];
    for (i, h_i) in data.stabilizers.iter().enumerate() {
        let mut image: Vec<usize> = h_i.iter().map(|&h| sigma[h]).collect();
        image.sort_unstable();
        let choice = (0..data.orbits.len())
            .filter(|&j| !used[j] && data.orbits[j].len() == data.orbits[i].len())
            .find_map(|j| {
                (0..g.order())
                    .find(|&g0| g.conjugate_subgroup(g0, &data.stabilizers[j]) == image)
                    .map(|g0| (j, g0))
            });
        let Some((j, g0)) = choice else {
            return Err(Error::hypothesis(
                "3",
                format!("no orbit has stabilizer conjugate to the image of the stabilizer of point {}", data.representatives[i]),
            ));
        };
        used[j] = true;
        let target = action.apply(g0, data.representatives[j]);
        for &y in &data.orbits[i] {
            let t = action.transporter(data.representatives[i], y).expect("same orbit");
            psi[y] = action.apply(sigma[t], target);
        }
    }
    Ok(psi)
}

/// Exhaustive check of `ψ(g * x) = σ(g) * ψ(x)` and bijectivity.
pub fn check_good(action: &FiniteAction, sigma: &[usize], psi: &[usize]) -> bool {
    super::group::is_permutation(psi)
        && (0..action.group().order()).all(|g| {
            (0..action.num_points()).all(|x| psi[action.apply(g, x)] == action.apply(sigma[g], psi[x]))
        })
}

/// The permutation `x ↦ b₀ * ψ(I_{b₀})⁻¹(x)` underlying `ν_{b₀}`.
pub fn nu(action: &FiniteAction, b0: usize) -> Result<Perm> {
    let psi = psi_construct(action, &action.group().inner_automorphism(b0))?;
    Ok(perm_compose(action.perm(b0), &perm_inverse(&psi)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuDeltaReport {
    /// Every `ν_b` commutes with the action of every element.
    pub equivariant: bool,
    /// `ν_{b₁b₂} = ν_{b₂} ∘ ν_{b₁}` for all pairs.
    pub antihomomorphism: bool,
    /// Number of distinct `ν_z` for central `z`.
    pub center_image: usize,
}

pub fn nu_delta(action: &FiniteAction) -> Result<NuDeltaReport> {
    let g = action.group();
    let nus: Vec<Perm> = (0..g.order()).map(|b| nu(action, b)).collect::<Result<_>>()?;
    let equivariant = nus.iter().all(|n| {
        (0..g.order()).all(|b| perm_compose(n, action.perm(b)) == perm_compose(action.perm(b), n))
    });
    let antihomomorphism = (0..g.order())
        .all(|a| (0..g.order()).all(|b| nus[g.mul(a, b)] == perm_compose(&nus[b], &nus[a])));
    let mut central: Vec<&Perm> = g.center().iter().map(|&z| &nus[z]).collect();
    central.sort();
    central.dedup();
    Ok(NuDeltaReport {
        equivariant,
        antihomomorphism,
        center_image: central.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::action::{bundled_action, bundled_actions};

    #[test]
    fn identity_gives_identity() {
        for (name, a) in bundled_actions() {
            let id: Vec<usize> = (0..a.group().order()).collect();
            let psi = psi_construct(&a, &id).unwrap();
            assert_eq!(psi, (0..a.num_points()).collect::<Vec<_>>(), "{name}");
        }
    }

    #[test]
    fn inner_by_transposition_swaps_points() {
        let a = bundled_action("S3-natural").unwrap();
        let s = (0..6).find(|&g| a.perm(g) == &vec![1, 0, 2]).unwrap();
        let psi = psi_construct(&a, &a.group().inner_automorphism(s)).unwrap();
        assert_eq!(psi, vec![1, 0, 2]);
    }

    #[test]
    fn good_on_all_automorphisms() {
        for name in ["S3-natural", "S3-regular", "C4-halves-plus-fixed", "C2-fixed-plus-regular"] {
            let a = bundled_action(name).unwrap();
            for sigma in a.group().aut_brute(200).unwrap() {
                let psi = psi_construct(&a, &sigma).unwrap();
                assert!(check_good(&a, &sigma, &psi), "{name}");
            }
        }
    }

    #[test]
    fn failure_names_condition() {
        let a = bundled_action("D4-square").unwrap();
        let bad = a
            .group()
            .aut_brute(200)
            .unwrap()
            .into_iter()
            .find(|s| psi_construct(&a, s).is_err())
            .unwrap();
        assert!(matches!(psi_construct(&a, &bad), Err(Error::HypothesisFailed { condition, .. }) if condition == "3"));
    }

    #[test]
    fn nu_for_central_elements() {
        let a = bundled_action("C3-regular").unwrap();
        for z in 0..3 {
            assert_eq!(&nu(&a, z).unwrap(), a.perm(z));
        }
        let r = nu_delta(&a).unwrap();
        assert!(r.equivariant && r.antihomomorphism);
        assert_eq!(r.center_image, 3);
    }

    #[test]
    fn nu_delta_on_s3() {
        for name in ["S3-natural", "S3-regular"] {
            let r = nu_delta(&bundled_action(name).unwrap()).unwrap();
            assert!(r.equivariant && r.antihomomorphism, "{name}");
            assert_eq!(r.center_image, 1);
        }
    }
}
