//! `m_n` of a split extension `N ⋊ G` with `N = Z^r`:
//!
//! `m_n(N ⋊ G) = m_n(G) + Σ_{N_0} |Der(G, N/N_0)|`
//!
//! where `N_0` runs over the maximal submodules of `N` of index `n`. The
//! identity is taken as given here; the coset-table oracle checks it.

use crate::cocycle::{count_derivations, DerivationSpace};
use crate::error::{Error, Result};
use crate::model::{b_matrix, make_gk, swap_matrix, GroupPresentation};
use crate::modrep::{maximal_submodules, quotient_action, ModuleAction, Submodule};

#[derive(Debug, Clone)]
pub struct SplitExtension {
    quotient: GroupPresentation,
    module: ModuleAction,
}

impl SplitExtension {
    pub fn new(quotient: GroupPresentation, module: ModuleAction) -> Result<Self> {
        if module.prime().is_some() {
            return Err(Error::InvalidParameter("split extension needs an integral module".into()));
        }
        if !module.satisfies(&quotient) {
            return Err(Error::InvalidParameter("action does not satisfy the quotient's relators".into()));
        }
        Ok(SplitExtension { quotient, module })
    }

    pub fn quotient(&self) -> &GroupPresentation {
        &self.quotient
    }

    pub fn module(&self) -> &ModuleAction {
        &self.module
    }

    /// `G_k = <x_k> ⋊ G_{k-1}`. From `x_i x_k x_i^-1 x_k = 1`, every `x_i`
    /// conjugates `x_k` to its inverse, so the action on `Z` is by `-1`.
    pub fn gk_step(k: i64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("G_k splits only for k >= 2, got {k}")));
        }
        Self::new(make_gk(k - 1)?, ModuleAction::sign((k - 1) as usize))
    }

    /// `H_k = Z^2 ⋊ G_2` with `a -> A`, `b -> B_k`.
    pub fn hk(k: i64) -> Result<Self> {
        Self::new(make_gk(2)?, ModuleAction::integral(vec![swap_matrix(), b_matrix(k)])?)
    }
}

/// The individual summands: each maximal submodule of index `n` with the
/// derivations into its quotient.
pub fn split_terms(ext: &SplitExtension, n: i64) -> Result<Vec<(Submodule, DerivationSpace)>> {
    let mut out = Vec::new();
    for sub in maximal_submodules(&ext.module, n)? {
        let quotient = quotient_action(sub.ambient(), &sub)?;
        let der = count_derivations(&ext.quotient, &quotient)?;
        out.push((sub, der));
    }
    Ok(out)
}

/// `Σ |Der(G, N/N_0)|` alone.
pub fn derivation_sum(ext: &SplitExtension, n: i64) -> Result<u64> {
    split_terms(ext, n)?.iter().try_fold(0u64, |acc, (_, d)| {
        u64::try_from(d.count)
            .ok()
            .and_then(|c| acc.checked_add(c))
            .ok_or(Error::Overflow("derivation sum"))
    })
}

pub fn max_count_split<F>(ext: &SplitExtension, m_n_of_quotient: F, n: i64) -> Result<u64>
where
    F: Fn(i64) -> Result<u64>,
{
    if n < 2 {
        return Err(Error::InvalidParameter(format!("index must be at least 2, got {n}")));
    }
    let base = m_n_of_quotient(n)?;
    base.checked_add(derivation_sum(ext, n)?).ok_or(Error::Overflow("m_n of split extension"))
}

fn m_n_of_z(n: i64) -> Result<u64> {
    // Z has one subgroup of each index, maximal iff the index is prime
    Ok(u64::from(crate::arith::is_prime(n as u64)))
}

/// `m_n(G_k)` by climbing `G_1 ⊂ G_2 ⊂ … ⊂ G_k`.
pub fn recursive_gk(k: i64, n: i64) -> Result<u64> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("G_k needs k >= 1, got {k}")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!("index must be at least 2, got {n}")));
    }
    let mut m = m_n_of_z(n)?;
    for i in 2..=k {
        let ext = SplitExtension::gk_step(i)?;
        m = max_count_split(&ext, |_| Ok(m), n)?;
    }
    Ok(m)
}

/// `m_n(H_k)` with the quotient `G_2` itself evaluated by [`recursive_gk`].
pub fn recursive_hk(k: i64, n: i64) -> Result<u64> {
    max_count_split(&SplitExtension::hk(k)?, |n| recursive_gk(2, n), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::divides;

    #[test]
    fn split_examples() {
        let g2 = SplitExtension::gk_step(2).unwrap();
        assert_eq!(max_count_split(&g2, |_| Ok(1), 3).unwrap(), 4);
        let h1 = SplitExtension::hk(1).unwrap();
        assert_eq!(max_count_split(&h1, |n| recursive_gk(2, n), 3).unwrap(), 7);
        assert_eq!(max_count_split(&h1, |_| Ok(11), 12).unwrap(), 11);
        assert!(max_count_split(&h1, |_| Ok(0), 1).is_err());
    }

    #[test]
    fn gk_examples() {
        assert_eq!(recursive_gk(3, 2).unwrap(), 7);
        assert_eq!(recursive_gk(2, 9).unwrap(), 0);
        assert_eq!(recursive_gk(5, 11).unwrap(), 45);
        assert_eq!(recursive_gk(1, 4).unwrap(), 0);
        assert!(recursive_gk(0, 3).is_err());
    }

    #[test]
    fn hk_examples() {
        assert_eq!(recursive_hk(2, 5).unwrap(), 31);
        assert_eq!(recursive_hk(3, 25).unwrap(), 0);
        assert_eq!(recursive_hk(3, 49).unwrap(), 49);
        assert_eq!(recursive_hk(7, 3).unwrap(), 7);
    }

    #[test]
    fn summand_table() {
        for p in crate::arith::primes_up_to(31) {
            for k in -10..=10i64 {
                let ext = SplitExtension::hk(k).unwrap();
                let minus = divides(p, k - 2);
                let plus = divides(p, k + 2);
                let at_p = derivation_sum(&ext, p as i64).unwrap();
                let at_p2 = derivation_sum(&ext, (p * p) as i64).unwrap();
                let expected_p = if minus {
                    p * p
                } else if plus && p > 2 {
                    p
                } else {
                    0
                };
                let expected_p2 = if !minus && !plus { p * p } else { 0 };
                assert_eq!((at_p, at_p2), (expected_p, expected_p2), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn summands_are_powers_of_p() {
        for k in -4..=4 {
            let ext = SplitExtension::hk(k).unwrap();
            for n in 2..=60 {
                let terms = split_terms(&ext, n).unwrap();
                for (sub, der) in &terms {
                    assert_eq!(der.p, sub.prime());
                    assert_eq!(der.count, (der.p as u128).pow(der.dimension as u32));
                }
                let total: u128 = terms.iter().map(|(_, d)| d.count).sum();
                assert_eq!(total as u64, derivation_sum(&ext, n).unwrap());
            }
        }
    }

    #[test]
    fn rejects_incompatible_action() {
        let shear = crate::matrix::Matrix::from_rows(&[[1, 1], [0, 1]]);
        let bad = ModuleAction::integral(vec![crate::matrix::Matrix::identity(2), shear]).unwrap();
        assert!(SplitExtension::new(make_gk(2).unwrap(), bad).is_err());
    }
}
