//! Derivations (1-cocycles) from a presented group into a finite module.
//!
//! A derivation satisfies `δ(gh) = δ(g) + g·δ(h)`, so it is determined by its
//! values on the generators, and those values extend to the group exactly
//! when `δ(r) = 0` for every relator `r`. Each relator contributes a block of
//! linear equations over F_p; the derivations are the null space.

use crate::error::{Error, Result};
use crate::matrix::{reduce, Matrix};
use crate::model::{GroupPresentation, Letter};
use crate::modrep::ModuleAction;

/// Unknowns are grouped per generator: `δ(g_i)` occupies coordinates
/// `i*d .. (i+1)*d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnknownLayout {
    pub generators: usize,
    pub dimension: usize,
}

impl UnknownLayout {
    pub fn unknowns(&self) -> usize {
        self.generators * self.dimension
    }

    pub fn slot(&self, generator: usize) -> std::ops::Range<usize> {
        generator * self.dimension..(generator + 1) * self.dimension
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleSystem {
    pub p: u64,
    pub layout: UnknownLayout,
    /// One block of `d` rows per relator, in relator order.
    pub rows: Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivationSpace {
    pub p: u64,
    pub dimension: usize,
    pub count: u128,
}

fn prime_of(action: &ModuleAction) -> Result<u64> {
    action
        .prime()
        .ok_or_else(|| Error::InvalidParameter("derivations need an action reduced mod p".into()))
}

/// The `d × (m·d)` coefficient block `L` with `L·(δ(g_1), …, δ(g_m)) = δ(word)`.
///
/// Scans left to right keeping the matrix of the prefix read so far: a letter
/// `g` contributes `prefix` on the slot of `g`, a letter `g^-1` contributes
/// `-prefix·M_g^-1` because `δ(g^-1) = -g^-1·δ(g)`.
pub fn word_derivation_row(word: &[Letter], action: &ModuleAction, layout: UnknownLayout) -> Result<Matrix> {
    let p = prime_of(action)?;
    let d = action.rank();
    if layout.dimension != d || layout.generators != action.matrices().len() {
        return Err(Error::DimensionMismatch("layout does not match the action".into()));
    }
    let inverses: Vec<Matrix> = action
        .matrices()
        .iter()
        .map(|m| m.inverse_mod(p).expect("action matrices are invertible"))
        .collect();
    let mut row = Matrix::zeros(d, layout.unknowns());
    let mut prefix = Matrix::identity(d);
    for l in word {
        if l.generator >= layout.generators {
            return Err(Error::UnknownGenerator { index: l.generator, generators: layout.generators });
        }
        let (coeff, step) = if l.inverse {
            let inv = &inverses[l.generator];
            (prefix.mul(inv).neg(), inv)
        } else {
            (prefix.clone(), &action.matrices()[l.generator])
        };
        let base = layout.slot(l.generator).start;
        for i in 0..d {
            for j in 0..d {
                row[(i, base + j)] = reduce(row[(i, base + j)] + coeff[(i, j)], p);
            }
        }
        prefix = prefix.mul_mod(step, p);
    }
    Ok(row)
}

pub fn build_system(presentation: &GroupPresentation, action: &ModuleAction) -> Result<CocycleSystem> {
    let p = prime_of(action)?;
    if presentation.num_generators() != action.matrices().len() {
        return Err(Error::DimensionMismatch(format!(
            "{} generators but {} action matrices",
            presentation.num_generators(),
            action.matrices().len()
        )));
    }
    let layout = UnknownLayout { generators: presentation.num_generators(), dimension: action.rank() };
    let d = action.rank();
    let mut rows = Matrix::zeros(presentation.relators().len() * d, layout.unknowns());
    for (r, rel) in presentation.relators().iter().enumerate() {
        let block = word_derivation_row(rel, action, layout)?;
        for i in 0..d {
            for j in 0..layout.unknowns() {
                rows[(r * d + i, j)] = block[(i, j)];
            }
        }
    }
    Ok(CocycleSystem { p, layout, rows })
}

pub fn count_derivations(presentation: &GroupPresentation, action: &ModuleAction) -> Result<DerivationSpace> {
    let system = build_system(presentation, action)?;
    let dimension = system.layout.unknowns() - system.rows.rank_mod(system.p);
    let count = (system.p as u128)
        .checked_pow(dimension as u32)
        .ok_or(Error::Overflow("derivation count"))?;
    Ok(DerivationSpace { p: system.p, dimension, count })
}

/// `δ(word)` for generator values `values`, computed directly from the cocycle rule.
pub fn evaluate_derivation(word: &[Letter], action: &ModuleAction, values: &[Vec<i64>]) -> Result<Vec<i64>> {
    let eval = Evaluator::new(action)?;
    if values.len() != eval.generators || values.iter().any(|v| v.len() != eval.d) {
        return Err(Error::DimensionMismatch("one value of module rank per generator".into()));
    }
    let flat: Vec<i64> = values.concat();
    let mut scratch = eval.scratch();
    eval.run(word, &flat, &mut scratch)?;
    Ok(scratch.total)
}

/// Cached generator matrices and inverses for repeated word evaluation.
struct Evaluator {
    p: i64,
    d: usize,
    generators: usize,
    forward: Vec<Vec<i64>>,
    inverse: Vec<Vec<i64>>,
}

struct Scratch {
    prefix: Vec<i64>,
    next: Vec<i64>,
    value: Vec<i64>,
    total: Vec<i64>,
}

impl Evaluator {
    fn new(action: &ModuleAction) -> Result<Self> {
        let p = prime_of(action)?;
        let mut forward = Vec::new();
        let mut inverse = Vec::new();
        for g in action.matrices() {
            forward.push(g.reduce_mod(p).row_vectors().concat());
            let inv = g.inverse_mod(p).ok_or_else(|| Error::InvalidParameter("action matrix is not invertible mod p".into()))?;
            inverse.push(inv.row_vectors().concat());
        }
        Ok(Evaluator { p: p as i64, d: action.rank(), generators: forward.len(), forward, inverse })
    }

    fn scratch(&self) -> Scratch {
        let d = self.d;
        Scratch { prefix: vec![0; d * d], next: vec![0; d * d], value: vec![0; d], total: vec![0; d] }
    }

    /// Leaves `δ(word)` in `s.total`; `values` holds `δ(g_i)` at `i*d .. (i+1)*d`.
    fn run(&self, word: &[Letter], values: &[i64], s: &mut Scratch) -> Result<()> {
        let (d, p) = (self.d, self.p);
        s.total.iter_mut().for_each(|x| *x = 0);
        s.prefix.iter_mut().enumerate().for_each(|(i, x)| *x = i64::from(i % (d + 1) == 0));
        for l in word {
            if l.generator >= self.generators {
                return Err(Error::UnknownGenerator { index: l.generator, generators: self.generators });
            }
            let v = &values[l.generator * d..(l.generator + 1) * d];
            // δ(g^-1) = -g^-1·δ(g)
            let step = if l.inverse {
                let inv = &self.inverse[l.generator];
                for i in 0..d {
                    let x: i64 = (0..d).map(|j| inv[i * d + j] * v[j]).sum();
                    s.value[i] = (-x).rem_euclid(p);
                }
                inv
            } else {
                s.value.copy_from_slice(v);
                &self.forward[l.generator]
            };
            for i in 0..d {
                let x: i64 = (0..d).map(|j| s.prefix[i * d + j] * s.value[j]).sum();
                s.total[i] = (s.total[i] + x).rem_euclid(p);
            }
            for i in 0..d {
                for j in 0..d {
                    let x: i64 = (0..d).map(|t| s.prefix[i * d + t] * step[t * d + j]).sum();
                    s.next[i * d + j] = x.rem_euclid(p);
                }
            }
            std::mem::swap(&mut s.prefix, &mut s.next);
        }
        Ok(())
    }
}

pub const BRUTE_FORCE_BOUND: u128 = 1_000_000;

/// Counts derivations by trying every assignment of module elements to the
/// generators.
pub fn brute_force_count(presentation: &GroupPresentation, action: &ModuleAction, bound: u128) -> Result<u128> {
    let p = prime_of(action)?;
    let d = action.rank();
    let m = presentation.num_generators();
    if m != action.matrices().len() {
        return Err(Error::DimensionMismatch("generator count differs from action".into()));
    }
    let module_size = (p as u128).pow(d as u32);
    let total = module_size
        .checked_pow(m as u32)
        .filter(|&t| t <= bound)
        .ok_or(Error::BoundExceeded { needed: module_size.saturating_pow(m as u32), bound })?;
    let eval = Evaluator::new(action)?;
    let mut scratch = eval.scratch();
    let mut values = vec![0i64; m * d];
    let mut count = 0u128;
    for code in 0..total {
        let mut c = code;
        for x in values.iter_mut() {
            *x = (c % p as u128) as i64;
            c /= p as u128;
        }
        let mut ok = true;
        for rel in presentation.relators() {
            eval.run(rel, &values, &mut scratch)?;
            if scratch.total.iter().any(|&x| x != 0) {
                ok = false;
                break;
            }
        }
        count += u128::from(ok);
    }
    Ok(count)
}
