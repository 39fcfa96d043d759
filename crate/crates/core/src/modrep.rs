//! Lattices `Z^r` with a group acting through explicit matrices, and their
//! maximal submodules.
//!
//! A maximal submodule of index `p^c` contains `pZ^r`, so it is determined by
//! an invariant subspace of `F_p^r` of codimension `c` whose quotient is a
//! simple module. Everything here works by enumerating subspaces in reduced
//! row echelon form; ranks and primes are small enough that this is cheap.

use std::collections::BTreeMap;

use crate::arith::{classify_index, is_prime};
use crate::error::{Error, Result};
use crate::lattice::hermite_normal_form;
use crate::matrix::{reduce, Matrix};
use crate::model::{GroupPresentation, Letter};

pub const ENUMERATION_BOUND: u128 = 1_000_000;
pub const MAX_RANK: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleAction {
    rank: usize,
    prime: Option<u64>,
    matrices: Vec<Matrix>,
}

impl ModuleAction {
    /// Integral action; every matrix must be unimodular.
    pub fn integral(matrices: Vec<Matrix>) -> Result<Self> {
        let rank = Self::common_rank(&matrices)?;
        for m in &matrices {
            if m.inverse_unimodular().is_none() {
                return Err(Error::NotUnimodular(m.det()));
            }
        }
        Ok(ModuleAction { rank, prime: None, matrices })
    }

    /// Action on `F_p^r`; every matrix must be invertible mod p.
    pub fn mod_p(matrices: Vec<Matrix>, p: u64) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::InvalidParameter(format!("{p} is not a supported prime")));
        }
        let rank = Self::common_rank(&matrices)?;
        let matrices: Vec<Matrix> = matrices.iter().map(|m| m.reduce_mod(p)).collect();
        if let Some(m) = matrices.iter().find(|m| m.det_mod(p) == 0) {
            return Err(Error::InvalidParameter(format!("matrix {m} is singular mod {p}")));
        }
        Ok(ModuleAction { rank, prime: Some(p), matrices })
    }

    /// Rank-1 action where each of `generators` generators acts by `-1`.
    pub fn sign(generators: usize) -> Self {
        ModuleAction { rank: 1, prime: None, matrices: vec![Matrix::scalar(-1); generators] }
    }

    fn common_rank(matrices: &[Matrix]) -> Result<usize> {
        let rank = match matrices.first() {
            Some(m) => m.rows(),
            None => return Err(Error::DimensionMismatch("action needs at least one matrix".into())),
        };
        if rank == 0 || matrices.iter().any(|m| !m.is_square() || m.rows() != rank) {
            return Err(Error::DimensionMismatch("action matrices must be square of equal size".into()));
        }
        Ok(rank)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn prime(&self) -> Option<u64> {
        self.prime
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    fn require_prime(&self) -> Result<u64> {
        self.prime
            .ok_or_else(|| Error::InvalidParameter("operation needs an action reduced mod p".into()))
    }

    pub fn reduce_mod_p(&self, p: u64) -> Result<ModuleAction> {
        if self.prime.is_some() {
            return Err(Error::InvalidParameter("action is already reduced".into()));
        }
        Self::mod_p(self.matrices.clone(), p)
    }

    fn inverse(&self, m: &Matrix) -> Matrix {
        match self.prime {
            Some(p) => m.inverse_mod(p).expect("action matrices are invertible"),
            None => m.inverse_unimodular().expect("action matrices are unimodular"),
        }
    }

    /// Matrix of a word, multiplying letters left to right.
    pub fn word_matrix(&self, word: &[Letter]) -> Matrix {
        let mut acc = Matrix::identity(self.rank);
        for l in word {
            let g = &self.matrices[l.generator];
            let m = if l.inverse { self.inverse(g) } else { g.clone() };
            acc = acc.mul(&m);
            if let Some(p) = self.prime {
                acc = acc.reduce_mod(p);
            }
        }
        acc
    }

    /// Whether substituting the matrices into every relator gives the identity.
    pub fn satisfies(&self, presentation: &GroupPresentation) -> bool {
        presentation.num_generators() == self.matrices.len()
            && presentation
                .relators()
                .iter()
                .all(|r| self.word_matrix(r) == Matrix::identity(self.rank))
    }
}

/// Invariant subspace of `F_p^r` with its preimage lattice in `Z^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submodule {
    ambient: ModuleAction,
    basis: Matrix,
    pivots: Vec<usize>,
    lattice_basis: Matrix,
    index: u64,
}

impl Submodule {
    fn new(ambient: &ModuleAction, basis: Matrix, pivots: Vec<usize>) -> Self {
        let p = ambient.prime.expect("submodules live over F_p");
        let r = ambient.rank;
        let mut gens: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                let mut e = vec![0; r];
                e[i] = p as i64;
                e
            })
            .collect();
        gens.extend(basis.row_vectors());
        let lattice_basis = hermite_normal_form(&gens, r).expect("contains pZ^r so full rank");
        let index = p.pow((r - pivots.len()) as u32);
        Submodule { ambient: ambient.clone(), basis, pivots, lattice_basis, index }
    }

    pub fn ambient(&self) -> &ModuleAction {
        &self.ambient
    }

    pub fn prime(&self) -> u64 {
        self.ambient.prime.expect("submodules live over F_p")
    }

    /// RREF basis of the subspace, one vector per row.
    pub fn subspace_basis(&self) -> Vec<Vec<i64>> {
        self.basis.row_vectors()
    }

    pub fn dimension(&self) -> usize {
        self.pivots.len()
    }

    pub fn codimension(&self) -> usize {
        self.ambient.rank - self.pivots.len()
    }

    pub fn lattice_basis(&self) -> &Matrix {
        &self.lattice_basis
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    // v minus its projection along the pivot rows; zero iff v is in the subspace
    fn residual(&self, v: &[i64]) -> Vec<i64> {
        let p = self.prime();
        let mut v: Vec<i64> = v.iter().map(|&x| reduce(x, p)).collect();
        for (i, &c) in self.pivots.iter().enumerate() {
            let f = v[c];
            if f != 0 {
                for (x, &b) in v.iter_mut().zip(self.basis.row(i)) {
                    *x = reduce(*x - f * b, p);
                }
            }
        }
        v
    }

    pub fn contains_vector(&self, v: &[i64]) -> bool {
        self.residual(v).iter().all(|&x| x == 0)
    }

    pub fn is_contained_in(&self, other: &Submodule) -> bool {
        self.subspace_basis().iter().all(|w| other.contains_vector(w))
    }

    fn is_invariant_under(&self, matrices: &[Matrix]) -> bool {
        let p = self.prime();
        self.subspace_basis().iter().all(|w| {
            matrices.iter().all(|m| self.contains_vector(&m.apply(w).iter().map(|&x| reduce(x, p)).collect::<Vec<_>>()))
        })
    }

    fn complement(&self) -> Vec<usize> {
        (0..self.ambient.rank).filter(|c| !self.pivots.contains(c)).collect()
    }
}

fn rref_subspaces(r: usize, dim: usize, p: u64) -> Vec<(Matrix, Vec<usize>)> {
    let mut out = Vec::new();
    if dim == 0 {
        out.push((Matrix::zeros(0, r), Vec::new()));
        return out;
    }
    for pivots in combinations(r, dim) {
        // free slots: (row, col) with col to the right of the row's pivot and not a pivot column
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| (c + 1..r).filter(|j| !pivots.contains(j)).map(move |j| (i, j)))
            .collect();
        let total = (p as usize).pow(free.len() as u32);
        for mut code in 0..total {
            let mut m = Matrix::zeros(dim, r);
            for (i, &c) in pivots.iter().enumerate() {
                m[(i, c)] = 1;
            }
            for &(i, j) in &free {
                m[(i, j)] = (code % p as usize) as i64;
                code /= p as usize;
            }
            out.push((m, pivots.clone()));
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every subspace of codimension `codim` invariant under all matrices, in
/// lexicographic order of the RREF basis.
pub fn invariant_subspaces(action: &ModuleAction, codim: usize) -> Result<Vec<Submodule>> {
    let p = action.require_prime()?;
    let r = action.rank;
    if codim == 0 || codim > r {
        return Err(Error::InvalidParameter(format!("codimension must lie in 1..={r}, got {codim}")));
    }
    if r > MAX_RANK {
        return Err(Error::InvalidParameter(format!("rank {r} exceeds {MAX_RANK}")));
    }
    let size = (p as u128).pow(r as u32);
    if size > ENUMERATION_BOUND {
        return Err(Error::BoundExceeded { needed: size, bound: ENUMERATION_BOUND });
    }
    let mut found: Vec<Submodule> = rref_subspaces(r, r - codim, p)
        .into_iter()
        .map(|(basis, pivots)| Submodule::new(action, basis, pivots))
        .filter(|s| s.is_invariant_under(&action.matrices))
        .collect();
    found.sort_by_key(|s| s.subspace_basis());
    Ok(found)
}

/// Maximal submodules of index `n` of the integral module `Z^r`.
pub fn maximal_submodules(action: &ModuleAction, n: i64) -> Result<Vec<Submodule>> {
    if action.prime.is_some() {
        return Err(Error::InvalidParameter("maximal_submodules expects an integral action".into()));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!("index must be at least 2, got {n}")));
    }
    let Some((p, c)) = classify_index(n)?.prime_power() else {
        return Ok(Vec::new());
    };
    let c = c as usize;
    if c > action.rank {
        return Ok(Vec::new());
    }
    let reduced = action.reduce_mod_p(p)?;
    let candidates = invariant_subspaces(&reduced, c)?;
    if c == 1 {
        return Ok(candidates);
    }
    // maximal iff the quotient is simple: no invariant subspace strictly in between
    let mut larger = Vec::new();
    for codim in 1..c {
        larger.extend(invariant_subspaces(&reduced, codim)?);
    }
    Ok(candidates
        .into_iter()
        .filter(|w| !larger.iter().any(|u| w.is_contained_in(u)))
        .collect())
}

pub fn count_maximal_submodules(action: &ModuleAction, n: i64) -> Result<usize> {
    maximal_submodules(action, n).map(|v| v.len())
}

/// Induced action on `F_p^r / W`, in the basis of standard vectors at the
/// non-pivot coordinates of `W`.
pub fn quotient_action(action: &ModuleAction, sub: &Submodule) -> Result<ModuleAction> {
    let p = action.require_prime()?;
    if sub.prime() != p || sub.ambient.rank != action.rank {
        return Err(Error::DimensionMismatch("submodule lives in a different module".into()));
    }
    if !sub.is_invariant_under(&action.matrices) {
        return Err(Error::NotInvariant);
    }
    let comp = sub.complement();
    let matrices = action
        .matrices
        .iter()
        .map(|m| {
            let mut q = Matrix::zeros(comp.len(), comp.len());
            for (jj, &j) in comp.iter().enumerate() {
                let image = sub.residual(&m.column(j));
                for (ii, &i) in comp.iter().enumerate() {
                    q[(ii, jj)] = image[i];
                }
            }
            q
        })
        .collect();
    ModuleAction::mod_p(matrices, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubmoduleKind {
    /// pZ^2 + <(1,1)>
    Mp,
    /// pZ^2 + <(1,-1)>
    MpMinus1,
    /// pZ^2 itself
    PZ2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmoduleClassification {
    pub p: u64,
    pub present: Vec<SubmoduleKind>,
    /// M_p and M_{p,-1} are the same lattice.
    pub coincidence: bool,
    /// Invariant lines that are neither (1,1) nor (1,-1); always empty for H_k.
    pub other_lines: Vec<Vec<i64>>,
}

/// Maximal submodules of `Z^2` under `a -> A`, `b -> B_k` at the prime `p`,
/// found by enumeration and labelled.
pub fn classify_hk_submodules(k: i64, p: u64) -> Result<SubmoduleClassification> {
    let action = ModuleAction::integral(vec![crate::model::swap_matrix(), crate::model::b_matrix(k)])?;
    let reduced = action.reduce_mod_p(p)?;
    let lines = invariant_subspaces(&reduced, 1)?;
    let v = [1, 1];
    let u = [1, p as i64 - 1];
    let mut present = Vec::new();
    let mut other_lines = Vec::new();
    let mut coincidence = false;
    for line in &lines {
        let (has_v, has_u) = (line.contains_vector(&v), line.contains_vector(&u));
        if has_v {
            present.push(SubmoduleKind::Mp);
        }
        if has_u {
            present.push(SubmoduleKind::MpMinus1);
        }
        coincidence |= has_v && has_u;
        if !has_v && !has_u {
            other_lines.push(line.subspace_basis()[0].clone());
        }
    }
    if lines.is_empty() {
        present.push(SubmoduleKind::PZ2);
    }
    present.sort();
    Ok(SubmoduleClassification { p, present, coincidence, other_lines })
}

/// Independent check of the mod-p reduction: every subgroup of `(Z/p^2)^r`,
/// filtered to proper invariant ones that are maximal among those. Returns
/// counts keyed by index. Only rank 2 is supported.
pub fn brute_force_maximal_counts(matrices: &[Matrix], p: u64) -> Result<BTreeMap<u64, usize>> {
    if matrices.iter().any(|m| m.rows() != 2 || !m.is_square()) {
        return Err(Error::DimensionMismatch("brute force oracle handles rank 2 only".into()));
    }
    let q = (p * p) as usize;
    if q * q > 1 << 14 {
        return Err(Error::BoundExceeded { needed: (q * q) as u128, bound: 1 << 14 });
    }
    let total = q * q;
    let words = total.div_ceil(64);
    let encode = |x: usize, y: usize| x * q + y;
    let add = |a: usize, b: usize| encode((a / q + b / q) % q, (a % q + b % q) % q);

    type Bits = Vec<u64>;
    let set_bit = |s: &mut Bits, i: usize| s[i / 64] |= 1 << (i % 64);
    let members = |s: &Bits| -> Vec<usize> { (0..total).filter(|&i| s[i / 64] >> (i % 64) & 1 == 1).collect() };

    let mut cyclic: Vec<Bits> = Vec::new();
    for g in 0..total {
        let mut s = vec![0u64; words];
        let mut x = 0;
        loop {
            set_bit(&mut s, x);
            x = add(x, g);
            if x == 0 {
                break;
            }
        }
        cyclic.push(s);
    }
    cyclic.sort();
    cyclic.dedup();

    // (Z/p^2)^2 has rank 2, so every subgroup is a sum of two cyclic subgroups
    let mut subgroups: Vec<Bits> = Vec::new();
    for (i, s1) in cyclic.iter().enumerate() {
        let m1 = members(s1);
        for s2 in &cyclic[i..] {
            let mut s = vec![0u64; words];
            for &b in &members(s2) {
                for &a in &m1 {
                    set_bit(&mut s, add(a, b));
                }
            }
            subgroups.push(s);
        }
    }
    subgroups.sort();
    subgroups.dedup();

    let maps: Vec<Vec<usize>> = matrices
        .iter()
        .map(|m| {
            (0..total)
                .map(|e| {
                    let (x, y) = ((e / q) as i64, (e % q) as i64);
                    let img = m.apply(&[x, y]);
                    encode(reduce(img[0], q as u64) as usize, reduce(img[1], q as u64) as usize)
                })
                .collect()
        })
        .collect();
    let is_member = |s: &Bits, i: usize| s[i / 64] >> (i % 64) & 1 == 1;
    let invariant: Vec<(Bits, usize)> = subgroups
        .into_iter()
        .filter(|s| members(s).iter().all(|&e| maps.iter().all(|m| is_member(s, m[e]))))
        .map(|s| {
            let size = members(&s).len();
            (s, size)
        })
        .filter(|&(_, size)| size < total)
        .collect();
    let subset = |a: &Bits, b: &Bits| a.iter().zip(b).all(|(x, y)| x & !y == 0);
    let mut counts = BTreeMap::new();
    for (s, size) in &invariant {
        let maximal = !invariant.iter().any(|(t, tsize)| tsize > size && subset(s, t));
        if maximal {
            *counts.entry((total / size) as u64).or_insert(0) += 1;
        }
    }
    Ok(counts)
}
