//! Finitely presented groups and the two families `G_k` and `H_k`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(generator: usize) -> Self {
        Letter { generator, inverse: false }
    }

    pub fn inv(generator: usize) -> Self {
        Letter { generator, inverse: true }
    }

    pub fn inverted(self) -> Self {
        Letter { inverse: !self.inverse, ..self }
    }
}

pub type Word = Vec<Letter>;

pub fn invert_word(word: &[Letter]) -> Word {
    word.iter().rev().map(|l| l.inverted()).collect()
}

/// `g^e` as a word, using the inverse letter for negative exponents.
pub fn power(generator: usize, e: i64) -> Word {
    let l = if e < 0 { Letter::inv(generator) } else { Letter::gen(generator) };
    vec![l; e.unsigned_abs() as usize]
}

fn is_freely_reduced(word: &[Letter]) -> bool {
    word.windows(2).all(|w| w[0] != w[1].inverted())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        for (i, r) in relators.iter().enumerate() {
            if let Some(l) = r.iter().find(|l| l.generator >= generators.len()) {
                return Err(Error::UnknownGenerator { index: l.generator, generators: generators.len() });
            }
            if !is_freely_reduced(r) {
                return Err(Error::NotReduced(i));
            }
        }
        Ok(GroupPresentation { generators, relators })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Same group, relators listed in a different order.
    pub fn with_relator_order(&self, order: &[usize]) -> Self {
        let relators = order.iter().map(|&i| self.relators[i].clone()).collect();
        GroupPresentation { generators: self.generators.clone(), relators }
    }

    pub fn format_word(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        word.iter()
            .map(|l| {
                let name = &self.generators[l.generator];
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gk,
    Hk,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Gk => write!(f, "gk"),
            Family::Hk => write!(f, "hk"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    family: Family,
    k: i64,
}

impl GroupSpec {
    pub fn new(family: Family, k: i64) -> Result<Self> {
        if family == Family::Gk && k < 1 {
            return Err(Error::InvalidParameter(format!("G_k needs k >= 1, got {k}")));
        }
        Ok(GroupSpec { family, k })
    }

    pub fn gk(k: i64) -> Result<Self> {
        Self::new(Family::Gk, k)
    }

    pub fn hk(k: i64) -> Self {
        GroupSpec { family: Family::Hk, k }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn presentation(&self) -> GroupPresentation {
        match self.family {
            Family::Gk => make_gk(self.k).expect("validated at construction"),
            Family::Hk => make_hk(self.k).presentation,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Gk => write!(f, "G_{}", self.k),
            Family::Hk => write!(f, "H_{}", self.k),
        }
    }
}

/// `< x_1, ..., x_k | x_i x_j x_i^-1 x_j (i < j) >`. For k = 2 the generators
/// are named `a` and `b`.
pub fn make_gk(k: i64) -> Result<GroupPresentation> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("G_k needs k >= 1, got {k}")));
    }
    let k = k as usize;
    let names = if k == 2 {
        vec!["a".to_string(), "b".to_string()]
    } else {
        (1..=k).map(|i| format!("x{i}")).collect()
    };
    let mut relators = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            relators.push(vec![Letter::gen(i), Letter::gen(j), Letter::inv(i), Letter::gen(j)]);
        }
    }
    GroupPresentation::new(names, relators)
}

/// `H_k = Z^2 ⋊ G_2` flattened to a single presentation.
#[derive(Debug, Clone)]
pub struct HkGroup {
    pub presentation: GroupPresentation,
    /// Action of `a` on the lattice.
    pub a: Matrix,
    /// Action of `b` on the lattice.
    pub b: Matrix,
}

pub const HK_T1: usize = 0;
pub const HK_T2: usize = 1;
pub const HK_B: usize = 2;
pub const HK_A: usize = 3;

pub fn swap_matrix() -> Matrix {
    Matrix::from_rows(&[[0, 1], [1, 0]])
}

pub fn b_matrix(k: i64) -> Matrix {
    Matrix::from_rows(&[[0, 1], [-1, k]])
}

// Word in t1, t2 for the lattice vector (x, y).
fn lattice_word(x: i64, y: i64) -> Word {
    let mut w = power(HK_T1, x);
    w.extend(power(HK_T2, y));
    w
}

// g t g^-1 = M_g t, written as the relator g t g^-1 (M_g t)^-1.
fn conjugation_relator(g: usize, t: usize, image: (i64, i64)) -> Word {
    let mut w = vec![Letter::gen(g), Letter::gen(t), Letter::inv(g)];
    w.extend(invert_word(&lattice_word(image.0, image.1)));
    w
}

/// Generators `t1, t2, b, a`. Lattice vectors are columns and `g` acts by
/// `v -> M_g v`, so `g t_j g^-1` is column `j` of `M_g`.
pub fn make_hk(k: i64) -> HkGroup {
    let a = swap_matrix();
    let b = b_matrix(k);
    let names = ["t1", "t2", "b", "a"].map(String::from).to_vec();
    let mut relators = vec![
        vec![Letter::gen(HK_T1), Letter::gen(HK_T2), Letter::inv(HK_T1), Letter::inv(HK_T2)],
        vec![Letter::gen(HK_A), Letter::gen(HK_B), Letter::inv(HK_A), Letter::gen(HK_B)],
    ];
    for (g, m) in [(HK_A, &a), (HK_B, &b)] {
        for (col, t) in [HK_T1, HK_T2].into_iter().enumerate() {
            relators.push(conjugation_relator(g, t, (m[(0, col)], m[(1, col)])));
        }
    }
    let presentation = GroupPresentation::new(names, relators).expect("H_k relators are well formed");
    HkGroup { presentation, a, b }
}

/// Whether `a -> A, b -> B` respects the relator `a b a^-1 b`.
pub fn check_semidirect_compatibility(a: &Matrix, b: &Matrix) -> Result<bool> {
    if a.rows() != 2 || b.rows() != 2 || !a.is_square() || !b.is_square() {
        return Err(Error::DimensionMismatch("expected 2x2 matrices".into()));
    }
    let a_inv = a.inverse_unimodular().ok_or(Error::NotUnimodular(a.det()))?;
    if b.inverse_unimodular().is_none() {
        return Err(Error::NotUnimodular(b.det()));
    }
    Ok(a.mul(b).mul(&a_inv).mul(b) == Matrix::identity(2))
}
