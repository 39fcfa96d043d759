//! Brute-force `m_n`: enumerate every subgroup of index `n` as a coset table
//! and keep the ones whose coset action is primitive.
//!
//! Tables are filled by backtracking. The first empty cell in row-major
//! order (columns `g_1, g_1^-1, g_2, …`) is tried against every existing
//! coset and, if room remains, one new coset; relator consequences are
//! deduced eagerly and contradictions prune the branch. Since new cosets are
//! only introduced at the first empty cell, every table produced is in
//! first-appearance order, which makes tables and subgroups correspond one to
//! one. Conjugates are deliberately not identified.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::model::{GroupPresentation, Letter};

const EMPTY: u32 = u32::MAX;

pub const DEFAULT_MAX_INDEX: usize = 12;
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const MAX_GENERATORS: usize = 6;
pub const BUDGET_ENV: &str = "MAXGROWTH_NODE_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_index: usize,
    pub node_budget: u64,
    pub parallel: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_index: DEFAULT_MAX_INDEX, node_budget: DEFAULT_NODE_BUDGET, parallel: true }
    }
}

impl OracleConfig {
    /// Defaults, with the node budget taken from `MAXGROWTH_NODE_BUDGET` when set.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(b) = std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            cfg.node_budget = b;
        }
        cfg
    }

    pub fn sequential(self) -> Self {
        OracleConfig { parallel: false, ..self }
    }
}

fn column(l: Letter) -> usize {
    2 * l.generator + usize::from(l.inverse)
}

/// Complete action of the generators and their inverses on `n` cosets.
/// Coset 0 is the subgroup itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetTable {
    n: usize,
    generators: usize,
    entries: Vec<u32>,
}

impl CosetTable {
    /// Builds a table from one permutation per generator (`perms[g][c] = c·g`).
    pub fn from_permutations(perms: &[Vec<usize>]) -> Result<Self> {
        let n = perms.first().map_or(0, Vec::len);
        let generators = perms.len();
        let mut entries = vec![EMPTY; n * 2 * generators];
        for (g, perm) in perms.iter().enumerate() {
            if perm.len() != n {
                return Err(Error::DimensionMismatch("permutations of different degrees".into()));
            }
            for (c, &d) in perm.iter().enumerate() {
                if d >= n || entries[d * 2 * generators + 2 * g + 1] != EMPTY {
                    return Err(Error::InvalidParameter(format!("generator {g} is not a permutation")));
                }
                entries[c * 2 * generators + 2 * g] = d as u32;
                entries[d * 2 * generators + 2 * g + 1] = c as u32;
            }
        }
        Ok(CosetTable { n, generators, entries })
    }

    pub fn index(&self) -> usize {
        self.n
    }

    pub fn num_generators(&self) -> usize {
        self.generators
    }

    pub fn image(&self, coset: usize, letter: Letter) -> usize {
        self.entries[coset * 2 * self.generators + column(letter)] as usize
    }

    pub fn trace(&self, coset: usize, word: &[Letter]) -> usize {
        word.iter().fold(coset, |c, &l| self.image(c, l))
    }

    pub fn permutation(&self, generator: usize) -> Vec<usize> {
        (0..self.n).map(|c| self.image(c, Letter::gen(generator))).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(|&e| e != EMPTY)
    }

    pub fn columns_are_inverse(&self) -> bool {
        (0..self.n).all(|c| {
            (0..self.generators).all(|g| {
                let d = self.image(c, Letter::gen(g));
                self.image(d, Letter::inv(g)) == c
            })
        })
    }

    pub fn satisfies(&self, presentation: &GroupPresentation) -> bool {
        presentation.num_generators() == self.generators
            && presentation.relators().iter().all(|r| (0..self.n).all(|c| self.trace(c, r) == c))
    }

    /// Cosets appear in increasing order when scanning rows, then columns.
    pub fn is_canonical(&self) -> bool {
        let mut next = 1;
        for &e in &self.entries {
            let e = e as usize;
            if e == next {
                next += 1;
            } else if e > next {
                return false;
            }
        }
        next == self.n
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for col in 0..2 * self.generators {
                let d = self.entries[c * 2 * self.generators + col] as usize;
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupRecord {
    pub table: CosetTable,
    pub is_maximal: bool,
    pub index: usize,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Size of the smallest block containing cosets 0 and `beta`.
pub fn minimal_block_size(table: &CosetTable, beta: usize) -> usize {
    let n = table.n;
    let perms: Vec<Vec<usize>> = (0..table.generators).map(|g| table.permutation(g)).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    parent[beta] = 0;
    let mut queue = vec![(0, beta)];
    while let Some((a, b)) = queue.pop() {
        for perm in &perms {
            let x = find(&mut parent, perm[a]);
            let y = find(&mut parent, perm[b]);
            if x != y {
                parent[y.max(x)] = x.min(y);
                queue.push((x, y));
            }
        }
    }
    let root = find(&mut parent, 0);
    (0..n).filter(|&c| find(&mut parent, c) == root).count()
}

/// Primitivity checked block by block, with no shortcut for prime degree.
pub fn is_primitive_exhaustive(table: &CosetTable) -> bool {
    (1..table.n).all(|beta| minimal_block_size(table, beta) == table.n)
}

/// Whether the group acts primitively on the cosets, i.e. the subgroup is maximal.
pub fn is_primitive(table: &CosetTable) -> bool {
    if table.n < 2 {
        return false;
    }
    is_prime(table.n as u64) || is_primitive_exhaustive(table)
}

#[derive(Clone)]
struct State {
    entries: Vec<u32>,
    cosets: usize,
}

enum Node {
    Done(Option<CosetTable>),
    Open(State),
}

struct Search {
    n: usize,
    generators: usize,
    cols: usize,
    /// Cyclic conjugates of every relator and its inverse, keyed by first column.
    by_first: Vec<Vec<Vec<usize>>>,
    budget: u64,
    nodes: AtomicU64,
}

impl Search {
    fn new(presentation: &GroupPresentation, n: usize, budget: u64) -> Self {
        let generators = presentation.num_generators();
        let cols = 2 * generators;
        let mut by_first: Vec<Vec<Vec<usize>>> = vec![Vec::new(); cols];
        for rel in presentation.relators().iter().filter(|r| !r.is_empty()) {
            let fwd: Vec<usize> = rel.iter().map(|&l| column(l)).collect();
            let bwd: Vec<usize> = rel.iter().rev().map(|&l| column(l) ^ 1).collect();
            for word in [fwd, bwd] {
                for s in 0..word.len() {
                    let mut rot = word[s..].to_vec();
                    rot.extend_from_slice(&word[..s]);
                    let list = &mut by_first[rot[0]];
                    if !list.contains(&rot) {
                        list.push(rot);
                    }
                }
            }
        }
        Search { n, generators, cols, by_first, budget, nodes: AtomicU64::new(0) }
    }

    fn root(&self) -> State {
        State { entries: vec![EMPTY; self.n * self.cols], cosets: 1 }
    }

    #[inline]
    fn get(&self, st: &State, c: usize, x: usize) -> u32 {
        st.entries[c * self.cols + x]
    }

    #[inline]
    fn set(&self, st: &mut State, c: usize, x: usize, d: usize, queue: &mut Vec<(usize, usize)>) {
        st.entries[c * self.cols + x] = d as u32;
        st.entries[d * self.cols + (x ^ 1)] = c as u32;
        queue.push((c, x));
        queue.push((d, x ^ 1));
    }

    // Trace `word` from `c` in both directions; close a single gap, report a
    // contradiction as false.
    fn scan(&self, st: &mut State, c: usize, word: &[usize], queue: &mut Vec<(usize, usize)>) -> bool {
        let len = word.len();
        let mut f = c;
        let mut i = 0;
        while i < len {
            let e = self.get(st, f, word[i]);
            if e == EMPTY {
                break;
            }
            f = e as usize;
            i += 1;
        }
        if i == len {
            return f == c;
        }
        let mut b = c;
        let mut j = len;
        while j > i {
            let e = self.get(st, b, word[j - 1] ^ 1);
            if e == EMPTY {
                break;
            }
            b = e as usize;
            j -= 1;
        }
        if j == i {
            return f == b;
        }
        if j == i + 1 {
            self.set(st, f, word[i], b, queue);
        }
        true
    }

    fn define(&self, st: &mut State, c: usize, x: usize, d: usize) -> bool {
        let mut queue = Vec::with_capacity(16);
        self.set(st, c, x, d, &mut queue);
        while let Some((c, x)) = queue.pop() {
            for word in &self.by_first[x] {
                if !self.scan(st, c, word, &mut queue) {
                    return false;
                }
            }
        }
        true
    }

    fn expand(&self, st: &State) -> Result<std::result::Result<Vec<State>, Option<CosetTable>>> {
        let seen = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if seen > self.budget {
            return Err(Error::BudgetExhausted(self.budget));
        }
        let cols = self.cols;
        let first = (0..st.cosets * cols).find(|&i| st.entries[i] == EMPTY);
        let Some(cell) = first else {
            if st.cosets < self.n {
                return Ok(Err(None));
            }
            let table = CosetTable { n: self.n, generators: self.generators, entries: st.entries.clone() };
            return Ok(Err(Some(table)));
        };
        let (r, x) = (cell / cols, cell % cols);
        let mut children = Vec::new();
        for d in 0..st.cosets {
            if self.get(st, d, x ^ 1) != EMPTY {
                continue;
            }
            let mut child = st.clone();
            if self.define(&mut child, r, x, d) {
                children.push(child);
            }
        }
        if st.cosets < self.n {
            let mut child = st.clone();
            let d = child.cosets;
            child.cosets += 1;
            if self.define(&mut child, r, x, d) {
                children.push(child);
            }
        }
        Ok(Ok(children))
    }

    fn dfs(&self, st: State, out: &mut Vec<CosetTable>) -> Result<()> {
        match self.expand(&st)? {
            Err(leaf) => out.extend(leaf),
            Ok(children) => {
                for child in children {
                    self.dfs(child, out)?;
                }
            }
        }
        Ok(())
    }

    fn run(&self, parallel: bool) -> Result<Vec<CosetTable>> {
        let mut out = Vec::new();
        if !parallel {
            self.dfs(self.root(), &mut out)?;
            return Ok(out);
        }
        // widen the frontier breadth-first, keeping DFS order, then split it
        let target = 8 * rayon::current_num_threads();
        let mut frontier = vec![Node::Open(self.root())];
        for _ in 0..self.n * self.cols {
            let open = frontier.iter().filter(|n| matches!(n, Node::Open(_))).count();
            if open == 0 || open >= target {
                break;
            }
            let mut next = Vec::with_capacity(frontier.len() * 2);
            for node in frontier {
                match node {
                    Node::Open(st) => match self.expand(&st)? {
                        Err(leaf) => next.push(Node::Done(leaf)),
                        Ok(children) => next.extend(children.into_iter().map(Node::Open)),
                    },
                    done => next.push(done),
                }
            }
            frontier = next;
        }
        let parts: Vec<Vec<CosetTable>> = frontier
            .into_par_iter()
            .map(|node| match node {
                Node::Done(leaf) => Ok(leaf.into_iter().collect()),
                Node::Open(st) => {
                    let mut part = Vec::new();
                    self.dfs(st, &mut part).map(|_| part)
                }
            })
            .collect::<Result<_>>()?;
        out.extend(parts.into_iter().flatten());
        Ok(out)
    }
}

fn check_limits(presentation: &GroupPresentation, n: usize, config: &OracleConfig) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParameter("index must be positive".into()));
    }
    if n > config.max_index {
        return Err(Error::BoundExceeded { needed: n as u128, bound: config.max_index as u128 });
    }
    if presentation.num_generators() > MAX_GENERATORS {
        return Err(Error::BoundExceeded {
            needed: presentation.num_generators() as u128,
            bound: MAX_GENERATORS as u128,
        });
    }
    Ok(())
}

/// One canonical coset table per subgroup of index exactly `n`, in search order.
pub fn low_index_subgroups(presentation: &GroupPresentation, n: usize, config: &OracleConfig) -> Result<Vec<CosetTable>> {
    check_limits(presentation, n, config)?;
    Search::new(presentation, n, config.node_budget).run(config.parallel)
}

pub fn enumerate_subgroups(presentation: &GroupPresentation, n: usize, config: &OracleConfig) -> Result<Vec<SubgroupRecord>> {
    let tables = low_index_subgroups(presentation, n, config)?;
    Ok(tables
        .into_iter()
        .map(|table| SubgroupRecord { is_maximal: is_primitive(&table), index: table.n, table })
        .collect())
}

pub fn oracle_max_count(presentation: &GroupPresentation, n: usize, config: &OracleConfig) -> Result<u64> {
    let tables = low_index_subgroups(presentation, n, config)?;
    Ok(tables.iter().filter(|t| is_primitive(t)).count() as u64)
}

pub fn oracle_subgroup_count(presentation: &GroupPresentation, n: usize, config: &OracleConfig) -> Result<u64> {
    Ok(low_index_subgroups(presentation, n, config)?.len() as u64)
}
