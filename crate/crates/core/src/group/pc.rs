//! Collection in power-conjugate presentations.
//!
//! A presentation lists generators `g_0, …, g_{m-1}` with relative orders
//! `r_k`, power relations `g_k^{r_k} = w_k` and conjugate relations
//! `g_k^{-1} g_j g_k = w_{kj}` for `k < j`, where every right-hand side lies
//! in `⟨g_{k+1}, …⟩`. Elements are exponent vectors `g_0^{e_0}⋯g_{m-1}^{e_{m-1}}`
//! with `0 ≤ e_k < r_k`, ranked lexicographically with `g_0` most significant.
//! An inconsistent presentation still tabulates, but the table then fails
//! the group-axiom checks downstream.

use std::collections::HashMap;

use super::{Group, GroupError, NamedGenerator, Result, MAX_ORDER};

/// A word as `(generator, exponent)` pairs; exponents may be negative.
pub(crate) type Word = Vec<(usize, i64)>;

#[derive(Debug, Clone)]
pub(crate) struct PcPresentation {
    pub rel_orders: Vec<u32>,
    /// `powers[k]` = word for `g_k^{r_k}` (generators > k only).
    pub powers: Vec<Word>,
    /// `conj[(k, j)]` = word for `g_k^{-1} g_j g_k`; absent pairs commute.
    pub conj: HashMap<(usize, usize), Word>,
}

impl PcPresentation {
    pub fn new(rel_orders: Vec<u32>) -> Self {
        let m = rel_orders.len();
        PcPresentation {
            rel_orders,
            powers: vec![Vec::new(); m],
            conj: HashMap::new(),
        }
    }

    pub fn power(mut self, k: usize, word: Word) -> Self {
        self.powers[k] = word;
        self
    }

    pub fn conjugate(mut self, k: usize, j: usize, word: Word) -> Self {
        self.conj.insert((k, j), word);
        self
    }

    fn len(&self) -> usize {
        self.rel_orders.len()
    }

    fn order(&self) -> Result<usize> {
        let mut n: usize = 1;
        for &r in &self.rel_orders {
            if r == 0 {
                return Err(GroupError::InvalidParameter("relative order 0".into()));
            }
            n = n
                .checked_mul(r as usize)
                .filter(|&n| n <= MAX_ORDER)
                .ok_or(GroupError::OrderTooLarge(usize::MAX))?;
        }
        Ok(n)
    }
}

struct Collector<'a> {
    pres: &'a PcPresentation,
    strides: Vec<usize>,
    /// Normal forms of relation right-hand sides, ranked.
    power_rank: Vec<usize>,
    conj_rank: HashMap<(usize, usize), usize>,
    memo: HashMap<(usize, usize), usize>,
    depth_guard: usize,
}

impl<'a> Collector<'a> {
    fn new(pres: &'a PcPresentation) -> Collector<'a> {
        let m = pres.len();
        let mut strides = vec![1usize; m];
        for k in (0..m.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * pres.rel_orders[k + 1] as usize;
        }
        Collector {
            pres,
            strides,
            power_rank: vec![0; m],
            conj_rank: HashMap::new(),
            memo: HashMap::new(),
            depth_guard: 0,
        }
    }

    fn digit(&self, x: usize, k: usize) -> usize {
        (x / self.strides[k]) % self.pres.rel_orders[k] as usize
    }

    /// Ranks of relation words are computed bottom-up so that each only
    /// needs collection among higher generators.
    fn prepare(&mut self) -> Result<()> {
        let m = self.pres.len();
        for k in (0..m).rev() {
            let w = self.pres.powers[k].clone();
            if w.iter().any(|&(g, _)| g <= k) {
                return Err(GroupError::InvalidParameter(format!(
                    "power relation of generator {k} uses a generator at or above it"
                )));
            }
            self.power_rank[k] = self.eval(&w)?;
            for j in k + 1..m {
                let r = match self.pres.conj.get(&(k, j)) {
                    Some(w) => {
                        if w.iter().any(|&(g, _)| g <= k) {
                            return Err(GroupError::InvalidParameter(format!(
                                "conjugate relation ({k},{j}) leaves the tail subgroup"
                            )));
                        }
                        let w = w.clone();
                        self.eval(&w)?
                    }
                    None => self.strides[j],
                };
                self.conj_rank.insert((k, j), r);
            }
        }
        Ok(())
    }

    fn eval(&mut self, w: &[(usize, i64)]) -> Result<usize> {
        let mut acc = 0;
        for &(g, e) in w {
            let base = if e >= 0 {
                self.strides[g]
            } else {
                self.inverse(self.strides[g])?
            };
            for _ in 0..e.unsigned_abs() {
                acc = self.mul(acc, base)?;
            }
        }
        Ok(acc)
    }

    fn inverse(&mut self, x: usize) -> Result<usize> {
        let mut prev = 0;
        let mut cur = x;
        for _ in 0..=MAX_ORDER {
            if cur == 0 {
                return Ok(prev);
            }
            prev = cur;
            cur = self.mul(cur, x)?;
        }
        Err(GroupError::RelationInconsistent("element of unbounded order".into()))
    }

    fn mul(&mut self, mut x: usize, y: usize) -> Result<usize> {
        for j in 0..self.pres.len() {
            for _ in 0..self.digit(y, j) {
                x = self.mul_gen(x, j)?;
            }
        }
        Ok(x)
    }

    /// `x · g_k`.
    fn mul_gen(&mut self, x: usize, k: usize) -> Result<usize> {
        if let Some(&r) = self.memo.get(&(x, k)) {
            return Ok(r);
        }
        self.depth_guard += 1;
        if self.depth_guard > 10_000 {
            return Err(GroupError::RelationInconsistent("collection does not terminate".into()));
        }
        let m = self.pres.len();
        let head_end = self.strides[k] * self.pres.rel_orders[k] as usize;
        let head = x - x % head_end;
        let ek = self.digit(x, k);
        let tail = x % self.strides[k];
        // tail^{g_k}
        let mut conj_tail = 0;
        for j in k + 1..m {
            let c = self.conj_rank[&(k, j)];
            for _ in 0..self.digit(tail, j) {
                conj_tail = self.mul(conj_tail, c)?;
            }
        }
        let result = if ek + 1 < self.pres.rel_orders[k] as usize {
            head + (ek + 1) * self.strides[k] + conj_tail
        } else {
            let rest = self.mul(self.power_rank[k], conj_tail)?;
            if rest >= self.strides[k] {
                return Err(GroupError::RelationInconsistent(
                    "power relation escapes its tail subgroup".into(),
                ));
            }
            head + rest
        };
        self.depth_guard -= 1;
        self.memo.insert((x, k), result);
        Ok(result)
    }
}

/// Tabulates a presentation. `named` gives each named generator as a word.
pub(crate) fn tabulate(pres: &PcPresentation, named: &[(&str, Word)]) -> Result<Group> {
    let n = pres.order()?;
    let m = pres.len();
    let mut col = Collector::new(pres);
    col.prepare()?;
    // right multiplication by each pc generator
    let mut right = vec![0usize; n * m];
    for x in 0..n {
        for k in 0..m {
            right[x * m + k] = col.mul_gen(x, k)?;
        }
    }
    let mut table = vec![0u16; n * n];
    // y = y' · g_k where g_k is the last generator with a nonzero digit
    let mut last = vec![(0usize, 0usize); n];
    for y in 1..n {
        let k = (0..m).rev().find(|&k| col.digit(y, k) != 0).unwrap();
        last[y] = (y - col.strides[k], k);
    }
    for x in 0..n {
        table[x * n] = x as u16;
        for y in 1..n {
            let (yp, k) = last[y];
            let xyp = table[x * n + yp] as usize;
            table[x * n + y] = right[xyp * m + k] as u16;
        }
    }
    let mut gens = Vec::with_capacity(named.len());
    for (name, w) in named {
        gens.push(NamedGenerator {
            name: (*name).to_string(),
            index: col.eval(w)?,
        });
    }
    Group::from_raw(n, table, gens).map_err(|e| match e {
        GroupError::InvalidTable(msg) => GroupError::RelationInconsistent(msg),
        other => other,
    })
}
