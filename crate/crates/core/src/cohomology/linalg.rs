//! Row reduction over `F_p`.

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^{p-2} is the inverse
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// An incrementally built row space in reduced echelon form.
#[derive(Debug, Clone)]
pub(crate) struct RowSpace {
    p: u64,
    width: usize,
    /// `(pivot column, row)`; each row has a 1 at its pivot and zeros at
    /// the pivots of the other rows.
    rows: Vec<(usize, Vec<u64>)>,
}

impl RowSpace {
    pub fn new(p: u64, width: usize) -> RowSpace {
        RowSpace {
            p,
            width,
            rows: Vec::new(),
        }
    }

    #[cfg(test)]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, row: &mut [u64]) {
        for (piv, r) in &self.rows {
            let c = row[*piv] % self.p;
            if c != 0 {
                let f = self.p - c;
                for (x, &y) in row.iter_mut().zip(r) {
                    *x = (*x + f * y) % self.p;
                }
            }
        }
    }

    /// Inserts a row; returns whether it was independent of the current space.
    pub fn insert(&mut self, mut row: Vec<u64>) -> bool {
        debug_assert_eq!(row.len(), self.width);
        self.reduce(&mut row);
        let Some(piv) = row.iter().position(|&x| x % self.p != 0) else {
            return false;
        };
        let inv = inv_mod(row[piv], self.p);
        for x in row.iter_mut() {
            *x = *x * inv % self.p;
        }
        for (_, r) in self.rows.iter_mut() {
            let c = r[piv];
            if c != 0 {
                let f = self.p - c;
                for (x, &y) in r.iter_mut().zip(&row) {
                    *x = (*x + f * y) % self.p;
                }
            }
        }
        self.rows.push((piv, row));
        true
    }

    /// Basis of `{x : row·x = 0 for every row}`.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let mut is_pivot = vec![None; self.width];
        for (i, (piv, _)) in self.rows.iter().enumerate() {
            is_pivot[*piv] = Some(i);
        }
        let mut out = Vec::new();
        for free in 0..self.width {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![0u64; self.width];
            v[free] = 1;
            for (piv, r) in &self.rows {
                v[*piv] = (self.p - r[free] % self.p) % self.p;
            }
            out.push(v);
        }
        out
    }

    /// Solves the affine system whose rows are `[a | b]` meaning `a·x = b`,
    /// for a space built from such augmented rows of width `n + 1`.
    /// Free variables are set to zero.
    pub fn solve_augmented(&self) -> Option<Vec<u64>> {
        let n = self.width - 1;
        let mut x = vec![0u64; n];
        for (piv, r) in &self.rows {
            if *piv == n {
                return None;
            }
            x[*piv] = r[n] % self.p;
        }
        Some(x)
    }
}
