use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Monomials of total degree ≤ N in n variables, in graded-lex order.
///
/// Within one degree the order depends only on `n`, so blocks of equal degree
/// are interchangeable between bases of different truncation order.
#[derive(Debug)]
pub struct Basis {
    n: usize,
    order: usize,
    monos: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Vec<u32>, usize>>,
    products: Mutex<HashMap<(usize, usize), Arc<Vec<u32>>>>,
    derivs: Mutex<HashMap<(usize, usize), Arc<Vec<u32>>>>,
}

pub(crate) const NONE: u32 = u32::MAX;

fn monomials_of_degree(n: usize, d: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let n = cur.len();
        if i == n - 1 {
            cur[i] = rem;
            out.push(cur.clone());
            return;
        }
        for v in (0..=rem).rev() {
            cur[i] = v;
            rec(i + 1, rem - v, cur, out);
        }
    }
    rec(0, d as u32, &mut cur, &mut out);
    out
}

impl Basis {
    fn build(n: usize, order: usize) -> Self {
        let monos: Vec<Vec<Vec<u32>>> = (0..=order).map(|d| monomials_of_degree(n, d)).collect();
        let index = monos
            .iter()
            .map(|block| block.iter().enumerate().map(|(k, e)| (e.clone(), k)).collect())
            .collect();
        Self {
            n,
            order,
            monos,
            index,
            products: Mutex::new(HashMap::new()),
            derivs: Mutex::new(HashMap::new()),
        }
    }

    /// Shared basis for `(n, order)`.
    pub fn get(n: usize, order: usize) -> Arc<Basis> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Basis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("basis cache poisoned");
        guard
            .entry((n, order))
            .or_insert_with(|| Arc::new(Basis::build(n, order)))
            .clone()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn count(&self, d: usize) -> usize {
        self.monos[d].len()
    }

    pub fn monomials(&self, d: usize) -> &[Vec<u32>] {
        &self.monos[d]
    }

    /// `(degree, position)` of an exponent vector, if within the order.
    pub fn locate(&self, exp: &[u32]) -> Option<(usize, usize)> {
        let d = exp.iter().sum::<u32>() as usize;
        if exp.len() != self.n || d > self.order {
            return None;
        }
        self.index[d].get(exp).map(|&k| (d, k))
    }

    /// Flattened table: entry `i·count(d2)+j` is the position of
    /// `monos[d1][i]·monos[d2][j]` in degree `d1+d2`.
    pub(crate) fn product_table(&self, d1: usize, d2: usize) -> Arc<Vec<u32>> {
        let mut guard = self.products.lock().expect("product table poisoned");
        guard
            .entry((d1, d2))
            .or_insert_with(|| {
                let target = &self.index[d1 + d2];
                let mut t = Vec::with_capacity(self.count(d1) * self.count(d2));
                let mut e = vec![0u32; self.n];
                for a in &self.monos[d1] {
                    for b in &self.monos[d2] {
                        for k in 0..self.n {
                            e[k] = a[k] + b[k];
                        }
                        t.push(target[&e] as u32);
                    }
                }
                Arc::new(t)
            })
            .clone()
    }

    /// For degree `d`, the position in degree `d−1` of `∂/∂z_var` of each
    /// monomial, or [`NONE`] when the exponent of `var` is zero.
    pub(crate) fn deriv_table(&self, var: usize, d: usize) -> Arc<Vec<u32>> {
        let mut guard = self.derivs.lock().expect("derivative table poisoned");
        guard
            .entry((var, d))
            .or_insert_with(|| {
                let t = self.monos[d]
                    .iter()
                    .map(|e| {
                        if e[var] == 0 {
                            NONE
                        } else {
                            let mut f = e.clone();
                            f[var] -= 1;
                            self.index[d - 1][&f] as u32
                        }
                    })
                    .collect();
                Arc::new(t)
            })
            .clone()
    }
}
