use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::coeff::Field;
use crate::jets::{default_var_names, Jet};

use super::{CalcError, VectorField};

/// A differential p-form `Σ_I F_I dz^I` with jet coefficients.
#[derive(Clone)]
pub struct PForm<F: Field> {
    n: usize,
    degree: usize,
    order: usize,
    comps: BTreeMap<Vec<usize>, Jet<F>>,
}

/// Sign of `dz_I ∧ dz_J` relative to `dz_{I∪J}` sorted, or `None` on overlap.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for &i in a {
        for &j in b {
            if i == j {
                return None;
            }
            if i > j {
                inversions += 1;
            }
        }
    }
    let mut idx: Vec<usize> = a.iter().chain(b).copied().collect();
    idx.sort_unstable();
    Some((idx, inversions % 2 == 1))
}

impl<F: Field> PForm<F> {
    pub fn zero(n: usize, degree: usize, order: usize) -> Self {
        Self {
            n,
            degree,
            order,
            comps: BTreeMap::new(),
        }
    }

    /// The 0-form given by a function.
    pub fn function(f: Jet<F>) -> Self {
        let mut w = Self::zero(f.n(), 0, f.order());
        w.insert(vec![], f);
        w
    }

    /// `f·dz_{i₁}∧…∧dz_{i_p}` for an arbitrary (unsorted) index list.
    pub fn monomial(f: Jet<F>, idx: &[usize]) -> Self {
        let mut w = Self::zero(f.n(), idx.len(), f.order());
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() < idx.len() {
            return w;
        }
        // parity of the sorting permutation
        let mut inv = 0;
        for a in 0..idx.len() {
            for b in a + 1..idx.len() {
                if idx[a] > idx[b] {
                    inv += 1;
                }
            }
        }
        let f = if inv % 2 == 1 { -f } else { f };
        w.insert(sorted, f);
        w
    }

    /// The basic 1-form `dz_i`.
    pub fn dz(n: usize, order: usize, i: usize) -> Self {
        Self::monomial(Jet::one(n, order), &[i])
    }

    /// `dz_1∧…∧dz_n`.
    pub fn volume(n: usize, order: usize) -> Self {
        let idx: Vec<usize> = (0..n).collect();
        Self::monomial(Jet::one(n, order), &idx)
    }

    /// Builds a 1-form from its `n` coefficients.
    pub fn one_form(coeffs: Vec<Jet<F>>) -> Self {
        let n = coeffs.len();
        let order = coeffs.iter().map(|c| c.order()).min().unwrap_or(0);
        let mut w = Self::zero(n, 1, order);
        for (i, c) in coeffs.into_iter().enumerate() {
            w.insert(vec![i], c);
        }
        w
    }

    pub fn from_components(
        n: usize,
        degree: usize,
        order: usize,
        comps: impl IntoIterator<Item = (Vec<usize>, Jet<F>)>,
    ) -> Result<Self, CalcError> {
        let mut w = Self::zero(n, degree, order);
        for (idx, f) in comps {
            if idx.len() != degree || idx.windows(2).any(|p| p[0] >= p[1]) || idx.iter().any(|&i| i >= n) {
                return Err(CalcError::BadIndex(idx));
            }
            if f.n() != n {
                return Err(CalcError::AmbientMismatch);
            }
            w.insert(idx, f);
        }
        Ok(w)
    }

    fn insert(&mut self, idx: Vec<usize>, f: Jet<F>) {
        let f = if f.order() == self.order { f } else { f.with_order(self.order) };
        let merged = match self.comps.remove(&idx) {
            Some(g) => &g + &f,
            None => f,
        };
        if !merged.is_zero() {
            self.comps.insert(idx, merged);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Effective truncation order of the coefficients.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mixed_order(&self) -> bool {
        self.comps.values().any(|f| f.mixed_order())
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Jet<F>)> {
        self.comps.iter()
    }

    pub fn get(&self, idx: &[usize]) -> Jet<F> {
        self.comps
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Jet::zero(self.n, self.order))
    }

    /// Coefficient of a 0-form.
    pub fn as_function(&self) -> Jet<F> {
        self.get(&[])
    }

    /// Coefficients `(F_1,…,F_n)` of a 1-form.
    pub fn one_form_coeffs(&self) -> Vec<Jet<F>> {
        (0..self.n).map(|i| self.get(&[i])).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|f| f.is_zero())
    }

    /// Lowest coefficient degree over all components.
    pub fn valuation(&self) -> Option<usize> {
        self.comps.values().filter_map(|f| f.valuation()).min()
    }

    pub fn with_order(&self, order: usize) -> Self {
        let mut w = Self::zero(self.n, self.degree, order);
        for (idx, f) in &self.comps {
            w.insert(idx.clone(), f.with_order(order));
        }
        w
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> PForm<G> {
        let mut w = PForm::zero(self.n, self.degree, self.order);
        for (idx, c) in &self.comps {
            w.insert(idx.clone(), c.map_coeffs(&f));
        }
        w
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut w = Self::zero(self.n, self.degree, self.order);
        for (idx, f) in &self.comps {
            w.insert(idx.clone(), f.scale(c));
        }
        w
    }

    /// Multiplication by a function.
    pub fn mul_function(&self, g: &Jet<F>) -> Self {
        let order = self.order.min(g.order());
        let mut w = Self::zero(self.n, self.degree, order);
        for (idx, f) in &self.comps {
            w.insert(idx.clone(), f * g);
        }
        w
    }

    /// Equality of all components up to the smaller order.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.n != other.n || self.degree != other.degree {
            return false;
        }
        let order = self.order.min(other.order);
        self.comps
            .keys()
            .chain(other.comps.keys())
            .all(|idx| {
                self.get(idx)
                    .with_order(order)
                    .agrees_with(&other.get(idx).with_order(order))
            })
    }

    /// Exterior product with sign bookkeeping; degree above `n` gives zero.
    pub fn wedge(&self, other: &Self) -> Result<Self, CalcError> {
        if self.n != other.n {
            return Err(CalcError::AmbientMismatch);
        }
        let order = self.order.min(other.order);
        let mut w = Self::zero(self.n, self.degree + other.degree, order);
        if w.degree > self.n {
            return Ok(w);
        }
        for (a, f) in &self.comps {
            for (b, g) in &other.comps {
                if let Some((idx, neg)) = merge_sign(a, b) {
                    let fg = f * g;
                    w.insert(idx, if neg { -fg } else { fg });
                }
            }
        }
        Ok(w)
    }

    /// Exterior derivative; the result carries order `N−1`.
    pub fn d(&self) -> Self {
        let order = self.order.saturating_sub(1);
        let mut w = Self::zero(self.n, self.degree + 1, order);
        if w.degree > self.n {
            return w;
        }
        for (idx, f) in &self.comps {
            for i in 0..self.n {
                if idx.contains(&i) {
                    continue;
                }
                let df = f.derivative(i);
                if df.is_zero() {
                    continue;
                }
                let before = idx.iter().filter(|&&k| k < i).count();
                let mut new_idx = idx.clone();
                new_idx.insert(before, i);
                w.insert(new_idx, if before % 2 == 1 { -df } else { df });
            }
        }
        w
    }

    /// Contraction `i_X` with alternating signs.
    pub fn interior(&self, x: &VectorField<F>) -> Result<Self, CalcError> {
        if self.degree == 0 {
            return Err(CalcError::DegreeZero);
        }
        if x.n() != self.n {
            return Err(CalcError::AmbientMismatch);
        }
        let order = self.order.min(x.order());
        let mut w = Self::zero(self.n, self.degree - 1, order);
        for (idx, f) in &self.comps {
            for (k, &i) in idx.iter().enumerate() {
                let xi = x.component(i);
                if xi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(k);
                let t = xi * f;
                w.insert(rest, if k % 2 == 1 { -t } else { t });
            }
        }
        Ok(w)
    }

    /// `L_X = i_X∘d + d∘i_X`; the result carries order `N−1`.
    pub fn lie(&self, x: &VectorField<F>) -> Result<Self, CalcError> {
        let a = self.d().interior(x)?;
        if self.degree == 0 {
            return Ok(a);
        }
        let b = self.interior(x)?.d();
        Ok(&a + &b)
    }

    /// Pullback by a map given as `n` jets in `k` variables, each with zero
    /// constant term. The result is a form on `ℂ^k`.
    pub fn pullback_by_map(&self, map: &[Jet<F>]) -> Result<Self, CalcError> {
        if map.len() != self.n {
            return Err(CalcError::AmbientMismatch);
        }
        let k = map.first().map_or(self.n, |m| m.n());
        let map_order = map.iter().map(|m| m.order()).min().unwrap_or(self.order);
        let order = if self.degree == 0 {
            self.order.min(map_order)
        } else {
            self.order.min(map_order.saturating_sub(1))
        };
        let mut w = Self::zero(k, self.degree, order);
        if self.degree > k {
            return Ok(w);
        }
        let dphi: Vec<Self> = map
            .iter()
            .map(|m| Self::function(m.clone()).d().with_order(order))
            .collect();
        let mut wedges: HashMap<Vec<usize>, Self> = HashMap::new();
        for (idx, f) in &self.comps {
            let coeff = f.compose(map).map_err(CalcError::Jet)?.with_order(order);
            let mut basis = Self::function(Jet::one(k, order));
            for (pos, &i) in idx.iter().enumerate() {
                let prefix = &idx[..=pos];
                basis = match wedges.get(prefix) {
                    Some(b) => b.clone(),
                    None => {
                        let b = basis.wedge(&dphi[i])?;
                        wedges.insert(prefix.to_vec(), b.clone());
                        b
                    }
                };
            }
            w = &w + &basis.mul_function(&coeff);
        }
        Ok(w)
    }

    /// Text form with the given variable names, e.g. `(y)*dx + (2*x)*dy`.
    pub fn to_text_with(&self, vars: &[String]) -> String {
        if self.degree == 0 {
            return self.as_function().to_text_with(vars);
        }
        let terms: Vec<String> = self
            .comps
            .iter()
            .map(|(idx, f)| {
                let basis: Vec<String> = idx.iter().map(|&i| format!("d{}", vars[i])).collect();
                let b = if basis.len() == 1 {
                    basis[0].clone()
                } else {
                    format!("wedge({})", basis.join(", "))
                };
                format!("({})*{}", f.to_text_with(vars), b)
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl<F: Field> PartialEq for PForm<F> {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.agrees_with(other)
    }
}

impl<F: Field> fmt::Debug for PForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PForm[n={}, p={}, N={}]({})",
            self.n,
            self.degree,
            self.order,
            self.to_text_with(&default_var_names(self.n))
        )
    }
}

impl<F: Field> Add for &PForm<F> {
    type Output = PForm<F>;
    fn add(self, o: &PForm<F>) -> PForm<F> {
        assert_eq!(self.n, o.n, "forms on different spaces");
        assert_eq!(self.degree, o.degree, "forms of different degree");
        let mut w = PForm::zero(self.n, self.degree, self.order.min(o.order));
        for (idx, f) in self.comps.iter().chain(&o.comps) {
            w.insert(idx.clone(), f.clone());
        }
        w
    }
}

impl<F: Field> Sub for &PForm<F> {
    type Output = PForm<F>;
    fn sub(self, o: &PForm<F>) -> PForm<F> {
        self + &(-o)
    }
}

impl<F: Field> Neg for &PForm<F> {
    type Output = PForm<F>;
    fn neg(self) -> PForm<F> {
        self.scale(&-F::one())
    }
}
