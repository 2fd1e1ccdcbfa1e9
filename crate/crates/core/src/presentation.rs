//! Algebras presented by ordered generators, commutation rules and power
//! rules, with a rewriting normal form on ordered monomials.
//!
//! A monomial `a_0^{e_0} ... a_k^{e_k}` with `e_i < bound_i` is normal. A
//! word is normalized by repeatedly replacing the leftmost descent `b a`
//! (with `b > a`) by its commutation rule, or the leftmost run `a^{bound}` by
//! its power rule. Each replacement either removes an inversion from the
//! leading term or shortens the word, so the procedure terminates.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{normalize2, FinAlgebra, Tensor2};
use crate::field::Field;
use crate::linalg::SparseVec;
use crate::{Error, Result};

/// A linear combination of words in the generators.
pub type Poly<F> = Vec<(Vec<usize>, F)>;

#[derive(Clone, Debug)]
pub struct Presentation<F> {
    pub letters: Vec<String>,
    pub bounds: Vec<usize>,
    swaps: HashMap<(usize, usize), Poly<F>>,
    powers: Vec<Poly<F>>,
}

impl<F: Field> Presentation<F> {
    /// Generators in normal order with exponent bounds. Until rules are added
    /// every pair commutes and `a^{bound}` is zero.
    pub fn new(letters: &[&str], bounds: &[usize]) -> Self {
        assert_eq!(letters.len(), bounds.len());
        assert!(bounds.iter().all(|&b| b >= 1));
        Presentation {
            letters: letters.iter().map(|s| s.to_string()).collect(),
            bounds: bounds.to_vec(),
            swaps: HashMap::new(),
            powers: vec![Vec::new(); letters.len()],
        }
    }

    pub fn letter(&self, name: &str) -> usize {
        self.letters.iter().position(|l| l == name).unwrap_or_else(|| panic!("no generator {name}"))
    }

    /// Rule `hi lo -> rhs` for a generator pair with `hi > lo`.
    pub fn commute(&mut self, hi: usize, lo: usize, rhs: Poly<F>) {
        assert!(hi > lo, "commutation rules rewrite descents only");
        self.swaps.insert((hi, lo), rhs);
    }

    /// Rule `a^{bound(a)} -> rhs`.
    pub fn power(&mut self, a: usize, rhs: Poly<F>) {
        self.powers[a] = rhs;
    }

    fn swap_rule(&self, hi: usize, lo: usize) -> Poly<F> {
        match self.swaps.get(&(hi, lo)) {
            Some(r) => r.clone(),
            None => vec![(vec![lo, hi], F::one())],
        }
    }

    pub(crate) fn power_rhs(&self, a: usize) -> Poly<F> {
        self.powers[a].clone()
    }

    pub(crate) fn swap_rule_opt(&self, hi: usize, lo: usize) -> Option<Poly<F>> {
        self.swaps.get(&(hi, lo)).cloned()
    }

    /// Normal form of a word as exponent vectors with coefficients.
    pub fn normal_form(&self, word: &[usize]) -> Vec<(Vec<usize>, F)> {
        let mut memo = HashMap::new();
        let mut out: BTreeMap<Vec<usize>, F> = BTreeMap::new();
        self.reduce_into(word, &F::one(), &mut memo, &mut out);
        out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    fn reduce_into(
        &self,
        word: &[usize],
        coeff: &F,
        memo: &mut HashMap<Vec<usize>, Vec<(Vec<usize>, F)>>,
        out: &mut BTreeMap<Vec<usize>, F>,
    ) {
        let nf = self.reduce(word, memo);
        for (e, c) in nf {
            let v = c.mul_ref(coeff);
            match out.get_mut(&e) {
                Some(x) => *x += &v,
                None => {
                    out.insert(e, v);
                }
            }
        }
    }

    fn reduce(&self, word: &[usize], memo: &mut HashMap<Vec<usize>, Vec<(Vec<usize>, F)>>) -> Vec<(Vec<usize>, F)> {
        if let Some(r) = memo.get(word) {
            return r.clone();
        }
        let mut rewrite: Option<(usize, usize, Poly<F>)> = None;
        if let Some(i) = (0..word.len().saturating_sub(1)).find(|&i| word[i] > word[i + 1]) {
            rewrite = Some((i, i + 2, self.swap_rule(word[i], word[i + 1])));
        } else {
            let mut i = 0;
            while i < word.len() {
                let a = word[i];
                let mut j = i;
                while j < word.len() && word[j] == a {
                    j += 1;
                }
                if j - i >= self.bounds[a] {
                    rewrite = Some((i, i + self.bounds[a], self.powers[a].clone()));
                    break;
                }
                i = j;
            }
        }
        let result = match rewrite {
            None => {
                let mut e = vec![0; self.letters.len()];
                for &a in word {
                    e[a] += 1;
                }
                vec![(e, F::one())]
            }
            Some((start, end, rhs)) => {
                let mut acc: BTreeMap<Vec<usize>, F> = BTreeMap::new();
                for (w, c) in rhs {
                    let mut next = word[..start].to_vec();
                    next.extend_from_slice(&w);
                    next.extend_from_slice(&word[end..]);
                    self.reduce_into(&next, &c, memo, &mut acc);
                }
                acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
            }
        };
        memo.insert(word.to_vec(), result.clone());
        result
    }

    /// Normal monomials in lexicographic order, first generator most significant.
    pub fn basis(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for &b in &self.bounds {
            let mut next = Vec::with_capacity(out.len() * b);
            for e in &out {
                for k in 0..b {
                    let mut f = e.clone();
                    f.push(k);
                    next.push(f);
                }
            }
            out = next;
        }
        out
    }

    pub fn word_of(exps: &[usize]) -> Vec<usize> {
        exps.iter().enumerate().flat_map(|(a, &k)| std::iter::repeat(a).take(k)).collect()
    }

    pub fn label(&self, exps: &[usize]) -> String {
        let parts: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(a, &k)| if k == 1 { self.letters[a].clone() } else { format!("{}^{k}", self.letters[a]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// The algebra of a presentation together with its monomial basis.
#[derive(Clone, Debug)]
pub struct Presented<F> {
    pub alg: FinAlgebra<F>,
    pub presentation: Presentation<F>,
    pub monomials: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl<F: Field> Presented<F> {
    pub fn build(name: impl Into<String>, p: Presentation<F>) -> Self {
        let monomials = p.basis();
        let index: HashMap<Vec<usize>, usize> = monomials.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let words: Vec<Vec<usize>> = monomials.iter().map(|e| Presentation::<F>::word_of(e)).collect();
        let mut memo = HashMap::new();
        let mut mult = Vec::with_capacity(monomials.len());
        for wi in &words {
            let mut row = Vec::with_capacity(monomials.len());
            for wj in &words {
                let mut w = wi.clone();
                w.extend_from_slice(wj);
                let mut out = BTreeMap::new();
                p.reduce_into(&w, &F::one(), &mut memo, &mut out);
                let v: SparseVec<F> = out
                    .into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(e, c)| (index[&e], c))
                    .collect();
                row.push(crate::algebra::normalize1(v));
            }
            mult.push(row);
        }
        let labels = monomials.iter().map(|e| p.label(e)).collect();
        let unit = crate::linalg::unit_vector(monomials.len(), 0);
        let gens = (0..p.letters.len())
            .filter(|&a| p.bounds[a] > 1)
            .map(|a| {
                let mut e = vec![0; p.letters.len()];
                e[a] = 1;
                index[&e]
            })
            .collect();
        let alg = FinAlgebra::new(name, labels, mult, unit, Some(gens));
        Presented { alg, presentation: p, monomials, index }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    /// Basis index of the generator `name`, if it is not forced to be 1.
    pub fn generator_index(&self, name: &str) -> Option<usize> {
        let a = self.presentation.letters.iter().position(|l| l == name)?;
        if self.presentation.bounds[a] <= 1 {
            return None;
        }
        let mut e = vec![0; self.presentation.letters.len()];
        e[a] = 1;
        self.index.get(&e).copied()
    }

    pub fn monomial_index(&self, exps: &[usize]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    /// Dense element of a word given by generator names.
    pub fn element(&self, word: &[&str]) -> Vec<F> {
        let w: Vec<usize> = word.iter().map(|s| self.presentation.letter(s)).collect();
        let mut v = vec![F::zero(); self.dim()];
        for (e, c) in self.presentation.normal_form(&w) {
            v[self.index[&e]] += &c;
        }
        v
    }

    /// Extends images of the generators multiplicatively to every monomial.
    /// `images[a]` is the image of generator `a` in `target` (an algebra of
    /// tensors); `mul` multiplies two images.
    pub fn extend_multiplicatively<T: Clone>(&self, one: T, images: &[T], mul: impl Fn(&T, &T) -> T) -> Vec<T> {
        let mut out: Vec<T> = Vec::with_capacity(self.dim());
        for (i, e) in self.monomials.iter().enumerate() {
            if i == 0 {
                out.push(one.clone());
                continue;
            }
            // drop the last letter: the prefix is a smaller normal monomial
            let last = e.iter().rposition(|&k| k > 0).unwrap();
            let mut prefix = e.clone();
            prefix[last] -= 1;
            let pi = self.index[&prefix];
            out.push(mul(&out[pi], &images[last]));
        }
        out
    }

    /// Coaction-like images of every monomial in `left (x) self`.
    pub fn extend_tensor(&self, left: &FinAlgebra<F>, gen_images: &[Tensor2<F>]) -> Vec<Tensor2<F>> {
        let one = normalize2(vec![(0usize, 0usize, F::one())]);
        self.extend_multiplicatively(one, gen_images, |a, b| left.tensor_mul(&self.alg, a, b))
    }

    /// Extends letter values to a multiplicative functional on monomials.
    pub fn multiplicative_functional(&self, values: &[F]) -> Vec<F> {
        self.monomials
            .iter()
            .map(|e| {
                let mut acc = F::one();
                for (a, &k) in e.iter().enumerate() {
                    acc *= &values[a].pow(k as u64);
                }
                acc
            })
            .collect()
    }

    pub fn check(&self) -> Result<()> {
        let fails = self.alg.check_axioms();
        if fails.is_empty() {
            Ok(())
        } else {
            Err(Error::Axiom(format!("{}: {}", self.alg.name, fails[0])))
        }
    }
}

/// `c * word` as a polynomial.
pub fn term<F: Field>(c: F, word: &[usize]) -> (Vec<usize>, F) {
    (word.to_vec(), c)
}
