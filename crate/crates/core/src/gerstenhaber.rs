//! Basis enumeration in the free `2d`-Gerstenhaber algebra on classes
//! `x₁, …, x_n` of degree 0.
//!
//! The free Gerstenhaber algebra is the free graded-commutative algebra on
//! the free shifted Lie algebra spanned by iterated brackets `φ`, where `φ`
//! has degree `2d−1`. After suspending the generators to the odd degree
//! `2d−1` the bracket becomes an ordinary Lie superbracket, so over ℚ the
//! Lie part has the super-Lyndon basis: Lyndon words, plus the squares
//! `[w, w]` of Lyndon words of odd length. A bracket with `k` leaves has
//! degree `(k−1)(2d−1)` after desuspension.
//!
//! The classes of multidegree `(m₁, …, m_n)` span the homology of the stratum
//! `w_λ(ℂᵈ)` where `m_k` counts the parts of `λ` equal to `k`. Note that `d`
//! enters only through the degree unit `2d−1`: the combinatorics is the same
//! for every `d`, which is why the stable tables are periodic in `2d−1`.

use std::fmt;

use crate::error::{Error, Result};

/// A word over the alphabet `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    /// Letter counts, indexed by `letter − 1`, padded to `n`.
    pub fn content(&self, n: usize) -> Vec<u32> {
        let mut out = vec![0; n];
        for &c in &self.0 {
            out[c as usize - 1] += 1;
        }
        out
    }

    /// Strictly smaller than every proper rotation.
    pub fn is_lyndon(&self) -> bool {
        let w = &self.0;
        !w.is_empty()
            && (1..w.len()).all(|r| {
                let rotated = w[r..].iter().chain(&w[..r]);
                w.iter().lt(rotated)
            })
    }

    /// Standard bracketing `w = uv`, `v` the longest proper Lyndon suffix.
    pub fn standard_factorization(&self) -> Option<(Word, Word)> {
        (1..self.len())
            .map(|split| {
                (
                    Word(self.0[..split].to_vec()),
                    Word(self.0[split..].to_vec()),
                )
            })
            .find(|(_, v)| v.is_lyndon())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.0.iter().any(|&c| c >= 10) {
            "."
        } else {
            ""
        };
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(sep))
    }
}

/// Lyndon words over `1..=n` of length at most `max_leaves` whose letter
/// counts stay within `cap` (if given), ordered by length and then
/// lexicographically.
pub fn lyndon_words(n: usize, max_leaves: usize, cap: Option<&[u32]>) -> Vec<Word> {
    if let Some(cap) = cap {
        assert_eq!(cap.len(), n, "cap must have one entry per letter");
    }
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(max_leaves);
    let mut counts = vec![0u32; n];
    extend_prenecklace(n, max_leaves, cap, &mut word, 0, &mut counts, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

// Walks the tree of prenecklaces (prefixes of necklaces): a prenecklace `w`
// with period `p` extends by any letter `c ≥ w[len − p]`, keeping the period
// if `c` equals that letter and taking period `len + 1` otherwise. It is a
// Lyndon word exactly when its period is its length.
fn extend_prenecklace(
    n: usize,
    max_leaves: usize,
    cap: Option<&[u32]>,
    word: &mut Vec<u32>,
    period: usize,
    counts: &mut [u32],
    out: &mut Vec<Word>,
) {
    let len = word.len();
    if len > 0 && period == len {
        out.push(Word(word.clone()));
    }
    if len == max_leaves {
        return;
    }
    let start = if len == 0 { 1 } else { word[len - period] };
    for c in start..=n as u32 {
        let slot = c as usize - 1;
        if cap.is_some_and(|cap| counts[slot] >= cap[slot]) {
            continue;
        }
        let next_period = if len == 0 || c != word[len - period] {
            len + 1
        } else {
            period
        };
        word.push(c);
        counts[slot] += 1;
        extend_prenecklace(n, max_leaves, cap, word, next_period, counts, out);
        counts[slot] -= 1;
        word.pop();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasicKind {
    /// A Lyndon word, bracketed by its standard factorization.
    Lyndon,
    /// `φ(w, w)` for a Lyndon word `w` of odd length.
    Square,
}

/// A basis element of the free shifted Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasicProduct {
    pub kind: BasicKind,
    /// The Lyndon word (for squares, the word being squared).
    pub word: Word,
    pub leaves: u32,
    pub multidegree: Vec<u32>,
    pub degree: u32,
}

impl BasicProduct {
    fn new(kind: BasicKind, word: Word, n: usize, unit: u32) -> Self {
        let factor = match kind {
            BasicKind::Lyndon => 1,
            BasicKind::Square => 2,
        };
        let leaves = factor * word.len() as u32;
        let multidegree = word.content(n).into_iter().map(|c| factor * c).collect();
        Self {
            kind,
            word,
            leaves,
            multidegree,
            degree: (leaves - 1) * unit,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }

    /// The letters spelled out, doubled for squares.
    pub fn spelled(&self) -> Word {
        match self.kind {
            BasicKind::Lyndon => self.word.clone(),
            BasicKind::Square => Word([self.word.0.clone(), self.word.0.clone()].concat()),
        }
    }

    /// Iterated bracket, e.g. `φ(x1,φ(x1,x2))`.
    pub fn bracketing(&self) -> String {
        fn lyndon(w: &Word) -> String {
            match w.standard_factorization() {
                None => format!("x{}", w.0[0]),
                Some((u, v)) => format!("φ({},{})", lyndon(&u), lyndon(&v)),
            }
        }
        match self.kind {
            BasicKind::Lyndon => lyndon(&self.word),
            BasicKind::Square => {
                let inner = lyndon(&self.word);
                format!("φ({inner},{inner})")
            }
        }
    }

    fn sort_key(&self) -> (u32, u32, Word) {
        (self.degree, self.leaves, self.spelled())
    }
}

impl fmt::Display for BasicProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bracketing())
    }
}

fn unit(d: u32) -> Result<u32> {
    if d < 1 {
        return Err(Error::InvalidArgument(format!(
            "d must be at least 1, got {d}"
        )));
    }
    Ok(2 * d - 1)
}

/// Super-Lyndon basis elements whose multidegree fits `cap`, sorted by
/// degree, number of leaves and word.
pub fn basic_products(n: usize, d: u32, cap: &[u32]) -> Result<Vec<BasicProduct>> {
    let max_leaves = cap.iter().sum::<u32>() as usize;
    basic_products_bounded(n, unit(d)?, cap, max_leaves)
}

fn basic_products_bounded(
    n: usize,
    unit: u32,
    cap: &[u32],
    max_leaves: usize,
) -> Result<Vec<BasicProduct>> {
    if n < 1 || cap.len() != n {
        return Err(Error::InvalidArgument(format!(
            "need n ≥ 1 and one cap entry per letter (n = {n}, cap length {})",
            cap.len()
        )));
    }
    let mut out = Vec::new();
    for w in lyndon_words(n, max_leaves, Some(cap)) {
        let odd_length = w.len() % 2 == 1;
        let square_fits = odd_length
            && 2 * w.len() <= max_leaves
            && w.content(n).iter().zip(cap).all(|(c, cap)| 2 * c <= *cap);
        if square_fits {
            out.push(BasicProduct::new(BasicKind::Square, w.clone(), n, unit));
        }
        out.push(BasicProduct::new(BasicKind::Lyndon, w, n, unit));
    }
    out.sort_by_key(BasicProduct::sort_key);
    Ok(out)
}

/// A partition, stored as its multiplicity vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    /// `multiplicities[k − 1]` parts equal to `k`; no trailing zeros.
    multiplicities: Vec<u32>,
}

impl Partition {
    pub fn from_multiplicities(mut multiplicities: Vec<u32>) -> Self {
        while multiplicities.last() == Some(&0) {
            multiplicities.pop();
        }
        Self { multiplicities }
    }

    pub fn from_parts(parts: &[u32]) -> Result<Self> {
        let mut mult = Vec::new();
        for &p in parts {
            if p == 0 {
                return Err(Error::InvalidArgument(
                    "partition parts must be positive".into(),
                ));
            }
            let k = p as usize;
            if mult.len() < k {
                mult.resize(k, 0);
            }
            mult[k - 1] += 1;
        }
        Ok(Self::from_multiplicities(mult))
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn multiplicity(&self, part: u32) -> u32 {
        part.checked_sub(1)
            .and_then(|k| self.multiplicities.get(k as usize))
            .copied()
            .unwrap_or(0)
    }

    /// Parts in increasing order.
    pub fn parts(&self) -> Vec<u32> {
        self.multiplicities
            .iter()
            .enumerate()
            .flat_map(|(k, &m)| std::iter::repeat_n(k as u32 + 1, m as usize))
            .collect()
    }

    pub fn largest_part(&self) -> u32 {
        self.multiplicities.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.multiplicities.is_empty()
    }

    /// Number of parts.
    pub fn len(&self) -> u32 {
        self.multiplicities.iter().sum()
    }

    /// The integer being partitioned.
    pub fn size(&self) -> u32 {
        self.multiplicities
            .iter()
            .enumerate()
            .map(|(k, &m)| (k as u32 + 1) * m)
            .sum()
    }

    /// `1ʲ λ`: `j` more parts equal to 1.
    pub fn with_extra_ones(&self, j: u32) -> Self {
        let mut mult = self.multiplicities.clone();
        if mult.is_empty() {
            mult.push(0);
        }
        mult[0] += j;
        Self::from_multiplicities(mult)
    }

    /// The same partition with exactly `j` parts equal to 1.
    pub fn with_ones(&self, j: u32) -> Self {
        self.without_ones().with_extra_ones(j)
    }

    pub fn without_ones(&self) -> Self {
        let mut mult = self.multiplicities.clone();
        if let Some(first) = mult.first_mut() {
            *first = 0;
        }
        Self::from_multiplicities(mult)
    }
}

/// Canonical form such as `1^3 2`; the empty partition renders as `""`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> = self
            .multiplicities
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(k, &m)| {
                if m == 1 {
                    format!("{}", k + 1)
                } else {
                    format!("{}^{m}", k + 1)
                }
            })
            .collect();
        f.write_str(&tokens.join(" "))
    }
}

/// A commutative monomial in basic products.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StratumMonomial {
    pub factors: Vec<(BasicProduct, u32)>,
    pub multidegree: Vec<u32>,
    pub degree: u32,
}

impl fmt::Display for StratumMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(b, e)| {
                if *e == 1 {
                    b.to_string()
                } else {
                    format!("{b}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join("·"))
    }
}

type Visitor<'a> = dyn FnMut(&[(usize, u32)], &[u32]) + 'a;

/// Enumerates monomials of exact multidegree `cap` and degree at most
/// `max_degree`. Single letters have degree 0 and are filled in last, so
/// each choice of positive-degree factors gives exactly one monomial.
struct Enumerator {
    letters: Vec<usize>,
    positive: Vec<usize>,
    products: Vec<BasicProduct>,
}

impl Enumerator {
    fn new(lambda: &Partition, d: u32, max_degree: u32) -> Result<(Self, Vec<u32>)> {
        if lambda.is_empty() {
            return Err(Error::InvalidArgument(
                "the partition must be nonempty".into(),
            ));
        }
        let unit = unit(d)?;
        let cap = lambda.multiplicities().to_vec();
        let n = cap.len();
        let total: u32 = cap.iter().sum();
        let max_leaves = (max_degree / unit + 1).min(total) as usize;
        let products = basic_products_bounded(n, unit, &cap, max_leaves)?;
        let (letters, positive) = (0..products.len()).partition(|&i| products[i].leaves == 1);
        Ok((
            Self {
                letters,
                positive,
                products,
            },
            cap,
        ))
    }

    fn walk(
        &self,
        at: usize,
        remaining: &mut [u32],
        budget: u32,
        chosen: &mut Vec<(usize, u32)>,
        visit: &mut Visitor<'_>,
    ) {
        if at == self.positive.len() {
            visit(chosen, remaining);
            return;
        }
        let idx = self.positive[at];
        let b = &self.products[idx];
        let mut max_exp = budget / b.degree;
        for (r, m) in remaining.iter().zip(&b.multidegree) {
            if *m > 0 {
                max_exp = max_exp.min(r / m);
            }
        }
        if b.is_odd() {
            max_exp = max_exp.min(1);
        }
        self.walk(at + 1, remaining, budget, chosen, visit);
        for e in 1..=max_exp {
            for (r, m) in remaining.iter_mut().zip(&b.multidegree) {
                *r -= m;
            }
            chosen.push((idx, e));
            self.walk(at + 1, remaining, budget - e * b.degree, chosen, visit);
            chosen.pop();
        }
        for (r, m) in remaining.iter_mut().zip(&b.multidegree) {
            *r += max_exp * m;
        }
    }

    fn run(&self, cap: &[u32], max_degree: u32, visit: &mut Visitor<'_>) {
        let mut remaining = cap.to_vec();
        let mut chosen = Vec::new();
        self.walk(0, &mut remaining, max_degree, &mut chosen, visit);
    }

    fn degree_of(&self, chosen: &[(usize, u32)]) -> u32 {
        chosen
            .iter()
            .map(|&(i, e)| e * self.products[i].degree)
            .sum()
    }

    /// Full factor list: left-over letters plus the chosen products, in
    /// canonical product order.
    fn factors(&self, chosen: &[(usize, u32)], remaining: &[u32]) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = self
            .letters
            .iter()
            .filter_map(|&i| {
                let letter = self.products[i].word.0[0] as usize;
                let e = remaining[letter - 1];
                (e > 0).then_some((i, e))
            })
            .collect();
        out.extend_from_slice(chosen);
        out.sort_unstable();
        out
    }
}

fn assert_exponent_parity(products: &[BasicProduct], factors: &[(usize, u32)]) {
    for &(i, e) in factors {
        assert!(
            !products[i].is_odd() || e == 1,
            "odd basic product {} with exponent {e}",
            products[i]
        );
    }
}

/// Basis of `H_*(w_λ(ℂᵈ); ℚ)` up to `max_degree`: all monomials of
/// multidegree exactly the multiplicity vector of `λ`. Sorted by degree,
/// then by exponent vector (descending lexicographic in basic-product order).
pub fn stratum_basis(lambda: &Partition, d: u32, max_degree: u32) -> Result<Vec<StratumMonomial>> {
    let (en, cap) = Enumerator::new(lambda, d, max_degree)?;
    let mut found: Vec<(u32, Vec<(usize, u32)>)> = Vec::new();
    en.run(&cap, max_degree, &mut |chosen, remaining| {
        let factors = en.factors(chosen, remaining);
        assert_exponent_parity(&en.products, &factors);
        found.push((en.degree_of(chosen), factors));
    });
    found.sort_by(|(da, fa), (db, fb)| {
        da.cmp(db).then_with(|| {
            // descending lexicographic on sparse exponent vectors
            for (x, y) in fa.iter().zip(fb) {
                if x.0 != y.0 {
                    return x.0.cmp(&y.0);
                }
                if x.1 != y.1 {
                    return y.1.cmp(&x.1);
                }
            }
            fb.len().cmp(&fa.len())
        })
    });
    Ok(found
        .into_iter()
        .map(|(degree, factors)| StratumMonomial {
            factors: factors
                .iter()
                .map(|&(i, e)| (en.products[i].clone(), e))
                .collect(),
            multidegree: cap.clone(),
            degree,
        })
        .collect())
}

/// Dimensions of `H_i(w_λ(ℂᵈ); ℚ)` for `i ≤ max_degree`.
pub fn stratum_betti_table(lambda: &Partition, d: u32, max_degree: u32) -> Result<Vec<(u32, u64)>> {
    let (en, cap) = Enumerator::new(lambda, d, max_degree)?;
    let mut counts = vec![0u64; max_degree as usize + 1];
    en.run(&cap, max_degree, &mut |chosen, _| {
        assert_exponent_parity(&en.products, chosen);
        counts[en.degree_of(chosen) as usize] += 1;
    });
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| (i as u32, c))
        .collect())
}

/// Number of extra ones that makes every degree `≤ max_degree` stable.
///
/// A positive-degree basic product uses at most one `x₁` per unit of
/// `2d−1` in its degree, except `φ(x₁,x₁)` which uses two but may occur
/// only once, so `max_degree + 2` ones always suffice.
pub fn stable_ones(max_degree: u32) -> u32 {
    max_degree + 2
}

/// Stable table `colim_j H_i(w_{1ʲ tail}(ℂᵈ); ℚ)` for `i ≤ max_degree`.
pub fn stable_stratum_betti(tail: &Partition, d: u32, max_degree: u32) -> Result<Vec<(u32, u64)>> {
    stratum_betti_table(
        &tail.with_extra_ones(stable_ones(max_degree)),
        d,
        max_degree,
    )
}
