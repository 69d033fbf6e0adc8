//! Hochschild cochains: multilinear maps on reduced words, evaluated lazily.
//!
//! A cochain of shifted parity `p` sends basis inputs `a_1..a_k` to outputs of shifted degree
//! `Σ|a_i|' + p`. The structure maps `m` have `p = 1`.

use std::collections::BTreeMap;

use rand::Rng;

use super::algebra::AInftyAlgebra;
use super::ring::{compositions, sign, split, Mono, Vector};
use crate::scalar::Scalar;

/// A Hochschild cochain that can be evaluated on basis words.
pub trait Cochain: Sync {
    /// Shifted parity `|φ|'` mod 2.
    fn shifted_parity(&self) -> u8;

    /// `φ(a_1, …, a_k)` on basis inputs.
    fn eval(&self, alg: &AInftyAlgebra, args: &[usize]) -> Vector;

    /// Unshifted parity `|φ| = |φ|' + 1`.
    fn parity(&self) -> u8 {
        (self.shifted_parity() + 1) % 2
    }
}

/// Explicit table of values on basis words; missing words map to zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TableCochain {
    shifted_parity: u8,
    entries: BTreeMap<Vec<usize>, Vector>,
}

impl TableCochain {
    pub fn new(shifted_parity: u8) -> Self {
        TableCochain {
            shifted_parity: shifted_parity % 2,
            entries: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, inputs: Vec<usize>, value: Vector) {
        if value.is_zero() {
            self.entries.remove(&inputs);
        } else {
            self.entries.insert(inputs, value);
        }
    }

    pub fn add(&mut self, inputs: Vec<usize>, value: &Vector) {
        let mut current = self.entries.remove(&inputs).unwrap_or_default();
        current.add(value);
        self.set(inputs, current);
    }

    pub fn get(&self, inputs: &[usize]) -> Option<&Vector> {
        self.entries.get(inputs)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vector)> {
        self.entries.iter()
    }

    pub fn max_arity(&self) -> usize {
        self.entries.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rebuild every entry through `f(inputs, value)`.
    pub fn map_entries(&self, shifted_parity: u8, f: impl Fn(&[usize], &Vector) -> Vector) -> Self {
        let mut out = TableCochain::new(shifted_parity);
        for (inputs, value) in &self.entries {
            out.set(inputs.clone(), f(inputs, value));
        }
        out
    }

    /// Tabulate any cochain on all words of arity ≤ `max_arity` drawn from `inputs`.
    pub fn tabulate(alg: &AInftyAlgebra, phi: &dyn Cochain, inputs: &[usize], max_arity: usize) -> Self {
        let mut out = TableCochain::new(phi.shifted_parity());
        for word in words_over(inputs, max_arity) {
            let value = phi.eval(alg, &word);
            out.set(word, value);
        }
        out
    }
}

impl Cochain for TableCochain {
    fn shifted_parity(&self) -> u8 {
        self.shifted_parity
    }

    fn eval(&self, _alg: &AInftyAlgebra, args: &[usize]) -> Vector {
        self.entries.get(args).cloned().unwrap_or_default()
    }
}

/// All words of length ≤ `max_len` over `letters`, shortest first.
pub fn words_over(letters: &[usize], max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * letters.len());
        for w in &layer {
            for &l in letters {
                let mut w2 = w.clone();
                w2.push(l);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// One input slot of a multilinear evaluation.
#[derive(Clone, Copy, Debug)]
pub enum Slot<'a> {
    Basis(usize),
    Vector(&'a Vector),
}

/// Evaluate `φ` multilinearly on slots that may hold module elements. The ring is even, so
/// coefficients move to the front without signs.
pub fn eval_slots(alg: &AInftyAlgebra, phi: &dyn Cochain, slots: &[Slot<'_>]) -> Vector {
    let mut out = Vector::new();
    let mut word = Vec::with_capacity(slots.len());
    expand(alg, phi, slots, &mut word, Mono::ONE, Scalar::int(1), &mut out);
    out
}

fn expand(
    alg: &AInftyAlgebra,
    phi: &dyn Cochain,
    slots: &[Slot<'_>],
    word: &mut Vec<usize>,
    mono: Mono,
    coeff: Scalar,
    out: &mut Vector,
) {
    let Some((first, rest)) = slots.split_first() else {
        for ((b, m), c) in phi.eval(alg, word).iter() {
            if let Some(m2) = m.mul(mono, alg.t_order()) {
                out.add_term((*b, m2), c * &coeff);
            }
        }
        return;
    };
    match first {
        Slot::Basis(a) => {
            word.push(*a);
            expand(alg, phi, rest, word, mono, coeff, out);
            word.pop();
        }
        Slot::Vector(v) => {
            for ((a, m), c) in v.iter() {
                let Some(m2) = m.mul(mono, alg.t_order()) else {
                    continue;
                };
                word.push(*a);
                expand(alg, phi, rest, word, m2, &coeff * c, out);
                word.pop();
            }
        }
    }
}

/// Gerstenhaber composition `φ∘ψ` or bracket `[φ,ψ] = φ∘ψ − (−1)^{|φ|'|ψ|'} ψ∘φ`.
pub struct Gerstenhaber<'a> {
    pub phi: &'a dyn Cochain,
    pub psi: &'a dyn Cochain,
    pub bracket: bool,
}

/// `φ∘ψ(α) = Σ (−1)^{|ψ|'ε₁} φ(α⁽¹⁾ ⊗ ψ(α⁽²⁾) ⊗ α⁽³⁾)`.
pub fn compose_eval(alg: &AInftyAlgebra, phi: &dyn Cochain, psi: &dyn Cochain, args: &[usize]) -> Vector {
    let mut out = Vector::new();
    let psi_par = psi.shifted_parity() as u32;
    for sizes in compositions(args.len(), 3) {
        let parts = split(args, &sizes);
        let inner = psi.eval(alg, parts[1]);
        if inner.is_zero() {
            continue;
        }
        let eps1 = alg.eps(parts[0]);
        let mut slots: Vec<Slot<'_>> = parts[0].iter().map(|&a| Slot::Basis(a)).collect();
        slots.push(Slot::Vector(&inner));
        slots.extend(parts[2].iter().map(|&a| Slot::Basis(a)));
        out.add_scaled(&eval_slots(alg, phi, &slots), &sign(psi_par * eps1));
    }
    out
}

impl Cochain for Gerstenhaber<'_> {
    fn shifted_parity(&self) -> u8 {
        (self.phi.shifted_parity() + self.psi.shifted_parity()) % 2
    }

    fn eval(&self, alg: &AInftyAlgebra, args: &[usize]) -> Vector {
        let mut out = compose_eval(alg, self.phi, self.psi, args);
        if self.bracket {
            let s = (self.phi.shifted_parity() as u32) * (self.psi.shifted_parity() as u32);
            out.add_scaled(&compose_eval(alg, self.psi, self.phi, args), &-sign(s));
        }
        out
    }
}

/// Gerstenhaber bracket `[φ,ψ]` as a lazy cochain.
pub fn bracket<'a>(phi: &'a dyn Cochain, psi: &'a dyn Cochain) -> Gerstenhaber<'a> {
    Gerstenhaber {
        phi,
        psi,
        bracket: true,
    }
}

/// Cup product `ψ∪φ = (−1)^{|ψ|} M²(ψ,φ)`, where
/// `M²(ψ,φ)(α) = Σ (−1)^{|ψ|'ε₁ + |φ|'(ε₁+ε₂+ε₃)} m(α⁽¹⁾ ⊗ ψ(α⁽²⁾) ⊗ α⁽³⁾ ⊗ φ(α⁽⁴⁾) ⊗ α⁽⁵⁾)`.
pub struct Cup<'a> {
    pub left: &'a dyn Cochain,
    pub right: &'a dyn Cochain,
}

impl Cochain for Cup<'_> {
    fn shifted_parity(&self) -> u8 {
        (self.left.shifted_parity() + self.right.shifted_parity() + 1) % 2
    }

    fn eval(&self, alg: &AInftyAlgebra, args: &[usize]) -> Vector {
        let lp = self.left.shifted_parity() as u32;
        let rp = self.right.shifted_parity() as u32;
        let mut out = Vector::new();
        for sizes in compositions(args.len(), 5) {
            let parts = split(args, &sizes);
            let first = self.left.eval(alg, parts[1]);
            if first.is_zero() {
                continue;
            }
            let second = self.right.eval(alg, parts[3]);
            if second.is_zero() {
                continue;
            }
            let (e1, e2, e3) = (alg.eps(parts[0]), alg.eps(parts[1]), alg.eps(parts[2]));
            let mut slots: Vec<Slot<'_>> = parts[0].iter().map(|&a| Slot::Basis(a)).collect();
            slots.push(Slot::Vector(&first));
            slots.extend(parts[2].iter().map(|&a| Slot::Basis(a)));
            slots.push(Slot::Vector(&second));
            slots.extend(parts[4].iter().map(|&a| Slot::Basis(a)));
            let s = lp * e1 + rp * (e1 + e2 + e3);
            out.add_scaled(&eval_slots(alg, alg.ops(), &slots), &sign(s));
        }
        let left_parity = (lp + 1) % 2;
        out.scaled(&sign(left_parity))
    }
}

/// `c·φ` for a scalar `c`.
pub struct Scaled<'a> {
    pub inner: &'a dyn Cochain,
    pub factor: Scalar,
}

impl Cochain for Scaled<'_> {
    fn shifted_parity(&self) -> u8 {
        self.inner.shifted_parity()
    }

    fn eval(&self, alg: &AInftyAlgebra, args: &[usize]) -> Vector {
        self.inner.eval(alg, args).scaled(&self.factor)
    }
}

/// `φ + ψ` for cochains of equal parity.
pub struct Sum<'a> {
    pub terms: Vec<&'a dyn Cochain>,
}

impl Cochain for Sum<'_> {
    fn shifted_parity(&self) -> u8 {
        self.terms.first().map_or(0, |t| t.shifted_parity())
    }

    fn eval(&self, alg: &AInftyAlgebra, args: &[usize]) -> Vector {
        let mut out = Vector::new();
        for t in &self.terms {
            out.add(&t.eval(alg, args));
        }
        out
    }
}

/// The zero cochain of a given parity.
pub struct Zero(pub u8);

impl Cochain for Zero {
    fn shifted_parity(&self) -> u8 {
        self.0
    }

    fn eval(&self, _alg: &AInftyAlgebra, _args: &[usize]) -> Vector {
        Vector::new()
    }
}

/// Arity-indexed rescaling `φ_k ↦ f(k)·φ_k` of a table.
pub fn arity_weighted(table: &TableCochain, f: impl Fn(usize) -> i64) -> TableCochain {
    table.map_entries(table.shifted_parity(), |inputs, v| {
        v.scaled(&Scalar::int(f(inputs.len())))
    })
}

/// `m' = Σ (2−k) m_k`.
pub fn m_prime(alg: &AInftyAlgebra) -> TableCochain {
    arity_weighted(alg.ops(), |k| 2 - k as i64)
}

/// The parity operator `a ↦ |a| a` as an even length-one cochain.
pub fn parity_operator(alg: &AInftyAlgebra) -> TableCochain {
    let mut out = TableCochain::new(0);
    for a in 0..alg.dim() {
        if alg.degree(a) == 1 {
            out.set(vec![a], Vector::single((a, Mono::ONE), Scalar::int(1)));
        }
    }
    out
}

/// Coefficientwise `∂_t` of a table, landing in K[t]/(t^{M−1}).
pub fn t_derivative(table: &TableCochain, t_order: u32) -> TableCochain {
    table.map_entries(table.shifted_parity(), |_, v| {
        v.map_keys(|(b, m)| {
            (m.t >= 1 && m.t < t_order).then(|| ((*b, Mono { t: m.t - 1, e: m.e }), Scalar::int(m.t as i64)))
        })
    })
}

/// A random normalized cochain of the given shifted parity: values on reduced words of arity
/// ≤ `max_arity`, each nonzero with probability `density`.
pub fn random_cochain(
    alg: &AInftyAlgebra,
    rng: &mut impl Rng,
    shifted_parity: u8,
    max_arity: usize,
    density: f64,
) -> TableCochain {
    let letters = alg.reduced_basis();
    let mut out = TableCochain::new(shifted_parity);
    for word in words_over(&letters, max_arity) {
        if !rng.gen_bool(density) {
            continue;
        }
        let target = (alg.eps(&word) + shifted_parity as u32 + 1) % 2;
        let mut value = Vector::new();
        for b in 0..alg.dim() {
            if alg.degree(b) as u32 != target || !rng.gen_bool(0.6) {
                continue;
            }
            let t = rng.gen_range(0..alg.t_order());
            let c = rng.gen_range(-3i64..=3);
            value.add_term((b, Mono::t_pow(t)), Scalar::int(c));
        }
        out.set(word, value);
    }
    out
}
