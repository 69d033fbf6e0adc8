//! Reduced Hochschild chains `α₀[α₁|…|α_k]` with coefficients in K[t]/(t^M)[e^±][u^±], and the
//! chain-level operators acting on them.
//!
//! Operator parities with respect to the chain degree `|α₀| + Σ|α_i|'`: `b`, `B` odd; `L_φ` has
//! parity `|φ|'`; `b^{1,1}(φ,·)`, `B^{1,1}(φ,·)` and `i{φ}` have parity `|φ|' + 1`; `Γ`, `u∂_u`,
//! `Gr⁻` and the connections are even.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use super::algebra::AInftyAlgebra;
use super::cochain::{eval_slots, m_prime, parity_operator, Cochain, Slot, TableCochain};
use super::ring::{compositions, sign, split, Lin, Mono, Vector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One basis term `u^u · t^t e^e · α₀[α₁|…|α_k]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ChainKey {
    pub u: i32,
    pub mono: Mono,
    pub word: Vec<usize>,
}

/// A finite combination of reduced words.
pub type Chain = Lin<ChainKey>;

type WordOut = Lin<(Mono, Vec<usize>)>;

impl ChainKey {
    pub fn new(word: Vec<usize>) -> Self {
        ChainKey {
            u: 0,
            mono: Mono::ONE,
            word,
        }
    }

    pub fn length(&self) -> usize {
        self.word.len().saturating_sub(1)
    }
}

/// Build a chain from a single word with coefficient one.
pub fn word_chain(word: Vec<usize>) -> Chain {
    Chain::single(ChainKey::new(word), Scalar::int(1))
}

fn reduced_word(alg: &AInftyAlgebra, word: &[usize]) -> bool {
    word.iter().skip(1).all(|&a| a != alg.unit_index())
}

/// Apply a word-level operator that raises the u-power by `du`.
fn lift(alg: &AInftyAlgebra, chain: &Chain, du: i32, f: impl Fn(&[usize]) -> WordOut) -> Chain {
    let mut out = Chain::new();
    for (key, c) in chain.iter() {
        for ((m, w), c2) in f(&key.word).iter() {
            if let Some(mm) = key.mono.mul(*m, alg.t_order()) {
                out.add_term(
                    ChainKey {
                        u: key.u + du,
                        mono: mm,
                        word: w.clone(),
                    },
                    c * c2,
                );
            }
        }
    }
    out
}

fn push_vector_head(alg: &AInftyAlgebra, out: &mut WordOut, head: &Vector, tail: &[usize], s: &Scalar) {
    for ((b, m), c) in head.iter() {
        let mut w = Vec::with_capacity(tail.len() + 1);
        w.push(*b);
        w.extend_from_slice(tail);
        if reduced_word(alg, &w) {
            out.add_term((*m, w), c * s);
        }
    }
}

/// Words `α₀[α⁽¹⁾ | v | α⁽³⁾]` for each basis term of `v`, dropping unit slots.
fn push_vector_slot(
    alg: &AInftyAlgebra,
    out: &mut WordOut,
    prefix: &[usize],
    slot: &Vector,
    suffix: &[usize],
    s: &Scalar,
) {
    for ((b, m), c) in slot.iter() {
        if *b == alg.unit_index() {
            continue;
        }
        let mut w = Vec::with_capacity(prefix.len() + suffix.len() + 1);
        w.extend_from_slice(prefix);
        w.push(*b);
        w.extend_from_slice(suffix);
        out.add_term((*m, w), c * s);
    }
}

fn basis_slots<'a>(word: &[usize]) -> impl Iterator<Item = Slot<'a>> + '_ {
    word.iter().map(|&a| Slot::Basis(a))
}

/// Word-level Lie derivative; with `φ = m` this is the Hochschild differential.
fn lie_word(alg: &AInftyAlgebra, phi: &dyn Cochain, word: &[usize]) -> WordOut {
    let mut out = WordOut::new();
    let (a0, rest) = (word[0], &word[1..]);
    let s0 = alg.shifted(a0);
    let p = phi.shifted_parity() as u32;
    for sizes in compositions(rest.len(), 3) {
        let parts = split(rest, &sizes);
        let (e1, e2, e3) = (alg.eps(parts[0]), alg.eps(parts[1]), alg.eps(parts[2]));
        // φ(α⁽³⁾ ⊗ α₀ ⊗ α⁽¹⁾)[α⁽²⁾]
        let mut args: Vec<usize> = parts[2].to_vec();
        args.push(a0);
        args.extend_from_slice(parts[0]);
        let head = phi.eval(alg, &args);
        push_vector_head(alg, &mut out, &head, parts[1], &sign(e3 * (e2 + e1 + s0)));
        // α₀[α⁽¹⁾ | φ(α⁽²⁾) | α⁽³⁾]
        let inner = phi.eval(alg, parts[1]);
        let mut prefix = vec![a0];
        prefix.extend_from_slice(parts[0]);
        push_vector_slot(alg, &mut out, &prefix, &inner, parts[2], &sign(p * (e1 + s0)));
    }
    out
}

/// Hochschild differential `b`.
pub fn hochschild_b(alg: &AInftyAlgebra, chain: &Chain) -> Chain {
    lift(alg, chain, 0, |w| lie_word(alg, alg.ops(), w))
}

/// Lie derivative `L_φ`.
pub fn lie_derivative(alg: &AInftyAlgebra, phi: &dyn Cochain, chain: &Chain) -> Chain {
    lift(alg, chain, 0, |w| lie_word(alg, phi, w))
}

/// Connes operator `B(α) = Σ (−1)^{ε₂(|α₀|'+ε₁)} e[α⁽²⁾ | α₀ | α⁽¹⁾]`.
pub fn connes_b(alg: &AInftyAlgebra, chain: &Chain) -> Chain {
    lift(alg, chain, 0, |word| {
        let mut out = WordOut::new();
        let (a0, rest) = (word[0], &word[1..]);
        if a0 == alg.unit_index() {
            return out;
        }
        let us = Scalar::int(alg.unit_sign() as i64);
        for sizes in compositions(rest.len(), 2) {
            let parts = split(rest, &sizes);
            let (e1, e2) = (alg.eps(parts[0]), alg.eps(parts[1]));
            let mut w = vec![alg.unit_index()];
            w.extend_from_slice(parts[1]);
            w.push(a0);
            w.extend_from_slice(parts[0]);
            out.add_term((Mono::ONE, w), &us * &sign(e2 * (alg.shifted(a0) + e1)));
        }
        out
    })
}

/// `b^{1,1}(φ; α) = Σ (−1)^† m(α⁽³⁾ ⊗ φ(α⁽⁴⁾) ⊗ α⁽⁵⁾ ⊗ α₀ ⊗ α⁽¹⁾)[α⁽²⁾]`,
/// `† = (ε₃+ε₄+ε₅)(|α₀|'+ε₁+ε₂) + |φ|'ε₃`.
pub fn b11(alg: &AInftyAlgebra, phi: &dyn Cochain, chain: &Chain) -> Chain {
    let p = phi.shifted_parity() as u32;
    lift(alg, chain, 0, |word| {
        let mut out = WordOut::new();
        let (a0, rest) = (word[0], &word[1..]);
        let s0 = alg.shifted(a0);
        for sizes in compositions(rest.len(), 5) {
            let parts = split(rest, &sizes);
            let inner = phi.eval(alg, parts[3]);
            if inner.is_zero() {
                continue;
            }
            let e: Vec<u32> = parts.iter().map(|x| alg.eps(x)).collect();
            let dagger = (e[2] + e[3] + e[4]) * (s0 + e[0] + e[1]) + p * e[2];
            let mut slots: Vec<Slot<'_>> = basis_slots(parts[2]).collect();
            slots.push(Slot::Vector(&inner));
            slots.extend(basis_slots(parts[4]));
            slots.push(Slot::Basis(a0));
            slots.extend(basis_slots(parts[0]));
            let head = eval_slots(alg, alg.ops(), &slots);
            push_vector_head(alg, &mut out, &head, parts[1], &sign(dagger));
        }
        out
    })
}

/// `B^{1,1}(φ; α) = Σ (−1)^{|φ|'ε₂ + (ε₁+|α₀|')(ε₂+ε₃+ε₄)} e[α⁽²⁾ | φ(α⁽³⁾) | α⁽⁴⁾ | α₀ | α⁽¹⁾]`.
pub fn big_b11(alg: &AInftyAlgebra, phi: &dyn Cochain, chain: &Chain) -> Chain {
    let p = phi.shifted_parity() as u32;
    lift(alg, chain, 0, |word| {
        let mut out = WordOut::new();
        let (a0, rest) = (word[0], &word[1..]);
        if a0 == alg.unit_index() {
            return out;
        }
        let s0 = alg.shifted(a0);
        let us = Scalar::int(alg.unit_sign() as i64);
        for sizes in compositions(rest.len(), 4) {
            let parts = split(rest, &sizes);
            let inner = phi.eval(alg, parts[2]);
            if inner.is_zero() {
                continue;
            }
            let e: Vec<u32> = parts.iter().map(|x| alg.eps(x)).collect();
            let s = p * e[1] + (e[0] + s0) * (e[1] + e[2] + e[3]);
            let mut prefix = vec![alg.unit_index()];
            prefix.extend_from_slice(parts[1]);
            let mut suffix = parts[3].to_vec();
            suffix.push(a0);
            suffix.extend_from_slice(parts[0]);
            push_vector_slot(alg, &mut out, &prefix, &inner, &suffix, &(&us * &sign(s)));
        }
        out
    })
}

/// `i{φ} = b^{1,1}(φ,·) + u B^{1,1}(φ,·)`.
pub fn i_op(alg: &AInftyAlgebra, phi: &dyn Cochain, chain: &Chain) -> Chain {
    let mut out = b11(alg, phi, chain);
    out.add(&shift_u(&big_b11(alg, phi, chain), 1));
    out
}

/// Cap product `φ ∩ α = (−1)^{|φ|} b^{1,1}(φ, α)`.
pub fn cap(alg: &AInftyAlgebra, phi: &dyn Cochain, chain: &Chain) -> Chain {
    b11(alg, phi, chain).scaled(&sign(phi.parity() as u32))
}

/// `b + uB`.
pub fn b_plus_ub(alg: &AInftyAlgebra, chain: &Chain) -> Chain {
    let mut out = hochschild_b(alg, chain);
    out.add(&shift_u(&connes_b(alg, chain), 1));
    out
}

/// Multiply by `u^k`.
pub fn shift_u(chain: &Chain, k: i32) -> Chain {
    chain.map_keys(|key| {
        Some((
            ChainKey {
                u: key.u + k,
                ..key.clone()
            },
            Scalar::int(1),
        ))
    })
}

/// Length operator `Γ(α₀[α₁|…|α_k]) = −k α₀[α₁|…|α_k]`.
pub fn length_gamma(chain: &Chain) -> Chain {
    chain.map_keys(|key| Some((key.clone(), Scalar::int(-(key.length() as i64)))))
}

/// `∂_u` on coefficients.
pub fn u_derivative(chain: &Chain) -> Chain {
    chain.map_keys(|key| {
        (key.u != 0).then(|| {
            (
                ChainKey {
                    u: key.u - 1,
                    ..key.clone()
                },
                Scalar::int(key.u as i64),
            )
        })
    })
}

/// `u∂_u` on coefficients.
pub fn u_euler(chain: &Chain) -> Chain {
    chain.map_keys(|key| Some((key.clone(), Scalar::int(key.u as i64))))
}

/// `∂_t` on coefficients, landing in K[t]/(t^{M−1}).
pub fn t_derivative(alg: &AInftyAlgebra, chain: &Chain) -> Chain {
    let top = alg.t_order().saturating_sub(1);
    chain.map_keys(|key| {
        (key.mono.t >= 1 && key.mono.t <= top).then(|| {
            (
                ChainKey {
                    mono: Mono {
                        t: key.mono.t - 1,
                        e: key.mono.e,
                    },
                    ..key.clone()
                },
                Scalar::int(key.mono.t as i64),
            )
        })
    })
}

/// Reduce coefficients modulo `t^order`.
pub fn truncate_t(chain: &Chain, order: u32) -> Chain {
    chain.filtered(|key| key.mono.t < order)
}

/// `Gr⁻ = L_{Gr} + Γ + 2u∂_u`, with `L_{Gr}(fα) = 2E(f)α + f L_{Gr}(α)`.
pub fn gr_minus(alg: &AInftyAlgebra, chain: &Chain) -> Result<Chain> {
    let eg = alg.euler().ok_or(Error::MissingGrading)?;
    let mut out = lie_derivative(alg, &eg.gr, chain);
    out.add(&chain.map_keys(|key| Some((key.clone(), Scalar::int(2) * eg.weight(key.mono)))));
    out.add(&length_gamma(chain));
    out.add(&u_euler(chain).scaled(&Scalar::int(2)));
    Ok(out)
}

/// Getzler–Gauss–Manin connection along `∂_t`: `∇(α) = ∂_t α − u⁻¹ i{∂_t m}(α)`, mod `t^{M−1}`.
pub fn ggm_connection(alg: &AInftyAlgebra, chain: &Chain) -> Chain {
    let dm = super::cochain::t_derivative(alg.ops(), alg.t_order());
    let mut out = t_derivative(alg, chain);
    out.sub(&shift_u(&i_op(alg, &dm, chain), -1));
    truncate_t(&out, alg.t_order().saturating_sub(1))
}

/// Canonical u-connection `∇_{∂u} = ∂_u + Γ/2u + i{m'}/2u²`.
pub fn u_connection(alg: &AInftyAlgebra, chain: &Chain) -> Chain {
    let mp = m_prime(alg);
    let half = Scalar::frac(1, 2);
    let mut out = u_derivative(chain);
    out.add(&shift_u(&length_gamma(chain), -1).scaled(&half));
    out.add(&shift_u(&i_op(alg, &mp, chain), -2).scaled(&half));
    out
}

/// The cochain `E(m)` of the `𝓒^e` deformation restricted to `e = 1`:
/// `m_k ↦ ((2 − k − |m_k(a)| + Σ|a_i|)/2)·m_k` termwise.
pub fn euler_weighted_ops(alg: &AInftyAlgebra) -> Result<TableCochain> {
    let mut table = TableCochain::new(1);
    for (inputs, v) in alg.ops().entries() {
        let input_deg: i64 = inputs.iter().map(|&a| alg.degree(a) as i64).sum();
        let mut weighted = Vector::new();
        for ((b, m), c) in v.iter() {
            let x = 2 - inputs.len() as i64 - alg.degree(*b) as i64 + input_deg;
            if x % 2 != 0 {
                return Err(Error::OddParityViolation(format!(
                    "odd e-exponent on {:?}",
                    alg.word_labels(inputs)
                )));
            }
            weighted.add_term((*b, *m), c * &Scalar::int(x / 2));
        }
        table.set(inputs.clone(), weighted);
    }
    Ok(table)
}

/// u-connection induced by the Euler grading of `𝓒^e` at `e = 1`:
/// `∂_u + (Γ + L_{deg})/2u + i{E(m)}/u²` with `deg` the parity operator.
pub fn euler_u_connection(alg: &AInftyAlgebra, chain: &Chain) -> Result<Chain> {
    let em = euler_weighted_ops(alg)?;
    let deg = parity_operator(alg);
    let half = Scalar::frac(1, 2);
    let mut first = length_gamma(chain);
    first.add(&lie_derivative(alg, &deg, chain));
    let mut out = u_derivative(chain);
    out.add(&shift_u(&first, -1).scaled(&half));
    out.add(&shift_u(&i_op(alg, &em, chain), -2));
    Ok(out)
}

/// Chain-level pairing `(φ, α) = (−1)^{|α₀|(ε(α̃)+1)} ⟨φ(α₁…α_k), α₀⟩`, valued in the coefficient
/// ring with the chain's u-powers kept.
pub fn pairing(alg: &AInftyAlgebra, phi: &dyn Cochain, chain: &Chain) -> Lin<(i32, Mono)> {
    let mut out = Lin::new();
    for (key, c) in chain.iter() {
        let (a0, rest) = (key.word[0], &key.word[1..]);
        let value = phi.eval(alg, rest);
        if value.is_zero() {
            continue;
        }
        let head = Vector::single((a0, Mono::ONE), Scalar::int(1));
        let s = sign(alg.degree(a0) as u32 * (alg.eps(rest) + 1));
        for (m, v) in alg.pair(&value, &head).iter() {
            if let Some(mm) = m.mul(key.mono, alg.t_order()) {
                out.add_term((key.u, mm), &(c * v) * &s);
            }
        }
    }
    out
}

/// Largest word length present.
pub fn max_length(chain: &Chain) -> usize {
    chain.iter().map(|(k, _)| k.length()).max().unwrap_or(0)
}

/// A random reduced chain of `terms` words of length ≤ `max_len`.
pub fn random_chain(alg: &AInftyAlgebra, rng: &mut impl Rng, max_len: usize, terms: usize) -> Chain {
    let slots = alg.reduced_basis();
    let mut out = Chain::new();
    for _ in 0..terms {
        let len = if slots.is_empty() {
            0
        } else {
            rng.gen_range(0..=max_len)
        };
        let mut word = vec![rng.gen_range(0..alg.dim())];
        for _ in 0..len {
            word.push(slots[rng.gen_range(0..slots.len())]);
        }
        let mono = Mono {
            t: rng.gen_range(0..alg.t_order()),
            e: if alg.has_laurent_e() {
                rng.gen_range(-1..=1)
            } else {
                0
            },
        };
        let key = ChainKey {
            u: rng.gen_range(0..=1),
            mono,
            word,
        };
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-3i64..=3);
        }
        out.add_term(key, Scalar::int(c));
    }
    out
}

/// Renders a chain with basis labels, one term per line.
pub struct ChainDisplay<'a> {
    pub alg: &'a AInftyAlgebra,
    pub chain: &'a Chain,
}

impl fmt::Display for ChainDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.chain.is_zero() {
            return write!(f, "0");
        }
        for (i, (key, c)) in self.chain.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let slots: Vec<&str> = key.word[1..].iter().map(|&a| self.alg.label(a)).collect();
            write!(f, "({c})")?;
            if key.u != 0 {
                write!(f, "u^{}", key.u)?;
            }
            if key.mono != Mono::ONE {
                write!(f, "{}", key.mono)?;
            }
            write!(f, " {}[{}]", self.alg.label(key.word[0]), slots.join("|"))?;
        }
        Ok(())
    }
}
