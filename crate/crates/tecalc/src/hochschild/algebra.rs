//! Finite-rank ℤ/2-graded strictly unital A∞ algebras over K[t]/(t^M), given by exact tables.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::cochain::{eval_slots, words_over, Cochain, Slot, TableCochain};
use super::ring::{compositions, sign, split, Mono, RingElem, Vector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Graded-antisymmetric cyclic pairing with values in the coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    /// Parity tag `n`: `⟨a,b⟩ ≠ 0` only when `|a| + |b| ≡ n`.
    pub dimension: i64,
    pub values: BTreeMap<(usize, usize), RingElem>,
}

impl Pairing {
    pub fn new(dimension: i64) -> Self {
        Pairing {
            dimension,
            values: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, a: usize, b: usize, value: RingElem) {
        if value.is_zero() {
            self.values.remove(&(a, b));
        } else {
            self.values.insert((a, b), value);
        }
    }

    pub fn get(&self, a: usize, b: usize) -> Option<&RingElem> {
        self.values.get(&(a, b))
    }
}

/// Euler grading: an even operator `Gr` on A and an Euler field
/// `E = t_weight·t∂_t + e_weight·e∂_e` on the coefficient ring, so `Gr(fα) = 2E(f)α + f·Gr(α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerGrading {
    pub gr: TableCochain,
    pub t_weight: Scalar,
    pub e_weight: Scalar,
}

impl EulerGrading {
    /// `E(t^a e^b) / (t^a e^b)`.
    pub fn weight(&self, m: Mono) -> Scalar {
        &self.t_weight * &Scalar::int(m.t as i64) + &self.e_weight * &Scalar::int(m.e as i64)
    }

    /// The semilinear operator `Gr` applied to a module element.
    pub fn apply(&self, alg: &AInftyAlgebra, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for ((b, m), c) in v.iter() {
            out.add_term((*b, *m), c * &(Scalar::int(2) * self.weight(*m)));
            for ((b2, m2), c2) in self.gr.eval(alg, &[*b]).iter() {
                if let Some(mm) = m.mul(*m2, alg.t_order()) {
                    out.add_term((*b2, mm), c * c2);
                }
            }
        }
        out
    }
}

/// Outcome of a table-level structural check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableCheck {
    pub check: String,
    pub passed: bool,
    pub words_checked: usize,
    /// Labels of the first word on which the check fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

/// A strictly unital A∞ algebra with exact operation tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInftyAlgebra {
    name: String,
    labels: Vec<String>,
    degrees: Vec<u8>,
    unit: usize,
    unit_sign: i8,
    t_order: u32,
    laurent_e: bool,
    ops: TableCochain,
    pairing: Option<Pairing>,
    euler: Option<EulerGrading>,
}

impl AInftyAlgebra {
    /// An algebra with no operations yet. The unit is `unit_sign · basis[unit]`.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        degrees: Vec<u8>,
        unit: usize,
        t_order: u32,
    ) -> Result<Self> {
        if labels.len() != degrees.len() || labels.is_empty() {
            return Err(Error::DimensionMismatch(
                "labels and degrees must have equal nonzero length".into(),
            ));
        }
        if unit >= labels.len() {
            return Err(Error::Invalid(format!("unit index {unit} out of range")));
        }
        if degrees[unit] != 0 {
            return Err(Error::OddParityViolation("the unit must be even".into()));
        }
        if degrees.iter().any(|&d| d > 1) {
            return Err(Error::Invalid(
                "degrees are taken mod 2 and must be 0 or 1".into(),
            ));
        }
        if t_order == 0 {
            return Err(Error::Invalid("t-order M must be at least 1".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        if !labels.iter().all(|l| seen.insert(l.clone())) {
            return Err(Error::Invalid("basis labels must be distinct".into()));
        }
        Ok(AInftyAlgebra {
            name: name.into(),
            labels,
            degrees,
            unit,
            unit_sign: 1,
            t_order,
            laurent_e: false,
            ops: TableCochain::new(1),
            pairing: None,
            euler: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn degrees(&self) -> &[u8] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> u8 {
        self.degrees[i]
    }

    /// `|a|' = |a| − 1` mod 2.
    pub fn shifted(&self, i: usize) -> u32 {
        (self.degrees[i] as u32 + 1) % 2
    }

    /// `ε(α) = Σ|α_j|'` mod 2.
    pub fn eps(&self, word: &[usize]) -> u32 {
        word.iter().map(|&a| self.shifted(a)).sum::<u32>() % 2
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn unit_sign(&self) -> i8 {
        self.unit_sign
    }

    pub fn unit_vector(&self) -> Vector {
        Vector::single((self.unit, Mono::ONE), Scalar::int(self.unit_sign as i64))
    }

    /// Basis indices spanning the complement of the unit line.
    pub fn reduced_basis(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| i != self.unit).collect()
    }

    pub fn t_order(&self) -> u32 {
        self.t_order
    }

    pub fn has_laurent_e(&self) -> bool {
        self.laurent_e
    }

    pub fn ops(&self) -> &TableCochain {
        &self.ops
    }

    pub fn pairing(&self) -> Option<&Pairing> {
        self.pairing.as_ref()
    }

    pub fn euler(&self) -> Option<&EulerGrading> {
        self.euler.as_ref()
    }

    pub fn with_unit_sign(mut self, unit_sign: i8) -> Result<Self> {
        if unit_sign != 1 && unit_sign != -1 {
            return Err(Error::Invalid("unit sign must be ±1".into()));
        }
        self.unit_sign = unit_sign;
        Ok(self)
    }

    pub fn with_laurent_e(mut self, on: bool) -> Self {
        self.laurent_e = on;
        self
    }

    pub fn with_ops(mut self, ops: TableCochain) -> Result<Self> {
        if ops.shifted_parity() != 1 {
            return Err(Error::OddParityViolation(
                "operations must have shifted parity 1".into(),
            ));
        }
        self.check_table(&ops)?;
        self.ops = ops;
        Ok(self)
    }

    pub fn with_pairing(mut self, pairing: Option<Pairing>) -> Result<Self> {
        if let Some(p) = &pairing {
            for ((a, b), v) in &p.values {
                if *a >= self.dim() || *b >= self.dim() {
                    return Err(Error::Invalid("pairing index out of range".into()));
                }
                if (self.degrees[*a] as i64 + self.degrees[*b] as i64 - p.dimension).rem_euclid(2) != 0 {
                    return Err(Error::OddParityViolation(format!(
                        "pairing ⟨{},{}⟩ violates the parity tag",
                        self.labels[*a], self.labels[*b]
                    )));
                }
                self.check_monos(v.iter().map(|(m, _)| *m))?;
            }
        }
        self.pairing = pairing;
        Ok(self)
    }

    pub fn with_euler(mut self, euler: Option<EulerGrading>) -> Result<Self> {
        if let Some(eg) = &euler {
            if eg.gr.shifted_parity() != 0 || eg.gr.entries().any(|(w, _)| w.len() != 1) {
                return Err(Error::BadGrading("Gr must be an even length-one operator".into()));
            }
            self.check_table(&eg.gr)?;
        }
        self.euler = euler;
        Ok(self)
    }

    fn check_monos(&self, monos: impl Iterator<Item = Mono>) -> Result<()> {
        for m in monos {
            if m.t >= self.t_order {
                return Err(Error::Invalid(format!(
                    "t-power {} not below t-order {}",
                    m.t, self.t_order
                )));
            }
            if m.e != 0 && !self.laurent_e {
                return Err(Error::Invalid("e-powers need the Laurent variable".into()));
            }
        }
        Ok(())
    }

    fn check_table(&self, table: &TableCochain) -> Result<()> {
        for (inputs, value) in table.entries() {
            if inputs.iter().any(|&a| a >= self.dim()) {
                return Err(Error::Invalid("table input out of range".into()));
            }
            let target = (self.eps(inputs) + table.shifted_parity() as u32) % 2;
            for ((b, _), _) in value.iter() {
                if *b >= self.dim() {
                    return Err(Error::Invalid("table output out of range".into()));
                }
                if self.shifted(*b) != target {
                    return Err(Error::OddParityViolation(format!(
                        "entry on {:?} has an output of the wrong parity",
                        self.word_labels(inputs)
                    )));
                }
            }
            self.check_monos(value.iter().map(|((_, m), _)| *m))?;
        }
        Ok(())
    }

    pub fn word_labels(&self, word: &[usize]) -> Vec<String> {
        word.iter().map(|&a| self.labels[a].clone()).collect()
    }

    /// `m_k(a_1, …, a_k)` on basis inputs.
    pub fn m(&self, args: &[usize]) -> Vector {
        self.ops.eval(self, args)
    }

    /// `⟨v, w⟩` for module elements.
    pub fn pair(&self, v: &Vector, w: &Vector) -> RingElem {
        let mut out = RingElem::new();
        let Some(p) = &self.pairing else { return out };
        for ((a, ma), ca) in v.iter() {
            for ((b, mb), cb) in w.iter() {
                let Some(val) = p.get(*a, *b) else { continue };
                let Some(mab) = ma.mul(*mb, self.t_order) else {
                    continue;
                };
                let c = ca * cb;
                for (m, cv) in val.iter() {
                    if let Some(mm) = m.mul(mab, self.t_order) {
                        out.add_term(mm, &c * cv);
                    }
                }
            }
        }
        out
    }

    fn basis_vec(&self, a: usize) -> Vector {
        Vector::single((a, Mono::ONE), Scalar::int(1))
    }

    /// Curvature weight `w` with `m₀ = w·e + m̄₀`, read off as the unit component of `m₀`.
    pub fn curvature_weight(&self) -> RingElem {
        let m0 = self.m(&[]);
        m0.iter()
            .filter(|((b, _), _)| *b == self.unit)
            .map(|((_, m), c)| (*m, c * &Scalar::int(self.unit_sign as i64)))
            .collect()
    }

    /// The part `m̄₀ = m₀ − w·e`.
    pub fn residual_curvature(&self) -> Vector {
        self.m(&[]).filtered(|(b, _)| *b != self.unit)
    }

    /// Same tables with `m₀` removed.
    pub fn uncurved(&self) -> Self {
        let mut ops = self.ops.clone();
        ops.set(Vec::new(), Vector::new());
        let mut out = self.clone();
        out.ops = ops;
        out.name = format!("{}-uncurved", self.name);
        out
    }

    /// Σ (−1)^{ε₁} m(α⁽¹⁾, m(α⁽²⁾), α⁽³⁾) on a basis word.
    pub fn ainfty_defect(&self, word: &[usize]) -> Vector {
        let mut out = Vector::new();
        for sizes in compositions(word.len(), 3) {
            let parts = split(word, &sizes);
            let inner = self.m(parts[1]);
            if inner.is_zero() {
                continue;
            }
            let mut slots: Vec<Slot<'_>> = parts[0].iter().map(|&a| Slot::Basis(a)).collect();
            slots.push(Slot::Vector(&inner));
            slots.extend(parts[2].iter().map(|&a| Slot::Basis(a)));
            out.add_scaled(&eval_slots(self, &self.ops, &slots), &sign(self.eps(parts[0])));
        }
        out
    }

    fn scan(&self, check: &str, max_len: usize, mut defect: impl FnMut(&[usize]) -> bool) -> TableCheck {
        let letters: Vec<usize> = (0..self.dim()).collect();
        let mut checked = 0;
        for word in words_over(&letters, max_len) {
            checked += 1;
            if defect(&word) {
                return TableCheck {
                    check: check.into(),
                    passed: false,
                    words_checked: checked,
                    witness: Some(self.word_labels(&word)),
                };
            }
        }
        TableCheck {
            check: check.into(),
            passed: true,
            words_checked: checked,
            witness: None,
        }
    }

    /// A∞ relations on every basis word of length ≤ `max_len`.
    pub fn verify_ainfty(&self, max_len: usize) -> TableCheck {
        self.scan("ainfty-relations", max_len, |w| !self.ainfty_defect(w).is_zero())
    }

    /// Strict unit laws on every basis word of length ≤ `max_len`.
    pub fn verify_unit(&self, max_len: usize) -> TableCheck {
        let e = self.unit;
        let us = Scalar::int(self.unit_sign as i64);
        self.scan("strict-unit", max_len, |w| {
            let units = w.iter().filter(|&&a| a == e).count();
            if units == 0 {
                return false;
            }
            // every unit slot contributes a factor of the sign of e = ±basis[unit]
            let scale = us.pow(units as u32);
            let value = self.m(w).scaled(&scale);
            match w.len() {
                0 => false,
                2 if units == 2 => value != self.unit_vector(),
                2 if w[0] == e => value != self.basis_vec(w[1]),
                2 => value.scaled(&sign(self.degree(w[0]) as u32)) != self.basis_vec(w[0]),
                _ => !value.is_zero(),
            }
        })
    }

    /// Graded antisymmetry and cyclicity of the pairing for arities `1..=max_len`.
    pub fn verify_pairing(&self, max_len: usize) -> TableCheck {
        let Some(p) = &self.pairing else {
            return TableCheck {
                check: "cyclic-pairing".into(),
                passed: false,
                words_checked: 0,
                witness: None,
            };
        };
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                let lhs = p.get(a, b).cloned().unwrap_or_default();
                let rhs = p
                    .get(b, a)
                    .cloned()
                    .unwrap_or_default()
                    .scaled(&sign(self.shifted(a) * self.shifted(b) + 1));
                if lhs != rhs {
                    return TableCheck {
                        check: "cyclic-pairing".into(),
                        passed: false,
                        words_checked: a * n + b + 1,
                        witness: Some(self.word_labels(&[a, b])),
                    };
                }
            }
        }
        self.scan("cyclic-pairing", max_len, |w| {
            let Some((&last, init)) = w.split_last() else {
                return false;
            };
            (0..n).any(|beta| {
                let lhs = self.pair(&self.m(w), &self.basis_vec(beta));
                let mut rotated = vec![beta];
                rotated.extend_from_slice(init);
                let rhs = self
                    .pair(&self.m(&rotated), &self.basis_vec(last))
                    .scaled(&sign(self.shifted(beta) * self.eps(w)));
                lhs != rhs
            })
        })
    }

    /// `Gr∘m_k = m_k∘Gr + (2−k)m_k` and `Gr(e) = 0` on words of length ≤ `max_len`.
    pub fn verify_euler(&self, max_len: usize) -> TableCheck {
        let Some(eg) = &self.euler else {
            return TableCheck {
                check: "euler-grading".into(),
                passed: false,
                words_checked: 0,
                witness: None,
            };
        };
        if !eg.apply(self, &self.unit_vector()).is_zero() {
            return TableCheck {
                check: "euler-grading".into(),
                passed: false,
                words_checked: 0,
                witness: Some(vec![self.labels[self.unit].clone()]),
            };
        }
        self.scan("euler-grading", max_len, |w| {
            let value = self.m(w);
            let mut defect = eg.apply(self, &value);
            for i in 0..w.len() {
                let graded = eg.gr.eval(self, &[w[i]]);
                let mut slots: Vec<Slot<'_>> = w.iter().map(|&a| Slot::Basis(a)).collect();
                slots[i] = Slot::Vector(&graded);
                defect.sub(&eval_slots(self, &self.ops, &slots));
            }
            defect.sub(&value.scaled(&Scalar::int(2 - w.len() as i64)));
            !defect.is_zero()
        })
    }

    /// `m_k^op(α) = (−1)^{†(α)} m_k(α_k, …, α_1)` with `†(α) = Σ_{i<j}|α_i|'|α_j|'`; the unit becomes `−e`.
    pub fn opposite(&self) -> Self {
        let mut reversed = TableCochain::new(1);
        for (inputs, value) in self.ops.entries() {
            let mut rev = inputs.clone();
            rev.reverse();
            let dagger: u32 = (0..rev.len())
                .flat_map(|i| (i + 1..rev.len()).map(move |j| (i, j)))
                .map(|(i, j)| self.shifted(rev[i]) * self.shifted(rev[j]))
                .sum();
            reversed.set(rev, value.scaled(&sign(dagger)));
        }
        let mut out = self.clone();
        out.ops = reversed;
        out.unit_sign = -self.unit_sign;
        out.name = format!("{}-op", self.name);
        out
    }

    /// `m_k⁻ = (−1)^{k−1} m_k`; the unit becomes `−e`.
    pub fn negative(&self) -> Self {
        let mut out = self.clone();
        out.ops = self
            .ops
            .map_entries(1, |inputs, v| v.scaled(&sign((inputs.len() as u32 + 1) % 2)));
        out.unit_sign = -self.unit_sign;
        out.name = format!("{}-neg", self.name);
        out
    }

    pub fn negative_opposite(&self) -> Self {
        self.opposite().negative().renamed(format!("{}-negop", self.name))
    }

    /// Checks that `α ↦ c·α` is a strict A∞ morphism `self → target` preserving units.
    pub fn verify_scalar_morphism(&self, target: &AInftyAlgebra, c: &Scalar, max_len: usize) -> TableCheck {
        if self.dim() != target.dim() || self.degrees != target.degrees {
            return TableCheck {
                check: "scalar-morphism".into(),
                passed: false,
                words_checked: 0,
                witness: None,
            };
        }
        let unit_ok = self.unit_vector().scaled(c) == target.unit_vector();
        let mut report = self.scan("scalar-morphism", max_len, |w| {
            target.m(w).scaled(&c.pow(w.len() as u32)) != self.m(w).scaled(c)
        });
        if !unit_ok {
            report.passed = false;
        }
        report
    }

    /// The deformation `𝓒^e` over `R[e, 1/e]` with `m_k^e = e^{(2−k−|m_k(a)|+Σ|a_i|)/2} m_k`,
    /// Euler field `e∂_e` and `Gr(e^k a) = (2k+|a|) e^k a`.
    pub fn e_deformation(&self) -> Result<Self> {
        if self.laurent_e {
            return Err(Error::Invalid(
                "algebra already carries the Laurent variable".into(),
            ));
        }
        let mut ops = TableCochain::new(1);
        for (inputs, value) in self.ops.entries() {
            let mut v = Vector::new();
            for ((b, m), c) in value.iter() {
                let exponent = 2 - inputs.len() as i64 - self.degrees[*b] as i64
                    + inputs.iter().map(|&a| self.degrees[a] as i64).sum::<i64>();
                if exponent % 2 != 0 {
                    return Err(Error::OddParityViolation(format!(
                        "odd e-exponent on {:?}",
                        self.word_labels(inputs)
                    )));
                }
                v.add_term(
                    (
                        *b,
                        Mono {
                            t: m.t,
                            e: m.e + (exponent / 2) as i32,
                        },
                    ),
                    c.clone(),
                );
            }
            ops.set(inputs.clone(), v);
        }
        let mut gr = TableCochain::new(0);
        for a in 0..self.dim() {
            if self.degrees[a] == 1 {
                gr.set(vec![a], self.basis_vec(a));
            }
        }
        let mut out = self.clone();
        out.laurent_e = true;
        out.ops = ops;
        out.pairing = None;
        out.euler = Some(EulerGrading {
            gr,
            t_weight: Scalar::zero(),
            e_weight: Scalar::int(1),
        });
        out.name = format!("{}^e", self.name);
        Ok(out)
    }

    /// Setting `e = 1` in every table.
    pub fn restrict_e(&self) -> Self {
        let strip = |v: &Vector| v.map_keys(|(b, m)| Some(((*b, Mono::t_pow(m.t)), Scalar::int(1))));
        let mut out = self.clone();
        out.laurent_e = false;
        out.ops = self.ops.map_entries(1, |_, v| strip(v));
        out.euler = None;
        out
    }

    /// The tables of `𝓒^s`: `m_k^s = s^{2−k} m_k` with `s` odd. Only the exponent bookkeeping is kept.
    pub fn s_deformation(&self) -> SDeformation {
        SDeformation {
            exponents: self
                .ops
                .entries()
                .map(|(inputs, _)| (inputs.clone(), 2 - inputs.len() as i64))
                .collect(),
            tables: self.ops.clone(),
        }
    }

    /// Replace the coefficient ring by K[t]/(t^M) with a larger or smaller `M`.
    pub fn with_t_order(mut self, t_order: u32) -> Result<Self> {
        if t_order == 0 {
            return Err(Error::Invalid("t-order M must be at least 1".into()));
        }
        let cut = |v: &Vector| v.filtered(|(_, m)| m.t < t_order);
        self.ops = self.ops.map_entries(1, |_, v| cut(v));
        if let Some(p) = &mut self.pairing {
            for v in p.values.values_mut() {
                *v = v.filtered(|m| m.t < t_order);
            }
        }
        self.t_order = t_order;
        Ok(self)
    }
}

/// Exponent table of the odd-variable deformation `𝓒^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SDeformation {
    pub exponents: BTreeMap<Vec<usize>, i64>,
    tables: TableCochain,
}

impl SDeformation {
    /// Tables at `s = 1`.
    pub fn restrict(&self) -> TableCochain {
        self.tables.clone()
    }

    /// `Gr(s^j a) = j s^j a` with `E = (s/2) d/ds` is an Euler grading iff every exponent is `2 − k`.
    pub fn is_euler_graded(&self) -> bool {
        self.exponents.iter().all(|(w, &x)| x == 2 - w.len() as i64)
    }
}
