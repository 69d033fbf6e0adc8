//! The shipped sample algebras and their weakly curved and t-deformed variants.
//!
//! Associative products `ab` enter as `m₂(a,b) = (−1)^{|a|} ab`; with this sign the A∞ relations
//! hold and the unit laws take the strict form `m₂(e,a) = a = (−1)^{|a|} m₂(a,e)`.

use super::algebra::{AInftyAlgebra, Pairing};
use super::cochain::{eval_slots, Cochain, Slot, TableCochain};
use super::ring::{sign, Mono, RingElem, Vector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Names accepted by [`sample`].
pub const SAMPLE_NAMES: [&str; 4] = ["ground-field", "matrix2", "exterior", "clifford"];

/// Variant suffixes accepted by [`sample`].
pub const VARIANTS: [&str; 3] = ["", "-curved", "-t"];

/// Curvature weight used by the weakly curved variants.
pub fn curved_weight() -> Scalar {
    Scalar::frac(3, 2)
}

/// t-order of the t-deformed variants.
pub const DEFORMED_T_ORDER: u32 = 3;

fn vec_of(terms: &[(usize, Scalar)]) -> Vector {
    terms.iter().map(|(b, c)| ((*b, Mono::ONE), c.clone())).collect()
}

fn ring_const(c: Scalar) -> RingElem {
    RingElem::single(Mono::ONE, c)
}

/// Builds `m₂` from an associative product table given on basis pairs.
fn associative(
    name: &str,
    labels: &[&str],
    degrees: Vec<u8>,
    t_order: u32,
    product: impl Fn(usize, usize) -> Vector,
) -> Result<AInftyAlgebra> {
    let alg = AInftyAlgebra::new(
        name,
        labels.iter().map(|s| s.to_string()).collect(),
        degrees,
        0,
        t_order,
    )?;
    let mut ops = TableCochain::new(1);
    for a in 0..alg.dim() {
        for b in 0..alg.dim() {
            ops.set(vec![a, b], product(a, b).scaled(&sign(alg.degree(a) as u32)));
        }
    }
    alg.with_ops(ops)
}

/// The ground field K with `⟨e,e⟩ = 1`.
pub fn ground_field() -> AInftyAlgebra {
    let alg = associative("ground-field", &["1"], vec![0], 1, |_, _| {
        vec_of(&[(0, Scalar::int(1))])
    })
    .expect("valid table");
    let mut p = Pairing::new(0);
    p.set(0, 0, ring_const(Scalar::int(1)));
    alg.with_pairing(Some(p)).expect("valid pairing")
}

/// 2×2 matrices in the basis `1, h = e11 − e22, x = e12, y = e21`, trace pairing.
pub fn matrix2() -> AInftyAlgebra {
    let one = Scalar::int(1);
    let half = Scalar::frac(1, 2);
    let product = |a: usize, b: usize| -> Vector {
        let neg = -one.clone();
        match (a, b) {
            (0, b) => vec_of(&[(b, one.clone())]),
            (a, 0) => vec_of(&[(a, one.clone())]),
            (1, 1) => vec_of(&[(0, one.clone())]),
            (1, 2) => vec_of(&[(2, one.clone())]),
            (2, 1) => vec_of(&[(2, neg)]),
            (1, 3) => vec_of(&[(3, neg)]),
            (3, 1) => vec_of(&[(3, one.clone())]),
            (2, 3) => vec_of(&[(0, half.clone()), (1, half.clone())]),
            (3, 2) => vec_of(&[(0, half.clone()), (1, -half.clone())]),
            _ => Vector::new(),
        }
    };
    let alg =
        associative("matrix2", &["1", "h", "x", "y"], vec![0, 0, 0, 0], 1, product).expect("valid table");
    let mut p = Pairing::new(0);
    p.set(0, 0, ring_const(Scalar::int(2)));
    p.set(1, 1, ring_const(Scalar::int(2)));
    p.set(2, 3, ring_const(Scalar::int(1)));
    p.set(3, 2, ring_const(Scalar::int(1)));
    alg.with_pairing(Some(p)).expect("valid pairing")
}

/// `K[x]/(x² = c)` with `x` odd and the odd trace pairing `⟨1,x⟩ = 1 = −⟨x,1⟩`.
pub fn clifford_type(name: &str, square: RingElem, t_order: u32) -> Result<AInftyAlgebra> {
    let product = |a: usize, b: usize| -> Vector {
        match (a, b) {
            (0, b) => vec_of(&[(b, Scalar::int(1))]),
            (a, 0) => vec_of(&[(a, Scalar::int(1))]),
            _ => square.iter().map(|(m, c)| ((0, *m), c.clone())).collect(),
        }
    };
    let alg = associative(name, &["1", "x"], vec![0, 1], t_order, product)?;
    let mut p = Pairing::new(1);
    p.set(0, 1, ring_const(Scalar::int(1)));
    p.set(1, 0, ring_const(Scalar::int(-1)));
    alg.with_pairing(Some(p))
}

/// Exterior algebra Λ[x] on one odd generator.
pub fn exterior() -> AInftyAlgebra {
    clifford_type("exterior", RingElem::new(), 1).expect("valid table")
}

/// Clifford-type algebra `K[x]/(x² = 1)`, `x` odd.
pub fn clifford() -> AInftyAlgebra {
    clifford_type("clifford", ring_const(Scalar::int(1)), 1).expect("valid table")
}

/// Adds the curvature `m₀ = w·e`.
pub fn with_curvature(alg: AInftyAlgebra, w: RingElem) -> Result<AInftyAlgebra> {
    let mut ops = alg.ops().clone();
    let unit = alg.unit_vector();
    let mut m0 = Vector::new();
    for (m, c) in w.iter() {
        for ((b, mb), cb) in unit.iter() {
            if let Some(mm) = m.mul(*mb, alg.t_order()) {
                m0.add_term((*b, mm), c * cb);
            }
        }
    }
    ops.add(Vec::new(), &m0);
    alg.with_ops(ops)
}

/// Transport of structure along `F = Id + tN` for an even operator `N` with `N(e) = 0`:
/// `m^F_k(a) = F⁻¹ m_k(Fa_1, …, Fa_k)`, `⟨a,b⟩^F = ⟨Fa,Fb⟩`.
pub fn transport(alg: &AInftyAlgebra, n: &TableCochain) -> Result<AInftyAlgebra> {
    if n.shifted_parity() != 0 || n.entries().any(|(w, _)| w.len() != 1) {
        return Err(Error::Invalid("N must be an even length-one operator".into()));
    }
    if n.get(&[alg.unit_index()]).is_some() {
        return Err(Error::Invalid("N must kill the unit".into()));
    }
    let t_order = alg.t_order();
    let apply_n = |v: &Vector| -> Vector {
        let mut out = Vector::new();
        for ((b, m), c) in v.iter() {
            for ((b2, m2), c2) in n.eval(alg, &[*b]).iter() {
                if let Some(mm) = m.mul(*m2, t_order).and_then(|x| x.mul(Mono::t_pow(1), t_order)) {
                    out.add_term((*b2, mm), c * c2);
                }
            }
        }
        out
    };
    let forward = |v: &Vector| -> Vector {
        let mut out = v.clone();
        out.add(&apply_n(v));
        out
    };
    let inverse = |v: &Vector| -> Vector {
        // (Id + tN)⁻¹ = Σ (−tN)^j, finite since t is nilpotent
        let mut out = v.clone();
        let mut term = v.clone();
        for j in 1..t_order {
            term = apply_n(&term);
            out.add_scaled(&term, &sign(j));
        }
        out
    };
    let images: Vec<Vector> = (0..alg.dim())
        .map(|a| forward(&Vector::single((a, Mono::ONE), Scalar::int(1))))
        .collect();
    let mut ops = TableCochain::new(1);
    let arities: std::collections::BTreeSet<usize> = alg.ops().entries().map(|(w, _)| w.len()).collect();
    for k in arities {
        let letters: Vec<usize> = (0..alg.dim()).collect();
        for word in super::cochain::words_over(&letters, k)
            .into_iter()
            .filter(|w| w.len() == k)
        {
            let slots: Vec<Slot<'_>> = word.iter().map(|&a| Slot::Vector(&images[a])).collect();
            ops.set(word.clone(), inverse(&eval_slots(alg, alg.ops(), &slots)));
        }
    }
    let pairing = alg.pairing().map(|p| {
        let mut q = Pairing::new(p.dimension);
        for a in 0..alg.dim() {
            for b in 0..alg.dim() {
                q.set(a, b, alg.pair(&images[a], &images[b]));
            }
        }
        q
    });
    alg.clone().with_ops(ops)?.with_pairing(pairing)
}

fn deformed(base: AInftyAlgebra, n: TableCochain) -> Result<AInftyAlgebra> {
    let name = format!("{}-t", base.name());
    let moved = transport(&base, &n)?;
    Ok(with_curvature(moved, RingElem::single(Mono::t_pow(1), Scalar::int(1)))?.renamed(name))
}

fn even_map(entries: &[(usize, &[(usize, i64)])]) -> TableCochain {
    let mut n = TableCochain::new(0);
    for (a, img) in entries {
        n.set(
            vec![*a],
            img.iter()
                .map(|(b, c)| ((*b, Mono::ONE), Scalar::int(*c)))
                .collect(),
        );
    }
    n
}

/// The t-deformed variant of a named sample: an intrinsic deformation where one exists, transport
/// along `Id + tN`, and curvature `m₀ = t·e`, over K[t]/(t³).
pub fn t_deformed(base_name: &str) -> Result<AInftyAlgebra> {
    let m = DEFORMED_T_ORDER;
    let t = |k: u32| RingElem::single(Mono::t_pow(k), Scalar::int(1));
    match base_name {
        "ground-field" => deformed(ground_field().with_t_order(m)?, TableCochain::new(0)),
        "matrix2" => deformed(
            matrix2().with_t_order(m)?,
            even_map(&[(1, &[(2, 1), (3, 1)]), (2, &[(1, 1)]), (3, &[(2, -1)])]),
        ),
        "exterior" => deformed(clifford_type("exterior", t(1), m)?, even_map(&[(1, &[(1, 1)])])),
        "clifford" => {
            let mut square = t(0);
            square.add(&t(1));
            deformed(clifford_type("clifford", square, m)?, even_map(&[(1, &[(1, 2)])]))
        }
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

/// Looks up `name` or `name-curved` or `name-t`.
pub fn sample(name: &str) -> Result<AInftyAlgebra> {
    let base = |n: &str| -> Result<AInftyAlgebra> {
        match n {
            "ground-field" => Ok(ground_field()),
            "matrix2" => Ok(matrix2()),
            "exterior" => Ok(exterior()),
            "clifford" => Ok(clifford()),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    };
    if let Some(stem) = name.strip_suffix("-curved") {
        let alg = base(stem)?;
        return Ok(with_curvature(alg, ring_const(curved_weight()))?.renamed(name));
    }
    if let Some(stem) = name.strip_suffix("-t") {
        return t_deformed(stem);
    }
    base(name)
}

/// All samples with all variants, in a fixed order.
pub fn zoo() -> Vec<AInftyAlgebra> {
    SAMPLE_NAMES
        .iter()
        .flat_map(|s| VARIANTS.iter().map(move |v| format!("{s}{v}")))
        .map(|n| sample(&n).expect("shipped sample"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zoo_is_valid() {
        for alg in zoo() {
            let max = alg.ops().max_arity() + 2;
            assert!(alg.verify_ainfty(max).passed, "{} A∞", alg.name());
            assert!(alg.verify_unit(max).passed, "{} unit", alg.name());
            let pc = alg.verify_pairing(max);
            assert!(pc.passed, "{} pairing {:?}", alg.name(), pc.witness);
        }
    }

    #[test]
    fn perturbed_product_fails_with_witness() {
        let alg = matrix2();
        let mut ops = alg.ops().clone();
        ops.add(vec![2, 2], &Vector::single((2, Mono::ONE), Scalar::int(1)));
        let broken = alg.with_ops(ops).unwrap();
        let report = broken.verify_ainfty(3);
        assert!(!report.passed);
        assert!(report.witness.is_some());
    }

    #[test]
    fn curvature_weight_read_back() {
        let alg = sample("clifford-curved").unwrap();
        assert_eq!(alg.curvature_weight(), ring_const(curved_weight()));
        assert!(alg.residual_curvature().is_zero());
        let t = sample("matrix2-t").unwrap();
        assert_eq!(
            t.curvature_weight(),
            RingElem::single(Mono::t_pow(1), Scalar::int(1))
        );
    }

    #[test]
    fn unknown_sample() {
        assert_eq!(sample("octonions").unwrap_err().kind(), "UnknownPreset");
    }
}
