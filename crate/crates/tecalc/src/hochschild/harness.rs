//! Randomized identity suite: every chain-level identity of the operator calculus, checked exactly
//! on seeded random chains and cochains.

use rand::Rng;
use serde::Serialize;

use super::algebra::{AInftyAlgebra, TableCheck};
use super::chain::{
    b11, b_plus_ub, big_b11, cap, connes_b, euler_u_connection, euler_weighted_ops, ggm_connection, gr_minus,
    hochschild_b, i_op, length_gamma, lie_derivative, max_length, pairing, random_chain, shift_u, truncate_t,
    u_connection, Chain,
};
use super::cochain::{
    bracket, m_prime, parity_operator, random_cochain, words_over, Cochain, Cup, TableCochain,
};
use super::ring::{sign, Lin, Mono};
use crate::par::{map_trials, Execution};
use crate::random::rng_for;
use crate::scalar::Scalar;

/// Names of the identities, in report order.
pub const IDENTITIES: [&str; 21] = [
    "b^2 = 0",
    "B^2 = 0",
    "bB + Bb = 0",
    "(b+uB)^2 = 0",
    "L_m = b",
    "cartan homotopy unsigned, |phi|' odd",
    "cartan homotopy with sign (-1)^|phi|, both parities",
    "[L_psi, L_phi] = L_[psi,phi]",
    "[b, L_phi] = L_[m,phi]",
    "[B, L_phi] = 0",
    "[Gamma, b] = b - L_m'",
    "[Gamma, B] = -B",
    "[Gr-, b+uB] = b+uB",
    "pairing descent",
    "cup/cap adjunction",
    "curved vs uncurved",
    "euler vs canonical u-connection",
    "ggm flatness",
    "[Gr-, ggm] = ggm_[2E,v]",
    "residue nilpotent",
    "gerstenhaber antisymmetry",
];

/// Suite parameters.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub trials: u64,
    pub max_len: usize,
    pub seed: u64,
    pub cochain_arity: usize,
    pub exec: Execution,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trials: 100,
            max_len: 4,
            seed: 0,
            cochain_arity: 3,
            exec: Execution::default(),
        }
    }
}

/// Aggregate result of one identity over all trials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityOutcome {
    pub identity: String,
    pub trials: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failing_trial: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl IdentityOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Structural checks plus identity outcomes for one algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub algebra: String,
    pub trials: u64,
    pub max_len: usize,
    pub table_checks: Vec<TableCheck>,
    pub identities: Vec<IdentityOutcome>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Verdict {
    Pass,
    Fail,
    Skip(&'static str),
}

impl From<bool> for Verdict {
    fn from(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Data derived once per algebra.
struct Lab {
    alg: AInftyAlgebra,
    bar: AInftyAlgebra,
    m_prime: TableCochain,
    bar_m_prime: TableCochain,
    weight: Lin<Mono>,
    e_def: Option<AInftyAlgebra>,
    euler_ops: Option<TableCochain>,
    deg: TableCochain,
}

impl Lab {
    fn new(alg: &AInftyAlgebra) -> Self {
        let bar = alg.uncurved();
        Lab {
            m_prime: m_prime(alg),
            bar_m_prime: m_prime(&bar),
            weight: alg.curvature_weight(),
            e_def: alg.e_deformation().ok(),
            euler_ops: euler_weighted_ops(alg).ok(),
            deg: parity_operator(alg),
            alg: alg.clone(),
            bar,
        }
    }
}

fn commutator(x_odd: bool, y_odd: bool, xy: Chain, yx: Chain) -> Chain {
    let mut out = xy;
    out.add_scaled(&yx, &-sign((x_odd && y_odd) as u32));
    out
}

fn scale_ring(chain: &Chain, w: &Lin<Mono>, t_order: u32) -> Chain {
    let mut out = Chain::new();
    for (key, c) in chain.iter() {
        for (m, cw) in w.iter() {
            if let Some(mm) = key.mono.mul(*m, t_order) {
                let mut k = key.clone();
                k.mono = mm;
                out.add_term(k, c * cw);
            }
        }
    }
    out
}

fn trial(lab: &Lab, cfg: &SuiteConfig, index: u64) -> Vec<Verdict> {
    let alg = &lab.alg;
    let mut rng = rng_for(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index);
    let terms = rng.gen_range(1..=2);
    let c = random_chain(alg, &mut rng, cfg.max_len, terms);
    let p = (index % 2) as u8;
    let q = rng.gen_range(0..2u8);
    let phi = random_cochain(alg, &mut rng, p, cfg.cochain_arity, 0.5);
    let psi = random_cochain(alg, &mut rng, q, cfg.cochain_arity, 0.5);
    let (p_odd, q_odd) = (p == 1, q == 1);

    let b = |x: &Chain| hochschild_b(alg, x);
    let bb = |x: &Chain| connes_b(alg, x);
    let d = |x: &Chain| b_plus_ub(alg, x);
    let bc = b(&c);
    let big_bc = bb(&c);
    let dc = d(&c);

    let mut out = Vec::with_capacity(IDENTITIES.len());
    out.push(b(&bc).is_zero().into());
    out.push(bb(&big_bc).is_zero().into());
    out.push({
        let mut s = b(&big_bc);
        s.add(&bb(&bc));
        s.is_zero().into()
    });
    out.push(d(&dc).is_zero().into());
    out.push((lie_derivative(alg, alg.ops(), &c) == bc).into());

    // Cartan homotopy: the unsigned form holds for odd |φ|'; in general the right side carries (−1)^{|φ|}
    let m_phi = bracket(alg.ops(), &phi);
    let cartan_lhs = commutator(!p_odd, true, i_op(alg, &phi, &dc), d(&i_op(alg, &phi, &c)));
    let mut cartan_rhs = shift_u(&lie_derivative(alg, &phi, &c), 1);
    cartan_rhs.add(&i_op(alg, &m_phi, &c));
    out.push(if p_odd {
        (cartan_lhs == cartan_rhs).into()
    } else {
        Verdict::Skip("unsigned form checked for odd |phi|' only")
    });
    out.push((cartan_lhs == cartan_rhs.scaled(&sign(phi.parity() as u32))).into());

    let l_phi_c = lie_derivative(alg, &phi, &c);
    out.push({
        let psi_phi = bracket(&psi, &phi);
        let lhs = commutator(
            q_odd,
            p_odd,
            lie_derivative(alg, &psi, &l_phi_c),
            lie_derivative(alg, &phi, &lie_derivative(alg, &psi, &c)),
        );
        (lhs == lie_derivative(alg, &psi_phi, &c)).into()
    });
    out.push({
        let lhs = commutator(true, p_odd, b(&l_phi_c), lie_derivative(alg, &phi, &bc));
        (lhs == lie_derivative(alg, &m_phi, &c)).into()
    });
    out.push(
        commutator(true, p_odd, bb(&l_phi_c), lie_derivative(alg, &phi, &big_bc))
            .is_zero()
            .into(),
    );

    out.push({
        let lhs = commutator(false, true, length_gamma(&bc), b(&length_gamma(&c)));
        let mut rhs = bc.clone();
        rhs.sub(&lie_derivative(alg, &lab.m_prime, &c));
        (lhs == rhs).into()
    });
    out.push({
        let lhs = commutator(false, true, length_gamma(&big_bc), bb(&length_gamma(&c)));
        (lhs == big_bc.negated()).into()
    });

    out.push(match &lab.e_def {
        Some(ealg) => {
            let ce = random_chain(ealg, &mut rng, cfg.max_len, 2);
            let dce = b_plus_ub(ealg, &ce);
            let gr_ce = gr_minus(ealg, &ce).expect("graded");
            let lhs = commutator(
                false,
                true,
                gr_minus(ealg, &dce).expect("graded"),
                b_plus_ub(ealg, &gr_ce),
            );
            (lhs == dce).into()
        }
        None => Verdict::Skip("e-deformation unavailable"),
    });

    if alg.pairing().is_some() {
        out.push({
            let mut total = pairing(alg, &m_phi, &c);
            total.add_scaled(&pairing(alg, &phi, &bc), &sign(phi.parity() as u32));
            total.is_zero().into()
        });
        out.push({
            let cup = Cup {
                left: &phi,
                right: &psi,
            };
            (pairing(alg, &cup, &c) == pairing(alg, &phi, &cap(alg, &psi, &c))).into()
        });
    } else {
        out.push(Verdict::Skip("no pairing"));
        out.push(Verdict::Skip("no pairing"));
    }

    out.push({
        let bar = &lab.bar;
        let same_b = bc == hochschild_b(bar, &c);
        let same_big_b = big_bc == connes_b(bar, &c);
        let mut shifted = b11(bar, &lab.bar_m_prime, &c);
        shifted.add(&scale_ring(&c, &lab.weight, alg.t_order()).scaled(&Scalar::int(2)));
        let same_b11 = b11(alg, &lab.m_prime, &c) == shifted;
        let same_big_b11 = big_b11(alg, &lab.m_prime, &c) == big_b11(bar, &lab.bar_m_prime, &c);
        (same_b && same_big_b && same_b11 && same_big_b11).into()
    });

    out.push(match &lab.euler_ops {
        Some(_) => {
            let tilde = euler_u_connection(alg, &c).expect("integral weights");
            let mut lhs = tilde;
            lhs.sub(&u_connection(alg, &c));
            let rhs = commutator(true, true, i_op(alg, &lab.deg, &dc), d(&i_op(alg, &lab.deg, &c)));
            // deg is even, so the Cartan sign contributes −1 next to the factor 1/2
            (lhs == shift_u(&rhs, -2).scaled(&Scalar::frac(-1, 2))).into()
        }
        None => Verdict::Skip("odd e-exponent"),
    });

    let low = alg.t_order().saturating_sub(1);
    out.push(if low == 0 {
        Verdict::Skip("t-order 1")
    } else {
        let lhs = commutator(false, true, ggm_connection(alg, &dc), d(&ggm_connection(alg, &c)));
        truncate_t(&lhs, low).is_zero().into()
    });
    out.push(match (&lab.e_def, low) {
        (_, 0) => Verdict::Skip("t-order 1"),
        (None, _) => Verdict::Skip("e-deformation unavailable"),
        (Some(ealg), _) => {
            let ce = random_chain(ealg, &mut rng, cfg.max_len.min(3), 2);
            let lhs = commutator(
                false,
                false,
                gr_minus(ealg, &ggm_connection(ealg, &ce)).expect("graded"),
                ggm_connection(ealg, &gr_minus(ealg, &ce).expect("graded")),
            );
            // E = e∂_e commutes with ∂_t, so the right side is ∇_0 = 0
            truncate_t(&lhs, low).is_zero().into()
        }
    });

    out.push(if lab.weight.is_zero() && alg.residual_curvature().is_zero() {
        let mut x = c.clone();
        for _ in 0..=max_length(&c) {
            x = b11(alg, &lab.m_prime, &x);
        }
        x.is_zero().into()
    } else {
        Verdict::Skip("curved")
    });

    out.push({
        let words = words_over(&alg.reduced_basis(), 2);
        let s = -sign((p_odd && q_odd) as u32);
        let fwd = bracket(&phi, &psi);
        let back = bracket(&psi, &phi);
        words
            .iter()
            .all(|w| fwd.eval(alg, w) == back.eval(alg, w).scaled(&s))
            .into()
    });
    out
}

/// Runs the structural checks and all identities on `alg`.
pub fn run_suite(alg: &AInftyAlgebra, cfg: &SuiteConfig) -> SuiteReport {
    let lab = Lab::new(alg);
    let depth = alg.ops().max_arity() + 2;
    let mut table_checks = vec![alg.verify_ainfty(depth), alg.verify_unit(depth)];
    if alg.pairing().is_some() {
        table_checks.push(alg.verify_pairing(depth));
    }
    if let Some(e) = &lab.e_def {
        table_checks.push(e.verify_euler(depth));
    }
    let per_trial = map_trials(cfg.trials, cfg.exec, |i| trial(&lab, cfg, i));
    let identities: Vec<IdentityOutcome> = IDENTITIES
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let mut outcome = IdentityOutcome {
                identity: name.to_string(),
                trials: 0,
                failures: 0,
                first_failing_trial: None,
                skipped: None,
            };
            for (i, verdicts) in per_trial.iter().enumerate() {
                match &verdicts[k] {
                    Verdict::Pass => outcome.trials += 1,
                    Verdict::Fail => {
                        outcome.trials += 1;
                        outcome.failures += 1;
                        outcome.first_failing_trial.get_or_insert(i as u64);
                    }
                    Verdict::Skip(why) => outcome.skipped = Some(why.to_string()),
                }
            }
            outcome
        })
        .collect();
    let passed = table_checks.iter().all(|c| c.passed) && identities.iter().all(IdentityOutcome::passed);
    SuiteReport {
        algebra: alg.name().to_string(),
        trials: cfg.trials,
        max_len: cfg.max_len,
        table_checks,
        identities,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hochschild::samples;

    #[test]
    fn suite_on_small_samples() {
        let cfg = SuiteConfig {
            trials: 6,
            max_len: 3,
            ..SuiteConfig::default()
        };
        let mut failed = Vec::new();
        for alg in samples::zoo() {
            let report = run_suite(&alg, &cfg);
            for id in report.identities.iter().filter(|id| !id.passed()) {
                failed.push(format!(
                    "{}: {} ({}/{})",
                    alg.name(),
                    id.identity,
                    id.failures,
                    id.trials
                ));
            }
            for c in report.table_checks.iter().filter(|c| !c.passed) {
                failed.push(format!("{}: {}", alg.name(), c.check));
            }
        }
        assert!(failed.is_empty(), "{failed:#?}");
    }
}
