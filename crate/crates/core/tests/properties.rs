mod common;

use common::{c, defects, hermitian_agreement, Draw};
use proptest::prelude::*;
use pt_ginocchio::jacobi::{jacobi_eval, jacobi_recurrence, JacobiSpec};
use pt_ginocchio::map::map_table;
use pt_ginocchio::params::QuasiParity;
use pt_ginocchio::spectrum::full_spectrum;
use pt_ginocchio::susy::identity_defects;
use pt_ginocchio::wavefunction::{schrodinger_residual, JacobiForm};

fn draw() -> impl Strategy<Value = Draw> {
    (
        1.1..2.5f64,
        1.0..10.0f64,
        any::<bool>(),
        0.5..4.0f64,
        0.1..2.0f64,
        0.05..0.9f64,
    )
        .prop_map(|(gamma, s, complex, lre, lim, eps_frac)| Draw {
            gamma,
            s,
            lambda_re: if complex { 0.5 } else { lre },
            lambda_im: if complex { lim } else { 0.0 },
            eps_frac,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn structural_invariants(d in draw()) {
        let p = d.params();
        let r = defects(&p);
        prop_assert!(r.map_reflection < 1e-10, "{d:?} {r:?}");
        prop_assert!(r.potential_pt < 1e-9, "{d:?} {r:?}");
        prop_assert!(r.quadratic < 1e-10, "{d:?} {r:?}");
        prop_assert!(r.quantization < 1e-10, "{d:?} {r:?}");
        prop_assert!(r.epsilon_dependence < 1e-12, "{d:?} {r:?}");
    }

    #[test]
    fn radial_limit_agrees_with_closed_form(gamma in 1.1..2.5f64, s in 2.0..10.0f64, lambda in 0.5..4.0f64) {
        let a = hermitian_agreement(gamma, s, lambda);
        prop_assert_eq!(a.count_mismatch, 0);
        prop_assert!(a.energy < 1e-12, "{a:?}");
        prop_assert!(a.norm < 1e-8, "{a:?}");
    }

    #[test]
    fn spectrum_is_closed_under_conjugation(d in draw()) {
        let r = full_spectrum(&d.params()).unwrap();
        for sv in &r.states {
            let paired = r.states.iter().any(|o| (o.energy - sv.energy.conj()).norm() < 1e-12 * sv.energy.norm().max(1.0));
            prop_assert!(paired, "{sv:?}");
        }
    }

    #[test]
    fn bosonic_and_partner_identities(d in draw()) {
        let p = d.params();
        let map = map_table(&p, -5.0, 5.0, 201).unwrap();
        for q in [QuasiParity::Plus, QuasiParity::Minus] {
            if let Ok(def) = identity_defects(&p, q, &map) {
                let scale = def.bosonic.max(def.partner);
                prop_assert!(scale < 1e-8, "{d:?} {q:?} {def:?}");
            }
        }
    }

    #[test]
    fn ground_states_solve_the_equation(d in draw()) {
        let p = d.params();
        let map = map_table(&p, -3.0, 3.0, 3001).unwrap();
        let r = full_spectrum(&p).unwrap();
        for sv in r.states.iter().filter(|sv| sv.label.n == 0) {
            let rep = schrodinger_residual(&p, sv, &map, JacobiForm::CoshTwoU).unwrap();
            prop_assert!(rep.analytic_residual < 1e-9, "{d:?} {rep:?}");
        }
    }
}

#[test]
fn jacobi_sum_matches_recurrence() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let n = rng.gen_range(0..=10);
        let alpha = c(rng.gen_range(-0.9..3.0), rng.gen_range(-2.0..2.0));
        let beta = c(rng.gen_range(-0.9..3.0), rng.gen_range(-2.0..2.0));
        let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0));
        let spec = JacobiSpec::new(n, alpha, beta).unwrap();
        let a = jacobi_eval(&spec, z).unwrap();
        let b = jacobi_recurrence(&spec, z);
        assert!(
            (a - b).norm() <= 1e-12 * b.norm(),
            "n={n} α={alpha} β={beta} z={z}: {a} vs {b}"
        );
    }
}
