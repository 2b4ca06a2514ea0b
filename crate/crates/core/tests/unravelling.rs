use bloch_speed::basis::make_basis;
use bloch_speed::liouvillian::{bloch_generator, LindbladModel};
use bloch_speed::linalg::{pauli_z, CMatrix, HermitianMatrix, C64, ONE, ZERO};
use bloch_speed::models::{pt_model, TwoLevelParams};
use bloch_speed::propagator::evolve_exact;
use bloch_speed::unravel::{ensemble_at_times, ensemble_mean, jump_trajectory};

const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn plus_x() -> Vec<C64> {
    vec![ONE * S, ONE * S]
}

fn dissipative(h: CMatrix, ls: Vec<CMatrix>) -> LindbladModel {
    LindbladModel::new(HermitianMatrix::new(h).unwrap(), ls).unwrap()
}

fn pure_dephasing(gamma: f64) -> LindbladModel {
    dissipative(CMatrix::zeros(2), vec![pauli_z().scale_real(gamma.sqrt())])
}

/// Same dissipator as √γ σz, written with the two projectors onto σz eigenstates.
fn projector_unravelling(gamma: f64) -> LindbladModel {
    let c = (2.0 * gamma).sqrt();
    dissipative(
        CMatrix::zeros(2),
        vec![CMatrix::diag_real(&[c, 0.0]), CMatrix::diag_real(&[0.0, c])],
    )
}

#[test]
fn pt_ensemble_tracks_the_master_equation() {
    let model = pt_model(TwoLevelParams::new(2.0, 1.0).unwrap());
    let basis = make_basis(2).unwrap();
    let gen = bloch_generator(&model, &basis).unwrap();
    let psi0 = vec![ONE, ZERO];
    let r0 = basis.embed(&HermitianMatrix::projector(&psi0)).unwrap();
    let est = ensemble_at_times(&model, &basis, &psi0, &[0.5, 1.0, 2.0], 2e-4, 2000, 3).unwrap();
    for e in &est {
        let exact = evolve_exact(&gen, &r0, e.t).unwrap();
        for j in 0..3 {
            let tol = (4.0 * e.standard_error[j]).max(1e-12);
            assert!((e.mean_r[j] - exact.r[j]).abs() <= tol, "t = {} component {j}", e.t);
        }
    }
}

#[test]
fn projector_unravelling_has_the_same_generator() {
    let basis = make_basis(2).unwrap();
    let a = bloch_generator(&projector_unravelling(0.7), &basis).unwrap();
    let b = bloch_generator(&pure_dephasing(0.7), &basis).unwrap();
    assert!((&a.lambda - &b.lambda).max_norm() < 1e-14);
}

#[test]
fn collapse_follows_the_born_rule() {
    let model = projector_unravelling(1.0);
    let runs = 10_000u64;
    let mut up = 0;
    for stream in 0..runs {
        let traj = jump_trajectory(&model, &plus_x(), 10.0, 0.01, 2718, stream).unwrap();
        let last = traj.states.last().unwrap();
        let p_up = last[0].norm_sqr();
        assert!(p_up < 1e-12 || p_up > 1.0 - 1e-12, "trajectory {stream} did not collapse");
        if p_up > 0.5 {
            up += 1;
        }
    }
    let frac = up as f64 / runs as f64;
    let sigma = 0.5 / (runs as f64).sqrt();
    assert!((frac - 0.5).abs() <= 3.0 * sigma, "fraction up {frac}");
}

#[test]
fn population_is_a_martingale_under_pure_dephasing() {
    let model = pure_dephasing(0.8);
    let basis = make_basis(2).unwrap();
    let psi0 = vec![ONE * 0.6, C64::new(0.0, 0.8)];
    let z0 = HermitianMatrix::projector(&psi0).trace_product(&pauli_z()).re;
    let est = ensemble_at_times(&model, &basis, &psi0, &[0.5, 1.0, 2.0], 1e-3, 1000, 8).unwrap();
    for e in &est {
        let z = e.mean_rho.trace_product(&pauli_z()).re;
        let se = e.standard_error[2] * std::f64::consts::SQRT_2;
        assert!((z - z0).abs() <= (3.0 * se).max(1e-12), "t = {}", e.t);
    }
}

#[test]
fn balanced_gain_and_loss_leave_z_at_zero() {
    let model = pure_dephasing(1.0);
    let basis = make_basis(2).unwrap();
    let e = ensemble_mean(&model, &basis, &plus_x(), 1.0, 1e-3, 1000, 4).unwrap();
    assert!(e.mean_r[2].abs() <= (3.0 * e.standard_error[2]).max(1e-12));
}

#[test]
fn error_shrinks_like_inverse_square_root() {
    let gamma = 1.0;
    let t = 0.25;
    let model = pure_dephasing(gamma);
    let basis = make_basis(2).unwrap();
    let exact_x = (-2.0 * gamma * t as f64).exp() * S;
    let seeds = 16;
    let mut points = Vec::new();
    for &n in &[100usize, 1000, 10_000] {
        let mse: f64 = (0..seeds)
            .map(|s| {
                let e = ensemble_mean(&model, &basis, &plus_x(), t, 5e-4, n, 100 + s).unwrap();
                (e.mean_r[0] - exact_x).powi(2)
            })
            .sum::<f64>()
            / seeds as f64;
        points.push(((n as f64).ln(), 0.5 * mse.ln()));
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / 3.0;
    let my = points.iter().map(|p| p.1).sum::<f64>() / 3.0;
    let slope = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / points.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope + 0.5).abs() <= 0.1, "slope {slope}");
}
