//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.
//!
//! A criterion listed in `UNATTAINABLE` still prints FAIL, but only an
//! unexpected failure makes the process exit nonzero.

use std::path::{Path, PathBuf};
use std::process::Command as Process;
use std::time::{Duration, Instant};

use bloch_speed::basis::{make_basis, BlochState};
use bloch_speed::liouvillian::{bloch_generator, LindbladModel, PhaseLabel};
use bloch_speed::linalg::{eigh, spectrum, CMatrix, HermitianMatrix, C64, ONE, ZERO};
use bloch_speed::metric::{hermitian_counterpart, param_count, MetricOperator, OperatorKind};
use bloch_speed::models::{dephasing_model, pt_closed_form, pt_model, TwoLevelParams};
use bloch_speed::propagator::evolve_exact;
use bloch_speed::speed::{
    aa_speed, radial_speed, sk_velocity, speed_squared, variance, wy_skew, FUBINI_STUDY_RATIO,
};
use bloch_speed::unravel::{ensemble_at_times, trajectory_rng};
use bloch_speed::verify::{random_density, random_hermitian, random_matrix, random_pure_state, random_unitary};
use bloch_speed_cli::{run_classify, run_figure1, Command, RunConfig};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn params(g: f64, gamma: f64) -> TwoLevelParams {
    TwoLevelParams::new(g, gamma).unwrap()
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn criterion_1() -> Outcome {
    let mut rng = trajectory_rng(101, 0);
    let basis = make_basis(2).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let g = rng.random_range(0.1..5.0);
        let gamma = rng.random_range(0.1..5.0);
        let gen = bloch_generator(&pt_model(params(g, gamma)), &basis).map_err(|e| e.to_string())?;
        let got = spectrum(&gen.full).map_err(|e| e.to_string())?.values;
        let root = c(gamma * gamma - g * g, 0.0).sqrt();
        let mut want = vec![c(0.0, 0.0), c(-2.0 * gamma, 0.0), c(-gamma, 0.0) + root, c(-gamma, 0.0) - root];
        for z in &got {
            let (k, d) = want
                .iter()
                .enumerate()
                .map(|(k, w)| (k, (w - z).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            worst = worst.max(d);
            want.remove(k);
        }
    }
    ensure(worst <= 1e-9, || format!("max eigenvalue error {worst:e}"))?;
    Ok(format!("max eigenvalue error {worst:.1e}"))
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    for (g, gamma, want) in [
        (2.0, 1.0, PhaseLabel::Unbroken),
        (1.0, 1.0, PhaseLabel::ExceptionalPoint),
        (1.0, 2.0, PhaseLabel::Broken),
    ] {
        let cfg = RunConfig {
            command: Command::Classify,
            g,
            gamma,
            ..RunConfig::default()
        };
        let cls = run_classify(&cfg).map_err(|e| e.to_string())?;
        ensure(cls.label == want, || format!("(g, γ) = ({g}, {gamma}) gave {}", cls.label))?;
        if want == PhaseLabel::ExceptionalPoint {
            let cond = cls.eigenvalues.vector_condition;
            ensure(cls.coalescence_gap <= 1e-7 || cond > 1e8, || {
                format!("EP gap {:e}, condition {cond:e}", cls.coalescence_gap)
            })?;
            notes.push(format!("EP gap {:.1e}", cls.coalescence_gap));
        }
    }
    Ok(notes.join(", "))
}

fn criterion_3() -> Outcome {
    let mut rng = trajectory_rng(103, 0);
    let basis = make_basis(2).unwrap();
    let mut worst = 0.0f64;
    let mut phases = [0usize; 3];
    for draw in 0..50 {
        let g = rng.random_range(0.1..5.0);
        let gamma = match draw % 3 {
            0 => rng.random_range(0.05..g),
            1 => g,
            _ => rng.random_range(g..g + 5.0),
        };
        phases[draw % 3] += 1;
        let p = params(g, gamma);
        let gen = bloch_generator(&pt_model(p), &basis).unwrap();
        let rank = rng.random_range(1..=2);
        let r0 = basis.embed(&random_density(2, rank, &mut rng)).unwrap();
        for k in 0..=200 {
            let t = 0.05 * k as f64;
            let a = evolve_exact(&gen, &r0, t).map_err(|e| e.to_string())?;
            let b = pt_closed_form(p, &r0, t).map_err(|e| e.to_string())?;
            for (x, y) in a.r.iter().zip(&b.r) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    ensure(worst <= 1e-9, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e} over {phases:?} unbroken/EP/broken draws"))
}

fn criterion_4() -> Outcome {
    let (g, gamma) = (1.3, 0.4);
    let model = dephasing_model(params(g, gamma));
    let basis = make_basis(2).unwrap();
    let gen = bloch_generator(&model, &basis).unwrap();
    let r0 = BlochState::new(2, vec![0.4, -0.3, 0.2]).unwrap();
    let transverse = 0.4f64 * 0.4 + 0.3 * 0.3;
    let mut worst = 0.0f64;
    for k in 0..1000 {
        let t = 0.005 * k as f64;
        let rho = basis.reconstruct(&evolve_exact(&gen, &r0, t).unwrap()).unwrap();
        let v2 = speed_squared(&model, &rho, &basis).map_err(|e| e.to_string())?;
        let want = (-4.0 * gamma * t).exp() * (4.0 * gamma * gamma + g * g) * transverse;
        worst = worst.max((v2 - want).abs() / want);
    }
    ensure(worst <= 1e-10, || format!("max relative error {worst:e}"))?;
    Ok(format!("max relative error {worst:.1e}"))
}

/// S(X) = tr(X†Xρ²) − tr(XρX†ρ), written out independently of the library.
fn skew_oracle(x: &CMatrix, rho: &CMatrix) -> f64 {
    let n = x.dim();
    let xd = x.adjoint();
    let a = &(&(&xd * x) * rho) * rho;
    let b = &(&(x * rho) * &xd) * rho;
    (0..n).map(|i| (a[(i, i)] - b[(i, i)]).re).sum()
}

fn criterion_5() -> Outcome {
    let mut rng = trajectory_rng(105, 0);
    let mut worst = 0.0f64;
    for draw in 0..1000 {
        let n = 2 + draw % 2;
        let basis = make_basis(n).unwrap();
        let h = random_hermitian(n, rng.random_range(0.1..2.0), &mut rng);
        let n_l = rng.random_range(1..=3);
        let ls: Vec<CMatrix> = (0..n_l)
            .map(|_| random_matrix(n, &mut rng).scale_real(rng.random_range(0.05..1.0)))
            .collect();
        let model = LindbladModel::new(h, ls).unwrap();
        let rank = rng.random_range(1..=n);
        let rho = random_density(n, rank, &mut rng);
        let v_r = radial_speed(&model, &rho, &basis).map_err(|e| e.to_string())?;
        let radius: f64 = basis.embed(&rho).unwrap().r.iter().map(|x| x * x).sum::<f64>().sqrt();
        let total: f64 = model.lindblads().iter().map(|l| skew_oracle(l, rho.matrix())).sum();
        let err = (v_r - total.abs() / radius).abs() / v_r.max(1.0);
        worst = worst.max(err);
    }
    ensure(worst <= 1e-9, || format!("max scaled error {worst:e}"))?;
    Ok(format!("max scaled error {worst:.1e}"))
}

fn variance_oracle(h: &CMatrix, rho: &CMatrix) -> f64 {
    let mean = (h * rho).trace().re;
    (&(h * h) * rho).trace().re - mean * mean
}

fn criterion_6() -> Outcome {
    let mut rng = trajectory_rng(106, 0);
    let (mut low, mut high, mut pure_gap, mut stationary) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for draw in 0..1000 {
        let n = rng.random_range(2..=4);
        let h = random_hermitian(n, 1.0, &mut rng);
        let rank = if draw % 4 == 0 { 1 } else { rng.random_range(1..=n) };
        let rho = random_density(n, rank, &mut rng);
        let skew = wy_skew(&h, &rho).map_err(|e| e.to_string())?;
        let var = variance_oracle(h.matrix(), rho.matrix());
        low = low.max(-skew);
        high = high.max(skew - var);
        if rank == 1 {
            pure_gap = pure_gap.max((skew - var).abs());
        }
        // a state diagonal in H's eigenbasis is stationary
        let (_, v) = eigh(&h);
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        let total: f64 = w.iter().sum();
        let d = CMatrix::diag_real(&w.iter().map(|x| x / total).collect::<Vec<_>>());
        let still = HermitianMatrix::symmetrized(&(&(&v * &d) * &v.adjoint()));
        stationary = stationary.max(wy_skew(&h, &still).map_err(|e| e.to_string())?.abs());
    }
    ensure(low <= 1e-10 && high <= 1e-10, || format!("sandwich violated by {low:e} / {high:e}"))?;
    ensure(pure_gap <= 1e-10, || format!("pure-state gap {pure_gap:e}"))?;
    ensure(stationary <= 1e-12, || format!("stationary skew {stationary:e}"))?;
    Ok(format!(
        "sandwich slack {:.1e}, pure gap {pure_gap:.1e}, stationary {stationary:.1e}",
        low.max(high)
    ))
}

fn criterion_7() -> Outcome {
    ensure(FUBINI_STUDY_RATIO == 2.0, || "documented ratio is not 2".into())?;
    let mut rng = trajectory_rng(107, 0);
    let (mut aa_err, mut hs_err) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let n = rng.random_range(2..=5);
        let h = random_hermitian(n, 1.0, &mut rng);
        let psi = random_pure_state(n, &mut rng);
        let rho = HermitianMatrix::projector(&psi);
        let var = variance_oracle(h.matrix(), rho.matrix());
        let aa = aa_speed(&h, &psi).map_err(|e| e.to_string())?;
        let v = sk_velocity(&h, &psi).map_err(|e| e.to_string())?;
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        aa_err = aa_err.max((aa - 4.0 * var).abs()).max((aa - 4.0 * vv).abs());
        let unitary = LindbladModel::new(h.clone(), vec![]).unwrap();
        let v2 = speed_squared(&unitary, &rho, &make_basis(n).unwrap()).map_err(|e| e.to_string())?;
        hs_err = hs_err.max((v2 - 2.0 * var).abs()).max((aa - FUBINI_STUDY_RATIO * v2).abs());
        ensure((variance(&h, &rho) - var).abs() < 1e-12, || "variance routes disagree".into())?;
    }
    ensure(aa_err <= 1e-12, || format!("aa speed error {aa_err:e}"))?;
    ensure(hs_err <= 1e-10, || format!("Hilbert–Schmidt speed error {hs_err:e}"))?;
    // dyadic case: H = σx/2 on |0⟩ gives ΔH² = 1/4 with no rounding anywhere
    let h = HermitianMatrix::new(CMatrix::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]])).unwrap();
    let psi = [ONE, ZERO];
    let aa = aa_speed(&h, &psi).unwrap();
    let rho = HermitianMatrix::projector(&psi);
    let v2 = speed_squared(&LindbladModel::new(h, vec![]).unwrap(), &rho, &make_basis(2).unwrap()).unwrap();
    ensure(aa == FUBINI_STUDY_RATIO * v2, || format!("aa {aa} vs 2·{v2}"))?;
    Ok(format!("aa error {aa_err:.1e}, Hilbert–Schmidt error {hs_err:.1e}"))
}

/// Interior local maxima of `y`, refined by a parabola through the three grid points.
fn local_maxima(t: &[f64], y: &[f64]) -> Vec<f64> {
    (1..y.len() - 1)
        .filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1])
        .map(|i| {
            let h = t[i + 1] - t[i];
            let den = y[i - 1] - 2.0 * y[i] + y[i + 1];
            t[i] + 0.5 * h * (y[i - 1] - y[i + 1]) / den
        })
        .collect()
}

/// Largest relative deviation of consecutive spacings from `tau`.
fn spacing_error(times: &[f64], tau: f64) -> f64 {
    times
        .windows(2)
        .map(|w| ((w[1] - w[0]) - tau).abs() / tau)
        .fold(0.0, f64::max)
}

fn criterion_8() -> Outcome {
    let cfg = RunConfig {
        command: Command::Figure1,
        t_max: bloch_speed_cli::figure1_default_t_max(1.0),
        ..RunConfig::default()
    };
    let tables = run_figure1(&cfg).map_err(|e| e.to_string())?;
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for (name, table) in &tables {
        let v_r0 = table.samples[0].v_radial.abs();
        if v_r0 > 1e-10 {
            failures.push(format!("{name}: v_R(0) = {v_r0:e}"));
        }
    }

    let (g, gamma) = (1.0f64, 0.5f64);
    let tau = std::f64::consts::PI / (g * g - gamma * gamma).sqrt();
    let unbroken = &tables.iter().find(|(n, _)| *n == "unbroken").unwrap().1;
    let within: Vec<_> = unbroken.samples.iter().filter(|s| s.t <= 3.0 * tau).collect();
    let t: Vec<f64> = within.iter().map(|s| s.t).collect();
    let column = |f: &dyn Fn(&bloch_speed::speed::SpeedSample) -> f64| -> Vec<f64> { within.iter().map(|s| f(s)).collect() };

    let maxima = local_maxima(&t, &column(&|s| s.v));
    if maxima.len() < 2 {
        failures.push(format!("{} local maxima of v on [0, 3τ], need 2", maxima.len()));
    } else {
        let err = spacing_error(&maxima, tau);
        if err > 0.02 {
            failures.push(format!("v maxima spacing off by {:.2}%", 100.0 * err));
        }
    }
    // dv/dt vanishes exactly where r_y is extremal; those plateaus carry the period
    let ry = column(&|s| s.r[1]);
    let mut plateaus = local_maxima(&t, &ry);
    plateaus.extend(local_maxima(&t, &ry.iter().map(|x| -x).collect::<Vec<_>>()));
    plateaus.sort_by(f64::total_cmp);
    notes.push(format!(
        "v stationary points {} (period error {:.1e})",
        plateaus.len(),
        spacing_error(&plateaus, tau)
    ));
    let vr_maxima = local_maxima(&t, &column(&|s| s.v_radial));
    let vr_err = spacing_error(&vr_maxima, tau);
    if vr_maxima.len() < 2 || vr_err > 0.02 {
        failures.push(format!("v_R maxima {} with spacing error {vr_err:.2e}", vr_maxima.len()));
    }
    notes.push(format!("v_R maxima {} (period error {vr_err:.1e})", vr_maxima.len()));

    // refine the interior v_R minima on the continuous trajectory
    let p = params(g, gamma);
    let model = pt_model(p);
    let basis = make_basis(2).unwrap();
    let gen = bloch_generator(&model, &basis).unwrap();
    let r0 = BlochState::new(2, unbroken.samples[0].r.clone()).unwrap();
    let v_r_at = |t: f64| -> f64 {
        let rho = basis.reconstruct(&evolve_exact(&gen, &r0, t).unwrap()).unwrap();
        radial_speed(&model, &rho, &basis).unwrap()
    };
    let minima = local_maxima(&t, &column(&|s| -s.v_radial));
    let mut worst_align = 0.0f64;
    for &t0 in &minima {
        let (mut tc, mut h) = (t0, 1e-3);
        for _ in 0..6 {
            let (a, b, cc) = (v_r_at(tc - h), v_r_at(tc), v_r_at(tc + h));
            let den = a - 2.0 * b + cc;
            if den > 0.0 {
                tc += 0.5 * h * (a - cc) / den;
            }
            h *= 0.1;
        }
        let r = evolve_exact(&gen, &r0, tc).unwrap();
        worst_align = worst_align.max(r.r[0].abs()).max(r.r[1].abs());
    }
    if minima.is_empty() || worst_align > 1e-6 {
        failures.push(format!("{} v_R minima, |r_x|, |r_y| up to {worst_align:e}", minima.len()));
    }
    notes.push(format!("{} v_R minima aligned to {worst_align:.1e}", minima.len()));

    // once v_T/v reaches rounding level the sampled curve is noise; count resolvable maxima only
    let broken = &tables.iter().find(|(n, _)| *n == "broken").unwrap().1;
    let resolved: Vec<_> = broken.samples.iter().take_while(|s| s.v_tangential > 1e-9 * s.v).collect();
    let bt: Vec<f64> = resolved.iter().map(|s| s.t).collect();
    let vt: Vec<f64> = resolved.iter().map(|s| s.v_tangential).collect();
    let n_max = local_maxima(&bt, &vt).len();
    if n_max > 1 {
        failures.push(format!("broken phase v_T has {n_max} maxima"));
    }
    let t_floor = resolved.last().map_or(0.0, |s| s.t);
    notes.push(format!("broken v_T maxima {n_max} on [0, {t_floor:.2}] above rounding level"));

    if failures.is_empty() {
        Ok(notes.join(", "))
    } else {
        Err(format!("{}; also measured: {}", failures.join("; "), notes.join(", ")))
    }
}

fn criterion_9() -> Outcome {
    let basis = make_basis(2).unwrap();
    let model = pt_model(params(2.0, 1.0));
    let gen = bloch_generator(&model, &basis).unwrap();
    let psi0 = vec![ONE, ZERO];
    let r0 = basis.embed(&HermitianMatrix::projector(&psi0)).unwrap();
    let est = ensemble_at_times(&model, &basis, &psi0, &[0.5, 1.0, 2.0], 1e-4, 10_000, 11).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for e in &est {
        let exact = evolve_exact(&gen, &r0, e.t).unwrap();
        for j in 0..3 {
            let dev = (e.mean_r[j] - exact.r[j]).abs();
            let se = e.standard_error[j];
            ensure(dev <= (3.0 * se).max(1e-12), || format!("t = {} component {j}: {dev:e} > 3·{se:e}", e.t))?;
            if se > 0.0 {
                worst = worst.max(dev / se);
            }
        }
    }

    let pure = LindbladModel::new(
        HermitianMatrix::new(CMatrix::zeros(2)).unwrap(),
        vec![CMatrix::diag_real(&[1.0, -1.0])],
    )
    .unwrap();
    let psi = vec![c(0.6, 0.0), c(0.0, 0.8)];
    let z0 = 0.36 - 0.64;
    let est = ensemble_at_times(&pure, &basis, &psi, &[0.5, 1.0, 2.0], 1e-3, 10_000, 12).map_err(|e| e.to_string())?;
    for e in &est {
        let z = e.mean_rho.matrix()[(0, 0)].re - e.mean_rho.matrix()[(1, 1)].re;
        let se = std::f64::consts::SQRT_2 * e.standard_error[2];
        ensure((z - z0).abs() <= (3.0 * se).max(1e-12), || format!("tr(σz ρ̄) drifted to {z} at t = {}", e.t))?;
    }
    Ok(format!("largest deviation {worst:.2} standard errors"))
}

fn criterion_10() -> Outcome {
    ensure(
        (param_count(2, OperatorKind::Hermitian), param_count(2, OperatorKind::PtSymmetric)) == (4, 6),
        || "param_count(2, ·) != (4, 6)".into(),
    )?;
    let mut rng = trajectory_rng(110, 0);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let n = 2 + k % 4;
        let mut lambda: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let w = random_unitary(n, &mut rng);
        let h = &(&w * &CMatrix::diag_real(&lambda)) * &w.adjoint();
        // u = V diag(d) V† with cond(u²) ≤ 1e6
        let v = random_unitary(n, &mut rng);
        let mut d: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.random_range(0.0..3.0))).collect();
        d[0] = 1.0;
        let u = &(&v * &CMatrix::diag_real(&d)) * &v.adjoint();
        let u_inv = &(&v * &CMatrix::diag_real(&d.iter().map(|x| 1.0 / x).collect::<Vec<_>>())) * &v.adjoint();
        let f = &(&u * &h) * &u_inv;
        let metric = MetricOperator::new(HermitianMatrix::symmetrized(&(&u * &u))).map_err(|e| e.to_string())?;
        ensure(metric.condition() <= 1e6 * (1.0 + 1e-9), || format!("metric condition {:e}", metric.condition()))?;
        let counterpart = hermitian_counterpart(&f, &metric).map_err(|e| e.to_string())?;
        let (ev, _) = eigh(&counterpart);
        lambda.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&lambda) {
            worst = worst.max((a - b).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("spectrum error {worst:e}"))?;
    Ok(format!("param counts (4, 6), spectrum error {worst:.1e}"))
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let status = Process::new(env!("CARGO_BIN_EXE_bloch-speed"))
        .args(args)
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.success(), || format!("{args:?} exited with {status}"))
}

fn same_bytes(a: &Path, b: &Path) -> Result<(), String> {
    let x = std::fs::read(a).map_err(|e| format!("{}: {e}", a.display()))?;
    let y = std::fs::read(b).map_err(|e| format!("{}: {e}", b.display()))?;
    ensure(!x.is_empty() && x == y, || format!("{} and {} differ", a.display(), b.display()))
}

fn criterion_11() -> Outcome {
    let root = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    let _ = std::fs::remove_dir_all(&root);
    std::fs::create_dir_all(&root).map_err(|e| e.to_string())?;
    let commands: Vec<(&str, Vec<&str>)> = vec![
        ("simulate.csv", vec!["simulate", "--g", "2", "--gamma", "1", "--t-max", "3"]),
        ("simulate.json", vec!["simulate", "--model", "dephasing", "--init", "plus_x", "--t-max", "2", "--format", "json"]),
        ("classify.json", vec!["classify", "--g", "1", "--gamma", "1", "--format", "json"]),
        ("sweep.csv", vec!["sweep"]),
        ("unravel.csv", vec!["unravel", "--g", "2", "--gamma", "1", "--t-max", "1", "--n-traj", "300", "--seed", "42"]),
        ("verify.json", vec!["verify", "--cases", "30", "--seed", "9"]),
    ];
    for (file, args) in &commands {
        let mut outs = Vec::new();
        for run in 0..2 {
            let path = root.join(format!("{run}-{file}"));
            let mut full: Vec<&str> = args.clone();
            let p = path.to_str().unwrap().to_string();
            full.push("--out");
            full.push(&p);
            run_cli(&full)?;
            outs.push(path);
        }
        same_bytes(&outs[0], &outs[1])?;
    }
    let dirs = [root.join("fig-a"), root.join("fig-b")];
    for d in &dirs {
        run_cli(&["figure1", "--out", d.to_str().unwrap()])?;
    }
    for name in ["unbroken", "critical", "broken"] {
        let f = format!("figure1_{name}.csv");
        same_bytes(&dirs[0].join(&f), &dirs[1].join(&f))?;
    }
    Ok(format!("{} commands byte-identical on repeat", commands.len() + 1))
}

/// Criteria that cannot hold as stated, with the reason printed next to their FAIL line.
const UNATTAINABLE: &[(usize, &str)] = &[(
    8,
    "v(t) has no local maxima in the PT model: with s = dr/dt, ds/dt = Λs and \
     d(v²)/dt = 2 s·Λs = −4γ s_y² ≤ 0, so v only has flat stationary points one period apart",
)];

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<u64>); 11] = [
        ("Liouvillian spectrum", criterion_1, Some(1)),
        ("phase classification", criterion_2, Some(1)),
        ("closed-form trajectory oracle", criterion_3, Some(5)),
        ("dephasing speed law", criterion_4, Some(1)),
        ("radial-speed identity", criterion_5, Some(10)),
        ("skew-information sandwich", criterion_6, Some(5)),
        ("unitary speed relations", criterion_7, None),
        ("three-phase speed profiles", criterion_8, Some(5)),
        ("Monte Carlo oracle", criterion_9, Some(60)),
        ("pseudo-Hermiticity toolkit", criterion_10, Some(1)),
        ("determinism", criterion_11, None),
    ];
    let mut failed = Vec::new();
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match (result, budget) {
            (Ok(_), Some(b)) if elapsed > Duration::from_secs(*b) => {
                Err(format!("took {elapsed:.2?}, budget {b} s"))
            }
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail} [{elapsed:.2?}]", k + 1),
            Err(detail) => {
                failed.push(k + 1);
                println!("FAIL criterion {:>2} {name}: {detail} [{elapsed:.2?}]", k + 1);
            }
        }
    }
    let unexpected: Vec<usize> = failed
        .iter()
        .copied()
        .filter(|k| !UNATTAINABLE.iter().any(|(u, _)| u == k))
        .collect();
    for (k, why) in UNATTAINABLE {
        if failed.contains(k) {
            println!("note: criterion {k} is unattainable as stated: {why}");
        } else {
            println!("note: criterion {k} was expected to fail but passed");
        }
    }
    println!(
        "{} of {} criteria passed; {} failed ({} unexpected)",
        criteria.len() - failed.len(),
        criteria.len(),
        failed.len(),
        unexpected.len()
    );
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}
