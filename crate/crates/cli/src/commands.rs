//! The three subcommands, expressed as independent tasks that each yield
//! records. Tasks run concurrently; records keep task order.

use std::f64::consts::SQRT_2;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use susy_radial::analytic::{
    ep_ground_energy_closed_form, ep_ground_state, ep_required_b2, ip_ground_state,
    ip_ground_state_checked, kratzer_energy, kratzer_ground_wavefunction, pseudoharmonic_energy,
    pseudoharmonic_ground_wavefunction, transformed_ground_energy, ClosedFormWavefunction,
    CoreCouplingSign, Superpotential,
};
use susy_radial::duality::{
    dual_energy, map_frame, map_state, source_radial_index, target_radial_index,
    transform_inverse_power, DualMap,
};
use susy_radial::oracle::{
    plan_grid, residual_check, solve_auto, solve_radial, GridPlan, Method,
    NumericSpectrum, RadialGrid, SolverConfig,
};
use susy_radial::{
    EvenPowerPotential, InversePowerPotential, KratzerPotential, PotentialSpec,
    PseudoharmonicPotential, QuantumFrame,
};

use crate::record::{Check, OracleMeta, Required, ResultRecord, Target};
use crate::spec::{Batch, Command, Family, RunSpec};
use crate::Failure;

/// Scaled residual accepted for a closed-form ground state.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Loosest tolerance applied to oracle comparisons.
pub const ORACLE_TOLERANCE: f64 = 1e-6;
const MATCHING_TOLERANCE: f64 = 1e-12;

enum Task {
    /// Levels of one potential in one frame.
    Levels { family: Family, frame: QuantumFrame, states: Vec<u32>, label: Option<String> },
    KratzerMap { p: KratzerPotential, frame: QuantumFrame, states: Vec<u32>, lambda: i64 },
    QesMap { family: Family, frame: QuantumFrame, lambda: i64 },
    SignReport { b: [f64; 4], frame: QuantumFrame, label: String },
    Ladder { family: Family, frame: QuantumFrame, states: Vec<u32> },
}

struct Analytic {
    energy: f64,
    potential: PotentialSpec,
    wavefunction: Option<ClosedFormWavefunction>,
    required: Option<Required>,
    constraint_residual: Option<f64>,
}

fn coefficients(family: &Family) -> Vec<(&'static str, f64)> {
    match *family {
        Family::Kratzer(p) => vec![("A", p.a()), ("B", p.b())],
        Family::Gk { a } => vec![("A", a)],
        Family::V1 { a1, a2, a3, a4 } => {
            let mut v = vec![("A2", a2), ("A3", a3), ("A4", a4)];
            v.extend(a1.map(|x| ("A1", x)));
            v
        }
        Family::V2 { b1, b2, b3, b4 } => {
            let mut v = vec![("B1", b1), ("B3", b3), ("B4", b4)];
            v.extend(b2.map(|x| ("B2", x)));
            v
        }
        Family::Pseudoharmonic(p) => vec![("Btil", p.b_tilde()), ("Atil", p.a_tilde()), ("V0", p.v0())],
    }
}

fn record(spec: &RunSpec, family: &Family, frame: &QuantumFrame, n: u32) -> ResultRecord {
    let mut r = ResultRecord::new(spec.command.name(), family.name(), frame.dim(), frame.ell(), n);
    r.coefficients = coefficients(family).into_iter().collect();
    r
}

fn analytic(family: &Family, frame: &QuantumFrame, n: u32) -> Result<Analytic, Failure> {
    let ground = n == 0;
    Ok(match *family {
        Family::Kratzer(p) => Analytic {
            energy: kratzer_energy(&p, frame, n),
            potential: p.into(),
            wavefunction: ground.then(|| kratzer_ground_wavefunction(&p, frame)),
            required: None,
            constraint_residual: None,
        },
        Family::Gk { a } => {
            let p = PseudoharmonicPotential::goldman_krivchenkov(a).map_err(Failure::from_core)?;
            analytic(&Family::Pseudoharmonic(p), frame, n)?
        }
        Family::Pseudoharmonic(p) => Analytic {
            energy: pseudoharmonic_energy(&p, frame, n),
            potential: p.into(),
            wavefunction: ground.then(|| pseudoharmonic_ground_wavefunction(&p, frame)),
            required: None,
            constraint_residual: None,
        },
        Family::V1 { a1, a2, a3, a4 } => {
            let sol = match a1 {
                Some(a1) => ip_ground_state_checked(&InversePowerPotential { a1, a2, a3, a4 }, frame),
                None => ip_ground_state(a2, a3, a4, frame),
            }
            .map_err(Failure::from_core)?;
            let a1 = a1.unwrap_or(sol.required_coefficient);
            Analytic {
                energy: sol.energy,
                potential: InversePowerPotential { a1, a2, a3, a4 }.into(),
                wavefunction: Some(sol.wavefunction()),
                required: Some(Required { name: "A1", value: sol.required_coefficient }),
                constraint_residual: Some(sol.constraint_residual),
            }
        }
        Family::V2 { b1, b2, b3, b4 } => {
            let b2 = match b2 {
                Some(b) => b,
                None => ep_required_b2(b1, b3, b4, frame).map_err(Failure::from_core)?,
            };
            let sol = ep_ground_state(b1, b2, b3, b4, frame).map_err(Failure::from_core)?;
            Analytic {
                energy: sol.energy,
                potential: EvenPowerPotential { b1, b2, b3, b4 }.into(),
                wavefunction: Some(sol.wavefunction()),
                required: Some(Required { name: "B2", value: sol.required_coefficient }),
                constraint_residual: Some(sol.constraint_residual),
            }
        }
    })
}

fn planning_energy(hint: f64) -> f64 {
    hint + GridPlan::default().energy_margin * hint.abs()
}

fn oracle(spec: &RunSpec, p: &PotentialSpec, frame: &QuantumFrame, k: usize, hint: f64) -> Result<NumericSpectrum, Failure> {
    let cfg = SolverConfig::with_method(spec.method);
    let plan = GridPlan::default();
    if !spec.grid.any() {
        return solve_auto(p, frame, &cfg, k, hint, &plan).map_err(Failure::from_core);
    }
    let (points, r_min, r_max) = match (spec.grid.points, spec.grid.r_min, spec.grid.r_max) {
        (Some(n), Some(a), Some(b)) => (n, a, b),
        (n, a, b) => {
            let base = plan_grid(p, frame, planning_energy(hint), spec.method, &plan).map_err(Failure::from_core)?;
            (n.unwrap_or(base.points()), a.unwrap_or(base.r_min()), b.unwrap_or(base.r_max()))
        }
    };
    let grid = RadialGrid::new(r_min, r_max, points).map_err(Failure::from_core)?;
    solve_radial(p, frame, &cfg, &grid, k).map_err(Failure::from_core)
}

fn oracle_meta(s: &NumericSpectrum, level: usize) -> OracleMeta {
    let e = &s.entries[level];
    OracleMeta {
        method: match s.method {
            Method::FiniteDifference => "finite_difference",
            Method::NumerovShooting => "numerov_shooting",
        },
        r_min: s.grid.r_min(),
        r_max: s.grid.r_max(),
        points: s.grid.points(),
        coarse_energy: e.coarse_energy,
        fine_energy: e.fine_energy,
        node_count: e.node_count,
    }
}

/// Residual of the closed-form ground state, on the oracle grid when one
/// exists and on a planned grid otherwise.
fn ground_residual(a: &Analytic, frame: &QuantumFrame, grid: Option<RadialGrid>) -> Result<Option<f64>, Failure> {
    let Some(psi) = &a.wavefunction else {
        return Ok(None);
    };
    let grid = match grid {
        Some(g) => g,
        None => plan_grid(&a.potential, frame, planning_energy(a.energy), Method::FiniteDifference, &GridPlan::default())
            .map_err(Failure::from_core)?,
    };
    residual_check(&a.potential, frame, psi, a.energy, &grid)
        .map(Some)
        .map_err(Failure::from_core)
}

fn levels(spec: &RunSpec, family: &Family, frame: &QuantumFrame, states: &[u32], label: &Option<String>) -> Result<Vec<ResultRecord>, Failure> {
    let analytic_levels = states
        .iter()
        .map(|&n| analytic(family, frame, n))
        .collect::<Result<Vec<_>, _>>()?;
    let top = *states.iter().max().expect("non-empty states") as usize;
    let numeric = if spec.oracle {
        let hint = analytic(family, frame, top as u32)?.energy;
        Some(oracle(spec, &analytic_levels[0].potential, frame, top + 1, hint)?)
    } else {
        None
    };
    let mut out = Vec::new();
    for (&n, a) in states.iter().zip(&analytic_levels) {
        let mut r = record(spec, family, frame, n);
        r.label = label.clone();
        r.analytic_energy = Some(a.energy);
        r.required_coefficient = a.required.clone();
        r.constraint_residual = a.constraint_residual;
        if let Some(s) = &numeric {
            let e = s.entries[n as usize].energy;
            r.oracle_energy = Some(e);
            r.oracle = Some(oracle_meta(s, n as usize));
            r.push(Check::relative("oracle", Some(e), a.energy, spec.tolerance));
            r.push(Check::exact("node_count", s.entries[n as usize].node_count, n as usize));
        }
        r.residual = ground_residual(a, frame, numeric.as_ref().map(|s| s.grid))?;
        if let Some(res) = r.residual {
            r.push(Check::bound("residual", res, RESIDUAL_TOLERANCE));
        }
        if let Family::V2 { b1, b4, .. } = family {
            let b2 = a.required.as_ref().map(|q| q.value).expect("even-power record");
            let plus = ep_ground_energy_closed_form(*b1, b2, *b4, frame, CoreCouplingSign::Positive);
            r.values.insert("closed_form_E", plus);
        }
        out.push(r);
    }
    Ok(out)
}

fn oracle_tolerance(spec: &RunSpec) -> f64 {
    spec.tolerance.max(ORACLE_TOLERANCE)
}

fn kratzer_map(spec: &RunSpec, p: &KratzerPotential, frame: &QuantumFrame, states: &[u32], lambda: i64) -> Result<Vec<ResultRecord>, Failure> {
    let family = Family::Kratzer(*p);
    let target = map_frame(frame, lambda).map_err(Failure::from_core)?;
    let gk = PseudoharmonicPotential::goldman_krivchenkov(p.a()).map_err(Failure::from_core)?;
    struct Row {
        n: u32,
        n_r: u32,
        e_n: f64,
        n_prime: i64,
        index: u32,
        lhs: f64,
        rhs: f64,
    }
    let mut rows = Vec::new();
    for &n in states {
        let n_r = source_radial_index(n as i64, frame).map_err(Failure::from_core)?;
        let e_n = kratzer_energy(p, frame, n_r);
        DualMap::new(*frame, lambda, e_n).map_err(Failure::from_core)?;
        let state = map_state(n as i64, lambda).map_err(Failure::from_core)?;
        let index = target_radial_index(state.n_prime, &target).map_err(Failure::from_core)?;
        let lhs = dual_energy(-p.b(), e_n).map_err(Failure::from_core)?;
        rows.push(Row { n, n_r, e_n, n_prime: state.n_prime, index, lhs, rhs: pseudoharmonic_energy(&gk, &target, index) });
    }
    let numeric = if spec.oracle {
        let top = rows.iter().max_by_key(|r| r.index).expect("non-empty states");
        Some(oracle(spec, &gk.into(), &target, top.index as usize + 1, top.rhs)?)
    } else {
        None
    };
    Ok(rows
        .into_iter()
        .map(|row| {
            let mut r = record(spec, &family, frame, row.n);
            r.lambda = Some(lambda);
            r.target = Some(Target { dim: target.dim(), l: target.ell(), n_prime: Some(row.n_prime), radial_index: Some(row.index) });
            r.analytic_energy = Some(row.e_n);
            r.values.insert("source_radial_index", Some(row.n_r as f64));
            r.values.insert("dual_lhs", Some(row.lhs));
            r.values.insert("dual_rhs", Some(row.rhs));
            r.push(Check::relative("duality", Some(row.lhs), row.rhs, spec.tolerance));
            if let Some(s) = &numeric {
                let e = s.entries[row.index as usize].energy;
                r.oracle_energy = Some(e);
                r.oracle = Some(oracle_meta(s, row.index as usize));
                r.push(Check::relative("oracle", Some(e), row.lhs, oracle_tolerance(spec)));
            }
            r
        })
        .collect())
}

fn qes_map(spec: &RunSpec, family: &Family, frame: &QuantumFrame, lambda: i64) -> Result<Vec<ResultRecord>, Failure> {
    let a = analytic(family, frame, 0)?;
    let PotentialSpec::InversePower(p) = a.potential else {
        return Err(Failure::validation("verify-map supports --family kratzer or v1"));
    };
    let target = map_frame(frame, lambda).map_err(Failure::from_core)?;
    let image = transform_inverse_power(&p, a.energy).map_err(Failure::from_core)?;
    let lhs = dual_energy(p.a1, a.energy).map_err(Failure::from_core)?;
    let sol = ep_ground_state(image.b1, image.b2, image.b3, image.b4, &target).map_err(Failure::from_core)?;
    let Superpotential::EvenPower(w) = sol.superpotential else {
        unreachable!("even-power solution")
    };
    let chained = transformed_ground_energy(p.a3, p.a4, w.mu).map_err(Failure::from_core)?;
    let mut r = record(spec, family, frame, 0);
    r.lambda = Some(lambda);
    r.target = Some(Target { dim: target.dim(), l: target.ell(), n_prime: None, radial_index: Some(0) });
    r.analytic_energy = Some(a.energy);
    r.required_coefficient = a.required.clone();
    r.constraint_residual = a.constraint_residual;
    for (k, v) in [("B1", image.b1), ("B2", image.b2), ("B3", image.b3), ("B4", image.b4)] {
        r.values.insert(k, Some(v));
    }
    r.values.insert("dual_lhs", Some(lhs));
    r.values.insert("dual_rhs", Some(sol.energy));
    r.values.insert("transformed_E", Some(chained));
    r.push(Check::relative("duality", Some(lhs), sol.energy, spec.tolerance));
    r.push(Check::relative("transformed", Some(chained), sol.energy, spec.tolerance));
    if spec.oracle {
        let s = oracle(spec, &image.into(), &target, 1, sol.energy)?;
        r.oracle_energy = Some(s.entries[0].energy);
        r.oracle = Some(oracle_meta(&s, 0));
        r.push(Check::relative("oracle", Some(s.entries[0].energy), lhs, oracle_tolerance(spec)));
    }
    Ok(vec![r])
}

fn sign_report(spec: &RunSpec, b: [f64; 4], frame: &QuantumFrame, label: &str) -> Result<Vec<ResultRecord>, Failure> {
    let [b1, b2, b3, b4] = b;
    let family = Family::V2 { b1, b2: Some(b2), b3, b4 };
    let mut out = levels(spec, &family, frame, &[0], &Some(label.to_string()))?;
    let r = &mut out[0];
    let plus = ep_ground_energy_closed_form(b1, b2, b4, frame, CoreCouplingSign::Positive);
    let minus = ep_ground_energy_closed_form(b1, b2, b4, frame, CoreCouplingSign::Negative);
    r.values.insert("plus_sign_E", plus);
    r.values.insert("minus_sign_E", minus);
    let oracle_e = r.oracle_energy.expect("oracle-compare always solves");
    r.values.insert("minus_sign_rel_dev", minus.map(|m| (m - oracle_e).abs() / oracle_e.abs()));
    r.push(Check::relative("plus_sign_vs_matching", plus, r.analytic_energy.expect("set"), MATCHING_TOLERANCE));
    r.push(Check::relative("plus_sign_vs_oracle", plus, oracle_e, spec.tolerance));
    Ok(out)
}

fn ladder(spec: &RunSpec, family: &Family, frame: &QuantumFrame, states: &[u32]) -> Result<Vec<ResultRecord>, Failure> {
    let b_tilde = match family {
        Family::Pseudoharmonic(p) => p.b_tilde(),
        _ => 1.0,
    };
    let expected = 2.0 * SQRT_2 * b_tilde.sqrt();
    let top = *states.iter().max().expect("non-empty states") + 1;
    let a_top = analytic(family, frame, top)?;
    let s = oracle(spec, &a_top.potential, frame, top as usize + 1, a_top.energy)?;
    let mut out = Vec::new();
    for &n in states {
        let a = analytic(family, frame, n)?;
        let mut r = record(spec, family, frame, n);
        let e = s.entries[n as usize].energy;
        let spacing = s.entries[n as usize + 1].energy - e;
        r.analytic_energy = Some(a.energy);
        r.oracle_energy = Some(e);
        r.oracle = Some(oracle_meta(&s, n as usize));
        r.values.insert("spacing", Some(spacing));
        r.values.insert("expected_spacing", Some(expected));
        r.push(Check::relative("oracle", Some(e), a.energy, spec.tolerance));
        r.push(Check::relative("spacing", Some(spacing), expected, spec.tolerance));
        out.push(r);
    }
    Ok(out)
}

fn random_frame(rng: &mut ChaCha8Rng) -> QuantumFrame {
    QuantumFrame::new(rng.gen_range(2..=6), rng.gen_range(0..=2)).expect("valid frame")
}

/// Random inverse-power instances with a normalizable closed-form ground state.
fn v1_batch(count: usize, seed: u64) -> Vec<Task> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tasks = Vec::with_capacity(count);
    while tasks.len() < count {
        let a4 = rng.gen_range(0.1..=5.0);
        let a3 = rng.gen_range(-2.0..=2.0);
        let a2 = rng.gen_range(-2.0..=1.0);
        let frame = random_frame(&mut rng);
        if ip_ground_state(a2, a3, a4, &frame).is_ok() {
            tasks.push(Task::Levels {
                family: Family::V1 { a1: None, a2, a3, a4 },
                frame,
                states: vec![0],
                label: Some(format!("random {}", tasks.len())),
            });
        }
    }
    tasks
}

/// Worked even-power instance followed by random consistent ones with `δ > ½`.
fn v2_batch(count: usize, seed: u64) -> Vec<Task> {
    let mut tasks = vec![Task::SignReport {
        b: [1.0, -4.0, 0.0, 4.0],
        frame: QuantumFrame::new(4, 0).expect("valid frame"),
        label: "worked instance".into(),
    }];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while tasks.len() < count + 1 {
        let b1: f64 = rng.gen_range(0.2..=3.0);
        let b3: f64 = rng.gen_range(-1.0..=2.0);
        let b4: f64 = rng.gen_range(0.1..=3.0);
        let frame = random_frame(&mut rng);
        if 1.5 + b3 / (2.0 * b4).sqrt() <= 0.5 {
            continue;
        }
        let b2 = ep_required_b2(b1, b3, b4, &frame).expect("valid coefficients");
        let label = format!("random {}", tasks.len() - 1);
        tasks.push(Task::SignReport { b: [b1, b2, b3, b4], frame, label });
    }
    tasks
}

fn plan(spec: &RunSpec) -> Vec<Task> {
    let frame = spec.frame;
    match (spec.command, spec.batch) {
        (Command::OracleCompare, Some(Batch::V1Random)) => v1_batch(spec.count, spec.seed),
        (Command::OracleCompare, Some(Batch::V2Sign)) => v2_batch(spec.count, spec.seed),
        (Command::OracleCompare, Some(Batch::PseudoharmonicLadder)) => vec![Task::Ladder {
            family: spec.family.expect("validated"),
            frame,
            states: spec.states.clone(),
        }],
        (Command::VerifyMap, _) => {
            let family = spec.family.expect("validated");
            spec.lambdas
                .iter()
                .map(|&lambda| match family {
                    Family::Kratzer(p) => Task::KratzerMap { p, frame, states: spec.states.clone(), lambda },
                    _ => Task::QesMap { family, frame, lambda },
                })
                .collect()
        }
        _ => vec![Task::Levels {
            family: spec.family.expect("validated"),
            frame,
            states: spec.states.clone(),
            label: None,
        }],
    }
}

fn run_task(spec: &RunSpec, task: &Task) -> Result<Vec<ResultRecord>, Failure> {
    let start = Instant::now();
    let mut records = match task {
        Task::Levels { family, frame, states, label } => levels(spec, family, frame, states, label),
        Task::KratzerMap { p, frame, states, lambda } => kratzer_map(spec, p, frame, states, *lambda),
        Task::QesMap { family, frame, lambda } => qes_map(spec, family, frame, *lambda),
        Task::SignReport { b, frame, label } => sign_report(spec, *b, frame, label),
        Task::Ladder { family, frame, states } => ladder(spec, family, frame, states),
    }?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    records.iter_mut().for_each(|r| r.timing_ms = ms);
    Ok(records)
}

/// Runs every task of `spec` on up to `spec.jobs` threads; records are
/// numbered in task order.
pub fn execute(spec: &RunSpec) -> Result<Vec<ResultRecord>, Failure> {
    let tasks = plan(spec);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| Failure::validation(format!("cannot start {} workers: {e}", spec.jobs)))?;
    let results: Vec<_> = pool.install(|| tasks.par_iter().map(|t| run_task(spec, t)).collect());
    let mut records = Vec::new();
    for r in results {
        records.extend(r?);
    }
    for (i, r) in records.iter_mut().enumerate() {
        r.index = i;
    }
    Ok(records)
}
