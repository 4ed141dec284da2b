//! End-to-end acceptance checks, one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use catrand::bounds::{
    classical_lower_bound, entropy_budget_check, maximally_coherent_state, minimal_dimension, quantum_lower_bound,
    rank_witness,
};
use catrand::dephaser::{
    build_dephasing_unitary, classical_dephasing_channel, machine_iterate, maximally_entangled_ket, transition_channel,
    Mode, NoisyChannel,
};
use catrand::expander::{
    classical_step, distance_to_uniform, margulis_contraction, theorem3_verify, ExpanderSpec,
};
use catrand::pqc::{
    acceptance_frequency, apply_pauli_error, extract_syndrome, pqc_decode, pqc_encode, pqc_encode_with_reference,
    PqcKey, SyndromeTable,
};
use catrand::qcore::random::{haar_pure_state, haar_unitary, random_density_matrix, random_majorizing_pair, random_probabilities, trial_rng};
use catrand::qcore::{fidelity, tensor, trace_norm, ComplexMatrix, DensityMatrix, UnitaryOperator};
use catrand::recurrence::{fig3_sweep, predicted_map, recurrence_unitary, stroboscopic_map, RecurrenceSpec};
use catrand::weylops::{clock_z, OrthonormalBasis};
use catrand::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn diag_oracle(rho: &DensityMatrix) -> ComplexMatrix {
    let d = rho.dim();
    ComplexMatrix::from_fn(d, d, |i, j| if i == j { rho.matrix()[(i, i)] } else { Default::default() })
}

fn ceil_sqrt(d: usize) -> usize {
    (1..).find(|m| m * m >= d).unwrap()
}

fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    trace_norm(&(a - b))
}

fn exact_dephasing() -> Result<Outcome> {
    let (mut worst, mut worst_cat, mut dims_ok) = (0.0f64, 0.0f64, true);
    for d in 2..=16 {
        let ch = build_dephasing_unitary(d, &OrthonormalBasis::computational(d))?;
        let m = ch.randomness_dim();
        dims_ok &= m == ceil_sqrt(d);
        for t in 0..50 {
            let rho = random_density_matrix(d, &mut trial_rng(1000 + d as u64, t));
            worst = worst.max(dist(ch.apply(&rho)?.matrix(), &diag_oracle(&rho)));
            worst_cat = worst_cat.max(dist(ch.ancilla_output(&rho)?.matrix(), DensityMatrix::maximally_mixed(m).matrix()));
        }
    }
    outcome(
        worst <= 1e-10 && worst_cat <= 1e-10 && dims_ok,
        format!("max residual {worst:.2e}, catalyst {worst_cat:.2e}, ancilla = ceil(sqrt d): {dims_ok}"),
    )
}

fn classical_optimum() -> Result<Outcome> {
    let (mut worst, mut ranks_ok, mut gaps_ok) = (0.0f64, true, true);
    for d in 2..=16 {
        let ch = classical_dephasing_channel(d)?;
        for t in 0..20 {
            let rho = random_density_matrix(d, &mut trial_rng(2000 + d as u64, t));
            worst = worst.max(dist(ch.apply(&rho)?.matrix(), &diag_oracle(&rho)));
        }
        let a = maximally_coherent_state(d)?;
        let z = clock_z(d)?;
        for m in 1..d {
            let truncated = NoisyChannel::classical((1..=m as i64).map(|j| z.pow(j)).collect())?;
            let random = NoisyChannel::classical(
                (0..m).map(|j| haar_unitary(d, &mut trial_rng(2100 + d as u64, j as u64))).collect(),
            )?;
            for ch in [truncated, random] {
                let w = rank_witness(&ch)?;
                ranks_ok &= w.holds && w.rank <= m;
                let eps = dist(ch.apply(&a)?.matrix(), DensityMatrix::maximally_mixed(d).matrix());
                gaps_ok &= eps >= 2.0 * (1.0 - m as f64 / d as f64) - 1e-10;
            }
        }
    }
    outcome(
        worst <= 1e-10 && ranks_ok && gaps_ok,
        format!("max residual {worst:.2e}, rank <= m: {ranks_ok}, epsilon >= 2(1 - m/d): {gaps_ok}"),
    )
}

fn state_transitions() -> Result<Outcome> {
    let (mut worst, mut dims_ok) = (0.0f64, true);
    for d in 2..=6 {
        for t in 0..100 {
            let (rho, target) = random_majorizing_pair(d, &mut trial_rng(3000 + d as u64, t));
            for (mode, m) in [(Mode::Quantum, ceil_sqrt(d)), (Mode::Classical, d)] {
                let ch = transition_channel(&rho, &target, mode)?;
                dims_ok &= ch.ancilla_dim() == m;
                worst = worst.max(dist(ch.apply(&rho)?.matrix(), target.matrix()));
            }
        }
    }
    outcome(worst <= 1e-8 && dims_ok, format!("max error {worst:.2e}, ancilla dimensions: {dims_ok}"))
}

fn machine_bounds() -> Result<Outcome> {
    let (mut bounds, mut entropy) = (true, true);
    for d in [4, 9] {
        let m = ceil_sqrt(d);
        for t in 0..100 {
            let mut rng = trial_rng(4000 + d as u64, t);
            let rho = random_density_matrix(d, &mut rng);
            let sigma = random_density_matrix(m, &mut rng);
            let report = machine_iterate(&rho, &vec![sigma; 20])?;
            bounds &= report.bounds_hold(1e-9);
            entropy &= report.entropy_monotone(1e-9);
        }
    }
    outcome(bounds && entropy, format!("product bounds: {bounds}, entropy non-decreasing: {entropy}"))
}

fn recurrence() -> Result<Outcome> {
    let mut failures = Vec::new();
    for m in [3usize, 5, 7, 9, 15] {
        let spec = RecurrenceSpec::new(m)?;
        let v = recurrence_unitary(&spec)?;
        let d = spec.d();
        let basis = OrthonormalBasis::computational(d);
        let rho = random_density_matrix(d, &mut trial_rng(5000 + m as u64, 0));
        let mut bad = Vec::new();
        for k in 1..=2 * m as i64 {
            let got = stroboscopic_map(&v, &rho, k)?;
            let want = predicted_map(k, m, &rho, &basis)?;
            if (got.matrix() - want.matrix()).max_abs() > 1e-9 {
                bad.push(k);
            }
        }
        if !bad.is_empty() {
            failures.push(format!("m={m} k={bad:?}"));
        }
    }
    let detail = if failures.is_empty() { "all maps match".to_string() } else { format!("mismatch at {}", failures.join("; ")) };
    outcome(failures.is_empty(), detail)
}

fn fig3() -> Result<Outcome> {
    let sweeps = fig3_sweep(&[3, 5, 7, 11], 64)?;
    let worst = sweeps
        .iter()
        .flat_map(|s| s.interior_integer_points().map(|p| p.distance))
        .fold(0.0f64, f64::max);
    let mids: Vec<f64> = sweeps.iter().map(|s| s.midpoint).collect();
    let decreasing = mids.windows(2).all(|w| w[1] < w[0]);
    let mids_text: Vec<String> = sweeps.iter().map(|s| format!("m={}: {:.4}", s.m, s.midpoint)).collect();
    outcome(
        worst <= 1e-8 && decreasing,
        format!("integer-time max {worst:.2e}, midpoints [{}] strictly decreasing: {decreasing}", mids_text.join(", ")),
    )
}

fn pqc() -> Result<Outcome> {
    let key = PqcKey::new(2)?;
    let flat = DensityMatrix::maximally_mixed(4);
    let (mut security, mut round_trip, mut key_restored) = (0.0f64, 1.0f64, 1.0f64);
    for t in 0..20 {
        let rho = random_density_matrix(4, &mut trial_rng(7000, t));
        let sent = pqc_encode(&rho, &key)?;
        security = security.max(dist(sent.message()?.matrix(), flat.matrix()));
        let out = pqc_decode(&sent, &key)?;
        round_trip = round_trip.min(fidelity(&rho, &out.message));
        key_restored = key_restored.min(out.key_fidelity);
    }
    let ext = DensityMatrix::from_ket(&maximally_entangled_ket(4))?;
    let sent = pqc_encode_with_reference(&ext, 4, &key)?;
    let product = tensor(flat.matrix(), sent.reference()?.matrix())?;
    security = security.max(dist(sent.eve_view()?.matrix(), &product));

    let table = SyndromeTable::build()?;
    let mut syndromes: Vec<String> = table.entries().iter().map(|e| e.syndrome.to_string()).collect();
    syndromes.sort();
    syndromes.dedup();
    let distinct = syndromes.len();

    let psi = haar_pure_state(4, &mut trial_rng(7001, 0));
    let sent = pqc_encode(&psi, &key)?;
    let mut correction = 0.0f64;
    for entry in table.entries() {
        let out = pqc_decode(&apply_pauli_error(&sent, entry.error)?, &key)?;
        let v = extract_syndrome(&out.joint.key_state()?)?;
        correction = correction.max(dist(table.correct(&out.message, &v)?.matrix(), psi.matrix()));
    }

    let trials = 10_000;
    let mut stats_ok = true;
    let mut worst_z = 0.0f64;
    for (i, entry) in table.entries().iter().enumerate().filter(|(_, e)| !e.syndrome.is_zero()) {
        for r in [1usize, 2, 4] {
            let accept = acceptance_frequency(&entry.syndrome, r, trials, 7100 + (i * 10 + r) as u64)?;
            let p = 1.0 - 2f64.powi(-(r as i32));
            let sigma = (p * (1.0 - p) / trials as f64).sqrt();
            let z = ((1.0 - accept) - p).abs() / sigma;
            worst_z = worst_z.max(z);
            stats_ok &= z <= 3.0;
        }
    }
    let zero = &table.entries()[0].syndrome;
    stats_ok &= acceptance_frequency(zero, 4, 1000, 7200)? == 1.0;
    let pass = security <= 1e-9
        && round_trip >= 1.0 - 1e-10
        && key_restored >= 1.0 - 1e-10
        && distinct == 16
        && correction <= 1e-9
        && stats_ok;
    outcome(
        pass,
        format!(
            "security {security:.2e}, fidelity {round_trip:.12}, key {key_restored:.12}, {distinct}/16 syndromes, correction {correction:.2e}, worst rejection z {worst_z:.2}"
        ),
    )
}

fn expander() -> Result<Outcome> {
    let (mut bound_ok, mut decay_ok, mut contraction_ok) = (true, true, true);
    let mut rates = Vec::new();
    let mut worst_ratio = 0.0f64;
    for e in [3usize, 5, 7] {
        let spec = ExpanderSpec::new(e, 30)?;
        let report = theorem3_verify(&spec, &maximally_coherent_state(spec.d())?)?;
        bound_ok &= report.bound_holds();
        let rate = report.decay_rate().unwrap_or(0.0);
        decay_ok &= rate <= margulis_contraction() + 0.01;
        rates.push(format!("e={e}: {rate:.4}"));
        for t in 0..100 {
            let p = random_probabilities(e * e, &mut trial_rng(8000 + e as u64, t));
            let ratio = distance_to_uniform(&classical_step(&p, e)?) / distance_to_uniform(&p);
            worst_ratio = worst_ratio.max(ratio);
            contraction_ok &= ratio <= margulis_contraction() + 1e-12;
        }
    }
    outcome(
        bound_ok && decay_ok && contraction_ok,
        format!("bound at every k: {bound_ok}, decay [{}], worst classical ratio {worst_ratio:.4}", rates.join(", ")),
    )
}

fn lower_bounds() -> Result<Outcome> {
    let mut optima_ok = true;
    for d in 2..=16 {
        let basis = OrthonormalBasis::computational(d);
        optima_ok &= minimal_dimension(classical_lower_bound(d, 0.0)?) == classical_dephasing_channel(d)?.randomness_dim();
        optima_ok &= minimal_dimension(quantum_lower_bound(d, 0.0)?) == build_dephasing_unitary(d, &basis)?.randomness_dim();
    }
    let mut chain_ok = true;
    for d in [4, 9, 16] {
        let b = entropy_budget_check(&build_dephasing_unitary(d, &OrthonormalBasis::computational(d))?)?;
        chain_ok &= b.triangle_holds && b.saturated && (b.joint_entropy - b.log_m).abs() <= 1e-9;
    }
    let trivial = entropy_budget_check(&NoisyChannel::quantum(UnitaryOperator::identity(1), 1)?)?;
    chain_ok &= trivial.triangle_holds;
    outcome(optima_ok && chain_ok, format!("optima meet bounds: {optima_ok}, entropy chain saturated: {chain_ok}"))
}

type Check = fn() -> Result<Outcome>;

fn main() -> ExitCode {
    let criteria: [(&str, Check, Duration); 9] = [
        ("exact optimal dephasing", exact_dephasing, Duration::from_secs(10)),
        ("classical optimum", classical_optimum, Duration::from_secs(5)),
        ("state transitions", state_transitions, Duration::from_secs(30)),
        ("machine bounds", machine_bounds, Duration::from_secs(30)),
        ("recurrence", recurrence, Duration::from_secs(60)),
        ("recurrence sweep", fig3, Duration::from_secs(300)),
        ("private quantum channel", pqc, Duration::from_secs(120)),
        ("expander", expander, Duration::from_secs(120)),
        ("lower-bound consistency", lower_bounds, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && elapsed < *budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name} ({detail}; {:.2}s of {}s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
