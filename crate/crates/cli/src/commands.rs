//! One runner per subcommand.

use catrand::bounds::{entropy_budget_check, measure_epsilon, rank_witness, standard_probes};
use catrand::dephaser::{
    build_dephasing_unitary, catalytic_chain, classical_dephasing_channel, machine_iterate, pinch, transition_channel,
    Mode, NoisyChannel,
};
use catrand::expander::{theorem3_verify, ExpanderSpec};
use catrand::pqc::{run_transcript, PauliError};
use catrand::qcore::random::{haar_pure_state, haar_unitary, random_density_matrix, random_majorizing_pair, trial_rng};
use catrand::qcore::{trace_norm, DensityMatrix, UnitaryOperator};
use catrand::recurrence::{
    even_recurrence_diagnostic, fig3_sweep, predicted_map, recurrence_unitary, stroboscopic_map, RecurrenceSpec,
};
use catrand::weylops::{clock_z, OrthonormalBasis};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{
    BasisChoice, BoundsArgs, ChainArgs, Command, DephaseArgs, ExpanderArgs, Fig3Args, MachineArgs, ModeChoice,
    PqcArgs, RecurArgs, StateChoice, TransitionArgs,
};
use crate::output::Document;
use crate::CliError;

/// Residual allowed for exact constructions.
const EXACT: f64 = 1e-10;
/// Residual allowed after a chain of decompositions.
const COMPOSED: f64 = 1e-8;

/// Documents to emit and, if a verification failed, why.
pub struct Outcome {
    pub docs: Vec<Document>,
    pub failure: Option<String>,
}

fn csv(name: &str, body: String) -> Document {
    Document::Csv { name: name.to_string(), body }
}

fn json_doc<T: Serialize>(value: &T) -> Document {
    Document::Json(serde_json::to_value(value).expect("serializable report"))
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Option<String> {
    if ok {
        None
    } else {
        Some(msg())
    }
}

/// Runs `f` on trials `0..n` in parallel, each with its own stream, in
/// trial order.
fn trials<T: Send>(
    seed: u64,
    n: usize,
    f: impl Fn(&mut rand_chacha::ChaCha8Rng) -> catrand::Result<T> + Sync,
) -> catrand::Result<Vec<T>> {
    (0..n).into_par_iter().map(|t| f(&mut trial_rng(seed, t as u64))).collect()
}

fn basis_for(choice: BasisChoice, d: usize, seed: u64) -> catrand::Result<OrthonormalBasis> {
    Ok(match choice {
        BasisChoice::Computational => OrthonormalBasis::computational(d),
        BasisChoice::Fourier => OrthonormalBasis::fourier(d),
        BasisChoice::Random => OrthonormalBasis::new(haar_unitary(d, &mut trial_rng(seed, u64::MAX)).into_matrix())?,
    })
}

pub fn run(command: &Command, seed: u64) -> Result<Outcome, CliError> {
    match command {
        Command::Dephase(a) => dephase(a, seed),
        Command::ClassicalDephase(a) => classical_dephase(a, seed),
        Command::Transition(a) => transition(a, seed),
        Command::Chain(a) => chain(a, seed),
        Command::Machine(a) => machine(a, seed),
        Command::Recur(a) => recur(a, seed),
        Command::Fig3(a) => fig3(a),
        Command::Pqc(a) => pqc(a, seed),
        Command::Expander(a) => expander(a, seed),
        Command::Bounds(a) => bounds(a, seed),
    }
}

fn dephase(a: &DephaseArgs, seed: u64) -> Result<Outcome, CliError> {
    let basis = basis_for(a.basis, a.d, seed)?;
    let ch = build_dephasing_unitary(a.d, &basis)?;
    let m = ch.randomness_dim();
    let rows = trials(seed, a.trials, |rng| {
        let rho = random_density_matrix(a.d, rng);
        let residual = trace_norm(&(ch.apply(&rho)?.matrix() - pinch(&rho, &basis)?.matrix()));
        let catalyst = trace_norm(&(ch.ancilla_output(&rho)?.matrix() - DensityMatrix::maximally_mixed(m).matrix()));
        Ok((residual, catalyst))
    })?;
    let mut body = String::from("trial,residual,catalyst_residual\n");
    for (t, (r, c)) in rows.iter().enumerate() {
        body.push_str(&format!("{t},{r:e},{c:e}\n"));
    }
    let worst = rows.iter().map(|(r, c)| r.max(*c)).fold(0.0, f64::max);
    Ok(Outcome {
        docs: vec![csv("dephase", body)],
        failure: check(worst <= EXACT, || format!("residual {worst:e} exceeds {EXACT:e}")),
    })
}

fn classical_dephase(a: &DephaseArgs, seed: u64) -> Result<Outcome, CliError> {
    let basis = basis_for(a.basis, a.d, seed)?;
    let ch = if basis.is_computational() {
        classical_dephasing_channel(a.d)?
    } else {
        let z = clock_z(a.d)?;
        let b = basis.matrix();
        NoisyChannel::classical(
            (1..=a.d as i64).map(|j| UnitaryOperator::new(z.pow(j).matrix().conjugate_by(b))).collect::<catrand::Result<_>>()?,
        )?
    };
    let rows = trials(seed, a.trials, |rng| {
        let rho = random_density_matrix(a.d, rng);
        Ok(trace_norm(&(ch.apply(&rho)?.matrix() - pinch(&rho, &basis)?.matrix())))
    })?;
    let mut body = String::from("trial,residual\n");
    for (t, r) in rows.iter().enumerate() {
        body.push_str(&format!("{t},{r:e}\n"));
    }
    let worst = rows.iter().copied().fold(0.0, f64::max);
    Ok(Outcome {
        docs: vec![csv("classical-dephase", body)],
        failure: check(worst <= EXACT, || format!("residual {worst:e} exceeds {EXACT:e}")),
    })
}

fn transition(a: &TransitionArgs, seed: u64) -> Result<Outcome, CliError> {
    let mode = match a.mode {
        ModeChoice::Quantum => Mode::Quantum,
        ModeChoice::Classical => Mode::Classical,
    };
    let rows = trials(seed, a.trials, |rng| {
        let (rho, target) = random_majorizing_pair(a.d, rng);
        let ch = transition_channel(&rho, &target, mode)?;
        Ok((trace_norm(&(ch.apply(&rho)?.matrix() - target.matrix())), ch.ancilla_dim()))
    })?;
    let mut body = String::from("trial,error,ancilla_dim\n");
    for (t, (e, m)) in rows.iter().enumerate() {
        body.push_str(&format!("{t},{e:e},{m}\n"));
    }
    let worst = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    Ok(Outcome {
        docs: vec![csv("transition", body)],
        failure: check(worst <= COMPOSED, || format!("transition error {worst:e} exceeds {COMPOSED:e}")),
    })
}

fn chain(a: &ChainArgs, seed: u64) -> Result<Outcome, CliError> {
    let mut rng = trial_rng(seed, 0);
    let states: Vec<DensityMatrix> = (0..a.systems).map(|_| random_density_matrix(a.d, &mut rng)).collect();
    let bases = vec![OrthonormalBasis::computational(a.d); a.systems];
    let (_, report) = catalytic_chain(&states, &bases)?;
    let worst = report.marginal_residuals.iter().copied().fold(report.catalyst_residual, f64::max);
    Ok(Outcome {
        docs: vec![json_doc(&report)],
        failure: check(worst <= EXACT, || format!("chain residual {worst:e} exceeds {EXACT:e}")),
    })
}

fn machine(a: &MachineArgs, seed: u64) -> Result<Outcome, CliError> {
    let m = catrand::dephaser::ancilla_dim_for(a.d);
    let mut rng = trial_rng(seed, 0);
    let rho = random_density_matrix(a.d, &mut rng);
    let sigma = random_density_matrix(m, &mut rng);
    let report = machine_iterate(&rho, &vec![sigma; a.steps])?;
    let ok = report.bounds_hold(1e-9) && report.entropy_monotone(1e-9);
    Ok(Outcome {
        docs: vec![csv("machine", report.to_csv())],
        failure: check(ok, || "product bound or entropy monotonicity violated".into()),
    })
}

fn recur(a: &RecurArgs, seed: u64) -> Result<Outcome, CliError> {
    if a.m.is_multiple_of(2) {
        return Ok(Outcome { docs: vec![json_doc(&even_recurrence_diagnostic(a.m)?)], failure: None });
    }
    let spec = RecurrenceSpec::new(a.m)?;
    let v = recurrence_unitary(&spec)?;
    let basis = OrthonormalBasis::computational(spec.d());
    let rho = random_density_matrix(spec.d(), &mut trial_rng(seed, 0));
    let kmax = a.kmax.unwrap_or(2 * a.m);
    let residuals = (1..=kmax as i64)
        .into_par_iter()
        .map(|k| {
            let got = stroboscopic_map(&v, &rho, k)?;
            let want = predicted_map(k, a.m, &rho, &basis)?;
            Ok((got.matrix() - want.matrix()).max_abs())
        })
        .collect::<catrand::Result<Vec<f64>>>()?;
    let mut body = String::from("k,residual\n");
    let mut bad = Vec::new();
    for (i, r) in residuals.iter().enumerate() {
        body.push_str(&format!("{},{r:e}\n", i + 1));
        if *r > 1e-9 {
            bad.push(i + 1);
        }
    }
    Ok(Outcome {
        docs: vec![csv("recur", body)],
        failure: check(bad.is_empty(), || format!("stroboscopic map differs from prediction at k = {bad:?}")),
    })
}

fn fig3(a: &Fig3Args) -> Result<Outcome, CliError> {
    let sweeps = fig3_sweep(&a.m, a.samples)?;
    let worst = sweeps
        .iter()
        .flat_map(|s| s.interior_integer_points().map(|p| p.distance))
        .fold(0.0, f64::max);
    Ok(Outcome {
        docs: sweeps.iter().map(|s| csv(&format!("fig3_m{}", s.m), s.to_csv())).collect(),
        failure: check(worst <= COMPOSED, || format!("integer-time distance {worst:e} exceeds {COMPOSED:e}")),
    })
}

fn parse_error(bits: &str) -> Result<PauliError, CliError> {
    let b: Vec<u8> = bits
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(()),
        })
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("error must be four bits, got {bits:?}")))?;
    match b[..] {
        [x1, z1, x2, z2] => Ok(PauliError::new(x1, z1, x2, z2)?),
        _ => Err(CliError::Usage(format!("error must be four bits, got {bits:?}"))),
    }
}

fn pqc(a: &PqcArgs, seed: u64) -> Result<Outcome, CliError> {
    let error = parse_error(&a.error)?;
    let message = haar_pure_state(4, &mut trial_rng(seed, 0));
    let t = run_transcript(&message, error, a.rounds, seed)?;
    let ok = t.recovered_fidelity >= 1.0 - 1e-9 && t.ciphertext_marginal_distance <= 1e-9;
    Ok(Outcome {
        docs: vec![json_doc(&t)],
        failure: check(ok, || "ciphertext not maximally mixed or message not recovered".into()),
    })
}

fn expander(a: &ExpanderArgs, seed: u64) -> Result<Outcome, CliError> {
    let spec = ExpanderSpec::new(a.e, a.k)?;
    let rho = match a.state {
        StateChoice::Coherent => catrand::bounds::maximally_coherent_state(spec.d())?,
        StateChoice::Random => random_density_matrix(spec.d(), &mut trial_rng(seed, 0)),
    };
    let report = theorem3_verify(&spec, &rho)?;
    Ok(Outcome {
        docs: vec![csv(&format!("expander_e{}", a.e), report.to_csv())],
        failure: check(report.bound_holds(), || "measured distance exceeds the bound".into()),
    })
}

fn bounds(a: &BoundsArgs, seed: u64) -> Result<Outcome, CliError> {
    let basis = OrthonormalBasis::computational(a.d);
    let probes = standard_probes(&basis, seed)?;
    let quantum = build_dephasing_unitary(a.d, &basis)?;
    let classical = match a.truncate {
        Some(m) if m == 0 || m > a.d => {
            return Err(CliError::Usage(format!("truncate must lie in 1..={}, got {m}", a.d)))
        }
        Some(m) => {
            let z = clock_z(a.d)?;
            NoisyChannel::classical((1..=m as i64).map(|j| z.pow(j)).collect())?
        }
        None => classical_dephasing_channel(a.d)?,
    };
    let reports = vec![measure_epsilon(&quantum, &basis, &probes)?, measure_epsilon(&classical, &basis, &probes)?];
    let witness = rank_witness(&classical)?;
    let budget = entropy_budget_check(&quantum)?;
    let ok = reports.iter().all(|r| r.satisfied) && witness.holds && budget.triangle_holds;
    Ok(Outcome {
        docs: vec![Document::Json(json!({ "reports": reports, "rank_witness": witness, "entropy_budget": budget }))],
        failure: check(ok, || "a lower bound, rank witness or entropy chain check failed".into()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_bits_parse() {
        assert_eq!(parse_error("1000").unwrap(), PauliError::new(1, 0, 0, 0).unwrap());
        assert!(matches!(parse_error("102"), Err(CliError::Usage(_))));
        assert!(matches!(parse_error("10001"), Err(CliError::Usage(_))));
    }

    #[test]
    fn parallel_trials_match_serial_streams() {
        let par = trials(5, 16, |rng| Ok(random_density_matrix(3, rng))).unwrap();
        for (t, rho) in par.iter().enumerate() {
            let serial = random_density_matrix(3, &mut trial_rng(5, t as u64));
            assert_eq!(rho.matrix(), serial.matrix());
        }
    }
}
