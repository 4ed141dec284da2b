//! Ideal private quantum channel keyed by shared entanglement.
//!
//! A two-qubit message `S` is dephased twice with the optimal dephasing
//! unitary, once in the computational basis `I` with the ancilla `A1` and
//! once in the Hadamard basis `J = H (x) H` with the ancilla `A2`. The
//! ancillas are Alice's halves of two ebits `|phi+>_{A1 B1} |phi+>_{A2 B2}`,
//! so each is locally maximally mixed and dephasing in two mutually unbiased
//! bases leaves the ciphertext maximally mixed. Bob undoes both steps with
//! the complex-conjugate controlled unitaries on `B2` and then `B1`; the key
//! returns to its initial state, and a Pauli error on `S` leaves a
//! fingerprint on the key instead.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::dephaser::ControlledUnitary;
use crate::error::{Error, Result};
use crate::qcore::random::trial_rng;
use crate::qcore::{
    apply_on_factors, embed_operator, fidelity, partial_trace, tensor, trace_norm, ComplexMatrix, DensityMatrix,
    SubsystemLayout, UnitaryOperator, C64, ONE, ZERO,
};
use crate::weylops::{clock_shift_basis, mub_pair, shift_clock, OrthonormalBasis};

/// Shared quantum key for an `n`-qubit message: `n` ebits, used two per
/// two-qubit chunk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PqcKey {
    n: usize,
}

impl PqcKey {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 || n % 2 == 1 {
            return Err(Error::Precondition(format!("message length must be even and >= 2, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of two-qubit chunks.
    pub fn chunks(&self) -> usize {
        self.n / 2
    }

    pub fn ebits(&self) -> usize {
        self.n
    }

    fn require_single_chunk(&self) -> Result<()> {
        if self.n != 2 {
            return Err(Error::Precondition(format!(
                "a {}-qubit key encodes {} chunks; use the chunked functions",
                self.n,
                self.chunks()
            )));
        }
        Ok(())
    }
}

/// The Pauli error `(X^a Z^b)_{S1} (x) (X^c Z^d)_{S2}`; a Y component is
/// represented as `XZ`, equal to `Y` up to a global phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PauliError {
    pub a: u8,
    pub b: u8,
    pub c: u8,
    pub d: u8,
}

impl PauliError {
    pub const IDENTITY: PauliError = PauliError { a: 0, b: 0, c: 0, d: 0 };

    pub fn new(a: u8, b: u8, c: u8, d: u8) -> Result<Self> {
        if [a, b, c, d].iter().any(|&x| x > 1) {
            return Err(Error::Precondition("Pauli error components must be 0 or 1".into()));
        }
        Ok(Self { a, b, c, d })
    }

    /// All 16 errors in lexicographic order of `(a, b, c, d)`.
    pub fn all() -> Vec<PauliError> {
        (0..16u8).map(|k| PauliError { a: (k >> 3) & 1, b: (k >> 2) & 1, c: (k >> 1) & 1, d: k & 1 }).collect()
    }

    pub fn operator(&self) -> ComplexMatrix {
        shift_clock(2, self.a as i64, self.b as i64).kron(&shift_clock(2, self.c as i64, self.d as i64))
    }
}

/// The four Bell states with their two-bit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BellLabel {
    PhiPlus,
    PsiPlus,
    PhiMinus,
    PsiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [BellLabel::PhiPlus, BellLabel::PsiPlus, BellLabel::PhiMinus, BellLabel::PsiMinus];

    /// `Phi+ -> 00, Psi+ -> 01, Phi- -> 10, Psi- -> 11`: the first bit is the
    /// relative sign, the second whether the qubits disagree.
    pub fn bits(self) -> [u8; 2] {
        match self {
            BellLabel::PhiPlus => [0, 0],
            BellLabel::PsiPlus => [0, 1],
            BellLabel::PhiMinus => [1, 0],
            BellLabel::PsiMinus => [1, 1],
        }
    }

    pub fn from_bits(sign: u8, flip: u8) -> Self {
        match (sign & 1, flip & 1) {
            (0, 0) => BellLabel::PhiPlus,
            (0, _) => BellLabel::PsiPlus,
            (_, 0) => BellLabel::PhiMinus,
            _ => BellLabel::PsiMinus,
        }
    }

    /// Amplitudes on `|00>, |01>, |10>, |11>`.
    pub fn ket(self) -> [C64; 4] {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            BellLabel::PhiPlus => [h, ZERO, ZERO, h],
            BellLabel::PhiMinus => [h, ZERO, ZERO, -h],
            BellLabel::PsiPlus => [ZERO, h, h, ZERO],
            BellLabel::PsiMinus => [ZERO, h, -h, ZERO],
        }
    }
}

/// Bell-state record of the key after decoding, two bits per ebit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Syndrome {
    bits: Vec<u8>,
}

impl Syndrome {
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Precondition("syndrome bits must be 0 or 1".into()));
        }
        Ok(Self { bits })
    }

    pub fn zero(len: usize) -> Self {
        Self { bits: vec![0; len] }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    /// The Bell states of the ebits, in key order.
    pub fn labels(&self) -> Vec<BellLabel> {
        self.bits.chunks(2).map(|p| BellLabel::from_bits(p[0], p.get(1).copied().unwrap_or(0))).collect()
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl Serialize for Syndrome {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Factor positions in the joint qubit layout `S1 S2 [R] A1 A2 B1 B2`.
const S: [usize; 2] = [0, 1];

/// Message, optional reference system held by a third party, and key.
#[derive(Debug, Clone)]
pub struct JointState {
    state: DensityMatrix,
    reference_dim: usize,
}

impl JointState {
    fn offset(&self) -> usize {
        if self.reference_dim > 1 {
            3
        } else {
            2
        }
    }

    /// Positions of `A1, A2, B1, B2`.
    fn key_factors(&self) -> [usize; 4] {
        let o = self.offset();
        [o, o + 1, o + 2, o + 3]
    }

    pub fn layout(&self) -> SubsystemLayout {
        let mut dims = vec![2, 2];
        if self.reference_dim > 1 {
            dims.push(self.reference_dim);
        }
        dims.extend([2, 2, 2, 2]);
        SubsystemLayout::new(dims).expect("positive dimensions")
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn reference_dim(&self) -> usize {
        self.reference_dim
    }

    fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        Ok(DensityMatrix::new_unchecked(partial_trace(self.state.matrix(), &self.layout(), keep)?))
    }

    /// Reduced state of the transmitted register.
    pub fn message(&self) -> Result<DensityMatrix> {
        self.reduce(&S)
    }

    /// What an eavesdropper holding the reference and intercepting `S` sees.
    pub fn eve_view(&self) -> Result<DensityMatrix> {
        if self.reference_dim > 1 {
            self.reduce(&[0, 1, 2])
        } else {
            self.message()
        }
    }

    pub fn reference(&self) -> Result<DensityMatrix> {
        if self.reference_dim > 1 {
            self.reduce(&[2])
        } else {
            Ok(DensityMatrix::maximally_mixed(1))
        }
    }

    /// Reduced state of `A1 A2 B1 B2`.
    pub fn key_state(&self) -> Result<DensityMatrix> {
        self.reduce(&self.key_factors())
    }

    fn apply(&self, factors: &[usize], u: &ComplexMatrix) -> Result<Self> {
        let out = apply_on_factors(self.state.matrix(), &self.layout(), factors, u)?;
        Ok(Self { state: DensityMatrix::new_unchecked(out), reference_dim: self.reference_dim })
    }
}

/// The four controlled gates of one chunk, each on `S1 S2` and one key qubit.
struct Gates {
    u_i: ComplexMatrix,
    u_j: ComplexMatrix,
    v_i: ComplexMatrix,
    v_j: ComplexMatrix,
}

/// `I`: computational, `J = H (x) H`.
pub fn message_bases() -> (OrthonormalBasis, OrthonormalBasis) {
    let (comp, had) = mub_pair(2).expect("d = 2 is valid");
    (comp.tensor(&comp).expect("small"), had.tensor(&had).expect("small"))
}

fn gates() -> Gates {
    let (i, j) = message_bases();
    let paulis = clock_shift_basis(2).expect("m = 2 is valid").ops().to_vec();
    let conj: Vec<UnitaryOperator> = paulis.iter().map(|p| UnitaryOperator::new_unchecked(p.matrix().conjugate())).collect();
    let build = |basis: &OrthonormalBasis, ops: &[UnitaryOperator]| {
        ControlledUnitary::new(basis.clone(), ops.to_vec())
            .and_then(|c| c.to_unitary())
            .expect("8-dimensional")
            .into_matrix()
    };
    Gates { u_i: build(&i, &paulis), u_j: build(&j, &paulis), v_i: build(&i, &conj), v_j: build(&j, &conj) }
}

fn key_ket() -> Vec<C64> {
    bell_product_ket(BellLabel::PhiPlus, BellLabel::PhiPlus)
}

/// Two ebits in the layout `A1 A2 B1 B2`.
fn bell_product_ket(first: BellLabel, second: BellLabel) -> Vec<C64> {
    let (k1, k2) = (first.ket(), second.ket());
    let mut v = vec![ZERO; 16];
    for (idx, slot) in v.iter_mut().enumerate() {
        let (a1, a2, b1, b2) = ((idx >> 3) & 1, (idx >> 2) & 1, (idx >> 1) & 1, idx & 1);
        *slot = k1[2 * a1 + b1] * k2[2 * a2 + b2];
    }
    v
}

/// Encrypts a two-qubit message.
pub fn pqc_encode(rho: &DensityMatrix, key: &PqcKey) -> Result<JointState> {
    pqc_encode_with_reference(rho, 1, key)
}

/// Encrypts the `S` part of a state on `S (x) R`, with `R` (dimension
/// `reference_dim`) left untouched; models an eavesdropper holding a
/// purification or any other extension of the message.
pub fn pqc_encode_with_reference(rho_sr: &DensityMatrix, reference_dim: usize, key: &PqcKey) -> Result<JointState> {
    key.require_single_chunk()?;
    if reference_dim == 0 || rho_sr.dim() != 4 * reference_dim {
        return Err(Error::Dimension(format!(
            "message state has dimension {}, expected 4 x {reference_dim}",
            rho_sr.dim()
        )));
    }
    let key_state = ComplexMatrix::projector(&key_ket());
    let state = DensityMatrix::new_unchecked(tensor(rho_sr.matrix(), &key_state)?);
    let joint = JointState { state, reference_dim };
    let g = gates();
    let [a1, a2, _, _] = joint.key_factors();
    joint.apply(&[0, 1, a1], &g.u_i)?.apply(&[0, 1, a2], &g.u_j)
}

/// Encrypts a message given as one state per two-qubit chunk.
pub fn pqc_encode_chunks(chunks: &[DensityMatrix], key: &PqcKey) -> Result<Vec<JointState>> {
    if chunks.len() != key.chunks() {
        return Err(Error::Dimension(format!("{} chunks for a key of {} chunks", chunks.len(), key.chunks())));
    }
    let chunk_key = PqcKey::new(2)?;
    chunks.iter().map(|c| pqc_encode(c, &chunk_key)).collect()
}

/// Result of decoding one chunk.
#[derive(Debug, Clone)]
pub struct Decoded {
    pub message: DensityMatrix,
    /// `<phi+ phi+| key |phi+ phi+>` after decoding.
    pub key_fidelity: f64,
    pub joint: JointState,
}

/// Decrypts one chunk and reports how well the key was restored.
pub fn pqc_decode(joint: &JointState, key: &PqcKey) -> Result<Decoded> {
    key.require_single_chunk()?;
    let g = gates();
    let [_, _, b1, b2] = joint.key_factors();
    let out = joint.apply(&[0, 1, b2], &g.v_j)?.apply(&[0, 1, b1], &g.v_i)?;
    let k = out.key_state()?;
    let ket = key_ket();
    let key_fidelity = k.matrix().apply(&ket).iter().zip(&ket).map(|(a, b)| b.conj() * a).sum::<C64>().re;
    Ok(Decoded { message: out.message()?, key_fidelity, joint: out })
}

/// Applies `err` to the in-transit register.
pub fn apply_pauli_error(joint: &JointState, err: PauliError) -> Result<JointState> {
    joint.apply(&S, &err.operator())
}

/// Reads the Bell state of each ebit of a decoded key (`A1 A2 B1 B2`).
/// Fails if the key is not within `1e-8` of a product of Bell states, which
/// signals tampering beyond Pauli errors.
pub fn extract_syndrome(key_state: &DensityMatrix) -> Result<Syndrome> {
    if key_state.dim() != 16 {
        return Err(Error::Dimension(format!("key state has dimension {}, expected 16", key_state.dim())));
    }
    let mut best = (f64::NEG_INFINITY, BellLabel::PhiPlus, BellLabel::PhiPlus);
    for first in BellLabel::ALL {
        for second in BellLabel::ALL {
            let ket = bell_product_ket(first, second);
            let f = key_state.matrix().apply(&ket).iter().zip(&ket).map(|(a, b)| b.conj() * a).sum::<C64>().re;
            if f > best.0 {
                best = (f, first, second);
            }
        }
    }
    if best.0 < 1.0 - 1e-8 {
        return Err(Error::Integrity(format!(
            "key is not a product of Bell states (best overlap {:.3e})",
            best.0
        )));
    }
    let mut bits = best.1.bits().to_vec();
    bits.extend(best.2.bits());
    Syndrome::from_bits(bits)
}

/// Outcome of bilateral-CNOT Bell discrimination.
#[derive(Debug, Clone, Serialize)]
pub struct BellDiscrimination {
    pub label: BellLabel,
    /// Probability of the returned label.
    pub probability: f64,
    /// Probabilities of the 16 outcomes `(x_A, x_B, z_A, z_B)`: auxiliary
    /// qubits in the X basis, unknown pair in the Z basis.
    pub outcomes: Vec<f64>,
    pub ebits_consumed: usize,
}

/// Identifies an unknown Bell state `chi` of two separated qubits with one
/// auxiliary ebit. Each party applies a CNOT from its auxiliary qubit to its
/// half of `chi`; this copies the sign bit of `chi` onto the auxiliary pair.
/// The X-basis parity of the auxiliary pair then gives the sign, and the
/// Z-basis parity of `chi` whether its qubits agree.
pub fn bell_discriminate(chi: &DensityMatrix) -> Result<BellDiscrimination> {
    if chi.dim() != 4 {
        return Err(Error::Dimension("a Bell pair has dimension 4".into()));
    }
    // Layout: auxiliary A_a, A_b, then chi_a, chi_b.
    let layout = SubsystemLayout::new(vec![2, 2, 2, 2])?;
    let aux = ComplexMatrix::projector(&BellLabel::PhiPlus.ket());
    let mut state = tensor(&aux, chi.matrix())?;
    let cnot = ComplexMatrix::from_fn(4, 4, |r, c| {
        let (ctl, tgt) = (c >> 1, c & 1);
        if r == (ctl << 1 | (tgt ^ ctl)) {
            ONE
        } else {
            ZERO
        }
    });
    state = apply_on_factors(&state, &layout, &[0, 2], &cnot)?;
    state = apply_on_factors(&state, &layout, &[1, 3], &cnot)?;
    let h = ComplexMatrix::from_fn(2, 2, |r, c| {
        C64::new(if r == 1 && c == 1 { -1.0 } else { 1.0 } * std::f64::consts::FRAC_1_SQRT_2, 0.0)
    });
    state = apply_on_factors(&state, &layout, &[0], &h)?;
    state = apply_on_factors(&state, &layout, &[1], &h)?;
    let outcomes: Vec<f64> = state.real_diagonal().into_iter().map(|p| p.max(0.0)).collect();
    let mut label_prob = [0.0f64; 4];
    for (k, &p) in outcomes.iter().enumerate() {
        let (xa, xb, za, zb) = ((k >> 3) & 1, (k >> 2) & 1, (k >> 1) & 1, k & 1);
        let label = BellLabel::from_bits((xa ^ xb) as u8, (za ^ zb) as u8);
        label_prob[BellLabel::ALL.iter().position(|&l| l == label).expect("listed")] += p;
    }
    let (idx, &probability) = label_prob
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("four labels");
    Ok(BellDiscrimination { label: BellLabel::ALL[idx], probability, outcomes, ebits_consumed: 1 })
}

/// What a Pauli error does to a message once the chunk is decoded.
#[derive(Debug, Clone)]
pub struct SyndromeEntry {
    pub error: PauliError,
    pub syndrome: Syndrome,
    /// `Q` with decoded message `Q rho Q^dagger`.
    pub message_operator: ComplexMatrix,
}

impl SyndromeEntry {
    /// `Q^dagger`, which undoes the effect of the error on the message.
    pub fn correction(&self) -> ComplexMatrix {
        self.message_operator.adjoint()
    }
}

/// Decoder lookup table, computed once from the circuit: for each Pauli
/// error `P`, the decode-error-encode unitary maps `|psi>|phi+ phi+>` to
/// `(Q|psi>) |beta_v>`; `v` is the syndrome and `Q` the residual Pauli.
#[derive(Debug, Clone)]
pub struct SyndromeTable {
    entries: Vec<SyndromeEntry>,
}

impl SyndromeTable {
    pub fn build() -> Result<Self> {
        let g = gates();
        let layout = SubsystemLayout::new(vec![2; 6])?;
        let embed = |u: &ComplexMatrix, k: usize| embed_operator(u, &layout, &[0, 1, k]);
        let encode = &embed(&g.u_j, 3)? * &embed(&g.u_i, 2)?;
        let decode = &embed(&g.v_i, 4)? * &embed(&g.v_j, 5)?;
        let key = key_ket();
        let mut entries = Vec::with_capacity(16);
        for error in PauliError::all() {
            let p = embed_operator(&error.operator(), &layout, &S)?;
            let w = &(&decode * &p) * &encode;
            let columns: Vec<Vec<C64>> = (0..4)
                .map(|b| {
                    let mut input = vec![ZERO; 64];
                    for (k, &amp) in key.iter().enumerate() {
                        input[b * 16 + k] = amp;
                    }
                    w.apply(&input)
                })
                .collect();
            let mut found = None;
            for first in BellLabel::ALL {
                for second in BellLabel::ALL {
                    let beta = bell_product_ket(first, second);
                    let q = ComplexMatrix::from_fn(4, 4, |a, b| {
                        (0..16).map(|k| beta[k].conj() * columns[b][a * 16 + k]).sum()
                    });
                    if (q.frobenius_norm().powi(2) - 4.0).abs() < 1e-9 {
                        let mut bits = first.bits().to_vec();
                        bits.extend(second.bits());
                        found = Some((Syndrome::from_bits(bits)?, q));
                    }
                }
            }
            let (syndrome, message_operator) = found.ok_or_else(|| {
                Error::Integrity(format!("error {error:?} does not leave the key in a Bell product"))
            })?;
            entries.push(SyndromeEntry { error, syndrome, message_operator });
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[SyndromeEntry] {
        &self.entries
    }

    pub fn lookup(&self, syndrome: &Syndrome) -> Option<&SyndromeEntry> {
        self.entries.iter().find(|e| &e.syndrome == syndrome)
    }

    /// Applies the correction for `syndrome` to a decoded message.
    pub fn correct(&self, message: &DensityMatrix, syndrome: &Syndrome) -> Result<DensityMatrix> {
        let entry = self
            .lookup(syndrome)
            .ok_or_else(|| Error::Integrity(format!("unknown syndrome {syndrome}")))?;
        Ok(DensityMatrix::new_unchecked(message.matrix().conjugate_by(&entry.correction())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Authentication {
    pub verdict: Verdict,
    pub ebits_consumed: usize,
}

/// `r` rounds of parity checks on random subsets of the syndrome, each
/// position included independently with probability 1/2; every round
/// destroys one ebit. Accepts iff all parities are even.
pub fn parity_authenticate_with<R: Rng + ?Sized>(v: &Syndrome, rounds: usize, rng: &mut R) -> Result<Authentication> {
    if rounds == 0 {
        return Err(Error::Precondition("at least one round is needed".into()));
    }
    let mut verdict = Verdict::Accept;
    for _ in 0..rounds {
        let parity = v.bits().iter().fold(0u8, |acc, &b| if rng.random::<bool>() { acc ^ b } else { acc });
        if parity == 1 {
            verdict = Verdict::Reject;
        }
    }
    Ok(Authentication { verdict, ebits_consumed: rounds })
}

pub fn parity_authenticate(v: &Syndrome, rounds: usize, rng_seed: u64) -> Result<Authentication> {
    parity_authenticate_with(v, rounds, &mut ChaCha8Rng::seed_from_u64(rng_seed))
}

/// Fraction of `trials` independent authentications that accept. Trial `t`
/// uses stream `t` of `master_seed`, so the result does not depend on
/// scheduling.
pub fn acceptance_frequency(v: &Syndrome, rounds: usize, trials: usize, master_seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is needed".into()));
    }
    let accepted = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(master_seed, t as u64);
            parity_authenticate_with(v, rounds, &mut rng).map(|a| a.verdict == Verdict::Accept)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(accepted.iter().filter(|&&a| a).count() as f64 / trials as f64)
}

/// Single-shot record of one transmission.
#[derive(Debug, Clone, Serialize)]
pub struct PqcTranscript {
    pub message: ComplexMatrix,
    /// `||ciphertext - 1/4||_1`.
    pub ciphertext_marginal_distance: f64,
    pub syndrome: Syndrome,
    pub verdict: Verdict,
    pub ebits_consumed: usize,
    /// Fidelity of the corrected output with the message.
    pub recovered_fidelity: f64,
}

/// Encodes `message`, applies `error` in transit, decodes, authenticates the
/// syndrome and corrects.
pub fn run_transcript(message: &DensityMatrix, error: PauliError, rounds: usize, seed: u64) -> Result<PqcTranscript> {
    let key = PqcKey::new(2)?;
    let sent = pqc_encode(message, &key)?;
    let ciphertext = sent.message()?;
    let ciphertext_marginal_distance =
        trace_norm(&(ciphertext.matrix() - DensityMatrix::maximally_mixed(4).matrix()));
    let decoded = pqc_decode(&apply_pauli_error(&sent, error)?, &key)?;
    let syndrome = extract_syndrome(&decoded.joint.key_state()?)?;
    let auth = parity_authenticate(&syndrome, rounds, seed)?;
    let corrected = SyndromeTable::build()?.correct(&decoded.message, &syndrome)?;
    Ok(PqcTranscript {
        message: message.matrix().clone(),
        ciphertext_marginal_distance,
        syndrome,
        verdict: auth.verdict,
        ebits_consumed: auth.ebits_consumed,
        recovered_fidelity: fidelity(message, &corrected),
    })
}
