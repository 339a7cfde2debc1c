//! The classical diagonal (halting) contradiction on finite toy program
//! tables, and its quantum fixed-point resolution with classical readout.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

use crate::qubit::{self, QubitState};

#[derive(Debug, Error)]
pub enum DiagonalError {
    #[error("oracle is missing an answer for ({program}, {input})")]
    IncompleteOracle { program: String, input: String },
    #[error("behavior undefined for ({program}, {input})")]
    UndefinedBehavior { program: String, input: String },
    #[error("duplicate program identifier {0:?}")]
    DuplicateProgram(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Behavior {
    Halts,
    Diverges,
}

impl Behavior {
    pub fn flip(self) -> Self {
        match self {
            Behavior::Halts => Behavior::Diverges,
            Behavior::Diverges => Behavior::Halts,
        }
    }

    /// The bit the halting oracle is supposed to output: 1 = halts, 0 = diverges.
    pub fn as_bit(self) -> u8 {
        match self {
            Behavior::Halts => 1,
            Behavior::Diverges => 0,
        }
    }

    pub fn from_bit(bit: u8) -> Self {
        if bit == 0 {
            Behavior::Diverges
        } else {
            Behavior::Halts
        }
    }
}

/// Finite universe of toy programs with declared halting behavior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgramTable {
    pub programs: Vec<String>,
    /// behavior[program][input]
    pub behavior: HashMap<String, HashMap<String, Behavior>>,
}

impl ProgramTable {
    pub fn new(programs: Vec<String>) -> Result<Self, DiagonalError> {
        let mut seen = std::collections::HashSet::new();
        for p in &programs {
            if !seen.insert(p.clone()) {
                return Err(DiagonalError::DuplicateProgram(p.clone()));
            }
        }
        Ok(Self { programs, behavior: HashMap::new() })
    }

    pub fn set_behavior(&mut self, program: &str, input: &str, b: Behavior) {
        self.behavior
            .entry(program.to_string())
            .or_default()
            .insert(input.to_string(), b);
    }

    pub fn lookup(&self, program: &str, input: &str) -> Option<Behavior> {
        self.behavior.get(program)?.get(input).copied()
    }
}

/// A claimed total halting predicate over the declared universe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleClaim {
    /// answers[program][input]: 1 = "halts", 0 = "does not halt"
    pub answers: HashMap<String, HashMap<String, u8>>,
}

impl OracleClaim {
    pub fn new() -> Self {
        Self { answers: HashMap::new() }
    }

    pub fn set(&mut self, program: &str, input: &str, bit: u8) {
        self.answers
            .entry(program.to_string())
            .or_default()
            .insert(input.to_string(), if bit == 0 { 0 } else { 1 });
    }

    pub fn get(&self, program: &str, input: &str) -> Option<u8> {
        self.answers.get(program)?.get(input).copied()
    }
}

impl Default for OracleClaim {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalReport {
    pub consistent: bool,
    pub witness: Option<(String, String)>,
}

/// Adds the diagonal program A to the universe.  A's behavior on every X is
/// the flip of the oracle's self-applied answer: A(X) halts iff the oracle
/// claims X(X) does not halt.  Returns the extended table and A's identifier.
pub fn build_diagonal_program(
    table: &ProgramTable,
    oracle: &OracleClaim,
) -> Result<(ProgramTable, String), DiagonalError> {
    // fresh identifier
    let mut id = "A".to_string();
    let mut k = 1;
    while table.programs.contains(&id) {
        id = format!("A{k}");
        k += 1;
    }
    let mut extended = table.clone();
    for x in &table.programs {
        let bit = oracle.get(x, x).ok_or_else(|| DiagonalError::IncompleteOracle {
            program: x.clone(),
            input: x.clone(),
        })?;
        extended.set_behavior(&id, x, Behavior::from_bit(bit).flip());
    }
    extended.programs.push(id.clone());
    Ok((extended, id))
}

/// Checks an oracle claim against the table's declared behavior.  When a
/// diagonal program is present, its self-application is checked first and its
/// behavior on itself is induced from the oracle's own answer, so any total
/// claim is refuted at the witness (A, A).
pub fn check_consistency(
    table: &ProgramTable,
    oracle: &OracleClaim,
    diagonal: Option<&str>,
) -> Result<DiagonalReport, DiagonalError> {
    let behavior_of = |program: &str, input: &str| -> Result<Behavior, DiagonalError> {
        if let Some(a) = diagonal {
            if program == a {
                // A(X) = flip of the oracle's answer on (X, X)
                let bit = oracle.get(input, input).ok_or_else(|| {
                    DiagonalError::IncompleteOracle {
                        program: input.to_string(),
                        input: input.to_string(),
                    }
                })?;
                return Ok(Behavior::from_bit(bit).flip());
            }
        }
        table.lookup(program, input).ok_or_else(|| DiagonalError::UndefinedBehavior {
            program: program.to_string(),
            input: input.to_string(),
        })
    };

    // self-application of the diagonal program comes first
    if let Some(a) = diagonal {
        if let Some(claim) = oracle.get(a, a) {
            let actual = behavior_of(a, a)?;
            if claim != actual.as_bit() {
                return Ok(DiagonalReport {
                    consistent: false,
                    witness: Some((a.to_string(), a.to_string())),
                });
            }
        }
    }

    let mut pairs: Vec<(&String, &String, u8)> = Vec::new();
    for (p, row) in &oracle.answers {
        for (x, &bit) in row {
            pairs.push((p, x, bit));
        }
    }
    pairs.sort();
    for (p, x, bit) in pairs {
        let actual = behavior_of(p, x)?;
        if bit != actual.as_bit() {
            return Ok(DiagonalReport { consistent: false, witness: Some((p.clone(), x.clone())) });
        }
    }
    Ok(DiagonalReport { consistent: true, witness: None })
}

/// Consistency of an oracle extended over the diagonal program.
pub fn check_diagonal_consistency(
    table: &ProgramTable,
    oracle: &OracleClaim,
    diagonal: &str,
) -> Result<DiagonalReport, DiagonalError> {
    check_consistency(table, oracle, Some(diagonal))
}

/// The diagonal flip on quantum oracle output: application of NOT.
pub fn quantum_diagonal_response(oracle_output: &QubitState) -> QubitState {
    qubit::not_gate().apply(oracle_output)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyReport {
    pub n_samples: u64,
    pub count0: u64,
    pub count1: u64,
    pub freq0: f64,
    pub freq1: f64,
    pub std_error: f64,
}

/// Repeated Born-rule measurements of fresh copies of the state.
pub fn classical_readout(state: &QubitState, seed: u64, n_samples: u64) -> FrequencyReport {
    assert!(n_samples >= 1);
    let (count0, count1) = qubit::sample_counts(state, seed, n_samples);
    let freq0 = count0 as f64 / n_samples as f64;
    let freq1 = count1 as f64 / n_samples as f64;
    FrequencyReport {
        n_samples,
        count0,
        count1,
        freq0,
        freq1,
        std_error: (freq0 * freq1 / n_samples as f64).sqrt(),
    }
}
