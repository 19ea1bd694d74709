//! Measured outcome statistics: per-setting expectation values with
//! uncertainties, the GHZ-Mermin combination, GHZ fidelity from four density
//! matrix elements, and the fidelity-based entanglement witness.
//!
//! Outcome bit `0` on a qubit is the `+1` eigenvector of that qubit's
//! measured letter, so the eigenvalue of an outcome is `(-1)^{popcount}`.
//!
//! # Data files
//!
//! CSV with header `setting,outcome,value,sigma,kind`. `kind` is `prob`,
//! `count` or `expect`. `prob`/`count` rows give one outcome bit string each;
//! an `expect` row gives a setting's expectation value directly and leaves
//! `outcome` empty. `sigma` may be empty for `count` rows. Lines starting with
//! `#` are comments. The JSON mirror is either an array of row objects with
//! the same fields or `{"rows": [...]}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bell::BellOperator;
use crate::pauli::{Letter, PauliWord};
use crate::state::StateVector;

/// Allowed deviation of published probabilities from summing to one.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DataError {
    #[error("row {row}: {reason}")]
    Row { row: usize, reason: String },
    #[error("setting {setting}: {reason}")]
    Record { setting: String, reason: String },
    #[error("missing measurement setting {0}")]
    MissingSetting(String),
    #[error("setting {setting}: negative {what} {value}")]
    Negative { setting: String, what: &'static str, value: f64 },
    #[error("setting {setting}: probabilities sum to {sum}, not 1 ± {PROBABILITY_SUM_TOLERANCE}")]
    ProbabilitySum { setting: String, sum: f64 },
    #[error("setting {setting}: {mode} error mode requires {needs}")]
    Mode { setting: String, mode: ErrorMode, needs: &'static str },
    #[error("term product {0} has identity letters and no record covers its support")]
    NotMeasurable(String),
    #[error("cannot read data: {0}")]
    Format(String),
    #[error("unknown error mode {0:?} (expected linear, quadrature or poisson)")]
    UnknownMode(String),
    #[error("data set has no records")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorMode {
    /// `σ = Σ |∂E/∂p_k| σ_k`; errors add linearly.
    #[default]
    Linear,
    /// Independent errors added in quadrature.
    Quadrature,
    /// Multinomial counting statistics from raw counts.
    Poisson,
}

impl fmt::Display for ErrorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorMode::Linear => "linear",
            ErrorMode::Quadrature => "quadrature",
            ErrorMode::Poisson => "poisson",
        })
    }
}

impl FromStr for ErrorMode {
    type Err = DataError;

    fn from_str(s: &str) -> Result<ErrorMode, DataError> {
        match s {
            "linear" => Ok(ErrorMode::Linear),
            "quadrature" => Ok(ErrorMode::Quadrature),
            "poisson" => Ok(ErrorMode::Poisson),
            _ => Err(DataError::UnknownMode(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueWithError {
    pub value: f64,
    pub sigma: f64,
}

impl ValueWithError {
    pub fn new(value: f64, sigma: f64) -> ValueWithError {
        debug_assert!(sigma >= 0.0);
        ValueWithError { value, sigma }
    }

    /// Number of standard deviations by which the value exceeds `threshold`.
    pub fn sigmas_above(&self, threshold: f64) -> f64 {
        (self.value - threshold) / self.sigma
    }
}

/// `Σ c_i x_i` with errors combined per `mode`.
pub fn combine(parts: &[(f64, ValueWithError)], mode: ErrorMode) -> ValueWithError {
    let value = parts.iter().map(|(c, x)| c * x.value).sum();
    let sigma = match mode {
        ErrorMode::Linear => parts.iter().map(|(c, x)| c.abs() * x.sigma).sum(),
        ErrorMode::Quadrature | ErrorMode::Poisson => {
            parts.iter().map(|(c, x)| (c * x.sigma).powi(2)).sum::<f64>().sqrt()
        }
    };
    ValueWithError { value, sigma }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    Prob,
    Count,
    Expect,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Outcome {
    pub value: f64,
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RecordData {
    /// Outcome probabilities keyed by bit string.
    Prob { outcomes: BTreeMap<String, Outcome> },
    /// Raw outcome counts keyed by bit string.
    Count { outcomes: BTreeMap<String, Outcome> },
    /// A directly reported expectation value.
    Expect { value: ValueWithError },
}

/// Statistics for one measurement setting (one letter per qubit).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SettingRecord {
    pub setting: String,
    pub data: RecordData,
}

/// Expectation of one record plus any bit strings absent from its outcomes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordEstimate {
    pub value: ValueWithError,
    pub missing_outcomes: Vec<String>,
}

fn outcome_sign(bits: &str, mask: &[bool]) -> f64 {
    let ones = bits.bytes().zip(mask).filter(|(b, &m)| m && *b == b'1').count();
    if ones % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn all_bitstrings(n: usize) -> impl Iterator<Item = String> {
    (0..1usize << n).map(move |k| format!("{k:0n$b}"))
}

impl SettingRecord {
    pub fn n(&self) -> usize {
        self.setting.len()
    }

    pub fn letters(&self) -> Vec<Letter> {
        self.setting.chars().filter_map(Letter::from_char).collect()
    }

    /// Outcome statistics an ideal measurement of `state` would produce,
    /// with zero uncertainties.
    pub fn ideal(state: &StateVector, setting: &str) -> Result<SettingRecord, DataError> {
        let letters = parse_setting(setting).map_err(|reason| DataError::Record { setting: setting.into(), reason })?;
        let probs = state
            .measurement_probabilities(&letters)
            .map_err(|e| DataError::Record { setting: setting.into(), reason: e.to_string() })?;
        let n = letters.len();
        let outcomes = probs
            .into_iter()
            .enumerate()
            .map(|(k, p)| (format!("{k:0n$b}"), Outcome { value: p, sigma: Some(0.0) }))
            .collect();
        Ok(SettingRecord { setting: setting.to_string(), data: RecordData::Prob { outcomes } })
    }

    fn validate(&self) -> Result<(), DataError> {
        let err = |reason: String| DataError::Record { setting: self.setting.clone(), reason };
        parse_setting(&self.setting).map_err(err)?;
        let n = self.n();
        match &self.data {
            RecordData::Prob { outcomes } | RecordData::Count { outcomes } => {
                if outcomes.is_empty() {
                    return Err(err("no outcomes".into()));
                }
                for (bits, o) in outcomes {
                    if bits.len() != n || !bits.bytes().all(|b| b == b'0' || b == b'1') {
                        return Err(err(format!("outcome {bits:?} is not a {n}-bit string")));
                    }
                    if o.value < 0.0 || !o.value.is_finite() {
                        return Err(DataError::Negative { setting: self.setting.clone(), what: "value", value: o.value });
                    }
                    if let Some(s) = o.sigma {
                        if s < 0.0 || !s.is_finite() {
                            return Err(DataError::Negative { setting: self.setting.clone(), what: "sigma", value: s });
                        }
                    }
                }
                if let RecordData::Prob { outcomes } = &self.data {
                    let sum: f64 = outcomes.values().map(|o| o.value).sum();
                    if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
                        return Err(DataError::ProbabilitySum { setting: self.setting.clone(), sum });
                    }
                }
            }
            RecordData::Expect { value } => {
                if value.sigma < 0.0 || !value.sigma.is_finite() {
                    return Err(DataError::Negative { setting: self.setting.clone(), what: "sigma", value: value.sigma });
                }
                if value.value.abs() > 1.0 + PROBABILITY_SUM_TOLERANCE {
                    return Err(err(format!("expectation {} outside [-1, 1]", value.value)));
                }
            }
        }
        Ok(())
    }

    /// Probabilities with per-outcome sigmas; counts are normalized by the
    /// total. Count rows without a sigma use `sqrt(count)`.
    fn probabilities(&self, mode: ErrorMode) -> Result<(BTreeMap<String, ValueWithError>, Option<f64>), DataError> {
        let need_sigma = |bits: &str| DataError::Record {
            setting: self.setting.clone(),
            reason: format!("outcome {bits} has no sigma"),
        };
        match &self.data {
            RecordData::Prob { outcomes } => {
                if mode == ErrorMode::Poisson {
                    return Err(DataError::Mode { setting: self.setting.clone(), mode, needs: "raw counts" });
                }
                let probs = outcomes
                    .iter()
                    .map(|(b, o)| Ok((b.clone(), ValueWithError::new(o.value, o.sigma.ok_or_else(|| need_sigma(b))?))))
                    .collect::<Result<_, DataError>>()?;
                Ok((probs, None))
            }
            RecordData::Count { outcomes } => {
                let total: f64 = outcomes.values().map(|o| o.value).sum();
                if total <= 0.0 {
                    return Err(DataError::Record { setting: self.setting.clone(), reason: "zero total count".into() });
                }
                let probs = outcomes
                    .iter()
                    .map(|(b, o)| {
                        let sigma = o.sigma.unwrap_or_else(|| o.value.sqrt());
                        (b.clone(), ValueWithError::new(o.value / total, sigma / total))
                    })
                    .collect();
                Ok((probs, Some(total)))
            }
            RecordData::Expect { .. } => Err(DataError::Record {
                setting: self.setting.clone(),
                reason: "only an expectation value was recorded".into(),
            }),
        }
    }

    /// Expectation of the product of the measured letters restricted to the
    /// qubits in `mask`.
    fn estimate_masked(&self, mask: &[bool], mode: ErrorMode) -> Result<RecordEstimate, DataError> {
        if let RecordData::Expect { value } = &self.data {
            if mode == ErrorMode::Poisson {
                return Err(DataError::Mode { setting: self.setting.clone(), mode, needs: "raw counts" });
            }
            return Ok(RecordEstimate { value: *value, missing_outcomes: Vec::new() });
        }
        let (probs, total) = self.probabilities(mode)?;
        let missing_outcomes = all_bitstrings(self.n()).filter(|b| !probs.contains_key(b)).collect();
        let parts: Vec<(f64, ValueWithError)> = probs.iter().map(|(b, p)| (outcome_sign(b, mask), *p)).collect();
        let value = match (mode, total) {
            (ErrorMode::Poisson, Some(n)) => {
                let e: f64 = parts.iter().map(|(s, p)| s * p.value).sum();
                let second: f64 = parts.iter().map(|(s, p)| s * s * p.value).sum();
                ValueWithError::new(e, ((second - e * e).max(0.0) / n).sqrt())
            }
            _ => combine(&parts, mode),
        };
        Ok(RecordEstimate { value, missing_outcomes })
    }

    /// Probability of one outcome with its sigma.
    pub fn probability_of(&self, bits: &str, mode: ErrorMode) -> Result<ValueWithError, DataError> {
        let mode = if mode == ErrorMode::Poisson && !matches!(self.data, RecordData::Count { .. }) {
            return Err(DataError::Mode { setting: self.setting.clone(), mode, needs: "raw counts" });
        } else {
            mode
        };
        let (probs, total) = self.probabilities(mode)?;
        let p = probs.get(bits).copied().unwrap_or(ValueWithError::new(0.0, 0.0));
        Ok(match (mode, total) {
            (ErrorMode::Poisson, Some(n)) => ValueWithError::new(p.value, (p.value * (1.0 - p.value) / n).sqrt()),
            _ => p,
        })
    }
}

fn parse_setting(s: &str) -> Result<Vec<Letter>, String> {
    if s.is_empty() {
        return Err("empty setting".into());
    }
    s.chars()
        .map(|c| match c {
            'X' | 'Y' | 'Z' => Ok(Letter::from_char(c).unwrap()),
            _ => Err(format!("setting letter {c:?} is not X, Y or Z")),
        })
        .collect()
}

/// Expectation of `rec` under `mode`: `Σ_k s_k p_k` with `s_k` the product of
/// per-qubit eigenvalues of outcome `k`.
pub fn expectation_from_record(rec: &SettingRecord, mode: ErrorMode) -> Result<RecordEstimate, DataError> {
    rec.validate()?;
    rec.estimate_masked(&vec![true; rec.n()], mode)
}

/// One row of a data file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataRow {
    pub setting: String,
    #[serde(default)]
    pub outcome: Option<String>,
    pub value: f64,
    #[serde(default)]
    pub sigma: Option<f64>,
    pub kind: RowKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DataSet {
    pub n: usize,
    pub records: Vec<SettingRecord>,
    pub error_mode: ErrorMode,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonRows {
    Bare(Vec<DataRow>),
    Wrapped { rows: Vec<DataRow> },
}

impl DataSet {
    pub fn new(records: Vec<SettingRecord>, error_mode: ErrorMode) -> Result<DataSet, DataError> {
        let n = records.first().ok_or(DataError::Empty)?.n();
        let mut seen = std::collections::BTreeSet::new();
        for r in &records {
            r.validate()?;
            if r.n() != n {
                return Err(DataError::Record {
                    setting: r.setting.clone(),
                    reason: format!("{} letters, expected {n}", r.n()),
                });
            }
            if !seen.insert(r.setting.clone()) {
                return Err(DataError::Record { setting: r.setting.clone(), reason: "duplicate record".into() });
            }
        }
        Ok(DataSet { n, records, error_mode })
    }

    /// Ideal statistics of `state` for each setting.
    pub fn ideal(state: &StateVector, settings: &[String], error_mode: ErrorMode) -> Result<DataSet, DataError> {
        let records = settings.iter().map(|s| SettingRecord::ideal(state, s)).collect::<Result<_, _>>()?;
        DataSet::new(records, error_mode)
    }

    /// Groups rows into records; row numbers in errors are 1-based data rows.
    pub fn from_rows(rows: Vec<DataRow>, error_mode: ErrorMode) -> Result<DataSet, DataError> {
        let mut order: Vec<String> = Vec::new();
        let mut grouped: BTreeMap<String, (RowKind, Vec<(usize, DataRow)>)> = BTreeMap::new();
        for (i, row) in rows.into_iter().enumerate() {
            let row_no = i + 1;
            let setting = row.setting.trim().to_string();
            parse_setting(&setting).map_err(|reason| DataError::Row { row: row_no, reason })?;
            match grouped.get_mut(&setting) {
                Some((kind, list)) => {
                    if *kind != row.kind {
                        return Err(DataError::Row { row: row_no, reason: format!("setting {setting} mixes row kinds") });
                    }
                    list.push((row_no, row));
                }
                None => {
                    order.push(setting.clone());
                    grouped.insert(setting, (row.kind, vec![(row_no, row)]));
                }
            }
        }
        let mut records = Vec::with_capacity(order.len());
        for setting in order {
            let (kind, list) = grouped.remove(&setting).expect("grouped above");
            let data = match kind {
                RowKind::Expect => {
                    if list.len() != 1 {
                        return Err(DataError::Row {
                            row: list[1].0,
                            reason: format!("setting {setting} has more than one expectation row"),
                        });
                    }
                    let (row_no, row) = &list[0];
                    let sigma = row.sigma.ok_or(DataError::Row { row: *row_no, reason: "expectation row needs a sigma".into() })?;
                    RecordData::Expect { value: ValueWithError { value: row.value, sigma } }
                }
                RowKind::Prob | RowKind::Count => {
                    let mut outcomes = BTreeMap::new();
                    for (row_no, row) in list {
                        let bits = row
                            .outcome
                            .as_deref()
                            .map(str::trim)
                            .filter(|b| !b.is_empty())
                            .ok_or(DataError::Row { row: row_no, reason: "missing outcome bit string".into() })?
                            .to_string();
                        if outcomes.insert(bits.clone(), Outcome { value: row.value, sigma: row.sigma }).is_some() {
                            return Err(DataError::Row { row: row_no, reason: format!("duplicate outcome {bits}") });
                        }
                    }
                    if kind == RowKind::Prob {
                        RecordData::Prob { outcomes }
                    } else {
                        RecordData::Count { outcomes }
                    }
                }
            };
            records.push(SettingRecord { setting, data });
        }
        DataSet::new(records, error_mode)
    }

    pub fn from_csv(text: &str, error_mode: ErrorMode) -> Result<DataSet, DataError> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let rows = reader
            .deserialize::<DataRow>()
            .enumerate()
            .map(|(i, r)| r.map_err(|e| DataError::Row { row: i + 1, reason: e.to_string() }))
            .collect::<Result<Vec<_>, _>>()?;
        DataSet::from_rows(rows, error_mode)
    }

    pub fn from_json(text: &str, error_mode: ErrorMode) -> Result<DataSet, DataError> {
        let rows = match serde_json::from_str::<JsonRows>(text).map_err(|e| DataError::Format(e.to_string()))? {
            JsonRows::Bare(rows) | JsonRows::Wrapped { rows } => rows,
        };
        DataSet::from_rows(rows, error_mode)
    }

    /// JSON if the text starts with `[` or `{`, CSV otherwise.
    pub fn parse(text: &str, error_mode: ErrorMode) -> Result<DataSet, DataError> {
        match text.trim_start().as_bytes().first() {
            Some(b'[') | Some(b'{') => DataSet::from_json(text, error_mode),
            _ => DataSet::from_csv(text, error_mode),
        }
    }

    pub fn record(&self, setting: &str) -> Option<&SettingRecord> {
        self.records.iter().find(|r| r.setting == setting)
    }

    fn require(&self, setting: &str) -> Result<&SettingRecord, DataError> {
        self.record(setting).ok_or_else(|| DataError::MissingSetting(setting.to_string()))
    }

    /// Expectation of a setting under the data set's error mode.
    pub fn expectation(&self, setting: &str) -> Result<ValueWithError, DataError> {
        Ok(expectation_from_record(self.require(setting)?, self.error_mode)?.value)
    }

    /// Expectation of a Hermitian word: a record with exactly the word's
    /// letters, or an outcome record that agrees with the word on its support.
    pub fn word_expectation(&self, word: &PauliWord) -> Result<ValueWithError, DataError> {
        let sign = word.phase().sign().ok_or_else(|| DataError::NotMeasurable(word.to_string()))? as f64;
        let letters = word.to_plain_string();
        let scale = |v: ValueWithError| ValueWithError::new(sign * v.value, v.sigma);
        if !word.letters().contains(&Letter::I) {
            return Ok(scale(self.expectation(&letters)?));
        }
        let mask: Vec<bool> = word.letters().iter().map(|l| !l.is_identity()).collect();
        let rec = self
            .records
            .iter()
            .filter(|r| !matches!(r.data, RecordData::Expect { .. }))
            .find(|r| r.setting.chars().zip(letters.chars()).all(|(a, b)| b == 'I' || a == b))
            .ok_or_else(|| DataError::NotMeasurable(word.to_string()))?;
        Ok(scale(rec.estimate_masked(&mask, self.error_mode)?.value))
    }
}

/// Settings `{X,Y}^n` with an even number of `Y`, paired with the sign
/// `(-1)^{#Y/2}`. Summed with these signs they form the GHZ-Mermin operator.
pub fn mermin_settings(n: usize) -> Vec<(String, f64)> {
    xy_settings(n, 0)
}

/// Settings with an odd number of `Y`, signed `(-1)^{(#Y+1)/2}`; these give
/// the imaginary part of `<0...0|ρ|1...1>`.
fn odd_settings(n: usize) -> Vec<(String, f64)> {
    xy_settings(n, 1)
}

fn xy_settings(n: usize, parity: u32) -> Vec<(String, f64)> {
    (0..1usize << n)
        .filter(|m| m.count_ones() % 2 == parity)
        .map(|m| {
            let s: String = (0..n).map(|q| if m >> (n - 1 - q) & 1 == 1 { 'Y' } else { 'X' }).collect();
            let y = m.count_ones();
            let sign = if ((y + parity) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
            (s, sign)
        })
        .collect()
}

fn signed_sum(data: &DataSet, settings: &[(String, f64)]) -> Result<ValueWithError, DataError> {
    let parts = settings
        .iter()
        .map(|(s, c)| Ok((*c, data.expectation(s)?)))
        .collect::<Result<Vec<_>, DataError>>()?;
    Ok(combine(&parts, data.error_mode))
}

/// `Σ_{even #Y} (-1)^{#Y/2} E(w)`; for three qubits
/// `E(XXX) - E(XYY) - E(YXY) - E(YYX)`.
pub fn mermin_value(data: &DataSet) -> Result<ValueWithError, DataError> {
    signed_sum(data, &mermin_settings(data.n))
}

/// `Σ c_i <term_i>` evaluated from data. Each term is measured through the
/// product of its groups.
pub fn operator_value(op: &BellOperator, data: &DataSet) -> Result<ValueWithError, DataError> {
    let parts = op
        .terms
        .iter()
        .map(|t| {
            let p = t.product().map_err(|e| DataError::Format(e.to_string()))?;
            Ok((t.coefficient, data.word_expectation(&p)?))
        })
        .collect::<Result<Vec<_>, DataError>>()?;
    Ok(combine(&parts, data.error_mode))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityReport {
    pub fidelity: ValueWithError,
    pub p_all_zero: ValueWithError,
    pub p_all_one: ValueWithError,
    /// `Re <0...0|ρ|1...1>`.
    pub coherence_re: ValueWithError,
    /// `Im <0...0|ρ|1...1>`; reported, not part of the fidelity.
    pub coherence_im: ValueWithError,
}

/// Fidelity with `(|0...0> + |1...1>)/sqrt(2)`:
/// `F = (p_{0...0} + p_{1...1})/2 + Re <0...0|ρ|1...1>`.
///
/// The diagonal terms come from the all-Z record; the coherence from the
/// `{X,Y}^n` expectations as `Σ_{even #Y} (-1)^{#Y/2} E(w) / 2^n`.
pub fn fidelity(data: &DataSet) -> Result<FidelityReport, DataError> {
    let n = data.n;
    let z_setting = "Z".repeat(n);
    let z = data.require(&z_setting)?;
    z.validate()?;
    let p_all_zero = z.probability_of(&"0".repeat(n), data.error_mode)?;
    let p_all_one = z.probability_of(&"1".repeat(n), data.error_mode)?;
    let scale = 1.0 / f64::powi(2.0, n as i32);
    let re = signed_sum(data, &mermin_settings(n))?;
    let im = signed_sum(data, &odd_settings(n))?;
    let coherence_re = ValueWithError::new(re.value * scale, re.sigma * scale);
    let coherence_im = ValueWithError::new(im.value * scale, im.sigma * scale);
    let fidelity = combine(&[(0.5, p_all_zero), (0.5, p_all_one), (1.0, coherence_re)], data.error_mode);
    Ok(FidelityReport { fidelity, p_all_zero, p_all_one, coherence_re, coherence_im })
}

/// Expectation of `W = I/2 - |G><G|`, i.e. `1/2 - F`. Negative values
/// certify genuine multipartite entanglement.
pub fn witness(f: ValueWithError) -> ValueWithError {
    ValueWithError { value: 0.5 - f.value, sigma: f.sigma }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prob_record(setting: &str, outcomes: &[(&str, f64, f64)]) -> SettingRecord {
        SettingRecord {
            setting: setting.into(),
            data: RecordData::Prob {
                outcomes: outcomes
                    .iter()
                    .map(|(b, p, s)| (b.to_string(), Outcome { value: *p, sigma: Some(*s) }))
                    .collect(),
            },
        }
    }

    #[test]
    fn reconstructed_two_outcome_record() {
        // E = -0.863 ± 0.028 rewritten as p(+1) = (1+E)/2, p(-1) = (1-E)/2
        let e = -0.863;
        let rec = prob_record("XYY", &[("000", (1.0 + e) / 2.0, 0.014), ("001", (1.0 - e) / 2.0, 0.014)]);
        let est = expectation_from_record(&rec, ErrorMode::Linear).unwrap();
        assert!((est.value.value - e).abs() < 1e-12);
        assert!((est.value.sigma - 0.028).abs() < 1e-12);
        assert_eq!(est.missing_outcomes.len(), 6);
    }

    #[test]
    fn single_outcome_and_uniform() {
        let rec = prob_record("ZZZ", &[("000", 1.0, 0.0)]);
        let est = expectation_from_record(&rec, ErrorMode::Linear).unwrap();
        assert_eq!((est.value.value, est.value.sigma), (1.0, 0.0));
        let uniform: Vec<(String, f64, f64)> = all_bitstrings(3).map(|b| (b, 0.125, 0.0)).collect();
        let refs: Vec<(&str, f64, f64)> = uniform.iter().map(|(b, p, s)| (b.as_str(), *p, *s)).collect();
        for setting in ["XYY", "ZZZ", "YXZ"] {
            let est = expectation_from_record(&prob_record(setting, &refs), ErrorMode::Quadrature).unwrap();
            assert!(est.value.value.abs() < 1e-15);
            assert!(est.missing_outcomes.is_empty());
        }
    }

    #[test]
    fn negative_probability_is_rejected() {
        let rec = prob_record("Z", &[("0", 1.1, 0.0), ("1", -0.1, 0.0)]);
        assert!(matches!(expectation_from_record(&rec, ErrorMode::Linear), Err(DataError::Negative { .. })));
    }

    #[test]
    fn probability_sum_tolerance() {
        assert!(expectation_from_record(&prob_record("Z", &[("0", 0.5, 0.0), ("1", 0.49, 0.0)]), ErrorMode::Linear).is_ok());
        assert!(matches!(
            expectation_from_record(&prob_record("Z", &[("0", 0.5, 0.0), ("1", 0.45, 0.0)]), ErrorMode::Linear),
            Err(DataError::ProbabilitySum { .. })
        ));
    }

    #[test]
    fn poisson_needs_counts() {
        let rec = prob_record("Z", &[("0", 0.5, 0.01), ("1", 0.5, 0.01)]);
        assert!(matches!(expectation_from_record(&rec, ErrorMode::Poisson), Err(DataError::Mode { .. })));
        let counts = SettingRecord {
            setting: "Z".into(),
            data: RecordData::Count {
                outcomes: [("0".to_string(), Outcome { value: 75.0, sigma: None }), ("1".to_string(), Outcome { value: 25.0, sigma: None })]
                    .into_iter()
                    .collect(),
            },
        };
        let est = expectation_from_record(&counts, ErrorMode::Poisson).unwrap();
        assert!((est.value.value - 0.5).abs() < 1e-15);
        // sqrt((1 - 0.25) / 100)
        assert!((est.value.sigma - 0.75f64.sqrt() / 10.0).abs() < 1e-15);
    }

    #[test]
    fn mermin_settings_for_three_qubits() {
        let s = mermin_settings(3);
        assert_eq!(
            s,
            vec![("XXX".into(), 1.0), ("XYY".into(), -1.0), ("YXY".into(), -1.0), ("YYX".into(), -1.0)]
        );
        let odd = odd_settings(3);
        assert_eq!(
            odd,
            vec![("XXY".into(), -1.0), ("XYX".into(), -1.0), ("YXX".into(), -1.0), ("YYY".into(), 1.0)]
        );
    }

    #[test]
    fn missing_setting_is_named() {
        let rows = vec![DataRow { setting: "XXX".into(), outcome: None, value: 0.9, sigma: Some(0.1), kind: RowKind::Expect }];
        let data = DataSet::from_rows(rows, ErrorMode::Linear).unwrap();
        assert_eq!(mermin_value(&data), Err(DataError::MissingSetting("XYY".into())));
    }

    #[test]
    fn witness_values() {
        let w = witness(ValueWithError::new(0.9, 0.03));
        assert!((w.value + 0.4).abs() < 1e-12);
        assert_eq!(w.sigma, 0.03);
        assert_eq!(witness(ValueWithError::new(0.5, 0.0)).value, 0.0);
        assert_eq!(witness(ValueWithError::new(1.0, 0.0)).value, -0.5);
    }

    #[test]
    fn csv_rows_are_validated() {
        let bad_kind = "setting,outcome,value,sigma,kind\nZZZ,000,1.0,0.0,maybe\n";
        assert!(matches!(DataSet::from_csv(bad_kind, ErrorMode::Linear), Err(DataError::Row { row: 1, .. })));
        let mixed = "setting,outcome,value,sigma,kind\nZ,0,0.5,0.0,prob\nZ,1,10,,count\n";
        assert!(matches!(DataSet::from_csv(mixed, ErrorMode::Linear), Err(DataError::Row { row: 2, .. })));
        let dup = "setting,outcome,value,sigma,kind\nZ,0,0.5,0.0,prob\nZ,0,0.5,0.0,prob\n";
        assert!(DataSet::from_csv(dup, ErrorMode::Linear).is_err());
        let short = "setting,outcome,value,sigma,kind\nZZ,0,1.0,0.0,prob\n";
        assert!(DataSet::from_csv(short, ErrorMode::Linear).is_err());
    }

    #[test]
    fn json_mirror() {
        let text = r#"{"rows": [{"setting": "XX", "value": 0.5, "sigma": 0.1, "kind": "expect"}]}"#;
        let data = DataSet::parse(text, ErrorMode::Linear).unwrap();
        assert_eq!(data.expectation("XX").unwrap(), ValueWithError::new(0.5, 0.1));
        let bare = r#"[{"setting": "Z", "outcome": "0", "value": 1.0, "sigma": 0.0, "kind": "prob"}]"#;
        assert_eq!(DataSet::parse(bare, ErrorMode::Linear).unwrap().expectation("Z").unwrap().value, 1.0);
    }
}
