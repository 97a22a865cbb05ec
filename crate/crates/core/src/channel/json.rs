//! Channel JSON: `{"form": "transfer"|"choi"|"kraus", "in_qubits", "out_qubits", ...}`
//! with a `matrix` payload for transfer/Choi forms and `operators` for Kraus.

use serde::{Deserialize, Serialize};

use super::{ChoiOperator, KrausSet, TransferMatrix};
use crate::error::{EqnnError, Result};
use crate::linalg::json::MatrixJson;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelForm {
    Transfer,
    Choi,
    Kraus,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelJson {
    pub form: ChannelForm,
    pub in_qubits: usize,
    pub out_qubits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operators: Option<Vec<MatrixJson>>,
}

fn qubits(d: usize) -> Result<usize> {
    if d.is_power_of_two() {
        Ok(d.trailing_zeros() as usize)
    } else {
        Err(EqnnError::Invalid(format!("dimension {d} is not a qubit register")))
    }
}

impl ChannelJson {
    pub fn from_transfer(t: &TransferMatrix) -> Result<Self> {
        Ok(Self {
            form: ChannelForm::Transfer,
            in_qubits: qubits(t.in_dim)?,
            out_qubits: qubits(t.out_dim)?,
            matrix: Some(MatrixJson::from_matrix(&t.matrix)),
            operators: None,
        })
    }

    pub fn from_choi(j: &ChoiOperator) -> Result<Self> {
        Ok(Self {
            form: ChannelForm::Choi,
            in_qubits: qubits(j.in_dim)?,
            out_qubits: qubits(j.out_dim)?,
            matrix: Some(MatrixJson::from_matrix(&j.matrix)),
            operators: None,
        })
    }

    pub fn from_kraus(k: &KrausSet) -> Result<Self> {
        Ok(Self {
            form: ChannelForm::Kraus,
            in_qubits: qubits(k.in_dim)?,
            out_qubits: qubits(k.out_dim)?,
            matrix: None,
            operators: Some(k.operators.iter().map(MatrixJson::from_matrix).collect()),
        })
    }

    fn payload(&self) -> Result<crate::linalg::CMatrix> {
        self.matrix
            .as_ref()
            .ok_or_else(|| EqnnError::Invalid("channel JSON lacks a \"matrix\" payload".into()))?
            .to_matrix()
    }

    /// Decodes the channel into transfer-matrix form.
    pub fn to_transfer(&self) -> Result<TransferMatrix> {
        let din = 1usize << self.in_qubits;
        let dout = 1usize << self.out_qubits;
        match self.form {
            ChannelForm::Transfer => TransferMatrix::new(self.payload()?, din, dout),
            ChannelForm::Choi => Ok(ChoiOperator::new(self.payload()?, din, dout)?.to_transfer()),
            ChannelForm::Kraus => Ok(self.to_kraus()?.to_transfer()),
        }
    }

    pub fn to_choi(&self) -> Result<ChoiOperator> {
        match self.form {
            ChannelForm::Choi => {
                ChoiOperator::new(self.payload()?, 1 << self.in_qubits, 1 << self.out_qubits)
            }
            _ => Ok(self.to_transfer()?.to_choi()),
        }
    }

    pub fn to_kraus(&self) -> Result<KrausSet> {
        let ops = self
            .operators
            .as_ref()
            .ok_or_else(|| EqnnError::Invalid("Kraus channel JSON lacks \"operators\"".into()))?
            .iter()
            .map(|m| m.to_matrix())
            .collect::<Result<Vec<_>>>()?;
        let k = KrausSet::new(ops)?;
        if k.in_dim != 1 << self.in_qubits || k.out_dim != 1 << self.out_qubits {
            return Err(EqnnError::DimensionMismatch("Kraus operators do not match the declared qubits".into()));
        }
        Ok(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_round_trip() {
        let t = TransferMatrix::identity(2);
        for j in [
            ChannelJson::from_transfer(&t).unwrap(),
            ChannelJson::from_choi(&t.to_choi()).unwrap(),
            ChannelJson::from_kraus(&t.to_choi().to_kraus(1e-9).unwrap()).unwrap(),
        ] {
            let text = serde_json::to_string(&j).unwrap();
            let back: ChannelJson = serde_json::from_str(&text).unwrap();
            assert!((back.to_transfer().unwrap().matrix - &t.matrix).norm() < 1e-12);
        }
    }

    #[test]
    fn missing_payload_is_an_error() {
        let j = ChannelJson {
            form: ChannelForm::Choi,
            in_qubits: 1,
            out_qubits: 1,
            matrix: None,
            operators: None,
        };
        assert!(j.to_transfer().is_err());
    }
}
