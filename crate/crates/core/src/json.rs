//! JSON forms of t-modules, biderivations and reduction certificates.
//!
//! Matrices are arrays of rows of twisted-polynomial strings in the element
//! grammar. A t-module is either `{"q", "dim", "phi_t"}` or the Drinfeld
//! shorthand `{"q", "drinfeld": [a_1, ..., a_r]}`; encoding always produces
//! the first form.

use serde::{Deserialize, Serialize};

use crate::biderivation::Biderivation;
use crate::error::{Error, Result};
use crate::ext::Certificate;
use crate::field::{Fq, FqConfig, KElement};
use crate::parse::{format_matrix, parse_k_element, parse_matrix};
use crate::skew::SkewMatrix;
use crate::tmodule::{DrinfeldModule, TModule};

pub type MatrixJson = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TModuleJson {
    pub q: FqConfig,
    #[serde(flatten)]
    pub body: TModuleBody,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TModuleBody {
    Matrix { dim: usize, phi_t: MatrixJson },
    Drinfeld { drinfeld: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiderivationJson {
    pub source: TModuleJson,
    pub target: TModuleJson,
    pub delta_t: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub input: BiderivationJson,
    pub reduced: BiderivationJson,
    pub witness: MatrixJson,
    pub check: bool,
}

fn check_field(fq: &Fq, config: &FqConfig) -> Result<()> {
    if fq.config() != config {
        return Err(Error::ModuleMismatch(format!(
            "object lives over F_{} but F_{} was expected",
            config.q(),
            fq.q()
        )));
    }
    Ok(())
}

impl TModuleJson {
    pub fn encode(m: &TModule) -> Self {
        TModuleJson {
            q: m.field().config().clone(),
            body: TModuleBody::Matrix { dim: m.dim(), phi_t: format_matrix(m.phi_t()) },
        }
    }

    /// A fresh field handle for the declared q.
    pub fn field(&self) -> Result<Fq> {
        Fq::new(self.q.clone())
    }

    /// Builds the module over `fq`, which must have the declared q.
    pub fn decode(&self, fq: &Fq) -> Result<TModule> {
        check_field(fq, &self.q)?;
        match &self.body {
            TModuleBody::Matrix { dim, phi_t } => {
                let m = parse_matrix(fq, phi_t)?;
                if m.shape() != (*dim, *dim) {
                    return Err(Error::DimensionMismatch(format!(
                        "dim is {dim} but phi_t is {}x{}",
                        m.rows(),
                        m.cols()
                    )));
                }
                TModule::new(m)
            }
            TModuleBody::Drinfeld { drinfeld } => Ok(decode_drinfeld(fq, drinfeld)?.as_tmodule().clone()),
        }
    }

    /// The Drinfeld module described, if the body is the shorthand or a 1x1
    /// presentation of Drinfeld shape.
    pub fn decode_drinfeld(&self, fq: &Fq) -> Result<DrinfeldModule> {
        match &self.body {
            TModuleBody::Drinfeld { drinfeld } => {
                check_field(fq, &self.q)?;
                decode_drinfeld(fq, drinfeld)
            }
            TModuleBody::Matrix { .. } => self
                .decode(fq)?
                .as_drinfeld()
                .ok_or_else(|| Error::NotDrinfeld("expected a 1-dimensional module θ + a_1 τ + ... + a_r τ^r".into())),
        }
    }
}

/// Parses the coefficient list `a_1, ..., a_r` of a Drinfeld module.
pub fn decode_drinfeld<S: AsRef<str>>(fq: &Fq, coeffs: &[S]) -> Result<DrinfeldModule> {
    let coeffs = coeffs.iter().map(|s| parse_k_element(fq, s.as_ref())).collect::<Result<Vec<KElement>>>()?;
    DrinfeldModule::new(coeffs)
}

impl BiderivationJson {
    pub fn encode(d: &Biderivation) -> Self {
        BiderivationJson {
            source: TModuleJson::encode(d.source()),
            target: TModuleJson::encode(d.target()),
            delta_t: format_matrix(d.value()),
        }
    }

    pub fn field(&self) -> Result<Fq> {
        self.source.field()
    }

    pub fn decode(&self, fq: &Fq) -> Result<Biderivation> {
        let source = self.source.decode(fq)?;
        let target = self.target.decode(fq)?;
        Biderivation::new(source, target, parse_matrix(fq, &self.delta_t)?)
    }
}

impl CertificateJson {
    pub fn encode(c: &Certificate) -> Self {
        CertificateJson {
            input: BiderivationJson::encode(&c.input),
            reduced: BiderivationJson::encode(&c.reduced),
            witness: format_matrix(&c.witness),
            check: c.check,
        }
    }

    /// Rebuilds the certificate, taking `check` as recorded.
    pub fn decode(&self, fq: &Fq) -> Result<Certificate> {
        Ok(Certificate {
            input: self.input.decode(fq)?,
            reduced: self.reduced.decode(fq)?,
            witness: decode_matrix(fq, &self.witness)?,
            check: self.check,
        })
    }
}

pub fn encode_matrix(m: &SkewMatrix) -> MatrixJson {
    format_matrix(m)
}

pub fn decode_matrix(fq: &Fq, rows: &MatrixJson) -> Result<SkewMatrix> {
    parse_matrix(fq, rows)
}

pub fn from_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid JSON: {e}")))
}
