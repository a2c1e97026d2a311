//! Portable certificate files: every witness travels with the spec it was
//! computed from and that spec's hash, so a separate process can re-check
//! the claim from the file alone.

use serde::{Deserialize, Serialize};

use crate::classifier::{
    validate_embedding, verify_report, AlmostRandomWitness, ClassificationReport, Pattern,
};
use crate::dimensions::{Lemma56Witness, ShatterWitness, ThresholdWitness};
use crate::error::Error;
use crate::graph::GraphSpec;
use crate::Vertex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateFile {
    VcShatter {
        spec: GraphSpec,
        spec_sha256: String,
        k: u64,
        window: u64,
        witness: ShatterWitness,
    },
    Thresholds {
        spec: GraphSpec,
        spec_sha256: String,
        k: u64,
        t: u64,
        window: u64,
        witness: ThresholdWitness,
    },
    Lemma56 {
        spec: GraphSpec,
        spec_sha256: String,
        n: u64,
        window: u64,
        witness: Lemma56Witness,
    },
    AlmostRandom {
        spec: GraphSpec,
        spec_sha256: String,
        n: u64,
        window: u64,
        witness: AlmostRandomWitness,
    },
    InducedEmbedding {
        spec: GraphSpec,
        spec_sha256: String,
        pattern: Pattern,
        window: u64,
        embedding: Vec<Vertex>,
    },
    ClassificationReport { report: ClassificationReport },
}

impl CertificateFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates always serialize")
    }

    pub fn from_json(json: &str) -> Result<Self, Error> {
        let file: CertificateFile = serde_json::from_str(json)?;
        Ok(file)
    }

    /// Re-checks everything the file claims. Returns the list of problems,
    /// empty meaning the certificate is valid.
    pub fn verify(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let check_spec = |spec: &GraphSpec, hash: &str, problems: &mut Vec<String>| {
            if spec.validate().is_err() {
                problems.push("embedded spec fails validation".into());
            }
            if spec.sha256_hex() != hash {
                problems.push("spec hash does not match the embedded spec".into());
            }
        };
        match self {
            CertificateFile::VcShatter {
                spec,
                spec_sha256,
                k,
                window,
                witness,
            } => {
                check_spec(spec, spec_sha256, &mut problems);
                if let Err(e) = witness.validate(spec, *k, *window) {
                    problems.push(e);
                }
            }
            CertificateFile::Thresholds {
                spec,
                spec_sha256,
                k,
                window,
                witness,
                t,
            } => {
                check_spec(spec, spec_sha256, &mut problems);
                if witness.hypotheses.len() as u64 != *t {
                    problems.push(format!(
                        "file claims {t} thresholds, witness holds {}",
                        witness.hypotheses.len()
                    ));
                }
                if let Err(e) = witness.validate(spec, *k, *window) {
                    problems.push(e);
                }
            }
            CertificateFile::Lemma56 {
                spec,
                spec_sha256,
                n,
                witness,
                ..
            } => {
                check_spec(spec, spec_sha256, &mut problems);
                if witness.v.len() as u64 != *n {
                    problems.push(format!(
                        "file claims depth {n}, witness has depth {}",
                        witness.v.len()
                    ));
                }
                if let Err(e) = witness.validate(spec) {
                    problems.push(e);
                }
            }
            CertificateFile::AlmostRandom {
                spec,
                spec_sha256,
                n,
                witness,
                ..
            } => {
                check_spec(spec, spec_sha256, &mut problems);
                if witness.a.len() as u64 != *n {
                    problems.push(format!(
                        "file claims level {n}, witness set has size {}",
                        witness.a.len()
                    ));
                }
                if let Err(e) = witness.validate(spec) {
                    problems.push(e);
                }
            }
            CertificateFile::InducedEmbedding {
                spec,
                spec_sha256,
                pattern,
                embedding,
                ..
            } => {
                check_spec(spec, spec_sha256, &mut problems);
                if let Err(e) = validate_embedding(spec, *pattern, embedding) {
                    problems.push(e);
                }
            }
            CertificateFile::ClassificationReport { report } => {
                if let Err(mut e) = verify_report(report) {
                    problems.append(&mut e);
                }
            }
        }
        problems
    }
}
