//! Persistent store of labeled signatures used as the classification database.
//!
//! The on-disk format is a versioned JSON document. Floating point values are
//! written with shortest round-trip precision, so a save/load cycle reproduces
//! every sample bit for bit. Duplicate labels are allowed (multiple prototypes
//! per class); a warning is printed when one is loaded.

use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

use crate::error::{AnsigError, Result};
use crate::signature::Signature;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DbEntry {
    pub label: String,
    pub signature: Signature,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SigDb {
    version: u32,
    k: Option<usize>,
    weighted: Option<bool>,
    two_ansig: Option<bool>,
    entries: Vec<DbEntry>,
}

impl Default for SigDb {
    fn default() -> Self {
        Self::new()
    }
}

impl SigDb {
    pub fn new() -> Self {
        Self {
            version: FORMAT_VERSION,
            k: None,
            weighted: None,
            two_ansig: None,
            entries: Vec::new(),
        }
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn weighted(&self) -> Option<bool> {
        self.weighted
    }

    pub fn two_ansig(&self) -> Option<bool> {
        self.two_ansig
    }

    pub fn entries(&self) -> &[DbEntry] {
        &self.entries
    }

    /// Appends a labeled signature. An empty database adopts the signature's
    /// K and flags; afterwards every entry must match them.
    pub fn add(&mut self, label: &str, signature: Signature) -> Result<()> {
        if label.is_empty() {
            return Err(AnsigError::Format {
                path: String::from("<db>"),
                msg: String::from("empty label"),
            });
        }
        let sig_two = signature.inner.is_some() || signature.inner_degraded;
        match self.k {
            None => {
                self.k = Some(signature.k());
                self.weighted = Some(signature.weighted);
                self.two_ansig = Some(sig_two);
            }
            Some(k) => {
                if signature.k() != k {
                    return Err(AnsigError::KMismatch {
                        a: k,
                        b: signature.k(),
                    });
                }
                if self.weighted != Some(signature.weighted) || self.two_ansig != Some(sig_two) {
                    return Err(AnsigError::Format {
                        path: String::from("<db>"),
                        msg: format!("entry '{label}' has mismatched weighted/two-ansig flags"),
                    });
                }
            }
        }
        self.entries.push(DbEntry {
            label: label.to_string(),
            signature,
        });
        Ok(())
    }

    fn validate(&self, path: &str) -> Result<()> {
        if self.version != FORMAT_VERSION {
            return Err(AnsigError::VersionMismatch {
                expected: FORMAT_VERSION,
                found: self.version,
            });
        }
        if let Some(k) = self.k {
            for entry in &self.entries {
                if entry.signature.k() != k {
                    return Err(AnsigError::Format {
                        path: path.to_string(),
                        msg: format!(
                            "entry '{}' has K = {} but database K = {k}",
                            entry.label,
                            entry.signature.k()
                        ),
                    });
                }
                if entry.label.is_empty() {
                    return Err(AnsigError::Format {
                        path: path.to_string(),
                        msg: String::from("empty label"),
                    });
                }
            }
        }
        Ok(())
    }

    fn warn_duplicates(&self) {
        let mut seen = std::collections::HashSet::new();
        for entry in &self.entries {
            if !seen.insert(entry.label.as_str()) {
                eprintln!(
                    "warning: duplicate label '{}' (kept; treated as extra prototype)",
                    entry.label
                );
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("database serialization cannot fail")
    }

    pub fn from_json(text: &str, path: &str) -> Result<Self> {
        let db: SigDb = serde_json::from_str(text).map_err(|e| AnsigError::Format {
            path: path.to_string(),
            msg: e.to_string(),
        })?;
        db.validate(path)?;
        db.warn_duplicates();
        Ok(db)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| AnsigError::Io {
            path: path.display().to_string(),
            source: e,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| AnsigError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::from_json(&text, &path.display().to_string())
    }
}

/// Single-signature file, same JSON conventions as the database.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct SigFile {
    version: u32,
    signature: Signature,
}

pub fn save_signature(path: &Path, signature: &Signature) -> Result<()> {
    let file = SigFile {
        version: FORMAT_VERSION,
        signature: signature.clone(),
    };
    let text = serde_json::to_string_pretty(&file).expect("signature serialization cannot fail");
    fs::write(path, text).map_err(|e| AnsigError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

pub fn load_signature(path: &Path) -> Result<Signature> {
    let text = fs::read_to_string(path).map_err(|e| AnsigError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let file: SigFile = serde_json::from_str(&text).map_err(|e| AnsigError::Format {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    if file.version != FORMAT_VERSION {
        return Err(AnsigError::VersionMismatch {
            expected: FORMAT_VERSION,
            found: file.version,
        });
    }
    Ok(file.signature)
}
