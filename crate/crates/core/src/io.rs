//! JSON text format for polynomial systems.
//!
//! ```json
//! {"degrees": [2, 2],
//!  "terms": [[{"exponents": [2, 0], "re": 1.0, "im": 0.0}, ...], ...]}
//! ```
//!
//! Exponent tuples of length `n + 1` describe a homogeneous system in
//! `X_0, ..., X_n`; tuples of length `n` describe an affine system in
//! `x_1, ..., x_n`. Absent monomials are zero and `im` defaults to 0.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{normalize_to_sphere, SphereSystem};
use crate::poly::{AffineSystem, DegreeVector, PolySystem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TermRecord {
    exponents: Vec<u32>,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SystemRecord {
    degrees: Vec<u32>,
    terms: Vec<Vec<TermRecord>>,
}

/// A parsed system, in the form the file used.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemFile {
    Homogeneous(PolySystem),
    Affine(AffineSystem),
}

impl SystemFile {
    pub fn degrees(&self) -> &DegreeVector {
        match self {
            SystemFile::Homogeneous(h) => h.degrees(),
            SystemFile::Affine(f) => f.degrees(),
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, SystemFile::Affine(_))
    }

    pub fn homogeneous(&self) -> PolySystem {
        match self {
            SystemFile::Homogeneous(h) => h.clone(),
            SystemFile::Affine(f) => f.homogenize(),
        }
    }

    /// Homogenized and normalized to the unit sphere.
    pub fn to_sphere(&self) -> Result<SphereSystem> {
        normalize_to_sphere(&self.homogeneous())
    }
}

pub fn parse_system(text: &str) -> Result<SystemFile> {
    let record: SystemRecord = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let degrees = DegreeVector::new(record.degrees)?;
    let n = degrees.n();
    if record.terms.len() != n {
        return Err(Error::Parse(format!("{} degrees but {} equations", n, record.terms.len())));
    }
    let width = record.terms.iter().flatten().map(|t| t.exponents.len()).next().unwrap_or(n + 1);
    if record.terms.iter().flatten().any(|t| t.exponents.len() != width) {
        return Err(Error::Parse("exponent tuples differ in length".into()));
    }
    let terms: Vec<Vec<(Vec<u32>, Complex64)>> = record
        .terms
        .into_iter()
        .map(|eq| eq.into_iter().map(|t| (t.exponents, Complex64::new(t.re, t.im))).collect())
        .collect();
    if width == n + 1 {
        Ok(SystemFile::Homogeneous(PolySystem::from_terms(&degrees, &terms)?))
    } else if width == n {
        Ok(SystemFile::Affine(AffineSystem::from_terms(&degrees, &terms)?))
    } else {
        Err(Error::Parse(format!("exponent tuples have length {width}; expected {} or {}", n + 1, n)))
    }
}

pub fn read_system(path: impl AsRef<Path>) -> Result<SystemFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_system(&text)
}

/// Homogeneous JSON listing of the nonzero coefficients of `h`.
pub fn system_to_json(h: &PolySystem) -> String {
    let degrees = h.degrees();
    let terms = (0..h.n())
        .map(|i| {
            h.equation(i)
                .iter()
                .zip(degrees.basis(i).iter())
                .filter(|(c, _)| c.norm_sqr() != 0.0)
                .map(|(c, e)| TermRecord { exponents: e.to_vec(), re: c.re, im: c.im })
                .collect()
        })
        .collect();
    let record = SystemRecord { degrees: degrees.degrees().to_vec(), terms };
    serde_json::to_string_pretty(&record).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::stream_rng;
    use crate::start::random_system_on_sphere;

    #[test]
    fn affine_and_homogeneous_inputs() {
        let affine = r#"{"degrees":[2,2],"terms":[
            [{"exponents":[2,0],"re":1},{"exponents":[0,2],"re":1},{"exponents":[0,0],"re":-1}],
            [{"exponents":[1,1],"re":1,"im":0}]]}"#;
        let homogeneous = r#"{"degrees":[2,2],"terms":[
            [{"exponents":[0,2,0],"re":1},{"exponents":[0,0,2],"re":1},{"exponents":[2,0,0],"re":-1}],
            [{"exponents":[0,1,1],"re":1}]]}"#;
        let a = parse_system(affine).unwrap();
        let h = parse_system(homogeneous).unwrap();
        assert!(a.is_affine() && !h.is_affine());
        assert_eq!(a.homogeneous(), h.homogeneous());
    }

    #[test]
    fn complex_coefficients_and_defaults() {
        let text = r#"{"degrees":[1],"terms":[[{"exponents":[1,0],"re":0.5,"im":-2}]]}"#;
        let h = parse_system(text).unwrap().homogeneous();
        assert_eq!(h.coeff(0, &[1, 0]).unwrap(), Complex64::new(0.5, -2.0));
        assert_eq!(h.coeff(0, &[0, 1]).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        for text in [
            "not json",
            r#"{"degrees":[2],"terms":[]}"#,
            r#"{"degrees":[2],"terms":[[{"exponents":[1,0,0,0],"re":1}]]}"#,
            r#"{"degrees":[2],"terms":[[{"exponents":[1,0],"re":1},{"exponents":[1],"re":1}]]}"#,
            r#"{"degrees":[2],"terms":[[{"exponents":[3],"re":1}]]}"#,
            r#"{"degrees":[0],"terms":[[]]}"#,
        ] {
            assert!(parse_system(text).is_err(), "{text}");
        }
    }

    #[test]
    fn json_round_trip() {
        let dv = DegreeVector::new(vec![2, 3]).unwrap();
        let h = random_system_on_sphere(&dv, &mut stream_rng(71, 0));
        let back = parse_system(&system_to_json(&h)).unwrap().homogeneous();
        assert_eq!(&back, h.system());
    }
}
