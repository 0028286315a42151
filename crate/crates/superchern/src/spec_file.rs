//! JSON spec files describing a superconnection, and the JSON renderings
//! used by the CLI.
//!
//! The file format keeps the structure in JSON and the interesting grammar
//! in expression strings: each matrix entry is a list of terms
//! `{ "coeff": "<expression>", "dx": [i, j, ...] }` with 1-based, strictly
//! increasing dx indices.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior_forms::Form;
use crate::graded_matrix_forms::{GradedShape, MatForm};
use crate::numeric::ExteriorValue;
use crate::parser::parse_polynomial;
use crate::superconnection::Superconnection;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpecTerm {
    pub coeff: String,
    #[serde(default)]
    pub dx: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpecFile {
    pub n_vars: usize,
    pub p: usize,
    pub q: usize,
    pub a_prime: Vec<Vec<Vec<SpecTerm>>>,
}

impl SpecFile {
    pub fn to_superconnection(&self) -> Result<Superconnection> {
        let shape = GradedShape::new(self.p, self.q)?;
        let dim = shape.dim();
        if self.a_prime.len() != dim {
            return Err(Error::Spec(format!(
                "a_prime has {} rows, expected {dim}",
                self.a_prime.len()
            )));
        }
        let mut mat = MatForm::zero(shape, self.n_vars);
        for (i, row) in self.a_prime.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Spec(format!(
                    "a_prime row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            for (j, terms) in row.iter().enumerate() {
                let mut entry = Form::zero(self.n_vars);
                for term in terms {
                    let poly = parse_polynomial(&term.coeff, self.n_vars)?;
                    if !term.dx.windows(2).all(|w| w[0] < w[1]) {
                        return Err(Error::Spec(format!(
                            "entry ({i},{j}): dx indices must be strictly increasing"
                        )));
                    }
                    let mut indices = Vec::with_capacity(term.dx.len());
                    for &d in &term.dx {
                        if d == 0 || d > self.n_vars {
                            return Err(Error::Spec(format!(
                                "entry ({i},{j}): dx index {d} out of range 1..{}",
                                self.n_vars
                            )));
                        }
                        indices.push((d - 1) as u32);
                    }
                    let component = Form::component(self.n_vars, indices, poly)?;
                    entry = entry.checked_add(&component)?;
                }
                *mat.entry_mut(i, j) = entry;
            }
        }
        Superconnection::new(mat)
    }
}

pub fn load_spec(path: &Path) -> Result<Superconnection> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse {
            col: 0,
            msg: format!("cannot read {}: {e}", path.display()),
        })?;
    let spec: SpecFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
        col: e.column(),
        msg: format!("invalid spec JSON: {e}"),
    })?;
    spec.to_superconnection()
}

/// Canonical JSON rendering of an exact form: components sorted by
/// (degree, index tuple), coefficients as canonical expression strings.
#[derive(Clone, Debug, Serialize)]
pub struct FormJson {
    pub n_vars: usize,
    pub text: String,
    pub components: Vec<FormComponentJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormComponentJson {
    pub degree: usize,
    pub dx: Vec<usize>,
    pub coeff: String,
}

pub fn form_to_json(form: &Form) -> FormJson {
    let components = form
        .sorted_keys()
        .into_iter()
        .map(|key| FormComponentJson {
            degree: key.len(),
            dx: key.iter().map(|&i| i as usize + 1).collect(),
            coeff: form.coefficient(key).to_string(),
        })
        .collect();
    FormJson {
        n_vars: form.n_vars(),
        text: form.to_string(),
        components,
    }
}

/// Numeric exterior element as a list of coordinates per index tuple.
#[derive(Clone, Debug, Serialize)]
pub struct ExteriorValueJson {
    pub n_vars: usize,
    pub coords: Vec<CoordJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoordJson {
    pub dx: Vec<usize>,
    pub value: f64,
}

pub fn exterior_value_to_json(value: &ExteriorValue) -> ExteriorValueJson {
    let n = value.n_vars();
    let mut masks: Vec<usize> = (0..(1usize << n)).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let coords = masks
        .into_iter()
        .map(|mask| CoordJson {
            dx: (0..n).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect(),
            value: value.get(mask),
        })
        .collect();
    ExteriorValueJson { n_vars: n, coords }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_poly::Poly;

    fn running_spec() -> SpecFile {
        SpecFile {
            n_vars: 2,
            p: 1,
            q: 0,
            a_prime: vec![vec![vec![SpecTerm {
                coeff: "x1".into(),
                dx: vec![2],
            }]]],
        }
    }

    #[test]
    fn loads_running_example() {
        let s = running_spec().to_superconnection().unwrap();
        let expected = Form::component(2, vec![1], Poly::var(2, 0).unwrap()).unwrap();
        assert_eq!(*s.a_prime().entry(0, 0), expected);
    }

    #[test]
    fn rejects_even_entries() {
        // a 1-form in an off-diagonal block has even total parity
        let spec = SpecFile {
            n_vars: 2,
            p: 1,
            q: 1,
            a_prime: vec![
                vec![vec![], vec![SpecTerm { coeff: "1".into(), dx: vec![1] }]],
                vec![vec![], vec![]],
            ],
        };
        assert_eq!(spec.to_superconnection(), Err(Error::APrimeNotOdd));
    }

    #[test]
    fn empty_entry_is_zero() {
        let spec = SpecFile {
            n_vars: 2,
            p: 1,
            q: 0,
            a_prime: vec![vec![vec![]]],
        };
        let s = spec.to_superconnection().unwrap();
        assert!(s.a_prime().is_zero());
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let mut spec = running_spec();
        spec.q = 1;
        assert!(matches!(spec.to_superconnection(), Err(Error::Spec(_))));
    }

    #[test]
    fn rejects_bad_dx() {
        let mut spec = running_spec();
        spec.a_prime[0][0][0].dx = vec![3];
        assert!(matches!(spec.to_superconnection(), Err(Error::Spec(_))));
        spec.a_prime[0][0][0].dx = vec![2, 1];
        assert!(matches!(spec.to_superconnection(), Err(Error::Spec(_))));
    }

    #[test]
    fn round_trip_through_rendering() {
        let s = running_spec().to_superconnection().unwrap();
        let json = form_to_json(s.a_prime().entry(0, 0));
        // re-parse every coefficient string
        for c in &json.components {
            crate::parser::parse_polynomial(&c.coeff, 2).unwrap();
        }
        assert_eq!(json.text, "x1*dx2");
    }
}
