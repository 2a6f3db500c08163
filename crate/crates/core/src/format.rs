//! JSON encoding of an algebra together with a double bracket and `τ`.
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "basis_names": ["1", "t"],
//!   "unit": [[0, "1"]],
//!   "structure_constants": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"]],
//!   "bracket": [],
//!   "tau": "1"
//! }
//! ```
//!
//! Entries are summed on load, so duplicates are allowed and order is irrelevant.

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::bracket::DoubleBracket;
use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, parse_rational, Rational};
use crate::sparse::SparseVec;

/// On-disk form of an algebra with a double bracket.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    pub basis_names: Vec<String>,
    pub unit: Vec<(usize, String)>,
    pub structure_constants: Vec<(usize, usize, usize, String)>,
    #[serde(default)]
    pub bracket: Vec<(usize, usize, usize, usize, String)>,
    pub tau: String,
}

fn field_rational(field: &str, idx: usize, s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|e| Error::Parse(format!("{field}[{idx}]: {e}")))
}

fn check_index(field: &str, idx: usize, values: &[usize], dim: usize) -> Result<()> {
    match values.iter().find(|&&v| v >= dim) {
        Some(&v) => Err(Error::Parse(format!("{field}[{idx}]: index {v} out of range for dimension {dim}"))),
        None => Ok(()),
    }
}

impl AlgebraFile {
    /// Parses JSON; syntax errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Pretty JSON with one tensor entry per line.
    pub fn to_json(&self) -> String {
        fn list<T: Serialize>(items: &[T]) -> String {
            if items.is_empty() {
                return "[]".into();
            }
            let rows: Vec<String> = items.iter().map(|x| format!("    {}", json(x))).collect();
            format!("[\n{}\n  ]", rows.join(",\n"))
        }
        fn json<T: Serialize + ?Sized>(x: &T) -> String {
            serde_json::to_string(x).expect("file serializes")
        }
        let mut fields = Vec::new();
        if let Some(name) = &self.name {
            fields.push(format!("  \"name\": {}", json(name)));
        }
        fields.push(format!("  \"dimension\": {}", self.dimension));
        fields.push(format!("  \"basis_names\": {}", json(&self.basis_names)));
        fields.push(format!("  \"unit\": {}", json(&self.unit)));
        fields.push(format!("  \"structure_constants\": {}", list(&self.structure_constants)));
        fields.push(format!("  \"bracket\": {}", list(&self.bracket)));
        fields.push(format!("  \"tau\": {}", json(&self.tau)));
        format!("{{\n{}\n}}\n", fields.join(",\n"))
    }

    /// Builds the algebra and bracket, checking indices and rationals.
    pub fn to_bracket(&self) -> Result<DoubleBracket> {
        let dim = self.dimension;
        if self.basis_names.len() != dim {
            return Err(Error::Parse(format!(
                "basis_names has {} entries but dimension is {dim}",
                self.basis_names.len()
            )));
        }
        let mut unit = Vec::new();
        for (p, (i, c)) in self.unit.iter().enumerate() {
            check_index("unit", p, &[*i], dim)?;
            unit.push((*i, field_rational("unit", p, c)?));
        }
        let mut consts = Vec::new();
        for (p, (i, j, k, c)) in self.structure_constants.iter().enumerate() {
            check_index("structure_constants", p, &[*i, *j, *k], dim)?;
            consts.push((*i, *j, *k, field_rational("structure_constants", p, c)?));
        }
        let mut br = Vec::new();
        for (p, (i, j, k, l, c)) in self.bracket.iter().enumerate() {
            check_index("bracket", p, &[*i, *j, *k, *l], dim)?;
            br.push((*i, *j, *k, *l, field_rational("bracket", p, c)?));
        }
        let tau = parse_rational(&self.tau).map_err(|e| Error::Parse(format!("tau: {e}")))?;
        let alg = Algebra::new(self.basis_names.clone(), consts, SparseVec::from_entries(unit))?;
        DoubleBracket::new(alg, br, tau)
    }

    /// Canonical file for a bracket: entries sorted, zeros omitted.
    pub fn from_bracket(db: &DoubleBracket, name: Option<String>) -> Self {
        let alg = db.algebra();
        Self {
            name,
            dimension: alg.dim(),
            basis_names: alg.basis_names().to_vec(),
            unit: alg.unit().0.iter().map(|(i, c)| (i, format_rational(c))).collect(),
            structure_constants: alg.structure_constants().map(|(i, j, k, c)| (i, j, k, format_rational(c))).collect(),
            bracket: db.entries().map(|(i, j, k, l, c)| (i, j, k, l, format_rational(c))).collect(),
            tau: format_rational(db.tau()),
        }
    }
}

/// Name and JSON text of every bundled example.
pub const BUNDLED: [(&str, &str); 3] = [
    ("qp2", include_str!("../data/qp2.json")),
    ("qp3", include_str!("../data/qp3.json")),
    ("dp3", include_str!("../data/dp3.json")),
];

/// Manifest describing the bundled examples.
pub const MANIFEST: &str = include_str!("../data/manifest.json");

/// Loads a bundled example by name.
pub fn bundled(name: &str) -> Result<DoubleBracket> {
    let text = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::InvalidArgument(format!("no bundled example named {name}")))?;
    AlgebraFile::from_json(text)?.to_bracket()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::tensor2;
    use crate::exact_arith::{frac, rat};

    fn generated(name: &str) -> DoubleBracket {
        match name {
            "qp2" => DoubleBracket::zero(Algebra::truncated_polynomial(2), rat(1)),
            "qp3" => DoubleBracket::monogenic_truncated(3, &tensor2(&[(2, 0, frac(1, 2)), (0, 2, frac(-1, 2))]), rat(1)),
            "dp3" => DoubleBracket::monogenic_truncated(3, &tensor2(&[(1, 0, rat(1)), (0, 1, rat(-1))]), rat(0)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn bundled_files_are_the_generated_brackets() {
        for (name, _) in BUNDLED {
            let loaded = bundled(name).unwrap();
            let expected = generated(name);
            assert_eq!(
                AlgebraFile::from_bracket(&loaded, None),
                AlgebraFile::from_bracket(&expected, None),
                "{name}"
            );
        }
    }

    #[test]
    fn round_trip() {
        for (name, text) in BUNDLED {
            let f = AlgebraFile::from_json(text).unwrap();
            assert_eq!(AlgebraFile::from_json(&f.to_json()).unwrap(), f, "{name}");
            let canon = AlgebraFile::from_bracket(&f.to_bracket().unwrap(), f.name.clone());
            assert_eq!(AlgebraFile::from_json(&canon.to_json()).unwrap(), canon);
        }
    }

    #[test]
    fn duplicates_are_summed() {
        let text = r#"{"dimension":1,"basis_names":["1"],"unit":[[0,"1/2"],[0,"1/2"]],
            "structure_constants":[[0,0,0,"1"]],"bracket":[],"tau":"0"}"#;
        let db = AlgebraFile::from_json(text).unwrap().to_bracket().unwrap();
        assert_eq!(db.algebra().unit().0.get(0), rat(1));
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let zero_den = r#"{"dimension":1,"basis_names":["1"],"unit":[[0,"1/0"]],"structure_constants":[],"tau":"0"}"#;
        let err = AlgebraFile::from_json(zero_den).unwrap().to_bracket().unwrap_err();
        assert!(err.to_string().contains("unit[0]"), "{err}");
        let range = r#"{"dimension":1,"basis_names":["1"],"unit":[[0,"1"]],"structure_constants":[[0,0,3,"1"]],"tau":"0"}"#;
        assert!(AlgebraFile::from_json(range).unwrap().to_bracket().is_err());
        let syntax = "{\"dimension\": 1,\n \"basis_names\": [\"1\"\n";
        let err = AlgebraFile::from_json(syntax).unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
        let names = r#"{"dimension":2,"basis_names":["1"],"unit":[],"structure_constants":[],"tau":"0"}"#;
        assert!(AlgebraFile::from_json(names).unwrap().to_bracket().is_err());
    }
}
