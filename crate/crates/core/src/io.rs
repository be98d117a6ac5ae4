//! JSON state files.
//!
//! ```json
//! {
//!   "dims": [2, 2],
//!   "matrix": [
//!     [[0.5, 0.0], [0.0, 0.0], [0.0, 0.0], [0.5, 0.0]],
//!     ...
//!   ],
//!   "metadata": {"name": "bell", "description": "..."}
//! }
//! ```
//!
//! Matrices are row-major with `[re, im]` entries. [`StateFile::to_canonical`]
//! writes one matrix row per line; loading and re-saving a file in that layout
//! reproduces it byte for byte.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};
use crate::types::{BipartiteState, DensityMatrix};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl StateFile {
    pub fn from_state(state: &BipartiteState, metadata: Option<Metadata>) -> Self {
        let m = state.matrix();
        Self {
            dims: [state.dim_a(), state.dim_b()],
            matrix: (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
            metadata,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Validates shape and density-matrix invariants.
    pub fn to_state(&self) -> Result<BipartiteState> {
        let n = self.matrix.len();
        let [da, db] = self.dims;
        if da.checked_mul(db) != Some(n) {
            return Err(Error::Dimension(format!(
                "dims {da}x{db} do not match a {n}-row matrix"
            )));
        }
        if let Some(row) = self.matrix.iter().position(|r| r.len() != n) {
            return Err(Error::Dimension(format!("row {row} does not have {n} entries")));
        }
        let m = CMatrix::from_fn(n, n, |i, j| {
            let [re, im] = self.matrix[i][j];
            c(re, im)
        });
        BipartiteState::new(DensityMatrix::new(m)?, da, db)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_canonical())?;
        Ok(())
    }

    /// Canonical text: two-space indent, one matrix row per line, shortest
    /// round-trip float formatting, trailing newline.
    pub fn to_canonical(&self) -> String {
        let num = |x: f64| serde_json::to_string(&x).expect("finite floats serialize");
        let mut out = String::from("{\n");
        let _ = writeln!(out, "  \"dims\": [{}, {}],", self.dims[0], self.dims[1]);
        out.push_str("  \"matrix\": [\n");
        for (i, row) in self.matrix.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|[re, im]| format!("[{}, {}]", num(*re), num(*im))).collect();
            let sep = if i + 1 < self.matrix.len() { "," } else { "" };
            let _ = writeln!(out, "    [{}]{sep}", cells.join(", "));
        }
        out.push_str("  ]");
        if let Some(meta) = &self.metadata {
            out.push_str(",\n  \"metadata\": ");
            let text = serde_json::to_string_pretty(meta).expect("strings serialize");
            out.push_str(&text.replace('\n', "\n  "));
        }
        out.push_str("\n}\n");
        out
    }
}

pub fn load_state(path: impl AsRef<Path>) -> Result<BipartiteState> {
    StateFile::load(path)?.to_state()
}

pub fn save_state(path: impl AsRef<Path>, state: &BipartiteState, metadata: Option<Metadata>) -> Result<()> {
    StateFile::from_state(state, metadata).save(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_bipartite, rng_from_seed};

    fn meta() -> Option<Metadata> {
        Some(Metadata {
            name: Some("test".into()),
            description: Some("a \"quoted\" note".into()),
        })
    }

    #[test]
    fn canonical_text_round_trips() {
        let mut rng = rng_from_seed(8);
        let st = random_bipartite(2, 3, &mut rng);
        for m in [None, meta()] {
            let text = StateFile::from_state(&st, m).to_canonical();
            let again = StateFile::parse(&text).unwrap().to_canonical();
            assert_eq!(text, again);
            let back = StateFile::parse(&text).unwrap().to_state().unwrap();
            assert_eq!(back.matrix(), st.matrix());
        }
    }

    #[test]
    fn layout() {
        let st = BipartiteState::new(DensityMatrix::maximally_mixed(2), 2, 1).unwrap();
        let text = StateFile::from_state(&st, meta()).to_canonical();
        let expected = "{\n  \"dims\": [2, 1],\n  \"matrix\": [\n    [[0.5, 0.0], [0.0, 0.0]],\n    [[0.0, 0.0], [0.5, 0.0]]\n  ],\n  \"metadata\": {\n    \"name\": \"test\",\n    \"description\": \"a \\\"quoted\\\" note\"\n  }\n}\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(StateFile::parse("{not json"), Err(Error::Json(_))));
        let f = StateFile::parse(r#"{"dims":[2,2],"matrix":[[[1,0]]]}"#).unwrap();
        assert!(matches!(f.to_state(), Err(Error::Dimension(_))));
        let f = StateFile::parse(r#"{"dims":[2,1],"matrix":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#).unwrap();
        assert!(matches!(f.to_state(), Err(Error::Contract(_))));
        assert!(StateFile::parse(r#"{"dims":[2,1],"matrix":[],"extra":1}"#).is_err());
    }

    #[test]
    fn files_on_disk() {
        let dir = std::env::temp_dir().join(format!("dstrength-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("s.json");
        let st = random_bipartite(2, 2, &mut rng_from_seed(1));
        save_state(&path, &st, None).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        let back = load_state(&path).unwrap();
        save_state(&path, &back, None).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), bytes);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
