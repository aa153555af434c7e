//! JSON documents for elements and witnesses.
//!
//! Complex entries are [re, im] pairs, row-major per block. Floats are
//! emitted with 17 significant digits so parsing is bit-exact across
//! languages.

use amou::element::{Element, Model};
use amou::linalg::{CMat, TolerancePolicy};
use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

/// f64 wrapper that serializes as a 17-significant-digit JSON number.
/// Non-finite values (possible in failure-record residuals) become null,
/// since JSON has no number for them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_unit();
        }
        let raw = serde_json::value::RawValue::from_string(format!("{:.16e}", self.0))
            .map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for F17 {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = Option::<f64>::deserialize(deserializer)?;
        Ok(F17(value.unwrap_or(f64::NAN)))
    }
}

/// One element of M_{m,n}(V) on the wire.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementDocument {
    /// Block dimensions d_j of the model algebra.
    pub model: Vec<usize>,
    /// Amplification shape (m, n).
    pub shape: [usize; 2],
    /// Per-block dense entries, row-major, each entry an [re, im] pair.
    pub blocks: Vec<Vec<[F17; 2]>>,
}

impl ElementDocument {
    pub fn from_element(e: &Element) -> ElementDocument {
        let (m, n) = e.shape();
        ElementDocument {
            model: e.model().block_dims().to_vec(),
            shape: [m, n],
            blocks: e
                .blocks()
                .iter()
                .map(|b| b.entries().iter().map(|z| [F17(z.re), F17(z.im)]).collect())
                .collect(),
        }
    }

    pub fn to_element(&self, tol: TolerancePolicy) -> Result<Element, amou::Error> {
        let model = Model::new(self.model.clone(), tol)?;
        let [m, n] = self.shape;
        if self.blocks.len() != model.block_count() {
            return Err(amou::Error::ShapeError(format!(
                "document has {} blocks, model needs {}",
                self.blocks.len(),
                model.block_count()
            )));
        }
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (entries, &d) in self.blocks.iter().zip(model.block_dims()) {
            let data: Vec<Complex64> = entries
                .iter()
                .map(|&[re, im]| Complex64::new(re.0, im.0))
                .collect();
            blocks.push(CMat::from_entries(m * d, n * d, data)?);
        }
        Element::new(model, m, n, blocks)
    }
}

/// Output of the abs subcommand: both absolute values of the input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AbsDocument {
    /// |v| in M_n(V).
    pub abs: ElementDocument,
    /// |v^*| in M_m(V).
    pub abs_star: ElementDocument,
}

/// Output of the equiv subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub relation: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ElementDocument>,
    /// For the sub relation: the dominated projection r with p ~ r <= q.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominated: Option<ElementDocument>,
    /// For the sub relation: the complement q - r.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complement: Option<ElementDocument>,
    /// For the unitary relation: the assembled unitary u = v + w.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitary: Option<ElementDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}
