use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CurveError;
use crate::polygon::{Dim, Polygon};

/// JSON form of a polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonDocument {
    pub dimension: usize,
    pub closed: bool,
    pub vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed polygon document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("dimension must be 2 or 3, got {0}")]
    Dimension(usize),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

impl PolygonDocument {
    pub fn from_polygon(polygon: &Polygon, label: Option<String>) -> Self {
        Self { dimension: polygon.dim().as_usize(), closed: polygon.is_closed(), vertices: polygon.coords(), label }
    }

    pub fn to_polygon(&self) -> Result<Polygon, DocumentError> {
        let dim = Dim::from_usize(self.dimension).ok_or(DocumentError::Dimension(self.dimension))?;
        Ok(Polygon::from_rows(dim, &self.vertices, self.closed)?)
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: Self = serde_json::from_str(text)?;
        doc.to_polygon()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents hold only finite numbers")
    }

    pub fn read(path: &Path) -> Result<Self, DocumentError> {
        let text = std::fs::read_to_string(path).map_err(|source| DocumentError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), DocumentError> {
        std::fs::write(path, self.to_json() + "\n").map_err(|source| DocumentError::Io { path: path.display().to_string(), source })
    }
}
