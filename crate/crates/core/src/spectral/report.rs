use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::pages::SpectralPage;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageRow {
    pub r: usize,
    pub p: i64,
    pub q: i64,
    pub dim: usize,
    pub reliable: bool,
}

/// Nonzero page dimensions with reliability flags, ordered by `(r, p, q)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageReport {
    pub rows: Vec<PageRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pages: Option<Vec<SpectralPage>>,
}

impl PageReport {
    /// Dimension table; `with_matrices` embeds the full pages.
    pub fn new(pages: &[SpectralPage], with_matrices: bool) -> PageReport {
        let mut rows: Vec<PageRow> = pages
            .iter()
            .flat_map(|pg| {
                pg.entries
                    .iter()
                    .filter(|e| e.dim > 0)
                    .map(move |e| PageRow { r: pg.r, p: e.p, q: e.q, dim: e.dim, reliable: e.reliable })
            })
            .collect();
        rows.sort_by_key(|x| (x.r, x.p, x.q));
        PageReport { rows, pages: with_matrices.then(|| pages.to_vec()) }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,p,q,dim,reliable\n");
        for x in &self.rows {
            s.push_str(&format!("{},{},{},{},{}\n", x.r, x.p, x.q, x.dim, x.reliable));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<PageReport> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
