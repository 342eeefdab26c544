use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{StirlingTable, StirlingVariant};
use crate::error::Result;

/// Stirling tables persisted as one JSON document, keyed by variant.
#[derive(Debug, Default)]
pub struct StirlingStore {
    path: Option<PathBuf>,
    tables: Vec<StirlingTable>,
    dirty: bool,
}

#[derive(Serialize, Deserialize)]
struct StoreFile {
    tables: Vec<StirlingTable>,
}

impl StirlingStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens the store at `path`; a missing file is an empty store.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let tables = if path.exists() {
            let text = fs::read_to_string(&path)?;
            serde_json::from_str::<StoreFile>(&text)?.tables
        } else {
            Vec::new()
        };
        Ok(StirlingStore {
            path: Some(path),
            tables,
            dirty: false,
        })
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    /// The table for `variant` with at least `max_n + 1` rows.
    pub fn table(&mut self, variant: &StirlingVariant, max_n: usize) -> Result<&mut StirlingTable> {
        let idx = match self.tables.iter().position(|t| t.variant() == variant) {
            Some(i) => i,
            None => {
                self.tables.push(StirlingTable::new(variant.clone(), max_n)?);
                self.dirty = true;
                self.tables.len() - 1
            }
        };
        let table = &mut self.tables[idx];
        if table.max_n() < max_n {
            table.extend_to(max_n);
            self.dirty = true;
        }
        Ok(table)
    }

    /// Writes the store back if anything changed.
    pub fn save(&mut self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        if !self.dirty {
            return Ok(());
        }
        let file = StoreFile {
            tables: self.tables.clone(),
        };
        fs::write(path, serde_json::to_string_pretty(&file)?)?;
        self.dirty = false;
        Ok(())
    }
}
