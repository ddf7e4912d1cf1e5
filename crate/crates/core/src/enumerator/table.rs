use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Staged counts for one `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CountRow {
    pub n: usize,
    pub possible: u64,
    pub looping: u64,
    pub direct: u64,
    pub isometries: u64,
    pub constructible: u64,
}

impl CountRow {
    /// `[possible, looping, direct, isometries, constructible]`.
    pub fn cells(&self) -> [u64; 5] {
        [self.possible, self.looping, self.direct, self.isometries, self.constructible]
    }

    pub fn column(&self, name: &str) -> Option<u64> {
        let i = ["possible", "looping", "direct", "isometries", "constructible"]
            .iter()
            .position(|c| *c == name)?;
        Some(self.cells()[i])
    }
}

/// Count rows ordered by `N`; serialized as CSV with header
/// `n,possible,looping,direct,isometries,constructible`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CountTable {
    pub rows: Vec<CountRow>,
}

impl CountTable {
    pub fn row(&self, n: usize) -> Option<&CountRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    /// `(N, count)` pairs of one column.
    pub fn series(&self, column: &str) -> Option<Vec<(usize, u64)>> {
        self.rows.iter().map(|r| Some((r.n, r.column(column)?))).collect()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        if self.rows.is_empty() {
            out.write_record(["n", "possible", "looping", "direct", "isometries", "constructible"])?;
        }
        for r in &self.rows {
            out.serialize(r)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rows = Vec::new();
        for row in csv::Reader::from_reader(r).deserialize() {
            rows.push(row?);
        }
        Ok(CountTable { rows })
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}
