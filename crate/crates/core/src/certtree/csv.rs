//! Bit-exact CSV codec for certificate trees.
//!
//! One header row, then one row per node in ID order; every value is a
//! decimal integer and non-applicable fields stay empty, so encoding is
//! deterministic and lossless. Decoding maps columns by header name (the
//! published artifacts order witness columns differently than the canonical
//! order we emit), ignores unknown columns, and transparently unwraps gzip.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use thiserror::Error;

use super::node::{CertNode, GlobalWitness, LocalWitness, NodeBody};
use super::region::Region5;

/// Canonical column order for encoding.
pub const COLUMNS: [&str; 27] = [
    "ID",
    "nodeType",
    "nrChildren",
    "IDfirstChild",
    "split",
    "T1_min",
    "T1_max",
    "V1_min",
    "V1_max",
    "T2_min",
    "T2_max",
    "V2_min",
    "V2_max",
    "A_min",
    "A_max",
    "S_index",
    "wx_nominator",
    "wy_nominator",
    "w_denominator",
    "P1_index",
    "P2_index",
    "P3_index",
    "Q1_index",
    "Q2_index",
    "Q3_index",
    "r",
    "sigma_Q",
];

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("missing header row")]
    MissingHeader,
    #[error("required column {0:?} absent from header")]
    MissingColumn(&'static str),
    #[error("row {row}: column {col:?} has non-integer value {value:?}")]
    BadInt { row: u64, col: &'static str, value: String },
    #[error("row {row}: column {col:?} is empty but required for nodeType {node_type}")]
    MissingField { row: u64, col: &'static str, node_type: u8 },
    #[error("row {row}: unknown nodeType {value}")]
    UnknownNodeType { row: u64, value: i64 },
}

/// Streaming writer; emits the header immediately.
pub struct TreeWriter<W: Write> {
    out: W,
}

impl<W: Write> TreeWriter<W> {
    pub fn new(mut out: W) -> std::io::Result<Self> {
        writeln!(out, "{}", COLUMNS.join(","))?;
        Ok(TreeWriter { out })
    }

    pub fn write_node(&mut self, n: &CertNode) -> std::io::Result<()> {
        let mut f: [String; 27] = std::array::from_fn(|_| String::new());
        f[0] = n.id.to_string();
        f[1] = n.node_type().to_string();
        for d in 0..5 {
            let (lo, hi) = n.region.bounds[d];
            f[5 + 2 * d] = lo.to_string();
            f[6 + 2 * d] = hi.to_string();
        }
        match &n.body {
            NodeBody::Split { nr_children, id_first_child, split } => {
                f[2] = nr_children.to_string();
                f[3] = id_first_child.to_string();
                f[4] = split.to_string();
            }
            NodeBody::Global(g) => {
                f[15] = g.s_index.to_string();
                f[16] = g.wx.to_string();
                f[17] = g.wy.to_string();
                f[18] = g.wden.to_string();
            }
            NodeBody::Local(l) => {
                for i in 0..3 {
                    f[19 + i] = l.p[i].to_string();
                    f[22 + i] = l.q[i].to_string();
                }
                f[25] = l.r_numer.to_string();
                f[26] = l.sigma_q.to_string();
            }
        }
        writeln!(self.out, "{}", f.join(","))
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Streaming reader over any line source.
pub struct TreeReader<R: BufRead> {
    lines: std::io::Lines<R>,
    /// position in the file's row for each canonical column, if present
    colpos: [Option<usize>; 27],
    /// header names we did not recognize (reported once, rows unaffected)
    pub unknown_columns: Vec<String>,
    row: u64,
}

impl<R: BufRead> TreeReader<R> {
    pub fn new(reader: R) -> Result<Self, CodecError> {
        let mut lines = reader.lines();
        let header = lines.next().ok_or(CodecError::MissingHeader)??;
        let names: Vec<&str> = header.split(',').map(str::trim).collect();
        let mut colpos = [None; 27];
        let mut unknown = Vec::new();
        for (pos, name) in names.iter().enumerate() {
            match COLUMNS.iter().position(|c| c == name) {
                Some(ci) => colpos[ci] = Some(pos),
                None => unknown.push(name.to_string()),
            }
        }
        // The ID, type and region columns are always required; witness
        // columns are only consulted for rows of the matching type.
        for ci in 0..15 {
            if colpos[ci].is_none() {
                return Err(CodecError::MissingColumn(COLUMNS[ci]));
            }
        }
        Ok(TreeReader { lines, colpos, unknown_columns: unknown, row: 0 })
    }

    fn parse_node(&self, line: &str) -> Result<CertNode, CodecError> {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let get = |ci: usize| -> Option<&str> {
            let v = self.colpos[ci].and_then(|p| fields.get(p)).copied().unwrap_or("");
            if v.is_empty() {
                None
            } else {
                Some(v)
            }
        };
        let int = |ci: usize| -> Result<Option<i64>, CodecError> {
            get(ci)
                .map(|v| {
                    v.parse::<i64>().map_err(|_| CodecError::BadInt {
                        row: self.row,
                        col: COLUMNS[ci],
                        value: v.to_string(),
                    })
                })
                .transpose()
        };
        let node_type = int(1)?.ok_or(CodecError::MissingField {
            row: self.row,
            col: "nodeType",
            node_type: 0,
        })?;
        let required = |ci: usize| -> Result<i64, CodecError> {
            int(ci)?.ok_or(CodecError::MissingField {
                row: self.row,
                col: COLUMNS[ci],
                node_type: node_type as u8,
            })
        };
        let id = required(0)? as u64;
        let mut bounds = [(0i64, 0i64); 5];
        for (d, b) in bounds.iter_mut().enumerate() {
            *b = (required(5 + 2 * d)?, required(6 + 2 * d)?);
        }
        let body = match node_type {
            1 => NodeBody::Global(GlobalWitness {
                s_index: required(15)? as u32,
                wx: required(16)?,
                wy: required(17)?,
                wden: required(18)?,
            }),
            2 => {
                let mut p = [0u32; 3];
                let mut q = [0u32; 3];
                for i in 0..3 {
                    p[i] = required(19 + i)? as u32;
                    q[i] = required(22 + i)? as u32;
                }
                NodeBody::Local(LocalWitness {
                    p,
                    q,
                    r_numer: required(25)?,
                    sigma_q: required(26)? as u8,
                })
            }
            3 => NodeBody::Split {
                nr_children: required(2)? as u32,
                id_first_child: required(3)? as u64,
                split: required(4)? as u8,
            },
            other => return Err(CodecError::UnknownNodeType { row: self.row, value: other }),
        };
        Ok(CertNode { id, region: Region5::new(bounds), body })
    }
}

impl<R: BufRead> Iterator for TreeReader<R> {
    type Item = Result<CertNode, CodecError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            match self.lines.next()? {
                Err(e) => return Some(Err(e.into())),
                Ok(line) => {
                    if line.trim().is_empty() {
                        continue;
                    }
                    self.row += 1;
                    return Some(self.parse_node(&line));
                }
            }
        }
    }
}

/// Creates a tree file, gzip-compressing when the path ends in `.gz` (the
/// encoder finalizes the stream when the returned writer is dropped).
pub fn create_tree(path: &Path) -> std::io::Result<TreeWriter<Box<dyn Write>>> {
    let file = std::io::BufWriter::new(File::create(path)?);
    let inner: Box<dyn Write> = if path.extension().is_some_and(|e| e == "gz") {
        Box::new(flate2::write::GzEncoder::new(file, flate2::Compression::default()))
    } else {
        Box::new(file)
    };
    TreeWriter::new(inner)
}

/// Opens a tree file, unwrapping gzip when the two magic bytes match.
pub fn open_tree(path: &Path) -> Result<TreeReader<Box<dyn BufRead>>, CodecError> {
    let mut file = BufReader::new(File::open(path)?);
    let magic = {
        let buf = file.fill_buf()?;
        buf.len() >= 2 && buf[0] == 0x1f && buf[1] == 0x8b
    };
    let inner: Box<dyn BufRead> = if magic {
        Box::new(BufReader::new(MultiGzDecoder::new(file)))
    } else {
        Box::new(file)
    };
    TreeReader::new(inner)
}
