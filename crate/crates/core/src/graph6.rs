//! graph6 codec (single-byte size form, orders 1..=62) and a plain edge-list reader.

use crate::error::{Error, Result};
use crate::graph::{bit, Graph};

const HEADER: &str = ">>graph6<<";
pub const MAX_GRAPH6_ORDER: usize = 62;

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset, message: message.into() }
}

/// Decodes one graph6 record. A leading `>>graph6<<` header and a trailing
/// line ending are accepted.
pub fn decode_graph6(text: &str) -> Result<Graph> {
    let trimmed = text.trim_end_matches(['\n', '\r']);
    let (base, body) = match trimmed.strip_prefix(HEADER) {
        Some(rest) => (HEADER.len(), rest.as_bytes()),
        None => (0, trimmed.as_bytes()),
    };
    for (i, &b) in body.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(parse_err(base + i, format!("byte {b:#04x} outside the graph6 range 63..=126")));
        }
    }
    let Some(&first) = body.first() else {
        return Err(parse_err(base, "empty record"));
    };
    if first == 126 {
        return Err(Error::UnsupportedSize("multi-byte graph6 size fields (order > 62) are not supported".into()));
    }
    let n = (first - 63) as usize;
    if n == 0 {
        return Err(parse_err(base, "order 0 graphs are not supported"));
    }
    let nbits = n * (n - 1) / 2;
    let nbytes = nbits.div_ceil(6);
    let data = &body[1..];
    if data.len() != nbytes {
        let offset = base + 1 + data.len().min(nbytes);
        return Err(parse_err(offset, format!("order {n} needs {nbytes} edge bytes, found {}", data.len())));
    }
    let mut rows = vec![0u64; n];
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - 63;
            if byte & (0x20 >> (k % 6)) != 0 {
                rows[i] |= bit(j);
                rows[j] |= bit(i);
            }
            k += 1;
        }
    }
    if nbits % 6 != 0 {
        let last = data[nbytes - 1] - 63;
        let pad = 6 - nbits % 6;
        if last & ((1u8 << pad) - 1) != 0 {
            return Err(parse_err(base + nbytes, "nonzero padding bits in final byte"));
        }
    }
    Graph::from_rows(rows)
}

/// Encodes the labeled graph as graph6 (no header).
pub fn encode_graph6(g: &Graph) -> Result<String> {
    let n = g.order();
    if n > MAX_GRAPH6_ORDER {
        return Err(Error::UnsupportedSize(format!("graph6 encoding supports orders up to 62, got {n}")));
    }
    let mut out = Vec::with_capacity(1 + (n * n) / 12 + 1);
    out.push(63 + n as u8);
    let mut acc = 0u8;
    let mut used = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            used += 1;
            if used == 6 {
                out.push(63 + acc);
                acc = 0;
                used = 0;
            }
        }
    }
    if used > 0 {
        out.push(63 + (acc << (6 - used)));
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

/// Reads an edge list: one `u v` pair per line, 0-based, whitespace separated.
/// Blank lines and lines starting with `#` are skipped. The order is
/// `order` when given, else one more than the largest vertex index.
pub fn parse_edge_list(text: &str, order: Option<usize>) -> Result<Graph> {
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Schema {
                line: lineno + 1,
                message: format!("expected a vertex index, found {s:?}"),
            })
        };
        if fields.len() != 2 {
            return Err(Error::Schema {
                line: lineno + 1,
                message: format!("expected two vertices, found {} fields", fields.len()),
            });
        }
        edges.push((parse(fields[0])?, parse(fields[1])?));
    }
    let n = match order {
        Some(n) => n,
        None => edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0),
    };
    Graph::from_edges(n, &edges)
}
