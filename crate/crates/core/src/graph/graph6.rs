//! graph6 reader and writer.

use super::Graph;
use crate::error::{Error, Result};

const HEADER: &str = ">>graph6<<";

fn perr(offset: usize, msg: impl Into<String>) -> Error {
    Error::Parse { offset, msg: msg.into() }
}

/// Parses one graph6 record. A leading `>>graph6<<` and trailing line
/// breaks are accepted.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let bytes = text.as_bytes();
    let mut start = 0;
    if text.starts_with(HEADER) {
        start = HEADER.len();
    }
    let mut end = bytes.len();
    while end > start && (bytes[end - 1] == b'\n' || bytes[end - 1] == b'\r') {
        end -= 1;
    }
    let data = &bytes[start..end];
    for (i, &b) in data.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(perr(start + i, format!("byte 0x{b:02x} is outside the graph6 range")));
        }
    }
    if data.is_empty() {
        return Err(perr(start, "empty record"));
    }
    let (n, mut pos) = if data[0] != 126 {
        ((data[0] - 63) as usize, 1)
    } else if data.len() >= 2 && data[1] == 126 {
        if data.len() < 8 {
            return Err(perr(start + data.len(), "truncated 8-byte size header"));
        }
        let mut n = 0usize;
        for &b in &data[2..8] {
            n = (n << 6) | (b - 63) as usize;
        }
        (n, 8)
    } else {
        if data.len() < 4 {
            return Err(perr(start + data.len(), "truncated 4-byte size header"));
        }
        let mut n = 0usize;
        for &b in &data[1..4] {
            n = (n << 6) | (b - 63) as usize;
        }
        (n, 4)
    };
    let nbits = n * n.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    if data.len() - pos != nbytes {
        return Err(perr(
            start + data.len().min(pos + nbytes),
            format!("expected {nbytes} edge bytes for n={n}, found {}", data.len() - pos),
        ));
    }
    let mut g = Graph::empty(n);
    let mut bit = 0usize;
    'outer: for j in 1..n {
        for i in 0..j {
            if bit == nbits {
                break 'outer;
            }
            let byte = data[pos + bit / 6] - 63;
            if byte >> (5 - bit % 6) & 1 == 1 {
                g.add_edge(i, j);
            }
            bit += 1;
        }
    }
    pos += bit / 6;
    if bit % 6 != 0 {
        let byte = data[pos] - 63;
        let pad_mask = (1u8 << (6 - bit % 6)) - 1;
        if byte & pad_mask != 0 {
            return Err(perr(start + pos, "nonzero padding bits"));
        }
    }
    Ok(g)
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for s in [12, 6, 0] {
            out.push(((n >> s) & 63) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for s in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> s) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            k += 1;
            if k == 6 {
                out.push(acc + 63);
                acc = 0;
                k = 0;
            }
        }
    }
    if k > 0 {
        out.push((acc << (6 - k)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_records() {
        assert_eq!(parse_graph6("Bw").unwrap(), Graph::complete(3));
        assert_eq!(parse_graph6("A?").unwrap(), Graph::empty(2));
        assert_eq!(parse_graph6("C~").unwrap(), Graph::complete(4));
        assert_eq!(parse_graph6(">>graph6<<C~\n").unwrap(), Graph::complete(4));
        assert_eq!(to_graph6(&Graph::complete(3)), "Bw");
        assert_eq!(to_graph6(&Graph::empty(0)), "?");
    }

    #[test]
    fn errors_carry_offsets() {
        match parse_graph6("C~~") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("unexpected {other:?}"),
        }
        // K_3 uses 3 of 6 bits; "Bx" sets a padding bit.
        match parse_graph6("Bx") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("unexpected {other:?}"),
        }
        match parse_graph6("B ") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_graph6("").is_err());
    }

    #[test]
    fn long_header_roundtrip() {
        let g = Graph::cycle(70);
        let s = to_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }
}
