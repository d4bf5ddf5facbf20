//! graph6 text encoding of undirected graphs (McKay's format).
//!
//! The format stores the vertex count followed by the upper triangle of the
//! adjacency matrix in column order, six bits per printable byte (offset 63),
//! zero-padded to a byte boundary. An optional `>>graph6<<` header is
//! accepted on input and never emitted.

use thiserror::Error;

use crate::graph::Graph;

const HEADER: &str = ">>graph6<<";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("malformed header: expected '>>graph6<<'")]
    MalformedHeader,
    #[error("empty graph6 string")]
    Empty,
    #[error("invalid byte {0:#x}: graph6 bytes lie in 63..=126")]
    InvalidByte(u8),
    #[error("truncated size field")]
    TruncatedSize,
    #[error("vertex count {0} too large for this implementation")]
    TooLarge(u64),
    #[error("bit field length mismatch: expected {expected} bytes for n={n}, found {found}")]
    LengthMismatch { n: usize, expected: usize, found: usize },
    #[error("non-zero padding bits")]
    BadPadding,
}

fn sextet(b: u8) -> Result<u64, Graph6Error> {
    if !(63..=126).contains(&b) {
        return Err(Graph6Error::InvalidByte(b));
    }
    Ok(u64::from(b - 63))
}

/// Decodes the size field, returning `(n, bytes_consumed)`.
fn parse_size(bytes: &[u8]) -> Result<(usize, usize), Graph6Error> {
    let first = *bytes.first().ok_or(Graph6Error::Empty)?;
    if first != 126 {
        return Ok((sextet(first)? as usize, 1));
    }
    // '~' prefix: 18-bit form, '~~' prefix: 36-bit form
    let second = *bytes.get(1).ok_or(Graph6Error::TruncatedSize)?;
    let (skip, count) = if second == 126 { (2, 6) } else { (1, 3) };
    if bytes.len() < skip + count {
        return Err(Graph6Error::TruncatedSize);
    }
    let mut n: u64 = 0;
    for &b in &bytes[skip..skip + count] {
        n = n << 6 | sextet(b)?;
    }
    if n > 100_000 {
        // adjacency storage is dense; anything bigger is a mistake here
        return Err(Graph6Error::TooLarge(n));
    }
    Ok((n as usize, skip + count))
}

fn size_field(n: usize) -> Vec<u8> {
    if n <= 62 {
        vec![n as u8 + 63]
    } else if n <= 258_047 {
        let mut out = vec![126];
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
        out
    } else {
        let mut out = vec![126, 126];
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
        out
    }
}

pub fn parse_graph6(text: &str) -> Result<Graph, Graph6Error> {
    let text = text.trim_end_matches(['\n', '\r']);
    let text = if let Some(rest) = text.strip_prefix(HEADER) {
        rest
    } else if text.starts_with(">>") {
        return Err(Graph6Error::MalformedHeader);
    } else {
        text
    };
    let bytes = text.as_bytes();
    let (n, consumed) = parse_size(bytes)?;
    let body = &bytes[consumed..];

    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if body.len() != expected {
        return Err(Graph6Error::LengthMismatch { n, expected, found: body.len() });
    }

    let mut g = Graph::empty(n);
    let mut pos = 0usize; // bit cursor over the upper triangle, column order
    'outer: for j in 1..n {
        for i in 0..j {
            let b = sextet(body[pos / 6])?;
            if b >> (5 - pos % 6) & 1 != 0 {
                g.set_edge(i, j, true);
            }
            pos += 1;
            if pos == nbits {
                break 'outer;
            }
        }
    }
    // canonical padding is all-zero
    if nbits % 6 != 0 {
        let last = sextet(body[expected - 1])?;
        let pad = 6 - nbits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(Graph6Error::BadPadding);
        }
    }
    Ok(g)
}

pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = size_field(n);
    let nbits = n * n.saturating_sub(1) / 2;
    let mut acc: u8 = 0;
    let mut filled = 0usize;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    debug_assert_eq!(out.len() - size_field(n).len(), nbits.div_ceil(6));
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_known_string() {
        // "D?{": n = 'D'-63 = 5. Bits, column order (0,1),(0,2),(1,2),(0,3),
        // (1,3),(2,3) | (0,4),(1,4),(2,4),(3,4),pad,pad:
        // '?' = 000000, '{' = 111100 -> edges {0,4},{1,4},{2,4},{3,4}.
        let g = parse_graph6("D?{").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edges(), vec![(0, 4), (1, 4), (2, 4), (3, 4)]);
        assert_eq!(write_graph6(&g), "D?{");
    }

    #[test]
    fn single_vertex() {
        assert_eq!(write_graph6(&Graph::empty(1)), "@");
        assert_eq!(parse_graph6("@").unwrap(), Graph::empty(1));
    }

    #[test]
    fn header_accepted_and_bad_header_rejected() {
        assert_eq!(parse_graph6(">>graph6<<D?{").unwrap().n(), 5);
        assert_eq!(parse_graph6(">>grph6<<D?{"), Err(Graph6Error::MalformedHeader));
    }

    #[test]
    fn error_cases() {
        assert_eq!(parse_graph6(""), Err(Graph6Error::Empty));
        // truncated bit field for n=5
        assert!(matches!(parse_graph6("D?"), Err(Graph6Error::LengthMismatch { .. })));
        // trailing junk
        assert!(matches!(parse_graph6("D?{{"), Err(Graph6Error::LengthMismatch { .. })));
        // long-form size cut short
        assert_eq!(parse_graph6("~A"), Err(Graph6Error::TruncatedSize));
        assert!(matches!(parse_graph6("D?\x20"), Err(Graph6Error::InvalidByte(_))));
    }

    #[test]
    fn long_size_form() {
        let g = Graph::path(63);
        let s = write_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn roundtrip_structured_graphs() {
        for g in [
            Graph::empty(0),
            Graph::empty(2),
            Graph::complete(7),
            Graph::cycle(5),
            Graph::star(9),
            Graph::path(62),
        ] {
            assert_eq!(parse_graph6(&write_graph6(&g)).unwrap(), g);
        }
    }
}
