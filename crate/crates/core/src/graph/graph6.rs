use super::{Graph, GraphError, Node};

fn err(msg: impl Into<String>) -> GraphError {
    GraphError::Graph6(msg.into())
}

/// Decodes one graph6 line; the graph must be connected.
pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    parse_graph6_with(text, false)
}

/// Decodes one graph6 line. An optional `>>graph6<<` header and a single
/// trailing newline are accepted.
pub fn parse_graph6_with(text: &str, allow_disconnected: bool) -> Result<Graph, GraphError> {
    let line = text.strip_prefix(">>graph6<<").unwrap_or(text);
    let line = line
        .strip_suffix('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .unwrap_or(line);
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(err("empty input"));
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(format!("byte {b:#04x} at position {i} is outside 63..=126")));
        }
    }
    let (n, body) = decode_size(bytes)?;
    let bits_needed = n * n.saturating_sub(1) / 2;
    let chars_needed = bits_needed.div_ceil(6);
    if body.len() < chars_needed {
        return Err(err(format!(
            "expected {chars_needed} adjacency characters, found {}",
            body.len()
        )));
    }
    if body.len() > chars_needed {
        return Err(err("trailing data after adjacency bits"));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut edges = Vec::new();
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if bit(k) {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    if (k..chars_needed * 6).any(bit) {
        return Err(err("nonzero padding bits"));
    }
    if n == 0 {
        return Err(GraphError::Empty);
    }
    if allow_disconnected {
        Graph::new_allow_disconnected(n, &edges)
    } else {
        Graph::new(n, &edges)
    }
}

fn decode_size(bytes: &[u8]) -> Result<(usize, &[u8]), GraphError> {
    let val = |s: &[u8]| s.iter().fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize);
    if bytes[0] != 126 {
        return Ok((val(&bytes[..1]), &bytes[1..]));
    }
    if bytes.len() >= 2 && bytes[1] == 126 {
        if bytes.len() < 8 {
            return Err(err("truncated 8-byte size header"));
        }
        return Ok((val(&bytes[2..8]), &bytes[8..]));
    }
    if bytes.len() < 4 {
        return Err(err("truncated 4-byte size header"));
    }
    Ok((val(&bytes[1..4]), &bytes[4..]))
}

/// Encodes a graph as a graph6 line without header or newline.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    let push_size = |out: &mut Vec<u8>, groups: usize| {
        for i in (0..groups).rev() {
            out.push(63 + ((n >> (6 * i)) & 63) as u8);
        }
    };
    if n <= 62 {
        out.push(63 + n as u8);
    } else if n <= 258_047 {
        out.push(126);
        push_size(&mut out, 3);
    } else {
        out.extend([126, 126]);
        push_size(&mut out, 6);
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = acc << 1 | u8::from(g.has_edge(u as Node, v as Node));
            filled += 1;
            if filled == 6 {
                out.push(63 + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(63 + (acc << (6 - filled)));
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}
