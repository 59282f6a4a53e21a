//! The `.chg` colored hypergraph text format.
//!
//! ```text
//! # comment lines start with '#'
//! n k r [multi]
//! v1 v2 ... vk color
//! ```
//!
//! Vertices and colors are 1-based and vertices on a line must be strictly
//! increasing. A k-set may repeat with different colors only when the header
//! carries the `multi` token; a repeated (k-set, color) pair is always an error.

use std::fmt::Write as _;

use crate::cycle::ColoredHypergraph;
use crate::error::{Error, Result};

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

pub fn parse(text: &str) -> Result<ColoredHypergraph> {
    let mut graph: Option<ColoredHypergraph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some(h) = graph.as_mut() else {
            let multi = match tokens.len() {
                3 => false,
                4 if tokens[3] == "multi" => true,
                _ => {
                    return parse_err(
                        line_no,
                        format!("expected header `n k r [multi]`, got `{line}`"),
                    )
                }
            };
            let mut nums = [0u32; 3];
            for (slot, tok) in nums.iter_mut().zip(&tokens) {
                *slot = tok
                    .parse()
                    .or_else(|_| parse_err(line_no, format!("bad header number `{tok}`")))?;
            }
            let h = ColoredHypergraph::new(nums[0], nums[1], nums[2], multi)
                .or_else(|e| parse_err(line_no, e.to_string()))?;
            graph = Some(h);
            continue;
        };
        if tokens.len() != h.k() as usize + 1 {
            return parse_err(
                line_no,
                format!(
                    "expected {} vertices and a color, got {} tokens",
                    h.k(),
                    tokens.len()
                ),
            );
        }
        let mut nums = Vec::with_capacity(tokens.len());
        for tok in &tokens {
            nums.push(
                tok.parse::<u32>()
                    .or_else(|_| parse_err(line_no, format!("bad number `{tok}`")))?,
            );
        }
        let color = nums.pop().unwrap_or_default();
        if nums.windows(2).any(|w| w[0] >= w[1]) {
            return parse_err(line_no, "vertices must be strictly increasing");
        }
        h.insert(&nums, color)
            .or_else(|e| parse_err(line_no, e.to_string()))?;
    }
    graph.ok_or(Error::Parse {
        line: 0,
        msg: "missing header line".into(),
    })
}

/// Serializes `h`, prefixing each entry of `comments` as a `#` line.
pub fn write(h: &ColoredHypergraph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(
        out,
        "{} {} {}{}",
        h.n(),
        h.k(),
        h.r(),
        if h.is_multi_color() { " multi" } else { "" }
    );
    for (e, colors) in h.edges() {
        for c in colors {
            for v in e {
                let _ = write!(out, "{v} ");
            }
            let _ = writeln!(out, "{c}");
        }
    }
    out
}
