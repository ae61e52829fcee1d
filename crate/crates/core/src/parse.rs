//! Small tokenizing helpers shared by the text formats.

use std::str::FromStr;

use crate::error::{Error, Result};

/// Whitespace-separated tokens with their 1-based character columns.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    for (ci, &(bi, c)) in chars.iter().enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(ci),
            (true, Some(s)) => {
                out.push((s + 1, &line[chars[s].0..bi]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[chars[s].0..]));
    }
    out
}

pub(crate) fn number<T: FromStr>(line_no: usize, col: usize, tok: &str) -> Result<T> {
    tok.parse::<T>()
        .map_err(|_| Error::parse(line_no, col, format!("expected a number, found `{tok}`")))
}

pub(crate) fn numbers<T: FromStr>(line_no: usize, line: &str) -> Result<Vec<T>> {
    tokens(line)
        .into_iter()
        .map(|(col, tok)| number(line_no, col, tok))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_are_one_based() {
        assert_eq!(tokens("  ab c\td"), vec![(3, "ab"), (6, "c"), (8, "d")]);
        assert!(tokens("   ").is_empty());
    }
}
