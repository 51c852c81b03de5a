//! Text forms of points, permutations and words.
//!
//! * points: `e`, `g:<lit>`, `h:<lit>`
//! * permutations: whitespace-separated cycles `(e g:1 h:1) (g:2 g:3)`, or `()`
//! * words: whitespace-separated letters `G:<lit>`, `H:<lit>`, `PERM:<cycles>`

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::groups::Group;
use crate::pointed_union::{FinPerm, Point, Side};
use crate::pv_core::{Letter, PvContext};
use crate::{Error, Result};

fn parse_err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

fn relocate(e: Error, position: usize) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => parse_err(position, other.to_string()),
    }
}

/// Parses a point literal. The identity of either factor maps to the
/// basepoint.
pub fn parse_point(g: &Group, h: &Group, s: &str) -> Result<Point> {
    let s = s.trim();
    if s == "e" {
        return Ok(Point::Base);
    }
    let (side, group, lit) = if let Some(lit) = s.strip_prefix("g:") {
        (Side::G, g, lit)
    } else if let Some(lit) = s.strip_prefix("h:") {
        (Side::H, h, lit)
    } else {
        return Err(parse_err(0, format!("expected e, g:<lit> or h:<lit>, got {s:?}")));
    };
    Ok(Point::on(side, group, group.parse_element(lit)?))
}

/// Parses a product of disjoint cycles.
pub fn parse_perm(g: &Group, h: &Group, s: &str) -> Result<FinPerm> {
    let mut cycles = Vec::new();
    let mut rest = s;
    let mut offset = 0;
    loop {
        let trimmed = rest.trim_start();
        offset += rest.len() - trimmed.len();
        rest = trimmed;
        if rest.is_empty() {
            break;
        }
        if !rest.starts_with('(') {
            return Err(parse_err(offset, "expected '('"));
        }
        let close = rest.find(')').ok_or_else(|| parse_err(offset, "unclosed cycle"))?;
        let body = &rest[1..close];
        if body.contains('(') {
            return Err(parse_err(offset, "nested '('"));
        }
        let mut cycle = Vec::new();
        for tok in body.split_whitespace() {
            let pos = offset + 1 + (tok.as_ptr() as usize - body.as_ptr() as usize);
            cycle.push(parse_point(g, h, tok).map_err(|e| relocate(e, pos))?);
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        offset += close + 1;
        rest = &rest[close + 1..];
    }
    FinPerm::from_cycles(&cycles).map_err(|e| relocate(e, 0))
}

/// Parses a word of letters. Errors carry the byte offset of the offending
/// letter.
pub fn parse_word(ctx: &PvContext, s: &str) -> Result<Vec<Letter>> {
    let bytes = s.as_bytes();
    let mut i = 0;
    let mut letters = Vec::new();
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if s[i..].starts_with("PERM:") {
            i += "PERM:".len();
            // cycles may contain spaces; consume while the next token opens a cycle
            let body_start = i;
            loop {
                while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                if i >= bytes.len() || bytes[i] != b'(' {
                    break;
                }
                match s[i..].find(')') {
                    Some(k) => i += k + 1,
                    None => return Err(parse_err(i, "unclosed cycle")),
                }
            }
            let body = &s[body_start..i];
            if body.trim().is_empty() {
                return Err(parse_err(start, "PERM: needs cycles"));
            }
            let perm = parse_perm(ctx.g(), ctx.h(), body).map_err(|e| match e {
                Error::Parse { position, message } => parse_err(body_start + position, message),
                other => parse_err(start, other.to_string()),
            })?;
            letters.push(Letter::Perm(perm));
            continue;
        }
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        let tok = &s[start..i];
        let letter = if let Some(lit) = tok.strip_prefix("G:") {
            Letter::G(ctx.g().parse_element(lit).map_err(|e| relocate(e, start))?)
        } else if let Some(lit) = tok.strip_prefix("H:") {
            Letter::H(ctx.h().parse_element(lit).map_err(|e| relocate(e, start))?)
        } else {
            return Err(parse_err(start, format!("expected G:, H: or PERM:, got {tok:?}")));
        };
        letters.push(letter);
    }
    Ok(letters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Element;
    use alloc::vec;

    fn zz() -> PvContext {
        PvContext::new(Group::integers(), Group::integers()).unwrap()
    }

    #[test]
    fn points() {
        let z = Group::integers();
        assert_eq!(parse_point(&z, &z, "e").unwrap(), Point::Base);
        assert_eq!(parse_point(&z, &z, "g:-3").unwrap(), Point::G(Element::Int(-3)));
        assert_eq!(parse_point(&z, &z, "h:0").unwrap(), Point::Base);
        assert!(parse_point(&z, &z, "x:1").is_err());
    }

    #[test]
    fn perm_round_trip() {
        let z = Group::integers();
        let p = parse_perm(&z, &z, "(e g:1 h:1)  (g:2 h:-2)").unwrap();
        assert_eq!(p.to_string(), "(e g:1 h:1) (g:2 h:-2)");
        assert_eq!(parse_perm(&z, &z, "()").unwrap(), FinPerm::identity());
        assert_eq!(parse_perm(&z, &z, "").unwrap(), FinPerm::identity());
        assert!(matches!(parse_perm(&z, &z, "(e g:1"), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(parse_perm(&z, &z, "(e g:x)"), Err(Error::Parse { position: 3, .. })));
    }

    #[test]
    fn words() {
        let ctx = zz();
        let w = parse_word(&ctx, "G:1 PERM:(e g:1 h:1) (g:2 g:3 g:4) H:-1").unwrap();
        assert_eq!(w.len(), 3);
        assert!(matches!(&w[1], Letter::Perm(p) if p.support_len() == 6));
        assert_eq!(w[2], Letter::H(Element::Int(-1)));
        assert!(parse_word(&ctx, "").unwrap().is_empty());
        assert_eq!(
            parse_word(&ctx, "G:1 X:2"),
            Err(Error::Parse { position: 4, message: "expected G:, H: or PERM:, got \"X:2\"".into() })
        );
        assert!(matches!(parse_word(&ctx, "G:1 H:z"), Err(Error::Parse { position: 4, .. })));
        assert!(matches!(parse_word(&ctx, "PERM:(e g:1"), Err(Error::Parse { position: 5, .. })));
    }

    #[test]
    fn free_and_lattice_literals() {
        let ctx = PvContext::new(Group::free(2).unwrap(), Group::lattice(2).unwrap()).unwrap();
        let w = parse_word(&ctx, "G:aB H:1,-2 PERM:(g:a h:0,1 e)").unwrap();
        assert_eq!(w[0], Letter::G(Element::Word(vec![1, -2])));
        assert_eq!(w[1], Letter::H(Element::Tuple(vec![1, -2])));
    }
}
