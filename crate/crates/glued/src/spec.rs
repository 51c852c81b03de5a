//! Group specifications and vertex literals as accepted on the command line.
//!
//! A group spec is either JSON (`{"type":"cyclic","n":5}`, `"integers"`), a
//! short name (`Z`, `Z/5`, `Z^2`, `(Z/2)^2`, `F2`, `S3`), or `@path` naming a
//! file that holds either form.

use glued_core::cube_complex::CubeVertex;
use glued_core::groups::{CayleyTable, Group};
use glued_core::text::parse_point;
use glued_core::PvContext;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic { n: u64 },
    CyclicPower { modulus: u64, dim: usize },
    Integers,
    Lattice { dim: usize },
    Free { rank: u8 },
    Symmetric { k: usize },
    Table { rows: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn build(&self) -> glued_core::Result<Group> {
        match self {
            GroupSpec::Cyclic { n } => Group::cyclic(*n),
            GroupSpec::CyclicPower { modulus, dim } => Group::cyclic_power(*modulus, *dim),
            GroupSpec::Integers => Ok(Group::integers()),
            GroupSpec::Lattice { dim } => Group::lattice(*dim),
            GroupSpec::Free { rank } => Group::free(*rank),
            GroupSpec::Symmetric { k } => Group::symmetric(*k),
            GroupSpec::Table { rows } => Ok(Group::table(CayleyTable::new(rows)?)),
        }
    }
}

fn bad(spec: &str, reason: impl Into<String>) -> CliError {
    CliError::GroupSpec { spec: spec.to_string(), reason: reason.into() }
}

fn read_file(path: &str) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_string(), source })
}

fn parse_short(s: &str) -> CliResult<GroupSpec> {
    let num = |t: &str| t.parse::<u64>().map_err(|_| bad(s, format!("{t:?} is not a number")));
    let spec = match s {
        "Z" | "integers" => GroupSpec::Integers,
        _ if s.starts_with("(Z/") => {
            let (m, d) = s[3..].split_once(")^").ok_or_else(|| bad(s, "expected (Z/m)^d"))?;
            GroupSpec::CyclicPower { modulus: num(m)?, dim: num(d)? as usize }
        }
        _ if s.starts_with("Z/") => GroupSpec::Cyclic { n: num(&s[2..])? },
        _ if s.starts_with("Z^") => GroupSpec::Lattice { dim: num(&s[2..])? as usize },
        _ if s.starts_with('F') => GroupSpec::Free { rank: num(&s[1..])? as u8 },
        _ if s.starts_with('S') => GroupSpec::Symmetric { k: num(&s[1..])? as usize },
        _ => return Err(bad(s, "unrecognized group name")),
    };
    Ok(spec)
}

/// Parses a group spec in any accepted form.
pub fn parse_group_spec(s: &str) -> CliResult<GroupSpec> {
    let s = s.trim();
    if let Some(path) = s.strip_prefix('@') {
        return parse_group_spec(&read_file(path)?);
    }
    if s.starts_with('{') || s.starts_with('"') {
        let value: serde_json::Value = serde_json::from_str(s).map_err(|e| bad(s, e.to_string()))?;
        return match value {
            serde_json::Value::String(name) => parse_short(&name),
            other => serde_json::from_value(other).map_err(|e| bad(s, e.to_string())),
        };
    }
    parse_short(s)
}

pub fn parse_group(s: &str) -> CliResult<Group> {
    Ok(parse_group_spec(s)?.build()?)
}

/// The glued-product context for a pair of (at least one infinite) specs.
pub fn parse_context(left: &str, right: &str) -> CliResult<PvContext> {
    Ok(PvContext::new(parse_group(left)?, parse_group(right)?)?)
}

/// A cube vertex as JSON: `{"removed": ["e", "g:1"], "added": ["h:2"]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexJson {
    #[serde(default)]
    pub removed: Vec<String>,
    #[serde(default)]
    pub added: Vec<String>,
}

impl VertexJson {
    pub fn from_vertex(v: &CubeVertex) -> VertexJson {
        VertexJson {
            removed: v.removed().iter().map(|p| p.to_string()).collect(),
            added: v.added().iter().map(|p| p.to_string()).collect(),
        }
    }

    pub fn to_vertex(&self, ctx: &PvContext) -> CliResult<CubeVertex> {
        let points = |lits: &[String]| -> CliResult<Vec<_>> {
            lits.iter()
                .map(|lit| {
                    let p = parse_point(ctx.g(), ctx.h(), lit)?;
                    if ctx.is_valid_point(&p) {
                        Ok(p)
                    } else {
                        Err(CliError::Vertex(format!("{lit} is not a point")))
                    }
                })
                .collect()
        };
        CubeVertex::new(points(&self.removed)?, points(&self.added)?).map_err(|e| CliError::Vertex(e.to_string()))
    }
}

/// Parses a vertex given inline as JSON or as `@path`.
pub fn parse_vertex(ctx: &PvContext, s: &str) -> CliResult<CubeVertex> {
    let text = match s.trim().strip_prefix('@') {
        Some(path) => read_file(path)?,
        None => s.to_string(),
    };
    let json: VertexJson = serde_json::from_str(&text).map_err(|e| CliError::Vertex(e.to_string()))?;
    json.to_vertex(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use glued_core::pointed_union::Point;
    use glued_core::Element;

    #[test]
    fn spec_forms() {
        assert_eq!(parse_group_spec(r#"{"type":"cyclic","n":5}"#).unwrap(), GroupSpec::Cyclic { n: 5 });
        assert_eq!(parse_group_spec(r#""integers""#).unwrap(), GroupSpec::Integers);
        assert_eq!(parse_group_spec("Z/4").unwrap(), GroupSpec::Cyclic { n: 4 });
        assert_eq!(parse_group_spec("(Z/2)^2").unwrap(), GroupSpec::CyclicPower { modulus: 2, dim: 2 });
        assert_eq!(parse_group_spec("Z^3").unwrap(), GroupSpec::Lattice { dim: 3 });
        assert_eq!(parse_group_spec("F2").unwrap(), GroupSpec::Free { rank: 2 });
        assert_eq!(parse_group("S3").unwrap().order(), Some(6));
        let t = parse_group(r#"{"type":"table","rows":[[0,1],[1,0]]}"#).unwrap();
        assert_eq!(t.order(), Some(2));
        assert!(parse_group("Q").is_err());
        assert!(parse_group(r#"{"type":"cyclic"}"#).is_err());
        assert!(matches!(parse_group(r#"{"type":"table","rows":[[0,0],[1,0]]}"#), Err(CliError::Core(_))));
    }

    #[test]
    fn spec_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        std::fs::write(&path, r#"{"type":"lattice","dim":2}"#).unwrap();
        let g = parse_group(&format!("@{}", path.display())).unwrap();
        assert_eq!(g.name(), "Z^2");
        assert!(matches!(parse_group("@/nonexistent/x.json"), Err(CliError::Io { .. })));
    }

    #[test]
    fn vertices() {
        let ctx = parse_context("Z", "Z").unwrap();
        let v = parse_vertex(&ctx, r#"{"removed":["e","g:1"],"added":["h:-2"]}"#).unwrap();
        assert_eq!(v.s_invariant(), -1);
        assert!(v.added().contains(&Point::H(Element::Int(-2))));
        assert_eq!(VertexJson::from_vertex(&v).to_vertex(&ctx).unwrap(), v);
        assert!(parse_vertex(&ctx, r#"{"removed":["h:1"]}"#).is_err());
        assert!(parse_vertex(&ctx, r#"{"added":["h:0"]}"#).is_err());
        assert!(parse_vertex(&ctx, r#"{"bogus":[]}"#).is_err());
    }
}
