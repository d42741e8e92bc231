use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::circuits::circuit::{Circuit, Fanin, Node};
use crate::error::{Error, Result};
use crate::rectangles::{RectFamily, RectPair};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase", deny_unknown_fields)]
enum NodeJson {
    X {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<usize>,
        edge: [usize; 2],
    },
    Y {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<usize>,
        oracle: usize,
    },
    Const {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<usize>,
        value: u8,
    },
    And {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<usize>,
        args: Vec<usize>,
    },
    Or {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<usize>,
        args: Vec<usize>,
    },
}

impl NodeJson {
    fn id(&self) -> Option<usize> {
        match self {
            NodeJson::X { id, .. }
            | NodeJson::Y { id, .. }
            | NodeJson::Const { id, .. }
            | NodeJson::And { id, .. }
            | NodeJson::Or { id, .. } => *id,
        }
    }
}

/// Embedded family; `n` and `k` default to the bundle's.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    rects: Vec<RectPair>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleJson {
    n: usize,
    k: usize,
    #[serde(default)]
    fanin: Fanin,
    nodes: Vec<NodeJson>,
    output: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<FamilyJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family_file: Option<String>,
}

/// A circuit together with its rectangle sidecar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle {
    pub n: usize,
    pub k: usize,
    pub circuit: Circuit,
    pub family: RectFamily,
}

impl Bundle {
    pub fn new(circuit: Circuit, family: RectFamily) -> Result<Self> {
        if circuit.n() != family.n {
            return Err(Error::input(format!("circuit has n={}, family has n={}", circuit.n(), family.n)));
        }
        let bundle = Bundle { n: family.n, k: family.k, circuit, family };
        bundle.check()?;
        Ok(bundle)
    }

    fn check(&self) -> Result<()> {
        if self.n < 2 || self.k < 2 {
            return Err(Error::range(format!("need n, k >= 2, got n={}, k={}", self.n, self.k)));
        }
        if let Some(&o) = self.circuit.oracle_ids().iter().find(|&&o| o >= self.family.len()) {
            return Err(Error::MissingOracle(o));
        }
        Ok(())
    }
}

fn schema_error<E: std::fmt::Display>(err: serde_path_to_error::Error<E>) -> Error {
    let path = err.path().to_string();
    Error::Schema { path, message: err.into_inner().to_string() }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(schema_error)
}

/// Parses a rectangle family file `{"n":…,"k":…,"rects":[…]}`.
pub fn parse_family(text: &str) -> Result<RectFamily> {
    parse_json::<RectFamily>(text)?.validate()
}

fn family_from_json(f: FamilyJson, n: usize, k: usize) -> Result<RectFamily> {
    if f.n.is_some_and(|fn_| fn_ != n) || f.k.is_some_and(|fk| fk != k) {
        return Err(Error::Schema {
            path: "family".into(),
            message: format!("family (n,k) disagrees with bundle ({n},{k})"),
        });
    }
    RectFamily::new(n, k, f.rects).validate()
}

fn build(raw: BundleJson, base: Option<&Path>) -> Result<Bundle> {
    let count = raw.nodes.len();
    let mut slots: Vec<Option<Node>> = vec![None; count];
    for (pos, node) in raw.nodes.into_iter().enumerate() {
        let id = node.id().unwrap_or(pos);
        let path = format!("nodes[{pos}].id");
        if id >= count {
            return Err(Error::Schema { path, message: format!("id {id} outside 0..{count}") });
        }
        if slots[id].is_some() {
            return Err(Error::Schema { path, message: format!("duplicate id {id}") });
        }
        slots[id] = Some(match node {
            NodeJson::X { edge: [a, b], .. } => {
                if a == b {
                    return Err(Error::Schema { path: format!("nodes[{pos}].edge"), message: "self loop".into() });
                }
                Node::X(a.min(b), a.max(b))
            }
            NodeJson::Y { oracle, .. } => Node::Y(oracle),
            NodeJson::Const { value, .. } => match value {
                0 => Node::Const(false),
                1 => Node::Const(true),
                v => {
                    return Err(Error::Schema {
                        path: format!("nodes[{pos}].value"),
                        message: format!("expected 0 or 1, got {v}"),
                    })
                }
            },
            NodeJson::And { args, .. } => Node::And(args),
            NodeJson::Or { args, .. } => Node::Or(args),
        });
    }
    let nodes: Vec<Node> = slots.into_iter().map(|s| s.expect("ids are a permutation")).collect();
    let circuit = Circuit::new(raw.n, nodes, raw.output, raw.fanin)?;

    let family = match (raw.family, raw.family_file) {
        (Some(_), Some(_)) => {
            return Err(Error::Schema { path: "family_file".into(), message: "both family and family_file given".into() })
        }
        (Some(f), None) => family_from_json(f, raw.n, raw.k)?,
        (None, Some(file)) => {
            let path = match base {
                Some(dir) => dir.join(&file),
                None => PathBuf::from(&file),
            };
            let text = std::fs::read_to_string(&path).map_err(|e| Error::io_at(&path, e))?;
            let f: FamilyJson = parse_json(&text)?;
            family_from_json(f, raw.n, raw.k)?
        }
        (None, None) => RectFamily::empty(raw.n, raw.k),
    };
    let bundle = Bundle { n: raw.n, k: raw.k, circuit, family };
    bundle.check()?;
    Ok(bundle)
}

/// Parses bundle text. A `family_file` is resolved against the working directory.
pub fn parse_bundle_str(text: &str) -> Result<Bundle> {
    build(parse_json(text)?, None)
}

/// Reads a bundle file; a `family_file` is resolved relative to it.
pub fn parse_circuit_bundle(path: impl AsRef<Path>) -> Result<Bundle> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io_at(path, e))?;
    build(parse_json(&text)?, path.parent())
}

/// Canonical JSON: nodes sorted by id, family embedded.
pub fn emit_bundle(bundle: &Bundle) -> String {
    let nodes = bundle
        .circuit
        .nodes()
        .iter()
        .enumerate()
        .map(|(id, node)| {
            let id = Some(id);
            match node {
                Node::X(i, j) => NodeJson::X { id, edge: [*i, *j] },
                Node::Y(o) => NodeJson::Y { id, oracle: *o },
                Node::Const(v) => NodeJson::Const { id, value: u8::from(*v) },
                Node::And(a) => NodeJson::And { id, args: a.clone() },
                Node::Or(a) => NodeJson::Or { id, args: a.clone() },
            }
        })
        .collect();
    let raw = BundleJson {
        n: bundle.n,
        k: bundle.k,
        fanin: bundle.circuit.fanin(),
        nodes,
        output: bundle.circuit.output(),
        family: Some(FamilyJson { n: None, k: None, rects: bundle.family.rects.clone() }),
        family_file: None,
    };
    serde_json::to_string_pretty(&raw).expect("bundle serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::circuit::CircuitBuilder;
    use crate::rectangles::SetExpr;

    fn sample() -> Bundle {
        let mut b = CircuitBuilder::new(5, Fanin::Binary);
        let (x, y) = (b.x(0, 1), b.y(0));
        let out = b.and(x, y);
        let c = b.finish(out).unwrap();
        let fam = RectFamily::new(5, 3, vec![RectPair::new(SetExpr::smallest_pair(0, 1), SetExpr::split_pair(0, 1))]);
        Bundle::new(c, fam).unwrap()
    }

    #[test]
    fn round_trip() {
        let b = sample();
        let text = emit_bundle(&b);
        let back = parse_bundle_str(&text).unwrap();
        assert_eq!(back, b);
        assert_eq!(emit_bundle(&back), text);
    }

    #[test]
    fn ids_may_be_shuffled_or_omitted() {
        let text = r#"{"n":4,"k":3,"nodes":[
            {"id":2,"op":"and","args":[0,1]},
            {"id":0,"op":"x","edge":[1,0]},
            {"id":1,"op":"x","edge":[1,2]}],"output":2}"#;
        let b = parse_bundle_str(text).unwrap();
        assert_eq!(b.circuit.node(0), &Node::X(0, 1));
        let text = r#"{"n":4,"k":3,"nodes":[{"op":"const","value":1}],"output":0}"#;
        assert_eq!(parse_bundle_str(text).unwrap().circuit.node(0), &Node::Const(true));
    }

    #[test]
    fn schema_errors_carry_paths() {
        let text = r#"{"n":4,"k":3,"nodes":[{"id":0,"op":"x","edge":[0,1]},{"id":1,"op":"nand","args":[0]}],"output":1}"#;
        match parse_bundle_str(text) {
            Err(Error::Schema { path, .. }) => assert!(path.starts_with("nodes[1]"), "{path}"),
            other => panic!("{other:?}"),
        }
        let text = r#"{"n":4,"k":3,"nodes":[],"output":0,"family":{"rects":[{"U":{"kind":"all"},"V":{"kind":"bogus"}}]}}"#;
        match parse_bundle_str(text) {
            Err(Error::Schema { path, .. }) => assert!(path.starts_with("family.rects[0].V"), "{path}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn structural_errors() {
        let cyc = r#"{"n":4,"k":3,"fanin":"unbounded","nodes":[{"id":0,"op":"and","args":[1]},{"id":1,"op":"or","args":[0]}],"output":0}"#;
        assert!(matches!(parse_bundle_str(cyc), Err(Error::Circuit(m)) if m.contains("cycle")));
        let dangling = r#"{"n":4,"k":3,"nodes":[{"id":0,"op":"and","args":[0,7]}],"output":0}"#;
        assert!(matches!(parse_bundle_str(dangling), Err(Error::Circuit(_))));
        let missing = r#"{"n":4,"k":3,"nodes":[{"id":0,"op":"y","oracle":2}],"output":0,"family":{"rects":[]}}"#;
        assert!(matches!(parse_bundle_str(missing), Err(Error::MissingOracle(2))));
        let dup = r#"{"n":4,"k":3,"nodes":[{"id":0,"op":"y","oracle":0},{"id":0,"op":"y","oracle":0}],"output":0}"#;
        assert!(matches!(parse_bundle_str(dup), Err(Error::Schema { .. })));
    }

    #[test]
    fn family_file_is_relative_to_bundle() {
        let dir = tempfile::tempdir().unwrap();
        let fam = r#"{"n":5,"k":3,"rects":[{"U":{"kind":"all"},"V":{"kind":"all"}}]}"#;
        std::fs::write(dir.path().join("fam.json"), fam).unwrap();
        let bundle = r#"{"n":5,"k":3,"nodes":[{"id":0,"op":"y","oracle":0}],"output":0,"family_file":"fam.json"}"#;
        let path = dir.path().join("b.json");
        std::fs::write(&path, bundle).unwrap();
        let b = parse_circuit_bundle(&path).unwrap();
        assert_eq!(b.family.len(), 1);
    }
}
