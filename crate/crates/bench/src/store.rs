use std::fs;
use std::path::Path;

use ltlsketch::ltl::{BinaryOp, UnaryOp};
use ltlsketch::text::{format_dag, format_formula, parse_formula, parse_ltl, read_sample, write_sample};
use serde::{Deserialize, Serialize};

use crate::generate::{Provenance, SketchKind};
use crate::suite::Instance;
use crate::BenchError;

pub const MANIFEST: &str = "manifest.json";

#[derive(Serialize, Deserialize)]
struct Entry {
    id: String,
    kind: String,
    intended: String,
    /// Formula text for type0, operator symbol for type12.
    provenance: String,
    seed: u64,
}

/// Writes `<id>.sketch`, `<id>.sample` and a manifest into `dir`.
pub fn save_instances(dir: &Path, instances: &[Instance]) -> Result<(), BenchError> {
    fs::create_dir_all(dir)?;
    let mut entries = Vec::new();
    for i in instances {
        fs::write(dir.join(format!("{}.sketch", i.id)), format_formula(&i.sketch) + "\n")?;
        fs::write(dir.join(format!("{}.sample", i.id)), write_sample(&i.sample))?;
        let provenance = match &i.provenance {
            Provenance::Formula(f) => format_dag(f),
            Provenance::Unary(op) => op.symbol().into(),
            Provenance::Binary(op) => op.symbol().into(),
        };
        entries.push(Entry {
            id: i.id.clone(),
            kind: i.kind.as_str().into(),
            intended: format_dag(&i.intended),
            provenance,
            seed: i.seed,
        });
    }
    fs::write(dir.join(MANIFEST), serde_json::to_string_pretty(&entries)?)?;
    Ok(())
}

pub fn load_instances(dir: &Path) -> Result<Vec<Instance>, BenchError> {
    let bad = |what: String| BenchError::Manifest(what);
    let entries: Vec<Entry> = serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST))?)?;
    entries
        .into_iter()
        .map(|e| {
            let kind = SketchKind::parse(&e.kind).ok_or_else(|| bad(format!("{}: unknown kind {}", e.id, e.kind)))?;
            let parse_err = |file: &str, err: ltlsketch::text::SyntaxError| bad(format!("{}: {file}: {err}", e.id));
            let intended = parse_ltl(&e.intended).map_err(|err| parse_err("intended", err))?;
            let sketch_text = fs::read_to_string(dir.join(format!("{}.sketch", e.id)))?;
            let sketch = parse_formula(&sketch_text).map_err(|err| parse_err("sketch", err))?;
            let sample_text = fs::read_to_string(dir.join(format!("{}.sample", e.id)))?;
            let sample = read_sample(&sample_text).map_err(|err| parse_err("sample", err))?;
            let unary = UnaryOp::ALL.into_iter().find(|op| op.symbol() == e.provenance);
            let binary = BinaryOp::ALL.into_iter().find(|op| op.symbol() == e.provenance);
            let provenance = match (kind, unary, binary) {
                (SketchKind::Type0, _, _) => {
                    Provenance::Formula(parse_ltl(&e.provenance).map_err(|err| parse_err("provenance", err))?)
                }
                (SketchKind::Type12, Some(op), _) => Provenance::Unary(op),
                (SketchKind::Type12, _, Some(op)) => Provenance::Binary(op),
                _ => return Err(bad(format!("{}: unknown operator {}", e.id, e.provenance))),
            };
            Ok(Instance { id: e.id, kind, intended, sketch, sample, provenance, seed: e.seed })
        })
        .collect()
}
