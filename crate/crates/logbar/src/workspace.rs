//! Workspace files: a scene, named basepoints, paths, words, and elements in
//! one JSON document, plus an optional quadrature configuration.
//!
//! Paths in a workspace reference basepoints by name; loading resolves the
//! names and produces self-contained [`Path`] values.  `validate` checks the
//! scene, every basepoint, and every path, and collects certified violations
//! per object.

use crate::exact::ExactScalar;
use crate::geom::{Scene, TangentialBasepoint};
use crate::path::{validate_path, Path, Segment};
use crate::regint::QuadratureConfig;
use crate::words::{BarElement, BarWord, Letter};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum WorkspaceError {
    #[error("cannot read workspace: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse workspace JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("path {path:?} references unknown basepoint {name:?}")]
    UnknownBasepoint { path: String, name: String },
    #[error("cannot parse word {name:?}: {err}")]
    BadWord { name: String, err: String },
    #[error("cannot parse element {name:?}: {err}")]
    BadElement { name: String, err: String },
    #[error("unknown {kind} {name:?}")]
    Unknown { kind: &'static str, name: String },
}

#[derive(serde::Serialize, serde::Deserialize)]
struct PathJson {
    segments: Vec<Segment>,
    start: String,
    end: String,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct ElementTermJson {
    word: Vec<String>,
    coeff: ExactScalar,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct WorkspaceJson {
    scene: Scene,
    #[serde(default)]
    basepoints: BTreeMap<String, TangentialBasepoint>,
    #[serde(default)]
    paths: BTreeMap<String, PathJson>,
    #[serde(default)]
    words: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    elements: BTreeMap<String, Vec<ElementTermJson>>,
    #[serde(default)]
    config: Option<QuadratureConfig>,
}

/// A loaded, name-resolved workspace.
pub struct Workspace {
    pub scene: Scene,
    pub basepoints: BTreeMap<String, TangentialBasepoint>,
    pub paths: BTreeMap<String, Path>,
    pub words: BTreeMap<String, BarWord>,
    pub elements: BTreeMap<String, BarElement>,
    pub config: QuadratureConfig,
}

impl Workspace {
    pub fn from_json_str(s: &str) -> Result<Workspace, WorkspaceError> {
        let j: WorkspaceJson = serde_json::from_str(s)?;
        let mut paths = BTreeMap::new();
        for (name, p) in &j.paths {
            let resolve = |bp: &String| {
                j.basepoints
                    .get(bp)
                    .cloned()
                    .ok_or_else(|| WorkspaceError::UnknownBasepoint {
                        path: name.clone(),
                        name: bp.clone(),
                    })
            };
            paths.insert(
                name.clone(),
                Path {
                    segments: p.segments.clone(),
                    start: resolve(&p.start)?,
                    end: resolve(&p.end)?,
                },
            );
        }
        let mut words = BTreeMap::new();
        for (name, ls) in &j.words {
            let parsed: Result<Vec<Letter>, _> = ls.iter().map(|s| Letter::parse(s)).collect();
            words.insert(
                name.clone(),
                BarWord(parsed.map_err(|e| WorkspaceError::BadWord {
                    name: name.clone(),
                    err: e.to_string(),
                })?),
            );
        }
        let mut elements = BTreeMap::new();
        for (name, terms) in &j.elements {
            let mut el = BarElement::zero();
            for t in terms {
                let parsed: Result<Vec<Letter>, _> =
                    t.word.iter().map(|s| Letter::parse(s)).collect();
                let w = BarWord(parsed.map_err(|e| WorkspaceError::BadElement {
                    name: name.clone(),
                    err: e.to_string(),
                })?);
                el.add_term(w, t.coeff.clone());
            }
            elements.insert(name.clone(), el);
        }
        Ok(Workspace {
            scene: j.scene,
            basepoints: j.basepoints,
            paths,
            words,
            elements,
            config: j.config.unwrap_or_default(),
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Workspace, WorkspaceError> {
        Workspace::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Validate everything; returns a map object -> violation list (empty
    /// lists are omitted, so an empty map means the workspace is valid).
    pub fn validate(&self) -> BTreeMap<String, Vec<String>> {
        let mut out = BTreeMap::new();
        if let Err(e) = self.scene.validate() {
            out.insert("scene".to_string(), vec![e.to_string()]);
        }
        for (name, bp) in &self.basepoints {
            if let Err(e) = bp.validate(&self.scene) {
                out.insert(format!("basepoint:{name}"), vec![e.to_string()]);
            }
        }
        for (name, p) in &self.paths {
            match validate_path(p, &self.scene, self.config.tol_clearance) {
                Ok(report) => {
                    if !report.passed() {
                        out.insert(format!("path:{name}"), report.violations);
                    }
                }
                Err(e) => {
                    out.insert(format!("path:{name}"), vec![e.to_string()]);
                }
            }
        }
        for (name, w) in &self.words {
            for l in &w.0 {
                if let Letter::Dlog(i) = l {
                    if *i >= self.scene.punctures.len() {
                        out.entry(format!("word:{name}"))
                            .or_insert_with(Vec::new)
                            .push(format!("letter {l} outside the scene"));
                    }
                }
            }
        }
        out
    }

    pub fn path(&self, name: &str) -> Result<&Path, WorkspaceError> {
        self.paths.get(name).ok_or(WorkspaceError::Unknown {
            kind: "path",
            name: name.to_string(),
        })
    }

    pub fn word(&self, name: &str) -> Result<&BarWord, WorkspaceError> {
        self.words.get(name).ok_or(WorkspaceError::Unknown {
            kind: "word",
            name: name.to_string(),
        })
    }

    pub fn element(&self, name: &str) -> Result<&BarElement, WorkspaceError> {
        self.elements.get(name).ok_or(WorkspaceError::Unknown {
            kind: "element",
            name: name.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = include_str!("../fixtures/p1-011.json");

    #[test]
    fn fixture_loads_and_validates() {
        let ws = Workspace::from_json_str(FIXTURE).unwrap();
        let problems = ws.validate();
        assert!(problems.is_empty(), "{problems:?}");
        assert!(ws.paths.contains_key("dch"));
        assert!(ws.paths.contains_key("loop0"));
        assert_eq!(ws.word("z2").unwrap().len(), 2);
        assert!(ws.element("minus_z2").is_ok());
    }

    #[test]
    fn unknown_basepoint_is_an_error() {
        let bad = r#"{
            "scene": {"punctures": []},
            "paths": {"p": {"segments": [], "start": "nope", "end": "nope"}}
        }"#;
        assert!(matches!(
            Workspace::from_json_str(bad),
            Err(WorkspaceError::UnknownBasepoint { .. })
        ));
    }

    #[test]
    fn word_outside_scene_is_flagged() {
        let ws = Workspace::from_json_str(
            r#"{
            "scene": {"punctures": [{"re":"0","im":"0"}]},
            "words": {"w": ["dlog:5"]}
        }"#,
        )
        .unwrap();
        let problems = ws.validate();
        assert!(problems.contains_key("word:w"));
    }
}
