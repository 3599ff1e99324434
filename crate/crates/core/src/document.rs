//! Versioned JSON documents for graded endomorphisms.
//!
//! ```json
//! {
//!   "format": "qtrace-endo",
//!   "version": 1,
//!   "context": { "builtin": "sl-exterior", "n": 1, "max_grade": 2 },
//!   "basis": "wedge",
//!   "grades": [
//!     { "grade": 1, "entries": [ { "rows": [2], "cols": [2], "value": "1" } ] }
//!   ]
//! }
//! ```
//!
//! With `"basis": "component"` each grade carries a dense `"matrix"` of scalar
//! strings in the computed component basis instead of `"entries"`. A braiding
//! read from a file is named by `"braiding_sha256"` in place of
//! `"builtin"`/`"n"`. Only nonzero grades are written, in increasing order.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::Builtin;
use crate::endo::{BraidingSource, ContextDescriptor, EndoContext, EndoError, GradedEndo};
use crate::exterior::{ExteriorContext, ExteriorError, WedgeEndo, WedgeIndex};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub const ENDO_FORMAT: &str = "qtrace-endo";
pub const ENDO_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("document context {document} does not match {context}")]
    ContextMismatch { document: String, context: String },
    #[error(transparent)]
    Endo(#[from] EndoError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, DocumentError> {
    Err(DocumentError::Invalid(msg.into()))
}

/// The grade components carried by a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DocumentBody {
    /// `(grade, matrix)` in the component basis.
    Component(Vec<(usize, Matrix)>),
    /// Grade components in the wedge basis of the type-A exterior algebra.
    Wedge(Vec<WedgeEndo>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoDocument {
    pub context: ContextDescriptor,
    pub body: DocumentBody,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    format: String,
    version: u32,
    context: RawContext,
    basis: RawBasis,
    grades: Vec<RawGrade>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawContext {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    braiding_sha256: Option<String>,
    max_grade: usize,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum RawBasis {
    Component,
    Wedge,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrade {
    grade: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<Scalar>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    entries: Option<Vec<RawEntry>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    rows: Vec<usize>,
    cols: Vec<usize>,
    value: Scalar,
}

impl EndoDocument {
    /// Component-basis document of a graded endomorphism.
    pub fn from_graded(a: &GradedEndo) -> Self {
        let comps = a.support().into_iter().map(|p| (p, a.component(p).clone())).collect();
        EndoDocument { context: a.context().descriptor().clone(), body: DocumentBody::Component(comps) }
    }

    /// Wedge-basis document of a graded endomorphism over the type-A context.
    pub fn from_graded_wedge(ext: &ExteriorContext, a: &GradedEndo) -> Result<Self, DocumentError> {
        let mut grades = Vec::new();
        for p in a.support() {
            grades.push(ext.from_generic(a, p)?);
        }
        Ok(EndoDocument { context: a.context().descriptor().clone(), body: DocumentBody::Wedge(grades) })
    }

    /// Wedge-basis document from components; zero components are dropped.
    pub fn from_wedge(ext: &ExteriorContext, grades: Vec<WedgeEndo>) -> Result<Self, DocumentError> {
        let mut a = GradedEndo::zero(ext.context());
        for g in &grades {
            a = a.add(&ext.to_generic(g)?)?;
        }
        Self::from_graded_wedge(ext, &a)
    }

    pub fn to_json(&self) -> String {
        let context = match &self.context.source {
            BraidingSource::Builtin { kind, n } => RawContext {
                builtin: Some(kind.name().to_string()),
                n: Some(*n),
                braiding_sha256: None,
                max_grade: self.context.max_grade,
            },
            BraidingSource::Document { sha256 } => RawContext {
                builtin: None,
                n: None,
                braiding_sha256: Some(sha256.clone()),
                max_grade: self.context.max_grade,
            },
        };
        let (basis, grades) = match &self.body {
            DocumentBody::Component(comps) => (
                RawBasis::Component,
                comps.iter().map(|(p, m)| RawGrade { grade: *p, matrix: Some(m.to_rows()), entries: None }).collect(),
            ),
            DocumentBody::Wedge(comps) => (
                RawBasis::Wedge,
                comps
                    .iter()
                    .map(|w| RawGrade {
                        grade: w.grade(),
                        matrix: None,
                        entries: Some(
                            w.records()
                                .into_iter()
                                .map(|(r, c, value)| RawEntry { rows: r.indices().to_vec(), cols: c.indices().to_vec(), value })
                                .collect(),
                        ),
                    })
                    .collect(),
            ),
        };
        let raw = RawDocument { format: ENDO_FORMAT.into(), version: ENDO_VERSION, context, basis, grades };
        let mut s = serde_json::to_string_pretty(&raw).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn parse(src: &str) -> Result<Self, DocumentError> {
        let raw: RawDocument = serde_json::from_str(src)?;
        if raw.format != ENDO_FORMAT {
            return invalid(format!("unknown format {:?}", raw.format));
        }
        if raw.version != ENDO_VERSION {
            return invalid(format!("unsupported version {}", raw.version));
        }
        let c = raw.context;
        let source = match (c.builtin, c.n, c.braiding_sha256) {
            (Some(name), Some(n), None) => match Builtin::from_name(&name) {
                Some(kind) => BraidingSource::Builtin { kind, n },
                None => return invalid(format!("unknown builtin braiding {name:?}")),
            },
            (None, None, Some(sha256)) => BraidingSource::Document { sha256 },
            _ => return invalid("context needs either builtin and n, or braiding_sha256"),
        };
        let context = ContextDescriptor { source, max_grade: c.max_grade };
        let mut seen = Vec::new();
        for g in &raw.grades {
            if g.grade > context.max_grade {
                return invalid(format!("grade {} exceeds max_grade {}", g.grade, context.max_grade));
            }
            if seen.contains(&g.grade) {
                return invalid(format!("grade {} listed twice", g.grade));
            }
            seen.push(g.grade);
        }
        let mut grades = raw.grades;
        grades.sort_by_key(|g| g.grade);
        let body = match raw.basis {
            RawBasis::Component => {
                let mut comps = Vec::new();
                for g in grades {
                    let (Some(rows), None) = (g.matrix, g.entries.as_ref()) else {
                        return invalid(format!("grade {}: component basis needs a matrix", g.grade));
                    };
                    let m = Matrix::from_rows(rows).map_err(|e| DocumentError::Invalid(format!("grade {}: {e}", g.grade)))?;
                    if !m.is_square() {
                        return invalid(format!("grade {}: matrix is not square", g.grade));
                    }
                    if !m.is_zero() {
                        comps.push((g.grade, m));
                    }
                }
                DocumentBody::Component(comps)
            }
            RawBasis::Wedge => {
                let dim = match context.source {
                    BraidingSource::Builtin { kind: Builtin::SlExterior, n } => n + 1,
                    _ => return invalid("wedge basis requires the sl-exterior braiding"),
                };
                let mut comps = Vec::new();
                for g in grades {
                    let (Some(entries), None) = (g.entries, g.matrix.as_ref()) else {
                        return invalid(format!("grade {}: wedge basis needs entries", g.grade));
                    };
                    let mut recs = Vec::new();
                    for e in entries {
                        recs.push((WedgeIndex::new(e.rows)?, WedgeIndex::new(e.cols)?, e.value));
                    }
                    let w = WedgeEndo::from_records(dim, g.grade, recs.iter().map(|(r, c, v)| (r, c, v)))?;
                    if !w.matrix().is_zero() {
                        comps.push(w);
                    }
                }
                DocumentBody::Wedge(comps)
            }
        };
        Ok(EndoDocument { context, body })
    }

    /// The endomorphism in a context matching the document's descriptor.
    pub fn resolve(&self, ctx: &Arc<EndoContext>) -> Result<GradedEndo, DocumentError> {
        if *ctx.descriptor() != self.context {
            return Err(DocumentError::ContextMismatch {
                document: self.context.to_string(),
                context: ctx.descriptor().to_string(),
            });
        }
        let mut comps: Vec<Matrix> = (0..=ctx.max_grade()).map(|p| Matrix::zeros(ctx.dim(p), ctx.dim(p))).collect();
        match &self.body {
            DocumentBody::Component(list) => {
                for (p, m) in list {
                    comps[*p] = m.clone();
                }
            }
            DocumentBody::Wedge(list) => {
                let ext = ExteriorContext::with_context(ctx.clone())?;
                for w in list {
                    comps[w.grade()] = ext.to_generic(w)?.component(w.grade()).clone();
                }
            }
        }
        Ok(GradedEndo::from_components(ctx, comps)?)
    }

    /// Builds the context named by a builtin descriptor.
    pub fn builtin_context(&self) -> Result<Option<Arc<EndoContext>>, DocumentError> {
        match self.context.source {
            BraidingSource::Builtin { kind, n } => Ok(Some(EndoContext::for_descriptor(kind.build(n), &self.context)?)),
            BraidingSource::Document { .. } => Ok(None),
        }
    }

    /// Wedge components, converting from the component basis if needed.
    pub fn wedge_components(&self, ext: &ExteriorContext) -> Result<Vec<WedgeEndo>, DocumentError> {
        match &self.body {
            DocumentBody::Wedge(list) => Ok(list.clone()),
            DocumentBody::Component(_) => {
                let a = self.resolve(ext.context())?;
                a.support().into_iter().map(|p| Ok(ext.from_generic(&a, p)?)).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::EntryShape;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn component_round_trip() {
        let ctx = EndoContext::sl_exterior(1).unwrap();
        let mut rng = StdRng::seed_from_u64(1);
        let a = GradedEndo::random(&ctx, &mut rng, &EntryShape::default());
        let doc = EndoDocument::from_graded(&a);
        let json = doc.to_json();
        let back = EndoDocument::parse(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), json);
        assert_eq!(back.resolve(&ctx).unwrap(), a);
        let other = EndoContext::sl_exterior(2).unwrap();
        assert!(matches!(back.resolve(&other), Err(DocumentError::ContextMismatch { .. })));
    }

    #[test]
    fn wedge_document() {
        let src = r#"{
          "format": "qtrace-endo", "version": 1,
          "context": { "builtin": "sl-exterior", "n": 1, "max_grade": 2 },
          "basis": "wedge",
          "grades": [ { "grade": 1, "entries": [ { "rows": [2], "cols": [2], "value": "1" } ] } ]
        }"#;
        let doc = EndoDocument::parse(src).unwrap();
        let ctx = doc.builtin_context().unwrap().unwrap();
        let a = doc.resolve(&ctx).unwrap();
        assert_eq!(a.q_trace().unwrap(), "q^-2".parse::<Scalar>().unwrap());
        let ext = ExteriorContext::with_context(ctx).unwrap();
        let again = EndoDocument::from_graded_wedge(&ext, &a).unwrap();
        assert_eq!(EndoDocument::parse(&again.to_json()).unwrap(), again);
        assert_eq!(again, doc);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(EndoDocument::parse("{"), Err(DocumentError::Json(_))));
        let wrong_version = r#"{"format":"qtrace-endo","version":9,"context":{"builtin":"flip","n":1,"max_grade":2},"basis":"component","grades":[]}"#;
        assert!(matches!(EndoDocument::parse(wrong_version), Err(DocumentError::Invalid(_))));
        let wedge_on_flip = r#"{"format":"qtrace-endo","version":1,"context":{"builtin":"flip","n":1,"max_grade":2},"basis":"wedge","grades":[]}"#;
        assert!(matches!(EndoDocument::parse(wedge_on_flip), Err(DocumentError::Invalid(_))));
        let bad_scalar = r#"{"format":"qtrace-endo","version":1,"context":{"builtin":"flip","n":1,"max_grade":2},"basis":"component","grades":[{"grade":0,"matrix":[["q^"]]}]}"#;
        assert!(matches!(EndoDocument::parse(bad_scalar), Err(DocumentError::Json(_))));
        let not_increasing = r#"{"format":"qtrace-endo","version":1,"context":{"builtin":"sl-exterior","n":1,"max_grade":2},"basis":"wedge","grades":[{"grade":2,"entries":[{"rows":[2,1],"cols":[1,2],"value":"1"}]}]}"#;
        assert!(matches!(EndoDocument::parse(not_increasing), Err(DocumentError::Exterior(_))));
    }
}
