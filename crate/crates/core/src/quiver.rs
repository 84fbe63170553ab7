//! Finite quivers, paths, and admissible relations.
//!
//! Composition convention, fixed once for the whole crate: a path lists its
//! arrows in application order, first-applied arrow first. The written
//! product `b.a` therefore means "a first, then b", and a serialized path
//! `["a", "b"]` denotes that same composite.

use crate::error::AlgebraError;
use crate::scalar::ExactScalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Arrows are given as `(name, from, to)` with vertex names.
    pub fn new(
        vertices: Vec<String>,
        arrows: Vec<(String, String, String)>,
    ) -> Result<Quiver, AlgebraError> {
        let mut seen = std::collections::HashSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(AlgebraError::DuplicateName(v.clone()));
            }
        }
        let index = |name: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| AlgebraError::UnknownVertex(name.to_string()))
        };
        let mut out = Vec::with_capacity(arrows.len());
        let mut seen_arrows = std::collections::HashSet::new();
        for (name, from, to) in arrows {
            if !seen_arrows.insert(name.clone()) {
                return Err(AlgebraError::DuplicateName(name));
            }
            out.push(Arrow {
                from: index(&from)?,
                to: index(&to)?,
                name,
            });
        }
        Ok(Quiver {
            vertices,
            arrows: out,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| AlgebraError::UnknownVertex(name.to_string()))
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| AlgebraError::UnknownArrow(name.to_string()))
    }

    pub fn out_arrows(&self, v: usize) -> impl Iterator<Item = (usize, &Arrow)> {
        self.arrows
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.from == v)
    }

    pub fn in_arrows(&self, v: usize) -> impl Iterator<Item = (usize, &Arrow)> {
        self.arrows
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.to == v)
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.arrows.iter().all(|a| a.from != v)
    }

    /// All composable paths of the given length, in generation order:
    /// trivial paths by vertex order, longer paths by (parent, arrow) order.
    pub fn paths_of_length(&self, len: usize) -> Vec<Path> {
        let mut current: Vec<Path> = (0..self.vertices.len()).map(Path::trivial).collect();
        for _ in 0..len {
            let mut next = Vec::new();
            for p in &current {
                let end = p.target(self);
                for (ai, _) in self.out_arrows(end) {
                    let mut arrows = p.arrows.clone();
                    arrows.push(ai);
                    next.push(Path {
                        source: p.source,
                        arrows,
                    });
                }
            }
            current = next;
        }
        current
    }
}

/// A composable sequence of arrows, first-applied arrow first. A trivial
/// path has no arrows and records only its vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub source: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path {
            source: v,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn target(&self, q: &Quiver) -> usize {
        self.arrows
            .last()
            .map(|&a| q.arrow(a).to)
            .unwrap_or(self.source)
    }

    pub fn is_composable(&self, q: &Quiver) -> bool {
        let mut at = self.source;
        for &a in &self.arrows {
            if q.arrow(a).from != at {
                return false;
            }
            at = q.arrow(a).to;
        }
        true
    }

    /// `other` after `self` (self applied first); None if endpoints differ.
    pub fn then(&self, other: &Path, q: &Quiver) -> Option<Path> {
        if self.target(q) != other.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            source: self.source,
            arrows,
        })
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e_{}", q.vertex_name(self.source))
        } else {
            self.arrows
                .iter()
                .map(|&a| q.arrow(a).name.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

/// One term of a relation: a path with a nonzero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PathExpr {
    pub coeff: ExactScalar,
    pub path: Path,
}

/// A formal sum of parallel paths of length >= 2, the shape of an admissible
/// relation generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    terms: Vec<PathExpr>,
}

impl Relation {
    pub fn new(quiver: &Quiver, terms: Vec<PathExpr>) -> Result<Relation, AlgebraError> {
        if terms.is_empty() {
            return Err(AlgebraError::InadmissibleRelation(
                "relation has no terms".into(),
            ));
        }
        let (src, tgt) = {
            let p = &terms[0].path;
            (p.source, p.target(quiver))
        };
        for t in &terms {
            if t.coeff.is_zero() {
                return Err(AlgebraError::InadmissibleRelation(
                    "zero coefficient in relation".into(),
                ));
            }
            if !t.path.is_composable(quiver) {
                return Err(AlgebraError::InadmissibleRelation(format!(
                    "path {} is not composable",
                    t.path.display(quiver)
                )));
            }
            if t.path.len() < 2 {
                return Err(AlgebraError::InadmissibleRelation(format!(
                    "path {} has length < 2",
                    t.path.display(quiver)
                )));
            }
            if t.path.source != src || t.path.target(quiver) != tgt {
                return Err(AlgebraError::InadmissibleRelation(
                    "relation terms are not parallel".into(),
                ));
            }
        }
        Ok(Relation { terms })
    }

    pub fn terms(&self) -> &[PathExpr] {
        &self.terms
    }

    pub fn source(&self) -> usize {
        self.terms[0].path.source
    }

    pub fn target(&self, q: &Quiver) -> usize {
        self.terms[0].path.target(q)
    }

    pub fn min_len(&self) -> usize {
        self.terms.iter().map(|t| t.path.len()).min().unwrap()
    }

    /// The single path of a one-term relation of length two, if this is one.
    pub fn as_quadratic_monomial(&self) -> Option<&Path> {
        match self.terms.as_slice() {
            [t] if t.path.len() == 2 => Some(&t.path),
            _ => None,
        }
    }
}
