//! Text descriptors for towers, graphs and forms: the wire format the CLI
//! reads and writes. Directions serialize as normalized "[a:b]" pairs with
//! coordinates rendered as "0" for zero and "g<k>" for the k-th power of
//! the tower generator.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constructions::{quad_form_graph, FormGraph, QuadraticForm};
use crate::error::{Error, Result};
use crate::fields::{Element, FieldTower, SmallField, TowerDescriptor};
use crate::graph::{build_graph, PeisertGraph};
use crate::plane::{DirectionSet, TowerBasis};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDescriptor {
    pub tower: TowerDescriptor,
    pub beta_index: u32,
    pub directions: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormDescriptor {
    pub r: u32,
    pub dim: u32,
    /// upper-triangular coefficients (i, j, value) in field index encoding
    pub coeffs: Vec<(u32, u32, u32)>,
}

/// Either kind of graph the CLI can describe.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnyDescriptor {
    Peisert(GraphDescriptor),
    Form(FormDescriptor),
}

pub fn render_element(x: Element) -> String {
    match x.log() {
        None => "0".to_string(),
        Some(k) => format!("g{k}"),
    }
}

pub fn parse_element(t: &FieldTower, s: &str) -> Result<Element> {
    if s == "0" {
        return Ok(Element::ZERO);
    }
    let k: u32 = s
        .strip_prefix('g')
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::BadDescriptor(format!("bad element literal {s:?}")))?;
    if k >= t.q2() - 1 {
        return Err(Error::BadDescriptor(format!(
            "exponent {k} out of range for a field of order {}",
            t.q2()
        )));
    }
    Ok(Element(k + 1))
}

pub fn render_direction(d: crate::plane::ProjectivePoint) -> String {
    let (a, b) = d.coords();
    format!("{}:{}", render_element(a), render_element(b))
}

pub fn graph_descriptor(g: &PeisertGraph) -> GraphDescriptor {
    let basis = g.basis();
    GraphDescriptor {
        tower: basis.tower().descriptor(),
        beta_index: basis.beta().index(),
        directions: g
            .directions()
            .members()
            .iter()
            .map(|&d| render_direction(d))
            .collect(),
    }
}

pub fn build_from_descriptor(d: &GraphDescriptor) -> Result<PeisertGraph> {
    let tower = Arc::new(FieldTower::from_descriptor(&d.tower)?);
    let beta = Element(d.beta_index);
    if beta.index() >= tower.q2() {
        return Err(Error::BadDescriptor(format!(
            "beta_index {} out of range",
            d.beta_index
        )));
    }
    let basis = TowerBasis::with_beta(tower.clone(), beta)
        .map_err(|e| Error::BadDescriptor(format!("beta_index: {e}")))?;
    let mut dirs = Vec::with_capacity(d.directions.len());
    for s in &d.directions {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::BadDescriptor(format!("directions: bad pair {s:?}")))?;
        let (a, b) = (parse_element(&tower, a)?, parse_element(&tower, b)?);
        if !tower.in_subfield(a, tower.q())? || !tower.in_subfield(b, tower.q())? {
            return Err(Error::BadDescriptor(format!(
                "directions: coordinates of {s:?} must lie in F_q"
            )));
        }
        let normalized = basis
            .normalize(a, b)
            .map_err(|_| Error::BadDescriptor(format!("directions: {s:?} is the origin")))?;
        if (normalized.coords()) != (a, b) {
            return Err(Error::BadDescriptor(format!(
                "directions: {s:?} is not normalized"
            )));
        }
        dirs.push(normalized);
    }
    let ds = DirectionSet::new(basis, &dirs).map_err(|e| match e {
        Error::DuplicateDirections => Error::BadDescriptor("directions: duplicates".into()),
        other => other,
    })?;
    build_graph(ds)
}

pub fn form_descriptor(g: &FormGraph) -> FormDescriptor {
    let f = g.form();
    let mut coeffs = Vec::new();
    for i in 0..f.dim() {
        for j in i..f.dim() {
            let c = f.coeff(i, j);
            if c != 0 {
                coeffs.push((i as u32, j as u32, c));
            }
        }
    }
    FormDescriptor {
        r: f.field().order(),
        dim: f.dim() as u32,
        coeffs,
    }
}

pub fn build_form_from_descriptor(d: &FormDescriptor) -> Result<FormGraph> {
    let field = Arc::new(SmallField::new(d.r)?);
    for &(i, j, c) in &d.coeffs {
        if i > j || j >= d.dim || c >= d.r {
            return Err(Error::BadDescriptor(format!(
                "coeffs: bad triple ({i}, {j}, {c})"
            )));
        }
    }
    let form = QuadraticForm::new(
        field,
        d.dim as usize,
        d.coeffs
            .iter()
            .map(|&(i, j, c)| (i as usize, j as usize, c))
            .collect(),
    );
    quad_form_graph(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_tower;

    #[test]
    fn graph_descriptor_round_trip() {
        let tower = Arc::new(make_tower(3, 2, None).unwrap());
        let basis = TowerBasis::new(tower).unwrap();
        let ds = DirectionSet::from_indices(basis, &[0, 2, 5, 9]).unwrap();
        let g = build_graph(ds).unwrap();
        let d = graph_descriptor(&g);
        let g2 = build_from_descriptor(&d).unwrap();
        assert_eq!(g2.directions().mask(), g.directions().mask());
        let json = serde_json::to_string(&d).unwrap();
        let parsed: GraphDescriptor = serde_json::from_str(&json).unwrap();
        let g3 = build_from_descriptor(&parsed).unwrap();
        assert_eq!(g3.directions().mask(), g.directions().mask());
    }

    #[test]
    fn bad_descriptor_messages_cite_the_key() {
        let tower = Arc::new(make_tower(3, 1, None).unwrap());
        let basis = TowerBasis::new(tower).unwrap();
        let g = build_graph(DirectionSet::from_indices(basis, &[0, 1]).unwrap()).unwrap();
        let mut d = graph_descriptor(&g);
        d.directions[0] = "g1".into();
        match build_from_descriptor(&d) {
            Err(Error::BadDescriptor(msg)) => assert!(msg.contains("directions")),
            other => panic!("expected BadDescriptor, got {other:?}"),
        }
        let mut d2 = graph_descriptor(&g);
        d2.beta_index = 0;
        assert!(matches!(
            build_from_descriptor(&d2),
            Err(Error::BadDescriptor(_))
        ));
    }

    #[test]
    fn form_descriptor_round_trip() {
        let g = crate::constructions::vo_plus(2, 3).unwrap();
        let d = form_descriptor(&g);
        let g2 = build_form_from_descriptor(&d).unwrap();
        assert_eq!(g2.vertex_count(), g.vertex_count());
        assert_eq!(g2.degree(), g.degree());
    }
}
