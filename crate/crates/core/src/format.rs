//! JSON reading and writing for posets, lattices and chain posets, plus DOT export.

use serde::{Deserialize, Serialize};

use crate::chainspace::ChainPoset;
use crate::error::{Error, Result};
use crate::lattice::{upset_lattice, DistLattice};
use crate::poset::Poset;

/// A poset given by its size and covering pairs `[lower, upper]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub size: usize,
    pub covers: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A lattice either as the upsets of a poset or by its operation tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeJson {
    Upsets { poset: PosetJson },
    Tables { size: usize, meet: Vec<Vec<usize>>, join: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainPosetJson {
    pub base: PosetJson,
    pub variant: String,
    pub chains: Vec<Vec<usize>>,
    pub order: PosetJson,
}

impl PosetJson {
    pub fn from_poset(p: &Poset) -> Self {
        PosetJson {
            size: p.size(),
            covers: p.covers().into_iter().map(|(a, b)| [a, b]).collect(),
            labels: p.labels().map(<[String]>::to_vec),
        }
    }

    pub fn to_poset(&self) -> Result<Poset> {
        let covers: Vec<(usize, usize)> = self.covers.iter().map(|&[a, b]| (a, b)).collect();
        let p = Poset::from_covers(self.size, &covers)?;
        match &self.labels {
            Some(l) => p.with_labels(l.clone()),
            None => Ok(p),
        }
    }
}

impl LatticeJson {
    pub fn to_lattice(&self, upset_cap: usize) -> Result<DistLattice> {
        match self {
            LatticeJson::Upsets { poset } => Ok(upset_lattice(&poset.to_poset()?, upset_cap)?.lattice().clone()),
            LatticeJson::Tables { size, meet, join } => {
                if meet.len() != *size || join.len() != *size {
                    return Err(Error::Dimension { expected: *size, found: meet.len().min(join.len()) });
                }
                DistLattice::from_tables(meet.clone(), join.clone())
            }
        }
    }

    pub fn from_lattice(l: &DistLattice) -> Self {
        LatticeJson::Tables { size: l.size(), meet: l.meet_table().to_vec(), join: l.join_table().to_vec() }
    }
}

impl ChainPosetJson {
    pub fn from_space(s: &ChainPoset) -> Self {
        ChainPosetJson {
            base: PosetJson::from_poset(s.base()),
            variant: s.variant().to_string(),
            chains: s.chains().iter().map(|c| c.elements().to_vec()).collect(),
            order: PosetJson::from_poset(s.order()),
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed JSON: {e}")))
}

pub fn parse_poset(text: &str) -> Result<Poset> {
    parse::<PosetJson>(text)?.to_poset()
}

pub fn parse_lattice(text: &str, upset_cap: usize) -> Result<DistLattice> {
    parse::<LatticeJson>(text)?.to_lattice(upset_cap)
}

pub fn poset_to_json(p: &Poset) -> String {
    serde_json::to_string(&PosetJson::from_poset(p)).expect("plain data serializes")
}

/// Graphviz source for the Hasse diagram of `p`, drawn bottom-up.
pub fn to_dot(p: &Poset, name: &str) -> String {
    let mut out = format!("digraph \"{name}\" {{\n  rankdir=BT;\n");
    for x in 0..p.size() {
        out.push_str(&format!("  n{x} [label=\"{}\"];\n", p.label(x).replace('"', "\\\"")));
    }
    for (a, b) in p.covers() {
        out.push_str(&format!("  n{a} -> n{b};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_round_trip() {
        let p = crate::corpus::named("d4").unwrap();
        let back = parse_poset(&poset_to_json(&p)).unwrap();
        assert!(back.isomorphism(&p).is_some());
        assert_eq!(back.labels(), p.labels());
    }

    #[test]
    fn lattice_forms() {
        let l = parse_lattice(r#"{"poset":{"size":2,"covers":[[0,1]]}}"#, 64).unwrap();
        assert_eq!(l.size(), 3);
        let text = serde_json::to_string(&LatticeJson::from_lattice(&l)).unwrap();
        assert_eq!(parse_lattice(&text, 64).unwrap().size(), 3);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse_poset("{").unwrap_err().code(), "invalid");
        assert!(parse_poset(r#"{"size":2,"covers":[[0,1],[1,0]]}"#).is_err());
        assert!(parse_poset(r#"{"size":1,"covers":[[0,3]]}"#).is_err());
    }

    #[test]
    fn dot_output() {
        let dot = to_dot(&Poset::chain(2), "c");
        assert!(dot.contains("n0 -> n1;"));
    }
}
