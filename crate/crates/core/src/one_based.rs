//! `serialize_with` helpers that print 0-based vertex numbers 1-based.

use serde::ser::{SerializeSeq, Serializer};

pub fn vertex<S: Serializer>(v: &usize, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(*v as u64 + 1)
}

pub fn opt_vertex<S: Serializer>(v: &Option<usize>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&(v + 1)),
        None => s.serialize_none(),
    }
}

pub fn vertices<S: Serializer>(vs: &[usize], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(vs.len()))?;
    for v in vs {
        seq.serialize_element(&(v + 1))?;
    }
    seq.end()
}

pub fn pairs<S: Serializer>(ps: &[(usize, usize)], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(ps.len()))?;
    for (i, j) in ps {
        seq.serialize_element(&[i + 1, j + 1])?;
    }
    seq.end()
}

pub fn vertex_sets<S: Serializer>(sets: &[Vec<usize>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(sets.len()))?;
    for set in sets {
        let shifted: Vec<usize> = set.iter().map(|v| v + 1).collect();
        seq.serialize_element(&shifted)?;
    }
    seq.end()
}
