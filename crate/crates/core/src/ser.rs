//! Serde helpers: sets and points serialize as their rendered expressions.

use serde::ser::SerializeSeq;
use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serializer;

use crate::setalg::SymbolicSet;

pub(crate) fn set<S: Serializer>(s: &SymbolicSet, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_str(s)
}

fn sets<'a, S, I>(sets: I, ser: S) -> Result<S::Ok, S::Error>
where
    S: Serializer,
    I: IntoIterator<Item = &'a SymbolicSet>,
{
    let items: Vec<String> = sets.into_iter().map(ToString::to_string).collect();
    let mut seq = ser.serialize_seq(Some(items.len()))?;
    for s in &items {
        seq.serialize_element(s)?;
    }
    seq.end()
}

pub(crate) fn set_vec<S: Serializer>(v: &[SymbolicSet], ser: S) -> Result<S::Ok, S::Error> {
    sets(v, ser)
}

pub(crate) fn opt_set<S: Serializer>(s: &Option<SymbolicSet>, ser: S) -> Result<S::Ok, S::Error> {
    match s {
        Some(s) => ser.collect_str(s),
        None => ser.serialize_none(),
    }
}

pub(crate) fn set_tree<S: Serializer>(
    v: &Arc<BTreeSet<SymbolicSet>>,
    ser: S,
) -> Result<S::Ok, S::Error> {
    sets(v.iter(), ser)
}
